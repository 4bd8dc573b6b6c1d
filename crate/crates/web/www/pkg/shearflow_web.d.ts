/* tslint:disable */
/* eslint-disable */

/**
 * Scalar curves of the constitutive law on `[0, t_max]`.
 */
export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly phi: Float64Array;
    readonly phi_conjugate: Float64Array;
    readonly phi_shifted: Float64Array;
    /**
     * Shear stress magnitude `ν (δ + t)^{p−2} t`.
     */
    readonly stress: Float64Array;
    readonly t: Float64Array;
}

/**
 * Exponents and predicted convergence rates on a grid of `p`.
 */
export class Rates {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly p: Float64Array;
    readonly rate_q_ell: Float64Array;
    readonly rate_q_s: Float64Array;
    readonly rate_v: Float64Array;
}

/**
 * Discrete solution on the finest level plus the error history.
 */
export class Solution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly e_q_s: Float64Array;
    readonly e_v: Float64Array;
    readonly h: Float64Array;
    readonly newton_iters: Uint32Array;
    readonly pressure: Float64Array;
    /**
     * Vertex indices, three per triangle.
     */
    readonly triangles: Uint32Array;
    /**
     * Velocity at the vertices, interleaved like `vertices`.
     */
    readonly velocity: Float64Array;
    /**
     * Vertex coordinates, `[x0, y0, x1, y1, ...]`.
     */
    readonly vertices: Float64Array;
}

export function n_function_curves(p: number, delta: number, nu: number, shift: number, t_max: number, n: number): Curves;

export function predicted_rates(p_min: number, p_max: number, n: number): Rates;

export function solve(element: string, _case: number, p: number, level: number): Solution;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly __wbg_rates_free: (a: number, b: number) => void;
    readonly __wbg_solution_free: (a: number, b: number) => void;
    readonly curves_phi: (a: number) => [number, number];
    readonly curves_phi_conjugate: (a: number) => [number, number];
    readonly curves_phi_shifted: (a: number) => [number, number];
    readonly curves_stress: (a: number) => [number, number];
    readonly curves_t: (a: number) => [number, number];
    readonly n_function_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly predicted_rates: (a: number, b: number, c: number) => [number, number, number];
    readonly rates_p: (a: number) => [number, number];
    readonly rates_rate_q_ell: (a: number) => [number, number];
    readonly rates_rate_q_s: (a: number) => [number, number];
    readonly rates_rate_v: (a: number) => [number, number];
    readonly solution_e_q_s: (a: number) => [number, number];
    readonly solution_e_v: (a: number) => [number, number];
    readonly solution_h: (a: number) => [number, number];
    readonly solution_newton_iters: (a: number) => [number, number];
    readonly solution_pressure: (a: number) => [number, number];
    readonly solution_triangles: (a: number) => [number, number];
    readonly solution_velocity: (a: number) => [number, number];
    readonly solution_vertices: (a: number) => [number, number];
    readonly solve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
