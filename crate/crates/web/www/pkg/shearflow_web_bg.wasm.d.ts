/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const __wbg_rates_free: (a: number, b: number) => void;
export const __wbg_solution_free: (a: number, b: number) => void;
export const curves_phi: (a: number) => [number, number];
export const curves_phi_conjugate: (a: number) => [number, number];
export const curves_phi_shifted: (a: number) => [number, number];
export const curves_stress: (a: number) => [number, number];
export const curves_t: (a: number) => [number, number];
export const n_function_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const predicted_rates: (a: number, b: number, c: number) => [number, number, number];
export const rates_p: (a: number) => [number, number];
export const rates_rate_q_ell: (a: number) => [number, number];
export const rates_rate_q_s: (a: number) => [number, number];
export const rates_rate_v: (a: number) => [number, number];
export const solution_e_q_s: (a: number) => [number, number];
export const solution_e_v: (a: number) => [number, number];
export const solution_h: (a: number) => [number, number];
export const solution_newton_iters: (a: number) => [number, number];
export const solution_pressure: (a: number) => [number, number];
export const solution_triangles: (a: number) => [number, number];
export const solution_velocity: (a: number) => [number, number];
export const solution_vertices: (a: number) => [number, number];
export const solve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
