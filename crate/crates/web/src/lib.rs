//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain Rust twin returning
//! `shearflow::Result`, which is what the native tests exercise.

use shearflow::bench::{p_grid, rates_curves, run_cell_with, Case, StudyConfig};
use shearflow::constitutive::StressParams;
use shearflow::fem::ElementPair;
use shearflow::{Error, Result};
use wasm_bindgen::prelude::*;

/// Finest level the demo will solve on; level 5 takes seconds natively.
pub const MAX_DEMO_LEVEL: usize = 4;

/// Scalar curves of the constitutive law on `[0, t_max]`.
#[wasm_bindgen]
pub struct Curves {
    t: Vec<f64>,
    phi: Vec<f64>,
    phi_shifted: Vec<f64>,
    phi_conjugate: Vec<f64>,
    stress: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn phi(&self) -> Vec<f64> {
        self.phi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn phi_shifted(&self) -> Vec<f64> {
        self.phi_shifted.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn phi_conjugate(&self) -> Vec<f64> {
        self.phi_conjugate.clone()
    }

    /// Shear stress magnitude `ν (δ + t)^{p−2} t`.
    #[wasm_bindgen(getter)]
    pub fn stress(&self) -> Vec<f64> {
        self.stress.clone()
    }
}

pub fn compute_curves(p: f64, delta: f64, nu: f64, shift: f64, t_max: f64, n: usize) -> Result<Curves> {
    let s = StressParams::new(p, delta, nu)?;
    if n < 2 || !(t_max > 0.0 && t_max.is_finite()) || !(shift >= 0.0 && shift.is_finite()) {
        return Err(Error::Config(format!("invalid curve range t_max = {t_max}, n = {n}, shift = {shift}")));
    }
    let t: Vec<f64> = (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect();
    let map = |f: &dyn Fn(f64) -> Result<f64>| t.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>();
    Ok(Curves {
        phi: map(&|x| s.phi(x))?,
        phi_shifted: map(&|x| s.phi_shifted(shift, x))?,
        phi_conjugate: map(&|x| s.phi_conjugate(x))?,
        stress: map(&|x| Ok(nu * s.phi_prime(x)?))?,
        t,
    })
}

/// Exponents and predicted convergence rates on a grid of `p`.
#[wasm_bindgen]
pub struct Rates {
    p: Vec<f64>,
    rate_v: Vec<f64>,
    rate_q_s: Vec<f64>,
    rate_q_ell: Vec<f64>,
}

#[wasm_bindgen]
impl Rates {
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> Vec<f64> {
        self.p.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rate_v(&self) -> Vec<f64> {
        self.rate_v.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rate_q_s(&self) -> Vec<f64> {
        self.rate_q_s.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rate_q_ell(&self) -> Vec<f64> {
        self.rate_q_ell.clone()
    }
}

pub fn compute_rates(p_min: f64, p_max: f64, n: usize) -> Result<Rates> {
    let rows = rates_curves(&p_grid(p_min, p_max, n)?)?;
    Ok(Rates {
        p: rows.iter().map(|r| r.p).collect(),
        rate_v: rows.iter().map(|r| r.rate_v_case1).collect(),
        rate_q_s: rows.iter().map(|r| r.rate_q_s).collect(),
        rate_q_ell: rows.iter().map(|r| r.rate_q_ell).collect(),
    })
}

/// Discrete solution on the finest level plus the error history.
#[wasm_bindgen]
pub struct Solution {
    vertices: Vec<f64>,
    triangles: Vec<u32>,
    velocity: Vec<f64>,
    pressure: Vec<f64>,
    h: Vec<f64>,
    e_v: Vec<f64>,
    e_q_s: Vec<f64>,
    newton_iters: Vec<u32>,
}

#[wasm_bindgen]
impl Solution {
    /// Vertex coordinates, `[x0, y0, x1, y1, ...]`.
    #[wasm_bindgen(getter)]
    pub fn vertices(&self) -> Vec<f64> {
        self.vertices.clone()
    }

    /// Vertex indices, three per triangle.
    #[wasm_bindgen(getter)]
    pub fn triangles(&self) -> Vec<u32> {
        self.triangles.clone()
    }

    /// Velocity at the vertices, interleaved like `vertices`.
    #[wasm_bindgen(getter)]
    pub fn velocity(&self) -> Vec<f64> {
        self.velocity.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn pressure(&self) -> Vec<f64> {
        self.pressure.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn h(&self) -> Vec<f64> {
        self.h.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn e_v(&self) -> Vec<f64> {
        self.e_v.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn e_q_s(&self) -> Vec<f64> {
        self.e_q_s.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn newton_iters(&self) -> Vec<u32> {
        self.newton_iters.clone()
    }
}

pub fn compute_solution(element: &str, case: u32, p: f64, level: usize) -> Result<Solution> {
    if !(1..=MAX_DEMO_LEVEL).contains(&level) {
        return Err(Error::Config(format!("demo level must be in 1..={MAX_DEMO_LEVEL}, got {level}")));
    }
    let pair: ElementPair = element.parse()?;
    let cfg = StudyConfig::new(pair, Case::from_id(case)?, vec![p], level);
    let mut finest = None;
    let table = run_cell_with(&cfg, p, |sol| {
        if sol.row.level == level {
            finest = Some(sol.state.clone());
        }
        Ok(())
    })?;
    let state = finest.ok_or_else(|| Error::Config("finest level was not reached".into()))?;
    let mesh = state.space().mesh().clone();
    let nv = mesh.n_vertices();
    Ok(Solution {
        vertices: mesh.vertices().iter().flatten().copied().collect(),
        triangles: mesh.triangles().iter().flatten().map(|&i| i as u32).collect(),
        velocity: state.velocity.coeffs()[..2 * nv].to_vec(),
        pressure: state.pressure.coeffs().to_vec(),
        h: table.rows.iter().map(|r| r.h).collect(),
        e_v: table.rows.iter().map(|r| r.e_v).collect(),
        e_q_s: table.rows.iter().map(|r| r.e_q_s).collect(),
        newton_iters: table.rows.iter().map(|r| r.newton_iters as u32).collect(),
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn n_function_curves(p: f64, delta: f64, nu: f64, shift: f64, t_max: f64, n: usize) -> Result<Curves, JsError> {
    compute_curves(p, delta, nu, shift, t_max, n).map_err(js)
}

#[wasm_bindgen]
pub fn predicted_rates(p_min: f64, p_max: f64, n: usize) -> Result<Rates, JsError> {
    compute_rates(p_min, p_max, n).map_err(js)
}

#[wasm_bindgen]
pub fn solve(element: &str, case: u32, p: f64, level: usize) -> Result<Solution, JsError> {
    compute_solution(element, case, p, level).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_follow_the_closed_form_at_p_two() {
        // p = 2, δ = 0: φ = t²/2, φ* = t²/2, stress = ν t.
        let c = compute_curves(2.0, 0.0, 0.5, 0.0, 2.0, 5).unwrap();
        for i in 0..5 {
            let t = c.t[i];
            assert!((c.phi[i] - 0.5 * t * t).abs() < 1e-14);
            assert!((c.phi_conjugate[i] - 0.5 * t * t).abs() < 1e-12);
            assert!((c.stress[i] - 0.5 * t).abs() < 1e-14);
            assert!((c.phi_shifted[i] - c.phi[i]).abs() < 1e-14);
        }
        assert!(compute_curves(2.0, 0.0, 1.0, 0.0, 1.0, 1).is_err());
        assert!(compute_curves(0.5, 0.0, 1.0, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn rates_cover_the_grid() {
        let r = compute_rates(1.5, 3.0, 4).unwrap();
        assert_eq!(r.p, vec![1.5, 2.0, 2.5, 3.0]);
        assert_eq!(r.rate_v[1], 1.0);
        assert!((r.rate_v[3] - 0.75).abs() < 1e-14);
        assert!(compute_rates(2.0, 1.5, 4).is_err());
    }

    #[test]
    fn solution_arrays_are_consistent() {
        let s = compute_solution("mini", 1, 2.0, 2).unwrap();
        let nv = s.vertices.len() / 2;
        assert_eq!(nv, 41);
        assert_eq!(s.triangles.len(), 3 * 64);
        assert_eq!(s.velocity.len(), 2 * nv);
        assert_eq!(s.pressure.len(), nv);
        assert_eq!(s.e_v.len(), 3);
        assert!(s.e_v[2] < s.e_v[1]);
        assert!(compute_solution("mini", 1, 2.0, MAX_DEMO_LEVEL + 1).is_err());
        assert!(compute_solution("q2", 1, 2.0, 1).is_err());
    }
}
