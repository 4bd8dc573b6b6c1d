//! Manufactured solutions `v = |x|^β x / 10`, `q = |x|^γ − ⟨|·|^γ⟩_Ω`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::constitutive::{StressParams, SymTensor2, Tensor2};
use crate::fem::quadrature::QuadratureRule;
use crate::fem::space::Element;
use crate::mesh::TriMesh;
use crate::solver::ExactFields;
use crate::{Error, Point, Result};

pub const BETA: f64 = 0.01;

/// Level of the mesh on which `⟨|x|^γ⟩_Ω` is integrated.
pub const MEAN_LEVEL: usize = 6;
pub const MEAN_DEGREE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Pressure regularity tied to `p'`: `γ = 1 − 2/p' + 0.01`.
    One,
    /// Pressure regularity tied to the velocity: `γ = β(p−2)/2 + 0.01`.
    Two,
}

impl Case {
    pub fn id(self) -> u8 {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }

    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            other => Err(Error::config(format!("unknown case {other} (expected 1 or 2)"))),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id: u32 = s.trim().parse().map_err(|_| Error::config(format!("unknown case '{s}' (expected 1 or 2)")))?;
        Self::from_id(id)
    }
}

pub fn gamma_for_case(p: f64, case: Case) -> f64 {
    match case {
        Case::One => 1.0 - 2.0 * (p - 1.0) / p + 0.01,
        Case::Two => BETA * (p - 2.0) / 2.0 + 0.01,
    }
}

/// `⟨|x|^γ⟩_Ω` on the given mesh level and quadrature degree.
pub fn pressure_mean_at(gamma: f64, level: usize, degree: usize) -> Result<f64> {
    let mesh = TriMesh::unit_square(level);
    let rule = QuadratureRule::new(degree)?;
    let mut sum = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(&mesh, t);
        let part: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(l, w)| {
                let x = el.map(l);
                w * (x[0] * x[0] + x[1] * x[1]).powf(0.5 * gamma)
            })
            .sum();
        sum += el.area * part;
    }
    Ok(sum)
}

/// `c_q = ⟨|x|^γ⟩_Ω`, computed once per `γ` and cached.
pub fn pressure_mean_constant(gamma: f64) -> Result<f64> {
    if !(gamma > -2.0) {
        return Err(Error::domain(format!("|x|^{gamma} is not integrable")));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().expect("cache lock").get(&gamma.to_bits()) {
        return Ok(v);
    }
    let v = pressure_mean_at(gamma, MEAN_LEVEL, MEAN_DEGREE)?;
    cache.lock().expect("cache lock").insert(gamma.to_bits(), v);
    Ok(v)
}

/// One benchmark configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub case: Case,
    pub p: f64,
    pub beta: f64,
    pub gamma: f64,
    pub stress: StressParams,
    pub c_q: f64,
}

impl ManufacturedCase {
    pub fn new(case: Case, p: f64) -> Result<Self> {
        let stress = StressParams::benchmark(p)?;
        let gamma = gamma_for_case(p, case);
        let c_q = pressure_mean_constant(gamma)?;
        Ok(Self { case, p, beta: BETA, gamma, stress, c_q })
    }

    pub fn v(&self, x: Point) -> [f64; 2] {
        let f = 0.1 * norm(x).powf(self.beta);
        [f * x[0], f * x[1]]
    }

    /// `∇v = (|x|^β I + β |x|^{β−2} x⊗x) / 10`, symmetric.
    pub fn grad_v(&self, x: Point) -> Result<[[f64; 2]; 2]> {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::domain("the velocity gradient is singular at the origin"));
        }
        let a = 0.1 * r.powf(self.beta);
        let b = 0.1 * self.beta * r.powf(self.beta - 2.0);
        Ok([[a + b * x[0] * x[0], b * x[0] * x[1]], [b * x[0] * x[1], a + b * x[1] * x[1]]])
    }

    pub fn q(&self, x: Point) -> f64 {
        norm(x).powf(self.gamma) - self.c_q
    }

    /// `∇q = γ |x|^{γ−2} x`.
    pub fn grad_q(&self, x: Point) -> Result<[f64; 2]> {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::domain("the pressure gradient is singular at the origin"));
        }
        let f = self.gamma * r.powf(self.gamma - 2.0);
        Ok([f * x[0], f * x[1]])
    }

    /// `g₁ = div v = (2 + β) |x|^β / 10`.
    pub fn g1(&self, x: Point) -> f64 {
        0.1 * (2.0 + self.beta) * norm(x).powf(self.beta)
    }

    pub fn f_of_dv(&self, x: Point) -> Result<SymTensor2> {
        Ok(self.stress.f_of(&Tensor2(self.grad_v(x)?)))
    }
}

fn norm(x: Point) -> f64 {
    x[0].hypot(x[1])
}

impl ExactFields for ManufacturedCase {
    fn velocity(&self, x: Point) -> [f64; 2] {
        self.v(x)
    }

    fn velocity_gradient(&self, x: Point) -> [[f64; 2]; 2] {
        // Quadrature points never sit at the origin.
        self.grad_v(x).unwrap_or([[f64::NAN; 2]; 2])
    }

    fn pressure(&self, x: Point) -> f64 {
        self.q(x)
    }

    fn divergence(&self, x: Point) -> f64 {
        self.g1(x)
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fem::quadrature::gauss_legendre;

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(gamma_for_case(2.0, Case::One), 0.01, max_relative = 1e-14);
        assert_relative_eq!(gamma_for_case(2.0, Case::Two), 0.01, max_relative = 1e-14);
        assert_relative_eq!(gamma_for_case(4.0 / 3.0, Case::One), 0.51, max_relative = 1e-14);
        assert!("3".parse::<Case>().is_err());
        assert_eq!("2".parse::<Case>().unwrap(), Case::Two);
    }

    #[test]
    fn field_examples() {
        let c = ManufacturedCase::new(Case::One, 2.0).unwrap();
        assert_eq!(c.v([1.0, 0.0]), [0.1, 0.0]);
        assert_relative_eq!(c.g1([1.0, 0.0]), 0.201, max_relative = 1e-15);
        assert!(c.grad_v([0.0, 0.0]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let x = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
            let g = c.grad_v(x).unwrap();
            assert!((g[0][1] - g[1][0]).abs() <= 1e-15);
            assert_relative_eq!(g[0][0] + g[1][1], c.g1(x), max_relative = 1e-13);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let c = ManufacturedCase::new(Case::One, 1.5).unwrap();
        let x = [0.3, 0.7];
        let h = 1e-6;
        let g = c.grad_v(x).unwrap();
        let gq = c.grad_q(x).unwrap();
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            for i in 0..2 {
                let fd = (c.v(xp)[i] - c.v(xm)[i]) / (2.0 * h);
                assert!((fd - g[i][j]).abs() < 1e-8);
            }
            assert!(((c.q(xp) - c.q(xm)) / (2.0 * h) - gq[j]).abs() < 1e-8);
        }
    }

    /// `∫_{(0,1)²} |x|^γ = 2/(γ+2) ∫_0^{π/4} cos(θ)^{−(γ+2)} dθ` in polar
    /// coordinates, by Gauss–Legendre in the angle.
    fn polar_mean(gamma: f64) -> f64 {
        let (xs, ws) = gauss_legendre(40);
        let quarter = std::f64::consts::FRAC_PI_4;
        let int: f64 = xs.iter().zip(&ws).map(|(s, w)| w * quarter * (s * quarter).cos().powf(-(gamma + 2.0))).sum();
        2.0 / (gamma + 2.0) * int
    }

    #[test]
    fn pressure_mean_examples() {
        assert_relative_eq!(pressure_mean_constant(0.0).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(pressure_mean_constant(2.0).unwrap(), 2.0 / 3.0, max_relative = 1e-13);
        let a = pressure_mean_at(0.01, 5, MEAN_DEGREE).unwrap();
        let b = pressure_mean_constant(0.01).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-8);
        for gamma in [0.01, 0.26, 0.51, 0.005] {
            assert_relative_eq!(pressure_mean_constant(gamma).unwrap(), polar_mean(gamma), max_relative = 1e-8);
        }
    }

    #[test]
    fn q_has_zero_mean() {
        let c = ManufacturedCase::new(Case::One, 4.0 / 3.0).unwrap();
        let mean = pressure_mean_at(c.gamma, MEAN_LEVEL, MEAN_DEGREE).unwrap() - c.c_q;
        assert!(mean.abs() < 1e-15);
    }
}
