//! Symmetric quadrature on triangles with interior points and positive weights.

use crate::{Error, Result};

/// Weights sum to one; multiply by the triangle area when integrating.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    /// Barycentric coordinates `(λ0, λ1, λ2)` of each point.
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

enum Orbit {
    Centroid(f64),
    /// `(a, a, 1 − 2a)` and its rotations.
    S21(f64, f64),
    /// `(a, b, 1 − a − b)` and all six permutations.
    S111(f64, f64, f64),
}

// Degrees 1..=8 use classic fully symmetric rules; coefficients carry full
// double precision.
const DEG2: &[Orbit] = &[Orbit::S21(1.0 / 6.0, 1.0 / 3.0)];

const DEG4: &[Orbit] = &[
    Orbit::S21(0.445_948_490_915_964_886_32, 0.223_381_589_678_011_465_7),
    Orbit::S21(0.091_576_213_509_770_743_46, 0.109_951_743_655_321_867_64),
];

const DEG6: &[Orbit] = &[
    Orbit::S21(0.249_286_745_170_910_421_29, 0.116_786_275_726_379_366_03),
    Orbit::S21(0.063_089_014_491_502_228_34, 0.050_844_906_370_206_816_921),
    Orbit::S111(0.053_145_049_844_816_947_353, 0.310_352_451_033_784_405_42, 0.082_851_075_618_373_575_194),
];

const DEG8: &[Orbit] = &[
    Orbit::Centroid(0.144_315_607_677_787_168_25),
    Orbit::S21(0.459_292_588_292_723_156_03, 0.095_091_634_267_284_624_794),
    Orbit::S21(0.170_569_307_751_760_206_62, 0.103_217_370_534_718_250_28),
    Orbit::S21(0.050_547_228_317_030_975_458, 0.032_458_497_623_198_080_311),
    Orbit::S111(0.263_112_829_634_638_113_42, 0.008_394_777_409_957_605_337_2, 0.027_230_314_174_434_994_265),
];

pub const MAX_DEGREE: usize = 20;

impl QuadratureRule {
    /// A rule exact for polynomials of total degree `degree` (1..=20).
    pub fn new(degree: usize) -> Result<Self> {
        let orbits_rule = |orbits: &[Orbit]| Self::from_orbits(orbits, degree);
        match degree {
            1 => Ok(Self { points: vec![[1.0 / 3.0; 3]], weights: vec![1.0], degree }),
            2 => Ok(orbits_rule(DEG2)),
            3 | 4 => Ok(orbits_rule(DEG4)),
            5 => {
                let s = 15f64.sqrt();
                let orbits = [
                    Orbit::Centroid(0.225),
                    Orbit::S21((6.0 - s) / 21.0, (155.0 - s) / 1200.0),
                    Orbit::S21((6.0 + s) / 21.0, (155.0 + s) / 1200.0),
                ];
                Ok(orbits_rule(&orbits))
            }
            6 => Ok(orbits_rule(DEG6)),
            7 | 8 => Ok(orbits_rule(DEG8)),
            9..=MAX_DEGREE => Ok(Self::collapsed(degree)),
            _ => Err(Error::config(format!("no triangle quadrature of degree {degree} (supported: 1..={MAX_DEGREE})"))),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn from_orbits(orbits: &[Orbit], degree: usize) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for orbit in orbits {
            match *orbit {
                Orbit::Centroid(w) => {
                    points.push([1.0 / 3.0; 3]);
                    weights.push(w);
                }
                Orbit::S21(a, w) => {
                    let c = 1.0 - 2.0 * a;
                    for p in [[a, a, c], [a, c, a], [c, a, a]] {
                        points.push(p);
                        weights.push(w);
                    }
                }
                Orbit::S111(a, b, w) => {
                    let c = 1.0 - a - b;
                    for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                        points.push(p);
                        weights.push(w);
                    }
                }
            }
        }
        Self { points, weights, degree }
    }

    /// Duffy-collapsed Gauss–Legendre product rule averaged over the six
    /// vertex permutations.
    fn collapsed(degree: usize) -> Self {
        let (xu, wu) = gauss_legendre((degree + 3) / 2);
        let (xv, wv) = gauss_legendre((degree + 2) / 2);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (&u, &a) in xu.iter().zip(&wu) {
            for (&v, &b) in xv.iter().zip(&wv) {
                let x = u;
                let y = v * (1.0 - u);
                let l = [1.0 - x - y, x, y];
                let w = 2.0 * a * b * (1.0 - u) / 6.0;
                for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    points.push([l[perm[0]], l[perm[1]], l[perm[2]]]);
                    weights.push(w);
                }
            }
        }
        // ∫ over the reference triangle has measure 1/2; weights are relative.
        let total: f64 = weights.iter().sum();
        debug_assert!((total - 1.0).abs() < 1e-13);
        Self { points, weights, degree }
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]` (weights sum to 1).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton on P_n starting from the Chebyshev-like guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Mean of `x^i y^j` over the reference triangle: `2 i! j! / (i+j+2)!`.
    fn monomial_mean(i: u32, j: u32) -> f64 {
        2.0 * factorial(i) * factorial(j) / factorial(i + j + 2)
    }

    #[test]
    fn exact_on_monomials() {
        for degree in 1..=MAX_DEGREE {
            let rule = QuadratureRule::new(degree).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-14, "degree {degree}: weights sum {total}");
            for i in 0..=degree as u32 {
                for j in 0..=(degree as u32 - i) {
                    let q: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(l, w)| w * l[1].powi(i as i32) * l[2].powi(j as i32))
                        .sum();
                    let exact = monomial_mean(i, j);
                    assert!(
                        (q - exact).abs() <= 1e-14 * exact.max(1e-3) * 10.0,
                        "degree {degree}, x^{i} y^{j}: {q} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn points_are_interior_and_weights_positive() {
        for degree in 1..=MAX_DEGREE {
            let rule = QuadratureRule::new(degree).unwrap();
            for (l, &w) in rule.points.iter().zip(&rule.weights) {
                assert!(w > 0.0);
                assert!(l.iter().all(|&c| c > 0.0 && c < 1.0));
                assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degree_two_integrates_product_of_barycentrics() {
        // ∫_T λ1 λ2 = |T|/12, and the reference triangle has |T| = 1/2.
        let rule = QuadratureRule::new(2).unwrap();
        let q: f64 = rule.points.iter().zip(&rule.weights).map(|(l, w)| w * l[1] * l[2]).sum();
        assert!((0.5 * q - 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn unsupported_degree() {
        assert!(matches!(QuadratureRule::new(0), Err(Error::Config(_))));
        assert!(matches!(QuadratureRule::new(21), Err(Error::Config(_))));
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for k in 0..(2 * n) as i32 {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
                assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }
}
