//! Temam's skew-adjusted convective form
//! `b(u, v, w) = ½ (w⊗u, ∇v + g₁ I) − ½ (v⊗u, ∇w)`.

use std::sync::Arc;

use crate::fem::space::{Element, Role, Tabulation};
use crate::fem::DiscreteFunction;
use crate::{Error, Point, Result};

/// Pointwise integrand of `b` from values and gradients
/// (`gv[i][j] = ∂_j v_i`).
#[inline]
pub fn temam_density(u: [f64; 2], v: [f64; 2], gv: [[f64; 2]; 2], w: [f64; 2], gw: [[f64; 2]; 2], g1: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..2 {
        let dv = gv[i][0] * u[0] + gv[i][1] * u[1];
        let dw = gw[i][0] * u[0] + gw[i][1] * u[1];
        s += 0.5 * (w[i] * dv + g1 * u[i] * w[i] - v[i] * dw);
    }
    s
}

/// `b(u, v, w)` by quadrature of the given degree.
pub fn temam_b(
    u: &DiscreteFunction,
    v: &DiscreteFunction,
    w: &DiscreteFunction,
    g1: &dyn Fn(Point) -> f64,
    degree: usize,
) -> Result<f64> {
    let space = u.space();
    for f in [u, v, w] {
        if !Arc::ptr_eq(f.space(), space) || f.role() != Role::Velocity {
            return Err(Error::SpaceMismatch("Temam form needs three velocity fields on one space".into()));
        }
    }
    let tab = Tabulation::new(space.pair(), degree)?;
    let mesh = space.mesh();
    let n = tab.n_local;
    let mut total = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let (lu, lv, lw) = (
            space.gather_velocity(u.coeffs(), t),
            space.gather_velocity(v.coeffs(), t),
            space.gather_velocity(w.coeffs(), t),
        );
        for (q, (l, &wq)) in tab.rule.points.iter().zip(&tab.rule.weights).enumerate() {
            let g = tab.gradients(&el, q);
            let vals = &tab.values[q];
            let (uu, _) = crate::fem::space::velocity_value(&lu, n, vals, &g);
            let (vv, gv) = crate::fem::space::velocity_value(&lv, n, vals, &g);
            let (ww, gw) = crate::fem::space::velocity_value(&lw, n, vals, &g);
            total += wq * el.area * temam_density(uu, vv, gv, ww, gw, g1(el.map(l)));
        }
    }
    Ok(total)
}
