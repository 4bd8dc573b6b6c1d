//! Linear Gram and coupling matrices of a mixed space.

use crate::fem::space::{Element, ElementPair, MixedSpace, Tabulation};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::Result;

#[derive(Clone, Debug)]
pub struct AuxMatrices {
    /// `M_p[i, j] = (η_j, η_i)`.
    pub pressure_mass: CsrMatrix,
    /// `A₁[a, b] = (z_b, z_a) + (∇z_b, ∇z_a)` over all velocity dofs.
    pub velocity_h1: CsrMatrix,
    /// `B[i, a] = (div z_a, η_i)`.
    pub divergence: CsrMatrix,
}

/// Exact quadrature degree for the aux integrands: the MINI bubble mass
/// term is of degree 6, everything else is at most 4.
pub fn aux_degree(pair: ElementPair) -> usize {
    match pair {
        ElementPair::Mini => 6,
        ElementPair::TaylorHood => 4,
    }
}

pub fn assemble_aux_matrices(space: &MixedSpace) -> Result<AuxMatrices> {
    let mesh = space.mesh();
    let pair = space.pair();
    let tab = Tabulation::new(pair, aux_degree(pair))?;
    let n = tab.n_local;
    let (nv, np) = (space.n_velocity_dofs(), space.n_pressure_dofs());
    let mut mp = TripletBuilder::new(np, np);
    let mut a1 = TripletBuilder::new(nv, nv);
    let mut b = TripletBuilder::new(np, nv);
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let vn = space.velocity_nodes(t);
        let pn = space.pressure_nodes(t);
        let mut loc_m = [[0.0; 3]; 3];
        let mut loc_a = [[0.0; 6]; 6];
        let mut loc_b = [[[0.0; 2]; 6]; 3];
        for (q, (l, &w)) in tab.rule.points.iter().zip(&tab.rule.weights).enumerate() {
            let wq = w * el.area;
            let v = &tab.values[q];
            let g = tab.gradients(&el, q);
            for i in 0..3 {
                for j in 0..3 {
                    loc_m[i][j] += wq * l[i] * l[j];
                }
                for a in 0..n {
                    loc_b[i][a][0] += wq * l[i] * g[a][0];
                    loc_b[i][a][1] += wq * l[i] * g[a][1];
                }
            }
            for a in 0..n {
                for bb in 0..n {
                    loc_a[a][bb] += wq * (v[a] * v[bb] + g[a][0] * g[bb][0] + g[a][1] * g[bb][1]);
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                mp.push(pn[i], pn[j], loc_m[i][j]);
            }
            for a in 0..n {
                for c in 0..2 {
                    b.push(pn[i], 2 * vn[a] + c, loc_b[i][a][c]);
                }
            }
        }
        for a in 0..n {
            for bb in 0..n {
                for c in 0..2 {
                    a1.push(2 * vn[a] + c, 2 * vn[bb] + c, loc_a[a][bb]);
                }
            }
        }
    }
    Ok(AuxMatrices { pressure_mass: mp.build(), velocity_h1: a1.build(), divergence: b.build() })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fem::interp::scott_zhang;
    use crate::mesh::TriMesh;

    #[test]
    fn mass_and_divergence_identities() {
        for pair in [ElementPair::Mini, ElementPair::TaylorHood] {
            let space = Arc::new(MixedSpace::new(Arc::new(TriMesh::unit_square(2)), pair));
            let m = assemble_aux_matrices(&space).unwrap();
            let np = space.n_pressure_dofs();
            let ones = vec![1.0; np];
            let total: f64 = m.pressure_mass.matvec(&ones).iter().sum();
            assert!((total - 1.0).abs() < 1e-14);
            // Row sums are a third of the vertex patch area.
            let patches = space.mesh().vertex_patches();
            let rows = m.pressure_mass.matvec(&ones);
            for (v, patch) in patches.iter().enumerate() {
                let area: f64 = patch.iter().map(|&t| space.mesh().area(t)).sum();
                assert!((rows[v] - area / 3.0).abs() < 1e-15);
            }

            let constant = scott_zhang(&space, 1, &|_| [1.0, -2.0]).unwrap();
            let bc = m.divergence.matvec(constant.coeffs());
            assert!(bc.iter().all(|x| x.abs() < 1e-14));

            let stretch = scott_zhang(&space, 1, &|x| [x[0], 0.0]).unwrap();
            let flux: f64 = m.divergence.matvec(stretch.coeffs()).iter().sum();
            assert!((flux - 1.0).abs() < 1e-14);

            // ‖(x, 0)‖²_{H¹} = ∫ x² + 1 = 4/3.
            let u = stretch.coeffs();
            let norm: f64 = m.velocity_h1.matvec(u).iter().zip(u).map(|(a, b)| a * b).sum();
            assert!((norm - 4.0 / 3.0).abs() < 1e-13, "{pair}: {norm}");
        }
    }
}
