//! Conforming triangulations of `Ω = (0,1)²` and uniform red refinement.

use std::io::{self, Write};

use crate::{Error, Point, Result};

/// Where a vertex of a refined mesh comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexParent {
    /// Inherited from the coarse vertex with this index.
    Vertex(usize),
    /// Midpoint of the coarse edge with this index.
    EdgeMidpoint(usize),
}

/// Triangulation with edges numbered lexicographically by their sorted
/// vertex pair and triangles stored counterclockwise.
///
/// Local edge `k` of a triangle is the one opposite local vertex `k`.
#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
    edge_triangles: Vec<[Option<usize>; 2]>,
    boundary_vertex: Vec<bool>,
    boundary_edge: Vec<bool>,
    level: usize,
    parent_vertex: Vec<VertexParent>,
    parent_triangle: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshStats {
    pub h: f64,
    pub h_min: f64,
    pub chunkiness: f64,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_triangles: usize,
    pub n_boundary_vertices: usize,
}

impl TriMesh {
    /// The square cut along both diagonals: four triangles meeting at the
    /// center, each spanned by one side of the square.
    pub fn unit_square_initial() -> Self {
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]];
        let triangles = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
        Self::from_parts(vertices, triangles, 0, Vec::new(), Vec::new()).expect("initial mesh is valid")
    }

    /// Builds connectivity for the given vertices and counterclockwise triangles.
    pub fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        level: usize,
        parent_vertex: Vec<VertexParent>,
        parent_triangle: Vec<usize>,
    ) -> Result<Self> {
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::MeshInvalid(format!("triangle {t} references a missing vertex")));
            }
            if signed_area(&vertices, tri) <= 0.0 {
                return Err(Error::MeshInvalid(format!("triangle {t} is degenerate or clockwise")));
            }
        }

        let mut all: Vec<[usize; 2]> = triangles
            .iter()
            .flat_map(|tri| (0..3).map(move |k| sorted_pair(tri[(k + 1) % 3], tri[(k + 2) % 3])))
            .collect();
        all.sort_unstable();
        all.dedup();
        let edges = all;

        let mut triangle_edges = Vec::with_capacity(triangles.len());
        let mut edge_triangles = vec![[None, None]; edges.len()];
        for (t, tri) in triangles.iter().enumerate() {
            let mut te = [0; 3];
            for k in 0..3 {
                let key = sorted_pair(tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let e = edges.binary_search(&key).expect("edge was collected");
                te[k] = e;
                let slot = &mut edge_triangles[e];
                if slot[0].is_none() {
                    slot[0] = Some(t);
                } else if slot[1].is_none() {
                    slot[1] = Some(t);
                } else {
                    return Err(Error::MeshInvalid(format!("edge {key:?} shared by more than two triangles")));
                }
            }
            triangle_edges.push(te);
        }

        let boundary_edge: Vec<bool> = edge_triangles.iter().map(|s| s[1].is_none()).collect();
        let mut boundary_vertex = vec![false; vertices.len()];
        for (e, &b) in edges.iter().zip(&boundary_edge) {
            if b {
                boundary_vertex[e[0]] = true;
                boundary_vertex[e[1]] = true;
            }
        }

        Ok(Self {
            vertices,
            triangles,
            edges,
            triangle_edges,
            edge_triangles,
            boundary_vertex,
            boundary_edge,
            level,
            parent_vertex,
            parent_triangle,
        })
    }

    /// Splits every triangle into four similar ones through its edge midpoints.
    ///
    /// Coarse vertices keep their indices; the midpoint of coarse edge `e`
    /// becomes vertex `V + e`. Children of triangle `t` are `4t..4t+3`.
    pub fn red_refine(&self) -> Self {
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        let mut parent_vertex: Vec<VertexParent> = (0..nv).map(VertexParent::Vertex).collect();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let (pa, pb) = (self.vertices[a], self.vertices[b]);
            vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
            parent_vertex.push(VertexParent::EdgeMidpoint(e));
        }

        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut parent_triangle = Vec::with_capacity(4 * self.triangles.len());
        for (t, (&[a, b, c], te)) in self.triangles.iter().zip(&self.triangle_edges).enumerate() {
            // te[k] is opposite vertex k: te[0] = bc, te[1] = ca, te[2] = ab.
            let (mbc, mca, mab) = (nv + te[0], nv + te[1], nv + te[2]);
            triangles.push([a, mab, mca]);
            triangles.push([mab, b, mbc]);
            triangles.push([mca, mbc, c]);
            triangles.push([mab, mbc, mca]);
            parent_triangle.extend([t; 4]);
        }

        Self::from_parts(vertices, triangles, self.level + 1, parent_vertex, parent_triangle)
            .expect("red refinement of a valid mesh is valid")
    }

    /// Level-0 mesh refined `level` times.
    pub fn unit_square(level: usize) -> Self {
        let mut mesh = Self::unit_square_initial();
        for _ in 0..level {
            mesh = mesh.red_refine();
        }
        mesh
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn edge_triangles(&self) -> &[[Option<usize>; 2]] {
        &self.edge_triangles
    }

    pub fn boundary_vertex_flags(&self) -> &[bool] {
        &self.boundary_vertex
    }

    pub fn boundary_edge_flags(&self) -> &[bool] {
        &self.boundary_edge
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn parent_vertices(&self) -> &[VertexParent] {
        &self.parent_vertex
    }

    pub fn parent_triangles(&self) -> &[usize] {
        &self.parent_triangle
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn area(&self, t: usize) -> f64 {
        signed_area(&self.vertices, &self.triangles[t])
    }

    /// Triangles touching each vertex, in increasing index order.
    pub fn vertex_patches(&self) -> Vec<Vec<usize>> {
        let mut patches = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                patches[v].push(t);
            }
        }
        patches
    }

    /// Element patches `ω_K`: all triangles sharing at least a vertex with `K`.
    pub fn element_patches(&self) -> Vec<Vec<usize>> {
        let vp = self.vertex_patches();
        self.triangles
            .iter()
            .map(|tri| {
                let mut patch: Vec<usize> = tri.iter().flat_map(|&v| vp[v].iter().copied()).collect();
                patch.sort_unstable();
                patch.dedup();
                patch
            })
            .collect()
    }

    /// Maximal and minimal element diameter, chunkiness `max h_K/ρ_K` with
    /// `ρ_K = 4|K|/perimeter` the inscribed-circle diameter.
    pub fn stats(&self) -> Result<MeshStats> {
        let mut h = 0.0f64;
        let mut h_min = f64::INFINITY;
        let mut chunk = 0.0f64;
        for t in 0..self.triangles.len() {
            let area = self.area(t);
            if area <= 0.0 {
                return Err(Error::MeshInvalid(format!("triangle {t} has area {area}")));
            }
            let [a, b, c] = self.triangle_points(t);
            let lens = [dist(b, c), dist(c, a), dist(a, b)];
            let hk = lens.iter().copied().fold(0.0, f64::max);
            let rho = 4.0 * area / (lens[0] + lens[1] + lens[2]);
            h = h.max(hk);
            h_min = h_min.min(hk);
            chunk = chunk.max(hk / rho);
        }
        Ok(MeshStats {
            h,
            h_min,
            chunkiness: chunk,
            n_vertices: self.n_vertices(),
            n_edges: self.n_edges(),
            n_triangles: self.n_triangles(),
            n_boundary_vertices: self.boundary_vertex.iter().filter(|&&b| b).count(),
        })
    }

    /// Plain text dump: vertex count, `x y` lines, triangle count, `i j k` lines.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.vertices.len())?;
        for v in &self.vertices {
            writeln!(w, "{:.16e} {:.16e}", v[0], v[1])?;
        }
        writeln!(w, "{}", self.triangles.len())?;
        for t in &self.triangles {
            writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    /// Legacy ASCII VTK unstructured grid with optional vertex data.
    ///
    /// `point_scalars` and `point_vectors` must have one entry per vertex.
    pub fn write_vtk<W: Write>(
        &self,
        mut w: W,
        point_scalars: &[(&str, &[f64])],
        point_vectors: &[(&str, &[[f64; 2]])],
    ) -> io::Result<()> {
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(w, "shearflow mesh level {}", self.level)?;
        writeln!(w, "ASCII")?;
        writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
        writeln!(w, "POINTS {} double", self.vertices.len())?;
        for v in &self.vertices {
            writeln!(w, "{:.16e} {:.16e} 0", v[0], v[1])?;
        }
        writeln!(w, "CELLS {} {}", self.triangles.len(), 4 * self.triangles.len())?;
        for t in &self.triangles {
            writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
        }
        writeln!(w, "CELL_TYPES {}", self.triangles.len())?;
        for _ in &self.triangles {
            writeln!(w, "5")?;
        }
        if !point_scalars.is_empty() || !point_vectors.is_empty() {
            writeln!(w, "POINT_DATA {}", self.vertices.len())?;
        }
        for (name, data) in point_scalars {
            debug_assert_eq!(data.len(), self.vertices.len());
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for x in data.iter() {
                writeln!(w, "{x:.16e}")?;
            }
        }
        for (name, data) in point_vectors {
            debug_assert_eq!(data.len(), self.vertices.len());
            writeln!(w, "VECTORS {name} double")?;
            for x in data.iter() {
                writeln!(w, "{:.16e} {:.16e} 0", x[0], x[1])?;
            }
        }
        Ok(())
    }
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn signed_area(vertices: &[Point], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}
