//! Barycentric and cubical subdivision.
//!
//! Both subdivisions name their new vertices by the cell ids of the input
//! complex, so vertex `v` of the output is the barycenter of cell `v`.

use crate::cube::VertexId;
use crate::cubical::CubicalComplex;
use crate::poset::{CellId, CellPoset};
use crate::simplicial::SimplicialComplex;

/// A barycentric subdivision together with the dimension of the cell each
/// new vertex came from. Provenance is absent for complexes read from disk.
#[derive(Debug, Clone)]
pub struct BarycentricSubdivision {
    pub complex: SimplicialComplex,
    pub provenance: Option<Vec<usize>>,
}

/// Chains of the face poset as a simplicial complex.
pub fn barycentric_subdivision<P: CellPoset + ?Sized>(x: &P) -> BarycentricSubdivision {
    let n = x.cell_count();
    let mut tops = Vec::new();
    let mut chain = Vec::new();
    for c in 0..n {
        if x.cofacets(c).is_empty() {
            descend(x, c, &mut chain, &mut tops);
        }
    }
    let complex = SimplicialComplex::from_simplices(tops).expect("chains are sets");
    let provenance = Some((0..n).map(|c| x.cell_dim(c)).collect());
    BarycentricSubdivision { complex, provenance }
}

fn descend<P: CellPoset + ?Sized>(x: &P, c: CellId, chain: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
    chain.push(c as VertexId);
    let f = x.facets(c);
    if f.is_empty() {
        out.push(chain.clone());
    } else {
        for &g in f {
            descend(x, g, chain, out);
        }
    }
    chain.pop();
}

/// Corner array of the interval `[lo, hi]` of the face poset, viewed as a
/// cube whose vertices are the cells between `lo` and `hi`. Requires `lo`
/// to be a face of `hi`.
pub fn interval_corners(x: &CubicalComplex, lo: CellId, hi: CellId) -> Vec<VertexId> {
    let top = x.cell(hi);
    let k = top.dim();
    let (fixed, vals) = top
        .locate_face(&x.cell(lo).vertex_set())
        .expect("lower end of interval is a face of the upper end");
    let axes: Vec<usize> = (0..k).filter(|a| fixed & (1 << a) != 0).collect();
    let mut out = Vec::with_capacity(1 << axes.len());
    for s in 0..(1usize << axes.len()) {
        let mut m = fixed;
        for (j, &a) in axes.iter().enumerate() {
            if s & (1 << j) != 0 {
                m &= !(1 << a);
            }
        }
        let raw = top.face_corners(m, vals & m);
        let id = x.lookup(&raw).expect("face of a cell is a cell");
        out.push(id as VertexId);
    }
    out
}

/// Cubical subdivision: each `k`-cube becomes `2^k` cubes `[v, c]` for
/// vertices `v` of `c`.
pub fn cubical_subdivision(x: &CubicalComplex) -> CubicalComplex {
    let mut raw = Vec::new();
    for m in x.maximal() {
        for v in x.corner_cells(m) {
            raw.push(interval_corners(x, v, m));
        }
    }
    CubicalComplex::from_cubes(raw).expect("intervals are cubes")
}
