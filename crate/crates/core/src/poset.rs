//! Face posets shared by cubical and simplicial complexes, and links.

use std::collections::{BTreeSet, HashSet};

use crate::cube::VertexId;
use crate::simplicial::SimplicialComplex;

/// Index of a cell inside its complex.
pub type CellId = usize;

/// Read access to the face poset of a finite cell complex whose cells are
/// indexed `0..cell_count()` sorted by dimension.
pub trait CellPoset {
    fn cell_count(&self) -> usize;
    fn cell_dim(&self, c: CellId) -> usize;
    /// Codimension-one faces.
    fn facets(&self, c: CellId) -> &[CellId];
    /// Cells having `c` as a codimension-one face.
    fn cofacets(&self, c: CellId) -> &[CellId];
    /// Sorted vertex ids of the cell.
    fn cell_vertices(&self, c: CellId) -> Vec<VertexId>;

    /// All faces of `c`, including `c`, sorted.
    fn faces(&self, c: CellId) -> Vec<CellId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend_from_slice(self.facets(x));
            }
        }
        seen.into_iter().collect()
    }

    /// All cells having `c` as a face, including `c`, sorted.
    fn cofaces(&self, c: CellId) -> Vec<CellId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend_from_slice(self.cofacets(x));
            }
        }
        seen.into_iter().collect()
    }

    fn is_face(&self, a: CellId, b: CellId) -> bool {
        if self.cell_dim(a) > self.cell_dim(b) {
            return false;
        }
        self.faces(b).binary_search(&a).is_ok()
    }
}

/// The link of a cell: vertices are the cells one dimension up, and a set
/// of them spans a simplex when some cell contains all of them with the
/// matching dimension.
#[derive(Debug, Clone)]
pub struct Link {
    pub base: CellId,
    /// Vertex ids of `complex` are the ids of the covering cells.
    pub complex: SimplicialComplex,
}

/// Computes `link(X, c)`.
pub fn link<P: CellPoset + ?Sized>(x: &P, c: CellId) -> Link {
    let covers: HashSet<CellId> = x.cofacets(c).iter().copied().collect();
    let mut tops = Vec::new();
    for mu in x.cofaces(c) {
        if mu == c {
            continue;
        }
        let mut s: Vec<VertexId> = x
            .faces(mu)
            .into_iter()
            .filter(|f| covers.contains(f))
            .map(|f| f as VertexId)
            .collect();
        s.sort_unstable();
        tops.push(s);
    }
    // isolated covers still appear through mu = cover itself
    let complex = SimplicialComplex::from_simplices(tops).expect("link simplices are sets");
    Link { base: c, complex }
}
