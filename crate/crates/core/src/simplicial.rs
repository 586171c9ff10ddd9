//! Finite abstract simplicial complexes.

use std::collections::{BTreeSet, HashMap};

use crate::cube::VertexId;
use crate::poset::{CellId, CellPoset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplexError {
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<VertexId>),
    #[error("empty simplex")]
    Empty,
}

/// A simplicial complex closed under faces. Simplices are sorted vertex
/// vectors, ordered by dimension and then lexicographically.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<VertexId>>,
    index: HashMap<Vec<VertexId>, CellId>,
    facets: Vec<Vec<CellId>>,
    cofacets: Vec<Vec<CellId>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}
impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::from_simplices(Vec::<Vec<VertexId>>::new()).unwrap()
    }

    /// Downward closure of the given simplices.
    pub fn from_simplices<I>(simplices: I) -> Result<Self, SimplexError>
    where
        I: IntoIterator<Item = Vec<VertexId>>,
    {
        let mut all: BTreeSet<(usize, Vec<VertexId>)> = BTreeSet::new();
        for s in simplices {
            if s.is_empty() {
                return Err(SimplexError::Empty);
            }
            let mut v = s.clone();
            v.sort_unstable();
            if v.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplexError::RepeatedVertex(s));
            }
            if all.contains(&(v.len(), v.clone())) {
                continue;
            }
            let n = v.len();
            for mask in 1u64..(1u64 << n) {
                let f: Vec<VertexId> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| v[i]).collect();
                all.insert((f.len(), f));
            }
        }
        let simplices: Vec<Vec<VertexId>> = all.into_iter().map(|(_, s)| s).collect();
        let index: HashMap<Vec<VertexId>, CellId> =
            simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut facets = vec![Vec::new(); simplices.len()];
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for j in 0..s.len() {
                let mut f = s.clone();
                f.remove(j);
                let fi = index[&f];
                facets[i].push(fi);
                cofacets[fi].push(i);
            }
            facets[i].sort_unstable();
        }
        for c in &mut cofacets {
            c.sort_unstable();
        }
        Ok(SimplicialComplex { simplices, index, facets, cofacets })
    }

    pub fn simplices(&self) -> &[Vec<VertexId>] {
        &self.simplices
    }

    pub fn simplex(&self, c: CellId) -> &[VertexId] {
        &self.simplices[c]
    }

    pub fn lookup(&self, s: &[VertexId]) -> Option<CellId> {
        let mut v = s.to_vec();
        v.sort_unstable();
        self.index.get(&v).copied()
    }

    pub fn contains(&self, s: &[VertexId]) -> bool {
        self.lookup(s).is_some()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.simplices.iter().take_while(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<VertexId>> {
        self.simplices.iter().filter(|s| s.len() == 2)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            out[s.len() - 1] += 1;
        }
        out
    }

    /// Maximal simplices in canonical order.
    pub fn maximal(&self) -> Vec<CellId> {
        (0..self.simplices.len()).filter(|&i| self.cofacets[i].is_empty()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    /// Full subcomplex spanned by `verts`.
    pub fn induced(&self, verts: &BTreeSet<VertexId>) -> SimplicialComplex {
        let keep: Vec<Vec<VertexId>> = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| verts.contains(v)))
            .cloned()
            .collect();
        SimplicialComplex::from_simplices(keep).unwrap()
    }

    pub fn is_connected(&self) -> bool {
        let vs = self.vertices();
        if vs.is_empty() {
            return true;
        }
        let pos: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = crate::unionfind::UnionFind::new(vs.len());
        for e in self.edges() {
            uf.union(pos[&e[0]], pos[&e[1]]);
        }
        uf.component_count() == 1
    }
}

impl CellPoset for SimplicialComplex {
    fn cell_count(&self) -> usize {
        self.simplices.len()
    }
    fn cell_dim(&self, c: CellId) -> usize {
        self.simplices[c].len() - 1
    }
    fn facets(&self, c: CellId) -> &[CellId] {
        &self.facets[c]
    }
    fn cofacets(&self, c: CellId) -> &[CellId] {
        &self.cofacets[c]
    }
    fn cell_vertices(&self, c: CellId) -> Vec<VertexId> {
        self.simplices[c].clone()
    }
    fn is_face(&self, a: CellId, b: CellId) -> bool {
        let (sa, sb) = (&self.simplices[a], &self.simplices[b]);
        sa.len() <= sb.len() && sa.iter().all(|v| sb.binary_search(v).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_triangle() {
        let k = SimplicialComplex::from_simplices(vec![vec![2, 0, 1]]).unwrap();
        assert_eq!(k.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(k.maximal(), vec![6]);
        assert!(k.contains(&[1, 2]));
    }

    #[test]
    fn repeated_vertex() {
        assert!(SimplicialComplex::from_simplices(vec![vec![1, 1]]).is_err());
    }
}
