//! Finite cubical complexes with vertex-determined cells.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::cube::{Cube, CubeError, VertexId};
use crate::poset::{CellId, CellPoset};
use crate::unionfind::UnionFind;

/// Why a list of cubes is not a valid cube complex.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum ValidationError {
    #[error("corner array of length {0} is not a power of two")]
    BadCornerCount(usize),
    #[error("cube {0:?} repeats a vertex")]
    RepeatedCorner(Vec<VertexId>),
    #[error("cubes {a} and {b} meet in a vertex set that is not a common face")]
    NonFaceIntersection { a: String, b: String },
    #[error("face {face} of cube {cube} is not listed")]
    MissingFace { cube: String, face: String },
}

impl From<CubeError> for ValidationError {
    fn from(e: CubeError) -> Self {
        match e {
            CubeError::BadCornerCount(n) => ValidationError::BadCornerCount(n),
            CubeError::RepeatedCorner(v) => ValidationError::RepeatedCorner(v),
        }
    }
}

/// A cube complex closed under faces. Cells are sorted by dimension and
/// then by canonical corner array, so vertices come first in id order.
#[derive(Debug, Clone)]
pub struct CubicalComplex {
    cells: Vec<Cube>,
    index: HashMap<Vec<VertexId>, CellId>,
    facets: Vec<Vec<CellId>>,
    cofacets: Vec<Vec<CellId>>,
    faces: Vec<Vec<CellId>>,
    vertex_count: usize,
}

impl PartialEq for CubicalComplex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}
impl Eq for CubicalComplex {}

impl CubicalComplex {
    pub fn empty() -> Self {
        Self::from_cubes(Vec::<Vec<VertexId>>::new()).unwrap()
    }

    /// Builds the face closure of raw corner arrays. Does not check that
    /// cubes meet in faces; see [`validate_cubical`].
    pub fn from_cubes<I>(raw: I) -> Result<Self, ValidationError>
    where
        I: IntoIterator<Item = Vec<VertexId>>,
    {
        let mut all: BTreeSet<(usize, Cube)> = BTreeSet::new();
        for r in raw {
            let c = Cube::new(r)?;
            if all.contains(&(c.dim(), c.clone())) {
                continue;
            }
            for f in c.all_faces() {
                all.insert((f.dim(), f));
            }
        }
        Ok(Self::from_closed(all.into_iter().map(|(_, c)| c).collect()))
    }

    fn from_closed(cells: Vec<Cube>) -> Self {
        let index: HashMap<Vec<VertexId>, CellId> =
            cells.iter().enumerate().map(|(i, c)| (c.corners().to_vec(), i)).collect();
        let n = cells.len();
        let mut facets = vec![Vec::new(); n];
        let mut cofacets = vec![Vec::new(); n];
        let mut faces = vec![Vec::new(); n];
        for (i, c) in cells.iter().enumerate() {
            let mut fs: Vec<CellId> = c.all_faces().iter().map(|f| index[f.corners()]).collect();
            fs.sort_unstable();
            faces[i] = fs;
            for a in 0..c.dim() {
                for side in [false, true] {
                    let f = index[c.facet(a, side).corners()];
                    facets[i].push(f);
                    cofacets[f].push(i);
                }
            }
            facets[i].sort_unstable();
        }
        for c in &mut cofacets {
            c.sort_unstable();
        }
        let vertex_count = cells.iter().take_while(|c| c.dim() == 0).count();
        CubicalComplex { cells, index, facets, cofacets, faces, vertex_count }
    }

    pub fn cells(&self) -> &[Cube] {
        &self.cells
    }

    pub fn cell(&self, c: CellId) -> &Cube {
        &self.cells[c]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell id of a raw corner array (any presentation).
    pub fn lookup(&self, raw: &[VertexId]) -> Option<CellId> {
        if raw.is_empty() || !raw.len().is_power_of_two() {
            return None;
        }
        let canon = crate::cube::canonical_corners(raw);
        self.index.get(&canon).copied()
    }

    pub fn lookup_canonical(&self, canon: &[VertexId]) -> Option<CellId> {
        self.index.get(canon).copied()
    }

    pub fn vertex_cell(&self, v: VertexId) -> Option<CellId> {
        self.cells[..self.vertex_count].binary_search_by_key(&v, |c| c.corners()[0]).ok()
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.cells[..self.vertex_count].iter().map(|c| c.corners()[0]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.last().map(Cube::dim)
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).filter(move |&i| self.cells[i].dim() == d)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            out[c.dim()] += 1;
        }
        out
    }

    /// Cells of top dimension.
    pub fn top_cells(&self) -> Vec<CellId> {
        match self.dim() {
            Some(d) => self.cells_of_dim(d).collect(),
            None => Vec::new(),
        }
    }

    pub fn maximal(&self) -> Vec<CellId> {
        (0..self.cells.len()).filter(|&i| self.cofacets[i].is_empty()).collect()
    }

    /// Every cell is a face of a top-dimensional cell.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.dim().unwrap_or(0);
        self.maximal().iter().all(|&c| self.cells[c].dim() == d)
    }

    /// Every codimension-one cell lies in at least two top cells.
    pub fn is_boundaryless(&self) -> bool {
        match self.dim() {
            None | Some(0) => true,
            Some(d) => self.cells_of_dim(d - 1).all(|c| self.cofacets[c].len() >= 2),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().map(|c| if c.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components().iter().max().map_or(true, |&m| m == 0)
    }

    /// Connected component label of each vertex cell.
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for c in self.cells_of_dim(1) {
            let f = &self.facets[c];
            uf.union(f[0], f[1]);
        }
        uf.labels()
    }

    /// Endpoints (vertex cells) of an edge.
    pub fn edge_ends(&self, e: CellId) -> (CellId, CellId) {
        let f = &self.facets[e];
        (f[0], f[1])
    }

    /// The 1-skeleton as adjacency lists on vertex cells.
    pub fn vertex_adjacency(&self) -> Vec<Vec<CellId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in self.cells_of_dim(1) {
            let (a, b) = self.edge_ends(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Vertex cells of a cell, in corner order.
    pub fn corner_cells(&self, c: CellId) -> Vec<CellId> {
        self.cells[c].corners().iter().map(|&v| self.vertex_cell(v).unwrap()).collect()
    }

    /// Subcomplex generated by the given cells (face closure), as a new
    /// complex over the same vertex ids.
    pub fn subcomplex(&self, cells: impl IntoIterator<Item = CellId>) -> CubicalComplex {
        let mut keep = BTreeSet::new();
        for c in cells {
            keep.extend(self.faces[c].iter().copied());
        }
        Self::from_closed(keep.into_iter().map(|c| self.cells[c].clone()).collect())
    }

    /// Checks that every pair of maximal cells sharing a vertex meets in a
    /// common face.
    pub fn check_admissible(&self) -> Result<(), ValidationError> {
        let maximal = self.maximal();
        let mut by_vertex: Vec<Vec<CellId>> = vec![Vec::new(); self.vertex_count];
        for &m in &maximal {
            for &f in &self.faces[m] {
                if f < self.vertex_count {
                    by_vertex[f].push(m);
                }
            }
        }
        let mut checked = std::collections::HashSet::new();
        for list in &by_vertex {
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    if !checked.insert((a, b)) {
                        continue;
                    }
                    if self.common_face(a, b).is_none() {
                        return Err(ValidationError::NonFaceIntersection {
                            a: self.cells[a].to_string(),
                            b: self.cells[b].to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The face `a ∩ b` when the vertex intersection is a face of both.
    /// `Some(None)` means the cells are disjoint.
    pub fn common_face(&self, a: CellId, b: CellId) -> Option<Option<CellId>> {
        let va = self.cells[a].vertex_set();
        let vb = self.cells[b].vertex_set();
        let common: Vec<VertexId> = va.iter().copied().filter(|v| vb.binary_search(v).is_ok()).collect();
        if common.is_empty() {
            return Some(None);
        }
        let (ma, xa) = self.cells[a].locate_face(&common)?;
        let fa = crate::cube::canonical_corners(&self.cells[a].face_corners(ma, xa));
        let fa = self.index[&fa];
        if self.faces[b].binary_search(&fa).is_ok() {
            Some(Some(fa))
        } else {
            None
        }
    }

    /// Face of cell `c` given by a vertex subset.
    pub fn face_by_vertices(&self, c: CellId, verts: &[VertexId]) -> Option<CellId> {
        let (m, x) = self.cells[c].locate_face(verts)?;
        let canon = crate::cube::canonical_corners(&self.cells[c].face_corners(m, x));
        self.index.get(&canon).copied()
    }
}

impl CellPoset for CubicalComplex {
    fn cell_count(&self) -> usize {
        self.cells.len()
    }
    fn cell_dim(&self, c: CellId) -> usize {
        self.cells[c].dim()
    }
    fn facets(&self, c: CellId) -> &[CellId] {
        &self.facets[c]
    }
    fn cofacets(&self, c: CellId) -> &[CellId] {
        &self.cofacets[c]
    }
    fn cell_vertices(&self, c: CellId) -> Vec<VertexId> {
        self.cells[c].vertex_set()
    }
    fn faces(&self, c: CellId) -> Vec<CellId> {
        self.faces[c].clone()
    }
    fn is_face(&self, a: CellId, b: CellId) -> bool {
        self.faces[b].binary_search(&a).is_ok()
    }
}

/// Builds the face closure and checks admissibility.
pub fn validate_cubical<I>(raw: I) -> Result<CubicalComplex, ValidationError>
where
    I: IntoIterator<Item = Vec<VertexId>>,
{
    let x = CubicalComplex::from_cubes(raw)?;
    x.check_admissible()?;
    Ok(x)
}

/// Like [`validate_cubical`] but additionally requires the input list to
/// contain every face explicitly.
pub fn validate_cubical_closed(raw: Vec<Vec<VertexId>>) -> Result<CubicalComplex, ValidationError> {
    let mut listed = BTreeSet::new();
    for r in &raw {
        listed.insert(Cube::new(r.clone())?);
    }
    for c in &listed {
        for f in c.all_faces() {
            if !listed.contains(&f) {
                return Err(ValidationError::MissingFace { cube: c.to_string(), face: f.to_string() });
            }
        }
    }
    validate_cubical(raw)
}
