//! The dual complex of a folded cube complex.
//!
//! Dual vertices are the cells of the source complex, with height equal
//! to dimension. Dual edges join a cell to its codimension-one faces, and
//! every interval `[λ, μ]` of the face poset spans a dual cube of
//! dimension `dim μ - dim λ`. The dual is materialized as a cube complex
//! whose vertex ids are source cell ids.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::cube::VertexId;
use crate::cubical::{CubicalComplex, ValidationError};
use crate::curvature::non_flag_witness;
use crate::folding::{verify_folding, CubeFolding, FoldError, Verdict};
use crate::mirror::{maximal_cofaces, mirror_separates_with, mirrors, Mirrors, SeparationReport};
use crate::poset::{link, CellId, CellPoset};
use crate::subdivision::interval_corners;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("source complex is not admissible: {0}")]
    NotAdmissible(ValidationError),
    #[error("labels are not a folding: {0:?}")]
    NotAFolding(Verdict),
    #[error(transparent)]
    Fold(#[from] FoldError),
}

#[derive(Debug, Clone)]
pub struct DualComplex {
    pub source: CubicalComplex,
    pub folding: CubeFolding,
    pub mirrors: Mirrors,
    /// The dual cubes; vertex `v` is source cell `v`.
    pub cubes: CubicalComplex,
    adjacency: Vec<Vec<CellId>>,
    tops: Vec<Vec<CellId>>,
    /// Per mirror: component of the dual minus the mirror for each dual
    /// vertex, `None` on the mirror itself.
    components: Vec<Vec<Option<usize>>>,
    separation: Vec<SeparationReport>,
}

/// Builds the dual of an admissible folded cube complex.
pub fn build_dual(y: &CubicalComplex, f: &CubeFolding) -> Result<DualComplex, DualError> {
    y.check_admissible().map_err(DualError::NotAdmissible)?;
    let v = verify_folding(y, f)?;
    if !v.is_valid() {
        return Err(DualError::NotAFolding(v));
    }
    let mut raw = Vec::new();
    for m in y.maximal() {
        for v in y.corner_cells(m) {
            raw.push(interval_corners(y, v, m));
        }
    }
    let cubes = CubicalComplex::from_cubes(raw).expect("intervals are cubes");
    let adjacency: Vec<Vec<CellId>> = (0..y.len())
        .map(|c| {
            let mut a: Vec<CellId> = y.facets(c).iter().chain(y.cofacets(c)).copied().collect();
            a.sort_unstable();
            a
        })
        .collect();
    let tops = maximal_cofaces(y);
    let ms = mirrors(y, f);
    let mut components = Vec::with_capacity(ms.len());
    let mut separation = Vec::with_capacity(ms.len());
    for m in &ms.list {
        let mut lab: Vec<Option<usize>> = vec![None; y.len()];
        let mut next = 0;
        for s in 0..y.len() {
            if lab[s].is_some() || m.contains(s) {
                continue;
            }
            lab[s] = Some(next);
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adjacency[u] {
                    if lab[w].is_none() && !m.contains(w) {
                        lab[w] = Some(next);
                        q.push_back(w);
                    }
                }
            }
            next += 1;
        }
        components.push(lab);
        separation.push(mirror_separates_with(y, m, &tops));
    }
    Ok(DualComplex {
        source: y.clone(),
        folding: f.clone(),
        mirrors: ms,
        cubes,
        adjacency,
        tops,
        components,
        separation,
    })
}

impl DualComplex {
    pub fn vertex_count(&self) -> usize {
        self.source.len()
    }

    pub fn height(&self, v: CellId) -> usize {
        self.source.cell(v).dim()
    }

    pub fn neighbors(&self, v: CellId) -> &[CellId] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: CellId, v: CellId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Maximal source cells containing `v`.
    pub fn tops_of(&self, v: CellId) -> &[CellId] {
        &self.tops[v]
    }

    /// Whether `lo ⊆ hi` in the source with `dim hi = dim lo + 2`, which
    /// is exactly when the interval spans a dual square.
    pub fn is_square(&self, lo: CellId, hi: CellId) -> bool {
        self.height(hi) == self.height(lo) + 2 && self.source.is_face(lo, hi)
    }

    /// Vertices of the dual square `[lo, hi]`.
    pub fn square_vertices(&self, lo: CellId, hi: CellId) -> Vec<CellId> {
        interval_corners(&self.source, lo, hi).into_iter().map(|v| v as CellId).collect()
    }

    /// Component label of `v` in the dual minus mirror `m`.
    pub fn component(&self, m: usize, v: CellId) -> Option<usize> {
        self.components[m][v]
    }

    pub fn component_count(&self, m: usize) -> usize {
        self.components[m].iter().flatten().max().map_or(0, |&c| c + 1)
    }

    pub fn in_mirror(&self, m: usize, v: CellId) -> bool {
        self.mirrors.list[m].contains(v)
    }

    pub fn separation(&self, m: usize) -> &SeparationReport {
        &self.separation[m]
    }

    /// Every framing of every mirror is separated.
    pub fn all_mirrors_separate(&self) -> bool {
        self.separation.iter().all(|s| s.separating)
    }

    /// Least mirror that has an unseparated framing.
    pub fn first_nonseparating(&self) -> Option<usize> {
        self.separation.iter().position(|s| !s.separating)
    }

    /// The dual tile of a maximal source cell: the faces of that cell.
    pub fn dual_tile(&self, top: CellId) -> Vec<CellId> {
        self.source.faces(top)
    }

    /// Largest common face of a set of source cells.
    pub fn lower_cell(&self, cells: &[CellId]) -> Option<CellId> {
        let mut common: Option<BTreeSet<CellId>> = None;
        for &c in cells {
            let fs: BTreeSet<CellId> = self.source.faces(c).into_iter().collect();
            common = Some(match common {
                None => fs,
                Some(s) => s.intersection(&fs).copied().collect(),
            });
        }
        let common = common?;
        let best = common.iter().copied().max_by_key(|&c| self.height(c))?;
        common.iter().all(|&c| self.source.is_face(c, best)).then_some(best)
    }

    /// Smallest cell containing every cell of the set.
    pub fn upper_cell(&self, cells: &[CellId]) -> Option<CellId> {
        let mut common: Option<BTreeSet<CellId>> = None;
        for &c in cells {
            let fs: BTreeSet<CellId> = self.source.cofaces(c).into_iter().collect();
            common = Some(match common {
                None => fs,
                Some(s) => s.intersection(&fs).copied().collect(),
            });
        }
        let common = common?;
        let best = common.iter().copied().min_by_key(|&c| self.height(c))?;
        common.iter().all(|&c| self.source.is_face(best, c)).then_some(best)
    }
}

/// Which axiom failed, with the dual vertices witnessing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{axiom} fails at {witness:?}")]
pub struct DualViolation {
    pub axiom: &'static str,
    pub witness: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualAxiomReport {
    pub vertices: usize,
    pub cubes_by_dim: Vec<usize>,
    pub max_height: usize,
}

/// Checks the axioms of a dual complex on `d.cubes`, and that every dual
/// cube is the interval between its lowest and highest vertex.
pub fn verify_dual_axioms(d: &DualComplex) -> Result<DualAxiomReport, DualViolation> {
    let heights: Vec<usize> = (0..d.vertex_count()).map(|v| d.height(v)).collect();
    let report = check_dual_structure(&d.cubes, &heights)?;
    for c in 0..d.cubes.len() {
        let cube = d.cubes.cell(c);
        let corners = cube.corners();
        let lo = *corners.iter().min_by_key(|&&v| heights[v as usize]).unwrap() as CellId;
        let hi = *corners.iter().max_by_key(|&&v| heights[v as usize]).unwrap() as CellId;
        let between: BTreeSet<CellId> = d
            .source
            .faces(hi)
            .into_iter()
            .filter(|&g| d.source.is_face(lo, g))
            .collect();
        let verts: BTreeSet<CellId> = corners.iter().map(|&v| v as CellId).collect();
        if between != verts {
            return Err(DualViolation { axiom: "cube is a poset interval", witness: cube.vertex_set() });
        }
    }
    Ok(report)
}

/// Structural checks that only use the cube complex and a height function
/// on its vertices (indexed by vertex id).
pub fn check_dual_structure(cubes: &CubicalComplex, heights: &[usize]) -> Result<DualAxiomReport, DualViolation> {
    let h = |v: VertexId| heights[v as usize];
    // edges change height by one
    for e in cubes.cells_of_dim(1) {
        let c = cubes.cell(e).corners();
        if h(c[0]).abs_diff(h(c[1])) != 1 {
            return Err(DualViolation { axiom: "edge height step", witness: c.to_vec() });
        }
    }
    // height pattern: unique bottom, height grows with distance from it
    for id in 0..cubes.len() {
        let cube = cubes.cell(id);
        let c = cube.corners();
        let min = c.iter().map(|&v| h(v)).min().unwrap();
        let bottoms: Vec<usize> = (0..c.len()).filter(|&i| h(c[i]) == min).collect();
        let ok = bottoms.len() == 1
            && (0..c.len()).all(|i| h(c[i]) == min + (i ^ bottoms[0]).count_ones() as usize);
        if !ok {
            return Err(DualViolation { axiom: "cube height pattern", witness: cube.vertex_set() });
        }
    }
    // vertex links: flag, and so are their ascending and descending parts
    for v in 0..cubes.vertex_count() {
        let vid = cubes.cell(v).corners()[0];
        let l = link(cubes, v);
        if let Some(w) = non_flag_witness(&l.complex) {
            return Err(DualViolation { axiom: "flag vertex link", witness: with_vertex(vid, cubes, &w) });
        }
        let other_end = |e: VertexId| {
            let c = cubes.cell(e as CellId).corners();
            if c[0] == vid {
                c[1]
            } else {
                c[0]
            }
        };
        let up: BTreeSet<VertexId> = l.complex.vertices().into_iter().filter(|&e| h(other_end(e)) > h(vid)).collect();
        let down: BTreeSet<VertexId> = l.complex.vertices().into_iter().filter(|&e| h(other_end(e)) < h(vid)).collect();
        for (name, part) in [("flag ascending link", up), ("flag descending link", down)] {
            if let Some(w) = non_flag_witness(&l.complex.induced(&part)) {
                return Err(DualViolation { axiom: name, witness: with_vertex(vid, cubes, &w) });
            }
        }
    }
    // no phantom squares or 3-cubes in the 1-skeleton
    let adj = cubes.vertex_adjacency();
    let nbr: Vec<HashSet<CellId>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let vid = |c: CellId| cubes.cell(c).corners()[0];
    for v in 0..adj.len() {
        for (i, &a) in adj[v].iter().enumerate() {
            for &b in &adj[v][i + 1..] {
                for &w in &adj[a] {
                    if w != v && w > v && nbr[b].contains(&w) {
                        let raw = vec![vid(v), vid(a), vid(b), vid(w)];
                        if cubes.lookup(&raw).is_none() {
                            return Err(DualViolation { axiom: "4-cycle spans a square", witness: raw });
                        }
                    }
                }
            }
        }
    }
    for v in 0..adj.len() {
        let n = &adj[v];
        for (i, &a) in n.iter().enumerate() {
            for (j, &b) in n.iter().enumerate().skip(i + 1) {
                for &c in &n[j + 1..] {
                    let corner = |p: CellId, q: CellId| -> Vec<CellId> {
                        adj[p].iter().copied().filter(|&w| w != v && nbr[q].contains(&w)).collect()
                    };
                    for ab in corner(a, b) {
                        for ac in corner(a, c) {
                            for bc in corner(b, c) {
                                if ab == ac || ab == bc || ac == bc {
                                    continue;
                                }
                                for &abc in &adj[ab] {
                                    if abc == a || abc == b || !nbr[ac].contains(&abc) || !nbr[bc].contains(&abc) {
                                        continue;
                                    }
                                    let raw: Vec<VertexId> =
                                        [v, a, b, ab, c, ac, bc, abc].iter().map(|&x| vid(x)).collect();
                                    if cubes.lookup(&raw).is_none() {
                                        return Err(DualViolation { axiom: "3-cube graph spans a cube", witness: raw });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(DualAxiomReport {
        vertices: cubes.vertex_count(),
        cubes_by_dim: cubes.count_by_dim(),
        max_height: heights.iter().copied().max().unwrap_or(0),
    })
}

fn with_vertex(v: VertexId, cubes: &CubicalComplex, link_witness: &[VertexId]) -> Vec<VertexId> {
    let mut out = vec![v];
    for &e in link_witness {
        out.extend(cubes.cell(e as CellId).corners().iter().copied().filter(|&w| w != v));
    }
    out
}
