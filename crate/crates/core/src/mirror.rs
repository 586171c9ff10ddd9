//! Mirrors of a folded cube complex: connected components of preimages of
//! codimension-one faces `{x_i = ε}` of the standard cube.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cubical::CubicalComplex;
use crate::folding::CubeFolding;
use crate::poset::{CellId, CellPoset};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mirror {
    pub id: usize,
    pub coord: usize,
    pub side: bool,
    /// Sorted cell ids, closed under taking faces.
    pub cells: Vec<CellId>,
}

impl Mirror {
    pub fn contains(&self, c: CellId) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Vertex cells of the mirror.
    pub fn vertices<'a>(&'a self, x: &'a CubicalComplex) -> impl Iterator<Item = CellId> + 'a {
        self.cells.iter().copied().filter(move |&c| x.cell(c).dim() == 0)
    }

    /// Validates a candidate mirror: every cell folds into `{x_coord = side}`,
    /// the set is a connected subcomplex, and it is a whole component of the
    /// preimage of that face.
    pub fn from_cells(
        x: &CubicalComplex,
        f: &CubeFolding,
        cells: &[CellId],
        coord: usize,
        side: bool,
    ) -> Result<Mirror, MirrorError> {
        let set: BTreeSet<CellId> = cells.iter().copied().collect();
        if set.is_empty() {
            return Err(MirrorError::Empty);
        }
        for &c in &set {
            if !folds_into(x, f, c, coord, side) {
                return Err(MirrorError::WrongFace(c));
            }
            if x.faces(c).iter().any(|g| !set.contains(g)) {
                return Err(MirrorError::NotClosed(c));
            }
        }
        let all = mirrors(x, f);
        let first = *set.iter().next().unwrap();
        let m = all
            .list
            .iter()
            .find(|m| m.coord == coord && m.side == side && m.contains(first))
            .expect("every folded cell lies in some mirror");
        if m.cells.len() != set.len() {
            // a proper piece of a component is either disconnected from the
            // rest or misses attached cells
            return Err(MirrorError::NotAComponent);
        }
        Ok(m.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MirrorError {
    #[error("empty cell set")]
    Empty,
    #[error("cell {0} does not fold into the requested face")]
    WrongFace(CellId),
    #[error("cell {0} has a face outside the set")]
    NotClosed(CellId),
    #[error("cell set is not a full component of the face preimage")]
    NotAComponent,
}

fn folds_into(x: &CubicalComplex, f: &CubeFolding, c: CellId, coord: usize, side: bool) -> bool {
    let (free, vals) = f.cell_face(x, c);
    free & (1 << coord) == 0 && ((vals >> coord) & 1 == 1) == side
}

/// All mirrors in canonical order `(coord, side, least cell)`, plus the
/// mirrors containing each cell.
#[derive(Debug, Clone)]
pub struct Mirrors {
    pub list: Vec<Mirror>,
    pub of_cell: Vec<Vec<usize>>,
}

impl Mirrors {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// The mirror containing `c` on the given face, if `c` folds into it.
    pub fn on_face(&self, c: CellId, coord: usize, side: bool) -> Option<usize> {
        self.of_cell[c].iter().copied().find(|&m| self.list[m].coord == coord && self.list[m].side == side)
    }

    /// Whether two mirrors share a vertex.
    pub fn meet(&self, a: usize, b: usize) -> bool {
        let (ma, mb) = (&self.list[a], &self.list[b]);
        ma.cells.iter().any(|c| mb.contains(*c))
    }
}

pub fn mirrors(x: &CubicalComplex, f: &CubeFolding) -> Mirrors {
    let faces: Vec<(u32, u32)> = (0..x.len()).map(|c| f.cell_face(x, c)).collect();
    let mut list = Vec::new();
    for coord in 0..f.dim {
        for side in [false, true] {
            let bit = 1u32 << coord;
            let inside: Vec<CellId> = (0..x.len())
                .filter(|&c| faces[c].0 & bit == 0 && ((faces[c].1 & bit != 0) == side))
                .collect();
            if inside.is_empty() {
                continue;
            }
            // components through shared vertices
            let mut uf = UnionFind::new(x.len());
            for &c in &inside {
                for &v in x.corner_cells(c).iter() {
                    uf.union(c, v);
                }
            }
            let mut groups: std::collections::BTreeMap<usize, Vec<CellId>> = Default::default();
            for &c in &inside {
                groups.entry(uf.find(c)).or_default().push(c);
            }
            let mut comps: Vec<Vec<CellId>> = groups.into_values().collect();
            comps.sort();
            for cells in comps {
                list.push(Mirror { id: list.len(), coord, side, cells });
            }
        }
    }
    let mut of_cell = vec![Vec::new(); x.len()];
    for m in &list {
        for &c in &m.cells {
            of_cell[c].push(m.id);
        }
    }
    Mirrors { list, of_cell }
}

/// A cell of a mirror with two distinct maximal cells containing it whose
/// intersection lies in the mirror. Stored with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Framing {
    pub cell: CellId,
    pub first: CellId,
    pub second: CellId,
}

/// Maximal cells containing each cell.
pub fn maximal_cofaces(x: &CubicalComplex) -> Vec<Vec<CellId>> {
    let mut out = vec![Vec::new(); x.len()];
    for m in x.maximal() {
        for f in x.faces(m) {
            out[f].push(m);
        }
    }
    out
}

pub fn framings(x: &CubicalComplex, m: &Mirror, tops: &[Vec<CellId>]) -> Vec<Framing> {
    let mut out = Vec::new();
    for &s in &m.cells {
        let ts = &tops[s];
        for (i, &a) in ts.iter().enumerate() {
            for &b in &ts[i + 1..] {
                if let Some(Some(g)) = x.common_face(a, b) {
                    if m.contains(g) {
                        out.push(Framing { cell: s, first: a, second: b });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub mirror: usize,
    /// Component of `X \ M` for each maximal cell, in `x.maximal()` order.
    pub top_component: Vec<(CellId, usize)>,
    pub components: usize,
    pub framings: Vec<(Framing, bool)>,
    /// Every framing is separated.
    pub separating: bool,
}

/// Components of the complement of a mirror, read off maximal cells that
/// share a cell outside the mirror, and the verdict for each framing.
pub fn mirror_separates(x: &CubicalComplex, m: &Mirror) -> SeparationReport {
    let tops = maximal_cofaces(x);
    mirror_separates_with(x, m, &tops)
}

pub fn mirror_separates_with(x: &CubicalComplex, m: &Mirror, tops: &[Vec<CellId>]) -> SeparationReport {
    let maximal = x.maximal();
    let pos: std::collections::HashMap<CellId, usize> = maximal.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut uf = UnionFind::new(maximal.len());
    for c in 0..x.len() {
        if m.contains(c) {
            continue;
        }
        let ts = &tops[c];
        for w in ts.windows(2) {
            uf.union(pos[&w[0]], pos[&w[1]]);
        }
    }
    let labels = uf.labels();
    let components = labels.iter().max().map_or(0, |&l| l + 1);
    let fr = framings(x, m, tops);
    let verdicts: Vec<(Framing, bool)> =
        fr.into_iter().map(|f| (f, labels[pos[&f.first]] != labels[pos[&f.second]])).collect();
    let separating = verdicts.iter().all(|(_, s)| *s);
    SeparationReport {
        mirror: m.id,
        top_component: maximal.iter().zip(&labels).map(|(&c, &l)| (c, l)).collect(),
        components,
        framings: verdicts,
        separating,
    }
}
