//! Foldings of cube complexes onto `□ⁿ` and of simplicial complexes onto
//! `Δⁿ`.
//!
//! A cubical label is a bitmask: bit `i` is coordinate `x_i` of the image
//! vertex of the standard cube. A simplicial label is the index of the
//! image vertex of the standard simplex.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::cube::VertexId;
use crate::cubical::CubicalComplex;
use crate::poset::{CellId, CellPoset};
use crate::simplicial::SimplicialComplex;
use crate::subdivision::BarycentricSubdivision;
use crate::unionfind::{ParityUnionFind, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FoldError {
    #[error("vertex {0} has no label")]
    UnlabeledVertex(VertexId),
    #[error("complex carries no subdivision provenance")]
    NotASubdivision,
    #[error("complex is not foldable: {0}")]
    NotFoldable(Obstruction),
}

/// Why [`find_folding`] failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    /// Two opposite edges of this square are parallel to the other pair.
    SelfParallelSquare { square: CellId },
    /// Odd cycle of vertex cells in a one-dimensional complex.
    OddCycle { cycle: Vec<CellId> },
    /// Every coordinate assignment of the parallelism classes failed.
    DeadEnd { nodes: usize, deepest: usize, classes: usize },
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obstruction::SelfParallelSquare { square } => write!(f, "square {square} is self-parallel"),
            Obstruction::OddCycle { cycle } => write!(f, "odd cycle through cells {cycle:?}"),
            Obstruction::DeadEnd { nodes, deepest, classes } => write!(
                f,
                "coordinate search exhausted after {nodes} nodes (deepest {deepest} of {classes} classes)"
            ),
        }
    }
}

/// Vertex labels of a cubical folding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeFolding {
    pub dim: usize,
    pub labels: BTreeMap<VertexId, u32>,
}

/// Vertex labels of a simplicial folding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexFolding {
    pub dim: usize,
    pub labels: BTreeMap<VertexId, u32>,
}

/// Result of a verification: `Ok` or the first bad cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Invalid { cell: CellId, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl CubeFolding {
    pub fn label(&self, v: VertexId) -> Result<u32, FoldError> {
        self.labels.get(&v).copied().ok_or(FoldError::UnlabeledVertex(v))
    }

    /// `(free, fixed values)` of the face of `□ⁿ` a cell maps onto.
    pub fn cell_face(&self, x: &CubicalComplex, c: CellId) -> (u32, u32) {
        let mut and = u32::MAX;
        let mut or = 0;
        for &v in x.cell(c).corners() {
            let l = self.labels[&v];
            and &= l;
            or |= l;
        }
        let free = and ^ or;
        (free, and)
    }

    /// Coordinate flipped along an edge.
    pub fn edge_coordinate(&self, x: &CubicalComplex, e: CellId) -> usize {
        self.cell_face(x, e).0.trailing_zeros() as usize
    }
}

/// Checks that `f` maps every cube of `x` bijectively onto a face of `□ⁿ`
/// compatibly with the cube structure.
pub fn verify_folding(x: &CubicalComplex, f: &CubeFolding) -> Result<Verdict, FoldError> {
    for v in x.vertex_ids() {
        f.label(v)?;
    }
    let limit = if f.dim >= 32 { u32::MAX } else { (1u32 << f.dim) - 1 };
    for (i, cube) in x.cells().iter().enumerate() {
        let corners = cube.corners();
        let l0 = f.labels[&corners[0]];
        if l0 & !limit != 0 {
            return Ok(Verdict::Invalid { cell: i, reason: format!("label {l0:b} outside the {}-cube", f.dim) });
        }
        let k = cube.dim();
        let mut dirs = Vec::with_capacity(k);
        for a in 0..k {
            let d = f.labels[&corners[1 << a]] ^ l0;
            if d.count_ones() != 1 || dirs.contains(&d) {
                return Ok(Verdict::Invalid { cell: i, reason: format!("axis {a} does not flip a fresh coordinate") });
            }
            dirs.push(d);
        }
        for (b, &v) in corners.iter().enumerate() {
            let mut want = l0;
            for (a, d) in dirs.iter().enumerate() {
                if b & (1 << a) != 0 {
                    want ^= d;
                }
            }
            if f.labels[&v] != want {
                return Ok(Verdict::Invalid { cell: i, reason: format!("corner {b} is mislabeled") });
            }
        }
    }
    Ok(Verdict::Valid)
}

/// Checks that `f` is injective on every simplex with values in `0..=dim`.
pub fn verify_simplicial_folding(k: &SimplicialComplex, f: &SimplexFolding) -> Result<Verdict, FoldError> {
    for v in k.vertices() {
        let l = *f.labels.get(&v).ok_or(FoldError::UnlabeledVertex(v))?;
        if l as usize > f.dim {
            return Ok(Verdict::Invalid { cell: k.lookup(&[v]).unwrap(), reason: format!("label {l} > {}", f.dim) });
        }
    }
    for (i, s) in k.simplices().iter().enumerate() {
        let mut seen = 0u64;
        for v in s {
            let bit = 1u64 << f.labels[v];
            if seen & bit != 0 {
                return Ok(Verdict::Invalid { cell: i, reason: "repeated label".into() });
            }
            seen |= bit;
        }
    }
    Ok(Verdict::Valid)
}

/// Parallelism classes of edges: the transitive closure of "opposite in a
/// square". Returns the class of every edge (indexed by cell id, `None`
/// for non-edges) and the number of classes. Classes are numbered by their
/// least edge.
pub fn parallelism_classes(x: &CubicalComplex) -> (Vec<Option<usize>>, usize) {
    let n = x.len();
    let mut uf = UnionFind::new(n);
    for s in x.cells_of_dim(2) {
        let c = x.cell(s);
        for a in 0..2 {
            let e0 = x.lookup_canonical(c.facet(a, false).corners()).unwrap();
            let e1 = x.lookup_canonical(c.facet(a, true).corners()).unwrap();
            uf.union(e0, e1);
        }
    }
    let mut root_class = BTreeMap::new();
    let mut out = vec![None; n];
    for e in x.cells_of_dim(1) {
        let r = uf.find(e);
        let next = root_class.len();
        out[e] = Some(*root_class.entry(r).or_insert(next));
    }
    (out, root_class.len())
}

/// Searches for a folding of `x` onto `□ⁿ`, `n = dim x`.
///
/// Parallel edges must flip the same coordinate, so the search colors
/// parallelism classes by coordinates (classes crossing in a square get
/// different colors) and keeps, per coordinate, a parity union-find that
/// rejects a partial coloring as soon as a cycle flips a coordinate an odd
/// number of times.
pub fn find_folding(x: &CubicalComplex) -> Result<CubeFolding, FoldError> {
    let n = x.dim().unwrap_or(0);
    if n == 0 {
        let labels = x.vertex_ids().into_iter().map(|v| (v, 0)).collect();
        return Ok(CubeFolding { dim: 0, labels });
    }
    let (class_of, nclasses) = parallelism_classes(x);
    let mut conflicts = vec![Vec::new(); nclasses];
    for s in x.cells_of_dim(2) {
        let c = x.cell(s);
        let a = class_of[x.lookup_canonical(c.facet(0, false).corners()).unwrap()].unwrap();
        let b = class_of[x.lookup_canonical(c.facet(1, false).corners()).unwrap()].unwrap();
        if a == b {
            return Err(FoldError::NotFoldable(Obstruction::SelfParallelSquare { square: s }));
        }
        conflicts[a].push(b);
        conflicts[b].push(a);
    }
    for c in &mut conflicts {
        c.sort_unstable();
        c.dedup();
    }
    let mut members = vec![Vec::new(); nclasses];
    for e in x.cells_of_dim(1) {
        let (a, b) = x.edge_ends(e);
        members[class_of[e].unwrap()].push((a, b));
    }
    // breadth-first order over the conflict graph, least class first
    let mut order = Vec::with_capacity(nclasses);
    let mut seen = vec![false; nclasses];
    for start in 0..nclasses {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(c) = q.pop_front() {
            order.push(c);
            for &d in &conflicts[c] {
                if !seen[d] {
                    seen[d] = true;
                    q.push_back(d);
                }
            }
        }
    }
    let mut search = Search {
        n,
        order: &order,
        conflicts: &conflicts,
        members: &members,
        color: vec![usize::MAX; nclasses],
        nodes: 0,
        deepest: 0,
    };
    let ufs = vec![ParityUnionFind::new(x.vertex_count()); n];
    if !search.run(0, ufs) {
        if n == 1 {
            if let Some(cycle) = odd_cycle(x) {
                return Err(FoldError::NotFoldable(Obstruction::OddCycle { cycle }));
            }
        }
        return Err(FoldError::NotFoldable(Obstruction::DeadEnd {
            nodes: search.nodes,
            deepest: search.deepest,
            classes: nclasses,
        }));
    }
    let color = search.color;
    // propagate labels from the least vertex of each component
    let adj = x.vertex_adjacency();
    let mut lab: Vec<Option<u32>> = vec![None; x.vertex_count()];
    let mut edge_color = BTreeMap::new();
    for e in x.cells_of_dim(1) {
        let (a, b) = x.edge_ends(e);
        edge_color.insert((a.min(b), a.max(b)), color[class_of[e].unwrap()]);
    }
    for s in 0..x.vertex_count() {
        if lab[s].is_some() {
            continue;
        }
        lab[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if lab[w].is_none() {
                    let c = edge_color[&(u.min(w), u.max(w))];
                    lab[w] = Some(lab[u].unwrap() ^ (1 << c));
                    q.push_back(w);
                }
            }
        }
    }
    let ids = x.vertex_ids();
    let labels = ids.iter().zip(lab).map(|(&v, l)| (v, l.unwrap())).collect();
    let f = CubeFolding { dim: n, labels };
    debug_assert!(verify_folding(x, &f).unwrap().is_valid());
    Ok(f)
}

struct Search<'a> {
    n: usize,
    order: &'a [usize],
    conflicts: &'a [Vec<usize>],
    members: &'a [Vec<(CellId, CellId)>],
    color: Vec<usize>,
    nodes: usize,
    deepest: usize,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, ufs: Vec<ParityUnionFind>) -> bool {
        self.nodes += 1;
        self.deepest = self.deepest.max(depth);
        if depth == self.order.len() {
            return true;
        }
        let class = self.order[depth];
        'colors: for col in 0..self.n {
            if self.conflicts[class].iter().any(|&d| self.color[d] == col) {
                continue;
            }
            let mut next = ufs.clone();
            for &(a, b) in &self.members[class] {
                for (i, uf) in next.iter_mut().enumerate() {
                    if !uf.relate(a, b, u8::from(i == col)) {
                        continue 'colors;
                    }
                }
            }
            self.color[class] = col;
            if self.run(depth + 1, next) {
                return true;
            }
            self.color[class] = usize::MAX;
        }
        false
    }
}

/// Shortest odd cycle found by breadth-first two-coloring, as vertex cells.
fn odd_cycle(x: &CubicalComplex) -> Option<Vec<CellId>> {
    let adj = x.vertex_adjacency();
    let nv = adj.len();
    let mut side = vec![u8::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    for s in 0..nv {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if side[w] == u8::MAX {
                    side[w] = side[u] ^ 1;
                    parent[w] = u;
                    q.push_back(w);
                } else if side[w] == side[u] {
                    // splice the two tree paths at their meeting point
                    let path = |mut v: usize| {
                        let mut p = vec![v];
                        while parent[v] != usize::MAX {
                            v = parent[v];
                            p.push(v);
                        }
                        p
                    };
                    let pu = path(u);
                    let pw = path(w);
                    let meet = *pu.iter().find(|v| pw.contains(v)).unwrap();
                    let mut cyc: Vec<CellId> = pu.iter().copied().take_while(|&v| v != meet).collect();
                    cyc.push(meet);
                    let tail: Vec<CellId> = pw.iter().copied().take_while(|&v| v != meet).collect();
                    cyc.extend(tail.into_iter().rev());
                    return Some(cyc);
                }
            }
        }
    }
    None
}

/// Proper coloring by `dim + 1` labels, searched vertex by vertex.
pub fn find_simplicial_folding(k: &SimplicialComplex) -> Result<SimplexFolding, FoldError> {
    let n = k.dim().unwrap_or(0);
    let verts = k.vertices();
    let pos: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut nbrs = vec![Vec::new(); verts.len()];
    for e in k.edges() {
        let (a, b) = (pos[&e[0]], pos[&e[1]]);
        nbrs[b].push(a);
        nbrs[a].push(b);
    }
    let mut col = vec![u32::MAX; verts.len()];
    let mut nodes = 0usize;
    let mut deepest = 0usize;
    fn go(i: usize, n: usize, nbrs: &[Vec<usize>], col: &mut [u32], nodes: &mut usize, deepest: &mut usize) -> bool {
        *nodes += 1;
        *deepest = (*deepest).max(i);
        if i == col.len() {
            return true;
        }
        for c in 0..=n as u32 {
            if nbrs[i].iter().any(|&j| j < i && col[j] == c) {
                continue;
            }
            col[i] = c;
            if go(i + 1, n, nbrs, col, nodes, deepest) {
                return true;
            }
        }
        col[i] = u32::MAX;
        false
    }
    if !go(0, n, &nbrs, &mut col, &mut nodes, &mut deepest) {
        return Err(FoldError::NotFoldable(Obstruction::DeadEnd { nodes, deepest, classes: verts.len() }));
    }
    // simplices are cliques of the 1-skeleton, so a proper coloring is injective on them
    let labels = verts.into_iter().zip(col).collect();
    Ok(SimplexFolding { dim: n, labels })
}

/// Labels each barycenter by the dimension of the cell it subdivides.
pub fn canonical_barsub_folding(sd: &BarycentricSubdivision) -> Result<SimplexFolding, FoldError> {
    let dims = sd.provenance.as_ref().ok_or(FoldError::NotASubdivision)?;
    let labels = sd.complex.vertices().into_iter().map(|v| (v, dims[v as usize] as u32)).collect();
    let n = dims.iter().copied().max().unwrap_or(0);
    Ok(SimplexFolding { dim: n, labels })
}

/// Distinct images of the vertex cells of a cell under a folding.
pub fn cell_labels(x: &CubicalComplex, f: &CubeFolding, c: CellId) -> Vec<u32> {
    x.corner_cells(c).iter().map(|&v| f.labels[&x.cell(v).corners()[0]]).collect()
}

/// Checks that the folding is injective on the vertices of every cell,
/// which is how foldings are characterised through faces.
pub fn is_cellwise_injective<P: CellPoset>(x: &P, labels: &BTreeMap<VertexId, u32>) -> bool {
    (0..x.cell_count()).all(|c| {
        let mut ls: Vec<u32> = x.cell_vertices(c).iter().map(|v| labels[v]).collect();
        ls.sort_unstable();
        ls.windows(2).all(|w| w[0] != w[1])
    })
}
