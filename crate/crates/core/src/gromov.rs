//! Gromov's cylinder construction and the hyperbolization of folded
//! simplicial complexes.
//!
//! `G(Δⁿ)` is built from `G(∂Δⁿ) = G(barsub ∂Δⁿ)` by taking the product
//! with `[-1, 1]` and identifying the two ends over one half of the
//! boundary. The interval is cut into four unit segments so that the
//! identification leaves every pair of cubes meeting in a single common
//! face and the parity of the segment index extends the folding.
//!
//! `G(K)` for a folding `f: K → Δⁿ` is the pullback: its cells are pairs
//! `(τ, c)` with `τ` a simplex of `K`, `c` a cell of `G(Δⁿ)` and
//! `f(τ)` equal to the face label of `c`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::cube::{canonical_corners, VertexId};
use crate::cubical::CubicalComplex;
use crate::curvature::check_npc;
use crate::folding::{canonical_barsub_folding, verify_folding, verify_simplicial_folding, CubeFolding, FoldError, SimplexFolding, Verdict};
use crate::iso::simplicial_isomorphism;
use crate::poset::{link, CellId, CellPoset};
use crate::simplicial::SimplicialComplex;
use crate::subdivision::barycentric_subdivision;

/// Largest simplex dimension supported.
pub const MAX_DIM: usize = 3;

/// Number of unit segments in the interval factor.
const SEGMENTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GromovError {
    #[error("dimension {0} is outside the supported range 0..=3")]
    UnsupportedDimension(usize),
    #[error("supplied labelling is not a folding: {0:?}")]
    NotAFolding(Verdict),
    #[error(transparent)]
    Fold(#[from] FoldError),
}

/// The hyperbolized simplex `G(Δⁿ)` with its face labels.
#[derive(Debug)]
pub struct GromovCell {
    pub n: usize,
    pub complex: CubicalComplex,
    pub folding: CubeFolding,
    /// Face of `Δⁿ` (bitmask over `0..=n`) labelling each cell. Cells not
    /// on the boundary carry the full mask.
    pub labels: Vec<u32>,
    /// For boundary cells, the corresponding cell of `G(∂Δⁿ)`.
    pub boundary_map: Vec<Option<CellId>>,
    /// `G(∂Δⁿ)`; absent for `n <= 1`.
    pub boundary: Option<Box<Hyperbolized>>,
    /// Cell counts of the half `U`, of `V = σ(U)` and of the fixed set.
    pub halves: (usize, usize, usize),
}

impl GromovCell {
    pub fn full_mask(&self) -> u32 {
        (1u32 << (self.n + 1)) - 1
    }

    /// Cells whose label is contained in the face `mask`.
    pub fn face_cells(&self, mask: u32) -> Vec<CellId> {
        (0..self.complex.len()).filter(|&c| self.labels[c] & !mask == 0).collect()
    }

    /// Cells whose label equals `mask`.
    pub fn cells_labelled(&self, mask: u32) -> Vec<CellId> {
        (0..self.complex.len()).filter(|&c| self.labels[c] == mask).collect()
    }
}

/// `G(K)` with the data tying it back to `K` and `G(Δⁿ)`.
#[derive(Debug, Clone)]
pub struct Hyperbolized {
    pub n: usize,
    pub complex: CubicalComplex,
    pub folding: CubeFolding,
    /// The complex that was hyperbolized (the input, or its barycentric
    /// subdivision when no folding was supplied) and its folding.
    pub source: SimplicialComplex,
    pub source_folding: SimplexFolding,
    /// For each cell, the source simplex and the cell of `G(Δⁿ)`.
    pub tile_of: Vec<(CellId, CellId)>,
}

impl Hyperbolized {
    /// Cells lying over faces of the source simplex `t`.
    pub fn tile(&self, t: CellId) -> Vec<CellId> {
        (0..self.complex.len()).filter(|&c| self.source.is_face(self.tile_of[c].0, t)).collect()
    }
}

static CELLS: [OnceLock<GromovCell>; MAX_DIM + 1] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// `G(Δⁿ)`, built once per dimension.
pub fn gromov_cell(n: usize) -> Result<&'static GromovCell, GromovError> {
    if n > MAX_DIM {
        return Err(GromovError::UnsupportedDimension(n));
    }
    if let Some(c) = CELLS[n].get() {
        return Ok(c);
    }
    let built = build_cell(n)?;
    Ok(CELLS[n].get_or_init(|| built))
}

fn build_cell(n: usize) -> Result<GromovCell, GromovError> {
    if n == 0 {
        let complex = CubicalComplex::from_cubes(vec![vec![0]]).unwrap();
        return Ok(GromovCell {
            n,
            complex,
            folding: CubeFolding { dim: 0, labels: [(0, 0)].into_iter().collect() },
            labels: vec![1],
            boundary_map: vec![None],
            boundary: None,
            halves: (0, 0, 0),
        });
    }
    if n == 1 {
        let complex = CubicalComplex::from_cubes(vec![vec![0, 1]]).unwrap();
        return Ok(GromovCell {
            n,
            complex,
            folding: CubeFolding { dim: 1, labels: [(0, 0), (1, 1)].into_iter().collect() },
            labels: vec![0b01, 0b10, 0b11],
            boundary_map: vec![None; 3],
            boundary: None,
            halves: (0, 0, 0),
        });
    }
    // boundary of the n-simplex, subdivided and folded by dimension
    let facets: Vec<Vec<VertexId>> =
        (0..=n as VertexId).map(|skip| (0..=n as VertexId).filter(|&v| v != skip).collect()).collect();
    let bd = SimplicialComplex::from_simplices(facets).unwrap();
    let sd = barycentric_subdivision(&bd);
    let fsd = canonical_barsub_folding(&sd)?;
    let g = hyperbolize_with(&sd.complex, &fsd, gromov_cell(n - 1)?)?;
    let gx = &g.complex;

    let mask_of = |b: VertexId| -> u32 { bd.simplex(b as usize).iter().fold(0, |m, &v| m | (1 << v)) };
    let swap = |m: u32| -> u32 { (m & !0b11) | ((m & 1) << 1) | ((m >> 1) & 1) };
    // face label of a cell of G(∂Δⁿ): the largest face in its chain
    let bd_label: Vec<u32> =
        g.tile_of.iter().map(|&(t, _)| g.source.simplex(t).iter().fold(0, |m, &b| m | mask_of(b))).collect();

    // reflection swapping simplex vertices 0 and 1
    let bd_swap: HashMap<VertexId, VertexId> = (0..bd.cell_count())
        .map(|b| {
            let m = swap(mask_of(b as VertexId));
            let verts: Vec<VertexId> = (0..=n as VertexId).filter(|v| m & (1 << v) != 0).collect();
            (b as VertexId, bd.lookup(&verts).unwrap() as VertexId)
        })
        .collect();
    let vertex_of: HashMap<(CellId, CellId), VertexId> = (0..gx.vertex_count())
        .map(|v| (g.tile_of[v], gx.cell(v).corners()[0]))
        .collect();
    let reflect_vertex = |v: VertexId| -> VertexId {
        let (t, c) = g.tile_of[gx.vertex_cell(v).unwrap()];
        let chain: Vec<VertexId> = g.source.simplex(t).iter().map(|b| bd_swap[b]).collect();
        let t2 = g.source.lookup(&chain).unwrap();
        vertex_of[&(t2, c)]
    };
    let reflect: Vec<CellId> = (0..gx.len())
        .map(|c| {
            let raw: Vec<VertexId> = gx.cell(c).corners().iter().map(|&v| reflect_vertex(v)).collect();
            gx.lookup(&raw).expect("reflection preserves cells")
        })
        .collect();
    let fixed: Vec<bool> = (0..gx.len()).map(|c| reflect[c] == c).collect();

    // U: the region of vertex {0} cut out by the fixed set
    let start_b = bd.lookup(&[0]).unwrap() as VertexId;
    let start = (0..gx.vertex_count())
        .find(|&v| g.source.simplex(g.tile_of[v].0) == [start_b])
        .expect("vertex over {0}");
    let tops = crate::mirror::maximal_cofaces(gx);
    let mut in_u_top = BTreeSet::new();
    let mut queue: VecDeque<CellId> = tops[start].iter().copied().collect();
    while let Some(t) = queue.pop_front() {
        if !in_u_top.insert(t) {
            continue;
        }
        for f in gx.faces(t) {
            if fixed[f] {
                continue;
            }
            for &t2 in &tops[f] {
                if !in_u_top.contains(&t2) {
                    queue.push_back(t2);
                }
            }
        }
    }
    let mut in_u = vec![false; gx.len()];
    for &t in &in_u_top {
        for f in gx.faces(t) {
            in_u[f] = true;
        }
    }
    let in_v: Vec<bool> = (0..gx.len()).map(|c| in_u[reflect[c]]).collect();
    for c in 0..gx.len() {
        assert!(in_u[c] || in_v[c], "halves must cover G(∂Δⁿ)");
        assert_eq!(in_u[c] && in_v[c], fixed[c], "halves must meet in the fixed set");
    }
    let halves = (
        in_u.iter().filter(|&&b| b).count(),
        in_v.iter().filter(|&&b| b).count(),
        fixed.iter().filter(|&&b| b).count(),
    );

    // vertices of the cylinder: (boundary vertex, interval point)
    let nv = gx.vertex_count();
    let mut vid = vec![[0 as VertexId; SEGMENTS + 1]; nv];
    let mut next: VertexId = 0;
    for u in 0..nv {
        for k in 0..=SEGMENTS {
            if k == 0 && in_u[u] {
                continue;
            }
            vid[u][k] = next;
            next += 1;
        }
        if in_u[u] {
            vid[u][0] = vid[u][SEGMENTS];
        }
    }
    let vcell = |v: VertexId| gx.vertex_cell(v).unwrap();

    #[derive(Clone, Copy)]
    enum Slot {
        Point(usize),
        Segment,
    }
    let mut raw_cells: Vec<(Vec<VertexId>, CellId, Slot)> = Vec::new();
    for c in 0..gx.len() {
        let corners = gx.cell(c).corners();
        for k in 0..=SEGMENTS {
            if k == 0 && in_u[c] {
                continue;
            }
            raw_cells.push((corners.iter().map(|&v| vid[vcell(v)][k]).collect(), c, Slot::Point(k)));
        }
        for k in 0..SEGMENTS {
            let mut raw: Vec<VertexId> = corners.iter().map(|&v| vid[vcell(v)][k]).collect();
            raw.extend(corners.iter().map(|&v| vid[vcell(v)][k + 1]));
            raw_cells.push((raw, c, Slot::Segment));
        }
    }
    let complex = CubicalComplex::from_cubes(raw_cells.iter().map(|r| r.0.clone())).expect("cylinder cells are cubes");
    assert_eq!(complex.len(), raw_cells.len(), "cylinder cells are distinct");

    let full = (1u32 << (n + 1)) - 1;
    let mut labels = vec![full; complex.len()];
    let mut boundary_map = vec![None; complex.len()];
    for (raw, c, slot) in &raw_cells {
        let id = complex.lookup_canonical(&canonical_corners(raw)).unwrap();
        match *slot {
            Slot::Point(k) if k == SEGMENTS && in_v[*c] => {
                labels[id] = bd_label[*c];
                boundary_map[id] = Some(*c);
            }
            Slot::Point(0) if in_v[*c] => {
                labels[id] = bd_label[reflect[*c]];
                boundary_map[id] = Some(reflect[*c]);
            }
            _ => {}
        }
    }
    let mut flabels = BTreeMap::new();
    for u in 0..nv {
        let base = g.folding.labels[&gx.cell(u).corners()[0]];
        for k in 0..=SEGMENTS {
            flabels.insert(vid[u][k], base | (((k % 2) as u32) << (n - 1)));
        }
    }
    Ok(GromovCell {
        n,
        complex,
        folding: CubeFolding { dim: n, labels: flabels },
        labels,
        boundary_map,
        boundary: Some(Box::new(g)),
        halves,
    })
}

/// `G(K)`. Without a folding, `K` is first barycentrically subdivided and
/// folded by dimension.
pub fn gromov_hyperbolize(k: &SimplicialComplex, f: Option<&SimplexFolding>) -> Result<Hyperbolized, GromovError> {
    match f {
        Some(f) => {
            let v = verify_simplicial_folding(k, f)?;
            if !v.is_valid() {
                return Err(GromovError::NotAFolding(v));
            }
            hyperbolize_with(k, f, gromov_cell(f.dim)?)
        }
        None => {
            if k.dim().unwrap_or(0) > MAX_DIM {
                return Err(GromovError::UnsupportedDimension(k.dim().unwrap()));
            }
            let sd = barycentric_subdivision(k);
            let f = canonical_barsub_folding(&sd)?;
            hyperbolize_with(&sd.complex, &f, gromov_cell(f.dim)?)
        }
    }
}

fn hyperbolize_with(k: &SimplicialComplex, f: &SimplexFolding, cell: &GromovCell) -> Result<Hyperbolized, GromovError> {
    let gc = &cell.complex;
    let mut by_label: BTreeMap<u32, Vec<CellId>> = BTreeMap::new();
    for c in 0..gc.len() {
        by_label.entry(cell.labels[c]).or_default().push(c);
    }
    let mask = |s: &[VertexId]| s.iter().fold(0u32, |m, v| m | (1 << f.labels[v]));
    // vertices (τ, u)
    let mut pairs = Vec::new();
    for t in 0..k.cell_count() {
        for &u in by_label.get(&mask(k.simplex(t))).map(Vec::as_slice).unwrap_or(&[]) {
            if gc.cell(u).dim() == 0 {
                pairs.push((t, u));
            }
        }
    }
    let vid: HashMap<(CellId, CellId), VertexId> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i as VertexId)).collect();
    let mut raw_cells = Vec::new();
    for t in 0..k.cell_count() {
        let s = k.simplex(t);
        for &c in by_label.get(&mask(s)).map(Vec::as_slice).unwrap_or(&[]) {
            let raw: Vec<VertexId> = gc
                .corner_cells(c)
                .iter()
                .map(|&u| {
                    let lu = cell.labels[u];
                    let face: Vec<VertexId> = s.iter().copied().filter(|v| lu & (1 << f.labels[v]) != 0).collect();
                    vid[&(k.lookup(&face).unwrap(), u)]
                })
                .collect();
            raw_cells.push((raw, t, c));
        }
    }
    let complex = CubicalComplex::from_cubes(raw_cells.iter().map(|r| r.0.clone())).expect("pullback cells are cubes");
    assert_eq!(complex.len(), raw_cells.len(), "pullback cells are distinct");
    let mut tile_of = vec![(0, 0); complex.len()];
    for (raw, t, c) in &raw_cells {
        tile_of[complex.lookup_canonical(&canonical_corners(raw)).unwrap()] = (*t, *c);
    }
    let labels = pairs
        .iter()
        .enumerate()
        .map(|(i, &(_, u))| (i as VertexId, cell.folding.labels[&gc.cell(u).corners()[0]]))
        .collect();
    Ok(Hyperbolized {
        n: cell.n,
        complex,
        folding: CubeFolding { dim: cell.n, labels },
        source: k.clone(),
        source_folding: f.clone(),
        tile_of,
    })
}

/// Checks on a hyperbolized cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub n: usize,
    pub counts: Vec<usize>,
    pub admissible: bool,
    pub foldable: bool,
    pub flag_links: bool,
    pub connected: bool,
    pub homogeneous: bool,
    pub euler_characteristic: i64,
    /// Boundary cells correspond bijectively to `G(∂Δⁿ)`, preserving
    /// corners.
    pub boundary_matches: bool,
    /// Faces of a labelled cell carry smaller labels, and each face label
    /// class is a subcomplex with the expected number of top cells.
    pub labels_consistent: bool,
}

pub fn verify_gromov_cell(cell: &GromovCell) -> CellReport {
    let x = &cell.complex;
    let admissible = x.check_admissible().is_ok();
    let foldable = matches!(verify_folding(x, &cell.folding), Ok(Verdict::Valid));
    let flag_links = check_npc(x).is_ok();
    let mut labels_consistent = (0..x.len()).all(|c| x.faces(c).iter().all(|&g| cell.labels[g] & !cell.labels[c] == 0));
    let boundary_matches = match &cell.boundary {
        None => true,
        Some(g) => {
            let gx = &g.complex;
            let mut hit = vec![false; gx.len()];
            let mut vmap: HashMap<VertexId, VertexId> = HashMap::new();
            let mut ok = true;
            for c in 0..x.len() {
                if let Some(b) = cell.boundary_map[c] {
                    ok &= !std::mem::replace(&mut hit[b], true);
                    ok &= cell.labels[c] != cell.full_mask();
                    if x.cell(c).dim() == 0 {
                        vmap.insert(x.cell(c).corners()[0], gx.cell(b).corners()[0]);
                    }
                } else {
                    ok &= cell.labels[c] == cell.full_mask();
                }
            }
            ok &= hit.iter().all(|&h| h);
            if ok {
                for c in 0..x.len() {
                    if let Some(b) = cell.boundary_map[c] {
                        let raw: Vec<VertexId> = x.cell(c).corners().iter().map(|v| vmap[v]).collect();
                        ok &= gx.lookup(&raw) == Some(b);
                    }
                }
            }
            ok
        }
    };
    // face label classes: cells labelled inside a proper face F form a
    // subcomplex, a copy of the face part of G(∂Δⁿ)
    if cell.n >= 2 {
        for mask in 1..cell.full_mask() {
            let cells = cell.face_cells(mask);
            let set: BTreeSet<CellId> = cells.iter().copied().collect();
            labels_consistent &= cells.iter().all(|&c| x.faces(c).iter().all(|g| set.contains(g)));
            let d = mask.count_ones() as usize - 1;
            let tops = cells.iter().filter(|&&c| x.cell(c).dim() == d).count();
            labels_consistent &= tops == face_tops(cell.n, d);
        }
    }
    CellReport {
        n: cell.n,
        counts: x.count_by_dim(),
        admissible,
        foldable,
        flag_links,
        connected: x.is_connected(),
        homogeneous: x.is_homogeneous(),
        euler_characteristic: x.euler_characteristic(),
        boundary_matches,
        labels_consistent,
    }
}

/// Top cells of the part of `G(Δⁿ)` labelled inside a `d`-face: each of
/// the `(d+1)!` top chains of the subdivided face carries the `d`-face part
/// of `G(Δⁿ⁻¹)`.
pub fn face_tops(n: usize, d: usize) -> usize {
    if d == 0 {
        1
    } else if d == n {
        gromov_cell(n).map(|g| g.complex.top_cells().len()).unwrap_or(0)
    } else {
        (1..=d + 1).product::<usize>() * face_tops(n - 1, d)
    }
}

/// Properties of `G(K)` inherited from `K`.
#[derive(Debug, Clone, Serialize)]
pub struct GromovReport {
    pub counts: Vec<usize>,
    pub admissible: bool,
    pub foldable: bool,
    pub flag_links: bool,
    /// `Some` only when the source is a closed pseudomanifold.
    pub boundaryless: Option<bool>,
    /// Every tile restricts to a copy of `G(Δⁿ)`.
    pub tiles_are_cells: bool,
    /// Source simplices whose tile link differs from their link in `K`.
    pub link_failures: Vec<Vec<VertexId>>,
}

impl GromovReport {
    pub fn all_pass(&self) -> bool {
        self.admissible
            && self.foldable
            && self.flag_links
            && self.boundaryless.unwrap_or(true)
            && self.tiles_are_cells
            && self.link_failures.is_empty()
    }
}

pub fn verify_gromov_properties(k: &SimplicialComplex, f: Option<&SimplexFolding>) -> Result<GromovReport, GromovError> {
    let g = gromov_hyperbolize(k, f)?;
    Ok(report_for(&g))
}

pub fn report_for(g: &Hyperbolized) -> GromovReport {
    let x = &g.complex;
    let src = &g.source;
    let cell = gromov_cell(g.n).expect("dimension checked at construction");
    let closed = src.dim().is_some_and(|d| {
        d > 0 && src.maximal().iter().all(|&t| src.cell_dim(t) == d)
            && (0..src.cell_count()).filter(|&t| src.cell_dim(t) == d - 1).all(|t| src.cofacets(t).len() >= 2)
    });

    // tiles over top simplices are copies of G(Δⁿ)
    let mut tiles_are_cells = true;
    for t in src.maximal() {
        let cells = g.tile(t);
        let mut seen = BTreeSet::new();
        let mut vmap: HashMap<VertexId, VertexId> = HashMap::new();
        for &c in &cells {
            if x.cell(c).dim() == 0 {
                vmap.insert(x.cell(c).corners()[0], cell.complex.cell(g.tile_of[c].1).corners()[0]);
            }
        }
        for &c in &cells {
            let target = g.tile_of[c].1;
            tiles_are_cells &= seen.insert(target);
            let raw: Vec<VertexId> = x.cell(c).corners().iter().map(|v| vmap[v]).collect();
            tiles_are_cells &= cell.complex.lookup(&raw) == Some(target);
        }
        let expect = cell.face_cells(src.simplex(t).iter().fold(0, |m, v| m | (1 << g.source_folding.labels[v]))).len();
        tiles_are_cells &= seen.len() == expect;
    }

    // tile links against source links
    let tiles: Vec<BTreeSet<CellId>> = (0..src.cell_count()).map(|t| g.tile(t).into_iter().collect()).collect();
    let tile_dim = |t: usize| tiles[t].iter().map(|&c| x.cell(c).dim()).max().unwrap_or(0);
    let mut link_failures = Vec::new();
    for t in 0..src.cell_count() {
        let d = tile_dim(t);
        let covers: Vec<usize> = (0..src.cell_count())
            .filter(|&r| tile_dim(r) == d + 1 && tiles[t].is_subset(&tiles[r]) && tiles[t] != tiles[r])
            .collect();
        let mut simplices: Vec<Vec<VertexId>> = Vec::new();
        for m in 0..src.cell_count() {
            if m == t || !tiles[t].is_subset(&tiles[m]) || tiles[t] == tiles[m] {
                continue;
            }
            let s: Vec<VertexId> =
                covers.iter().filter(|&&r| tiles[r].is_subset(&tiles[m])).map(|&r| r as VertexId).collect();
            if !s.is_empty() {
                simplices.push(s);
            }
        }
        let tile_link = SimplicialComplex::from_simplices(simplices).unwrap();
        let src_link = link(src, t).complex;
        if simplicial_isomorphism(&tile_link, &src_link).is_none() {
            link_failures.push(src.simplex(t).to_vec());
        }
    }
    GromovReport {
        counts: x.count_by_dim(),
        admissible: x.check_admissible().is_ok(),
        foldable: matches!(verify_folding(x, &g.folding), Ok(Verdict::Valid)),
        flag_links: check_npc(x).is_ok(),
        boundaryless: closed.then(|| x.is_boundaryless()),
        tiles_are_cells,
        link_failures,
    }
}
