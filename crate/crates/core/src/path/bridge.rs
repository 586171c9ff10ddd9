use super::{EdgePath, PathError};
use crate::dual::DualComplex;
use crate::mirror::Mirrors;
use crate::poset::CellId;

/// Mirrors containing both ends of `q` but not all of it.
pub fn supporting_mirrors(d: &DualComplex, q: &EdgePath) -> Vec<usize> {
    let ends = &d.mirrors.of_cell[q.start()];
    let other = &d.mirrors.of_cell[q.end()];
    ends.iter()
        .copied()
        .filter(|m| other.contains(m) && q.vertices.iter().any(|&v| !d.in_mirror(*m, v)))
        .collect()
}

pub fn is_bridge(d: &DualComplex, q: &EdgePath) -> bool {
    !supporting_mirrors(d, q).is_empty()
}

/// The minimal bridge inside `q` with least start, then least length, as
/// inclusive positions.
pub fn minimal_bridge(d: &DualComplex, q: &EdgePath) -> Result<(usize, usize), PathError> {
    let n = q.vertices.len();
    let mut bridge = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 2..n {
            bridge[a][b] = is_bridge(d, &q.sub(a, b));
        }
    }
    for a in 0..n {
        for b in a + 2..n {
            if !bridge[a][b] {
                continue;
            }
            let proper = (a..=b).any(|x| (x + 2..=b).any(|y| (x, y) != (a, b) && bridge[x][y]));
            if !proper {
                return Ok((a, b));
            }
        }
    }
    Err(PathError::NotABridge)
}

/// Face of maximal cell `top` cut out by fixing folding coordinates.
fn face_fixing(d: &DualComplex, top: CellId, fixed: &[(usize, bool)]) -> Option<CellId> {
    let x = &d.source;
    let verts: Vec<u32> = x
        .cell(top)
        .corners()
        .iter()
        .copied()
        .filter(|v| {
            let l = d.folding.labels[v];
            fixed.iter().all(|&(c, s)| ((l >> c) & 1 == 1) == s)
        })
        .collect();
    if verts.is_empty() {
        return None;
    }
    x.face_by_vertices(top, &verts)
}

fn fixed_coordinates(ms: &Mirrors, m: usize, v: CellId) -> Vec<(usize, bool)> {
    let mm = &ms.list[m];
    let mut fixed = vec![(mm.coord, mm.side)];
    for &n in &ms.of_cell[v] {
        if n != m && ms.meet(n, m) {
            fixed.push((ms.list[n].coord, ms.list[n].side));
        }
    }
    fixed
}

/// Projection of a dual vertex onto the dual of mirror `m`: the face of a
/// tile through `v` meeting `m` that fixes the coordinate of `m` and those
/// of the mirrors through `v` meeting `m`. The choice of tile must not
/// matter.
pub fn project_cell(d: &DualComplex, m: usize, v: CellId) -> Result<CellId, PathError> {
    let fixed = fixed_coordinates(&d.mirrors, m, v);
    let mut result: Option<CellId> = None;
    for &top in d.tops_of(v) {
        let meets = d.source.corner_cells(top).iter().any(|&u| d.in_mirror(m, u));
        if !meets {
            continue;
        }
        let Some(face) = face_fixing(d, top, &fixed) else {
            continue;
        };
        match result {
            None => result = Some(face),
            Some(r) if r == face => {}
            Some(_) => return Err(PathError::CarrierViolation { mirror: m, vertex: v }),
        }
    }
    result.ok_or(PathError::CarrierViolation { mirror: m, vertex: v })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub mirror: usize,
    /// Vertex-wise images before reduction.
    pub images: Vec<CellId>,
    pub path: EdgePath,
}

/// Projects a bridge onto its least supporting mirror and reduces the
/// result. The projection has the bridge's endpoints, lies in the mirror
/// and is at least two edges shorter.
pub fn project_bridge(d: &DualComplex, q: &EdgePath) -> Result<Projection, PathError> {
    let m = *supporting_mirrors(d, q).first().ok_or(PathError::NotABridge)?;
    let images: Vec<CellId> = q.vertices.iter().map(|&v| project_cell(d, m, v)).collect::<Result<_, _>>()?;
    let mut stack: Vec<CellId> = Vec::with_capacity(images.len());
    for &w in &images {
        if stack.last() == Some(&w) {
            continue;
        }
        if let Some(&prev) = stack.last() {
            if !d.adjacent(prev, w) {
                return Err(PathError::Internal(format!("projection jumps from {prev} to {w}")));
            }
        }
        if stack.len() >= 2 && stack[stack.len() - 2] == w {
            stack.pop();
        } else {
            stack.push(w);
        }
    }
    let path = EdgePath { vertices: stack };
    if path.start() != q.start() || path.end() != q.end() {
        return Err(PathError::Internal("projection moved an endpoint".into()));
    }
    if path.vertices.iter().any(|&w| !d.in_mirror(m, w)) {
        return Err(PathError::Internal("projection left the mirror".into()));
    }
    if path.len() + 2 > q.len() {
        return Err(PathError::Internal(format!(
            "projection of length {} does not shorten bridge of length {}",
            path.len(),
            q.len()
        )));
    }
    Ok(Projection { mirror: m, images, path })
}
