use super::certificate::{apply_move, Move};
use super::{EdgePath, PathError};
use crate::dual::DualComplex;
use crate::poset::{CellId, CellPoset};

/// Least maximal source cell containing every vertex of the path.
pub fn stays_in_tile(d: &DualComplex, p: &EdgePath) -> Option<CellId> {
    let mut cands: Vec<CellId> = d.tops_of(p.vertices[0]).to_vec();
    for &v in &p.vertices[1..] {
        let t = d.tops_of(v);
        cands.retain(|c| t.contains(c));
    }
    cands.into_iter().min()
}

fn step(d: &DualComplex, p: &mut EdgePath, mv: Move, moves: &mut Vec<Move>) -> Result<(), PathError> {
    *p = apply_move(d, p, &mv).map_err(PathError::Internal)?;
    moves.push(mv);
    Ok(())
}

fn strip_backtracks(d: &DualComplex, p: &mut EdgePath, moves: &mut Vec<Move>) -> Result<(), PathError> {
    while let Some(i) = (0..p.len().saturating_sub(1)).find(|&i| p.vertices[i] == p.vertices[i + 2]) {
        step(d, p, Move::Backtrack { at: i }, moves)?;
    }
    Ok(())
}

/// The unique cell two dimensions above `p[j]` containing `p[j-1]` and
/// `p[j+1]`.
fn raise_target(d: &DualComplex, a: CellId, b: CellId) -> Option<CellId> {
    d.source.cofacets(a).iter().copied().filter(|&w| d.source.facets(w).contains(&b)).min()
}

/// Raises every interior local minimum once. Returns whether anything moved.
fn raise_minima(d: &DualComplex, p: &mut EdgePath, moves: &mut Vec<Move>) -> Result<bool, PathError> {
    let s = p.len();
    let mut j = 1;
    let mut moved = false;
    while j < s {
        let v = &p.vertices;
        let h = d.height(v[j]);
        if d.height(v[j - 1]) > h && d.height(v[j + 1]) > h {
            let (a, b) = (v[j - 1], v[j + 1]);
            let w = raise_target(d, a, b)
                .ok_or_else(|| PathError::Internal(format!("no cell above {a} and {b}")))?;
            let lo = v[j];
            step(d, p, Move::Slide { at: j - 1, replacement: w, lo, hi: w }, moves)?;
            moved = true;
            j += 2;
        } else {
            j += 1;
        }
    }
    Ok(moved)
}

/// Removes backtracks and raises local minima until neither applies.
/// Endpoints stay fixed. Requires the path to lie in one tile.
pub fn make_efficient(d: &DualComplex, p: &EdgePath) -> Result<(EdgePath, Vec<Move>), PathError> {
    if stays_in_tile(d, p).is_none() {
        return Err(PathError::NotInTile);
    }
    let mut q = p.clone();
    let mut moves = Vec::new();
    loop {
        strip_backtracks(d, &mut q, &mut moves)?;
        if !raise_minima(d, &mut q, &mut moves)? {
            return Ok((q, moves));
        }
    }
}

/// Contracts a loop lying in one tile to its base point. The returned
/// moves turn the loop into a constant loop.
pub fn contract_in_tile(d: &DualComplex, p: &EdgePath) -> Result<Vec<Move>, PathError> {
    if !p.is_loop() {
        return Err(PathError::NotALoop);
    }
    if stays_in_tile(d, p).is_none() {
        return Err(PathError::NotInTile);
    }
    let mut q = p.clone();
    let mut moves = Vec::new();
    let budget = 4 * (p.len() + 1) * (d.source.dim().unwrap_or(0) + 2) + 16;
    for _ in 0..budget {
        strip_backtracks(d, &mut q, &mut moves)?;
        if q.len() == 0 {
            return Ok(moves);
        }
        if q.len() >= 2 && q.vertices[1] == q.vertices[q.len() - 1] {
            // backtrack across the base point
            step(d, &mut q, Move::Rotate { by: 1 }, &mut moves)?;
            continue;
        }
        let top = q.max_height(d);
        let k = (0..q.len()).find(|&i| d.height(q.vertices[i]) == top).unwrap();
        if k != 0 {
            step(d, &mut q, Move::Rotate { by: k }, &mut moves)?;
        }
        if !raise_minima(d, &mut q, &mut moves)? {
            return Err(PathError::Internal(format!("loop {q} is stuck")));
        }
    }
    Err(PathError::Internal("tile contraction did not terminate".into()))
}
