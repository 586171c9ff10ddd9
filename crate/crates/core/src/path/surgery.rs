use std::collections::BTreeSet;

use super::bridge::{minimal_bridge, project_bridge};
use super::certificate::ContractionTree;
use super::crossing::{crossings, mirror_complexity};
use super::tile::contract_in_tile;
use super::{EdgePath, PathError};
use crate::dual::DualComplex;
use crate::poset::CellId;

/// One surgery: `p` rotated by `rotate` is `q1 · q2` with `q1` a minimal
/// bridge of length `bridge_len`, and `p1 = q1 · r⁻¹`, `p2 = r · q2`
/// where `r` is the projection of `q1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryStep {
    pub mirror: usize,
    pub rotate: usize,
    pub bridge_len: usize,
    pub projection: Vec<CellId>,
    pub p1: EdgePath,
    pub p2: EdgePath,
}

/// Splits a loop with positive mirror complexity into two shorter loops.
pub fn surgery_step(d: &DualComplex, p: &EdgePath) -> Result<SurgeryStep, PathError> {
    if !p.is_loop() {
        return Err(PathError::NotALoop);
    }
    let s = p.len();
    let touched: BTreeSet<usize> = p.vertices.iter().flat_map(|&v| d.mirrors.of_cell[v].iter().copied()).collect();
    let mut chosen = None;
    for m in touched {
        let cs = crossings(d, p, m)?;
        if !cs.is_empty() {
            chosen = Some((m, cs));
            break;
        }
    }
    let (_, cs) = chosen.ok_or(PathError::NoCrossing)?;
    if cs.len() < 2 {
        return Err(PathError::Internal("a loop crossing a separating mirror crosses it twice".into()));
    }
    // q runs from the end of the first crossing to the start of the next
    let a = cs[0].end;
    let b = cs[1].start;
    let span = (b + s - a) % s;
    let (base, qlen) = if 2 * span <= s { (a, span) } else { (b, s - span) };
    let r = p.rotated(base);
    let q = r.sub(0, qlen);
    let (x, y) = minimal_bridge(d, &q)?;
    let rotate = (base + x) % s;
    let bridge_len = y - x;
    let rp = p.rotated(rotate);
    let q1 = rp.sub(0, bridge_len);
    let q2 = rp.sub(bridge_len, s);
    let proj = project_bridge(d, &q1)?;
    let p1 = q1.concat(&proj.path.reversed());
    let p2 = proj.path.concat(&q2);
    if p1.len() >= s || p2.len() >= s {
        return Err(PathError::Internal(format!("surgery on a loop of length {s} gave {} and {}", p1.len(), p2.len())));
    }
    Ok(SurgeryStep { mirror: proj.mirror, rotate, bridge_len, projection: proj.path.vertices, p1, p2 })
}

/// Contracts a loop by repeated surgery, finishing inside single tiles.
/// Requires every mirror of the source to separate.
pub fn contract_loop(d: &DualComplex, p: &EdgePath) -> Result<ContractionTree, PathError> {
    if let Some(m) = d.first_nonseparating() {
        return Err(PathError::Unsupported(format!("non-separating mirror {m}")));
    }
    if !p.is_loop() {
        return Err(PathError::NotALoop);
    }
    contract_rec(d, p)
}

fn contract_rec(d: &DualComplex, p: &EdgePath) -> Result<ContractionTree, PathError> {
    if p.len() == 0 {
        return Ok(ContractionTree::Tile { moves: Vec::new() });
    }
    if mirror_complexity(d, p)? == 0 {
        return Ok(ContractionTree::Tile { moves: contract_in_tile(d, p)? });
    }
    let st = surgery_step(d, p)?;
    let (first, second) = rayon::join(|| contract_rec(d, &st.p1), || contract_rec(d, &st.p2));
    Ok(ContractionTree::Split {
        rotate: st.rotate,
        bridge_len: st.bridge_len,
        projection: st.projection,
        first: Box::new(first?),
        second: Box::new(second?),
    })
}
