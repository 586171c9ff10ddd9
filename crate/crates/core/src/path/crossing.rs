use std::collections::BTreeSet;

use serde::Serialize;

use super::{EdgePath, PathError};
use crate::dual::DualComplex;

/// A maximal run of path positions inside a dual mirror whose flanking
/// vertices lie in different components of the complement. Positions are
/// inclusive; on loops they are taken modulo the length and `end` may be
/// smaller than `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub start: usize,
    pub end: usize,
}

/// Crossings of `p` with mirror `m`.
pub fn crossings(d: &DualComplex, p: &EdgePath, m: usize) -> Result<Vec<Crossing>, PathError> {
    if !d.separation(m).separating {
        return Err(PathError::NonSeparatingMirror(m));
    }
    let inside = |i: usize| d.in_mirror(m, p.vertices[i]);
    let comp = |i: usize| d.component(m, p.vertices[i]);
    let mut out = Vec::new();
    if p.is_loop() && p.len() > 0 {
        let s = p.len();
        let Some(base) = (0..s).find(|&i| !inside(i)) else {
            return Ok(out);
        };
        let mut k = 1;
        while k <= s {
            let i = (base + k) % s;
            if !inside(i) {
                k += 1;
                continue;
            }
            let start = i;
            let mut j = k;
            while inside((base + j) % s) {
                j += 1;
            }
            let end = (base + j - 1) % s;
            let before = (start + s - 1) % s;
            let after = (base + j) % s;
            if comp(before) != comp(after) {
                out.push(Crossing { start, end });
            }
            k = j;
        }
        out.sort_by_key(|c| c.start);
    } else {
        let n = p.vertices.len();
        let mut i = 0;
        while i < n {
            if !inside(i) {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && inside(i) {
                i += 1;
            }
            let end = i - 1;
            if start > 0 && end + 1 < n && comp(start - 1) != comp(end + 1) {
                out.push(Crossing { start, end });
            }
        }
    }
    Ok(out)
}

/// Total number of crossings over all mirrors.
pub fn mirror_complexity(d: &DualComplex, p: &EdgePath) -> Result<usize, PathError> {
    let touched: BTreeSet<usize> = p.vertices.iter().flat_map(|&v| d.mirrors.of_cell[v].iter().copied()).collect();
    let mut total = 0;
    for m in touched {
        total += crossings(d, p, m)?.len();
    }
    Ok(total)
}
