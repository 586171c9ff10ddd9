//! Homotopy certificates and their independent replay.
//!
//! Text format, one item per line (`#` starts a comment):
//!
//! ```text
//! loop 12 4 13 4 12
//! split 0 2 : 12 4 13
//! tile
//! backtrack 0
//! end
//! tile
//! rotate 1
//! slide 0 30 4 30
//! end
//! ```
//!
//! A `split ROT LEN : R...` node is followed by the certificates of its
//! two children in order.

use std::fmt::Write as _;

use super::EdgePath;
use crate::dual::DualComplex;
use crate::poset::CellId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Remove positions `at + 1, at + 2` where `v[at] = v[at + 2]`.
    Backtrack { at: usize },
    /// Replace `v[at + 1]` by the opposite corner `replacement` of the dual
    /// square `[lo, hi]` spanned by `v[at], v[at + 1], v[at + 2]`.
    Slide { at: usize, replacement: CellId, lo: CellId, hi: CellId },
    /// Re-base a loop at position `by`.
    Rotate { by: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionTree {
    /// Moves reducing the loop to a constant loop.
    Tile { moves: Vec<Move> },
    /// Rotate by `rotate`; the first `bridge_len` edges form a bridge `q1`
    /// with projection `projection`. The children contract
    /// `q1 · projection⁻¹` and `projection · q2`.
    Split {
        rotate: usize,
        bridge_len: usize,
        projection: Vec<CellId>,
        first: Box<ContractionTree>,
        second: Box<ContractionTree>,
    },
}

impl ContractionTree {
    pub fn depth(&self) -> usize {
        match self {
            ContractionTree::Tile { .. } => 0,
            ContractionTree::Split { first, second, .. } => 1 + first.depth().max(second.depth()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ContractionTree::Tile { .. } => 1,
            ContractionTree::Split { first, second, .. } => first.leaves() + second.leaves(),
        }
    }
}

/// Applies one move, checking its preconditions against the dual.
pub fn apply_move(d: &DualComplex, p: &EdgePath, mv: &Move) -> Result<EdgePath, String> {
    let v = &p.vertices;
    let s = p.len();
    match *mv {
        Move::Backtrack { at } => {
            if at + 2 > s || v[at] != v[at + 2] {
                return Err(format!("no backtrack at {at}"));
            }
            let mut w = v.clone();
            w.drain(at + 1..at + 3);
            Ok(EdgePath { vertices: w })
        }
        Move::Slide { at, replacement, lo, hi } => {
            if at + 2 > s {
                return Err(format!("slide position {at} out of range"));
            }
            if hi >= d.vertex_count() || lo >= d.vertex_count() || !d.is_square(lo, hi) {
                return Err(format!("[{lo}, {hi}] is not a dual square"));
            }
            let mut sq = d.square_vertices(lo, hi);
            sq.sort_unstable();
            let mut got = vec![v[at], v[at + 1], v[at + 2], replacement];
            got.sort_unstable();
            if sq != got {
                return Err(format!("slide at {at} does not match square [{lo}, {hi}]"));
            }
            if d.adjacent(v[at + 1], replacement) {
                return Err("replacement is not opposite".into());
            }
            let mut w = v.clone();
            w[at + 1] = replacement;
            Ok(EdgePath { vertices: w })
        }
        Move::Rotate { by } => {
            if !p.is_loop() {
                return Err("rotation of a non-loop".into());
            }
            Ok(p.rotated(by))
        }
    }
}

/// Replays `moves` from `initial` and compares with `claimed`.
pub fn verify_certificate(d: &DualComplex, initial: &EdgePath, moves: &[Move], claimed: &EdgePath) -> bool {
    if EdgePath::new(d, initial.vertices.clone()).is_err() {
        return false;
    }
    let mut p = initial.clone();
    for mv in moves {
        match apply_move(d, &p, mv) {
            Ok(q) => p = q,
            Err(_) => return false,
        }
    }
    p == *claimed
}

/// Checks a contraction tree for a loop: every leaf reduces its loop to a
/// constant, and every split produces two strictly shorter loops.
pub fn verify_contraction(d: &DualComplex, p: &EdgePath, tree: &ContractionTree) -> bool {
    if EdgePath::new_loop(d, p.vertices.clone()).is_err() {
        return false;
    }
    match tree {
        ContractionTree::Tile { moves } => {
            let mut q = p.clone();
            for mv in moves {
                match apply_move(d, &q, mv) {
                    Ok(r) => q = r,
                    Err(_) => return false,
                }
            }
            q.len() == 0
        }
        ContractionTree::Split { rotate, bridge_len, projection, first, second } => {
            let q = p.rotated(*rotate);
            let l = *bridge_len;
            if l == 0 || l >= q.len() || projection.is_empty() {
                return false;
            }
            let Ok(r) = EdgePath::new(d, projection.clone()) else {
                return false;
            };
            let q1 = q.sub(0, l);
            let q2 = q.sub(l, q.len());
            if r.start() != q1.start() || r.end() != q1.end() {
                return false;
            }
            let p1 = q1.concat(&r.reversed());
            let p2 = r.concat(&q2);
            p1.len() < p.len() && p2.len() < p.len() && verify_contraction(d, &p1, first) && verify_contraction(d, &p2, second)
        }
    }
}

/// A loop together with its contraction tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub path: Vec<CellId>,
    pub tree: ContractionTree,
}

pub fn render_certificate(path: &EdgePath, tree: &ContractionTree) -> String {
    let mut out = String::new();
    writeln!(out, "loop {path}").unwrap();
    render_tree(tree, &mut out);
    out
}

fn render_tree(t: &ContractionTree, out: &mut String) {
    match t {
        ContractionTree::Tile { moves } => {
            out.push_str("tile\n");
            for mv in moves {
                match mv {
                    Move::Backtrack { at } => writeln!(out, "backtrack {at}"),
                    Move::Slide { at, replacement, lo, hi } => writeln!(out, "slide {at} {replacement} {lo} {hi}"),
                    Move::Rotate { by } => writeln!(out, "rotate {by}"),
                }
                .unwrap();
            }
            out.push_str("end\n");
        }
        ContractionTree::Split { rotate, bridge_len, projection, first, second } => {
            let r: Vec<String> = projection.iter().map(|v| v.to_string()).collect();
            writeln!(out, "split {rotate} {bridge_len} : {}", r.join(" ")).unwrap();
            render_tree(first, out);
            render_tree(second, out);
        }
    }
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or("empty certificate")?;
    let rest = first.strip_prefix("loop").ok_or(format!("line {ln}: expected `loop`"))?;
    let path = numbers(rest, ln)?;
    let tree = parse_tree(&mut lines)?;
    if let Some((ln, _)) = lines.next() {
        return Err(format!("line {ln}: trailing content"));
    }
    Ok(CertificateFile { path, tree })
}

fn numbers(s: &str, ln: usize) -> Result<Vec<usize>, String> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| format!("line {ln}: bad number `{t}`"))).collect()
}

fn parse_tree<'a, I: Iterator<Item = (usize, &'a str)>>(lines: &mut I) -> Result<ContractionTree, String> {
    let (ln, head) = lines.next().ok_or("unexpected end of certificate")?;
    if head == "tile" {
        let mut moves = Vec::new();
        loop {
            let (ln, l) = lines.next().ok_or("unterminated tile block")?;
            if l == "end" {
                return Ok(ContractionTree::Tile { moves });
            }
            let mut parts = l.splitn(2, ' ');
            let kw = parts.next().unwrap();
            let args = numbers(parts.next().unwrap_or(""), ln)?;
            let mv = match (kw, args.as_slice()) {
                ("backtrack", [at]) => Move::Backtrack { at: *at },
                ("slide", [at, w, lo, hi]) => Move::Slide { at: *at, replacement: *w, lo: *lo, hi: *hi },
                ("rotate", [by]) => Move::Rotate { by: *by },
                _ => return Err(format!("line {ln}: bad move `{l}`")),
            };
            moves.push(mv);
        }
    }
    let rest = head.strip_prefix("split").ok_or(format!("line {ln}: expected `tile` or `split`"))?;
    let (lhs, rhs) = rest.split_once(':').ok_or(format!("line {ln}: split needs `:`"))?;
    let nums = numbers(lhs, ln)?;
    let [rotate, bridge_len] = nums[..] else {
        return Err(format!("line {ln}: split needs rotation and bridge length"));
    };
    let projection = numbers(rhs, ln)?;
    let first = Box::new(parse_tree(lines)?);
    let second = Box::new(parse_tree(lines)?);
    Ok(ContractionTree::Split { rotate, bridge_len, projection, first, second })
}
