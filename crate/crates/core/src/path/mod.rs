//! Edge paths in the dual complex and their contraction.
//!
//! A path is a list of dual vertices `v_0 .. v_s` with consecutive entries
//! adjacent; it is a loop when `v_0 = v_s`. Lengths count edges.

mod bridge;
mod certificate;
mod crossing;
mod surgery;
mod tile;

pub use bridge::{is_bridge, minimal_bridge, project_bridge, project_cell, supporting_mirrors, Projection};
pub use certificate::{
    apply_move, parse_certificate, render_certificate, verify_certificate, verify_contraction, CertificateFile,
    ContractionTree, Move,
};
pub use crossing::{crossings, mirror_complexity, Crossing};
pub use surgery::{contract_loop, surgery_step, SurgeryStep};
pub use tile::{contract_in_tile, make_efficient, stays_in_tile};

use crate::dual::DualComplex;
use crate::poset::CellId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("vertices {0} and {1} are not adjacent in the dual")]
    NotAdjacent(CellId, CellId),
    #[error("vertex {0} is not a dual vertex")]
    UnknownVertex(CellId),
    #[error("path is not a loop")]
    NotALoop,
    #[error("path does not stay in one tile")]
    NotInTile,
    #[error("mirror {0} does not separate the dual")]
    NonSeparatingMirror(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("path is not a bridge")]
    NotABridge,
    #[error("loop crosses no mirror")]
    NoCrossing,
    #[error("projection of a bridge onto mirror {mirror} is undefined at vertex {vertex}")]
    CarrierViolation { mirror: usize, vertex: CellId },
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// A checked edge path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePath {
    pub vertices: Vec<CellId>,
}

impl EdgePath {
    pub fn new(d: &DualComplex, vertices: Vec<CellId>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Unsupported("empty path".into()));
        }
        for &v in &vertices {
            if v >= d.vertex_count() {
                return Err(PathError::UnknownVertex(v));
            }
        }
        for w in vertices.windows(2) {
            if !d.adjacent(w[0], w[1]) {
                return Err(PathError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(EdgePath { vertices })
    }

    pub fn new_loop(d: &DualComplex, vertices: Vec<CellId>) -> Result<Self, PathError> {
        let p = Self::new(d, vertices)?;
        if !p.is_loop() {
            return Err(PathError::NotALoop);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_loop(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn start(&self) -> CellId {
        self.vertices[0]
    }

    pub fn end(&self) -> CellId {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> EdgePath {
        let mut v = self.vertices.clone();
        v.reverse();
        EdgePath { vertices: v }
    }

    /// Loop re-based at position `k`.
    pub fn rotated(&self, k: usize) -> EdgePath {
        let s = self.len();
        if s == 0 {
            return self.clone();
        }
        let k = k % s;
        let mut v: Vec<CellId> = self.vertices[k..s].to_vec();
        v.extend_from_slice(&self.vertices[..=k]);
        EdgePath { vertices: v }
    }

    /// Subpath between positions `a <= b`.
    pub fn sub(&self, a: usize, b: usize) -> EdgePath {
        EdgePath { vertices: self.vertices[a..=b].to_vec() }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        debug_assert_eq!(self.end(), other.start());
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        EdgePath { vertices: v }
    }

    pub fn max_height(&self, d: &DualComplex) -> usize {
        self.vertices.iter().map(|&v| d.height(v)).max().unwrap_or(0)
    }
}

impl std::fmt::Display for EdgePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
