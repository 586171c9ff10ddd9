//! Combinatorial cubes given by corner arrays.
//!
//! A `k`-cube is stored as `2^k` vertex ids indexed by bitmask: bit `a` of
//! the index says which side of local axis `a` the corner sits on. Two
//! arrays describe the same cube when they differ by one of the `2^k * k!`
//! symmetries of the standard cube; [`Cube::new`] picks the lexicographically
//! least representative.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque vertex identifier.
pub type VertexId = u32;

/// Errors raised while building a single cube.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubeError {
    #[error("corner array of length {0} is not a power of two")]
    BadCornerCount(usize),
    #[error("cube {0:?} repeats a vertex")]
    RepeatedCorner(Vec<VertexId>),
}

/// A cube in canonical corner order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    corners: Vec<VertexId>,
}

impl Cube {
    /// Canonicalizes a raw corner array.
    pub fn new(raw: Vec<VertexId>) -> Result<Self, CubeError> {
        let n = raw.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(CubeError::BadCornerCount(n));
        }
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CubeError::RepeatedCorner(raw));
        }
        Ok(Cube { corners: canonical_corners(&raw) })
    }

    /// Cube from an array already known to be canonical.
    pub(crate) fn from_canonical(corners: Vec<VertexId>) -> Self {
        Cube { corners }
    }

    pub fn vertex(v: VertexId) -> Self {
        Cube { corners: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.corners.len().trailing_zeros() as usize
    }

    pub fn corners(&self) -> &[VertexId] {
        &self.corners
    }

    /// Sorted vertex set.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut v = self.corners.clone();
        v.sort_unstable();
        v
    }

    /// Raw corner array of the face obtained by fixing the axes in
    /// `fixed_mask` to the bits in `fixed_values`. Free axes keep their
    /// relative order.
    pub fn face_corners(&self, fixed_mask: usize, fixed_values: usize) -> Vec<VertexId> {
        let k = self.dim();
        let free: Vec<usize> = (0..k).filter(|a| fixed_mask & (1 << a) == 0).collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for s in 0..(1usize << free.len()) {
            let mut idx = fixed_values & fixed_mask;
            for (j, &a) in free.iter().enumerate() {
                if s & (1 << j) != 0 {
                    idx |= 1 << a;
                }
            }
            out.push(self.corners[idx]);
        }
        out
    }

    /// Canonical facet fixing `axis` to `side`.
    pub fn facet(&self, axis: usize, side: bool) -> Cube {
        let raw = self.face_corners(1 << axis, if side { 1 << axis } else { 0 });
        Cube::from_canonical(canonical_corners(&raw))
    }

    /// All faces (including the cube itself), canonicalized, in the order
    /// of the `3^k` (mask, values) pairs.
    pub fn all_faces(&self) -> Vec<Cube> {
        let k = self.dim();
        let full = (1usize << k) - 1;
        let mut out = Vec::new();
        for mask in 0..=full {
            // iterate over values that are subsets of mask
            let mut vals = 0usize;
            loop {
                let raw = self.face_corners(mask, vals);
                out.push(Cube::from_canonical(canonical_corners(&raw)));
                if vals == mask {
                    break;
                }
                vals = (vals.wrapping_sub(mask)) & mask;
            }
        }
        out
    }

    /// Position of `v` in the corner array.
    pub fn corner_index(&self, v: VertexId) -> Option<usize> {
        self.corners.iter().position(|&c| c == v)
    }

    /// For a face given by its vertex set, returns `(fixed_mask, fixed_values)`
    /// in this cube's local coordinates, or `None` if the vertex set is not
    /// a face.
    pub fn locate_face(&self, verts: &[VertexId]) -> Option<(usize, usize)> {
        let k = self.dim();
        let full = (1usize << k) - 1;
        let mut and = full;
        let mut or = 0usize;
        for &v in verts {
            let i = self.corner_index(v)?;
            and &= i;
            or |= i;
        }
        let free = and ^ or;
        let fixed = full & !free;
        if verts.len() != 1 << free.count_ones() {
            return None;
        }
        Some((fixed, and & fixed))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.corners.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Lexicographically least corner array among all cube symmetries.
pub fn canonical_corners(raw: &[VertexId]) -> Vec<VertexId> {
    let n = raw.len();
    let k = n.trailing_zeros() as usize;
    if k == 0 {
        return raw.to_vec();
    }
    // corner 0 of the result must be the least vertex
    let (r, _) = raw.iter().enumerate().min_by_key(|(_, &v)| v).unwrap();
    let mut best: Option<Vec<VertexId>> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let cand: Vec<VertexId> = (0..n)
            .map(|b| {
                let mut src = 0usize;
                for (a, &p) in perm.iter().enumerate() {
                    if b & (1 << a) != 0 {
                        src |= 1 << p;
                    }
                }
                raw[src ^ r]
            })
            .collect();
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
