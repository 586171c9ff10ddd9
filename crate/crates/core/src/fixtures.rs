//! Named example complexes.

use crate::cube::VertexId;
use crate::cubical::CubicalComplex;
use crate::folding::{find_folding, CubeFolding, SimplexFolding};
use crate::gromov::{gromov_cell, gromov_hyperbolize};
use crate::simplicial::SimplicialComplex;

/// Names accepted by [`fixture`]. `rose<m>` for `m >= 2` is also accepted.
pub const FIXTURE_NAMES: &[&str] = &["sq1", "grid2", "book3", "cube1", "torus4", "gdelta2", "sphere"];

/// Fixtures on which every loop of the dual contracts.
pub const SIMPLY_CONNECTED: &[&str] = &["sq1", "grid2", "book3", "cube1"];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub complex: CubicalComplex,
    /// `None` when the complex is not foldable.
    pub folding: Option<CubeFolding>,
}

fn found(name: &str, complex: CubicalComplex) -> Fixture {
    let folding = find_folding(&complex).ok();
    Fixture { name: name.to_string(), complex, folding }
}

pub fn fixture(name: &str) -> Option<Fixture> {
    let x = match name {
        "sq1" => found(name, sq1()),
        "grid2" => found(name, grid(2, 2)),
        "book3" => found(name, book(3)),
        "cube1" => found(name, cube1()),
        "torus4" => found(name, torus(4)),
        "gdelta2" => {
            let g = gromov_cell(2).ok()?;
            Fixture { name: name.into(), complex: g.complex.clone(), folding: Some(g.folding.clone()) }
        }
        "sphere" => {
            let bd = boundary_simplex(3);
            let g = gromov_hyperbolize(&bd, None).ok()?;
            Fixture { name: name.into(), complex: g.complex, folding: Some(g.folding) }
        }
        _ => {
            let m: usize = name.strip_prefix("rose")?.parse().ok()?;
            if m < 2 {
                return None;
            }
            found(name, rose(m))
        }
    };
    Some(x)
}

pub fn sq1() -> CubicalComplex {
    CubicalComplex::from_cubes(vec![vec![0, 1, 2, 3]]).unwrap()
}

/// `w × h` grid of unit squares; vertex `(x, y)` has id `y (w + 1) + x`.
pub fn grid(w: u32, h: u32) -> CubicalComplex {
    let id = |x: u32, y: u32| y * (w + 1) + x;
    let mut raw = Vec::new();
    for y in 0..h {
        for x in 0..w {
            raw.push(vec![id(x, y), id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)]);
        }
    }
    CubicalComplex::from_cubes(raw).unwrap()
}

/// `m` squares sharing the spine `a = 0, b = 1`; page `i` is
/// `a b c_i d_i` with `c_i = 2 + 2i`, `d_i = 3 + 2i`.
pub fn book(m: u32) -> CubicalComplex {
    let raw = (0..m).map(|i| vec![0, 1, 2 + 2 * i, 3 + 2 * i]);
    CubicalComplex::from_cubes(raw).unwrap()
}

pub fn cube1() -> CubicalComplex {
    CubicalComplex::from_cubes(vec![(0..8).collect()]).unwrap()
}

/// `k × k` square torus; vertex `(x, y)` has id `y k + x`.
pub fn torus(k: u32) -> CubicalComplex {
    let id = |x: u32, y: u32| (y % k) * k + (x % k);
    let mut raw = Vec::new();
    for y in 0..k {
        for x in 0..k {
            raw.push(vec![id(x, y), id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)]);
        }
    }
    CubicalComplex::from_cubes(raw).unwrap()
}

/// `m` squares arranged cyclically around the centre vertex `0`, with
/// consecutive squares sharing a spoke. Spoke ends are `1..=m`, outer
/// corners `m+1..=2m`. For `m = 2` the squares share two edges and the
/// result is not admissible.
pub fn rose(m: usize) -> CubicalComplex {
    let m = m as VertexId;
    let raw = (0..m).map(|j| vec![0, 1 + j, 1 + (j + 1) % m, 1 + m + j]);
    CubicalComplex::from_cubes(raw).unwrap()
}

/// Boundary of the `n`-simplex on vertices `0..=n`.
pub fn boundary_simplex(n: u32) -> SimplicialComplex {
    let facets = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect());
    SimplicialComplex::from_simplices(facets).unwrap()
}

pub fn simplex(n: u32) -> SimplicialComplex {
    SimplicialComplex::from_simplices(vec![(0..=n).collect()]).unwrap()
}

/// Cone over a 4-cycle, apex `0`, folded by `0 ↦ 0`, `1, 3 ↦ 1`, `2, 4 ↦ 2`.
pub fn cone4() -> (SimplicialComplex, SimplexFolding) {
    let k = SimplicialComplex::from_simplices(vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 1]]).unwrap();
    let f = SimplexFolding { dim: 2, labels: [(0, 0), (1, 1), (2, 2), (3, 1), (4, 2)].into_iter().collect() };
    (k, f)
}

/// Two triangles sharing the edge `1 2`, folded by the vertex labels
/// `0 ↦ 0, 1 ↦ 1, 2 ↦ 2, 3 ↦ 0`.
pub fn two_triangles() -> (SimplicialComplex, SimplexFolding) {
    let k = SimplicialComplex::from_simplices(vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    let f = SimplexFolding { dim: 2, labels: [(0, 0), (1, 1), (2, 2), (3, 0)].into_iter().collect() };
    (k, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        assert_eq!(grid(2, 2).count_by_dim(), vec![9, 12, 4]);
        assert_eq!(book(3).count_by_dim(), vec![8, 10, 3]);
        assert_eq!(torus(4).count_by_dim(), vec![16, 32, 16]);
        assert_eq!(torus(4).euler_characteristic(), 0);
        assert_eq!(rose(3).count_by_dim(), vec![7, 9, 3]);
    }

    #[test]
    fn rose_two_is_not_admissible() {
        assert!(rose(2).check_admissible().is_err());
        assert!(rose(4).check_admissible().is_ok());
    }

    #[test]
    fn every_named_fixture_builds() {
        for name in FIXTURE_NAMES {
            let fx = fixture(name).unwrap();
            fx.complex.check_admissible().unwrap();
            assert!(fx.folding.is_some(), "{name} folds");
        }
    }
}
