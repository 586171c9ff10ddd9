//! The bipartite incidence graph between the mirrors of one colour and the
//! components of the complement of their union.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cubical::CubicalComplex;
use crate::folding::CubeFolding;
use crate::mirror::{maximal_cofaces, mirrors, Mirrors};
use crate::poset::{CellId, CellPoset};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Node {
    Mirror(usize),
    Component(usize),
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Node::Mirror(m) => write!(f, "M{m}"),
            Node::Component(c) => write!(f, "C{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVerdict {
    pub connected: bool,
    pub acyclic: bool,
    pub leaves: Vec<Node>,
}

impl TreeVerdict {
    pub fn is_tree(&self) -> bool {
        self.connected && self.acyclic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeOfSpaces {
    pub coord: usize,
    /// Global mirror ids of colour `coord`, ascending.
    pub mirrors: Vec<usize>,
    /// Each component as its sorted list of maximal cells; components are
    /// ordered by least cell.
    pub components: Vec<Vec<CellId>>,
    /// Pairs `(mirror id, component index)`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub verdict: TreeVerdict,
}

impl TreeOfSpaces {
    pub fn nodes(&self) -> Vec<Node> {
        let mut out: Vec<Node> = self.mirrors.iter().map(|&m| Node::Mirror(m)).collect();
        out.extend((0..self.components.len()).map(Node::Component));
        out
    }

    pub fn neighbors(&self, n: Node) -> Vec<Node> {
        let mut out: Vec<Node> = match n {
            Node::Mirror(m) => self.edges.iter().filter(|e| e.0 == m).map(|e| Node::Component(e.1)).collect(),
            Node::Component(c) => self.edges.iter().filter(|e| e.1 == c).map(|e| Node::Mirror(e.0)).collect(),
        };
        out.sort();
        out
    }

    pub fn component_of(&self, top: CellId) -> Option<usize> {
        self.components.iter().position(|c| c.binary_search(&top).is_ok())
    }
}

pub fn build_tree(y: &CubicalComplex, f: &CubeFolding, coord: usize) -> TreeOfSpaces {
    let ms = mirrors(y, f);
    let tops = maximal_cofaces(y);
    build_tree_with(y, &ms, &tops, coord)
}

/// Trees for every folding coordinate, built in parallel.
pub fn build_trees(y: &CubicalComplex, f: &CubeFolding) -> Vec<TreeOfSpaces> {
    let ms = mirrors(y, f);
    let tops = maximal_cofaces(y);
    (0..f.dim).into_par_iter().map(|i| build_tree_with(y, &ms, &tops, i)).collect()
}

fn build_tree_with(y: &CubicalComplex, ms: &Mirrors, tops: &[Vec<CellId>], coord: usize) -> TreeOfSpaces {
    let colour: Vec<usize> = ms.list.iter().filter(|m| m.coord == coord).map(|m| m.id).collect();
    let in_colour = |c: CellId| ms.of_cell[c].iter().any(|m| ms.list[*m].coord == coord);

    let maximal = y.maximal();
    let pos: std::collections::HashMap<CellId, usize> = maximal.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut uf = UnionFind::new(maximal.len());
    for c in 0..y.len() {
        if in_colour(c) {
            continue;
        }
        for w in tops[c].windows(2) {
            uf.union(pos[&w[0]], pos[&w[1]]);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<CellId>> = Default::default();
    for (i, &c) in maximal.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(c);
    }
    let mut components: Vec<Vec<CellId>> = groups.into_values().collect();
    components.sort();
    let mut comp_of = vec![0; maximal.len()];
    for (k, comp) in components.iter().enumerate() {
        for c in comp {
            comp_of[pos[c]] = k;
        }
    }

    let mut edges = BTreeSet::new();
    for &m in &colour {
        for &c in &ms.list[m].cells {
            for t in &tops[c] {
                edges.insert((m, comp_of[pos[t]]));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();

    let verdict = judge(&colour, components.len(), &edges);
    TreeOfSpaces { coord, mirrors: colour, components, edges, verdict }
}

fn judge(mirrors: &[usize], ncomp: usize, edges: &[(usize, usize)]) -> TreeVerdict {
    let nm = mirrors.len();
    let index = |m: usize| mirrors.binary_search(&m).unwrap();
    let n = nm + ncomp;
    let mut uf = UnionFind::new(n);
    let mut degree = vec![0usize; n];
    for &(m, c) in edges {
        uf.union(index(m), nm + c);
        degree[index(m)] += 1;
        degree[nm + c] += 1;
    }
    let parts = uf.component_count();
    let connected = parts <= 1;
    // a forest has exactly n - parts edges
    let acyclic = edges.len() + parts == n;
    let mut leaves: Vec<Node> = Vec::new();
    for (i, &m) in mirrors.iter().enumerate() {
        if degree[i] == 1 {
            leaves.push(Node::Mirror(m));
        }
    }
    for c in 0..ncomp {
        if degree[nm + c] == 1 {
            leaves.push(Node::Component(c));
        }
    }
    TreeVerdict { connected, acyclic, leaves }
}

/// Whether a cell of mirror `m` is a face of some cube in `comp`.
pub fn bounds(y: &CubicalComplex, ms: &Mirrors, m: usize, comp: &[CellId]) -> bool {
    comp.iter().any(|&t| y.faces(t).iter().any(|&c| ms.list[m].contains(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    fn trees(name: &str) -> Vec<TreeOfSpaces> {
        let fx = fixture(name).unwrap();
        build_trees(&fx.complex, fx.folding.as_ref().unwrap())
    }

    #[test]
    fn grid_trees_are_paths() {
        for t in trees("grid2") {
            assert_eq!(t.mirrors.len(), 3);
            assert_eq!(t.components.len(), 2);
            assert_eq!(t.edges.len(), 4);
            assert!(t.verdict.is_tree());
            assert_eq!(t.verdict.leaves.len(), 2);
        }
    }

    #[test]
    fn book_spine_colour_is_a_star() {
        let ts = trees("book3");
        let star = ts.iter().find(|t| t.mirrors.len() == 4).unwrap();
        assert_eq!(star.components.len(), 3);
        assert_eq!(star.edges.len(), 6);
        assert!(star.verdict.is_tree());
        let hub = star.nodes().into_iter().find(|&n| star.neighbors(n).len() == 3).unwrap();
        assert!(matches!(hub, Node::Mirror(_)));
        let other = ts.iter().find(|t| t.mirrors.len() == 2).unwrap();
        assert_eq!(other.components.len(), 1);
        assert!(other.verdict.is_tree());
    }

    #[test]
    fn torus_has_cycles() {
        for t in trees("torus4") {
            assert!(t.verdict.connected);
            assert!(!t.verdict.acyclic);
        }
    }

    #[test]
    fn edges_are_incidences() {
        let fx = fixture("book3").unwrap();
        let f = fx.folding.unwrap();
        let ms = mirrors(&fx.complex, &f);
        for t in build_trees(&fx.complex, &f) {
            for &m in &t.mirrors {
                for (k, comp) in t.components.iter().enumerate() {
                    assert_eq!(bounds(&fx.complex, &ms, m, comp), t.edges.contains(&(m, k)));
                }
            }
            let total: usize = t.components.iter().map(|c| c.len()).sum();
            assert_eq!(total, fx.complex.maximal().len());
        }
    }
}
