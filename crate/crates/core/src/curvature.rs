//! Link conditions, hyperplanes and the pathologies that obstruct
//! specialness.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cube::VertexId;
use crate::cubical::CubicalComplex;
use crate::folding::{parallelism_classes, CubeFolding};
use crate::mirror::Mirror;
use crate::poset::{link, CellId, CellPoset};
use crate::simplicial::SimplicialComplex;

/// Least clique of the 1-skeleton that does not span a simplex, ordered by
/// size and then lexicographically. `None` when the complex is flag.
pub fn non_flag_witness(l: &SimplicialComplex) -> Option<Vec<VertexId>> {
    let verts = l.vertices();
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = verts.iter().map(|&v| (v, BTreeSet::new())).collect();
    for e in l.edges() {
        adj.get_mut(&e[0]).unwrap().insert(e[1]);
        adj.get_mut(&e[1]).unwrap().insert(e[0]);
    }
    // grow cliques level by level from simplices: a minimal missing clique
    // has every proper subset present
    let mut level: Vec<Vec<VertexId>> = l.edges().cloned().collect();
    while !level.is_empty() {
        let mut missing = Vec::new();
        let mut next = Vec::new();
        for s in &level {
            let last = *s.last().unwrap();
            let common: Vec<VertexId> = adj[&s[0]]
                .range(last + 1..)
                .copied()
                .filter(|w| s.iter().all(|u| adj[u].contains(w)))
                .collect();
            for w in common {
                let mut t = s.clone();
                t.push(w);
                if l.contains(&t) {
                    next.push(t);
                } else {
                    missing.push(t);
                }
            }
        }
        if let Some(m) = missing.into_iter().min() {
            return Some(m);
        }
        level = next;
    }
    None
}

pub fn is_flag(l: &SimplicialComplex) -> bool {
    non_flag_witness(l).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NpcWitness {
    pub vertex: VertexId,
    pub clique: Vec<VertexId>,
}

/// Gromov's link condition at every vertex. The witness names the first
/// failing vertex and the missing clique of its link (cell ids of edges).
pub fn check_npc(x: &CubicalComplex) -> Result<(), NpcWitness> {
    for v in 0..x.vertex_count() {
        let l = link(x, v);
        if let Some(clique) = non_flag_witness(&l.complex) {
            return Err(NpcWitness { vertex: x.cell(v).corners()[0], clique });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hyperplane {
    pub id: usize,
    /// Dual edges, sorted.
    pub edges: Vec<CellId>,
    /// Cubes containing a dual edge, sorted.
    pub carrier: Vec<CellId>,
}

/// Hyperplanes as parallelism classes of edges, in order of least edge.
pub fn hyperplanes(x: &CubicalComplex) -> Vec<Hyperplane> {
    let (class_of, n) = parallelism_classes(x);
    let mut edges = vec![Vec::new(); n];
    for e in x.cells_of_dim(1) {
        edges[class_of[e].unwrap()].push(e);
    }
    edges
        .into_iter()
        .enumerate()
        .map(|(id, es)| {
            let mut carrier = BTreeSet::new();
            for &e in &es {
                carrier.extend(x.cofaces(e));
            }
            Hyperplane { id, edges: es, carrier: carrier.into_iter().collect() }
        })
        .collect()
}

/// Violations of specialness, each as a concrete witness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PathologyReport {
    /// `(square, hyperplane)`: both directions of the square are dual to it.
    pub self_intersections: Vec<(CellId, usize)>,
    /// `(hyperplane, vertex, e1, e2)`: two dual edges at a vertex not
    /// spanning a square.
    pub self_osculations: Vec<(usize, CellId, CellId, CellId)>,
    /// `(h1, h2, vertex, e1, e2)`: crossing hyperplanes with edges at a
    /// vertex not spanning a square.
    pub inter_osculations: Vec<(usize, usize, CellId, CellId, CellId)>,
}

impl PathologyReport {
    pub fn is_special(&self) -> bool {
        self.self_intersections.is_empty() && self.self_osculations.is_empty() && self.inter_osculations.is_empty()
    }
}

pub fn check_special(x: &CubicalComplex) -> PathologyReport {
    let (class_of, _) = parallelism_classes(x);
    let mut report = PathologyReport::default();
    let mut crossing = BTreeSet::new();
    for s in x.cells_of_dim(2) {
        let c = x.cell(s);
        let a = class_of[x.lookup_canonical(c.facet(0, false).corners()).unwrap()].unwrap();
        let b = class_of[x.lookup_canonical(c.facet(1, false).corners()).unwrap()].unwrap();
        if a == b {
            report.self_intersections.push((s, a));
        } else {
            crossing.insert((a.min(b), a.max(b)));
        }
    }
    for v in 0..x.vertex_count() {
        let es: Vec<CellId> = x.cofacets(v).to_vec();
        for (i, &e1) in es.iter().enumerate() {
            for &e2 in &es[i + 1..] {
                let spans = x.cofacets(e1).iter().any(|s| x.facets(*s).contains(&e2));
                if spans {
                    continue;
                }
                let (h1, h2) = (class_of[e1].unwrap(), class_of[e2].unwrap());
                if h1 == h2 {
                    report.self_osculations.push((h1, v, e1, e2));
                } else if crossing.contains(&(h1.min(h2), h1.max(h2))) {
                    report.inter_osculations.push((h1.min(h2), h1.max(h2), v, e1, e2));
                }
            }
        }
    }
    report
}

/// Whether a mirror containing one facet on a side of a hyperplane carrier
/// contains that whole side.
pub fn mirror_carries_hyperplane_side(x: &CubicalComplex, f: &CubeFolding, m: &Mirror, h: &Hyperplane) -> bool {
    let coord = f.edge_coordinate(x, h.edges[0]);
    for side in [false, true] {
        let mut facets = BTreeSet::new();
        for &c in &h.carrier {
            let (free, _) = f.cell_face(x, c);
            if free & (1 << coord) == 0 {
                continue;
            }
            // facets of c fixing the hyperplane coordinate to `side`
            for g in x.facets(c).iter().copied() {
                let (gf, gv) = f.cell_face(x, g);
                if gf & (1 << coord) == 0 && ((gv >> coord) & 1 == 1) == side {
                    facets.insert(g);
                }
            }
        }
        let inside = facets.iter().filter(|&&g| m.contains(g)).count();
        if inside != 0 && inside != facets.len() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hollow_triangle_not_flag() {
        let l = SimplicialComplex::from_simplices(vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(non_flag_witness(&l), Some(vec![0, 1, 2]));
        let full = SimplicialComplex::from_simplices(vec![vec![0, 1, 2]]).unwrap();
        assert!(is_flag(&full));
        let c4 = SimplicialComplex::from_simplices(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert!(is_flag(&c4));
    }

    #[test]
    fn hollow_tetrahedron_witness_is_four_clique() {
        let l = SimplicialComplex::from_simplices(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        assert_eq!(non_flag_witness(&l), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn three_squares_around_a_vertex_fail_npc() {
        // corner of a cube surface: three squares meeting at vertex 0
        let x = CubicalComplex::from_cubes(vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![0, 2, 4, 6]]).unwrap();
        let w = check_npc(&x).unwrap_err();
        assert_eq!(w.vertex, 0);
        assert_eq!(w.clique.len(), 3);
    }
}
