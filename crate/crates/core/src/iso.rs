//! Isomorphism search for small complexes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::cube::{canonical_corners, VertexId};
use crate::cubical::CubicalComplex;
use crate::simplicial::SimplicialComplex;

struct Graph {
    verts: Vec<VertexId>,
    adj: Vec<BTreeSet<usize>>,
    /// Cheap invariant used to prune: degree and number of top cells at
    /// the vertex.
    sig: Vec<(usize, usize)>,
}

fn graph_of(verts: Vec<VertexId>, edges: &[(VertexId, VertexId)], incid: &BTreeMap<VertexId, usize>) -> Graph {
    let pos: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![BTreeSet::new(); verts.len()];
    for &(a, b) in edges {
        adj[pos[&a]].insert(pos[&b]);
        adj[pos[&b]].insert(pos[&a]);
    }
    let sig = verts.iter().enumerate().map(|(i, v)| (adj[i].len(), incid.get(v).copied().unwrap_or(0))).collect();
    Graph { verts, adj, sig }
}

/// Backtracking vertex matcher; `accept` checks a complete bijection.
fn search(a: &Graph, b: &Graph, accept: &dyn Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
    let n = a.verts.len();
    if n != b.verts.len() {
        return None;
    }
    let mut sa: Vec<_> = a.sig.clone();
    let mut sb: Vec<_> = b.sig.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    // order vertices of a so that each one after the first of its
    // component is adjacent to an earlier one
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in &a.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        order: &[usize],
        a: &Graph,
        b: &Graph,
        map: &mut [usize],
        used: &mut [bool],
        accept: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return accept(map);
        }
        let u = order[k];
        for w in 0..b.verts.len() {
            if used[w] || a.sig[u] != b.sig[w] {
                continue;
            }
            let ok = order[..k].iter().all(|&p| a.adj[u].contains(&p) == b.adj[w].contains(&map[p]));
            if !ok {
                continue;
            }
            map[u] = w;
            used[w] = true;
            if go(k + 1, order, a, b, map, used, accept) {
                return true;
            }
            used[w] = false;
            map[u] = usize::MAX;
        }
        false
    }
    if go(0, &order, a, b, &mut map, &mut used, accept) {
        Some(map)
    } else {
        None
    }
}

/// A vertex bijection carrying simplices onto simplices, if one exists.
pub fn simplicial_isomorphism(a: &SimplicialComplex, b: &SimplicialComplex) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.count_by_dim() != b.count_by_dim() {
        return None;
    }
    let incid = |k: &SimplicialComplex| {
        let mut m = BTreeMap::new();
        for &t in &k.maximal() {
            for &v in k.simplex(t) {
                *m.entry(v).or_insert(0) += 1;
            }
        }
        m
    };
    let edges = |k: &SimplicialComplex| k.edges().map(|e| (e[0], e[1])).collect::<Vec<_>>();
    let ga = graph_of(a.vertices(), &edges(a), &incid(a));
    let gb = graph_of(b.vertices(), &edges(b), &incid(b));
    let bset: HashSet<Vec<VertexId>> = b.simplices().iter().cloned().collect();
    let pa: BTreeMap<VertexId, usize> = ga.verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let accept = |map: &[usize]| {
        a.simplices().iter().all(|s| {
            let mut t: Vec<VertexId> = s.iter().map(|v| gb.verts[map[pa[v]]]).collect();
            t.sort_unstable();
            bset.contains(&t)
        })
    };
    let m = search(&ga, &gb, &accept)?;
    Some(ga.verts.iter().enumerate().map(|(i, &v)| (v, gb.verts[m[i]])).collect())
}

/// A vertex bijection carrying cubes onto cubes, if one exists.
pub fn cubical_isomorphism(a: &CubicalComplex, b: &CubicalComplex) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.count_by_dim() != b.count_by_dim() {
        return None;
    }
    let incid = |x: &CubicalComplex| {
        let mut m = BTreeMap::new();
        for t in x.maximal() {
            for &v in x.cell(t).corners() {
                *m.entry(v).or_insert(0) += 1;
            }
        }
        m
    };
    let edges = |x: &CubicalComplex| {
        x.cells_of_dim(1).map(|e| (x.cell(e).corners()[0], x.cell(e).corners()[1])).collect::<Vec<_>>()
    };
    let ga = graph_of(a.vertex_ids(), &edges(a), &incid(a));
    let gb = graph_of(b.vertex_ids(), &edges(b), &incid(b));
    let pa: BTreeMap<VertexId, usize> = ga.verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let accept = |map: &[usize]| {
        a.cells().iter().all(|c| {
            let raw: Vec<VertexId> = c.corners().iter().map(|v| gb.verts[map[pa[v]]]).collect();
            b.lookup_canonical(&canonical_corners(&raw)).is_some()
        })
    };
    let m = search(&ga, &gb, &accept)?;
    Some(ga.verts.iter().enumerate().map(|(i, &v)| (v, gb.verts[m[i]])).collect())
}
