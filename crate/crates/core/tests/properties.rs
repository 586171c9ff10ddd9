use cubemill::dual::build_dual;
use cubemill::fixtures::{self, fixture};
use cubemill::folding::{find_folding, verify_folding, Verdict};
use cubemill::io::{parse_complex, write_complex, write_cubical, Complex};
use cubemill::iso::simplicial_isomorphism;
use cubemill::path::{contract_loop, crossings, parse_certificate, render_certificate, verify_contraction, EdgePath};
use cubemill::subdivision::{barycentric_subdivision, cubical_subdivision};
use cubemill::{link, Cube, CubicalComplex, VertexId};
use proptest::prelude::*;

/// Corner array of a cube after permuting axes and reflecting.
fn transform(corners: &[VertexId], perm: &[usize], flips: usize) -> Vec<VertexId> {
    let k = perm.len();
    (0..corners.len())
        .map(|i| {
            let mut j = 0;
            for (a, &p) in perm.iter().enumerate() {
                if i >> a & 1 == 1 {
                    j |= 1 << p;
                }
            }
            corners[(j ^ flips) & ((1 << k) - 1)]
        })
        .collect()
}

fn axis_perm(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

/// Sub-grids: a nonempty set of squares of a 3 × 3 grid.
fn subgrid() -> impl Strategy<Value = CubicalComplex> {
    prop::collection::btree_set(0u32..9, 1..9).prop_map(|sq| {
        let raw = sq.into_iter().map(|s| {
            let (x, y) = (s % 3, s / 3);
            let id = |x: u32, y: u32| y * 4 + x;
            vec![id(x, y), id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)]
        });
        CubicalComplex::from_cubes(raw).unwrap()
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_presentation(k in 0usize..4, perm_seed in any::<u64>(), flips in any::<usize>()) {
        let corners: Vec<VertexId> = (0..(1u32 << k)).map(|v| v * 7 % 31 + v).collect();
        let perm = {
            let mut p: Vec<usize> = (0..k).collect();
            let mut s = perm_seed;
            for i in (1..k).rev() {
                p.swap(i, (s % (i as u64 + 1)) as usize);
                s /= 7;
            }
            p
        };
        let a = Cube::new(corners.clone()).unwrap();
        let b = Cube::new(transform(&corners, &perm, flips)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(Cube::new(a.corners().to_vec()).unwrap(), a);
    }

    #[test]
    fn complex_files_round_trip(x in subgrid(), perm in axis_perm(2), flips in 0usize..4) {
        let text = write_cubical(&x);
        let parsed = parse_complex(&text).unwrap();
        prop_assert_eq!(write_complex(&parsed), text.clone());
        // any presentation of the same cubes canonicalizes to the same text
        let raw: Vec<Vec<VertexId>> = x
            .maximal()
            .iter()
            .rev()
            .map(|&c| transform(x.cell(c).corners(), &perm, flips))
            .collect();
        let body: Vec<String> = raw
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let shuffled = format!("{{ \"cells\": [{}], \"kind\": \"cubical\" }}", body.join(", "));
        prop_assert_eq!(write_complex(&parse_complex(&shuffled).unwrap()), text);
    }

    #[test]
    fn subdivisions_count_cells(x in subgrid()) {
        let sd = barycentric_subdivision(&x);
        prop_assert_eq!(sd.complex.vertices().len(), x.len());
        let cs = cubical_subdivision(&x);
        prop_assert_eq!(cs.top_cells().len(), x.top_cells().len() * 4);
        prop_assert_eq!(cs.vertex_count(), x.len());
        prop_assert!(cs.check_admissible().is_ok());
    }

    #[test]
    fn subgrids_fold(x in subgrid()) {
        let f = find_folding(&x).unwrap();
        prop_assert_eq!(verify_folding(&x, &f).unwrap(), Verdict::Valid);
    }

    #[test]
    fn links_ignore_relabeling(x in subgrid(), shift in 1u32..50, v in 0usize..16) {
        let relabel = |u: VertexId| (u * 5 + shift) % 97;
        let y = CubicalComplex::from_cubes(
            x.maximal().iter().map(|&c| x.cell(c).corners().iter().map(|&u| relabel(u)).collect::<Vec<_>>()),
        )
        .unwrap();
        let v = v % x.vertex_count();
        let id = x.cell(v).corners()[0];
        let w = y.vertex_cell(relabel(id)).unwrap();
        prop_assert!(simplicial_isomorphism(&link(&x, v).complex, &link(&y, w).complex).is_some());
    }
}

/// Random walk of at most `steps` edges closed by the walk back.
fn walk_loop(d: &cubemill::dual::DualComplex, start: usize, choices: &[usize]) -> EdgePath {
    let mut v = vec![start % d.vertex_count()];
    for &c in choices {
        let nb = d.neighbors(*v.last().unwrap());
        v.push(nb[c % nb.len()]);
    }
    let back: Vec<usize> = v[..v.len() - 1].iter().rev().copied().collect();
    v.extend(back);
    EdgePath { vertices: v }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loops_contract_with_replayable_certificates(
        which in 0usize..4,
        start in any::<usize>(),
        choices in prop::collection::vec(any::<usize>(), 0..6),
        rot in 0usize..12,
    ) {
        let name = fixtures::SIMPLY_CONNECTED[which];
        let fx = fixture(name).unwrap();
        let d = build_dual(&fx.complex, fx.folding.as_ref().unwrap()).unwrap();
        let p = walk_loop(&d, start, &choices).rotated(rot);
        prop_assert_eq!(p.len() % 2, 0);
        for m in 0..d.mirrors.len() {
            prop_assert_ne!(crossings(&d, &p, m).unwrap().len(), 1);
        }
        let t = contract_loop(&d, &p).unwrap();
        prop_assert!(verify_contraction(&d, &p, &t));
        let back = parse_certificate(&render_certificate(&p, &t)).unwrap();
        prop_assert_eq!(back.tree, t);
    }
}

#[test]
fn simplicial_files_keep_maximal_simplices() {
    let (k, _) = fixtures::cone4();
    let text = write_complex(&Complex::Simplicial(k.clone()));
    let Complex::Simplicial(back) = parse_complex(&text).unwrap() else { panic!() };
    assert_eq!(back, k);
    assert_eq!(back.maximal().len(), 4);
}
