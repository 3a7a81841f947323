use std::collections::BTreeSet;

use afsub::bounds::{dary_two_sided, multiset_count};
use afsub::graph_constructions::{build_sequence_subdivision, thm6_sequence, Third};
use afsub::graph_model::{subdivide, BaseGraph, Colour, ColouredSubdivision, Provenance, Side, VertexId};
use afsub::io::{from_json, to_json};
use afsub::verifier::{find_anagram, validate_counterexample, ExhaustiveOptions};
use afsub::words::{find_abelian_square, Word};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = BaseGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::btree_set((0..n, 0..n), 0..=2 * n).prop_map(move |pairs| {
            let edges: BTreeSet<(usize, usize)> =
                pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
            BaseGraph::new(n, edges.into_iter().collect()).unwrap()
        })
    })
}

fn coloured_strategy() -> impl Strategy<Value = ColouredSubdivision> {
    graph_strategy(6).prop_flat_map(|g| {
        let m = g.edge_count();
        (Just(g), prop::collection::vec(0..3usize, m), 1..=4 as Colour).prop_flat_map(|(g, counts, c)| {
            let s = subdivide(&g, &counts).unwrap();
            let n = s.vertex_count();
            prop::collection::vec(1..=c, n).prop_map(move |colours| {
                ColouredSubdivision::new(s.clone(), colours, (1..=c).collect(), Provenance::new("random").with("c", c as i64)).unwrap()
            })
        })
    })
}

fn naive_has_abelian_square(s: &[u32]) -> bool {
    (0..s.len()).any(|i| {
        (1..=(s.len() - i) / 2).any(|half| {
            let mut a = s[i..i + half].to_vec();
            let mut b = s[i + half..i + 2 * half].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    })
}

proptest! {
    #[test]
    fn contracting_a_subdivision_recovers_the_base(g in graph_strategy(8), seed in prop::collection::vec(0..4usize, 16)) {
        let counts: Vec<usize> = (0..g.edge_count()).map(|e| seed[e % seed.len()]).collect();
        let s = subdivide(&g, &counts).unwrap();
        prop_assert_eq!(s.vertex_count(), g.vertex_count() + counts.iter().sum::<usize>());
        prop_assert_eq!(s.contract().unwrap(), g);
    }

    #[test]
    fn json_roundtrip_is_identity(c in coloured_strategy()) {
        let text = to_json(&c);
        let back = from_json(&text).unwrap();
        prop_assert_eq!(to_json(&back), text);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn reported_counterexamples_are_genuine(c in coloured_strategy()) {
        let report = find_anagram(&c, &ExhaustiveOptions::default()).unwrap();
        if let Some(cx) = report.counterexample {
            prop_assert!(validate_counterexample(&c, &cx.path));
            prop_assert_eq!(cx.split * 2, cx.path.len());
        }
    }

    #[test]
    fn abelian_square_search_matches_brute_force(symbols in prop::collection::vec(0..3u32, 0..24)) {
        let w = Word::new(symbols.clone(), 3).unwrap();
        prop_assert_eq!(find_abelian_square(&w).is_some(), naive_has_abelian_square(&symbols));
    }

    #[test]
    fn sequence_labels_are_consistent(g in graph_strategy(7)) {
        prop_assume!(g.edge_count() > 0);
        let Ok(sides) = g.two_colouring() else { return Ok(()) };
        let t = thm6_sequence(g.edge_count()).unwrap();
        let (s, labels) = build_sequence_subdivision(&g, &sides, &t).unwrap();
        let blacks = sides.iter().filter(|&&x| x == Side::Black).count();
        for v in 0..g.vertex_count() {
            prop_assert_eq!(labels.vertex_label[v] <= blacks, sides[v] == Side::Black);
        }
        let ranks: BTreeSet<usize> = labels.edge_rank.iter().copied().collect();
        prop_assert_eq!(ranks, (1..=g.edge_count()).collect::<BTreeSet<_>>());
        for e in 0..g.edge_count() {
            let tn = t.term(labels.edge_rank[e]) as usize;
            prop_assert_eq!(s.division_path(e).len(), 3 * tn);
            for q in Third::ALL {
                prop_assert_eq!(labels.third(q, e).len(), tn);
            }
            let white = labels.white_end(&g, e);
            let first = labels.third(Third::X, e)[0];
            prop_assert!(s.neighbours(white).contains(&first));
        }
    }
}

#[test]
fn multiset_count_matches_summation() {
    // sum over sizes j <= k of C(j + c - 1, c - 1), by Pascal's triangle
    let mut pascal = vec![vec![0u128; 70]; 70];
    for n in 0..70 {
        pascal[n][0] = 1;
        for r in 1..=n {
            pascal[n][r] = pascal[n - 1][r - 1] + pascal[n - 1][r];
        }
    }
    for k in 0..=30usize {
        for c in 1..=30usize {
            let sum: u128 = (0..=k).map(|j| pascal[j + c - 1][c - 1]).sum();
            assert_eq!(multiset_count(k as u64, c as u64).unwrap(), sum, "k = {k}, c = {c}");
        }
    }
}

#[test]
fn dary_lower_never_exceeds_upper() {
    let mut points = 0;
    for d in 2..=11u64 {
        for h in 1..=10u64 {
            for k in (2 * d + 1)..=(2 * d + 10) {
                let (lo, hi) = dary_two_sided(d, h, k).unwrap();
                assert!(lo <= hi, "d = {d}, h = {h}, k = {k}: {lo} > {hi}");
                points += 1;
            }
        }
    }
    assert_eq!(points, 1000);
}

#[test]
fn plain_graphs_roundtrip_through_json() {
    let g = BaseGraph::cycle(5).unwrap();
    let c = ColouredSubdivision::from_base(&g, vec![1, 2, 1, 2, 3]).unwrap();
    let back = from_json(&to_json(&c)).unwrap();
    assert_eq!(back.colours(), c.colours());
    let adjacency: Vec<Vec<VertexId>> = back.graph().adjacency().to_vec();
    assert!(adjacency.iter().all(|n| n.len() == 2));
}
