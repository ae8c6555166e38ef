//! Worked examples, each checked against a brute-force oracle or a value
//! stated in the source text.

mod common;

use num_rational::Ratio;
use overfull_core::degree_seq::{
    build_regular_circulant, is_graphic, realize_admissible_bipartite, realize_graphic, realize_near_regular,
    verify_lemma24, DegreeSequence,
};
use overfull_core::edge_color::{
    check_proper, chromatic_index_exact, color_nearly_bipartite, color_with_palette, density_rho, equalize,
    parity_check, swap_alternating_path, EdgeColoring, NearlyBipartiteOutcome,
};
use overfull_core::generators::{complete, complete_bipartite, cycle, disjoint_union, petersen_minus_vertex};
use overfull_core::overfull::{
    critical_overfull_bound, find_delta_overfull_subgraph, is_edge_chromatic_critical, min_degree_no_overfull,
    robust_expander_check, val_check, CertificateMode, ExpanderMode,
};
use overfull_core::Multigraph;

use common::*;

fn sorted_degrees(g: &Multigraph) -> Vec<usize> {
    let mut d = g.degrees().to_vec();
    d.sort_by(|a, b| b.cmp(a));
    d
}

fn doubled_triangle() -> Multigraph {
    Multigraph::from_pairs(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap()
}

#[test]
fn graphicality_matches_enumeration() {
    for seq in [vec![3, 2, 1], vec![3, 3, 2, 2], vec![2, 2, 2], vec![3, 3, 3, 1], vec![4, 4, 2, 2, 2], vec![1, 1, 1]] {
        let trace = is_graphic(&DegreeSequence::new(&seq).unwrap());
        assert_eq!(trace.graphic, brute_graphic(&seq), "{seq:?}");
    }
    let g = realize_graphic(&DegreeSequence::new(&[3, 3, 2, 2]).unwrap()).unwrap();
    assert!(g.is_simple());
    assert_eq!(sorted_degrees(&g), vec![3, 3, 2, 2]);
}

#[test]
fn every_graphic_sequence_up_to_six_is_realized() {
    for n in 2..=6usize {
        let mut seen = std::collections::BTreeSet::new();
        for g in labeled_graphs(n) {
            seen.insert(sorted_degrees(&g));
        }
        for d in &seen {
            let r = realize_graphic(&DegreeSequence::new(d).unwrap()).unwrap();
            assert!(r.is_simple());
            assert_eq!(&sorted_degrees(&r), d);
        }
    }
}

#[test]
fn near_regular_and_circulant() {
    assert_eq!(sorted_degrees(&realize_near_regular(4, 3, 2).unwrap()), vec![3, 3, 2, 2]);
    let c = build_regular_circulant(6, 4).unwrap();
    for v in 0..6 {
        for off in [1, 2] {
            assert_eq!(c.multiplicity(v, (v + off) % 6), 1);
        }
        assert_eq!(c.multiplicity(v, (v + 3) % 6), 0);
    }
}

#[test]
fn split_realization_examples() {
    let seq = DegreeSequence::new(&[2, 1, 1]).unwrap();
    let r = realize_admissible_bipartite(&seq).unwrap();
    assert_eq!(r.p, 2);
    assert_eq!(r.graph.edge_count(), 1);
    assert_eq!(r.graph.multiplicity(0, 2), 1);

    let fig = [14, 8, 8, 7, 7, 5, 5, 4, 3, 3, 3, 2, 1, 0];
    let seq = DegreeSequence::new(&fig).unwrap();
    let r = realize_admissible_bipartite(&seq).unwrap();
    assert_eq!(r.p, 8);
    assert!(verify_lemma24(&seq, &r).unwrap().all_pass());

    let r = realize_admissible_bipartite(&DegreeSequence::new(&[3, 3]).unwrap()).unwrap();
    assert_eq!((r.p, r.graph.edge_count()), (2, 0));

    assert!(split_exists(&fig) && split_exists(&[2, 1, 1]) && split_exists(&[3, 3]));
}

#[test]
fn split_failures_are_exactly_the_infeasible_sequences() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
    let mut impossible = 0;
    for _ in 0..400 {
        let d = random_admissible(&mut rng, 10);
        let seq = DegreeSequence::new(&d).unwrap();
        match realize_admissible_bipartite(&seq) {
            Ok(r) => assert!(verify_lemma24(&seq, &r).unwrap().all_pass(), "{d:?}"),
            Err(e) => {
                assert!(!split_exists(&d), "{d:?}: {e}");
                impossible += 1;
            }
        }
    }
    assert!(impossible > 0);
    // p = 2 leaves v_4 with nothing to attach to; p = 4 needs two edges and has no v_5
    let d = [3, 3, 3, 1];
    assert!(!split_exists(&d));
    assert!(realize_admissible_bipartite(&DegreeSequence::new(&d).unwrap()).is_err());
}

#[test]
fn parity_on_small_graphs() {
    let path = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    for colors in [vec![1, 2, 1], vec![2, 1, 2]] {
        let c = EdgeColoring::from_colors(&path, 2, colors).unwrap();
        let v = parity_check(&path, &c).unwrap();
        assert!(v.holds);
        assert!(v.missing_counts.iter().all(|m| m % 2 == 0));
    }
    // every proper 3-coloring of C5
    let c5 = cycle(5).unwrap();
    let mut seen = 0;
    for code in 0..3usize.pow(5) {
        let colors: Vec<usize> = (0..5).map(|i| code / 3usize.pow(i) % 3 + 1).collect();
        let c = EdgeColoring::from_colors(&c5, 3, colors).unwrap();
        if check_proper(&c5, &c).unwrap().proper {
            seen += 1;
            assert!(parity_check(&c5, &c).unwrap().missing_counts.iter().all(|m| m % 2 == 1));
        }
    }
    assert!(seen > 0);
}

#[test]
fn doubled_triangle_density() {
    let g = doubled_triangle();
    assert_eq!(brute_rho(&g), Ratio::from_integer(6));
    assert_eq!(density_rho(&g).unwrap().value, Ratio::from_integer(6));
    assert_eq!(brute_chromatic_index(&g), 6);
    assert_eq!(chromatic_index_exact(&g).unwrap().chromatic_index, 6);
    let c = color_with_palette(&g, 6).unwrap();
    assert!(c.is_total() && check_proper(&g, &c).unwrap().proper);
}

#[test]
fn k5_density() {
    let g = complete(5);
    assert_eq!(brute_rho(&g), Ratio::from_integer(5));
    let d = density_rho(&g).unwrap();
    assert_eq!(d.value, Ratio::from_integer(5));
    assert_eq!(d.witness, vec![0, 1, 2, 3, 4]);
}

#[test]
fn density_matches_brute_force() {
    for seed in 0..60 {
        let g = overfull_core::generators::random_multigraph(3 + seed as usize % 7, 0.6, 3, seed);
        assert_eq!(density_rho(&g).unwrap().value, brute_rho(&g), "seed {seed}");
    }
}

#[test]
fn equalize_k4() {
    let g = complete(4);
    let c = EdgeColoring::from_colors(&g, 4, vec![1, 2, 3, 3, 2, 1]).unwrap();
    assert!(check_proper(&g, &c).unwrap().proper);
    let mut sizes = equalize(&g, &c).unwrap().class_sizes();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 2, 2]);
}

#[test]
fn alternating_swap_on_a_path() {
    let path = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    // uncolored, 1, uncolored: the two ends gain color 1, the middle loses it
    let c = EdgeColoring::from_colors(&path, 2, vec![0, 1, 0]).unwrap();
    let edges = path.edge_instances();
    let out = swap_alternating_path(&path, &c, &edges, 1).unwrap();
    assert_eq!(out.colors(), &[1, 0, 1]);
    assert_eq!(out.class(1).len(), c.class(1).len() + 1);
    let bad = EdgeColoring::from_colors(&path, 2, vec![2, 1, 2]).unwrap();
    assert!(swap_alternating_path(&path, &bad, &edges, 1).is_err());
}

#[test]
fn petersen_minus_vertex_facts() {
    let g = petersen_minus_vertex();
    assert_eq!((g.vertex_count(), g.edge_count(), g.max_degree()), (9, 12, 3));
    assert_eq!(brute_chromatic_index(&g), 4);
    assert_eq!(chromatic_index_exact(&g).unwrap().chromatic_index, 4);
    assert!(brute_overfull(&g).is_none());
    let cert = find_delta_overfull_subgraph(&g).unwrap();
    assert!(!cert.found());
    assert!(brute_critical(&g));
    assert!(is_edge_chromatic_critical(&g).unwrap());
    for (u, v, _) in g.pairs() {
        assert!(val_check(&g, u, v).unwrap().pass, "edge {u}{v}");
    }
    // critical, below the bound's hypothesis
    assert!(critical_overfull_bound(&g).unwrap().consistent);
}

#[test]
fn two_five_cycles_are_overfull() {
    let g = disjoint_union(&cycle(5).unwrap(), &cycle(5).unwrap());
    let cert = find_delta_overfull_subgraph(&g).unwrap();
    assert_eq!(cert.mode, CertificateMode::Found);
    assert!(cert.reverify(&g));
    let mut x = cert.subset.clone();
    x.sort();
    assert!(x == (0..5).collect::<Vec<_>>() || x == (5..10).collect::<Vec<_>>());
    assert!(brute_overfull(&g).is_some());
}

#[test]
fn overfull_search_matches_brute_force() {
    for n in 3..=6 {
        for g in labeled_graphs(n).step_by(7) {
            let cert = find_delta_overfull_subgraph(&g).unwrap();
            assert_eq!(cert.found(), brute_overfull(&g).is_some(), "{}", g.to_edge_list());
            assert!(cert.reverify(&g));
        }
    }
}

#[test]
fn min_degree_lemma_on_k6_minus_edge() {
    let mut g = complete(6);
    g.remove_edge(0, 1).unwrap();
    assert!(min_degree_no_overfull(&g));
    assert!(brute_overfull(&g).is_none());
}

#[test]
fn criticality_matches_brute_force() {
    for n in 3..=6 {
        for g in labeled_graphs(n).step_by(5) {
            assert_eq!(is_edge_chromatic_critical(&g).unwrap(), brute_critical(&g), "{}", g.to_edge_list());
        }
    }
}

#[test]
fn critical_graphs_pass_val() {
    for n in 3..=6 {
        for g in labeled_graphs(n).filter(brute_critical) {
            for (u, v, _) in g.pairs() {
                assert!(val_check(&g, u, v).unwrap().pass, "{} edge {u}{v}", g.to_edge_list());
            }
        }
    }
}

#[test]
fn robust_expander_examples() {
    let (nu, tau) = (Ratio::new(1, 10), Ratio::new(3, 10));
    let k10 = complete(10);
    assert!(brute_expander(&k10, nu, tau).is_none());
    let v = robust_expander_check(&k10, nu, tau, ExpanderMode::Exhaustive).unwrap();
    assert!(v.pass() && v.proof);

    let two = disjoint_union(&complete(5), &complete(5));
    assert!(brute_expander(&two, nu, tau).is_some());
    let v = robust_expander_check(&two, nu, tau, ExpanderMode::Exhaustive).unwrap();
    let s = v.violation.expect("violation");
    // the reported set is a genuine violation
    let rn = (0..10).filter(|&u| s.iter().any(|&w| two.multiplicity(u, w) > 0)).count();
    assert!(rn < s.len() + 1);
}

#[test]
fn apex_over_bipartite_cubic() {
    // K_{3,3} plus an apex joined to one side
    let mut g = complete_bipartite(3, 3);
    let apex = g.add_vertex();
    for v in 0..3 {
        g.add_edge(apex, v).unwrap();
    }
    assert_eq!(g.max_degree(), 4);
    let chi = brute_chromatic_index(&g);
    match color_nearly_bipartite(&g).unwrap() {
        NearlyBipartiteOutcome::Colored(c) => {
            assert_eq!(chi, 4);
            assert!(c.is_total() && check_proper(&g, &c).unwrap().proper);
        }
        NearlyBipartiteOutcome::Overfull(cert) => {
            assert_eq!(chi, 5);
            assert!(cert.reverify(&g));
        }
    }
    assert_eq!(brute_overfull(&g).is_none(), chi == 4);
}
