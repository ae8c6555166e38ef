//! Small graph families used by tests, examples and the command line.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Result};
use crate::multigraph::Multigraph;

pub fn complete(n: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).expect("valid pair");
        }
    }
    g
}

/// `K_n` minus the perfect matching `{0,1}, {2,3}, ...` (n even).
pub fn complete_minus_matching(n: usize) -> Result<Multigraph> {
    if n % 2 != 0 {
        return input("complete-minus-matching needs an even vertex count");
    }
    let mut g = complete(n);
    for i in (0..n).step_by(2) {
        g.remove_edge(i, i + 1)?;
    }
    Ok(g)
}

/// `K_{s,t}` with parts `0..s` and `s..s+t`.
pub fn complete_bipartite(s: usize, t: usize) -> Multigraph {
    let mut g = Multigraph::new(s + t);
    for u in 0..s {
        for v in s..s + t {
            g.add_edge(u, v).expect("valid pair");
        }
    }
    g
}

pub fn cycle(n: usize) -> Result<Multigraph> {
    if n < 3 {
        return input("a cycle needs at least 3 vertices");
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Multigraph::from_edges(n, &edges)
}

pub fn petersen() -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Multigraph::from_edges(10, &edges).expect("valid pairs")
}

/// The Petersen graph with vertex 0 deleted: 9 vertices, 12 edges.
pub fn petersen_minus_vertex() -> Multigraph {
    let p = petersen();
    let keep: Vec<usize> = (1..10).collect();
    p.induced_subgraph(&keep).expect("valid subset").0
}

/// Each pair independently present with probability `density`, multiplicity uniform in `1..=max_mult`.
pub fn random_multigraph(n: usize, density: f64, max_mult: usize, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                let k = rng.gen_range(1..=max_mult.max(1));
                g.add_edges(u, v, k).expect("valid pair");
            }
        }
    }
    g
}

/// Disjoint union of two graphs; `b` is relabeled after `a`.
pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
    let off = a.vertex_count();
    let mut g = Multigraph::new(off + b.vertex_count());
    for (u, v, k) in a.pairs() {
        g.add_edges(u, v, k).expect("valid pair");
    }
    for (u, v, k) in b.pairs() {
        g.add_edges(u + off, v + off, k).expect("valid pair");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_minus_vertex_shape() {
        let g = petersen_minus_vertex();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 12);
        let twos = (0..9).filter(|&v| g.degree(v) == 2).count();
        assert_eq!(twos, 3);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn seeded_random_is_reproducible() {
        assert_eq!(random_multigraph(7, 0.5, 3, 9), random_multigraph(7, 0.5, 3, 9));
    }
}
