//! Hopcroft–Karp bipartite matching with Hall-violator extraction.

use std::collections::VecDeque;

use serde::Serialize;

const FREE: usize = usize::MAX;

/// Which side of the bipartite graph a Hall violator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerfectMatching {
    /// `(left, right)` pairs covering both sides.
    Found(Vec<(usize, usize)>),
    /// A set on `side` whose neighbourhood on the other side is smaller.
    Deficient {
        side: Side,
        set: Vec<usize>,
        neighbourhood: Vec<usize>,
    },
}

/// Maximum matching of the bipartite graph with `adj[l]` listing the right
/// neighbours of left vertex `l`. Returns the partner of each left vertex.
pub fn maximum_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut ml = vec![FREE; left];
    let mut mr = vec![FREE; right];
    let mut dist = vec![0usize; left];
    loop {
        // BFS layers from free left vertices
        let mut q = VecDeque::new();
        for l in 0..left {
            if ml[l] == FREE {
                dist[l] = 0;
                q.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = q.pop_front() {
            for &r in &adj[l] {
                let m = mr[r];
                if m == FREE {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    q.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; left];
        for l in 0..left {
            if ml[l] == FREE {
                augment(l, adj, &mut ml, &mut mr, &mut dist, &mut it);
            }
        }
    }
    ml.into_iter().map(|r| (r != FREE).then_some(r)).collect()
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    ml: &mut [usize],
    mr: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    while it[l] < adj[l].len() {
        let r = adj[l][it[l]];
        it[l] += 1;
        let m = mr[r];
        if m == FREE || (dist[m] == dist[l] + 1 && augment(m, adj, ml, mr, dist, it)) {
            ml[l] = r;
            mr[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// A perfect matching, or a Hall violator when none exists.
pub fn perfect_matching(adj: &[Vec<usize>], right: usize) -> PerfectMatching {
    let ml = maximum_matching(adj, right);
    if let Some(u) = ml.iter().position(Option::is_none) {
        let (set, neighbourhood) = hall_set(adj, &ml, right, u);
        return PerfectMatching::Deficient { side: Side::Left, set, neighbourhood };
    }
    if adj.len() < right {
        // every left vertex is matched, so some right vertex is not
        let mut radj = vec![Vec::new(); right];
        for (l, rs) in adj.iter().enumerate() {
            for &r in rs {
                radj[r].push(l);
            }
        }
        let mut mr = vec![None; right];
        for (l, r) in ml.iter().enumerate() {
            mr[r.expect("all matched")] = Some(l);
        }
        let u = mr.iter().position(Option::is_none).expect("right side is larger");
        let (set, neighbourhood) = hall_set(&radj, &mr, adj.len(), u);
        return PerfectMatching::Deficient { side: Side::Right, set, neighbourhood };
    }
    PerfectMatching::Found(ml.into_iter().enumerate().map(|(l, r)| (l, r.unwrap())).collect())
}

// Left vertices reachable from the free vertex `u` by alternating paths, and
// their right neighbours; the latter are all matched into the former.
fn hall_set(adj: &[Vec<usize>], ml: &[Option<usize>], right: usize, u: usize) -> (Vec<usize>, Vec<usize>) {
    let mut mr = vec![None; right];
    for (l, r) in ml.iter().enumerate() {
        if let Some(r) = r {
            mr[*r] = Some(l);
        }
    }
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; right];
    let mut q = VecDeque::from([u]);
    seen_l[u] = true;
    while let Some(l) = q.pop_front() {
        for &r in &adj[l] {
            if !seen_r[r] {
                seen_r[r] = true;
                if let Some(m) = mr[r] {
                    if !seen_l[m] {
                        seen_l[m] = true;
                        q.push_back(m);
                    }
                }
            }
        }
    }
    let set = (0..adj.len()).filter(|&l| seen_l[l]).collect();
    let nb = (0..right).filter(|&r| seen_r[r]).collect();
    (set, nb)
}

/// Maximum matching in a general graph on `0..n`; returns each vertex's mate.
pub fn general_maximum_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut g = petgraph::graph::UnGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(u, v) in edges {
        g.add_edge(nodes[u], nodes[v], ());
    }
    let m = petgraph::algo::maximum_matching(&g);
    nodes.iter().map(|&x| m.mate(x).map(|y| y.index())).collect()
}
