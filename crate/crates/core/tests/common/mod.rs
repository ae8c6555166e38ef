//! Brute-force oracles shared by the integration suites. Nothing here calls
//! the library's solvers; only graph construction and accessors are used.
#![allow(dead_code)]

use num_rational::Ratio;
use overfull_core::Multigraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every edge instance as a vertex pair.
pub fn edge_list(g: &Multigraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (u, v, k) in g.pairs() {
        for _ in 0..k {
            out.push((u, v));
        }
    }
    out
}

struct Search<'a> {
    es: &'a [(usize, usize)],
    k: usize,
    color: Vec<Option<usize>>,
    used: Vec<u64>,
    class: Vec<usize>,
    /// Largest matching size, `⌊n/2⌋`.
    cap: usize,
}

impl Search<'_> {
    /// Colors free at both ends of edge `i`; those above `top` are interchangeable.
    fn open(&self, i: usize, top: usize) -> Vec<usize> {
        let (u, v) = self.es[i];
        (0..self.k.min(top + 1)).filter(|&c| (self.used[u] | self.used[v]) >> c & 1 == 0).collect()
    }

    fn run(&mut self, left: usize, top: usize) -> bool {
        if left == 0 {
            return true;
        }
        // each color class is a matching
        let room: usize = self.class.iter().map(|&s| self.cap - s).sum::<usize>()
            + (self.k - self.class.len().min(self.k)) * self.cap;
        if left > room {
            return false;
        }
        // most constrained uncolored edge first
        let Some(i) = (0..self.es.len())
            .filter(|&i| self.color[i].is_none())
            .min_by_key(|&i| self.open(i, top).len())
        else {
            return true;
        };
        let (u, v) = self.es[i];
        let choices = self.open(i, top);
        for c in choices {
            let bit = 1u64 << c;
            self.used[u] |= bit;
            self.used[v] |= bit;
            self.color[i] = Some(c);
            if c == self.class.len() {
                self.class.push(0);
            }
            self.class[c] += 1;
            if self.run(left - 1, top.max(c + 1)) {
                return true;
            }
            self.class[c] -= 1;
            if self.class[c] == 0 && c + 1 == self.class.len() {
                self.class.pop();
            }
            self.color[i] = None;
            self.used[u] &= !bit;
            self.used[v] &= !bit;
        }
        false
    }
}

pub fn brute_colorable(g: &Multigraph, k: usize) -> bool {
    let es = edge_list(g);
    let mut s = Search {
        es: &es,
        k,
        color: vec![None; es.len()],
        used: vec![0u64; g.vertex_count()],
        class: Vec::new(),
        cap: g.vertex_count() / 2,
    };
    s.run(es.len(), 0)
}

pub fn brute_chromatic_index(g: &Multigraph) -> usize {
    let mut k = g.max_degree();
    while !brute_colorable(g, k) {
        k += 1;
    }
    k
}

fn subsets_of_odd_size(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1u32 << n)).filter_map(move |mask| {
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        (s.len() >= 3 && s.len() % 2 == 1).then_some(s)
    })
}

/// A vertex set `X` with `e(X) > Δ(G)·⌊|X|/2⌋`, if any.
pub fn brute_overfull(g: &Multigraph) -> Option<Vec<usize>> {
    let d = g.max_degree();
    subsets_of_odd_size(g.vertex_count()).find(|s| g.edges_within(s) > d * (s.len() / 2))
}

/// `max 2e(X)/(|X| − 1)` over odd `X` with `|X| ≥ 3`; zero below three vertices.
pub fn brute_rho(g: &Multigraph) -> Ratio<usize> {
    subsets_of_odd_size(g.vertex_count())
        .map(|s| Ratio::new(2 * g.edges_within(&s), s.len() - 1))
        .max()
        .unwrap_or_else(|| Ratio::from_integer(0))
}

/// All labeled simple graphs on `n` vertices.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let mut g = Multigraph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    })
}

pub fn brute_graphic(seq: &[usize]) -> bool {
    let mut want = seq.to_vec();
    want.sort();
    labeled_graphs(seq.len()).any(|g| {
        let mut d = g.degrees().to_vec();
        d.sort();
        d == want
    })
}

/// Whether some even `p` admits a bipartite `L` meeting the degree
/// conditions (a)-(c) of a split realization of the non-increasing `d`.
pub fn split_exists(d: &[usize]) -> bool {
    let m = d.len();
    let at = |i: usize| if (1..=m).contains(&i) { d[i - 1] } else { 0 };
    (2..=m).step_by(2).any(|p| {
        let left: usize = (1..=p).step_by(2).map(|i| at(i) - at(i + 1)).sum();
        let rest: usize = (p + 2..=m).map(at).sum();
        left >= rest && left <= rest + at(p + 1)
    })
}

/// Connected, class 2, and every edge deletion drops the chromatic index.
pub fn brute_critical(g: &Multigraph) -> bool {
    if g.edge_count() == 0 || g.components().len() != 1 {
        return false;
    }
    let d = g.max_degree();
    if brute_colorable(g, d) {
        return false;
    }
    g.pairs().all(|(u, v, _)| {
        let mut h = g.clone();
        h.remove_edge(u, v).unwrap();
        brute_colorable(&h, d)
    })
}

/// `|RN(S)| ≥ |S| + νn` over all `S` with `τn ≤ |S| ≤ (1−τ)n`; the first
/// violating `S` otherwise.
pub fn brute_expander(g: &Multigraph, nu: Ratio<usize>, tau: Ratio<usize>) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let nn = Ratio::from_integer(n);
    let one = Ratio::from_integer(1);
    for mask in 1u32..(1u32 << n) {
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let size = Ratio::from_integer(s.len());
        if size < tau * nn || size > (one - tau) * nn {
            continue;
        }
        let rn = (0..n)
            .filter(|&v| Ratio::from_integer(s.iter().map(|&u| g.multiplicity(u, v)).filter(|&k| k > 0).count()) >= nu * nn)
            .count();
        if Ratio::from_integer(rn) < size + nu * nn {
            return Some(s);
        }
    }
    None
}

/// A random bipartite multigraph plus one apex vertex joined to a few
/// vertices, on at most `max_n` vertices.
pub fn random_nearly_bipartite(max_n: usize, max_mult: usize, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_n);
    let apex = n - 1;
    let left = rng.gen_range(1..apex.max(2));
    let mut g = Multigraph::new(n);
    for u in 0..left {
        for v in left..apex {
            if rng.gen_bool(0.6) {
                g.add_edges(u, v, rng.gen_range(1..=max_mult)).unwrap();
            }
        }
    }
    for v in 0..apex {
        if rng.gen_bool(0.5) {
            g.add_edges(apex, v, rng.gen_range(1..=max_mult)).unwrap();
        }
    }
    g
}

/// Non-increasing admissible sequence: sum even and `d₁ ≤ Σ_{i≥2} dᵢ`.
pub fn random_admissible(rng: &mut ChaCha8Rng, max_m: usize) -> Vec<usize> {
    loop {
        let m = rng.gen_range(2..=max_m);
        let top = rng.gen_range(1..=3 * m);
        let mut d: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=top)).collect();
        d.sort_by(|a, b| b.cmp(a));
        let sum: usize = d.iter().sum();
        if sum % 2 == 0 && 2 * d[0] <= sum {
            return d;
        }
    }
}

/// Canonical code of a simple graph on at most eight vertices given by
/// adjacency rows: the least upper-triangle bit string over all relabelings
/// that respect an equitable refinement of the vertices.
pub fn canonical_code(rows: &[u8]) -> u64 {
    let n = rows.len();
    let mut color = vec![0usize; n];
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&u| rows[v] >> u & 1 == 1).map(|u| color[u]).collect();
                nb.sort();
                (color[v], nb)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = keys.iter().map(|k| distinct.binary_search(k).unwrap()).collect();
        let done = distinct.len() == color.iter().collect::<std::collections::BTreeSet<_>>().len();
        color = next;
        if done {
            break;
        }
    }
    let mut slots: Vec<usize> = color.clone();
    slots.sort();
    let mut best = u64::MAX;
    let mut lab = Vec::with_capacity(n);
    let mut used = 0u8;
    fn go(rows: &[u8], color: &[usize], slots: &[usize], lab: &mut Vec<usize>, used: &mut u8, best: &mut u64) {
        let n = rows.len();
        let i = lab.len();
        if i == n {
            let mut code = 0u64;
            let mut bit = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if rows[lab[a]] >> lab[b] & 1 == 1 {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 0..n {
            if *used >> v & 1 == 0 && color[v] == slots[i] {
                *used |= 1 << v;
                lab.push(v);
                go(rows, color, slots, lab, used, best);
                lab.pop();
                *used &= !(1 << v);
            }
        }
    }
    go(rows, &color, &slots, &mut lab, &mut used, &mut best);
    best
}

/// One graph per isomorphism class for each order `0..=max_n` (`max_n ≤ 8`),
/// grown by adding a vertex with every neighbourhood and deduplicating.
pub fn graphs_up_to_isomorphism(max_n: usize) -> Vec<Vec<Multigraph>> {
    let mut levels: Vec<Vec<Vec<u8>>> = vec![vec![vec![]]];
    for n in 1..=max_n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for rows in &levels[n - 1] {
            for s in 0u16..(1 << (n - 1)) {
                let mut r = rows.clone();
                for (v, row) in r.iter_mut().enumerate() {
                    if s >> v & 1 == 1 {
                        *row |= 1 << (n - 1);
                    }
                }
                r.push(s as u8);
                if seen.insert(canonical_code(&r)) {
                    next.push(r);
                }
            }
        }
        levels.push(next);
    }
    levels
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|rows| {
                    let n = rows.len();
                    let mut g = Multigraph::new(n);
                    for u in 0..n {
                        for v in u + 1..n {
                            if rows[u] >> v & 1 == 1 {
                                g.add_edge(u, v).unwrap();
                            }
                        }
                    }
                    g
                })
                .collect()
        })
        .collect()
}
