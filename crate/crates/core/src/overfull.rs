//! Overfull subgraphs, criticality, and related verdicts.

use num_rational::Ratio;
use petgraph::algo::dinics;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef as _;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edge_color::density::{mask_members, subset_edge_counts};
use crate::edge_color::exact::{try_color_exact, DEFAULT_NODE_LIMIT};
use crate::edge_color::{chromatic_index_exact, color_with_palette};
use crate::error::{domain, input, Error, Result};
use crate::multigraph::Multigraph;

/// Default vertex cap for the exhaustive subset search.
pub const EXHAUSTIVE_CAP: usize = 16;
/// Vertex cap for exhaustive robust-expander checks.
pub const EXPANDER_CAP: usize = 18;
/// Edge cap for the exact oracle behind criticality checks.
pub const CRITICAL_EDGE_CAP: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Found,
    AbsentExhaustive,
    AbsentMinDegree,
    AbsentParity,
    /// Minimum odd cut over a Gomory–Hu tree.
    AbsentOddCut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverfullCertificate {
    pub subset: Vec<usize>,
    pub edge_count: usize,
    /// `Δ(G)·⌊|X|/2⌋`
    pub threshold: usize,
    pub delta: usize,
    pub mode: CertificateMode,
}

impl OverfullCertificate {
    pub fn found(&self) -> bool {
        self.mode == CertificateMode::Found
    }

    fn absent(delta: usize, mode: CertificateMode) -> Self {
        OverfullCertificate { subset: Vec::new(), edge_count: 0, threshold: 0, delta, mode }
    }

    fn witness(g: &Multigraph, subset: Vec<usize>) -> Self {
        let delta = g.max_degree();
        OverfullCertificate {
            edge_count: g.edges_within(&subset),
            threshold: delta * (subset.len() / 2),
            subset,
            delta,
            mode: CertificateMode::Found,
        }
    }

    /// Recomputes the arithmetic of a found witness against `g`.
    pub fn reverify(&self, g: &Multigraph) -> bool {
        if !self.found() {
            return true;
        }
        let n = g.vertex_count();
        let mut sorted = self.subset.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.subset.len()
            && self.subset.iter().all(|&v| v < n)
            && self.subset.len() % 2 == 1
            && self.subset.len() >= 3
            && self.delta == g.max_degree()
            && self.edge_count == g.edges_within(&self.subset)
            && self.threshold == self.delta * (self.subset.len() / 2)
            && self.edge_count > self.threshold
    }
}

/// `|E(G)| > Δ(G)·⌊|V(G)|/2⌋`.
pub fn is_overfull(g: &Multigraph) -> bool {
    g.edge_count() > g.max_degree() * (g.vertex_count() / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverfullSearch {
    pub exhaustive_cap: usize,
    /// Past the cap, decide by a minimum odd cut instead of failing.
    pub odd_cut: bool,
}

impl Default for OverfullSearch {
    fn default() -> Self {
        OverfullSearch { exhaustive_cap: EXHAUSTIVE_CAP, odd_cut: true }
    }
}

pub fn find_delta_overfull_subgraph(g: &Multigraph) -> Result<OverfullCertificate> {
    find_delta_overfull_subgraph_with(g, OverfullSearch::default())
}

/// An induced odd subgraph `X` with `e(G[X]) > Δ(G)·⌊|X|/2⌋`, or a certified absence.
pub fn find_delta_overfull_subgraph_with(g: &Multigraph, opts: OverfullSearch) -> Result<OverfullCertificate> {
    let n = g.vertex_count();
    let delta = g.max_degree();
    // an odd X is overfull iff Σ_X df + ∂X ≤ Δ − 2, impossible for Δ ≤ 1
    if n < 3 || delta < 2 {
        return Ok(OverfullCertificate::absent(delta, CertificateMode::AbsentParity));
    }
    if min_degree_no_overfull(g) {
        return Ok(OverfullCertificate::absent(delta, CertificateMode::AbsentMinDegree));
    }
    if n <= opts.exhaustive_cap && n < 32 {
        let e = subset_edge_counts(g);
        let hit = (1usize..1 << n).find(|&s| {
            let k = s.count_ones() as usize;
            k >= 3 && k % 2 == 1 && e[s] as usize > delta * (k / 2)
        });
        return Ok(match hit {
            Some(s) => OverfullCertificate::witness(g, mask_members(s)),
            None => OverfullCertificate::absent(delta, CertificateMode::AbsentExhaustive),
        });
    }
    if !opts.odd_cut {
        return Err(Error::Resource(format!(
            "{n} vertices exceed the exhaustive cap {}",
            opts.exhaustive_cap
        )));
    }
    Ok(match odd_cut_witness(g, delta) {
        Some(x) => OverfullCertificate::witness(g, x),
        None => OverfullCertificate::absent(delta, CertificateMode::AbsentOddCut),
    })
}

/// Capacity network: the graph itself plus a sink `z = n` joined to every
/// vertex by its deficiency. For `X ⊆ V` the cut value is `∂X + Σ_X df`.
struct CutNetwork {
    net: DiGraph<(), usize>,
    nodes: usize,
}

impl CutNetwork {
    fn new(g: &Multigraph, delta: usize) -> Self {
        let n = g.vertex_count();
        let mut net = DiGraph::with_capacity(n + 1, 0);
        let ids: Vec<NodeIndex> = (0..=n).map(|_| net.add_node(())).collect();
        for (u, v, k) in g.pairs() {
            net.add_edge(ids[u], ids[v], k);
            net.add_edge(ids[v], ids[u], k);
        }
        for v in 0..n {
            let df = delta - g.degree(v);
            if df > 0 {
                net.add_edge(ids[v], ids[n], df);
                net.add_edge(ids[n], ids[v], df);
            }
        }
        CutNetwork { net, nodes: n + 1 }
    }

    /// Minimum `s`–`t` cut; the returned side contains `s`.
    fn min_cut(&self, s: usize, t: usize) -> (usize, Vec<bool>) {
        let (value, flows) = dinics(&self.net, NodeIndex::new(s), NodeIndex::new(t));
        let mut side = vec![false; self.nodes];
        side[s] = true;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            let a_id = NodeIndex::new(a);
            for e in self.net.edges_directed(a_id, petgraph::Direction::Outgoing) {
                let b = e.target().index();
                if !side[b] && flows[e.id().index()] < *e.weight() {
                    side[b] = true;
                    stack.push(b);
                }
            }
            for e in self.net.edges_directed(a_id, petgraph::Direction::Incoming) {
                let b = e.source().index();
                if !side[b] && flows[e.id().index()] > 0 {
                    side[b] = true;
                    stack.push(b);
                }
            }
        }
        (value, side)
    }

    /// Gomory–Hu cut tree by Gusfield's method: `parent[i]` for `i ≥ 1`.
    fn cut_tree(&self) -> Vec<usize> {
        let mut p = vec![0usize; self.nodes];
        for s in 1..self.nodes {
            let t = p[s];
            let (_, side) = self.min_cut(s, t);
            for i in 0..self.nodes {
                if i != s && side[i] && p[i] == t {
                    p[i] = s;
                }
            }
            if t != 0 && side[p[t]] {
                p[s] = p[t];
                p[t] = s;
            }
        }
        p
    }
}

/// Searches the fundamental cuts of a Gomory–Hu tree for an odd `X ⊆ V` with
/// `∂X + Σ_X df ≤ Δ − 2`. A minimum odd cut is always among them.
fn odd_cut_witness(g: &Multigraph, delta: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let net = CutNetwork::new(g, delta);
    let parent = net.cut_tree();
    let mut children = vec![Vec::new(); net.nodes];
    for i in 1..net.nodes {
        children[parent[i]].push(i);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for i in 1..net.nodes {
        let mut below = vec![false; net.nodes];
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            below[a] = true;
            stack.extend(children[a].iter().copied());
        }
        let keep = !below[n];
        let x: Vec<usize> = (0..n).filter(|&v| below[v] == keep).collect();
        if x.len() % 2 == 0 {
            continue;
        }
        let df: usize = x.iter().map(|&v| delta - g.degree(v)).sum();
        let value = g.boundary(&x) + df;
        if value + 2 <= delta && best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Even order, simple, `δ > n/2` and at least two vertices of minimum degree.
/// When true, no `Δ`-overfull subgraph exists.
pub fn min_degree_no_overfull(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    if n == 0 || n % 2 == 1 || !g.is_simple() {
        return false;
    }
    let delta_min = g.min_degree();
    2 * delta_min > n && g.degrees().iter().filter(|&&d| d == delta_min).count() >= 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValSide {
    pub x: usize,
    pub y: usize,
    /// Neighbors of `x` other than `y` with degree `Δ`.
    pub max_degree_neighbors: usize,
    /// `Δ − d(y) + 1`
    pub required: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValVerdict {
    pub sides: [ValSide; 2],
    pub degree_sum: usize,
    pub degree_sum_ok: bool,
    /// A failure means the edge is not critical.
    pub pass: bool,
}

/// Necessary conditions for `xy` to be a critical edge, checked from both ends.
pub fn val_check(g: &Multigraph, x: usize, y: usize) -> Result<ValVerdict> {
    if !g.is_simple() {
        return input("val_check needs a simple graph");
    }
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if g.multiplicity(x, y) == 0 {
        return input(format!("no edge {x}{y}"));
    }
    let delta = g.max_degree();
    let side = |x: usize, y: usize| {
        let max_degree_neighbors = g.neighbors(x).filter(|&(u, _)| u != y && g.degree(u) == delta).count();
        let required = delta + 1 - g.degree(y);
        ValSide { x, y, max_degree_neighbors, required, pass: max_degree_neighbors >= required }
    };
    let sides = [side(x, y), side(y, x)];
    let degree_sum = g.degree(x) + g.degree(y);
    let degree_sum_ok = degree_sum >= delta + 2;
    let pass = degree_sum_ok && sides.iter().all(|s| s.pass);
    Ok(ValVerdict { sides, degree_sum, degree_sum_ok, pass })
}

fn colorable(g: &Multigraph, k: usize) -> Result<bool> {
    if color_with_palette(g, k).is_some() {
        return Ok(true);
    }
    Ok(try_color_exact(g, k, DEFAULT_NODE_LIMIT)?.is_some())
}

/// Connected, `χ' = Δ + 1`, and `χ'(G − e) ≤ Δ` for every edge `e`.
pub fn is_edge_chromatic_critical(g: &Multigraph) -> Result<bool> {
    if !g.is_simple() {
        return input("criticality is checked on simple graphs");
    }
    if g.edge_count() > CRITICAL_EDGE_CAP {
        return Err(Error::Resource(format!(
            "{} edges exceed the criticality cap {CRITICAL_EDGE_CAP}",
            g.edge_count()
        )));
    }
    if g.edge_count() == 0 || g.components().len() != 1 {
        return Ok(false);
    }
    let delta = g.max_degree();
    if colorable(g, delta)? {
        return Ok(false);
    }
    for (u, v, _) in g.pairs().collect::<Vec<_>>() {
        let mut h = g.clone();
        h.remove_edge(u, v)?;
        if !colorable(&h, delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    /// `Δ − 7δ/4 ≥ (3n − 17)/4`
    pub hypothesis: bool,
    pub overfull: bool,
    /// The hypothesis forces overfullness.
    pub consistent: bool,
}

/// For a critical graph, a large gap between maximum and minimum degree forces overfullness.
pub fn critical_overfull_bound(g: &Multigraph) -> Result<BoundVerdict> {
    if !is_edge_chromatic_critical(g)? {
        return domain("graph is not edge-chromatic critical");
    }
    let (n, d, dmin) = (g.vertex_count() as i64, g.max_degree() as i64, g.min_degree() as i64);
    let hypothesis = 4 * d - 7 * dmin >= 3 * n - 17;
    let overfull = is_overfull(g);
    Ok(BoundVerdict { hypothesis, overfull, consistent: !hypothesis || overfull })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AverageDegreeVerdict {
    pub average: String,
    /// `Δ − 1 + 3/n`
    pub bound: String,
    pub pass: bool,
    /// `2e = Δ(n − 1) + 2`, checked when the graph is overfull.
    pub overfull_identity: Option<bool>,
}

pub fn average_degree_criterion(g: &Multigraph) -> Result<AverageDegreeVerdict> {
    if !is_edge_chromatic_critical(g)? {
        return domain("graph is not edge-chromatic critical");
    }
    let n = g.vertex_count();
    let e = g.edge_count();
    let d = g.max_degree();
    let average = Ratio::new(2 * e, n);
    let bound = Ratio::from_integer(d - 1) + Ratio::new(3, n);
    let overfull_identity = is_overfull(g).then(|| 2 * e == d * (n - 1) + 2);
    Ok(AverageDegreeVerdict {
        average: average.to_string(),
        bound: bound.to_string(),
        pass: average >= bound,
        overfull_identity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpanderMode {
    Exhaustive,
    /// `per_size` uniform draws for each eligible subset size.
    Sampled { per_size: usize, seed: u64 },
    /// Exhaustive up to the cap, sampled above it.
    Auto { per_size: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpanderVerdict {
    /// True only when every eligible subset was checked.
    pub proof: bool,
    pub subsets_checked: u64,
    pub violation: Option<Vec<usize>>,
    pub robust_neighbourhood: Option<Vec<usize>>,
}

impl ExpanderVerdict {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `|RN(S)| ≥ |S| + νn` for every `S` with `τn ≤ |S| ≤ (1 − τ)n`,
/// where `RN(S)` is the set of vertices with at least `νn` neighbors in `S`.
pub fn robust_expander_check(
    g: &Multigraph,
    nu: Ratio<usize>,
    tau: Ratio<usize>,
    mode: ExpanderMode,
) -> Result<ExpanderVerdict> {
    let n = g.vertex_count();
    let nn = Ratio::from_integer(n);
    let lo = (tau * nn).ceil().to_integer();
    let hi_r = (Ratio::from_integer(1) - tau.min(Ratio::from_integer(1))) * nn;
    let hi = hi_r.floor().to_integer();
    let need_nbrs = nu * nn;
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).map(|(u, _)| u).collect()).collect();
    let check = |s: &[bool]| -> Option<Vec<usize>> {
        let rn: Vec<usize> = (0..n)
            .filter(|&v| Ratio::from_integer(nbrs[v].iter().filter(|&&u| s[u]).count()) >= need_nbrs)
            .collect();
        let size = s.iter().filter(|&&b| b).count();
        (Ratio::from_integer(rn.len()) < Ratio::from_integer(size) + need_nbrs).then_some(rn)
    };
    let mut verdict = ExpanderVerdict { proof: true, subsets_checked: 0, violation: None, robust_neighbourhood: None };
    if lo > hi {
        return Ok(verdict);
    }
    let exhaustive = match mode {
        ExpanderMode::Exhaustive => {
            if n > EXPANDER_CAP {
                return Err(Error::Resource(format!("{n} vertices exceed the expander cap {EXPANDER_CAP}")));
            }
            true
        }
        ExpanderMode::Sampled { .. } => false,
        ExpanderMode::Auto { .. } => n <= EXPANDER_CAP,
    };
    if exhaustive {
        let mut s = vec![false; n];
        for mask in 0usize..1 << n {
            let size = mask.count_ones() as usize;
            if size < lo || size > hi {
                continue;
            }
            for (v, b) in s.iter_mut().enumerate() {
                *b = mask >> v & 1 == 1;
            }
            verdict.subsets_checked += 1;
            if let Some(rn) = check(&s) {
                verdict.violation = Some(mask_members(mask));
                verdict.robust_neighbourhood = Some(rn);
                return Ok(verdict);
            }
        }
        return Ok(verdict);
    }
    let (per_size, seed) = match mode {
        ExpanderMode::Sampled { per_size, seed } | ExpanderMode::Auto { per_size, seed } => (per_size, seed),
        ExpanderMode::Exhaustive => unreachable!(),
    };
    verdict.proof = false;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for size in lo..=hi {
        for _ in 0..per_size {
            let mut members = sample(&mut rng, n, size).into_vec();
            members.sort_unstable();
            let mut s = vec![false; n];
            for &v in &members {
                s[v] = true;
            }
            verdict.subsets_checked += 1;
            if let Some(rn) = check(&s) {
                verdict.violation = Some(members);
                verdict.robust_neighbourhood = Some(rn);
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub vertices: usize,
    pub delta: usize,
    pub chromatic_index: usize,
    pub overfull: OverfullCertificate,
    /// `Δ ≥ (1 − ε)n` on a simple graph.
    pub hypothesis_applies: bool,
    /// `Δ > n/3`, the degree condition of the overfull conjecture.
    pub above_third: bool,
    /// `χ' = Δ` exactly when no `Δ`-overfull subgraph exists.
    pub biconditional_holds: bool,
}

pub fn conjecture_verdict(g: &Multigraph, eps: Ratio<usize>) -> Result<ConjectureReport> {
    let chi = chromatic_index_exact(g)?.chromatic_index;
    let overfull = find_delta_overfull_subgraph(g)?;
    let n = g.vertex_count();
    let delta = g.max_degree();
    let one = Ratio::from_integer(1);
    let hypothesis_applies =
        g.is_simple() && eps <= one && Ratio::from_integer(delta) >= (one - eps) * Ratio::from_integer(n);
    Ok(ConjectureReport {
        vertices: n,
        delta,
        chromatic_index: chi,
        biconditional_holds: (chi == delta) == !overfull.found(),
        overfull,
        hypothesis_applies,
        above_third: 3 * delta > n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_bipartite, cycle, disjoint_union, petersen_minus_vertex, random_multigraph};

    #[test]
    fn overfull_examples() {
        assert!(is_overfull(&complete(3)));
        assert!(!is_overfull(&complete(4)));
        let c = find_delta_overfull_subgraph(&complete(3)).unwrap();
        assert_eq!(c.subset, vec![0, 1, 2]);
        let p = petersen_minus_vertex();
        assert!(!find_delta_overfull_subgraph(&p).unwrap().found());
        let c5 = cycle(5).unwrap();
        let two = disjoint_union(&c5, &c5);
        let c = find_delta_overfull_subgraph(&two).unwrap();
        assert!(c.found() && c.reverify(&two));
        assert!(c.subset == vec![0, 1, 2, 3, 4] || c.subset == vec![5, 6, 7, 8, 9]);
    }

    #[test]
    fn min_degree_examples() {
        assert!(min_degree_no_overfull(&complete(6)));
        assert!(!min_degree_no_overfull(&complete(5)));
        let mut k6e = complete(6);
        k6e.remove_edge(0, 1).unwrap();
        assert!(min_degree_no_overfull(&k6e));
        let opts = OverfullSearch { exhaustive_cap: 16, odd_cut: false };
        assert!(!find_delta_overfull_subgraph_with(&k6e.clone(), opts).unwrap().found());
    }

    #[test]
    fn odd_cut_agrees_with_exhaustive() {
        let exhaustive = OverfullSearch { exhaustive_cap: 16, odd_cut: false };
        let cut = OverfullSearch { exhaustive_cap: 0, odd_cut: true };
        for seed in 0..300 {
            let n = 3 + (seed as usize % 9);
            let g = random_multigraph(n, 0.5, 1 + seed as usize % 3, seed);
            if min_degree_no_overfull(&g) || g.max_degree() < 2 {
                continue;
            }
            let a = find_delta_overfull_subgraph_with(&g, exhaustive).unwrap();
            let b = find_delta_overfull_subgraph_with(&g, cut).unwrap();
            assert_eq!(a.found(), b.found(), "seed {seed}");
            assert!(b.reverify(&g));
        }
    }

    #[test]
    fn cap_without_odd_cut_is_a_resource_error() {
        let g = complete_bipartite(9, 9);
        let opts = OverfullSearch { exhaustive_cap: 16, odd_cut: false };
        assert!(matches!(find_delta_overfull_subgraph_with(&g, opts), Err(Error::Resource(_))));
    }

    #[test]
    fn val_examples() {
        let c5 = cycle(5).unwrap();
        assert!(val_check(&c5, 0, 1).unwrap().pass);
        let star = Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!val_check(&star, 0, 1).unwrap().pass);
        let p = petersen_minus_vertex();
        for (u, v, _) in p.pairs() {
            assert!(val_check(&p, u, v).unwrap().pass);
        }
        assert!(val_check(&c5, 0, 2).is_err());
    }

    #[test]
    fn critical_examples() {
        assert!(is_edge_chromatic_critical(&cycle(5).unwrap()).unwrap());
        assert!(!is_edge_chromatic_critical(&complete(4)).unwrap());
        assert!(is_edge_chromatic_critical(&petersen_minus_vertex()).unwrap());
        let b = critical_overfull_bound(&cycle(5).unwrap()).unwrap();
        assert!(!b.hypothesis && b.consistent);
        assert!(critical_overfull_bound(&complete(4)).is_err());
    }

    #[test]
    fn average_degree_examples() {
        for g in [cycle(5).unwrap(), cycle(7).unwrap(), petersen_minus_vertex()] {
            assert!(average_degree_criterion(&g).unwrap().pass);
        }
        assert_eq!(average_degree_criterion(&petersen_minus_vertex()).unwrap().average, "8/3");
        assert!(average_degree_criterion(&complete(4)).is_err());
    }

    #[test]
    fn expander_examples() {
        let (nu, tau) = (Ratio::new(1, 10), Ratio::new(3, 10));
        let v = robust_expander_check(&complete(10), nu, tau, ExpanderMode::Exhaustive).unwrap();
        assert!(v.pass() && v.proof);
        let k5 = complete(5);
        let two = disjoint_union(&k5, &k5);
        let v = robust_expander_check(&two, nu, tau, ExpanderMode::Exhaustive).unwrap();
        assert_eq!(v.violation, Some(vec![0, 1, 2, 3, 4]));
        let v = robust_expander_check(&two, nu, Ratio::new(3, 5), ExpanderMode::Exhaustive).unwrap();
        assert!(v.pass() && v.subsets_checked == 0);
        assert!(robust_expander_check(&complete(19), nu, tau, ExpanderMode::Exhaustive).is_err());
        let v = robust_expander_check(&complete(19), nu, tau, ExpanderMode::Auto { per_size: 5, seed: 1 }).unwrap();
        assert!(v.pass() && !v.proof);
    }

    #[test]
    fn conjecture_examples() {
        let eps = Ratio::new(1, 14);
        let r = conjecture_verdict(&complete(4), eps).unwrap();
        assert!(r.biconditional_holds && r.chromatic_index == 3);
        let r = conjecture_verdict(&complete(5), eps).unwrap();
        assert!(r.biconditional_holds && r.chromatic_index == 5);
        let r = conjecture_verdict(&petersen_minus_vertex(), eps).unwrap();
        assert!(!r.hypothesis_applies && !r.biconditional_holds && r.chromatic_index == 4);
    }
}
