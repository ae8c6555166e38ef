//! Decomposition of the regular supergraph `G₃` into `k + ℓ` perfect matchings
//! and a nearly-bipartite remainder, giving a `Δ`-coloring of `G₃ − F₁`.
//!
//! Steps: a balanced partition `(A, B)`; the graph `G_{A,B}` and an equalized
//! `k`-coloring of it; extension of every class to a perfect matching by
//! alternating paths; two-stage coloring of the uncolored residuals inside
//! `A` and `B` with matching extension; and a final coloring of what is left.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::augment::{annotate_u, regularize, LayerSource, NamedCheck, PipelineState};
use crate::edge_color::exact::{try_color_exact, DEFAULT_NODE_LIMIT};
use crate::edge_color::{
    check_proper, color_bipartite_konig, color_bounded, color_nearly_bipartite, color_vizing_bound,
    color_with_palette, complete_coloring, density_rho, equalize, EdgeColoring, NearlyBipartiteOutcome, UNCOLORED,
};
use crate::error::{input, Error, Result};
use crate::matching::{general_maximum_matching, perfect_matching, PerfectMatching};
use crate::multigraph::{EdgeRef, Multigraph};
use crate::overfull::OverfullCertificate;

const NONE: usize = usize::MAX;
/// Draws tried by [`random_balanced_partition`].
pub const PARTITION_RETRIES: usize = 256;
/// Edge cap for the exact fallback when coloring `G_{A,B}`.
const GAB_EXACT_EDGES: usize = 60;

/// Parses a decimal (`0.05`) or a fraction (`1/20`) into an exact ratio.
pub fn parse_fraction(text: &str) -> Result<Ratio<usize>> {
    let t = text.trim();
    let bad = || Error::Input(format!("cannot read '{t}' as a fraction"));
    if let Some((a, b)) = t.split_once('/') {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.len() > 12 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let int: usize = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let den = 10usize.pow(frac.len() as u32);
    let num: usize = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Ratio::new(int * den + num, den))
}

fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Largest `t` with `t³ ≤ n²`, i.e. `⌊n^{2/3}⌋`.
fn floor_two_thirds(n: usize) -> usize {
    let mut t = (n as f64).powf(2.0 / 3.0) as usize + 1;
    while t * t * t > n * n {
        t -= 1;
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub partner_pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    pub in_a: Vec<bool>,
    /// `max_v |dˢ(v, A) − dˢ(v, B)|`
    pub imbalance: usize,
    pub tolerance: usize,
    pub swaps: usize,
}

impl Partition {
    fn from_sides(g: &Multigraph, in_a: Vec<bool>, pairs: &[(usize, usize)], tolerance: usize) -> Self {
        let a = (0..in_a.len()).filter(|&v| in_a[v]).collect();
        let b = (0..in_a.len()).filter(|&v| !in_a[v]).collect();
        Partition {
            a,
            b,
            partner_pairs: pairs.to_vec(),
            imbalance: imbalance(g, &in_a),
            in_a,
            tolerance,
            swaps: 0,
        }
    }
}

fn imbalance(g: &Multigraph, in_a: &[bool]) -> usize {
    (0..g.vertex_count())
        .map(|v| {
            let na = g.neighbors(v).filter(|&(u, _)| in_a[u]).count();
            na.abs_diff(g.simple_degree(v) - na)
        })
        .max()
        .unwrap_or(0)
}

/// An equal split of the vertices with every partner pair separated and
/// simple degrees into the two parts within `tolerance` of each other.
pub fn random_balanced_partition(
    g: &Multigraph,
    pairs: &[(usize, usize)],
    tolerance: usize,
    seed: u64,
) -> Result<Partition> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return input(format!("odd vertex count {n}"));
    }
    let mut used = vec![false; n];
    for &(x, y) in pairs {
        g.check_vertex(x)?;
        g.check_vertex(y)?;
        if x == y || used[x] || used[y] {
            return input(format!("partner pairs are not disjoint at ({x}, {y})"));
        }
        used[x] = true;
        used[y] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = usize::MAX;
    for _ in 0..PARTITION_RETRIES {
        let mut in_a = vec![false; n];
        for &(x, y) in pairs {
            in_a[if rng.gen_bool(0.5) { x } else { y }] = true;
        }
        let mut rest = free.clone();
        rest.shuffle(&mut rng);
        for &v in rest.iter().take(n / 2 - pairs.len()) {
            in_a[v] = true;
        }
        let imb = imbalance(g, &in_a);
        if imb <= tolerance {
            return Ok(Partition::from_sides(g, in_a, pairs, tolerance));
        }
        best = best.min(imb);
    }
    Err(Error::Resource(format!(
        "no partition within tolerance {tolerance} after {PARTITION_RETRIES} draws; best imbalance {best}"
    )))
}

/// Swaps partner pairs so that each `(x, y)` in `required` has `x ∈ A`, `y ∈ B`.
pub fn partition_modification(mut p: Partition, g: &Multigraph, required: &[(usize, usize)]) -> Result<Partition> {
    for &(x, y) in required {
        if !p.partner_pairs.iter().any(|&(s, t)| (s, t) == (x, y) || (s, t) == (y, x)) {
            return input(format!("({x}, {y}) is not a partner pair"));
        }
        if !p.in_a[x] {
            p.in_a[x] = true;
            p.in_a[y] = false;
            p.swaps += 1;
        }
    }
    let (tol, swaps) = (p.tolerance, p.swaps);
    let mut q = Partition::from_sides(g, p.in_a, &p.partner_pairs, tol);
    q.swaps = swaps;
    Ok(q)
}

/// Positions and special vertices of `G₃` needed by the steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub n: usize,
    pub delta: usize,
    pub p: usize,
    pub marker: bool,
    pub g_idx: usize,
    pub h_idx: usize,
    /// `pos[i]` is the vertex playing `v_{i+1}`.
    pub pos: Vec<usize>,
    pub u: Vec<usize>,
    pub u_star: Vec<usize>,
    /// `(v_j, u_j)` for the positions that need a maximum-degree partner.
    pub delta_partners: Vec<(usize, usize)>,
    pub pairs: Vec<(usize, usize)>,
    /// `(x, y)` that must end with `x ∈ A`, `y ∈ B`.
    pub required: Vec<(usize, usize)>,
    /// Positions left without a maximum-degree partner under rescue.
    pub unpartnered: Vec<usize>,
}

impl Layout {
    pub fn v(&self, i: usize) -> Option<usize> {
        (i >= 1).then(|| self.pos.get(i - 1).copied()).flatten()
    }

    /// The partner `u_{p+1}` of `v_{p+1}`.
    pub fn u_next(&self) -> Option<usize> {
        let v = self.v(self.p + 1)?;
        self.delta_partners.iter().find(|&&(x, _)| x == v).map(|&(_, u)| u)
    }
}

/// Step 1 bookkeeping: partner pairs and required sides. With `rescue`, a
/// position that finds no maximum-degree partner is left unpaired.
pub fn layout(state: &PipelineState, rescue: bool) -> Result<Layout> {
    let g3 = state.g3()?;
    let n = g3.vertex_count();
    let pos = state.current.clone();
    let map = |set: &[usize]| -> Vec<usize> {
        let s: BTreeSet<usize> = set.iter().map(|&v| state.merged_into[v]).collect();
        s.into_iter().collect()
    };
    let (p, marker) = (state.p, state.marker);
    let g_idx = state.g_idx.min(pos.len());
    let h_idx = state.h_idx.min(pos.len());
    let mut pairs = Vec::new();
    let mut required = Vec::new();
    let mut used = vec![false; n];
    let top = p;
    for i in 1..=top / 2 {
        let (x, y) = (pos[2 * i - 2], pos[2 * i - 1]);
        pairs.push((x, y));
        required.push((x, y));
        used[x] = true;
        used[y] = true;
    }
    let mut delta_partners = Vec::new();
    let mut unpartnered = Vec::new();
    let mut next_free = p + 1;
    if !marker && p < pos.len() {
        let last = h_idx.max(p + 1);
        let reserved = last.max(g_idx);
        let mut pool: Vec<usize> = pos[reserved.min(pos.len())..].iter().rev().copied().collect();
        for j in p + 1..=last {
            let v = pos[j - 1];
            let Some(u) = pool.iter().position(|&u| !used[u]).map(|i| pool.remove(i)) else {
                if rescue {
                    unpartnered.push(j);
                    continue;
                }
                return Err(Error::Domain(format!("no maximum-degree vertex left to partner v_{j}")));
            };
            pairs.push((u, v));
            required.push((u, v));
            delta_partners.push((v, u));
            used[u] = true;
            used[v] = true;
        }
        next_free = last + 1;
    }
    let mut j = next_free;
    while j < g_idx.min(pos.len()) {
        let (x, y) = (pos[j - 1], pos[j]);
        if !used[x] && !used[y] {
            pairs.push((x, y));
            used[x] = true;
            used[y] = true;
        }
        j += 2;
    }
    Ok(Layout {
        n,
        delta: state.delta,
        p,
        marker,
        g_idx,
        h_idx,
        pos,
        u: map(&state.u),
        u_star: map(&state.u_star),
        delta_partners,
        pairs,
        required,
        unpartnered,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionParams {
    pub eta: String,
    pub n: usize,
    pub delta: usize,
    /// `⌈Δ/2 + 5.3ηn⌉`
    pub delta_prime: usize,
    /// `Δ′ + ⌈√Δ′⌉`
    pub k_formula: usize,
    /// Number of colors actually used on `G_{A,B}`.
    pub k: usize,
    pub e_p: usize,
    pub l1: usize,
    pub l2: usize,
    pub l: usize,
    /// Partition balance tolerance `⌊n^{2/3}⌋`.
    pub tolerance: usize,
    /// After modification: `⌊n^{2/3}⌋ + ⌊4ηn⌋ + 2`.
    pub modified_tolerance: usize,
    /// Residual degree cap `⌈5√η n⌉`, at least 1.
    pub degree_cap: usize,
    /// Residual edge cap `⌈18ηn²⌉`.
    pub residual_cap: usize,
    pub path_cap: usize,
    /// Residual edges added per exchange.
    pub per_exchange_cap: usize,
    /// Missing-vertex bound `9ηn − 2` for `G_{A,B}` classes, rounded up.
    pub missing_cap: usize,
    pub inequalities: Vec<NamedCheck>,
}

fn ratio_str(r: Ratio<usize>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Derived integers of the decomposition for `G₃` and `η`.
pub fn compute_params(state: &PipelineState, lay: &Layout, eta: Ratio<usize>) -> Result<DecompositionParams> {
    let g3 = state.g3()?;
    let n = g3.vertex_count();
    let nn = Ratio::from_integer(n);
    if eta * nn < Ratio::from_integer(1) {
        return input(format!(
            "ηn = {} < 1; use η ≥ 1/{n} for this graph",
            ratio_str(eta * nn)
        ));
    }
    let delta = state.delta;
    let delta_prime = (Ratio::new(delta, 2) + Ratio::new(53, 10) * eta * nn).ceil().to_integer();
    let k = delta_prime + ceil_sqrt(delta_prime);
    let mut inequalities = Vec::new();
    let mut e_p = 0;
    if !lay.marker {
        if let (Some(a), Some(b), Some(c)) = (lay.v(lay.p - 1), lay.v(lay.p), lay.v(lay.p + 1)) {
            let e = g3.multiplicity(b, c);
            let half_up = e.div_ceil(2);
            // ⌈e/2⌉ < 6√η n  ⟺  ⌈e/2⌉² < 36 η n²
            let small = Ratio::from_integer(half_up * half_up) < Ratio::from_integer(36) * eta * nn * nn;
            let halves = g3.multiplicity(a, b) / 2 + g3.multiplicity(a, c) / 2 + e / 2;
            let room = k.saturating_sub(halves);
            let six = (Ratio::from_integer(6) * eta * nn).floor().to_integer();
            if !small {
                e_p = room.min(six);
            }
            let lhs = Ratio::from_integer(k) - Ratio::from_integer(halves);
            inequalities.push(NamedCheck {
                name: "k − Σ⌊e/2⌋ over the triple > 5.3ηn".into(),
                pass: lhs > Ratio::new(53, 10) * eta * nn,
                detail: format!("k = {k}, Σ⌊e/2⌋ = {halves}, 5.3ηn = {}", ratio_str(Ratio::new(53, 10) * eta * nn)),
            });
            inequalities.push(NamedCheck {
                name: "e_p = 0 or e_p > 5.3ηn".into(),
                pass: e_p == 0 || Ratio::from_integer(e_p) > Ratio::new(53, 10) * eta * nn,
                detail: format!("e_p = {e_p}"),
            });
        }
    }
    inequalities.push(NamedCheck {
        name: "k < Δ".into(),
        pass: k < delta,
        detail: format!("k = {k}, Δ = {delta}"),
    });
    let tolerance = floor_two_thirds(n);
    let four = (Ratio::from_integer(4) * eta * nn).floor().to_integer();
    let cap_sq = (Ratio::from_integer(25) * eta * nn * nn).ceil().to_integer();
    Ok(DecompositionParams {
        eta: ratio_str(eta),
        n,
        delta,
        delta_prime,
        k_formula: k,
        k,
        e_p,
        l1: 0,
        l2: 0,
        l: 0,
        tolerance,
        modified_tolerance: tolerance + four + 2,
        degree_cap: ceil_sqrt(cap_sq).max(1),
        residual_cap: (Ratio::from_integer(18) * eta * nn * nn).ceil().to_integer(),
        path_cap: 13,
        per_exchange_cap: 4,
        missing_cap: (Ratio::from_integer(9) * eta * nn).ceil().to_integer().saturating_sub(2),
        inequalities,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SpecialEdgeSets {
    pub e1: Vec<EdgeRef>,
    pub e2: Vec<EdgeRef>,
    pub f1: Vec<EdgeRef>,
    pub f2: Vec<EdgeRef>,
    pub f21: Vec<EdgeRef>,
    pub f22: Vec<EdgeRef>,
}

fn er(u: usize, v: usize, copy: usize) -> EdgeRef {
    EdgeRef { u: u.min(v), v: u.max(v), copy }
}

/// Picks `want` edges at `x` towards `targets`, one per neighbour first, then
/// further copies; copies are taken from the top of each pair.
fn pick_at(g: &Multigraph, x: usize, targets: &[usize], want: usize, simple: bool) -> Option<Vec<EdgeRef>> {
    let mut out = Vec::new();
    let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
    let rounds = if simple { 1 } else { g.max_multiplicity().max(1) };
    for round in 0..rounds {
        for &y in targets {
            if out.len() == want {
                return Some(out);
            }
            let m = g.multiplicity(x, y);
            if m > round {
                let t = taken.entry(y).or_insert(0);
                out.push(er(x, y, m - 1 - *t));
                *t += 1;
            }
        }
    }
    (out.len() == want).then_some(out)
}

/// Step 2 edge sets around `v_p`, `v_{p+1}` and `u_{p+1}`.
pub fn select_special_edge_sets(
    g3: &Multigraph,
    lay: &Layout,
    part: &Partition,
    params: &DecompositionParams,
) -> Result<SpecialEdgeSets> {
    let mut s = SpecialEdgeSets::default();
    if lay.marker {
        return Ok(s);
    }
    let (Some(vp), Some(vq)) = (lay.v(lay.p), lay.v(lay.p + 1)) else {
        return Ok(s);
    };
    let e = g3.multiplicity(vp, vq);
    let size = e.div_ceil(2).saturating_sub(params.e_p);
    for c in 0..e {
        if c >= e - size {
            s.f1.push(er(vp, vq, c));
        } else {
            s.f2.push(er(vp, vq, c));
        }
    }
    let in_a = &part.in_a;
    let ustar: BTreeSet<usize> = lay.u_star.iter().copied().collect();
    let uset: BTreeSet<usize> = lay.u.iter().copied().collect();
    if size > 0 {
        let Some(u) = lay.u_next() else {
            return Err(Error::Domain("v_{p+1} has no maximum-degree partner".into()));
        };
        let mut inside: Vec<usize> = (0..lay.n).filter(|&y| y != u && in_a[y] && g3.multiplicity(u, y) > 0).collect();
        inside.sort_by_key(|&y| (ustar.contains(&y), y));
        s.e1 = pick_at(g3, u, &inside, size, false).ok_or_else(|| {
            Error::Domain(format!("u_{{p+1}} = {u} has fewer than |E1| = {size} edges inside A"))
        })?;
        let cross: Vec<usize> = (0..lay.n).filter(|&y| !in_a[y] && !uset.contains(&y)).collect();
        s.e2 = pick_at(g3, u, &cross, size, false).ok_or_else(|| {
            Error::Domain(format!("u_{{p+1}} = {u} has fewer than |E2| = {size} edges to B∖U"))
        })?;
    }
    if params.e_p > 0 {
        let ok = |y: usize| !in_a[y] && !ustar.contains(&y) && y != vp && y != vq;
        let mut xs: Vec<usize> = (0..lay.n).filter(|&y| ok(y) && g3.multiplicity(vp, y) > 0).collect();
        xs.sort_by_key(|&y| (g3.multiplicity(vq, y) > 0, y));
        let f21 = pick_at(g3, vp, &xs, params.e_p, true)
            .ok_or_else(|| Error::Domain(format!("v_p has fewer than e_p = {} simple edges into B∖U*", params.e_p)))?;
        let hit: BTreeSet<usize> = f21.iter().map(|e| e.other(vp)).collect();
        let ys: Vec<usize> = (0..lay.n)
            .filter(|&y| ok(y) && !hit.contains(&y) && g3.multiplicity(vq, y) > 0)
            .collect();
        let f22 = pick_at(g3, vq, &ys, params.e_p, true).ok_or_else(|| {
            Error::Domain(format!("v_{{p+1}} has fewer than e_p = {} edges into B∖U* avoiding F21", params.e_p))
        })?;
        s.f21 = f21;
        s.f22 = f22;
    }
    Ok(s)
}

/// `G_{A,B}`: the graphs inside `A` and `B` with the special sets exchanged,
/// plus `E2` and about half of the parallel copies from `v_{2i−1}` into `B ∩ U*`.
///
/// Every pair contributes its lowest copies, so `G_{A,B}` is a subgraph of
/// `G₃ − F₁` under the identity on edge references.
pub fn form_gab(g3: &Multigraph, lay: &Layout, part: &Partition, sets: &SpecialEdgeSets) -> Result<Multigraph> {
    let n = g3.vertex_count();
    let in_a = &part.in_a;
    let mut drop: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in sets.e1.iter().chain(&sets.f1).chain(&sets.f21).chain(&sets.f22) {
        *drop.entry((e.u, e.v)).or_insert(0) += 1;
    }
    let mut gab = Multigraph::new(n);
    for (u, v, k) in g3.pairs() {
        if in_a[u] == in_a[v] {
            let d = drop.get(&(u, v)).copied().unwrap_or(0);
            gab.add_edges(u, v, k - d)?;
        }
    }
    for e in &sets.e2 {
        gab.add_edge(e.u, e.v)?;
    }
    let ustar_b: Vec<usize> = lay.u_star.iter().copied().filter(|&v| !in_a[v]).collect();
    let top = lay.p;
    for i in 1..=top / 2 {
        let v = lay.pos[2 * i - 2];
        if !in_a[v] {
            continue;
        }
        let mut odd_seen = 0;
        for &u in &ustar_b {
            let extra = g3.multiplicity(v, u).saturating_sub(1);
            let mut take = extra / 2;
            if extra % 2 == 1 {
                take += odd_seen % 2;
                odd_seen += 1;
            }
            gab.add_edges(v, u, take)?;
        }
    }
    Ok(gab)
}

fn audit(name: &str, pass: bool, detail: String) -> NamedCheck {
    NamedCheck { name: name.into(), pass, detail }
}

/// Equalized proper `k`-coloring of `G_{A,B}`.
pub fn color_gab(gab: &Multigraph, k: usize) -> Result<EdgeColoring> {
    let d = gab.max_degree();
    if k < d {
        return input(format!("k = {k} < Δ(G_AB) = {d}"));
    }
    let mut c = if let Some(c) = color_with_palette(gab, k) {
        c
    } else if let Ok(c) = color_bounded(gab, k) {
        c
    } else if d + gab.max_multiplicity() <= k {
        let mut c = color_vizing_bound(gab)?;
        c.set_palette(k)?;
        c
    } else if gab.edge_count() <= GAB_EXACT_EDGES {
        try_color_exact(gab, k, DEFAULT_NODE_LIMIT)?
            .ok_or_else(|| Error::Domain(format!("G_AB has no proper {k}-coloring")))?
    } else {
        return Err(Error::Resource(format!("no {k}-coloring of G_AB found")));
    };
    c.set_palette(k)?;
    equalize(gab, &c)
}

/// A failed step and the condition it could not meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepFailure {
    pub step: String,
    pub condition: String,
    pub diagnostics: String,
    pub certificate: Option<OverfullCertificate>,
}

fn fail(step: &str, condition: impl Into<String>, diagnostics: impl Into<String>) -> StepFailure {
    StepFailure { step: step.into(), condition: condition.into(), diagnostics: diagnostics.into(), certificate: None }
}

fn from_err(step: &str, e: Error) -> StepFailure {
    fail(step, e.to_string(), String::new())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: String,
    pub metrics: BTreeMap<String, usize>,
    pub audits: Vec<NamedCheck>,
    pub fallbacks: Vec<String>,
}

impl StepRecord {
    fn new(step: &str) -> Self {
        StepRecord { step: step.into(), ..Default::default() }
    }

    fn metric(&mut self, name: &str, value: usize) {
        self.metrics.insert(name.into(), value);
    }
}

/// Uncolored layers inside `A` and `B` after the class extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualPair {
    pub r_a: Vec<EdgeRef>,
    pub r_b: Vec<EdgeRef>,
    pub max_degree_a: usize,
    pub max_degree_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    InA,
    InB,
    Cross,
}

/// Mutable coloring of `G₃ − F₁` shared by steps 3 to 5.
pub struct Work {
    h: Multigraph,
    ends: Vec<(usize, usize)>,
    inst: Vec<EdgeRef>,
    color: Vec<usize>,
    at: Vec<Vec<usize>>,
    role: Vec<Role>,
    e1: Vec<bool>,
    rdeg: Vec<usize>,
    avoid: Vec<bool>,
}

impl Work {
    fn new(g3: &Multigraph, part: &Partition, sets: &SpecialEdgeSets, avoid: Vec<bool>) -> Result<Self> {
        let mut h = g3.clone();
        for e in &sets.f1 {
            h.remove_edge(e.u, e.v)?;
        }
        let inst = h.edge_instances();
        let ends: Vec<(usize, usize)> = inst.iter().map(|e| (e.u, e.v)).collect();
        let mut at = vec![Vec::new(); h.vertex_count()];
        for (i, &(u, v)) in ends.iter().enumerate() {
            at[u].push(i);
            at[v].push(i);
        }
        let role = ends
            .iter()
            .map(|&(u, v)| match (part.in_a[u], part.in_a[v]) {
                (true, true) => Role::InA,
                (false, false) => Role::InB,
                _ => Role::Cross,
            })
            .collect();
        let e1set: BTreeSet<EdgeRef> = sets.e1.iter().copied().collect();
        let e1 = inst.iter().map(|e| e1set.contains(e)).collect();
        let mut w = Work {
            color: vec![UNCOLORED; ends.len()],
            rdeg: vec![0; h.vertex_count()],
            h,
            ends,
            inst,
            at,
            role,
            e1,
            avoid,
        };
        for i in 0..w.ends.len() {
            if w.is_residual(i) {
                w.bump(i, true);
            }
        }
        Ok(w)
    }

    fn index(&self, e: EdgeRef) -> usize {
        self.inst.binary_search(&e).expect("edge of G₃ − F₁")
    }

    fn other(&self, e: usize, x: usize) -> usize {
        let (u, v) = self.ends[e];
        if u == x {
            v
        } else {
            u
        }
    }

    fn is_residual(&self, e: usize) -> bool {
        self.color[e] == UNCOLORED && self.role[e] != Role::Cross && !self.e1[e]
    }

    fn bump(&mut self, e: usize, up: bool) {
        let (u, v) = self.ends[e];
        for x in [u, v] {
            if up {
                self.rdeg[x] += 1;
            } else {
                self.rdeg[x] -= 1;
            }
        }
    }

    fn set_color(&mut self, e: usize, c: usize) {
        let was = self.is_residual(e);
        self.color[e] = c;
        let now = self.is_residual(e);
        if was != now {
            self.bump(e, now);
        }
    }

    fn edge_of_color(&self, v: usize, c: usize) -> Option<usize> {
        self.at[v].iter().copied().find(|&e| self.color[e] == c)
    }

    fn missing(&self, c: usize) -> Vec<usize> {
        (0..self.h.vertex_count()).filter(|&v| self.edge_of_color(v, c).is_none()).collect()
    }

    fn residual_edges(&self, role: Role) -> Vec<usize> {
        (0..self.ends.len()).filter(|&e| self.role[e] == role && self.is_residual(e)).collect()
    }

    fn free_cross(&self, e: usize) -> bool {
        self.color[e] == UNCOLORED && self.role[e] == Role::Cross
    }

    /// Covers every vertex outside `taken` with uncolored cross edges of color `c`.
    fn extend_by_cross_matching(&mut self, c: usize, in_a: &[bool]) -> std::result::Result<usize, StepFailure> {
        let free = self.missing(c);
        let left: Vec<usize> = free.iter().copied().filter(|&v| in_a[v]).collect();
        let right: Vec<usize> = free.iter().copied().filter(|&v| !in_a[v]).collect();
        let mut ridx = vec![NONE; self.h.vertex_count()];
        for (i, &r) in right.iter().enumerate() {
            ridx[r] = i;
        }
        let mut edge_for: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let adj: Vec<Vec<usize>> = left
            .iter()
            .map(|&a| {
                let mut out = Vec::new();
                for &e in &self.at[a] {
                    let b = self.other(e, a);
                    if self.free_cross(e) && ridx[b] != NONE && !edge_for.contains_key(&(a, b)) {
                        edge_for.insert((a, b), e);
                        out.push(ridx[b]);
                    }
                }
                out
            })
            .collect();
        match perfect_matching(&adj, right.len()) {
            PerfectMatching::Found(pairs) => {
                for (l, r) in pairs {
                    let e = edge_for[&(left[l], right[r])];
                    self.set_color(e, c);
                }
                Ok(left.len())
            }
            PerfectMatching::Deficient { side, set, neighbourhood } => {
                let (s_side, n_side) = match side {
                    crate::matching::Side::Left => (&left, &right),
                    crate::matching::Side::Right => (&right, &left),
                };
                let set: Vec<usize> = set.iter().map(|&i| s_side[i]).collect();
                let nb: Vec<usize> = neighbourhood.iter().map(|&i| n_side[i]).collect();
                Err(fail(
                    "color-residual",
                    format!("Hall condition fails for color {c}"),
                    format!("deficient set {set:?} has neighbourhood {nb:?}"),
                ))
            }
        }
    }

    /// Uncolored-cross / good-`i` alternating path from `s` to another vertex
    /// missing `i`, of length at most `cap`.
    fn find_path(&self, s: usize, i: usize, cap: usize, degree_cap: usize, strict: bool) -> Option<Vec<usize>> {
        let n = self.h.vertex_count();
        let mut seen = vec![false; n];
        let mut prev: Vec<(usize, usize)> = vec![(NONE, NONE); n];
        let mut depth = vec![0usize; n];
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        let good = |f: usize| -> bool {
            let (u, v) = self.ends[f];
            if strict && (self.avoid[u] || self.avoid[v]) {
                return false;
            }
            self.role[f] == Role::Cross || (self.rdeg[u] + 1 < degree_cap && self.rdeg[v] + 1 < degree_cap)
        };
        while let Some(y) = q.pop_front() {
            if depth[y] + 1 > cap {
                continue;
            }
            for &e in &self.at[y] {
                if !self.free_cross(e) {
                    continue;
                }
                let x = self.other(e, y);
                if seen[x] {
                    continue;
                }
                match self.edge_of_color(x, i) {
                    None => {
                        let mut path = vec![e];
                        let mut cur = y;
                        while cur != s {
                            let (f, back) = prev[cur];
                            path.push(f);
                            cur = back;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    Some(f) => {
                        let z = self.other(f, x);
                        if depth[y] + 3 > cap || seen[z] || !good(f) {
                            continue;
                        }
                        seen[x] = true;
                        seen[z] = true;
                        // prev of z stores the two edges back to y via x
                        prev[x] = (e, y);
                        prev[z] = (f, x);
                        depth[z] = depth[y] + 2;
                        q.push_back(z);
                    }
                }
            }
        }
        None
    }

    fn apply_path(&mut self, path: &[usize], i: usize) -> usize {
        let mut internal = 0;
        for (k, &e) in path.iter().enumerate() {
            if k % 2 == 0 {
                self.set_color(e, i);
            } else {
                if self.role[e] != Role::Cross {
                    internal += 1;
                }
                self.set_color(e, UNCOLORED);
            }
        }
        internal
    }

    /// Replaces class `i` by a perfect matching of class `i` plus all
    /// uncolored edges outside `E1`.
    fn rescue_class(&mut self, i: usize) -> bool {
        let n = self.h.vertex_count();
        let cand: Vec<usize> = (0..self.ends.len())
            .filter(|&e| self.color[e] == i || (self.color[e] == UNCOLORED && !self.e1[e]))
            .collect();
        let pairs: Vec<(usize, usize)> = cand.iter().map(|&e| self.ends[e]).collect();
        let mate = general_maximum_matching(n, &pairs);
        if mate.iter().any(Option::is_none) {
            return false;
        }
        let mut chosen = BTreeSet::new();
        for &e in &cand {
            let (u, v) = self.ends[e];
            if mate[u] == Some(v) && !chosen.iter().any(|&f: &usize| self.ends[f] == (u, v)) {
                chosen.insert(e);
            }
        }
        for &e in &cand {
            if self.color[e] == i && !chosen.contains(&e) {
                self.set_color(e, UNCOLORED);
            }
        }
        for &e in &chosen {
            self.set_color(e, i);
        }
        true
    }

    fn is_perfect_class(&self, c: usize) -> bool {
        (0..self.h.vertex_count()).all(|v| self.at[v].iter().filter(|&&e| self.color[e] == c).count() == 1)
    }
}

/// Step 3: makes every class `1..=k` a perfect matching of `G₃`.
pub fn extend_to_one_factors(
    w: &mut Work,
    in_a: &[bool],
    params: &DecompositionParams,
    rescue: bool,
    rec: &mut StepRecord,
) -> std::result::Result<ResidualPair, StepFailure> {
    let (mut direct, mut paths, mut relaxed, mut rescued, mut worst_internal) = (0, 0, 0, 0, 0);
    let mut parity_ok = true;
    for i in 1..=params.k {
        let miss = w.missing(i);
        let ma = miss.iter().filter(|&&v| in_a[v]).count();
        parity_ok &= ma.abs_diff(miss.len() - ma) % 2 == 0;
        // length-one paths first
        let right: Vec<usize> = miss.iter().copied().filter(|&v| !in_a[v]).collect();
        let left: Vec<usize> = miss.iter().copied().filter(|&v| in_a[v]).collect();
        let mut ridx = BTreeMap::new();
        for (j, &r) in right.iter().enumerate() {
            ridx.insert(r, j);
        }
        let mut edge_for = BTreeMap::new();
        let adj: Vec<Vec<usize>> = left
            .iter()
            .map(|&a| {
                w.at[a]
                    .iter()
                    .filter(|&&e| w.free_cross(e))
                    .filter_map(|&e| {
                        let b = w.other(e, a);
                        let j = *ridx.get(&b)?;
                        edge_for.entry((a, b)).or_insert(e);
                        Some(j)
                    })
                    .collect()
            })
            .collect();
        let m = crate::matching::maximum_matching(&adj, right.len());
        for (l, r) in m.iter().enumerate() {
            if let Some(r) = r {
                w.set_color(edge_for[&(left[l], right[*r])], i);
                direct += 1;
            }
        }
        loop {
            let miss = w.missing(i);
            let Some(&s) = miss.first() else { break };
            let found = match w.find_path(s, i, params.path_cap, params.degree_cap, true) {
                Some(p) => Some(p),
                None => {
                    let p = w.find_path(s, i, params.path_cap, params.degree_cap, false);
                    if p.is_some() {
                        relaxed += 1;
                    }
                    p
                }
            };
            if let Some(p) = found {
                let internal = w.apply_path(&p, i);
                worst_internal = worst_internal.max(internal);
                paths += 1;
                continue;
            }
            if rescue && w.rescue_class(i) {
                rescued += 1;
                break;
            }
            let ra = w.residual_edges(Role::InA).len();
            let rb = w.residual_edges(Role::InB).len();
            return Err(fail(
                "extend-to-one-factors",
                format!("no alternating path of length ≤ {} for color {i}", params.path_cap),
                format!(
                    "stuck vertex {s} (side {}), {} vertices missing {i}, free cross degree {}, e(R_A) = {ra}, e(R_B) = {rb}",
                    if in_a[s] { "A" } else { "B" },
                    miss.len(),
                    w.at[s].iter().filter(|&&e| w.free_cross(e)).count()
                ),
            ));
        }
        if !w.is_perfect_class(i) {
            return Err(fail("extend-to-one-factors", format!("class {i} is not a perfect matching"), ""));
        }
    }
    let ra = w.residual_edges(Role::InA);
    let rb = w.residual_edges(Role::InB);
    let deg = |es: &[usize]| {
        let mut d = vec![0; w.h.vertex_count()];
        for &e in es {
            d[w.ends[e].0] += 1;
            d[w.ends[e].1] += 1;
        }
        d.into_iter().max().unwrap_or(0)
    };
    let (da, db) = (deg(&ra), deg(&rb));
    rec.metric("direct-edges", direct);
    rec.metric("alternating-paths", paths);
    rec.metric("relaxed-paths", relaxed);
    rec.metric("rescued-classes", rescued);
    rec.metric("e(R_A)", ra.len());
    rec.metric("e(R_B)", rb.len());
    rec.audits.push(audit("parity of missing sets", parity_ok, String::new()));
    rec.audits.push(audit("e(R_A) = e(R_B)", ra.len() == rb.len(), format!("{} vs {}", ra.len(), rb.len())));
    rec.audits.push(audit(
        "S3.1 residual size",
        ra.len() < params.residual_cap.max(1),
        format!("e(R_A) = {}, cap {}", ra.len(), params.residual_cap),
    ));
    rec.audits.push(audit(
        "S3.2 residual degree",
        da < params.degree_cap && db < params.degree_cap,
        format!("Δ(R_A) = {da}, Δ(R_B) = {db}, cap {}", params.degree_cap),
    ));
    rec.audits.push(audit(
        "residual edges per exchange",
        worst_internal <= params.per_exchange_cap,
        format!("at most {worst_internal} per path, cap {}", params.per_exchange_cap),
    ));
    if relaxed > 0 {
        rec.fallbacks.push(format!("{relaxed} paths used edges at U_A ∪ U_B"));
    }
    if rescued > 0 {
        rec.fallbacks.push(format!("{rescued} classes completed by general matching"));
    }
    if ra.len() != rb.len() {
        return Err(fail(
            "extend-to-one-factors",
            "e(R_A) = e(R_B)",
            format!("e(R_A) = {}, e(R_B) = {}", ra.len(), rb.len()),
        ));
    }
    Ok(ResidualPair {
        r_a: ra.iter().map(|&e| w.inst[e]).collect(),
        r_b: rb.iter().map(|&e| w.inst[e]).collect(),
        max_degree_a: da,
        max_degree_b: db,
    })
}

fn layer(w: &Work, es: &[usize]) -> (Multigraph, Vec<usize>) {
    let mut g = Multigraph::new(w.h.vertex_count());
    for &e in es {
        g.add_edge(w.ends[e].0, w.ends[e].1).expect("edge of G₃");
    }
    // edge instances of g come out in the same order as `es` sorted by pair
    let mut ids = es.to_vec();
    ids.sort_by_key(|&e| w.ends[e]);
    (g, ids)
}

fn equalized_layer(g: &Multigraph, l2: usize) -> std::result::Result<EdgeColoring, StepFailure> {
    let mut c = color_vizing_bound(g).map_err(|e| from_err("color-residual", e))?;
    c.set_palette(l2).map_err(|e| from_err("color-residual", e))?;
    equalize(g, &c).map_err(|e| from_err("color-residual", e))
}

/// Step 4: colors `R_A ∪ R_B` with `ℓ` fresh colors and extends each of
/// them to a perfect matching with uncolored cross edges.
pub fn color_residual(
    w: &mut Work,
    lay: &Layout,
    in_a: &[bool],
    params: &mut DecompositionParams,
    rec: &mut StepRecord,
) -> std::result::Result<(), StepFailure> {
    let k = params.k;
    let ra = w.residual_edges(Role::InA);
    let rb = w.residual_edges(Role::InB);
    let special: Vec<usize> = if lay.marker {
        Vec::new()
    } else {
        [lay.v(2), lay.v(lay.p)].into_iter().flatten().filter(|&v| !in_a[v]).collect()
    };
    let f: Vec<usize> = rb
        .iter()
        .copied()
        .filter(|&e| special.contains(&w.ends[e].0) || special.contains(&w.ends[e].1))
        .collect();
    let l1 = f.len();
    let rest_b: Vec<usize> = rb.iter().copied().filter(|e| !f.contains(e)).collect();
    let rest_a: Vec<usize> = ra[l1.min(ra.len())..].to_vec();
    let union: Vec<usize> = rest_a.iter().chain(&rest_b).copied().collect();
    let (ug, _) = layer(w, &union);
    let l2 = if union.is_empty() { 0 } else { ug.max_degree() + ug.max_multiplicity() };
    params.l1 = l1;
    params.l2 = l2;
    params.l = l1 + l2;
    rec.metric("l1", l1);
    rec.metric("l2", l2);
    if k + l1 + l2 > params.delta {
        return Err(fail(
            "color-residual",
            "k + ℓ ≤ Δ",
            format!("k = {k}, ℓ₁ = {l1}, ℓ₂ = {l2}, Δ = {}", params.delta),
        ));
    }
    if ra.len() < l1 {
        return Err(fail("color-residual", "e(R_A) ≥ |F|", format!("e(R_A) = {}, |F| = {l1}", ra.len())));
    }
    let mut extended = 0;
    for (j, &e) in f.iter().enumerate() {
        let c = k + j + 1;
        w.set_color(e, c);
        w.set_color(ra[j], c);
        extended += w.extend_by_cross_matching(c, in_a)?;
    }
    if l2 > 0 {
        let (ga, ida) = layer(w, &rest_a);
        let (gb, idb) = layer(w, &rest_b);
        let ca = equalized_layer(&ga, l2)?;
        let cb = equalized_layer(&gb, l2)?;
        let order = |c: &EdgeColoring| {
            let sizes = c.class_sizes();
            let mut o: Vec<usize> = (1..=l2).collect();
            o.sort_by_key(|&x| (sizes[x - 1], x));
            o
        };
        let (oa, ob) = (order(&ca), order(&cb));
        let sizes_match = oa.iter().zip(&ob).all(|(&x, &y)| ca.class_sizes()[x - 1] == cb.class_sizes()[y - 1]);
        rec.audits.push(audit("class sizes agree between R_A and R_B", sizes_match, String::new()));
        if !sizes_match {
            return Err(fail("color-residual", "equal class sizes in R_A and R_B", ""));
        }
        let mut target_a = vec![0; l2 + 1];
        let mut target_b = vec![0; l2 + 1];
        for t in 0..l2 {
            target_a[oa[t]] = k + l1 + t + 1;
            target_b[ob[t]] = k + l1 + t + 1;
        }
        for (idx, &e) in ida.iter().enumerate() {
            w.set_color(e, target_a[ca.colors()[idx]]);
        }
        for (idx, &e) in idb.iter().enumerate() {
            w.set_color(e, target_b[cb.colors()[idx]]);
        }
        for c in k + l1 + 1..=k + l1 + l2 {
            extended += w.extend_by_cross_matching(c, in_a)?;
        }
    }
    rec.metric("cross-edges-added", extended);
    if let (false, Some(a), Some(b), Some(c)) = (lay.marker, lay.v(lay.p.wrapping_sub(1)), lay.v(lay.p), lay.v(lay.p + 1)) {
        let in_r = (0..w.ends.len())
            .filter(|&e| w.color[e] > k && w.color[e] <= k + l1 + l2)
            .filter(|&e| {
                let (u, v) = w.ends[e];
                [a, b, c].contains(&u) && [a, b, c].contains(&v)
            })
            .count();
        rec.audits.push(audit(
            "e(R[{v_{p−1}, v_p, v_{p+1}}]) ≤ Δ(R)",
            in_r <= l2.max(l1),
            format!("{in_r} edges"),
        ));
    }
    for c in k + 1..=k + l1 + l2 {
        if !w.is_perfect_class(c) {
            return Err(fail("color-residual", format!("class {c} is not a perfect matching"), ""));
        }
    }
    Ok(())
}

/// Step 5: colors the remaining cross edges and `E1` with `Δ − k − ℓ` colors.
pub fn finish_nearly_bipartite(
    w: &mut Work,
    params: &DecompositionParams,
    rec: &mut StepRecord,
) -> std::result::Result<(), StepFailure> {
    let first = params.k + params.l;
    let left: Vec<usize> = (0..w.ends.len()).filter(|&e| w.color[e] == UNCOLORED).collect();
    if left.iter().any(|&e| w.is_residual(e)) {
        return Err(fail("finish", "R_A ∪ R_B fully colored", "residual edges remain"));
    }
    let (r, ids) = layer(w, &left);
    let want = params.delta - first;
    let off: Vec<usize> = (0..r.vertex_count()).filter(|&v| r.degree(v) != want).collect();
    rec.metric("e(R*)", r.edge_count());
    rec.metric("Δ(R*)", r.max_degree());
    rec.audits.push(audit(
        "R* is (Δ − k − ℓ)-regular off v_p, v_{p+1}",
        off.len() <= 2,
        format!("{} vertices off degree {want}", off.len()),
    ));
    if r.max_degree() > want {
        return Err(fail("finish", "Δ(R*) ≤ Δ − k − ℓ", format!("Δ(R*) = {}, Δ − k − ℓ = {want}", r.max_degree())));
    }
    if r.edge_count() == 0 {
        return Ok(());
    }
    let c = if r.is_bipartite() {
        color_bipartite_konig(&r).map_err(|e| from_err("finish", e))?
    } else {
        rec.metric("nearly-bipartite", 1);
        match color_nearly_bipartite(&r) {
            Ok(NearlyBipartiteOutcome::Colored(c)) => c,
            Ok(NearlyBipartiteOutcome::Overfull(cert)) => {
                let mut f = fail("finish", "R* has no Δ(R*)-overfull subgraph", format!("{cert:?}"));
                f.certificate = Some(cert);
                return Err(f);
            }
            Err(e) => return Err(from_err("finish", e)),
        }
    };
    for (idx, &e) in ids.iter().enumerate() {
        w.set_color(e, first + c.colors()[idx]);
    }
    Ok(())
}

/// Fallback completion: keeps the perfect matchings `1..=j` for the largest
/// `j ≤ kept` that works and colors all other edges with `Δ − j` colors by
/// fan and Kempe recoloring. Returns `j`.
fn rescue_finish(
    w: &mut Work,
    params: &mut DecompositionParams,
    kept: usize,
    rec: &mut StepRecord,
) -> std::result::Result<usize, StepFailure> {
    params.l1 = 0;
    params.l2 = 0;
    params.l = 0;
    let mut tried = 0;
    for j in (0..=kept).rev() {
        for e in 0..w.ends.len() {
            if w.color[e] > j {
                w.set_color(e, UNCOLORED);
            }
        }
        let left: Vec<usize> = (0..w.ends.len()).filter(|&e| w.color[e] == UNCOLORED).collect();
        let (r, ids) = layer(w, &left);
        let want = params.delta - j;
        if r.max_degree() > want {
            continue;
        }
        tried += 1;
        let c = if r.edge_count() == 0 {
            None
        } else if r.is_bipartite() {
            Some(color_bipartite_konig(&r).map_err(|e| from_err("rescue-finish", e))?)
        } else if let Some(c) = color_with_palette(&r, want) {
            Some(c)
        } else if r.edge_count() <= GAB_EXACT_EDGES {
            match try_color_exact(&r, want, DEFAULT_NODE_LIMIT).map_err(|e| from_err("rescue-finish", e))? {
                Some(c) => Some(c),
                None => continue,
            }
        } else {
            continue;
        };
        if let Some(c) = c {
            for (idx, &e) in ids.iter().enumerate() {
                w.set_color(e, j + c.colors()[idx]);
            }
        }
        rec.metric("kept-classes", j);
        rec.metric("edges", r.edge_count());
        rec.metric("colors", want);
        return Ok(j);
    }
    Err(fail(
        "rescue-finish",
        "some j ≤ k leaves a rest colorable with Δ − j colors",
        format!("{tried} of {} values of j tried", kept + 1),
    ))
}

/// The coloring of `G₃ − F₁` read back on the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub coloring: EdgeColoring,
    /// Input edges with no counterpart in `G₃ − F₁`; under rescue they are
    /// colored afterwards by recoloring.
    pub missing: Vec<(usize, usize)>,
    pub proper: bool,
    pub colors_used: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Complete {
        /// `G₃ − F₁`, the graph the coloring lives on.
        graph: Multigraph,
        coloring: EdgeColoring,
        restriction: Restriction,
    },
    Failed(StepFailure),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub g3_vertices: usize,
    pub delta: usize,
    pub layer_source: Option<LayerSource>,
    pub identifications: usize,
    pub params: Option<DecompositionParams>,
    pub partition: Option<Partition>,
    pub special_sets: Option<SpecialEdgeSets>,
    pub steps: Vec<StepRecord>,
    /// Failures of earlier attempts that a rescue attempt replaced.
    pub rescued_failures: Vec<StepFailure>,
    pub fallbacks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    pub outcome: Outcome,
    pub trace: Trace,
}

impl DecompositionResult {
    pub fn is_complete(&self) -> bool {
        matches!(self.outcome, Outcome::Complete { .. })
    }

    fn failed(f: StepFailure, trace: Trace) -> Self {
        DecompositionResult { outcome: Outcome::Failed(f), trace }
    }
}

/// Checks a finished coloring: total, proper, palette `Δ`, and classes
/// `1..=k+ℓ` perfect matchings.
pub fn verify_decomposition(h: &Multigraph, c: &EdgeColoring, delta: usize, matched: usize) -> Result<Vec<NamedCheck>> {
    let proper = check_proper(h, c)?;
    let mut cover = vec![vec![0usize; h.vertex_count()]; matched + 1];
    for (e, &col) in c.edges().iter().zip(c.colors()) {
        if (1..=matched).contains(&col) {
            cover[col][e.u] += 1;
            cover[col][e.v] += 1;
        }
    }
    let perfect = (1..=matched).all(|col| cover[col].iter().all(|&x| x == 1));
    Ok(vec![
        audit("total", c.is_total(), format!("{} of {}", c.colored_count(), c.edges().len())),
        audit("proper", proper.proper, format!("{:?}", proper.conflict)),
        audit(
            "exactly Δ colors",
            c.palette() == delta && (c.colors_used() == delta || h.max_degree() < delta),
            format!("{} used", c.colors_used()),
        ),
        audit("classes 1..k+ℓ perfect", perfect, format!("{matched} classes")),
    ])
}

fn restrict(g: &Multigraph, state: &PipelineState, h: &Multigraph, c: &EdgeColoring) -> Result<Restriction> {
    let mut out = EdgeColoring::uncolored(g, state.delta);
    let mut used: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut missing = Vec::new();
    for (idx, e) in g.edge_instances().iter().enumerate() {
        let (a, b) = (state.merged_into[e.u], state.merged_into[e.v]);
        let key = (a.min(b), a.max(b));
        let t = used.entry(key).or_insert(0);
        if a == b || *t >= h.multiplicity(a, b) {
            missing.push((e.u, e.v));
            continue;
        }
        let col = c.color_of(er(a, b, *t)).expect("copy exists");
        *t += 1;
        out.set(idx, col)?;
    }
    let proper = check_proper(g, &out)?.proper;
    let colors_used = out.colors_used();
    Ok(Restriction { coloring: out, missing, proper, colors_used })
}

/// Smallest `k ≥ Δ(G_{A,B}) + √((Δ(G_{A,B})−1)/2)` that is also at least the density.
fn clamped_k(gab: &Multigraph) -> usize {
    let d = gab.max_degree();
    // ⌈√((d−1)/2)⌉ as the smallest s with 2s² ≥ d − 1
    let mut s = 0;
    while 2 * s * s < d.saturating_sub(1) {
        s += 1;
    }
    let mut k = d + s;
    if gab.vertex_count() >= 3 {
        if let Ok(r) = density_rho(gab) {
            k = k.max(r.value.ceil().to_integer());
        }
    }
    k
}

fn attempt(
    g3: &Multigraph,
    lay: &Layout,
    part: &Partition,
    params: &mut DecompositionParams,
    sets: &SpecialEdgeSets,
    gab: &Multigraph,
    rescue: bool,
    trace: &mut Trace,
) -> std::result::Result<(Multigraph, EdgeColoring), StepFailure> {
    let k = params.k;
    let mut rec = StepRecord::new("color-gab");
    rec.metric("k", k);
    rec.metric("Δ(G_AB)", gab.max_degree());
    let phi0 = color_gab(gab, k).map_err(|e| from_err("color-gab", e))?;
    let n = g3.vertex_count();
    let worst_missing = (1..=k)
        .map(|c| n - 2 * phi0.class_sizes()[c - 1])
        .max()
        .unwrap_or(0);
    rec.audits.push(audit(
        "missing vertices per class < 9ηn − 2",
        worst_missing < params.missing_cap.max(1),
        format!("worst {worst_missing}, bound {}", params.missing_cap),
    ));
    trace.steps.push(rec);

    let mut avoid = vec![false; n];
    for &v in &lay.u_star {
        avoid[v] = true;
    }
    if let Some(u) = lay.u_next() {
        avoid[u] = true;
    }
    let mut w = Work::new(g3, part, sets, avoid).map_err(|e| from_err("extend-to-one-factors", e))?;
    for (e, &c) in phi0.edges().iter().zip(phi0.colors()) {
        let idx = w.index(*e);
        w.set_color(idx, c);
    }
    let mut rec = StepRecord::new("extend-to-one-factors");
    let mut res = extend_to_one_factors(&mut w, &part.in_a, params, rescue, &mut rec).map(|_| ());
    trace.steps.push(rec);
    if res.is_ok() {
        let mut rec = StepRecord::new("color-residual");
        res = color_residual(&mut w, lay, &part.in_a, params, &mut rec);
        trace.steps.push(rec);
    }
    if res.is_ok() {
        let mut rec = StepRecord::new("finish");
        res = finish_nearly_bipartite(&mut w, params, &mut rec);
        trace.steps.push(rec);
    }
    if let Err(f) = res {
        if !rescue {
            return Err(f);
        }
        let kept = (1..=params.k).take_while(|&c| w.is_perfect_class(c)).count();
        let mut rec = StepRecord::new("rescue-finish");
        let out = rescue_finish(&mut w, params, kept, &mut rec);
        trace.steps.push(rec);
        let Ok(j) = out else { return Err(f) };
        trace.fallbacks.push(format!(
            "{} at {} replaced by recoloring everything outside classes 1..{j} (k was {})",
            f.condition, f.step, params.k
        ));
        params.k = j;
        trace.rescued_failures.push(f);
    }
    let c = EdgeColoring::from_colors(&w.h, params.delta, w.color.clone()).map_err(|e| from_err("finish", e))?;
    Ok((w.h, c))
}

/// Regularizes `g`, then decomposes `G₃`. Stage failures are reported in the
/// result; only an unusable `η` is an error.
pub fn run_pipeline(g: &Multigraph, eta: Ratio<usize>, seed: u64, rescue: bool) -> Result<DecompositionResult> {
    if *eta.numer() == 0 {
        return input("η must be positive");
    }
    let mut trace = Trace::default();
    let mut state = match regularize(g, rescue) {
        Ok(s) => s,
        Err(e @ (Error::Domain(_) | Error::Internal(_))) => {
            return Ok(DecompositionResult::failed(from_err("regularize", e), trace));
        }
        Err(e) => return Err(e),
    };
    if state.source == LayerSource::Fallback {
        trace.fallbacks.push("deficiencies realized greedily; G₁ is regular without identification".into());
    }
    annotate_u(&mut state, eta, g.vertex_count());
    let g3 = state.g3()?.clone();
    trace.g3_vertices = g3.vertex_count();
    trace.delta = state.delta;
    trace.layer_source = Some(state.source);
    trace.identifications = state.identification_log.len();
    let lay = match layout(&state, rescue) {
        Ok(l) => l,
        Err(e) => return Ok(DecompositionResult::failed(from_err("partition", e), trace)),
    };
    let mut params = compute_params(&state, &lay, eta)?;

    let mut rec = StepRecord::new("partition");
    if !lay.unpartnered.is_empty() {
        trace.fallbacks.push(format!("positions {:?} left without a maximum-degree partner", lay.unpartnered));
    }
    let drawn = match random_balanced_partition(&g3, &lay.pairs, params.tolerance, seed) {
        Err(Error::Resource(why)) if rescue => {
            trace.fallbacks.push(format!("balance tolerance dropped: {why}"));
            random_balanced_partition(&g3, &lay.pairs, usize::MAX, seed)
        }
        other => other,
    };
    let part = match drawn {
        Ok(p) => p,
        Err(e) => {
            trace.steps.push(rec);
            trace.params = Some(params);
            return Ok(DecompositionResult::failed(from_err("partition", e), trace));
        }
    };
    let part = partition_modification(part, &g3, &lay.required)?;
    rec.metric("swaps", part.swaps);
    rec.metric("imbalance", part.imbalance);
    rec.audits.push(audit(
        "balance after modification",
        part.imbalance <= params.modified_tolerance,
        format!("{} ≤ {}", part.imbalance, params.modified_tolerance),
    ));
    trace.steps.push(rec);
    trace.partition = Some(part.clone());

    let mut rec = StepRecord::new("special-edge-sets");
    let sets = match select_special_edge_sets(&g3, &lay, &part, &params) {
        Ok(s) => s,
        Err(e) if rescue => {
            trace.fallbacks.push(format!("special edge sets left empty: {e}"));
            SpecialEdgeSets::default()
        }
        Err(e) => {
            trace.steps.push(rec);
            trace.params = Some(params);
            return Ok(DecompositionResult::failed(from_err("special-edge-sets", e), trace));
        }
    };
    let gab = form_gab(&g3, &lay, &part, &sets)?;
    let (ea, eb) = (gab.edges_within(&part.a), gab.edges_within(&part.b));
    rec.audits.push(audit(
        "e(G_AB[A]) = e(G_AB[B]) + |F21| + |F22|",
        ea == eb + sets.f21.len() + sets.f22.len(),
        format!("{ea} vs {eb} + {} + {}", sets.f21.len(), sets.f22.len()),
    ));
    let nn = Ratio::from_integer(g3.vertex_count());
    let eta_n = eta * nn;
    let half = Ratio::new(state.delta, 2);
    let out_of_window = (0..g3.vertex_count())
        .filter(|v| !lay.u_star.contains(v))
        .filter(|&v| {
            let d = Ratio::from_integer(gab.degree(v));
            d + Ratio::new(36, 10) * eta_n < half || d > half + Ratio::new(51, 10) * eta_n
        })
        .count();
    rec.audits.push(audit("degree window of G_AB off U*", out_of_window == 0, format!("{out_of_window} outside")));
    rec.metric("|E1|", sets.e1.len());
    rec.metric("|F21|", sets.f21.len());
    rec.metric("e(G_AB)", gab.edge_count());
    trace.steps.push(rec);
    trace.special_sets = Some(sets.clone());

    let mut ks = vec![params.k];
    if rescue {
        let kr = clamped_k(&gab).min(state.delta);
        if kr != params.k {
            ks.push(kr);
        }
    }
    let mut last = None;
    for (round, &k) in ks.iter().enumerate() {
        params.k = k;
        if round > 0 {
            trace.fallbacks.push(format!("retried with k = {k} in place of {}", params.k_formula));
        }
        if k > state.delta {
            let f = fail("color-gab", "k ≤ Δ", format!("k = {k}, Δ = {}", state.delta));
            if let Some(prev) = last.replace(f) {
                trace.rescued_failures.push(prev);
            }
            continue;
        }
        match attempt(&g3, &lay, &part, &mut params, &sets, &gab, rescue, &mut trace) {
            Ok((h, c)) => {
                let checks = verify_decomposition(&h, &c, state.delta, params.k + params.l)?;
                if let Some(bad) = checks.iter().find(|c| !c.pass) {
                    return Err(Error::Internal(format!("finished coloring fails '{}': {}", bad.name, bad.detail)));
                }
                let mut rec = StepRecord::new("verify");
                rec.audits = checks;
                trace.steps.push(rec);
                if round > 0 {
                    trace.rescued_failures.extend(last.take());
                }
                let mut restriction = restrict(g, &state, &h, &c)?;
                if !restriction.missing.is_empty() {
                    let lost = format!("{:?}", restriction.missing);
                    let done = if rescue { complete_coloring(g, &restriction.coloring)? } else { None };
                    let Some(full) = done else {
                        trace.params = Some(params);
                        return Ok(DecompositionResult::failed(
                            fail("restrict", "identified vertices are independent in G₀", format!("input edges lost: {lost}")),
                            trace,
                        ));
                    };
                    trace.fallbacks.push(format!("input edges lost in identification recolored: {lost}"));
                    restriction.proper = check_proper(g, &full)?.proper;
                    restriction.colors_used = full.colors_used();
                    restriction.coloring = full;
                }
                trace.params = Some(params);
                return Ok(DecompositionResult {
                    outcome: Outcome::Complete { graph: h, coloring: c, restriction },
                    trace,
                });
            }
            Err(f) => {
                if let Some(prev) = last.replace(f) {
                    trace.rescued_failures.push(prev);
                }
            }
        }
    }
    trace.params = Some(params);
    Ok(DecompositionResult::failed(last.expect("at least one attempt"), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle};

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("0.05").unwrap(), Ratio::new(1, 20));
        assert_eq!(parse_fraction("1/24").unwrap(), Ratio::new(1, 24));
        assert_eq!(parse_fraction("2").unwrap(), Ratio::from_integer(2));
        assert!(parse_fraction("x").is_err());
        assert_eq!(floor_two_thirds(8), 4);
        assert_eq!(floor_two_thirds(27), 9);
        assert_eq!(ceil_sqrt(17), 5);
        assert_eq!(ceil_sqrt(16), 4);
    }

    #[test]
    fn partition_examples() {
        let k6 = complete(6);
        let p = random_balanced_partition(&k6, &[(0, 1), (2, 3), (4, 5)], 2, 1).unwrap();
        assert_eq!(p.a.len(), 3);
        assert!(p.partner_pairs.iter().all(|&(x, y)| p.in_a[x] != p.in_a[y]));
        assert!(matches!(random_balanced_partition(&k6, &[], 0, 1), Err(Error::Resource(_))));
        let c6 = cycle(6).unwrap();
        assert!(random_balanced_partition(&c6, &[(0, 3)], 2, 7).is_ok());
    }

    #[test]
    fn modification_swaps() {
        let k6 = complete(6);
        let p = random_balanced_partition(&k6, &[(0, 1), (2, 3), (4, 5)], 2, 3).unwrap();
        let want = [(0, 1), (2, 3), (4, 5)];
        let wrong = want.iter().filter(|&&(x, _)| !p.in_a[x]).count();
        let q = partition_modification(p, &k6, &want).unwrap();
        assert_eq!(q.swaps, wrong);
        assert!(want.iter().all(|&(x, y)| q.in_a[x] && !q.in_a[y]));
        assert!(partition_modification(q, &k6, &[(0, 2)]).is_err());
    }

    #[test]
    fn params_arithmetic() {
        // Δ = 100, n = 110, η = 1/100
        let g = crate::degree_seq::build_regular_circulant(110, 100).unwrap();
        let s = regularize(&g, false).unwrap();
        let lay = layout(&s, false).unwrap();
        let p = compute_params(&s, &lay, Ratio::new(1, 100)).unwrap();
        assert_eq!((p.delta_prime, p.k), (56, 64));
        assert_eq!(p.e_p, 0);
        assert!(compute_params(&s, &lay, Ratio::new(1, 1000)).is_err());
    }

    #[test]
    fn k6_end_to_end() {
        let r = run_pipeline(&complete(6), Ratio::new(1, 6), 1, true).unwrap();
        match &r.outcome {
            Outcome::Complete { coloring, restriction, .. } => {
                assert_eq!(coloring.colors_used(), 5);
                assert!(restriction.proper && restriction.missing.is_empty());
            }
            Outcome::Failed(f) => panic!("{f:?}"),
        }
    }
}
