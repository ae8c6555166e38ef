//! Regular supergraphs: the `W`-vertex constructions for dense inputs and the
//! `G → G₀ → G₁ → G₂ → G₃` regularization chain.

use num_rational::Ratio;
use serde::Serialize;

use crate::degree_seq::{
    build_regular_circulant, realize_admissible_bipartite, realize_near_regular, verify_lemma24,
    DegreeSequence, RealizationVerdict,
};
use crate::error::{domain, Error, Result};
use crate::matching::general_maximum_matching;
use crate::multigraph::Multigraph;
use crate::overfull::{
    find_delta_overfull_subgraph, robust_expander_check, ExpanderMode, ExpanderVerdict, OverfullCertificate,
};

/// A named inequality evaluated on a concrete instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl NamedCheck {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        NamedCheck { name: name.into(), pass, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentedGraph {
    pub graph: Multigraph,
    /// The input occupies vertices `0..original_vertices`.
    pub original_vertices: usize,
    /// Added vertices, `original_vertices..`.
    pub w: Vec<usize>,
    pub checks: Vec<NamedCheck>,
    pub expander: Option<ExpanderVerdict>,
}

impl AugmentedGraph {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.expander.as_ref().is_none_or(|e| e.pass())
    }
}

fn floor_nonneg(x: Ratio<usize>) -> usize {
    x.floor().to_integer()
}

/// Adds `df(G)` edges from deficient vertices to `W`, listed vertex by vertex,
/// the `i`-th landing on `w_i` (indices mod `|W|`).
fn attach_deficiencies(h: &mut Multigraph, g: &Multigraph, w: &[usize], wrap_last: bool) -> Result<()> {
    let delta = g.max_degree();
    let total = g.total_deficiency()?;
    let size = w.len();
    let mut i = 0;
    for v in 0..g.vertex_count() {
        for _ in 0..delta - g.degree(v) {
            i += 1;
            let target = if wrap_last && i == total && total % size == size - 1 { 0 } else { (i - 1) % size };
            h.add_edge(v, w[target])?;
        }
    }
    Ok(())
}

fn with_w(g: &Multigraph, size: usize) -> (Multigraph, Vec<usize>) {
    let n = g.vertex_count();
    let mut h = g.clone();
    for _ in 0..size {
        h.add_vertex();
    }
    (h, (n..n + size).collect())
}

/// Supergraph with `|W| ∈ {⌊2Δ − n − η²n⌋, that − 1}` new vertices, a
/// `d`-regular circulant on `W`, and the deficiency edges spread over `W`.
pub fn build_case_a1_supergraph(g: &Multigraph, eta: Ratio<usize>) -> Result<AugmentedGraph> {
    let n = g.vertex_count();
    if n == 0 {
        return domain("empty graph");
    }
    let delta = g.max_degree();
    let base = Ratio::from_integer(2 * delta);
    let sub = Ratio::from_integer(n) + eta * eta * Ratio::from_integer(n);
    if base < sub + Ratio::from_integer(1) {
        return domain(format!("2Δ − n − η²n = {} − {} leaves no room for W", base, sub));
    }
    let top = floor_nonneg(base - sub);
    let size = if top % 2 == n % 2 { top } else { top - 1 };
    let df = g.total_deficiency()?;
    if size < 3 {
        return domain(format!("|W| = {size} < 3"));
    }
    let x = Ratio::from_integer(delta) - Ratio::new(df, size);
    if x < Ratio::from_integer(4) {
        return domain(format!("⌊Δ − df/|W|⌋ = {} gives d < 2", x.floor()));
    }
    let fl = floor_nonneg(x);
    let d = if (fl - 3) % 2 == 0 { fl - 3 } else { fl - 2 };
    if d >= size {
        return domain(format!("d = {d} ≥ |W| = {size}"));
    }
    let max_df = (0..n).map(|v| delta - g.degree(v)).max().unwrap_or(0);
    if max_df + 2 > size {
        return domain(format!("max df(v) = {max_df} > |W| − 2 = {}", size - 2));
    }
    let (mut h, w) = with_w(g, size);
    let circ = build_regular_circulant(size, d)?;
    for (a, b, k) in circ.pairs() {
        h.add_edges(w[a], w[b], k)?;
    }
    attach_deficiencies(&mut h, g, &w, true)?;

    let mut checks = Vec::new();
    checks.push(NamedCheck::new("simple", h.is_simple(), format!("μ(H) = {}", h.max_multiplicity())));
    checks.push(NamedCheck::new(
        "Δ preserved",
        h.max_degree() == delta,
        format!("Δ(H) = {}, Δ(G) = {delta}", h.max_degree()),
    ));
    let originals_full = (0..n).all(|v| h.degree(v) == delta);
    checks.push(NamedCheck::new("original vertices reach Δ", originals_full, String::new()));
    let (lo, hi) = w.iter().fold((usize::MAX, 0), |(lo, hi), &v| (lo.min(h.degree(v)), hi.max(h.degree(v))));
    checks.push(NamedCheck::new(
        "W degrees in [Δ−4, Δ]",
        lo + 4 >= delta && hi <= delta,
        format!("W degrees span [{lo}, {hi}]"),
    ));
    let min = h.min_degree();
    let at_min = h.degrees().iter().filter(|&&x| x == min).count();
    checks.push(NamedCheck::new(
        "at least two minimum-degree vertices",
        at_min >= 2,
        format!("{at_min} vertices of degree {min}"),
    ));
    checks.push(NamedCheck::new(
        "(δ + |W| − 2) − Δ ≥ 0",
        g.min_degree() + size >= delta + 2,
        format!("δ = {}, |W| = {size}, Δ = {delta}", g.min_degree()),
    ));
    checks.push(NamedCheck::new("even order", h.vertex_count() % 2 == 0, format!("|V(H)| = {}", h.vertex_count())));
    Ok(AugmentedGraph { graph: h, original_vertices: n, w, checks, expander: None })
}

/// Removes a maximum matching that covers every vertex, or all but one
/// minimum-degree vertex when `n` is odd, lowering `Δ` by one.
pub fn strip_saturating_matching(g: &Multigraph) -> Result<Multigraph> {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.pairs().map(|(u, v, _)| (u, v)).collect();
    let mate = general_maximum_matching(n, &edges);
    let free: Vec<usize> = (0..n).filter(|&v| mate[v].is_none()).collect();
    let ok = match free.as_slice() {
        [] => true,
        [v] => g.degree(*v) == g.min_degree(),
        _ => false,
    };
    if !ok {
        return domain(format!("no matching saturates the required vertices; {} left uncovered", free.len()));
    }
    let mut h = g.clone();
    for v in 0..n {
        if let Some(u) = mate[v] {
            if v < u {
                h.remove_edge(v, u)?;
            }
        }
    }
    Ok(h)
}

/// `Δ`-regular simple supergraph on `n + |W|` vertices for `Δ` even and
/// `df(G) > Δ + 1`; the graph on `W` is a near-regular realization.
pub fn build_case_a2_supergraph(g: &Multigraph, eta: Ratio<usize>) -> Result<AugmentedGraph> {
    let n = g.vertex_count();
    if n == 0 {
        return domain("empty graph");
    }
    let delta = g.max_degree();
    if delta % 2 == 1 {
        return domain(format!("Δ = {delta} is odd; strip a saturating matching first"));
    }
    let df = g.total_deficiency()?;
    if df <= delta + 1 {
        return domain(format!("df(G) = {df} ≤ Δ + 1 = {}", delta + 1));
    }
    let start = delta.div_ceil(2).max(1);
    let size = (start..=delta + 1)
        .filter(|s| s % 2 == n % 2)
        .find(|&s| s + df.div_ceil(s) >= delta + 2)
        .ok_or_else(|| Error::Domain("no |W| ≤ Δ + 1 satisfies both size conditions".into()))?;
    let q = df / size;
    let l = df % size;
    let d = delta - q;
    if d < 2 {
        return domain(format!("R-degree Δ − ⌊df/|W|⌋ = {d} < 2"));
    }
    if size < d + 1 {
        return domain(format!("|W| = {size} < d + 1 = {}", d + 1));
    }
    let max_df = (0..n).map(|v| delta - g.degree(v)).max().unwrap_or(0);
    if max_df > size {
        return domain(format!("max df(v) = {max_df} > |W| = {size}"));
    }
    // vertices 0..size-l of the realization carry degree d; rotate them past the first l slots
    let r = realize_near_regular(size, d, size - l)?;
    let (mut h, w) = with_w(g, size);
    for (a, b, k) in r.pairs() {
        h.add_edges(w[(a + l) % size], w[(b + l) % size], k)?;
    }
    attach_deficiencies(&mut h, g, &w, false)?;

    let mut checks = Vec::new();
    checks.push(NamedCheck::new("simple", h.is_simple(), format!("μ(H) = {}", h.max_multiplicity())));
    checks.push(NamedCheck::new(
        "Δ-regular",
        h.is_regular() && h.max_degree() == delta,
        format!("degrees span [{}, {}]", h.min_degree(), h.max_degree()),
    ));
    checks.push(NamedCheck::new(
        "|W| ≥ 5Δ/6",
        6 * size >= 5 * delta,
        format!("|W| = {size}, Δ = {delta}"),
    ));
    checks.push(NamedCheck::new(
        "δ + |W| ≥ Δ",
        g.min_degree() + size >= delta,
        format!("δ = {}, |W| = {size}", g.min_degree()),
    ));
    let expander = if h.vertex_count() <= crate::overfull::EXPANDER_CAP {
        Some(robust_expander_check(&h, eta * eta, eta, ExpanderMode::Exhaustive)?)
    } else {
        None
    };
    Ok(AugmentedGraph { graph: h, original_vertices: n, w, checks, expander })
}

/// `G` itself when `n` is even, otherwise `G` plus one isolated vertex.
pub fn build_g0(g: &Multigraph) -> Multigraph {
    let mut h = g.clone();
    if h.vertex_count() % 2 == 1 {
        h.add_vertex();
    }
    h
}

/// How the layer `L` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerSource {
    /// The split bipartite realization with index `p`.
    Split,
    /// Greedy multigraph realization of the deficiencies; `G₁` is already regular.
    Fallback,
}

/// One round of merging `v_p` and `v_{p+1}` into `v_{p−1}`, in `G₀` labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub triple: [usize; 3],
    pub survivor: usize,
    pub outgoing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineState {
    pub delta: usize,
    /// Vertices of the input graph; `g0` may add one.
    pub input_vertices: usize,
    pub g0: Multigraph,
    pub g1: Multigraph,
    pub g2: Option<Multigraph>,
    pub g3: Option<Multigraph>,
    /// `v_1, …, v_m` as `G₀` vertices, degrees non-decreasing.
    pub deficiency_order: Vec<usize>,
    /// `df_{G₀}(v_i)` by position.
    pub deficiencies: Vec<usize>,
    /// Split index as produced by the realization.
    pub p_initial: usize,
    /// Split index after identification.
    pub p: usize,
    /// No `v_{p+1}`: every deficient vertex sits in a pair.
    pub marker: bool,
    pub g_idx: usize,
    pub h_idx: usize,
    pub u: Vec<usize>,
    pub u_star: Vec<usize>,
    pub l: Multigraph,
    pub l_star: Option<Multigraph>,
    pub source: LayerSource,
    pub realization: Option<RealizationVerdict>,
    pub identification_log: Vec<Identification>,
    /// Positions of `G₂`/`G₃`: `current[i]` is the vertex playing `v_{i+1}`.
    pub current: Vec<usize>,
    /// `G₂`/`G₃` vertex → `G₀` label.
    pub labels: Vec<usize>,
    /// `G₀` vertex → the `G₂`/`G₃` vertex it ended up in.
    pub merged_into: Vec<usize>,
    /// `(u, v, copies)` added by the last stage, in `G₃` vertices.
    pub added: Vec<(usize, usize, usize)>,
}

impl PipelineState {
    pub fn m(&self) -> usize {
        self.g0.vertex_count()
    }

    /// `G₃`, once edge addition has run.
    pub fn g3(&self) -> Result<&Multigraph> {
        self.g3.as_ref().ok_or_else(|| Error::Input("G₃ has not been built".into()))
    }

    /// Current vertex of `v_i` (1-based), if that position survives.
    pub fn v(&self, i: usize) -> Option<usize> {
        (i >= 1).then(|| self.current.get(i - 1).copied()).flatten()
    }

    /// `G₂` once identification ran, otherwise `G₁`.
    pub fn working(&self) -> &Multigraph {
        self.g2.as_ref().unwrap_or(&self.g1)
    }
}

fn greedy_layer(df: &[usize]) -> Result<Multigraph> {
    let m = df.len();
    let mut left = df.to_vec();
    let mut l = Multigraph::new(m);
    loop {
        let mut idx: Vec<usize> = (0..m).filter(|&v| left[v] > 0).collect();
        if idx.is_empty() {
            return Ok(l);
        }
        idx.sort_by(|&a, &b| left[b].cmp(&left[a]).then(a.cmp(&b)));
        if idx.len() < 2 {
            return domain("deficiencies are not admissible");
        }
        let (a, b) = (idx[0], idx[1]);
        left[a] -= 1;
        left[b] -= 1;
        l.add_edge(a, b)?;
    }
}

/// `G₁ = G₀ + L` with `L` the split realization of the deficiency sequence.
pub fn build_g1(g0: &Multigraph) -> Result<PipelineState> {
    build_g1_with(g0, false)
}

/// As [`build_g1`]; with `fallback`, a sequence that has no split realization
/// is realized greedily instead and `G₁` is regular outright.
pub fn build_g1_with(g0: &Multigraph, fallback: bool) -> Result<PipelineState> {
    let m = g0.vertex_count();
    if m % 2 == 1 {
        return domain(format!("G₀ has odd order {m}"));
    }
    if m == 0 {
        return domain("G₀ is empty");
    }
    let delta = g0.max_degree();
    let raw: Vec<usize> = (0..m).map(|v| delta - g0.degree(v)).collect();
    let seq = DegreeSequence::new(&raw)?;
    if let Err(e) = seq.admissibility() {
        return domain(format!("deficiency sequence is not admissible, so G₀ has a Δ-overfull subgraph: {e}"));
    }
    let order = seq.permutation().to_vec();
    let (l, p, source, realization) = match realize_admissible_bipartite(&seq) {
        Ok(r) => {
            let verdict = verify_lemma24(&seq, &r)?;
            let mut l = Multigraph::new(m);
            for (a, b, k) in r.graph.pairs() {
                l.add_edges(order[a], order[b], k)?;
            }
            (l, r.p, LayerSource::Split, Some(verdict))
        }
        Err(Error::Domain(_)) if fallback => (greedy_layer(&raw)?, m, LayerSource::Fallback, None),
        Err(e) => return Err(e),
    };
    let mut g1 = g0.clone();
    g1.union_with(&l)?;
    if g1.max_degree() != delta {
        return Err(Error::Internal(format!("Δ(G₁) = {} ≠ Δ = {delta}", g1.max_degree())));
    }
    let g_idx = seq.values().iter().filter(|&&d| d > 0).count();
    Ok(PipelineState {
        delta,
        input_vertices: m,
        g0: g0.clone(),
        g1,
        g2: None,
        g3: None,
        deficiencies: seq.values().to_vec(),
        deficiency_order: order.clone(),
        p_initial: p,
        p,
        marker: p == m,
        g_idx,
        h_idx: 0,
        u: Vec::new(),
        u_star: Vec::new(),
        l,
        l_star: None,
        source,
        realization,
        identification_log: Vec::new(),
        current: order,
        labels: (0..m).collect(),
        merged_into: (0..m).collect(),
        added: Vec::new(),
    })
}

/// Records `U = {v : df_{G₀}(v) ≥ ηn}`, `U* = U ∪ {v₁}` and `h`, the length
/// of the leading run of positions inside `U*`.
pub fn annotate_u(state: &mut PipelineState, eta: Ratio<usize>, n: usize) {
    let bound = eta * Ratio::from_integer(n);
    let order = &state.deficiency_order;
    state.u = order
        .iter()
        .zip(&state.deficiencies)
        .filter(|(_, &d)| Ratio::from_integer(d) >= bound)
        .map(|(&v, _)| v)
        .collect();
    state.u_star = state.u.clone();
    if let Some(&v1) = order.first() {
        if !state.u_star.contains(&v1) {
            state.u_star.insert(0, v1);
        }
    }
    state.h_idx = order.iter().take_while(|v| state.u_star.contains(v)).count();
}

/// Merges `v_p` and `v_{p+1}` into `v_{p−1}` while the triple sends fewer
/// than `Δ` edges to the rest of the graph, then compacts to `G₂`.
pub fn vertex_identification(mut state: PipelineState) -> Result<PipelineState> {
    let delta = state.delta;
    let mut g = state.g1.clone();
    let m = g.vertex_count();
    let mut alive = vec![true; m];
    let mut current = state.current.clone();
    let mut p = state.p;
    let mut into: Vec<usize> = (0..m).collect();
    if !state.marker {
        loop {
            if p + 1 > current.len() {
                break;
            }
            if p < 2 {
                // the loop only gets here when G₁ − {v₁…v_{p+1}} is Δ-overfull
                return Err(Error::Domain(format!(
                    "identification ran past v_1 after {} merges, so G₁ − {{v_1, …, v_{{p+1}}}} is overfull: {:?}",
                    state.identification_log.len(),
                    state.identification_log
                )));
            }
            let (a, b, c) = (current[p - 2], current[p - 1], current[p]);
            let inside = g.multiplicity(a, b) + g.multiplicity(a, c) + g.multiplicity(b, c);
            let outgoing = g.degree(a) + g.degree(b) + g.degree(c) - 2 * inside;
            if outgoing >= delta {
                break;
            }
            for x in [b, c] {
                let nbrs: Vec<(usize, usize)> = g.neighbors(x).collect();
                for (y, k) in nbrs {
                    g.remove_edges(x, y, k)?;
                    if y != a && y != b && y != c {
                        g.add_edges(a, y, k)?;
                    }
                }
                alive[x] = false;
            }
            let ab = g.multiplicity(a, b);
            g.remove_edges(a, b, ab)?;
            let ac = g.multiplicity(a, c);
            g.remove_edges(a, c, ac)?;
            for slot in into.iter_mut() {
                if *slot == b || *slot == c {
                    *slot = a;
                }
            }
            state.identification_log.push(Identification { triple: [a, b, c], survivor: a, outgoing });
            current.drain(p - 1..=p);
            p -= 2;
        }
    }
    // compact the surviving vertices
    let keep: Vec<usize> = (0..m).filter(|&v| alive[v]).collect();
    let (g2, _) = g.induced_subgraph(&keep)?;
    let mut index = vec![usize::MAX; m];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    state.current = current.iter().map(|&v| index[v]).collect();
    state.merged_into = into.iter().map(|&v| index[v]).collect();
    state.labels = keep;
    state.p = p;
    state.g2 = Some(g2);
    Ok(state)
}

/// Adds the edges that make `G₂` `Δ`-regular, giving `G₃`.
pub fn edge_addition(mut state: PipelineState) -> Result<PipelineState> {
    let delta = state.delta;
    let mut g = state.working().clone();
    let df = |g: &Multigraph, v: usize| delta - g.degree(v);
    let mut added = Vec::new();
    let p = state.p;
    let pair_count = if state.marker { p / 2 } else { p.saturating_sub(2) / 2 };
    if !state.marker {
        let (Some(a), Some(b), Some(c)) = (state.v(p - 1), state.v(p), state.v(p + 1)) else {
            return Err(Error::Internal(format!("split index {p} has no full triple")));
        };
        let dc = df(&g, c);
        if dc % 2 == 1 {
            return Err(Error::Internal(format!("df(v_{{p+1}}) = {dc} is odd")));
        }
        let (da, db) = (df(&g, a), df(&g, b));
        if da != db || da < dc / 2 {
            return Err(Error::Internal(format!(
                "triple deficiencies ({da}, {db}, {dc}) admit no completion"
            )));
        }
        for (x, y, k) in [(c, a, dc / 2), (c, b, dc / 2), (a, b, da - dc / 2)] {
            g.add_edges(x, y, k)?;
            if k > 0 {
                added.push((x, y, k));
            }
        }
    }
    for i in 1..=pair_count {
        let (Some(x), Some(y)) = (state.v(2 * i - 1), state.v(2 * i)) else {
            return Err(Error::Internal(format!("pair {i} is missing")));
        };
        let (dx, dy) = (df(&g, x), df(&g, y));
        if dx != dy {
            return Err(Error::Internal(format!("pair ({x}, {y}) has deficiencies {dx} ≠ {dy}")));
        }
        g.add_edges(x, y, dx)?;
        if dx > 0 {
            added.push((x, y, dx));
        }
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) != delta) {
        return Err(Error::Internal(format!("G₃ is not Δ-regular: d({v}) = {} ≠ {delta}", g.degree(v))));
    }
    let mut l_star = g.clone();
    for (u, v, _) in g.pairs() {
        l_star.remove_edge(u, v)?;
    }
    state.g2.get_or_insert_with(|| g.clone());
    state.l_star = Some(l_star);
    state.added = added;
    state.g3 = Some(g);
    Ok(state)
}

/// Regularization chain `G → G₀ → G₁ → G₂ → G₃`.
pub fn regularize(g: &Multigraph, fallback: bool) -> Result<PipelineState> {
    let g0 = build_g0(g);
    let mut s = build_g1_with(&g0, fallback)?;
    s.input_vertices = g.vertex_count();
    edge_addition(vertex_identification(s)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct G3Verdict {
    pub regular: bool,
    pub contains_g2: bool,
    /// `None` when the overfull search could not run.
    pub overfull: Option<OverfullCertificate>,
    /// `e(G₃[{v_{p−1}, v_p, v_{p+1}}]) ≤ Δ` for the final triple, when identification ran.
    pub triple_bound: Option<bool>,
    /// Lemma properties of the realization behind `L`.
    pub realization_pass: Option<bool>,
    pub note: Option<String>,
}

impl G3Verdict {
    /// Regular, contains `G₂`, and certified free of `Δ`-overfull subgraphs.
    pub fn pass(&self) -> bool {
        self.regular
            && self.contains_g2
            && self.overfull.as_ref().is_some_and(|c| !c.found())
            && self.triple_bound != Some(false)
    }
}

/// Diagnostic verdict on `G₃`; a found overfull subgraph is reported, not raised.
pub fn verify_g3(state: &PipelineState) -> Result<G3Verdict> {
    let g3 = state.g3()?;
    let g2 = state.working();
    let delta = state.delta;
    let regular = g3.is_regular() && g3.max_degree() == delta;
    let contains_g2 = g2.is_subgraph_of(g3);
    let (overfull, note) = match find_delta_overfull_subgraph(g3) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let triple_bound = if state.identification_log.is_empty() || state.marker {
        None
    } else {
        let p = state.p;
        match (state.v(p - 1), state.v(p), state.v(p + 1)) {
            (Some(a), Some(b), Some(c)) => Some(g3.edges_within(&[a, b, c]) <= delta),
            _ => Some(false),
        }
    };
    Ok(G3Verdict {
        regular,
        contains_g2,
        overfull,
        triple_bound,
        realization_pass: state.realization.as_ref().map(|r| r.all_pass()),
        note,
    })
}
