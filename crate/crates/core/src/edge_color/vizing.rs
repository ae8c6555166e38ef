//! Fan and Kempe-chain recoloring: König, the `Δ + μ` bound, and bounded palettes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::density::density_rho;
use super::exact::{try_color_exact, DEFAULT_NODE_LIMIT};
use super::state::ColorState;
use super::{EdgeColoring, UNCOLORED};
use crate::error::{input, Error, Result};
use crate::multigraph::Multigraph;

pub(crate) fn state_for(g: &Multigraph, k: usize) -> ColorState {
    let ends = g.edge_instances().iter().map(|e| (e.u, e.v)).collect();
    ColorState::new(g.vertex_count(), k, ends)
}

/// Colors the uncolored edge `e` by a multi-fan at either end, recoloring
/// along a Kempe chain when needed. Always succeeds when `k ≥ Δ + μ`.
pub(crate) fn extend_edge(s: &mut ColorState, e: usize) -> bool {
    let (a, b) = s.ends[e];
    fan_extend(s, e, a) || fan_extend(s, e, b)
}

fn fan_extend(s: &mut ColorState, e: usize, x: usize) -> bool {
    let y = s.other(e, x);
    if let Some(c) = s.first_common_missing(x, y) {
        s.assign(e, c);
        return true;
    }
    let mut fan = vec![e];
    let mut tips = vec![y];
    loop {
        let next = (1..=s.k).find_map(|c| {
            let f = s.edge_at(x, c)?;
            (!fan.contains(&f) && tips.iter().any(|&t| s.is_missing(t, c))).then_some(f)
        });
        match next {
            Some(f) => {
                fan.push(f);
                tips.push(s.other(f, x));
            }
            None => break,
        }
    }
    for i in 0..fan.len() {
        if let Some(c) = s.first_common_missing(x, tips[i]) {
            if shift(s, &fan, &tips, i, c) {
                return true;
            }
        }
    }
    let Some(alpha) = s.missing(x).next() else {
        return false;
    };
    for i in 0..fan.len() {
        let betas: Vec<usize> = s.missing(tips[i]).collect();
        for beta in betas {
            let (path, end) = s.chain(tips[i], alpha, beta);
            if end == x {
                continue;
            }
            s.swap(&path, alpha, beta);
            if s.is_missing(tips[i], alpha) && shift(s, &fan, &tips, i, alpha) {
                return true;
            }
            // fall back to a fresh attempt on the modified coloring
            return fan_extend_plain(s, e, x);
        }
    }
    false
}

fn fan_extend_plain(s: &mut ColorState, e: usize, x: usize) -> bool {
    let y = s.other(e, x);
    if let Some(c) = s.first_common_missing(x, y) {
        s.assign(e, c);
        return true;
    }
    false
}

/// Recolors the fan along the predecessor sequence ending at `i` and gives
/// `fan[i]` the color `c`, which must be missing at `x` and `tips[i]`.
fn shift(s: &mut ColorState, fan: &[usize], tips: &[usize], i: usize, c: usize) -> bool {
    let mut seq = vec![i];
    let mut j = i;
    while j != 0 {
        let col = s.color[fan[j]];
        let Some(l) = (0..j).find(|&l| s.is_missing(tips[l], col)) else {
            return false;
        };
        seq.push(l);
        j = l;
    }
    seq.reverse();
    let mut plan: Vec<(usize, usize)> = seq
        .windows(2)
        .map(|w| (fan[w[0]], s.color[fan[w[1]]]))
        .collect();
    plan.push((fan[i], c));
    let old: Vec<(usize, usize)> = plan.iter().map(|&(f, _)| (f, s.color[f])).collect();
    for &(f, _) in &plan {
        s.assign(f, UNCOLORED);
    }
    let ok = plan.iter().all(|&(f, col)| {
        let (u, v) = s.ends[f];
        let free = s.is_missing(u, col) && s.is_missing(v, col);
        if free {
            s.assign(f, col);
        }
        free
    });
    if !ok {
        for &(f, _) in &plan {
            s.assign(f, UNCOLORED);
        }
        for &(f, col) in &old {
            if col != UNCOLORED {
                s.assign(f, col);
            }
        }
    }
    ok
}

/// Random Kempe exchanges around uncolored edges, retrying fan extension.
pub(crate) fn kempe_repair(s: &mut ColorState, seed: u64, budget: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let open = s.uncolored_edges();
        let Some(&e) = open.choose(&mut rng) else {
            return true;
        };
        if extend_edge(s, e) {
            continue;
        }
        let (mut u, mut v) = s.ends[e];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut u, &mut v);
        }
        let mu: Vec<usize> = s.missing(u).collect();
        let mv: Vec<usize> = s.missing(v).collect();
        if mu.is_empty() || mv.is_empty() {
            // make room by uncoloring a random edge at the saturated end
            let w = if mu.is_empty() { u } else { v };
            let at: Vec<usize> = s.edges_at(w).collect();
            if let Some(&f) = at.choose(&mut rng) {
                s.assign(f, UNCOLORED);
                if extend_edge(s, e) {
                    continue;
                }
            }
            continue;
        }
        let a = *mu.choose(&mut rng).unwrap();
        let b = *mv.choose(&mut rng).unwrap();
        let (path, _) = s.chain(v, a, b);
        s.swap(&path, a, b);
        if s.is_missing(u, a) && s.is_missing(v, a) {
            s.assign(e, a);
        }
    }
    s.uncolored_edges().is_empty()
}

/// Colors every edge of `g` from a palette of `k` colors using fans and
/// Kempe chains only; `None` if some edge could not be placed.
pub fn color_with_palette(g: &Multigraph, k: usize) -> Option<EdgeColoring> {
    let mut s = state_for(g, k);
    let budget = 50 * s.ends.len() + 100;
    for e in 0..s.ends.len() {
        if !extend_edge(&mut s, e) && !kempe_repair(&mut s, e as u64, budget) {
            return None;
        }
    }
    let mut c = EdgeColoring::uncolored(g, k);
    s.write_back(&mut c);
    Some(c)
}

/// Colors the uncolored edges of a proper partial coloring within its
/// palette, recoloring other edges as needed; `None` if that fails.
pub fn complete_coloring(g: &Multigraph, partial: &EdgeColoring) -> Result<Option<EdgeColoring>> {
    if !super::check_proper(g, partial)?.proper {
        return input("complete_coloring needs a proper partial coloring");
    }
    let mut s = ColorState::from_coloring(partial);
    let budget = 50 * s.ends.len() + 100;
    for e in s.uncolored_edges() {
        if s.color[e] == UNCOLORED && !extend_edge(&mut s, e) && !kempe_repair(&mut s, e as u64, budget) {
            return Ok(None);
        }
    }
    let mut c = partial.clone();
    s.write_back(&mut c);
    Ok(Some(c))
}

/// A total proper coloring with at most `Δ + μ` colors.
pub fn color_vizing_bound(g: &Multigraph) -> Result<EdgeColoring> {
    let k = g.max_degree() + g.max_multiplicity();
    let mut s = state_for(g, k);
    for e in 0..s.ends.len() {
        if !extend_edge(&mut s, e) {
            return Err(Error::Internal(format!("fan recoloring failed on edge {e} with {k} colors")));
        }
    }
    let mut c = EdgeColoring::uncolored(g, k);
    s.write_back(&mut c);
    Ok(c)
}

/// A proper `Δ`-coloring of a bipartite multigraph.
pub fn color_bipartite_konig(g: &Multigraph) -> Result<EdgeColoring> {
    g.bipartition()?;
    let k = g.max_degree();
    let mut s = state_for(g, k);
    for e in 0..s.ends.len() {
        let (u, v) = s.ends[e];
        let a = s.missing(u).next().expect("u has a free color");
        let b = s.missing(v).next().expect("v has a free color");
        if !s.is_missing(v, a) {
            // the a/b chain from v cannot reach u in a bipartite graph
            let (path, _) = s.chain(v, a, b);
            s.swap(&path, a, b);
        }
        s.assign(e, a);
    }
    let mut c = EdgeColoring::uncolored(g, k);
    s.write_back(&mut c);
    Ok(c)
}

/// Largest edge count for which the exact fallback of [`color_bounded`] is attempted.
pub const BOUNDED_EXACT_EDGES: usize = 40;

/// A proper `k`-coloring for `k ≥ max{Δ + √((Δ−1)/2), ρ}`.
///
/// Fans and Kempe repairs first, then exact search on small graphs.
/// The density part of the bound is only checked when `ρ` is computable.
pub fn color_bounded(g: &Multigraph, k: usize) -> Result<EdgeColoring> {
    let d = g.max_degree() as f64;
    let need = d + ((d - 1.0).max(0.0) / 2.0).sqrt();
    if (k as f64) < need {
        return input(format!("k={k} is below Δ + √((Δ−1)/2) = {need:.3}"));
    }
    if g.vertex_count() >= 3 {
        if let Ok(rho) = density_rho(g) {
            if num_rational::Ratio::from_integer(k) < rho.value {
                return input(format!("k={k} is below the density {}", rho.value));
            }
        }
    }
    if let Some(c) = color_with_palette(g, k) {
        return Ok(c);
    }
    if g.edge_count() <= BOUNDED_EXACT_EDGES {
        if let Some(c) = try_color_exact(g, k, DEFAULT_NODE_LIMIT)? {
            return Ok(c);
        }
        return Err(Error::Domain(format!("no proper {k}-coloring exists")));
    }
    Err(Error::Resource(format!("recoloring did not finish with {k} colors")))
}
