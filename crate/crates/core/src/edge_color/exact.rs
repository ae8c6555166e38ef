//! Exact chromatic index by backtracking.
//!
//! Each connected component is solved on its own. Edges are chosen by fewest
//! available colors; an unused color is only ever tried as the next fresh
//! one, and parallel copies of a pair take strictly increasing colors.

use serde::Serialize;

use super::density::density_rho;
use super::vizing::color_with_palette;
use super::{EdgeColoring, UNCOLORED};
use crate::error::{input, Error, Result};
use crate::multigraph::Multigraph;

pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Start the search at `max(Δ, ⌈ρ⌉)` instead of `Δ`.
    pub density_lower_bound: bool,
    /// Stop at `Δ + μ` and take that coloring from fan recoloring.
    pub vizing_upper_bound: bool,
    /// Try fan recoloring before searching at each palette size.
    pub heuristic_first: bool,
    pub max_edges: usize,
    pub node_limit: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            density_lower_bound: true,
            vizing_upper_bound: true,
            heuristic_first: true,
            max_edges: 80,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

impl ExactOptions {
    /// No theorem-derived bounds: search upward from `Δ` until a coloring exists.
    pub fn unassisted() -> Self {
        ExactOptions { density_lower_bound: false, vizing_upper_bound: false, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub chromatic_index: usize,
    pub coloring: EdgeColoring,
    /// Search nodes expanded over all palette sizes tried.
    pub nodes: u64,
}

pub fn chromatic_index_exact(g: &Multigraph) -> Result<ExactResult> {
    chromatic_index_with(g, ExactOptions::default())
}

pub fn chromatic_index_with(g: &Multigraph, opts: ExactOptions) -> Result<ExactResult> {
    if g.edge_count() > opts.max_edges {
        return Err(Error::Resource(format!(
            "{} edges exceed the exact-search cap {}",
            g.edge_count(),
            opts.max_edges
        )));
    }
    if g.max_degree() >= 64 {
        return Err(Error::Resource("exact search supports Δ < 64".into()));
    }
    let delta = g.max_degree();
    let mut lo = delta;
    if opts.density_lower_bound && g.vertex_count() >= 3 {
        if let Ok(r) = density_rho(g) {
            lo = lo.max(r.value.ceil().to_integer());
        }
    }
    let hi = delta + g.max_multiplicity();
    let mut nodes = 0;
    let mut k = lo;
    loop {
        if opts.vizing_upper_bound && k >= hi {
            let c = super::vizing::color_vizing_bound(g)?;
            return Ok(ExactResult { chromatic_index: k.min(hi), coloring: relabel(g, c, k.min(hi)), nodes });
        }
        if opts.heuristic_first {
            if let Some(c) = color_with_palette(g, k) {
                return Ok(ExactResult { chromatic_index: k, coloring: c, nodes });
            }
        }
        let mut budget = opts.node_limit.saturating_sub(nodes);
        let found = solve(g, k, &mut budget)?;
        nodes = opts.node_limit - budget;
        if let Some(c) = found {
            return Ok(ExactResult { chromatic_index: k, coloring: c, nodes });
        }
        k += 1;
    }
}

/// Compacts the colors of a coloring into `1..=k` when it uses at most `k` of them.
fn relabel(g: &Multigraph, c: EdgeColoring, k: usize) -> EdgeColoring {
    let mut map = vec![0usize; c.palette() + 1];
    let mut next = 0;
    let colors = c
        .colors()
        .iter()
        .map(|&x| {
            if x == UNCOLORED {
                return UNCOLORED;
            }
            if map[x] == 0 {
                next += 1;
                map[x] = next;
            }
            map[x]
        })
        .collect();
    EdgeColoring::from_colors(g, k.max(next), colors).expect("compacted colors fit")
}

/// Decision version: a proper `k`-coloring of `g`, or `None` if none exists.
pub(crate) fn try_color_exact(g: &Multigraph, k: usize, node_limit: u64) -> Result<Option<EdgeColoring>> {
    let mut budget = node_limit;
    solve(g, k, &mut budget)
}

fn solve(g: &Multigraph, k: usize, budget: &mut u64) -> Result<Option<EdgeColoring>> {
    if k >= 64 {
        return input("exact search supports at most 63 colors");
    }
    if g.max_degree() > k {
        return Ok(None);
    }
    let mut out = EdgeColoring::uncolored(g, k);
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let (h, map) = g.induced_subgraph(&comp)?;
        let mut search = Search::new(&h, k);
        match search.run(budget) {
            Outcome::Found => {
                for (i, e) in h.edge_instances().iter().enumerate() {
                    let (u, v) = (map[e.u], map[e.v]);
                    let idx = out
                        .index_of(crate::multigraph::EdgeRef { u: u.min(v), v: u.max(v), copy: e.copy })
                        .expect("component edge exists");
                    out.set(idx, search.color[i])?;
                }
            }
            Outcome::Impossible => return Ok(None),
            Outcome::OutOfBudget => {
                return Err(Error::Resource(format!("exact search exceeded its node limit at k={k}")))
            }
        }
    }
    Ok(Some(out))
}

enum Outcome {
    Found,
    Impossible,
    OutOfBudget,
}

struct Search {
    k: usize,
    n: usize,
    ends: Vec<(usize, usize)>,
    /// index of the first copy of this edge's pair
    first: Vec<usize>,
    color: Vec<usize>,
    used: Vec<u64>,
    open_at: Vec<usize>,
    class: Vec<usize>,
    open: usize,
}

impl Search {
    fn new(h: &Multigraph, k: usize) -> Self {
        let inst = h.edge_instances();
        let ends: Vec<(usize, usize)> = inst.iter().map(|e| (e.u, e.v)).collect();
        let first = inst
            .iter()
            .enumerate()
            .map(|(i, e)| i - e.copy)
            .collect();
        let mut open_at = vec![0; h.vertex_count()];
        for &(u, v) in &ends {
            open_at[u] += 1;
            open_at[v] += 1;
        }
        Search {
            k,
            n: h.vertex_count(),
            first,
            color: vec![UNCOLORED; ends.len()],
            open: ends.len(),
            ends,
            used: vec![0; h.vertex_count()],
            open_at,
            class: vec![0; k + 1],
        }
    }

    fn run(&mut self, budget: &mut u64) -> Outcome {
        if self.open == 0 {
            return Outcome::Found;
        }
        if *budget == 0 {
            return Outcome::OutOfBudget;
        }
        *budget -= 1;
        let all = (1u64 << self.k) - 1;
        // capacity check: each class holds at most ⌊n/2⌋ edges
        let cap: usize = (1..=self.k).map(|c| self.n / 2 - self.class[c].min(self.n / 2)).sum();
        if cap < self.open {
            return Outcome::Impossible;
        }
        let max_used = (1..=self.k).rev().find(|&c| self.class[c] > 0).unwrap_or(0);
        let mut best: Option<(usize, u64)> = None;
        for e in 0..self.ends.len() {
            if self.color[e] != UNCOLORED {
                continue;
            }
            // only the lowest open copy of a pair is eligible
            if e > self.first[e] && self.color[e - 1] == UNCOLORED {
                continue;
            }
            let (u, v) = self.ends[e];
            let mut avail = all & !(self.used[u] | self.used[v]);
            if e > self.first[e] {
                let prev = self.color[e - 1];
                avail &= !((1u64 << prev) - 1);
            }
            let fresh_limit = (max_used + 1).min(self.k);
            avail &= (1u64 << fresh_limit) - 1;
            let cnt = avail.count_ones();
            if cnt == 0 {
                return Outcome::Impossible;
            }
            if best.is_none_or(|(_, b)| cnt < b.count_ones()) {
                best = Some((e, avail));
                if cnt == 1 {
                    break;
                }
            }
        }
        let (e, mut avail) = best.expect("an open edge exists");
        let (u, v) = self.ends[e];
        while avail != 0 {
            let c = avail.trailing_zeros() as usize + 1;
            avail &= avail - 1;
            self.place(e, u, v, c);
            let ok = self.free_enough(u) && self.free_enough(v);
            if ok {
                match self.run(budget) {
                    Outcome::Found => return Outcome::Found,
                    Outcome::OutOfBudget => return Outcome::OutOfBudget,
                    Outcome::Impossible => {}
                }
            }
            self.unplace(e, u, v, c);
        }
        Outcome::Impossible
    }

    fn free_enough(&self, v: usize) -> bool {
        self.open_at[v] <= self.k - self.used[v].count_ones() as usize
    }

    fn place(&mut self, e: usize, u: usize, v: usize, c: usize) {
        self.color[e] = c;
        self.used[u] |= 1 << (c - 1);
        self.used[v] |= 1 << (c - 1);
        self.open_at[u] -= 1;
        self.open_at[v] -= 1;
        self.class[c] += 1;
        self.open -= 1;
    }

    fn unplace(&mut self, e: usize, u: usize, v: usize, c: usize) {
        self.color[e] = UNCOLORED;
        self.used[u] &= !(1 << (c - 1));
        self.used[v] &= !(1 << (c - 1));
        self.open_at[u] += 1;
        self.open_at[v] += 1;
        self.class[c] -= 1;
        self.open += 1;
    }
}
