//! Proper edge colorings of multigraphs and the engines that produce them.
//!
//! Colors are `1..=k`; [`UNCOLORED`] marks an edge instance without a color.

mod alternating;
pub(crate) mod density;
mod equalize;
pub(crate) mod exact;
mod nearly_bipartite;
pub(crate) mod state;
pub(crate) mod vizing;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::multigraph::{EdgeRef, Multigraph};

pub use alternating::swap_alternating_path;
pub use density::{density_rho, density_rho_with_cap, DensityValue};
pub use equalize::{equalize, is_equalized};
pub use exact::{chromatic_index_exact, chromatic_index_with, ExactOptions, ExactResult};
pub use nearly_bipartite::{apex_vertex, color_nearly_bipartite, NearlyBipartiteOutcome};
pub use vizing::{color_bipartite_konig, color_bounded, color_vizing_bound, color_with_palette, complete_coloring};

pub const UNCOLORED: usize = 0;

/// A partial or total assignment of colors to the edge instances of a graph.
///
/// Edge instances are kept in the canonical order of
/// [`Multigraph::edge_instances`], so indices are stable for a given graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeColoring {
    n: usize,
    k: usize,
    edges: Vec<EdgeRef>,
    colors: Vec<usize>,
}

impl EdgeColoring {
    pub fn uncolored(g: &Multigraph, k: usize) -> Self {
        let edges = g.edge_instances();
        let colors = vec![UNCOLORED; edges.len()];
        EdgeColoring { n: g.vertex_count(), k, edges, colors }
    }

    /// Colors given in canonical edge order.
    pub fn from_colors(g: &Multigraph, k: usize, colors: Vec<usize>) -> Result<Self> {
        let mut c = EdgeColoring::uncolored(g, k);
        if colors.len() != c.edges.len() {
            return input(format!("{} colors for {} edge instances", colors.len(), c.edges.len()));
        }
        if let Some(&bad) = colors.iter().find(|&&x| x > k) {
            return input(format!("color {bad} outside palette 1..={k}"));
        }
        c.colors = colors;
        Ok(c)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn palette(&self) -> usize {
        self.k
    }

    /// Enlarges the palette; never shrinks below a color in use.
    pub fn set_palette(&mut self, k: usize) -> Result<()> {
        if let Some(&m) = self.colors.iter().max() {
            if m > k {
                return input(format!("color {m} in use exceeds palette {k}"));
            }
        }
        self.k = k;
        Ok(())
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn index_of(&self, e: EdgeRef) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn color_of(&self, e: EdgeRef) -> Option<usize> {
        self.index_of(e).map(|i| self.colors[i])
    }

    pub fn set(&mut self, idx: usize, color: usize) -> Result<()> {
        if color > self.k {
            return input(format!("color {color} outside palette 1..={}", self.k));
        }
        let slot = self
            .colors
            .get_mut(idx)
            .ok_or_else(|| Error::Input(format!("edge index {idx} out of range")))?;
        *slot = color;
        Ok(())
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != UNCOLORED)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c != UNCOLORED).count()
    }

    /// Sizes of classes `1..=k`, at index `color - 1`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &c in &self.colors {
            if c != UNCOLORED {
                s[c - 1] += 1;
            }
        }
        s
    }

    pub fn class(&self, color: usize) -> Vec<EdgeRef> {
        self.edges
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c == color)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Number of distinct colors on at least one edge.
    pub fn colors_used(&self) -> usize {
        self.class_sizes().iter().filter(|&&s| s > 0).count()
    }

    fn presence(&self) -> Vec<Vec<bool>> {
        let mut seen = vec![vec![false; self.k + 1]; self.n];
        for (e, &c) in self.edges.iter().zip(&self.colors) {
            if c != UNCOLORED {
                seen[e.u][c] = true;
                seen[e.v][c] = true;
            }
        }
        seen
    }

    /// Colors of the palette not present at `v`.
    pub fn missing_at(&self, v: usize) -> Vec<usize> {
        let seen = self.presence();
        (1..=self.k).filter(|&c| !seen[v][c]).collect()
    }

    /// `|φ̄⁻¹(i)|` for each color `i`, at index `i - 1`.
    pub fn missing_counts(&self) -> Vec<usize> {
        let seen = self.presence();
        (1..=self.k)
            .map(|c| seen.iter().filter(|row| !row[c]).count())
            .collect()
    }

    /// One line `u v copy color` per edge instance.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, c) in self.edges.iter().zip(&self.colors) {
            let _ = writeln!(s, "{} {} {} {}", e.u, e.v, e.copy, c);
        }
        s
    }

    /// Reads the text format against `g`; every edge instance must appear exactly once.
    pub fn parse_text(g: &Multigraph, k: usize, text: &str) -> Result<Self> {
        let mut c = EdgeColoring::uncolored(g, k);
        let mut seen = vec![false; c.edges.len()];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let f: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Input(format!("bad coloring line '{line}': {e}")))?;
            if f.len() != 4 {
                return input(format!("coloring line '{line}' needs 4 fields"));
            }
            let (u, v) = (f[0].min(f[1]), f[0].max(f[1]));
            let idx = c
                .index_of(EdgeRef { u, v, copy: f[2] })
                .ok_or_else(|| Error::Input(format!("no edge instance {u} {v} copy {}", f[2])))?;
            if seen[idx] {
                return input(format!("edge instance {u} {v} copy {} listed twice", f[2]));
            }
            seen[idx] = true;
            c.set(idx, f[3])?;
        }
        if seen.iter().any(|s| !s) {
            return input("coloring file omits some edge instances");
        }
        Ok(c)
    }
}

/// Outcome of [`check_proper`]: a conflicting pair of edge instances and their shared color on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProperVerdict {
    pub proper: bool,
    pub conflict: Option<(EdgeRef, EdgeRef, usize)>,
}

fn check_shape(g: &Multigraph, c: &EdgeColoring) -> Result<()> {
    if c.n != g.vertex_count() || c.edges != g.edge_instances() {
        return input("coloring does not match the edge instances of the graph");
    }
    Ok(())
}

pub fn check_proper(g: &Multigraph, c: &EdgeColoring) -> Result<ProperVerdict> {
    check_shape(g, c)?;
    let mut owner: Vec<Vec<Option<usize>>> = vec![vec![None; c.k + 1]; c.n];
    for (i, (e, &col)) in c.edges.iter().zip(&c.colors).enumerate() {
        if col == UNCOLORED {
            continue;
        }
        if col > c.k {
            return input(format!("color {col} outside palette"));
        }
        for x in [e.u, e.v] {
            if let Some(j) = owner[x][col] {
                return Ok(ProperVerdict { proper: false, conflict: Some((c.edges[j], *e, col)) });
            }
            owner[x][col] = Some(i);
        }
    }
    Ok(ProperVerdict { proper: true, conflict: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    pub holds: bool,
    pub missing_counts: Vec<usize>,
    /// Colors whose missing count has the wrong parity.
    pub violations: Vec<usize>,
}

/// Checks `|φ̄⁻¹(i)| ≡ |V| (mod 2)` for every color of a total proper coloring.
pub fn parity_check(g: &Multigraph, c: &EdgeColoring) -> Result<ParityVerdict> {
    if !check_proper(g, c)?.proper {
        return input("parity check needs a proper coloring");
    }
    if !c.is_total() {
        return input("parity check needs a total coloring");
    }
    let counts = c.missing_counts();
    let violations: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &m)| m % 2 != g.vertex_count() % 2)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(ParityVerdict { holds: violations.is_empty(), missing_counts: counts, violations })
}

/// Convenience: total and proper.
pub fn is_valid_total(g: &Multigraph, c: &EdgeColoring) -> bool {
    c.is_total() && check_proper(g, c).map(|v| v.proper).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle};

    #[test]
    fn properness_examples() {
        let k3 = complete(3);
        let c = EdgeColoring::from_colors(&k3, 3, vec![1, 2, 3]).unwrap();
        assert!(check_proper(&k3, &c).unwrap().proper);
        let bad = EdgeColoring::from_colors(&k3, 3, vec![1, 1, 2]).unwrap();
        let v = check_proper(&k3, &bad).unwrap();
        assert!(!v.proper && v.conflict.unwrap().2 == 1);
        assert!(check_proper(&k3, &EdgeColoring::uncolored(&k3, 3)).unwrap().proper);
        let other = EdgeColoring::uncolored(&complete(4), 3);
        assert!(check_proper(&k3, &other).is_err());
    }

    #[test]
    fn parity_examples() {
        let k4 = complete(4);
        // edges in order 01 02 03 12 13 23; perfect matchings {01,23} {02,13} {03,12}
        let c = EdgeColoring::from_colors(&k4, 3, vec![1, 2, 3, 3, 2, 1]).unwrap();
        let v = parity_check(&k4, &c).unwrap();
        assert!(v.holds && v.missing_counts == vec![0, 0, 0]);

        let p3 = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        for colors in [vec![1, 2, 1], vec![2, 1, 2]] {
            let c = EdgeColoring::from_colors(&p3, 2, colors).unwrap();
            let v = parity_check(&p3, &c).unwrap();
            assert!(v.holds);
            assert!(v.missing_counts.iter().all(|m| m % 2 == 0));
        }

        let c5 = cycle(5).unwrap();
        let c = EdgeColoring::from_colors(&c5, 3, vec![1, 3, 2, 1, 2]).unwrap();
        assert!(check_proper(&c5, &c).unwrap().proper);
        let v = parity_check(&c5, &c).unwrap();
        assert!(v.holds && v.missing_counts.iter().all(|m| m % 2 == 1));
        assert!(parity_check(&c5, &EdgeColoring::uncolored(&c5, 3)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Multigraph::from_pairs(3, &[(0, 1, 2), (1, 2, 1)]).unwrap();
        let c = EdgeColoring::from_colors(&g, 3, vec![1, 2, 3]).unwrap();
        let back = EdgeColoring::parse_text(&g, 3, &c.to_text()).unwrap();
        assert_eq!(back, c);
        assert!(EdgeColoring::parse_text(&g, 3, "0 1 0 1\n").is_err());
    }
}
