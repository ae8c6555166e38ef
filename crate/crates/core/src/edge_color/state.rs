//! Mutable coloring state with constant-time "which edge has color c at v".

use super::{EdgeColoring, UNCOLORED};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub(crate) struct ColorState {
    pub n: usize,
    pub k: usize,
    pub ends: Vec<(usize, usize)>,
    pub color: Vec<usize>,
    at: Vec<usize>,
}

impl ColorState {
    pub fn new(n: usize, k: usize, ends: Vec<(usize, usize)>) -> Self {
        let m = ends.len();
        ColorState { n, k, ends, color: vec![UNCOLORED; m], at: vec![NONE; n * (k + 1)] }
    }

    /// Loads a proper coloring; panics on conflicts, which callers rule out first.
    pub fn from_coloring(c: &EdgeColoring) -> Self {
        let ends = c.edges().iter().map(|e| (e.u, e.v)).collect();
        let mut s = ColorState::new(c.vertex_count(), c.palette(), ends);
        for (i, &col) in c.colors().iter().enumerate() {
            if col != UNCOLORED {
                s.assign(i, col);
            }
        }
        s
    }

    pub fn write_back(&self, c: &mut EdgeColoring) {
        c.set_palette(c.palette().max(self.k)).expect("palette grows");
        for (i, &col) in self.color.iter().enumerate() {
            c.set(i, col).expect("in range");
        }
    }

    #[inline]
    pub fn edge_at(&self, v: usize, c: usize) -> Option<usize> {
        let e = self.at[v * (self.k + 1) + c];
        (e != NONE).then_some(e)
    }

    #[inline]
    pub fn is_missing(&self, v: usize, c: usize) -> bool {
        self.at[v * (self.k + 1) + c] == NONE
    }

    pub fn missing(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.k).filter(move |&c| self.is_missing(v, c))
    }

    pub fn first_common_missing(&self, u: usize, v: usize) -> Option<usize> {
        (1..=self.k).find(|&c| self.is_missing(u, c) && self.is_missing(v, c))
    }

    pub fn other(&self, e: usize, x: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == x {
            b
        } else {
            a
        }
    }

    /// Sets the color of `e` (UNCOLORED clears it). The new color must be free at both ends.
    pub fn assign(&mut self, e: usize, c: usize) {
        let (u, v) = self.ends[e];
        let old = self.color[e];
        let w = self.k + 1;
        if old != UNCOLORED {
            self.at[u * w + old] = NONE;
            self.at[v * w + old] = NONE;
        }
        if c != UNCOLORED {
            debug_assert!(self.is_missing(u, c) && self.is_missing(v, c), "color clash");
            self.at[u * w + c] = e;
            self.at[v * w + c] = e;
        }
        self.color[e] = c;
    }

    /// The maximal path of colors `a`/`b` leaving `v`, starting with whichever
    /// of the two is present at `v`. Returns its edges and far endpoint.
    ///
    /// `v` must miss at least one of the colors, so it is a path end.
    pub fn chain(&self, v: usize, a: usize, b: usize) -> (Vec<usize>, usize) {
        let mut edges = Vec::new();
        let mut cur = v;
        let mut want = if self.is_missing(v, a) { b } else { a };
        while let Some(e) = self.edge_at(cur, want) {
            if edges.last() == Some(&e) {
                break;
            }
            edges.push(e);
            cur = self.other(e, cur);
            want = if want == a { b } else { a };
            if cur == v {
                break;
            }
        }
        (edges, cur)
    }

    /// Exchanges colors `a` and `b` on the given edges.
    pub fn swap(&mut self, edges: &[usize], a: usize, b: usize) {
        let old: Vec<usize> = edges.iter().map(|&e| self.color[e]).collect();
        for &e in edges {
            self.assign(e, UNCOLORED);
        }
        for (&e, &c) in edges.iter().zip(&old) {
            self.assign(e, if c == a { b } else { a });
        }
    }

    pub fn uncolored_edges(&self) -> Vec<usize> {
        (0..self.ends.len()).filter(|&e| self.color[e] == UNCOLORED).collect()
    }

    pub fn edges_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.k).filter_map(move |c| self.edge_at(v, c))
    }
}
