//! Loopless undirected multigraphs with sparse per-pair multiplicities.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// An edge instance: the pair `u < v` and which parallel copy of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub u: usize,
    pub v: usize,
    pub copy: usize,
}

impl EdgeRef {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Loopless multigraph on vertices `0..n`.
///
/// Adjacency is stored symmetrically; degrees are kept up to date on every
/// mutation so `max_degree` is a cheap scan.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    adj: Vec<BTreeMap<usize, usize>>,
    deg: Vec<usize>,
    edges: usize,
}

impl Serialize for Multigraph {
    /// `{"vertices": n, "pairs": [[u, v, multiplicity], ...]}`.
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<(usize, usize, usize)> = self.pairs().collect();
        let mut st = ser.serialize_struct("Multigraph", 2)?;
        st.serialize_field("vertices", &self.vertex_count())?;
        st.serialize_field("pairs", &pairs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Multigraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: usize,
            pairs: Vec<(usize, usize, usize)>,
        }
        let raw = Raw::deserialize(de)?;
        Multigraph::from_pairs(raw.vertices, &raw.pairs).map_err(serde::de::Error::custom)
    }
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            adj: vec![BTreeMap::new(); n],
            deg: vec![0; n],
            edges: 0,
        }
    }

    /// Builds a graph from a list of edges; repeated pairs become parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v, k) in pairs {
            g.add_edges(u, v, k)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of distinct adjacent pairs.
    pub fn pair_count(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            input(format!("vertex {v} out of range 0..{}", self.vertex_count()))
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeMap::new());
        self.deg.push(0);
        self.vertex_count() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edges(u, v, 1)
    }

    pub fn add_edges(&mut self, u: usize, v: usize, k: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return input(format!("loop at vertex {u}"));
        }
        if k == 0 {
            return Ok(());
        }
        *self.adj[u].entry(v).or_insert(0) += k;
        *self.adj[v].entry(u).or_insert(0) += k;
        self.deg[u] += k;
        self.deg[v] += k;
        self.edges += k;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.remove_edges(u, v, 1)
    }

    pub fn remove_edges(&mut self, u: usize, v: usize, k: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let have = self.multiplicity(u, v);
        if have < k {
            return input(format!("cannot remove {k} copies of {u}-{v}; only {have} present"));
        }
        if k == 0 {
            return Ok(());
        }
        for (a, b) in [(u, v), (v, u)] {
            let left = have - k;
            if left == 0 {
                self.adj[a].remove(&b);
            } else {
                self.adj[a].insert(b, left);
            }
        }
        self.deg[u] -= k;
        self.deg[v] -= k;
        self.edges -= k;
        Ok(())
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj.get(u).and_then(|m| m.get(&v)).copied().unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.deg
    }

    pub fn simple_degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Largest multiplicity over pairs at `v`, 0 when isolated.
    pub fn vertex_multiplicity(&self, v: usize) -> usize {
        self.adj[v].values().copied().max().unwrap_or(0)
    }

    /// `(d(v), simple degree, μ(v))`.
    pub fn degree_profile(&self, v: usize) -> Result<(usize, usize, usize)> {
        self.check_vertex(v)?;
        Ok((self.degree(v), self.simple_degree(v), self.vertex_multiplicity(v)))
    }

    pub fn max_degree(&self) -> usize {
        self.deg.iter().copied().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.deg.iter().copied().min().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.vertex_multiplicity(v))
            .max()
            .unwrap_or(0)
    }

    /// Neighbors of `v` with the multiplicity of each pair, ascending.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().map(|(&u, &k)| (u, k))
    }

    /// All pairs `(u, v, mult)` with `u < v`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, m)| {
            m.range(u + 1..).map(move |(&v, &k)| (u, v, k))
        })
    }

    /// Every edge instance in canonical order (pair order, then copy).
    pub fn edge_instances(&self) -> Vec<EdgeRef> {
        let mut out = Vec::with_capacity(self.edges);
        for (u, v, k) in self.pairs() {
            out.extend((0..k).map(|copy| EdgeRef { u, v, copy }));
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.pairs().all(|(_, _, k)| k == 1)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    pub fn deficiency(&self, v: usize) -> Result<usize> {
        if self.vertex_count() == 0 {
            return input("deficiency of an empty graph");
        }
        self.check_vertex(v)?;
        Ok(self.max_degree() - self.degree(v))
    }

    /// Sum of `Δ − d(v)` over all vertices.
    pub fn total_deficiency(&self) -> Result<usize> {
        if self.vertex_count() == 0 {
            return input("deficiency of an empty graph");
        }
        let d = self.max_degree();
        Ok(self.deg.iter().map(|&x| d - x).sum())
    }

    fn mask(&self, s: &[usize]) -> Result<Vec<bool>> {
        let mut m = vec![false; self.vertex_count()];
        for &v in s {
            self.check_vertex(v)?;
            m[v] = true;
        }
        Ok(m)
    }

    /// `G[S]` on vertices relabeled `0..|S|` in ascending order of `S`.
    ///
    /// The second value maps each new label to its original vertex.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Multigraph, Vec<usize>)> {
        let mask = self.mask(s)?;
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&v| mask[v]).collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Multigraph::new(keep.len());
        for &u in &keep {
            for (&v, &k) in self.adj[u].range(u + 1..) {
                if mask[v] {
                    h.add_edges(index[u], index[v], k)?;
                }
            }
        }
        Ok((h, keep))
    }

    /// Spanning subgraph keeping only edges with one end in `a` and the other in `b`.
    pub fn bipartite_between(&self, a: &[usize], b: &[usize]) -> Result<Multigraph> {
        let ma = self.mask(a)?;
        let mb = self.mask(b)?;
        if let Some(v) = (0..self.vertex_count()).find(|&v| ma[v] && mb[v]) {
            return input(format!("sets overlap at vertex {v}"));
        }
        let mut h = Multigraph::new(self.vertex_count());
        for (u, v, k) in self.pairs() {
            if (ma[u] && mb[v]) || (mb[u] && ma[v]) {
                h.add_edges(u, v, k)?;
            }
        }
        Ok(h)
    }

    /// `e(G[S])`.
    pub fn edges_within(&self, s: &[usize]) -> usize {
        let mut mask = vec![false; self.vertex_count()];
        for &v in s {
            mask[v] = true;
        }
        self.pairs()
            .filter(|&(u, v, _)| mask[u] && mask[v])
            .map(|(_, _, k)| k)
            .sum()
    }

    /// `e_G(V1, V2)` for disjoint sets.
    pub fn edges_between(&self, a: &[usize], b: &[usize]) -> usize {
        let mut side = vec![0u8; self.vertex_count()];
        for &v in a {
            side[v] |= 1;
        }
        for &v in b {
            side[v] |= 2;
        }
        self.pairs()
            .filter(|&(u, v, _)| (side[u] & 1 != 0 && side[v] & 2 != 0) || (side[u] & 2 != 0 && side[v] & 1 != 0))
            .map(|(_, _, k)| k)
            .sum()
    }

    /// Edges leaving `s`, that is `e(S, V∖S)`.
    pub fn boundary(&self, s: &[usize]) -> usize {
        let mut mask = vec![false; self.vertex_count()];
        for &v in s {
            mask[v] = true;
        }
        s.iter()
            .map(|&u| self.neighbors(u).filter(|&(v, _)| !mask[v]).map(|(_, k)| k).sum::<usize>())
            .sum()
    }

    /// The underlying simple graph.
    pub fn underlying_simple(&self) -> Multigraph {
        let mut h = Multigraph::new(self.vertex_count());
        for (u, v, _) in self.pairs() {
            h.add_edge(u, v).expect("valid pair");
        }
        h
    }

    /// True when every pair of `self` appears in `other` with at least the same multiplicity.
    pub fn is_subgraph_of(&self, other: &Multigraph) -> bool {
        self.vertex_count() <= other.vertex_count()
            && self.pairs().all(|(u, v, k)| other.multiplicity(u, v) >= k)
    }

    /// Adds every edge of `other` (which must not have more vertices).
    pub fn union_with(&mut self, other: &Multigraph) -> Result<()> {
        if other.vertex_count() > self.vertex_count() {
            return input("union operand has more vertices");
        }
        for (u, v, k) in other.pairs() {
            self.add_edges(u, v, k)?;
        }
        Ok(())
    }

    /// Two-coloring of the vertices, or an odd cycle as a vertex sequence.
    pub fn bipartition(&self) -> Result<Vec<bool>> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        for root in 0..n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for (w, _) in self.neighbors(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(!side[u].unwrap());
                            parent[w] = u;
                            depth[w] = depth[u] + 1;
                            queue.push_back(w);
                        }
                        Some(s) if s == side[u].unwrap() => {
                            return Err(Error::NotBipartite {
                                cycle: odd_cycle(&parent, &depth, u, w),
                            });
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_ok()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut comp = vec![r];
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                for (w, _) in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Checks the handshake identity and adjacency symmetry.
    pub fn audit(&self) -> Result<()> {
        let mut total = 0;
        for (u, m) in self.adj.iter().enumerate() {
            let d: usize = m.values().sum();
            if d != self.deg[u] {
                return Err(Error::Internal(format!("cached degree of {u} is stale")));
            }
            for (&v, &k) in m {
                if v == u || k == 0 || self.multiplicity(v, u) != k {
                    return Err(Error::Internal(format!("bad adjacency entry {u}-{v}")));
                }
            }
            total += d;
        }
        if total != 2 * self.edges {
            return Err(Error::Internal("handshake identity violated".into()));
        }
        Ok(())
    }

    /// Edge-list text: `n m` then one `u v mult` line per distinct pair.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count(), self.pair_count());
        for (u, v, k) in self.pairs() {
            let _ = writeln!(s, "{u} {v} {k}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Input("empty graph file".into()))?;
        let head = parse_ints(header, 2)?;
        let (n, m) = (head[0], head[1]);
        let mut g = Multigraph::new(n);
        let mut count = 0;
        for line in lines {
            let f = parse_ints(line, 3)?;
            if f[2] == 0 {
                return input(format!("zero multiplicity in line '{line}'"));
            }
            if g.multiplicity(f[0], f[1]) > 0 {
                return input(format!("pair {}-{} listed twice", f[0], f[1]));
            }
            g.add_edges(f[0], f[1], f[2])?;
            count += 1;
        }
        if count != m {
            return input(format!("header promises {m} pairs, found {count}"));
        }
        Ok(g)
    }

    /// DOT description of the underlying simple graph.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v, _) in self.pairs() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

fn parse_ints(line: &str, want: usize) -> Result<Vec<usize>> {
    let out: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Input(format!("bad integer in '{line}': {e}")))?;
    if out.len() != want {
        return input(format!("expected {want} integers in '{line}'"));
    }
    Ok(out)
}

fn odd_cycle(parent: &[usize], depth: &[usize], a: usize, b: usize) -> Vec<usize> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Multigraph {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn degree_profiles() {
        assert_eq!(complete(3).degree_profile(0).unwrap(), (2, 2, 1));
        let g = Multigraph::from_pairs(2, &[(0, 1, 3)]).unwrap();
        assert_eq!(g.degree_profile(0).unwrap(), (3, 1, 3));
        let g = Multigraph::new(1);
        assert_eq!(g.degree_profile(0).unwrap(), (0, 0, 0));
        assert!(matches!(g.degree_profile(4), Err(Error::Input(_))));
    }

    #[test]
    fn induced_and_between() {
        let k4 = complete(4);
        let (h, map) = k4.induced_subgraph(&[0, 2, 3]).unwrap();
        assert_eq!(h, complete(3));
        assert_eq!(map, vec![0, 2, 3]);
        let (same, _) = k4.induced_subgraph(&[3, 2, 1, 0]).unwrap();
        assert_eq!(same, k4);
        let c4 = k4.bipartite_between(&[0, 1], &[2, 3]).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.is_regular() && c4.max_degree() == 2);
        assert_eq!(k4.bipartite_between(&[0, 1], &[]).unwrap().edge_count(), 0);
        let p = complete(3).bipartite_between(&[0], &[1, 2]).unwrap();
        assert_eq!(p.edge_count(), 2);
        assert!(k4.bipartite_between(&[0, 1], &[1]).is_err());
    }

    #[test]
    fn deficiencies() {
        let k4 = complete(4);
        assert_eq!(k4.total_deficiency().unwrap(), 0);
        let star = Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.deficiency(0).unwrap(), 0);
        assert_eq!(star.deficiency(2).unwrap(), 2);
        assert_eq!(star.total_deficiency().unwrap(), 6);
        let mut k6 = complete(6);
        k6.remove_edge(0, 1).unwrap();
        let defs: Vec<usize> = (0..6).map(|v| k6.deficiency(v).unwrap()).collect();
        assert_eq!(defs, vec![1, 1, 0, 0, 0, 0]);
        assert!(Multigraph::new(0).total_deficiency().is_err());
    }

    #[test]
    fn odd_cycle_witness() {
        let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        match g.bipartition() {
            Err(Error::NotBipartite { cycle }) => {
                assert_eq!(cycle.len() % 2, 1);
                for i in 0..cycle.len() {
                    assert!(g.multiplicity(cycle[i], cycle[(i + 1) % cycle.len()]) > 0);
                }
            }
            other => panic!("expected odd cycle, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Multigraph::from_pairs(4, &[(0, 1, 2), (2, 3, 1), (1, 3, 3)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(Multigraph::parse_edge_list(&text).unwrap(), g);
        assert!(Multigraph::parse_edge_list("2 1\n0 0 1\n").is_err());
        assert!(Multigraph::parse_edge_list("2 2\n0 1 1\n").is_err());
        assert!(g.to_dot().contains("1 -- 3"));
    }
}
