//! Degree sequences: graphicality, realizations, and the admissible-sequence
//! bipartite realization used to regularize a graph.

use serde::Serialize;

use crate::error::{domain, input, Error, Result};
use crate::multigraph::Multigraph;

/// A non-increasing sequence of non-negative integers of length at least 2.
///
/// Input may be given in any order; `permutation()[i]` is the original
/// position of `values()[i]`. Ties keep their original relative order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    values: Vec<usize>,
    perm: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(raw: &[usize]) -> Result<Self> {
        if raw.len() < 2 {
            return input("a degree sequence needs at least two entries");
        }
        let mut perm: Vec<usize> = (0..raw.len()).collect();
        perm.sort_by(|&a, &b| raw[b].cmp(&raw[a]).then(a.cmp(&b)));
        let values = perm.iter().map(|&i| raw[i]).collect();
        Ok(DegreeSequence { values, perm })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }

    /// Even sum and largest entry at most the sum of the others.
    pub fn is_admissible(&self) -> bool {
        self.admissibility().is_ok()
    }

    pub fn admissibility(&self) -> Result<()> {
        let s = self.sum();
        if s % 2 != 0 {
            return domain(format!("sequence sum {s} is odd"));
        }
        if self.values[0] > s - self.values[0] {
            return domain(format!(
                "largest entry {} exceeds the sum {} of the others",
                self.values[0],
                s - self.values[0]
            ));
        }
        Ok(())
    }
}

/// Parses whitespace-separated integers, one sequence per non-empty line.
pub fn parse_sequences(text: &str) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Input(format!("bad entry '{t}': {e}"))))
                .collect()
        })
        .collect()
}

/// The circulant graph joining `v_j` to `v_{j±i}` for `i ∈ [1, d/2]`.
pub fn build_regular_circulant(m: usize, d: usize) -> Result<Multigraph> {
    if m < 3 || d < 2 || d % 2 != 0 || d >= m {
        return input(format!("circulant needs even d with 2 <= d < m and m >= 3 (m={m}, d={d})"));
    }
    let mut g = Multigraph::new(m);
    for j in 0..m {
        for i in 1..=d / 2 {
            let w = (j + i) % m;
            if g.multiplicity(j, w) == 0 {
                g.add_edge(j, w)?;
            }
        }
    }
    Ok(g)
}

/// One reduction of the Havel–Hakimi procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    /// Position in the sorted sequence of the removed entry.
    pub vertex: usize,
    pub degree: usize,
    /// Positions that were decremented.
    pub joined: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphicTrace {
    pub graphic: bool,
    pub steps: Vec<ReductionStep>,
    pub failure: Option<String>,
}

fn havel_hakimi(values: &[usize]) -> GraphicTrace {
    let mut rest = values.to_vec();
    let mut alive = vec![true; rest.len()];
    let mut steps = Vec::new();
    let fail = |steps, msg: String| GraphicTrace { graphic: false, steps, failure: Some(msg) };
    if values.iter().sum::<usize>() % 2 != 0 {
        return fail(steps, "odd degree sum".into());
    }
    loop {
        let mut order: Vec<usize> = (0..rest.len()).filter(|&i| alive[i]).collect();
        order.sort_by(|&a, &b| rest[b].cmp(&rest[a]).then(a.cmp(&b)));
        let Some(&top) = order.first() else { break };
        let s = rest[top];
        if s == 0 {
            break;
        }
        alive[top] = false;
        let targets: Vec<usize> = order[1..].iter().copied().take(s).collect();
        if targets.len() < s || targets.iter().any(|&t| rest[t] == 0) {
            let msg = format!("entry {s} at position {top} cannot be joined to {s} positive entries");
            return fail(steps, msg);
        }
        for &t in &targets {
            rest[t] -= 1;
        }
        rest[top] = 0;
        steps.push(ReductionStep { vertex: top, degree: s, joined: targets });
    }
    GraphicTrace { graphic: true, steps, failure: None }
}

/// Havel–Hakimi test; removes the largest entry and joins it to the next largest, ties by lowest position.
pub fn is_graphic(seq: &DegreeSequence) -> GraphicTrace {
    havel_hakimi(seq.values())
}

/// A simple graph in which original vertex `permutation()[i]` has degree `values()[i]`.
pub fn realize_graphic(seq: &DegreeSequence) -> Result<Multigraph> {
    let trace = is_graphic(seq);
    if !trace.graphic {
        return domain(format!("sequence is not graphic: {}", trace.failure.unwrap_or_default()));
    }
    let mut g = Multigraph::new(seq.len());
    for step in &trace.steps {
        for &t in &step.joined {
            g.add_edge(seq.perm[step.vertex], seq.perm[t])?;
        }
    }
    Ok(g)
}

/// A simple graph with `t` vertices of degree `d` (vertices `0..t`) and `m − t` of degree `d − 1`.
pub fn realize_near_regular(m: usize, d: usize, t: usize) -> Result<Multigraph> {
    if d < 2 || m < d + 1 {
        return input(format!("near-regular realization needs m >= d+1 >= 3 (m={m}, d={d})"));
    }
    if t == 0 || t > m {
        return input(format!("t={t} must lie in [1, {m}]"));
    }
    if (t * d + (m - t) * (d - 1)) % 2 != 0 {
        return input("degree sum is odd");
    }
    let mut raw = vec![d; t];
    raw.resize(m, d - 1);
    realize_graphic(&DegreeSequence::new(&raw)?)
}

/// A bipartite multigraph `L` on positions `0..m` of a sorted sequence together
/// with the even split index `p`.
///
/// Position `i - 1` plays the role of `v_i`. When `p == m` there is no `v_{p+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteRealization {
    pub graph: Multigraph,
    pub p: usize,
}

impl BipartiteRealization {
    /// Whether `v_{p+1}` exists.
    pub fn has_successor(&self) -> bool {
        self.p < self.graph.vertex_count()
    }
}

type PairList = Vec<(usize, usize, usize)>;

fn split_realization(d: &[usize]) -> Result<(PairList, usize)> {
    let m = d.len();
    if m == 2 {
        return Ok((Vec::new(), 2));
    }
    let at = |s: &[usize], i: usize| if (1..=m).contains(&i) { s[i - 1] } else { 0 };
    let Some(i0) = (1..=m).step_by(2).find(|&i| at(d, i) > at(d, i + 1)) else {
        // with m odd this means d_m = 0, and v_m can serve as v_{p+1}
        return Ok((Vec::new(), if m % 2 == 0 { m } else { m - 1 }));
    };
    if i0 == m {
        return Ok((Vec::new(), m - 1));
    }
    let dm = d[m - 1];
    let gap = d[i0 - 1] - d[i0];
    let mut edges = Vec::new();
    if gap >= dm {
        if dm > 0 {
            edges.push((i0 - 1, m - 1, dm));
        }
        let mut f = d[..m - 1].to_vec();
        f[i0 - 1] -= dm;
        let (sub, q) = split_realization(&f)?;
        edges.extend(sub);
        return Ok((edges, q));
    }
    if i0 + 1 == m {
        return no_split(d, i0);
    }
    edges.push((i0 - 1, m - 1, gap));
    let mut f = d.to_vec();
    f[i0 - 1] = d[i0];
    f[m - 1] = dm - gap;
    let j0 = (i0 + 2..=m)
        .step_by(2)
        .find(|&j| at(&f, j) > at(&f, j + 1))
        .expect("f_{m-1} > f_m guarantees an index");
    if j0 == m {
        return Ok((edges, m - 1));
    }
    let fm = f[m - 1];
    let gap2 = f[j0 - 1] - f[j0];
    if gap2 >= fm {
        if fm > 0 {
            edges.push((j0 - 1, m - 1, fm));
        }
        let mut g = f[..m - 1].to_vec();
        g[j0 - 1] -= fm;
        let (sub, q) = split_realization(&g)?;
        edges.extend(sub);
        return Ok((edges, q));
    }
    if j0 + 1 == m {
        return no_split(&f, j0);
    }
    edges.push((j0 - 1, m - 1, gap2));
    let mut g = f.clone();
    g[j0 - 1] = f[j0];
    g[m - 1] = fm - gap2;
    let off = j0 - 1;
    let (sub, q) = split_realization(&g[off..])?;
    edges.extend(sub.into_iter().map(|(a, b, k)| (a + off, b + off, k)));
    Ok((edges, q + off))
}

// The last two entries d_{m-1} > d_m with d_{m-1} - d_m < d_m, every earlier
// odd pair equal: v_m would need edges into a side whose degrees are forced to 0.
fn no_split<T>(d: &[usize], i: usize) -> Result<T> {
    domain(format!(
        "no split realization: in {d:?} the odd index {i} is followed only by v{} and {} - {} < {}",
        i + 1,
        d[i - 1],
        d[i],
        d[i]
    ))
}

/// Realizes an admissible sequence as `(L, p)` by the inductive construction
/// on `i0` and `j0`; the output is fully determined by the sequence.
pub fn realize_admissible_bipartite(seq: &DegreeSequence) -> Result<BipartiteRealization> {
    seq.admissibility()?;
    let (pairs, p) = split_realization(seq.values())?;
    let graph = Multigraph::from_pairs(seq.len(), &pairs)?;
    let r = BipartiteRealization { graph, p };
    // a recursive call can return an index left of a vertex that already has
    // edges to the removed tail; the result is then not a split realization
    if let Some(bad) = verify_lemma24(seq, &r)?.checks.into_iter().find(|c| !c.pass) {
        return domain(format!(
            "no split realization: the construction breaks property ({}) at p = {p}: {}",
            bad.property,
            bad.witness.unwrap_or_default()
        ));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub property: char,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationVerdict {
    pub checks: Vec<PropertyCheck>,
}

impl RealizationVerdict {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, property: char) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

/// Checks properties (a) through (f) of a bipartite realization independently.
pub fn verify_lemma24(seq: &DegreeSequence, r: &BipartiteRealization) -> Result<RealizationVerdict> {
    let m = seq.len();
    let l = &r.graph;
    if l.vertex_count() != m {
        return input(format!("realization has {} vertices, sequence has {m}", l.vertex_count()));
    }
    let p = r.p;
    let d = |i: usize| if (1..=m).contains(&i) { seq.values()[i - 1] } else { 0 };
    let dl = |i: usize| l.degree(i - 1);
    // neighbor indices, 1-based and ascending
    let nbrs = |i: usize| -> Vec<usize> { l.neighbors(i - 1).map(|(w, _)| w + 1).collect() };

    let mut checks = Vec::new();
    let mut push = |property, witness: Option<String>| {
        checks.push(PropertyCheck { property, pass: witness.is_none(), witness });
    };

    let mut w = None;
    if p % 2 != 0 || p < 2 || p > m {
        w = Some(format!("split index {p} is not an even value in [2, {m}]"));
    }
    for i in (1..p.min(m)).step_by(2) {
        if w.is_some() {
            break;
        }
        if dl(i) != d(i) - d(i + 1) {
            w = Some(format!("d_L(v{i}) = {} but d{i} - d{} = {}", dl(i), i + 1, d(i) - d(i + 1)));
        } else if dl(i + 1) != 0 {
            w = Some(format!("d_L(v{}) = {} is not 0", i + 1, dl(i + 1)));
        }
    }
    push('a', w);

    let mut w = None;
    if p < m && dl(p + 1) > d(p + 1) {
        w = Some(format!("d_L(v{}) = {} exceeds {}", p + 1, dl(p + 1), d(p + 1)));
    }
    for i in p + 2..=m {
        if w.is_none() && dl(i) != d(i) {
            w = Some(format!("d_L(v{i}) = {} but d{i} = {}", dl(i), d(i)));
        }
    }
    push('b', w);

    let w = l
        .pairs()
        .find(|&(u, v, _)| (u < p) == (v < p))
        .map(|(u, v, _)| format!("edge v{}v{} lies inside one side", u + 1, v + 1));
    push('c', w);

    let mut w = None;
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (u, v, _) in l.pairs() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            w = Some(format!("edge v{}v{} closes a cycle", u + 1, v + 1));
            break;
        }
        parent[a] = b;
    }
    if w.is_none() {
        for v in 0..m {
            let inner = l.neighbors(v).filter(|&(x, _)| l.simple_degree(x) >= 2).count();
            if inner > 2 {
                w = Some(format!("v{} has {inner} non-leaf neighbors", v + 1));
                break;
            }
        }
    }
    push('d', w);

    let mut w = None;
    let odd: Vec<(usize, Vec<usize>)> = (1..p.min(m))
        .step_by(2)
        .map(|i| (i, nbrs(i)))
        .filter(|(_, n)| !n.is_empty())
        .collect();
    for (i, n) in &odd {
        if n.last().unwrap() - n[0] + 1 != n.len() {
            w = Some(format!("neighbors of v{i} are not consecutive: {n:?}"));
            break;
        }
    }
    if w.is_none() {
        w = ordered_intervals(&odd);
    }
    push('e', w);

    let rest: Vec<(usize, Vec<usize>)> = (p + 1..=m)
        .map(|i| (i, nbrs(i)))
        .filter(|(_, n)| !n.is_empty())
        .collect();
    push('f', ordered_intervals(&rest));

    Ok(RealizationVerdict { checks })
}

/// For consecutive entries `i < j`, the smallest neighbor of `i` must be at least the largest of `j`.
fn ordered_intervals(rows: &[(usize, Vec<usize>)]) -> Option<String> {
    rows.windows(2).find_map(|w| {
        let (i, a) = &w[0];
        let (j, b) = &w[1];
        (a[0] < *b.last().unwrap())
            .then(|| format!("v{i} has neighbor v{} below v{j}'s neighbor v{}", a[0], b.last().unwrap()))
    })
}

/// Multiset of values, used for degree audits.
pub fn degree_multiset(g: &Multigraph) -> Vec<usize> {
    let mut d = g.degrees().to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn seq(v: &[usize]) -> DegreeSequence {
        DegreeSequence::new(v).unwrap()
    }

    #[test]
    fn sorting_keeps_permutation() {
        let s = seq(&[1, 3, 2, 3]);
        assert_eq!(s.values(), &[3, 3, 2, 1]);
        assert_eq!(s.permutation(), &[1, 3, 2, 0]);
    }

    #[test]
    fn circulant_shapes() {
        let c5 = build_regular_circulant(5, 2).unwrap();
        assert!(c5.is_regular() && c5.edge_count() == 5 && c5.components().len() == 1);
        let g = build_regular_circulant(6, 4).unwrap();
        for j in 0..6 {
            let n: Vec<usize> = g.neighbors(j).map(|(w, _)| w).collect();
            let expect: BTreeSet<usize> = [1, 2, 4, 5].iter().map(|o| (j + o) % 6).collect();
            assert_eq!(n.into_iter().collect::<BTreeSet<_>>(), expect);
        }
        assert!(build_regular_circulant(4, 3).is_err());
    }

    #[test]
    fn graphic_examples() {
        assert!(is_graphic(&seq(&[3, 3, 3, 3])).graphic);
        assert!(is_graphic(&seq(&[3, 1, 1, 1])).graphic);
        assert!(!is_graphic(&seq(&[3, 2, 1])).graphic);
        let tri = realize_graphic(&seq(&[2, 2, 2])).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(degree_multiset(&realize_graphic(&seq(&[3, 3, 2, 2])).unwrap()), vec![3, 3, 2, 2]);
        assert!(matches!(realize_graphic(&seq(&[1, 1, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn unsorted_realization_keeps_labels() {
        let g = realize_graphic(&seq(&[1, 2, 1])).unwrap();
        assert_eq!(g.degrees(), &[1, 2, 1]);
    }

    #[test]
    fn near_regular_examples() {
        let g = realize_near_regular(4, 3, 2).unwrap();
        assert_eq!(degree_multiset(&g), vec![3, 3, 2, 2]);
        assert_eq!(&g.degrees()[..2], &[3, 3]);
        let c = realize_near_regular(5, 2, 5).unwrap();
        assert!(c.is_regular() && c.edge_count() == 5);
        assert!(realize_near_regular(3, 3, 1).is_err());
    }

    #[test]
    fn split_realization_goldens() {
        let s = seq(&[3, 3]);
        let r = realize_admissible_bipartite(&s).unwrap();
        assert_eq!((r.graph.edge_count(), r.p), (0, 2));

        let s = seq(&[14, 8, 8, 7, 7, 5, 5, 4, 3, 3, 3, 2, 1, 0]);
        let r = realize_admissible_bipartite(&s).unwrap();
        assert_eq!(r.p, 8);
        assert!(verify_lemma24(&s, &r).unwrap().all_pass());

        let s = seq(&[2, 1, 1]);
        let r = realize_admissible_bipartite(&s).unwrap();
        assert_eq!(r.p, 2);
        assert_eq!(r.graph.edge_count(), 1);
        assert_eq!(r.graph.multiplicity(0, 2), 1);
    }

    #[test]
    fn constant_sequence_gives_empty_realization() {
        let s = seq(&[4, 4, 4, 4]);
        let r = realize_admissible_bipartite(&s).unwrap();
        assert_eq!((r.graph.edge_count(), r.p), (0, 4));
        assert!(!r.has_successor());
        assert!(verify_lemma24(&s, &r).unwrap().all_pass());
    }

    #[test]
    fn spurious_edge_breaks_bipartition() {
        let s = seq(&[14, 8, 8, 7, 7, 5, 5, 4, 3, 3, 3, 2, 1, 0]);
        let mut r = realize_admissible_bipartite(&s).unwrap();
        r.graph.add_edge(1, 3).unwrap();
        let v = verify_lemma24(&s, &r).unwrap();
        let c = v.check('c').unwrap();
        assert!(!c.pass);
        assert!(c.witness.as_deref().unwrap().contains("v2v4"));
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(realize_admissible_bipartite(&seq(&[5, 1, 1, 1])).is_err());
        assert!(realize_admissible_bipartite(&seq(&[2, 1])).is_err());
    }
}
