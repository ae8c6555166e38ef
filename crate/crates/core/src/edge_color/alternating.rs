use super::{check_proper, EdgeColoring, UNCOLORED};
use crate::error::{input, Result};
use crate::multigraph::{EdgeRef, Multigraph};

/// Exchanges "uncolored" and color `i` along a path that starts and ends with
/// an uncolored edge and alternates with edges of color `i`.
///
/// Both ends must miss `i`. On any violation the input is left untouched and
/// an input error is returned.
pub fn swap_alternating_path(
    g: &Multigraph,
    c: &EdgeColoring,
    path: &[EdgeRef],
    i: usize,
) -> Result<EdgeColoring> {
    if i == UNCOLORED || i > c.palette() {
        return input(format!("color {i} outside palette"));
    }
    if path.len() % 2 == 0 {
        return input("an alternating path must have odd length");
    }
    if !check_proper(g, c)?.proper {
        return input("coloring is not proper");
    }
    let idx: Vec<usize> = path
        .iter()
        .map(|&e| c.index_of(e).ok_or_else(|| crate::Error::Input(format!("no edge instance {e:?}"))))
        .collect::<Result<_>>()?;
    for (pos, &x) in idx.iter().enumerate() {
        let want = if pos % 2 == 0 { UNCOLORED } else { i };
        if c.colors()[x] != want {
            return input(format!("edge {pos} of the path breaks the alternation"));
        }
    }
    let walk = vertex_walk(path)?;
    let mut seen = std::collections::BTreeSet::new();
    if !walk.iter().all(|v| seen.insert(*v)) {
        return input("path repeats a vertex");
    }
    let ends = [walk[0], *walk.last().unwrap()];
    let present = |v: usize| c.edges().iter().zip(c.colors()).any(|(e, &col)| col == i && (e.u == v || e.v == v));
    if ends.iter().any(|&v| present(v)) {
        return input(format!("an end of the path already sees color {i}"));
    }
    let mut out = c.clone();
    for (pos, &x) in idx.iter().enumerate() {
        out.set(x, if pos % 2 == 0 { i } else { UNCOLORED })?;
    }
    if !check_proper(g, &out)?.proper {
        return input("exchange would break properness");
    }
    Ok(out)
}

/// Vertex sequence traced by consecutive edges.
pub(crate) fn vertex_walk(path: &[EdgeRef]) -> Result<Vec<usize>> {
    let first = path[0];
    let start = match path.get(1) {
        Some(next) if first.v == next.u || first.v == next.v => first.u,
        Some(_) => first.v,
        None => first.u,
    };
    let mut walk = vec![start];
    let mut cur = start;
    for e in path {
        if e.u != cur && e.v != cur {
            return input("consecutive path edges do not share a vertex");
        }
        cur = e.other(cur);
        walk.push(cur);
    }
    Ok(walk)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(u: usize, v: usize) -> EdgeRef {
        EdgeRef { u: u.min(v), v: u.max(v), copy: 0 }
    }

    #[test]
    fn single_edge() {
        let g = Multigraph::from_edges(2, &[(0, 1)]).unwrap();
        let c = EdgeColoring::uncolored(&g, 1);
        let out = swap_alternating_path(&g, &c, &[er(0, 1)], 1).unwrap();
        assert_eq!(out.colors(), &[1]);
    }

    #[test]
    fn three_edge_path() {
        // a=0 b1=1 b2=2 a2=3
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut c = EdgeColoring::uncolored(&g, 2);
        let mid = c.index_of(er(1, 2)).unwrap();
        c.set(mid, 2).unwrap();
        let path = [er(0, 1), er(1, 2), er(2, 3)];
        let out = swap_alternating_path(&g, &c, &path, 2).unwrap();
        assert_eq!(out.class_sizes()[1], c.class_sizes()[1] + 1);
        assert_eq!(out.color_of(er(1, 2)), Some(UNCOLORED));
        assert_eq!(out.color_of(er(0, 1)), Some(2));
    }

    #[test]
    fn broken_alternation_is_rejected() {
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = EdgeColoring::uncolored(&g, 2);
        let path = [er(0, 1), er(1, 2), er(2, 3)];
        assert!(swap_alternating_path(&g, &c, &path, 2).is_err());
    }
}
