use super::state::ColorState;
use super::{check_proper, EdgeColoring};
use crate::error::{input, Result};
use crate::multigraph::Multigraph;

/// Class sizes differ by at most one.
pub fn is_equalized(c: &EdgeColoring) -> bool {
    let s = c.class_sizes();
    match (s.iter().max(), s.iter().min()) {
        (Some(a), Some(b)) => a - b <= 1,
        _ => true,
    }
}

/// Rebalances a total proper coloring so every class has `⌊e/k⌋` or `⌈e/k⌉` edges.
///
/// While the largest class `a` exceeds the smallest class `b` by two or more,
/// some component of the `a`/`b` subgraph is a path with one more `a` edge than
/// `b` edges; swapping it moves one edge from `a` to `b`.
pub fn equalize(g: &Multigraph, c: &EdgeColoring) -> Result<EdgeColoring> {
    if !check_proper(g, c)?.proper {
        return input("equalize needs a proper coloring");
    }
    if !c.is_total() {
        return input("equalize needs a total coloring");
    }
    let mut s = ColorState::from_coloring(c);
    let mut sizes = c.class_sizes();
    if sizes.is_empty() {
        return Ok(c.clone());
    }
    loop {
        let (a, b) = extremes(&sizes);
        if sizes[a - 1] - sizes[b - 1] <= 1 {
            break;
        }
        let path = (0..s.n)
            .filter(|&v| s.is_missing(v, b) && !s.is_missing(v, a))
            .map(|v| s.chain(v, a, b).0)
            .find(|p| p.len() % 2 == 1)
            .expect("an a-heavy path exists while |a| > |b| + 1");
        s.swap(&path, a, b);
        sizes[a - 1] -= 1;
        sizes[b - 1] += 1;
    }
    let mut out = c.clone();
    s.write_back(&mut out);
    Ok(out)
}

fn extremes(sizes: &[usize]) -> (usize, usize) {
    let mut a = 0;
    let mut b = 0;
    for i in 0..sizes.len() {
        if sizes[i] > sizes[a] {
            a = i;
        }
        if sizes[i] < sizes[b] {
            b = i;
        }
    }
    (a + 1, b + 1)
}
