use serde::Serialize;

use super::exact::{try_color_exact, DEFAULT_NODE_LIMIT};
use super::state::ColorState;
use super::vizing::{color_bipartite_konig, extend_edge, kempe_repair};
use super::{EdgeColoring, UNCOLORED};
use crate::error::{domain, Error, Result};
use crate::multigraph::Multigraph;
use crate::overfull::{find_delta_overfull_subgraph, OverfullCertificate};

/// Largest edge count for which the exact fallback runs.
const EXACT_FALLBACK_EDGES: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NearlyBipartiteOutcome {
    /// A proper coloring with `Δ` colors.
    Colored(EdgeColoring),
    /// A `Δ`-overfull subgraph, so `χ' > Δ`.
    Overfull(OverfullCertificate),
}

/// `Some(None)` if `g` is bipartite, `Some(Some(v))` for the lowest vertex whose
/// deletion leaves a bipartite graph, `None` if no such vertex exists.
pub fn apex_vertex(g: &Multigraph) -> Option<Option<usize>> {
    if g.is_bipartite() {
        return Some(None);
    }
    (0..g.vertex_count()).find(|&v| without_vertex(g, v).is_bipartite()).map(Some)
}

fn without_vertex(g: &Multigraph, v: usize) -> Multigraph {
    let mut h = g.clone();
    let nbrs: Vec<(usize, usize)> = h.neighbors(v).collect();
    for (u, k) in nbrs {
        h.remove_edges(v, u, k).expect("edge present");
    }
    h
}

/// Colors a nearly-bipartite multigraph with `Δ` colors, or proves that
/// impossible with a `Δ`-overfull subgraph.
///
/// The bipartite part is colored by König's method, then the apex edges are
/// inserted with fans and Kempe exchanges; exact search settles the rest.
pub fn color_nearly_bipartite(g: &Multigraph) -> Result<NearlyBipartiteOutcome> {
    let Some(apex) = apex_vertex(g) else {
        return domain("graph is not nearly bipartite");
    };
    let Some(apex) = apex else {
        return Ok(NearlyBipartiteOutcome::Colored(color_bipartite_konig(g)?));
    };
    let delta = g.max_degree();
    let base = color_bipartite_konig(&without_vertex(g, apex))?;
    let mut start = EdgeColoring::uncolored(g, delta);
    for (e, &c) in base.edges().iter().zip(base.colors()) {
        let idx = start.index_of(*e).expect("edge of g − v is an edge of g");
        start.set(idx, c)?;
    }
    let mut s = ColorState::from_coloring(&start);
    let open: Vec<usize> = (0..s.ends.len()).filter(|&e| s.color[e] == UNCOLORED).collect();
    let mut done = true;
    for e in open {
        if !extend_edge(&mut s, e) {
            done = false;
            break;
        }
    }
    if !done {
        let budget = 200 * s.ends.len() + 100;
        done = kempe_repair(&mut s, apex as u64, budget);
    }
    if done {
        s.write_back(&mut start);
        return Ok(NearlyBipartiteOutcome::Colored(start));
    }
    if g.edge_count() <= EXACT_FALLBACK_EDGES {
        if let Some(c) = try_color_exact(g, delta, DEFAULT_NODE_LIMIT)? {
            return Ok(NearlyBipartiteOutcome::Colored(c));
        }
    }
    let cert = find_delta_overfull_subgraph(g)?;
    if cert.found() {
        return Ok(NearlyBipartiteOutcome::Overfull(cert));
    }
    if g.edge_count() <= EXACT_FALLBACK_EDGES {
        return Err(Error::Internal(
            "nearly-bipartite graph has no Δ-coloring and no Δ-overfull subgraph".into(),
        ));
    }
    Err(Error::Resource("recoloring did not finish and the graph is too large for exact search".into()))
}
