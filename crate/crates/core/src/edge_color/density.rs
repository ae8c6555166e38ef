use num_rational::Ratio;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::multigraph::Multigraph;

/// Default vertex cap for exhaustive subset searches.
pub const DENSITY_CAP: usize = 20;

/// `ρ(G)` with an odd vertex set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityValue {
    #[serde(serialize_with = "ratio_text")]
    pub value: Ratio<usize>,
    pub witness: Vec<usize>,
}

fn ratio_text<S: serde::Serializer>(r: &Ratio<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Edge counts `e(G[S])` for every subset mask `S` of the vertices.
pub(crate) fn subset_edge_counts(g: &Multigraph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut adj = vec![0u32; n * n];
    for (u, v, k) in g.pairs() {
        adj[u * n + v] = k as u32;
        adj[v * n + u] = k as u32;
    }
    let mut e = vec![0u32; 1 << n];
    for s in 1usize..(1 << n) {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let mut add = 0;
        let mut r = rest;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            add += adj[v * n + u];
            r &= r - 1;
        }
        e[s] = e[rest] + add;
    }
    e
}

pub(crate) fn mask_members(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn density_rho(g: &Multigraph) -> Result<DensityValue> {
    density_rho_with_cap(g, DENSITY_CAP)
}

/// `max e(H)/⌊|H|/2⌋` over odd induced subgraphs with at least 3 vertices.
pub fn density_rho_with_cap(g: &Multigraph, cap: usize) -> Result<DensityValue> {
    let n = g.vertex_count();
    if n < 3 {
        return input("density needs at least 3 vertices");
    }
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::Resource(format!("{n} vertices exceed the exhaustive cap {cap}")));
    }
    let e = subset_edge_counts(g);
    let mut best: Option<(usize, usize, usize)> = None;
    for s in 1usize..(1 << n) {
        let size = s.count_ones() as usize;
        if size < 3 || size % 2 == 0 {
            continue;
        }
        let (num, den) = (e[s] as usize, size / 2);
        let better = match best {
            None => true,
            Some((bn, bd, _)) => num * bd > bn * den,
        };
        if better {
            best = Some((num, den, s));
        }
    }
    let (num, den, s) = best.expect("n >= 3 gives an odd subset");
    Ok(DensityValue { value: Ratio::new(num, den), witness: mask_members(s) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle};

    #[test]
    fn density_examples() {
        let r = density_rho(&complete(5)).unwrap();
        assert_eq!(r.value, Ratio::from_integer(5));
        assert_eq!(r.witness, vec![0, 1, 2, 3, 4]);
        let r = density_rho(&cycle(5).unwrap()).unwrap();
        assert_eq!(r.value, Ratio::new(5, 2));
        assert_eq!(r.witness.len(), 5);
        let doubled = Multigraph::from_pairs(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert_eq!(density_rho(&doubled).unwrap().value, Ratio::from_integer(6));
        assert!(density_rho(&complete(2)).is_err());
        assert!(matches!(density_rho_with_cap(&complete(6), 5), Err(Error::Resource(_))));
    }
}
