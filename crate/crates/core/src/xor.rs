//! The XOR-Ising model, the J ↔ K duality, and the contour expansion of
//! the double-Ising partition function checked against brute force.

use thiserror::Error;

use crate::clusters::{ClusterError, SiteBoundary, SiteConfig};
use crate::planar_map::{dual, CombinatorialMap};

#[derive(Debug, Error, PartialEq)]
pub enum XorError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("too large: {0}")]
    TooLarge(String),
}

/// Largest vertex count for [`z_double_ising`].
pub const MAX_DOUBLE_ISING_VERTICES: usize = 14;
/// Largest edge count for [`z_contour_expansion`].
pub const MAX_EXPANSION_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorConfig {
    pub sigma1: SiteConfig,
    pub sigma2: SiteConfig,
    pub sigma_xor: SiteConfig,
}

/// Pointwise product of two spin configurations on the same map with the
/// same boundary class.
pub fn xor_of(s1: &SiteConfig, s2: &SiteConfig) -> Result<XorConfig, XorError> {
    if s1.map_ref != s2.map_ref {
        return Err(ClusterError::MapMismatch {
            expected: s1.map_ref,
            found: s2.map_ref,
        }
        .into());
    }
    if s1.states.len() != s2.states.len() {
        return Err(ClusterError::InvalidConfig("configurations differ in length".into()).into());
    }
    let free = |b: SiteBoundary| b == SiteBoundary::Free;
    if free(s1.boundary_condition) != free(s2.boundary_condition) {
        return Err(XorError::Domain(format!(
            "boundary classes differ: {:?} and {:?}",
            s1.boundary_condition, s2.boundary_condition
        )));
    }
    let boundary_condition = match (s1.boundary_condition, s2.boundary_condition) {
        (SiteBoundary::Free, _) => SiteBoundary::Free,
        (a, b) if a == b => SiteBoundary::AllPlus,
        _ => SiteBoundary::AllMinus,
    };
    let states = s1
        .states
        .iter()
        .zip(&s2.states)
        .map(|(a, b)| u8::from(a == b))
        .collect();
    Ok(XorConfig {
        sigma1: s1.clone(),
        sigma2: s2.clone(),
        sigma_xor: SiteConfig {
            map_ref: s1.map_ref,
            states,
            boundary_condition,
        },
    })
}

/// The coupling `J` with `e^{-2J} = tanh K`. The map is an involution on
/// `(0, ∞)`.
pub fn dual_coupling(k: f64) -> Result<f64, XorError> {
    if !(k > 0.0) || k.is_nan() {
        return Err(XorError::Domain(format!("K = {k} must be positive")));
    }
    // J = atanh(e^{-2K}); near K = 0 the argument is close to 1, so use
    // 1 - e^{-2K} from expm1 there.
    let x = (-2.0 * k).exp();
    Ok(if x < 0.5 {
        x.atanh()
    } else {
        0.5 * (x.ln_1p() - (-(-2.0 * k).exp_m1()).ln())
    })
}

/// Contour weight of a dual edge, `2e^{-2J} / (1 + e^{-4J}) = 1 / cosh 2J`.
pub fn dual_edge_weight(j: f64) -> f64 {
    1.0 / (2.0 * j).cosh()
}

/// Contour weight of a primal edge, `(1 - e^{-4J}) / (1 + e^{-4J}) = tanh 2J`.
pub fn primal_edge_weight(j: f64) -> f64 {
    (2.0 * j).tanh()
}

/// Literal double sum over `σ3, σ4 ∈ {±1}^V` of
/// `exp(J Σ_edges (σ3σ3' + σ4σ4'))` on a graph given by its edge list.
pub fn z_double_ising_edges(n: usize, edges: &[(usize, usize)], j: f64) -> Result<f64, XorError> {
    if n > MAX_DOUBLE_ISING_VERTICES {
        return Err(XorError::TooLarge(format!(
            "{n} vertices, limit {MAX_DOUBLE_ISING_VERTICES}"
        )));
    }
    let weights: Vec<f64> = (0..1usize << n)
        .map(|mask| {
            let energy: i64 = edges
                .iter()
                .map(|&(u, v)| {
                    if (mask >> u & 1) == (mask >> v & 1) {
                        1
                    } else {
                        -1
                    }
                })
                .sum();
            (j * energy as f64).exp()
        })
        .collect();
    let mut z = 0.0;
    for &w3 in &weights {
        for &w4 in &weights {
            z += w3 * w4;
        }
    }
    Ok(z)
}

pub fn z_double_ising(map: &CombinatorialMap, j: f64) -> Result<f64, XorError> {
    let edges: Vec<(usize, usize)> = map.edges().collect();
    z_double_ising_edges(map.num_vertices(), &edges, j)
}

/// Basis of the cycle space over GF(2) as edge bitmasks: one fundamental
/// cycle per edge outside a breadth-first spanning forest. Loops are
/// cycles on their own.
pub(crate) fn cycle_basis(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        if u != v {
            adj[v].push((u, e));
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; edges.len()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = Some((u, e));
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if tree[e] {
            continue;
        }
        let mut mask = 1u64 << e;
        let (mut a, mut b) = (u, v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let (up, pe) = parent[a].expect("non-root vertex has a parent");
            mask ^= 1u64 << pe;
            a = up;
        }
        basis.push(mask);
    }
    basis
}

/// All even subgraphs spanned by `basis`, in Gray-code order.
pub(crate) fn even_subgraphs(basis: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << basis.len());
    let mut current = 0u64;
    out.push(current);
    for i in 1..(1usize << basis.len()) {
        current ^= basis[i.trailing_zeros() as usize];
        out.push(current);
    }
    out
}

/// Contour expansion of the double-Ising partition function on a ball
/// `Λ` with its dual `Λ*` (which carries `v_∞`):
/// `C₁ Σ (1/cosh 2J)^{|P*|} (tanh 2J)^{|P|}` over even subgraphs `P ⊆ E_Λ`,
/// `P* ⊆ E_Λ*` using no edge together with its dual, where
/// `C₁ = 2^{|V|-|E|+1} (e^{2J} + e^{-2J})^{|E|}`.
pub fn z_contour_expansion(map: &CombinatorialMap, j: f64) -> Result<f64, XorError> {
    let ne = map.num_edges();
    if ne > MAX_EXPANSION_EDGES {
        return Err(XorError::TooLarge(format!(
            "{ne} edges, limit {MAX_EXPANSION_EDGES}"
        )));
    }
    if map.outer_face().is_none() {
        return Err(XorError::Domain(
            "the expansion needs a ball with an unbounded face".into(),
        ));
    }
    let primal_edges: Vec<(usize, usize)> = map.edges().collect();
    let star = dual(map);
    let dual_edges: Vec<(usize, usize)> = star.edges().collect();
    let primal = even_subgraphs(&cycle_basis(map.num_vertices(), &primal_edges));
    let duals = even_subgraphs(&cycle_basis(star.num_vertices(), &dual_edges));
    let a = dual_edge_weight(j);
    let b = primal_edge_weight(j);
    let a_pow: Vec<f64> = (0..=ne as i32).map(|k| a.powi(k)).collect();
    let b_pow: Vec<f64> = (0..=ne as i32).map(|k| b.powi(k)).collect();
    let mut sum = 0.0;
    for &p in &primal {
        let bp = b_pow[p.count_ones() as usize];
        for &s in &duals {
            if p & s == 0 {
                sum += bp * a_pow[s.count_ones() as usize];
            }
        }
    }
    let exponent = map.num_vertices() as i32 - ne as i32 + 1;
    let c1 = 2f64.powi(exponent) * (2.0 * (2.0 * j).cosh()).powi(ne as i32);
    Ok(c1 * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::small;

    #[test]
    fn self_dual_point() {
        let j = 0.5 * (1.0 + 2f64.sqrt()).ln();
        assert!((dual_coupling(j).unwrap() - j).abs() < 1e-12);
        assert!((j - 0.440687).abs() < 1e-6);
        let x = (-2.0 * j).exp();
        assert!((x * x + 2.0 * x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_coupling_limits_and_errors() {
        let js: Vec<f64> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&k| dual_coupling(k).unwrap())
            .collect();
        assert!(js[0] >= js[1] && js[1] >= js[2] && js[2] < 1e-16);
        assert!(dual_coupling(0.0).is_err());
        assert!(dual_coupling(-1.0).is_err());
    }

    #[test]
    fn double_ising_closed_forms() {
        let j = 0.3f64;
        let z = z_double_ising(&small::k2(), j).unwrap();
        assert!((z - 4.0 * (j.exp() + (-j).exp()).powi(2)).abs() < 1e-12 * z);
        assert_eq!(
            z_double_ising(&small::grid(2, 2), 0.0).unwrap(),
            4f64.powi(9)
        );
        let two = z_double_ising_edges(4, &[(0, 1), (2, 3)], j).unwrap();
        assert!((two - z * z).abs() < 1e-10 * two);
        assert!(z_double_ising(&small::grid(3, 4), j).is_err());
    }

    #[test]
    fn cycle_space_dimension() {
        let m = small::grid(2, 2);
        let edges: Vec<_> = m.edges().collect();
        let basis = cycle_basis(m.num_vertices(), &edges);
        assert_eq!(basis.len(), edges.len() - m.num_vertices() + 1);
        for s in even_subgraphs(&basis) {
            let mut deg = vec![0; m.num_vertices()];
            for (e, &(u, v)) in edges.iter().enumerate() {
                if s >> e & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            assert!(deg.iter().all(|d| d % 2 == 0));
        }
    }

    #[test]
    fn expansion_matches_brute_force_on_a_square() {
        for &j in &[0.05, 0.37, 1.2] {
            let m = small::cycle(4);
            let a = z_contour_expansion(&m, j).unwrap();
            let b = z_double_ising(&m, j).unwrap();
            assert!(((a - b) / b).abs() < 1e-10, "J={j}: {a} vs {b}");
        }
    }

    #[test]
    fn xor_identities() {
        let m = small::grid(2, 2);
        let s1 = SiteConfig::new(&m, vec![1, 0, 1, 1, 0, 0, 1, 0, 1], SiteBoundary::Free).unwrap();
        let plus = SiteConfig::constant(&m, 1, SiteBoundary::Free);
        assert_eq!(xor_of(&s1, &plus).unwrap().sigma_xor.states, s1.states);
        assert!(xor_of(&s1, &s1)
            .unwrap()
            .sigma_xor
            .states
            .iter()
            .all(|&s| s == 1));
        let forced = SiteConfig::constant(&m, 1, SiteBoundary::AllPlus);
        assert!(xor_of(&s1, &forced).is_err());
    }
}
