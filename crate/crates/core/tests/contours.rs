use hyperperc::clusters::{SiteBoundary, SiteConfig};
use hyperperc::contours::{
    complementarity_check, derive, eta_structure_check, face_parity_check, proxy_report,
    ContourShape,
};
use hyperperc::planar_map::{build_ball, BallSpec, HalfEdge, LatticeMaps, TilingSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn maps(p: usize, q: usize, r: u32) -> LatticeMaps {
    LatticeMaps::new(build_ball(&BallSpec::new(TilingSpec::regular(p, q).unwrap(), r)).unwrap())
        .unwrap()
}

fn random_omega(m: &LatticeMaps, rng: &mut ChaCha8Rng, p: f64) -> SiteConfig {
    let s = (0..m.primal.num_vertices())
        .map(|_| u8::from(rng.gen::<f64>() < p))
        .collect();
    SiteConfig::new(&m.primal, s, SiteBoundary::Free).unwrap()
}

#[test]
fn structure_holds_on_random_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (p, q, r) in [(3, 7, 2), (4, 4, 3), (7, 3, 2), (5, 4, 2)] {
        let m = maps(p, q, r);
        for i in 0..500 {
            let omega = random_omega(&m, &mut rng, [0.5, 0.2, 0.8][i % 3]);
            assert!(face_parity_check(&m.primal, &omega).unwrap());
            let c = derive(&omega, &m).unwrap();
            assert!(complementarity_check(&m, &c));
            // The half-edge rule and the crossing rule, checked directly.
            for f in 0..m.sup.bar.num_edges() {
                let want = match m.sup.half(f) {
                    HalfEdge::Primal { edge, .. } => c.phi.states[edge],
                    HalfEdge::Dual { edge, .. } => c.phi_plus.states[edge],
                };
                assert_eq!(c.bar_phi.states[f], want);
                assert_eq!(c.eta.states[f], 1 - c.bar_phi.states[m.sup.crossed(f)]);
            }
            let rep = eta_structure_check(&m, &c).unwrap();
            assert!(rep
                .component_shapes
                .iter()
                .all(|&s| s != ContourShape::Other));
            let prox = proxy_report(&omega, &m, &c).unwrap();
            assert!(prox.identity_holds(), "{prox:?}");
        }
    }
}

// Each boundary path uses two of the open η edges at v_∞.
#[test]
fn boundary_paths_account_for_outer_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = maps(3, 7, 2);
    let inf = m.sup.bar_dual.infinite_vertex().unwrap();
    for _ in 0..200 {
        let omega = random_omega(&m, &mut rng, 0.5);
        let c = derive(&omega, &m).unwrap();
        let rep = eta_structure_check(&m, &c).unwrap();
        let outer_open = m
            .sup
            .bar_dual
            .edges()
            .enumerate()
            .filter(|&(f, (u, v))| c.eta.states[f] == 1 && (u == inf || v == inf))
            .count();
        assert_eq!(2 * rep.boundary_touching, outer_open);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn single_flip_moves_proxies_boundedly(seed in any::<u64>(), v in any::<prop::sample::Index>()) {
        let m = maps(3, 7, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = random_omega(&m, &mut rng, 0.5);
        let mut flipped = omega.clone();
        let v = v.index(omega.states.len());
        flipped.states[v] ^= 1;
        let a = proxy_report(&omega, &m, &derive(&omega, &m).unwrap()).unwrap();
        let b = proxy_report(&flipped, &m, &derive(&flipped, &m).unwrap()).unwrap();
        let d = 7;
        prop_assert!(a.s0.abs_diff(b.s0) <= d);
        prop_assert!(a.s1.abs_diff(b.s1) <= d);
        prop_assert!(a.k_plus.abs_diff(b.k_plus) <= d);
    }
}
