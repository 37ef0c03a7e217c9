use hyperperc::clusters::{SiteBoundary, SiteConfig};
use hyperperc::planar_map::{small, CombinatorialMap};
use hyperperc::xor::{dual_coupling, xor_of, z_contour_expansion, z_double_ising, XorError};
use proptest::prelude::*;

fn test_graphs() -> Vec<(&'static str, CombinatorialMap)> {
    vec![
        ("triangle", small::triangle()),
        ("square", small::cycle(4)),
        ("diamond", small::diamond()),
        ("grid2x2", small::grid(2, 2)),
        ("cycle6", small::cycle(6)),
    ]
}

#[test]
fn contour_expansion_matches_brute_force() {
    for (name, map) in test_graphs() {
        for j in [0.01, 0.2, 0.44, 0.9, 1.7] {
            let a = z_contour_expansion(&map, j).unwrap();
            let b = z_double_ising(&map, j).unwrap();
            assert!(((a - b) / b).abs() < 1e-10, "{name} J={j}: {a} vs {b}");
        }
    }
}

#[test]
fn size_caps_are_enforced() {
    assert!(matches!(
        z_double_ising(&small::grid(3, 4), 0.3),
        Err(XorError::TooLarge(_))
    ));
    assert!(matches!(
        z_contour_expansion(&small::grid(4, 4), 0.3),
        Err(XorError::TooLarge(_))
    ));
}

#[test]
fn xor_of_identities() {
    let map = small::grid(2, 2);
    let s: Vec<u8> = (0..9).map(|v| (v * 7 % 3 == 0) as u8).collect();
    let s1 = SiteConfig::new(&map, s, SiteBoundary::Free).unwrap();
    let plus = SiteConfig::constant(&map, 1, SiteBoundary::Free);
    assert_eq!(xor_of(&s1, &plus).unwrap().sigma_xor.states, s1.states);
    assert!(xor_of(&s1, &s1)
        .unwrap()
        .sigma_xor
        .states
        .iter()
        .all(|&x| x == 1));
    let other = SiteConfig::constant(&small::triangle(), 1, SiteBoundary::Free);
    assert!(xor_of(&s1, &other).is_err());
}

proptest! {
    #[test]
    fn duality_is_a_decreasing_involution(k in 0.001f64..8.0, dk in 0.001f64..1.0) {
        let j = dual_coupling(k).unwrap();
        prop_assert!((dual_coupling(j).unwrap() - k).abs() <= 1e-12 * k.max(1.0));
        prop_assert!(dual_coupling(k + dk).unwrap() < j);
    }

    #[test]
    fn dual_weights_agree(k in 0.01f64..6.0) {
        let j = dual_coupling(k).unwrap();
        let lhs = 2.0 * (-2.0 * j).exp() / (1.0 + (-4.0 * j).exp());
        let rhs = (1.0 - (-4.0 * k).exp()) / (1.0 + (-4.0 * k).exp());
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}
