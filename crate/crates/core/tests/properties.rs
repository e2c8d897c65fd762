use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use legreal_core::curve_model::{parse_curve, validate_curve};
use legreal_core::front_model::{q, rational, rotation_number, thurston_bennequin, Q};
use legreal_core::legendrian_graph::parse_graph;
use legreal_core::realizer::{plan, realize, relative_gain_raw, RealizerParams};
use legreal_core::ribbon::{build_ribbon, is_homologically_nontrivial, z2_homology_oracle};
use legreal_core::sample::{random_curve, random_fatgraph, random_graph, random_multicurve};

fn instance(seed: u64) -> Option<(legreal_core::legendrian_graph::LegendrianGraphFront, legreal_core::curve_model::CurveOnRibbon)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_graph(&mut rng, 3, 6);
    let r = build_ribbon(&g);
    random_curve(&mut rng, &r, 16).map(|c| (g, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gains_are_antisymmetric_and_sum_to_zero(k in 1usize..300) {
        let g = relative_gain_raw(k);
        prop_assert_eq!(g.iter().sum::<i64>(), 0);
        for i in 0..k {
            prop_assert_eq!(g[i], -g[k - 1 - i]);
            prop_assert!(g[i] != 0 || (k % 2 == 1 && i == k / 2));
        }
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn balanced_gains_close_up(seed in any::<u64>()) {
        if let Some((g, c)) = instance(seed) {
            let p = plan(&build_ribbon(&g), &c, &RealizerParams::default()).unwrap();
            prop_assert_eq!(p.gains.total(), q(0));
            prop_assert_eq!(p.prominence.end.last().cloned().unwrap(), q(0));
        }
    }

    #[test]
    fn invariants_survive_translation(seed in any::<u64>(), num in -500i64..500, den in 1i64..64) {
        if let Some((g, c)) = instance(seed) {
            let x = realize(&g, &c, &RealizerParams::default()).unwrap();
            let dz = Q::new(num.into(), den.into());
            let k = x.knot.translated(&dz);
            prop_assert_eq!(thurston_bennequin(&k).unwrap(), x.report.tb);
            prop_assert_eq!(rotation_number(&k).unwrap(), x.report.rot);
        }
    }

    #[test]
    fn reversed_curves_stay_valid(seed in any::<u64>()) {
        if let Some((g, c)) = instance(seed) {
            let r = build_ribbon(&g);
            prop_assert!(validate_curve(&r, &c).is_valid());
            prop_assert!(validate_curve(&r, &c.reversed()).is_valid());
            prop_assert_eq!(c.reversed().reversed(), c);
        }
    }

    #[test]
    fn realization_is_deterministic(seed in any::<u64>()) {
        if let Some((g, c)) = instance(seed) {
            let a = realize(&g, &c, &RealizerParams::default()).unwrap();
            let b = realize(&g, &c, &RealizerParams::default()).unwrap();
            prop_assert_eq!(a.diagram().to_json(), b.diagram().to_json());
            prop_assert!(a.report.is_clean());
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        if let Some((g, c)) = instance(seed) {
            let g2 = parse_graph(&g.to_document()).unwrap();
            prop_assert_eq!(g2.to_document(), g.to_document());
            prop_assert_eq!(parse_curve(&c.to_document()).unwrap(), c);
        }
    }

    #[test]
    fn homology_routes_agree(seed in any::<u64>(), ne in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_fatgraph(&mut rng, ne);
        if let Some(comps) = random_multicurve(&mut rng, &r, 12) {
            for c in comps {
                prop_assert_eq!(is_homologically_nontrivial(&r, &c).0, z2_homology_oracle(&r, &c).nontrivial);
            }
        }
    }

    #[test]
    fn decimals_parse_exactly(n in -10_000i64..10_000, d in 1i64..1000) {
        let v = Q::new(n.into(), d.into());
        prop_assert_eq!(rational::parse_decimal(&rational::display(&v)), Some(v));
        let text = format!("{}.{:03}", n / 1000, (n % 1000).abs());
        let sign = if n < 0 && n / 1000 == 0 { "-" } else { "" };
        let expect = Q::new(n.into(), 1000.into());
        prop_assert_eq!(rational::parse_decimal(&format!("{sign}{text}")), Some(expect));
    }
}
