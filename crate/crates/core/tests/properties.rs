use proptest::prelude::*;

use pyrotopo_core::compliance::{compliance_report, RuleConfig};
use pyrotopo_core::egress::{
    analytic_expected, analytic_tail, distance_field, expected_egress, mortality_ratio,
    mortality_weight, AnalyticMode, CellDistance, MortalityParams,
};
use pyrotopo_core::layout::{
    build_checkerboard, build_linear, build_variant, parse_site_plan, serialize_site_plan,
    CellKind, FamilyParams, Layout,
};
use pyrotopo_core::propagation::{step_fire, BlockStatus, FireModel, FireParams};
use pyrotopo_core::rng::FireStream;

fn family_params() -> impl Strategy<Value = FamilyParams> {
    prop_oneof![
        (1usize..=15).prop_map(|k| FamilyParams::Checkerboard { side: 2 * k }),
        (1usize..=60).prop_map(|blocks| FamilyParams::Linear { blocks }),
        (1usize..=20, 1usize..=5).prop_map(|(b, a)| FamilyParams::DoubleRow {
            blocks_per_row: b,
            central_aisle: a
        }),
        (1usize..=20, 1usize..=5, 1usize..=6).prop_map(|(s, t, p)| FamilyParams::Comb {
            spine: s,
            tooth: t,
            pitch: p
        }),
        (1usize..=12, 1usize..=12).prop_map(|(w, h)| FamilyParams::HollowRect {
            width: w,
            height: h
        }),
        (1usize..=12, 1usize..=5, 1usize..=5).prop_map(|(s, n, g)| FamilyParams::Zigzag {
            segment: s,
            segments: n,
            gap: g
        }),
    ]
}

fn site_plan() -> impl Strategy<Value = Layout> {
    (1usize..=12, 1usize..=12).prop_flat_map(|(h, w)| {
        proptest::collection::vec(prop::bool::weighted(0.3), h * w).prop_map(move |bits| {
            let cells = bits
                .into_iter()
                .map(|b| if b { CellKind::Block } else { CellKind::Aisle })
                .collect();
            Layout::new(h, w, cells, "random").unwrap()
        })
    })
}

proptest! {
    #[test]
    fn generated_layouts_round_trip_and_keep_aisles(params in family_params()) {
        let layout = build_variant(&params).unwrap();
        let text = serialize_site_plan(&layout);
        prop_assert_eq!(&parse_site_plan(&text).unwrap(), &layout);
        prop_assert_eq!(serialize_site_plan(&parse_site_plan(&text).unwrap()), text.clone());
        prop_assert!(layout.has_aisle_separation());
        prop_assert!(layout.block_count() >= 1);
        prop_assert_eq!(serialize_site_plan(&build_variant(&params).unwrap()), text);
    }

    #[test]
    fn random_plans_round_trip(layout in site_plan()) {
        let text = serialize_site_plan(&layout);
        prop_assert_eq!(parse_site_plan(&text).unwrap(), layout);
        prop_assert_eq!(serialize_site_plan(&parse_site_plan(text.trim_end()).unwrap()), text);
    }

    #[test]
    fn checkerboard_block_count(k in 1usize..=60) {
        let side = 2 * k;
        prop_assert_eq!(build_checkerboard(side).unwrap().block_count(), k * k);
    }

    #[test]
    fn linear_alternates(n in 1usize..=500) {
        let l = build_linear(n).unwrap();
        prop_assert_eq!((l.height(), l.width()), (1, 2 * n));
        for (i, c) in l.cells().iter().enumerate() {
            let expect = if i % 2 == 0 { CellKind::Block } else { CellKind::Aisle };
            prop_assert_eq!(*c, expect);
        }
    }

    #[test]
    fn distance_field_invariants(layout in site_plan()) {
        let f = distance_field(&layout);
        let (h, w) = (layout.height(), layout.width());
        for r in 0..h {
            for c in 0..w {
                let here = f.get(r, c);
                if layout.is_block(r, c) {
                    prop_assert_eq!(here, CellDistance::Block);
                    continue;
                }
                let edge = r == 0 || c == 0 || r + 1 == h || c + 1 == w;
                if edge {
                    prop_assert_eq!(here, CellDistance::Steps(1));
                }
                for (nr, nc) in [(r + 1, c), (r, c + 1)] {
                    if nr >= h || nc >= w {
                        continue;
                    }
                    match (here, f.get(nr, nc)) {
                        (CellDistance::Steps(a), CellDistance::Steps(b)) => {
                            prop_assert!(a.abs_diff(b) <= 1)
                        }
                        // A reachable aisle cell never borders an enclosed one.
                        (CellDistance::Steps(_), CellDistance::Unreachable)
                        | (CellDistance::Unreachable, CellDistance::Steps(_)) => {
                            prop_assert!(false, "reachability leak at ({}, {})", r, c)
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn compliance_consistency(layout in site_plan(), threshold in 1usize..=40) {
        prop_assume!(expected_egress(&layout).is_ok());
        let cfg = RuleConfig { n_threshold: threshold, ..RuleConfig::default() };
        let a = compliance_report(&layout, &cfg).unwrap();
        prop_assert_eq!(a.overall_pass, !a.applicable || (a.egress_pass && a.fold_pass));
        prop_assert_eq!(a.fold_pass, a.fold_exposure_pairs == 0);
        prop_assert_eq!(a.applicable, a.n_blocks >= threshold);
        prop_assert_eq!(compliance_report(&layout, &cfg).unwrap(), a);
    }

    #[test]
    fn mortality_weight_is_monotone(
        d in 0.0f64..50.0, dd in 0.0f64..5.0,
        lambda in 0.0f64..1.0, dl in 0.0f64..0.5,
        p0 in 1e-6f64..0.5, dp in 0.0f64..0.5,
    ) {
        let base = MortalityParams::new(lambda, p0).unwrap();
        let w = mortality_weight(d, &base).unwrap();
        prop_assert!((0.0..=1.0).contains(&w));
        prop_assert!(mortality_weight(d + dd, &base).unwrap() >= w);
        prop_assert!(mortality_weight(d, &MortalityParams::new(lambda + dl, p0).unwrap()).unwrap() >= w);
        prop_assert!(mortality_weight(d, &MortalityParams::new(lambda, p0 + dp).unwrap()).unwrap() >= w);
    }

    #[test]
    fn self_mortality_ratio_is_one(params in family_params(), lambda in 0.0f64..0.6) {
        let layout = build_variant(&params).unwrap();
        // 1x1 variants are a lone block with no aisle.
        prop_assume!(layout.aisle_count() > 0);
        let p = MortalityParams::new(lambda, 1e-4).unwrap();
        prop_assert_eq!(mortality_ratio(&layout, &layout, &p).unwrap(), 1.0);
    }

    #[test]
    fn fire_only_touches_intact_blocks(
        params in family_params(),
        gamma in 0.0f64..=1.0,
        r in 1u32..=4,
        sparks in 0u32..=3,
        seed in any::<u64>(),
    ) {
        let layout = build_variant(&params).unwrap();
        let model = FireModel::new(&layout);
        let fire = FireParams::new(gamma, r, sparks, 60, 0.5).unwrap();
        let stream = FireStream::new(seed);
        let mut state = model.initial_state(layout.central_block().unwrap()).unwrap();
        while state.burning_count() > 0 && state.step < fire.max_steps {
            let next = step_fire(&state, &model, &fire, &stream);
            for (before, after) in state.status.iter().zip(&next.status) {
                let ok = matches!(
                    (before, after),
                    (BlockStatus::Intact, BlockStatus::Intact)
                        | (BlockStatus::Intact, BlockStatus::Burning)
                        | (BlockStatus::Burning, BlockStatus::Burning)
                        | (BlockStatus::Burning, BlockStatus::BurntOut)
                        | (BlockStatus::BurntOut, BlockStatus::BurntOut)
                );
                prop_assert!(ok, "illegal transition {:?} -> {:?}", before, after);
            }
            prop_assert_eq!(next.status.len(), layout.block_count());
            state = next;
        }
    }
}

#[test]
fn analytic_identity_for_all_even_sides() {
    for side in (2..=200).step_by(2) {
        let tail: f64 = (1..side / 2).map(|k| analytic_tail(side, k).unwrap()).sum();
        let exact = analytic_expected(side, AnalyticMode::Exact).unwrap();
        assert!((tail - exact).abs() <= 1e-12, "L={side}: {tail} vs {exact}");
    }
}

#[test]
fn linear_field_is_identically_one() {
    for n in (1..=10_000).step_by(37).chain([10_000]) {
        let f = distance_field(&build_linear(n).unwrap());
        assert!(f.reachable().all(|d| d == 1), "N={n}");
        assert_eq!(f.unreachable_count(), 0);
    }
}

#[test]
fn checkerboard_mean_is_monotone_in_side() {
    let means: Vec<f64> = (2..=60)
        .step_by(2)
        .map(|s| {
            expected_egress(&build_checkerboard(s).unwrap())
                .unwrap()
                .mean
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}

#[test]
fn checkerboard_scaling_at_400_blocks() {
    let mean = expected_egress(&build_checkerboard(40).unwrap())
        .unwrap()
        .mean;
    let ratio = mean * 3.0 / 400f64.sqrt();
    assert!((ratio - 1.0).abs() <= 0.15, "{ratio}");
}

#[test]
fn mortality_defaults_do_not_clamp() {
    let p = MortalityParams::default();
    for side in (2..=40).step_by(2) {
        let max = expected_egress(&build_checkerboard(side).unwrap())
            .unwrap()
            .max;
        assert!(mortality_weight(max as f64, &p).unwrap() < 1.0);
    }
}
