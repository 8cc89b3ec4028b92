//! Randomized properties of f*, ϑ and the LP certificates on graphs with at
//! most five vertices. Seeded, 200 cases per property.

use std::sync::Arc;

use capbound::bounds::{
    check_additivity, fstar, fstar_full, fstar_full_with, make_theta_oracle, AlphaOracle,
    BoundOracle, CliqueCoverOracle, ExactMinrankOracle, FractionalAlphaOracle, SubsetFamily,
};
use capbound::combinatorics::{fractional_independence, independence_number, MAX_EXACT_VERTICES};
use capbound::index_coding::{broadcast_report, scheme_from_cover, NamedFamily};
use capbound::minrank::FieldSpec;
use capbound::scalar::{int, to_f64};
use capbound::theta::lovasz_theta;
use capbound::{Graph, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config() -> Config {
    Config {
        cases: 200,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Oracles cheap enough for all-subsets f* on ten vertices.
fn cheap_oracles() -> Vec<Arc<dyn BoundOracle>> {
    vec![
        Arc::new(AlphaOracle),
        Arc::new(FractionalAlphaOracle),
        Arc::new(CliqueCoverOracle),
        Arc::new(ExactMinrankOracle::new(FieldSpec::Prime(2))),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fstar_is_at_most_f(g in graph(5)) {
        let mut oracles = cheap_oracles();
        oracles.push(Arc::new(make_theta_oracle(1e-7).unwrap()));
        for f in &oracles {
            let r = fstar_full(&g, f.as_ref()).unwrap();
            prop_assert!(r.verify());
            prop_assert!(r.value <= f.evaluate_graph(&g).unwrap(), "{}", f.name());
        }
    }

    #[test]
    fn larger_families_give_smaller_values(g in graph(5)) {
        let small = SubsetFamily::default_for(&g, []).unwrap();
        let large = SubsetFamily::all_subsets(&g).unwrap();
        for f in cheap_oracles() {
            let a = fstar(&g, f.as_ref(), &small).unwrap().value;
            let b = fstar(&g, f.as_ref(), &large).unwrap().value;
            prop_assert!(b <= a, "{}: {} > {}", f.name(), b, a);
        }
    }

    #[test]
    fn fstar_is_subadditive_and_additive(g in graph(5), h in graph(5)) {
        let u = g.disjoint_union(&h);
        for f in cheap_oracles() {
            let sum = fstar_full(&g, f.as_ref()).unwrap().value + fstar_full(&h, f.as_ref()).unwrap().value;
            let joint = fstar_full(&u, f.as_ref()).unwrap().value;
            prop_assert!(joint <= sum);
            if f.flags().superadditive {
                prop_assert!(check_additivity(&g, &h, f.as_ref()).unwrap(), "{}", f.name());
            }
        }
    }

    #[test]
    fn theta_is_multiplicative_and_additive(g in graph(3), h in graph(3)) {
        let t = |x: &Graph| lovasz_theta(x, 1e-7).unwrap().interval();
        let (tg, th) = (t(&g), t(&h));
        let product = t(&g.strong_product(&h));
        let union = t(&g.disjoint_union(&h));
        prop_assert!((product.midpoint() - tg.midpoint() * th.midpoint()).abs() <= 1e-5);
        prop_assert!((union.midpoint() - tg.midpoint() - th.midpoint()).abs() <= 1e-5);
    }

    #[test]
    fn lp_certificates_verify(g in graph(5)) {
        let fi = fractional_independence(&g).unwrap();
        let zero = Rational::zero();
        prop_assert!(fi.weights().iter().chain(fi.cover()).all(|x| *x >= zero));
        for c in &fi.cliques {
            let load: Rational = c.iter().map(|v| fi.weights()[v].clone()).sum();
            prop_assert!(load <= int(1));
        }
        for v in 0..g.n() {
            let served: Rational = fi.cliques.iter().zip(fi.cover()).filter(|(c, _)| c.contains(v)).map(|(_, q)| q.clone()).sum();
            prop_assert!(served >= int(1));
        }
        let primal: Rational = fi.weights().iter().cloned().sum();
        let dual: Rational = fi.cover().iter().cloned().sum();
        prop_assert_eq!(&primal, &fi.value);
        prop_assert_eq!(&dual, &fi.value);
    }

    #[test]
    fn powers_respect_licensed_fstar(g in graph(5)) {
        let mut bound = f64::INFINITY;
        for f in cheap_oracles() {
            if f.licence().capacity {
                bound = bound.min(to_f64(&fstar_full(&g, f.as_ref()).unwrap().value));
            }
        }
        prop_assert!(bound.is_finite());
        for k in 1..=3u32 {
            let p = g.power(k as usize).unwrap();
            if p.n() > MAX_EXACT_VERTICES {
                continue;
            }
            let a = independence_number(&p).unwrap() as f64;
            prop_assert!(a.powf(1.0 / k as f64) <= bound + 1e-6, "k = {}", k);
        }
    }

    #[test]
    fn clique_one_oracles_stay_below_alpha_f(g in graph(5)) {
        let af = fractional_independence(&g).unwrap().value;
        for f in cheap_oracles() {
            if f.flags().clique_value_one {
                prop_assert!(fstar_full(&g, f.as_ref()).unwrap().value <= af, "{}", f.name());
            }
        }
    }

    #[test]
    fn pruning_keeps_the_value(g in graph(5)) {
        for f in cheap_oracles() {
            let pruned = fstar_full_with(&g, f.as_ref(), true).unwrap().value;
            prop_assert_eq!(pruned, fstar_full_with(&g, f.as_ref(), false).unwrap().value);
        }
    }

    #[test]
    fn scheme_plans_recount(g in graph(5)) {
        for f in cheap_oracles() {
            let r = fstar_full(&g, f.as_ref()).unwrap();
            let plan = scheme_from_cover(&g, &r);
            prop_assert!(plan.verify(g.n()));
            prop_assert_eq!(&plan.total_rate, &r.value);
        }
    }

    #[test]
    fn reports_keep_the_chain(g in graph(5)) {
        let fam = NamedFamily { name: "all".into(), family: SubsetFamily::all_subsets(&g).unwrap() };
        let r = broadcast_report("random", &g, &[FieldSpec::Prime(2), FieldSpec::Rationals], &cheap_oracles(), &[fam], 1e-7);
        prop_assert!(r.absent.is_empty(), "{:?}", r.absent);
        prop_assert!(r.chain_violations().is_empty(), "{:?}", r.chain_violations());
        prop_assert!(r.claims.iter().all(|c| !c.theorem.is_empty()));
    }
}
