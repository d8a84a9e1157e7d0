mod common;

use fair_kset::exact::laminar::{build_laminar_tree, laminar_dp, solve_laminar};
use fair_kset::exact::{brute_force_opt, solve_delta2_unweighted, solve_delta2_weighted};
use fair_kset::gen::{self, BipartiteParams, ComponentKind, WeightSpec};
use fair_kset::instance::{Instance, Selection};
use fair_kset::io::InstanceDoc;
use fair_kset::lp::{self, Doubling, FractionalSolution, EPS};
use fair_kset::rounding::{lll_rounding, pipage_rounding, pipage_rounding_observed, seeded, LllOptions};
use proptest::prelude::*;

use common::{is_laminar, loads, naive_opt};

/// Arbitrary small instance: adjacency rows as bitmasks, integer weights.
fn instance(max_n: usize, max_m: usize, unit: bool) -> impl Strategy<Value = Instance> {
    (1..=max_m, 1..=max_n).prop_flat_map(move |(m, n)| {
        let rows = proptest::collection::vec(0u32..(1 << m), n);
        let weights = proptest::collection::vec(0u32..6, m);
        (Just(m), rows, weights, 1..=m).prop_map(move |(m, rows, weights, k)| {
            let adj = rows.iter().map(|r| (0..m).filter(|v| r >> v & 1 == 1).collect()).collect();
            let w = if unit { vec![1.0; m] } else { weights.iter().map(|&w| f64::from(w)).collect() };
            Instance::new(m, adj, Some(w), k).unwrap()
        })
    })
}

fn components() -> impl Strategy<Value = Vec<(ComponentKind, usize)>> {
    proptest::collection::vec(
        prop_oneof![(1usize..5).prop_map(|l| (ComponentKind::Path, l)), (2usize..6).prop_map(|l| (ComponentKind::Cycle, l))],
        1..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn oracle_matches_naive_enumeration(i in instance(5, 9, false)) {
        let s = brute_force_opt(&i, true, 20).unwrap();
        prop_assert_eq!(s.len(), i.demand);
        prop_assert_eq!(s.value, naive_opt(&i));
    }

    #[test]
    fn evaluate_recomputes_from_scratch(i in instance(5, 8, false), mask in 0u32..256) {
        let chosen: Vec<usize> = (0..i.n_candidates).filter(|v| mask >> v & 1 == 1).collect();
        let s = Selection::evaluate(&i, chosen.clone()).unwrap();
        prop_assert_eq!(s.value, loads(&i, &chosen).into_iter().fold(0.0, f64::max));
    }

    #[test]
    fn preprocess_lift_preserves_size(i in instance(5, 9, true)) {
        let pre = i.preprocess();
        let inner = match &pre.residual {
            Some(r) => brute_force_opt(r, true, 20).unwrap().chosen,
            None => Vec::new(),
        };
        let lifted = pre.lift(&inner);
        prop_assert_eq!(lifted.len(), i.demand);
        prop_assert_eq!(i.max_disagreement(&lifted).unwrap(), naive_opt(&i));
    }

    #[test]
    fn delta2_unweighted_is_optimal(comps in components(), k_frac in 0.0f64..1.0) {
        let base = gen::path_cycle(&comps, 1, WeightSpec::Unit, 0).unwrap();
        let k = 1 + ((base.n_candidates - 1) as f64 * k_frac) as usize;
        let i = Instance { demand: k, ..base };
        let s = solve_delta2_unweighted(&i).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert_eq!(s.value, naive_opt(&i));
    }

    #[test]
    fn delta2_weighted_is_optimal(comps in components(), k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let base = gen::path_cycle(&comps, 1, WeightSpec::Integer { lo: 0, hi: 7 }, seed).unwrap();
        let k = 1 + ((base.n_candidates - 1) as f64 * k_frac) as usize;
        let i = Instance { demand: k, ..base };
        let s = solve_delta2_weighted(&i).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert_eq!(s.value, naive_opt(&i));
    }

    #[test]
    fn laminar_dp_is_optimal(elements in 1usize..7, sets_frac in 0.0f64..1.0, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let sets = 1 + ((2 * elements - 2) as f64 * sets_frac) as usize;
        let k = 1 + ((sets - 1) as f64 * k_frac) as usize;
        let f = gen::random_laminar(elements, sets, k, WeightSpec::Integer { lo: 0, hi: 5 }, seed).unwrap();
        prop_assert!(is_laminar(&f.sets));
        let s = solve_laminar(&f).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert_eq!(s.value, naive_opt(&f.to_instance().unwrap()));
    }

    #[test]
    fn laminar_tree_has_one_node_per_set(elements in 1usize..8, sets_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let sets = 1 + ((2 * elements - 2) as f64 * sets_frac) as usize;
        let f = gen::random_laminar(elements, sets, 1, WeightSpec::Unit, seed).unwrap();
        let tree = build_laminar_tree(f.n_elements, &f.sets, &f.weights).unwrap();
        prop_assert_eq!(tree.n_selectable(), sets);
        for (id, node) in tree.nodes.iter().enumerate() {
            for &c in &node.children {
                prop_assert_eq!(tree.nodes[c].parent, Some(id));
                prop_assert!(tree.nodes[c].elements.iter().all(|e| node.elements.contains(e)));
            }
        }
        let all = laminar_dp(&tree, sets).unwrap();
        prop_assert_eq!(all.len(), sets);
    }

    #[test]
    fn unweighted_lp_bounds_the_optimum(i in instance(6, 9, true)) {
        let pre = i.preprocess();
        prop_assume!(pre.residual.is_some());
        let r = pre.residual.unwrap();
        let x = lp::guess_tstar_unweighted(&r).unwrap();
        prop_assert!(x.t_star <= naive_opt(&r));
        prop_assert!(x.t_star == x.t_star.round());
        prop_assert!(lp::residuals(&r, x.t_star, &x.x).max() <= EPS);
        // One less is infeasible.
        if x.t_star >= 1.0 {
            prop_assert!(lp::check_feasible(&r, x.t_star - 1.0).unwrap().is_none());
        }
    }

    #[test]
    fn doubling_is_within_twice_optimum(i in instance(6, 9, false)) {
        let pre = i.preprocess();
        prop_assume!(pre.residual.is_some());
        let r = pre.residual.unwrap();
        let opt = naive_opt(&r);
        match lp::doubling(&r).unwrap() {
            Doubling::ZeroWeight(s) => {
                prop_assert_eq!(s.value, 0.0);
                prop_assert_eq!(opt, 0.0);
            }
            Doubling::Bound(x) => {
                prop_assert!(x.t_star <= 2.0 * opt + 1e-9, "{} > 2 * {}", x.t_star, opt);
                prop_assert!(lp::residuals(&r, x.t_star, &x.x).max() <= EPS);
            }
        }
    }

    #[test]
    fn trim_reaches_the_demand(xs in proptest::collection::vec(0.0f64..=1.0, 1..12), k_frac in 0.0f64..1.0) {
        let sum: f64 = xs.iter().sum();
        let k = (sum * k_frac).floor() as usize;
        let t = lp::trim_to_demand(&FractionalSolution { x: xs.clone(), t_star: 1.0, normalized: false }, k).unwrap();
        prop_assert!((t.sum() - k as f64).abs() <= 1e-9);
        for (a, b) in t.x.iter().zip(&xs) {
            prop_assert!(*a <= *b + 1e-12 && *a >= 0.0);
        }
    }

    #[test]
    fn pipage_keeps_sum_and_picks_k(i in instance(5, 9, true), seed in any::<u64>()) {
        let pre = i.preprocess();
        prop_assume!(pre.residual.is_some());
        let r = pre.residual.unwrap();
        let x = lp::trim_to_demand(&lp::guess_tstar_unweighted(&r).unwrap(), r.demand).unwrap();
        let mut sums = Vec::new();
        let s = pipage_rounding_observed(&r, &x, &mut seeded(seed), |p| sums.push(p.iter().sum::<f64>())).unwrap();
        prop_assert_eq!(s.len(), r.demand);
        for total in sums {
            prop_assert!((total - r.demand as f64).abs() <= 1e-9);
        }
    }

    #[test]
    fn pipage_leaves_integral_points_alone(mask in 1u32..(1 << 8), seed in any::<u64>()) {
        let xs: Vec<f64> = (0..8).map(|v| f64::from(mask >> v & 1)).collect();
        let k = mask.count_ones() as usize;
        let i = Instance::new(8, vec![(0..8).collect()], None, k).unwrap();
        let s = pipage_rounding(&i, &FractionalSolution { x: xs, t_star: k as f64, normalized: false }, &mut seeded(seed)).unwrap();
        let expected: Vec<usize> = (0..8).filter(|v| mask >> v & 1 == 1).collect();
        prop_assert_eq!(s.chosen, expected);
    }

    #[test]
    fn lll_always_meets_demand(n in 2usize..9, m in 3usize..11, delta in 2usize..5, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assume!(n * delta >= m);
        let k = 1 + ((m - 1) as f64 * k_frac) as usize;
        let i = gen::random_bipartite(&BipartiteParams { n, m, max_degree: delta, k, weights: WeightSpec::Unit }, seed).unwrap();
        let x = lp::guess_tstar_unweighted(&i).unwrap();
        let out = lll_rounding(&i, &x, &mut seeded(seed), false, LllOptions::default()).unwrap();
        prop_assert!(out.selection.len() >= k);
    }

    #[test]
    fn generators_respect_their_parameters(n in 1usize..10, m in 1usize..12, delta in 1usize..5, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assume!(n * delta >= m);
        let k = 1 + ((m - 1) as f64 * k_frac) as usize;
        let i = gen::random_bipartite(&BipartiteParams { n, m, max_degree: delta, k, weights: WeightSpec::Uniform { lo: 0.5, hi: 2.0 } }, seed).unwrap();
        prop_assert!(i.degree_profile().max_degree <= delta);
        prop_assert!(i.candidate_degrees().iter().all(|&d| d >= 1));
        prop_assert!(i.weights.iter().all(|&w| (0.5..=2.0).contains(&w)));
    }

    #[test]
    fn json_round_trips(i in instance(5, 8, false)) {
        let doc = InstanceDoc::Bipartite(i);
        prop_assert_eq!(InstanceDoc::from_json(&doc.to_json()).unwrap(), doc);
    }
}
