mod common;

use common::{brute_force_counts, dataset, rows, rows_and_quantiles};
use gainbudget::budget::{cost_to_target, fixed_budget_plan, marginal_analysis, quantile_cost, CostModel, CostRule, Target};
use gainbudget::dataset::{parse_dataset, validate_dataset, write_dataset, ColumnSchema, LabeledDataset};
use gainbudget::metrics::{accuracy_at_cutoff, confusion_at_cutoff, gain_profile, ideal_profile, GainProfile};
use gainbudget::money::{Money, UnitCost};
use gainbudget::ranking::{partition_quantiles, rank_instances, RankedList, TiePolicy};
use proptest::prelude::*;

fn profile(d: &LabeledDataset, policy: TiePolicy, q: usize) -> GainProfile {
    let r = rank_instances(d, policy);
    gain_profile(&partition_quantiles(&r, q).unwrap()).unwrap()
}

fn ranked_ids(r: &RankedList) -> Vec<String> {
    r.ids().map(String::from).collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 300,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn ranking_is_a_sorted_permutation((rows, _q) in rows_and_quantiles(60)) {
        let d = dataset(&rows);
        for policy in [TiePolicy::Stable, TiePolicy::Pessimistic, TiePolicy::Optimistic] {
            let r = rank_instances(&d, policy);
            prop_assert!(r.order.windows(2).all(|w| w[0].score >= w[1].score));
            let mut a = ranked_ids(&r);
            let mut b: Vec<String> = d.instances.iter().map(|i| i.id.clone()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(r.positive_total, d.positive_count());
        }
    }

    #[test]
    fn partition_shape((rows, q) in rows_and_quantiles(80)) {
        let r = rank_instances(&dataset(&rows), TiePolicy::Stable);
        let p = partition_quantiles(&r, q).unwrap();
        let n = rows.len();
        prop_assert_eq!(p.boundaries[0], 0);
        prop_assert_eq!(p.boundaries[q], n);
        prop_assert_eq!(p.per_quantile_size.iter().sum::<usize>(), n);
        let max = *p.per_quantile_size.iter().max().unwrap();
        let min = *p.per_quantile_size.iter().min().unwrap();
        prop_assert!(max - min <= 1);
        for i in 0..q {
            prop_assert!(p.per_quantile_positive[i] <= p.per_quantile_size[i]);
        }
        let joined: Vec<_> = (0..q).flat_map(|i| p.segment(i).iter().cloned()).collect();
        prop_assert_eq!(joined, r.order);
    }

    #[test]
    fn counts_match_brute_force((rows, q) in rows_and_quantiles(12)) {
        let r = rank_instances(&dataset(&rows), TiePolicy::Stable);
        let p = partition_quantiles(&r, q).unwrap();
        prop_assert_eq!(&p.per_quantile_positive, &brute_force_counts(&rows, q));
        let g = gain_profile(&p).unwrap();
        prop_assert_eq!(g.per_quantile_positive, brute_force_counts(&rows, q));
    }

    #[test]
    fn cumulative_count_is_rounded_cumulative_gain((rows, q) in rows_and_quantiles(100)) {
        let g = profile(&dataset(&rows), TiePolicy::Stable, q);
        for i in 0..q {
            let back = (g.cumulative[i] * g.positive_total as f64).round() as usize;
            prop_assert_eq!(back, g.cumulative_positive_count[i]);
        }
        prop_assert_eq!(g.cumulative_positive_count[q - 1], g.positive_total);
    }

    #[test]
    fn budget_monotone_in_budget((rows, q) in rows_and_quantiles(100), a in 0i64..2000, b in 0i64..2000) {
        let g = profile(&dataset(&rows), TiePolicy::Stable, q);
        let cm = CostModel::new("0.04".parse().unwrap());
        let (lo, hi) = (a.min(b), a.max(b));
        let small = fixed_budget_plan(&g, &cm, Money::from_cents(lo));
        let large = fixed_budget_plan(&g, &cm, Money::from_cents(hi));
        prop_assert!(small.expected_tp <= large.expected_tp);
        prop_assert!(small.spend <= small.budget);
        prop_assert_eq!(small.leftover, small.budget - small.spend);
    }

    #[test]
    fn marginal_increments_sum_to_all_positives((rows, q) in rows_and_quantiles(100)) {
        let g = profile(&dataset(&rows), TiePolicy::Stable, q);
        let cm = CostModel::new("0.04".parse().unwrap());
        let mut tp = 0;
        let mut spent = Money::ZERO;
        for a in 0..q {
            let m = marginal_analysis(&g, &cm, a).unwrap();
            tp += m.next_quantile_tp;
            spent = spent + m.next_quantile_cost;
        }
        prop_assert_eq!(tp, g.positive_total);
        prop_assert_eq!(spent, quantile_cost(&cm, g.n, q, q).unwrap());
    }

    #[test]
    fn full_recall_cost_is_cost_at_first_full_quantile((rows, q) in rows_and_quantiles(100)) {
        let g = profile(&dataset(&rows), TiePolicy::Stable, q);
        let cm = CostModel::new("0.04".parse().unwrap());
        let plan = cost_to_target(&g, &cm, Target::FullRecall).unwrap();
        let first_full = g.cumulative.iter().position(|&c| c == 1.0).unwrap() + 1;
        prop_assert_eq!(plan.quantiles_needed, first_full);
        prop_assert_eq!(plan.cost, quantile_cost(&cm, g.n, first_full, q).unwrap());
    }

    #[test]
    fn quantile_cost_is_increasing_and_linear(
        n in 1usize..100_000,
        q_count in 1usize..50,
        micros in 1_000i64..10_000_000,
        integer in any::<bool>(),
    ) {
        let rule = if integer { CostRule::Integer } else { CostRule::Fractional };
        let cm = CostModel::new(UnitCost::from_micros(micros).unwrap()).with_rule(rule);
        let q_count = q_count.min(n);
        let costs: Vec<i64> = (0..=q_count).map(|q| quantile_cost(&cm, n, q, q_count).unwrap().cents()).collect();
        prop_assert!(costs.windows(2).all(|w| w[0] <= w[1]));
        if !integer {
            for q in 0..=q_count / 2 {
                prop_assert!((costs[2 * q] - 2 * costs[q]).abs() <= 1);
            }
        }
    }

    #[test]
    fn parse_render_round_trip(raw in prop::collection::vec((any::<f64>(), any::<bool>()), 1..40)) {
        let instances = raw
            .iter()
            .enumerate()
            .filter(|(_, (s, _))| s.is_finite())
            .map(|(i, &(s, p))| {
                let label = if p { gainbudget::dataset::Label::Positive } else { gainbudget::dataset::Label::Negative };
                gainbudget::dataset::LabeledInstance::new(format!("id-{i}"), s, label)
            })
            .collect::<Vec<_>>();
        prop_assume!(!instances.is_empty());
        let d = LabeledDataset::new("rt", instances).unwrap();
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf).unwrap();
        let back = parse_dataset(buf.as_slice(), "rt", &ColumnSchema::default()).unwrap();
        prop_assert_eq!(validate_dataset(&back).instance_count, d.len());
        prop_assert_eq!(back, d);
    }

    #[test]
    fn accuracy_agrees_with_confusion(rows in rows(60)) {
        let r = rank_instances(&dataset(&rows), TiePolicy::Stable);
        for k in 0..=r.len() {
            let c = confusion_at_cutoff(&r, k).unwrap();
            prop_assert_eq!(c.tp + c.fp, k);
            prop_assert_eq!(c.total(), r.len());
            let acc = (c.tp + c.tn) as f64 / r.len() as f64;
            prop_assert_eq!(accuracy_at_cutoff(&r, k).unwrap(), acc);
        }
    }

    #[test]
    fn ideal_dominates((rows, q) in rows_and_quantiles(100)) {
        let d = dataset(&rows);
        let g = profile(&d, TiePolicy::Optimistic, q);
        let ideal = ideal_profile(d.len(), d.positive_count(), q).unwrap();
        for i in 0..q {
            prop_assert!(ideal.cumulative_positive_count[i] >= g.cumulative_positive_count[i]);
        }
        prop_assert_eq!(ideal.cumulative[q - 1], g.cumulative[q - 1]);
    }
}
