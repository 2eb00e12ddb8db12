mod common;

use common::{formula, injective_renaming};
use entail::generation::{
    augment, build_split, sample_formula, sample_pool, BuildOptions, IntRange, Sequent, SplitSpec,
};
use entail::logic::{
    apply_permutation, canonicalize, canonicalize_sequent, metrics, parse, Formula, Op, Var,
    VarPermutation,
};
use entail::neural::{EntailmentModel, ModelConfig, PwNet};
use entail::semantics::{
    count_sat, detection_rates, entails, entails_bruteforce, evaluate, solve, to_cnf, SatResult,
};
use entail::validation::{chi_squared, requirements_report, Histogram};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn print_then_parse_is_identity(f in formula(26, 6)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn dpll_agrees_with_truth_table(a in formula(12, 5), b in formula(12, 5)) {
        prop_assert_eq!(entails(&a, &b), entails_bruteforce(&a, &b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn canonical_form_ignores_renaming(f in formula(26, 6), seed in any::<u64>()) {
        let perm = VarPermutation::random(&mut rng(seed));
        prop_assert_eq!(canonicalize(&apply_permutation(&f, &perm)), canonicalize(&f));
    }

    #[test]
    fn equal_canonical_forms_are_renamings(f in formula(4, 4), images in proptest::collection::vec(0usize..4, 4), g in formula(4, 4)) {
        // `f` under an arbitrary, possibly non-injective, map and an unrelated `g`
        let mapped = f.map_vars(&|v: Var| Var::new(images[v.index()]).unwrap());
        for other in [mapped, g] {
            let same = canonicalize(&f) == canonicalize(&other);
            prop_assert_eq!(same, injective_renaming(&f, &other).is_some());
        }
    }

    #[test]
    fn metrics_are_consistent(f in formula(26, 7)) {
        let m = metrics(&f);
        prop_assert_eq!(m.length, m.op_total + m.leaves);
        prop_assert_eq!(m.length, f.len());
        prop_assert_eq!(m.op_total, Op::ALL.iter().map(|&op| m.num(op)).sum::<usize>());
        for op in Op::ALL {
            let by_level: usize = (0..m.num_at.len()).map(|l| m.num_at(op, l)).sum();
            prop_assert_eq!(by_level, m.num(op));
        }
        prop_assert_eq!(m.vars, f.vars());
    }

    #[test]
    fn permutation_round_trip(f in formula(26, 6), seed in any::<u64>()) {
        let perm = VarPermutation::random(&mut rng(seed));
        prop_assert_eq!(apply_permutation(&apply_permutation(&f, &perm), &perm.inverse()), f);
    }

    #[test]
    fn sat_models_satisfy_their_formula(f in formula(8, 6)) {
        match solve(&to_cnf(&f)) {
            SatResult::Sat(model) => prop_assert!(evaluate(&f, model.assignment()).unwrap()),
            SatResult::Unsat => prop_assert_eq!(count_sat(&f).unwrap(), 0),
        }
    }

    #[test]
    fn entailment_is_reflexive(f in formula(10, 6)) {
        prop_assert!(entails(&f, &f));
    }

    #[test]
    fn entailment_is_transitive(a in formula(3, 3), b in formula(3, 3), c in formula(3, 3)) {
        if entails(&a, &b) && entails(&b, &c) {
            prop_assert!(entails(&a, &c));
        }
    }

    #[test]
    fn augmentation_preserves_label_and_form(a in formula(26, 5), b in formula(26, 5), seed in any::<u64>()) {
        let s = Sequent::decide(a, b);
        let t = augment(&s, &mut rng(seed));
        prop_assert_eq!(entails(&t.premise, &t.conclusion), s.label);
        prop_assert_eq!(
            canonicalize_sequent(&t.premise, &t.conclusion),
            canonicalize_sequent(&s.premise, &s.conclusion)
        );
    }

    #[test]
    fn chi_squared_is_symmetric(a in proptest::collection::vec((0u64..12, 1u64..50), 1..10),
                                b in proptest::collection::vec((0u64..12, 1u64..50), 1..10)) {
        let (ha, hb) = (Histogram::from_counts(&a), Histogram::from_counts(&b));
        let (x, y) = (chi_squared(&ha, &hb).unwrap(), chi_squared(&hb, &ha).unwrap());
        prop_assert!((x.statistic - y.statistic).abs() <= 1e-9 * x.statistic.max(1.0));
        prop_assert_eq!(x.df, y.df);
    }

    #[test]
    fn chi_squared_zero_iff_proportional(a in proptest::collection::vec((0u64..12, 1u64..50), 1..10),
                                         b in proptest::collection::vec((0u64..12, 1u64..50), 1..10),
                                         k in 1u64..5) {
        let ha = Histogram::from_counts(&a);
        let scaled: Vec<(u64, u64)> = ha.iter().map(|(v, c)| (v, c * k)).collect();
        prop_assert!(chi_squared(&ha, &Histogram::from_counts(&scaled)).unwrap().statistic.abs() < 1e-9);
        let hb = Histogram::from_counts(&b);
        let proportional = ha.iter().count() == hb.iter().count()
            && ha.iter().zip(hb.iter()).all(|((v1, c1), (v2, c2))| v1 == v2 && c1 * hb.total() == c2 * ha.total());
        let zero = chi_squared(&ha, &hb).unwrap().statistic.abs() < 1e-9;
        prop_assert_eq!(zero, proportional);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pwnet_is_equivariant_under_renaming(a in formula(26, 4), b in formula(26, 4), seed in any::<u64>()) {
        let config = ModelConfig { d: 6, k: 4, worlds: 5, init_seed: seed, world_seed: seed, ..ModelConfig::new("pwnet") };
        let net = PwNet::new(config);
        let perm = VarPermutation::random(&mut rng(seed));
        let mut moved = net.clone();
        for v in Var::all() {
            let from = net.params().find(&format!("w4.{}", v.as_char())).unwrap();
            let to = moved.params().find(&format!("w4.{}", perm.apply(v).as_char())).unwrap();
            *moved.params_mut().get_mut(to) = net.params().get(from).clone();
        }
        let before = net.predict(&a, &b);
        let after = moved.predict(&apply_permutation(&a, &perm), &apply_permutation(&b, &perm));
        prop_assert_eq!(before.to_bits(), after.to_bits());
    }

    #[test]
    fn pwnet_product_is_below_every_factor(a in formula(8, 4), b in formula(8, 4), seed in any::<u64>()) {
        let config = ModelConfig { d: 8, k: 4, worlds: 7, init_seed: seed, world_seed: seed, ..ModelConfig::new("pwnet") };
        let net = PwNet::new(config);
        let p = net.predict(&a, &b);
        let min = net.factors(&a, &b).into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!(p <= min + 1e-15);
        prop_assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn sampled_formulas_have_exact_operator_counts() {
    let mut r = rng(5);
    for trial in 0..10_000 {
        let n = trial % 31;
        let pool = sample_pool(r.random_range(1..=26), &mut r);
        let f: Formula = sample_formula(n, &pool, &mut r);
        assert_eq!(metrics(&f).op_total, n);
        assert!(f.vars().iter().all(|v| pool.contains(&v)));
    }
}

#[test]
fn sampling_detection_is_monotone_in_sample_count() {
    let spec = SplitSpec::new(
        "mono",
        2000,
        IntRange::new(3, 8),
        IntRange::new(3, 8),
        "naive",
        21,
    );
    let d = build_split(&spec, BuildOptions::default()).unwrap();
    let pairs: Vec<(Formula, Formula)> = d
        .negatives()
        .take(1000)
        .map(|s| (s.premise.clone(), s.conclusion.clone()))
        .collect();
    assert_eq!(pairs.len(), 1000);
    for seed in 0..3 {
        let rates = detection_rates(&pairs, &[1, 2, 4, 8, 16, 32, 64], seed);
        assert!(
            rates.windows(2).all(|w| w[0].rate() <= w[1].rate()),
            "{rates:?}"
        );
    }
}

// length, per-level operator counts, operator totals, model count
type Profile = (usize, Vec<[usize; 4]>, [usize; 4], u64);

fn class_profile(d: &[Sequent], label: bool, side: fn(&Sequent) -> &Formula) -> Vec<Profile> {
    let mut out: Vec<_> = d
        .iter()
        .filter(|s| s.label == label)
        .map(|s| {
            let f = side(s);
            let m = metrics(f);
            (m.length, m.num_at.clone(), m.num_ops, count_sat(f).unwrap())
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quad_classes_have_identical_profiles(seed in any::<u64>()) {
        let d = build_split(&SplitSpec::train_like(200, seed), BuildOptions::default()).unwrap();
        for side in [(|s: &Sequent| &s.premise) as fn(&Sequent) -> &Formula, |s: &Sequent| &s.conclusion] {
            prop_assert_eq!(class_profile(&d.sequents, true, side), class_profile(&d.sequents, false, side));
        }
        prop_assert!(d.sequents.iter().all(|s| s.label == entails(&s.premise, &s.conclusion)));
    }

    #[test]
    fn mutate_classes_share_premises(seed in any::<u64>()) {
        let spec = SplitSpec::new("m", 60, IntRange::new(2, 8), IntRange::new(2, 8), "mutate", seed);
        let d = build_split(&spec, BuildOptions::default()).unwrap();
        let mut pos: Vec<String> = d.positives().map(|s| s.premise.to_string()).collect();
        let mut neg: Vec<String> = d.negatives().map(|s| s.premise.to_string()).collect();
        pos.sort();
        neg.sort();
        prop_assert_eq!(pos, neg);
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), jobs in 2usize..5) {
        let spec = SplitSpec::train_like(300, seed);
        let text = |opts| {
            let mut buf = Vec::new();
            build_split(&spec, opts).unwrap().write_tsv(&mut buf).unwrap();
            buf
        };
        prop_assert_eq!(text(BuildOptions::default()), text(BuildOptions::default()));
        prop_assert_eq!(
            text(BuildOptions { jobs: 1, sort: true }),
            text(BuildOptions { jobs, sort: true })
        );
    }

    #[test]
    fn requirements_report_is_deterministic(seed in any::<u64>()) {
        let d = build_split(&SplitSpec::train_like(200, seed), BuildOptions::default()).unwrap();
        prop_assert_eq!(requirements_report(&d, 0.01), requirements_report(&d, 0.01));
    }
}

#[test]
fn pwnet_parameter_count_ignores_world_count() {
    let count = |n| {
        PwNet::new(ModelConfig {
            worlds: n,
            ..ModelConfig::new("pwnet")
        })
        .params()
        .count()
    };
    assert_eq!(count(4), count(256));
    assert_eq!(count(1), count(64));
}
