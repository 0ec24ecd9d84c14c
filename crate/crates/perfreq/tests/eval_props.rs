use perfreq::eval::{self, bootstrap_eval, cross_dataset_eval, partition, EvalConfig, EvalError, TrainSize};
use perfreq::{bundled, LabeledRequirement};
use perfreq_core::kb::{Extractor, PatternKb};
use perfreq_core::model::ClassLabel;
use perfreq_core::text::tokenize;
use proptest::prelude::*;

fn base() -> PatternKb {
    PatternKb::new(bundled::negations())
}

fn cfg(runs: usize, seed: u64) -> EvalConfig {
    EvalConfig { runs, seed, extractor: Extractor::new(bundled::complements()), ..EvalConfig::default() }
}

proptest! {
    #[test]
    fn partitions_are_disjoint_and_cover(n in 1usize..300, frac in 0.0..1.0f64, seed in any::<u64>(), run in 0usize..40) {
        let k = (frac * n as f64) as usize;
        let (train, test) = partition(n, k, seed, run);
        prop_assert_eq!(train.len(), k);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert!(train.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn partitions_are_seeded(n in 2usize..100, seed in any::<u64>(), run in 0usize..40) {
        prop_assert_eq!(partition(n, n / 2, seed, run), partition(n, n / 2, seed, run));
    }
}

#[test]
fn bootstrap_partitions_every_run() {
    let data = bundled::mini_corpus();
    let report = bootstrap_eval(&data, &base(), &bundled::vectors(), &cfg(10, 3)).unwrap();
    assert_eq!(report.runs.len(), 10);
    for r in &report.runs {
        assert_eq!(r.train.len(), 20);
        assert_eq!(r.test.len(), 10);
        assert!(r.train.iter().all(|i| !r.test.contains(i)));
        assert_eq!(r.n_eval, 10);
        for w in [r.w_precision, r.w_recall, r.w_f1] {
            assert!((0.0..=1.0).contains(&w));
        }
    }
}

#[test]
fn seeded_report_is_byte_identical() {
    let data = bundled::mini_corpus();
    let store = bundled::vectors();
    let a = bootstrap_eval(&data, &base(), &store, &cfg(4, 11)).unwrap();
    let b = bootstrap_eval(&data, &base(), &store, &cfg(4, 11)).unwrap();
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(a.to_json(), b.to_json());
    let one = bootstrap_eval(&data, &base(), &store, &cfg(1, 11)).unwrap();
    assert_eq!(one.runs[0], a.runs[0]);
    let other = bootstrap_eval(&data, &base(), &store, &cfg(4, 12)).unwrap();
    assert_ne!(other.runs.iter().map(|r| &r.train).collect::<Vec<_>>(), a.runs.iter().map(|r| &r.train).collect::<Vec<_>>());
}

#[test]
fn report_tsv_shape() {
    let data = bundled::mini_corpus();
    let r = bootstrap_eval(&data, &base(), &bundled::vectors(), &cfg(5, 1)).unwrap();
    let tsv = r.to_tsv();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "run\twP\twR\twF1\tn_nomatch");
    assert!(lines[6].starts_with("mean±sd\t"));
    assert_eq!(lines[6].split('\t').count(), 5);
}

#[test]
fn train_size_conventions() {
    let synthetic: Vec<LabeledRequirement> = (0..259)
        .map(|i| LabeledRequirement {
            id: format!("s{i}"),
            text: format!("the system shall respond in {i} seconds"),
            gold: "E,S".parse().unwrap(),
            gold_v_beta: Some(i as f64),
            direction: None,
        })
        .collect();
    let store = bundled::vectors();
    let mut c = cfg(2, 5);
    let r = bootstrap_eval(&synthetic, &base(), &store, &c).unwrap();
    assert!(r.runs.iter().all(|run| run.train.len() == 172 && run.test.len() == 87));
    c.train = TrainSize::Count(170);
    let r = bootstrap_eval(&synthetic, &base(), &store, &c).unwrap();
    assert!(r.runs.iter().all(|run| run.train.len() == 170 && run.test.len() == 89));
}

#[test]
fn too_small_datasets() {
    let data = bundled::mini_corpus();
    let store = bundled::vectors();
    let mut c = cfg(1, 0);
    c.train = TrainSize::Count(30);
    assert!(matches!(bootstrap_eval(&data, &base(), &store, &c), Err(EvalError::DatasetTooSmall { .. })));
    c.train = TrainSize::Fraction(0.5);
    assert!(matches!(bootstrap_eval(&data[..1], &base(), &store, &c), Err(EvalError::DatasetTooSmall { .. })));
    assert!(matches!(bootstrap_eval(&data, &base(), &store, &cfg(0, 0)), Err(EvalError::NoRuns)));
}

#[test]
fn cross_dataset_is_one_unsampled_run() {
    let source = bundled::mini_corpus();
    let target = bundled::holdout();
    assert_eq!(target.len(), 10);
    let r = cross_dataset_eval(&source, &target, &base(), &bundled::vectors(), &cfg(30, 9)).unwrap();
    assert_eq!(r.runs.len(), 1);
    assert_eq!(r.runs[0].n_eval, 10);
    assert_eq!(r.runs[0].test, (0..10).collect::<Vec<_>>());
}

#[test]
fn mini_corpus_covers_every_class() {
    let data = bundled::mini_corpus();
    assert_eq!(data.len(), 30);
    for label in ClassLabel::all() {
        assert!(data.iter().any(|r| r.gold == label), "no {label} row");
    }
}

#[test]
fn extraction_over_the_mini_corpus() {
    let extractor = Extractor::new(bundled::complements());
    let mut ok = 0;
    for row in bundled::mini_corpus() {
        let req = tokenize(&row.text).unwrap();
        if let Ok(p) = extractor.extract(&req, row.gold) {
            ok += 1;
            let placeholders = p.tokens.iter().filter(|t| *t == "<N>").count();
            assert!(placeholders <= 1);
            assert_eq!(placeholders == 1, req.numeric_count() > 0, "{}", row.text);
            assert_eq!(p.label, row.gold);
        }
    }
    assert!(ok >= 25, "only {ok} of 30 extracted");
}

#[test]
fn predictions_use_the_best_part() {
    let kb = bundled::patterns();
    let store = bundled::vectors();
    let engine = perfreq_core::Engine::new(&kb, &store);
    let got = eval::predict(&engine, "The system should response in 5 seconds and ideally less than 2 seconds").unwrap();
    assert_eq!(got, Some("E,S".parse().unwrap()));
    assert_eq!(eval::predict(&engine, "zzz").unwrap(), None);
}
