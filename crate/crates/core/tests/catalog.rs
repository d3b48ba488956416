//! The catalog certifies itself: every recorded expectation is reproduced.

use gcverify::catalog::{self, Expectation};
use gcverify::cli::{default_tolerance, run_check, Verdict};
use gcverify::foliation::ab_splitting;
use gcverify::samples::{SampleSet, DEFAULT_SEED};

#[test]
fn every_expectation_is_reproduced() {
    let s = SampleSet::standard(4, DEFAULT_SEED);
    let mut mismatches = Vec::new();
    for e in catalog::all() {
        let built = e
            .description
            .build(&s)
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        for (check, want) in &e.expected {
            let rec = run_check(check, &built, default_tolerance(check)).unwrap();
            let ok = match want {
                Expectation::Pass => rec.verdict == Verdict::Pass,
                Expectation::Fail => rec.verdict == Verdict::Fail,
                Expectation::Type(t) => {
                    rec.verdict == Verdict::Pass && rec.residuals["type"] == *t as f64
                }
            };
            if !ok {
                mismatches.push(format!(
                    "{}/{check}: expected {want:?}, got {:?} {:?}",
                    e.name, rec.verdict, rec.value
                ));
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

#[test]
fn negative_controls_clear_the_floor() {
    let s = SampleSet::standard(4, DEFAULT_SEED);
    let negatives: Vec<_> = catalog::all()
        .into_iter()
        .filter(|e| e.is_negative_control())
        .collect();
    assert!(negatives.len() >= 3);
    for e in negatives {
        let b = e.description.build(&s).unwrap();
        let thm = b.data.residual_thm23(&b.h).unwrap().max().value;
        assert!(thm > 1e-3, "{}: {thm}", e.name);
    }
}

#[test]
fn parameters_do_not_change_verdicts() {
    let s = SampleSet::standard(4, DEFAULT_SEED);
    for name in [
        "linear_foliation_t4(1, 2, 3, 5)",
        "linear_foliation_t4(0.5, -1, 2, 0.25)",
        "leafwise_conformal_t4(0.3)",
    ] {
        let b = catalog::entry(name).unwrap().description.build(&s).unwrap();
        assert!(
            b.data
                .structure()
                .types(&s)
                .unwrap()
                .iter()
                .all(|&t| t == 1),
            "{name}"
        );
        assert!(
            b.data.residual_thm23(&b.h).unwrap().max().value < 1e-7,
            "{name}"
        );
    }
}

#[test]
fn type_one_entries_have_involutive_kernel() {
    let s = SampleSet::standard(4, DEFAULT_SEED);
    for name in [
        "linear_foliation_t4",
        "leafwise_conformal_t4",
        "flat_distribution_t4",
    ] {
        let b = catalog::entry(name).unwrap().description.build(&s).unwrap();
        let split = ab_splitting(&b.data).unwrap();
        assert!(split.kernel_involutivity(&b.data).value < 1e-8, "{name}");
        assert!(split.kernel_residual(&b.data).value < 1e-9, "{name}");
        assert!(split.reassembly_residual(&b.data).value < 1e-10, "{name}");
        if let Some(fol) = &b.foliation {
            assert!(
                split.transverse_roundtrip(fol).unwrap().value < 1e-9,
                "{name}"
            );
        }
    }
}
