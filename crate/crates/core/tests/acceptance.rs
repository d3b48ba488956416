//! Acceptance suite: ten criteria, one pass/fail line each. Runs without the
//! libtest harness so the lines appear in order; exits non-zero on any failure.

mod common;

use std::collections::BTreeMap;

use gcverify::catalog;
use gcverify::cli::{self, default_tolerance, run_check, Cli, RunConfig, Verdict};
use gcverify::foliation::matsushita_admissible;
use gcverify::generalized::{
    b_transform, courant_bracket, integrability_residual_direct, EigenframeL,
};
use gcverify::samples::{SampleSet, DEFAULT_SEED};
use gcverify::tensor::Form;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn samples() -> SampleSet {
    SampleSet::standard(4, DEFAULT_SEED)
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn built(name: &str, s: &SampleSet) -> Result<catalog::Built, String> {
    catalog::entry(name)
        .and_then(|e| e.description.build(s))
        .map_err(|e| format!("{name}: {e}"))
}

fn structure_axioms() -> Outcome {
    let s = samples();
    if s.len() != 101 {
        return Err(format!("expected 101 sample points, have {}", s.len()));
    }
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for e in catalog::all() {
        let b = built(&e.name, &s)?;
        let j = b.data.structure();
        let r = j
            .square_residual(&s)
            .value
            .max(j.pairing_residual(&s).value);
        worst = worst.max(r);
        if r >= 1e-9 {
            bad.push(format!("{}={r:.2e}", e.name));
        }
    }
    ensure(
        bad.is_empty(),
        format!(
            "{} entries, max J²+1 / pairing residual {worst:.2e} {bad:?}",
            catalog::all().len()
        ),
    )
}

fn type_reproduction() -> Outcome {
    let s = samples();
    let mut found = Vec::new();
    for (name, want) in [
        ("flat_complex_t4", 2),
        ("flat_symplectic_t4", 0),
        ("linear_foliation_t4", 1),
    ] {
        let types = built(name, &s)?
            .data
            .structure()
            .types(&s)
            .map_err(|e| format!("{name}: {e}"))?;
        if types.iter().any(|&t| t != want) {
            return Err(format!("{name}: expected type {want}, got {types:?}"));
        }
        found.push(format!("{name}={want}"));
    }
    Ok(format!("types exact at all samples: {}", found.join(", ")))
}

fn dual_oracle() -> Outcome {
    let s = samples();
    let mut checked = 0;
    let mut splits = Vec::new();
    let mut ranges = [(f64::INFINITY, 0.0f64); 2];
    for e in catalog::all() {
        let (positive, negative) = (e.expects_integrable(), e.is_negative_control());
        if !positive && !negative {
            continue;
        }
        let b = built(&e.name, &s)?;
        let thm = b
            .data
            .residual_thm23(&b.h)
            .map_err(|x| x.to_string())?
            .max()
            .value;
        let l = EigenframeL::from_bihermitian(&b.data).map_err(|x| x.to_string())?;
        let direct = integrability_residual_direct(&l, &b.h, &s)
            .map_err(|x| x.to_string())?
            .value;
        let ok = if positive {
            thm < 1e-7 && direct < 1e-7
        } else {
            thm > 1e-3 && direct > 1e-3
        };
        let slot = &mut ranges[usize::from(negative)];
        slot.0 = slot.0.min(thm.min(direct));
        slot.1 = slot.1.max(thm.max(direct));
        if !ok {
            splits.push(format!("{} (thm23 {thm:.2e}, direct {direct:.2e})", e.name));
        }
        checked += 1;
    }
    ensure(
        splits.is_empty() && checked >= 7,
        format!(
            "{checked} entries; integrable max {:.2e}, negative min {:.2e}; disagreements {splits:?}",
            ranges[0].1, ranges[1].0
        ),
    )
}

fn commuting_equivalence() -> Outcome {
    let s = samples();
    let mut compared = 0;
    let mut problems = Vec::new();
    let mut worst_eq: f64 = 0.0;
    let tol = default_tolerance("thm23");
    for e in catalog::all() {
        let b = built(&e.name, &s)?;
        if b.data.commutator_residual().value >= 1e-9 {
            continue;
        }
        let thm = run_check("thm23", &b, tol).map_err(|x| x.to_string())?;
        let cor = run_check("commuting_integrability", &b, tol).map_err(|x| x.to_string())?;
        if thm.verdict != cor.verdict {
            problems.push(format!(
                "{}: thm23 {:?} vs commuting_integrability {:?}",
                e.name, thm.verdict, cor.verdict
            ));
        }
        if e.expects_integrable() {
            let eq = cor.residuals["sum_plus"].max(cor.residuals["sum_minus"]);
            worst_eq = worst_eq.max(eq);
            if eq >= 1e-9 {
                problems.push(format!("{}: sum_plus/sum_minus residual {eq:.2e}", e.name));
            }
        }
        compared += 1;
    }
    ensure(
        problems.is_empty() && compared > 0,
        format!("{compared} commuting entries agree; integrable sum_plus/sum_minus max {worst_eq:.2e} {problems:?}"),
    )
}

fn twist_pipeline() -> Outcome {
    let s = samples();
    let b = built("leafwise_conformal_t4(0.1)", &s)?;
    let twist = b.twist.as_ref().ok_or("no built twist")?;
    let thm = b
        .data
        .residual_thm23(&b.h)
        .map_err(|e| e.to_string())?
        .max()
        .value;
    let (dh, res, delbar_agreement) = (
        twist.dh.value,
        twist.restriction.value,
        twist.delbar_agreement.value,
    );
    ensure(
        dh < 1e-8 && res < 1e-8 && delbar_agreement < 1e-9 && thm < 1e-7 && !b.h.is_zero(),
        format!(
            "|H| {:.2e}; dH {dh:.2e}, restriction {res:.2e}, delbar_agreement {delbar_agreement:.2e}, thm23(H) {thm:.2e}",
            b.h.sup_bound()
        ),
    )
}

fn b_naturality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (x, y) = (common::section(&mut rng), common::section(&mut rng));
        let b = common::form(&mut rng, 2);
        let h = common::form(&mut rng, 3);
        let lhs = courant_bracket(
            &b_transform(&x, &b).unwrap(),
            &b_transform(&y, &b).unwrap(),
            &h,
        )
        .unwrap();
        let rhs = b_transform(&courant_bracket(&x, &y, &h.add(&b.d())).unwrap(), &b).unwrap();
        worst = worst.max(lhs.sub(&rhs).sup_bound());
    }
    let s = samples();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for base in catalog::BASE_NAMES {
        let e = catalog::entry(base).unwrap();
        let plain = built(base, &s)?;
        let shifted = built(&format!("{base}_b"), &s)?;
        for check in e.expected.keys() {
            let v0 =
                run_check(check, &plain, default_tolerance(check)).map_err(|x| x.to_string())?;
            let v1 =
                run_check(check, &shifted, default_tolerance(check)).map_err(|x| x.to_string())?;
            let t0 = v0.residuals.get("type").copied();
            let t1 = v1.residuals.get("type").copied();
            if v0.verdict != v1.verdict || t0 != t1 {
                mismatches.push(format!("{base}/{check}"));
            }
            compared += 1;
        }
    }
    ensure(
        worst < 1e-9 && mismatches.is_empty(),
        format!("10 random triples, max residual {worst:.2e}; {compared} base/b verdict pairs agree {mismatches:?}"),
    )
}

fn generalized_kahler() -> Outcome {
    let s = samples();
    let b = built("flat_kahler_gk_t4", &s)?;
    let r = b.data.gk_check(&b.h).map_err(|e| e.to_string())?;
    let clean = r
        .involutive_plus
        .value
        .max(r.involutive_minus.value)
        .max(r.dc.value);
    let h = Form::basis(4, &[0, 1, 2]).unwrap();
    let injected = b.data.gk_check(&h).map_err(|e| e.to_string())?.dc.value;
    ensure(
        clean < 1e-12 && injected >= 0.5,
        format!("flat Kähler pair max residual {clean:.2e}; with H = dθ₁₂₃ the d^c residual is {injected:.3}"),
    )
}

fn matsushita() -> Outcome {
    let worked = matsushita_admissible(0, 0, false)
        && !matsushita_admissible(0, 2, true)
        && !matsushita_admissible(1, 3, true);
    // independent statement: both σ ± χ are multiples of 4, and for
    // definite forms additionally χ ≥ −|σ|
    let brute = |sigma: i64, chi: i64, definite: bool| {
        let multiple_of_four = |n: i64| (-40..=40).any(|m| 4 * m == n);
        multiple_of_four(sigma + chi)
            && multiple_of_four(sigma - chi)
            && (!definite || chi >= -sigma.abs())
    };
    let mut disagreements = 0;
    let mut total = 0;
    for sigma in -20..=20 {
        for chi in -20..=20 {
            for definite in [false, true] {
                total += 1;
                if matsushita_admissible(sigma, chi, definite) != brute(sigma, chi, definite) {
                    disagreements += 1;
                }
            }
        }
    }
    ensure(
        worked && disagreements == 0,
        format!("T⁴/S⁴/CP² reproduced: {worked}; {total} brute-force cases, {disagreements} disagreements"),
    )
}

fn calculus_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCA1C);
    let (mut d2, mut leibniz, mut cartan, mut jacobi) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 0..50 {
        let p = n % 4;
        let alpha = common::form(&mut rng, p);
        d2 = d2.max(alpha.d().d().sup_bound());

        let beta = common::form(&mut rng, (n / 4) % (4 - p));
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = alpha.wedge(&beta).d();
        let rhs = alpha
            .d()
            .wedge(&beta)
            .add(&alpha.wedge(&beta.d()).scale(sign));
        leibniz = leibniz.max(lhs.sub(&rhs).sup_bound());

        let (x, y) = (common::vector(&mut rng), common::vector(&mut rng));
        let omega = common::form(&mut rng, 1 + n % 3);
        let lie_i = omega.interior(&y).unwrap().lie_derivative(&x);
        let i_lie = omega.lie_derivative(&x).interior(&y).unwrap();
        let target = omega.interior(&x.bracket(&y)).unwrap();
        cartan = cartan.max(lie_i.sub(&i_lie).sub(&target).sup_bound());

        let z = common::vector(&mut rng);
        let cyc = x
            .bracket(&y.bracket(&z))
            .add(&y.bracket(&z.bracket(&x)))
            .add(&z.bracket(&x.bracket(&y)));
        jacobi = jacobi.max(cyc.sup_bound());
    }
    ensure(
        d2 == 0.0 && leibniz == 0.0 && cartan < 1e-9 && jacobi == 0.0,
        format!("50 inputs each: d² {d2:.1e}, Leibniz {leibniz:.1e}, [L_X,i_Y] − i_[X,Y] {cartan:.1e}, Jacobi {:.1e}", jacobi.abs()),
    )
}

fn determinism() -> Outcome {
    let args = [
        "gcverify",
        "--catalog",
        "leafwise_conformal_t4",
        "--seed",
        "4242",
    ];
    let config =
        RunConfig::from_cli(&Cli::try_parse_from(args).unwrap()).map_err(|e| e.to_string())?;
    let first = cli::run(&config).map_err(|e| e.to_string())?;
    let second = cli::run(&config).map_err(|e| e.to_string())?;
    let (a, b) = (first.body_json(), second.body_json());
    let verdicts: BTreeMap<&str, Verdict> = first
        .checks
        .iter()
        .map(|c| (c.name.as_str(), c.verdict))
        .collect();
    ensure(
        a == b && a.len() > 100,
        format!(
            "{} byte report bodies identical: {}; {} checks",
            a.len(),
            a == b,
            verdicts.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("structure axioms", structure_axioms),
        ("type reproduction", type_reproduction),
        ("dual-oracle integrability", dual_oracle),
        ("commuting-pair equivalence", commuting_equivalence),
        ("foliation twist pipeline", twist_pipeline),
        ("b-transform naturality", b_naturality),
        ("generalized Kähler", generalized_kahler),
        ("Matsushita arithmetic", matsushita),
        ("calculus kernel", calculus_kernel),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
