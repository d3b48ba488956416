//! Reproducible worked structures on the 4-torus, each with the verdicts the
//! checks are expected to reach on it.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::bihermitian::BihermitianData;
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::foliation::{
    build_from_distribution, build_from_foliation, build_h, DistributionFrame, FoliationData,
    TwistCertificate,
};
use crate::samples::SampleSet;
use crate::tensor::{
    DifferentialForm, EndomorphismField, FieldMatrix, Form, MetricField, VectorField,
};

/// Expected outcome of a named check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    Fail,
    /// The type check passes with this constant type.
    Type(usize),
}

/// How the bihermitian data is produced.
#[derive(Clone, Debug)]
pub enum Construction {
    Bihermitian {
        metric: EndomorphismField,
        j_plus: EndomorphismField,
        j_minus: EndomorphismField,
        frame: Option<Vec<VectorField>>,
    },
    Distribution {
        metric: EndomorphismField,
        e: [VectorField; 2],
        n: [VectorField; 2],
    },
    Foliation {
        f: [VectorField; 2],
        n: [VectorField; 2],
        /// Transverse operator in `N`-frame coordinates.
        j: FieldMatrix,
        metric: Option<EndomorphismField>,
        /// When false the integrability invariants are not enforced.
        validate: bool,
    },
}

/// The twisting 3-form: given explicitly or built from the foliation data.
#[derive(Clone, Debug)]
pub enum Twist {
    Form(DifferentialForm),
    FromFoliation,
}

/// A complete structure description: construction, `b`-field and twist.
#[derive(Clone, Debug)]
pub struct Description {
    pub construction: Construction,
    pub b: DifferentialForm,
    pub h: Twist,
}

/// The result of building a description on a sample set.
#[derive(Clone, Debug)]
pub struct Built {
    pub data: BihermitianData,
    pub h: DifferentialForm,
    pub foliation: Option<FoliationData>,
    /// Present when `H` came from the foliation builder.
    pub twist: Option<TwistCertificate>,
}

impl Description {
    pub fn new(construction: Construction) -> Self {
        Description {
            construction,
            b: Form::zero(4, 2),
            h: Twist::Form(Form::zero(4, 3)),
        }
    }

    pub fn with_b(mut self, b: DifferentialForm) -> Self {
        self.b = b;
        self
    }

    pub fn with_h(mut self, h: Twist) -> Self {
        self.h = h;
        self
    }

    pub fn build(&self, samples: &SampleSet) -> Result<Built> {
        if self.b.degree() != 2 || self.b.dim() != 4 {
            return Err(Error::Degree("b must be a 2-form on the 4-torus".into()));
        }
        let (base, foliation) = match &self.construction {
            Construction::Bihermitian {
                metric,
                j_plus,
                j_minus,
                frame,
            } => {
                let g = MetricField::new(metric.clone(), samples)?;
                let data = BihermitianData::validate_with_frame(
                    g,
                    j_plus.clone(),
                    j_minus.clone(),
                    Form::zero(4, 2),
                    frame.clone(),
                    samples,
                )?;
                (data, None)
            }
            Construction::Distribution { metric, e, n } => {
                let g = MetricField::new(metric.clone(), samples)?;
                let frame = DistributionFrame::new(e.clone(), n.clone(), g, samples)?;
                (build_from_distribution(&frame)?, None)
            }
            Construction::Foliation {
                f,
                n,
                j,
                metric,
                validate,
            } => {
                let metric = metric
                    .as_ref()
                    .map(|m| MetricField::new(m.clone(), samples))
                    .transpose()?;
                let fol = if *validate {
                    FoliationData::new(f.clone(), n.clone(), j.clone(), metric, samples)?
                } else {
                    FoliationData::new_unchecked(f.clone(), n.clone(), j.clone(), metric, samples)?
                };
                (build_from_foliation(&fol)?, Some(fol))
            }
        };
        let (h, twist) = match &self.h {
            Twist::Form(h) => {
                if h.degree() != 3 || h.dim() != 4 {
                    return Err(Error::Degree("H must be a 3-form on the 4-torus".into()));
                }
                (h.clone(), None)
            }
            Twist::FromFoliation => {
                let fol = foliation.as_ref().ok_or_else(|| {
                    Error::Unsupported("the built twist needs foliation data".into())
                })?;
                let twist = build_h(&base, fol)?;
                (twist.h.clone(), Some(twist))
            }
        };
        let data = if self.b.is_zero() {
            base
        } else {
            base.with_b(self.b.clone())?
        };
        Ok(Built {
            data,
            h,
            foliation,
            twist,
        })
    }
}

/// A named catalog structure.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: Description,
    pub expected: BTreeMap<&'static str, Expectation>,
    pub note: &'static str,
}

impl CatalogEntry {
    /// Negative controls are the entries expected to fail integrability.
    pub fn is_negative_control(&self) -> bool {
        self.expected.get("thm23") == Some(&Expectation::Fail)
    }

    pub fn expects_integrable(&self) -> bool {
        self.expected.get("thm23") == Some(&Expectation::Pass)
    }
}

/// Base names; each also exists with a `_b` suffix (`b = 0.3 dθ₁∧dθ₃`).
pub const BASE_NAMES: &[&str] = &[
    "flat_complex_t4",
    "flat_symplectic_t4",
    "linear_foliation_t4",
    "leafwise_conformal_t4",
    "flat_distribution_t4",
    "flat_kahler_gk_t4",
    "broken_foliation_t4",
    "perturbed_symplectic_t4",
    "twisted_complex_t4",
];

/// Every catalog entry at default parameters, base entries first.
pub fn all() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = BASE_NAMES
        .iter()
        .map(|n| entry(n).expect("catalog name"))
        .collect();
    out.extend(
        BASE_NAMES
            .iter()
            .map(|n| entry(&format!("{n}_b")).expect("catalog name")),
    );
    out
}

pub fn names() -> Vec<String> {
    BASE_NAMES
        .iter()
        .map(|n| n.to_string())
        .chain(BASE_NAMES.iter().map(|n| format!("{n}_b")))
        .collect()
}

/// Looks up `name`, `name_b`, optionally with numeric parameters:
/// `linear_foliation_t4(1, 2, 1, 3)` or `leafwise_conformal_t4_b(0.2)`.
pub fn entry(query: &str) -> Result<CatalogEntry> {
    let query = query.trim();
    let unknown = || Error::UnknownEntry(query.to_string());
    let (name, params) = match query.find('(') {
        Some(open) => {
            let close = query.strip_suffix(')').ok_or_else(unknown)?;
            let args = &close[open + 1..];
            let params = args
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|_| unknown()))
                .collect::<Result<Vec<f64>>>()?;
            (query[..open].trim(), params)
        }
        None => (query, Vec::new()),
    };
    let (base, with_b) = match name.strip_suffix("_b") {
        Some(base) => (base, true),
        None => (name, false),
    };
    let arity = |n: usize| -> Result<()> {
        if params.is_empty() || params.len() == n {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{base} takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let mut entry = match base {
        "flat_complex_t4" => {
            arity(0)?;
            flat_complex()
        }
        "flat_symplectic_t4" => {
            arity(0)?;
            flat_symplectic()
        }
        "linear_foliation_t4" => {
            arity(4)?;
            let p = if params.is_empty() {
                vec![1.0, SQRT_2, 1.0, 3f64.sqrt()]
            } else {
                params.clone()
            };
            linear_foliation(p[0], p[1], p[2], p[3])
        }
        "leafwise_conformal_t4" => {
            arity(1)?;
            leafwise_conformal(params.first().copied().unwrap_or(0.1))
        }
        "flat_distribution_t4" => {
            arity(0)?;
            flat_distribution()
        }
        "flat_kahler_gk_t4" => {
            arity(0)?;
            flat_kahler_gk()
        }
        "broken_foliation_t4" => {
            arity(0)?;
            broken_foliation()
        }
        "perturbed_symplectic_t4" => {
            arity(0)?;
            perturbed_symplectic()
        }
        "twisted_complex_t4" => {
            arity(0)?;
            twisted_complex()
        }
        _ => return Err(unknown()),
    };
    entry.name = query.to_string();
    if with_b {
        entry.description.b = default_b();
        entry.note = "b-transform by 0.3 dθ₁∧dθ₃ of the base entry; verdicts unchanged";
    }
    Ok(entry)
}

/// `0.3 dθ₁∧dθ₃`.
pub fn default_b() -> DifferentialForm {
    Form::basis(4, &[0, 2]).expect("valid indices").scale(0.3)
}

fn expect(pairs: &[(&'static str, Expectation)]) -> BTreeMap<&'static str, Expectation> {
    pairs.iter().copied().collect()
}

use Expectation::{Fail, Pass, Type};

fn constant(rows: [[f64; 4]; 4]) -> EndomorphismField {
    EndomorphismField::constant(&rows.map(|r| r.to_vec()), 4)
}

fn standard_j() -> EndomorphismField {
    constant([
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

fn coord(i: usize) -> VectorField {
    VectorField::coordinate(4, i)
}

fn transverse_standard() -> FieldMatrix {
    FieldMatrix::constant(&[vec![0.0, -1.0], vec![1.0, 0.0]], 4)
}

fn cos(k: [i32; 4]) -> ScalarField {
    ScalarField::cos(4, &k).expect("small frequency")
}

fn sin(k: [i32; 4]) -> ScalarField {
    ScalarField::sin(4, &k).expect("small frequency")
}

fn diagonal(d: [ScalarField; 4]) -> EndomorphismField {
    EndomorphismField::from_fn(4, 4, 4, |r, c| {
        if r == c {
            d[r].clone()
        } else {
            ScalarField::zero(4)
        }
    })
}

fn flat_complex() -> CatalogEntry {
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Bihermitian {
            metric: EndomorphismField::identity(4, 4),
            j_plus: standard_j(),
            j_minus: standard_j(),
            frame: None,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(2)),
            ("eigen", Pass),
            ("thm23", Pass),
            ("direct", Pass),
            ("remark1", Pass),
            ("commuting", Pass),
            ("commuting_integrability", Pass),
            ("gk", Pass),
            ("orientation", Pass),
            ("gauduchon", Pass),
        ]),
        note: "j₊ = j₋ = standard constant complex structure, flat metric",
    }
}

fn flat_symplectic() -> CatalogEntry {
    let j = standard_j();
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Bihermitian {
            metric: EndomorphismField::identity(4, 4),
            j_minus: j.neg(),
            j_plus: j,
            frame: None,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(0)),
            ("eigen", Pass),
            ("thm23", Pass),
            ("direct", Pass),
            ("remark1", Pass),
            ("commuting_integrability", Pass),
            ("gk", Pass),
            ("orientation", Pass),
        ]),
        note: "j₋ = −j₊, flat metric; a closed symplectic form",
    }
}

fn foliation_expectations() -> BTreeMap<&'static str, Expectation> {
    expect(&[
        ("axioms", Pass),
        ("type", Type(1)),
        ("eigen", Pass),
        ("thm23", Pass),
        ("direct", Pass),
        ("remark1", Pass),
        ("commuting_integrability", Pass),
        ("orientation", Pass),
        ("foliation", Pass),
        ("gauduchon", Pass),
        ("twist", Pass),
    ])
}

/// Leaves spanned by `X = (a, b, 0, 0)` and `Y = (0, 0, c, d)`.
fn linear_foliation(a: f64, b: f64, c: f64, d: f64) -> CatalogEntry {
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Foliation {
            f: [
                VectorField::constant(&[a, b, 0.0, 0.0]),
                VectorField::constant(&[0.0, 0.0, c, d]),
            ],
            n: [
                VectorField::constant(&[-b, a, 0.0, 0.0]),
                VectorField::constant(&[0.0, 0.0, -d, c]),
            ],
            j: transverse_standard(),
            metric: None,
            validate: true,
        })
        .with_h(Twist::FromFoliation),
        expected: foliation_expectations(),
        note: "linear foliation by constant planes; the type one structure it induces",
    }
}

/// `g = (1 + ε cos(θ₁+θ₃))(dθ₁² + dθ₂²) + (1 − ε cos(θ₁+θ₃))(dθ₃² + dθ₄²)`
/// with leaves along `∂₁, ∂₂`. The two conformal factors are balanced so the
/// Gauduchon condition holds identically.
fn leafwise_conformal(eps: f64) -> CatalogEntry {
    let c = cos([1, 0, 1, 0]).scale(eps);
    let one = ScalarField::one(4);
    let up = &one + &c;
    let down = &one - &c;
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Foliation {
            f: [coord(0), coord(1)],
            n: [coord(2), coord(3)],
            j: transverse_standard(),
            metric: Some(diagonal([up.clone(), up, down.clone(), down])),
            validate: true,
        })
        .with_h(Twist::FromFoliation),
        expected: foliation_expectations(),
        note: "coordinate foliation with a leafwise conformal metric; nonzero H from the foliation builder",
    }
}

fn flat_distribution() -> CatalogEntry {
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Distribution {
            metric: EndomorphismField::identity(4, 4),
            e: [coord(0), coord(1)],
            n: [coord(2), coord(3)],
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(1)),
            ("eigen", Pass),
            ("thm23", Pass),
            ("direct", Pass),
            ("remark1", Pass),
            ("commuting_integrability", Pass),
            ("orientation", Pass),
        ]),
        note: "j± = ρ_E ± ρ_N for E = span(∂₁, ∂₂) on the flat torus",
    }
}

/// Two anticommuting flat Kähler structures `I = (12)(34)`, `J = (13)(42)`.
fn flat_kahler_gk() -> CatalogEntry {
    let second = constant([
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]);
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Bihermitian {
            metric: EndomorphismField::identity(4, 4),
            j_plus: standard_j(),
            j_minus: second,
            frame: None,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(0)),
            ("eigen", Pass),
            ("thm23", Pass),
            ("direct", Pass),
            ("remark1", Pass),
            ("gk", Pass),
            ("orientation", Pass),
        ]),
        note: "generalized Kähler pair from two anticommuting flat Kähler structures",
    }
}

/// Leaves would be spanned by `cos θ₄ ∂₁ + sin θ₄ ∂₂` and `∂₄`, whose bracket
/// `sin θ₄ ∂₁ − cos θ₄ ∂₂` leaves the plane everywhere.
fn broken_foliation() -> CatalogEntry {
    let c = cos([0, 0, 0, 1]);
    let s = sin([0, 0, 0, 1]);
    let z = ScalarField::zero(4);
    let f1 =
        VectorField::new(vec![c.clone(), s.clone(), z.clone(), z.clone()]).expect("dimension 4");
    let n1 = VectorField::new(vec![-&s, c, z.clone(), z]).expect("dimension 4");
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Foliation {
            f: [f1, coord(3)],
            n: [n1, coord(2)],
            j: transverse_standard(),
            metric: None,
            validate: false,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(1)),
            ("eigen", Pass),
            ("thm23", Fail),
            ("direct", Fail),
            ("remark1", Fail),
            ("commuting_integrability", Fail),
            ("foliation", Fail),
        ]),
        note: "negative control: a rotating plane field that is not involutive",
    }
}

/// `g = diag(h, h, 1, 1)`, `h = 1 + 0.1 sin θ₃`, `j₋ = −j₊`: the form
/// `ω₊ = h dθ₁∧dθ₂ + dθ₃∧dθ₄` is not closed.
fn perturbed_symplectic() -> CatalogEntry {
    let h = &ScalarField::one(4) + &sin([0, 0, 1, 0]).scale(0.1);
    let one = ScalarField::one(4);
    let j = standard_j();
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Bihermitian {
            metric: diagonal([h.clone(), h, one.clone(), one]),
            j_minus: j.neg(),
            j_plus: j,
            frame: None,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(0)),
            ("eigen", Pass),
            ("thm23", Fail),
            ("direct", Fail),
            ("commuting_integrability", Fail),
        ]),
        note: "negative control: non-closed symplectic-type data",
    }
}

/// `j₊ = j₋ = R j₀ Rᵀ` for the orthonormal frame `∂₁, cos θ₃ ∂₂ + sin θ₃ ∂₄,
/// ∂₃, −sin θ₃ ∂₂ + cos θ₃ ∂₄` on the flat torus.
fn twisted_complex() -> CatalogEntry {
    let c = cos([0, 0, 1, 0]);
    let s = sin([0, 0, 1, 0]);
    let one = ScalarField::one(4);
    let z = ScalarField::zero(4);
    let r = EndomorphismField::new(
        4,
        4,
        vec![
            one.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            c.clone(),
            z.clone(),
            -&s,
            z.clone(),
            z.clone(),
            one,
            z.clone(),
            z.clone(),
            s,
            z,
            c,
        ],
    )
    .expect("4×4");
    let j = r.mul(&standard_j()).mul(&r.transpose());
    CatalogEntry {
        name: String::new(),
        description: Description::new(Construction::Bihermitian {
            metric: EndomorphismField::identity(4, 4),
            j_plus: j.clone(),
            j_minus: j,
            frame: None,
        }),
        expected: expect(&[
            ("axioms", Pass),
            ("type", Type(2)),
            ("eigen", Pass),
            ("thm23", Fail),
            ("direct", Fail),
            ("commuting_integrability", Fail),
        ]),
        note: "negative control: a non-integrable orthogonal almost complex structure",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::DEFAULT_SEED;

    #[test]
    fn names_resolve_with_parameters() {
        assert!(entry("linear_foliation_t4(1, 2, 1, 3)").is_ok());
        assert!(entry("leafwise_conformal_t4_b(0.2)").is_ok());
        assert!(matches!(entry("nope_t4"), Err(Error::UnknownEntry(_))));
        assert!(matches!(entry("flat_complex_t4(1)"), Err(Error::Config(_))));
        assert_eq!(all().len(), 2 * BASE_NAMES.len());
    }

    #[test]
    fn representative_types() {
        let s = SampleSet::standard(4, DEFAULT_SEED);
        for (name, t) in [
            ("flat_symplectic_t4", 0),
            ("linear_foliation_t4", 1),
            ("flat_complex_t4", 2),
        ] {
            let built = entry(name).unwrap().description.build(&s).unwrap();
            assert!(
                built
                    .data
                    .structure()
                    .types(&s)
                    .unwrap()
                    .iter()
                    .all(|&x| x == t),
                "{name}"
            );
        }
    }

    #[test]
    fn broken_foliation_sum_is_not_involutive() {
        let s = SampleSet::standard(4, DEFAULT_SEED);
        let built = entry("broken_foliation_t4")
            .unwrap()
            .description
            .build(&s)
            .unwrap();
        assert!(built.data.remark1_check().value > 1e-3);
    }

    #[test]
    fn b_variant_changes_structure_not_twist() {
        let s = SampleSet::standard(4, DEFAULT_SEED);
        let base = entry("flat_complex_t4")
            .unwrap()
            .description
            .build(&s)
            .unwrap();
        let shifted = entry("flat_complex_t4_b")
            .unwrap()
            .description
            .build(&s)
            .unwrap();
        let p = [0.3, 0.1, 2.0, 1.0];
        let diff = &base.data.structure().matrix_at(&p) - &shifted.data.structure().matrix_at(&p);
        assert!(diff.amax() > 0.1);
        assert!(shifted.h.is_zero());
    }

    #[test]
    fn leafwise_conformal_twist_is_needed_and_sufficient() {
        let s = SampleSet::standard(4, DEFAULT_SEED);
        let built = entry("leafwise_conformal_t4")
            .unwrap()
            .description
            .build(&s)
            .unwrap();
        assert!(built.h.sup_bound() > 1e-3);
        assert!(built.data.residual_thm23(&built.h).unwrap().max().value < 1e-9);
        let zero = Form::zero(4, 3);
        assert!(built.data.residual_thm23(&zero).unwrap().max().value > 1e-3);
    }
}
