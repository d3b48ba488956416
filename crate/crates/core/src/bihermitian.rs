//! Almost bihermitian data `(g, j₊, j₋, b)` and the integrability residuals
//! expressed through it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Coeff, ComplexScalarField, ScalarField};
use crate::generalized::GeneralizedStructure;
use crate::pointwise::{max_abs, normalized_gram_det, span_residual};
use crate::samples::{Residual, SampleSet};
use crate::tensor::{
    del_and_delbar, ComplexForm, ComplexVectorField, DifferentialForm, EndomorphismField, Form,
    MetricField, VectorField,
};

/// Residual budget for pointwise structural identities.
pub const STRUCTURE_TOLERANCE: f64 = 1e-9;
/// Frames whose normalised Gram determinant falls below this are degenerate.
pub const FRAME_INDEPENDENCE: f64 = 1e-6;

/// Frames `Z₊ᵏ` of `T₊^{1,0}` and `Z₋ᵏ` of `T₋^{1,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenframeSet {
    pub plus: Vec<ComplexVectorField>,
    pub minus: Vec<ComplexVectorField>,
}

impl EigenframeSet {
    /// `{Z₊¹, …, Z₋¹, …}`, which spans `T₊^{1,0} + T₋^{1,0}`.
    pub fn spanning(&self) -> Vec<ComplexVectorField> {
        self.plus.iter().chain(&self.minus).cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct BihermitianData {
    g: MetricField,
    j_plus: EndomorphismField,
    j_minus: EndomorphismField,
    b: DifferentialForm,
    omega_plus: DifferentialForm,
    omega_minus: DifferentialForm,
    orientation_plus: i8,
    orientation_minus: i8,
    frame_hint: Option<Vec<VectorField>>,
    frames: EigenframeSet,
    samples: SampleSet,
}

/// `(r₁, r₂)`: deviations from the two integrability equations.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityResidual {
    pub plus: Residual,
    pub minus: Residual,
}

impl IntegrabilityResidual {
    pub fn max(&self) -> Residual {
        self.plus.clone().max(self.minus.clone())
    }
}

/// Pieces of the commuting-case reduction.
#[derive(Clone, Debug, Serialize)]
pub struct CommutingIntegrability {
    /// `dω₊ + dω₋` with last argument in `T₊^{1,0}`.
    pub sum_plus: Residual,
    /// `dω₊ + dω₋` with last argument in `T₋^{1,0}`.
    pub sum_minus: Residual,
    /// `dω₊ + iH′` and `dω₋ − iH′` on `T₊^{1,0} + T₋^{1,0}`.
    pub restriction: Residual,
    /// Involutivity of `T₊^{1,0} + T₋^{1,0}`.
    pub involutivity: Residual,
}

impl CommutingIntegrability {
    pub fn total(&self) -> Residual {
        [
            &self.sum_plus,
            &self.sum_minus,
            &self.restriction,
            &self.involutivity,
        ]
        .into_iter()
        .cloned()
        .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GkReport {
    pub involutive_plus: Residual,
    pub involutive_minus: Residual,
    /// `d₊ᶜω₊ + H′` and `d₋ᶜω₋ − H′`, largest coordinate component.
    pub dc: Residual,
    pub integrability_j1: Residual,
    pub integrability_j2: Residual,
    pub j2_square: Residual,
}

impl GkReport {
    pub fn max(&self) -> Residual {
        [&self.involutive_plus, &self.involutive_minus, &self.dc]
            .into_iter()
            .cloned()
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    pub orientation_plus: i8,
    pub orientation_minus: i8,
    pub type_one: bool,
    pub commutator: Residual,
    /// Type one ⇔ opposite orientations, and commuting when type one.
    pub consistent: bool,
}

fn validation(what: &str, r: &Residual) -> Error {
    Error::Validation {
        what: what.into(),
        residual: r.value,
        point: r.worst_point.clone().unwrap_or_default(),
    }
}

fn times_i(v: &ComplexVectorField) -> ComplexVectorField {
    v.scale_complex(Complex64::new(0.0, 1.0))
}

impl BihermitianData {
    pub fn validate(
        g: MetricField,
        j_plus: EndomorphismField,
        j_minus: EndomorphismField,
        b: DifferentialForm,
        samples: &SampleSet,
    ) -> Result<Self> {
        BihermitianData::validate_with_frame(g, j_plus, j_minus, b, None, samples)
    }

    /// As [`BihermitianData::validate`], with real frame fields from which
    /// the eigenframes `e − i j e` are drawn (defaults to the coordinate frame).
    pub fn validate_with_frame(
        g: MetricField,
        j_plus: EndomorphismField,
        j_minus: EndomorphismField,
        b: DifferentialForm,
        frame_hint: Option<Vec<VectorField>>,
        samples: &SampleSet,
    ) -> Result<Self> {
        let n = g.dim();
        if !n.is_multiple_of(2) {
            return Err(Error::BadDimension(n));
        }
        for j in [&j_plus, &j_minus] {
            if j.rows() != n || j.cols() != n || j.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: j.rows(),
                });
            }
        }
        if b.degree() != 2 || b.dim() != n {
            return Err(Error::Degree(format!(
                "b must be a 2-form on dimension {n}"
            )));
        }
        if samples.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: samples.dim(),
            });
        }
        let id = EndomorphismField::identity(n, n);
        let gm = g.matrix().clone();
        let mut omegas = Vec::new();
        for (label, j) in [("j₊", &j_plus), ("j₋", &j_minus)] {
            let sq = j.mul(j).add(&id);
            let r = samples.max_over(|p| max_abs(&sq.real_value_at(p)));
            if r.value > STRUCTURE_TOLERANCE {
                return Err(validation(&format!("{label}² = −1"), &r));
            }
            let compat = j.transpose().mul(&gm).mul(j).sub(&gm);
            let r = samples.max_over(|p| max_abs(&compat.real_value_at(p)));
            if r.value > STRUCTURE_TOLERANCE {
                return Err(validation(&format!("g-compatibility of {label}"), &r));
            }
            // ω(∂_a, ∂_b) = g(j∂_a, ∂_b) = (jᵀG)_ab
            omegas.push(j.transpose().mul(&gm).to_two_form());
        }
        let omega_minus = omegas.pop().expect("two forms");
        let omega_plus = omegas.pop().expect("two forms");
        let orientation_plus = orientation(&omega_plus, samples, "j₊")?;
        let orientation_minus = orientation(&omega_minus, samples, "j₋")?;
        let candidates = frame_hint
            .clone()
            .unwrap_or_else(|| (0..n).map(|i| VectorField::coordinate(n, i)).collect());
        let frames = EigenframeSet {
            plus: eigenframe_for(&j_plus, &candidates, samples)?,
            minus: eigenframe_for(&j_minus, &candidates, samples)?,
        };
        Ok(BihermitianData {
            g,
            j_plus,
            j_minus,
            b,
            omega_plus,
            omega_minus,
            orientation_plus,
            orientation_minus,
            frame_hint,
            frames,
            samples: samples.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn metric(&self) -> &MetricField {
        &self.g
    }

    pub fn j_plus(&self) -> &EndomorphismField {
        &self.j_plus
    }

    pub fn j_minus(&self) -> &EndomorphismField {
        &self.j_minus
    }

    pub fn b(&self) -> &DifferentialForm {
        &self.b
    }

    pub fn omega_plus(&self) -> &DifferentialForm {
        &self.omega_plus
    }

    pub fn omega_minus(&self) -> &DifferentialForm {
        &self.omega_minus
    }

    /// `+1` when `ω^m` is a positive multiple of `dθ₁∧…∧dθₙ`.
    pub fn orientation_plus(&self) -> i8 {
        self.orientation_plus
    }

    pub fn orientation_minus(&self) -> i8 {
        self.orientation_minus
    }

    pub fn eigenframes(&self) -> &EigenframeSet {
        &self.frames
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn frame_hint(&self) -> Option<&[VectorField]> {
        self.frame_hint.as_deref()
    }

    /// Same data with a different two-form `b`.
    pub fn with_b(&self, b: DifferentialForm) -> Result<Self> {
        if b.degree() != 2 || b.dim() != self.dim() {
            return Err(Error::Degree("b must be a 2-form".into()));
        }
        Ok(BihermitianData { b, ..self.clone() })
    }

    /// Same data with `j₋` replaced by `−j₋`.
    pub fn flipped(&self) -> Result<Self> {
        BihermitianData::validate_with_frame(
            self.g.clone(),
            self.j_plus.clone(),
            self.j_minus.neg(),
            self.b.clone(),
            self.frame_hint.clone(),
            &self.samples,
        )
    }

    pub fn structure(&self) -> GeneralizedStructure {
        GeneralizedStructure::from_bihermitian(self)
    }

    /// `H + db`.
    pub fn twisted(&self, h: &DifferentialForm) -> DifferentialForm {
        h.add(&self.b.d())
    }

    /// `max |j₊j₋ − j₋j₊|`.
    pub fn commutator_residual(&self) -> Residual {
        let c = self
            .j_plus
            .mul(&self.j_minus)
            .sub(&self.j_minus.mul(&self.j_plus));
        self.samples.max_over(|p| max_abs(&c.real_value_at(p)))
    }

    /// `max |j± Z − i Z|` over the eigenframes.
    pub fn eigen_residual(&self) -> Residual {
        let mut fields = Vec::new();
        for (j, zs) in [
            (&self.j_plus, &self.frames.plus),
            (&self.j_minus, &self.frames.minus),
        ] {
            let jc = j.to_complex();
            for z in zs {
                fields.push(jc.apply(z).sub(&times_i(z)));
            }
        }
        self.samples.max_over(|p| {
            fields
                .iter()
                .flat_map(|f| f.value_at(p))
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
    }

    /// `ω±` on pairs from the same `(1,0)` frame; zero for `(1,1)` forms.
    pub fn one_one_residual(&self) -> Residual {
        let mut fields = Vec::new();
        for (w, zs) in [
            (&self.omega_plus, &self.frames.plus),
            (&self.omega_minus, &self.frames.minus),
        ] {
            let wc = w.to_complex();
            for a in zs {
                for b in zs {
                    fields.push(wc.apply(&[a, b]).expect("2-form"));
                }
            }
        }
        max_field(&self.samples, &fields)
    }

    /// The two integrability residuals over all frame choices
    /// `X±, Y± ∈ {0} ∪ frame`, `Z±` in the frame.
    pub fn residual_thm23(&self, h: &DifferentialForm) -> Result<IntegrabilityResidual> {
        check_three_form(h, self.dim())?;
        let hp = self.twisted(h).to_complex();
        let wp = self.omega_plus.to_complex();
        let wm = self.omega_minus.to_complex();
        let wsum = wp.add(&wm);
        let i = Complex64::new(0.0, 1.0);
        let m = self.frames.plus.len();
        // pieces 0..m are (Z₊ᵏ, 0), pieces m..2m are (0, Z₋ᵏ)
        let pieces: Vec<&ComplexVectorField> =
            self.frames.plus.iter().chain(&self.frames.minus).collect();
        let plus = EquationTerms {
            d_omega: wp.d(),
            omega_sum: &wsum,
            omega_same: &wp,
            twist: hp.scale_complex(i),
            special: (m..2 * m).collect(),
        };
        let minus = EquationTerms {
            d_omega: wm.d(),
            omega_sum: &wsum,
            omega_same: &wm,
            twist: hp.scale_complex(-i),
            special: (0..m).collect(),
        };
        let t1 = plus.table(&pieces, &self.frames.plus)?;
        let t2 = minus.table(&pieces, &self.frames.minus)?;
        Ok(IntegrabilityResidual {
            plus: sweep_choices(&self.samples, &t1, m),
            minus: sweep_choices(&self.samples, &t2, m),
        })
    }

    /// Component of `[V, W]` orthogonal (in `g`) to `T₊^{1,0} + T₋^{1,0}`,
    /// for `V, W` in the spanning frame.
    pub fn remark1_check(&self) -> Residual {
        let span = self.frames.spanning();
        bracket_closure(&span, &self.g, &self.samples)
    }

    /// The three commuting-case identities; rejected when `j±` do not commute.
    pub fn lemma25_check(&self) -> Result<Residual> {
        self.require_commuting()?;
        let wp = self.omega_plus.to_complex();
        let wm = self.omega_minus.to_complex();
        let wsum = wp.add(&wm);
        let mut fields = Vec::new();
        for a in &self.frames.plus {
            for b in &self.frames.plus {
                fields.push(wm.apply(&[a, b])?);
            }
        }
        for a in &self.frames.minus {
            for b in &self.frames.minus {
                fields.push(wp.apply(&[a, b])?);
            }
        }
        let span = self.frames.spanning();
        for a in &span {
            for b in &span {
                fields.push(wsum.apply(&[a, b])?);
            }
        }
        Ok(max_field(&self.samples, &fields))
    }

    fn require_commuting(&self) -> Result<Residual> {
        let c = self.commutator_residual();
        if c.value > STRUCTURE_TOLERANCE {
            return Err(Error::Hypothesis {
                what: "j₊ j₋ = j₋ j₊".into(),
                residual: c.value,
            });
        }
        Ok(c)
    }

    /// The reduced integrability conditions for commuting `j±`.
    pub fn residual_cor26(&self, h: &DifferentialForm) -> Result<CommutingIntegrability> {
        check_three_form(h, self.dim())?;
        self.require_commuting()?;
        let ihp = self
            .twisted(h)
            .to_complex()
            .scale_complex(Complex64::new(0.0, 1.0));
        let dwp = self.omega_plus.d().to_complex();
        let dwm = self.omega_minus.d().to_complex();
        let sum = dwp.add(&dwm);
        let plus_res = dwp.add(&ihp);
        let minus_res = dwm.sub(&ihp);
        let span = self.frames.spanning();
        let on = |phi: &ComplexForm, zs: &[ComplexVectorField]| -> Result<Residual> {
            let mut fields = Vec::new();
            for (a, x) in span.iter().enumerate() {
                for y in &span[a + 1..] {
                    for z in zs {
                        fields.push(phi.apply(&[x, y, z])?);
                    }
                }
            }
            Ok(max_field(&self.samples, &fields))
        };
        let restriction = on(&plus_res, &span)?.max(on(&minus_res, &span)?);
        Ok(CommutingIntegrability {
            sum_plus: on(&sum, &self.frames.plus)?,
            sum_minus: on(&sum, &self.frames.minus)?,
            restriction,
            involutivity: self.remark1_check(),
        })
    }

    /// Generalized Kähler conditions, with both structures `J₁` (this data)
    /// and `J₂` (`j₋ ↦ −j₋`) checked for integrability.
    pub fn gk_check(&self, h: &DifferentialForm) -> Result<GkReport> {
        check_three_form(h, self.dim())?;
        let hp = self.twisted(h).to_complex();
        let dcp = del_and_delbar(&self.omega_plus.to_complex(), &self.j_plus).dc;
        let dcm = del_and_delbar(&self.omega_minus.to_complex(), &self.j_minus).dc;
        let a = dcp.add(&hp);
        let b = dcm.sub(&hp);
        let dc = self
            .samples
            .max_over(|p| a.max_abs_at(p).max(b.max_abs_at(p)));
        let flipped = self.flipped()?;
        Ok(GkReport {
            involutive_plus: bracket_closure(&self.frames.plus, &self.g, &self.samples),
            involutive_minus: bracket_closure(&self.frames.minus, &self.g, &self.samples),
            dc,
            integrability_j1: self.residual_thm23(h)?.max(),
            integrability_j2: flipped.residual_thm23(h)?.max(),
            j2_square: flipped.structure().square_residual(&self.samples),
        })
    }

    /// Type one ⇔ opposite orientations, with `j₊j₋ = j₋j₊` in that case.
    pub fn lemma31_check(&self) -> Result<OrientationReport> {
        let types = self.structure().types(&self.samples)?;
        let type_one = types.iter().all(|&t| t == 1);
        if !type_one && types.contains(&1) {
            return Err(Error::Ambiguous("type one at some samples only".into()));
        }
        let opposite = self.orientation_plus != self.orientation_minus;
        let commutator = self.commutator_residual();
        let consistent =
            type_one == opposite && (!type_one || commutator.value < STRUCTURE_TOLERANCE);
        Ok(OrientationReport {
            orientation_plus: self.orientation_plus,
            orientation_minus: self.orientation_minus,
            type_one,
            commutator,
            consistent,
        })
    }
}

fn check_three_form(h: &DifferentialForm, dim: usize) -> Result<()> {
    if h.degree() != 3 || h.dim() != dim {
        return Err(Error::Degree(format!(
            "H must be a 3-form on dimension {dim}"
        )));
    }
    Ok(())
}

/// Largest modulus of any of the fields over the samples.
pub(crate) fn max_field(samples: &SampleSet, fields: &[ComplexScalarField]) -> Residual {
    let fields: Vec<&ComplexScalarField> = fields.iter().filter(|f| !f.is_zero()).collect();
    if fields.is_empty() {
        return Residual::zero();
    }
    samples.max_over(|p| fields.iter().map(|f| f.value(p).norm()).fold(0.0, f64::max))
}

/// Residual of `[V, W] ∈ span` over all pairs from `span`.
pub(crate) fn bracket_closure(
    span: &[ComplexVectorField],
    g: &MetricField,
    samples: &SampleSet,
) -> Residual {
    let mut targets = Vec::new();
    for (a, v) in span.iter().enumerate() {
        for w in &span[a + 1..] {
            let br = v.bracket(w);
            if !br.is_zero() {
                targets.push(br);
            }
        }
    }
    span_residual(span, &targets, Some(g), samples)
}

fn orientation(omega: &DifferentialForm, samples: &SampleSet, label: &str) -> Result<i8> {
    let n = omega.dim();
    let mut top = Form::scalar(ScalarField::one(n));
    for _ in 0..n / 2 {
        top = top.wedge(omega);
    }
    let all: Vec<usize> = (0..n).collect();
    let vol = top.component(&all);
    let mut sign = 0i8;
    for p in samples.points() {
        let v = vol.value(p);
        let s = if v > 1e-9 {
            1
        } else if v < -1e-9 {
            -1
        } else {
            0
        };
        if s == 0 || (sign != 0 && s != sign) {
            return Err(Error::Validation {
                what: format!("constant orientation of {label}"),
                residual: v,
                point: p.clone(),
            });
        }
        sign = s;
    }
    Ok(sign)
}

/// Picks the `n/2` fields `e − i j e` from the candidates with the best
/// worst-case independence over the samples (first such subset on ties).
fn eigenframe_for(
    j: &EndomorphismField,
    candidates: &[VectorField],
    samples: &SampleSet,
) -> Result<Vec<ComplexVectorField>> {
    let m = j.dim() / 2;
    let zs: Vec<ComplexVectorField> = candidates
        .iter()
        .map(|e| e.to_complex().sub(&times_i(&j.apply(e).to_complex())))
        .collect();
    let values: Vec<Vec<Vec<Complex64>>> = samples
        .points()
        .iter()
        .map(|p| zs.iter().map(|z| z.value_at(p)).collect())
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in subsets(zs.len(), m) {
        let score = values
            .iter()
            .map(|vs| {
                normalized_gram_det(&subset.iter().map(|&i| vs[i].clone()).collect::<Vec<_>>())
            })
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, subset));
        }
    }
    match best {
        Some((score, subset)) if score > FRAME_INDEPENDENCE => Ok(subset.into_iter().map(|i| zs[i].clone()).collect()),
        Some((score, _)) => Err(Error::Degenerate(format!(
            "no eigenframe with normalised Gram determinant above {FRAME_INDEPENDENCE:e} (best {score:.3e})"
        ))),
        None => Err(Error::Degenerate("no candidate frame fields".into())),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Symbolic terms of one integrability equation,
/// `dω(X, Y, Z) − Ω(X_s, [Y, Z]) + Ω(Y_s, [X, Z]) − Z(ω(X_s, Y_s)) + twist(X, Y, Z)`
/// where `X_s` is the part of `X` in the "special" eigenbundle.
struct EquationTerms<'a> {
    d_omega: ComplexForm,
    omega_sum: &'a ComplexForm,
    omega_same: &'a ComplexForm,
    twist: ComplexForm,
    special: Vec<usize>,
}

impl EquationTerms<'_> {
    /// `table[z][x][y]` over frame pieces; the equation is bilinear in the
    /// pieces, so sums of table entries give every frame choice.
    fn table(
        &self,
        pieces: &[&ComplexVectorField],
        zs: &[ComplexVectorField],
    ) -> Result<Vec<Vec<Vec<ComplexScalarField>>>> {
        let lhs = self.d_omega.add(&self.twist);
        zs.iter()
            .map(|z| {
                let brackets: Vec<ComplexVectorField> =
                    pieces.iter().map(|v| v.bracket(z)).collect();
                (0..pieces.len())
                    .map(|xi| {
                        (0..pieces.len())
                            .map(|yi| {
                                let (x, y) = (pieces[xi], pieces[yi]);
                                let (xs, ys) =
                                    (self.special.contains(&xi), self.special.contains(&yi));
                                let mut t = lhs.apply(&[x, y, z])?;
                                if xs {
                                    t = t.minus(&self.omega_sum.apply(&[x, &brackets[yi]])?);
                                }
                                if ys {
                                    t = t.plus(&self.omega_sum.apply(&[y, &brackets[xi]])?);
                                }
                                if xs && ys {
                                    t = t.minus(&z.apply(&self.omega_same.apply(&[x, y])?));
                                }
                                Ok(t)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Max over `X = X₊ + X₋`, `Y = Y₊ + Y₋` with each part `0` or a frame field.
fn sweep_choices(
    samples: &SampleSet,
    table: &[Vec<Vec<ComplexScalarField>>],
    m: usize,
) -> Residual {
    let choices: Vec<Vec<usize>> = (0..=m)
        .flat_map(|a| (0..=m).map(move |c| (a, c)))
        .map(|(a, c)| {
            let mut v = Vec::new();
            if a > 0 {
                v.push(a - 1);
            }
            if c > 0 {
                v.push(m + c - 1);
            }
            v
        })
        .collect();
    samples.max_over(|p| {
        let mut worst = 0.0f64;
        for zt in table {
            let vals: Vec<Vec<Complex64>> = zt
                .iter()
                .map(|row| row.iter().map(|f| f.value(p)).collect())
                .collect();
            for xc in &choices {
                for yc in &choices {
                    let mut s = Complex64::new(0.0, 0.0);
                    for &x in xc {
                        for &y in yc {
                            s += vals[x][y];
                        }
                    }
                    worst = worst.max(s.norm());
                }
            }
        }
        worst
    })
}
