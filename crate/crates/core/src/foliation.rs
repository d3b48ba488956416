//! Two-dimensional distributions and transversely holomorphic foliations on
//! the 4-torus chart, and the bihermitian data built from them.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::bihermitian::{bracket_closure, max_field, BihermitianData, STRUCTURE_TOLERANCE};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::pointwise::{max_abs, normalized_gram_det, span_residual};
use crate::samples::{Residual, SampleSet};
use crate::tensor::{
    del_and_delbar, graded_component, ComplexFieldMatrix, ComplexForm, ComplexVectorField,
    DifferentialForm, EndomorphismField, FieldMatrix, Form, MetricField, VectorField,
};

/// Residual budget for involutivity of frames.
pub const INVOLUTIVITY_TOLERANCE: f64 = 1e-8;
/// Gate on the Gauduchon residual before building the twisting form.
pub const GAUDUCHON_GATE: f64 = 1e-7;

/// Whether a compact oriented 4-manifold with signature `σ` and Euler
/// characteristic `χ` passes the arithmetic test for carrying an orientable
/// 2-plane field.
pub fn matsushita_admissible(sigma: i64, chi: i64, definite: bool) -> bool {
    let congruent = (sigma + chi).rem_euclid(4) == 0 && (sigma - chi).rem_euclid(4) == 0;
    if definite {
        congruent && sigma.abs() + chi >= 0
    } else {
        congruent
    }
}

/// Rotation by `+π/2` of a plane with frame `(e₁, e₂)` and Gram matrix `Γ`,
/// in frame coordinates: it takes the first orthonormalised frame vector to
/// the second. Symbolic only when `Γ` is a constant matrix times a scalar field.
pub fn plane_rotation(
    g11: &ScalarField,
    g12: &ScalarField,
    g22: &ScalarField,
) -> Result<[[f64; 2]; 2]> {
    let unsupported = || {
        Error::Unsupported(
            "plane Gram matrix is not a constant multiple of one scalar field".into(),
        )
    };
    let r12 = g12.ratio_to(g11).ok_or_else(unsupported)?;
    let r22 = g22.ratio_to(g11).ok_or_else(unsupported)?;
    let det = r22 - r12 * r12;
    if det <= 0.0 {
        return Err(Error::Degenerate(
            "plane Gram matrix is not positive definite".into(),
        ));
    }
    let s = 1.0 / det.sqrt();
    Ok([[-r12 * s, -r22 * s], [s, r12 * s]])
}

fn frame_matrix(cols: &[VectorField]) -> Result<(EndomorphismField, EndomorphismField)> {
    let m = EndomorphismField::from_columns(cols);
    let inv = m.inverse_constant_det().map_err(|e| match e {
        Error::Unsupported(_) => {
            Error::Unsupported("adapted frame must have constant determinant".into())
        }
        other => other,
    })?;
    Ok((m, inv))
}

fn block_diag(
    a: &[[ScalarField; 2]; 2],
    b: &[[ScalarField; 2]; 2],
    dim: usize,
) -> EndomorphismField {
    EndomorphismField::from_fn(4, 4, dim, |r, c| match (r < 2, c < 2) {
        (true, true) => a[r][c].clone(),
        (false, false) => b[r - 2][c - 2].clone(),
        _ => ScalarField::zero(dim),
    })
}

fn constant_block(r: [[f64; 2]; 2], dim: usize) -> [[ScalarField; 2]; 2] {
    r.map(|row| row.map(|x| ScalarField::constant(dim, x)))
}

fn check_independent(cols: &[VectorField], samples: &SampleSet, what: &str) -> Result<()> {
    for p in samples.points() {
        let vs: Vec<Vec<Complex64>> = cols.iter().map(|v| v.value_at(p)).collect();
        let det = normalized_gram_det(&vs);
        if det <= 1e-6 {
            return Err(Error::Degenerate(format!(
                "{what} frame is dependent at {p:?} (normalised Gram {det:.3e})"
            )));
        }
    }
    Ok(())
}

fn check_four(fields: &[&VectorField]) -> Result<()> {
    for v in fields {
        if v.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: v.dim(),
            });
        }
    }
    Ok(())
}

/// A splitting `T = E ⊕ N` into `g`-orthogonal planes with given frames.
#[derive(Clone, Debug)]
pub struct DistributionFrame {
    pub e: [VectorField; 2],
    pub n: [VectorField; 2],
    pub g: MetricField,
    samples: SampleSet,
}

impl DistributionFrame {
    pub fn new(
        e: [VectorField; 2],
        n: [VectorField; 2],
        g: MetricField,
        samples: &SampleSet,
    ) -> Result<Self> {
        check_four(&[&e[0], &e[1], &n[0], &n[1]])?;
        check_independent(
            &[e[0].clone(), e[1].clone(), n[0].clone(), n[1].clone()],
            samples,
            "distribution",
        )?;
        let cross: Vec<ScalarField> = e
            .iter()
            .flat_map(|x| n.iter().map(|y| g.inner(x, y)))
            .collect();
        let r = samples.max_over(|p| cross.iter().map(|f| f.value(p).abs()).fold(0.0, f64::max));
        if r.value > STRUCTURE_TOLERANCE {
            return Err(Error::Validation {
                what: "g-orthogonality of N to E".into(),
                residual: r.value,
                point: r.worst_point.unwrap_or_default(),
            });
        }
        Ok(DistributionFrame {
            e,
            n,
            g,
            samples: samples.clone(),
        })
    }

    pub fn frame(&self) -> Vec<VectorField> {
        vec![
            self.e[0].clone(),
            self.e[1].clone(),
            self.n[0].clone(),
            self.n[1].clone(),
        ]
    }
}

/// `j₊ = ρ_E + ρ_N`, `j₋ = ρ_E − ρ_N` with `ρ` the `+π/2` rotations of the planes.
pub fn build_from_distribution(frame: &DistributionFrame) -> Result<BihermitianData> {
    let cols = frame.frame();
    let (m, inv) = frame_matrix(&cols)?;
    let g = &frame.g;
    let rot = |v: &[VectorField; 2]| {
        plane_rotation(
            &g.inner(&v[0], &v[0]),
            &g.inner(&v[0], &v[1]),
            &g.inner(&v[1], &v[1]),
        )
    };
    let re = constant_block(rot(&frame.e)?, 4);
    let rn = constant_block(rot(&frame.n)?, 4);
    let neg_rn = rn.clone().map(|row| row.map(|x| -&x));
    let jp = m.mul(&block_diag(&re, &rn, 4)).mul(&inv);
    let jm = m.mul(&block_diag(&re, &neg_rn, 4)).mul(&inv);
    BihermitianData::validate_with_frame(
        g.clone(),
        jp,
        jm,
        Form::zero(4, 2),
        Some(cols),
        &frame.samples,
    )
}

/// A 2-foliation `F` with a complement frame `N` and a transverse complex
/// operator `j`, given as a 2×2 matrix in the `N`-frame (`j N_c = Σ_r j_rc N_r`).
#[derive(Clone, Debug)]
pub struct FoliationData {
    pub f: [VectorField; 2],
    pub n: [VectorField; 2],
    pub j: FieldMatrix,
    pub metric: Option<MetricField>,
    samples: SampleSet,
}

impl FoliationData {
    /// Validated constructor: `F` involutive and the transverse structure integrable.
    pub fn new(
        f: [VectorField; 2],
        n: [VectorField; 2],
        j: FieldMatrix,
        metric: Option<MetricField>,
        samples: &SampleSet,
    ) -> Result<Self> {
        let fol = FoliationData::new_unchecked(f, n, j, metric, samples)?;
        for (what, r) in [
            ("involutivity of F", fol.involutivity_residual()),
            (
                "integrability of the transverse structure",
                fol.transverse_residual(),
            ),
        ] {
            if r.value > INVOLUTIVITY_TOLERANCE {
                return Err(Error::Validation {
                    what: what.into(),
                    residual: r.value,
                    point: r.worst_point.unwrap_or_default(),
                });
            }
        }
        Ok(fol)
    }

    /// Checks shapes, independence and `j² = −1` only; used for negative controls.
    pub fn new_unchecked(
        f: [VectorField; 2],
        n: [VectorField; 2],
        j: FieldMatrix,
        metric: Option<MetricField>,
        samples: &SampleSet,
    ) -> Result<Self> {
        check_four(&[&f[0], &f[1], &n[0], &n[1]])?;
        if j.rows() != 2 || j.cols() != 2 || j.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: j.rows(),
            });
        }
        let sq = j.mul(&j).add(&EndomorphismField::identity(2, 4));
        let r = samples.max_over(|p| max_abs(&sq.real_value_at(p)));
        if r.value > STRUCTURE_TOLERANCE {
            return Err(Error::Validation {
                what: "transverse j² = −1".into(),
                residual: r.value,
                point: r.worst_point.unwrap_or_default(),
            });
        }
        check_independent(
            &[f[0].clone(), f[1].clone(), n[0].clone(), n[1].clone()],
            samples,
            "foliation",
        )?;
        Ok(FoliationData {
            f,
            n,
            j,
            metric,
            samples: samples.clone(),
        })
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn frame(&self) -> Vec<VectorField> {
        vec![
            self.f[0].clone(),
            self.f[1].clone(),
            self.n[0].clone(),
            self.n[1].clone(),
        ]
    }

    /// `N₁ + i j N₁`, spanning `N^{0,1}` modulo `F`.
    pub fn antiholomorphic_normal(&self) -> ComplexVectorField {
        let jn1 = self.n[0]
            .mul_scalar(self.j.get(0, 0))
            .add(&self.n[1].mul_scalar(self.j.get(1, 0)));
        ComplexVectorField::from_parts(&self.n[0], &jn1)
    }

    /// `[F, F] ⊂ F`.
    pub fn involutivity_residual(&self) -> Residual {
        let span: Vec<ComplexVectorField> = self.f.iter().map(|v| v.to_complex()).collect();
        let br = self.f[0].bracket(&self.f[1]).to_complex();
        span_residual(&span, &[br], None, &self.samples)
    }

    /// `[π⁻¹N^{0,1}, π⁻¹N^{0,1}] ⊂ π⁻¹N^{0,1}`.
    pub fn transverse_residual(&self) -> Residual {
        let span = vec![
            self.f[0].to_complex(),
            self.f[1].to_complex(),
            self.antiholomorphic_normal(),
        ];
        let mut targets = Vec::new();
        for (a, v) in span.iter().enumerate() {
            for w in &span[a + 1..] {
                targets.push(v.bracket(w));
            }
        }
        span_residual(&span, &targets, None, &self.samples)
    }
}

/// Bihermitian data from a transversely holomorphic foliation: `g` made
/// block-orthogonal in the adapted frame and `j`-invariant on `N`;
/// `j₊ = ρ_F ⊕ (−j)` and `j₋ = (−ρ_F) ⊕ (−j)`.
pub fn build_from_foliation(fol: &FoliationData) -> Result<BihermitianData> {
    let cols = fol.frame();
    let (m, inv) = frame_matrix(&cols)?;
    let g0 = fol
        .metric
        .as_ref()
        .map(|g| g.matrix().clone())
        .unwrap_or_else(|| EndomorphismField::identity(4, 4));
    let ad = m.transpose().mul(&g0).mul(&m);
    let gf = [
        [ad.get(0, 0).clone(), ad.get(0, 1).clone()],
        [ad.get(1, 0).clone(), ad.get(1, 1).clone()],
    ];
    let gn = EndomorphismField::from_fn(2, 2, 4, |r, c| ad.get(r + 2, c + 2).clone());
    let gn = gn.add(&fol.j.transpose().mul(&gn).mul(&fol.j)).scale(0.5);
    let gn = [
        [gn.get(0, 0).clone(), gn.get(0, 1).clone()],
        [gn.get(1, 0).clone(), gn.get(1, 1).clone()],
    ];
    let g_ad = block_diag(&gf, &gn, 4);
    let g = MetricField::new(inv.transpose().mul(&g_ad).mul(&inv), &fol.samples)?;
    let rf = plane_rotation(&gf[0][0], &gf[0][1], &gf[1][1])?;
    let neg_j = [
        [-fol.j.get(0, 0), -fol.j.get(0, 1)],
        [-fol.j.get(1, 0), -fol.j.get(1, 1)],
    ];
    let jp = m
        .mul(&block_diag(&constant_block(rf, 4), &neg_j, 4))
        .mul(&inv);
    let neg_rf = rf.map(|row| row.map(|x| -x));
    let jm = m
        .mul(&block_diag(&constant_block(neg_rf, 4), &neg_j, 4))
        .mul(&inv);
    BihermitianData::validate_with_frame(g, jp, jm, Form::zero(4, 2), Some(cols), &fol.samples)
}

/// `A = T₊^{1,0} ∩ T₋^{0,1}` and `B = T₊^{1,0} ∩ T₋^{1,0}` as line fields.
#[derive(Clone, Debug)]
pub struct ABSplitting {
    pub a: ComplexVectorField,
    pub b: ComplexVectorField,
}

fn half_projector(j: &EndomorphismField, sign: f64) -> ComplexFieldMatrix {
    // ½(1 − sign·i j)
    let id = ComplexFieldMatrix::identity(4, 4);
    let ij = j.to_complex().map(|e| e.times_i());
    id.sub(&ij.scale(sign)).scale(0.5)
}

/// Simultaneous eigenlines of commuting `j±` with opposite orientations.
pub fn ab_splitting(data: &BihermitianData) -> Result<ABSplitting> {
    if data.dim() != 4 {
        return Err(Error::BadDimension(data.dim()));
    }
    let c = data.commutator_residual();
    if c.value > STRUCTURE_TOLERANCE {
        return Err(Error::Hypothesis {
            what: "j₊ j₋ = j₋ j₊".into(),
            residual: c.value,
        });
    }
    if data.orientation_plus() == data.orientation_minus() {
        return Err(Error::Hypothesis {
            what: "j₊, j₋ induce opposite orientations".into(),
            residual: 0.0,
        });
    }
    let p_plus = half_projector(data.j_plus(), 1.0);
    let pb = p_plus.mul(&half_projector(data.j_minus(), 1.0));
    let pa = p_plus.mul(&half_projector(data.j_minus(), -1.0));
    let samples = data.samples();
    for (name, proj) in [("B", &pb), ("A", &pa)] {
        for p in samples.points() {
            let sv = proj.value_at(p).singular_values();
            let smax = sv.max();
            let rank = sv.iter().filter(|&&s| s > 1e-8 * smax.max(1e-300)).count();
            if rank != 1 {
                return Err(Error::Degenerate(format!(
                    "eigenline {name} has dimension {rank} at {p:?}"
                )));
            }
        }
    }
    let candidates: Vec<VectorField> = data
        .frame_hint()
        .map(|f| f.to_vec())
        .unwrap_or_else(|| (0..4).map(|i| VectorField::coordinate(4, i)).collect());
    let pick = |proj: &ComplexFieldMatrix| -> Result<ComplexVectorField> {
        let mut best: Option<(f64, ComplexVectorField)> = None;
        for e in &candidates {
            let v = proj.apply(&e.to_complex());
            let score = samples
                .points()
                .iter()
                .map(|p| DVector::from_vec(v.value_at(p)).norm())
                .fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, v));
            }
        }
        match best {
            Some((s, v)) if s > 1e-6 => Ok(v),
            _ => Err(Error::Degenerate(
                "no frame field projects to a nowhere-vanishing eigenvector".into(),
            )),
        }
    };
    Ok(ABSplitting {
        a: pick(&pa)?,
        b: pick(&pb)?,
    })
}

impl ABSplitting {
    /// Eigenvalue residuals `(j₊, j₋) = (i, −i)` on `A` and `(i, i)` on `B`.
    pub fn eigen_residual(&self, data: &BihermitianData) -> Residual {
        let i = Complex64::new(0.0, 1.0);
        let jp = data.j_plus().to_complex();
        let jm = data.j_minus().to_complex();
        let fields = [
            jp.apply(&self.a).sub(&self.a.scale_complex(i)),
            jm.apply(&self.a).add(&self.a.scale_complex(i)),
            jp.apply(&self.b).sub(&self.b.scale_complex(i)),
            jm.apply(&self.b).sub(&self.b.scale_complex(i)),
        ];
        data.samples().max_over(|p| {
            fields
                .iter()
                .flat_map(|f| f.value_at(p))
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
    }

    /// `T₊^{1,0} = A ⊕ B` and `T₋^{1,0} = Ā ⊕ B`, both inclusions.
    pub fn reassembly_residual(&self, data: &BihermitianData) -> Residual {
        let s = data.samples();
        let frames = data.eigenframes();
        let plus = [self.a.clone(), self.b.clone()];
        let minus = [self.a.conj(), self.b.clone()];
        [
            span_residual(&plus, &frames.plus, None, s),
            span_residual(&frames.plus, &plus, None, s),
            span_residual(&minus, &frames.minus, None, s),
            span_residual(&frames.minus, &minus, None, s),
        ]
        .into_iter()
        .collect()
    }

    /// `A ⊕ Ā = ker(j₊ + j₋) ⊗ ℂ`: `A` is annihilated, and the kernel has
    /// dimension two.
    pub fn kernel_residual(&self, data: &BihermitianData) -> Residual {
        let sum = data.j_plus().add(data.j_minus());
        let on_a = sum.to_complex().apply(&self.a);
        data.samples().max_over(|p| {
            let k = sum.real_value_at(p);
            let sv = k.singular_values();
            let kernel_dim = sv.iter().filter(|&&s| s < 1e-8).count();
            let dim_defect = (kernel_dim as f64 - 2.0).abs();
            on_a.value_at(p)
                .iter()
                .map(|z| z.norm())
                .fold(dim_defect, f64::max)
        })
    }

    /// `[A ⊕ Ā, A ⊕ Ā] ⊂ A ⊕ Ā`.
    pub fn kernel_involutivity(&self, data: &BihermitianData) -> Residual {
        bracket_closure(
            &[self.a.clone(), self.a.conj()],
            data.metric(),
            data.samples(),
        )
    }

    /// For foliation-built data: `π(B)` is a `−i` eigenvector of the
    /// transverse `j`, i.e. spans `N^{0,1}`.
    pub fn transverse_roundtrip(&self, fol: &FoliationData) -> Result<Residual> {
        let (_, inv) = frame_matrix(&fol.frame())?;
        let coords = inv.to_complex().apply(&self.b);
        let i = Complex64::new(0.0, 1.0);
        Ok(fol.samples().max_over(|p| {
            let c = coords.value_at(p);
            let v = nalgebra::Vector2::new(c[2], c[3]);
            let j = fol.j.value_at(p);
            let jv = nalgebra::Vector2::new(
                j[(0, 0)] * v[0] + j[(0, 1)] * v[1],
                j[(1, 0)] * v[0] + j[(1, 1)] * v[1],
            );
            (jv + v * i).norm() / v.norm().max(1e-300)
        }))
    }
}

/// A complex form split along `F ⊗ ℂ ⊕ B ⊕ B̄`; `(k, m, n)` counts the
/// arguments taken from each summand.
#[derive(Clone, Debug)]
pub struct TriGradedForm {
    pub degree: usize,
    pub components: BTreeMap<(usize, usize, usize), ComplexForm>,
}

impl TriGradedForm {
    pub fn component(&self, k: usize, m: usize, n: usize) -> ComplexForm {
        self.components
            .get(&(k, m, n))
            .cloned()
            .unwrap_or_else(|| Form::zero(4, self.degree))
    }

    pub fn reassemble(&self) -> ComplexForm {
        self.components
            .values()
            .fold(Form::zero(4, self.degree), |acc, c| acc.add(c))
    }
}

/// Projectors onto `F ⊗ ℂ`, `B` and `B̄` along the splitting. Symbolic when
/// the frame `(F₁, F₂, B, B̄)` has constant determinant.
pub fn trigrading_projectors(
    f: &[VectorField; 2],
    b: &ComplexVectorField,
) -> Result<[ComplexFieldMatrix; 3]> {
    let k = ComplexFieldMatrix::from_columns(&[
        f[0].to_complex(),
        f[1].to_complex(),
        b.clone(),
        b.conj(),
    ]);
    let kinv = k.inverse_constant_det().map_err(|e| match e {
        Error::Unsupported(_) => {
            Error::Unsupported("trigrading needs a frame (F, B, B̄) of constant determinant".into())
        }
        other => other,
    })?;
    let select = |diag: [f64; 4]| {
        let d = ComplexFieldMatrix::constant(
            &(0..4)
                .map(|r| (0..4).map(|c| if r == c { diag[r] } else { 0.0 }).collect())
                .collect::<Vec<_>>(),
            4,
        );
        k.mul(&d).mul(&kinv)
    };
    Ok([
        select([1.0, 1.0, 0.0, 0.0]),
        select([0.0, 0.0, 1.0, 0.0]),
        select([0.0, 0.0, 0.0, 1.0]),
    ])
}

pub fn trigrade(
    phi: &ComplexForm,
    f: &[VectorField; 2],
    split: &ABSplitting,
) -> Result<TriGradedForm> {
    let projectors = trigrading_projectors(f, &split.b)?;
    let deg = phi.degree();
    let mut components = BTreeMap::new();
    for k in 0..=2.min(deg) {
        for m in 0..=1 {
            for n in 0..=1 {
                if k + m + n != deg {
                    continue;
                }
                let c = graded_component(phi, &projectors, &[k, m, n]);
                if !c.is_zero() {
                    components.insert((k, m, n), c);
                }
            }
        }
    }
    Ok(TriGradedForm {
        degree: deg,
        components,
    })
}

/// Largest value of the single component of `∂∂̄ω` over the samples.
pub fn gauduchon_residual(
    omega: &DifferentialForm,
    j: &EndomorphismField,
    samples: &SampleSet,
) -> Residual {
    let dbar = del_and_delbar(&omega.to_complex(), j).delbar;
    let ddbar = del_and_delbar(&dbar, j).del;
    samples.max_over(|p| ddbar.max_abs_at(p))
}

/// The closed twisting form for foliation-built data and its certificates.
#[derive(Clone, Debug, Serialize)]
pub struct TwistCertificate {
    #[serde(skip)]
    pub h: DifferentialForm,
    pub gauduchon: Residual,
    pub dh: Residual,
    /// `dω₊ + iH` on triples from the spanning eigenframe.
    pub restriction: Residual,
    /// `(dω₊)^{2,0,1} − (∂̄₊ω₊)^{2,0,1}`.
    pub delbar_agreement: Residual,
    /// `(∂̄₊ω₊)^{2,1,0}`.
    pub delbar_210: Residual,
}

impl TwistCertificate {
    pub fn max(&self) -> Residual {
        [
            &self.dh,
            &self.restriction,
            &self.delbar_agreement,
            &self.delbar_210,
        ]
        .into_iter()
        .cloned()
        .collect()
    }
}

/// `H = 2 Im (∂̄₊ω₊)^{1,1,1} + 2 Im (dω₊)^{2,0,1}`, gated on the Gauduchon
/// condition for `(ω₊, j₊)`.
pub fn build_h(data: &BihermitianData, fol: &FoliationData) -> Result<TwistCertificate> {
    let samples = data.samples();
    let gauduchon = gauduchon_residual(data.omega_plus(), data.j_plus(), samples);
    if gauduchon.value >= GAUDUCHON_GATE {
        return Err(Error::Hypothesis {
            what: "Gauduchon condition ∂₊∂̄₊ω₊ = 0".into(),
            residual: gauduchon.value,
        });
    }
    let split = ab_splitting(data)?;
    let wc = data.omega_plus().to_complex();
    let dbar = del_and_delbar(&wc, data.j_plus()).delbar;
    let dw = wc.d();
    let tg_dbar = trigrade(&dbar, &fol.f, &split)?;
    let tg_dw = trigrade(&dw, &fol.f, &split)?;
    let h = tg_dbar
        .component(1, 1, 1)
        .imag_part()
        .add(&tg_dw.component(2, 0, 1).imag_part())
        .scale(2.0);
    let dh = h.d();
    let dh_res = samples.max_over(|p| dh.max_abs_at(p));
    let restriction_form = dw.add(&h.to_complex().times_i());
    let span = data.eigenframes().spanning();
    let mut fields = Vec::new();
    for (a, x) in span.iter().enumerate() {
        for (b, y) in span.iter().enumerate().skip(a + 1) {
            for z in &span[b + 1..] {
                fields.push(restriction_form.apply(&[x, y, z])?);
            }
        }
    }
    let restriction = max_field(samples, &fields);
    let diff16 = tg_dw.component(2, 0, 1).sub(&tg_dbar.component(2, 0, 1));
    let d210 = tg_dbar.component(2, 1, 0);
    Ok(TwistCertificate {
        delbar_agreement: samples.max_over(|p| diff16.max_abs_at(p)),
        delbar_210: samples.max_over(|p| d210.max_abs_at(p)),
        h,
        gauduchon,
        dh: dh_res,
        restriction,
    })
}

/// Builds `H` for foliation-built data, returning just the form.
pub fn build_h_lemma39(data: &BihermitianData, fol: &FoliationData) -> Result<DifferentialForm> {
    Ok(build_h(data, fol)?.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generalized::{integrability_residual_direct, EigenframeL};
    use crate::samples::DEFAULT_SEED;

    fn samples() -> SampleSet {
        SampleSet::standard(4, DEFAULT_SEED)
    }

    fn coord(i: usize) -> VectorField {
        VectorField::coordinate(4, i)
    }

    fn standard_j() -> FieldMatrix {
        FieldMatrix::constant(&[vec![0.0, -1.0], vec![1.0, 0.0]], 4)
    }

    #[test]
    fn matsushita_worked_inputs() {
        assert!(matsushita_admissible(0, 0, false));
        assert!(!matsushita_admissible(0, 2, true));
        assert!(!matsushita_admissible(1, 3, true));
        assert!(matsushita_admissible(-2, 2, false));
        assert!(matsushita_admissible(-4, 0, true));
        assert!(!matsushita_admissible(0, -4, true));
        assert!(matsushita_admissible(0, -4, false));
    }

    #[test]
    fn rotation_of_orthonormal_plane() {
        let one = ScalarField::one(4);
        let zero = ScalarField::zero(4);
        assert_eq!(
            plane_rotation(&one, &zero, &one).unwrap(),
            [[0.0, -1.0], [1.0, 0.0]]
        );
        let h = &one + &ScalarField::cos(4, &[1, 0, 0, 0]).unwrap().scale(0.5);
        assert_eq!(
            plane_rotation(&h, &zero, &h).unwrap(),
            [[0.0, -1.0], [1.0, 0.0]]
        );
        assert!(matches!(
            plane_rotation(&h, &zero, &one),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn flat_distribution_construction() {
        let s = samples();
        let frame = DistributionFrame::new(
            [coord(0), coord(1)],
            [coord(2), coord(3)],
            MetricField::flat(4),
            &s,
        )
        .unwrap();
        let data = build_from_distribution(&frame).unwrap();
        let p = [0.0; 4];
        let jp = data.j_plus().real_value_at(&p);
        let jm = data.j_minus().real_value_at(&p);
        // j₊: ∂₁ ↦ ∂₂, ∂₃ ↦ ∂₄; j₋: ∂₁ ↦ ∂₂, ∂₃ ↦ −∂₄
        assert_eq!((jp[(1, 0)], jp[(3, 2)]), (1.0, 1.0));
        assert_eq!((jm[(1, 0)], jm[(3, 2)]), (1.0, -1.0));
        assert_ne!(data.orientation_plus(), data.orientation_minus());
        assert!(data.commutator_residual().value < 1e-12);
        // ker(j₊ + j₋) = N, ker(j₊ − j₋) = E
        let sum = &jp + &jm;
        let diff = &jp - &jm;
        assert!(sum.column(2).amax() < 1e-15 && sum.column(3).amax() < 1e-15);
        assert!(diff.column(0).amax() < 1e-15 && diff.column(1).amax() < 1e-15);
        assert_eq!(data.structure().type_at_point(&p).unwrap(), 1);

        let split = ab_splitting(&data).unwrap();
        let i = Complex64::new(0.0, 1.0);
        // A along N, B along E
        let a = split.a.value_at(&p);
        let b = split.b.value_at(&p);
        assert!(a[0].norm() < 1e-15 && a[1].norm() < 1e-15 && (a[3] + a[2] * i).norm() < 1e-15);
        assert!(b[2].norm() < 1e-15 && b[3].norm() < 1e-15 && (b[1] + b[0] * i).norm() < 1e-15);
        assert!(split.eigen_residual(&data).value < 1e-12);
        assert!(split.reassembly_residual(&data).value < 1e-10);
        assert!(split.kernel_residual(&data).value < 1e-12);
    }

    #[test]
    fn rejects_non_orthogonal_distribution() {
        let s = samples();
        let n1 = coord(2).add(&coord(0));
        assert!(DistributionFrame::new(
            [coord(0), coord(1)],
            [n1, coord(3)],
            MetricField::flat(4),
            &s
        )
        .is_err());
    }

    #[test]
    fn linear_foliation_is_type_one_and_integrable() {
        let s = samples();
        let (a, b, c, d) = (1.0, 2f64.sqrt(), 1.0, 3f64.sqrt());
        let fol = FoliationData::new(
            [
                VectorField::constant(&[a, b, 0.0, 0.0]),
                VectorField::constant(&[0.0, 0.0, c, d]),
            ],
            [
                VectorField::constant(&[-b, a, 0.0, 0.0]),
                VectorField::constant(&[0.0, 0.0, -d, c]),
            ],
            standard_j(),
            None,
            &s,
        )
        .unwrap();
        let data = build_from_foliation(&fol).unwrap();
        assert!(data.structure().types(&s).unwrap().iter().all(|&t| t == 1));
        let zero_h = Form::zero(4, 3);
        assert!(data.residual_thm23(&zero_h).unwrap().max().value < 1e-12);
        assert!(data.remark1_check().value < 1e-12);
        let split = ab_splitting(&data).unwrap();
        assert!(split.transverse_roundtrip(&fol).unwrap().value < 1e-9);
        let h = build_h_lemma39(&data, &fol).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn broken_foliation_is_rejected() {
        let s = samples();
        let c = ScalarField::cos(4, &[0, 0, 0, 1]).unwrap();
        let sn = ScalarField::sin(4, &[0, 0, 0, 1]).unwrap();
        let z = ScalarField::zero(4);
        let f1 = VectorField::new(vec![c.clone(), sn.clone(), z.clone(), z.clone()]).unwrap();
        let n1 = VectorField::new(vec![-&sn, c.clone(), z.clone(), z.clone()]).unwrap();
        let f = [f1, coord(3)];
        let n = [n1, coord(2)];
        assert!(FoliationData::new(f.clone(), n.clone(), standard_j(), None, &s).is_err());
        let fol = FoliationData::new_unchecked(f, n, standard_j(), None, &s).unwrap();
        assert!(fol.involutivity_residual().value > 0.5);
        let data = build_from_foliation(&fol).unwrap();
        assert!(data.remark1_check().value > 1e-3);
        let zero_h = Form::zero(4, 3);
        let l = EigenframeL::from_bihermitian(&data).unwrap();
        assert!(
            integrability_residual_direct(&l, &zero_h, &s)
                .unwrap()
                .value
                > 1e-3
        );
        assert!(data.residual_thm23(&zero_h).unwrap().max().value > 1e-3);
    }

    #[test]
    fn trigrading_of_basis_monomial_and_reality() {
        let s = samples();
        let fol = FoliationData::new(
            [coord(0), coord(1)],
            [coord(2), coord(3)],
            standard_j(),
            None,
            &s,
        )
        .unwrap();
        let data = build_from_foliation(&fol).unwrap();
        let split = ab_splitting(&data).unwrap();
        let [pf, pb, _] = trigrading_projectors(&fol.f, &split.b).unwrap();
        // β = B-dual covector: the row of the inverse frame picking out B
        let k = ComplexFieldMatrix::from_columns(&[
            coord(0).to_complex(),
            coord(1).to_complex(),
            split.b.clone(),
            split.b.conj(),
        ]);
        let kinv = k.inverse_constant_det().unwrap();
        let beta =
            Form::from_components(4, 1, (0..4).map(|c| (vec![c], kinv.get(2, c).clone()))).unwrap();
        let f12 = Form::<crate::fields::ComplexScalarField>::basis(4, &[0, 1]).unwrap();
        let phi = f12.wedge(&beta);
        let tg = trigrade(&phi, &fol.f, &split).unwrap();
        assert_eq!(
            tg.components.keys().copied().collect::<Vec<_>>(),
            vec![(2, 1, 0)]
        );
        assert!(tg.reassemble().sub(&phi).sup_bound() < 1e-12);
        let _ = (pf, pb);

        let real = DifferentialForm::basis(4, &[0, 1, 3])
            .unwrap()
            .add(&Form::basis(4, &[1, 2, 3]).unwrap())
            .to_complex();
        let tg = trigrade(&real, &fol.f, &split).unwrap();
        assert!(
            tg.component(2, 0, 1)
                .sub(&tg.component(2, 1, 0).conj())
                .sup_bound()
                < 1e-12
        );
        assert!(tg.reassemble().sub(&real).sup_bound() < 1e-12);
    }
}
