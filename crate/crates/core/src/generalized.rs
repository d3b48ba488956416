//! The generalized tangent bundle `T ⊕ T*`: pairing, twisted Courant
//! bracket, b-transforms, structures built from bihermitian data, type, and
//! the eigenbundle closure test.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bihermitian::BihermitianData;
use crate::error::{Error, Result};
use crate::fields::{Coeff, ComplexScalarField, ScalarField};
use crate::pointwise::{max_abs, two_form_matrix};
use crate::samples::{Residual, SampleSet};
use crate::tensor::{DifferentialForm, EndomorphismField, Form, VectorField};

/// A section `X + ξ` of `T ⊕ T*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSection<C: Coeff = ScalarField> {
    pub vec: VectorField<C>,
    pub form: Form<C>,
}

pub type ComplexSection = GeneralizedSection<ComplexScalarField>;

impl<C: Coeff> GeneralizedSection<C> {
    pub fn new(vec: VectorField<C>, form: Form<C>) -> Result<Self> {
        if form.degree() != 1 {
            return Err(Error::Degree(format!(
                "section form must be a 1-form, got degree {}",
                form.degree()
            )));
        }
        if form.dim() != vec.dim() {
            return Err(Error::DimensionMismatch {
                expected: vec.dim(),
                found: form.dim(),
            });
        }
        Ok(GeneralizedSection { vec, form })
    }

    pub fn from_vector(vec: VectorField<C>) -> Self {
        let dim = vec.dim();
        GeneralizedSection {
            vec,
            form: Form::zero(dim, 1),
        }
    }

    pub fn from_form(form: Form<C>) -> Result<Self> {
        let dim = form.dim();
        GeneralizedSection::new(VectorField::zero(dim), form)
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.form.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GeneralizedSection {
            vec: self.vec.add(&other.vec),
            form: self.form.add(&other.form),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GeneralizedSection {
            vec: self.vec.sub(&other.vec),
            form: self.form.sub(&other.form),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        GeneralizedSection {
            vec: self.vec.scale(factor),
            form: self.form.scale(factor),
        }
    }

    pub fn mul_scalar(&self, f: &C) -> Self {
        GeneralizedSection {
            vec: self.vec.mul_scalar(f),
            form: self.form.mul_scalar(f),
        }
    }

    pub fn conj(&self) -> Self {
        GeneralizedSection {
            vec: self.vec.conj(),
            form: self.form.conj(),
        }
    }

    pub fn to_complex(&self) -> ComplexSection {
        GeneralizedSection {
            vec: self.vec.to_complex(),
            form: self.form.to_complex(),
        }
    }

    /// `(X¹, …, Xⁿ, ξ₁, …, ξₙ)` at a point.
    pub fn value_at(&self, p: &[f64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = self.vec.value_at(p);
        let at = self.form.value_at(p);
        out.extend((0..n).map(|i| at.comps[1 << i]));
        out
    }

    pub fn sup_bound(&self) -> f64 {
        self.vec.sup_bound().max(self.form.sup_bound())
    }
}

/// `ξ(Y) = Σ ξ_i Y^i`.
pub fn covector_on<C: Coeff>(xi: &Form<C>, y: &VectorField<C>) -> C {
    (0..y.dim()).fold(C::zero(y.dim()), |acc, i| {
        let (a, b) = (xi.component(&[i]), y.component(i));
        if a.is_zero() || b.is_zero() {
            acc
        } else {
            acc.plus(&a.times(b))
        }
    })
}

/// `⟨X + ξ, Y + η⟩ = ½(η(X) + ξ(Y))`.
pub fn pairing<C: Coeff>(a: &GeneralizedSection<C>, b: &GeneralizedSection<C>) -> C {
    covector_on(&b.form, &a.vec)
        .plus(&covector_on(&a.form, &b.vec))
        .scaled(0.5)
}

/// `[X+ξ, Y+η]_H = [X, Y] + L_X η − i_Y dξ + i_Y i_X H`.
pub fn courant_bracket<C: Coeff>(
    a: &GeneralizedSection<C>,
    b: &GeneralizedSection<C>,
    h: &DifferentialForm,
) -> Result<GeneralizedSection<C>> {
    if h.degree() != 3 {
        return Err(Error::Degree(format!(
            "twisting form must have degree 3, got {}",
            h.degree()
        )));
    }
    let mut form = b.form.lie_derivative(&a.vec);
    if !a.form.is_zero() {
        form = form.sub(&a.form.d().interior(&b.vec)?);
    }
    if !h.is_zero() {
        form = form.add(&h.lift::<C>().interior(&a.vec)?.interior(&b.vec)?);
    }
    GeneralizedSection::new(a.vec.bracket(&b.vec), form)
}

/// `e^b(X + ξ) = X + ξ + i_X b`.
pub fn b_transform<C: Coeff>(
    a: &GeneralizedSection<C>,
    b: &DifferentialForm,
) -> Result<GeneralizedSection<C>> {
    if b.degree() != 2 {
        return Err(Error::Degree(format!(
            "b must be a 2-form, got degree {}",
            b.degree()
        )));
    }
    Ok(GeneralizedSection {
        vec: a.vec.clone(),
        form: a.form.add(&b.lift::<C>().interior(&a.vec)?),
    })
}

#[derive(Clone, Debug)]
enum Blocks {
    Bihermitian(Box<BihermitianData>),
    /// `[[A, B], [C, D]]` on `(X, ξ)` column vectors.
    Raw {
        a: EndomorphismField,
        b: EndomorphismField,
        c: EndomorphismField,
        d: EndomorphismField,
    },
}

/// An almost generalized complex structure on `T ⊕ T*`, evaluated pointwise.
///
/// When built from bihermitian data the structure keeps that provenance and
/// supports eigenbundle constructions; raw blocks support only pointwise
/// checks (`J²`, pairing, type).
#[derive(Clone, Debug)]
pub struct GeneralizedStructure {
    dim: usize,
    blocks: Blocks,
}

impl GeneralizedStructure {
    pub fn from_bihermitian(data: &BihermitianData) -> Self {
        GeneralizedStructure {
            dim: data.dim(),
            blocks: Blocks::Bihermitian(Box::new(data.clone())),
        }
    }

    pub fn from_blocks(
        a: EndomorphismField,
        b: EndomorphismField,
        c: EndomorphismField,
        d: EndomorphismField,
    ) -> Result<Self> {
        let dim = a.dim();
        for m in [&a, &b, &c, &d] {
            if m.rows() != dim || m.cols() != dim || m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.rows(),
                });
            }
        }
        Ok(GeneralizedStructure {
            dim,
            blocks: Blocks::Raw { a, b, c, d },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Option<&BihermitianData> {
        match &self.blocks {
            Blocks::Bihermitian(d) => Some(d),
            Blocks::Raw { .. } => None,
        }
    }

    /// The `2n × 2n` matrix of `J` at a point.
    pub fn matrix_at(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        match &self.blocks {
            Blocks::Raw { a, b, c, d } => {
                let mut m = DMatrix::zeros(2 * n, 2 * n);
                m.view_mut((0, 0), (n, n)).copy_from(&a.real_value_at(p));
                m.view_mut((0, n), (n, n)).copy_from(&b.real_value_at(p));
                m.view_mut((n, 0), (n, n)).copy_from(&c.real_value_at(p));
                m.view_mut((n, n), (n, n)).copy_from(&d.real_value_at(p));
                m
            }
            Blocks::Bihermitian(data) => {
                let g = data.metric().matrix().real_value_at(p);
                let gi = data.metric().inverse_at(p);
                let jp = data.j_plus().real_value_at(p);
                let jm = data.j_minus().real_value_at(p);
                // X ↦ i_X ω has matrix G j; its inverse is −j G⁻¹
                let a = (&jp + &jm) * 0.5;
                let b = (&jp - &jm) * &gi * 0.5;
                let c = &g * (&jp - &jm) * 0.5;
                let d = (jp.transpose() + jm.transpose()) * -0.5;
                let mut prime = DMatrix::zeros(2 * n, 2 * n);
                prime.view_mut((0, 0), (n, n)).copy_from(&a);
                prime.view_mut((0, n), (n, n)).copy_from(&b);
                prime.view_mut((n, 0), (n, n)).copy_from(&c);
                prime.view_mut((n, n), (n, n)).copy_from(&d);
                let shear = b_shear(data.b(), p, 1.0);
                let unshear = b_shear(data.b(), p, -1.0);
                shear * prime * unshear
            }
        }
    }

    /// Conjugation by the shear `e^β`.
    pub fn b_transform(&self, beta: &DifferentialForm) -> Result<Self> {
        if beta.degree() != 2 {
            return Err(Error::Degree(format!(
                "b must be a 2-form, got degree {}",
                beta.degree()
            )));
        }
        match &self.blocks {
            Blocks::Bihermitian(data) => Ok(GeneralizedStructure::from_bihermitian(
                &data.with_b(data.b().add(beta))?,
            )),
            Blocks::Raw { a, b, c, d } => {
                // e^β = [[1, 0], [β, 1]] with β the matrix of X ↦ i_X β
                let bm = b_map_matrix(beta);
                let a2 = a.sub(&b.mul(&bm));
                let c2 = bm.mul(&a2).add(c).sub(&d.mul(&bm));
                let d2 = bm.mul(b).add(d);
                GeneralizedStructure::from_blocks(a2, b.clone(), c2, d2)
            }
        }
    }

    /// `max |J² + 1|` over the samples.
    pub fn square_residual(&self, samples: &SampleSet) -> Residual {
        let id = DMatrix::<f64>::identity(2 * self.dim, 2 * self.dim);
        samples.max_over(|p| {
            let j = self.matrix_at(p);
            max_abs(&(&j * &j + &id))
        })
    }

    /// `max |Jᵀ Q J − Q|` where `Q` is the matrix of the natural pairing.
    pub fn pairing_residual(&self, samples: &SampleSet) -> Residual {
        let q = pairing_matrix(self.dim);
        samples.max_over(|p| {
            let j = self.matrix_at(p);
            max_abs(&(j.transpose() * &q * &j - &q))
        })
    }

    /// `n − rank(P J|_{T*})/2` at a point, `2n` the real dimension.
    pub fn type_at_point(&self, p: &[f64]) -> Result<usize> {
        let n = self.dim;
        let j = self.matrix_at(p);
        let scale = j.norm();
        let top_right = j.view((0, n), (n, n)).into_owned();
        let sv = top_right.singular_values();
        let mut rank = 0;
        for &s in sv.iter() {
            let rel = s / scale;
            if (1e-10..=1e-6).contains(&rel) {
                return Err(Error::Ambiguous(format!(
                    "relative singular value {rel:.3e} of the T* → T block near the rank threshold at {p:?}"
                )));
            }
            if rel > 1e-8 {
                rank += 1;
            }
        }
        if rank % 2 == 1 {
            return Err(Error::Ambiguous(format!(
                "odd rank {rank} of the T* → T block at {p:?}"
            )));
        }
        Ok(n / 2 - rank / 2)
    }

    /// Type at every sample point.
    pub fn types(&self, samples: &SampleSet) -> Result<Vec<usize>> {
        samples
            .points()
            .iter()
            .map(|p| self.type_at_point(p))
            .collect()
    }
}

fn pairing_matrix(n: usize) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        q[(i, n + i)] = 0.5;
        q[(n + i, i)] = 0.5;
    }
    q
}

/// Matrix of `X ↦ i_X β` on components: `(i_X β)_c = Σ_a X^a β_ac`.
fn b_map_matrix(beta: &DifferentialForm) -> EndomorphismField {
    let n = beta.dim();
    EndomorphismField::from_fn(n, n, n, |c, a| match a.cmp(&c) {
        std::cmp::Ordering::Less => beta.component(&[a, c]),
        std::cmp::Ordering::Greater => -&beta.component(&[c, a]),
        std::cmp::Ordering::Equal => ScalarField::zero(n),
    })
}

fn b_shear(b: &DifferentialForm, p: &[f64], sign: f64) -> DMatrix<f64> {
    let n = b.dim();
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let w = two_form_matrix(b, p);
    m.view_mut((n, 0), (n, n))
        .copy_from(&(w.transpose() * sign));
    m
}

/// A frame of the `+i`-eigenbundle `L` of `J`, built from the eigenframes of
/// `j±` as `e^b(Z₊ + g Z₊)` and `e^b(Z₋ − g Z₋)`.
#[derive(Clone, Debug)]
pub struct EigenframeL {
    pub elements: Vec<ComplexSection>,
}

impl EigenframeL {
    pub fn from_bihermitian(data: &BihermitianData) -> Result<Self> {
        let frames = data.eigenframes();
        let mut elements = Vec::new();
        for z in &frames.plus {
            let s = GeneralizedSection::new(z.clone(), data.metric().lower(z))?;
            elements.push(b_transform(&s, data.b())?);
        }
        for z in &frames.minus {
            let s = GeneralizedSection::new(z.clone(), data.metric().lower(z).neg())?;
            elements.push(b_transform(&s, data.b())?);
        }
        Ok(EigenframeL { elements })
    }

    pub fn from_structure(j: &GeneralizedStructure) -> Result<Self> {
        let data = j.provenance().ok_or_else(|| {
            Error::Unsupported(
                "eigenframe extraction needs bihermitian provenance, not raw blocks".into(),
            )
        })?;
        EigenframeL::from_bihermitian(data)
    }

    /// `max |Jℓ − iℓ|` over frame elements and samples.
    pub fn eigen_residual(&self, j: &GeneralizedStructure, samples: &SampleSet) -> Residual {
        let i = Complex64::new(0.0, 1.0);
        samples.max_over(|p| {
            let m = j.matrix_at(p).map(|x| Complex64::new(x, 0.0));
            self.elements
                .iter()
                .map(|l| {
                    let v = nalgebra::DVector::from_vec(l.value_at(p));
                    (&m * &v - &v * i)
                        .iter()
                        .map(|z| z.norm())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
    }

    /// Largest pairwise pairing between frame elements.
    pub fn isotropy_residual(&self, samples: &SampleSet) -> Residual {
        let mut fields = Vec::new();
        for (a, la) in self.elements.iter().enumerate() {
            for lb in &self.elements[a..] {
                fields.push(pairing(la, lb));
            }
        }
        samples.max_over(|p| fields.iter().map(|f| f.value(p).norm()).fold(0.0, f64::max))
    }

    /// Normalised Gram determinant of the frame; near zero means degenerate.
    pub fn min_independence(&self, samples: &SampleSet) -> f64 {
        samples
            .points()
            .iter()
            .map(|p| {
                let vs: Vec<Vec<Complex64>> = self.elements.iter().map(|l| l.value_at(p)).collect();
                crate::pointwise::normalized_gram_det(&vs)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `max |⟨[ℓ_i, ℓ_j]_H, ℓ_k⟩|` over all ordered frame triples and samples.
/// Since `L` is maximal isotropic this vanishes exactly when `L` is closed
/// under the twisted Courant bracket.
pub fn integrability_residual_direct(
    l: &EigenframeL,
    h: &DifferentialForm,
    samples: &SampleSet,
) -> Result<Residual> {
    let mut fields = Vec::new();
    for a in &l.elements {
        for b in &l.elements {
            let br = courant_bracket(a, b, h)?;
            for c in &l.elements {
                let f = pairing(&br, c);
                if !f.is_zero() {
                    fields.push(f);
                }
            }
        }
    }
    Ok(samples.max_over(|p| fields.iter().map(|f| f.value(p).norm()).fold(0.0, f64::max)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coord(i: usize) -> VectorField {
        VectorField::coordinate(4, i)
    }

    fn dtheta(idx: &[usize]) -> DifferentialForm {
        Form::basis(4, idx).unwrap()
    }

    fn section(v: VectorField, f: DifferentialForm) -> GeneralizedSection {
        GeneralizedSection::new(v, f).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let a = section(coord(0), dtheta(&[0]));
        assert_eq!(pairing(&a, &a).as_constant(), Some(1.0));
        let v = GeneralizedSection::from_vector(coord(0));
        let f = GeneralizedSection::from_form(dtheta(&[1])).unwrap();
        assert!(pairing(&v, &f).is_zero());
        let x = section(coord(0), dtheta(&[1]));
        let y = section(coord(1), dtheta(&[0]));
        assert_eq!(pairing(&x, &y).as_constant(), Some(1.0));
    }

    #[test]
    fn courant_examples() {
        let zero3 = Form::zero(4, 3);
        let a = GeneralizedSection::from_vector(coord(0));
        let b = GeneralizedSection::from_vector(coord(1));
        assert!(courant_bracket(&a, &b, &zero3).unwrap().is_zero());

        let h = dtheta(&[0, 1, 2]);
        let x = section(coord(0), dtheta(&[1]));
        let br = courant_bracket(&x, &b, &h).unwrap();
        assert!(br.vec.is_zero());
        assert_eq!(br.form, dtheta(&[2]));
    }

    fn random_section(rng: &mut ChaCha8Rng) -> GeneralizedSection {
        let v =
            VectorField::new((0..4).map(|_| ScalarField::random(rng, 4, 2, 1)).collect()).unwrap();
        let f = Form::from_components(
            4,
            1,
            (0..4).map(|i| (vec![i], ScalarField::random(rng, 4, 2, 1))),
        )
        .unwrap();
        section(v, f)
    }

    fn random_form(rng: &mut ChaCha8Rng, degree: usize) -> DifferentialForm {
        let mut comps = Vec::new();
        for m in 0u8..16 {
            if m.count_ones() as usize == degree {
                comps.push((
                    crate::tensor::form::indices_of(m),
                    ScalarField::random(rng, 4, 2, 1),
                ));
            }
        }
        Form::from_components(4, degree, comps).unwrap()
    }

    #[test]
    fn reduces_to_lie_bracket_without_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = GeneralizedSection::from_vector(random_section(&mut rng).vec);
        let b = GeneralizedSection::from_vector(random_section(&mut rng).vec);
        let br = courant_bracket(&a, &b, &Form::zero(4, 3)).unwrap();
        assert!(br.form.is_zero());
        assert_eq!(br.vec, a.vec.bracket(&b.vec));
    }

    #[test]
    fn b_naturality_of_the_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (x, y) = (random_section(&mut rng), random_section(&mut rng));
        let b = random_form(&mut rng, 2);
        let h = random_form(&mut rng, 2).d();
        let lhs = courant_bracket(
            &b_transform(&x, &b).unwrap(),
            &b_transform(&y, &b).unwrap(),
            &h,
        )
        .unwrap();
        let rhs = b_transform(&courant_bracket(&x, &y, &h.add(&b.d())).unwrap(), &b).unwrap();
        assert!(lhs.sub(&rhs).sup_bound() < 1e-9);
    }

    #[test]
    fn b_transform_preserves_pairing_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (x, y) = (random_section(&mut rng), random_section(&mut rng));
        let b = random_form(&mut rng, 2);
        let before = pairing(&x, &y);
        let after = pairing(&b_transform(&x, &b).unwrap(), &b_transform(&y, &b).unwrap());
        assert!((&before - &after).sup_bound() < 1e-12);
        let back = b_transform(&b_transform(&x, &b).unwrap(), &b.neg()).unwrap();
        assert!(back.sub(&x).sup_bound() < 1e-12);
        assert_eq!(b_transform(&x, &Form::zero(4, 2)).unwrap(), x);
    }

    #[test]
    fn raw_blocks_symplectic_type() {
        let samples = SampleSet::standard(4, crate::samples::DEFAULT_SEED);
        let z = EndomorphismField::zero(4, 4);
        // ω = dθ₁₂ + dθ₃₄, ω-map = jᵀ-like matrix W with inverse −W
        let w = EndomorphismField::constant(
            &[
                vec![0.0, -1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, -1.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            4,
        );
        let j =
            GeneralizedStructure::from_blocks(z.clone(), w.clone(), w.clone(), z.clone()).unwrap();
        assert!(j.square_residual(&samples).value < 1e-14);
        assert!(j.pairing_residual(&samples).value < 1e-14);
        assert_eq!(j.type_at_point(&[0.1, 0.2, 0.3, 0.4]).unwrap(), 0);
        assert!(matches!(
            EigenframeL::from_structure(&j),
            Err(Error::Unsupported(_))
        ));

        let b = dtheta(&[0, 2]).scale(0.3);
        let jb = j.b_transform(&b).unwrap().b_transform(&b.neg()).unwrap();
        let p = [1.0, 2.0, 3.0, 4.0];
        assert!(max_abs(&(jb.matrix_at(&p) - j.matrix_at(&p))) < 1e-15);
        assert!(j.b_transform(&b).unwrap().square_residual(&samples).value < 1e-14);
    }
}
