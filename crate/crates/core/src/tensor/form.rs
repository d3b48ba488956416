use std::collections::BTreeMap;

use num_complex::Complex64;

use super::vector::VectorField;
use crate::error::{Error, Result};
use crate::fields::{Coeff, ComplexScalarField, ScalarField};

/// Bit mask of a strictly increasing multi-index (bit `i` set ⇔ `dθ_i` present).
pub type IndexMask = u8;

pub fn mask_of(indices: &[usize]) -> Option<IndexMask> {
    let mut mask = 0u8;
    let mut last: Option<usize> = None;
    for &i in indices {
        if i >= 8 || last.is_some_and(|l| l >= i) {
            return None;
        }
        mask |= 1 << i;
        last = Some(i);
    }
    Some(mask)
}

pub fn indices_of(mask: IndexMask) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `dθ_I ∧ dθ_J` relative to `dθ_{I∪J}`; zero when they overlap.
fn wedge_sign(a: IndexMask, b: IndexMask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for i in indices_of(a) {
        inversions += (b & ((1u16 << i) - 1) as u8).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A differential form of fixed degree with coefficients in the coordinate
/// coframe, `φ = Σ_I φ_I dθ_I` over strictly increasing multi-indices.
///
/// Evaluation follows the determinant convention, `dθ₁∧dθ₂(∂₁, ∂₂) = 1`,
/// under which `L_X = i_X d + d i_X` holds without extra factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C: Coeff = ScalarField> {
    dim: usize,
    degree: usize,
    comps: BTreeMap<IndexMask, C>,
}

pub type DifferentialForm = Form<ScalarField>;
pub type ComplexForm = Form<ComplexScalarField>;

impl<C: Coeff> Form<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// Degree-zero form.
    pub fn scalar(f: C) -> Self {
        let dim = f.dim();
        let mut out = Form::zero(dim, 0);
        out.insert(0, f);
        out
    }

    /// The basis monomial `dθ_{i1} ∧ … ∧ dθ_{ik}` (indices strictly increasing).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        Form::from_components(
            dim,
            indices.len(),
            [(indices.to_vec(), C::from_real(ScalarField::one(dim)))],
        )
    }

    pub fn from_components<I>(dim: usize, degree: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, C)>,
    {
        let mut out = Form::zero(dim, degree);
        for (idx, c) in comps {
            if idx.len() != degree {
                return Err(Error::Degree(format!(
                    "index {idx:?} does not have length {degree}"
                )));
            }
            if idx.iter().any(|&i| i >= dim) {
                return Err(Error::IndexOutOfRange {
                    index: *idx.iter().max().unwrap(),
                    dim,
                });
            }
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
            let mask = mask_of(&idx).ok_or_else(|| {
                Error::Degree(format!("index {idx:?} is not strictly increasing"))
            })?;
            out.accumulate(mask, &c);
        }
        Ok(out)
    }

    fn insert(&mut self, mask: IndexMask, c: C) {
        if c.is_zero() {
            self.comps.remove(&mask);
        } else {
            self.comps.insert(mask, c);
        }
    }

    fn accumulate(&mut self, mask: IndexMask, c: &C) {
        if c.is_zero() {
            return;
        }
        let next = match self.comps.get(&mask) {
            Some(prev) => prev.plus(c),
            None => c.clone(),
        };
        self.insert(mask, next);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Coefficient of `dθ_I` for strictly increasing `I`.
    pub fn component(&self, indices: &[usize]) -> C {
        mask_of(indices)
            .and_then(|m| self.comps.get(&m).cloned())
            .unwrap_or_else(|| C::zero(self.dim))
    }

    pub fn component_by_mask(&self, mask: IndexMask) -> Option<&C> {
        self.comps.get(&mask)
    }

    /// Nonzero components as `(indices, coefficient)`.
    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &C)> + '_ {
        self.comps.iter().map(|(m, c)| (indices_of(*m), c))
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "form dimension mismatch");
        assert_eq!(self.degree, other.degree, "form degree mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.comps {
            out.accumulate(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|c| c.scaled(factor))
    }

    pub fn mul_scalar(&self, f: &C) -> Self {
        self.map(|c| c.times(f))
    }

    fn map<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, f(c));
        }
        out
    }

    /// Graded-commutative exterior product. A result above top degree is the
    /// zero form of that degree.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "form dimension mismatch");
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        for (ma, ca) in &self.comps {
            for (mb, cb) in &other.comps {
                let sign = wedge_sign(*ma, *mb);
                if sign == 0 {
                    continue;
                }
                let prod = ca.times(cb);
                out.accumulate(ma | mb, &if sign > 0 { prod } else { prod.negated() });
            }
        }
        out
    }

    /// Exterior derivative; `d∘d = 0` holds exactly in canonical form.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Form::zero(self.dim, self.degree + 1);
        for (m, c) in &self.comps {
            for a in 0..self.dim {
                if m & (1 << a) != 0 {
                    continue;
                }
                let da = c.derivative(a);
                if da.is_zero() {
                    continue;
                }
                let sign = wedge_sign(1 << a, *m);
                out.accumulate(m | (1 << a), &if sign > 0 { da } else { da.negated() });
            }
        }
        out
    }

    /// `d`, short name.
    pub fn d(&self) -> Self {
        self.exterior_derivative()
    }

    /// Interior product `(i_X φ)(V₁…) = φ(X, V₁…)`; rejects 0-forms.
    pub fn interior(&self, x: &VectorField<C>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.comps {
            for (pos, a) in indices_of(*m).into_iter().enumerate() {
                let xa = x.component(a);
                if xa.is_zero() {
                    continue;
                }
                let term = xa.times(c);
                out.accumulate(
                    m & !(1 << a),
                    &if pos % 2 == 0 { term } else { term.negated() },
                );
            }
        }
        Ok(out)
    }

    /// Lie derivative by the Cartan formula `L_X = i_X d + d i_X`.
    pub fn lie_derivative(&self, x: &VectorField<C>) -> Self {
        let from_d = if self.degree < self.dim {
            self.d().interior(x).expect("degree ≥ 1")
        } else {
            Form::zero(self.dim, self.degree)
        };
        if self.degree == 0 {
            return from_d;
        }
        from_d.add(&self.interior(x).expect("degree ≥ 1").d())
    }

    /// Full contraction `φ(V₁, …, V_k)`.
    pub fn apply(&self, vectors: &[&VectorField<C>]) -> Result<C> {
        if vectors.len() != self.degree {
            return Err(Error::Degree(format!(
                "form of degree {} applied to {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        let mut acc = self.clone();
        for v in vectors {
            acc = acc.interior(v)?;
        }
        Ok(acc.comps.remove(&0).unwrap_or_else(|| C::zero(self.dim)))
    }

    /// Pointwise numeric evaluation.
    pub fn value_at(&self, point: &[f64]) -> FormAt {
        let mut comps = vec![Complex64::new(0.0, 0.0); 1 << self.dim];
        for (m, c) in &self.comps {
            comps[*m as usize] = c.value_at(point);
        }
        FormAt {
            dim: self.dim,
            degree: self.degree,
            comps,
        }
    }

    /// Largest sup-norm bound over all components.
    pub fn sup_bound(&self) -> f64 {
        self.comps
            .values()
            .map(|c| c.sup_bound())
            .fold(0.0, f64::max)
    }

    /// Largest component magnitude at a point.
    pub fn max_abs_at(&self, point: &[f64]) -> f64 {
        self.comps
            .values()
            .map(|c| c.value_at(point).norm())
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conjugated())
    }

    pub fn to_complex(&self) -> ComplexForm {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.clone().into_complex());
        }
        out
    }
}

impl DifferentialForm {
    /// The same real form with coefficients in `C`.
    pub fn lift<C: Coeff>(&self) -> Form<C> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, C::from_real(c.clone()));
        }
        out
    }
}

impl ComplexForm {
    pub fn real_part(&self) -> DifferentialForm {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.re.clone());
        }
        out
    }

    pub fn imag_part(&self) -> DifferentialForm {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.im.clone());
        }
        out
    }

    pub fn times_i(&self) -> Self {
        self.map(|c| c.times_i())
    }

    pub fn scale_complex(&self, z: Complex64) -> Self {
        self.map(|c| c.scale_complex(z))
    }
}

/// A form evaluated at a single point.
#[derive(Clone, Debug, PartialEq)]
pub struct FormAt {
    pub dim: usize,
    pub degree: usize,
    /// Indexed by [`IndexMask`].
    pub comps: Vec<Complex64>,
}

impl FormAt {
    /// `Σ_I φ_I det[V_j^{I_i}]`.
    pub fn eval(&self, vectors: &[&[Complex64]]) -> Complex64 {
        assert_eq!(vectors.len(), self.degree);
        let mut total = Complex64::new(0.0, 0.0);
        for (m, &c) in self.comps.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) || (m as u32).count_ones() as usize != self.degree {
                continue;
            }
            let idx = indices_of(m as u8);
            let k = idx.len();
            let mat: Vec<Vec<Complex64>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i]).collect())
                .collect();
            total += c * small_det(&mat, k);
        }
        total
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn small_det(m: &[Vec<Complex64>], k: usize) -> Complex64 {
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut total = Complex64::new(0.0, 0.0);
            for col in 0..k {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                total += m[0][col] * small_det(&minor, k - 1) * sign;
            }
            total
        }
    }
}
