use nalgebra::DMatrix;
use num_complex::Complex64;

use super::form::Form;
use super::vector::VectorField;
use crate::error::{Error, Result};
use crate::fields::{Coeff, ComplexScalarField, ScalarField};
use crate::samples::SampleSet;

/// A matrix of scalar fields. As an endomorphism, entry `(r, c)` is the
/// `r`-th coordinate component of the image of `∂_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix<C: Coeff = ScalarField> {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<C>,
}

pub type EndomorphismField = FieldMatrix<ScalarField>;
pub type ComplexFieldMatrix = FieldMatrix<ComplexScalarField>;

impl<C: Coeff> FieldMatrix<C> {
    pub fn new(rows: usize, cols: usize, entries: Vec<C>) -> Result<Self> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let dim = entries[0].dim();
        if let Some(bad) = entries.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(FieldMatrix {
            rows,
            cols,
            dim,
            entries,
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C>(
        rows: usize,
        cols: usize,
        dim: usize,
        mut f: F,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        FieldMatrix {
            rows,
            cols,
            dim,
            entries,
        }
    }

    pub fn zero(n: usize, dim: usize) -> Self {
        FieldMatrix::from_fn(n, n, dim, |_, _| C::zero(dim))
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        FieldMatrix::from_fn(n, n, dim, |r, c| {
            if r == c {
                C::from_real(ScalarField::one(dim))
            } else {
                C::zero(dim)
            }
        })
    }

    /// Constant matrix from row-major real entries.
    pub fn constant(rows: &[Vec<f64>], dim: usize) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        FieldMatrix::from_fn(n, m, dim, |r, c| {
            C::from_real(ScalarField::constant(dim, rows[r][c]))
        })
    }

    /// Matrix whose columns are the given vector fields.
    pub fn from_columns(cols: &[VectorField<C>]) -> Self {
        let dim = cols[0].dim();
        FieldMatrix::from_fn(dim, cols.len(), dim, |r, c| cols[c].component(r).clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of the underlying torus.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.entries[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> VectorField<C> {
        VectorField::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
            .expect("consistent dims")
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn map<F: Fn(&C) -> D, D: Coeff>(&self, f: F) -> FieldMatrix<D> {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix::from_fn(self.rows, self.cols, self.dim, |r, c| {
            self.get(r, c).plus(other.get(r, c))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix::from_fn(self.rows, self.cols, self.dim, |r, c| {
            self.get(r, c).minus(other.get(r, c))
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.negated())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|e| e.scaled(factor))
    }

    pub fn mul_scalar(&self, f: &C) -> Self {
        self.map(|e| e.times(f))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        FieldMatrix::from_fn(self.rows, other.cols, self.dim, |r, c| {
            let mut acc = C::zero(self.dim);
            for k in 0..self.cols {
                let (a, b) = (self.get(r, k), other.get(k, c));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(b));
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        FieldMatrix::from_fn(self.cols, self.rows, self.dim, |r, c| {
            self.get(c, r).clone()
        })
    }

    /// Image of a vector field.
    pub fn apply(&self, x: &VectorField<C>) -> VectorField<C> {
        assert_eq!(self.cols, x.dim());
        let comps = (0..self.rows)
            .map(|r| {
                let mut acc = C::zero(self.dim);
                for c in 0..self.cols {
                    let (a, b) = (self.get(r, c), x.component(c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.plus(&a.times(b));
                    }
                }
                acc
            })
            .collect();
        VectorField::new(comps).expect("consistent dims")
    }

    /// Dual action on 1-forms, `(A*ξ)(X) = ξ(AX)`, i.e. `Aᵀ` on components.
    pub fn pullback_covector(&self, xi: &Form<C>) -> Form<C> {
        assert_eq!(xi.degree(), 1);
        let comps = (0..self.cols).map(|c| {
            let mut acc = C::zero(self.dim);
            for r in 0..self.rows {
                let (a, b) = (self.get(r, c), xi.component(&[r]));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(&b));
                }
            }
            (vec![c], acc)
        });
        Form::from_components(self.dim, 1, comps).expect("consistent dims")
    }

    /// Antisymmetric matrix read as the 2-form with `φ(∂_a, ∂_b) = M_ab`.
    pub fn to_two_form(&self) -> Form<C> {
        let mut comps = Vec::new();
        for a in 0..self.rows {
            for b in a + 1..self.cols {
                comps.push((vec![a, b], self.get(a, b).clone()));
            }
        }
        Form::from_components(self.dim, 2, comps).expect("consistent dims")
    }

    /// Symbolic determinant (Laplace expansion; square matrices up to 4×4).
    pub fn det(&self) -> C {
        assert_eq!(self.rows, self.cols);
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, &idx)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> C {
        match rows.len() {
            0 => C::from_real(ScalarField::one(self.dim)),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let r0 = rows[0];
                let rest: Vec<usize> = rows[1..].to_vec();
                let mut acc = C::zero(self.dim);
                for (pos, &c) in cols.iter().enumerate() {
                    let e = self.get(r0, c);
                    if e.is_zero() {
                        continue;
                    }
                    let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = e.times(&self.minor_det(&rest, &sub));
                    acc = if pos % 2 == 0 {
                        acc.plus(&term)
                    } else {
                        acc.minus(&term)
                    };
                }
                acc
            }
        }
    }

    /// Classical adjugate, `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        FieldMatrix::from_fn(n, n, self.dim, |r, c| {
            // adj(A)_{rc} = (−1)^{r+c} M_{cr}
            let rows: Vec<usize> = (0..n).filter(|&i| i != c).collect();
            let cols: Vec<usize> = (0..n).filter(|&i| i != r).collect();
            let m = self.minor_det(&rows, &cols);
            if (r + c) % 2 == 0 {
                m
            } else {
                m.negated()
            }
        })
    }

    /// Symbolic inverse, available when the determinant is a nonzero constant.
    pub fn inverse_constant_det(&self) -> Result<Self> {
        let det = self.det();
        let value = det.constant_value().ok_or_else(|| {
            Error::Unsupported("symbolic inverse requires a constant determinant".into())
        })?;
        if value.norm() < 1e-12 {
            return Err(Error::Degenerate("matrix is singular".into()));
        }
        let adj = self.adjugate();
        Ok(adj.map(|e| e.divided_by(value).expect("nonzero constant")))
    }

    pub fn value_at(&self, point: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).value_at(point))
    }

    pub fn sup_bound(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.sup_bound())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.constant_value().is_some())
    }

    pub fn conj(&self) -> Self {
        self.map(|e| e.conjugated())
    }

    pub fn to_complex(&self) -> ComplexFieldMatrix {
        self.map(|e| e.clone().into_complex())
    }
}

impl EndomorphismField {
    pub fn real_value_at(&self, point: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).value(point))
    }
}

/// A Riemannian metric: symmetric, positive definite at every sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    g: EndomorphismField,
}

impl MetricField {
    pub fn new(g: EndomorphismField, samples: &SampleSet) -> Result<Self> {
        if g.rows() != g.cols() || g.rows() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: g.rows(),
            });
        }
        let asym = g.sub(&g.transpose()).sup_bound();
        if asym > 1e-12 {
            return Err(Error::Validation {
                what: "metric symmetry".into(),
                residual: asym,
                point: vec![],
            });
        }
        let metric = MetricField { g };
        for p in samples.points() {
            let lambda = metric.min_eigenvalue_at(p);
            if lambda.is_nan() || lambda <= 1e-12 {
                return Err(Error::Validation {
                    what: "metric positive definiteness".into(),
                    residual: lambda,
                    point: p.clone(),
                });
            }
        }
        Ok(metric)
    }

    pub fn flat(dim: usize) -> Self {
        MetricField {
            g: EndomorphismField::identity(dim, dim),
        }
    }

    /// Diagonal metric from scalar fields.
    pub fn diagonal(diag: &[ScalarField], samples: &SampleSet) -> Result<Self> {
        let n = diag.len();
        let g = EndomorphismField::from_fn(n, n, n, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                ScalarField::zero(n)
            }
        });
        MetricField::new(g, samples)
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn matrix(&self) -> &EndomorphismField {
        &self.g
    }

    fn min_eigenvalue_at(&self, point: &[f64]) -> f64 {
        let m = self.g.real_value_at(point);
        m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Musical map `X ↦ g(X, ·)`; by symmetry its components are `G X`.
    pub fn lower<C: Coeff>(&self, x: &VectorField<C>) -> Form<C> {
        let gx = self.g.map(|e| C::from_real(e.clone())).apply(x);
        Form::from_components(
            self.dim(),
            1,
            (0..self.dim()).map(|i| (vec![i], gx.component(i).clone())),
        )
        .expect("consistent dims")
    }

    pub fn inner<C: Coeff>(&self, x: &VectorField<C>, y: &VectorField<C>) -> C {
        let gx = self.g.map(|e| C::from_real(e.clone())).apply(x);
        let mut acc = C::zero(self.dim());
        for i in 0..self.dim() {
            acc = acc.plus(&gx.component(i).times(y.component(i)));
        }
        acc
    }

    pub fn inverse_at(&self, point: &[f64]) -> DMatrix<f64> {
        self.g
            .real_value_at(point)
            .try_inverse()
            .expect("validated metric is invertible")
    }
}
