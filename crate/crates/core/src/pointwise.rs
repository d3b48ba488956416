//! Pointwise numeric linear algebra used by the residual sweeps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fields::Coeff;
use crate::samples::{Residual, SampleSet};
use crate::tensor::{ComplexVectorField, Form, MetricField};

/// Relative singular-value threshold deciding the rank of a pointwise span.
pub const RANK_THRESHOLD: f64 = 1e-8;

fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Largest `g`-norm of the component of each target orthogonal to the span
/// of `span`, maximised over the samples. With `metric = None` the Euclidean
/// coordinate inner product is used.
pub fn span_residual(
    span: &[ComplexVectorField],
    targets: &[ComplexVectorField],
    metric: Option<&MetricField>,
    samples: &SampleSet,
) -> Residual {
    if targets.is_empty() {
        return Residual::zero();
    }
    samples.max_over(|p| {
        let lt = metric.map(|g| {
            let chol = g
                .matrix()
                .real_value_at(p)
                .cholesky()
                .expect("validated metric is positive definite");
            complexify(&chol.l().transpose())
        });
        let to_vec = |v: &ComplexVectorField| {
            let x = DVector::from_vec(v.value_at(p));
            match &lt {
                Some(l) => l * x,
                None => x,
            }
        };
        let cols: Vec<DVector<Complex64>> = span.iter().map(to_vec).collect();
        let basis = orthonormal_basis(&cols);
        targets
            .iter()
            .map(|t| {
                let mut r = to_vec(t);
                for u in &basis {
                    let c = u.dotc(&r);
                    r -= u * c;
                }
                r.norm()
            })
            .fold(0.0, f64::max)
    })
}

/// Orthonormal basis of the column span, rank decided relative to the
/// largest singular value.
pub fn orthonormal_basis(cols: &[DVector<Complex64>]) -> Vec<DVector<Complex64>> {
    if cols.is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_columns(cols);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_THRESHOLD * smax)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// `|det H| / Π H_kk` for the Hermitian Gram matrix of the vectors; 1 for an
/// orthogonal family, 0 for a dependent one.
pub fn normalized_gram_det(vectors: &[Vec<Complex64>]) -> f64 {
    let k = vectors.len();
    let gram = DMatrix::from_fn(k, k, |a, b| {
        vectors[a]
            .iter()
            .zip(&vectors[b])
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
    });
    let diag: f64 = (0..k).map(|i| gram[(i, i)].re).product();
    if diag <= 0.0 {
        return 0.0;
    }
    gram.determinant().norm() / diag
}

/// Antisymmetric matrix `W_ab = φ(∂_a, ∂_b)` of a 2-form at a point.
pub fn two_form_matrix<C: Coeff>(phi: &Form<C>, p: &[f64]) -> DMatrix<f64> {
    let n = phi.dim();
    let at = phi.value_at(p);
    DMatrix::from_fn(n, n, |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Less => at.comps[(1 << a) | (1 << b)].re,
        std::cmp::Ordering::Greater => -at.comps[(1 << a) | (1 << b)].re,
        std::cmp::Ordering::Equal => 0.0,
    })
}

/// Largest entry magnitude.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}
