//! Real and complex trigonometric polynomials on the n-torus.
//!
//! A [`ScalarField`] is a finite sum `Σ_k [c_k cos(k·θ) + s_k sin(k·θ)]` with
//! integer frequency vectors `k`. The set is closed under the ring operations
//! and under partial differentiation, so every derivative, bracket and
//! contraction built on top of it stays exact up to floating-point rounding.
//!
//! Canonical form: `k` and `-k` are folded together (the stored key has its
//! first nonzero entry positive), the zero frequency carries no sine part, and
//! coefficients below [`DROP_TOLERANCE`] are discarded.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported torus dimension.
pub const MAX_DIM: usize = 4;
/// Largest admissible `|k_i|`; products exceeding it are rejected.
pub const FREQUENCY_BOUND: i32 = 64;
/// Coefficients smaller than this are dropped during canonicalization.
pub const DROP_TOLERANCE: f64 = 1e-13;

/// Integer frequency vector; entries past the field dimension are zero.
pub type Frequency = [i32; MAX_DIM];

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::BadDimension(dim))
    } else {
        Ok(())
    }
}

/// Folds `k` into the half-space representative. Returns the key and whether
/// the sine coefficient must flip sign.
fn canonical_key(k: Frequency) -> (Frequency, bool) {
    match k.iter().find(|&&v| v != 0) {
        Some(&v) if v < 0 => (k.map(|x| -x), true),
        _ => (k, false),
    }
}

fn is_zero_frequency(k: &Frequency) -> bool {
    k.iter().all(|&v| v == 0)
}

/// A real trigonometric polynomial in canonical form.
#[derive(Clone, PartialEq)]
pub struct ScalarField {
    dim: usize,
    terms: BTreeMap<Frequency, (f64, f64)>,
}

impl ScalarField {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        ScalarField {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        let mut f = ScalarField::zero(dim);
        f.accumulate([0; MAX_DIM], value, 0.0);
        f.cleanup();
        f
    }

    pub fn one(dim: usize) -> Self {
        ScalarField::constant(dim, 1.0)
    }

    /// Single term `c cos(k·θ) + s sin(k·θ)`.
    pub fn term(dim: usize, k: &[i32], c: f64, s: f64) -> Result<Self> {
        ScalarField::from_terms(dim, [(k.to_vec(), c, s)])
    }

    /// `cos(k·θ)`.
    pub fn cos(dim: usize, k: &[i32]) -> Result<Self> {
        ScalarField::term(dim, k, 1.0, 0.0)
    }

    /// `sin(k·θ)`.
    pub fn sin(dim: usize, k: &[i32]) -> Result<Self> {
        ScalarField::term(dim, k, 0.0, 1.0)
    }

    /// Builds a field from `(k, c, s)` triples; repeated or opposite
    /// frequencies are merged.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, f64, f64)>,
    {
        check_dim(dim)?;
        let mut f = ScalarField::zero(dim);
        for (k, c, s) in terms {
            if k.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.len(),
                });
            }
            let mut key = [0; MAX_DIM];
            for (slot, &v) in key.iter_mut().zip(&k) {
                if v.abs() > FREQUENCY_BOUND {
                    return Err(Error::FrequencyOverflow {
                        found: v.abs() as i64,
                        bound: FREQUENCY_BOUND,
                    });
                }
                *slot = v;
            }
            f.accumulate(key, c, s);
        }
        f.cleanup();
        Ok(f)
    }

    /// Random field with `n_terms` terms, frequencies in `[-max_freq, max_freq]`
    /// and coefficients in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, n_terms: usize, max_freq: i32) -> Self {
        let mut f = ScalarField::zero(dim);
        for _ in 0..n_terms {
            let mut k = [0; MAX_DIM];
            for slot in k.iter_mut().take(dim) {
                *slot = rng.random_range(-max_freq..=max_freq);
            }
            let c = rng.random_range(-1.0..1.0);
            let s = rng.random_range(-1.0..1.0);
            f.accumulate(k, c, s);
        }
        f.cleanup();
        f
    }

    fn accumulate(&mut self, k: Frequency, c: f64, s: f64) {
        let (key, flip) = canonical_key(k);
        let s = if is_zero_frequency(&key) {
            0.0
        } else if flip {
            -s
        } else {
            s
        };
        let entry = self.terms.entry(key).or_insert((0.0, 0.0));
        entry.0 += c;
        entry.1 += s;
    }

    fn cleanup(&mut self) {
        self.terms.retain(|_, (c, s)| {
            if c.abs() < DROP_TOLERANCE {
                *c = 0.0;
            }
            if s.abs() < DROP_TOLERANCE {
                *s = 0.0;
            }
            *c != 0.0 || *s != 0.0
        });
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(k, c, s)` in canonical key order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], f64, f64)> + '_ {
        self.terms
            .iter()
            .map(move |(k, &(c, s))| (&k[..self.dim], c, s))
    }

    /// Re-canonicalizes the representation (idempotent).
    pub fn canonical(&self) -> ScalarField {
        let mut f = ScalarField::zero(self.dim);
        for (k, &(c, s)) in &self.terms {
            f.accumulate(*k, c, s);
        }
        f.cleanup();
        f
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(self.value(point))
    }

    /// Unchecked evaluation; `point` must have length `dim`.
    pub fn value(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.dim);
        self.terms
            .iter()
            .map(|(k, &(c, s))| {
                let phase: f64 = k.iter().zip(point).map(|(&ki, &x)| ki as f64 * x).sum();
                let mut v = 0.0;
                if c != 0.0 {
                    v += c * phase.cos();
                }
                if s != 0.0 {
                    v += s * phase.sin();
                }
                v
            })
            .sum()
    }

    pub fn partial(&self, axis: usize) -> Result<ScalarField> {
        if axis >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: axis,
                dim: self.dim,
            });
        }
        Ok(self.derivative(axis))
    }

    fn derivative(&self, axis: usize) -> ScalarField {
        let mut f = ScalarField::zero(self.dim);
        for (k, &(c, s)) in &self.terms {
            let ka = k[axis] as f64;
            if ka != 0.0 {
                // d/dθ [c cos + s sin] = s k cos − c k sin
                f.terms.insert(*k, (s * ka, -c * ka));
            }
        }
        f.cleanup();
        f
    }

    pub fn scale(&self, factor: f64) -> ScalarField {
        let mut f = self.clone();
        for v in f.terms.values_mut() {
            v.0 *= factor;
            v.1 *= factor;
        }
        f.cleanup();
        f
    }

    fn same_dim(&self, other: &ScalarField) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.same_dim(other)?;
        let mut f = self.clone();
        for (k, &(c, s)) in &other.terms {
            let e = f.terms.entry(*k).or_insert((0.0, 0.0));
            e.0 += c;
            e.1 += s;
        }
        f.cleanup();
        Ok(f)
    }

    /// Product via the product-to-sum identities.
    pub fn try_mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.same_dim(other)?;
        let mut f = ScalarField::zero(self.dim);
        for (k1, &(c1, s1)) in &self.terms {
            for (k2, &(c2, s2)) in &other.terms {
                let mut sum = [0; MAX_DIM];
                let mut diff = [0; MAX_DIM];
                for i in 0..MAX_DIM {
                    sum[i] = k1[i] + k2[i];
                    diff[i] = k1[i] - k2[i];
                    if sum[i].abs() > FREQUENCY_BOUND {
                        return Err(Error::FrequencyOverflow {
                            found: sum[i].abs() as i64,
                            bound: FREQUENCY_BOUND,
                        });
                    }
                    if diff[i].abs() > FREQUENCY_BOUND {
                        return Err(Error::FrequencyOverflow {
                            found: diff[i].abs() as i64,
                            bound: FREQUENCY_BOUND,
                        });
                    }
                }
                f.accumulate(sum, 0.5 * (c1 * c2 - s1 * s2), 0.5 * (c1 * s2 + s1 * c2));
                f.accumulate(diff, 0.5 * (c1 * c2 + s1 * s2), 0.5 * (s1 * c2 - c1 * s2));
            }
        }
        f.cleanup();
        Ok(f)
    }

    /// Constant value when the field has no oscillating terms.
    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&[0; MAX_DIM]).map(|&(c, _)| c),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// `Σ |c| + |s|`, an upper bound for `sup |f|`.
    pub fn sup_bound(&self) -> f64 {
        self.terms.values().map(|(c, s)| c.abs() + s.abs()).sum()
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|(c, s)| c.abs().max(s.abs()))
            .fold(0.0, f64::max)
    }

    /// Returns `λ` with `self = λ·other` when the two fields are proportional.
    pub fn ratio_to(&self, other: &ScalarField) -> Option<f64> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(0.0);
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (k0, &(c0, s0)) = other.terms.iter().next()?;
        let &(a0, b0) = self.terms.get(k0)?;
        let ratio = if c0.abs() >= s0.abs() {
            a0 / c0
        } else {
            b0 / s0
        };
        let scaled = other.scale(ratio);
        let diff = self - &scaled;
        (diff.sup_bound() <= 1e-12 * (1.0 + self.sup_bound())).then_some(ratio)
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({self})")
    }
}

fn fmt_phase(k: &[i32]) -> String {
    let mut out = String::new();
    for (i, &ki) in k.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(if ki < 0 { " - " } else { " + " });
        } else if ki < 0 {
            out.push('-');
        }
        let a = ki.abs();
        if a == 1 {
            out.push_str(&format!("t{}", i + 1));
        } else {
            out.push_str(&format!("{}*t{}", a, i + 1));
        }
    }
    out
}

/// Renders in the description-file syntax, e.g. `0.5 + 0.5*cos(2*t1)`.
/// Coefficients use the shortest round-tripping decimal form.
impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(f64, String)> = Vec::new();
        for (k, c, s) in self.terms() {
            if k.iter().all(|&v| v == 0) {
                parts.push((c, String::new()));
                continue;
            }
            let phase = fmt_phase(k);
            if c != 0.0 {
                parts.push((c, format!("cos({phase})")));
            }
            if s != 0.0 {
                parts.push((s, format!("sin({phase})")));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (coef, factor)) in parts.iter().enumerate() {
            let mag = coef.abs();
            if i == 0 {
                if *coef < 0.0 {
                    write!(f, "-")?;
                }
            } else if *coef < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if factor.is_empty() {
                write!(f, "{mag:?}")?;
            } else if mag == 1.0 {
                write!(f, "{factor}")?;
            } else {
                write!(f, "{mag:?}*{factor}")?;
            }
        }
        Ok(())
    }
}

/// Serialized as a list of `[k, c, s]` triples.
impl Serialize for ScalarField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (k, c, s) in self.terms() {
            seq.serialize_element(&(k, c, s))?;
        }
        seq.end()
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.try_add(rhs)
            .expect("dimension mismatch in ScalarField addition")
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.try_add(&-rhs)
            .expect("dimension mismatch in ScalarField subtraction")
    }
}

/// Panics on dimension mismatch or frequency overflow; see [`ScalarField::try_mul`].
impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        match self.try_mul(rhs) {
            Ok(f) => f,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        &self + &rhs
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: ScalarField) -> ScalarField {
        &self - &rhs
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        &self * &rhs
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -&self
    }
}

/// `re + i·im` with both parts real trigonometric polynomials.
#[derive(Clone, PartialEq)]
pub struct ComplexScalarField {
    pub re: ScalarField,
    pub im: ScalarField,
}

impl ComplexScalarField {
    pub fn new(re: ScalarField, im: ScalarField) -> Self {
        assert_eq!(re.dim(), im.dim(), "dimension mismatch in complex field");
        ComplexScalarField { re, im }
    }

    pub fn zero(dim: usize) -> Self {
        ComplexScalarField::new(ScalarField::zero(dim), ScalarField::zero(dim))
    }

    pub fn from_real(re: ScalarField) -> Self {
        let dim = re.dim();
        ComplexScalarField::new(re, ScalarField::zero(dim))
    }

    pub fn constant(dim: usize, z: Complex64) -> Self {
        ComplexScalarField::new(
            ScalarField::constant(dim, z.re),
            ScalarField::constant(dim, z.im),
        )
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexScalarField::new(self.re.clone(), -&self.im)
    }

    pub fn value(&self, point: &[f64]) -> Complex64 {
        Complex64::new(self.re.value(point), self.im.value(point))
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<Complex64> {
        Ok(Complex64::new(
            self.re.evaluate(point)?,
            self.im.evaluate(point)?,
        ))
    }

    pub fn partial(&self, axis: usize) -> Result<Self> {
        Ok(ComplexScalarField::new(
            self.re.partial(axis)?,
            self.im.partial(axis)?,
        ))
    }

    pub fn scale(&self, factor: f64) -> Self {
        ComplexScalarField::new(self.re.scale(factor), self.im.scale(factor))
    }

    pub fn scale_complex(&self, z: Complex64) -> Self {
        ComplexScalarField::new(
            &self.re.scale(z.re) - &self.im.scale(z.im),
            &self.re.scale(z.im) + &self.im.scale(z.re),
        )
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        ComplexScalarField::new(-&self.im, self.re.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let rr = self.re.try_mul(&other.re)?;
        let ii = self.im.try_mul(&other.im)?;
        let ri = self.re.try_mul(&other.im)?;
        let ir = self.im.try_mul(&other.re)?;
        Ok(ComplexScalarField::new(&rr - &ii, &ri + &ir))
    }

    pub fn sup_bound(&self) -> f64 {
        self.re.sup_bound() + self.im.sup_bound()
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        Some(Complex64::new(
            self.re.as_constant()?,
            self.im.as_constant()?,
        ))
    }

    pub fn canonical(&self) -> Self {
        ComplexScalarField::new(self.re.canonical(), self.im.canonical())
    }
}

impl fmt::Debug for ComplexScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexScalarField({} + i·({}))", self.re, self.im)
    }
}

impl Serialize for ComplexScalarField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ComplexScalarField", 2)?;
        st.serialize_field("re", &self.re)?;
        st.serialize_field("im", &self.im)?;
        st.end()
    }
}

impl Add for &ComplexScalarField {
    type Output = ComplexScalarField;
    fn add(self, rhs: &ComplexScalarField) -> ComplexScalarField {
        ComplexScalarField::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexScalarField {
    type Output = ComplexScalarField;
    fn sub(self, rhs: &ComplexScalarField) -> ComplexScalarField {
        ComplexScalarField::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexScalarField {
    type Output = ComplexScalarField;
    fn mul(self, rhs: &ComplexScalarField) -> ComplexScalarField {
        match self.try_mul(rhs) {
            Ok(f) => f,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Neg for &ComplexScalarField {
    type Output = ComplexScalarField;
    fn neg(self) -> ComplexScalarField {
        self.scale(-1.0)
    }
}

/// Coefficient ring shared by the real and complex tensor layers.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero(dim: usize) -> Self;
    fn from_real(f: ScalarField) -> Self;
    fn dim(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, factor: f64) -> Self;
    /// Panics if `axis >= dim`.
    fn derivative(&self, axis: usize) -> Self;
    fn value_at(&self, point: &[f64]) -> Complex64;
    fn sup_bound(&self) -> f64;
    fn constant_value(&self) -> Option<Complex64>;
    /// Division by a nonzero constant; `None` if the quotient leaves the ring.
    fn divided_by(&self, z: Complex64) -> Option<Self>;
    fn conjugated(&self) -> Self;
    fn into_complex(self) -> ComplexScalarField;
}

impl Coeff for ScalarField {
    fn zero(dim: usize) -> Self {
        ScalarField::zero(dim)
    }
    fn from_real(f: ScalarField) -> Self {
        f
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, factor: f64) -> Self {
        self.scale(factor)
    }
    fn derivative(&self, axis: usize) -> Self {
        assert!(axis < self.dim, "axis {axis} out of range");
        ScalarField::derivative(self, axis)
    }
    fn value_at(&self, point: &[f64]) -> Complex64 {
        Complex64::new(self.value(point), 0.0)
    }
    fn sup_bound(&self) -> f64 {
        ScalarField::sup_bound(self)
    }
    fn constant_value(&self) -> Option<Complex64> {
        self.as_constant().map(|c| Complex64::new(c, 0.0))
    }
    fn divided_by(&self, z: Complex64) -> Option<Self> {
        (z.im.abs() <= 1e-14 * z.re.abs() && z.re != 0.0).then(|| self.scale(1.0 / z.re))
    }
    fn conjugated(&self) -> Self {
        self.clone()
    }
    fn into_complex(self) -> ComplexScalarField {
        ComplexScalarField::from_real(self)
    }
}

impl Coeff for ComplexScalarField {
    fn zero(dim: usize) -> Self {
        ComplexScalarField::zero(dim)
    }
    fn from_real(f: ScalarField) -> Self {
        ComplexScalarField::from_real(f)
    }
    fn dim(&self) -> usize {
        self.re.dim()
    }
    fn is_zero(&self) -> bool {
        ComplexScalarField::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, factor: f64) -> Self {
        self.scale(factor)
    }
    fn derivative(&self, axis: usize) -> Self {
        ComplexScalarField::new(
            Coeff::derivative(&self.re, axis),
            Coeff::derivative(&self.im, axis),
        )
    }
    fn value_at(&self, point: &[f64]) -> Complex64 {
        self.value(point)
    }
    fn sup_bound(&self) -> f64 {
        ComplexScalarField::sup_bound(self)
    }
    fn constant_value(&self) -> Option<Complex64> {
        self.as_constant()
    }
    fn divided_by(&self, z: Complex64) -> Option<Self> {
        (z.norm() != 0.0).then(|| self.scale_complex(z.inv()))
    }
    fn conjugated(&self) -> Self {
        self.conj()
    }
    fn into_complex(self) -> ComplexScalarField {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
        (0..dim).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let one = ScalarField::one(4);
        assert_eq!(one.evaluate(&[0.3, 1.0, 2.0, 5.0]).unwrap(), 1.0);
    }

    #[test]
    fn cos_at_origin() {
        let f = ScalarField::cos(4, &[1, 0, 0, 0]).unwrap();
        assert_eq!(f.evaluate(&[0.0; 4]).unwrap(), 1.0);
    }

    #[test]
    fn cos_squared_product_to_sum() {
        let c = ScalarField::cos(4, &[1, 0, 0, 0]).unwrap();
        let p = &c * &c;
        let expected = ScalarField::from_terms(
            4,
            [(vec![0, 0, 0, 0], 0.5, 0.0), (vec![2, 0, 0, 0], 0.5, 0.0)],
        )
        .unwrap();
        assert_eq!(p, expected);
        let x = [PI / 3.0, 0.0, 0.0, 0.0];
        // pointwise product before canonicalization
        let direct = c.value(&x) * c.value(&x);
        assert!((direct - 0.25).abs() < 1e-15);
        assert!((p.value(&x) - 0.25).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let q = random_point(&mut rng, 4);
            assert!((p.value(&q) - c.value(&q).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let f = ScalarField::one(4);
        assert!(matches!(
            f.evaluate(&[0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        let g = ScalarField::one(3);
        assert!(f.try_add(&g).is_err());
        assert!(f.try_mul(&g).is_err());
    }

    #[test]
    fn partial_of_constant_and_sine() {
        let f = ScalarField::constant(4, 3.0);
        for a in 0..4 {
            assert!(f.partial(a).unwrap().is_zero());
        }
        let s = ScalarField::sin(4, &[0, 1, 0, 0]).unwrap();
        assert_eq!(
            s.partial(1).unwrap(),
            ScalarField::cos(4, &[0, 1, 0, 0]).unwrap()
        );
        assert!(s.partial(4).is_err());
    }

    #[test]
    fn opposite_frequencies_fold() {
        let f =
            ScalarField::from_terms(2, [(vec![-1, 2], 1.0, 1.0), (vec![1, -2], 1.0, 1.0)]).unwrap();
        // cos is even, sin is odd: the sine parts cancel
        assert_eq!(f, ScalarField::cos(2, &[1, -2]).unwrap().scale(2.0));
        let zero_sin = ScalarField::term(2, &[0, 0], 0.0, 5.0).unwrap();
        assert!(zero_sin.is_zero());
    }

    #[test]
    fn additive_inverse_and_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = ScalarField::random(&mut rng, 4, 5, 3);
        assert!((&f + &(-&f)).is_zero());
        assert_eq!(&f * &ScalarField::one(4), f);
    }

    #[test]
    fn frequency_overflow_is_an_error() {
        let f = ScalarField::cos(1, &[40]).unwrap();
        assert!(matches!(
            f.try_mul(&f),
            Err(Error::FrequencyOverflow { .. })
        ));
        assert!(ScalarField::cos(1, &[65]).is_err());
    }

    #[test]
    fn mixed_partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = ScalarField::random(&mut rng, 4, 6, 2);
        let fxy = f.partial(0).unwrap().partial(1).unwrap();
        let fyx = f.partial(1).unwrap().partial(0).unwrap();
        assert_eq!(fxy, fyx);
        let h = 1e-3;
        for _ in 0..10 {
            let p = random_point(&mut rng, 4);
            let at = |dx: f64, dy: f64| {
                let mut q = p.clone();
                q[0] += dx;
                q[1] += dy;
                f.value(&q)
            };
            let fd = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
            assert!(
                (fd - fxy.value(&p)).abs() < 1e-6,
                "fd {fd} vs {}",
                fxy.value(&p)
            );
        }
    }

    #[test]
    fn display_round_trips_shape() {
        let f = ScalarField::from_terms(
            4,
            [
                (vec![0, 0, 0, 0], 0.5, 0.0),
                (vec![2, 0, -1, 0], -0.25, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(f.to_string(), "0.5 - 0.25*cos(2*t1 - t3) + sin(2*t1 - t3)");
        assert_eq!(ScalarField::zero(2).to_string(), "0");
    }

    #[test]
    fn ratio_detects_proportional_fields() {
        let h = ScalarField::from_terms(
            4,
            [(vec![0, 0, 0, 0], 1.0, 0.0), (vec![1, 0, 1, 0], 0.1, 0.0)],
        )
        .unwrap();
        assert_eq!(h.scale(3.0).ratio_to(&h), Some(3.0));
        assert_eq!(ScalarField::one(4).ratio_to(&h), None);
    }

    #[test]
    fn complex_multiplication() {
        let i = ComplexScalarField::constant(2, Complex64::new(0.0, 1.0));
        let p = &i * &i;
        assert_eq!(
            p,
            ComplexScalarField::constant(2, Complex64::new(-1.0, 0.0))
        );
        let f = ComplexScalarField::new(
            ScalarField::cos(2, &[1, 0]).unwrap(),
            ScalarField::sin(2, &[0, 1]).unwrap(),
        );
        assert_eq!(f.times_i(), &i * &f);
        assert_eq!(f.conj().conj(), f);
    }

    #[test]
    fn serializes_as_triples() {
        let f = ScalarField::term(2, &[1, -1], 0.5, -2.0).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "[[[1,-1],0.5,-2.0]]");
    }
}
