use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{Coeff, ComplexScalarField, ScalarField};

/// A vector field in the coordinate frame `∂/∂θ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<C: Coeff = ScalarField> {
    comps: Vec<C>,
}

pub type ComplexVectorField = VectorField<ComplexScalarField>;

impl<C: Coeff> VectorField<C> {
    pub fn new(comps: Vec<C>) -> Result<Self> {
        let dim = comps.len();
        if dim == 0 || dim > crate::fields::MAX_DIM {
            return Err(Error::BadDimension(dim));
        }
        for c in &comps {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
        }
        Ok(VectorField { comps })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField {
            comps: (0..dim).map(|_| C::zero(dim)).collect(),
        }
    }

    /// The coordinate field `∂/∂θ_axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        let mut v = VectorField::zero(dim);
        v.comps[axis] = C::from_real(ScalarField::one(dim));
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &C {
        &self.comps[i]
    }

    pub fn components(&self) -> &[C] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.scaled(factor)).collect(),
        }
    }

    /// Pointwise product with a scalar field.
    pub fn mul_scalar(&self, f: &C) -> Self {
        VectorField {
            comps: self.comps.iter().map(|a| a.times(f)).collect(),
        }
    }

    /// Directional derivative `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &C) -> C {
        self.comps
            .iter()
            .enumerate()
            .fold(C::zero(self.dim()), |acc, (i, xi)| {
                let df = f.derivative(i);
                if df.is_zero() || xi.is_zero() {
                    acc
                } else {
                    acc.plus(&xi.times(&df))
                }
            })
    }

    /// Lie bracket `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        VectorField {
            comps: (0..self.dim())
                .map(|i| {
                    self.apply(&other.comps[i])
                        .minus(&other.apply(&self.comps[i]))
                })
                .collect(),
        }
    }

    pub fn value_at(&self, point: &[f64]) -> Vec<Complex64> {
        self.comps.iter().map(|c| c.value_at(point)).collect()
    }

    pub fn conj(&self) -> Self {
        VectorField {
            comps: self.comps.iter().map(|c| c.conjugated()).collect(),
        }
    }

    pub fn to_complex(&self) -> ComplexVectorField {
        VectorField {
            comps: self
                .comps
                .iter()
                .cloned()
                .map(|c| c.into_complex())
                .collect(),
        }
    }

    /// Upper bound on the sup norm of the largest component.
    pub fn sup_bound(&self) -> f64 {
        self.comps.iter().map(|c| c.sup_bound()).fold(0.0, f64::max)
    }
}

impl VectorField<ScalarField> {
    /// Constant real vector field.
    pub fn constant(values: &[f64]) -> Self {
        let dim = values.len();
        VectorField {
            comps: values
                .iter()
                .map(|&v| ScalarField::constant(dim, v))
                .collect(),
        }
    }
}

impl ComplexVectorField {
    pub fn real_part(&self) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(|c| c.re.clone()).collect(),
        }
    }

    pub fn imag_part(&self) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(|c| c.im.clone()).collect(),
        }
    }

    /// `a + i b` for real fields `a`, `b`.
    pub fn from_parts(re: &VectorField, im: &VectorField) -> Self {
        VectorField {
            comps: re
                .comps
                .iter()
                .zip(&im.comps)
                .map(|(a, b)| ComplexScalarField::new(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn scale_complex(&self, z: Complex64) -> Self {
        VectorField {
            comps: self.comps.iter().map(|c| c.scale_complex(z)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_vector(rng: &mut ChaCha8Rng) -> VectorField {
        VectorField::new((0..4).map(|_| ScalarField::random(rng, 4, 3, 2)).collect()).unwrap()
    }

    #[test]
    fn coordinate_fields_commute() {
        let d1 = VectorField::<ScalarField>::coordinate(4, 0);
        let d2 = VectorField::<ScalarField>::coordinate(4, 1);
        assert!(d1.bracket(&d2).is_zero());
    }

    #[test]
    fn bracket_with_scaled_coordinate() {
        // [f∂₁, ∂₁] = −(∂₁f)∂₁
        let f = ScalarField::sin(4, &[1, 0, 1, 0]).unwrap();
        let d1 = VectorField::<ScalarField>::coordinate(4, 0);
        let x = d1.mul_scalar(&f);
        let expected = d1.mul_scalar(&-&f.partial(0).unwrap());
        assert_eq!(x.bracket(&d1), expected);

        // flow-commutator oracle: [X,Y]f ≈ X(Y f) − Y(X f) by finite differences
        let g = ScalarField::cos(4, &[2, 1, 0, 0]).unwrap();
        let p = [0.4, 1.1, -0.3, 2.0];
        let h = 1e-4;
        let xf = |q: &[f64]| {
            f.value(q) * {
                let mut a = q.to_vec();
                let mut b = q.to_vec();
                a[0] += h;
                b[0] -= h;
                (g.value(&a) - g.value(&b)) / (2.0 * h)
            }
        };
        let yxf = {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[0] += h;
            b[0] -= h;
            (xf(&a) - xf(&b)) / (2.0 * h)
        };
        let x_of_yg = f.value(&p) * g.partial(0).unwrap().partial(0).unwrap().value(&p);
        let fd = x_of_yg - yxf;
        let exact = x.bracket(&d1).apply(&g).value(&p);
        assert!((fd - exact).abs() < 1e-6, "{fd} vs {exact}");
    }

    #[test]
    fn jacobi_identity_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (x, y, z) = (
            random_vector(&mut rng),
            random_vector(&mut rng),
            random_vector(&mut rng),
        );
        let j = x
            .bracket(&y.bracket(&z))
            .add(&y.bracket(&z.bracket(&x)))
            .add(&z.bracket(&x.bracket(&y)));
        assert!(j.sup_bound() < 1e-9, "{}", j.sup_bound());
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        let r = VectorField::new(vec![ScalarField::one(4), ScalarField::one(3)]);
        assert!(r.is_err());
    }
}
