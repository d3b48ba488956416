//! Type decompositions of complex forms with respect to a splitting of the
//! complexified tangent bundle into complementary projectors.

use num_complex::Complex64;

use super::form::{ComplexForm, Form};
use super::matrix::{ComplexFieldMatrix, EndomorphismField};
use super::vector::ComplexVectorField;
use crate::fields::{Coeff, ComplexScalarField};

/// `(P, P̄)` with `P = ½(1 − i j)` projecting onto the `+i`-eigenbundle.
pub fn type_projectors(j: &EndomorphismField) -> (ComplexFieldMatrix, ComplexFieldMatrix) {
    let n = j.rows();
    let id = ComplexFieldMatrix::identity(n, j.dim());
    let ij = j.to_complex().map(|e| e.times_i());
    (id.sub(&ij).scale(0.5), id.add(&ij).scale(0.5))
}

/// Component of `φ` with `counts[m]` arguments routed through `projectors[m]`.
///
/// On a basis element `∂_I` this is the sum over all assignments of the
/// argument slots to projectors with the given multiplicities of
/// `φ(P_{a(1)} ∂_{I_1}, …, P_{a(k)} ∂_{I_k})`. For projectors summing to the
/// identity the components over all `counts` reassemble `φ`.
pub fn graded_component(
    phi: &ComplexForm,
    projectors: &[ComplexFieldMatrix],
    counts: &[usize],
) -> ComplexForm {
    let k = phi.degree();
    let dim = phi.dim();
    assert_eq!(projectors.len(), counts.len());
    if counts.iter().sum::<usize>() != k || phi.is_zero() {
        return Form::zero(dim, k);
    }
    let columns: Vec<Vec<ComplexVectorField>> = projectors
        .iter()
        .map(|p| (0..p.cols()).map(|c| p.column(c)).collect())
        .collect();
    let assignments = assignments_with_counts(k, counts);
    let mut comps = Vec::new();
    for mask in 0u8..(1 << dim) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx = super::form::indices_of(mask);
        let mut acc = ComplexScalarField::zero(dim);
        for assign in &assignments {
            let args: Vec<&ComplexVectorField> = idx
                .iter()
                .zip(assign)
                .map(|(&i, &m)| &columns[m][i])
                .collect();
            let v = phi.apply(&args).expect("degree matches");
            acc = acc.plus(&v);
        }
        comps.push((idx, acc));
    }
    Form::from_components(dim, k, comps).expect("consistent dims")
}

fn assignments_with_counts(k: usize, counts: &[usize]) -> Vec<Vec<usize>> {
    fn rec(
        slot: usize,
        k: usize,
        left: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slot == k {
            out.push(cur.clone());
            return;
        }
        for m in 0..left.len() {
            if left[m] > 0 {
                left[m] -= 1;
                cur.push(m);
                rec(slot + 1, k, left, cur, out);
                cur.pop();
                left[m] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, k, &mut counts.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// The `(p, q)` component of `φ` with respect to the almost complex structure `j`.
pub fn pq_component(phi: &ComplexForm, j: &EndomorphismField, p: usize, q: usize) -> ComplexForm {
    let (pp, pbar) = type_projectors(j);
    graded_component(phi, &[pp, pbar], &[p, q])
}

/// All nonzero `(p, q)` components.
pub fn pq_decompose(
    phi: &ComplexForm,
    j: &EndomorphismField,
) -> Vec<((usize, usize), ComplexForm)> {
    let (pp, pbar) = type_projectors(j);
    let k = phi.degree();
    (0..=k)
        .map(|p| {
            (
                (p, k - p),
                graded_component(phi, &[pp.clone(), pbar.clone()], &[p, k - p]),
            )
        })
        .filter(|(_, c)| c.sup_bound() > 1e-12)
        .collect()
}

/// The unique type of `φ` if all other components are below `tol`.
pub fn pure_type(phi: &ComplexForm, j: &EndomorphismField, tol: f64) -> Option<(usize, usize)> {
    let parts = pq_decompose(phi, j);
    let big: Vec<_> = parts.iter().filter(|(_, c)| c.sup_bound() > tol).collect();
    match big.as_slice() {
        [(t, _)] => Some(*t),
        [] if phi.degree() == 0 => Some((0, 0)),
        _ => None,
    }
}

/// `∂φ`, `∂̄φ` and `d^c φ = i(∂̄ − ∂)φ`, where `∂` and `∂̄` are the
/// `(p+1, q)` and `(p, q+1)` parts of `d` applied to each `(p, q)` piece.
#[derive(Clone, Debug)]
pub struct DelDelbar {
    pub del: ComplexForm,
    pub delbar: ComplexForm,
    pub dc: ComplexForm,
}

pub fn del_and_delbar(phi: &ComplexForm, j: &EndomorphismField) -> DelDelbar {
    let (pp, pbar) = type_projectors(j);
    let k = phi.degree();
    let dim = phi.dim();
    let mut del = Form::zero(dim, k + 1);
    let mut delbar = Form::zero(dim, k + 1);
    for p in 0..=k {
        let piece = graded_component(phi, &[pp.clone(), pbar.clone()], &[p, k - p]);
        if piece.is_zero() {
            continue;
        }
        let d = piece.d();
        del = del.add(&graded_component(
            &d,
            &[pp.clone(), pbar.clone()],
            &[p + 1, k - p],
        ));
        delbar = delbar.add(&graded_component(
            &d,
            &[pp.clone(), pbar.clone()],
            &[p, k - p + 1],
        ));
    }
    let dc = delbar.sub(&del).scale_complex(Complex64::new(0.0, 1.0));
    DelDelbar { del, delbar, dc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ScalarField;
    use crate::tensor::vector::VectorField;

    fn j0() -> EndomorphismField {
        EndomorphismField::constant(
            &[
                vec![0.0, -1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, -1.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            4,
        )
    }

    /// `dz_a = dθ_{2a} + i dθ_{2a+1}` for the standard structure.
    fn dz(a: usize) -> ComplexForm {
        let re = Form::<ComplexScalarField>::basis(4, &[2 * a]).unwrap();
        let im = Form::<ComplexScalarField>::basis(4, &[2 * a + 1]).unwrap();
        re.add(&im.times_i())
    }

    #[test]
    fn dz_has_type_one_zero() {
        assert_eq!(pure_type(&dz(0), &j0(), 1e-12), Some((1, 0)));
        assert_eq!(pure_type(&dz(1).conj(), &j0(), 1e-12), Some((0, 1)));
        // dz₁ ∧ dz̄₁ = −2i dθ₁∧dθ₂
        let w = dz(0).wedge(&dz(0).conj());
        assert_eq!(
            w.component(&[0, 1]).as_constant(),
            Some(Complex64::new(0.0, -2.0))
        );
        assert_eq!(pure_type(&w, &j0(), 1e-12), Some((1, 1)));
    }

    #[test]
    fn kahler_form_is_one_one_and_closed() {
        let omega: ComplexForm = j0().transpose().to_two_form().to_complex();
        assert_eq!(pure_type(&omega, &j0(), 1e-12), Some((1, 1)));
        let dd = del_and_delbar(&omega, &j0());
        assert!(dd.del.is_zero() && dd.delbar.is_zero() && dd.dc.is_zero());
    }

    #[test]
    fn components_reassemble() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut phi = Form::zero(4, 2);
        for i in 0..4 {
            for j in i + 1..4 {
                let c = ScalarField::random(&mut rng, 4, 2, 1).into_complex();
                phi = phi.add(&Form::from_components(4, 2, [(vec![i, j], c)]).unwrap());
            }
        }
        let total = pq_decompose(&phi, &j0())
            .into_iter()
            .fold(Form::zero(4, 2), |a, (_, c)| a.add(&c));
        assert!(total.sub(&phi).sup_bound() < 1e-12);
    }

    #[test]
    fn dc_of_function_against_formula() {
        // d^c f = i(∂̄ − ∂) f = −(df)∘j on the standard structure
        let f = ScalarField::cos(4, &[1, 1, 0, 2]).unwrap();
        let phi = Form::scalar(f.clone()).to_complex();
        let dc = del_and_delbar(&phi, &j0()).dc;
        let df = Form::scalar(f).d();
        let expected = j0().pullback_covector(&df).neg().to_complex();
        assert!(dc.sub(&expected).sup_bound() < 1e-12);
        let _ = VectorField::<ScalarField>::coordinate(4, 0);
    }
}
