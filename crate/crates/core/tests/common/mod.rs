//! Random trig-polynomial inputs shared by the integration tests.
#![allow(dead_code)]

use gcverify::fields::ScalarField;
use gcverify::generalized::GeneralizedSection;
use gcverify::tensor::{DifferentialForm, Form, VectorField};
use rand::Rng;

pub const DIM: usize = 4;

pub fn field<R: Rng>(rng: &mut R) -> ScalarField {
    ScalarField::random(rng, DIM, 3, 2)
}

pub fn vector<R: Rng>(rng: &mut R) -> VectorField {
    VectorField::new((0..DIM).map(|_| field(rng)).collect()).unwrap()
}

pub fn form<R: Rng>(rng: &mut R, degree: usize) -> DifferentialForm {
    let mut out = Form::zero(DIM, degree);
    for mask in 0u8..(1 << DIM) {
        if mask.count_ones() as usize == degree {
            let idx: Vec<usize> = (0..DIM).filter(|i| mask & (1 << i) != 0).collect();
            out = out.add(&Form::from_components(DIM, degree, [(idx, field(rng))]).unwrap());
        }
    }
    out
}

pub fn section<R: Rng>(rng: &mut R) -> GeneralizedSection {
    GeneralizedSection::new(vector(rng), form(rng, 1)).unwrap()
}
