//! Vector fields, differential forms and endomorphism fields on the torus.

pub mod form;
pub mod matrix;
pub mod pq;
pub mod vector;

pub use form::{ComplexForm, DifferentialForm, Form, FormAt};
pub use matrix::{ComplexFieldMatrix, EndomorphismField, FieldMatrix, MetricField};
pub use pq::{
    del_and_delbar, graded_component, pq_component, pq_decompose, pure_type, type_projectors,
    DelDelbar,
};
pub use vector::{ComplexVectorField, VectorField};
