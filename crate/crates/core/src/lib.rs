//! Core library for the ACVP test-vector toolkit: the vector-set data
//! model, algorithm-specific case schemas, reference crypto, a signed
//! big-integer implementation, deterministic byte-stream translation of
//! raw inputs into test cases, and the probe registry used for coverage
//! feedback.

pub mod bignum;
pub mod crypto;
pub mod generator;
pub mod model;
pub mod probe;
pub mod rng;
pub mod subspec;

pub use bignum::{BigInt, BignumError, Sign};
pub use model::{
    expand_groups, parse_response_set, parse_vector_set, resolve_field, serialize_response_set,
    serialize_vector_set, FieldValue, ModelError, ResponseSet, TestCase, TestGroup, VectorSet,
};
