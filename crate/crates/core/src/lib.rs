//! Combinatorial multivector fields, isolated invariant sets and Conley-index
//! continuation tracked through zigzag persistence.

pub mod algebra;
pub mod complex;
pub mod mvf;
pub mod dynamics;
pub mod zigzag;
pub mod tracking;
pub mod scene;
