//! Exact arithmetic, piecewise rotations and word synthesis for the full
//! group generated by an irrational rotation and one involution.

pub mod circle_maps;
pub mod diophantine;
pub mod number_field;
pub mod synthesis;
