//! Exact formal-group and vertex F-algebra computations over the rationals.

pub mod associate;
pub mod bivar;
pub mod error;
pub mod fields;
pub mod formal_group;
pub mod gen;
pub mod gseries;
pub mod harness;
pub mod literal;
pub mod power;
pub mod report;
pub mod scalar;
pub mod series;
pub mod suite;
pub mod vertex;
pub mod zhu;

pub use error::{Error, Result};
pub use gseries::GSeries;
pub use associate::Associate;
pub use bivar::{BiSeries, Convention, Nested, Window2};
pub use formal_group::FormalGroupLaw;
pub use power::PowerSeries;
pub use report::{CheckReport, Tally, Verdict, Witness};
pub use scalar::Q;
pub use series::{Coeff, LaurentSeries, Series, Vector, EXACT};
pub use vertex::{DerivationAlgebra, StateSpace, VertexStructure};
