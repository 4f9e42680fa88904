//! Exact best approximation over Novikov rings, and spectral numbers of
//! filtered chain complexes built on top of it.
//!
//! The building blocks, bottom up: exact rational [`Exponent`]s; coefficient
//! [`field`]s; precision-tracked [`NovikovSeries`]; valued vectors and
//! matrices; the [`reduction`] engine (adapted bases, fixed-point reduction,
//! weighted best approximation); filtered [`complex`]es with spectral
//! numbers and certificates; and a harness of [`fixtures`], seeded
//! [`generate`]d instances, and a brute-force [`oracle`].

pub mod complex;
pub mod exponent;
pub mod field;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod period;
pub mod reduction;
pub mod series;

pub use complex::{
    Chain, CycleCheck, FilteredComplex, FiltrationLevel, Generator, HomologyRanks, RankResult,
    Rho, SpectralResult, SpectralStatus, ValidationReport, Violation,
};
pub use exponent::Exponent;
pub use field::{Field, PrimeField, Rationals};
pub use fixtures::{fixture, FixtureName};
pub use generate::{ApproxInstance, GeneratorParams, InstanceGenerator};
pub use linalg::{ValuedMatrix, ValuedVector, WeightVector};
pub use oracle::{oracle_best_approx, OracleConfig, OracleError, OracleOutcome};
pub use period::{compute_splitting, extend_group, PeriodData, Splitting, ValueGroup};
pub use reduction::{
    adapted_basis, best_approx, gamma_constant, project_exponents, reduce_to_fixed_point,
    AdaptedBasis, ApproxResult, ApproxStatus, ReduceStatus, Reduction, ReductionError,
    ReductionTrace,
};
pub use series::{NovikovSeries, Precision, SeriesError, Valuation};
