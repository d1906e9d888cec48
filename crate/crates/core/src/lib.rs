//! Exact construction of Jacobi-type polynomials from quasi-Casoratian
//! determinants, their bilinear forms, and recurrence certificates.

#![allow(clippy::needless_range_loop)]

pub mod bilinear;
pub mod error;
pub mod exact;
pub mod family;
pub mod jacobi;
pub mod samples;
pub mod spectral;

pub use bilinear::{BilinearConfig, BilinearForm, Mode, PoleExpansion};
pub use error::{Error, Result};
pub use exact::{EpsFrac, ExactMatrix, Field, Rational, Ring, SymValue, UniPoly};
pub use family::{BetaRecord, FamilyConfig, QEntry, QSequence, UExpansion};
pub use jacobi::{Endpoint, JacobiParams};
pub use spectral::{AlgebraBasis, Band, KrallSpec, MeasureFit, RecurrenceTable, ThreeTerm};
