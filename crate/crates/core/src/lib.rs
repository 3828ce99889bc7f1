//! Separated variables for the quantum Toda chain.
//!
//! * [`exactalg`]: exact rational functions and the skew algebra of shifts.
//! * [`specfun`]: complex log-gamma, `Γ(u)Γ(−u)`, the Sklyanin measure, `K_ν`.
//! * [`lax`]: classical monodromy, separated divisor and reconstruction.
//! * [`dualops`]: the operators `X^(k)`, `Y^(k)` and their identities.
//! * [`mellinbarnes`]: Whittaker functions as Mellin–Barnes integrals.
//! * [`verify`]: checks, suites and structured reports.

pub mod dualops;
pub mod exactalg;
pub mod lax;
pub mod mellinbarnes;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod verify;

pub use dualops::DualError;
pub use exactalg::ExactError;
pub use lax::LaxError;
pub use mellinbarnes::MBError;
pub use num_complex::Complex64;
pub use report::{CheckParams, CheckReport, Residual};
pub use specfun::SpecFunError;
pub use verify::VerifyError;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Lax(#[from] LaxError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    MellinBarnes(#[from] MBError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
