//! Complex special functions: log-gamma, the reflection pair, the Sklyanin
//! measure and a quadrature-based `K_ν`.

mod bessel;
mod gamma;

pub use bessel::bessel_k;
pub use gamma::{gamma, gamma_pair, inv_gamma_pair, log_gamma, log_inv_gamma_pair};

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("pole at {re}{im:+}i")]
    Pole { re: f64, im: f64 },
    #[error("non-finite argument")]
    NonFinite,
    #[error("argument out of domain: {0}")]
    Domain(&'static str),
    #[error("overflow for extreme parameters")]
    Overflow,
}

/// `m(λ) = ∏_{i<j} y sinh(πy) / π` with `y = (λ_i − λ_j)/ħ`.
///
/// Equal to `∏_{i<j} 1/|Γ(iy)|²`; positive for distinct `λ` and zero on
/// coincidences.
pub fn measure(lambda: &[f64], hbar: f64) -> f64 {
    let mut m = 1.0;
    for i in 0..lambda.len() {
        for j in (i + 1)..lambda.len() {
            let y = (lambda[i] - lambda[j]) / hbar;
            m *= y * (PI * y).sinh() / PI;
        }
    }
    m
}
