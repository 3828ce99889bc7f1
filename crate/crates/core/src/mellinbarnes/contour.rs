//! Integration contours for the `γ` rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Row `n` runs along `γ(x) = x + i (δ_n − τ·w·softplus((x − x₀)/w))`.
///
/// All rows share the bend, so the vertical gap between rows is `δ_n − δ_{n+1}`
/// at every abscissa and no pole of `Γ((γ_n − γ_{n+1})/iħ)` is ever crossed.
/// Right of `x₀` the contour descends with slope `−τ`, which makes the
/// integrand decay when the power base is `iħ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// `δ_1 > δ_2 > … > δ_{N−1}`.
    pub row_offsets: Vec<f64>,
    /// Asymptotic downward slope `τ ≥ 0`.
    pub bend: f64,
    /// Width `w > 0` of the transition.
    pub bend_width: f64,
    /// Abscissa `x₀` where the descent starts.
    pub bend_start: f64,
}

fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

impl ContourSpec {
    /// Horizontal rows.
    pub fn flat(row_offsets: Vec<f64>) -> Self {
        ContourSpec {
            row_offsets,
            bend: 0.0,
            bend_width: 1.0,
            bend_start: 0.0,
        }
    }

    /// Common downward displacement at abscissa `x`.
    pub fn sag(&self, x: f64) -> f64 {
        if self.bend == 0.0 {
            return 0.0;
        }
        self.bend * self.bend_width * softplus((x - self.bend_start) / self.bend_width)
    }

    /// `γ` on row `row` (0-based) at abscissa `x`.
    pub fn point(&self, row: usize, x: f64) -> Complex64 {
        Complex64::new(x, self.row_offsets[row] - self.sag(x))
    }

    /// `dγ/dx`, identical for every row.
    pub fn jacobian(&self, x: f64) -> Complex64 {
        if self.bend == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::new(1.0, -self.bend * sigmoid((x - self.bend_start) / self.bend_width))
    }

    /// Every offset raised by `dy`.
    pub fn raised(&self, dy: f64) -> Self {
        let mut c = self.clone();
        c.row_offsets.iter_mut().for_each(|d| *d += dy);
        c
    }

    /// Strictly decreasing offsets, the last one above every `Im λ_j`
    /// at the abscissas where `λ_j` sits.
    pub fn is_admissible(&self, lambda: &[Complex64]) -> bool {
        let ordered = self.row_offsets.windows(2).all(|w| w[0] > w[1]);
        let last = match self.row_offsets.last() {
            Some(&d) => d,
            None => return lambda.len() == 1,
        };
        let clears = lambda.iter().all(|l| last - self.sag(l.re) > l.im);
        ordered && clears && self.bend >= 0.0 && self.bend_width > 0.0
    }
}
