//! Dense univariate polynomials with complex coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients in ascending degree. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyC {
    coeffs: Vec<Complex64>,
}

impl PolyC {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        PolyC { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        PolyC { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `λ + a`
    pub fn linear(a: Complex64) -> Self {
        Self::new(vec![a, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `λ^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> PolyC {
        PolyC::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> PolyC {
        PolyC::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Roots from the companion matrix, polished by two Newton steps and
    /// sorted by real part, then imaginary part.
    pub fn roots(&self) -> Option<Vec<Complex64>> {
        let deg = self.degree()?;
        if deg == 0 {
            return Some(Vec::new());
        }
        let lead = self.coeffs[deg];
        let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -self.coeffs[i] / lead;
        }
        let eig = comp.eigenvalues()?;
        let d = self.derivative();
        let mut roots: Vec<Complex64> = eig
            .iter()
            .map(|&r| {
                let mut x = r;
                for _ in 0..2 {
                    let dp = d.eval(x);
                    if dp.norm() > 0.0 {
                        x -= self.eval(x) / dp;
                    }
                }
                x
            })
            .collect();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Some(roots)
    }
}

impl std::ops::Add for &PolyC {
    type Output = PolyC;
    fn add(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyC::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl std::ops::Sub for &PolyC {
    type Output = PolyC;
    fn sub(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyC::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl std::ops::Mul for &PolyC {
    type Output = PolyC;
    fn mul(self, rhs: &PolyC) -> PolyC {
        if self.is_zero() || rhs.is_zero() {
            return PolyC::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyC::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cubic() {
        // (λ − 1)(λ + 2)(λ − 0.5)
        let p = &(&PolyC::from_real(&[-1.0, 1.0]) * &PolyC::from_real(&[2.0, 1.0])) * &PolyC::from_real(&[-0.5, 1.0]);
        let r = p.roots().unwrap();
        let expected = [-2.0, 0.5, 1.0];
        for (x, e) in r.iter().zip(expected) {
            assert!((x - Complex64::new(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn complex_roots() {
        // λ² + 1
        let r = PolyC::from_real(&[1.0, 0.0, 1.0]).roots().unwrap();
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn arithmetic_and_degree() {
        let p = PolyC::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(p.derivative(), PolyC::from_real(&[2.0, 6.0]));
        assert_eq!(p.eval(Complex64::new(2.0, 0.0)), Complex64::new(17.0, 0.0));
    }
}
