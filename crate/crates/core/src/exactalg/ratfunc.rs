//! Rational functions with a factored denominator.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::ExactError;

/// `num / prod(f_i^{m_i})`.
///
/// Each denominator factor is primitive (coprime integer coefficients, positive
/// leading coefficient) and non-constant; all scalar content lives in `num`.
/// Factors are cancelled against the numerator by exact trial division, so
/// the representation is reduced whenever the factors are irreducible, which
/// holds for every coefficient built from linear differences `λ_i − λ_j + c·h`.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: Vec<(MultiPoly, u32)>,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc {
            num: MultiPoly::zero(nvars),
            den: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(nvars, c))
    }

    /// `num / den`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        Self::from_factors(num, vec![(den, 1)])
    }

    /// `num / prod(f^m)`. Factors need not be normalized.
    pub fn from_factors(num: MultiPoly, den: Vec<(MultiPoly, u32)>) -> Result<Self, ExactError> {
        let mut out = RatFunc { num, den: Vec::new() };
        for (f, m) in den {
            if f.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            out.push_factor(f, m);
        }
        out.cancel();
        Ok(out)
    }

    fn push_factor(&mut self, f: MultiPoly, m: u32) {
        if m == 0 {
            return;
        }
        let (c, prim) = f.primitive_part();
        let inv = num_traits::pow(c.recip(), m as usize);
        self.num = self.num.scale(&inv);
        if prim.as_constant().is_some() {
            return;
        }
        match self.den.iter_mut().find(|(g, _)| *g == prim) {
            Some((_, mult)) => *mult += m,
            None => self.den.push((prim, m)),
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, m) in self.den.iter_mut() {
            while *m > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, m)| *m > 0);
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(MultiPoly, u32)] {
        &self.den
    }

    /// The expanded denominator polynomial.
    pub fn denominator(&self) -> MultiPoly {
        self.den
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    /// Returns the polynomial if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let num = self.denominator();
        Self::from_factors(num, vec![(self.num.clone(), 1)])
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<Self, ExactError> {
        Ok(self * &rhs.recip()?)
    }

    fn add_signed(&self, rhs: &RatFunc, negate: bool) -> RatFunc {
        let n = self.nvars();
        assert_eq!(n, rhs.nvars());
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        // Least common multiple of the two factor lists.
        let mut lcm = self.den.clone();
        for (g, m) in &rhs.den {
            match lcm.iter_mut().find(|(f, _)| f == g) {
                Some((_, mult)) => *mult = (*mult).max(*m),
                None => lcm.push((g.clone(), *m)),
            }
        }
        let cofactor = |den: &[(MultiPoly, u32)]| {
            lcm.iter().fold(MultiPoly::one(n), |acc, (f, m)| {
                let have = den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                &acc * &f.pow(m - have)
            })
        };
        let a = &self.num * &cofactor(&self.den);
        let b = &rhs.num * &cofactor(&rhs.den);
        let num = if negate { &a - &b } else { &a + &b };
        let mut out = RatFunc { num, den: lcm };
        out.cancel();
        out
    }

    /// Substitutes `λ_i -> λ_i + e_i·h` (h is variable `h_index`).
    pub fn shift(&self, e: &[i32], h_index: usize) -> RatFunc {
        if e.iter().all(|&s| s == 0) || self.is_zero() {
            return self.clone();
        }
        let num = self.num.shift_vars(e, h_index);
        let den = self.den.iter().map(|(f, m)| (f.shift_vars(e, h_index), *m)).collect();
        Self::from_factors(num, den).expect("shifted factor of a nonzero polynomial is nonzero")
    }

    /// `None` when the point lies on the denominator.
    pub fn eval_rational(&self, point: &[BigRational]) -> Option<BigRational> {
        let mut d = BigRational::one();
        for (f, m) in &self.den {
            let v = f.eval_rational(point);
            if v.is_zero() {
                return None;
            }
            d *= num_traits::pow(v, *m as usize);
        }
        Some(self.num.eval_rational(point) / d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut d = Complex64::one();
        for (f, m) in &self.den {
            d *= f.eval_complex(point).powu(*m);
        }
        self.num.eval_complex(point) / d
    }
}

/// Structural equality up to the order of denominator factors.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den.len() == other.den.len() && self.den.iter().all(|fm| other.den.contains(fm))
    }
}

impl Eq for RatFunc {}

impl<'a> std::ops::Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_signed(rhs, false)
    }
}

impl<'a> std::ops::Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.add_signed(rhs, true)
    }
}

impl<'a> std::ops::Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        assert_eq!(self.nvars(), rhs.nvars());
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (g, m) in &rhs.den {
            match den.iter_mut().find(|(f, _)| f == g) {
                Some((_, mult)) => *mult += m,
                None => den.push((g.clone(), *m)),
            }
        }
        let mut out = RatFunc {
            num: &self.num * &rhs.num,
            den,
        };
        out.cancel();
        out
    }
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "[{}] / [", self.num)?;
        for (i, (g, m)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "({g})^{m}")?;
        }
        write!(f, "]")
    }
}
