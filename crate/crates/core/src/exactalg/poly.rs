//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent multi-index. Ordered lexicographically, variable 0 most significant.
pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` commuting variables over the rationals.
///
/// Terms are kept in a `BTreeMap` keyed by exponent, so the last entry is the
/// lexicographic leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::monomial(nvars, BigRational::one(), unit_exponent(nvars, i))
    }

    pub fn monomial(nvars: usize, c: BigRational, exp: Exponent) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    /// Returns the constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&a| a == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Lexicographic leading term.
    pub fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, exp: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self -= c * x^exp * d`
    fn sub_scaled_shifted(&mut self, c: &BigRational, exp: &[u32], d: &MultiPoly) {
        for (de, dc) in &d.terms {
            let e: Exponent = de.iter().zip(exp).map(|(a, b)| a + b).collect();
            self.add_term(e, -(dc * c));
        }
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, d.nvars);
        let (lde, ldc) = d.leading()?;
        let (lde, ldc) = (lde.clone(), ldc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((le, lc)) = rem.leading() {
            if le.iter().zip(&lde).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponent = le.iter().zip(&lde).map(|(a, b)| a - b).collect();
            let qc = lc / &ldc;
            rem.sub_scaled_shifted(&qc, &qe, d);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Splits `self = c * p` where `p` has coprime integer coefficients and a
    /// positive leading coefficient. Zero maps to `(0, 0)`.
    pub fn primitive_part(&self) -> (BigRational, MultiPoly) {
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(e) {
                if a > 0 {
                    t *= num_traits::pow(x.clone(), a as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, &a) in point.iter().zip(e) {
                if a > 0 {
                    t *= x.powu(a);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i -> x_i + shift[i] * x_h` for every `i < shift.len()`,
    /// where `x_h` is variable `h_index`.
    pub fn shift_vars(&self, shift: &[i32], h_index: usize) -> MultiPoly {
        if shift.iter().all(|&s| s == 0) {
            return self.clone();
        }
        let n = self.nvars;
        let h = MultiPoly::var(n, h_index);
        let lins: Vec<MultiPoly> = shift
            .iter()
            .enumerate()
            .map(|(i, &s)| &MultiPoly::var(n, i) + &h.scale(&BigRational::from_integer(s.into())))
            .collect();
        let mut cache: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(n)]; shift.len()];
        let mut out = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let mut t = MultiPoly::constant(n, c.clone());
            for (i, &s) in shift.iter().enumerate() {
                if s == 0 || e[i] == 0 {
                    continue;
                }
                rest[i] = 0;
                let a = e[i] as usize;
                while cache[i].len() <= a {
                    let next = cache[i].last().unwrap() * &lins[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][a];
            }
            let mono = MultiPoly::monomial(n, BigRational::one(), rest);
            out = &out + &(&t * &mono);
        }
        out
    }
}

fn unit_exponent(nvars: usize, i: usize) -> Exponent {
    let mut e = vec![0; nvars];
    e[i] = 1;
    e
}

impl<'a> std::ops::Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{a}")?,
                }
            }
        }
        Ok(())
    }
}
