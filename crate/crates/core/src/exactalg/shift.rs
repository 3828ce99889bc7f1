//! Difference operators `Σ_e c_e(λ) σ^e` in the skew algebra of shifts.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;

/// A finite sum of shift monomials with rational-function coefficients.
///
/// Coefficients live in `Q(λ_1..λ_N, h)`; `h` is variable `N`. The shift
/// `σ^e` acts by `(σ^e f)(λ) = f(λ + h·e)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ShiftExpr {
    n: usize,
    terms: BTreeMap<Vec<i32>, RatFunc>,
}

impl ShiftExpr {
    /// The zero operator on `n` spectral variables.
    pub fn zero(n: usize) -> Self {
        ShiftExpr {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(vec![0; n], RatFunc::one(n + 1))
    }

    /// The pure shift `σ^e`.
    pub fn shift(e: Vec<i32>) -> Self {
        let n = e.len();
        Self::term(e, RatFunc::one(n + 1))
    }

    /// Multiplication by `c`, i.e. `c·σ^0`.
    pub fn multiplier(n: usize, c: RatFunc) -> Self {
        Self::term(vec![0; n], c)
    }

    pub fn term(e: Vec<i32>, c: RatFunc) -> Self {
        let n = e.len();
        assert_eq!(c.nvars(), n + 1, "coefficient must have N+1 variables");
        let mut out = Self::zero(n);
        out.add_term(e, c);
        out
    }

    /// Number of spectral variables `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the formal parameter `h` in coefficient variables.
    pub fn h_index(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> Option<&RatFunc> {
        self.terms.get(e)
    }

    fn add_term(&mut self, e: Vec<i32>, c: RatFunc) {
        assert_eq!(e.len(), self.n);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.scale(c));
        }
        out
    }

    /// Left multiplication by a function: `c · self`.
    pub fn left_mul(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), c * a);
        }
        out
    }

    /// Skew product `self ∘ rhs`: `(c σ^e)(d σ^f) = c · d(λ + h e) σ^{e+f}`.
    pub fn compose(&self, rhs: &ShiftExpr) -> ShiftExpr {
        assert_eq!(self.n, rhs.n);
        let h = self.h_index();
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let ef: Vec<i32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(ef, c * &d.shift(e, h));
            }
        }
        out
    }

    /// `[a, b] = a∘b − b∘a`.
    pub fn commutator(&self, rhs: &ShiftExpr) -> ShiftExpr {
        &self.compose(rhs) - &rhs.compose(self)
    }

    /// `Σ_e c_e(λ) · f(λ + h e)`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        assert_eq!(f.nvars(), self.n + 1);
        let h = self.h_index();
        self.terms
            .iter()
            .fold(RatFunc::zero(self.n + 1), |acc, (e, c)| &acc + &(c * &f.shift(e, h)))
    }

    /// Applies the operator to a polynomial test function.
    pub fn apply_poly(&self, f: &MultiPoly) -> RatFunc {
        self.apply(&RatFunc::from_poly(f.clone()))
    }
}

impl<'a> std::ops::Add<&'a ShiftExpr> for &'a ShiftExpr {
    type Output = ShiftExpr;
    fn add(self, rhs: &ShiftExpr) -> ShiftExpr {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a ShiftExpr> for &'a ShiftExpr {
    type Output = ShiftExpr;
    fn sub(self, rhs: &ShiftExpr) -> ShiftExpr {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &ShiftExpr {
    type Output = ShiftExpr;
    fn neg(self) -> ShiftExpr {
        let mut out = ShiftExpr::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl fmt::Debug for ShiftExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{{{c:?}}}σ^{e:?}")?;
        }
        Ok(())
    }
}
