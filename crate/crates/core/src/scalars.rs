//! Exact scalar arithmetic: the coefficient field `Q(xi)` for a primitive
//! `r`-th root of unity `xi` (`r` in {1,2,3}), and Laurent polynomials in
//! `z^{1/r}` over it, together with the two Galois actions of the extension
//! `Q(xi)[z^{±1/r}] / Q[z^{±1}]`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// An element of `Q(xi)`, stored as `a + b·xi`.
///
/// For `r = 1` the root is `xi = 1` and for `r = 2` it is `xi = -1`; in both
/// cases the field is `Q` and the `b` component is identically zero. For
/// `r = 3` the minimal polynomial is `xi² + xi + 1 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyc {
    r: u8,
    a: Rat,
    b: Rat,
}

impl Cyc {
    /// The zero element of `Q(xi)` for the given order.
    pub fn zero(r: u8) -> Self {
        assert!((1..=3).contains(&r), "order must be 1, 2, or 3");
        Cyc { r, a: Rat::zero(), b: Rat::zero() }
    }

    /// The unit element.
    pub fn one(r: u8) -> Self {
        Cyc { a: Rat::one(), ..Cyc::zero(r) }
    }

    /// A rational number viewed inside `Q(xi)`.
    pub fn from_rat(r: u8, a: Rat) -> Self {
        Cyc { a, ..Cyc::zero(r) }
    }

    /// An integer viewed inside `Q(xi)`.
    pub fn from_int(r: u8, n: i64) -> Self {
        Cyc::from_rat(r, rat_int(n))
    }

    /// `a + b·xi`. For `r ≤ 2` the `xi` component is folded into the rational
    /// part (`xi = 1` or `xi = -1`), keeping the representation canonical.
    pub fn new(r: u8, a: Rat, b: Rat) -> Self {
        match r {
            1 => Cyc { r, a: a + b, b: Rat::zero() },
            2 => Cyc { r, a: a - b, b: Rat::zero() },
            3 => Cyc { r, a, b },
            _ => panic!("order must be 1, 2, or 3"),
        }
    }

    /// The distinguished primitive `r`-th root of unity.
    pub fn xi(r: u8) -> Self {
        Cyc::new(r, Rat::zero(), Rat::one())
    }

    /// `xi^k`, with negative `k` meaning the inverse power.
    pub fn xi_pow(r: u8, k: i64) -> Self {
        let e = k.rem_euclid(i64::from(r));
        match (r, e) {
            (_, 0) => Cyc::one(r),
            (2, 1) => Cyc::from_int(2, -1),
            (3, 1) => Cyc::xi(3),
            // xi² = -1 - xi for r = 3.
            (3, 2) => Cyc::new(3, rat_int(-1), rat_int(-1)),
            _ => unreachable!(),
        }
    }

    /// Ground order `r`.
    pub fn order(&self) -> u8 {
        self.r
    }

    /// The rational component (the full value when `r ≤ 2`).
    pub fn rat_part(&self) -> &Rat {
        &self.a
    }

    /// The `xi` component (zero when `r ≤ 2`).
    pub fn xi_part(&self) -> &Rat {
        &self.b
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True if the value is the rational `q`.
    pub fn is_rat(&self, q: &Rat) -> bool {
        self.b.is_zero() && self.a == *q
    }

    /// The Galois conjugate `xi ↦ xi⁻¹`; the identity for `r ≤ 2`.
    pub fn omega_bar(&self) -> Self {
        // a + b·xi ↦ a + b·xi² = (a - b) - b·xi.
        Cyc { r: self.r, a: &self.a - &self.b, b: -self.b.clone() }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Cyc::from_rat(self.r, self.a.recip()));
        }
        // (a + b·xi)(a + b·xi²) = a² - ab + b² is the field norm for r = 3.
        let norm = &self.a * &self.a - &self.a * &self.b + &self.b * &self.b;
        let conj = self.omega_bar();
        Ok(Cyc {
            r: self.r,
            a: conj.a / norm.clone(),
            b: conj.b / norm,
        })
    }

    fn assert_same_order(&self, other: &Cyc) {
        assert_eq!(self.r, other.r, "mixed ground orders in scalar arithmetic");
    }
}

impl Add for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        self.assert_same_order(rhs);
        Cyc { r: self.r, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        self.assert_same_order(rhs);
        Cyc { r: self.r, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { r: self.r, a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl Mul for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        self.assert_same_order(rhs);
        // (a + b·xi)(c + d·xi) = ac + (ad + bc)·xi + bd·xi², xi² = -1 - xi.
        let ac = &self.a * &rhs.a;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        let bd = &self.b * &rhs.b;
        Cyc { r: self.r, a: ac - &bd, b: ad_bc - bd }
    }
}

/// A Laurent polynomial in `z^{1/r}` over `Q(xi)`.
///
/// The term map sends an integer exponent `n` to the coefficient of
/// `z^{n/r}`; zero coefficients are never stored, so the zero polynomial has
/// an empty map and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    r: u8,
    terms: BTreeMap<i64, Cyc>,
}

impl Laurent {
    /// The zero polynomial.
    pub fn zero(r: u8) -> Self {
        assert!((1..=3).contains(&r), "order must be 1, 2, or 3");
        Laurent { r, terms: BTreeMap::new() }
    }

    /// The constant polynomial `1`.
    pub fn one(r: u8) -> Self {
        Laurent::monomial(r, 0, Cyc::one(r))
    }

    /// The single term `c · z^{n/r}`.
    pub fn monomial(r: u8, n: i64, c: Cyc) -> Self {
        assert_eq!(c.order(), r, "coefficient order must match the container");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        Laurent { r, terms }
    }

    /// A constant polynomial.
    pub fn constant(c: Cyc) -> Self {
        let r = c.order();
        Laurent::monomial(r, 0, c)
    }

    /// A rational constant polynomial.
    pub fn from_rat(r: u8, q: Rat) -> Self {
        Laurent::monomial(r, 0, Cyc::from_rat(r, q))
    }

    /// An integer constant polynomial.
    pub fn from_int(r: u8, n: i64) -> Self {
        Laurent::from_rat(r, rat_int(n))
    }

    /// Ground order `r`.
    pub fn order(&self) -> u8 {
        self.r
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `z^{n/r}` (zero when absent).
    pub fn coeff(&self, n: i64) -> Cyc {
        self.terms.get(&n).cloned().unwrap_or_else(|| Cyc::zero(self.r))
    }

    /// Iterate over `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Cyc)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, n: i64, c: &Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&n) {
            None => {
                self.terms.insert(n, c.clone());
            }
            Some(old) => {
                let sum = &old + c;
                if !sum.is_zero() {
                    self.terms.insert(n, sum);
                }
            }
        }
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &Cyc) -> Self {
        assert_eq!(self.r, c.order(), "mixed ground orders");
        if c.is_zero() {
            return Laurent::zero(self.r);
        }
        let terms = self.terms.iter().map(|(n, v)| (*n, v * c)).collect();
        Laurent { r: self.r, terms }
    }

    /// Multiply by the monomial `z^{n/r}`.
    pub fn shift(&self, n: i64) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (m + n, v.clone())).collect();
        Laurent { r: self.r, terms }
    }

    /// The Galois action fixing `Q(xi)` and sending `z^{n/r} ↦ xi^{-n}·z^{n/r}`.
    pub fn sigma_prime(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(n, v)| (*n, v * &Cyc::xi_pow(self.r, -n)))
            .collect();
        Laurent { r: self.r, terms }
    }

    /// The Galois action fixing all powers of `z^{1/r}` and conjugating the
    /// coefficients (`xi ↦ xi⁻¹`); the identity for `r ≤ 2`.
    pub fn omega_prime(&self) -> Self {
        let terms = self.terms.iter().map(|(n, v)| (*n, v.omega_bar())).collect();
        Laurent { r: self.r, terms }
    }

    /// `(M, m, k)`: maximal exponent, minimal exponent, and their difference;
    /// `(0, 0, 0)` for the zero polynomial.
    pub fn deg_stats(&self) -> (i64, i64, i64) {
        match (self.terms.keys().next_back(), self.terms.keys().next()) {
            (Some(&max), Some(&min)) => (max, min, max - min),
            _ => (0, 0, 0),
        }
    }

    /// Units are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse of a unit (negated exponent, inverted coefficient).
    pub fn inv_unit(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let (n, c) = self.terms.iter().next().expect("unit has one term");
        Ok(Laurent::monomial(self.r, -n, c.inv()?))
    }

    /// `self^k` for a unit, any integer `k`.
    pub fn pow_unit(&self, k: i64) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let base = if k < 0 { self.inv_unit()? } else { self.clone() };
        let mut acc = Laurent::one(self.r);
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// `self^k` for non-negative `k`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Laurent::one(self.r);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// True iff the polynomial is fixed by both Galois actions, i.e. lies in
    /// `K[z^{±1}]` with `K` the rational subfield.
    pub fn is_gamma_fixed(&self) -> bool {
        self.sigma_prime() == *self && self.omega_prime() == *self
    }

    /// All coefficients as `(n, Cyc)` pairs collected into a vector.
    pub fn to_terms(&self) -> Vec<(i64, Cyc)> {
        self.terms.iter().map(|(n, c)| (*n, c.clone())).collect()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        assert_eq!(self.r, rhs.r, "mixed ground orders");
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.insert_add(*n, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        let terms = self.terms.iter().map(|(n, c)| (*n, -c)).collect();
        Laurent { r: self.r, terms }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        assert_eq!(self.r, rhs.r, "mixed ground orders");
        let mut out = Laurent::zero(self.r);
        for (n, c) in &self.terms {
            for (m, d) in &rhs.terms {
                out.insert_add(n + m, &(c * d));
            }
        }
        out
    }
}

/// Sign of a rational (`-1`, `0`, `1`); used for canonical orderings.
pub fn rat_sign(q: &Rat) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
