//! Exact multivariate polynomials over arbitrary-precision rationals.
//!
//! Variables come from a fixed ordered universe: the jet coordinates
//! `x < y < y1 < y2`, followed by ansatz unknowns `c_0 < c_1 < ...`.
//! A [`Poly`] is a sparse map from exponent vectors to nonzero rational
//! coefficients, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Coefficient field. `BigRational` keeps numerator and denominator coprime
/// with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Identifier of a variable in the ordered universe `x, y, y1, y2, c_0, c_1, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

const JET_VARS: u32 = 4;

impl VarId {
    pub const X: VarId = VarId(0);
    pub const Y: VarId = VarId(1);
    pub const Y1: VarId = VarId(2);
    pub const Y2: VarId = VarId(3);

    /// The `i`-th ansatz unknown `c_i`.
    pub fn unknown(i: usize) -> VarId {
        VarId(JET_VARS + i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> VarId {
        VarId(i as u32)
    }

    pub fn is_jet(self) -> bool {
        self.0 < JET_VARS
    }

    /// Position of an ansatz unknown, `None` for jet coordinates.
    pub fn unknown_index(self) -> Option<usize> {
        self.0.checked_sub(JET_VARS).map(|i| i as usize)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("x"),
            1 => f.write_str("y"),
            2 => f.write_str("y1"),
            3 => f.write_str("y2"),
            n => write!(f, "c_{}", n - JET_VARS),
        }
    }
}

/// Exponent vector indexed by [`VarId`]. Trailing zeros are never stored, so
/// the derived ordering is lexicographic with `x` most significant.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId, e: u32) -> Self {
        let mut m = Monomial::one();
        m.set_exp(v, e);
        m
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let mut m = Monomial(exps.to_vec());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.0.get(v.index()).copied().unwrap_or(0)
    }

    pub fn set_exp(&mut self, v: VarId, e: u32) {
        let i = v.index();
        if i >= self.0.len() {
            if e == 0 {
                return;
            }
            self.0.resize(i + 1, 0);
        }
        self.0[i] = e;
        self.trim();
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Nonzero exponents in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarId::from_index(i), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.0.clone();
        for (e, s) in exps.iter_mut().zip(&short.0) {
            *e += s;
        }
        Monomial(exps)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut exps = other.0.clone();
        for (e, s) in exps.iter_mut().zip(&self.0) {
            *e -= s;
        }
        let mut m = Monomial(exps);
        m.trim();
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        );
        m.trim();
        m
    }

    /// Keeps only the exponents of variables accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(VarId) -> bool) -> Monomial {
        let mut m = Monomial(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if keep(VarId::from_index(i)) { e } else { 0 })
                .collect(),
        );
        m.trim();
        m
    }

    /// Graded lexicographic comparison: total degree first, then `x` most
    /// significant.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("divisor does not contain variable {0}")]
    MissingVariable(VarId),
}

/// Result of pseudo-division: `lc^power * g = quotient * f + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivision {
    pub remainder: Poly,
    pub quotient: Poly,
    pub power: u32,
}

/// Canonical sparse polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: VarId) -> Self {
        Poly::term(Rat::one(), Monomial::var(v, 1))
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        Poly::term(Rat::one(), Monomial::var(v, e))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree in `v`; the zero polynomial has degree 0.
    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, viewing `self` as a polynomial in `v`.
    pub fn coeff_in(&self, v: VarId, k: u32) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.set_exp(v, 0);
                    (m, c.clone())
                }),
        )
    }

    pub fn leading_coeff(&self, v: VarId) -> Poly {
        self.coeff_in(v, self.degree_in(v))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rat, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    /// Formal partial derivative.
    pub fn pdiff(&self, v: VarId) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                let mut m = m.clone();
                m.set_exp(v, e - 1);
                (m, c * int(e as i64))
            })
        }))
    }

    /// Replaces every occurrence of `v` by `r`.
    pub fn subst(&self, v: VarId, r: &Poly) -> Poly {
        let mut powers = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * r;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.set_exp(v, 0);
            out += &powers[e].mul_monomial(c, &rest);
        }
        out
    }

    /// Pseudo-division of `self` by `f` with respect to `v`.
    ///
    /// Returns `(remainder, quotient, power)` with
    /// `lc_v(f)^power * self = quotient * f + remainder` and
    /// `deg_v(remainder) < deg_v(f)`. One multiplication by the leading
    /// coefficient is spent per elimination step, so
    /// `power <= deg_v(self) - deg_v(f) + 1`.
    pub fn prem(&self, f: &Poly, v: VarId) -> Result<PseudoDivision, ExprError> {
        let df = f.degree_in(v);
        if df == 0 {
            return Err(ExprError::MissingVariable(v));
        }
        let lc = f.leading_coeff(v);
        let mut remainder = self.clone();
        let mut quotient = Poly::zero();
        let mut power = 0;
        while !remainder.is_zero() && remainder.degree_in(v) >= df {
            let dr = remainder.degree_in(v);
            let step = &remainder.leading_coeff(v) * &Poly::var_pow(v, dr - df);
            remainder = &(&lc * &remainder) - &(&step * f);
            quotient = &(&lc * &quotient) + &step;
            power += 1;
        }
        Ok(PseudoDivision {
            remainder,
            quotient,
            power,
        })
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            if !dm.divides(rm) {
                return None;
            }
            let m = dm.quotient_of(rm);
            let c = rc / dc;
            rem -= &d.mul_monomial(&c, &m);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Greatest monomial dividing every term; `1` for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// Terms sorted in descending graded-lex order (printing order).
    pub fn terms_grlex_desc(&self) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }
}

impl From<VarId> for Poly {
    fn from(v: VarId) -> Self {
        Poly::var(v)
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl std::ops::AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form: descending graded-lex terms, `*` between factors,
/// `^` for powers, rational coefficients as `p/q`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms_grlex_desc().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rat(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(VarId::X)
    }
    fn y() -> Poly {
        Poly::var(VarId::Y)
    }
    fn y1() -> Poly {
        Poly::var(VarId::Y1)
    }
    fn y2() -> Poly {
        Poly::var(VarId::Y2)
    }
    fn k(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn add_examples() {
        assert_eq!(&(&x() + &y()) + &(-&x()), y());
        assert_eq!(&Poly::zero() + &x(), x());
        let sq = &y1() * &y1();
        assert_eq!(&sq + &(&k(2) * &sq), &k(3) * &sq);
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &(&x() * &y()) - &k(7);
        let z = &p + &(-&p);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn mul_examples() {
        let f = &(&y() * &y2()) - &(&k(2) * &(&y1() * &y1()));
        let expect = &(&(&y() * &y()) * &y2()) - &(&k(2) * &(&y() * &(&y1() * &y1())));
        assert_eq!(&y() * &f, expect);
        assert!((&f * &Poly::zero()).is_zero());
        assert_eq!(
            &(&x() + &y()) * &(&x() - &y()),
            &(&x() * &x()) - &(&y() * &y())
        );
    }

    #[test]
    fn pdiff_examples() {
        let f = &(&y() * &y2()) - &(&k(2) * &(&y1() * &y1()));
        assert_eq!(f.pdiff(VarId::Y1), &k(-4) * &y1());
        assert!(Poly::var_pow(VarId::X, 3).pdiff(VarId::Y).is_zero());
        assert_eq!(
            (&Poly::var_pow(VarId::X, 2) * &y()).pdiff(VarId::X),
            &k(2) * &(&x() * &y())
        );
    }

    #[test]
    fn subst_examples() {
        let c = Poly::var_pow(VarId::Y1, 3);
        assert!((&y() - &c).subst(VarId::Y, &c).is_zero());
        assert_eq!((&x() + &y()).subst(VarId::Y, &Poly::zero()), x());
        let s = &x() + &y();
        assert_eq!(
            Poly::var_pow(VarId::Y1, 2).subst(VarId::Y1, &s),
            &(&(&x() * &x()) + &(&k(2) * &(&x() * &y()))) + &(&y() * &y())
        );
    }

    fn check_prem(g: &Poly, f: &Poly, v: VarId) -> PseudoDivision {
        let pd = g.prem(f, v).unwrap();
        let lc = f.leading_coeff(v);
        let mut lhs = g.clone();
        for _ in 0..pd.power {
            lhs = &lc * &lhs;
        }
        assert_eq!(lhs, &(&pd.quotient * f) + &pd.remainder);
        assert!(pd.remainder.is_zero() || pd.remainder.degree_in(v) < f.degree_in(v));
        pd
    }

    #[test]
    fn prem_exact_division() {
        let pd = check_prem(&(&y1() * &y1()), &y1(), VarId::Y1);
        assert!(pd.remainder.is_zero());
        assert_eq!(pd.quotient, y1());
        assert!(pd.power <= 1);
    }

    #[test]
    fn prem_hand_example() {
        // lc = y; y^2 (y2^2 + x) = (y y2 + 2 y1^2)(y y2 - 2 y1^2) + 4 y1^4 + x y^2
        let g = &(&y2() * &y2()) + &x();
        let f = &(&y() * &y2()) - &(&k(2) * &(&y1() * &y1()));
        let pd = check_prem(&g, &f, VarId::Y2);
        assert_eq!(pd.power, 2);
        assert_eq!(
            pd.remainder,
            &(&k(4) * &Poly::var_pow(VarId::Y1, 4)) + &(&x() * &(&y() * &y()))
        );
    }

    #[test]
    fn prem_self_reduces_to_zero() {
        let f = &(&(&x() * &y()) * &y2()) + &(&y1() * &y1());
        assert!(check_prem(&f, &f, VarId::Y2).remainder.is_zero());
    }

    #[test]
    fn prem_rejects_missing_variable() {
        assert_eq!(
            x().prem(&y(), VarId::Y2),
            Err(ExprError::MissingVariable(VarId::Y2))
        );
    }

    #[test]
    fn prem_lower_degree_is_untouched() {
        let pd = check_prem(&x(), &y2(), VarId::Y2);
        assert_eq!(pd.power, 0);
        assert_eq!(pd.remainder, x());
    }

    #[test]
    fn div_exact_works_and_rejects() {
        let f = &(&y() * &y2()) - &(&k(2) * &(&y1() * &y1()));
        let g = &(&k(3) * &y()) * &f;
        assert_eq!(g.div_exact(&f), Some(&k(3) * &y()));
        assert_eq!((&g + &x()).div_exact(&f), None);
        assert_eq!(g.div_exact(&Poly::zero()), None);
    }

    #[test]
    fn monomial_content() {
        let p = &(&(&x() * &y()) * &y2()) + &(&x() * &(&y() * &y()));
        assert_eq!(p.monomial_content(), Monomial::from_exps(&[1, 1]));
    }

    #[test]
    fn display_order() {
        let f = &(&y() * &y2()) - &(&k(2) * &(&y1() * &y1()));
        assert_eq!(f.to_string(), "y*y2 - 2*y1^2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(x().to_string(), "x");
        let s = &(&x() + &y()) * &(&x() + &y());
        assert_eq!(s.to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(Poly::constant(rat(-2, 3)).to_string(), "-2/3");
        assert_eq!(Poly::var(VarId::unknown(3)).to_string(), "c_3");
    }
}
