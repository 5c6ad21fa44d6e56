//! Jet-space machinery on `J2 = (x, y, y1, y2)`.
//!
//! Prolongation uses the two-step recursion
//!
//! ```text
//! eta1 = D(eta)  - y1 * D(xi)
//! eta2 = D(eta1) - y2 * D(xi)
//! ```
//!
//! where `D = d/dx + y1 d/dy + y2 d/dy1` is the total derivative truncated
//! at second order.

use std::fmt;

use thiserror::Error;

use crate::exprcore::{Poly, Rat, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("total derivative of an expression involving y2 needs y3")]
    SecondOrderInput,
}

/// A point vector field `xi(x,y) d/dx + eta(x,y) d/dy`.
///
/// Components may carry ansatz unknowns `c_i` as coefficients; they never
/// contain `y1` or `y2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointField {
    pub xi: Poly,
    pub eta: Poly,
}

impl PointField {
    pub fn new(xi: Poly, eta: Poly) -> Self {
        debug_assert!(
            ![&xi, &eta]
                .iter()
                .any(|p| p.contains(VarId::Y1) || p.contains(VarId::Y2)),
            "point field components must not involve jet variables"
        );
        PointField { xi, eta }
    }

    pub fn zero() -> Self {
        PointField::default()
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.is_zero()
    }

    /// Directional derivative `xi * g_x + eta * g_y`.
    pub fn apply(&self, g: &Poly) -> Poly {
        &(&self.xi * &g.pdiff(VarId::X)) + &(&self.eta * &g.pdiff(VarId::Y))
    }

    pub fn scale(&self, c: &Rat) -> PointField {
        PointField {
            xi: self.xi.scale(c),
            eta: self.eta.scale(c),
        }
    }

    pub fn add(&self, other: &PointField) -> PointField {
        PointField {
            xi: &self.xi + &other.xi,
            eta: &self.eta + &other.eta,
        }
    }

    /// Highest total degree of the two components.
    pub fn degree(&self) -> u32 {
        self.xi.total_degree().max(self.eta.total_degree())
    }
}

impl fmt::Display for PointField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.xi, self.eta)
    }
}

/// A point field lifted to first or second jets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: PointField,
    pub eta1: Poly,
    /// Present for second-order prolongations only.
    pub eta2: Option<Poly>,
}

impl ProlongedField {
    /// Components along `(x, y, y1, y2)`; a missing `eta2` reads as zero.
    pub fn components(&self) -> [Poly; 4] {
        [
            self.base.xi.clone(),
            self.base.eta.clone(),
            self.eta1.clone(),
            self.eta2.clone().unwrap_or_default(),
        ]
    }
}

/// `D p = p_x + y1 p_y + y2 p_y1` for `p` free of `y2`.
pub fn total_derivative(p: &Poly) -> Result<Poly, JetError> {
    if p.contains(VarId::Y2) {
        return Err(JetError::SecondOrderInput);
    }
    let mut out = p.pdiff(VarId::X);
    out += &(&Poly::var(VarId::Y1) * &p.pdiff(VarId::Y));
    out += &(&Poly::var(VarId::Y2) * &p.pdiff(VarId::Y1));
    Ok(out)
}

/// Prolongs `field` to order 1 or 2 (any order other than 1 means 2).
pub fn prolong(field: &PointField, order: u8) -> ProlongedField {
    let d = |p: &Poly| total_derivative(p).expect("point field and eta1 are free of y2");
    let dxi = d(&field.xi);
    let eta1 = &d(&field.eta) - &(&Poly::var(VarId::Y1) * &dxi);
    let eta2 = (order != 1).then(|| &d(&eta1) - &(&Poly::var(VarId::Y2) * &dxi));
    ProlongedField {
        base: field.clone(),
        eta1,
        eta2,
    }
}

/// `xi f_x + eta f_y + eta1 f_y1 + eta2 f_y2`.
///
/// A first-order prolongation only acts on polynomials free of `y2`.
pub fn apply(pf: &ProlongedField, f: &Poly) -> Poly {
    debug_assert!(
        pf.eta2.is_some() || !f.contains(VarId::Y2),
        "first-order prolongation applied to a second-order polynomial"
    );
    let mut out = pf.base.apply(f);
    out += &(&pf.eta1 * &f.pdiff(VarId::Y1));
    if let Some(eta2) = &pf.eta2 {
        out += &(eta2 * &f.pdiff(VarId::Y2));
    }
    out
}

/// Commutator of two prolonged fields viewed as first-order differential
/// operators on `(x, y, y1, y2)`, returned as its four components.
pub fn prolonged_commutator(a: &ProlongedField, b: &ProlongedField) -> [Poly; 4] {
    let ca = a.components();
    let cb = b.components();
    let act = |comps: &[Poly; 4], g: &Poly| {
        [VarId::X, VarId::Y, VarId::Y1, VarId::Y2]
            .iter()
            .zip(comps)
            .fold(Poly::zero(), |acc, (v, c)| &acc + &(c * &g.pdiff(*v)))
    };
    std::array::from_fn(|i| &act(&ca, &cb[i]) - &act(&cb, &ca[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_poly};

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&p("y")).unwrap(), p("y1"));
        assert_eq!(total_derivative(&p("x*y1")).unwrap(), p("y1 + x*y2"));
        assert!(total_derivative(&p("7")).unwrap().is_zero());
        assert_eq!(total_derivative(&p("y2")), Err(JetError::SecondOrderInput));
    }

    #[test]
    fn prolong_examples() {
        let s = prolong(&parse_field("0, y").unwrap(), 2);
        assert_eq!((s.eta1, s.eta2), (p("y1"), Some(p("y2"))));

        let s = prolong(&parse_field("x^2, -x*y").unwrap(), 2);
        assert_eq!(s.eta1, p("-y - 3*x*y1"));
        assert_eq!(s.eta2, Some(p("-4*y1 - 5*x*y2")));

        let s = prolong(&parse_field("1, 0").unwrap(), 2);
        assert!(s.eta1.is_zero());
        assert_eq!(s.eta2, Some(Poly::zero()));
    }

    #[test]
    fn first_order_prolongation_stops_at_eta1() {
        let s = prolong(&parse_field("x, y^2").unwrap(), 1);
        assert_eq!(s.eta1, p("2*y*y1 - y1"));
        assert!(s.eta2.is_none());
    }

    #[test]
    fn apply_examples() {
        let f = p("y*y2 - 2*y1^2");
        let s = prolong(&parse_field("0, y^2").unwrap(), 2);
        assert_eq!(apply(&s, &f), &p("3*y") * &f);

        let t = prolong(&parse_field("1, 0").unwrap(), 2);
        assert!(apply(&t, &p("y2")).is_zero());

        let z = prolong(&PointField::zero(), 2);
        assert!(apply(&z, &f).is_zero());
    }

    #[test]
    fn eta2_is_affine_in_y2() {
        let s = prolong(&parse_field("x^3*y + y^2, x*y^3 - 2*x^2").unwrap(), 2);
        assert!(s.eta2.unwrap().degree_in(VarId::Y2) <= 1);
    }
}
