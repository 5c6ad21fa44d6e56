#![allow(dead_code)]

use odesym::exprcore::{Monomial, Poly, Rat};
use odesym::jet::PointField;
use odesym::parse::OdeInput;
use proptest::prelude::*;

pub fn rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |r| *r != Rat::from_integer(0.into()))
}

/// Random polynomial in the first `nvars` jet variables.
pub fn poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), rat()),
        0..=max_terms,
    )
    .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e), c))))
}

/// Polynomial in `x, y` of total degree at most `deg`.
pub fn plane_poly(deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0..=deg, 0..=deg), rat()), 0..=max_terms).prop_map(move |ts| {
        Poly::from_terms(ts.into_iter().map(|((a, b), c)| {
            let b = b.min(deg - a);
            (Monomial::from_exps(&[a, b]), c)
        }))
    })
}

pub fn field(deg: u32) -> impl Strategy<Value = PointField> {
    (plane_poly(deg, 4), plane_poly(deg, 4)).prop_map(|(xi, eta)| PointField::new(xi, eta))
}

/// Random implicit ODE `A * top + B = 0` with `A != 0`; second order when
/// `second` is set, otherwise first order.
pub fn ode() -> impl Strategy<Value = OdeInput> {
    (any::<bool>(), poly(2, 1, 3), poly(3, 2, 3)).prop_filter_map("degenerate", |(second, a, b)| {
        if a.is_zero() {
            return None;
        }
        let (top, b) = if second {
            (odesym::VarId::Y2, b)
        } else {
            (odesym::VarId::Y1, b.coeff_in(odesym::VarId::Y1, 0))
        };
        OdeInput::new(&(&a * &Poly::var(top)) + &b).ok()
    })
}
