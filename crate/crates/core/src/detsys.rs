//! Determining systems for polynomial point symmetries.
//!
//! A field `X` is a symmetry of `F = 0` when the prolonged action
//! `pr X (F)` vanishes on `{F = 0}`. That condition is tested as a zero
//! pseudo-remainder of `pr X (F)` modulo `F` in the top jet variable (`y2`
//! for second order, `y1` for first order). With a polynomial ansatz for
//! `xi, eta` the remainder is linear in the unknown coefficients, and its
//! coefficients with respect to `x, y, y1, y2` form a homogeneous linear
//! system.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exprcore::{ExprError, Monomial, Poly, Rat, VarId};
use crate::jet::{apply, prolong, PointField};
use crate::linalg::{canonical_basis, nullspace, RatMatrix};
use crate::parse::OdeInput;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetsysError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("reduced defect is not linear homogeneous in the unknowns (term {0})")]
    NotLinear(String),
    #[error("field to verify contains ansatz unknowns")]
    NotConcrete,
}

/// Outcome of checking one concrete field.
///
/// On success `lc^power * pr X (F) = cofactor * F` holds exactly, where `lc`
/// is the leading coefficient of `F` in its top jet variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyResult {
    pub is_symmetry: bool,
    pub cofactor: Poly,
    pub power: u32,
    /// The pseudo-remainder; zero exactly when `is_symmetry`.
    pub defect: Poly,
}

/// Generic field of degree `<= d` with one unknown per coefficient.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub degree: u32,
    /// Monomials in `x, y` of degree `<= d`: by degree, then by decreasing
    /// power of `x`.
    pub monomials: Vec<Monomial>,
    pub field: PointField,
}

impl Ansatz {
    pub fn new(degree: u32) -> Self {
        let monomials: Vec<Monomial> = (0..=degree)
            .flat_map(|t| (0..=t).rev().map(move |i| Monomial::from_exps(&[i, t - i])))
            .collect();
        let n = monomials.len();
        let combo = |offset: usize| {
            Poly::from_terms(monomials.iter().enumerate().map(|(i, m)| {
                (
                    m.mul(&Monomial::var(VarId::unknown(offset + i), 1)),
                    Rat::one(),
                )
            }))
        };
        let field = PointField::new(combo(0), combo(n));
        Ansatz {
            degree,
            monomials,
            field,
        }
    }

    /// `(d+1)(d+2)`: coefficients of `xi` followed by those of `eta`.
    pub fn unknown_count(&self) -> usize {
        2 * self.monomials.len()
    }

    /// The concrete field whose coefficient vector is `v`.
    pub fn field_from_vector(&self, v: &[Rat]) -> PointField {
        let n = self.monomials.len();
        assert_eq!(v.len(), 2 * n);
        let comp = |coeffs: &[Rat]| {
            Poly::from_terms(self.monomials.iter().cloned().zip(coeffs.iter().cloned()))
        };
        PointField::new(comp(&v[..n]), comp(&v[n..]))
    }
}

/// Homogeneous linear system whose nullspace is the degree-`<= d` part of
/// the symmetry algebra.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub ansatz: Ansatz,
    /// One row per jet monomial of the reduced defect.
    pub row_monomials: Vec<Monomial>,
    pub matrix: RatMatrix,
}

fn defect_division(
    ode: &OdeInput,
    field: &PointField,
) -> Result<crate::exprcore::PseudoDivision, DetsysError> {
    let acted = apply(&prolong(field, ode.order), &ode.f);
    Ok(acted.prem(&ode.f, ode.top_var())?)
}

/// Pseudo-remainder of `pr X (F)` modulo `F` in the top jet variable.
///
/// `field` may be concrete or an ansatz carrying unknowns.
pub fn symmetry_defect(ode: &OdeInput, field: &PointField) -> Result<Poly, DetsysError> {
    Ok(defect_division(ode, field)?.remainder)
}

/// Checks a concrete field and, on success, returns the cofactor with the
/// smallest power of the leading coefficient.
pub fn verify(ode: &OdeInput, field: &PointField) -> Result<VerifyResult, DetsysError> {
    if [&field.xi, &field.eta]
        .iter()
        .any(|p| p.vars().iter().any(|v| !v.is_jet()))
    {
        return Err(DetsysError::NotConcrete);
    }
    let pd = defect_division(ode, field)?;
    let is_symmetry = pd.remainder.is_zero();
    let mut cofactor = pd.quotient;
    let mut power = pd.power;
    if is_symmetry {
        let lc = ode.f.leading_coeff(ode.top_var());
        while power > 0 {
            match cofactor.div_exact(&lc) {
                Some(q) => {
                    cofactor = q;
                    power -= 1;
                }
                None => break,
            }
        }
    }
    Ok(VerifyResult {
        is_symmetry,
        cofactor,
        power,
        defect: pd.remainder,
    })
}

/// Collects the coefficients of the reduced ansatz defect into a matrix.
pub fn assemble_system(ode: &OdeInput, d: u32) -> Result<DeterminingSystem, DetsysError> {
    let ansatz = Ansatz::new(d);
    let cols = ansatz.unknown_count();
    let defect = symmetry_defect(ode, &ansatz.field)?;
    let mut rows: BTreeMap<Monomial, Vec<Rat>> = BTreeMap::new();
    for (m, c) in defect.terms() {
        let unknown = m.restrict(|v| !v.is_jet());
        let mut it = unknown.iter();
        let col = match (it.next(), it.next()) {
            (Some((v, 1)), None) => v.unknown_index().expect("non-jet variable is an unknown"),
            _ => {
                return Err(DetsysError::NotLinear(
                    Poly::term(c.clone(), m.clone()).to_string(),
                ))
            }
        };
        rows.entry(m.restrict(VarId::is_jet))
            .or_insert_with(|| vec![Rat::zero(); cols])[col] = c.clone();
    }
    let (row_monomials, rows): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let matrix = RatMatrix::from_rows(cols, rows).expect("rows have one entry per unknown");
    Ok(DeterminingSystem {
        ansatz,
        row_monomials,
        matrix,
    })
}

/// Canonical basis of the polynomial symmetries of degree `<= d`.
///
/// The nullspace of the determining system is brought to reduced echelon
/// form (pivot coefficient 1, coefficients of `xi` ordered before those of
/// `eta`), so the output is identical across runs.
pub fn solve_symmetries(ode: &OdeInput, d: u32) -> Result<Vec<PointField>, DetsysError> {
    let sys = assemble_system(ode, d)?;
    let cols = sys.matrix.cols();
    let basis =
        canonical_basis(cols, &nullspace(&sys.matrix)).expect("nullspace vectors have full length");
    Ok(basis
        .iter()
        .map(|v| sys.ansatz.field_from_vector(v))
        .collect())
}
