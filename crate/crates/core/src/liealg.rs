//! Brackets of point fields and structure data of finite-dimensional
//! algebras spanned by them.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exprcore::{Monomial, Rat};
use crate::jet::PointField;
use crate::linalg::{canonical_basis, rank, solve, span_equal, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis is linearly dependent (rank {rank} < {len})")]
    Dependent { rank: usize, len: usize },
}

/// `[X, Y] = (X(xi_Y) - Y(xi_X)) d/dx + (X(eta_Y) - Y(eta_X)) d/dy`.
pub fn bracket(a: &PointField, b: &PointField) -> PointField {
    PointField::new(
        &a.apply(&b.xi) - &b.apply(&a.xi),
        &a.apply(&b.eta) - &b.apply(&a.eta),
    )
}

/// Coordinate key of a field coefficient: component (0 = xi, 1 = eta) and
/// monomial.
type Key = (u8, Monomial);

fn keys_of(f: &PointField) -> impl Iterator<Item = Key> + '_ {
    let xi = f.xi.terms().map(|(m, _)| (0u8, m.clone()));
    let eta = f.eta.terms().map(|(m, _)| (1u8, m.clone()));
    xi.chain(eta)
}

fn coords(f: &PointField, keys: &[Key]) -> Vec<Rat> {
    keys.iter()
        .map(|(c, m)| {
            if *c == 0 {
                f.xi.coeff(m)
            } else {
                f.eta.coeff(m)
            }
        })
        .collect()
}

/// Coefficient vectors of `fields` over the union of their monomials.
pub fn field_vectors(fields: &[PointField]) -> Vec<Vec<Rat>> {
    let keys: Vec<Key> = fields
        .iter()
        .flat_map(keys_of)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    fields.iter().map(|f| coords(f, &keys)).collect()
}

/// Whether two families of fields span the same space over the rationals.
pub fn fields_span_equal(a: &[PointField], b: &[PointField]) -> bool {
    let all: Vec<PointField> = a.iter().chain(b).cloned().collect();
    let vecs = field_vectors(&all);
    let (va, vb) = vecs.split_at(a.len());
    span_equal(va, vb).expect("vectors share one coordinate system")
}

/// `c[i][j][k]` with `[X_i, X_j] = sum_k c[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Rat>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![Rat::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        let n = self.dim;
        self.c[(i * n + j) * n + k] = v;
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| *self.get(i, j, k) == -self.get(j, i, k).clone()))
        })
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        let term = |a: usize, b: usize, c: usize, k: usize| {
            (0..n).fold(Rat::zero(), |acc, m| {
                acc + self.get(a, b, m) * self.get(m, c, k)
            })
        };
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|l| {
                    (0..n)
                        .all(|k| (term(i, j, l, k) + term(j, l, i, k) + term(l, i, j, k)).is_zero())
                })
            })
        })
    }

    /// Bracket of two elements given by coordinates.
    pub fn bracket_coords(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let n = self.dim;
        let mut out = vec![Rat::zero(); n];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let w = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }
}

/// Killing matrix `B(i, j) = tr(ad X_i . ad X_j)`.
pub fn killing_form(sc: &StructureConstants) -> RatMatrix {
    let n = sc.dim();
    let mut b = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut t = Rat::zero();
            for k in 0..n {
                for l in 0..n {
                    let a = sc.get(i, l, k);
                    if !a.is_zero() {
                        t += a * sc.get(j, k, l);
                    }
                }
            }
            b.set(i, j, t);
        }
    }
    b
}

pub fn killing_rank(sc: &StructureConstants) -> usize {
    rank(&killing_form(sc))
}

/// Dimensions of `g, [g,g], [[g,g],[g,g]], ...`, stopping once a term
/// repeats the previous dimension (the repeat is included) or reaches 0.
pub fn derived_dims(sc: &StructureConstants) -> Vec<usize> {
    let n = sc.dim();
    let mut current: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if k == i {
                        Rat::from_integer(1.into())
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut dims = vec![n];
    while dims.len() <= n && !current.is_empty() {
        let mut brackets = Vec::new();
        for (a, u) in current.iter().enumerate() {
            for v in &current[a + 1..] {
                brackets.push(sc.bracket_coords(u, v));
            }
        }
        let next = canonical_basis(n, &brackets).expect("coordinates have length n");
        let stable = next.len() == current.len();
        dims.push(next.len());
        current = next;
        if stable {
            break;
        }
    }
    dims
}

/// Structure summary of a span of symmetry fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub dimension: usize,
    pub closed: bool,
    #[serde(skip)]
    pub structure: Option<StructureConstants>,
    /// Rank of the Killing form; present when closed.
    pub killing_rank: Option<usize>,
    /// Derived series dimensions; empty when not closed.
    pub derived_dims: Vec<usize>,
    /// Index pairs `(i, j)` whose bracket leaves the span.
    pub escaping_pairs: Vec<(usize, usize)>,
}

impl AlgebraReport {
    /// Semisimplicity evidence: nondegenerate Killing form and a perfect
    /// algebra.
    pub fn looks_semisimple(&self) -> bool {
        self.closed
            && self.killing_rank == Some(self.dimension)
            && self.derived_dims.get(1) == Some(&self.dimension)
    }
}

/// Expresses every bracket of `basis` in the basis itself.
pub fn closure(basis: &[PointField]) -> Result<AlgebraReport, LieError> {
    let n = basis.len();
    let keys: Vec<Key> = basis
        .iter()
        .flat_map(keys_of)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut m = RatMatrix::zeros(keys.len(), n);
    for (j, f) in basis.iter().enumerate() {
        for (i, v) in coords(f, &keys).into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    let r = rank(&m);
    if r < n {
        return Err(LieError::Dependent { rank: r, len: n });
    }
    let key_set: BTreeSet<&Key> = keys.iter().collect();
    let mut sc = StructureConstants::zeros(n);
    let mut escaping = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let br = bracket(&basis[i], &basis[j]);
            let inside = keys_of(&br).all(|k| key_set.contains(&k));
            let sol = if inside {
                solve(&m, &coords(&br, &keys))
            } else {
                None
            };
            match sol {
                Some(x) => {
                    for (k, v) in x.into_iter().enumerate() {
                        sc.set(j, i, k, -v.clone());
                        sc.set(i, j, k, v);
                    }
                }
                None => escaping.push((i, j)),
            }
        }
    }
    if !escaping.is_empty() {
        return Ok(AlgebraReport {
            dimension: n,
            closed: false,
            structure: None,
            killing_rank: None,
            derived_dims: Vec::new(),
            escaping_pairs: escaping,
        });
    }
    Ok(AlgebraReport {
        dimension: n,
        closed: true,
        killing_rank: Some(killing_rank(&sc)),
        derived_dims: derived_dims(&sc),
        structure: Some(sc),
        escaping_pairs: escaping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detsys::solve_symmetries;
    use crate::parse::{parse_field, parse_ode};

    fn f(s: &str) -> PointField {
        parse_field(s).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&f("1, 0"), &f("x, 0")), f("1, 0"));
        assert_eq!(bracket(&f("1, 0"), &f("x^2, -x*y")), f("2*x, -y"));
        assert_eq!(bracket(&f("x, 0"), &f("0, x*y")), f("0, x*y"));
        assert!(bracket(&f("x^2 + y, x*y^3"), &f("x^2 + y, x*y^3")).is_zero());
    }

    #[test]
    fn flat_model_is_semisimple() {
        let basis = solve_symmetries(&parse_ode("y''=0").unwrap(), 2).unwrap();
        let r = closure(&basis).unwrap();
        assert!(r.closed);
        assert_eq!(r.dimension, 8);
        assert_eq!(r.killing_rank, Some(8));
        assert_eq!(r.derived_dims, vec![8, 8]);
        assert!(r.looks_semisimple());
        let sc = r.structure.unwrap();
        assert!(sc.is_antisymmetric());
        assert!(sc.satisfies_jacobi());
    }

    #[test]
    fn two_dimensional_nonabelian() {
        let r = closure(&[f("1, 0"), f("2/3*x, y")]).unwrap();
        assert!(r.closed);
        assert_eq!(r.killing_rank, Some(1));
        assert_eq!(r.derived_dims, vec![2, 1, 0]);
        assert_eq!(killing_rank(r.structure.as_ref().unwrap()), 1);
    }

    #[test]
    fn translations_are_abelian() {
        let r = closure(&[f("1, 0"), f("0, 1")]).unwrap();
        assert!(r.closed);
        assert_eq!(r.killing_rank, Some(0));
        assert_eq!(r.derived_dims, vec![2, 0]);
    }

    #[test]
    fn escaping_brackets_reported() {
        let r = closure(&[f("1, 0"), f("x^2, 0")]).unwrap();
        assert!(!r.closed);
        assert_eq!(r.escaping_pairs, vec![(0, 1)]);
        assert_eq!(r.killing_rank, None);
    }

    #[test]
    fn dependent_basis_rejected() {
        assert_eq!(
            closure(&[f("x, y"), f("2*x, 2*y")]),
            Err(LieError::Dependent { rank: 1, len: 2 })
        );
    }

    #[test]
    fn span_of_fields() {
        assert!(fields_span_equal(
            &[f("1, 0"), f("0, y")],
            &[f("1, y"), f("1, -y")]
        ));
        assert!(!fields_span_equal(&[f("1, 0")], &[f("x, 0")]));
    }
}
