//! Grid-tagged formal operators: exact composition, commutators, application
//! to Laurent polynomials, and canonical-form equality.
//!
//! An operator is a merged sum of `coefficient × word` terms. The word is an
//! integer: `T^k` (linear grid, `x -> x+k`), `T̂^k` (q-linear, `z -> q^k z`),
//! or `(d/dx)^k` with `k >= 0` on the continuum. Composition uses the exact
//! conjugation rules `T^k c(x) = c(x+k) T^k`, `T̂^k c(z) = c(q^k z) T̂^k` and
//! the Leibniz rule, so canonical forms are unique and equality is term-wise.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::field::Field;
use crate::poly::{binom, LaurentPoly, Var};
use crate::Result;

/// Derivative words stay well below this; quadratic combinations of
/// first-order operators need at most 2.
const MAX_DERIVATIVE_ORDER: i64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum GridKind<K> {
    Continuum,
    Linear,
    QLinear(K),
}

impl<K: Field> GridKind<K> {
    pub fn var(&self) -> Var {
        match self {
            GridKind::QLinear(_) => Var::Z,
            _ => Var::X,
        }
    }

    pub fn q(&self) -> Option<&K> {
        match self {
            GridKind::QLinear(q) => Some(q),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GridKind::Continuum => "continuum",
            GridKind::Linear => "linear",
            GridKind::QLinear(_) => "qlinear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOperator<K> {
    grid: GridKind<K>,
    terms: BTreeMap<i64, LaurentPoly<K>>,
}

impl<K: Field> GridOperator<K> {
    pub fn zero(grid: GridKind<K>) -> Self {
        GridOperator {
            grid,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(grid: GridKind<K>) -> Self {
        let var = grid.var();
        GridOperator::term(grid, 0, LaurentPoly::one(var))
    }

    /// A single `coefficient × word` term.
    pub fn term(grid: GridKind<K>, word: i64, coeff: LaurentPoly<K>) -> Self {
        assert_eq!(coeff.var(), grid.var(), "coefficient in the wrong variable");
        if matches!(grid, GridKind::Continuum) {
            assert!(
                (0..=MAX_DERIVATIVE_ORDER).contains(&word),
                "derivative order {word} outside supported range"
            );
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        GridOperator { grid, terms }
    }

    /// Multiplication by a polynomial (word 0).
    pub fn mul_by(grid: GridKind<K>, coeff: LaurentPoly<K>) -> Self {
        GridOperator::term(grid, 0, coeff)
    }

    /// A bare shift `T^k` / `T̂^k`, or `(d/dx)^k` on the continuum.
    pub fn word(grid: GridKind<K>, k: i64) -> Self {
        let var = grid.var();
        GridOperator::term(grid, k, LaurentPoly::one(var))
    }

    pub fn grid(&self) -> &GridKind<K> {
        &self.grid
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &LaurentPoly<K>)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: i64) -> LaurentPoly<K> {
        self.terms
            .get(&word)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.grid.var()))
    }

    /// Largest |word| in the operator.
    pub fn max_word(&self) -> i64 {
        self.terms.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    fn add_part(&mut self, word: i64, coeff: LaurentPoly<K>) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&word) {
            None => {
                self.terms.insert(word, coeff);
            }
            Some(old) => {
                let s = old.add(&coeff);
                if !s.is_zero() {
                    self.terms.insert(word, s);
                }
            }
        }
    }

    fn assert_grid(&self, rhs: &Self) {
        assert_eq!(self.grid, rhs.grid, "operators on different grids");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_grid(rhs);
        let mut out = self.clone();
        for (&w, c) in &rhs.terms {
            out.add_part(w, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        GridOperator {
            grid: self.grid.clone(),
            terms: self.terms.iter().map(|(&w, c)| (w, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return GridOperator::zero(self.grid.clone());
        }
        GridOperator {
            grid: self.grid.clone(),
            terms: self.terms.iter().map(|(&w, p)| (w, p.scale(c))).collect(),
        }
    }

    /// Exact normal-form composition `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        self.assert_grid(rhs);
        let mut out = GridOperator::zero(self.grid.clone());
        for (&j, a) in &self.terms {
            for (&k, b) in &rhs.terms {
                match &self.grid {
                    GridKind::Linear => {
                        out.add_part(j + k, a.mul(&b.shift_arg(j)));
                    }
                    GridKind::QLinear(q) => {
                        out.add_part(j + k, a.mul(&b.scale_arg(&q.powi(j))));
                    }
                    GridKind::Continuum => {
                        // d^j ∘ c = sum_i C(j,i) c^(i) d^(j-i)
                        let mut deriv = b.clone();
                        for i in 0..=j {
                            let w = K::from_i64(binom(j as u32, i as u32));
                            out.add_part(j - i + k, a.mul(&deriv.scale(&w)));
                            if i < j {
                                deriv = deriv.derivative();
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.compose(rhs).add(&rhs.compose(self))
    }

    /// Exact image of a Laurent polynomial.
    pub fn apply(&self, p: &LaurentPoly<K>) -> Result<LaurentPoly<K>> {
        if p.var() != self.grid.var() {
            return Err(Error::VariableMismatch {
                expected: self.grid.var().to_string(),
                found: p.var().to_string(),
            });
        }
        let mut out = LaurentPoly::zero(p.var());
        for (&k, c) in &self.terms {
            let shifted = match &self.grid {
                GridKind::Linear => p.shift_arg(k),
                GridKind::QLinear(q) => p.scale_arg(&q.powi(k)),
                GridKind::Continuum => {
                    let mut d = p.clone();
                    for _ in 0..k {
                        d = d.derivative();
                    }
                    d
                }
            };
            out = out.add(&c.mul(&shifted));
        }
        Ok(out)
    }

    /// Canonical-form equality; exact, no sampling.
    pub fn equals(&self, rhs: &Self) -> bool {
        self.grid == rhs.grid && self.terms == rhs.terms
    }

    /// For n = 0..=nmax, `deg(A · v^n) - n`, with `None` encoding the zero
    /// image.
    pub fn degree_profile(&self, nmax: i64) -> Vec<Option<i64>> {
        let var = self.grid.var();
        (0..=nmax)
            .map(|n| {
                let img = self
                    .apply(&LaurentPoly::monomial(var, n, K::one()))
                    .expect("monomial in the grid variable");
                img.degree().map(|d| d - n)
            })
            .collect()
    }
}

impl<K: Field> fmt::Display for GridOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let shift_sym = match self.grid {
            GridKind::Continuum => "d",
            _ => "T",
        };
        let mut first = true;
        for (&w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w == 0 {
                write!(f, "[{c}]")?;
            } else if matches!(self.grid, GridKind::Continuum) {
                write!(f, "[{c}]*{shift_sym}^{w}")?;
            } else {
                write!(f, "[{c}]*{shift_sym}^({w})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    type P = LaurentPoly<Scalar>;
    type O = GridOperator<Scalar>;

    fn lin() -> GridKind<Scalar> {
        GridKind::Linear
    }

    fn xg() -> P {
        P::gen(Var::X)
    }

    #[test]
    fn linear_shift_applied_to_square() {
        // T+ x^2 = (x+1)^2
        let t_plus = O::word(lin(), 1);
        let img = t_plus.apply(&xg().mul(&xg())).unwrap();
        let expected = P::from_terms(
            Var::X,
            [(2, Scalar::int(1)), (1, Scalar::int(2)), (0, Scalar::int(1))],
        );
        assert_eq!(img, expected);
    }

    #[test]
    fn qlinear_shift_scales_monomial() {
        let q = Scalar::var(crate::scalar::Sym::Q);
        let grid = GridKind::QLinear(q.clone());
        let t_plus = O::word(grid, 1);
        let z3 = P::monomial(Var::Z, 3, Scalar::int(1));
        let img = t_plus.apply(&z3).unwrap();
        assert_eq!(img.coeff(3), q.pow(3));
    }

    #[test]
    fn continuum_derivative_of_cube() {
        let d = O::word(GridKind::Continuum, 1);
        let x3 = P::monomial(Var::X, 3, Scalar::int(1));
        assert_eq!(
            d.apply(&x3).unwrap(),
            P::monomial(Var::X, 2, Scalar::int(3))
        );
    }

    #[test]
    fn conjugation_rule_on_linear_grid() {
        // T+ ∘ (x·) = (x+1)· ∘ T+
        let t_plus = O::word(lin(), 1);
        let mul_x = O::mul_by(lin(), xg());
        let lhs = t_plus.compose(&mul_x);
        let rhs = O::term(lin(), 1, xg().shift_arg(1));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn canonical_commutator() {
        // [d/dx, x·] = 1
        let d = O::word(GridKind::Continuum, 1);
        let mul_x = O::mul_by(GridKind::Continuum, P::gen(Var::X));
        let c = d.commutator(&mul_x);
        assert!(c.equals(&O::identity(GridKind::Continuum)));
    }

    #[test]
    fn qlinear_conjugation() {
        // T̂+ ∘ (z·) = (q z)· ∘ T̂+
        let q = Scalar::var(crate::scalar::Sym::Q);
        let grid = GridKind::QLinear(q.clone());
        let t_plus = O::word(grid.clone(), 1);
        let mul_z = O::mul_by(grid.clone(), P::gen(Var::Z));
        let lhs = t_plus.compose(&mul_z);
        let rhs = O::term(grid, 1, P::monomial(Var::Z, 1, q));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn shifts_commute() {
        let t_plus = O::word(lin(), 1);
        let t_minus = O::word(lin(), -1);
        assert!(t_plus.commutator(&t_minus).is_zero());
        // T+ T- = I
        assert!(t_plus.compose(&t_minus).equals(&O::identity(lin())));
    }

    #[test]
    fn anticommutator_of_identity() {
        let i = O::identity(lin());
        assert!(i.anticommutator(&i).equals(&i.scale(&Scalar::int(2))));
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let d = O::word(GridKind::Continuum, 1);
        let z = P::gen(Var::Z);
        assert!(matches!(
            d.apply(&z),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn identity_profile_is_flat_zero() {
        let i = O::identity(lin());
        assert_eq!(i.degree_profile(3), vec![Some(0); 4]);
    }
}
