//! Sparse Laurent polynomials in the grid variable.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;

/// Grid variable: `x` on the continuum and linear grids, `z = q^x` on the
/// q-linear grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Z => write!(f, "z"),
        }
    }
}

/// Binomial coefficient as `i64`; exponents stay at desk scale so this never
/// overflows (asserted).
pub(crate) fn binom(m: u32, j: u32) -> i64 {
    assert!(m <= 60, "binomial argument {m} out of supported range");
    if j > m {
        return 0;
    }
    let j = j.min(m - j);
    let mut acc: i64 = 1;
    for t in 0..j {
        acc = acc * (m - t) as i64 / (t + 1) as i64;
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<K> {
    var: Var,
    terms: BTreeMap<i64, K>,
}

impl<K: Field> LaurentPoly<K> {
    pub fn zero(var: Var) -> Self {
        LaurentPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(var: Var, c: K) -> Self {
        LaurentPoly::monomial(var, 0, c)
    }

    pub fn one(var: Var) -> Self {
        LaurentPoly::constant(var, K::one())
    }

    pub fn monomial(var: Var, exp: i64, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { var, terms }
    }

    /// The variable itself.
    pub fn gen(var: Var) -> Self {
        LaurentPoly::monomial(var, 1, K::one())
    }

    pub fn from_terms(var: Var, it: impl IntoIterator<Item = (i64, K)>) -> Self {
        let mut p = LaurentPoly::zero(var);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: i64) -> K {
        self.terms.get(&exp).cloned().unwrap_or_else(K::zero)
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, exp: i64, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
        }
    }

    fn assert_var(&self, rhs: &Self) {
        assert_eq!(self.var, rhs.var, "mixed grid variables");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_var(rhs);
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_var(rhs);
        let mut out = LaurentPoly::zero(self.var);
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.var);
        }
        LaurentPoly {
            var: self.var,
            terms: self
                .terms
                .iter()
                .map(|(&e, a)| (e, a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiply by the monomial `v^k`.
    pub fn mul_monomial(&self, k: i64) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Argument shift `p(v) -> p(v + k)`; the linear-grid conjugation rule.
    /// Requires a plain polynomial (no negative exponents).
    pub fn shift_arg(&self, k: i64) -> Self {
        assert!(
            self.valuation().map_or(true, |v| v >= 0),
            "argument shift on a Laurent polynomial with negative exponents"
        );
        if k == 0 {
            return self.clone();
        }
        let mut out = LaurentPoly::zero(self.var);
        for (&m, c) in &self.terms {
            let m = m as u32;
            for j in 0..=m {
                let w = K::from_i64(binom(m, j)) * K::from_i64(k).powi((m - j) as i64);
                out.add_term(j as i64, c.clone() * w);
            }
        }
        out
    }

    /// Argument dilation `p(v) -> p(c v)`; the q-linear conjugation rule.
    pub fn scale_arg(&self, c: &K) -> Self {
        let mut out = LaurentPoly::zero(self.var);
        for (&m, a) in &self.terms {
            out.add_term(m, a.clone() * c.powi(m));
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = LaurentPoly::zero(self.var);
        for (&m, c) in &self.terms {
            if m != 0 {
                out.add_term(m - 1, c.clone() * K::from_i64(m));
            }
        }
        out
    }

    pub fn map_coeffs<L: Field>(
        &self,
        var: Var,
        mut f: impl FnMut(&K) -> L,
    ) -> LaurentPoly<L> {
        let mut out = LaurentPoly::zero(var);
        for (&e, c) in &self.terms {
            out.add_term(e, f(c));
        }
        out
    }

    pub fn try_map_coeffs<L: Field, E>(
        &self,
        var: Var,
        mut f: impl FnMut(&K) -> std::result::Result<L, E>,
    ) -> std::result::Result<LaurentPoly<L>, E> {
        let mut out = LaurentPoly::zero(var);
        for (&e, c) in &self.terms {
            out.add_term(e, f(c)?);
        }
        Ok(out)
    }
}

impl<K: Field> fmt::Display for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = format!("{c}");
            let cs = if cs.contains('+') || cs.contains('-') || cs.contains('/') {
                format!("({cs})")
            } else {
                cs
            };
            match e {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*{}", self.var)?,
                _ => write!(f, "{cs}*{}^{}", self.var, e)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn x_poly(terms: &[(i64, i64)]) -> LaurentPoly<Scalar> {
        LaurentPoly::from_terms(
            Var::X,
            terms.iter().map(|&(e, c)| (e, Scalar::int(c))),
        )
    }

    #[test]
    fn shift_expands_binomially() {
        // (x+1)^2 = x^2 + 2x + 1
        let p = x_poly(&[(2, 1)]);
        assert_eq!(p.shift_arg(1), x_poly(&[(2, 1), (1, 2), (0, 1)]));
    }

    #[test]
    fn dilation_hits_negative_exponents() {
        let p: LaurentPoly<Scalar> =
            LaurentPoly::monomial(Var::Z, -2, Scalar::int(3));
        let q = p.scale_arg(&Scalar::int(2));
        assert_eq!(q.coeff(-2), Scalar::ratio(3, 4));
    }

    #[test]
    fn derivative_of_cube() {
        let p = x_poly(&[(3, 1)]);
        assert_eq!(p.derivative(), x_poly(&[(2, 3)]));
    }
}
