//! Dense univariate polynomials over a field.
//!
//! Coefficient lists are kept free of trailing zeros, so the empty list is
//! the canonical zero polynomial. This is the workhorse behind rational
//! functions (over Gaussian rationals), exact characteristic polynomials and
//! the elimination steps in Heun factorization (over the full scalar tower).

use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct UPoly<K>(Vec<K>);

impl<K: Field> UPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        UPoly::new(vec![c])
    }

    /// The monomial `c * v^k`.
    pub fn monomial(c: K, k: usize) -> Self {
        let mut v = vec![K::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn var() -> Self {
        UPoly::monomial(K::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> K {
        self.0.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.0
    }

    pub fn leading(&self) -> Option<&K> {
        self.0.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) + rhs.coeff(k));
        }
        UPoly::new(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) - rhs.coeff(k));
        }
        UPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![K::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }

    pub fn scale(&self, c: &K) -> Self {
        UPoly::new(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.0.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        let v = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * K::from_i64(k as i64))
            .collect();
        UPoly::new(v)
    }

    /// Euclidean division; panics if `den` is zero.
    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dd = den.degree().unwrap();
        let lead_inv = den.leading().unwrap().inv();
        let mut rem = self.0.clone();
        let mut quo = vec![K::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone();
            if !c.is_zero() {
                let q = c * lead_inv.clone();
                let shift = k - dd;
                for (j, b) in den.0.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].clone() - q.clone() * b.clone();
                }
                quo[shift] = q;
            }
            rem.pop();
        }
        (UPoly::new(quo), UPoly::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm; `gcd(0, 0) = 0`.
    ///
    /// Common monomial factors are stripped first and every remainder is
    /// rescaled monic, which keeps coefficient growth tame over nested
    /// rational coefficients.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let va = self.valuation().unwrap();
        let vb = rhs.valuation().unwrap();
        let shared = va.min(vb);
        let strip = |p: &Self, v: usize| UPoly::new(p.0[v..].to_vec());
        let mut a = strip(self, va).monic();
        let mut b = strip(rhs, vb).monic();
        // A monomial v^k, stripped, is the constant 1.
        while !b.is_zero() {
            if b.degree() == Some(0) {
                b = UPoly::zero();
                a = UPoly::one();
                break;
            }
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        let g = a.monic();
        if shared == 0 {
            g
        } else {
            UPoly::monomial(K::one(), shared).mul(&g)
        }
    }

    /// Rescaled so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Composition with an affine argument, `p(a*v + b)`.
    pub fn compose_affine(&self, a: &K, b: &K) -> Self {
        let arg = UPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(&arg).add(&UPoly::constant(c.clone()));
        }
        acc
    }
}

impl<K: Field> std::fmt::Display for UPoly<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*v")?,
                _ => write!(f, "({c})*v^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(cs: &[i64]) -> UPoly<BigRational> {
        UPoly::new(cs.iter().map(|&n| r(n)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let a = poly(&[1, 0, -3, 2, 5]);
        let b = poly(&[2, 1]);
        let (q, rem) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&rem), a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        // (v-1)(v+2) and (v-1)(v-3) share the monic factor (v-1)
        let a = poly(&[-2, 1, 1]);
        let b = poly(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), poly(&[-1, 1]));
    }

    #[test]
    fn affine_composition() {
        // p(v) = v^2, p(2v+1) = 4v^2 + 4v + 1
        let p = poly(&[0, 0, 1]);
        assert_eq!(p.compose_affine(&r(2), &r(1)), poly(&[1, 4, 4]));
    }
}
