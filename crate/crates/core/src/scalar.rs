//! The exact scalar tower: big-integer rationals, Gaussian rationals, and
//! univariate rational functions in one formal parameter over the Gaussian
//! rationals.
//!
//! A [`Scalar`] is canonical: numerator and denominator are coprime, the
//! denominator is monic, and a value with constant numerator and denominator
//! carries no formal parameter. Equality of canonical forms is therefore
//! structural.
//!
//! Multi-parameter expressions are handled by substituting exact random
//! rationals for all but one parameter (polynomial identity testing), so a
//! single live symbol per value suffices.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::field::Field;
use crate::upoly::UPoly;
use crate::Result;

/// Exact rational number with big integer parts.
pub type Rat = BigRational;
/// Gaussian rational, `re + im*i`.
pub type GRat = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn grat_int(n: i64) -> GRat {
    GRat::new(Rat::from_integer(n.into()), Rat::zero())
}

pub fn grat_rat(num: i64, den: i64) -> GRat {
    GRat::new(rat(num, den), Rat::zero())
}

pub fn grat_real(r: Rat) -> GRat {
    GRat::new(r, Rat::zero())
}

pub fn grat_i() -> GRat {
    GRat::new(Rat::zero(), Rat::one())
}

/// Render a Gaussian rational in the `p/q+r/s*i` surface syntax.
pub fn render_grat(g: &GRat) -> String {
    fn render_rat(r: &Rat) -> String {
        if r.denom().is_one() {
            format!("{}", r.numer())
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    if g.im.is_zero() {
        render_rat(&g.re)
    } else if g.re.is_zero() {
        format!("{}*i", render_rat(&g.im))
    } else if g.im.is_negative() {
        format!("{}-{}*i", render_rat(&g.re), render_rat(&(-g.im.clone())))
    } else {
        format!("{}+{}*i", render_rat(&g.re), render_rat(&g.im))
    }
}

/// Parse the textual syntax for a Gaussian rational: `p/q`, `p/q+r/s*i`,
/// `r/s*i`, `i`, `-i`.
pub fn parse_grat(input: &str) -> Result<GRat> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar literal".into()));
    }
    // Split into signed terms at top-level +/- (every '/' and '*' binds tighter).
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut started = false;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && started {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && !started {
            neg = ch == '-';
            started = true;
        } else {
            cur.push(ch);
            started = true;
        }
    }
    terms.push((neg, cur));

    let mut acc = GRat::zero();
    for (is_neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{input}`")));
        }
        let (body, imaginary) = if let Some(stripped) = term.strip_suffix("*i") {
            (stripped.to_string(), true)
        } else if term == "i" {
            ("1".to_string(), true)
        } else {
            (term.clone(), false)
        };
        let mut val = Rat::from_str(&body)
            .map_err(|e| Error::Parse(format!("bad rational `{body}`: {e}")))?;
        if is_neg {
            val = -val;
        }
        if imaginary {
            acc.im += val;
        } else {
            acc.re += val;
        }
    }
    Ok(acc)
}

/// Formal parameter identifier carried by a rational function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    Q,
    T,
    Eps,
    Hbar,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sym::Q => "q",
            Sym::T => "t",
            Sym::Eps => "eps",
            Sym::Hbar => "hbar",
        };
        write!(f, "{s}")
    }
}

/// Element of the exact scalar tower.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalar {
    sym: Option<Sym>,
    num: UPoly<GRat>,
    den: UPoly<GRat>,
}

impl Scalar {
    fn normalized(sym: Option<Sym>, num: UPoly<GRat>, den: UPoly<GRat>) -> Self {
        assert!(!den.is_zero(), "scalar with zero denominator");
        if num.is_zero() {
            return Scalar {
                sym: None,
                num: UPoly::zero(),
                den: UPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead_inv = den.leading().unwrap().inv();
        den = den.scale(&lead_inv);
        num = num.scale(&lead_inv);
        let sym = if num.degree() <= Some(0) && den.degree() <= Some(0) {
            None
        } else {
            assert!(sym.is_some(), "non-constant scalar without a symbol");
            sym
        };
        Scalar { sym, num, den }
    }

    pub fn from_grat(g: GRat) -> Self {
        Scalar {
            sym: None,
            num: if g.is_zero() {
                UPoly::zero()
            } else {
                UPoly::constant(g)
            },
            den: UPoly::one(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_grat(grat_real(r))
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_grat(grat_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_grat(grat_rat(num, den))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::from_grat(grat_i())
    }

    /// The formal variable itself, e.g. `q`.
    pub fn var(sym: Sym) -> Self {
        Scalar {
            sym: Some(sym),
            num: UPoly::var(),
            den: UPoly::one(),
        }
    }

    pub fn from_parts(sym: Sym, num: Vec<GRat>, den: Vec<GRat>) -> Self {
        Scalar::normalized(Some(sym), UPoly::new(num), UPoly::new(den))
    }

    pub fn sym(&self) -> Option<Sym> {
        self.sym
    }

    pub fn is_constant(&self) -> bool {
        self.sym.is_none()
    }

    /// The constant value, if this scalar carries no live parameter.
    pub fn as_grat(&self) -> Option<GRat> {
        if self.sym.is_none() {
            Some(self.num.coeff(0) * self.den.coeff(0).inv())
        } else {
            None
        }
    }

    /// Real `f64` value of a constant real scalar.
    pub fn to_f64(&self) -> Option<f64> {
        let g = self.as_grat()?;
        if !g.im.is_zero() {
            return None;
        }
        let n = g.re.numer().to_f64()?;
        let d = g.re.denom().to_f64()?;
        Some(n / d)
    }

    fn join_sym(&self, rhs: &Scalar) -> Option<Sym> {
        match (self.sym, rhs.sym) {
            (None, s) | (s, None) => s,
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), Some(b)) => panic!("mixed formal parameters {a} and {b}"),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    pub fn pow(&self, exp: i64) -> Scalar {
        Field::powi(self, exp)
    }

    /// Exact value at a parameter point after cancellation.
    ///
    /// A vanishing denominator at the point is a genuine pole: numerator and
    /// denominator are coprime, so they cannot vanish simultaneously.
    pub fn limit_at(&self, point: &GRat) -> Result<GRat> {
        if self.sym.is_none() {
            return Ok(self.as_grat().unwrap());
        }
        let den_val = self.den.eval(point);
        if den_val.is_zero() {
            return Err(Error::PoleAtPoint {
                point: render_grat(point),
            });
        }
        Ok(self.num.eval(point) * den_val.inv())
    }

    /// Laurent order and leading coefficient at parameter → 0.
    pub fn lowest_order(&self) -> Result<(i64, GRat)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let vn = self.num.valuation().unwrap();
        let vd = self.den.valuation().unwrap();
        let coeff = self.num.coeff(vn) * self.den.coeff(vd).inv();
        Ok((vn as i64 - vd as i64, coeff))
    }

    /// Substitute the live parameter by a constant, exactly.
    pub fn subst(&self, point: &GRat) -> Result<Scalar> {
        Ok(Scalar::from_grat(self.limit_at(point)?))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let sym = self.join_sym(&rhs);
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Scalar::normalized(sym, num, den)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let sym = self.join_sym(&rhs);
        let num = self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Scalar::normalized(sym, num, den)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let sym = self.join_sym(&rhs);
        let num = self.num.mul(&rhs.num);
        let den = self.den.mul(&rhs.den);
        Scalar::normalized(sym, num, den)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        let sym = self.join_sym(&rhs);
        let num = self.num.mul(&rhs.den);
        let den = self.den.mul(&rhs.num);
        Scalar::normalized(sym, num, den)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            sym: self.sym,
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::from_grat(GRat::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_grat(GRat::one())
    }
    fn is_one(&self) -> bool {
        self.sym.is_none() && self.num == UPoly::one() && self.den == UPoly::one()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render_poly(p: &UPoly<GRat>, sym: &str) -> String {
            let mut out = String::new();
            for (k, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                if !out.is_empty() {
                    out.push_str(" + ");
                }
                let cs = render_grat(c);
                let needs_parens = cs.contains('+') || cs.contains('-');
                let cs = if needs_parens { format!("({cs})") } else { cs };
                match k {
                    0 => out.push_str(&cs),
                    1 if c.is_one() => out.push_str(sym),
                    1 => out.push_str(&format!("{cs}*{sym}")),
                    _ if c.is_one() => out.push_str(&format!("{sym}^{k}")),
                    _ => out.push_str(&format!("{cs}*{sym}^{k}")),
                }
            }
            if out.is_empty() {
                out.push('0');
            }
            out
        }
        match self.sym {
            None => write!(f, "{}", render_grat(&self.as_grat().unwrap())),
            Some(sym) => {
                let s = sym.to_string();
                if self.den.is_zero() || self.den == UPoly::one() {
                    write!(f, "{}", render_poly(&self.num, &s))
                } else {
                    write!(
                        f,
                        "({})/({})",
                        render_poly(&self.num, &s),
                        render_poly(&self.den, &s)
                    )
                }
            }
        }
    }
}

/// Parse a scalar parameter literal (rational or Gaussian rational).
pub fn parse_scalar(input: &str) -> Result<Scalar> {
    Ok(Scalar::from_grat(parse_grat(input)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::var(Sym::Q)
    }

    #[test]
    fn gaussian_product_of_conjugates() {
        // (1+i)(1-i) = 2
        let a = Scalar::int(1) + Scalar::i();
        let b = Scalar::int(1) - Scalar::i();
        assert_eq!(a * b, Scalar::int(2));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(
            Scalar::ratio(1, 2) + Scalar::ratio(1, 3),
            Scalar::ratio(5, 6)
        );
    }

    #[test]
    fn self_division_of_rational_function() {
        // (q - q^-1) represented as (q^2-1)/q; dividing by itself gives 1
        let f = q() - q().pow(-1);
        assert!((f.clone() / f).is_one());
    }

    #[test]
    fn division_by_zero_is_signalled() {
        assert_eq!(
            Scalar::int(1).checked_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn q_integer_limit() {
        // (q^3 - q^-3)/(q - q^-1) -> 3 at q = 1
        let f = (q().pow(3) - q().pow(-3)) / (q() - q().pow(-1));
        assert_eq!(f.limit_at(&grat_int(1)).unwrap(), grat_int(3));
    }

    #[test]
    fn pole_is_reported() {
        let f = Scalar::int(1) / (q() - Scalar::int(1));
        assert!(matches!(
            f.limit_at(&grat_int(1)),
            Err(Error::PoleAtPoint { .. })
        ));
    }

    #[test]
    fn removable_singularity() {
        // (t^2 + 2t)/t -> 2 at t = 0
        let t = Scalar::var(Sym::T);
        let f = (t.clone() * t.clone() + Scalar::int(2) * t.clone()) / t;
        assert_eq!(f.limit_at(&GRat::zero()).unwrap(), grat_int(2));
    }

    #[test]
    fn lowest_order_examples() {
        let e = Scalar::var(Sym::Eps);
        // eps^3 (2 + eps) -> (3, 2)
        let f = e.pow(3) * (Scalar::int(2) + e.clone());
        assert_eq!(f.lowest_order().unwrap(), (3, grat_int(2)));
        // (1 + eps)/eps^2 -> (-2, 1)
        let g = (Scalar::int(1) + e.clone()) / e.pow(2);
        assert_eq!(g.lowest_order().unwrap(), (-2, grat_int(1)));
        // constant 5 -> (0, 5)
        assert_eq!(Scalar::int(5).lowest_order().unwrap(), (0, grat_int(5)));
        assert_eq!(Scalar::zero().lowest_order(), Err(Error::ZeroInput));
    }

    #[test]
    fn parse_and_render_gaussian() {
        let g = parse_grat("-1/2+2/3*i").unwrap();
        assert_eq!(g, GRat::new(rat(-1, 2), rat(2, 3)));
        assert_eq!(render_grat(&g), "-1/2+2/3*i");
        assert_eq!(parse_grat("i").unwrap(), grat_i());
        assert_eq!(parse_grat("3/4").unwrap(), grat_rat(3, 4));
        assert!(parse_grat("").is_err());
    }

    #[test]
    #[should_panic(expected = "mixed formal parameters")]
    fn mixing_parameters_panics() {
        let _ = q() + Scalar::var(Sym::T);
    }
}
