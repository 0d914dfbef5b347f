//! The S-Heun operator bases on the three grids, the general degree-raising
//! operator, decomposition in the basis, the quadratic reordering relations,
//! and a normal-ordering rewriter for quadratic combinations.
//!
//! An S-Heun operator is a first-order shift/differential operator with no
//! diagonal term that maps degree-n polynomials to degree at most n+1. On
//! each grid the space is 5-dimensional, spanned by a lowering operator `L`,
//! two stabilizing operators `M1`, `M2` and two raising operators `R1`, `R2`.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::Field;
use crate::gauss;
use crate::op::{GridKind, GridOperator};
use crate::poly::{LaurentPoly, Var};
use crate::report::Check;
use num_traits::One;

use crate::scalar::{grat_int, Scalar, Sym};
use crate::Result;

/// Basis generator labels, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    L,
    M1,
    M2,
    R1,
    R2,
}

pub const GENS: [Gen; 5] = [Gen::L, Gen::M1, Gen::M2, Gen::R1, Gen::R2];

impl Gen {
    pub fn index(self) -> usize {
        match self {
            Gen::L => 0,
            Gen::M1 => 1,
            Gen::M2 => 2,
            Gen::R1 => 3,
            Gen::R2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::L => "L",
            Gen::M1 => "M1",
            Gen::M2 => "M2",
            Gen::R1 => "R1",
            Gen::R2 => "R2",
        }
    }
}

/// The five basis operators of a grid.
#[derive(Debug, Clone)]
pub struct SHeunBasis<K> {
    pub grid: GridKind<K>,
    ops: [GridOperator<K>; 5],
}

impl<K: Field> SHeunBasis<K> {
    pub fn get(&self, g: Gen) -> &GridOperator<K> {
        &self.ops[g.index()]
    }

    pub fn l(&self) -> &GridOperator<K> {
        self.get(Gen::L)
    }
    pub fn m1(&self) -> &GridOperator<K> {
        self.get(Gen::M1)
    }
    pub fn m2(&self) -> &GridOperator<K> {
        self.get(Gen::M2)
    }
    pub fn r1(&self) -> &GridOperator<K> {
        self.get(Gen::R1)
    }
    pub fn r2(&self) -> &GridOperator<K> {
        self.get(Gen::R2)
    }

    /// Linear combination `sum c_i basis_i`.
    pub fn combine(&self, c: &[K; 5]) -> GridOperator<K> {
        let mut out = GridOperator::zero(self.grid.clone());
        for (ci, op) in c.iter().zip(&self.ops) {
            out = out.add(&op.scale(ci));
        }
        out
    }
}

fn half<K: Field>() -> K {
    K::from_i64(2).inv()
}

/// Build the five-element basis on a grid.
pub fn basis<K: Field>(grid: &GridKind<K>) -> SHeunBasis<K> {
    let var = grid.var();
    let h = half::<K>();
    let v = LaurentPoly::gen(var);
    let c = |k: K| LaurentPoly::constant(var, k);
    let two_terms = |up: LaurentPoly<K>, down: LaurentPoly<K>| {
        GridOperator::term(grid.clone(), 1, up)
            .add(&GridOperator::term(grid.clone(), -1, down))
    };
    let ops = match grid {
        GridKind::Linear => {
            let l = two_terms(c(h.clone()), c(-h.clone()));
            let m1 = two_terms(c(h.clone()), c(h.clone()));
            let m2 = two_terms(v.scale(&h), v.scale(&h).neg());
            // R1 = x/2 [(1-2x) T+ + (1+2x) T-]
            let r1_up = v.scale(&h).sub(&v.mul(&v));
            let r1_dn = v.scale(&h).add(&v.mul(&v));
            let r1 = two_terms(r1_up, r1_dn);
            let r2 = two_terms(v.scale(&h), v.scale(&h));
            [l, m1, m2, r1, r2]
        }
        GridKind::QLinear(q) => {
            // s = 1/(q - q^-1)
            let s = (q.clone() - q.inv()).inv();
            let zinv = LaurentPoly::monomial(var, -1, K::one());
            let l = two_terms(zinv.scale(&s), zinv.scale(&s).neg());
            let m1 = two_terms(c(-s.clone() * q.inv()), c(s.clone() * q.clone()));
            let m2 = two_terms(c(s.clone()), c(-s.clone()));
            let r1 = two_terms(
                v.scale(&(-s.clone() * q.inv())),
                v.scale(&(s.clone() * q.clone())),
            );
            let r2 = two_terms(v.scale(&s), v.scale(&s).neg());
            [l, m1, m2, r1, r2]
        }
        GridKind::Continuum => {
            let l = GridOperator::word(grid.clone(), 1);
            let m1 = GridOperator::identity(grid.clone());
            let m2 = GridOperator::term(grid.clone(), 1, v.clone());
            let r1 = GridOperator::mul_by(grid.clone(), v.clone());
            let r2 = GridOperator::term(grid.clone(), 1, v.mul(&v));
            [l, m1, m2, r1, r2]
        }
    };
    SHeunBasis {
        grid: grid.clone(),
        ops,
    }
}

/// Free parameters of the general S-Heun operator.
///
/// On the continuum the `a0*` slots hold the zeroth-order part
/// (`A2 = a00 + a01 x`) and the `a1*` slots the derivative coefficient.
#[derive(Debug, Clone)]
pub struct SParams<K> {
    pub a00: K,
    pub a01: K,
    pub a10: K,
    pub a11: K,
    pub a12: K,
}

impl<K: Field> SParams<K> {
    pub fn zero() -> Self {
        SParams {
            a00: K::zero(),
            a01: K::zero(),
            a10: K::zero(),
            a11: K::zero(),
            a12: K::zero(),
        }
    }

    pub fn from_array(a: [K; 5]) -> Self {
        let [a00, a01, a10, a11, a12] = a;
        SParams {
            a00,
            a01,
            a10,
            a11,
            a12,
        }
    }
}

/// The most general S-Heun operator with the closed-form coefficients.
pub fn general_s<K: Field>(grid: &GridKind<K>, p: &SParams<K>) -> GridOperator<K> {
    let var = grid.var();
    let h = half::<K>();
    match grid {
        GridKind::Linear => {
            // A1 = 1/2 [(-a01+a12) x^2 + (-a00+a01+a11) x + (a00+a10)]
            let a1 = LaurentPoly::from_terms(
                var,
                [
                    (2, (-p.a01.clone() + p.a12.clone()) * h.clone()),
                    (1, (-p.a00.clone() + p.a01.clone() + p.a11.clone()) * h.clone()),
                    (0, (p.a00.clone() + p.a10.clone()) * h.clone()),
                ],
            );
            let a2 = LaurentPoly::from_terms(
                var,
                [
                    (2, (p.a01.clone() - p.a12.clone()) * h.clone()),
                    (1, (p.a00.clone() + p.a01.clone() - p.a11.clone()) * h.clone()),
                    (0, (p.a00.clone() - p.a10.clone()) * h.clone()),
                ],
            );
            GridOperator::term(grid.clone(), 1, a1)
                .add(&GridOperator::term(grid.clone(), -1, a2))
        }
        GridKind::QLinear(q) => {
            // A1(z,q) = [a10 + (a11 - a00/q) z + (a12 - a01/q) z^2] / ((q - q^-1) z)
            // and A2(z,q) = A1(z, q^-1).
            let coeffs = |qq: &K| {
                let s = (qq.clone() - qq.inv()).inv();
                LaurentPoly::from_terms(
                    var,
                    [
                        (-1, p.a10.clone() * s.clone()),
                        (0, (p.a11.clone() - p.a00.clone() * qq.inv()) * s.clone()),
                        (1, (p.a12.clone() - p.a01.clone() * qq.inv()) * s.clone()),
                    ],
                )
            };
            GridOperator::term(grid.clone(), 1, coeffs(q))
                .add(&GridOperator::term(grid.clone(), -1, coeffs(&q.inv())))
        }
        GridKind::Continuum => {
            let deriv = LaurentPoly::from_terms(
                var,
                [
                    (0, p.a10.clone()),
                    (1, p.a11.clone()),
                    (2, p.a12.clone()),
                ],
            );
            let zeroth =
                LaurentPoly::from_terms(var, [(0, p.a00.clone()), (1, p.a01.clone())]);
            GridOperator::term(grid.clone(), 1, deriv)
                .add(&GridOperator::mul_by(grid.clone(), zeroth))
        }
    }
}

/// Unique coefficients of an S-Heun operator in the basis.
///
/// Coefficient matching runs over every `(word, exponent)` slot of the
/// canonical forms; an operator outside the span yields a residual error
/// carrying the first offending slot.
pub fn decompose<K: Field>(
    s: &GridOperator<K>,
    basis: &SHeunBasis<K>,
) -> Result<[K; 5]> {
    assert_eq!(s.grid(), &basis.grid, "operator on a different grid");
    let mut keys: Vec<(i64, i64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for op in basis.ops.iter().chain(std::iter::once(s)) {
        for (&w, coeff) in op.terms() {
            for (&e, _) in coeff.terms() {
                if seen.insert((w, e)) {
                    keys.push((w, e));
                }
            }
        }
    }
    let rows: Vec<Vec<K>> = keys
        .iter()
        .map(|&(w, e)| {
            basis
                .ops
                .iter()
                .map(|op| op.coeff_of(w).coeff(e))
                .collect()
        })
        .collect();
    let rhs: Vec<K> = keys
        .iter()
        .map(|&(w, e)| s.coeff_of(w).coeff(e))
        .collect();

    // Greedily pick five independent rows, solve the square system, then
    // verify every remaining equation.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        if chosen.len() == 5 {
            break;
        }
        let mut candidate: Vec<Vec<K>> =
            chosen.iter().map(|&j| rows[j].clone()).collect();
        candidate.push(rows[i].clone());
        if rank(&candidate) == candidate.len() {
            chosen.push(i);
        }
    }
    if chosen.len() < 5 {
        return Err(Error::SingularSystem(
            "basis matrix is rank deficient".into(),
        ));
    }
    let a: Vec<Vec<K>> = chosen.iter().map(|&j| rows[j].clone()).collect();
    let b: Vec<K> = chosen.iter().map(|&j| rhs[j].clone()).collect();
    let c = gauss::solve(&a, &b)?;
    for (i, key) in keys.iter().enumerate() {
        let lhs: K = rows[i]
            .iter()
            .zip(&c)
            .fold(K::zero(), |acc, (m, x)| acc + m.clone() * x.clone());
        if lhs != rhs[i] {
            return Err(Error::SpanResidual {
                witness: format!("word {} exponent {}", key.0, key.1),
            });
        }
    }
    Ok([
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
        c[3].clone(),
        c[4].clone(),
    ])
}

fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    let mut m: Vec<Vec<K>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        if let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, p);
            let inv = m[r][c].inv();
            for j in c..cols {
                m[r][j] = m[r][j].clone() * inv.clone();
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..cols {
                        m[i][j] = m[i][j].clone() - f.clone() * m[r][j].clone();
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Formal linear combination of products of at most two basis generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GenExpr<K> {
    terms: BTreeMap<Vec<Gen>, K>,
}

impl<K: Field> GenExpr<K> {
    pub fn zero() -> Self {
        GenExpr {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit() -> Self {
        GenExpr::word_scaled(&[], K::one())
    }

    pub fn word(w: &[Gen]) -> Self {
        GenExpr::word_scaled(w, K::one())
    }

    pub fn word_scaled(w: &[Gen], c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w.to_vec(), c);
        }
        GenExpr { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Vec<Gen>, K)>) -> Self {
        let mut e = GenExpr::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &K)> {
        self.terms.iter()
    }

    fn add_term(&mut self, w: Vec<Gen>, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-K::one()))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return GenExpr::zero();
        }
        GenExpr {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Evaluate in a basis by exact composition.
    pub fn eval(&self, basis: &SHeunBasis<K>) -> GridOperator<K> {
        let mut out = GridOperator::zero(basis.grid.clone());
        for (w, c) in &self.terms {
            let mut op = GridOperator::identity(basis.grid.clone());
            for g in w {
                op = op.compose(basis.get(*g));
            }
            out = out.add(&op.scale(c));
        }
        out
    }
}

/// One displayed quadratic homogeneous relation, `lhs = rhs`.
pub struct Relation<K> {
    pub name: String,
    pub lhs: GenExpr<K>,
    pub rhs: GenExpr<K>,
}

fn rel<K: Field>(
    name: &str,
    lhs: Vec<(i64, Vec<Gen>)>,
    rhs: Vec<(i64, Vec<Gen>)>,
) -> Relation<K> {
    let build = |side: Vec<(i64, Vec<Gen>)>| {
        GenExpr::from_terms(side.into_iter().map(|(c, w)| (w, K::from_i64(c))))
    };
    Relation {
        name: name.to_string(),
        lhs: build(lhs),
        rhs: build(rhs),
    }
}

use Gen::{L, M1, M2, R1, R2};

/// The 14 quadratic homogeneous relations of a grid, exactly as displayed.
pub fn appendix_relations<K: Field>(grid: &GridKind<K>) -> Vec<Relation<K>> {
    let w = |gens: &[Gen]| gens.to_vec();
    match grid {
        GridKind::Continuum => vec![
            rel("M1 L = L M1", vec![(1, w(&[M1, L]))], vec![(1, w(&[L, M1]))]),
            rel(
                "M2 L = L M2 - M1 L",
                vec![(1, w(&[M2, L]))],
                vec![(1, w(&[L, M2])), (-1, w(&[M1, L]))],
            ),
            rel(
                "M2 M1 = M1 M2",
                vec![(1, w(&[M2, M1]))],
                vec![(1, w(&[M1, M2]))],
            ),
            rel("M1^2 = 1", vec![(1, w(&[M1, M1]))], vec![(1, w(&[]))]),
            rel(
                "L R1 = 1 + M1 M2",
                vec![(1, w(&[L, R1]))],
                vec![(1, w(&[])), (1, w(&[M1, M2]))],
            ),
            rel(
                "L R2 = M2^2 + M1 M2",
                vec![(1, w(&[L, R2]))],
                vec![(1, w(&[M2, M2])), (1, w(&[M1, M2]))],
            ),
            rel(
                "R1 L = M1 M2",
                vec![(1, w(&[R1, L]))],
                vec![(1, w(&[M1, M2]))],
            ),
            rel(
                "R2 L = M2^2 - M1 M2",
                vec![(1, w(&[R2, L]))],
                vec![(1, w(&[M2, M2])), (-1, w(&[M1, M2]))],
            ),
            rel(
                "R2 R1 = R1 R2 + R1^2",
                vec![(1, w(&[R2, R1]))],
                vec![(1, w(&[R1, R2])), (1, w(&[R1, R1]))],
            ),
            rel(
                "R1 M1 = M2 R1 - M1 R2",
                vec![(1, w(&[R1, M1]))],
                vec![(1, w(&[M2, R1])), (-1, w(&[M1, R2]))],
            ),
            rel(
                "R2 M1 = M1 R2",
                vec![(1, w(&[R2, M1]))],
                vec![(1, w(&[M1, R2]))],
            ),
            rel(
                "R1 M2 = M1 R2",
                vec![(1, w(&[R1, M2]))],
                vec![(1, w(&[M1, R2]))],
            ),
            rel(
                "R2 M2 = M2 R2 - M1 R2",
                vec![(1, w(&[R2, M2]))],
                vec![(1, w(&[M2, R2])), (-1, w(&[M1, R2]))],
            ),
            rel(
                "M1 R1 = M2 R1 - M1 R2",
                vec![(1, w(&[M1, R1]))],
                vec![(1, w(&[M2, R1])), (-1, w(&[M1, R2]))],
            ),
        ],
        GridKind::Linear => vec![
            rel("M1 L = L M1", vec![(1, w(&[M1, L]))], vec![(1, w(&[L, M1]))]),
            rel(
                "M2 L = L M2 - L M1",
                vec![(1, w(&[M2, L]))],
                vec![(1, w(&[L, M2])), (-1, w(&[L, M1]))],
            ),
            rel(
                "M2 M1 = M1 M2 - L^2",
                vec![(1, w(&[M2, M1]))],
                vec![(1, w(&[M1, M2])), (-1, w(&[L, L]))],
            ),
            rel(
                "M1^2 = 1 + L^2",
                vec![(1, w(&[M1, M1]))],
                vec![(1, w(&[])), (1, w(&[L, L]))],
            ),
            rel(
                "L R1 = 1 - 2 M2^2 - M1 M2",
                vec![(1, w(&[L, R1]))],
                vec![(1, w(&[])), (-2, w(&[M2, M2])), (-1, w(&[M1, M2]))],
            ),
            rel(
                "L R2 = 1 + M1 M2",
                vec![(1, w(&[L, R2]))],
                vec![(1, w(&[])), (1, w(&[M1, M2]))],
            ),
            rel(
                "R1 L = 3 M1 M2 - 3 L^2 - 2 M2^2",
                vec![(1, w(&[R1, L]))],
                vec![(3, w(&[M1, M2])), (-3, w(&[L, L])), (-2, w(&[M2, M2]))],
            ),
            rel(
                "R2 L = M1 M2 - L^2",
                vec![(1, w(&[R2, L]))],
                vec![(1, w(&[M1, M2])), (-1, w(&[L, L]))],
            ),
            rel(
                "R2 R1 = 2 R2^2 + R1 R2 - 4 M2^2",
                vec![(1, w(&[R2, R1]))],
                vec![(2, w(&[R2, R2])), (1, w(&[R1, R2])), (-4, w(&[M2, M2]))],
            ),
            rel(
                "R1 M1 = 3 M1 R2 - 2 M2 R2 - 3 L M1",
                vec![(1, w(&[R1, M1]))],
                vec![(3, w(&[M1, R2])), (-2, w(&[M2, R2])), (-3, w(&[L, M1]))],
            ),
            rel(
                "R1 M2 = 2 M2 R2 - 3 M1 R2 + 3 L M2 + M2 R1",
                vec![(1, w(&[R1, M2]))],
                vec![
                    (2, w(&[M2, R2])),
                    (-3, w(&[M1, R2])),
                    (3, w(&[L, M2])),
                    (1, w(&[M2, R1])),
                ],
            ),
            rel(
                "R2 M1 = M1 R2 - L M1",
                vec![(1, w(&[R2, M1]))],
                vec![(1, w(&[M1, R2])), (-1, w(&[L, M1]))],
            ),
            rel(
                "R2 M2 = M2 R2 - M1 R2 + L M2",
                vec![(1, w(&[R2, M2]))],
                vec![(1, w(&[M2, R2])), (-1, w(&[M1, R2])), (1, w(&[L, M2]))],
            ),
            rel(
                "M1 R1 = 3 M1 R2 - 2 M2 R2 - 4 L M2",
                vec![(1, w(&[M1, R1]))],
                vec![(3, w(&[M1, R2])), (-2, w(&[M2, R2])), (-4, w(&[L, M2]))],
            ),
        ],
        GridKind::QLinear(q) => {
            let beta = q.clone() + q.inv();
            let e = |pairs: Vec<(K, Vec<Gen>)>| {
                GenExpr::from_terms(pairs.into_iter().map(|(c, wd)| (wd, c)))
            };
            let one = K::one;
            let mk = |name: &str, lhs, rhs| Relation {
                name: name.to_string(),
                lhs,
                rhs,
            };
            vec![
                mk(
                    "M1 L = [2] L M1 + L M2",
                    e(vec![(one(), w(&[M1, L]))]),
                    e(vec![(beta.clone(), w(&[L, M1])), (one(), w(&[L, M2]))]),
                ),
                mk(
                    "M2 L = -L M1",
                    e(vec![(one(), w(&[M2, L]))]),
                    e(vec![(-one(), w(&[L, M1]))]),
                ),
                mk(
                    "M2 M1 = M1 M2",
                    e(vec![(one(), w(&[M2, M1]))]),
                    e(vec![(one(), w(&[M1, M2]))]),
                ),
                mk(
                    "[2] M1 M2 = 1 - M1^2 - M2^2",
                    e(vec![(beta.clone(), w(&[M1, M2]))]),
                    e(vec![
                        (one(), w(&[])),
                        (-one(), w(&[M1, M1])),
                        (-one(), w(&[M2, M2])),
                    ]),
                ),
                mk(
                    "L R1 = 1 - M2^2",
                    e(vec![(one(), w(&[L, R1]))]),
                    e(vec![(one(), w(&[])), (-one(), w(&[M2, M2]))]),
                ),
                mk(
                    "L R2 = [2] M2^2 + M1 M2",
                    e(vec![(one(), w(&[L, R2]))]),
                    e(vec![(beta.clone(), w(&[M2, M2])), (one(), w(&[M1, M2]))]),
                ),
                mk(
                    "R1 L = 1 - M1^2",
                    e(vec![(one(), w(&[R1, L]))]),
                    e(vec![(one(), w(&[])), (-one(), w(&[M1, M1]))]),
                ),
                mk(
                    "R2 L = -M1 M2",
                    e(vec![(one(), w(&[R2, L]))]),
                    e(vec![(-one(), w(&[M1, M2]))]),
                ),
                mk(
                    "[2] R1 R2 = -R1^2 - R2^2",
                    e(vec![(beta.clone(), w(&[R1, R2]))]),
                    e(vec![(-one(), w(&[R1, R1])), (-one(), w(&[R2, R2]))]),
                ),
                mk(
                    "R1 M1 = -[2]^2 M1 R2 - [2] M2 R2 + M2 R1",
                    e(vec![(one(), w(&[R1, M1]))]),
                    e(vec![
                        (-(beta.clone() * beta.clone()), w(&[M1, R2])),
                        (-beta.clone(), w(&[M2, R2])),
                        (one(), w(&[M2, R1])),
                    ]),
                ),
                mk(
                    "R1 M2 = [2] M1 R2 + M2 R2",
                    e(vec![(one(), w(&[R1, M2]))]),
                    e(vec![(beta.clone(), w(&[M1, R2])), (one(), w(&[M2, R2]))]),
                ),
                mk(
                    "R2 M1 = [2] M1 R2 + M2 R2",
                    e(vec![(one(), w(&[R2, M1]))]),
                    e(vec![(beta.clone(), w(&[M1, R2])), (one(), w(&[M2, R2]))]),
                ),
                mk(
                    "R2 M2 = -M1 R2",
                    e(vec![(one(), w(&[R2, M2]))]),
                    e(vec![(-one(), w(&[M1, R2]))]),
                ),
                mk(
                    "M1 R1 = -[2] M1 R2 - M2 R2",
                    e(vec![(one(), w(&[M1, R1]))]),
                    e(vec![(-beta, w(&[M1, R2])), (-one(), w(&[M2, R2]))]),
                ),
            ]
        }
    }
}

/// Verify all 14 relations of a grid by exact canonical-form equality.
pub fn verify_appendix<K: Field>(grid: &GridKind<K>) -> Vec<Check> {
    let b = basis(grid);
    appendix_relations(grid)
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let lhs = r.lhs.eval(&b);
            let rhs = r.rhs.eval(&b);
            Check::verdict(
                format!("{} appendix {:02}: {}", grid.name(), i + 1, r.name),
                format!("{}/appendix/{:02}", grid.name(), i + 1),
                lhs.equals(&rhs),
                || format!("residual {}", lhs.sub(&rhs)),
            )
        })
        .collect()
}

/// Oriented rewrite rules: out-of-canonical-order length-2 words to
/// combinations of retained words. Derived from the displayed relations; the
/// q-linear `R2 R1` product has no displayed reordering and is retained.
fn rewrite_rules<K: Field>(grid: &GridKind<K>) -> BTreeMap<Vec<Gen>, GenExpr<K>> {
    let mut rules: BTreeMap<Vec<Gen>, GenExpr<K>> = BTreeMap::new();
    let one = K::one;
    let w = |gens: &[Gen]| gens.to_vec();
    let e = |pairs: Vec<(K, Vec<Gen>)>| {
        GenExpr::from_terms(pairs.into_iter().map(|(c, wd)| (wd, c)))
    };
    match grid {
        GridKind::Continuum => {
            // M1 is the identity operator on the continuum; words are
            // stripped of M1 before these rules apply.
            rules.insert(
                w(&[M2, L]),
                e(vec![(one(), w(&[L, M2])), (-one(), w(&[L]))]),
            );
            rules.insert(
                w(&[L, R1]),
                e(vec![(one(), w(&[])), (one(), w(&[M2]))]),
            );
            rules.insert(
                w(&[L, R2]),
                e(vec![(one(), w(&[M2, M2])), (one(), w(&[M2]))]),
            );
            rules.insert(w(&[R1, L]), e(vec![(one(), w(&[M2]))]));
            rules.insert(
                w(&[R2, L]),
                e(vec![(one(), w(&[M2, M2])), (-one(), w(&[M2]))]),
            );
            rules.insert(
                w(&[R2, R1]),
                e(vec![(one(), w(&[R1, R2])), (one(), w(&[R1, R1]))]),
            );
            rules.insert(w(&[R1, M2]), e(vec![(one(), w(&[R2]))]));
            rules.insert(
                w(&[R2, M2]),
                e(vec![(one(), w(&[M2, R2])), (-one(), w(&[R2]))]),
            );
        }
        GridKind::Linear => {
            let from_ints = |pairs: Vec<(i64, Vec<Gen>)>| {
                GenExpr::from_terms(
                    pairs.into_iter().map(|(c, wd)| (wd, K::from_i64(c))),
                )
            };
            rules.insert(w(&[M1, L]), from_ints(vec![(1, w(&[L, M1]))]));
            rules.insert(
                w(&[M2, L]),
                from_ints(vec![(1, w(&[L, M2])), (-1, w(&[L, M1]))]),
            );
            rules.insert(
                w(&[M2, M1]),
                from_ints(vec![(1, w(&[M1, M2])), (-1, w(&[L, L]))]),
            );
            rules.insert(
                w(&[L, R1]),
                from_ints(vec![(1, w(&[])), (-2, w(&[M2, M2])), (-1, w(&[M1, M2]))]),
            );
            rules.insert(
                w(&[L, R2]),
                from_ints(vec![(1, w(&[])), (1, w(&[M1, M2]))]),
            );
            rules.insert(
                w(&[R1, L]),
                from_ints(vec![
                    (3, w(&[M1, M2])),
                    (-3, w(&[L, L])),
                    (-2, w(&[M2, M2])),
                ]),
            );
            rules.insert(
                w(&[R2, L]),
                from_ints(vec![(1, w(&[M1, M2])), (-1, w(&[L, L]))]),
            );
            rules.insert(
                w(&[R2, R1]),
                from_ints(vec![
                    (2, w(&[R2, R2])),
                    (1, w(&[R1, R2])),
                    (-4, w(&[M2, M2])),
                ]),
            );
            rules.insert(
                w(&[R1, M1]),
                from_ints(vec![
                    (3, w(&[M1, R2])),
                    (-2, w(&[M2, R2])),
                    (-3, w(&[L, M1])),
                ]),
            );
            rules.insert(
                w(&[R1, M2]),
                from_ints(vec![
                    (2, w(&[M2, R2])),
                    (-3, w(&[M1, R2])),
                    (3, w(&[L, M2])),
                    (1, w(&[M2, R1])),
                ]),
            );
            rules.insert(
                w(&[R2, M1]),
                from_ints(vec![(1, w(&[M1, R2])), (-1, w(&[L, M1]))]),
            );
            rules.insert(
                w(&[R2, M2]),
                from_ints(vec![
                    (1, w(&[M2, R2])),
                    (-1, w(&[M1, R2])),
                    (1, w(&[L, M2])),
                ]),
            );
            rules.insert(
                w(&[M1, R1]),
                from_ints(vec![
                    (3, w(&[M1, R2])),
                    (-2, w(&[M2, R2])),
                    (-4, w(&[L, M2])),
                ]),
            );
        }
        GridKind::QLinear(q) => {
            let beta = q.clone() + q.inv();
            rules.insert(
                w(&[M1, L]),
                e(vec![(beta.clone(), w(&[L, M1])), (one(), w(&[L, M2]))]),
            );
            rules.insert(w(&[M2, L]), e(vec![(-one(), w(&[L, M1]))]));
            rules.insert(w(&[M2, M1]), e(vec![(one(), w(&[M1, M2]))]));
            rules.insert(
                w(&[L, R1]),
                e(vec![(one(), w(&[])), (-one(), w(&[M2, M2]))]),
            );
            rules.insert(
                w(&[L, R2]),
                e(vec![(beta.clone(), w(&[M2, M2])), (one(), w(&[M1, M2]))]),
            );
            rules.insert(
                w(&[R1, L]),
                e(vec![(one(), w(&[])), (-one(), w(&[M1, M1]))]),
            );
            rules.insert(w(&[R2, L]), e(vec![(-one(), w(&[M1, M2]))]));
            rules.insert(
                w(&[R1, M1]),
                e(vec![
                    (-(beta.clone() * beta.clone()), w(&[M1, R2])),
                    (-beta.clone(), w(&[M2, R2])),
                    (one(), w(&[M2, R1])),
                ]),
            );
            rules.insert(
                w(&[R1, M2]),
                e(vec![(beta.clone(), w(&[M1, R2])), (one(), w(&[M2, R2]))]),
            );
            rules.insert(
                w(&[R2, M1]),
                e(vec![(beta.clone(), w(&[M1, R2])), (one(), w(&[M2, R2]))]),
            );
            rules.insert(w(&[R2, M2]), e(vec![(-one(), w(&[M1, R2]))]));
            rules.insert(
                w(&[M1, R1]),
                e(vec![(-beta, w(&[M1, R2])), (-one(), w(&[M2, R2]))]),
            );
        }
    }
    rules
}

/// Rewrite a quadratic combination into canonical monomial order
/// (`L < M1 < M2 < R1 < R2`), preserving operator equality.
///
/// On the continuum `M1` is the identity operator and is eliminated first.
/// Every oriented rule produces only retained words, so one substitution pass
/// terminates; idempotence follows.
pub fn normal_order<K: Field>(grid: &GridKind<K>, expr: &GenExpr<K>) -> GenExpr<K> {
    let rules = rewrite_rules(grid);
    let mut work = expr.clone();
    if matches!(grid, GridKind::Continuum) {
        let stripped = work
            .terms
            .iter()
            .map(|(w, c)| {
                let nw: Vec<Gen> = w.iter().copied().filter(|g| *g != M1).collect();
                (nw, c.clone())
            })
            .collect::<Vec<_>>();
        work = GenExpr::from_terms(stripped);
    }
    let mut out = GenExpr::zero();
    for (w, c) in &work.terms {
        match rules.get(w) {
            Some(rhs) => out = out.add(&rhs.scale(c)),
            None => out.add_term(w.clone(), c.clone()),
        }
    }
    debug_assert!(
        out.terms.keys().all(|w| !rules.contains_key(w)),
        "rewrite output contains a reducible word"
    );
    out
}

/// Check the q → 1 limits of the q-linear generators against the stated
/// continuum combinations, action-by-action on monomials up to `nmax`.
pub fn verify_q_to_1(nmax: i64) -> Vec<Check> {
    let qgrid = GridKind::QLinear(Scalar::var(Sym::Q));
    let qb = basis(&qgrid);
    let cb = basis::<Scalar>(&GridKind::Continuum);
    let one = grat_int(1);

    let targets: Vec<(Gen, &str, GridOperator<Scalar>)> = vec![
        (Gen::L, "L -> Lbar", cb.l().clone()),
        (Gen::M1, "M1 -> M1bar - M2bar", cb.m1().sub(cb.m2())),
        (Gen::M2, "M2 -> M2bar", cb.m2().clone()),
        (Gen::R1, "R1 -> R1bar - R2bar", cb.r1().sub(cb.r2())),
        (Gen::R2, "R2 -> R2bar", cb.r2().clone()),
    ];

    targets
        .into_iter()
        .map(|(g, label, target)| {
            let mut failure: Option<String> = None;
            'outer: for n in 0..=nmax {
                let zn = LaurentPoly::monomial(Var::Z, n, Scalar::one());
                let img = qb.get(g).apply(&zn).unwrap();
                let xn = LaurentPoly::monomial(Var::X, n, Scalar::one());
                let expect = target.apply(&xn).unwrap();
                // Compare exponent-wise after the exact limit.
                let lim: std::result::Result<LaurentPoly<Scalar>, crate::Error> = img
                    .try_map_coeffs(Var::X, |c| {
                        c.limit_at(&one).map(Scalar::from_grat)
                    });
                match lim {
                    Err(e) => {
                        failure = Some(format!("n = {n}: {e}"));
                        break 'outer;
                    }
                    Ok(l) => {
                        if l != expect {
                            failure =
                                Some(format!("n = {n}: limit {l} != target {expect}"));
                            break 'outer;
                        }
                    }
                }
            }
            match failure {
                None => Check::pass(
                    format!("q->1 limit {}", g.name()),
                    format!("qlinear/q1-limit/{}", g.name()),
                ),
                Some(wit) => Check::fail(
                    format!("q->1 limit {} ({label})", g.name()),
                    format!("qlinear/q1-limit/{}", g.name()),
                    wit,
                ),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;
    use crate::report::Status;

    fn lin() -> GridKind<Scalar> {
        GridKind::Linear
    }

    fn qlin() -> GridKind<Scalar> {
        GridKind::QLinear(Scalar::var(Sym::Q))
    }

    fn xn(n: i64) -> LaurentPoly<Scalar> {
        LaurentPoly::monomial(Var::X, n, Scalar::one())
    }

    #[test]
    fn linear_lowering_on_square() {
        // L x^2 = 2x
        let b = basis(&lin());
        assert_eq!(
            b.l().apply(&xn(2)).unwrap(),
            LaurentPoly::monomial(Var::X, 1, Scalar::int(2))
        );
    }

    #[test]
    fn qlinear_m1_fixes_constants() {
        let b = basis(&qlin());
        let one = LaurentPoly::one(Var::Z);
        assert_eq!(b.m1().apply(&one).unwrap(), one);
    }

    #[test]
    fn linear_r1_on_x() {
        // R1 x = -x^2
        let b = basis(&lin());
        assert_eq!(
            b.r1().apply(&xn(1)).unwrap(),
            LaurentPoly::monomial(Var::X, 2, Scalar::int(-1))
        );
    }

    #[test]
    fn lowering_profile() {
        let b = basis(&lin());
        assert_eq!(
            b.l().degree_profile(3),
            vec![None, Some(-1), Some(-1), Some(-1)]
        );
    }

    #[test]
    fn qlinear_r2_profile() {
        let b = basis(&qlin());
        let profile = b.r2().degree_profile(3);
        assert_eq!(profile, vec![None, Some(1), Some(1), Some(1)]);
    }

    #[test]
    fn general_s_unit_a00_is_m1_minus_m2() {
        let mut p = SParams::<Scalar>::zero();
        p.a00 = Scalar::one();
        let s = general_s(&lin(), &p);
        let b = basis(&lin());
        assert!(s.equals(&b.m1().sub(b.m2())));
        let c = decompose(&s, &b).unwrap();
        assert_eq!(
            c,
            [
                Scalar::zero(),
                Scalar::int(1),
                Scalar::int(-1),
                Scalar::zero(),
                Scalar::zero()
            ]
        );
    }

    #[test]
    fn general_s_zero_params() {
        let s = general_s(&lin(), &SParams::<Scalar>::zero());
        assert!(s.is_zero());
    }

    #[test]
    fn general_s_unit_a10_is_qlinear_lowering() {
        let mut p = SParams::<Scalar>::zero();
        p.a10 = Scalar::one();
        let s = general_s(&qlin(), &p);
        let b = basis(&qlin());
        assert!(s.equals(b.l()));
    }

    #[test]
    fn decompose_l_is_unit_vector() {
        let b = basis(&lin());
        let c = decompose(b.l(), &b).unwrap();
        assert_eq!(
            c,
            [
                Scalar::int(1),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero()
            ]
        );
    }

    #[test]
    fn decompose_rejects_second_order() {
        // x^2 (d/dx)^2 is outside the first-order span
        let grid = GridKind::Continuum;
        let b = basis::<Scalar>(&grid);
        let op = GridOperator::term(
            grid,
            2,
            LaurentPoly::monomial(Var::X, 2, Scalar::one()),
        );
        assert!(matches!(
            decompose(&op, &b),
            Err(Error::SpanResidual { .. })
        ));
    }

    #[test]
    fn appendix_all_three_grids() {
        for grid in [GridKind::Continuum, lin(), qlin()] {
            let checks = verify_appendix(&grid);
            assert_eq!(checks.len(), 14);
            for c in &checks {
                assert_eq!(c.status, Status::Pass, "{}: {:?}", c.name, c.witness);
            }
        }
    }

    #[test]
    fn normal_order_spec_cases() {
        // Linear: M2 L -> L M2 - L M1
        let e = GenExpr::<Scalar>::word(&[M2, L]);
        let no = normal_order(&lin(), &e);
        let expect = GenExpr::from_terms([
            (vec![L, M2], Scalar::one()),
            (vec![L, M1], Scalar::int(-1)),
        ]);
        assert_eq!(no, expect);

        // Continuum: R1 L -> M1 M2 (with M1 eliminated, M2)
        let e = GenExpr::<Scalar>::word(&[R1, L]);
        let no = normal_order(&GridKind::Continuum, &e);
        assert_eq!(no, GenExpr::from_terms([(vec![M2], Scalar::one())]));

        // Idempotence on an already canonical expression
        let e = GenExpr::<Scalar>::from_terms([
            (vec![L, M2], Scalar::int(2)),
            (vec![M1, R2], Scalar::int(-5)),
        ]);
        assert_eq!(normal_order(&lin(), &e), e);
    }

    #[test]
    fn normal_order_preserves_operator_equality() {
        use crate::sample::Sampler;
        let mut s = Sampler::new(11);
        for grid in [GridKind::Continuum, lin(), qlin()] {
            let b = basis(&grid);
            for _ in 0..20 {
                let mut expr = GenExpr::<Scalar>::zero();
                for _ in 0..4 {
                    let g1 = GENS[s.int_in(0, 4) as usize];
                    let g2 = GENS[s.int_in(0, 4) as usize];
                    expr = expr.add(&GenExpr::word_scaled(&[g1, g2], s.rat()));
                }
                let no = normal_order(&grid, &expr);
                assert!(
                    expr.eval(&b).equals(&no.eval(&b)),
                    "normal order changed the operator on {}",
                    grid.name()
                );
            }
        }
    }

    #[test]
    fn q_limits_hold_through_n8() {
        for c in verify_q_to_1(8) {
            assert_eq!(c.status, Status::Pass, "{}: {:?}", c.name, c.witness);
        }
    }
}
