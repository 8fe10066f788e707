//! Sparse multivariate polynomials over an exact field, with the two
//! gradings used throughout the crate: total degree `|a|` and weighted
//! degree `d . a` for a weight vector `d`.

use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("arity mismatch: polynomial has {0} variables, {1} substitutions given")]
    ArityMismatch(usize, usize),
    #[error("polynomial is not weighted-homogeneous")]
    NotHomogeneous,
}

/// Exponent multi-index. Ordered graded-lexicographically (total degree
/// first), which fixes the term order everywhere in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExpVec(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; `None` if any component would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExpVec)
    }

    /// `b! = b_1! ... b_n!` as an exact rational.
    pub fn factorial(&self) -> Rational {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for k in 2..=e as u64 {
                acc *= BigInt::from(k);
            }
        }
        Rational::from_integer(acc)
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Positive, non-decreasing weights `d = (d_1, ..., d_n)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightVec(pub Vec<u32>);

impl WeightVec {
    pub fn new(weights: Vec<u32>) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        assert!(weights.windows(2).all(|w| w[0] <= w[1]), "weights must be non-decreasing");
        WeightVec(weights)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> u32 {
        *self.0.last().unwrap()
    }

    /// Weighted degree `d . a`.
    pub fn dot(&self, e: &ExpVec) -> u32 {
        self.0.iter().zip(&e.0).map(|(d, a)| d * a).sum()
    }
}

/// All exponent vectors `b` with `d . b = j`, in a fixed deterministic order
/// (later variables vary slowest).
pub fn monomials_of_weight(n: usize, d: &WeightVec, j: u32) -> Vec<ExpVec> {
    assert_eq!(n, d.len());
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(d: &[u32], var: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        if var == 0 {
            if rem % d[0] == 0 {
                cur[0] = rem / d[0];
                out.push(ExpVec(cur.clone()));
            }
            return;
        }
        for b in 0..=rem / d[var] {
            cur[var] = b;
            rec(d, var - 1, rem - b * d[var], cur, out);
        }
        cur[var] = 0;
    }
    if n > 0 {
        rec(&d.0, n - 1, j, &mut cur, &mut out);
    } else if j == 0 {
        out.push(ExpVec(vec![]));
    }
    out
}

/// All exponent vectors with `d . b <= cap`, grouped in the same per-weight
/// order.
pub fn monomials_up_to_weight(n: usize, d: &WeightVec, cap: u32) -> Vec<ExpVec> {
    (0..=cap).flat_map(|j| monomials_of_weight(n, d, j)).collect()
}

/// Sparse multivariate polynomial with exact coefficients. Zero
/// coefficients are never stored; the term map is ordered graded-lex.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<S: Field> {
    nvars: usize,
    terms: BTreeMap<ExpVec, S>,
}

impl<S: Field> MultiPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExpVec::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExpVec::unit(nvars, i), S::one())
    }

    pub fn monomial(e: ExpVec, c: S) -> Self {
        let mut p = Self::zero(e.len());
        p.add_term(e, c);
        p
    }

    /// Linear form `sum row[i] * x_i`.
    pub fn linear(row: &[S]) -> Self {
        let mut p = Self::zero(row.len());
        for (i, c) in row.iter().enumerate() {
            p.add_term(ExpVec::unit(row.len(), i), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &ExpVec) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.total() == 0)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&ExpVec::zero(self.nvars))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(ExpVec::total).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: ExpVec, c: S) {
        assert_eq!(e.len(), self.nvars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), S::zero().sub_ref(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1.add(e2), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), S::zero().sub_ref(c))).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul_ref(s))).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).unwrap();
            }
        }
        acc
    }

    /// Exact partial derivative in variable `var`.
    pub fn derive(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[var] = k - 1;
            out.add_term(e2, c.mul_ref(&S::from_integer(k as i64)));
        }
        out
    }

    /// Iterated derivative `(d/dx_1)^{b_1} ... (d/dx_n)^{b_n}`.
    pub fn derive_multi(&self, b: &ExpVec) -> Self {
        let mut out = self.clone();
        for (var, &k) in b.0.iter().enumerate() {
            for _ in 0..k {
                out = out.derive(var);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        // Memoize powers of each coordinate.
        let mut pows: Vec<Vec<S>> = point.iter().map(|p| vec![S::one(), p.clone()]).collect();
        let mut acc = S::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let last = pows[i].last().unwrap().mul_ref(&point[i]);
                    pows[i].push(last);
                }
                t = t.mul_ref(&pows[i][k as usize]);
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// `(1/b!) (d^b f / dx^b)(q)`, exactly.
    pub fn taylor_coeff(&self, b: &ExpVec, q: &[S]) -> S {
        let d = self.derive_multi(b);
        let v = d.eval(q);
        let inv_fact = S::from_rational(&b.factorial().recip());
        v.mul_ref(&inv_fact)
    }

    /// Sum of the terms with `d . b = j`.
    pub fn weighted_part(&self, d: &WeightVec, j: u32) -> Self {
        assert_eq!(d.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| d.dot(e) == j)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    /// The distinct weighted degrees present, ascending.
    pub fn weights_present(&self, d: &WeightVec) -> Vec<u32> {
        let mut ws: Vec<u32> = self.terms.keys().map(|e| d.dot(e)).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    /// `Some(j)` if every term has weighted degree `j` (zero polynomial is
    /// homogeneous of any weight; returns `None` for it).
    pub fn weighted_degree(&self, d: &WeightVec) -> Option<u32> {
        let ws = self.weights_present(d);
        match ws.as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    /// Substitute each variable by the matching linear combination:
    /// `x_i -> sum_j m[i][j] x_j`. A ring homomorphism.
    pub fn subst_linear(&self, m: &Matrix<S>) -> Result<Self, PolyError> {
        if m.nrows() != self.nvars || m.ncols() != self.nvars {
            return Err(PolyError::VarMismatch(self.nvars, m.nrows()));
        }
        let forms: Vec<MultiPoly<S>> = (0..self.nvars).map(|i| Self::linear(m.row(i))).collect();
        self.compose(&forms)
    }

    /// Exact composition `f(g_1, ..., g_m)`; the `g_i` share a variable
    /// count which becomes the result's.
    pub fn compose(&self, gs: &[MultiPoly<S>]) -> Result<Self, PolyError> {
        if gs.len() != self.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, gs.len()));
        }
        let out_vars = gs.first().map_or(0, MultiPoly::nvars);
        if gs.iter().any(|g| g.nvars != out_vars) {
            return Err(PolyError::VarMismatch(out_vars, 0));
        }
        // Power cache per substituted variable.
        let mut pows: Vec<Vec<MultiPoly<S>>> =
            gs.iter().map(|g| vec![MultiPoly::one(out_vars), g.clone()]).collect();
        let mut acc = MultiPoly::zero(out_vars);
        for (e, c) in self.terms() {
            let mut t = MultiPoly::constant(out_vars, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let last = pows[i].last().unwrap().checked_mul(&gs[i]).unwrap();
                    pows[i].push(last);
                }
                t = t.checked_mul(&pows[i][k as usize]).unwrap();
            }
            acc = acc.checked_add(&t).unwrap();
        }
        Ok(acc)
    }

    /// Shift of origin: `f(x + q)` (per-variable binomial expansion).
    pub fn shift(&self, q: &[S]) -> Self {
        assert_eq!(q.len(), self.nvars);
        let mut cur = self.clone();
        for (var, qv) in q.iter().enumerate() {
            if qv.is_zero() {
                continue;
            }
            let mut next = Self::zero(self.nvars);
            // q-power cache with binomial coefficients folded in per term.
            for (e, c) in cur.terms() {
                let k = e.0[var];
                let mut binom = Rational::one();
                let mut qpow = S::one();
                for r in 0..=k {
                    // coefficient * C(k, r) * q^r at exponent k - r
                    let mut e2 = e.clone();
                    e2.0[var] = k - r;
                    let coeff =
                        c.mul_ref(&S::from_rational(&binom)).mul_ref(&qpow);
                    next.add_term(e2, coeff);
                    if r < k {
                        binom = binom * Rational::from_integer(BigInt::from(k - r))
                            / Rational::from_integer(BigInt::from(r + 1));
                        qpow = qpow.mul_ref(qv);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> MultiPoly<T> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn format_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mut mono = String::new();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(names[i]);
                if k > 1 {
                    mono.push_str(&format!("^{k}"));
                }
            }
            let cs = format!("{c}");
            let piece = if mono.is_empty() {
                format!("({cs})")
            } else if cs == "1" {
                mono
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(piece);
        }
        parts.join(" + ")
    }
}

impl<S: Field> fmt::Debug for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.format_with(&refs))
    }
}

// JSON encoding: {"vars": n, "terms": [{"exp": [...], "coeff": ...}, ...]},
// terms sorted graded-lex (BTreeMap iteration order).
#[derive(Serialize, Deserialize)]
struct TermRepr<S> {
    exp: Vec<u32>,
    coeff: S,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr<S> {
    vars: usize,
    terms: Vec<TermRepr<S>>,
}

impl<S: Field + Serialize> Serialize for MultiPoly<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let repr = PolyRepr {
            vars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exp: e.0.clone(), coeff: c.clone() })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de, S: Field + Deserialize<'de>> Deserialize<'de> for MultiPoly<S> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::<S>::deserialize(deserializer)?;
        let mut p = MultiPoly::zero(repr.vars);
        for t in repr.terms {
            p.add_term(ExpVec(t.exp), t.coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycScalar;

    type QP = MultiPoly<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn u() -> QP {
        QP::var(2, 0)
    }
    fn v() -> QP {
        QP::var(2, 1)
    }

    #[test]
    fn product_expansion() {
        let p = u().checked_mul(&v()).unwrap();
        assert_eq!(p.coeff(&ExpVec(vec![1, 1])), q(1));

        // (u+v)(u-v) = u^2 - v^2
        let s = u().checked_add(&v()).unwrap();
        let d = u().checked_sub(&v()).unwrap();
        let prod = s.checked_mul(&d).unwrap();
        let expect = u().pow(2).checked_sub(&v().pow(2)).unwrap();
        assert_eq!(prod, expect);

        // (uv)(u^4 + v^4) = u^5 v + u v^5
        let f = u().checked_mul(&v()).unwrap();
        let g = u().pow(4).checked_add(&v().pow(4)).unwrap();
        let fg = f.checked_mul(&g).unwrap();
        let mut expect = QP::zero(2);
        expect.add_term(ExpVec(vec![5, 1]), q(1));
        expect.add_term(ExpVec(vec![1, 5]), q(1));
        assert_eq!(fg, expect);
    }

    #[test]
    fn derivatives() {
        assert_eq!(u().pow(3).derive(0), u().pow(2).scale(&q(3)));
        assert_eq!(u().checked_mul(&v()).unwrap().derive(0), v());
        // mixed partials commute
        let f = u().pow(2).checked_mul(&v().pow(2)).unwrap();
        let a = f.derive(0).derive(1);
        let b = f.derive(1).derive(0);
        assert_eq!(a, b);
        assert_eq!(a, u().checked_mul(&v()).unwrap().scale(&q(4)));
    }

    #[test]
    fn taylor_coefficients() {
        let f = u().pow(5);
        assert_eq!(f.taylor_coeff(&ExpVec(vec![5, 0]), &[q(7), q(3)]), q(1));
        let g = u().checked_mul(&v()).unwrap();
        assert_eq!(g.taylor_coeff(&ExpVec(vec![1, 1]), &[q(2), q(5)]), q(1));
        // (u-1)^3, derivative order (2,0), at q=(1,0): 3(u-1) evaluated at 1 is 0
        let h = u().checked_sub(&QP::one(2)).unwrap().pow(3);
        assert_eq!(h.taylor_coeff(&ExpVec(vec![2, 0]), &[q(1), q(0)]), q(0));
    }

    #[test]
    fn weighted_parts_partition() {
        let d = WeightVec::new(vec![2, 4]);
        let f = u()
            .checked_mul(&v())
            .unwrap()
            .checked_add(&u().pow(4))
            .unwrap();
        assert_eq!(f.weighted_part(&d, 6), u().checked_mul(&v()).unwrap());
        assert_eq!(f.weighted_part(&d, 8), u().pow(4));
        let mut sum = QP::zero(2);
        for j in f.weights_present(&d) {
            sum = sum.checked_add(&f.weighted_part(&d, j)).unwrap();
        }
        assert_eq!(sum, f);
    }

    #[test]
    fn monomial_enumeration() {
        let d = WeightVec::new(vec![2, 4]);
        assert_eq!(
            monomials_of_weight(2, &d, 4),
            vec![ExpVec(vec![2, 0]), ExpVec(vec![0, 1])]
        );
        let d = WeightVec::new(vec![2, 3]);
        assert_eq!(monomials_of_weight(2, &d, 5), vec![ExpVec(vec![1, 1])]);
        let d = WeightVec::new(vec![2, 6, 10]);
        assert_eq!(
            monomials_of_weight(3, &d, 12),
            vec![
                ExpVec(vec![6, 0, 0]),
                ExpVec(vec![3, 1, 0]),
                ExpVec(vec![0, 2, 0]),
                ExpVec(vec![1, 0, 1])
            ]
        );
        // brute force oracle
        let d = WeightVec::new(vec![2, 6, 10]);
        let mut brute = Vec::new();
        for b1 in 0..=6 {
            for b2 in 0..=2 {
                for b3 in 0..=1 {
                    if 2 * b1 + 6 * b2 + 10 * b3 == 12 {
                        brute.push(ExpVec(vec![b1, b2, b3]));
                    }
                }
            }
        }
        let mut got = monomials_of_weight(3, &d, 12);
        got.sort_by(|a, b| a.0.cmp(&b.0));
        brute.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, brute);
    }

    #[test]
    fn substitution_is_homomorphism() {
        // swap matrix fixes uv
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        let f = u().checked_mul(&v()).unwrap();
        assert_eq!(f.subst_linear(&swap).unwrap(), f);
        let id = Matrix::identity(2);
        assert_eq!(u().subst_linear(&id).unwrap(), u());

        // exact 90-degree rotation preserves u^2 + v^2
        type CP = MultiPoly<CycScalar>;
        let g: CP = CP::var(2, 0).pow(2).checked_add(&CP::var(2, 1).pow(2)).unwrap();
        let r90 = Matrix::from_rows(vec![
            vec![CycScalar::integer(0), CycScalar::integer(-1)],
            vec![CycScalar::integer(1), CycScalar::integer(0)],
        ]);
        assert_eq!(g.subst_linear(&r90).unwrap(), g);
        // the zeta_4-diagonalized rotation fixes the product of the
        // eigencoordinates: u -> zeta_4 u, v -> zeta_4^-1 v
        let i = CycScalar::zeta(4, 1).unwrap();
        let rot = Matrix::from_rows(vec![
            vec![i.clone(), CycScalar::integer(0)],
            vec![CycScalar::integer(0), CycScalar::integer(1).checked_div(&i).unwrap()],
        ]);
        let h: CP = CP::var(2, 0).checked_mul(&CP::var(2, 1)).unwrap();
        assert_eq!(h.subst_linear(&rot).unwrap(), h);
    }

    #[test]
    fn composition() {
        // f(X, Y) = X*Y with X = uv, Y = u^3 + v^3
        let f = QP::var(2, 0).checked_mul(&QP::var(2, 1)).unwrap();
        let g1 = u().checked_mul(&v()).unwrap();
        let g2 = u().pow(3).checked_add(&v().pow(3)).unwrap();
        let comp = f.compose(&[g1.clone(), g2.clone()]).unwrap();
        assert_eq!(comp, g1.checked_mul(&g2).unwrap());
        // identity composition
        let idf = QP::var(1, 0);
        assert_eq!(idf.compose(&[g2.clone()]).unwrap(), g2);
        // arity error
        assert!(f.compose(&[g1]).is_err());
    }

    #[test]
    fn shift_matches_taylor() {
        let f = u().pow(3).checked_mul(&v()).unwrap();
        let qpt = [q(2), q(-1)];
        let shifted = f.shift(&qpt);
        // shifted coefficient at e equals taylor coefficient of f at q
        for (e, c) in shifted.terms() {
            assert_eq!(c, &f.taylor_coeff(e, &qpt), "coefficient at {e:?}");
        }
        // and shifting back is the identity
        let back = shifted.shift(&[q(-2), q(1)]);
        assert_eq!(back, f);
    }

    #[test]
    fn serde_roundtrip() {
        type CP = MultiPoly<CycScalar>;
        let f: CP = CP::var(2, 0)
            .pow(2)
            .checked_add(&CP::var(2, 1).pow(3).scale(&CycScalar::zeta(4, 1).unwrap()))
            .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: CP = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
