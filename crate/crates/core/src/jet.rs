//! Truncated Taylor expansions ("jets") at a point, graded by weighted
//! degree.
//!
//! A `Jet` stores the coefficients of `f(q + z)` for all multi-indices `b`
//! with `d . b <= cap`. The coefficient at `b` is exactly
//! `(1/b!) (d^b f / dz^b)(q)`, so weighted sweeps of Taylor coefficients are
//! coefficient lookups. Multiplication truncates: the product of two jets is
//! exact up to the smaller cap, because weighted degrees are non-negative
//! and add under multiplication.

use crate::polyring::{ExpVec, MultiPoly, WeightVec};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet<S: Field> {
    terms: MultiPoly<S>,
    weights: WeightVec,
    cap: u32,
}

impl<S: Field> Jet<S> {
    pub fn constant(c: S, weights: &WeightVec, cap: u32) -> Self {
        Jet { terms: MultiPoly::constant(weights.len(), c), weights: weights.clone(), cap }
    }

    pub fn zero(weights: &WeightVec, cap: u32) -> Self {
        Jet { terms: MultiPoly::zero(weights.len()), weights: weights.clone(), cap }
    }

    /// Expand `f` at `q`: the jet of `f(q + z)`, truncated at `cap`.
    pub fn from_poly(f: &MultiPoly<S>, q: &[S], weights: &WeightVec, cap: u32) -> Self {
        let shifted = f.shift(q);
        Self::from_shifted(shifted, weights, cap)
    }

    /// Wrap a polynomial already expressed in the shifted coordinates.
    pub fn from_shifted(shifted: MultiPoly<S>, weights: &WeightVec, cap: u32) -> Self {
        let mut terms = MultiPoly::zero(weights.len());
        for (e, c) in shifted.terms() {
            if weights.dot(e) <= cap {
                terms.add_term(e.clone(), c.clone());
            }
        }
        Jet { terms, weights: weights.clone(), cap }
    }

    /// Jet of the linear form `row . z`, whose value at `q` is `row . q`.
    pub fn from_linear(row: &[S], q: &[S], weights: &WeightVec, cap: u32) -> Self {
        let mut value = S::zero();
        for (r, qv) in row.iter().zip(q) {
            if !r.is_zero() && !qv.is_zero() {
                value = value.add_ref(&r.mul_ref(qv));
            }
        }
        let mut terms = MultiPoly::constant(weights.len(), value);
        for (i, r) in row.iter().enumerate() {
            if weights.0[i] <= cap {
                terms.add_term(ExpVec::unit(weights.len(), i), r.clone());
            }
        }
        Jet { terms, weights: weights.clone(), cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn weights(&self) -> &WeightVec {
        &self.weights
    }

    /// `f(q)`.
    pub fn value(&self) -> S {
        self.terms.constant_term()
    }

    /// `(1/b!) (d^b f / dz^b)(q)`. Panics if `b` is beyond the cap.
    pub fn coeff(&self, b: &ExpVec) -> S {
        assert!(self.weights.dot(b) <= self.cap, "jet coefficient beyond cap");
        self.terms.coeff(b)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &S)> {
        self.terms.terms()
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = MultiPoly::zero(self.weights.len());
        for (e, c) in self.terms.terms().chain(other.terms.terms()) {
            if self.weights.dot(e) <= cap {
                out.add_term(e.clone(), c.clone());
            }
        }
        Jet { terms: out, weights: self.weights.clone(), cap }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Jet { terms: self.terms.neg(), weights: self.weights.clone(), cap: self.cap }
    }

    pub fn scale(&self, s: &S) -> Self {
        Jet { terms: self.terms.scale(s), weights: self.weights.clone(), cap: self.cap }
    }

    /// Subtract the constant term (the jet of `f - f(q)`).
    pub fn minus_value(&self) -> Self {
        let mut terms = self.terms.clone();
        let v = terms.constant_term();
        if !v.is_zero() {
            terms.add_term(ExpVec::zero(self.weights.len()), S::zero().sub_ref(&v));
        }
        Jet { terms, weights: self.weights.clone(), cap: self.cap }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let n = self.weights.len();
        let mut out = MultiPoly::zero(n);
        // weights of both factors are needed once per term
        let aw: Vec<(&ExpVec, &S, u32)> =
            self.terms.terms().map(|(e, c)| (e, c, self.weights.dot(e))).collect();
        let bw: Vec<(&ExpVec, &S, u32)> =
            other.terms.terms().map(|(e, c)| (e, c, other.weights.dot(e))).collect();
        for (ea, ca, wa) in &aw {
            if *wa > cap {
                continue;
            }
            for (eb, cb, wb) in &bw {
                if wa + wb > cap {
                    continue;
                }
                out.add_term(ea.add(eb), ca.mul_ref(cb));
            }
        }
        Jet { terms: out, weights: self.weights.clone(), cap }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(S::one(), &self.weights, self.cap);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Jet of the partial derivative; the cap drops by the variable weight.
    pub fn derive(&self, var: usize) -> Self {
        let cap = self.cap.saturating_sub(self.weights.0[var]);
        let mut terms = MultiPoly::zero(self.weights.len());
        for (e, c) in self.terms.derive(var).terms() {
            if self.weights.dot(e) <= cap {
                terms.add_term(e.clone(), c.clone());
            }
        }
        Jet { terms, weights: self.weights.clone(), cap }
    }

    /// The weight-`j` slice, reinterpreted as a polynomial in `z`.
    pub fn slice(&self, j: u32) -> MultiPoly<S> {
        assert!(j <= self.cap, "slice beyond cap");
        self.terms.weighted_part(&self.weights, j)
    }
}

/// Elementary symmetric polynomials `e_0..e_k` of a list of jets, by the
/// standard one-row DP.
pub fn elementary_symmetric<S: Field>(items: &[Jet<S>], k: usize) -> Vec<Jet<S>> {
    assert!(!items.is_empty());
    let w = items[0].weights().clone();
    let cap = items[0].cap();
    let mut e: Vec<Jet<S>> = Vec::with_capacity(k + 1);
    e.push(Jet::constant(S::one(), &w, cap));
    for j in 1..=k {
        let _ = j;
        e.push(Jet::zero(&w, cap));
    }
    for t in items {
        for j in (1..=k).rev() {
            let bump = e[j - 1].mul(t);
            e[j] = e[j].add(&bump);
        }
    }
    e
}

/// Same DP for full polynomials.
pub fn elementary_symmetric_poly<S: Field>(
    items: &[MultiPoly<S>],
    k: usize,
) -> Vec<MultiPoly<S>> {
    assert!(!items.is_empty());
    let n = items[0].nvars();
    let mut e: Vec<MultiPoly<S>> = Vec::with_capacity(k + 1);
    e.push(MultiPoly::one(n));
    for _ in 1..=k {
        e.push(MultiPoly::zero(n));
    }
    for t in items {
        for j in (1..=k).rev() {
            let bump = e[j - 1].checked_mul(t).unwrap();
            e[j] = e[j].checked_add(&bump).unwrap();
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;

    type QP = MultiPoly<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn jet_matches_taylor_coefficients() {
        let d = WeightVec::new(vec![2, 3]);
        let f = QP::var(2, 0)
            .pow(3)
            .checked_mul(&QP::var(2, 1))
            .unwrap()
            .checked_add(&QP::var(2, 1).pow(2))
            .unwrap();
        let pt = [q(1), q(-2)];
        let jet = Jet::from_poly(&f, &pt, &d, 12);
        for b in [vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 1], vec![3, 1]] {
            let b = ExpVec(b);
            if d.dot(&b) <= 12 {
                assert_eq!(jet.coeff(&b), f.taylor_coeff(&b, &pt), "at {b:?}");
            }
        }
        assert_eq!(jet.value(), f.eval(&pt));
    }

    #[test]
    fn truncated_product_is_exact_below_cap() {
        let d = WeightVec::new(vec![2, 3]);
        let f = QP::var(2, 0).checked_add(&QP::var(2, 1)).unwrap();
        let g = QP::var(2, 0).pow(2).checked_sub(&QP::one(2)).unwrap();
        let pt = [q(2), q(3)];
        let cap = 8;
        let jf = Jet::from_poly(&f, &pt, &d, cap);
        let jg = Jet::from_poly(&g, &pt, &d, cap);
        let jfg = jf.mul(&jg);
        let fg = f.checked_mul(&g).unwrap();
        let exact = Jet::from_poly(&fg, &pt, &d, cap);
        assert_eq!(jfg, exact);
    }

    #[test]
    fn derivative_jets() {
        let d = WeightVec::new(vec![2, 3]);
        let f = QP::var(2, 0).pow(4).checked_mul(&QP::var(2, 1).pow(2)).unwrap();
        let pt = [q(1), q(1)];
        let jet = Jet::from_poly(&f, &pt, &d, 20);
        let df = f.derive(0);
        let jet_df = Jet::from_poly(&df, &pt, &d, 18);
        assert_eq!(jet.derive(0), jet_df);
    }

    #[test]
    fn esym_dp_matches_direct_expansion() {
        let d = WeightVec::new(vec![1, 1, 1]);
        let pt = [q(0), q(0), q(0)];
        let vars: Vec<QP> = (0..3).map(|i| QP::var(3, i)).collect();
        let jets: Vec<Jet<Rational>> =
            vars.iter().map(|v| Jet::from_poly(v, &pt, &d, 10)).collect();
        let es = elementary_symmetric(&jets, 3);
        // e_2 = xy + xz + yz
        let mut expect = QP::zero(3);
        expect.add_term(ExpVec(vec![1, 1, 0]), q(1));
        expect.add_term(ExpVec(vec![1, 0, 1]), q(1));
        expect.add_term(ExpVec(vec![0, 1, 1]), q(1));
        assert_eq!(es[2].slice(2), expect);
        let ps = elementary_symmetric_poly(&vars, 3);
        assert_eq!(ps[2], expect);
    }
}
