//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Every scalar in this crate is a [`CycScalar`]: a vector of big rationals
//! giving coordinates in the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q(zeta_N)`, reduced modulo the N-th cyclotomic polynomial. All operations
//! are exact; floating point appears only in [`CycScalar::approx`], which is
//! reporting-only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

/// Arbitrary-precision rational. Always stored reduced with positive
/// denominator (num-rational maintains the invariant).
pub type Rational = BigRational;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("conductor {0} exceeds the configured cap {1}")]
    ConductorCap(u32, u32),
    #[error("cannot lift conductor {from} to {to}: {from} does not divide {to}")]
    BadLift { from: u32, to: u32 },
    #[error("value at conductor {from} does not lie in Q(zeta_{to})")]
    NotInSubfield { from: u32, to: u32 },
}

static CONDUCTOR_CAP: AtomicU32 = AtomicU32::new(120);

/// Current conductor guard. Arithmetic whose result would need a cyclotomic
/// field `Q(zeta_N)` with `N` above this cap fails instead of running away.
pub fn conductor_cap() -> u32 {
    CONDUCTOR_CAP.load(Ordering::Relaxed)
}

/// Override the conductor guard (CLI startup knob; default 120).
pub fn set_conductor_cap(cap: u32) {
    CONDUCTOR_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Euler totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    let mut ds: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    ds.sort_unstable();
    ds
}

/// Per-conductor data: the cyclotomic polynomial and reduction rows for
/// powers of zeta at and above phi(N). Memoized; the tables are pure
/// functions of N.
struct CycTable {
    phi: usize,
    /// `x^k mod Phi_N` for `k` in `phi ..= max_pow`, as coordinate rows.
    rows: Vec<Vec<Rational>>,
}

impl CycTable {
    fn reduce_power(&self, k: usize) -> Option<&[Rational]> {
        if k < self.phi {
            None
        } else {
            Some(&self.rows[k - self.phi])
        }
    }
}

fn cyclotomic_int(n: u32, memo: &mut BTreeMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_int(d, memo);
        num = poly_div_exact_int(&num, &phi_d);
    }
    memo.insert(n, num.clone());
    num
}

/// Exact division of integer polynomials (monic divisor), coefficients
/// ascending. Panics on nonzero remainder; callers only divide x^n - 1 by
/// known factors.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let dn = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[k + j] -= t;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division");
    quot
}

fn table(n: u32) -> Result<Arc<CycTable>, ScalarError> {
    let cap = conductor_cap();
    if n > cap {
        return Err(ScalarError::ConductorCap(n, cap));
    }
    static TABLES: OnceLock<Mutex<BTreeMap<u32, Arc<CycTable>>>> = OnceLock::new();
    let lock = TABLES.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut map = lock.lock().unwrap();
    if let Some(t) = map.get(&n) {
        return Ok(t.clone());
    }
    let mut memo = BTreeMap::new();
    let min_poly = cyclotomic_int(n, &mut memo);
    let phi = min_poly.len() - 1;
    // Rows for x^k mod Phi_N, k from phi up to max(2 phi - 2, n - 1); the
    // upper bound covers both products and conductor lifts.
    let max_pow = (2 * phi).saturating_sub(2).max(n as usize - 1).max(phi);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(max_pow - phi + 1);
    // x^phi = -(lower coefficients) since Phi_N is monic.
    let base: Vec<Rational> = min_poly[..phi]
        .iter()
        .map(|c| Rational::from_integer(-c.clone()))
        .collect();
    rows.push(base);
    for _ in phi + 1..=max_pow {
        let prev = rows.last().unwrap();
        // multiply by x: shift, then fold the overflow coefficient.
        let top = prev[phi - 1].clone();
        let mut next = vec![Rational::zero(); phi];
        for i in 1..phi {
            next[i] = prev[i - 1].clone();
        }
        if !top.is_zero() {
            let fold = &rows[0];
            for i in 0..phi {
                next[i] += &top * &fold[i];
            }
        }
        rows.push(next);
    }
    let t = Arc::new(CycTable { phi, rows });
    map.insert(n, t.clone());
    Ok(t)
}

/// An element of the cyclotomic field `Q(zeta_N)`, stored fully reduced
/// modulo `Phi_N`. Immutable after construction; equality is equality of
/// values (operands are lifted to a common conductor when they differ).
#[derive(Clone)]
pub struct CycScalar {
    conductor: u32,
    coords: Vec<Rational>,
}

impl CycScalar {
    /// Build from power-basis coordinates of any length; reduces mod Phi_N.
    pub fn from_coords(conductor: u32, coords: Vec<Rational>) -> Result<Self, ScalarError> {
        let t = table(conductor)?;
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in coords.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match t.reduce_power(k) {
                None => out[k] += c,
                Some(row) => {
                    for i in 0..t.phi {
                        if !row[i].is_zero() {
                            out[i] += &c * &row[i];
                        }
                    }
                }
            }
        }
        Ok(CycScalar { conductor, coords: out })
    }

    pub fn rational(r: Rational) -> Self {
        CycScalar { conductor: 1, coords: vec![r] }
    }

    pub fn integer(k: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `zeta_N^k`, reduced. `k` may be negative.
    pub fn zeta(n: u32, k: i64) -> Result<Self, ScalarError> {
        let t = table(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut coords = vec![Rational::zero(); t.phi.max(e + 1)];
        coords[e] = Rational::one();
        Self::from_coords(n, coords)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Express the same value at conductor `m` (requires `conductor | m`).
    pub fn lift(&self, m: u32) -> Result<Self, ScalarError> {
        if m == self.conductor {
            return Ok(self.clone());
        }
        if m % self.conductor != 0 {
            return Err(ScalarError::BadLift { from: self.conductor, to: m });
        }
        let stride = (m / self.conductor) as usize;
        let t = table(m)?;
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = k * stride;
            match t.reduce_power(e) {
                None => out[e] += c,
                Some(row) => {
                    for i in 0..t.phi {
                        if !row[i].is_zero() {
                            out[i] += c * &row[i];
                        }
                    }
                }
            }
        }
        Ok(CycScalar { conductor: m, coords: out })
    }

    /// Try to express the value at a divisor conductor `m`. Fails with
    /// `NotInSubfield` if the value genuinely needs the larger field.
    pub fn reduce_to(&self, m: u32) -> Result<Self, ScalarError> {
        if m == self.conductor {
            return Ok(self.clone());
        }
        if self.conductor % m != 0 {
            return Err(ScalarError::BadLift { from: m, to: self.conductor });
        }
        let phi_m = euler_phi(m) as usize;
        // Columns: lifts of the power basis of Q(zeta_m); solve for the
        // coordinates by exact elimination.
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(phi_m);
        for k in 0..phi_m {
            let mut coords = vec![Rational::zero(); phi_m];
            coords[k] = Rational::one();
            let basis = CycScalar::from_coords(m, coords)?;
            cols.push(basis.lift(self.conductor)?.coords);
        }
        let phi_n = self.coords.len();
        // Augmented elimination on the (phi_n x phi_m) system.
        let mut a: Vec<Vec<Rational>> = (0..phi_n)
            .map(|r| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
                row.push(self.coords[r].clone());
                row
            })
            .collect();
        let mut piv_rows = Vec::new();
        let mut r0 = 0usize;
        for c in 0..phi_m {
            let Some(pr) = (r0..phi_n).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(r0, pr);
            let inv = a[r0][c].recip();
            for x in a[r0].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..phi_n {
                if r != r0 && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..=phi_m {
                        let t = &a[r0][j] * &f;
                        a[r][j] -= t;
                    }
                }
            }
            piv_rows.push((r0, c));
            r0 += 1;
        }
        // Residual rows must be zero.
        for r in r0..phi_n {
            if !a[r][phi_m].is_zero() {
                return Err(ScalarError::NotInSubfield { from: self.conductor, to: m });
            }
        }
        let mut sol = vec![Rational::zero(); phi_m];
        for (r, c) in piv_rows {
            sol[c] = a[r][phi_m].clone();
        }
        CycScalar::from_coords(m, sol)
    }

    /// Smallest conductor (divisor of the current one) containing the value.
    pub fn reduced(&self) -> Self {
        for d in divisors(self.conductor) {
            if let Ok(v) = self.reduce_to(d) {
                return v;
            }
        }
        self.clone()
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), ScalarError> {
        if self.conductor == other.conductor {
            return Ok((self.clone(), other.clone()));
        }
        let l = lcm_u32(self.conductor, other.conductor);
        Ok((self.lift(l)?, other.lift(l)?))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x += y;
        }
        Ok(a)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        // Rational fast paths keep the common case cheap.
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return Ok(CycScalar::rational(Rational::zero()));
            }
            let mut out = other.clone();
            for c in out.coords.iter_mut() {
                if !c.is_zero() {
                    *c = &*c * r;
                }
            }
            return Ok(out);
        }
        if let Some(r) = other.as_rational() {
            return other_scale(self, r);
        }
        let (a, b) = self.common(other)?;
        let t = table(a.conductor)?;
        let phi = t.phi;
        let mut conv = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        let mut out = conv[..phi].to_vec();
        for k in phi..2 * phi - 1 {
            if conv[k].is_zero() {
                continue;
            }
            let row = t.reduce_power(k).unwrap();
            for i in 0..phi {
                if !row[i].is_zero() {
                    out[i] += &conv[k] * &row[i];
                }
            }
        }
        Ok(CycScalar { conductor: a.conductor, coords: out })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_N` in `Q[x]`.
    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero(self.conductor));
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycScalar {
                conductor: self.conductor,
                coords: {
                    let mut c = vec![Rational::zero(); self.coords.len()];
                    c[0] = r.recip();
                    c
                },
            });
        }
        let mut memo = BTreeMap::new();
        let phi_poly: Vec<Rational> = cyclotomic_int(self.conductor, &mut memo)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let (g, _, v) = poly_ext_gcd(&phi_poly, &self.coords);
        // Phi_N is irreducible over Q, so gcd(Phi_N, a) is a nonzero constant.
        debug_assert_eq!(poly_degree(&g), Some(0));
        let ginv = g[0].recip();
        let coords: Vec<Rational> = v.iter().map(|c| c * &ginv).collect();
        CycScalar::from_coords(self.conductor, coords)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        let (a, b) = self.common(other)?;
        let binv = b.checked_inv()?;
        a.checked_mul(&binv)
    }

    /// Exact integer power (negative exponents invert).
    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return CycScalar::rational(Rational::one());
        }
        let base = if k < 0 {
            self.checked_inv().expect("pow of zero to negative exponent")
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = CycScalar::rational(Rational::one());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&b).expect("conductor stable under pow");
            }
            e >>= 1;
            if e > 0 {
                b = b.checked_mul(&b).expect("conductor stable under pow");
            }
        }
        acc
    }

    /// Multiplicative order, if the value is a root of unity with order
    /// at most `bound`.
    pub fn mult_order(&self, bound: u32) -> Option<u32> {
        let one = CycScalar::rational(Rational::one());
        let mut p = self.clone();
        for k in 1..=bound {
            if p == one {
                return Some(k);
            }
            p = p.checked_mul(self).ok()?;
        }
        None
    }

    /// Numerical evaluation at `zeta_N = exp(2 pi i / N)`. Reporting only.
    pub fn approx(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.conductor as f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let a = theta * k as f64;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }
}

fn other_scale(a: &CycScalar, r: &Rational) -> Result<CycScalar, ScalarError> {
    if r.is_zero() {
        return Ok(CycScalar::rational(Rational::zero()));
    }
    let mut out = a.clone();
    for c in out.coords.iter_mut() {
        if !c.is_zero() {
            *c = &*c * r;
        }
    }
    Ok(out)
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64 * (b / a.gcd(&b)) as u64) as u32
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Extended gcd of rational polynomials (coefficients ascending):
/// returns (g, u, v) with u*a + v*b = g.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    let mut t0 = vec![Rational::zero()];
    let mut t1 = vec![Rational::one()];
    while poly_degree(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    let dn = match poly_degree(&rem) {
        Some(d) => d,
        None => return (vec![Rational::zero()], rem),
    };
    if dn < dd {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[k + j] -= t;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        match self.common(other) {
            Ok((a, b)) => a.coords == b.coords,
            Err(_) => false,
        }
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]{:?}", self.conductor, self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.conductor, k)?;
            } else {
                write!(f, "{a}*z{}^{}", self.conductor, k)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                self.$checked(&rhs).expect("cyclotomic arithmetic failed")
            }
        }
        impl<'a> std::ops::$trait<&'a CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'a CycScalar) -> CycScalar {
                self.$checked(rhs).expect("cyclotomic arithmetic failed")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl std::ops::Neg for CycScalar {
    type Output = CycScalar;
    fn neg(mut self) -> CycScalar {
        for c in self.coords.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl std::ops::Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -self.clone()
    }
}

impl std::ops::AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = self.checked_add(rhs).expect("cyclotomic arithmetic failed");
    }
}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar::rational(Rational::one())
    }
}

/// The exact scalar fields the core is generic over: the rationals and the
/// cyclotomic fields. Floating-point types deliberately do not implement
/// this; every computation in the crate is exact.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &Rational) -> Self;
    fn from_integer(k: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(k)))
    }
    fn try_inv(&self) -> Option<Self>;
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}

impl Field for CycScalar {
    fn from_rational(r: &Rational) -> Self {
        CycScalar::rational(r.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("cyclotomic arithmetic failed")
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).expect("cyclotomic arithmetic failed")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("cyclotomic arithmetic failed")
    }
}

fn bigint_from_str(s: &str) -> Result<BigInt, String> {
    s.parse::<BigInt>().map_err(|e| format!("bad integer {s:?}: {e}"))
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CycScalar", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        let coords: Vec<[String; 2]> = self
            .coords
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            conductor: u32,
            coords: Vec<[String; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let coords: Result<Vec<Rational>, String> = raw
            .coords
            .iter()
            .map(|[n, d]| Ok(Rational::new(bigint_from_str(n)?, bigint_from_str(d)?)))
            .collect();
        CycScalar::from_coords(raw.conductor, coords.map_err(D::Error::custom)?)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u32, k: i64) -> CycScalar {
        CycScalar::zeta(n, k).unwrap()
    }

    #[test]
    fn zeta_basics() {
        assert_eq!(zeta(1, 0), CycScalar::integer(1));
        assert_eq!(zeta(6, 3), CycScalar::integer(-1));
        let s = zeta(5, 1) + zeta(5, 2) + zeta(5, 3) + zeta(5, 4);
        assert_eq!(s, CycScalar::integer(-1));
    }

    #[test]
    fn phi_3_relation() {
        // zeta_3 + zeta_3^2 = -1
        assert_eq!(zeta(3, 1) + zeta(3, 2), CycScalar::integer(-1));
        // i^2 = -1
        assert_eq!(zeta(4, 1) * zeta(4, 1), CycScalar::integer(-1));
    }

    #[test]
    fn division_against_euclid_oracle() {
        let a = CycScalar::integer(1) + zeta(5, 1);
        let inv = CycScalar::integer(1).checked_div(&a).unwrap();
        assert_eq!(inv.checked_mul(&a).unwrap(), CycScalar::integer(1));
        assert!(CycScalar::integer(1)
            .checked_div(&CycScalar::integer(0))
            .is_err());
    }

    #[test]
    fn lift_and_reduce_roundtrip() {
        let m1 = CycScalar::integer(-1);
        let lifted = m1.lift(6).unwrap();
        assert_eq!(lifted, CycScalar::integer(-1));
        assert_eq!(lifted.conductor(), 6);

        let z3 = zeta(3, 1);
        assert_eq!(z3.lift(6).unwrap(), zeta(6, 2));

        // zeta_4 -> zeta_12^3, verified by cubing.
        let z4 = zeta(4, 1).lift(12).unwrap();
        assert_eq!(z4, zeta(12, 3));
        assert_eq!(z4.pow(2), CycScalar::integer(-1));

        let back = z4.reduce_to(4).unwrap();
        assert_eq!(back.conductor(), 4);
        assert_eq!(back, zeta(4, 1));
        assert!(zeta(12, 1).reduce_to(4).is_err());
    }

    #[test]
    fn multiplicative_orders() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 10, 12, 24, 30, 40] {
            assert_eq!(zeta(n, 1).mult_order(2 * n), Some(n), "order of zeta_{n}");
        }
    }

    #[test]
    fn approx_golden_ratio() {
        let v = zeta(5, 1) + zeta(5, 4);
        let (re, im) = v.approx();
        assert!((re - 0.618033988749894).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
        let (re, im) = CycScalar::integer(-1).approx();
        assert!((re + 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        let (re, im) = zeta(4, 1).approx();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conductor_cap_guard() {
        let err = CycScalar::zeta(1000, 1).unwrap_err();
        assert!(matches!(err, ScalarError::ConductorCap(1000, _)));
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        let a = zeta(3, 1);
        let b = zeta(4, 1);
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, zeta(12, 7)); // zeta_3 zeta_4 = zeta_12^4 zeta_12^3
    }

    #[test]
    fn serde_roundtrip() {
        let v = zeta(12, 5) + CycScalar::ratio(3, 7);
        let s = serde_json::to_string(&v).unwrap();
        let w: CycScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(v, w);
    }
}
