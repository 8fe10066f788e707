//! Admissible triplets, the graded Taylor morphisms, good basic invariants,
//! and triplet equivalence.
//!
//! The morphism `psi` sends a weight-`j` invariant to the weight-`j` part of
//! its Taylor expansion at the regular eigenvector `q`; a set of basic
//! invariants is good when `psi(x^alpha) = z^alpha`. Computations run on
//! jets (truncated expansions at `q`), which carry every Taylor coefficient
//! the checks need.

use crate::groups::{
    eigen_frame, Cyc, CycJet, CycMatrix, CycPoly, EigenFrame, GroupError, InitialBasis,
    ReflectionGroup,
};
use crate::jet::Jet;
use crate::linalg::{same_row_span, Matrix};
use crate::polyring::{monomials_of_weight, ExpVec, WeightVec};
use crate::report::CheckReport;
use crate::scalar::{CycScalar, Rational, ScalarError};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GoodBasisError {
    #[error("triplet is not admissible: {0}")]
    NotAdmissible(String),
    #[error("psi matrix at weight {0} is singular")]
    SingularPsi(u32),
    #[error("invalid triplet transformation: {0}")]
    BadTransform(String),
    #[error("goodness verification failed: {0}")]
    Goodness(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A triplet `(g, zeta, q)` together with the normalized eigenframe, kept
/// valid by eager re-validation in every constructor.
#[derive(Clone)]
pub struct AdmissibleTriplet {
    pub group: Arc<ReflectionGroup>,
    pub g: CycMatrix,
    pub zeta: Cyc,
    pub q_y: Vec<Cyc>,
    pub frame: EigenFrame,
}

impl AdmissibleTriplet {
    /// The standard triplet: Coxeter element, `zeta_h`, normalized regular
    /// eigenvector.
    pub fn standard(group: Arc<ReflectionGroup>) -> Result<Self, GoodBasisError> {
        let c = group.coxeter_element();
        let h = group.coxeter_number();
        let zeta = Cyc::zeta(group.conductor, (group.conductor / h) as i64)?;
        let frame = eigen_frame(&group, &c, &zeta)?;
        Ok(AdmissibleTriplet { q_y: frame.q_y.clone(), g: c, zeta, frame, group })
    }

    /// Jet cap large enough for every sweep in the pipeline (weights up to
    /// `2 d_n` plus one more `d_n` for derivative jets).
    pub fn jet_cap(&self) -> u32 {
        3 * self.group.coxeter_number()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// Eager validation against the three admissibility clauses, using jets
    /// of the initial invariants for the Jacobian clause.
    pub fn validate(&self, initial: &InitialBasis) -> Result<(), GoodBasisError> {
        let bound = initial.bind(&self.frame, self.group.degrees.top() + 1);
        let report = check_admissible_jets(self, &bound.jets);
        if !report.passed() {
            return Err(GoodBasisError::NotAdmissible(report.summary()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClauseReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail per admissibility clause, with the offending data on failure.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub eigenvector: ClauseReport,
    pub jacobian: ClauseReport,
    pub spectrum: ClauseReport,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.eigenvector.passed && self.jacobian.passed && self.spectrum.passed
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for c in [&self.eigenvector, &self.jacobian, &self.spectrum] {
            if !c.passed {
                parts.push(format!("{} failed: {}", c.name, c.detail));
            }
        }
        if parts.is_empty() {
            "all clauses pass".into()
        } else {
            parts.join("; ")
        }
    }
}

fn clause_eigenvector(g: &CycMatrix, zeta: &Cyc, q_y: &[Cyc], h: u32) -> ClauseReport {
    let gq = g.matvec(q_y);
    let zq: Vec<Cyc> = q_y.iter().map(|c| c.checked_mul(zeta).unwrap()).collect();
    let mut passed = gq == zq && q_y.iter().any(|c| !c.is_zero());
    let mut detail = String::new();
    if !passed {
        detail = "q is not a nonzero zeta-eigenvector of g".into();
    } else {
        match zeta.mult_order(2 * h) {
            Some(o) if o == h => {}
            o => {
                passed = false;
                detail = format!("zeta has multiplicative order {o:?}, expected exactly {h}");
            }
        }
    }
    ClauseReport { name: "eigenvector (i)".into(), passed, detail }
}

fn clause_spectrum(group: &ReflectionGroup, g: &CycMatrix, zeta: &Cyc) -> ClauseReport {
    let n = group.rank();
    // expected eigenvalue multiset on V: zeta^(1 - d_alpha)
    let mut expected: BTreeMap<Vec<Rational>, (Cyc, usize)> = BTreeMap::new();
    for &d in &group.degrees.0 {
        let lambda = zeta.pow(1 - d as i64);
        let key: Vec<Rational> = lambda
            .lift(group.conductor)
            .map(|l| l.coords().to_vec())
            .unwrap_or_else(|_| lambda.coords().to_vec());
        expected.entry(key).or_insert_with(|| (lambda.clone(), 0)).1 += 1;
    }
    let mut total = 0usize;
    for (_, (lambda, mult)) in &expected {
        let mut m = g.clone();
        for i in 0..n {
            m[(i, i)] = m[(i, i)].checked_sub(lambda).unwrap();
        }
        let dim = m.nullspace().len();
        if dim != *mult {
            return ClauseReport {
                name: "spectrum (iii)".into(),
                passed: false,
                detail: format!(
                    "eigenvalue {lambda} has geometric multiplicity {dim}, expected {mult}"
                ),
            };
        }
        total += dim;
    }
    ClauseReport {
        name: "spectrum (iii)".into(),
        passed: total == n,
        detail: if total == n {
            String::new()
        } else {
            format!("eigenspaces span dimension {total} of {n}")
        },
    }
}

/// Diagnostic admissibility check against explicit invariants given as
/// polynomials in the frame's eigencoordinates. Failures are reported, not
/// thrown.
pub fn check_admissible(
    group: &ReflectionGroup,
    g: &CycMatrix,
    zeta: &Cyc,
    q_y: &[Cyc],
    frame: &EigenFrame,
    invs_z: &[CycPoly],
) -> AdmissibilityReport {
    let n = group.rank();
    let h = group.coxeter_number();
    let eigenvector = clause_eigenvector(g, zeta, q_y, h);
    let q_z = frame.z_rows.matvec(q_y);
    let mut jac = CycMatrix::zero(n, n);
    for (a, inv) in invs_z.iter().enumerate() {
        for b in 0..n {
            jac[(a, b)] = inv.derive(b).eval(&q_z);
        }
    }
    let det = jac.det();
    let jacobian = ClauseReport {
        name: "jacobian (ii)".into(),
        passed: !det.is_zero(),
        detail: if det.is_zero() {
            format!("Jacobian of the invariants at q is singular: {jac:?}")
        } else {
            String::new()
        },
    };
    let spectrum = clause_spectrum(group, g, zeta);
    AdmissibilityReport { eigenvector, jacobian, spectrum }
}

/// Same three clauses with the Jacobian read off jets (fast path used by
/// constructors).
pub fn check_admissible_jets(t: &AdmissibleTriplet, init_jets: &[CycJet]) -> AdmissibilityReport {
    let n = t.rank();
    let h = t.group.coxeter_number();
    let eigenvector = clause_eigenvector(&t.g, &t.zeta, &t.q_y, h);
    let mut jac = CycMatrix::zero(n, n);
    for (a, jet) in init_jets.iter().enumerate() {
        for b in 0..n {
            jac[(a, b)] = jet.coeff(&ExpVec::unit(n, b));
        }
    }
    let det = jac.det();
    let jacobian = ClauseReport {
        name: "jacobian (ii)".into(),
        passed: !det.is_zero(),
        detail: if det.is_zero() { format!("singular Jacobian at q: {jac:?}") } else { String::new() },
    };
    let spectrum = clause_spectrum(&t.group, &t.g, &t.zeta);
    AdmissibilityReport { eigenvector, jacobian, spectrum }
}

/// Does `g` have the Coxeter-element spectrum for this group (eigenvalues
/// `zeta_h^(d_alpha - 1)` for the standard primitive root)?
pub fn has_coxeter_spectrum(group: &ReflectionGroup, g: &CycMatrix) -> bool {
    let h = group.coxeter_number();
    let zeta = match Cyc::zeta(group.conductor, (group.conductor / h) as i64) {
        Ok(z) => z,
        Err(_) => return false,
    };
    clause_spectrum(group, g, &zeta).passed
}

/// Memoized jets of monomials in a fixed list of base jets.
pub struct JetMonomialCache {
    base: Vec<CycJet>,
    weights: WeightVec,
    cap: u32,
    map: BTreeMap<ExpVec, CycJet>,
}

impl JetMonomialCache {
    pub fn new(base: Vec<CycJet>, weights: WeightVec, cap: u32) -> Self {
        JetMonomialCache { base, weights, cap, map: BTreeMap::new() }
    }

    pub fn get(&mut self, a: &ExpVec) -> CycJet {
        if let Some(j) = self.map.get(a) {
            return j.clone();
        }
        let n = a.len();
        let jet = match (0..n).rev().find(|&i| a.0[i] > 0) {
            None => CycJet::constant(Cyc::integer(1), &self.weights, self.cap),
            Some(i) => {
                let mut prev = a.clone();
                prev.0[i] -= 1;
                let p = self.get(&prev);
                p.mul(&self.base[i])
            }
        };
        self.map.insert(a.clone(), jet.clone());
        jet
    }
}

/// A verified set of good basic invariants with respect to a triplet,
/// stored as coefficient vectors over the weight-matching monomials of an
/// initial basic-invariant set.
pub struct GoodBasis {
    pub triplet: AdmissibleTriplet,
    pub initial: Arc<InitialBasis>,
    /// Per alpha: the monomial basis of `S(d_alpha)` over the initial
    /// invariants, and the solved coefficients.
    pub monomials: Vec<Vec<ExpVec>>,
    pub coeffs: Vec<Vec<Cyc>>,
    /// Jets of the good invariants at q.
    pub jets: Vec<CycJet>,
    /// `x^alpha(q)`: zero below the top degree, nonzero at the top.
    pub values_at_q: Vec<Cyc>,
}

impl GoodBasis {
    pub fn rank(&self) -> usize {
        self.triplet.rank()
    }

    pub fn degrees(&self) -> &WeightVec {
        &self.triplet.group.degrees
    }

    /// Full polynomials in eigencoordinates (on demand; the jets carry all
    /// the information the verification pipeline needs).
    pub fn z_polys(&self) -> Vec<CycPoly> {
        let init = self.initial.z_polys(&self.triplet.frame);
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for alpha in 0..n {
            let mut acc = CycPoly::zero(n);
            for (a, c) in self.monomials[alpha].iter().zip(&self.coeffs[alpha]) {
                if c.is_zero() {
                    continue;
                }
                let mut term = CycPoly::constant(n, c.clone());
                for (i, &e) in a.0.iter().enumerate() {
                    if e > 0 {
                        term = term.checked_mul(&init[i].pow(e)).unwrap();
                    }
                }
                acc = acc.checked_add(&term).unwrap();
            }
            out.push(acc);
        }
        out
    }

    /// Jets of the shifted monomials `(x - x(q))^a` over the good basis.
    pub fn shifted_monomial_cache(&self) -> JetMonomialCache {
        let base: Vec<CycJet> = self.jets.iter().map(Jet::minus_value).collect();
        JetMonomialCache::new(base, self.degrees().clone(), self.jets[0].cap())
    }

    /// Jets of the plain monomials `x^a` over the good basis.
    pub fn monomial_cache(&self) -> JetMonomialCache {
        JetMonomialCache::new(self.jets.clone(), self.degrees().clone(), self.jets[0].cap())
    }
}

/// Matrix of `psi` from the monomial basis of `S(j)` (over the initial
/// invariants) to the monomial basis of `V(j)`; square by construction,
/// invertible for admissible triplets.
pub fn psi_matrix(
    t: &AdmissibleTriplet,
    shifted: &mut JetMonomialCache,
    j: u32,
) -> (Vec<ExpVec>, CycMatrix) {
    let n = t.rank();
    let d = &t.group.degrees;
    let mons = monomials_of_weight(n, d, j);
    let mut m = CycMatrix::zero(mons.len(), mons.len());
    for (col, a) in mons.iter().enumerate() {
        let jet = shifted.get(a);
        for (row, b) in mons.iter().enumerate() {
            m[(row, col)] = jet.coeff(b);
        }
    }
    (mons, m)
}

/// `phi` applied to a polynomial in the basic invariants: the full shifted
/// Taylor recentering, as a polynomial in eigencoordinates.
pub fn phi(
    t: &AdmissibleTriplet,
    basis_z: &[CycPoly],
    values_at_q: &[Cyc],
    f_x: &CycPoly,
) -> CycPoly {
    let n = t.rank();
    let shifted: Vec<CycPoly> = basis_z
        .iter()
        .zip(values_at_q)
        .map(|(p, v)| {
            p.checked_sub(&CycPoly::constant(n, v.clone())).unwrap()
        })
        .collect();
    let composed = f_x.compose(&shifted).expect("arity matches rank");
    composed.shift(&t.frame.q_z)
}

/// `psi` applied to a weighted-homogeneous polynomial in the basic
/// invariants: the weight-matching part of `phi`.
pub fn psi(
    t: &AdmissibleTriplet,
    shifted: &mut JetMonomialCache,
    f_x: &CycPoly,
) -> Result<CycPoly, GoodBasisError> {
    let d = &t.group.degrees;
    if f_x.is_zero() {
        return Ok(CycPoly::zero(t.rank()));
    }
    let Some(j) = f_x.weighted_degree(d) else {
        return Err(GoodBasisError::Goodness(
            "psi input must be weighted-homogeneous in the invariants".into(),
        ));
    };
    let n = t.rank();
    let mut acc = CycPoly::zero(n);
    for (a, c) in f_x.terms() {
        let jet = shifted.get(a);
        acc = acc.checked_add(&jet.slice(j).scale(c)).unwrap();
    }
    Ok(acc)
}

/// Solve `psi(x^alpha) = z^alpha` for each alpha over the initial
/// invariants; eagerly verifies compatibility and goodness.
pub fn good_basic_invariants(
    t: &AdmissibleTriplet,
    initial: Arc<InitialBasis>,
) -> Result<GoodBasis, GoodBasisError> {
    t.validate(&initial)?;
    let n = t.rank();
    let d = t.group.degrees.clone();
    let cap = t.jet_cap();
    let bound = initial.bind(&t.frame, cap);
    let shifted_base: Vec<CycJet> = bound.jets.iter().map(Jet::minus_value).collect();
    let mut shifted = JetMonomialCache::new(shifted_base, d.clone(), cap);
    let mut plain = JetMonomialCache::new(bound.jets.clone(), d.clone(), cap);

    let mut monomials = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    let mut jets = Vec::with_capacity(n);
    for alpha in 0..n {
        let j = d.0[alpha];
        let (mons, m) = psi_matrix(t, &mut shifted, j);
        let target_pos = mons
            .iter()
            .position(|a| *a == ExpVec::unit(n, alpha))
            .expect("unit monomial has its own weight");
        let mut rhs = vec![Cyc::integer(0); mons.len()];
        rhs[target_pos] = Cyc::integer(1);
        let c = m.solve(&rhs).ok_or(GoodBasisError::SingularPsi(j))?;
        let mut jet = CycJet::zero(&d, cap);
        for (a, ca) in mons.iter().zip(&c) {
            if !ca.is_zero() {
                jet = jet.add(&plain.get(a).scale(ca));
            }
        }
        monomials.push(mons);
        coeffs.push(c);
        jets.push(jet);
    }
    let values_at_q: Vec<Cyc> = jets.iter().map(Jet::value).collect();

    // Eager post-conditions: unit Jacobian, vanishing values below the top
    // degree, nonzero top value, and the goodness vanishing condition.
    for alpha in 0..n {
        for beta in 0..n {
            let got = jets[alpha].coeff(&ExpVec::unit(n, beta));
            let want = if alpha == beta { Cyc::integer(1) } else { Cyc::integer(0) };
            if got != want {
                return Err(GoodBasisError::Goodness(format!(
                    "Jacobian at q is not the unit matrix at ({alpha},{beta}): {got}"
                )));
            }
        }
        if alpha + 1 < n && !values_at_q[alpha].is_zero() {
            return Err(GoodBasisError::Goodness(format!(
                "x^{}(q) = {} should vanish below the top degree",
                alpha + 1,
                values_at_q[alpha]
            )));
        }
    }
    if values_at_q[n - 1].is_zero() {
        return Err(GoodBasisError::Goodness("x^n(q) = 0".into()));
    }
    let basis = GoodBasis { triplet: t.clone(), initial, monomials, coeffs, jets, values_at_q };
    let vanish = goodness_vanishing_report(&basis);
    if !vanish.passed {
        return Err(GoodBasisError::Goodness(vanish.failures.join("; ")));
    }
    Ok(basis)
}

/// Build a basis object from explicit coefficients without the eager
/// goodness verification (diagnostics and negative controls).
pub fn basis_from_coeffs(
    t: &AdmissibleTriplet,
    initial: Arc<InitialBasis>,
    coeffs: Vec<Vec<Cyc>>,
) -> GoodBasis {
    let n = t.rank();
    let d = t.group.degrees.clone();
    let cap = t.jet_cap();
    let bound = initial.bind(&t.frame, cap);
    let mut plain = JetMonomialCache::new(bound.jets, d.clone(), cap);
    let mut monomials = Vec::with_capacity(n);
    let mut jets = Vec::with_capacity(n);
    for alpha in 0..n {
        let mons = monomials_of_weight(n, &d, d.0[alpha]);
        let mut jet = CycJet::zero(&d, cap);
        for (a, ca) in mons.iter().zip(&coeffs[alpha]) {
            if !ca.is_zero() {
                jet = jet.add(&plain.get(a).scale(ca));
            }
        }
        monomials.push(mons);
        jets.push(jet);
    }
    let values_at_q = jets.iter().map(Jet::value).collect();
    GoodBasis { triplet: t.clone(), initial, monomials, coeffs, jets, values_at_q }
}

fn goodness_vanishing_report(basis: &GoodBasis) -> CheckReport {
    let n = basis.rank();
    let d = basis.degrees();
    let mut failures = Vec::new();
    for alpha in 0..n {
        for a in monomials_of_weight(n, d, d.0[alpha]) {
            if a.total() < 2 {
                continue;
            }
            let c = basis.jets[alpha].coeff(&a);
            if !c.is_zero() {
                failures.push(format!(
                    "(1/a!) d^a x^{}(q) = {} at a = {:?} (weight {})",
                    alpha + 1,
                    c,
                    a.0,
                    d.0[alpha]
                ));
            }
        }
    }
    CheckReport::new("goodness vanishing (higher Taylor coefficients at q)", failures)
}

/// The delta property: for `d.a = d.b <= 2 d_n`,
/// `(1/b!) d^b (x - x(q))^a (q) = delta_(a,b)`.
fn delta_property_report(basis: &GoodBasis) -> CheckReport {
    let n = basis.rank();
    let d = basis.degrees();
    let h = d.top();
    let mut shifted = basis.shifted_monomial_cache();
    let mut failures = Vec::new();
    for w in 1..=2 * h {
        let mons = monomials_of_weight(n, d, w);
        for a in &mons {
            let jet = shifted.get(a);
            for b in &mons {
                let got = jet.coeff(b);
                let expect = if a == b { Cyc::integer(1) } else { Cyc::integer(0) };
                if got != expect {
                    failures.push(format!(
                        "coefficient at b = {:?} of (x - x(q))^{:?} is {}, expected {}",
                        b.0, a.0, got, expect
                    ));
                }
            }
        }
    }
    CheckReport::new("delta property (paired Taylor coefficients)", failures)
}

/// Congruence vanishing: Taylor coefficients of `x^a` vanish unless
/// `d.b = d.a (mod d_n)`; the shifted version vanishes unless
/// `d.b` is `d.a` plus a non-negative multiple of `d_n`.
fn congruence_vanishing_report(basis: &GoodBasis) -> CheckReport {
    let n = basis.rank();
    let d = basis.degrees();
    let h = d.top();
    let cap = 2 * h;
    let mut plain = basis.monomial_cache();
    let mut shifted = basis.shifted_monomial_cache();
    let mut failures = Vec::new();
    let bs = crate::polyring::monomials_up_to_weight(n, d, cap);
    for w in 1..=cap {
        for a in monomials_of_weight(n, d, w) {
            let pj = plain.get(&a);
            let sj = shifted.get(&a);
            for b in &bs {
                let wb = d.dot(b);
                if wb % h != w % h {
                    let c = pj.coeff(b);
                    if !c.is_zero() {
                        failures.push(format!(
                            "d^b x^a (q) = {} at a = {:?}, b = {:?} violates the congruence",
                            c, a.0, b.0
                        ));
                    }
                }
                let allowed_shift = wb >= w && (wb - w) % h == 0;
                if !allowed_shift {
                    let c = sj.coeff(b);
                    if !c.is_zero() {
                        failures.push(format!(
                            "d^b (x - x(q))^a (q) = {} at a = {:?}, b = {:?} outside the ladder",
                            c, a.0, b.0
                        ));
                    }
                }
            }
        }
    }
    CheckReport::new("congruence vanishing of Taylor coefficients", failures)
}

/// Full goodness report: the vanishing condition, the delta property, and
/// the congruence vanishing sweeps (weights up to `2 d_n`).
pub fn check_good(basis: &GoodBasis) -> Vec<CheckReport> {
    vec![
        goodness_vanishing_report(basis),
        delta_property_report(basis),
        congruence_vanishing_report(basis),
    ]
}

/// Triplet transformations that preserve the good-invariant span.
pub enum TripletTransform {
    /// Conjugate by a word in the simple reflections.
    Conjugate(Vec<usize>),
    /// Rescale the eigenvector by a nonzero scalar.
    Scale(Cyc),
    /// Replace `(g, zeta)` by `(g^r, zeta^r)` for `gcd(r, d_n) = 1`.
    Power(u32),
}

pub fn transform_triplet(
    t: &AdmissibleTriplet,
    transform: &TripletTransform,
    initial: &InitialBasis,
) -> Result<AdmissibleTriplet, GoodBasisError> {
    let n = t.rank();
    let out = match transform {
        TripletTransform::Conjugate(word) => {
            let h = t.group.word(word);
            let mut rev = word.clone();
            rev.reverse();
            let hinv = t.group.word(&rev);
            if h.matmul(&hinv) != CycMatrix::identity(n) {
                return Err(GoodBasisError::BadTransform("word inverse mismatch".into()));
            }
            let g2 = h.matmul(&t.g).matmul(&hinv);
            let q2 = h.matvec(&t.q_y);
            let rows2: Vec<Vec<Cyc>> =
                (0..n).map(|a| hinv.row_vecmul(t.frame.z_rows.row(a))).collect();
            let z_rows = CycMatrix::from_rows(rows2);
            let z_inv = z_rows
                .inverse()
                .ok_or_else(|| GoodBasisError::BadTransform("conjugated frame singular".into()))?;
            let q_z = z_rows.matvec(&q2);
            let frame = EigenFrame {
                z_rows,
                z_inv,
                zeta: t.zeta.clone(),
                q_y: q2.clone(),
                q_z,
                gram_scale: t.frame.gram_scale.clone(),
                dual_gram: t.frame.dual_gram.clone(),
            };
            // conjugation by an isometry preserves the dual pairing
            let recomputed = frame.recompute_dual_gram(&t.group)?;
            if recomputed != frame.dual_gram {
                return Err(GoodBasisError::BadTransform(
                    "conjugation did not preserve the dual Gram".into(),
                ));
            }
            AdmissibleTriplet {
                group: t.group.clone(),
                g: g2,
                zeta: t.zeta.clone(),
                q_y: q2,
                frame,
            }
        }
        TripletTransform::Scale(s) => {
            if s.is_zero() {
                return Err(GoodBasisError::BadTransform("scale factor must be nonzero".into()));
            }
            let q2: Vec<Cyc> = t.q_y.iter().map(|c| c.checked_mul(s).unwrap()).collect();
            let mut frame = t.frame.clone();
            frame.q_y = q2.clone();
            frame.q_z = frame.z_rows.matvec(&q2);
            AdmissibleTriplet {
                group: t.group.clone(),
                g: t.g.clone(),
                zeta: t.zeta.clone(),
                q_y: q2,
                frame,
            }
        }
        TripletTransform::Power(r) => {
            let h = t.group.coxeter_number();
            if num_integer::gcd(*r, h) != 1 {
                return Err(GoodBasisError::BadTransform(format!(
                    "power {r} is not coprime to the Coxeter number {h}"
                )));
            }
            let g2 = t.g.pow(*r as u64);
            let zeta2 = t.zeta.pow(*r as i64);
            let mut frame = t.frame.clone();
            frame.zeta = zeta2.clone();
            AdmissibleTriplet { group: t.group.clone(), g: g2, zeta: zeta2, q_y: t.q_y.clone(), frame }
        }
    };
    out.validate(initial)?;
    Ok(out)
}

/// Triplet equivalence: equal spans of the good basic invariants over the
/// common monomial basis, per weight block.
pub fn equivalent_triplets(
    t1: &AdmissibleTriplet,
    t2: &AdmissibleTriplet,
    initial: Arc<InitialBasis>,
) -> Result<bool, GoodBasisError> {
    let b1 = good_basic_invariants(t1, initial.clone())?;
    let b2 = good_basic_invariants(t2, initial)?;
    Ok(equivalent_bases(&b1, &b2))
}

pub fn equivalent_bases(b1: &GoodBasis, b2: &GoodBasis) -> bool {
    let d = b1.degrees();
    let mut weights: Vec<u32> = d.0.clone();
    weights.dedup();
    for w in weights {
        let rows1: Vec<Vec<Cyc>> = (0..d.len())
            .filter(|&a| d.0[a] == w)
            .map(|a| b1.coeffs[a].clone())
            .collect();
        let rows2: Vec<Vec<Cyc>> = (0..d.len())
            .filter(|&a| d.0[a] == w)
            .map(|a| b2.coeffs[a].clone())
            .collect();
        let m1 = Matrix::from_rows(rows1);
        let m2 = Matrix::from_rows(rows2);
        if !same_row_span(&m1, &m2) {
            return false;
        }
    }
    true
}

/// Serialization payload for a good basis.
#[derive(Serialize)]
pub struct GoodBasisExport {
    pub invariants: Vec<CycPoly>,
    pub values_at_q: Vec<CycScalar>,
    pub triplet: TripletExport,
}

#[derive(Serialize)]
pub struct TripletExport {
    pub group: String,
    pub zeta: CycScalar,
    pub g: Vec<Vec<CycScalar>>,
    pub q: Vec<CycScalar>,
    pub dual_gram: Vec<Vec<CycScalar>>,
}

impl GoodBasis {
    pub fn export(&self) -> GoodBasisExport {
        GoodBasisExport {
            invariants: self.z_polys(),
            values_at_q: self.values_at_q.clone(),
            triplet: TripletExport {
                group: self.triplet.group.spec.name(),
                zeta: self.triplet.zeta.clone(),
                g: self.triplet.g.rows_vec(),
                q: self.triplet.q_y.clone(),
                dual_gram: self.triplet.frame.dual_gram.rows_vec(),
            },
        }
    }
}

