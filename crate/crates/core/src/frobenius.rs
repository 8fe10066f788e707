//! The Frobenius structure attached to a good basis: intersection form,
//! flat metric, multiplication, Euler field, potential, and the exact
//! verification of every axiom as a polynomial identity in the flat
//! coordinates.

use crate::goodbasis::{GoodBasis, JetMonomialCache};
use crate::groups::{Cyc, CycJet, CycMatrix, CycPoly};
use crate::polyring::{monomials_of_weight, monomials_up_to_weight, ExpVec, MultiPoly, WeightVec};
use crate::report::CheckReport;
use crate::scalar::Rational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Polynomials in the flat coordinates `x^1..x^n`.
pub type XPoly = MultiPoly<Cyc>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FrobeniusError {
    #[error("rewrite into the invariants left a nonzero residual: {0}")]
    RewriteResidual(String),
    #[error("raised metric entry ({0},{1}) is not constant: {2}")]
    NonConstantMetric(usize, usize, String),
    #[error("metric is not the antidiagonal unit at ({0},{1}): {2}")]
    MetricShape(usize, usize, String),
    #[error("potential integrability failure at ({0},{1}): {2}")]
    Integrability(usize, usize, String),
    #[error("structure constants from the potential disagree at ({0},{1},{2})")]
    PotentialMismatch(usize, usize, usize),
    #[error("intersection form is not symmetric at ({0},{1})")]
    AsymmetricIntersection(usize, usize),
}

/// The completed structure. `c = x^n(q)` normalizes the intersection form.
pub struct FrobeniusData {
    pub degrees: WeightVec,
    pub c: Cyc,
    /// `I*(dx^alpha, dx^beta)` rewritten in the flat coordinates.
    pub intersection: Vec<Vec<XPoly>>,
    /// `g^(alpha beta)`: constants by flatness.
    pub metric_raised: CycMatrix,
    /// `g_(alpha beta)`: the antidiagonal unit.
    pub metric: CycMatrix,
    /// `C_(alpha beta)^gamma` in the flat frame.
    pub structure: Vec<Vec<Vec<XPoly>>>,
    pub potential: XPoly,
    /// `d_alpha / d_n`.
    pub euler_weights: Vec<Rational>,
    /// Index (0-based) of the unit coordinate `x^n`.
    pub unit_index: usize,
}

/// Express a weighted-homogeneous invariant, given by its jet at `q`, as a
/// polynomial in the good invariants. Sound and unique: the truncated-jet
/// system below weight `w` has full column rank because the good-basis jets
/// are triangular with unit leading slices.
pub fn rewrite_jet(
    jet: &CycJet,
    w: u32,
    good_monomials: &mut JetMonomialCache,
    degrees: &WeightVec,
) -> Result<XPoly, FrobeniusError> {
    let n = degrees.len();
    let cols = monomials_of_weight(n, degrees, w);
    let rows = monomials_up_to_weight(n, degrees, w);
    let col_jets: Vec<CycJet> = cols.iter().map(|a| good_monomials.get(a)).collect();
    let mut m = CycMatrix::zero(rows.len(), cols.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for (ri, b) in rows.iter().enumerate() {
        for (ci, cj) in col_jets.iter().enumerate() {
            m[(ri, ci)] = cj.coeff(b);
        }
        rhs.push(jet.coeff(b));
    }
    let sol = m.solve(&rhs).ok_or_else(|| {
        FrobeniusError::RewriteResidual(format!("no exact expansion at weight {w}"))
    })?;
    let mut p = XPoly::zero(n);
    for (a, c) in cols.into_iter().zip(sol) {
        p.add_term(a, c);
    }
    Ok(p)
}

/// Public rewrite of an explicit polynomial in eigencoordinates; verifies
/// the result by exact recomposition (errors on a nonzero residual, e.g.
/// for a non-invariant input).
pub fn rewrite_in_invariants(f: &CycPoly, basis: &GoodBasis) -> Result<XPoly, FrobeniusError> {
    let d = basis.degrees();
    let w = f.total_degree();
    let cap = basis.jets[0].cap();
    if w > cap {
        return Err(FrobeniusError::RewriteResidual(format!(
            "degree {w} exceeds the jet cap {cap}"
        )));
    }
    let jet = CycJet::from_poly(f, &basis.triplet.frame.q_z, d, w);
    let mut cache = basis.monomial_cache();
    let p = rewrite_jet(&jet, w, &mut cache, d)?;
    let composed = p.compose(&basis.z_polys()).expect("arity matches");
    if &composed != f {
        return Err(FrobeniusError::RewriteResidual(format!(
            "residual {:?}",
            composed.checked_sub(f).unwrap()
        )));
    }
    Ok(p)
}

/// Jets of the intersection-form entries, straight from the definition:
/// `sum_gamma (dx^alpha/dz^gamma)(dx^beta/dz^(gamma*))` with the dual Gram
/// normalized to the antidiagonal unit.
fn intersection_jets(basis: &GoodBasis) -> Vec<Vec<CycJet>> {
    let n = basis.rank();
    let djets: Vec<Vec<CycJet>> = basis
        .jets
        .iter()
        .map(|j| (0..n).map(|g| j.derive(g)).collect())
        .collect();
    let mut out: Vec<Vec<CycJet>> = Vec::with_capacity(n);
    for alpha in 0..n {
        let mut row = Vec::with_capacity(n);
        for beta in 0..n {
            let mut acc = djets[alpha][0].mul(&djets[beta][n - 1]);
            for gamma in 1..n {
                acc = acc.add(&djets[alpha][gamma].mul(&djets[beta][n - 1 - gamma]));
            }
            row.push(acc);
        }
        out.push(row);
    }
    out
}

/// The intersection form in flat coordinates.
pub fn intersection_form(basis: &GoodBasis) -> Result<Vec<Vec<XPoly>>, FrobeniusError> {
    let n = basis.rank();
    let d = basis.degrees();
    let jets = intersection_jets(basis);
    let mut cache = basis.monomial_cache();
    let mut out = vec![vec![XPoly::zero(n); n]; n];
    for alpha in 0..n {
        for beta in alpha..n {
            let w = d.0[alpha] + d.0[beta] - 2;
            let p = rewrite_jet(&jets[alpha][beta], w, &mut cache, d)?;
            out[alpha][beta] = p.clone();
            if alpha != beta {
                // symmetry of I* is structural; verify rather than assume
                let pba = rewrite_jet(&jets[beta][alpha], w, &mut cache, d)?;
                if pba != p {
                    return Err(FrobeniusError::AsymmetricIntersection(alpha, beta));
                }
                out[beta][alpha] = pba;
            }
        }
    }
    Ok(out)
}

/// The expansion identity: each intersection entry equals the top-degree
/// delta term plus the Taylor-coefficient sum, compared exactly in the flat
/// coordinates.
pub fn expansion_identity_check(
    basis: &GoodBasis,
    intersection: &[Vec<XPoly>],
) -> CheckReport {
    let n = basis.rank();
    let d = basis.degrees();
    let c = &basis.values_at_q[n - 1];
    let cinv = c.checked_inv().expect("x^n(q) is nonzero");
    let djets: Vec<Vec<CycJet>> = basis
        .jets
        .iter()
        .map(|j| (0..n).map(|g| j.derive(g)).collect())
        .collect();
    let mut failures = Vec::new();
    for alpha in 0..n {
        for beta in alpha..n {
            let w = d.0[alpha] + d.0[beta] - 2;
            let mut rhs = XPoly::zero(n);
            if alpha + beta == n - 1 {
                rhs.add_term(ExpVec::unit(n, n - 1), cinv.clone());
            }
            for b in monomials_of_weight(n, d, w) {
                if b.0[n - 1] != 0 {
                    continue;
                }
                let coeff = djets[alpha][n - 1 - beta]
                    .coeff(&b)
                    .checked_add(&djets[beta][n - 1 - alpha].coeff(&b))
                    .unwrap();
                rhs.add_term(b, coeff);
            }
            if rhs != intersection[alpha][beta] {
                let diff = rhs.checked_sub(&intersection[alpha][beta]).unwrap();
                failures.push(format!(
                    "pair ({},{}): difference {:?}",
                    alpha + 1,
                    beta + 1,
                    diff
                ));
            }
        }
    }
    CheckReport::new("expansion identity for the intersection form", failures)
}

/// `g^(alpha beta) = d/dx^n (c I*)(dx^alpha, dx^beta)` and its inverse.
/// Errors if any entry is non-constant (the basis would not be flat) or the
/// matrix is not the antidiagonal unit.
pub fn flat_metric(
    basis: &GoodBasis,
    intersection: &[Vec<XPoly>],
) -> Result<(CycMatrix, CycMatrix), FrobeniusError> {
    let n = basis.rank();
    let c = basis.values_at_q[n - 1].clone();
    let mut metric_raised = CycMatrix::zero(n, n);
    for alpha in 0..n {
        for beta in 0..n {
            let e = intersection[alpha][beta].scale(&c).derive(n - 1);
            if !e.is_constant() {
                return Err(FrobeniusError::NonConstantMetric(alpha, beta, format!("{e:?}")));
            }
            metric_raised[(alpha, beta)] = e.constant_term();
        }
    }
    for alpha in 0..n {
        for beta in 0..n {
            let want = if alpha + beta == n - 1 { Cyc::integer(1) } else { Cyc::integer(0) };
            if metric_raised[(alpha, beta)] != want {
                return Err(FrobeniusError::MetricShape(
                    alpha,
                    beta,
                    format!("{}", metric_raised[(alpha, beta)]),
                ));
            }
        }
    }
    let metric = metric_raised.inverse().expect("antidiagonal unit is invertible");
    Ok((metric_raised, metric))
}

/// `C_(alpha beta)^gamma` from the normalized intersection form.
pub fn structure_constants(
    basis: &GoodBasis,
    intersection: &[Vec<XPoly>],
) -> Vec<Vec<Vec<XPoly>>> {
    let n = basis.rank();
    let d = basis.degrees();
    let h = d.top();
    let c = &basis.values_at_q[n - 1];
    let star = |a: usize| n - 1 - a;
    let mut structure = vec![vec![vec![XPoly::zero(n); n]; n]; n];
    for alpha in 0..n {
        for beta in 0..n {
            let num = Cyc::rational(Rational::new(
                (h as i64).into(),
                ((d.0[star(alpha)] + d.0[star(beta)] - 2) as i64).into(),
            ));
            let scaled = intersection[star(alpha)][star(beta)].scale(c).scale(&num);
            for gamma in 0..n {
                structure[alpha][beta][gamma] = scaled.derive(star(gamma));
            }
        }
    }
    structure
}

/// Reconstruct the potential `F` (weight `2 d_n + 2`) whose Hessian in the
/// raised/lowered index convention reproduces the scaled intersection form,
/// by two exact Euler integrations; integrability is verified, term by term.
pub fn potential(
    basis: &GoodBasis,
    intersection: &[Vec<XPoly>],
) -> Result<XPoly, FrobeniusError> {
    let n = basis.rank();
    let d = basis.degrees();
    let h = d.top();
    let c = &basis.values_at_q[n - 1];
    let star = |a: usize| n - 1 - a;
    let big_w = 2 * h + 2;
    let mut hessian = vec![vec![XPoly::zero(n); n]; n];
    for alpha in 0..n {
        for beta in 0..n {
            let num = Cyc::rational(Rational::new(
                (h as i64).into(),
                ((d.0[star(alpha)] + d.0[star(beta)] - 2) as i64).into(),
            ));
            hessian[alpha][beta] = intersection[star(alpha)][star(beta)].scale(c).scale(&num);
        }
    }
    // F = (1/W) sum_a d_a x^a G_a with G_a = (1/(W - d_a)) sum_b d_b x^b H_ab;
    // homogeneity kills all integration constants.
    let mut f = XPoly::zero(n);
    for alpha in 0..n {
        let mut grad = XPoly::zero(n);
        for beta in 0..n {
            let xb = XPoly::var(n, beta).scale(&Cyc::integer(d.0[beta] as i64));
            grad = grad.checked_add(&xb.checked_mul(&hessian[alpha][beta]).unwrap()).unwrap();
        }
        let ga = grad.scale(&Cyc::ratio(1, (big_w - d.0[alpha]) as i64));
        let xa = XPoly::var(n, alpha).scale(&Cyc::integer(d.0[alpha] as i64));
        f = f.checked_add(&xa.checked_mul(&ga).unwrap()).unwrap();
    }
    f = f.scale(&Cyc::ratio(1, big_w as i64));
    for alpha in 0..n {
        for beta in 0..n {
            let got = f.derive(alpha).derive(beta);
            if got != hessian[alpha][beta] {
                return Err(FrobeniusError::Integrability(
                    alpha,
                    beta,
                    format!("{:?}", got.checked_sub(&hessian[alpha][beta]).unwrap()),
                ));
            }
        }
    }
    Ok(f)
}

/// Build the full structure from a good basis.
pub fn build(basis: &GoodBasis) -> Result<FrobeniusData, FrobeniusError> {
    let n = basis.rank();
    let d = basis.degrees().clone();
    let h = d.top();
    let c = basis.values_at_q[n - 1].clone();
    let intersection = intersection_form(basis)?;
    let (metric_raised, metric) = flat_metric(basis, &intersection)?;
    let structure = structure_constants(basis, &intersection);
    let potential = potential(basis, &intersection)?;
    // Cross-check: third derivatives of F give the structure constants.
    let star = |a: usize| n - 1 - a;
    for alpha in 0..n {
        for beta in 0..n {
            for gamma in 0..n {
                let got = potential.derive(alpha).derive(beta).derive(star(gamma));
                if got != structure[alpha][beta][gamma] {
                    return Err(FrobeniusError::PotentialMismatch(alpha, beta, gamma));
                }
            }
        }
    }

    let euler_weights =
        d.0.iter().map(|&da| Rational::new((da as i64).into(), (h as i64).into())).collect();
    Ok(FrobeniusData {
        degrees: d,
        c,
        intersection,
        metric_raised,
        metric,
        structure,
        potential,
        euler_weights,
        unit_index: n - 1,
    })
}

/// All Frobenius axioms as exact polynomial identities. Any failure is a
/// verification failure of the whole build.
pub fn verify_axioms(fd: &FrobeniusData) -> Vec<CheckReport> {
    let n = fd.degrees.len();
    let d = &fd.degrees;
    let h = d.top();
    let star = |a: usize| n - 1 - a;
    let lowered = |a: usize, b: usize, g: usize| &fd.structure[a][b][star(g)];
    let mut reports = Vec::new();

    // (i) total symmetry of the lowered tensor
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let base = lowered(a, b, g);
                for (p, q, r) in [(b, a, g), (a, g, b), (g, b, a)] {
                    if lowered(p, q, r) != base {
                        failures.push(format!(
                            "C_({},{},{}) differs from C_({},{},{})",
                            a + 1,
                            b + 1,
                            g + 1,
                            p + 1,
                            q + 1,
                            r + 1
                        ));
                    }
                }
            }
        }
    }
    reports.push(CheckReport::new("metric invariance (lowered tensor symmetry)", failures));

    // (ii) potentiality: four-index symmetry of the derivative tensor
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let base = lowered(a, b, g);
                for delta in 0..n {
                    let t1 = base.derive(delta);
                    let t2 = lowered(delta, b, g).derive(a);
                    if t1 != t2 {
                        failures.push(format!(
                            "d_{} C_({},{},{}) != d_{} C_({},{},{})",
                            delta + 1,
                            a + 1,
                            b + 1,
                            g + 1,
                            a + 1,
                            delta + 1,
                            b + 1,
                            g + 1
                        ));
                    }
                }
            }
        }
    }
    reports.push(CheckReport::new("potentiality (four-index symmetry)", failures));

    // (iii) flatness: the raised metric is constant and antidiagonal
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let want = if a + b == n - 1 { Cyc::integer(1) } else { Cyc::integer(0) };
            if fd.metric_raised[(a, b)] != want || fd.metric[(a, b)] != want {
                failures.push(format!("metric entry ({},{})", a + 1, b + 1));
            }
        }
    }
    reports.push(CheckReport::new("metric constancy and antidiagonal form", failures));

    // (iv) unit field: C_(n beta)^gamma = delta
    let mut failures = Vec::new();
    for b in 0..n {
        for g in 0..n {
            let want = if b == g { XPoly::one(n) } else { XPoly::zero(n) };
            if fd.structure[n - 1][b][g] != want || fd.structure[b][n - 1][g] != want {
                failures.push(format!("C_(n,{})^{} is not delta", b + 1, g + 1));
            }
        }
    }
    reports.push(CheckReport::new("unit field law", failures));

    // (v) Euler grading: every monomial x^b of C_(a b)^g has
    // d.b = d_n + d_gamma - d_alpha - d_beta; the metric pairs only dual
    // degrees.
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let expected = h as i64 + d.0[g] as i64 - d.0[a] as i64 - d.0[b] as i64;
                for (e, _) in fd.structure[a][b][g].terms() {
                    if d.dot(e) as i64 != expected {
                        failures.push(format!(
                            "monomial {:?} in C_({},{})^{} has weight {}, expected {}",
                            e.0,
                            a + 1,
                            b + 1,
                            g + 1,
                            d.dot(e),
                            expected
                        ));
                    }
                }
            }
            if !fd.metric[(a, b)].is_zero() && d.0[a] + d.0[b] != h + 2 {
                failures.push(format!("metric pairs non-dual degrees ({},{})", a + 1, b + 1));
            }
        }
    }
    reports.push(CheckReport::new("Euler grading of the multiplication", failures));

    // (vi) associativity, and compatibility with the intersection form
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                for delta in 0..n {
                    let mut lhs = XPoly::zero(n);
                    let mut rhs = XPoly::zero(n);
                    for e in 0..n {
                        lhs = lhs
                            .checked_add(
                                &fd.structure[a][b][e]
                                    .checked_mul(&fd.structure[e][g][delta])
                                    .unwrap(),
                            )
                            .unwrap();
                        rhs = rhs
                            .checked_add(
                                &fd.structure[b][g][e]
                                    .checked_mul(&fd.structure[a][e][delta])
                                    .unwrap(),
                            )
                            .unwrap();
                    }
                    if lhs != rhs {
                        failures.push(format!(
                            "associativity fails at ({},{},{})^{}: difference {:?}",
                            a + 1,
                            b + 1,
                            g + 1,
                            delta + 1,
                            lhs.checked_sub(&rhs).unwrap()
                        ));
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            // g(E, g*(dx^a) o g*(dx^b)) = c I*(dx^a, dx^b)
            let mut lhs = XPoly::zero(n);
            for delta in 0..n {
                let w = Cyc::rational(Rational::new(
                    (d.0[star(delta)] as i64).into(),
                    (h as i64).into(),
                ));
                let term = fd.structure[star(a)][star(b)][delta]
                    .checked_mul(&XPoly::var(n, star(delta)))
                    .unwrap()
                    .scale(&w);
                lhs = lhs.checked_add(&term).unwrap();
            }
            let rhs = fd.intersection[a][b].scale(&fd.c);
            if lhs != rhs {
                failures.push(format!(
                    "intersection compatibility fails at ({},{})",
                    a + 1,
                    b + 1
                ));
            }
        }
    }
    reports.push(CheckReport::new("associativity and intersection compatibility", failures));

    reports
}

/// Isometry: the dual Gram of the eigencoordinates equals the flat metric
/// entrywise.
pub fn isometry_check(basis: &GoodBasis, fd: &FrobeniusData) -> CheckReport {
    let n = basis.rank();
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if basis.triplet.frame.dual_gram[(a, b)] != fd.metric[(a, b)] {
                failures.push(format!(
                    "I*(z^{}, z^{}) = {} but g_({},{}) = {}",
                    a + 1,
                    b + 1,
                    basis.triplet.frame.dual_gram[(a, b)],
                    a + 1,
                    b + 1,
                    fd.metric[(a, b)]
                ));
            }
        }
    }
    CheckReport::new("isometry between the eigenframe pairing and the flat metric", failures)
}

/// Euler field as the exact weight list; applying it to a monomial scales
/// by the weighted degree over `d_n`.
pub fn euler_field(degrees: &WeightVec) -> Vec<Rational> {
    let h = degrees.top() as i64;
    degrees.0.iter().map(|&da| Rational::new((da as i64).into(), h.into())).collect()
}

#[derive(Serialize)]
pub struct FrobeniusExport {
    pub group: String,
    pub c: Cyc,
    pub metric: Vec<Vec<Cyc>>,
    pub intersection: Vec<Vec<XPoly>>,
    pub structure_constants: BTreeMap<String, XPoly>,
    pub potential: XPoly,
    pub euler_weights: Vec<String>,
    pub checks: BTreeMap<String, bool>,
}

impl FrobeniusData {
    pub fn export(&self, group: String, checks: &[CheckReport]) -> FrobeniusExport {
        let n = self.degrees.len();
        let mut structure_constants = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    structure_constants.insert(
                        format!("({},{},{})", a + 1, b + 1, g + 1),
                        self.structure[a][b][g].clone(),
                    );
                }
            }
        }
        FrobeniusExport {
            group,
            c: self.c.clone(),
            metric: self.metric.rows_vec(),
            intersection: self.intersection.clone(),
            structure_constants,
            potential: self.potential.clone(),
            euler_weights: self.euler_weights.iter().map(|w| w.to_string()).collect(),
            checks: checks.iter().map(|c| (c.name.clone(), c.passed)).collect(),
        }
    }
}
