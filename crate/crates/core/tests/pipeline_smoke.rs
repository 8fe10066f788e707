//! End-to-end pipeline smoke checks on the small groups, including the
//! closed-form dihedral oracle and the cross-validation of the jet-based
//! rewriting against full polynomial arithmetic.

use refrob_core::frobenius;
use refrob_core::goodbasis::{self, AdmissibleTriplet, TripletTransform};
use refrob_core::groups::{Cyc, CycPoly, GroupSpec};
use refrob_core::pipeline::{CheckKind, Pipeline};
use refrob_core::polyring::ExpVec;

fn xpoly_monomial(n: usize, exp: Vec<u32>, c: Cyc) -> CycPoly {
    CycPoly::monomial(ExpVec(exp), c)
}

#[test]
fn i2_5_closed_forms() {
    let p = Pipeline::build(GroupSpec::i2(5).unwrap()).unwrap();
    let n = 2;
    // good invariants in eigencoordinates: z1 z2 and (z1^5 + z2^5)/5
    let got = p.basis.z_polys();
    let x1 = xpoly_monomial(n, vec![1, 1], Cyc::integer(1));
    let mut x2 = xpoly_monomial(n, vec![5, 0], Cyc::ratio(1, 5));
    x2 = x2.checked_add(&xpoly_monomial(n, vec![0, 5], Cyc::ratio(1, 5))).unwrap();
    assert_eq!(got[0], x1);
    assert_eq!(got[1], x2);
    // x^2(q) = 1/5
    assert_eq!(p.basis.values_at_q[1], Cyc::ratio(1, 5));
    // intersection form
    let i = &p.frobenius.intersection;
    assert_eq!(i[0][0], xpoly_monomial(n, vec![1, 0], Cyc::integer(2)));
    assert_eq!(i[0][1], xpoly_monomial(n, vec![0, 1], Cyc::integer(5)));
    assert_eq!(i[1][1], xpoly_monomial(n, vec![4, 0], Cyc::integer(2)));
    // C_11^2 = (x^1)^(m-2)
    assert_eq!(p.frobenius.structure[0][0][1], xpoly_monomial(n, vec![3, 0], Cyc::integer(1)));
    assert!(p.frobenius.structure[0][0][0].is_zero());
    let summary = p.verify(&CheckKind::all()).unwrap();
    for c in &summary.checks {
        assert!(c.passed, "{}: {:?}", c.name, c.failures);
    }
}

#[test]
fn a2_pipeline_with_cross_checks() {
    let p = Pipeline::build(GroupSpec::a(2).unwrap()).unwrap();
    let summary = p.verify(&CheckKind::all()).unwrap();
    for c in &summary.checks {
        assert!(c.passed, "{}: {:?}", c.name, c.failures);
    }
    // jet-based rewrite agrees with full polynomial recomposition
    let zp = p.basis.z_polys();
    let f = zp[0].checked_mul(&zp[1]).unwrap();
    let rewritten = frobenius::rewrite_in_invariants(&f, &p.basis).unwrap();
    let expect = xpoly_monomial(2, vec![1, 1], Cyc::integer(1));
    assert_eq!(rewritten, expect);
    // psi of the good invariants is the matching coordinate (checked via phi)
    let phi1 = goodbasis::phi(&p.triplet, &zp, &p.basis.values_at_q, &CycPoly::var(2, 0));
    let d = p.basis.degrees();
    let part = phi1.weighted_part(d, d.0[0]);
    assert_eq!(part, CycPoly::var(2, 0));
}

#[test]
fn a3_transforms_and_equivalence() {
    let p = Pipeline::build(GroupSpec::a(3).unwrap()).unwrap();
    let t2 = goodbasis::transform_triplet(
        &p.triplet,
        &TripletTransform::Conjugate(vec![1]),
        &p.initial,
    )
    .unwrap();
    assert!(goodbasis::equivalent_triplets(&p.triplet, &t2, p.initial.clone()).unwrap());
    let t3 =
        goodbasis::transform_triplet(&p.triplet, &TripletTransform::Power(3), &p.initial).unwrap();
    assert!(goodbasis::equivalent_triplets(&p.triplet, &t3, p.initial.clone()).unwrap());
    // gcd(2, 4) != 1: rejected
    assert!(goodbasis::transform_triplet(&p.triplet, &TripletTransform::Power(2), &p.initial)
        .is_err());
    assert!(goodbasis::transform_triplet(
        &p.triplet,
        &TripletTransform::Scale(Cyc::integer(0)),
        &p.initial
    )
    .is_err());
}

#[test]
fn standard_triplet_is_admissible_b2() {
    let p = Pipeline::build(GroupSpec::b(2).unwrap()).unwrap();
    let bound = p.initial.bind(&p.triplet.frame, 5);
    let report = goodbasis::check_admissible_jets(&p.triplet, &bound.jets);
    assert!(report.passed(), "{}", report.summary());
    // zero vector fails the Jacobian clause
    let zero_q = vec![Cyc::integer(0); 2];
    let invs = p.initial.z_polys(&p.triplet.frame);
    let rep = goodbasis::check_admissible(
        &p.group,
        &p.triplet.g,
        &p.triplet.zeta,
        &zero_q,
        &p.triplet.frame,
        &invs,
    );
    assert!(!rep.passed());
    assert!(!rep.eigenvector.passed || !rep.jacobian.passed);
}

#[test]
fn h3_power_three_is_admissible_but_not_coxeter() {
    let p = Pipeline::build(GroupSpec::h3()).unwrap();
    let t3 =
        goodbasis::transform_triplet(&p.triplet, &TripletTransform::Power(3), &p.initial).unwrap();
    // (g^3, zeta^3, q) is admissible...
    let bound = p.initial.bind(&t3.frame, 11);
    assert!(goodbasis::check_admissible_jets(&t3, &bound.jets).passed());
    // ...but g^3 does not have the Coxeter spectrum
    assert!(goodbasis::has_coxeter_spectrum(&p.group, &p.triplet.g));
    assert!(!goodbasis::has_coxeter_spectrum(&p.group, &t3.g));
    // and the spans agree
    assert!(goodbasis::equivalent_triplets(&p.triplet, &t3, p.initial.clone()).unwrap());
}

#[test]
fn standard_triplet_rejects_junk() {
    let group = std::sync::Arc::new(
        refrob_core::groups::ReflectionGroup::build(GroupSpec::i2(4).unwrap()).unwrap(),
    );
    let t = AdmissibleTriplet::standard(group).unwrap();
    // frame data is consistent
    assert_eq!(t.frame.q_z[0], Cyc::integer(0));
    assert_eq!(t.frame.q_z[1], Cyc::integer(1));
}
