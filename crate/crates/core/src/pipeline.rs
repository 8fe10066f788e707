//! End-to-end driver: build a group, its standard triplet and initial
//! invariants, solve for the good basis, construct the Frobenius structure,
//! and run the requested exact checks. Deterministic throughout.

use crate::frobenius::{self, FrobeniusData};
use crate::goodbasis::{
    self, check_admissible_jets, equivalent_bases, good_basic_invariants, transform_triplet,
    AdmissibleTriplet, GoodBasis, GoodBasisError, TripletTransform,
};
use crate::groups::{Cyc, CycPoly, GroupSpec, InitialBasis, ReflectionGroup};
use crate::polyring::monomials_of_weight;
use crate::report::{CheckReport, VerifySummary};
use num_integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    Admissible,
    Good,
    Expansion,
    Frobenius,
    Equivalence,
}

impl CheckKind {
    pub fn all() -> Vec<CheckKind> {
        vec![
            CheckKind::Admissible,
            CheckKind::Good,
            CheckKind::Expansion,
            CheckKind::Frobenius,
            CheckKind::Equivalence,
        ]
    }

    pub fn parse(s: &str) -> Option<Vec<CheckKind>> {
        match s {
            "admissible" => Some(vec![CheckKind::Admissible]),
            "good" => Some(vec![CheckKind::Good]),
            "expansion" => Some(vec![CheckKind::Expansion]),
            "frobenius" => Some(vec![CheckKind::Frobenius]),
            "equivalence" => Some(vec![CheckKind::Equivalence]),
            "all" => Some(CheckKind::all()),
            _ => None,
        }
    }
}

pub struct Pipeline {
    pub group: Arc<ReflectionGroup>,
    pub triplet: AdmissibleTriplet,
    pub initial: Arc<InitialBasis>,
    pub basis: GoodBasis,
    pub frobenius: FrobeniusData,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
    #[error(transparent)]
    GoodBasis(#[from] GoodBasisError),
    #[error(transparent)]
    Frobenius(#[from] frobenius::FrobeniusError),
}

impl Pipeline {
    /// Construct everything for a group with the standard triplet.
    pub fn build(spec: GroupSpec) -> Result<Self, PipelineError> {
        let group = Arc::new(ReflectionGroup::build(spec)?);
        let triplet = AdmissibleTriplet::standard(group.clone())?;
        let initial = Arc::new(InitialBasis::build(&group, &triplet.frame)?);
        let basis = good_basic_invariants(&triplet, initial.clone())?;
        let frobenius = frobenius::build(&basis)?;
        Ok(Pipeline { group, triplet, initial, basis, frobenius })
    }

    /// The smallest exponent `r >= 2` coprime to the Coxeter number.
    pub fn coprime_power(&self) -> u32 {
        let h = self.group.coxeter_number();
        (2..).find(|r| gcd(*r, h) == 1).unwrap()
    }

    /// Run the selected checks with the default seed.
    pub fn verify(&self, kinds: &[CheckKind]) -> Result<VerifySummary, PipelineError> {
        self.verify_with(kinds, 0)
    }

    /// Run the selected checks; each is an exact identity. The seed only
    /// feeds the randomized homomorphism sweep.
    pub fn verify_with(&self, kinds: &[CheckKind], seed: u64) -> Result<VerifySummary, PipelineError> {
        let mut summary = VerifySummary::default();
        for kind in kinds {
            match kind {
                CheckKind::Admissible => {
                    let bound =
                        self.initial.bind(&self.triplet.frame, self.group.degrees.top() + 1);
                    let rep = check_admissible_jets(&self.triplet, &bound.jets);
                    summary.push(CheckReport::new(
                        "admissibility of the standard triplet",
                        if rep.passed() { vec![] } else { vec![rep.summary()] },
                    ));
                }
                CheckKind::Good => {
                    summary.extend(goodbasis::check_good(&self.basis));
                    summary.push(self.psi_homomorphism_check(seed, 4));
                }
                CheckKind::Expansion => {
                    summary.push(frobenius::expansion_identity_check(
                        &self.basis,
                        &self.frobenius.intersection,
                    ));
                }
                CheckKind::Frobenius => {
                    summary.extend(frobenius::verify_axioms(&self.frobenius));
                    summary.push(frobenius::isometry_check(&self.basis, &self.frobenius));
                }
                CheckKind::Equivalence => {
                    summary.push(self.equivalence_check()?);
                }
            }
        }
        Ok(summary)
    }

    /// `psi(f g) = psi(f) psi(g)` on seeded random weighted-homogeneous
    /// pairs over the initial invariants.
    pub fn psi_homomorphism_check(&self, seed: u64, samples: usize) -> CheckReport {
        let n = self.group.rank();
        let d = &self.group.degrees;
        let cap = self.triplet.jet_cap();
        let bound = self.initial.bind(&self.triplet.frame, cap);
        let shifted_base: Vec<_> =
            bound.jets.iter().map(crate::jet::Jet::minus_value).collect();
        let mut shifted =
            goodbasis::JetMonomialCache::new(shifted_base, d.clone(), cap);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_invariant = |rng: &mut ChaCha8Rng, w: u32| -> CycPoly {
            let mut p = CycPoly::zero(n);
            for a in monomials_of_weight(n, d, w) {
                let c: i64 = rng.gen_range(-3..=3);
                p.add_term(a, Cyc::integer(c));
            }
            if p.is_zero() {
                p.add_term(crate::polyring::ExpVec::zero(n), Cyc::integer(1));
                p = p.checked_mul(&CycPoly::monomial(
                    crate::polyring::ExpVec::unit(n, 0),
                    Cyc::integer(1),
                ))
                .unwrap();
            }
            p
        };
        let mut failures = Vec::new();
        for s in 0..samples {
            let w1 = d.0[s % n];
            let w2 = d.0[(s + 1) % n];
            let f = random_invariant(&mut rng, w1);
            let g = random_invariant(&mut rng, w2);
            let fg = f.checked_mul(&g).unwrap();
            let psi_f = goodbasis::psi(&self.triplet, &mut shifted, &f).unwrap();
            let psi_g = goodbasis::psi(&self.triplet, &mut shifted, &g).unwrap();
            let psi_fg = goodbasis::psi(&self.triplet, &mut shifted, &fg).unwrap();
            let prod = psi_f.checked_mul(&psi_g).unwrap();
            if prod != psi_fg {
                failures.push(format!(
                    "sample {s}: psi(fg) != psi(f) psi(g) for weights ({w1},{w2})"
                ));
            }
        }
        CheckReport::new("psi is an algebra homomorphism on random pairs", failures)
    }

    /// Span independence across distinct admissible triplets: conjugation,
    /// rescaling of q, and a coprime power of g (which is generally not a
    /// Coxeter element).
    pub fn equivalence_check(&self) -> Result<CheckReport, PipelineError> {
        let mut failures = Vec::new();
        let transforms: Vec<(String, TripletTransform)> = vec![
            ("conjugate by s1".into(), TripletTransform::Conjugate(vec![0])),
            (
                "conjugate by s1 s2".into(),
                TripletTransform::Conjugate(vec![0, 1.min(self.group.rank() - 1)]),
            ),
            ("rescale q by 2".into(), TripletTransform::Scale(Cyc::integer(2))),
            (
                format!("power r = {}", self.coprime_power()),
                TripletTransform::Power(self.coprime_power()),
            ),
        ];
        for (label, tr) in &transforms {
            let t2 = transform_triplet(&self.triplet, tr, &self.initial)?;
            let b2 = good_basic_invariants(&t2, self.initial.clone())?;
            if !equivalent_bases(&self.basis, &b2) {
                failures.push(format!("triplet from `{label}` yields a different span"));
            }
        }
        Ok(CheckReport::new("good-invariant span is triplet-independent", failures))
    }
}
