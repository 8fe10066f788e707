//! Catalog of supported finite Coxeter groups: reflection representation
//! over `Q(zeta_N)`, degrees, Coxeter element, eigencoordinates, the
//! normalized invariant bilinear form, and initial basic invariants.
//!
//! Coordinates: vectors in `V` carry coordinates in the simple-root basis
//! ("y-coordinates"); the eigenframe supplies the eigencoordinate
//! functionals `z^1..z^n` as rows over the y-coordinates.

use crate::jet::{elementary_symmetric, elementary_symmetric_poly, Jet};
use crate::linalg::Matrix;
use crate::polyring::{ExpVec, MultiPoly, WeightVec};
use crate::scalar::{lcm_u32, CycScalar, Rational, ScalarError};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type Cyc = CycScalar;
pub type CycPoly = MultiPoly<Cyc>;
pub type CycMatrix = Matrix<Cyc>;
pub type CycJet = Jet<Cyc>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GroupError {
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("group closure exceeded the element cap {0}")]
    ElementCap(usize),
    #[error("eigenspace for eigenvalue index {0} has dimension {1}, expected 1")]
    EigenspaceDimension(usize, usize),
    #[error("Gram normalization failed: {0}")]
    GramNormalization(String),
    #[error("no algebraically independent invariant found for degree {0}")]
    NoIndependentSeed(u32),
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
    I2,
    H3,
    F4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
            Family::I2 => "I2",
            Family::H3 => "H3",
            Family::F4 => "F4",
        };
        write!(f, "{s}")
    }
}

/// A validated member of the supported catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: usize,
    /// Edge label, `I2(m)` only.
    pub m: Option<u32>,
}

impl GroupSpec {
    pub fn new(family: Family, rank: usize, m: Option<u32>) -> Result<Self, GroupError> {
        match family {
            Family::A if (2..=6).contains(&rank) => Ok(GroupSpec { family, rank, m: None }),
            Family::A => Err(GroupError::Unsupported(format!(
                "A{rank}: supported ranks are 2..6"
            ))),
            Family::B if (2..=6).contains(&rank) => Ok(GroupSpec { family, rank, m: None }),
            Family::B => Err(GroupError::Unsupported(format!(
                "B{rank}: supported ranks are 2..6"
            ))),
            Family::D if rank == 5 => Ok(GroupSpec { family, rank, m: None }),
            Family::D if rank % 2 == 0 => Err(GroupError::Unsupported(format!(
                "D{rank}: even-rank D has a repeated middle degree; its eigenframe needs an \
                 isotropic-basis construction that can leave Q(zeta_N), so it is rejected"
            ))),
            Family::D => Err(GroupError::Unsupported(format!(
                "D{rank}: only D5 is in the supported catalog"
            ))),
            Family::I2 => {
                let m = m.ok_or_else(|| {
                    GroupError::Unsupported("I2 requires an edge label m (3..12)".into())
                })?;
                if (3..=12).contains(&m) && rank == 2 {
                    Ok(GroupSpec { family, rank: 2, m: Some(m) })
                } else {
                    Err(GroupError::Unsupported(format!("I2({m}): m must be in 3..12")))
                }
            }
            Family::H3 if rank == 3 => Ok(GroupSpec { family, rank: 3, m: None }),
            Family::H3 => Err(GroupError::Unsupported(
                "H4 is outside the catalog (Reynolds over 14400 elements at degree 30 is out of \
                 desk budget); only H3 is supported"
                    .into(),
            )),
            Family::F4 if rank == 4 => Ok(GroupSpec { family, rank: 4, m: None }),
            Family::F4 => Err(GroupError::Unsupported("only F4 is supported in the F family".into())),
        }
    }

    pub fn a(n: usize) -> Result<Self, GroupError> {
        Self::new(Family::A, n, None)
    }
    pub fn b(n: usize) -> Result<Self, GroupError> {
        Self::new(Family::B, n, None)
    }
    pub fn d(n: usize) -> Result<Self, GroupError> {
        Self::new(Family::D, n, None)
    }
    pub fn i2(m: u32) -> Result<Self, GroupError> {
        Self::new(Family::I2, 2, Some(m))
    }
    pub fn h3() -> Self {
        GroupSpec { family: Family::H3, rank: 3, m: None }
    }
    pub fn f4() -> Self {
        GroupSpec { family: Family::F4, rank: 4, m: None }
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::I2 => format!("I2({})", self.m.unwrap()),
            Family::H3 => "H3".into(),
            Family::F4 => "F4".into(),
            f => format!("{}{}", f, self.rank),
        }
    }

    /// Degrees of the basic invariants, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank as u32;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B => (1..=n).map(|k| 2 * k).collect(),
            Family::D => {
                let mut d: Vec<u32> = (1..n).map(|k| 2 * k).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::I2 => vec![2, self.m.unwrap()],
            Family::H3 => vec![2, 6, 10],
            Family::F4 => vec![2, 6, 8, 12],
        }
    }

    /// Coxeter number `h = d_n`.
    pub fn coxeter_number(&self) -> u32 {
        *self.degrees().last().unwrap()
    }

    /// Group order (product of the degrees).
    pub fn order(&self) -> u64 {
        self.degrees().iter().map(|&d| d as u64).product()
    }

    /// Coxeter matrix `m_ij` in catalog node order.
    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.rank;
        let mut m = vec![vec![2u32; n]; n];
        for i in 0..n {
            m[i][i] = 1;
        }
        let mut chain = |edges: &[(usize, usize, u32)]| {
            for &(i, j, label) in edges {
                m[i][j] = label;
                m[j][i] = label;
            }
        };
        match self.family {
            Family::A => {
                let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 3)).collect();
                chain(&edges);
            }
            Family::B => {
                let mut edges: Vec<_> = (0..n - 2).map(|i| (i, i + 1, 3)).collect();
                edges.push((n - 2, n - 1, 4));
                chain(&edges);
            }
            Family::D => {
                let mut edges: Vec<_> = (0..n - 2).map(|i| (i, i + 1, 3)).collect();
                edges.push((n - 3, n - 1, 3));
                chain(&edges);
            }
            Family::I2 => chain(&[(0, 1, self.m.unwrap())]),
            Family::H3 => chain(&[(0, 1, 5), (1, 2, 3)]),
            Family::F4 => chain(&[(0, 1, 3), (1, 2, 4), (2, 3, 3)]),
        }
        m
    }

    /// Conductor of the working field: lcm of the Coxeter number and `2m`
    /// for every edge label `m >= 4` (edges labeled 3 have rational cosine).
    pub fn conductor(&self) -> u32 {
        let mut n = self.coxeter_number();
        let cm = self.coxeter_matrix();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if cm[i][j] >= 4 {
                    n = lcm_u32(n, 2 * cm[i][j]);
                }
            }
        }
        n
    }
}

/// The full supported catalog, in a fixed order.
pub fn catalog() -> Vec<GroupSpec> {
    let mut v = Vec::new();
    for n in 2..=6 {
        v.push(GroupSpec::a(n).unwrap());
    }
    for n in 2..=6 {
        v.push(GroupSpec::b(n).unwrap());
    }
    v.push(GroupSpec::d(5).unwrap());
    for m in 3..=12 {
        v.push(GroupSpec::i2(m).unwrap());
    }
    v.push(GroupSpec::h3());
    v.push(GroupSpec::f4());
    v
}

fn cos_pi_over(m: u32, conductor: u32) -> Result<Cyc, GroupError> {
    Ok(match m {
        1 => Cyc::integer(-1),
        2 => Cyc::integer(0),
        3 => Cyc::ratio(1, 2),
        _ => {
            let z = Cyc::zeta(2 * m, 1)?;
            let zi = Cyc::zeta(2 * m, -1)?;
            z.checked_add(&zi)?
                .checked_mul(&Cyc::ratio(1, 2))?
                .lift(conductor)?
        }
    })
}

/// A supported Coxeter group realized by its reflection representation.
pub struct ReflectionGroup {
    pub spec: GroupSpec,
    pub conductor: u32,
    /// Invariant bilinear form in the simple-root basis: `B_ij = -cos(pi/m_ij)`.
    pub gram: CycMatrix,
    pub simple_reflections: Vec<CycMatrix>,
    pub degrees: WeightVec,
}

impl ReflectionGroup {
    pub fn build(spec: GroupSpec) -> Result<Self, GroupError> {
        let n = spec.rank;
        let conductor = spec.conductor();
        let cm = spec.coxeter_matrix();
        let mut gram = CycMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    gram[(i, j)] = Cyc::integer(1);
                } else {
                    gram[(i, j)] = -cos_pi_over(cm[i][j], conductor)?;
                }
            }
        }
        let mut simple_reflections = Vec::with_capacity(n);
        for i in 0..n {
            // s_i(v) = v - 2 B(alpha_i, v) alpha_i in root coordinates.
            let mut s = CycMatrix::identity(n);
            for j in 0..n {
                let two_b = gram[(i, j)].checked_mul(&Cyc::integer(2))?;
                s[(i, j)] = s[(i, j)].checked_sub(&two_b)?;
            }
            simple_reflections.push(s);
        }
        let group = ReflectionGroup {
            degrees: WeightVec::new(spec.degrees()),
            spec,
            conductor,
            gram,
            simple_reflections,
        };
        group.check_generators()?;
        Ok(group)
    }

    fn check_generators(&self) -> Result<(), GroupError> {
        let n = self.spec.rank;
        let id = CycMatrix::identity(n);
        for (i, s) in self.simple_reflections.iter().enumerate() {
            if s.matmul(s) != id {
                return Err(GroupError::ConstructionCheck(format!(
                    "simple reflection {i} is not an involution"
                )));
            }
            let preserved = s.transpose().matmul(&self.gram).matmul(s);
            if preserved != self.gram {
                return Err(GroupError::ConstructionCheck(format!(
                    "simple reflection {i} does not preserve the invariant form"
                )));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn coxeter_number(&self) -> u32 {
        self.degrees.top()
    }

    /// Product of the simple reflections in catalog node order.
    pub fn coxeter_element(&self) -> CycMatrix {
        let mut c = CycMatrix::identity(self.spec.rank);
        for s in &self.simple_reflections {
            c = c.matmul(s);
        }
        c
    }

    /// Apply a word in the generators (left to right).
    pub fn word(&self, word: &[usize]) -> CycMatrix {
        let mut m = CycMatrix::identity(self.spec.rank);
        for &i in word {
            m = m.matmul(&self.simple_reflections[i]);
        }
        m
    }

    fn matrix_key(&self, m: &CycMatrix) -> Vec<Rational> {
        let n = self.spec.rank;
        let mut key = Vec::with_capacity(n * n * 4);
        for i in 0..n {
            for j in 0..n {
                let lifted = m[(i, j)].lift(self.conductor).expect("conductor divides");
                key.extend(lifted.coords().iter().cloned());
            }
        }
        key
    }

    /// Full element list via breadth-first closure over the generators.
    /// Deterministic order.
    pub fn elements(&self, cap: usize) -> Result<Vec<CycMatrix>, GroupError> {
        let mut seen: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
        let mut out = Vec::new();
        let id = CycMatrix::identity(self.spec.rank);
        seen.insert(self.matrix_key(&id), 0);
        out.push(id);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &idx in &frontier {
                for s in &self.simple_reflections {
                    let m = out[idx].matmul(s);
                    let key = self.matrix_key(&m);
                    if !seen.contains_key(&key) {
                        if out.len() >= cap {
                            return Err(GroupError::ElementCap(cap));
                        }
                        seen.insert(key, out.len());
                        next.push(out.len());
                        out.push(m);
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Group-average projection onto the invariants (in root-dual
    /// coordinates): `(1/|G|) sum_g f(g . y)`.
    pub fn reynolds(&self, f: &CycPoly, cap: usize) -> Result<CycPoly, GroupError> {
        let elements = self.elements(cap)?;
        let mut acc = CycPoly::zero(self.spec.rank);
        for g in &elements {
            let image = f.subst_linear(g).map_err(|e| {
                GroupError::ConstructionCheck(format!("reynolds substitution failed: {e}"))
            })?;
            acc = acc.checked_add(&image).unwrap();
        }
        let scale = Cyc::rational(Rational::new(1.into(), (elements.len() as i64).into()));
        Ok(acc.scale(&scale))
    }
}

/// Eigencoordinate frame for an admissible pair `(g, zeta)`: rows of
/// `z_rows` are the functionals `z^alpha` (in y-coordinates) with
/// `g . z^alpha = zeta^(d_alpha - 1) z^alpha`, the dual Gram is normalized
/// to the antidiagonal unit, and `q` spans the `zeta`-eigenspace of `g`.
#[derive(Clone)]
pub struct EigenFrame {
    pub z_rows: CycMatrix,
    pub z_inv: CycMatrix,
    pub zeta: Cyc,
    pub q_y: Vec<Cyc>,
    pub q_z: Vec<Cyc>,
    /// Global scalar applied to the dual form to reach the antidiagonal
    /// unit (surfaced, not hidden).
    pub gram_scale: Cyc,
    pub dual_gram: CycMatrix,
}

impl EigenFrame {
    /// The raw dual pairing `z_rows . B^{-1} . z_rows^T` divided by the
    /// recorded global scale; equals the antidiagonal unit by construction.
    pub fn recompute_dual_gram(&self, group: &ReflectionGroup) -> Result<CycMatrix, GroupError> {
        let binv = group
            .gram
            .inverse()
            .ok_or_else(|| GroupError::GramNormalization("singular invariant form".into()))?;
        let raw = self.z_rows.matmul(&binv).matmul(&self.z_rows.transpose());
        let sinv = self
            .gram_scale
            .checked_inv()
            .map_err(|e| GroupError::GramNormalization(e.to_string()))?;
        Ok(raw.scale(&sinv))
    }
}

fn antidiagonal_unit(n: usize) -> CycMatrix {
    let mut m = CycMatrix::zero(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = Cyc::integer(1);
    }
    m
}

/// Build the eigenframe for a group element `g` acting on V with a chosen
/// primitive `d_n`-th root `zeta` among its eigenvalues.
pub fn eigen_frame(group: &ReflectionGroup, g: &CycMatrix, zeta: &Cyc) -> Result<EigenFrame, GroupError> {
    let n = group.rank();
    let degrees = &group.degrees;
    let gt = g.transpose();
    let mut rows: Vec<Vec<Cyc>> = Vec::with_capacity(n);
    for alpha in 0..n {
        // left eigenvector: w g = zeta^(1 - d_alpha) w.
        let lambda = zeta.pow(1 - degrees.0[alpha] as i64);
        let mut m = gt.clone();
        for i in 0..n {
            m[(i, i)] = m[(i, i)].checked_sub(&lambda)?;
        }
        let ns = m.nullspace();
        if ns.len() != 1 {
            return Err(GroupError::EigenspaceDimension(alpha, ns.len()));
        }
        rows.push(ns.into_iter().next().unwrap());
    }
    // q spans the zeta-eigenspace of g on V.
    let mut gq = g.clone();
    for i in 0..n {
        gq[(i, i)] = gq[(i, i)].checked_sub(zeta)?;
    }
    let qs = gq.nullspace();
    if qs.len() != 1 {
        return Err(GroupError::EigenspaceDimension(n, qs.len()));
    }
    let mut q_y = qs.into_iter().next().unwrap();

    let binv = group
        .gram
        .inverse()
        .ok_or_else(|| GroupError::GramNormalization("singular invariant form".into()))?;
    let raw_gram = |rows: &[Vec<Cyc>]| -> CycMatrix {
        let w = CycMatrix::from_rows(rows.to_vec());
        w.matmul(&binv).matmul(&w.transpose())
    };
    let mut d = raw_gram(&rows);
    for i in 0..n {
        for j in 0..n {
            if i + j != n - 1 && !d[(i, j)].is_zero() {
                return Err(GroupError::GramNormalization(format!(
                    "dual pairing not supported on the antidiagonal at ({i},{j})"
                )));
            }
        }
    }

    // Rank-2 extra normalization: make a reflection intertwine the two
    // eigencoordinates exactly (z^1 <-> z^2). Any reflection inverts the
    // rotation g, so the first simple reflection works.
    if n == 2 {
        let s = &group.simple_reflections[0];
        let image = s.transpose().matvec(&rows[0]); // row . s as a column computation
        // image must be proportional to rows[1]
        let k = (0..n)
            .find(|&i| !rows[1][i].is_zero())
            .ok_or_else(|| GroupError::GramNormalization("zero eigenvector".into()))?;
        let mu = image[k].checked_div(&rows[1][k])?;
        let check: Vec<Cyc> = rows[1].iter().map(|c| c.checked_mul(&mu).unwrap()).collect();
        if check != image {
            return Err(GroupError::GramNormalization(
                "reflection does not intertwine the rank-2 eigenlines".into(),
            ));
        }
        let mu_inv = mu.checked_inv()?;
        for c in rows[0].iter_mut() {
            *c = c.checked_mul(&mu_inv)?;
        }
        d = raw_gram(&rows);
    }

    // Global scale of the dual form: absorbs the self-paired middle entry
    // (odd rank), or the single pairing of a rank-2 frame.
    let gram_scale = if n % 2 == 1 {
        d[(n / 2, n / 2)].clone()
    } else if n == 2 {
        d[(0, 1)].clone()
    } else {
        Cyc::integer(1)
    };
    if gram_scale.is_zero() {
        return Err(GroupError::GramNormalization("degenerate dual pairing".into()));
    }

    // Per-pair rescaling of the high partner fixes the remaining pairings.
    let sinv = gram_scale.checked_inv()?;
    for alpha in 0..n / 2 {
        let beta = n - 1 - alpha;
        let pairing = d[(alpha, beta)].checked_mul(&sinv)?;
        if pairing.is_zero() {
            return Err(GroupError::GramNormalization("degenerate dual pairing".into()));
        }
        let f = pairing.checked_inv()?;
        for c in rows[beta].iter_mut() {
            *c = c.checked_mul(&f)?;
        }
    }
    let z_rows = CycMatrix::from_rows(rows);
    let dual_gram = {
        let raw = z_rows.matmul(&binv).matmul(&z_rows.transpose());
        raw.scale(&sinv)
    };
    if dual_gram != antidiagonal_unit(n) {
        return Err(GroupError::GramNormalization(
            "dual Gram did not normalize to the antidiagonal unit".into(),
        ));
    }

    // Normalize q so its only nonzero eigencoordinate is 1: z^n(q) = 1.
    let mut q_z = z_rows.matvec(&q_y);
    for alpha in 0..n - 1 {
        if !q_z[alpha].is_zero() {
            return Err(GroupError::ConstructionCheck(format!(
                "z^{}(q) != 0 for a non-top degree",
                alpha + 1
            )));
        }
    }
    if q_z[n - 1].is_zero() {
        return Err(GroupError::ConstructionCheck("z^n(q) = 0".into()));
    }
    let t = q_z[n - 1].checked_inv()?;
    for c in q_y.iter_mut() {
        *c = c.checked_mul(&t)?;
    }
    q_z = z_rows.matvec(&q_y);

    let z_inv = z_rows
        .inverse()
        .ok_or_else(|| GroupError::GramNormalization("eigenrows are singular".into()))?;

    // Final defining-property assertions.
    let gq2 = g.matvec(&q_y);
    let zq: Vec<Cyc> = q_y.iter().map(|c| c.checked_mul(zeta).unwrap()).collect();
    if gq2 != zq {
        return Err(GroupError::ConstructionCheck("g q != zeta q".into()));
    }
    Ok(EigenFrame { z_rows, z_inv, zeta: zeta.clone(), q_y, q_z, gram_scale, dual_gram })
}

/// Frame-independent recipes for a group's initial basic invariants.
/// Linear-form families are stored in y-coordinates; binding to a frame
/// yields jets (and, on demand, full polynomials) in eigencoordinates.
pub struct InitialBasis {
    pub degrees: WeightVec,
    families: Vec<CycMatrix>,
    items: Vec<Builder>,
}

#[derive(Debug, Clone)]
enum Builder {
    /// e_k of a family of linear forms.
    Esym { family: usize, k: usize },
    /// e_k of the squares of a family of linear forms.
    EsymSquares { family: usize, k: usize },
    /// Product of all forms in a family.
    Product { family: usize },
    /// Power sum of degree k over a family (a reflection-stable orbit).
    PowerSum { family: usize, k: u32 },
    /// Explicit polynomial in y-coordinates.
    Ypoly(CycPoly),
}

/// Initial invariants bound to a concrete frame.
pub struct BoundInitial {
    pub degrees: WeightVec,
    pub jets: Vec<CycJet>,
    pub values_at_q: Vec<Cyc>,
}

impl InitialBasis {
    /// Construct the initial invariants for a group. The frame is used to
    /// certify algebraic independence (diagonal Jacobian entries at q) and,
    /// for I2, to phrase the closed forms.
    pub fn build(group: &ReflectionGroup, frame: &EigenFrame) -> Result<Self, GroupError> {
        let n = group.rank();
        let degrees = group.degrees.clone();
        match group.spec.family {
            Family::A => {
                // Coordinate differences on the ambient permutation space,
                // pulled back to the root basis: s_0 = y_0, s_j = y_j - y_{j-1},
                // s_n = -y_{n-1}. The group permutes these forms.
                let mut rows = Vec::with_capacity(n + 1);
                for j in 0..=n {
                    let mut r = vec![Cyc::integer(0); n];
                    if j < n {
                        r[j] = Cyc::integer(1);
                    }
                    if j > 0 {
                        r[j - 1] = Cyc::integer(-1);
                    }
                    rows.push(r);
                }
                let fam = CycMatrix::from_rows(rows);
                check_forms_permuted(group, &fam, false)?;
                let items = (2..=n + 1).map(|k| Builder::Esym { family: 0, k }).collect();
                Ok(InitialBasis { degrees, families: vec![fam], items })
            }
            Family::B => {
                let u = b_family_frame(group)?;
                let t = u
                    .inverse()
                    .ok_or_else(|| GroupError::ConstructionCheck("B frame singular".into()))?;
                let fam = t;
                check_forms_permuted(group, &fam, true)?;
                let items = (1..=n).map(|k| Builder::EsymSquares { family: 0, k }).collect();
                Ok(InitialBasis { degrees, families: vec![fam], items })
            }
            Family::D => {
                let u = d_family_frame(group)?;
                let t = u
                    .inverse()
                    .ok_or_else(|| GroupError::ConstructionCheck("D frame singular".into()))?;
                check_forms_permuted(group, &t, true)?;
                check_product_preserved(group, &t)?;
                // degrees 2,4,5,6,8 for D5: e_1, e_2 of squares, product, e_3, e_4
                let items = vec![
                    Builder::EsymSquares { family: 0, k: 1 },
                    Builder::EsymSquares { family: 0, k: 2 },
                    Builder::Product { family: 0 },
                    Builder::EsymSquares { family: 0, k: 3 },
                    Builder::EsymSquares { family: 0, k: 4 },
                ];
                Ok(InitialBasis { degrees, families: vec![t], items })
            }
            Family::I2 => {
                let m = group.spec.m.unwrap();
                // Closed forms in eigencoordinates: z1 z2 and z1^m + z2^m,
                // expressed in y-coordinates for frame independence.
                let p1_z: CycPoly = CycPoly::var(2, 0).checked_mul(&CycPoly::var(2, 1)).unwrap();
                let p2_z: CycPoly =
                    CycPoly::var(2, 0).pow(m).checked_add(&CycPoly::var(2, 1).pow(m)).unwrap();
                let p1_y = p1_z.subst_linear(&frame.z_rows).unwrap();
                let p2_y = p2_z.subst_linear(&frame.z_rows).unwrap();
                for (label, p) in [("z1*z2", &p1_y), ("z1^m + z2^m", &p2_y)] {
                    for s in &group.simple_reflections {
                        if &p.subst_linear(s).unwrap() != p {
                            return Err(GroupError::ConstructionCheck(format!(
                                "I2 initial invariant {label} is not reflection-invariant"
                            )));
                        }
                    }
                }
                let items = vec![Builder::Ypoly(p1_y), Builder::Ypoly(p2_y)];
                Ok(InitialBasis { degrees, families: vec![], items })
            }
            Family::H3 | Family::F4 => orbit_power_basis(group, frame),
        }
    }

    fn family_rows_z(&self, family: usize, frame: &EigenFrame) -> Vec<Vec<Cyc>> {
        (0..self.families[family].nrows())
            .map(|r| frame.z_inv.row_vecmul(self.families[family].row(r)))
            .collect()
    }

    /// Jets of the initial invariants at the frame's q, with the given cap.
    pub fn bind(&self, frame: &EigenFrame, cap: u32) -> BoundInitial {
        let w = &self.degrees;
        let jets: Vec<CycJet> = self
            .items
            .iter()
            .map(|item| match item {
                Builder::Esym { family, k } => {
                    let forms = self.jet_forms(*family, frame, cap);
                    elementary_symmetric(&forms, *k).swap_remove(*k)
                }
                Builder::EsymSquares { family, k } => {
                    let forms: Vec<CycJet> = self
                        .jet_forms(*family, frame, cap)
                        .iter()
                        .map(|j| j.mul(j))
                        .collect();
                    elementary_symmetric(&forms, *k).swap_remove(*k)
                }
                Builder::Product { family } => {
                    let forms = self.jet_forms(*family, frame, cap);
                    let mut acc = CycJet::constant(Cyc::integer(1), w, cap);
                    for f in &forms {
                        acc = acc.mul(f);
                    }
                    acc
                }
                Builder::PowerSum { family, k } => {
                    let forms = self.jet_forms(*family, frame, cap);
                    let mut acc = CycJet::zero(w, cap);
                    for f in &forms {
                        acc = acc.add(&f.pow(*k));
                    }
                    acc
                }
                Builder::Ypoly(p) => {
                    let pz = p.subst_linear(&frame.z_inv).unwrap();
                    Jet::from_poly(&pz, &frame.q_z, w, cap)
                }
            })
            .collect();
        let values_at_q = jets.iter().map(Jet::value).collect();
        BoundInitial { degrees: self.degrees.clone(), jets, values_at_q }
    }

    fn jet_forms(&self, family: usize, frame: &EigenFrame, cap: u32) -> Vec<CycJet> {
        self.family_rows_z(family, frame)
            .into_iter()
            .map(|r| CycJet::from_linear(&r, &frame.q_z, &self.degrees, cap))
            .collect()
    }

    /// Full polynomials in the frame's eigencoordinates.
    pub fn z_polys(&self, frame: &EigenFrame) -> Vec<CycPoly> {
        let n = self.degrees.len();
        self.items
            .iter()
            .map(|item| match item {
                Builder::Esym { family, k } => {
                    let forms: Vec<CycPoly> = self
                        .family_rows_z(*family, frame)
                        .iter()
                        .map(|r| CycPoly::linear(r))
                        .collect();
                    elementary_symmetric_poly(&forms, *k).swap_remove(*k)
                }
                Builder::EsymSquares { family, k } => {
                    let forms: Vec<CycPoly> = self
                        .family_rows_z(*family, frame)
                        .iter()
                        .map(|r| CycPoly::linear(r).pow(2))
                        .collect();
                    elementary_symmetric_poly(&forms, *k).swap_remove(*k)
                }
                Builder::Product { family } => {
                    let mut acc = CycPoly::one(n);
                    for r in self.family_rows_z(*family, frame) {
                        acc = acc.checked_mul(&CycPoly::linear(&r)).unwrap();
                    }
                    acc
                }
                Builder::PowerSum { family, k } => {
                    let mut acc = CycPoly::zero(n);
                    for r in self.family_rows_z(*family, frame) {
                        acc = acc.checked_add(&CycPoly::linear(&r).pow(*k)).unwrap();
                    }
                    acc
                }
                Builder::Ypoly(p) => p.subst_linear(&frame.z_inv).unwrap(),
            })
            .collect()
    }

    /// The initial basic invariants in root-dual coordinates.
    pub fn y_polys(&self) -> Vec<CycPoly> {
        let n = self.degrees.len();
        self.items
            .iter()
            .map(|item| match item {
                Builder::Esym { family, k } => {
                    let forms: Vec<CycPoly> = (0..self.families[*family].nrows())
                        .map(|r| CycPoly::linear(self.families[*family].row(r)))
                        .collect();
                    elementary_symmetric_poly(&forms, *k).swap_remove(*k)
                }
                Builder::EsymSquares { family, k } => {
                    let forms: Vec<CycPoly> = (0..self.families[*family].nrows())
                        .map(|r| CycPoly::linear(self.families[*family].row(r)).pow(2))
                        .collect();
                    elementary_symmetric_poly(&forms, *k).swap_remove(*k)
                }
                Builder::Product { family } => {
                    let mut acc = CycPoly::one(n);
                    for r in 0..self.families[*family].nrows() {
                        acc = acc
                            .checked_mul(&CycPoly::linear(self.families[*family].row(r)))
                            .unwrap();
                    }
                    acc
                }
                Builder::PowerSum { family, k } => {
                    let mut acc = CycPoly::zero(n);
                    for r in 0..self.families[*family].nrows() {
                        acc = acc
                            .checked_add(&CycPoly::linear(self.families[*family].row(r)).pow(*k))
                            .unwrap();
                    }
                    acc
                }
                Builder::Ypoly(p) => p.clone(),
            })
            .collect()
    }
}

/// For A/B/D: every generator must permute the coordinate forms, up to sign
/// when `signed` is set. This certifies invariance of the symmetric
/// combinations exactly.
fn check_forms_permuted(
    group: &ReflectionGroup,
    fam: &CycMatrix,
    signed: bool,
) -> Result<(), GroupError> {
    let rows: Vec<Vec<Cyc>> = fam.rows_vec();
    for (si, s) in group.simple_reflections.iter().enumerate() {
        for (ri, r) in rows.iter().enumerate() {
            let image = s.row_vecmul(r);
            let hit = rows.iter().any(|r2| {
                &image == r2
                    || (signed && image.iter().zip(r2).all(|(a, b)| a == &(-b.clone())))
            });
            if !hit {
                return Err(GroupError::ConstructionCheck(format!(
                    "generator {si} does not permute coordinate form {ri}"
                )));
            }
        }
    }
    Ok(())
}

/// For D: the product of the forms must be exactly preserved (an even
/// number of sign flips per generator).
fn check_product_preserved(group: &ReflectionGroup, fam: &CycMatrix) -> Result<(), GroupError> {
    let rows: Vec<Vec<Cyc>> = fam.rows_vec();
    for (si, s) in group.simple_reflections.iter().enumerate() {
        let mut sign = 1i64;
        for r in rows.iter() {
            let image = s.row_vecmul(r);
            if rows.contains(&image) {
                continue;
            }
            let neg: Vec<Cyc> = image.iter().map(|c| -c.clone()).collect();
            if rows.contains(&neg) {
                sign = -sign;
            } else {
                return Err(GroupError::ConstructionCheck(format!(
                    "generator {si} does not signed-permute the D coordinate forms"
                )));
            }
        }
        if sign != 1 {
            return Err(GroupError::ConstructionCheck(format!(
                "generator {si} flips the sign of the top product form"
            )));
        }
    }
    Ok(())
}

/// Standard-frame columns for the B family: `u_j = sqrt2 (a_j + .. + a_{n-2}) + a_{n-1}`
/// for `j < n-1` and `u_{n-1} = a_{n-1}`, in the unit-root basis.
fn b_family_frame(group: &ReflectionGroup) -> Result<CycMatrix, GroupError> {
    let n = group.rank();
    let sqrt2 = sqrt2_at(group.conductor)?;
    let mut u = CycMatrix::zero(n, n);
    for j in 0..n {
        if j == n - 1 {
            u[(n - 1, j)] = Cyc::integer(1);
        } else {
            for i in j..n - 1 {
                u[(i, j)] = sqrt2.clone();
            }
            u[(n - 1, j)] = Cyc::integer(1);
        }
    }
    Ok(u)
}

/// Standard-frame columns for the D family.
fn d_family_frame(group: &ReflectionGroup) -> Result<CycMatrix, GroupError> {
    let n = group.rank();
    let sqrt2 = sqrt2_at(group.conductor)?;
    let half_sqrt2 = sqrt2.checked_mul(&Cyc::ratio(1, 2))?;
    let mut cols: Vec<Vec<Cyc>> = vec![vec![Cyc::integer(0); n]; n];
    // e_{n-2} = (sqrt2/2)(a_{n-2} + a_{n-1}); e_{n-1} = (sqrt2/2)(a_{n-1} - a_{n-2})
    cols[n - 2][n - 2] = half_sqrt2.clone();
    cols[n - 2][n - 1] = half_sqrt2.clone();
    cols[n - 1][n - 2] = -half_sqrt2.clone();
    cols[n - 1][n - 1] = half_sqrt2.clone();
    for j in (0..n - 2).rev() {
        let mut col = cols[j + 1].clone();
        col[j] = col[j].checked_add(&sqrt2)?;
        cols[j] = col;
    }
    let mut u = CycMatrix::zero(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            u[(i, j)] = col[i].clone();
        }
    }
    Ok(u)
}

fn sqrt2_at(conductor: u32) -> Result<Cyc, GroupError> {
    let z = Cyc::zeta(8, 1)?;
    let zi = Cyc::zeta(8, -1)?;
    Ok(z.checked_add(&zi)?.lift(conductor)?)
}

/// H3/F4 initial invariants: power sums of linear forms over reflection-
/// stable orbits of root (and coordinate) functionals, certified degree by
/// degree via the diagonal Jacobian entry at q; falls back to the full
/// Reynolds average over graded-lex seed monomials.
fn orbit_power_basis(group: &ReflectionGroup, frame: &EigenFrame) -> Result<InitialBasis, GroupError> {
    let n = group.rank();
    let degrees = group.degrees.clone();

    // Candidate orbit families: orbits of each root functional B(alpha_i, .)
    // and of each coordinate functional y_i, deduplicated.
    let mut families: Vec<CycMatrix> = Vec::new();
    let mut seed_rows: Vec<Vec<Cyc>> = Vec::new();
    for i in 0..n {
        seed_rows.push(group.gram.row(i).to_vec());
    }
    for i in 0..n {
        let mut r = vec![Cyc::integer(0); n];
        r[i] = Cyc::integer(1);
        seed_rows.push(r);
    }
    let mut orbit_keys: Vec<BTreeMap<Vec<Rational>, ()>> = Vec::new();
    for seed in seed_rows {
        let orbit = functional_orbit(group, &seed)?;
        let key: BTreeMap<Vec<Rational>, ()> = orbit
            .iter()
            .map(|r| (row_key(group, r), ()))
            .collect();
        if orbit_keys.iter().any(|k| *k == key) {
            continue;
        }
        orbit_keys.push(key);
        families.push(CycMatrix::from_rows(orbit));
    }

    let cap = 2 * degrees.top();
    let mut items: Vec<Builder> = Vec::with_capacity(n);
    for alpha in 0..n {
        let k = degrees.0[alpha];
        let mut chosen = None;
        for (fi, fam) in families.iter().enumerate() {
            if power_sum_certificate(fam, frame, &degrees, k, alpha) {
                chosen = Some(Builder::PowerSum { family: fi, k });
                break;
            }
        }
        if chosen.is_none() {
            chosen = reynolds_seed_fallback(group, frame, &degrees, k, alpha, cap)?;
        }
        items.push(chosen.ok_or(GroupError::NoIndependentSeed(k))?);
    }
    Ok(InitialBasis { degrees, families, items })
}

fn row_key(group: &ReflectionGroup, r: &[Cyc]) -> Vec<Rational> {
    let mut key = Vec::new();
    for c in r {
        key.extend(c.lift(group.conductor).expect("conductor divides").coords().iter().cloned());
    }
    key
}

/// Orbit of a functional (row vector over y-coordinates) under the dual
/// action of the group; breadth-first, deterministic.
fn functional_orbit(group: &ReflectionGroup, seed: &[Cyc]) -> Result<Vec<Vec<Cyc>>, GroupError> {
    let mut seen: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
    let mut out = vec![seed.to_vec()];
    seen.insert(row_key(group, seed), ());
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for s in &group.simple_reflections {
                // reflections are involutions, so the dual action is r . s
                let image = s.row_vecmul(&out[i]);
                let key = row_key(group, &image);
                if !seen.contains_key(&key) {
                    seen.insert(key, ());
                    next.push(out.len());
                    out.push(image);
                    if out.len() > 4 * group.spec.order() as usize {
                        return Err(GroupError::ElementCap(out.len()));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Does `sum_r (l_r . z)^k` have a nonzero diagonal Jacobian entry at q?
fn power_sum_certificate(
    fam: &CycMatrix,
    frame: &EigenFrame,
    weights: &WeightVec,
    k: u32,
    alpha: usize,
) -> bool {
    // d/dz^alpha sum_r l_r^k at q = k sum_r l_r(q)^(k-1) (l_r)_alpha
    let mut acc = Cyc::integer(0);
    for ri in 0..fam.nrows() {
        let row_z = frame.z_inv.row_vecmul(fam.row(ri));
        if row_z[alpha].is_zero() {
            continue;
        }
        let mut val = Cyc::integer(0);
        for (c, qv) in row_z.iter().zip(&frame.q_z) {
            if !c.is_zero() && !qv.is_zero() {
                val = val.checked_add(&c.checked_mul(qv).unwrap()).unwrap();
            }
        }
        let term = val.pow(k as i64 - 1).checked_mul(&row_z[alpha]).unwrap();
        acc = acc.checked_add(&term).unwrap();
    }
    let _ = weights;
    !acc.is_zero()
}

/// Last-resort seed search: Reynolds averages of graded-lex monomials of
/// the target degree in eigencoordinates.
fn reynolds_seed_fallback(
    group: &ReflectionGroup,
    frame: &EigenFrame,
    weights: &WeightVec,
    k: u32,
    alpha: usize,
    _cap: u32,
) -> Result<Option<Builder>, GroupError> {
    let n = group.rank();
    let elements = group.elements(2 * group.spec.order() as usize)?;
    // element matrices acting on z-coordinates
    let elements_z: Vec<CycMatrix> = elements
        .iter()
        .map(|m| frame.z_rows.matmul(m).matmul(&frame.z_inv))
        .collect();
    let seeds = crate::polyring::monomials_of_weight(n, &WeightVec::new(vec![1; n]), k);
    for seed in seeds {
        let mono = CycPoly::monomial(seed, Cyc::integer(1));
        let mut acc = CycPoly::zero(n);
        for gz in &elements_z {
            acc = acc.checked_add(&mono.subst_linear(gz).unwrap()).unwrap();
        }
        let scale = Cyc::rational(Rational::new(1.into(), (elements_z.len() as i64).into()));
        let inv = acc.scale(&scale);
        if inv.is_zero() {
            continue;
        }
        let jet = Jet::from_poly(&inv, &frame.q_z, weights, k + 1);
        if !jet.coeff(&ExpVec::unit(n, alpha)).is_zero() {
            // store in y-coordinates for frame independence
            let inv_y = inv.subst_linear(&frame.z_rows).unwrap();
            return Ok(Some(Builder::Ypoly(inv_y)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_validation() {
        assert!(GroupSpec::d(4).is_err());
        assert!(GroupSpec::d(6).is_err());
        assert!(GroupSpec::d(5).is_ok());
        assert!(GroupSpec::a(7).is_err());
        assert!(GroupSpec::i2(13).is_err());
        assert!(GroupSpec::new(Family::H3, 4, None).is_err());
        assert_eq!(catalog().len(), 23);
    }

    #[test]
    fn degrees_and_orders() {
        assert_eq!(GroupSpec::a(2).unwrap().degrees(), vec![2, 3]);
        assert_eq!(GroupSpec::i2(5).unwrap().degrees(), vec![2, 5]);
        assert_eq!(GroupSpec::h3().degrees(), vec![2, 6, 10]);
        assert_eq!(GroupSpec::f4().degrees(), vec![2, 6, 8, 12]);
        assert_eq!(GroupSpec::d(5).unwrap().degrees(), vec![2, 4, 5, 6, 8]);
        assert_eq!(GroupSpec::a(3).unwrap().order(), 24);
        assert_eq!(GroupSpec::b(3).unwrap().order(), 48);
        assert_eq!(GroupSpec::h3().order(), 120);
        assert_eq!(GroupSpec::f4().order(), 1152);
        assert_eq!(GroupSpec::d(5).unwrap().order(), 1920);
    }

    #[test]
    fn generator_relations_hold() {
        for spec in [GroupSpec::a(3).unwrap(), GroupSpec::b(3).unwrap(), GroupSpec::i2(7).unwrap()] {
            let g = ReflectionGroup::build(spec).unwrap();
            let n = g.rank();
            let cm = g.spec.coxeter_matrix();
            for i in 0..n {
                for j in 0..n {
                    let prod = g.simple_reflections[i].matmul(&g.simple_reflections[j]);
                    let order = cm[i][j] as u64;
                    assert_eq!(prod.pow(order), CycMatrix::identity(n), "(s{i} s{j})^{order}");
                }
            }
        }
    }

    #[test]
    fn coxeter_element_order() {
        for spec in [
            GroupSpec::i2(3).unwrap(),
            GroupSpec::a(3).unwrap(),
            GroupSpec::b(2).unwrap(),
            GroupSpec::h3(),
        ] {
            let g = ReflectionGroup::build(spec).unwrap();
            let c = g.coxeter_element();
            let h = g.coxeter_number() as u64;
            assert_eq!(c.pow(h), CycMatrix::identity(g.rank()));
            for k in 1..h {
                assert_ne!(c.pow(k), CycMatrix::identity(g.rank()), "order divides {k}");
            }
        }
    }

    #[test]
    fn small_group_closure_counts() {
        for (spec, expect) in [
            (GroupSpec::a(2).unwrap(), 6),
            (GroupSpec::i2(5).unwrap(), 10),
            (GroupSpec::b(2).unwrap(), 8),
            (GroupSpec::a(3).unwrap(), 24),
        ] {
            let g = ReflectionGroup::build(spec).unwrap();
            assert_eq!(g.elements(100).unwrap().len(), expect);
        }
    }

    #[test]
    fn element_cap_triggers() {
        let g = ReflectionGroup::build(GroupSpec::a(3).unwrap()).unwrap();
        assert!(matches!(g.elements(10), Err(GroupError::ElementCap(10))));
    }

    #[test]
    fn reynolds_projects_onto_invariants() {
        let g = ReflectionGroup::build(GroupSpec::a(2).unwrap()).unwrap();
        let one = CycPoly::one(2);
        assert_eq!(g.reynolds(&one, 100).unwrap(), one);
        // Reynolds output is fixed by every generator, and idempotent.
        let f = CycPoly::var(2, 0).pow(2);
        let r = g.reynolds(&f, 100).unwrap();
        for s in &g.simple_reflections {
            assert_eq!(r.subst_linear(s).unwrap(), r);
        }
        let rr = g.reynolds(&r, 100).unwrap();
        assert_eq!(rr, r);
    }

    #[test]
    fn b2_coxeter_eigenvalues() {
        // eigenvalues of the B2 Coxeter element are zeta_4 and zeta_4^3
        let g = ReflectionGroup::build(GroupSpec::b(2).unwrap()).unwrap();
        let c = g.coxeter_element();
        let zeta = Cyc::zeta(g.conductor, (g.conductor / 4) as i64).unwrap();
        for k in [1i64, 3] {
            let lambda = zeta.pow(k);
            let mut m = c.clone();
            for i in 0..2 {
                m[(i, i)] = m[(i, i)].checked_sub(&lambda).unwrap();
            }
            assert_eq!(m.nullspace().len(), 1, "eigenvalue zeta_4^{k}");
        }
    }
}
