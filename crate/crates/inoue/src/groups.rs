//! Normal-form arithmetic for the fundamental groups G_M (type S0) and
//! G^+/G^- (types S+/S-), realized as cyclic extensions of their translation
//! subgroups: every element is written uniquely as g0^{n0} gamma with gamma
//! in the mu-image of Gamma_r (or in Z^3 for S0). Conjugation by g0 acts on
//! gamma through the lifted endomorphism (N, p-tilde).

use num::bigint::BigInt;
use num::traits::{One, Zero};
use thiserror::Error;

use crate::exact::IntMat;
use crate::gamma_r::{GammaError, GammaRElem, GammaREnd};
use crate::Kind;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix must be {expected} for kind {kind}")]
    MatrixShape { kind: Kind, expected: &'static str },
    #[error("determinant must be {expected} for kind {kind}, found {found}")]
    Determinant { kind: Kind, expected: i64, found: BigInt },
    #[error("r must be nonzero")]
    ZeroR,
    #[error("elements belong to different groups")]
    MixedDescriptors,
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// Integer data of a fundamental group, with the conjugation lift derived
/// once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    kind: Kind,
    mat: IntMat,
    p: i64,
    q: i64,
    r: i64,
    conj: Option<GammaREnd>,
    conj_inv: Option<GammaREnd>,
}

impl GroupDescriptor {
    pub fn new(kind: Kind, mat: IntMat, p: i64, q: i64, r: i64) -> Result<Self, GroupError> {
        match kind {
            Kind::S0 => {
                if !(mat.rows() == 3 && mat.cols() == 3) {
                    return Err(GroupError::MatrixShape { kind, expected: "3x3" });
                }
                let d = mat.det();
                if !d.is_one() {
                    return Err(GroupError::Determinant { kind, expected: 1, found: d });
                }
                Ok(GroupDescriptor { kind, mat, p: 0, q: 0, r: 0, conj: None, conj_inv: None })
            }
            Kind::SPlus | Kind::SMinus => {
                if !(mat.rows() == 2 && mat.cols() == 2) {
                    return Err(GroupError::MatrixShape { kind, expected: "2x2" });
                }
                let expected = if kind == Kind::SPlus { 1 } else { -1 };
                let d = mat.det();
                if d != BigInt::from(expected) {
                    return Err(GroupError::Determinant { kind, expected, found: d });
                }
                if r == 0 {
                    return Err(GroupError::ZeroR);
                }
                let conj = GammaREnd::conj_lift(r, &mat, p, q)?;
                let conj_inv = conj.inverse()?;
                Ok(GroupDescriptor { kind, mat, p, q, r, conj: Some(conj), conj_inv: Some(conj_inv) })
            }
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    /// The lift (N, p-tilde) of conjugation by g0 (S+/S- only).
    pub fn conj_lift(&self) -> Option<&GammaREnd> {
        self.conj.as_ref()
    }

    /// Test-support constructor: perturb the v part of the conjugation lift.
    /// The resulting descriptor no longer satisfies the defining relations,
    /// which `relation_report` must detect.
    #[doc(hidden)]
    pub fn with_perturbed_lift(mut self, dv: [i64; 2]) -> Self {
        if let Some(c) = &self.conj {
            let v2 = [
                c.v2()[0].clone() + BigInt::from(2 * dv[0]),
                c.v2()[1].clone() + BigInt::from(2 * dv[1]),
            ];
            let perturbed = GammaREnd::new(self.r, c.matrix().clone(), v2).unwrap();
            self.conj_inv = Some(perturbed.inverse().unwrap());
            self.conj = Some(perturbed);
        }
        self
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            kind: self.kind,
            n0: 0,
            part: self.trivial_part(),
        }
    }

    fn trivial_part(&self) -> Part {
        match self.kind {
            Kind::S0 => Part::Lattice([BigInt::zero(), BigInt::zero(), BigInt::zero()]),
            _ => Part::Gamma(GammaRElem::identity(self.r)),
        }
    }

    /// g_idx^e as a normal form, idx in 0..=3.
    pub fn generator_power(&self, idx: usize, e: i64) -> GroupElem {
        assert!(idx <= 3, "generator index out of range");
        if idx == 0 {
            return GroupElem { kind: self.kind, n0: e, part: self.trivial_part() };
        }
        let part = match self.kind {
            Kind::S0 => {
                let mut v = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                v[idx - 1] = BigInt::from(e);
                Part::Lattice(v)
            }
            _ => {
                let ls = [
                    if idx == 1 { e } else { 0 },
                    if idx == 2 { e } else { 0 },
                    if idx == 3 { e } else { 0 },
                ];
                Part::Gamma(GammaRElem::mu(self.r, ls[0], ls[1], ls[2]).unwrap())
            }
        };
        GroupElem { kind: self.kind, n0: 0, part }
    }

    pub fn generator(&self, idx: usize) -> GroupElem {
        self.generator_power(idx, 1)
    }

    /// Conjugation action of g0^e on the translation part.
    fn act(&self, e: i64, part: &Part) -> Result<Part, GroupError> {
        match part {
            Part::Lattice(z) => {
                let m = self.mat.pow(e);
                let out = m.apply_row(z);
                Ok(Part::Lattice([out[0].clone(), out[1].clone(), out[2].clone()]))
            }
            Part::Gamma(g) => {
                let a = if e >= 0 {
                    self.conj.as_ref().unwrap().pow(e)?
                } else {
                    self.conj_inv.as_ref().unwrap().pow(-e)?
                };
                Ok(Part::Gamma(a.apply(g)?))
            }
        }
    }

    /// Normal-form product: (m, gamma)(m', gamma') =
    /// (m + m', conj^{-m'}(gamma) * gamma').
    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check(a)?;
        self.check(b)?;
        let twisted = self.act(-b.n0, &a.part)?;
        let part = match (&twisted, &b.part) {
            (Part::Gamma(x), Part::Gamma(y)) => Part::Gamma(x.mul(y)?),
            (Part::Lattice(x), Part::Lattice(y)) => Part::Lattice([
                &x[0] + &y[0],
                &x[1] + &y[1],
                &x[2] + &y[2],
            ]),
            _ => return Err(GroupError::MixedDescriptors),
        };
        Ok(GroupElem { kind: self.kind, n0: a.n0 + b.n0, part })
    }

    pub fn inverse(&self, a: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check(a)?;
        // (m, gamma)^-1 = (-m, conj^{m}(gamma^-1))
        let inv_part = match &a.part {
            Part::Gamma(g) => Part::Gamma(g.inverse()),
            Part::Lattice(z) => Part::Lattice([-&z[0], -&z[1], -&z[2]]),
        };
        let part = self.act(a.n0, &inv_part)?;
        Ok(GroupElem { kind: self.kind, n0: -a.n0, part })
    }

    pub fn pow(&self, a: &GroupElem, e: i64) -> Result<GroupElem, GroupError> {
        let base = if e < 0 { self.inverse(a)? } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Fold a word of (generator index, exponent) pairs into normal form.
    pub fn from_word(&self, word: &[(usize, i64)]) -> Result<GroupElem, GroupError> {
        let mut acc = self.identity();
        for &(idx, e) in word {
            acc = self.mul(&acc, &self.generator_power(idx, e))?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        self.mul(&ab, &self.inverse(&ba)?)
    }

    fn check(&self, a: &GroupElem) -> Result<(), GroupError> {
        if a.kind != self.kind {
            return Err(GroupError::MixedDescriptors);
        }
        if let Part::Gamma(g) = &a.part {
            if g.r() != self.r {
                return Err(GroupError::MixedDescriptors);
            }
        }
        Ok(())
    }

    /// The defining relations as pairs of words, for evaluation either
    /// through normal forms or as analytic maps on H x C.
    pub fn relation_words(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        let mut push = |name: String, lhs: Vec<(usize, i64)>, rhs: Vec<(usize, i64)>| {
            out.push(Relation { name, lhs, rhs });
        };
        match self.kind {
            Kind::S0 => {
                for i in 1..=3usize {
                    let row: Vec<i64> = (0..3).map(|j| self.mat.at_i64(i - 1, j)).collect();
                    push(
                        format!("g0 g{i} g0^-1 = g1^{} g2^{} g3^{}", row[0], row[1], row[2]),
                        vec![(0, 1), (i, 1), (0, -1)],
                        vec![(1, row[0]), (2, row[1]), (3, row[2])],
                    );
                }
                for i in 1..=3usize {
                    for j in i + 1..=3usize {
                        push(
                            format!("g{i} g{j} = g{j} g{i}"),
                            vec![(i, 1), (j, 1)],
                            vec![(j, 1), (i, 1)],
                        );
                    }
                }
            }
            Kind::SPlus | Kind::SMinus => {
                let n = &self.mat;
                let (p, q, r) = (self.p, self.q, self.r);
                push(
                    format!(
                        "g0 g1 g0^-1 = g1^{} g2^{} g3^{p}",
                        n.at_i64(0, 0),
                        n.at_i64(0, 1)
                    ),
                    vec![(0, 1), (1, 1), (0, -1)],
                    vec![(1, n.at_i64(0, 0)), (2, n.at_i64(0, 1)), (3, p)],
                );
                push(
                    format!(
                        "g0 g2 g0^-1 = g1^{} g2^{} g3^{q}",
                        n.at_i64(1, 0),
                        n.at_i64(1, 1)
                    ),
                    vec![(0, 1), (2, 1), (0, -1)],
                    vec![(1, n.at_i64(1, 0)), (2, n.at_i64(1, 1)), (3, q)],
                );
                push(
                    format!("g1 g2 g1^-1 g2^-1 = g3^{r}"),
                    vec![(1, 1), (2, 1), (1, -1), (2, -1)],
                    vec![(3, r)],
                );
                if self.kind == Kind::SMinus {
                    push(
                        "g0 g3 g0^-1 = g3^-1".to_string(),
                        vec![(0, 1), (3, 1), (0, -1)],
                        vec![(3, -1)],
                    );
                }
                let central_with = if self.kind == Kind::SPlus { vec![0, 1, 2] } else { vec![1, 2] };
                for i in central_with {
                    push(
                        format!("g{i} g3 = g3 g{i}"),
                        vec![(i, 1), (3, 1)],
                        vec![(3, 1), (i, 1)],
                    );
                }
            }
        }
        out
    }

    /// Evaluate every defining relation through normal forms.
    pub fn relation_report(&self) -> Vec<RelationCheck> {
        self.relation_words()
            .into_iter()
            .map(|rel| {
                let l = self.from_word(&rel.lhs).unwrap();
                let r = self.from_word(&rel.rhs).unwrap();
                RelationCheck { name: rel.name, holds: l == r }
            })
            .collect()
    }

    /// Center class and commutativity of the translation subgroup, as
    /// distinguishing invariants of the three kinds. The center test probes
    /// the candidate central elements (g3 and the translation generators)
    /// rather than running a general center algorithm.
    pub fn fingerprint(&self) -> Fingerprint {
        let gens: Vec<GroupElem> = (0..=3).map(|i| self.generator(i)).collect();
        let is_central = |x: &GroupElem| {
            gens.iter()
                .all(|g| self.commutator(x, g).unwrap() == self.identity())
        };
        let candidates = [3usize, 1, 2];
        let center = if candidates.iter().any(|&i| is_central(&gens[i])) {
            CenterClass::InfiniteCyclic
        } else {
            CenterClass::Trivial
        };
        let gamma_abelian =
            self.commutator(&gens[1], &gens[2]).unwrap() == self.identity();
        Fingerprint { center, gamma_abelian }
    }
}

/// Normal form g0^{n0} gamma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElem {
    kind: Kind,
    n0: i64,
    part: Part,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Part {
    Gamma(GammaRElem),
    Lattice([BigInt; 3]),
}

impl GroupElem {
    pub fn n0(&self) -> i64 {
        self.n0
    }

    pub fn gamma(&self) -> Option<&GammaRElem> {
        match &self.part {
            Part::Gamma(g) => Some(g),
            Part::Lattice(_) => None,
        }
    }

    pub fn lattice(&self) -> Option<&[BigInt; 3]> {
        match &self.part {
            Part::Lattice(z) => Some(z),
            Part::Gamma(_) => None,
        }
    }

    /// Exponents (n0, n1, n2, n3) of the unique product form
    /// g0^{n0} g1^{n1} g2^{n2} g3^{n3}.
    pub fn exponents(&self) -> (i64, BigInt, BigInt, BigInt) {
        match &self.part {
            Part::Lattice(z) => (self.n0, z[0].clone(), z[1].clone(), z[2].clone()),
            Part::Gamma(g) => {
                let (l1, l2, l3) = g
                    .mu_preimage()
                    .expect("normal forms stay inside the mu-image");
                (self.n0, l1, l2, l3)
            }
        }
    }
}

/// A defining relation written as two words in the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub lhs: Vec<(usize, i64)>,
    pub rhs: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CenterClass {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "infinite-cyclic")]
    InfiniteCyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Fingerprint {
    pub center: CenterClass,
    pub gamma_abelian: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsoError {
    #[error("K must lie in GL(2,Z)")]
    NotUnimodular,
    #[error("kinds or r parameters differ (the construction assumes r = r')")]
    IncompatibleDescriptors,
    #[error("matrix intertwining K N = N' K fails")]
    Intertwining,
    #[error("lattice condition (N' -+ I) v = K p - det(K) p' +- r K (-l2, l1) fails")]
    LatticeCondition,
    #[error("half-integrality v_i - (r/2) k_i1 k_i2 in Z fails")]
    HalfIntegrality,
}

/// Isomorphism G' -> G determined by a pair (K, v) on the translation
/// subgroup together with g0' -> g0 g1^{l1} g2^{l2}. All defining conditions
/// are verified exactly at construction.
#[derive(Debug, Clone)]
pub struct Isomorphism {
    source: GroupDescriptor,
    target: GroupDescriptor,
    phi: GammaREnd,
    base: GroupElem,
    base_inv: GroupElem,
}

impl Isomorphism {
    pub fn new(
        k: IntMat,
        v2: [BigInt; 2],
        l1: i64,
        l2: i64,
        source: &GroupDescriptor,
        target: &GroupDescriptor,
    ) -> Result<Self, IsoError> {
        if source.kind() != target.kind()
            || source.kind() == Kind::S0
            || source.r() != target.r()
        {
            return Err(IsoError::IncompatibleDescriptors);
        }
        if !k.is_unimodular() {
            return Err(IsoError::NotUnimodular);
        }
        let r = target.r();
        // K N = N' K with N the target matrix, N' the source matrix
        if k.mul(target.matrix()) != source.matrix().mul(&k) {
            return Err(IsoError::Intertwining);
        }
        let phi = GammaREnd::new(r, k.clone(), v2.clone()).map_err(|_| IsoError::HalfIntegrality)?;
        if !phi.is_induced() {
            return Err(IsoError::HalfIntegrality);
        }
        // doubled lattice condition: (N' -+ I) v2 = K p2 - det(K) p'2 +- 2 r K (-l2, l1)
        let p2 = shifted_p2(target);
        let pp2 = shifted_p2(source);
        let det_k = k.det();
        let eye = IntMat::identity(2);
        let (shift, eta_sign) = match target.kind() {
            Kind::SPlus => (source.matrix().sub(&eye), BigInt::one()),
            Kind::SMinus => (source.matrix().add(&eye), -BigInt::one()),
            Kind::S0 => unreachable!(),
        };
        let lhs = shift.apply(&v2);
        let keta = k.apply(&[BigInt::from(-l2), BigInt::from(l1)]);
        let two_r = BigInt::from(2 * r);
        let rhs: Vec<BigInt> = (0..2)
            .map(|i| {
                let kp = k.apply(&p2);
                &kp[i] - &det_k * &pp2[i] + &eta_sign * &two_r * &keta[i]
            })
            .collect();
        if lhs != rhs {
            return Err(IsoError::LatticeCondition);
        }
        let base = target
            .mul(
                &target.generator(0),
                &target.from_word(&[(1, l1), (2, l2)]).unwrap(),
            )
            .unwrap();
        let base_inv = target.inverse(&base).unwrap();
        Ok(Isomorphism {
            source: source.clone(),
            target: target.clone(),
            phi,
            base,
            base_inv,
        })
    }

    pub fn source(&self) -> &GroupDescriptor {
        &self.source
    }

    pub fn target(&self) -> &GroupDescriptor {
        &self.target
    }

    /// The translation-part pair (K, v).
    pub fn lift(&self) -> &GammaREnd {
        &self.phi
    }

    /// Image of g0' in the target group.
    pub fn base(&self) -> &GroupElem {
        &self.base
    }

    pub fn apply(&self, x: &GroupElem) -> Result<GroupElem, GroupError> {
        self.source.check(x)?;
        let gamma = match &x.part {
            Part::Gamma(g) => g,
            Part::Lattice(_) => return Err(GroupError::MixedDescriptors),
        };
        let mapped = GroupElem {
            kind: self.target.kind(),
            n0: 0,
            part: Part::Gamma(self.phi.apply(gamma)?),
        };
        let b = if x.n0 >= 0 { &self.base } else { &self.base_inv };
        let mut acc = self.target.identity();
        for _ in 0..x.n0.unsigned_abs() {
            acc = self.target.mul(&acc, b)?;
        }
        self.target.mul(&acc, &mapped)
    }
}

/// Doubled shifted twist vector 2 p-tilde = (2p + r n11 n12, 2q + r n21 n22).
fn shifted_p2(g: &GroupDescriptor) -> Vec<BigInt> {
    let n = g.matrix();
    vec![
        BigInt::from(2 * g.p()) + BigInt::from(g.r()) * n.at(0, 0) * n.at(0, 1),
        BigInt::from(2 * g.q()) + BigInt::from(g.r()) * n.at(1, 0) * n.at(1, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splus_group() -> GroupDescriptor {
        GroupDescriptor::new(
            Kind::SPlus,
            IntMat::from_i64(&[&[2, 1], &[1, 1]]),
            0,
            0,
            1,
        )
        .unwrap()
    }

    fn sminus_group() -> GroupDescriptor {
        GroupDescriptor::new(
            Kind::SMinus,
            IntMat::from_i64(&[&[2, 1], &[1, 0]]),
            1,
            -1,
            2,
        )
        .unwrap()
    }

    fn s0_group() -> GroupDescriptor {
        GroupDescriptor::new(
            Kind::S0,
            IntMat::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]),
            0,
            0,
            0,
        )
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        for g in [splus_group(), sminus_group(), s0_group()] {
            let e = g.identity();
            let x = if g.kind() == Kind::S0 {
                g.from_word(&[(0, 2), (1, 1), (3, -2)]).unwrap()
            } else {
                g.from_word(&[(0, 2), (1, 1), (3, -2)]).unwrap()
            };
            assert_eq!(g.mul(&e, &x).unwrap(), x);
            assert_eq!(g.mul(&x, &e).unwrap(), x);
            assert_eq!(g.mul(&x, &g.inverse(&x).unwrap()).unwrap(), e);
            assert_eq!(g.mul(&g.inverse(&x).unwrap(), &x).unwrap(), e);
        }
    }

    #[test]
    fn conjugation_by_g0_matches_first_row_relation() {
        let g = splus_group();
        let lhs = g.from_word(&[(0, 1), (1, 1), (0, -1)]).unwrap();
        let rhs = g.from_word(&[(1, 2), (2, 1)]).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.exponents(), (0, BigInt::from(2), BigInt::one(), BigInt::zero()));
    }

    #[test]
    fn g1_g2_fail_to_commute_by_exactly_g3_r() {
        let g = splus_group();
        let ab = g.from_word(&[(1, 1), (2, 1)]).unwrap();
        let ba = g.from_word(&[(2, 1), (1, 1)]).unwrap();
        let diff = g.mul(&ab, &g.inverse(&ba).unwrap()).unwrap();
        assert_eq!(diff, g.generator_power(3, g.r()));
    }

    #[test]
    fn word_examples() {
        let g = splus_group();
        assert_eq!(g.from_word(&[]).unwrap(), g.identity());
        let commutator = g.from_word(&[(1, 1), (2, 1), (1, -1), (2, -1)]).unwrap();
        assert_eq!(commutator, g.generator_power(3, g.r()));
    }

    #[test]
    fn relations_pass_for_valid_descriptors() {
        for g in [splus_group(), sminus_group(), s0_group()] {
            let report = g.relation_report();
            assert!(!report.is_empty());
            for check in &report {
                assert!(check.holds, "{} failed for {:?}", check.name, g.kind());
            }
        }
    }

    #[test]
    fn perturbed_lift_breaks_first_relation() {
        let g = splus_group().with_perturbed_lift([1, 0]);
        let report = g.relation_report();
        assert!(!report[0].holds, "perturbation must break g0 g1 g0^-1");
        assert!(report.iter().any(|c| !c.holds));
    }

    #[test]
    fn associativity_randomized() {
        let mut state = 3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) % 5) as i64 - 2
        };
        for g in [splus_group(), sminus_group(), s0_group()] {
            for _ in 0..150 {
                let w1 = [(0usize, next()), (1, next()), (3, next())];
                let w2 = [(2usize, next()), (0, next()), (1, next())];
                let w3 = [(3usize, next()), (2, next()), (0, next())];
                let a = g.from_word(&w1).unwrap();
                let b = g.from_word(&w2).unwrap();
                let c = g.from_word(&w3).unwrap();
                let l = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
                let r = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn normal_form_invariant_under_relation_insertion() {
        // inserting any defining relation (as a trivial word) anywhere must
        // not change the normal form
        let g = splus_group();
        let relations: Vec<Vec<(usize, i64)>> = vec![
            // w_rel = lhs * rhs^-1 for the first conjugation relation
            vec![(0, 1), (1, 1), (0, -1), (2, -1), (1, -2)],
            vec![(1, 1), (2, 1), (1, -1), (2, -1), (3, -g.r())],
            vec![(3, 1), (0, 1), (3, -1), (0, -1)],
        ];
        for rel in &relations {
            assert_eq!(g.from_word(rel).unwrap(), g.identity(), "relator not trivial");
        }
        let mut state = 17u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 33) % 5) as i64 - 2
        };
        for _ in 0..60 {
            let word: Vec<(usize, i64)> =
                (0..4).map(|_| ((next().rem_euclid(4)) as usize, next())).collect();
            let base = g.from_word(&word).unwrap();
            for rel in &relations {
                for cut in 0..=word.len() {
                    let mut w2: Vec<(usize, i64)> = word[..cut].to_vec();
                    w2.extend_from_slice(rel);
                    w2.extend_from_slice(&word[cut..]);
                    assert_eq!(g.from_word(&w2).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn translation_subgroup_properties() {
        let g = splus_group();
        // commutators of translation generators land in the g3-image
        let c = g.commutator(&g.generator(1), &g.generator(2)).unwrap();
        let (n0, l1, l2, l3) = c.exponents();
        assert_eq!((n0, l1, l2), (0, BigInt::zero(), BigInt::zero()));
        assert_eq!(l3, BigInt::from(g.r()));
        // g3 is central among the translations
        for i in 1..=2 {
            assert_eq!(
                g.commutator(&g.generator(3), &g.generator(i)).unwrap(),
                g.identity()
            );
        }
        // the g0 exponent adds under multiplication
        let x = g.from_word(&[(0, 2), (1, 1)]).unwrap();
        let y = g.from_word(&[(0, -5), (2, 3)]).unwrap();
        assert_eq!(g.mul(&x, &y).unwrap().n0(), -3);
    }

    #[test]
    fn fingerprints_separate_the_three_kinds() {
        let fps = [
            s0_group().fingerprint(),
            splus_group().fingerprint(),
            sminus_group().fingerprint(),
        ];
        assert_eq!(
            fps[0],
            Fingerprint { center: CenterClass::Trivial, gamma_abelian: true }
        );
        assert_eq!(
            fps[1],
            Fingerprint { center: CenterClass::InfiniteCyclic, gamma_abelian: false }
        );
        assert_eq!(
            fps[2],
            Fingerprint { center: CenterClass::Trivial, gamma_abelian: false }
        );
        for i in 0..3 {
            for j in i + 1..3 {
                assert_ne!(fps[i], fps[j]);
            }
        }
    }

    #[test]
    fn mixed_descriptor_rejected() {
        let g = splus_group();
        let h = GroupDescriptor::new(
            Kind::SPlus,
            IntMat::from_i64(&[&[2, 1], &[1, 1]]),
            0,
            0,
            2,
        )
        .unwrap();
        let x = h.generator(3);
        assert_eq!(g.mul(&g.identity(), &x), Err(GroupError::MixedDescriptors));
    }

    #[test]
    fn invalid_descriptors_rejected() {
        assert!(matches!(
            GroupDescriptor::new(Kind::SPlus, IntMat::from_i64(&[&[2, 1], &[1, 0]]), 0, 0, 1),
            Err(GroupError::Determinant { .. })
        ));
        assert!(matches!(
            GroupDescriptor::new(Kind::SPlus, IntMat::from_i64(&[&[2, 1], &[1, 1]]), 0, 0, 0),
            Err(GroupError::ZeroR)
        ));
    }

    #[test]
    fn identity_isomorphism() {
        let g = splus_group();
        let iso = Isomorphism::new(
            IntMat::identity(2),
            [BigInt::zero(), BigInt::zero()],
            0,
            0,
            &g,
            &g,
        )
        .unwrap();
        for word in [vec![(0usize, 1i64)], vec![(1, 2), (3, -1)], vec![(0, -1), (2, 1)]] {
            let x = g.from_word(&word).unwrap();
            assert_eq!(iso.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn inner_automorphism_by_g0() {
        // the conjugation lift data (N, p-tilde) with l1 = l2 = 0 satisfies
        // the construction conditions with source = target
        for g in [splus_group(), sminus_group()] {
            let lift = g.conj_lift().unwrap().clone();
            let iso = Isomorphism::new(
                lift.matrix().clone(),
                lift.v2().clone(),
                0,
                0,
                &g,
                &g,
            )
            .expect("conjugation data must satisfy the lattice condition");
            let mut state = 23u64;
            let mut next = move || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(11);
                ((state >> 33) % 5) as i64 - 2
            };
            for _ in 0..50 {
                let word = [(0usize, next()), (1, next()), (2, next()), (3, next())];
                let x = g.from_word(&word).unwrap();
                let lhs = iso.apply(&x).unwrap();
                let g0 = g.generator(0);
                let rhs = g
                    .mul(&g.mul(&g0, &x).unwrap(), &g.inverse(&g0).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "inner automorphism mismatch for {:?}", g.kind());
            }
        }
    }

    #[test]
    fn isomorphism_is_a_homomorphism_on_random_pairs() {
        let g = splus_group();
        let lift = g.conj_lift().unwrap().clone();
        let iso = Isomorphism::new(
            lift.matrix().clone(),
            lift.v2().clone(),
            0,
            0,
            &g,
            &g,
        )
        .unwrap();
        let mut state = 41u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(12345);
            ((state >> 33) % 5) as i64 - 2
        };
        for _ in 0..200 {
            let a = g
                .from_word(&[(0, next()), (1, next()), (2, next()), (3, next())])
                .unwrap();
            let b = g
                .from_word(&[(3, next()), (0, next()), (2, next()), (1, next())])
                .unwrap();
            let lhs = iso.apply(&g.mul(&a, &b).unwrap()).unwrap();
            let rhs = g.mul(&iso.apply(&a).unwrap(), &iso.apply(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn isomorphism_injective_on_bounded_words() {
        let g = splus_group();
        let lift = g.conj_lift().unwrap().clone();
        let iso =
            Isomorphism::new(lift.matrix().clone(), lift.v2().clone(), 0, 0, &g, &g).unwrap();
        let mut seen = std::collections::HashMap::new();
        for n0 in -2i64..=2 {
            for l1 in -2i64..=2 {
                for l3 in -2i64..=2 {
                    let x = g.from_word(&[(0, n0), (1, l1), (3, l3)]).unwrap();
                    let y = iso.apply(&x).unwrap();
                    if let Some(prev) = seen.insert(format!("{y:?}"), x.clone()) {
                        assert_eq!(prev, x, "isomorphism not injective");
                    }
                }
            }
        }
    }

    #[test]
    fn bad_isomorphism_data_rejected_with_named_condition() {
        let g = splus_group();
        // half-integrality violated: odd doubled v for K with zero row product
        let e = Isomorphism::new(
            IntMat::identity(2),
            [BigInt::one(), BigInt::zero()],
            0,
            0,
            &g,
            &g,
        );
        assert_eq!(e.unwrap_err(), IsoError::HalfIntegrality);
        // intertwining violated
        let e = Isomorphism::new(
            IntMat::from_i64(&[&[0, 1], &[1, 0]]),
            [BigInt::zero(), BigInt::zero()],
            0,
            0,
            &g,
            &g,
        );
        assert_eq!(e.unwrap_err(), IsoError::Intertwining);
        // lattice condition violated: identity K but shifted v
        let e = Isomorphism::new(
            IntMat::identity(2),
            [BigInt::from(2), BigInt::zero()],
            0,
            0,
            &g,
            &g,
        );
        assert_eq!(e.unwrap_err(), IsoError::LatticeCondition);
    }
}
