//! The group Gamma_r = Z^2 x Z[r/2] with the twisted law
//! (zeta, y)(zeta', y') = (zeta + zeta', y + y' + (r/2) det(zeta, zeta')),
//! its embedding mu of the translation subgroup generated by g1, g2, g3, and
//! its endomorphism semigroup. Half-integers are stored as doubled integers,
//! so everything stays in Z.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::Zero;
use thiserror::Error;

use crate::exact::IntMat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GammaError {
    #[error("group parameter r must be nonzero")]
    ZeroR,
    #[error("elements from different Gamma_r groups: r = {left} vs r = {right}")]
    MixedR { left: i64, right: i64 },
    #[error("y must lie in Z[r/2]: for even r the doubled coordinate must be even")]
    HalfIntegrality,
}

/// Element (zeta, y) of Gamma_r; `y2` stores 2y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaRElem {
    zeta: [BigInt; 2],
    y2: BigInt,
    r: i64,
}

impl GammaRElem {
    pub fn new(r: i64, zeta: [BigInt; 2], y2: BigInt) -> Result<Self, GammaError> {
        if r == 0 {
            return Err(GammaError::ZeroR);
        }
        if r % 2 == 0 && y2.is_odd() {
            return Err(GammaError::HalfIntegrality);
        }
        Ok(GammaRElem { zeta, y2, r })
    }

    pub fn from_i64(r: i64, z1: i64, z2: i64, y2: i64) -> Result<Self, GammaError> {
        Self::new(r, [BigInt::from(z1), BigInt::from(z2)], BigInt::from(y2))
    }

    pub fn identity(r: i64) -> Self {
        GammaRElem {
            zeta: [BigInt::zero(), BigInt::zero()],
            y2: BigInt::zero(),
            r,
        }
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn zeta(&self) -> &[BigInt; 2] {
        &self.zeta
    }

    /// Doubled second coordinate 2y.
    pub fn y2(&self) -> &BigInt {
        &self.y2
    }

    pub fn is_identity(&self) -> bool {
        self.zeta[0].is_zero() && self.zeta[1].is_zero() && self.y2.is_zero()
    }

    /// The image of g1^l1 g2^l2 g3^l3: ((l1, l2), l3 + l1 l2 r/2).
    pub fn mu(r: i64, l1: i64, l2: i64, l3: i64) -> Result<Self, GammaError> {
        Self::mu_big(r, &BigInt::from(l1), &BigInt::from(l2), &BigInt::from(l3))
    }

    /// mu for arbitrary-precision exponents.
    pub fn mu_big(r: i64, l1: &BigInt, l2: &BigInt, l3: &BigInt) -> Result<Self, GammaError> {
        if r == 0 {
            return Err(GammaError::ZeroR);
        }
        let y2 = BigInt::from(2) * l3 + l1 * l2 * BigInt::from(r);
        Ok(GammaRElem {
            zeta: [l1.clone(), l2.clone()],
            y2,
            r,
        })
    }

    /// Exponents (l1, l2, l3) with self = mu(l1, l2, l3), when self lies in
    /// the mu-image.
    pub fn mu_preimage(&self) -> Option<(BigInt, BigInt, BigInt)> {
        let rem = &self.y2 - &self.zeta[0] * &self.zeta[1] * BigInt::from(self.r);
        if rem.is_even() {
            Some((self.zeta[0].clone(), self.zeta[1].clone(), rem / 2))
        } else {
            None
        }
    }

    /// Whether y - (r/2) zeta_1 zeta_2 is an integer, i.e. whether this
    /// element is the image under mu of a word in g1, g2, g3.
    pub fn in_mu_image(&self) -> bool {
        self.mu_preimage().is_some()
    }

    pub fn mul(&self, other: &GammaRElem) -> Result<GammaRElem, GammaError> {
        if self.r != other.r {
            return Err(GammaError::MixedR { left: self.r, right: other.r });
        }
        let det = &self.zeta[0] * &other.zeta[1] - &self.zeta[1] * &other.zeta[0];
        Ok(GammaRElem {
            zeta: [&self.zeta[0] + &other.zeta[0], &self.zeta[1] + &other.zeta[1]],
            y2: &self.y2 + &other.y2 + BigInt::from(self.r) * det,
            r: self.r,
        })
    }

    /// Inverse (-zeta, -y); the twist term vanishes on (zeta, -zeta).
    pub fn inverse(&self) -> GammaRElem {
        GammaRElem {
            zeta: [-&self.zeta[0], -&self.zeta[1]],
            y2: -&self.y2,
            r: self.r,
        }
    }

    pub fn pow(&self, e: i64) -> GammaRElem {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = GammaRElem::identity(self.r);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base).expect("same r");
        }
        acc
    }
}

/// Endomorphism of Gamma_r in the form (zeta, y) -> (zeta K, zeta v + det K y),
/// identified with the pair (K, v); `v2` stores 2v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaREnd {
    k: IntMat,
    v2: [BigInt; 2],
    r: i64,
}

impl GammaREnd {
    pub fn new(r: i64, k: IntMat, v2: [BigInt; 2]) -> Result<Self, GammaError> {
        if r == 0 {
            return Err(GammaError::ZeroR);
        }
        assert!(k.rows() == 2 && k.cols() == 2, "endomorphism matrix must be 2x2");
        if r % 2 == 0 && v2.iter().any(|x| x.is_odd()) {
            return Err(GammaError::HalfIntegrality);
        }
        Ok(GammaREnd { k, v2, r })
    }

    pub fn identity(r: i64) -> Self {
        GammaREnd {
            k: IntMat::identity(2),
            v2: [BigInt::zero(), BigInt::zero()],
            r,
        }
    }

    pub fn matrix(&self) -> &IntMat {
        &self.k
    }

    pub fn v2(&self) -> &[BigInt; 2] {
        &self.v2
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    /// Lift of the homomorphism sending the i-th generator to
    /// g1^{k_i1} g2^{k_i2} g3^{k_i3}: the pair (K, v) with
    /// v_i = k_i3 + (r/2) k_i1 k_i2.
    pub fn lift_hom(r: i64, k_rows: [[i64; 3]; 2]) -> Result<Self, GammaError> {
        if r == 0 {
            return Err(GammaError::ZeroR);
        }
        let k = IntMat::from_i64(&[
            &[k_rows[0][0], k_rows[0][1]],
            &[k_rows[1][0], k_rows[1][1]],
        ]);
        let v2 = [
            BigInt::from(2 * k_rows[0][2] + r * k_rows[0][0] * k_rows[0][1]),
            BigInt::from(2 * k_rows[1][2] + r * k_rows[1][0] * k_rows[1][1]),
        ];
        Ok(GammaREnd { k, v2, r })
    }

    /// Lift (N, p-tilde) of conjugation by g0, where p-tilde shifts (p, q)
    /// by (r/2) times the products of the rows of N.
    pub fn conj_lift(r: i64, n: &IntMat, p: i64, q: i64) -> Result<Self, GammaError> {
        assert!(n.rows() == 2 && n.cols() == 2);
        Self::lift_hom(
            r,
            [
                [n.at_i64(0, 0), n.at_i64(0, 1), p],
                [n.at_i64(1, 0), n.at_i64(1, 1), q],
            ],
        )
    }

    /// Whether the pair is induced from a homomorphism of the translation
    /// subgroups: v_i - (r/2) k_i1 k_i2 must be an integer for i = 1, 2.
    pub fn is_induced(&self) -> bool {
        (0..2).all(|i| {
            let prod = self.k.at(i, 0) * self.k.at(i, 1) * BigInt::from(self.r);
            (&self.v2[i] - prod).is_even()
        })
    }

    pub fn apply(&self, g: &GammaRElem) -> Result<GammaRElem, GammaError> {
        if self.r != g.r {
            return Err(GammaError::MixedR { left: self.r, right: g.r });
        }
        let zeta = self.k.apply_row(&g.zeta);
        let dot2 = &g.zeta[0] * &self.v2[0] + &g.zeta[1] * &self.v2[1];
        let y2 = dot2 + self.k.det() * &g.y2;
        Ok(GammaRElem {
            zeta: [zeta[0].clone(), zeta[1].clone()],
            y2,
            r: self.r,
        })
    }

    /// The endomorphism g -> self(other(g)). Under the pair identification
    /// this is the reversed semigroup product
    /// (K_other, v_other)(K_self, v_self) =
    /// (K_other K_self, K_other v_self + det(K_self) v_other).
    pub fn compose(&self, other: &GammaREnd) -> Result<GammaREnd, GammaError> {
        if self.r != other.r {
            return Err(GammaError::MixedR { left: self.r, right: other.r });
        }
        let k = other.k.mul(&self.k);
        let kv = other.k.apply(&self.v2);
        let det_self = self.k.det();
        let v2 = [
            &kv[0] + &det_self * &other.v2[0],
            &kv[1] + &det_self * &other.v2[1],
        ];
        Ok(GammaREnd { k, v2, r: self.r })
    }

    /// Inverse endomorphism (K^-1, -det(K) K^-1 v), defined when |det K| = 1.
    pub fn inverse(&self) -> Result<GammaREnd, GammaError> {
        assert!(self.k.is_unimodular(), "only unimodular pairs invert");
        let kinv = self.k.inverse_unimodular();
        let kv = kinv.apply(&self.v2);
        let d = self.k.det();
        let v2 = [-(&d * &kv[0]), -(&d * &kv[1])];
        let out = GammaREnd { k: kinv, v2, r: self.r };
        debug_assert!(out.compose(self).unwrap() == GammaREnd::identity(self.r));
        debug_assert!(self.compose(&out).unwrap() == GammaREnd::identity(self.r));
        Ok(out)
    }

    /// self composed with itself e times (negative e through the inverse).
    pub fn pow(&self, e: i64) -> Result<GammaREnd, GammaError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = GammaREnd::identity(self.r);
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(r: i64, z1: i64, z2: i64, y2: i64) -> GammaRElem {
        GammaRElem::from_i64(r, z1, z2, y2).unwrap()
    }

    #[test]
    fn product_of_basis_vectors_picks_up_half_twist() {
        for r in [1i64, 2, 3, -2] {
            let a = g(r, 1, 0, 0);
            let b = g(r, 0, 1, 0);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab, g(r, 1, 1, r)); // y = r/2, doubled = r
        }
    }

    #[test]
    fn identity_and_inverse() {
        let e = GammaRElem::identity(3);
        let x = g(3, 2, -1, 5);
        assert_eq!(e.mul(&x).unwrap(), x);
        assert_eq!(x.mul(&x.inverse()).unwrap(), e);
        assert_eq!(g(1, 1, 0, 0).inverse(), g(1, -1, 0, 0));
        // ((1,1), y=1) with r=2: inverse is ((-1,-1), -1), checked by product
        let x = g(2, 1, 1, 2);
        assert_eq!(x.mul(&x.inverse()).unwrap(), GammaRElem::identity(2));
        assert_eq!(x.inverse(), g(2, -1, -1, -2));
    }

    #[test]
    fn mixed_r_is_rejected() {
        assert_eq!(
            g(1, 0, 0, 0).mul(&g(2, 0, 0, 0)),
            Err(GammaError::MixedR { left: 1, right: 2 })
        );
    }

    #[test]
    fn even_r_forces_integer_y() {
        assert_eq!(GammaRElem::from_i64(2, 0, 0, 1), Err(GammaError::HalfIntegrality));
        assert!(GammaRElem::from_i64(3, 0, 0, 1).is_ok());
        assert_eq!(GammaRElem::from_i64(0, 0, 0, 0), Err(GammaError::ZeroR));
    }

    #[test]
    fn mu_formula_instances() {
        for r in [1i64, 2, 5] {
            assert_eq!(GammaRElem::mu(r, 1, 0, 0).unwrap(), g(r, 1, 0, 0));
            assert_eq!(GammaRElem::mu(r, 0, 0, 1).unwrap(), g(r, 0, 0, 2));
            assert_eq!(GammaRElem::mu(r, 1, 1, 1).unwrap(), g(r, 1, 1, 2 + r));
        }
    }

    #[test]
    fn mu_image_membership() {
        for r in [1i64, 3] {
            // ((1,1), r/2) is mu(1,1,0)
            assert!(g(r, 1, 1, r).in_mu_image());
        }
        // ((0,0), 1/2) with odd r is not in the image
        assert!(!g(1, 0, 0, 1).in_mu_image());
        assert!(GammaRElem::identity(5).in_mu_image());
    }

    #[test]
    fn mu_image_closed_under_group_ops() {
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 33) % 9) as i64 - 4
        };
        for r in [1i64, 2, 3] {
            for _ in 0..200 {
                let a = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let b = GammaRElem::mu(r, next(), next(), next()).unwrap();
                assert!(a.mul(&b).unwrap().in_mu_image());
                assert!(a.inverse().in_mu_image());
            }
        }
    }

    #[test]
    fn mu_is_a_homomorphism_with_commutator_relation() {
        for r in [1i64, 2, -3] {
            let g1 = GammaRElem::mu(r, 1, 0, 0).unwrap();
            let g2 = GammaRElem::mu(r, 0, 1, 0).unwrap();
            let g3 = GammaRElem::mu(r, 0, 0, 1).unwrap();
            // g1 g2 (g2 g1)^-1 = g3^r
            let lhs = g1
                .mul(&g2)
                .unwrap()
                .mul(&g2.mul(&g1).unwrap().inverse())
                .unwrap();
            assert_eq!(lhs, g3.pow(r));
            assert_eq!(lhs, g(r, 0, 0, 2 * r));
        }
    }

    #[test]
    fn associativity_randomized() {
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(97);
            ((state >> 32) % 11) as i64 - 5
        };
        for r in [1i64, 2] {
            for _ in 0..300 {
                let a = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let b = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let c = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let l = a.mul(&b).unwrap().mul(&c).unwrap();
                let rr = a.mul(&b.mul(&c).unwrap()).unwrap();
                assert_eq!(l, rr);
            }
        }
    }

    #[test]
    fn endomorphism_examples() {
        let r = 1;
        let id = GammaREnd::identity(r);
        let x = g(r, 2, 3, 5);
        assert_eq!(id.apply(&x).unwrap(), x);

        // det 1 matrix fixes the central coordinate
        let n = IntMat::from_i64(&[&[2, 1], &[1, 1]]);
        let phi = GammaREnd::conj_lift(r, &n, 7, -2).unwrap();
        let g3 = GammaRElem::mu(r, 0, 0, 1).unwrap();
        assert_eq!(phi.apply(&g3).unwrap(), g3);

        // det -1 inverts it
        let j = IntMat::from_i64(&[&[0, 1], &[1, 0]]);
        let psi = GammaREnd::new(r, j, [BigInt::zero(), BigInt::zero()]).unwrap();
        assert_eq!(psi.apply(&g3).unwrap(), g3.inverse());
    }

    #[test]
    fn lift_hom_instances() {
        assert_eq!(
            GammaREnd::lift_hom(3, [[1, 0, 0], [0, 1, 0]]).unwrap(),
            GammaREnd::identity(3)
        );
        // conjugation lift agrees with lift_hom on (N | p q)
        let n = IntMat::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(
            GammaREnd::conj_lift(5, &n, 1, 2).unwrap(),
            GammaREnd::lift_hom(5, [[2, 1, 1], [1, 1, 2]]).unwrap()
        );
        // J with zero offsets: the row products vanish, so v = 0
        let j = GammaREnd::lift_hom(3, [[0, 1, 0], [1, 0, 0]]).unwrap();
        assert_eq!(*j.v2(), [BigInt::zero(), BigInt::zero()]);
        assert!(j.is_induced());
    }

    #[test]
    fn endomorphisms_respect_the_group_law() {
        let mut state = 5u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 33) % 7) as i64 - 3
        };
        for r in [1i64, 2] {
            for _ in 0..200 {
                let phi = GammaREnd::lift_hom(
                    r,
                    [[next(), next(), next()], [next(), next(), next()]],
                )
                .unwrap();
                let a = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let b = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let lhs = phi.apply(&a.mul(&b).unwrap()).unwrap();
                let rhs = phi.apply(&a).unwrap().mul(&phi.apply(&b).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn composition_is_anti_multiplicative_pointwise() {
        let mut state = 11u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(17);
            ((state >> 33) % 7) as i64 - 3
        };
        for r in [1i64, 2] {
            for _ in 0..200 {
                let phi = GammaREnd::lift_hom(
                    r,
                    [[next(), next(), next()], [next(), next(), next()]],
                )
                .unwrap();
                let psi = GammaREnd::lift_hom(
                    r,
                    [[next(), next(), next()], [next(), next(), next()]],
                )
                .unwrap();
                let g = GammaRElem::mu(r, next(), next(), next()).unwrap();
                let comp = phi.compose(&psi).unwrap();
                assert_eq!(
                    comp.apply(&g).unwrap(),
                    phi.apply(&psi.apply(&g).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn compose_identity_and_translation_pairs() {
        let r = 2;
        let id = GammaREnd::identity(r);
        let phi = GammaREnd::lift_hom(r, [[2, 1, 3], [1, 1, -1]]).unwrap();
        assert_eq!(phi.compose(&id).unwrap(), phi);
        assert_eq!(id.compose(&phi).unwrap(), phi);
        // both matrices I: pair product reduces to adding the v parts
        let a = GammaREnd::new(r, IntMat::identity(2), [BigInt::from(2), BigInt::from(4)]).unwrap();
        let b = GammaREnd::new(r, IntMat::identity(2), [BigInt::from(6), BigInt::from(-2)]).unwrap();
        assert_eq!(
            a.compose(&b).unwrap(),
            GammaREnd::new(r, IntMat::identity(2), [BigInt::from(8), BigInt::from(2)]).unwrap()
        );
    }

    #[test]
    fn inverse_endomorphism_roundtrip() {
        let r = 1;
        let n = IntMat::from_i64(&[&[2, 1], &[1, 1]]);
        let phi = GammaREnd::conj_lift(r, &n, 3, -1).unwrap();
        let inv = phi.inverse().unwrap();
        assert!(inv.is_induced());
        let x = GammaRElem::mu(r, 2, -3, 4).unwrap();
        assert_eq!(inv.apply(&phi.apply(&x).unwrap()).unwrap(), x);
        assert_eq!(phi.apply(&inv.apply(&x).unwrap()).unwrap(), x);
    }
}
