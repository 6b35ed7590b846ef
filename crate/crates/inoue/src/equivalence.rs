//! Homotopy-equivalence deciders, biholomorphism builders, and
//! deformation-class representative enumeration.
//!
//! A decider verdict is always one of: Equivalent with a machine-checkable
//! witness, NotEquivalent with a structural obstruction, or Unknown when a
//! bounded search was exhausted. Unknown never merges classes downstream.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::integer::Integer;
use num::traits::{One, ToPrimitive, Zero};

use crate::exact::{
    centralizer_generator, commutant_lattice, gl2z_conjugator, pair_lattice,
    unimodular_in_lattice3, ConjugatorObstruction, ConjugatorSearch, IntMat, LatticeBasis,
    PairSign, QuadExt,
};
use crate::gamma_r::GammaRElem;
use crate::groups::Isomorphism;
use crate::surfaces::{sample_grid, Evaluator, Geometry, SurfaceDescriptor, DEFAULT_TOL};
use crate::{Kind, SearchBounds};

/// Witness (K, delta, epsilon) for a homotopy equivalence, with the integer
/// decomposition of the membership condition when the kind has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivWitness {
    pub kind: Kind,
    /// K in GL(2,Z), or the GL(3,Z) conjugator for S0.
    pub k: IntMat,
    pub delta: i8,
    /// Always +1 for S-; +-1 for S+ and S0 (conjugating M or M^-1).
    pub epsilon: i8,
    /// Coefficients (u, v, k13, k23) with
    /// delta (p', q') - epsilon K (p, q) = r (u, v) + (N' -+ I)(k13, k23).
    pub coeffs: Option<[BigInt; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    KindMismatch,
    /// |r| differs; |det K| = 1 makes equal magnitudes necessary.
    RMagnitude { r: i64, r_prime: i64 },
    CharPoly,
    /// Every conjugator branch resolved and the finite orbit check missed.
    OrbitExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    ConjugatorBound { bound: u32 },
    S0Bound { bound: u32 },
    EtaBound { bound: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(EquivWitness),
    NotEquivalent(Obstruction),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

/// Exact recheck of every witness condition. Returns a violated-condition
/// description on failure.
pub fn verify_witness(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    w: &EquivWitness,
) -> Result<(), String> {
    if s.kind != sp.kind || s.kind != w.kind {
        return Err("kind mismatch".into());
    }
    if !w.k.is_unimodular() {
        return Err("witness matrix is not unimodular".into());
    }
    if w.kind == Kind::S0 {
        let m_eps = s.mat.pow(w.epsilon as i64);
        if w.k.mul(&m_eps) != sp.mat.mul(&w.k) {
            return Err("conjugation T M^eps T^-1 = M' fails".into());
        }
        return Ok(());
    }
    let det_k = w.k.det().to_i64().expect("unimodular");
    if sp.r != (w.delta as i64) * det_k * s.r {
        return Err("r' = delta det(K) r fails".into());
    }
    let n_eps = s.mat.pow(w.epsilon as i64);
    if w.k.mul(&n_eps) != sp.mat.mul(&w.k) {
        return Err("N' = K N^eps K^-1 fails".into());
    }
    let coeffs = w.coeffs.as_ref().ok_or("membership coefficients missing")?;
    let sign = if w.kind == Kind::SPlus { PairSign::Minus } else { PairSign::Plus };
    let lat = pair_lattice(s.r, &sp.mat, sign).map_err(|e| e.to_string())?;
    let diff = membership_target(s, sp, &w.k, w.delta, w.epsilon);
    let recomposed = lat.generators().apply(&coeffs.to_vec());
    if recomposed != diff {
        return Err("membership decomposition does not reproduce delta p' - eps K p".into());
    }
    Ok(())
}

/// delta (p', q')^T - epsilon K (p, q)^T.
fn membership_target(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    k: &IntMat,
    delta: i8,
    epsilon: i8,
) -> Vec<BigInt> {
    let kp = k.apply(&[BigInt::from(s.p), BigInt::from(s.q)]);
    vec![
        BigInt::from(delta as i64 * sp.p) - BigInt::from(epsilon as i64) * &kp[0],
        BigInt::from(delta as i64 * sp.q) - BigInt::from(epsilon as i64) * &kp[1],
    ]
}

/// Decide homotopy equivalence of two validated descriptors.
pub fn decide(s: &SurfaceDescriptor, sp: &SurfaceDescriptor, bounds: &SearchBounds) -> Verdict {
    if s.kind != sp.kind {
        return Verdict::NotEquivalent(Obstruction::KindMismatch);
    }
    match s.kind {
        Kind::S0 => decide_s0(s, sp, bounds),
        Kind::SPlus | Kind::SMinus => decide_quad(s, sp, bounds),
    }
}

/// Common decision core for S+ and S-. Two surfaces are homotopy equivalent
/// exactly when some K in GL(2,Z) and signs delta, epsilon satisfy
///   r' = delta det(K) r,
///   N' = K N^eps K^-1,
///   delta (p', q') - eps K (p, q) in r Z^2 + (N' -+ I) Z^2,
/// with epsilon forced to +1 for S- (conjugating N^-1 would produce an
/// eigenvalue in (0, 1)).
fn decide_quad(s: &SurfaceDescriptor, sp: &SurfaceDescriptor, bounds: &SearchBounds) -> Verdict {
    let (r, rp) = (s.r, sp.r);
    if r.abs() != rp.abs() {
        return Verdict::NotEquivalent(Obstruction::RMagnitude { r, r_prime: rp });
    }
    let epsilons: &[i8] = if s.kind == Kind::SPlus { &[1, -1] } else { &[1] };
    let mut uncertain = false;
    let mut any_commutant = false;
    for &eps in epsilons {
        let n_eps = s.mat.pow(eps as i64);
        for det_target in [1i64, -1] {
            // r' = delta * det K * r pins delta for this branch
            let delta = ((rp / r) * det_target) as i8;
            match gl2z_conjugator(&n_eps, &sp.mat, Some(det_target), bounds.conjugator) {
                ConjugatorSearch::Found(k0) => {
                    any_commutant = true;
                    match orbit_hits(s, sp, &k0, eps, delta, bounds, true) {
                        Ok(mut hits) => {
                            if let Some(w) = hits.pop() {
                                debug_assert!(verify_witness(s, sp, &w).is_ok());
                                return Verdict::Equivalent(w);
                            }
                        }
                        Err(reason) => {
                            uncertain = true;
                            let _ = reason;
                        }
                    }
                }
                ConjugatorSearch::NoneCertain(ConjugatorObstruction::CharPolyMismatch) => {}
                ConjugatorSearch::NoneCertain(ConjugatorObstruction::EmptyCommutant) => {}
                ConjugatorSearch::NoneCertain(ConjugatorObstruction::DetNotRepresented) => {
                    // the branch is certainly empty, but the pair is not
                    // charpoly-obstructed
                    any_commutant = true;
                }
                ConjugatorSearch::Exhausted { .. } => {
                    any_commutant = true;
                    uncertain = true;
                }
            }
        }
    }
    if uncertain {
        Verdict::Unknown(UnknownReason::ConjugatorBound { bound: bounds.conjugator })
    } else if !any_commutant {
        Verdict::NotEquivalent(Obstruction::CharPoly)
    } else {
        Verdict::NotEquivalent(Obstruction::OrbitExhausted)
    }
}

/// All membership hits over the centralizer orbit of the base conjugator.
///
/// Every conjugator with the same determinant as `k0` has the form
/// +- C^j K0 with C a fundamental determinant-1 unit of the commutant of N';
/// C fixes r Z^2 and commutes with N' - I, so it permutes the finite group
/// Z^2 / (r Z^2 + (N' -+ I) Z^2) and the membership condition only needs to
/// be tested along the finite orbit of K0 (p, q).
fn orbit_hits(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    k0: &IntMat,
    eps: i8,
    delta: i8,
    bounds: &SearchBounds,
    first_only: bool,
) -> Result<Vec<EquivWitness>, UnknownReason> {
    let sign = if s.kind == Kind::SPlus { PairSign::Minus } else { PairSign::Plus };
    let lat = pair_lattice(s.r, &sp.mat, sign).expect("r validated nonzero");
    let c0 = centralizer_generator(&sp.mat, bounds.conjugator)
        .map_err(|_| UnknownReason::ConjugatorBound { bound: bounds.conjugator })?;
    debug_assert!(preserves_lattice(&c0, &lat));
    let target = lat.reduce(&[
        BigInt::from(delta as i64 * sp.p),
        BigInt::from(delta as i64 * sp.q),
    ]);
    let w0 = k0.apply(&[BigInt::from(s.p), BigInt::from(s.q)]);
    let cap = lat.index().to_u64().unwrap_or(u64::MAX).saturating_add(1);
    let mut hits = Vec::new();
    for elem_sign in [1i64, -1] {
        let start: Vec<BigInt> = lat.reduce(
            &w0.iter()
                .map(|x| BigInt::from(eps as i64 * elem_sign) * x)
                .collect::<Vec<_>>(),
        );
        let mut v = start.clone();
        let mut power = 0u64;
        loop {
            if v == target {
                let k = c0
                    .pow(power as i64)
                    .mul(k0)
                    .scale(&BigInt::from(elem_sign));
                let diff = membership_target(s, sp, &k, delta, eps);
                let coeffs = lat
                    .membership(&diff)
                    .expect("orbit hit must be an exact member");
                let w = EquivWitness {
                    kind: s.kind,
                    k,
                    delta,
                    epsilon: eps,
                    coeffs: Some([
                        coeffs[0].clone(),
                        coeffs[1].clone(),
                        coeffs[2].clone(),
                        coeffs[3].clone(),
                    ]),
                };
                debug_assert!(verify_witness(s, sp, &w).is_ok(), "{:?}", verify_witness(s, sp, &w));
                hits.push(w);
                if first_only {
                    return Ok(hits);
                }
            }
            v = lat.reduce(&c0.apply(&v));
            power += 1;
            if v == start || power > cap {
                break;
            }
        }
    }
    Ok(hits)
}

fn preserves_lattice(c: &IntMat, lat: &LatticeBasis) -> bool {
    (0..lat.generators().cols()).all(|j| {
        let col: Vec<BigInt> = (0..2).map(|i| lat.generators().at(i, j).clone()).collect();
        lat.contains(&c.apply(&col))
    })
}

/// Bounded GL(3,Z) conjugacy of M^{+-1} to M'. This criterion is the
/// fundamental-group one (Z^3 by_M Z); a negative charpoly comparison is
/// conclusive, a missed bounded search is not.
fn decide_s0(s: &SurfaceDescriptor, sp: &SurfaceDescriptor, bounds: &SearchBounds) -> Verdict {
    let mut matched = false;
    for eps in [1i8, -1] {
        let m_eps = s.mat.pow(eps as i64);
        if m_eps.charpoly3() != sp.mat.charpoly3() {
            continue;
        }
        matched = true;
        let basis = commutant_lattice(&m_eps, &sp.mat);
        if basis.len() != 3 {
            continue;
        }
        for det_target in [1i64, -1] {
            if let Some(t) = unimodular_in_lattice3(&basis, det_target, bounds.s0) {
                debug_assert_eq!(t.mul(&m_eps), sp.mat.mul(&t));
                return Verdict::Equivalent(EquivWitness {
                    kind: Kind::S0,
                    k: t,
                    delta: 1,
                    epsilon: eps,
                    coeffs: None,
                });
            }
        }
    }
    if matched {
        Verdict::Unknown(UnknownReason::S0Bound { bound: bounds.s0 })
    } else {
        Verdict::NotEquivalent(Obstruction::CharPoly)
    }
}

/// Affine biholomorphism (w, z) -> (c w + d, e w + f z + g) from the
/// adjusted target surface to the source surface, with exact coefficients
/// in Q(sqrt(D)).
#[derive(Debug, Clone)]
pub struct BiholMap {
    pub c: QuadExt,
    pub d: QuadExt,
    pub e: QuadExt,
    pub f: QuadExt,
    /// Present for S- only.
    pub g: Option<QuadExt>,
    /// Adjusted translation parameter of the target surface (S+).
    pub t_hat: Complex64,
    pub eta: (i64, i64),
    pub v2: [BigInt; 2],
    /// Largest generator-conjugation deviation observed on the sample grid.
    pub max_deviation: f64,
}

impl BiholMap {
    pub fn apply(&self, w: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let (c, d, e, f) = (self.c.embed(), self.d.embed(), self.e.embed(), self.f.embed());
        let g = self.g.as_ref().map(|x| x.embed()).unwrap_or(0.0);
        (c * w + d, e * w + f * z + g)
    }

    pub fn summary(&self) -> String {
        match &self.g {
            Some(g) => format!(
                "(w,z) -> ({} w + {}, {} w + {} z + {})",
                self.c, self.d, self.e, self.f, g
            ),
            None => format!(
                "(w,z) -> ({} w + {}, {} w + {} z)",
                self.c, self.d, self.e, self.f
            ),
        }
    }
}

/// A successfully built and verified map, together with the group
/// isomorphism it intertwines.
#[derive(Debug, Clone)]
pub struct BiholBuilt {
    pub map: BiholMap,
    pub iso: Isomorphism,
}

#[derive(Debug)]
pub enum BiholOutcome {
    Built(Box<BiholBuilt>),
    /// The eigenvector ratio came out negative: the map lands on the
    /// opposite-orientation twin of the target.
    WrongOrientation,
    /// No translation offset eta within the bound solves the lattice
    /// equation integrally. Inconclusive.
    EtaExhausted { bound: i64 },
}

#[derive(Debug, thiserror::Error)]
pub enum BiholError {
    #[error("the construction assumes r = r'")]
    RMismatch,
    #[error("the construction assumes epsilon = +1")]
    EpsilonUnsupported,
    #[error("witness fails exact verification: {0}")]
    InvalidWitness(String),
    #[error("builders exist for S+ and S- only")]
    KindUnsupported,
    #[error("internal inconsistency: generator {name} deviates by {deviation}")]
    VerificationFailed { name: String, deviation: f64 },
}

/// Construct the explicit biholomorphism attached to a witness with
/// epsilon = +1 and r = r'. Searches the translation offset eta over
/// max-norm shells, solves the lattice equation for v exactly, builds the
/// affine map, and verifies it conjugates all four generator actions on the
/// sample grid.
pub fn build_bihol(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    witness: &EquivWitness,
    eta_bound: i64,
) -> Result<BiholOutcome, BiholError> {
    if s.kind == Kind::S0 {
        return Err(BiholError::KindUnsupported);
    }
    if s.r != sp.r {
        return Err(BiholError::RMismatch);
    }
    if witness.epsilon != 1 {
        return Err(BiholError::EpsilonUnsupported);
    }
    verify_witness(s, sp, witness).map_err(BiholError::InvalidWitness)?;
    let k = &witness.k;
    let det_k = k.det();
    let gs = Geometry::derive(s).expect("validated");
    let gp = Geometry::derive(sp).expect("validated");
    assert_eq!(gs.disc, gp.disc, "conjugate matrices share the field");
    let disc = &gs.disc;

    // c a' = K a fixes c; the sign of c decides which orientation twin the
    // map reaches.
    let ka = apply_quad(k, &gs.a, disc);
    let lead = if gp.a[0].is_zero() { 1 } else { 0 };
    let c = &ka[lead] / &gp.a[lead];
    for i in 0..2 {
        assert_eq!(ka[i], &c * &gp.a[i], "K a must be proportional to a'");
    }
    if c.signum() < 0 {
        return Ok(BiholOutcome::WrongOrientation);
    }
    // f b' = c K b holds automatically with f = det(K) theta / theta'
    let f = &(&QuadExt::from_int(&det_k, disc) * &gs.theta) / &gp.theta;
    let kb = apply_quad(k, &gs.b, disc);
    for i in 0..2 {
        assert_eq!(&f * &gp.b[i], &c * &kb[i], "f b' = c K b must follow");
    }

    // doubled lattice equation:
    // (N' -+ I) v2 = K p2 - det(K) p'2 +- 2 r K (-l2, l1)
    let eye = IntMat::identity(2);
    let (shift, eta_sign) = match s.kind {
        Kind::SPlus => (sp.mat.sub(&eye), BigInt::one()),
        Kind::SMinus => (sp.mat.add(&eye), -BigInt::one()),
        Kind::S0 => unreachable!(),
    };
    let shift_det = shift.det();
    let shift_adj = IntMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => shift.at(1, 1).clone(),
        (0, 1) => -shift.at(0, 1),
        (1, 0) => -shift.at(1, 0),
        _ => shift.at(0, 0).clone(),
    });
    let p2 = shifted_p2(s);
    let pp2 = shifted_p2(sp);
    let kp2 = k.apply(&p2);
    let base_rhs = [
        &kp2[0] - &det_k * &pp2[0],
        &kp2[1] - &det_k * &pp2[1],
    ];
    let two_r = BigInt::from(2 * s.r);

    let candidates = std::iter::once((0i64, 0i64)).chain(eta_shells(eta_bound));
    for (l1, l2) in candidates {
        let keta = k.apply(&[BigInt::from(-l2), BigInt::from(l1)]);
        let rhs = [
            &base_rhs[0] + &eta_sign * &two_r * &keta[0],
            &base_rhs[1] + &eta_sign * &two_r * &keta[1],
        ];
        let num = shift_adj.apply(&rhs);
        if num.iter().any(|x| !(x % &shift_det).is_zero()) {
            continue;
        }
        let v2 = [&num[0] / &shift_det, &num[1] / &shift_det];
        // half-integrality: v_i - (r/2) k_i1 k_i2 must be an integer
        let induced = (0..2).all(|i| {
            let prod = k.at(i, 0) * k.at(i, 1) * BigInt::from(s.r);
            (&v2[i] - prod).is_even()
        });
        if !induced {
            continue;
        }
        let built = assemble_and_verify(s, sp, witness, (l1, l2), v2, &gs, &c, &f)?;
        return Ok(BiholOutcome::Built(Box::new(built)));
    }
    Ok(BiholOutcome::EtaExhausted { bound: eta_bound })
}

/// Shells of increasing max-norm over eta = (l1, l2), excluding the origin.
fn eta_shells(bound: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=bound).flat_map(|s| {
        let mut shell = Vec::new();
        for x in (-s..=s).rev() {
            for y in (-s..=s).rev() {
                if x.abs() == s || y.abs() == s {
                    shell.push((x, y));
                }
            }
        }
        shell
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble_and_verify(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    witness: &EquivWitness,
    eta: (i64, i64),
    v2: [BigInt; 2],
    gs: &Geometry,
    c: &QuadExt,
    f: &QuadExt,
) -> Result<BiholBuilt, BiholError> {
    let disc = &gs.disc;
    let (l1, l2) = eta;
    let k = &witness.k;
    let iso = Isomorphism::new(
        k.clone(),
        v2.clone(),
        l1,
        l2,
        &sp.group(),
        &s.group(),
    )
    .expect("solved data satisfies the isomorphism conditions");

    let ql = |x: i64| QuadExt::from_i64(x, disc);
    let eta_a = &(&ql(l1) * &gs.a[0]) + &(&ql(l2) * &gs.a[1]);
    let eta_b = &(&ql(l1) * &gs.b[0]) + &(&ql(l2) * &gs.b[1]);
    let eta_c = &(&ql(l1) * &gs.c_shift[0]) + &(&ql(l2) * &gs.c_shift[1]);
    let alpha = &gs.alpha;
    let one = QuadExt::one(disc);
    let half = QuadExt::rational(BigRational::new(BigInt::one(), BigInt::from(2)), disc);
    let quarter = QuadExt::rational(BigRational::new(BigInt::one(), BigInt::from(4)), disc);

    // d = -alpha/(alpha - 1) (eta a) for both kinds
    let d = -&(&(alpha / &(alpha - &one)) * &eta_a);
    let (e, g, t_hat) = match s.kind {
        Kind::SPlus => {
            let e = &(c * &eta_b) / &(alpha - &one);
            // f t' - t = -alpha/(alpha-1)(eta a)(eta b) + eta c-tilde
            //            + (eta a)(eta b)/2 - (theta/2) l1 l2
            let rhs = &(&(&(&d * &eta_b) + &eta_c) + &(&half * &(&eta_a * &eta_b)))
                - &(&(&half * &gs.theta) * &ql(l1 * l2));
            let f_emb = f.embed();
            let t_hat = Complex64::new((s.t.re + rhs.embed()) / f_emb, s.t.im / f_emb);
            (e, None, t_hat)
        }
        Kind::SMinus => {
            let e = -&(&(c * &eta_b) / &(alpha + &one));
            // 2g = -d (eta b) - eta c-tilde + (theta/2) l1 l2 - (eta a)(eta b)/2
            let g = &(&half
                * &(&(&(-&(&d * &eta_b)) - &eta_c)
                    + &(&(&half * &gs.theta) * &ql(l1 * l2))))
                - &(&quarter * &(&eta_a * &eta_b));
            (e, Some(g), Complex64::new(0.0, 0.0))
        }
        Kind::S0 => unreachable!(),
    };

    let map = BiholMap {
        c: c.clone(),
        d,
        e,
        f: f.clone(),
        g,
        t_hat,
        eta,
        v2: v2.clone(),
        max_deviation: 0.0,
    };

    // verify: map . g'_i = rho(g'_i) . map for all four generators on the grid
    let ev_s = gs.evaluator();
    let ev_sp = Evaluator::new(&sp.with_t(t_hat)).expect("validated");
    let det_k = k.det().to_i64().expect("unimodular");
    let r = s.r;
    let rho_gamma: Vec<GammaRElem> = vec![
        GammaRElem::new(r, [k.at(0, 0).clone(), k.at(0, 1).clone()], v2[0].clone())
            .expect("half-integrality checked"),
        GammaRElem::new(r, [k.at(1, 0).clone(), k.at(1, 1).clone()], v2[1].clone())
            .expect("half-integrality checked"),
        GammaRElem::mu(r, 0, 0, det_k).expect("r nonzero"),
    ];
    let mut max_dev = 0.0f64;
    let mut worst = String::new();
    for idx in 0..=3usize {
        for (w, z) in sample_grid() {
            let (gw, gz) = ev_sp.generator(idx, 1, w, z);
            let lhs = map.apply(gw, gz);
            let (mw, mz) = map.apply(w, z);
            let rhs = if idx == 0 {
                ev_s.word(&[(0, 1), (1, l1), (2, l2)], mw, mz)
            } else {
                ev_s.gamma_action(&rho_gamma[idx - 1], mw, mz)
            };
            let dev = (lhs.0 - rhs.0).norm() + (lhs.1 - rhs.1).norm();
            if dev > max_dev {
                max_dev = dev;
                worst = format!("g{idx}");
            }
        }
    }
    if max_dev >= DEFAULT_TOL {
        return Err(BiholError::VerificationFailed { name: worst, deviation: max_dev });
    }
    let mut map = map;
    map.max_deviation = max_dev;
    Ok(BiholBuilt { map, iso })
}

fn apply_quad(k: &IntMat, v: &[QuadExt; 2], disc: &BigInt) -> [QuadExt; 2] {
    [0, 1].map(|i| {
        let mut acc = QuadExt::zero(disc);
        for j in 0..2 {
            acc = &acc + &(&QuadExt::from_int(k.at(i, j), disc) * &v[j]);
        }
        acc
    })
}

/// Doubled shifted twist vector (2p + r n11 n12, 2q + r n21 n22).
fn shifted_p2(s: &SurfaceDescriptor) -> Vec<BigInt> {
    let n = &s.mat;
    vec![
        BigInt::from(2 * s.p) + BigInt::from(s.r) * n.at(0, 0) * n.at(0, 1),
        BigInt::from(2 * s.q) + BigInt::from(s.r) * n.at(1, 0) * n.at(1, 1),
    ]
}

/// The deformation-class representatives attached to a surface: at most 16
/// for S+ (indexed by d, delta, epsilon and the orientation sign), at most 8
/// for S- (no epsilon), and exactly the conjugate pair for S0.
pub fn enumerate_representatives(s: &SurfaceDescriptor) -> Vec<SurfaceDescriptor> {
    s.validate().expect("valid descriptor");
    let mut out: Vec<SurfaceDescriptor> = Vec::new();
    let mut push = |d: SurfaceDescriptor| {
        if !out.contains(&d) {
            out.push(d);
        }
    };
    match s.kind {
        Kind::S0 => {
            let mut a = s.clone();
            a.t = Complex64::new(0.0, 0.0);
            a.conj = false;
            let mut b = a.clone();
            b.conj = true;
            push(a);
            push(b);
        }
        Kind::SPlus | Kind::SMinus => {
            let j = IntMat::from_i64(&[&[0, 1], &[1, 0]]);
            let epsilons: &[i64] = if s.kind == Kind::SPlus { &[1, -1] } else { &[1] };
            for d in [1i64, -1] {
                let k = if d == 1 { IntMat::identity(2) } else { j.clone() };
                for delta in [1i64, -1] {
                    for &eps in epsilons {
                        let n_rep = k.mul(&s.mat.pow(eps)).mul(&k.inverse_unimodular());
                        let kp = k.apply(&[BigInt::from(s.p), BigInt::from(s.q)]);
                        // P, Q solve delta (P,Q) - eps K (p,q) = 0, which lies
                        // in every candidate lattice
                        let pq: Vec<i64> = kp
                            .iter()
                            .map(|x| (delta * eps * x).to_i64().expect("desk scale"))
                            .collect();
                        let r_rep = d * delta * s.r;
                        for sign in [1i8, -1] {
                            let desc = match s.kind {
                                Kind::SPlus => SurfaceDescriptor::splus(
                                    n_rep.clone(),
                                    pq[0],
                                    pq[1],
                                    r_rep,
                                    Complex64::new(0.0, 0.0),
                                    sign,
                                ),
                                Kind::SMinus => SurfaceDescriptor::sminus(
                                    n_rep.clone(),
                                    pq[0],
                                    pq[1],
                                    r_rep,
                                    sign,
                                ),
                                Kind::S0 => unreachable!(),
                            };
                            debug_assert!(desc.validate().is_ok());
                            push(desc);
                        }
                    }
                }
            }
        }
    }
    debug_assert!(out.len() <= expected_rep_cap(s.kind));
    out
}

pub fn expected_rep_cap(kind: Kind) -> usize {
    match kind {
        Kind::S0 => 2,
        Kind::SPlus => 16,
        Kind::SMinus => 8,
    }
}

/// Outcome of the deformation-class comparison.
#[derive(Debug)]
pub enum DeformationVerdict {
    SameClass(Chain),
    /// Homotopy equivalent, but the only constructed maps reach the
    /// orientation twin or no map was constructible within bounds; the
    /// two-element ambiguity is left unresolved.
    CandidatePair { reason: String },
    Distinct(Obstruction),
    Unknown(UnknownReason),
}

#[derive(Debug, Clone)]
pub struct Chain {
    pub links: Vec<ChainLink>,
}

#[derive(Debug, Clone)]
pub enum ChainLink {
    /// Replace the deformation-irrelevant translation parameter.
    TNormalize { from: Complex64, to: Complex64 },
    Bihol { summary: String, max_deviation: f64 },
}

/// Try to certify that two homotopy-equivalent surfaces lie in the same
/// deformation class by building an explicit biholomorphism chain.
pub fn deformation_class(
    s: &SurfaceDescriptor,
    sp: &SurfaceDescriptor,
    bounds: &SearchBounds,
) -> DeformationVerdict {
    match decide(s, sp, bounds) {
        Verdict::NotEquivalent(o) => return DeformationVerdict::Distinct(o),
        Verdict::Unknown(u) => return DeformationVerdict::Unknown(u),
        Verdict::Equivalent(_) => {}
    }
    if s.kind == Kind::S0 {
        return if s.mat == sp.mat && s.conj == sp.conj && s.sign == sp.sign {
            DeformationVerdict::SameClass(Chain { links: vec![] })
        } else if s.mat == sp.mat && s.conj == sp.conj {
            DeformationVerdict::CandidatePair {
                reason: "orientation twin; the two-element ambiguity is not resolved".into(),
            }
        } else if s.mat == sp.mat {
            DeformationVerdict::CandidatePair {
                reason: "conjugate eigenvector pair; distinctness is an analytic result outside \
                         this toolkit's scope"
                    .into(),
            }
        } else {
            DeformationVerdict::CandidatePair {
                reason: "fundamental groups match but no explicit S0 map is constructed".into(),
            }
        };
    }
    if s.r != sp.r {
        return DeformationVerdict::CandidatePair {
            reason: format!(
                "r' = {} differs from r = {}: the pair is related through the representative \
                 family only (the map construction assumes r = r')",
                sp.r, s.r
            ),
        };
    }
    // same-r, epsilon = +1 witnesses: delta is forced to det K
    let mut eta_exhausted = false;
    let mut twin_built = false;
    let mut uncertain = false;
    for det_target in [1i64, -1] {
        let delta = det_target as i8;
        match gl2z_conjugator(&s.mat, &sp.mat, Some(det_target), bounds.conjugator) {
            ConjugatorSearch::Found(k0) => {
                match orbit_hits(s, sp, &k0, 1, delta, bounds, false) {
                    Ok(hits) => {
                        for w in hits {
                            match build_bihol(s, sp, &w, bounds.eta) {
                                Ok(BiholOutcome::Built(built)) => {
                                    let mut links = Vec::new();
                                    if (sp.t - built.map.t_hat).norm() > 1e-12 {
                                        links.push(ChainLink::TNormalize {
                                            from: sp.t,
                                            to: built.map.t_hat,
                                        });
                                    }
                                    links.push(ChainLink::Bihol {
                                        summary: built.map.summary(),
                                        max_deviation: built.map.max_deviation,
                                    });
                                    return DeformationVerdict::SameClass(Chain { links });
                                }
                                Ok(BiholOutcome::WrongOrientation) => {
                                    let twin = sp.with_sign(-sp.sign);
                                    if let Ok(BiholOutcome::Built(_)) =
                                        build_bihol(s, &twin, &w, bounds.eta)
                                    {
                                        twin_built = true;
                                    }
                                }
                                Ok(BiholOutcome::EtaExhausted { .. }) => {
                                    eta_exhausted = true;
                                }
                                Err(e) => panic!("verified witness must build: {e}"),
                            }
                        }
                    }
                    Err(_) => uncertain = true,
                }
            }
            ConjugatorSearch::NoneCertain(_) => {}
            ConjugatorSearch::Exhausted { .. } => uncertain = true,
        }
    }
    if twin_built {
        DeformationVerdict::CandidatePair {
            reason: "biholomorphic to the orientation twin (-a'); the two-element ambiguity \
                     is not resolved"
                .into(),
        }
    } else if eta_exhausted {
        DeformationVerdict::Unknown(UnknownReason::EtaBound { bound: bounds.eta })
    } else if uncertain {
        DeformationVerdict::Unknown(UnknownReason::ConjugatorBound { bound: bounds.conjugator })
    } else {
        DeformationVerdict::CandidatePair {
            reason: "homotopy equivalent, but only through orientation- or r-reversing data; \
                     no same-r map with epsilon = +1 exists"
                .into(),
        }
    }
}
