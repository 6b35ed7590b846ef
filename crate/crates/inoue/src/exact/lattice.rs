use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use thiserror::Error;

use super::intmat::{IntMat, Snf};
use super::quad::QuadExt;

/// A sublattice of Z^n given by generator vectors (the columns of `gens`),
/// stored together with its column-style Hermite normal form.
///
/// Membership is decided deterministically through the Smith normal form of
/// the generator matrix, and a positive answer always comes with integer
/// coefficients in the *original* generators, verified exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    gens: IntMat,
    hnf: IntMat,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degenerate lattice: r must be nonzero")]
    DegenerateR,
}

impl LatticeBasis {
    pub fn from_generators(gens: IntMat) -> Self {
        let hnf = column_hnf(&gens);
        LatticeBasis { gens, hnf }
    }

    pub fn generators(&self) -> &IntMat {
        &self.gens
    }

    /// Canonical Hermite-reduced column basis (lower triangular, positive
    /// pivots, entries below a pivot reduced modulo it).
    pub fn hnf(&self) -> &IntMat {
        &self.hnf
    }

    pub fn rank(&self) -> usize {
        self.hnf.cols()
    }

    /// Integer coefficients x with gens * x = v, if v lies in the lattice.
    pub fn membership(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.gens.rows());
        let Snf { s, u, v: vt } = self.gens.snf();
        let rhs = u.apply(v);
        let n = self.gens.rows().min(self.gens.cols());
        let mut y = vec![BigInt::zero(); self.gens.cols()];
        for (i, r) in rhs.iter().enumerate() {
            let d = if i < n { s.at(i, i).clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !r.is_zero() {
                    return None;
                }
            } else {
                if !(r % &d).is_zero() {
                    return None;
                }
                y[i] = r / &d;
            }
        }
        let x = vt.apply(&y);
        debug_assert_eq!(self.gens.apply(&x), v.to_vec());
        Some(x)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.membership(v).is_some()
    }

    /// Reduce a vector modulo the lattice (full-rank square HNF required).
    /// The result is the canonical coset representative with coordinates in
    /// [0, pivot) after triangular reduction.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let h = &self.hnf;
        assert!(h.rows() == h.cols(), "reduce needs a full-rank lattice");
        let n = h.rows();
        let mut out = v.to_vec();
        // lower triangular: column i only touches coordinates >= i, so a
        // top-down sweep leaves every residue in [0, pivot)
        for i in 0..n {
            let p = h.at(i, i);
            assert!(!p.is_zero());
            let q = out[i].div_floor(p);
            if q.is_zero() {
                continue;
            }
            for k in 0..n {
                let sub = h.at(k, i) * &q;
                out[k] -= sub;
            }
        }
        out
    }

    /// Index [Z^n : L] for a full-rank lattice.
    pub fn index(&self) -> BigInt {
        let h = &self.hnf;
        assert!(h.rows() == h.cols(), "index needs a full-rank lattice");
        (0..h.rows()).map(|i| h.at(i, i).clone()).product()
    }
}

/// Column-style Hermite normal form: lower triangular with positive pivots;
/// in each pivot row, entries of later columns are zero and entries of
/// earlier columns are reduced into [0, pivot). Zero columns are dropped.
fn column_hnf(m: &IntMat) -> IntMat {
    let rows = m.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| (0..rows).map(|i| m.at(i, j).clone()).collect())
        .collect();
    let mut pivot_col = 0;
    for row in 0..rows {
        // gcd the entries of this row across the unfinished columns
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols.len() {
                if !cols[j][row].is_zero() {
                    best = match best {
                        Some(b) if cols[b][row].abs() <= cols[j][row].abs() => Some(b),
                        _ => Some(j),
                    };
                }
            }
            let b = match best {
                Some(b) => b,
                None => break,
            };
            cols.swap(pivot_col, b);
            let mut any_left = false;
            for j in pivot_col + 1..cols.len() {
                if !cols[j][row].is_zero() {
                    let q = &cols[j][row] / &cols[pivot_col][row];
                    for i in 0..rows {
                        let sub = &cols[pivot_col][i] * &q;
                        cols[j][i] -= sub;
                    }
                    if !cols[j][row].is_zero() {
                        any_left = true;
                    }
                }
            }
            if !any_left {
                break;
            }
        }
        if pivot_col < cols.len() && !cols[pivot_col][row].is_zero() {
            if cols[pivot_col][row].is_negative() {
                for i in 0..rows {
                    cols[pivot_col][i] = -cols[pivot_col][i].clone();
                }
            }
            // reduce earlier columns in this pivot row
            for j in 0..pivot_col {
                let q = cols[j][row].div_floor(&cols[pivot_col][row]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let sub = &cols[pivot_col][i] * &q;
                        cols[j][i] -= sub;
                    }
                }
            }
            pivot_col += 1;
        }
    }
    cols.truncate(pivot_col);
    let rank = cols.len();
    IntMat::from_fn(rows, rank, |i, j| cols[j][i].clone())
}

/// Which of the two shifted sublattices of Z^2 to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    /// r Z^2 + (N' - I) Z^2
    Minus,
    /// r Z^2 + (N' + I) Z^2
    Plus,
}

/// The sublattice r Z^2 + (N' -+ I) Z^2 used by the homotopy criteria.
pub fn pair_lattice(r: i64, nprime: &IntMat, sign: PairSign) -> Result<LatticeBasis, LatticeError> {
    if r == 0 {
        return Err(LatticeError::DegenerateR);
    }
    assert!(nprime.rows() == 2 && nprime.cols() == 2);
    let shift = match sign {
        PairSign::Minus => nprime.sub(&IntMat::identity(2)),
        PairSign::Plus => nprime.add(&IntMat::identity(2)),
    };
    let gens = IntMat::from_fn(2, 4, |i, j| match j {
        0 | 1 => {
            if i == j {
                BigInt::from(r)
            } else {
                BigInt::zero()
            }
        }
        _ => shift.at(i, j - 2).clone(),
    });
    Ok(LatticeBasis::from_generators(gens))
}

/// Basis of the solution lattice {K in M_n(Z) : K A = B K}, via the kernel of
/// the induced n^2 x n^2 integer map. Rank is 0 when the characteristic
/// polynomials differ, and n when they agree and are irreducible.
pub fn commutant_lattice(a: &IntMat, b: &IntMat) -> Vec<IntMat> {
    assert!(a.is_square() && b.is_square() && a.rows() == b.rows());
    let n = a.rows();
    // unknowns k_{il}, row-major; equation (K A - B K)_{ij} = 0
    let sys = IntMat::from_fn(n * n, n * n, |eq, unk| {
        let (i, j) = (eq / n, eq % n);
        let (ui, ul) = (unk / n, unk % n);
        let mut coeff = BigInt::zero();
        if ui == i {
            coeff += a.at(ul, j);
        }
        if ul == j {
            coeff -= b.at(i, ui);
        }
        coeff
    });
    let kernel = sys.right_kernel();
    // canonicalize the basis so downstream searches are deterministic
    let mat = IntMat::from_fn(n * n, kernel.len(), |i, j| kernel[j][i].clone());
    let hnf = column_hnf(&mat);
    (0..hnf.cols())
        .map(|j| IntMat::from_fn(n, n, |r, c| hnf.at(r * n + c, j).clone()))
        .collect()
}

/// Deterministic scan order over coefficient boxes: shells of increasing
/// max-norm, each shell traversed from positive to negative coordinates.
fn shell_iter2(bound: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=bound).flat_map(|s| {
        let mut shell = Vec::new();
        let mut x = s;
        while x >= -s {
            let mut y = s;
            while y >= -s {
                if x.abs() == s || y.abs() == s {
                    shell.push((x, y));
                }
                y -= 1;
            }
            x -= 1;
        }
        shell
    })
}

/// Search K = x A + y B with det K = target and |x|, |y| <= bound.
///
/// det(xA + yB) is a binary quadratic form in (x, y); this is the baseline
/// bounded decision procedure, and absence means "not found within bound",
/// not a proof of nonexistence.
pub fn unimodular_in_lattice(basis: &[IntMat], target: i64, bound: u32) -> Option<IntMat> {
    assert!(target == 1 || target == -1);
    match basis.len() {
        0 => None,
        1 => {
            let a = &basis[0];
            // det(xA) = x^2 det A, so only x = +-1 can work
            if a.det() == BigInt::from(target) {
                Some(a.clone())
            } else {
                None
            }
        }
        2 => {
            let (a, b) = (&basis[0], &basis[1]);
            let qa = a.det();
            let qc = b.det();
            let qb = a.add(b).det() - &qa - &qc;
            let (qa, qb, qc) = (to_i128(&qa), to_i128(&qb), to_i128(&qc));
            let t = target as i128;
            for (x, y) in shell_iter2(bound as i64) {
                let (x, y) = (x as i128, y as i128);
                if qa * x * x + qb * x * y + qc * y * y == t {
                    return Some(
                        a.scale(&BigInt::from(x)).add(&b.scale(&BigInt::from(y))),
                    );
                }
            }
            None
        }
        n => panic!("unimodular search over {n} generators not supported here"),
    }
}

/// Three-generator variant for 3x3 conjugacy: searches det(xA + yB + zC) =
/// target over shells of increasing max-norm, with the cubic form expanded
/// once by column multilinearity.
pub fn unimodular_in_lattice3(basis: &[IntMat], target: i64, bound: u32) -> Option<IntMat> {
    assert_eq!(basis.len(), 3);
    assert!(target == 1 || target == -1);
    // coefficient of x^e0 y^e1 z^e2 indexed by the choice of source per column
    let mut coeffs = std::collections::BTreeMap::<(u32, u32, u32), i128>::new();
    for c0 in 0..3usize {
        for c1 in 0..3usize {
            for c2 in 0..3usize {
                let m = IntMat::from_fn(3, 3, |i, j| {
                    let src = [c0, c1, c2][j];
                    basis[src].at(i, j).clone()
                });
                let mut key = (0u32, 0u32, 0u32);
                for src in [c0, c1, c2] {
                    match src {
                        0 => key.0 += 1,
                        1 => key.1 += 1,
                        _ => key.2 += 1,
                    }
                }
                let d: i128 = to_i128(&m.det());
                *coeffs.entry(key).or_insert(0) += d;
            }
        }
    }
    let coeffs: Vec<((u32, u32, u32), i128)> = coeffs.into_iter().collect();
    let t = target as i128;
    let b = bound as i64;
    for s in 1..=b {
        let mut x = s;
        while x >= -s {
            let mut y = s;
            while y >= -s {
                let mut z = s;
                while z >= -s {
                    if x.abs() == s || y.abs() == s || z.abs() == s {
                        let mut val: i128 = 0;
                        for &((e0, e1, e2), c) in &coeffs {
                            val += c
                                * (x as i128).pow(e0)
                                * (y as i128).pow(e1)
                                * (z as i128).pow(e2);
                        }
                        if val == t {
                            let k = basis[0]
                                .scale(&BigInt::from(x))
                                .add(&basis[1].scale(&BigInt::from(y)))
                                .add(&basis[2].scale(&BigInt::from(z)));
                            return Some(k);
                        }
                    }
                    z -= 1;
                }
                y -= 1;
            }
            x -= 1;
        }
    }
    None
}

fn to_i128(x: &BigInt) -> i128 {
    use num::ToPrimitive;
    x.to_i128().expect("cubic form coefficient exceeds i128")
}

/// Exact decision whether the indefinite binary quadratic form
/// a x^2 + b xy + c y^2 represents +1 or -1, by walking the cycle of
/// reduced forms: a unit m is represented exactly when the form is properly
/// equivalent to the (unique) class with leading coefficient m, and proper
/// classes of indefinite forms coincide with reduction cycles.
///
/// Returns None when the discriminant is not positive and non-square (the
/// reduction theory does not apply); callers then fall back to bounded
/// search semantics.
pub fn form_represents_unit(a: &BigInt, b: &BigInt, c: &BigInt, target: i64) -> Option<bool> {
    assert!(target == 1 || target == -1);
    let four = BigInt::from(4);
    let disc = b * b - &four * a * c;
    if !disc.is_positive() || is_perfect_square(&disc) {
        return None;
    }
    let s = disc.sqrt(); // floor of the irrational sqrt(disc)
    let f0 = reduce_form((a.clone(), b.clone(), c.clone()), &disc, &s)?;
    // principal-type form with leading coefficient `target`
    let t = BigInt::from(target);
    let b0 = if (&disc % 2u8).is_zero() { BigInt::zero() } else { BigInt::one() };
    let c0 = (&b0 * &b0 - &disc) / (&four * &t);
    let g0 = reduce_form((t, b0, c0), &disc, &s)?;
    // walk the cycle of f0 looking for g0
    let mut cur = f0.clone();
    let mut steps = 0u32;
    loop {
        if cur == g0 {
            return Some(true);
        }
        cur = rho(&cur, &disc, &s);
        steps += 1;
        if cur == f0 {
            return Some(false);
        }
        if steps > 100_000 {
            return None; // defensive: period far beyond desk scale
        }
    }
}

type Form = (BigInt, BigInt, BigInt);

fn form_is_reduced(f: &Form, s: &BigInt) -> bool {
    let (a, b, _) = f;
    let two_abs_a = BigInt::from(2) * a.abs();
    // |sqrt(D) - 2|a|| < b < sqrt(D), all decided in integers
    b.is_positive() && b <= s && (b + &two_abs_a) > *s && (&two_abs_a - b) <= *s
}

/// One reduction step (a, b, c) -> (c, b', (b'^2 - D)/(4c)) with b' = -b
/// modulo 2|c| placed in the standard window.
fn rho(f: &Form, disc: &BigInt, s: &BigInt) -> Form {
    let (_, b, c) = f;
    let abs_c = c.abs();
    let two_c = BigInt::from(2) * &abs_c;
    let bp = if abs_c <= *s {
        // window (s - 2|c|, s]
        s - (s + b).mod_floor(&two_c)
    } else {
        // window (-|c|, |c|]
        &abs_c - (&abs_c + b).mod_floor(&two_c)
    };
    let cp = (&bp * &bp - disc) / (BigInt::from(4) * c);
    (c.clone(), bp, cp)
}

fn reduce_form(mut f: Form, disc: &BigInt, s: &BigInt) -> Option<Form> {
    let mut steps = 0u32;
    while !form_is_reduced(&f, s) {
        f = rho(&f, disc, s);
        steps += 1;
        if steps > 100_000 {
            return None;
        }
    }
    Some(f)
}

/// Outcome of a bounded conjugator search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugatorSearch {
    Found(IntMat),
    /// No conjugator exists, for a certain structural reason.
    NoneCertain(ConjugatorObstruction),
    /// Nothing found within the bound; inconclusive.
    Exhausted { bound: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugatorObstruction {
    CharPolyMismatch,
    EmptyCommutant,
    /// The determinant form of the solution lattice provably never takes the
    /// requested unit value (decided by form reduction, not by the bound).
    DetNotRepresented,
}

/// Search K in GL(2,Z) with K N K^-1 = N', optionally with prescribed
/// determinant sign. Composes the commutant lattice with the bounded
/// unimodular search.
pub fn gl2z_conjugator(
    n: &IntMat,
    nprime: &IntMat,
    det_sign: Option<i64>,
    bound: u32,
) -> ConjugatorSearch {
    if n.charpoly2() != nprime.charpoly2() {
        return ConjugatorSearch::NoneCertain(ConjugatorObstruction::CharPolyMismatch);
    }
    let basis = commutant_lattice(n, nprime);
    if basis.is_empty() {
        return ConjugatorSearch::NoneCertain(ConjugatorObstruction::EmptyCommutant);
    }
    let targets: &[i64] = match det_sign {
        Some(1) => &[1],
        Some(-1) => &[-1],
        Some(_) => panic!("det sign must be +-1"),
        None => &[1, -1],
    };
    for &t in targets {
        if let Some(k) = unimodular_in_lattice(&basis, t, bound) {
            debug_assert_eq!(k.mul(n), nprime.mul(&k));
            return ConjugatorSearch::Found(k);
        }
    }
    // nothing found within the bound: try to certify nonexistence through
    // the reduction theory of the determinant form
    if basis.len() == 2 {
        let qa = basis[0].det();
        let qc = basis[1].det();
        let qb = basis[0].add(&basis[1]).det() - &qa - &qc;
        let certain_none = targets
            .iter()
            .all(|&t| form_represents_unit(&qa, &qb, &qc, t) == Some(false));
        if certain_none {
            return ConjugatorSearch::NoneCertain(ConjugatorObstruction::DetNotRepresented);
        }
    }
    ConjugatorSearch::Exhausted { bound }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CentralizerError {
    #[error("characteristic polynomial is reducible; the commutant is not an order in a real quadratic field")]
    ReducibleCharPoly,
    #[error("no non-central unit of determinant 1 within bound {bound}; raise the bound")]
    BoundExhausted { bound: u32 },
}

/// A non-central determinant-1 unit of the commutant of N', of minimal
/// absolute trace within the search box. For a hyperbolic N' with irreducible
/// characteristic polynomial such a unit exists (N' itself when det N' = 1,
/// N'^2 otherwise), and minimal |trace| picks out a fundamental automorph:
/// traces of its powers grow strictly.
pub fn centralizer_generator(nprime: &IntMat, bound: u32) -> Result<IntMat, CentralizerError> {
    let (t, d) = nprime.charpoly2();
    let disc = &t * &t - BigInt::from(4) * &d;
    if disc.is_negative() || is_perfect_square(&disc) {
        return Err(CentralizerError::ReducibleCharPoly);
    }
    let basis = commutant_lattice(nprime, nprime);
    assert_eq!(basis.len(), 2, "irreducible commutant must have rank 2");
    let (a, b) = (&basis[0], &basis[1]);
    // determinant and trace as forms in the coefficients, evaluated in
    // machine integers over the search box
    let qa = to_i128(&a.det());
    let qc = to_i128(&b.det());
    let qb = to_i128(&a.add(b).det()) - qa - qc;
    let (ta, tb) = (to_i128(&a.trace()), to_i128(&b.trace()));
    // coefficients of +-I in the basis, to exclude the central units
    let gens = IntMat::from_fn(4, 2, |i, j| basis[j].at(i / 2, i % 2).clone());
    let id_vec = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    let id_coeffs = LatticeBasis::from_generators(gens)
        .membership(&id_vec)
        .expect("the commutant of N' contains the identity");
    let (iu, iv) = (to_i128(&id_coeffs[0]), to_i128(&id_coeffs[1]));
    let mut best: Option<(i128, i128, (i64, i64))> = None;
    for (x, y) in shell_iter2(bound as i64) {
        let (xi, yi) = (x as i128, y as i128);
        if qa * xi * xi + qb * xi * yi + qc * yi * yi != 1 {
            continue;
        }
        if (xi, yi) == (iu, iv) || (xi, yi) == (-iu, -iv) {
            continue;
        }
        let tr = ta * xi + tb * yi;
        let better = match &best {
            None => true,
            Some((bt, btr, _)) => tr.abs() < *bt || (tr.abs() == *bt && tr > *btr),
        };
        if better {
            best = Some((tr.abs(), tr, (x, y)));
        }
    }
    best.map(|(_, _, (x, y))| a.scale(&BigInt::from(x)).add(&b.scale(&BigInt::from(y))))
        .ok_or(CentralizerError::BoundExhausted { bound })
}

fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &r * &r == *x
}

/// Spectral flavor of the 2x2 eigen-data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    /// det N = 1, trace > 2: eigenvalues alpha > 1 and 1/alpha.
    SPlus,
    /// det N = -1, trace >= 1: eigenvalues alpha > 1 and -1/alpha.
    SMinus,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("matrix must be 2x2")]
    NotTwoByTwo,
    #[error("determinant must be {expected}, found {found}")]
    Determinant { expected: i64, found: BigInt },
    #[error("trace {found} violates the hyperbolicity condition {condition}")]
    Trace { condition: &'static str, found: BigInt },
}

/// Exact eigen-data of a hyperbolic 2x2 matrix over Q(sqrt(D)) with
/// D = trace^2 - 4 det.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub disc: BigInt,
    pub alpha: QuadExt,
    /// Second eigenvalue: 1/alpha for `SPlus`, -1/alpha for `SMinus`.
    pub beta: QuadExt,
    pub a: [QuadExt; 2],
    pub b: [QuadExt; 2],
}

/// Eigenvalues and canonically oriented eigenvectors.
///
/// The eigenvector for an eigenvalue lambda is (n12, lambda - n11) when
/// n12 != 0, otherwise (lambda - n22, n21), rescaled so that its first
/// nonzero coordinate is positive. Positive rescaling is harmless for every
/// consumer (it corresponds to the biholomorphism (w, z) -> (cw, fz)).
pub fn eigen_data(n: &IntMat, kind: EigenKind) -> Result<EigenData, SpectralError> {
    if !(n.rows() == 2 && n.cols() == 2) {
        return Err(SpectralError::NotTwoByTwo);
    }
    let (t, d) = n.charpoly2();
    match kind {
        EigenKind::SPlus => {
            if d != BigInt::one() {
                return Err(SpectralError::Determinant { expected: 1, found: d });
            }
            if t <= BigInt::from(2) {
                return Err(SpectralError::Trace { condition: "trace > 2", found: t });
            }
        }
        EigenKind::SMinus => {
            if d != -BigInt::one() {
                return Err(SpectralError::Determinant { expected: -1, found: d });
            }
            if t < BigInt::one() {
                return Err(SpectralError::Trace { condition: "trace >= 1", found: t });
            }
        }
    }
    let disc = &t * &t - BigInt::from(4) * &d;
    debug_assert!(disc.is_positive() && !is_perfect_square(&disc));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let tr = QuadExt::rational(BigRational::from_integer(t.clone()), &disc);
    let root = QuadExt::sqrt_d(&disc);
    let two_inv = QuadExt::rational(half, &disc);
    let alpha = &(&tr + &root) * &two_inv;
    let beta = &(&tr - &root) * &two_inv;
    debug_assert!(alpha > QuadExt::one(&disc));
    let a = eigenvector(n, &alpha, &disc);
    let b = eigenvector(n, &beta, &disc);
    debug_assert!(eig_check(n, &alpha, &a));
    debug_assert!(eig_check(n, &beta, &b));
    Ok(EigenData { disc, alpha, beta, a, b })
}

fn eigenvector(n: &IntMat, lambda: &QuadExt, disc: &BigInt) -> [QuadExt; 2] {
    let ent = |i, j| QuadExt::from_int(n.at(i, j), disc);
    let mut v = if !n.at(0, 1).is_zero() {
        [ent(0, 1), lambda - &ent(0, 0)]
    } else {
        [lambda - &ent(1, 1), ent(1, 0)]
    };
    // orient: first nonzero coordinate positive
    let lead = if v[0].is_zero() { &v[1] } else { &v[0] };
    if lead.signum() < 0 {
        v = [-&v[0], -&v[1]];
    }
    v
}

fn eig_check(n: &IntMat, lambda: &QuadExt, v: &[QuadExt; 2]) -> bool {
    let disc = lambda.field_disc();
    (0..2).all(|i| {
        let mut acc = QuadExt::zero(disc);
        for j in 0..2 {
            acc = &acc + &(&QuadExt::from_int(n.at(i, j), disc) * &v[j]);
        }
        acc == lambda * &v[i]
    })
}
