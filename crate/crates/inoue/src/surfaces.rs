//! Surface descriptors: exact validation of the defining spectral
//! conditions, derivation of the geometric constants (eigenvectors, theta,
//! e, c), and numeric evaluation of the group actions on H x C.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{eigen_data, EigenKind, IntMat, QuadExt};
use crate::gamma_r::GammaRElem;
use crate::groups::GroupDescriptor;
use crate::Kind;

/// Integer defining data of an Inoue surface.
///
/// `mat` is M (3x3) for S0 and N (2x2) for S+/S-. The twist integers p, q, r
/// are used by S+/S- only; `t` is the extra translation parameter of S+;
/// `sign` flips the orientation of the expanding eigenvector; `conj` selects
/// the conjugate contracting eigenvector of an S0 surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDescriptor {
    pub kind: Kind,
    pub mat: IntMat,
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub t: Complex64,
    pub sign: i8,
    pub conj: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub clause: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid surface: {}", .0.iter().map(|v| format!("{} ({})", v.clause, v.field)).collect::<Vec<_>>().join("; "))]
pub struct Violations(pub Vec<Violation>);

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {}", .0.join("; "))]
    Schema(Vec<String>),
    #[error(transparent)]
    Invalid(#[from] Violations),
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    kind: Option<Kind>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    m: Option<Vec<Vec<i64>>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<[f64; 2]>,
    sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conj: Option<bool>,
}

impl SurfaceDescriptor {
    pub fn s0(m: IntMat, sign: i8, conj: bool) -> Self {
        SurfaceDescriptor {
            kind: Kind::S0,
            mat: m,
            p: 0,
            q: 0,
            r: 0,
            t: Complex64::new(0.0, 0.0),
            sign,
            conj,
        }
    }

    pub fn splus(n: IntMat, p: i64, q: i64, r: i64, t: Complex64, sign: i8) -> Self {
        SurfaceDescriptor { kind: Kind::SPlus, mat: n, p, q, r, t, sign, conj: false }
    }

    pub fn sminus(n: IntMat, p: i64, q: i64, r: i64, sign: i8) -> Self {
        SurfaceDescriptor {
            kind: Kind::SMinus,
            mat: n,
            p,
            q,
            r,
            t: Complex64::new(0.0, 0.0),
            sign,
            conj: false,
        }
    }

    pub fn with_sign(&self, sign: i8) -> Self {
        SurfaceDescriptor { sign, ..self.clone() }
    }

    pub fn with_t(&self, t: Complex64) -> Self {
        SurfaceDescriptor { t, ..self.clone() }
    }

    /// Check every defining condition exactly; collect all violations.
    pub fn validate(&self) -> Result<(), Violations> {
        let mut v = Vec::new();
        let mut push = |field: &str, clause: &str| {
            v.push(Violation { field: field.to_string(), clause: clause.to_string() })
        };
        if self.sign != 1 && self.sign != -1 {
            push("sign", "sign must be 1 or -1");
        }
        match self.kind {
            Kind::S0 => {
                if !(self.mat.rows() == 3 && self.mat.cols() == 3) {
                    push("M", "M must be a 3x3 integer matrix");
                } else {
                    let (t, s, d) = self.mat.charpoly3();
                    if !d.is_one() {
                        push("M", "det M = 1");
                    } else {
                        // disc < 0: one real eigenvalue and a complex pair
                        let disc = BigInt::from(18) * &t * &s - BigInt::from(4) * &t * &t * &t
                            + &t * &t * &s * &s
                            - BigInt::from(4) * &s * &s * &s
                            - BigInt::from(27);
                        if !disc.is_negative() {
                            push(
                                "M",
                                "eigenvalues alpha > 1 and a complex conjugate pair: the cubic discriminant must be negative",
                            );
                        } else if s >= t {
                            // char(1) = s - t; the single real root exceeds 1
                            // exactly when char(1) < 0
                            push("M", "the real eigenvalue alpha must exceed 1");
                        }
                    }
                }
            }
            Kind::SPlus | Kind::SMinus => {
                if !(self.mat.rows() == 2 && self.mat.cols() == 2) {
                    push("N", "N must be a 2x2 integer matrix");
                } else {
                    let kind = if self.kind == Kind::SPlus {
                        EigenKind::SPlus
                    } else {
                        EigenKind::SMinus
                    };
                    if let Err(e) = eigen_data(&self.mat, kind) {
                        let clause = match (self.kind, e) {
                            (Kind::SPlus, crate::exact::SpectralError::Determinant { .. }) => {
                                "det N = 1"
                            }
                            (Kind::SMinus, crate::exact::SpectralError::Determinant { .. }) => {
                                "det N = -1"
                            }
                            (Kind::SPlus, _) => "eigenvalues alpha > 1, 1/alpha: trace N > 2",
                            (Kind::SMinus, _) => "eigenvalues alpha > 1, -1/alpha: trace N >= 1",
                            _ => unreachable!(),
                        };
                        push("N", clause);
                    }
                }
                if self.r == 0 {
                    push("r", "r != 0");
                }
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Violations(v))
        }
    }

    /// The fundamental group of the surface.
    pub fn group(&self) -> GroupDescriptor {
        GroupDescriptor::new(self.kind, self.mat.clone(), self.p, self.q, self.r)
            .expect("validated surface data")
    }

    /// Canonical representative of the deformation-irrelevant presentation
    /// freedom: t is dropped (it does not change the deformation class) and
    /// the eigenvector orientation is returned as the extracted sign.
    pub fn canonicalize(&self) -> (SurfaceDescriptor, i8) {
        (self.with_t(Complex64::new(0.0, 0.0)), self.sign)
    }

    /// Total order used for deterministic enumeration and reports.
    pub fn lex_key(&self) -> Vec<i64> {
        let mut key = vec![
            match self.kind {
                Kind::S0 => 0,
                Kind::SPlus => 1,
                Kind::SMinus => 2,
            },
            self.mat.rows() as i64,
        ];
        for i in 0..self.mat.rows() {
            for j in 0..self.mat.cols() {
                key.push(self.mat.at_i64(i, j));
            }
        }
        key.extend([self.p, self.q, self.r, self.sign as i64, self.conj as i64]);
        key
    }

    fn from_raw(raw: RawSurface) -> Result<Self, ParseError> {
        let mut errs = Vec::new();
        let kind = match raw.kind {
            Some(k) => k,
            None => {
                return Err(ParseError::Schema(vec!["missing field `kind`".into()]));
            }
        };
        let sign = match raw.sign {
            Some(s) => s,
            None => {
                errs.push("missing field `sign`".to_string());
                1
            }
        };
        let require = |field: &str, present: bool, errs: &mut Vec<String>| {
            if !present {
                errs.push(format!("kind {kind} requires field `{field}`"));
            }
        };
        let forbid = |field: &str, absent: bool, errs: &mut Vec<String>| {
            if !absent {
                errs.push(format!("kind {kind} does not take field `{field}`"));
            }
        };
        let mat = match kind {
            Kind::S0 => {
                require("M", raw.m.is_some(), &mut errs);
                forbid("N", raw.n.is_none(), &mut errs);
                forbid("p", raw.p.is_none(), &mut errs);
                forbid("q", raw.q.is_none(), &mut errs);
                forbid("r", raw.r.is_none(), &mut errs);
                forbid("t", raw.t.is_none(), &mut errs);
                raw.m.as_ref().map(|m| matrix_from_rows(m, 3, &mut errs))
            }
            Kind::SPlus | Kind::SMinus => {
                require("N", raw.n.is_some(), &mut errs);
                require("p", raw.p.is_some(), &mut errs);
                require("q", raw.q.is_some(), &mut errs);
                require("r", raw.r.is_some(), &mut errs);
                forbid("M", raw.m.is_none(), &mut errs);
                forbid("conj", raw.conj.is_none(), &mut errs);
                if kind == Kind::SMinus {
                    forbid("t", raw.t.is_none(), &mut errs);
                }
                raw.n.as_ref().map(|n| matrix_from_rows(n, 2, &mut errs))
            }
        };
        if !errs.is_empty() {
            return Err(ParseError::Schema(errs));
        }
        let mat = mat.flatten().ok_or_else(|| {
            ParseError::Schema(vec!["matrix has the wrong shape".to_string()])
        })?;
        let t = raw
            .t
            .map(|[re, im]| Complex64::new(re, im))
            .unwrap_or_else(|| Complex64::new(0.0, 0.0));
        let desc = SurfaceDescriptor {
            kind,
            mat,
            p: raw.p.unwrap_or(0),
            q: raw.q.unwrap_or(0),
            r: raw.r.unwrap_or(0),
            t,
            sign,
            conj: raw.conj.unwrap_or(false),
        };
        desc.validate()?;
        Ok(desc)
    }

    fn to_raw(&self) -> RawSurface {
        let rows: Vec<Vec<i64>> = (0..self.mat.rows())
            .map(|i| (0..self.mat.cols()).map(|j| self.mat.at_i64(i, j)).collect())
            .collect();
        match self.kind {
            Kind::S0 => RawSurface {
                kind: Some(self.kind),
                m: Some(rows),
                sign: Some(self.sign),
                conj: Some(self.conj),
                ..Default::default()
            },
            Kind::SPlus | Kind::SMinus => RawSurface {
                kind: Some(self.kind),
                n: Some(rows),
                p: Some(self.p),
                q: Some(self.q),
                r: Some(self.r),
                t: (self.kind == Kind::SPlus && self.t != Complex64::new(0.0, 0.0))
                    .then_some([self.t.re, self.t.im]),
                sign: Some(self.sign),
                ..Default::default()
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("surface serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ParseError> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        let raw: RawSurface = serde_json::from_value(value)
            .map_err(|e| ParseError::Schema(vec![e.to_string()]))?;
        Self::from_raw(raw)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|err| ParseError::Io {
            path: path.display().to_string(),
            err,
        })?;
        Self::from_json_str(&text)
    }
}

fn matrix_from_rows(rows: &[Vec<i64>], n: usize, errs: &mut Vec<String>) -> Option<IntMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        errs.push(format!("matrix must be {n}x{n}"));
        return None;
    }
    let slices: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Some(IntMat::from_i64(&slices))
}

/// Which cross term to use in the constants e_i. `AsPrinted` is the
/// asymmetric product b1 a2 that the relation identities require;
/// `Symmetric` averages the two products and exists for sensitivity testing
/// (it breaks the numeric relation check).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossTerm {
    #[default]
    AsPrinted,
    Symmetric,
}

/// Exact geometric constants of an S+/S- surface over Q(sqrt(D)).
#[derive(Debug, Clone)]
pub struct Geometry {
    pub disc: BigInt,
    pub alpha: QuadExt,
    pub beta: QuadExt,
    pub a: [QuadExt; 2],
    pub b: [QuadExt; 2],
    pub theta: QuadExt,
    pub e: [QuadExt; 2],
    pub c: [QuadExt; 2],
    /// Shifted constants c_i - a_i b_i / 2 appearing in the group action.
    pub c_shift: [QuadExt; 2],
    kind: Kind,
    r: i64,
    t: Complex64,
}

impl Geometry {
    pub fn derive(desc: &SurfaceDescriptor) -> Result<Geometry, Violations> {
        Self::derive_with(desc, CrossTerm::AsPrinted)
    }

    pub fn derive_with(desc: &SurfaceDescriptor, cross: CrossTerm) -> Result<Geometry, Violations> {
        desc.validate()?;
        assert!(desc.kind != Kind::S0, "exact geometry exists for S+/S- only");
        let ekind = if desc.kind == Kind::SPlus { EigenKind::SPlus } else { EigenKind::SMinus };
        let eig = eigen_data(&desc.mat, ekind).expect("validated");
        let d = &eig.disc;
        let mut a = eig.a;
        if desc.sign < 0 {
            a = [-&a[0], -&a[1]];
        }
        let b = eig.b;
        let theta = &(&a[0] * &b[1]) - &(&a[1] * &b[0]);
        assert!(!theta.is_zero(), "eigenvectors of distinct eigenvalues are independent");

        let n = &desc.mat;
        let half = QuadExt::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::zero(),
            d.clone(),
        );
        let e_vec: [QuadExt; 2] = [0, 1].map(|i| {
            let n1 = QuadExt::from_int(n.at(i, 0), d);
            let n2 = QuadExt::from_int(n.at(i, 1), d);
            let one = QuadExt::one(d);
            let term1 = &(&half * &(&n1 * &(&n1 - &one))) * &(&a[0] * &b[0]);
            let term2 = &(&half * &(&n2 * &(&n2 - &one))) * &(&a[1] * &b[1]);
            let cross_val = match cross {
                CrossTerm::AsPrinted => &b[0] * &a[1],
                CrossTerm::Symmetric => {
                    &half * &(&(&a[0] * &b[1]) + &(&a[1] * &b[0]))
                }
            };
            let term3 = &(&n1 * &n2) * &cross_val;
            &(&term1 + &term2) + &term3
        });

        // c solves (N -+ I) c = (theta / r) (p, q)^T - e, with N - I for S+
        // and N + I for S-; the shift matrix is invertible because -+1 is
        // never an eigenvalue of a validated N.
        let eye = IntMat::identity(2);
        let shift = if desc.kind == Kind::SPlus { n.sub(&eye) } else { n.add(&eye) };
        let det = shift.det();
        assert!(!det.is_zero());
        let theta_over_r = &theta
            * &QuadExt::rational(
                BigRational::new(BigInt::one(), BigInt::from(desc.r)),
                d,
            );
        let rhs = [
            &(&theta_over_r * &QuadExt::from_i64(desc.p, d)) - &e_vec[0],
            &(&theta_over_r * &QuadExt::from_i64(desc.q, d)) - &e_vec[1],
        ];
        // adjugate solve
        let det_inv = QuadExt::rational(
            BigRational::new(BigInt::one(), det.clone()),
            d,
        );
        let adj = [
            [
                QuadExt::from_int(shift.at(1, 1), d),
                -&QuadExt::from_int(shift.at(0, 1), d),
            ],
            [
                -&QuadExt::from_int(shift.at(1, 0), d),
                QuadExt::from_int(shift.at(0, 0), d),
            ],
        ];
        let c = [
            &(&(&adj[0][0] * &rhs[0]) + &(&adj[0][1] * &rhs[1])) * &det_inv,
            &(&(&adj[1][0] * &rhs[0]) + &(&adj[1][1] * &rhs[1])) * &det_inv,
        ];
        let c_shift = [
            &c[0] - &(&half * &(&a[0] * &b[0])),
            &c[1] - &(&half * &(&a[1] * &b[1])),
        ];
        let geom = Geometry {
            disc: d.clone(),
            alpha: eig.alpha,
            beta: eig.beta,
            a,
            b,
            theta,
            e: e_vec,
            c,
            c_shift,
            kind: desc.kind,
            r: desc.r,
            t: desc.t,
        };
        if cross == CrossTerm::AsPrinted {
            debug_assert!(
                geom.shifted_identity_gap(desc).iter().all(|g| g.is_zero()),
                "shifted identity must hold by construction"
            );
        }
        Ok(geom)
    }

    /// The exact identity (N -+ I) c-tilde = (theta / r) p-tilde relating the
    /// shifted constants to the shifted twist vector.
    pub fn shifted_identity_gap(&self, desc: &SurfaceDescriptor) -> [QuadExt; 2] {
        let d = &self.disc;
        let n = &desc.mat;
        let eye = IntMat::identity(2);
        let shift = if desc.kind == Kind::SPlus { n.sub(&eye) } else { n.add(&eye) };
        let theta_over_r = &self.theta
            * &QuadExt::rational(BigRational::new(BigInt::one(), BigInt::from(desc.r)), d);
        let half_r = QuadExt::rational(
            BigRational::new(BigInt::from(desc.r), BigInt::from(2)),
            d,
        );
        let p_shift = [
            &QuadExt::from_i64(desc.p, d)
                + &(&half_r * &QuadExt::from_int(&(n.at(0, 0) * n.at(0, 1)), d)),
            &QuadExt::from_i64(desc.q, d)
                + &(&half_r * &QuadExt::from_int(&(n.at(1, 0) * n.at(1, 1)), d)),
        ];
        [0, 1].map(|i| {
            let mut lhs = QuadExt::zero(d);
            for j in 0..2 {
                lhs = &lhs + &(&QuadExt::from_int(shift.at(i, j), d) * &self.c_shift[j]);
            }
            &lhs - &(&theta_over_r * &p_shift[i])
        })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Floating-point evaluator for the surface's group action.
    pub fn evaluator(&self) -> Evaluator {
        Evaluator {
            model: Model::Quad {
                kind: self.kind,
                alpha: self.alpha.embed(),
                a: [self.a[0].embed(), self.a[1].embed()],
                b: [self.b[0].embed(), self.b[1].embed()],
                theta: self.theta.embed(),
                c_shift: [self.c_shift[0].embed(), self.c_shift[1].embed()],
                r: self.r as f64,
                t: self.t,
            },
        }
    }
}

/// Numeric model of the generator action on H x C.
#[derive(Debug, Clone)]
pub struct Evaluator {
    model: Model,
}

#[derive(Debug, Clone)]
enum Model {
    Quad {
        kind: Kind,
        alpha: f64,
        a: [f64; 2],
        b: [f64; 2],
        theta: f64,
        c_shift: [f64; 2],
        r: f64,
        t: Complex64,
    },
    Cubic {
        alpha: f64,
        beta: Complex64,
        a: [f64; 3],
        b: [Complex64; 3],
    },
}

impl Evaluator {
    /// Build the evaluator for any valid descriptor.
    pub fn new(desc: &SurfaceDescriptor) -> Result<Evaluator, Violations> {
        match desc.kind {
            Kind::S0 => {
                desc.validate()?;
                Ok(Evaluator { model: s0_numeric(desc) })
            }
            _ => Ok(Geometry::derive(desc)?.evaluator()),
        }
    }

    /// Override the translation parameter t (S+ only): used when verifying
    /// maps against the adjusted target surface.
    pub fn with_t(mut self, new_t: Complex64) -> Evaluator {
        if let Model::Quad { t, .. } = &mut self.model {
            *t = new_t;
        }
        self
    }

    /// Test-support hook: offset the shifted constants to watch the relation
    /// checks fail.
    #[doc(hidden)]
    pub fn with_c_shift_offset(mut self, dc: [f64; 2]) -> Evaluator {
        if let Model::Quad { c_shift, .. } = &mut self.model {
            c_shift[0] += dc[0];
            c_shift[1] += dc[1];
        }
        self
    }

    /// Action of an element (zeta, y) of Gamma_r:
    /// (w, z) -> (w + zeta a, z + (zeta b) w + zeta c-tilde - (theta/r) y
    ///            + (zeta a)(zeta b) / 2).
    pub fn gamma_action(
        &self,
        g: &GammaRElem,
        w: Complex64,
        z: Complex64,
    ) -> (Complex64, Complex64) {
        match &self.model {
            Model::Quad { a, b, theta, c_shift, r, .. } => {
                let z1 = big_to_f64(&g.zeta()[0]);
                let z2 = big_to_f64(&g.zeta()[1]);
                let y = big_to_f64(g.y2()) / 2.0;
                let za = z1 * a[0] + z2 * a[1];
                let zb = z1 * b[0] + z2 * b[1];
                let zc = z1 * c_shift[0] + z2 * c_shift[1];
                (
                    w + za,
                    z + zb * w + zc - (theta / r) * y + 0.5 * za * zb,
                )
            }
            Model::Cubic { .. } => panic!("Gamma_r acts on S+/S- models only"),
        }
    }

    /// Apply g_idx^e.
    pub fn generator(
        &self,
        idx: usize,
        e: i64,
        w: Complex64,
        z: Complex64,
    ) -> (Complex64, Complex64) {
        assert!(idx <= 3);
        match &self.model {
            Model::Quad { kind, alpha, t, .. } => {
                if idx == 0 {
                    let scale = alpha.powi(e as i32);
                    return match kind {
                        Kind::SPlus => (scale * w, z + (e as f64) * t),
                        Kind::SMinus => (scale * w, if e % 2 == 0 { z } else { -z }),
                        Kind::S0 => unreachable!(),
                    };
                }
                let g = match idx {
                    1 => GammaRElem::mu(self.r_i64(), e, 0, 0),
                    2 => GammaRElem::mu(self.r_i64(), 0, e, 0),
                    _ => GammaRElem::mu(self.r_i64(), 0, 0, e),
                }
                .expect("r nonzero");
                self.gamma_action(&g, w, z)
            }
            Model::Cubic { alpha, beta, a, b } => {
                if idx == 0 {
                    return (alpha.powi(e as i32) * w, beta.powi(e as i32) * z);
                }
                (w + (e as f64) * a[idx - 1], z + (e as f64) * b[idx - 1])
            }
        }
    }

    fn r_i64(&self) -> i64 {
        match &self.model {
            Model::Quad { r, .. } => *r as i64,
            Model::Cubic { .. } => 0,
        }
    }

    /// Apply a word of (generator, exponent) pairs as a composition of maps,
    /// rightmost factor first.
    pub fn word(&self, word: &[(usize, i64)], w: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let (mut w, mut z) = (w, z);
        for &(idx, e) in word.iter().rev() {
            let out = self.generator(idx, e, w, z);
            w = out.0;
            z = out.1;
        }
        (w, z)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().expect("coordinate fits in f64")
}

fn s0_numeric(desc: &SurfaceDescriptor) -> Model {
    let (t, s, _) = desc.mat.charpoly3();
    let tf = big_to_f64(&t);
    let sf = big_to_f64(&s);
    let p = |x: f64| x * x * x - tf * x * x + sf * x - 1.0;
    // single real root, to the right of 1; Cauchy-style upper bound
    let mut lo = 1.0f64;
    let mut hi = 2.0 + tf.abs() + sf.abs();
    debug_assert!(p(lo) < 0.0 && p(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    // remaining quadratic factor x^2 + Bx + C with C = 1/alpha
    let bq = alpha - tf;
    let cq = 1.0 / alpha;
    let im = (4.0 * cq - bq * bq).max(0.0).sqrt() / 2.0;
    let mut beta = Complex64::new(-bq / 2.0, im);
    let mut a = real_kernel_vector(&desc.mat, alpha);
    if desc.sign < 0 {
        for x in &mut a {
            *x = -*x;
        }
    }
    let mut b = complex_kernel_vector(&desc.mat, beta);
    if desc.conj {
        beta = beta.conj();
        for x in &mut b {
            *x = x.conj();
        }
    }
    Model::Cubic { alpha, beta, a, b }
}

/// Kernel direction of (M - lambda I) via the cross product of its two most
/// independent rows; orientation: the largest coordinate is made positive.
fn real_kernel_vector(m: &IntMat, lambda: f64) -> [f64; 3] {
    let row = |i: usize| -> [f64; 3] {
        [
            m.at_i64(i, 0) as f64 - if i == 0 { lambda } else { 0.0 },
            m.at_i64(i, 1) as f64 - if i == 1 { lambda } else { 0.0 },
            m.at_i64(i, 2) as f64 - if i == 2 { lambda } else { 0.0 },
        ]
    };
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let candidates = [
        cross(row(0), row(1)),
        cross(row(0), row(2)),
        cross(row(1), row(2)),
    ];
    let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if norm(c) > norm(&best) {
            best = *c;
        }
    }
    let lead = (0..3).max_by(|&i, &j| best[i].abs().partial_cmp(&best[j].abs()).unwrap()).unwrap();
    if best[lead] < 0.0 {
        for x in &mut best {
            *x = -*x;
        }
    }
    best
}

fn complex_kernel_vector(m: &IntMat, lambda: Complex64) -> [Complex64; 3] {
    let row = |i: usize| -> [Complex64; 3] {
        [
            Complex64::new(m.at_i64(i, 0) as f64, 0.0) - if i == 0 { lambda } else { Complex64::new(0.0, 0.0) },
            Complex64::new(m.at_i64(i, 1) as f64, 0.0) - if i == 1 { lambda } else { Complex64::new(0.0, 0.0) },
            Complex64::new(m.at_i64(i, 2) as f64, 0.0) - if i == 2 { lambda } else { Complex64::new(0.0, 0.0) },
        ]
    };
    let cross = |u: [Complex64; 3], v: [Complex64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let candidates = [
        cross(row(0), row(1)),
        cross(row(0), row(2)),
        cross(row(1), row(2)),
    ];
    let norm = |v: &[Complex64; 3]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if norm(c) > norm(&best) {
            best = *c;
        }
    }
    // deterministic scale: largest coordinate made real positive
    let lead = (0..3)
        .max_by(|&i, &j| best[i].norm().partial_cmp(&best[j].norm()).unwrap())
        .unwrap();
    let scale = best[lead] / best[lead].norm();
    for x in &mut best {
        *x /= scale;
    }
    best
}

/// All 2x2 integer matrices with entries in [-bound, bound] satisfying the
/// spectral condition of the kind, in lexicographic entry order.
pub fn hyperbolic_matrices(kind: Kind, bound: i64) -> Vec<IntMat> {
    assert!(kind != Kind::S0);
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let det = a * d - b * c;
                    let tr = a + d;
                    let ok = match kind {
                        Kind::SPlus => det == 1 && tr > 2,
                        Kind::SMinus => det == -1 && tr >= 1,
                        Kind::S0 => unreachable!(),
                    };
                    if ok {
                        out.push(IntMat::from_i64(&[&[a, b], &[c, d]]));
                    }
                }
            }
        }
    }
    out
}

/// All 3x3 integer matrices with entries in [-bound, bound] defining an S0
/// surface (determinant 1, one real eigenvalue > 1, complex pair), in
/// lexicographic entry order. The filter runs in machine integers.
pub fn s0_matrices(bound: i64) -> Vec<IntMat> {
    let mut out = Vec::new();
    let rng = || -bound..=bound;
    let mut e = [0i64; 9];
    fn rec(idx: usize, e: &mut [i64; 9], bound: i64, out: &mut Vec<IntMat>) {
        if idx == 9 {
            let det = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]);
            if det != 1 {
                return;
            }
            let t = e[0] + e[4] + e[8];
            let s = e[0] * e[4] - e[1] * e[3] + e[0] * e[8] - e[2] * e[6] + e[4] * e[8]
                - e[5] * e[7];
            // one real root and a complex pair: negative cubic discriminant;
            // real root beyond 1: char(1) = s - t < 0
            let disc = 18 * t * s - 4 * t * t * t + t * t * s * s - 4 * s * s * s - 27;
            if disc < 0 && s < t {
                out.push(IntMat::from_i64(&[&e[0..3], &e[3..6], &e[6..9]]));
            }
            return;
        }
        let mut v = -bound;
        while v <= bound {
            e[idx] = v;
            rec(idx + 1, e, bound, out);
            v += 1;
        }
    }
    let _ = rng;
    rec(0, &mut e, bound, &mut out);
    out
}

/// Deterministic 25-point grid on H x C used by all numeric checks.
pub fn sample_grid() -> Vec<(Complex64, Complex64)> {
    let ws = [
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(-1.0, 2.0),
        Complex64::new(0.3, 0.7),
    ];
    let zs = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(2.0, 0.5),
    ];
    ws.iter()
        .flat_map(|&w| zs.iter().map(move |&z| (w, z)))
        .collect()
}

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct NumericRelation {
    pub name: String,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compose both sides of every defining relation as maps on H x C and
/// compare them on the sample grid.
pub fn numeric_relation_check(
    desc: &SurfaceDescriptor,
    tol: f64,
) -> Result<Vec<NumericRelation>, Violations> {
    let ev = Evaluator::new(desc)?;
    Ok(numeric_relation_check_with(desc, &ev, tol))
}

/// Variant taking a prepared (possibly perturbed) evaluator.
pub fn numeric_relation_check_with(
    desc: &SurfaceDescriptor,
    ev: &Evaluator,
    tol: f64,
) -> Vec<NumericRelation> {
    let group = desc.group();
    group
        .relation_words()
        .into_iter()
        .map(|rel| {
            let mut max_dev = 0.0f64;
            for (w, z) in sample_grid() {
                let (lw, lz) = ev.word(&rel.lhs, w, z);
                let (rw, rz) = ev.word(&rel.rhs, w, z);
                let dev = (lw - rw).norm() + (lz - rz).norm();
                max_dev = max_dev.max(dev);
            }
            NumericRelation { name: rel.name, max_deviation: max_dev, pass: max_dev < tol }
        })
        .collect()
}
