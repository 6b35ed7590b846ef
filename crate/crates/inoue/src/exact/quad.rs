use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

/// Element q + s*sqrt(d) of the real quadratic field Q(sqrt(d)), with
/// rational q, s and a fixed positive non-square integer d.
///
/// The embedding into the reals is the one with sqrt(d) > 0, so comparisons
/// and sign tests are decided exactly by rationalization, never through
/// floating point. `d` is carried as given (typically trace^2 - 4 det of a
/// hyperbolic matrix) and is not reduced to a square-free kernel.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadExt {
    q: BigRational,
    s: BigRational,
    d: BigInt,
}

impl QuadExt {
    pub fn new(q: BigRational, s: BigRational, d: BigInt) -> Self {
        assert!(d.is_positive(), "field discriminant must be positive");
        QuadExt { q, s, d }
    }

    pub fn rational(q: BigRational, d: &BigInt) -> Self {
        Self::new(q, BigRational::zero(), d.clone())
    }

    pub fn from_int(n: &BigInt, d: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(n.clone()), d)
    }

    pub fn from_i64(n: i64, d: &BigInt) -> Self {
        Self::from_int(&BigInt::from(n), d)
    }

    /// The generator sqrt(d) itself.
    pub fn sqrt_d(d: &BigInt) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d.clone())
    }

    pub fn zero(d: &BigInt) -> Self {
        Self::from_i64(0, d)
    }

    pub fn one(d: &BigInt) -> Self {
        Self::from_i64(1, d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.q
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.s
    }

    pub fn field_disc(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.s.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    /// Galois conjugate q - s*sqrt(d).
    pub fn conj(&self) -> Self {
        QuadExt {
            q: self.q.clone(),
            s: -self.s.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm q^2 - s^2 d (a rational).
    pub fn norm(&self) -> BigRational {
        &self.q * &self.q - &self.s * &self.s * BigRational::from_integer(self.d.clone())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        // the norm of a nonzero element is nonzero because d is non-square
        assert!(!n.is_zero(), "zero norm: d must be a non-square");
        QuadExt {
            q: &self.q / &n,
            s: -(&self.s / &n),
            d: self.d.clone(),
        }
    }

    /// Exact sign of the real embedding: -1, 0, or 1.
    pub fn signum(&self) -> i8 {
        let sq = rational_signum(&self.q);
        let ss = rational_signum(&self.s);
        match (sq, ss) {
            (0, 0) => 0,
            (x, 0) => x,
            (0, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // q and s*sqrt(d) pull in opposite directions: compare
                // q^2 against s^2 d; the larger magnitude wins.
                let diff = &self.q * &self.q
                    - &self.s * &self.s * BigRational::from_integer(self.d.clone());
                let ds = rational_signum(&diff);
                assert!(ds != 0, "q^2 = s^2 d is impossible for non-square d");
                if ds > 0 {
                    x
                } else {
                    -x
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Floating-point embedding (for the numeric verification layer only).
    pub fn embed(&self) -> f64 {
        let d = self.d.to_f64().expect("discriminant fits in f64");
        self.q.to_f64().unwrap() + self.s.to_f64().unwrap() * d.sqrt()
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic field contexts");
    }
}

fn rational_signum(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt {
            q: &self.q + &rhs.q,
            s: &self.s + &rhs.s,
            d: self.d.clone(),
        }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt {
            q: &self.q - &rhs.q,
            s: &self.s - &rhs.s,
            d: self.d.clone(),
        }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        let d = BigRational::from_integer(self.d.clone());
        QuadExt {
            q: &self.q * &rhs.q + &self.s * &rhs.s * &d,
            s: &self.q * &rhs.s + &self.s * &rhs.q,
            d: self.d.clone(),
        }
    }
}

impl Div for &QuadExt {
    type Output = QuadExt;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self * &rhs.inv()
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            q: -self.q.clone(),
            s: -self.s.clone(),
            d: self.d.clone(),
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check_field(other);
        Some(match (self - other).signum() {
            x if x > 0 => Ordering::Greater,
            0 => Ordering::Equal,
            _ => Ordering::Less,
        })
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{}", self.q);
        }
        if self.q.is_zero() {
            return write!(f, "{}*sqrt({})", self.s, self.d);
        }
        write!(f, "{} + {}*sqrt({})", self.q, self.s, self.d)
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(den))
    }

    fn el(q: (i64, i64), s: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(rat(q.0, q.1), rat(s.0, s.1), BigInt::from(d))
    }

    #[test]
    fn golden_ratio_arithmetic() {
        // alpha = (3+sqrt5)/2 satisfies alpha^2 = 3 alpha - 1
        let alpha = el((3, 2), (1, 2), 5);
        let lhs = &alpha * &alpha;
        let rhs = &(&el((3, 1), (0, 1), 5) * &alpha) - &el((1, 1), (0, 1), 5);
        assert_eq!(lhs, rhs);
        // and its inverse is the conjugate (norm 1)
        assert_eq!(alpha.inv(), alpha.conj());
        assert!(alpha.is_positive());
        assert!(alpha > QuadExt::one(&BigInt::from(5)));
    }

    #[test]
    fn exact_sign_opposing_parts() {
        // 7/5 - sqrt(2) < 0 but 3/2 - sqrt(2) > 0
        assert_eq!(el((7, 5), (-1, 1), 2).signum(), -1);
        assert_eq!(el((3, 2), (-1, 1), 2).signum(), 1);
        assert_eq!(el((0, 1), (0, 1), 2).signum(), 0);
        assert_eq!(el((-3, 1), (1, 1), 2).signum(), -1);
    }

    #[test]
    fn field_axioms_randomized() {
        let mut state = 12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 11) as i64 - 5
        };
        let d = BigInt::from(5);
        for _ in 0..200 {
            let a = QuadExt::new(rat(next(), 1 + next().abs()), rat(next(), 1 + next().abs()), d.clone());
            let b = QuadExt::new(rat(next(), 1 + next().abs()), rat(next(), 1 + next().abs()), d.clone());
            let c = QuadExt::new(rat(next(), 1 + next().abs()), rat(next(), 1 + next().abs()), d.clone());
            // associativity and distributivity
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            // inverses
            if !a.is_zero() {
                assert_eq!(&a * &a.inv(), QuadExt::one(&d));
            }
            // orderings agree with the embedding when it is clearly resolved
            let diff = (&a - &b).embed();
            if diff.abs() > 1e-9 {
                assert_eq!((&a - &b).signum() > 0, diff > 0.0);
            }
        }
    }

    #[test]
    #[should_panic(expected = "mixed quadratic field contexts")]
    fn mixed_fields_panic() {
        let _ = &el((1, 1), (1, 1), 2) + &el((1, 1), (1, 1), 3);
    }
}
