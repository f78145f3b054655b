use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring selector. Carried at runtime by every scalar and matrix;
/// a workspace fixes one ring for everything in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// Arbitrary-precision integers.
    Integer,
    /// Arbitrary-precision rationals, always stored reduced with positive
    /// denominator.
    Rational,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Integer => "ZZ",
            Ring::Rational => "QQ",
        }
    }

    /// Whether every nonzero element is a unit.
    pub fn is_field(self) -> bool {
        matches!(self, Ring::Rational)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact scalar. Integer scalars never carry a denominator; rational
/// scalars are reduced with positive denominator (maintained by
/// `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integer,
            Scalar::Rat(_) => Ring::Rational,
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_int(ring, 0)
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: Ring, n: i64) -> Self {
        match ring {
            Ring::Integer => Scalar::Int(BigInt::from(n)),
            Ring::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(ring: Ring, n: BigInt) -> Self {
        match ring {
            Ring::Integer => Scalar::Int(n),
            Ring::Rational => Scalar::Rat(BigRational::from_integer(n)),
        }
    }

    /// Rational p/q. Panics if q == 0.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(q) => q.is_one(),
        }
    }

    /// Units: +-1 over the integers, anything nonzero over the rationals.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one() || (-n).is_one(),
            Scalar::Rat(q) => !q.is_zero(),
        }
    }

    /// Multiplicative inverse, when the element is a unit.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(n) if n.is_one() || (-n).is_one() => Some(Scalar::Int(n.clone())),
            Scalar::Int(_) => None,
            Scalar::Rat(q) if !q.is_zero() => Some(Scalar::Rat(q.recip())),
            Scalar::Rat(_) => None,
        }
    }

    /// Writes self = unit * canonical and returns (unit, canonical).
    /// The canonical associate is the non-negative representative over the
    /// integers and 1 (or 0) over the rationals.
    pub fn canonical_associate(&self) -> (Scalar, Scalar) {
        match self {
            Scalar::Int(n) => {
                if n.is_negative() {
                    (Scalar::Int(BigInt::from(-1)), Scalar::Int(-n))
                } else {
                    (Scalar::Int(BigInt::one()), Scalar::Int(n.clone()))
                }
            }
            Scalar::Rat(q) => {
                if q.is_zero() {
                    (Scalar::one(Ring::Rational), Scalar::zero(Ring::Rational))
                } else {
                    (Scalar::Rat(q.clone()), Scalar::one(Ring::Rational))
                }
            }
        }
    }

    /// Exact division; None when rhs does not divide self in the ring.
    pub fn div_exact(&self, rhs: &Scalar) -> Option<Scalar> {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    return None;
                }
                let (q, r) = a.div_rem(b);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => {
                if b.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a / b))
                }
            }
            _ => panic!("mixed rings in div_exact"),
        }
    }

    /// Euclidean division by a nonzero pivot: self = q*p + r with the
    /// remainder canonical (0 <= r < |p| over the integers, r = 0 over the
    /// rationals).
    pub fn div_mod_pivot(&self, p: &Scalar) -> (Scalar, Scalar) {
        match (self, p) {
            (Scalar::Int(a), Scalar::Int(m)) => {
                assert!(!m.is_zero(), "zero pivot");
                let q = a.div_floor(m);
                let r = a.mod_floor(m);
                if r.is_negative() {
                    // div_floor against a negative modulus leaves r in (m, 0];
                    // shift to the canonical window.
                    (Scalar::Int(q + BigInt::one()), Scalar::Int(r - m))
                } else {
                    (Scalar::Int(q), Scalar::Int(r))
                }
            }
            (Scalar::Rat(a), Scalar::Rat(m)) => {
                assert!(!m.is_zero(), "zero pivot");
                (Scalar::Rat(a / m), Scalar::zero(Ring::Rational))
            }
            _ => panic!("mixed rings in div_mod_pivot"),
        }
    }

    /// Orders nonzero elements by the magnitude of their canonical associate;
    /// over the rationals all nonzero elements tie. Zero sorts last.
    pub fn pivot_cmp(&self, other: &Scalar) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => match (self, other) {
                (Scalar::Int(a), Scalar::Int(b)) => a.abs().cmp(&b.abs()),
                (Scalar::Rat(_), Scalar::Rat(_)) => Ordering::Equal,
                _ => panic!("mixed rings in pivot_cmp"),
            },
        }
    }

    fn check_ring(&self, other: &Scalar, op: &str) {
        assert_eq!(self.ring(), other.ring(), "mixed rings in {op}");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check_ring(other, "add");
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.check_ring(other, "sub");
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a - b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_ring(other, "mul");
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }

    /// Parses the serialized form: an optional sign, digits, and for
    /// rationals an optional /denominator. The ring decides how bare
    /// integers are read.
    pub fn parse(ring: Ring, text: &str) -> Result<Scalar> {
        let s = text.trim().replace('\u{2212}', "-");
        let bad = |m: &str| Error::Parse(format!("scalar {text:?}: {m}"));
        match ring {
            Ring::Integer => {
                if s.contains('/') {
                    return Err(bad("integer workspace cannot hold a fraction"));
                }
                let n: BigInt = s.parse().map_err(|_| bad("not an integer"))?;
                Ok(Scalar::Int(n))
            }
            Ring::Rational => {
                let (p, q) = match s.split_once('/') {
                    Some((p, q)) => (p, q),
                    None => (s.as_str(), "1"),
                };
                let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
                let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
                if q.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Scalar::Rat(BigRational::new(p, q)))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g and g the canonical
/// (non-negative) gcd. Over the rationals the gcd of anything nonzero is 1.
/// gcd_ext(0, 0) = (0, 0, 0) in both rings.
pub fn gcd_ext(a: &Scalar, b: &Scalar) -> Result<(Scalar, Scalar, Scalar)> {
    if a.ring() != b.ring() {
        return Err(Error::MixedRings(format!(
            "gcd_ext over {} and {}",
            a.ring(),
            b.ring()
        )));
    }
    match (a, b) {
        (Scalar::Int(a), Scalar::Int(b)) => {
            if a.is_zero() && b.is_zero() {
                let z = || Scalar::Int(BigInt::zero());
                return Ok((z(), z(), z()));
            }
            let (g, x, y) = gcd_ext_int(a, b);
            Ok((Scalar::Int(g), Scalar::Int(x), Scalar::Int(y)))
        }
        (Scalar::Rat(p), Scalar::Rat(q)) => {
            let zero = || Scalar::zero(Ring::Rational);
            if !p.is_zero() {
                Ok((Scalar::one(Ring::Rational), Scalar::Rat(p.recip()), zero()))
            } else if !q.is_zero() {
                Ok((Scalar::one(Ring::Rational), zero(), Scalar::Rat(q.recip())))
            } else {
                Ok((zero(), zero(), zero()))
            }
        }
        _ => unreachable!(),
    }
}

fn gcd_ext_int(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}
