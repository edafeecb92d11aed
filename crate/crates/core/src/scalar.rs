//! Exact field arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every scalar is kept in a unique canonical form (rationals in lowest
//! terms with positive denominator, prime-field residues in `[0, p)`), so
//! structural equality coincides with field equality. Rational arithmetic
//! runs on machine integers while the values fit and transparently promotes
//! to big integers when they do not.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Which exact field the computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    /// The rational numbers with arbitrary-precision arithmetic.
    Rationals,
    /// The prime field with the given characteristic.
    PrimeField(u32),
}

impl FieldSpec {
    /// Characteristic of the field: 0 for the rationals, `p` otherwise.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Checks the invariants: a prime characteristic must be a prime
    /// `2 <= p <= 2^31`.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if *p < 2 {
                    return Err(alloc::format!("characteristic {p} is below 2"));
                }
                if *p > (1 << 31) {
                    return Err(alloc::format!("characteristic {p} exceeds 2^31"));
                }
                if !is_prime(*p as u64) {
                    return Err(alloc::format!("characteristic {p} is not prime"));
                }
                Ok(())
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rat::from_i64(0)),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    /// Embeds an integer into the field.
    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rat::from_i64(n)),
            FieldSpec::PrimeField(p) => {
                let p64 = *p as i64;
                let mut r = n % p64;
                if r < 0 {
                    r += p64;
                }
                Scalar::Mod { value: r as u64, modulus: *p }
            }
        }
    }

    /// Builds `num/den` in the field. Over a prime field this is
    /// `num * den^-1`; `den` must not reduce to zero there.
    pub fn fraction(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rat::new_i64(num, den)),
            FieldSpec::PrimeField(_) => {
                let d = self.from_integer(den);
                self.from_integer(num).div(&d)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A canonical rational number.
///
/// Small values live on machine integers (`num/den` with `den > 0` and
/// `gcd = 1`); values outside the `i64` range are boxed big integers in the
/// same normal form. The representation is unique, so derived equality is
/// exact value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Rat(RatRepr);

#[derive(Clone, PartialEq, Eq)]
enum RatRepr {
    Small { num: i64, den: i64 },
    Big(Box<(BigInt, BigInt)>),
}

impl Rat {
    pub fn from_i64(n: i64) -> Self {
        Rat(RatRepr::Small { num: n, den: 1 })
    }

    pub fn new_i64(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            return Rat::from_i64(0);
        }
        let g = gcd_i128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        num /= g;
        den /= g;
        if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
            Rat(RatRepr::Small { num: n, den: d })
        } else {
            Rat(RatRepr::Big(Box::new((BigInt::from(num), BigInt::from(den)))))
        }
    }

    pub fn from_bigint(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut num, mut den) = (num, den);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Rat::from_i64(0);
        }
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
        match (num.to_i64(), den.to_i64()) {
            (Some(n), Some(d)) => Rat(RatRepr::Small { num: n, den: d }),
            _ => Rat(RatRepr::Big(Box::new((num, den)))),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, RatRepr::Small { num: 0, .. })
    }

    pub fn numerator(&self) -> BigInt {
        match &self.0 {
            RatRepr::Small { num, .. } => BigInt::from(*num),
            RatRepr::Big(b) => b.0.clone(),
        }
    }

    pub fn denominator(&self) -> BigInt {
        match &self.0 {
            RatRepr::Small { den, .. } => BigInt::from(*den),
            RatRepr::Big(b) => b.1.clone(),
        }
    }

    fn add(&self, other: &Rat) -> Rat {
        match (&self.0, &other.0) {
            (RatRepr::Small { num: a, den: b }, RatRepr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rat::from_i128(a * d + c * b, b * d)
            }
            _ => {
                let num = self.numerator() * other.denominator()
                    + other.numerator() * self.denominator();
                let den = self.denominator() * other.denominator();
                Rat::from_bigint(num, den)
            }
        }
    }

    fn mul(&self, other: &Rat) -> Rat {
        match (&self.0, &other.0) {
            (RatRepr::Small { num: a, den: b }, RatRepr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rat::from_i128(a * c, b * d)
            }
            _ => Rat::from_bigint(
                self.numerator() * other.numerator(),
                self.denominator() * other.denominator(),
            ),
        }
    }

    fn neg(&self) -> Rat {
        match &self.0 {
            RatRepr::Small { num, den } => {
                if let Some(n) = num.checked_neg() {
                    Rat(RatRepr::Small { num: n, den: *den })
                } else {
                    Rat::from_bigint(-BigInt::from(*num), BigInt::from(*den))
                }
            }
            RatRepr::Big(b) => Rat::from_bigint(-b.0.clone(), b.1.clone()),
        }
    }

    fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        match &self.0 {
            RatRepr::Small { num, den } => Some(Rat::from_i128(*den as i128, *num as i128)),
            RatRepr::Big(b) => Some(Rat::from_bigint(b.1.clone(), b.0.clone())),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            RatRepr::Small { num, den: 1 } => write!(f, "{num}"),
            RatRepr::Small { num, den } => write!(f, "{num}/{den}"),
            RatRepr::Big(b) => {
                if b.1 == BigInt::from(1) {
                    write!(f, "{}", b.0)
                } else {
                    write!(f, "{}/{}", b.0, b.1)
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn gcd_i128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An element of one of the supported fields, in canonical form.
///
/// Arithmetic between scalars of different fields is a programming error and
/// panics; all public module constructors check field homogeneity up front.
#[derive(Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rat),
    Mod { value: u64, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => !r.is_zero() && r.numerator() == r.denominator(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) {
        assert!(
            self.field() == other.field(),
            "mixed-field scalar arithmetic: {} vs {}",
            self.field(),
            other.field()
        );
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => r.recip().map(Scalar::Rational),
            Scalar::Mod { value, modulus } => {
                if *value == 0 {
                    None
                } else {
                    Some(Scalar::Mod {
                        value: mod_inverse(*value, *modulus as u64),
                        modulus: *modulus,
                    })
                }
            }
        }
    }

    /// Exact division. Panics on division by zero; see [`Scalar::checked_div`].
    pub fn div(&self, other: &Scalar) -> Scalar {
        self.checked_div(other).expect("division by zero")
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        self.same_field(other);
        other.inverse().map(|inv| self * &inv)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p, p prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.add(b)),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % *modulus as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.mul(b)),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: a * b % *modulus as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.neg()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (*modulus as u64 - value) % *modulus as u64,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a scalar in the textual form used by the file formats: an integer
/// or `a/b` over the rationals, a residue over a prime field.
pub fn parse_scalar(field: FieldSpec, text: &str) -> Result<Scalar, String> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<i64, String> {
        s.parse::<i64>().map_err(|_| alloc::format!("bad integer `{s}`"))
    };
    match field {
        FieldSpec::Rationals => {
            if let Some((n, d)) = text.split_once('/') {
                let den = parse_int(d)?;
                if den == 0 {
                    return Err("zero denominator".into());
                }
                Ok(Scalar::Rational(Rat::new_i64(parse_int(n)?, den)))
            } else {
                Ok(Scalar::Rational(Rat::from_i64(parse_int(text)?)))
            }
        }
        FieldSpec::PrimeField(_) => Ok(field.from_integer(parse_int(text)?)),
    }
}

/// A list of scalars as a column vector; used at API boundaries.
pub type ScalarVec = Vec<Scalar>;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rational_examples() {
        // 1/2 + 1/3 = 5/6
        let half = q().fraction(1, 2);
        let third = q().fraction(1, 3);
        assert_eq!(&half + &third, q().fraction(5, 6));
        // (2/3) / (2/3) = 1
        let two_thirds = q().fraction(2, 3);
        assert_eq!(two_thirds.div(&two_thirds), q().one());
    }

    #[test]
    fn prime_field_examples() {
        // 3 * 4 = 2 in F5
        let f5 = FieldSpec::PrimeField(5);
        assert_eq!(&f5.from_integer(3) * &f5.from_integer(4), f5.from_integer(2));
        assert_eq!(f5.from_integer(-1), f5.from_integer(4));
    }

    #[test]
    fn canonical_form_is_unique() {
        assert_eq!(q().fraction(2, 4), q().fraction(1, 2));
        assert_eq!(q().fraction(-3, -6), q().fraction(1, 2));
        assert_eq!(q().fraction(3, -6), q().fraction(-1, 2));
        assert_eq!(q().fraction(0, 7), q().zero());
    }

    #[test]
    fn big_promotion_round_trips() {
        // (2^40)/3 squared leaves the i64 range and must still reduce exactly.
        let big = q().fraction(1 << 40, 3);
        let sq = &big * &big;
        let back = sq.div(&big);
        assert_eq!(back, big);
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixed_field_panics() {
        let _ = &q().one() + &FieldSpec::PrimeField(5).one();
    }

    #[test]
    fn division_by_zero_is_detected() {
        assert!(q().one().checked_div(&q().zero()).is_none());
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::PrimeField(2).validate().is_ok());
        assert!(FieldSpec::PrimeField(31).validate().is_ok());
        assert!(FieldSpec::PrimeField(1).validate().is_err());
        assert!(FieldSpec::PrimeField(4).validate().is_err());
    }

    #[test]
    fn parses_text_forms() {
        assert_eq!(parse_scalar(q(), "-3/9").unwrap(), q().fraction(-1, 3));
        let f3 = FieldSpec::PrimeField(3);
        assert_eq!(parse_scalar(f3, "5").unwrap(), f3.from_integer(2));
        assert!(parse_scalar(q(), "1/0").is_err());
    }

    fn arb_rat() -> impl Strategy<Value = Scalar> {
        (-300i64..300, 1i64..40).prop_map(|(n, d)| q().fraction(n, d))
    }

    fn arb_mod(p: u32) -> impl Strategy<Value = Scalar> {
        (0i64..p as i64).prop_map(move |v| FieldSpec::PrimeField(p).from_integer(v))
    }

    proptest! {
        #[test]
        fn field_axioms_rational((a, b, c) in (arb_rat(), arb_rat(), arb_rat())) {
            field_axioms(a, b, c, q());
        }

        #[test]
        fn field_axioms_f7((a, b, c) in (arb_mod(7), arb_mod(7), arb_mod(7))) {
            field_axioms(a, b, c, FieldSpec::PrimeField(7));
        }
    }

    fn field_axioms(a: Scalar, b: Scalar, c: Scalar, f: FieldSpec) {
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a + &f.zero(), a);
        assert_eq!(&a * &f.one(), a);
        assert_eq!(&a + &(-&a), f.zero());
        if !a.is_zero() {
            assert_eq!(&a * &a.inverse().unwrap(), f.one());
        }
    }
}
