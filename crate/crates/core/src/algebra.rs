//! Exact commutative rings with unity.
//!
//! Every bracket computation is generic over [`Scalar`]. Three carriers ship
//! with the crate: residues modulo a compile-time modulus ([`Zmod`]), the
//! integers (`BigInt`), and one-variable Laurent polynomials ([`Laurent`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a unit in {1}")]
    NonUnit(String, String),
    #[error("cannot parse `{0}` as an element of {1}")]
    Parse(String, String),
    #[error("unknown ring descriptor `{0}`")]
    UnknownRing(String),
}

/// An element of an exact commutative ring with unity.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Descriptor string of the carrier, e.g. `Z5` or `LaurentZ`.
    fn ring_name() -> String;

    fn parse_elem(text: &str) -> Result<Self, AlgebraError>;

    /// Multiplicative inverse, if `self` is a unit.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// All elements, for finite carriers.
    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    fn unit_inverse(&self) -> Result<Self, AlgebraError> {
        self.inverse()
            .ok_or_else(|| AlgebraError::NonUnit(self.to_string(), Self::ring_name()))
    }

    /// `self^e` for any integer `e`; negative powers need a unit.
    fn pow_signed(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 {
            self.unit_inverse()?
        } else {
            self.clone()
        };
        Ok(pow_u64(&base, e.unsigned_abs()))
    }
}

pub fn pow_u64<S: Scalar>(base: &S, mut e: u64) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// Unit inverse as a free function, mirroring [`Scalar::unit_inverse`].
pub fn unit_inverse<S: Scalar>(a: &S) -> Result<S, AlgebraError> {
    a.unit_inverse()
}

// ---------------------------------------------------------------------------
// Z/nZ

/// Residue class modulo `N`, stored reduced in `0..N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Zmod<const N: u64>(u64);

impl<const N: u64> Zmod<N> {
    pub fn new(v: i64) -> Self {
        assert!(N >= 2, "modulus must be at least 2");
        Zmod(v.rem_euclid(N as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const N: u64> fmt::Debug for Zmod<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const N: u64> fmt::Display for Zmod<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const N: u64> Add for Zmod<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Zmod((self.0 + rhs.0) % N)
    }
}

impl<const N: u64> Sub for Zmod<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Zmod((self.0 + N - rhs.0) % N)
    }
}

impl<const N: u64> Mul for Zmod<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Zmod(((self.0 as u128 * rhs.0 as u128) % N as u128) as u64)
    }
}

impl<const N: u64> Neg for Zmod<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Zmod((N - self.0) % N)
    }
}

impl<const N: u64> Zero for Zmod<N> {
    fn zero() -> Self {
        Zmod(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const N: u64> One for Zmod<N> {
    fn one() -> Self {
        Zmod(1 % N)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl<const N: u64> Scalar for Zmod<N> {
    fn ring_name() -> String {
        format!("Z{N}")
    }

    fn parse_elem(text: &str) -> Result<Self, AlgebraError> {
        text.trim()
            .parse::<i64>()
            .map(Zmod::new)
            .map_err(|_| AlgebraError::Parse(text.to_string(), Self::ring_name()))
    }

    fn inverse(&self) -> Option<Self> {
        let (g, x, _) = ext_gcd(self.0 as i128, N as i128);
        if g == 1 {
            Some(Zmod(x.rem_euclid(N as i128) as u64))
        } else {
            None
        }
    }

    fn from_i64(v: i64) -> Self {
        Zmod::new(v)
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..N).map(Zmod).collect())
    }
}

// ---------------------------------------------------------------------------
// Integers

impl Scalar for BigInt {
    fn ring_name() -> String {
        "Z".to_string()
    }

    fn parse_elem(text: &str) -> Result<Self, AlgebraError> {
        text.trim()
            .parse::<BigInt>()
            .map_err(|_| AlgebraError::Parse(text.to_string(), Self::ring_name()))
    }

    fn inverse(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials

/// Laurent polynomial in one variable `x` with coefficients in `C`.
///
/// Coefficients are kept sparse in a map from exponent to nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Laurent<C: Scalar> {
    terms: BTreeMap<i64, C>,
}

impl<C: Scalar> Laurent<C> {
    pub fn monomial(coef: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        Laurent { terms }
    }

    /// The variable `x`.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, exp: i64, coef: C) {
        let entry = self.terms.entry(exp).or_insert_with(C::zero);
        *entry = entry.clone() + coef;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

impl<C: Scalar> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Scalar> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*x^{e}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Scalar> Add for Laurent<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<C: Scalar> Sub for Laurent<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Scalar> Neg for Laurent<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Scalar> Mul for Laurent<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Zero for Laurent<C> {
    fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Scalar> One for Laurent<C> {
    fn one() -> Self {
        Self::monomial(C::one(), 0)
    }
}

impl<C: Scalar> Scalar for Laurent<C> {
    fn ring_name() -> String {
        format!("Laurent{}", C::ring_name())
    }

    /// Accepts sums of terms `c*x^e`, `c*x`, `x^e`, `-x^e` or bare constants.
    fn parse_elem(text: &str) -> Result<Self, AlgebraError> {
        let err = || AlgebraError::Parse(text.to_string(), Self::ring_name());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed terms, keeping a '-' that follows '^' inside its term.
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            if ch != '+' || prev == Some('^') || !cur.is_empty() {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if !cur.is_empty() {
            pieces.push(cur);
        }
        let mut out = Laurent::zero();
        for piece in pieces {
            let (coef, exp) = match piece.find('x') {
                None => (C::parse_elem(&piece)?, 0),
                Some(pos) => {
                    let head = piece[..pos].trim_end_matches('*');
                    let coef = match head {
                        "" | "+" => C::one(),
                        "-" => -C::one(),
                        h => C::parse_elem(h)?,
                    };
                    let tail = &piece[pos + 1..];
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(err)?
                            .parse::<i64>()
                            .map_err(|_| err())?
                    };
                    (coef, exp)
                }
            };
            out.add_term(exp, coef);
        }
        Ok(out)
    }

    /// Units are exactly the monomials with a unit coefficient.
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.inverse()?, -e))
    }

    fn from_i64(v: i64) -> Self {
        Self::monomial(C::from_i64(v), 0)
    }
}

/// Integer-valued helpers for tests and formatting.
pub fn bigint_to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

/// Laurent polynomials over the integers.
pub type LaurentZ = Laurent<BigInt>;

/// Closed set of ring descriptors accepted at the file/CLI boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Zn(u64),
    Integers,
    LaurentZ,
}

impl RingDescriptor {
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let t = text.trim();
        match t {
            "Z" => Ok(RingDescriptor::Integers),
            "LaurentZ" => Ok(RingDescriptor::LaurentZ),
            _ => {
                let n = t
                    .strip_prefix('Z')
                    .and_then(|rest| rest.parse::<u64>().ok())
                    .filter(|n| *n >= 2)
                    .ok_or_else(|| AlgebraError::UnknownRing(t.to_string()))?;
                Ok(RingDescriptor::Zn(n))
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Zn(n) => write!(f, "Z{n}"),
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::LaurentZ => write!(f, "LaurentZ"),
        }
    }
}

/// Moduli for which a concrete [`Zmod`] instantiation is available at runtime.
pub const SUPPORTED_MODULI: &[u64] = &[
    2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 16, 17, 19, 23, 29, 31,
];

/// Calls `$body` with the type alias `$t` bound to the carrier named by a
/// [`RingDescriptor`]. Evaluates to `Err(AlgebraError::UnknownRing)` for
/// moduli outside [`SUPPORTED_MODULI`].
#[macro_export]
macro_rules! with_ring {
    ($desc:expr, $t:ident => $body:expr) => {{
        use $crate::algebra::{AlgebraError, LaurentZ, RingDescriptor, Zmod};
        match $desc {
            RingDescriptor::Integers => {
                type $t = $crate::BigInt;
                Ok($body)
            }
            RingDescriptor::LaurentZ => {
                type $t = LaurentZ;
                Ok($body)
            }
            RingDescriptor::Zn(2) => {
                type $t = Zmod<2>;
                Ok($body)
            }
            RingDescriptor::Zn(3) => {
                type $t = Zmod<3>;
                Ok($body)
            }
            RingDescriptor::Zn(4) => {
                type $t = Zmod<4>;
                Ok($body)
            }
            RingDescriptor::Zn(5) => {
                type $t = Zmod<5>;
                Ok($body)
            }
            RingDescriptor::Zn(6) => {
                type $t = Zmod<6>;
                Ok($body)
            }
            RingDescriptor::Zn(7) => {
                type $t = Zmod<7>;
                Ok($body)
            }
            RingDescriptor::Zn(8) => {
                type $t = Zmod<8>;
                Ok($body)
            }
            RingDescriptor::Zn(9) => {
                type $t = Zmod<9>;
                Ok($body)
            }
            RingDescriptor::Zn(10) => {
                type $t = Zmod<10>;
                Ok($body)
            }
            RingDescriptor::Zn(11) => {
                type $t = Zmod<11>;
                Ok($body)
            }
            RingDescriptor::Zn(12) => {
                type $t = Zmod<12>;
                Ok($body)
            }
            RingDescriptor::Zn(13) => {
                type $t = Zmod<13>;
                Ok($body)
            }
            RingDescriptor::Zn(16) => {
                type $t = Zmod<16>;
                Ok($body)
            }
            RingDescriptor::Zn(17) => {
                type $t = Zmod<17>;
                Ok($body)
            }
            RingDescriptor::Zn(19) => {
                type $t = Zmod<19>;
                Ok($body)
            }
            RingDescriptor::Zn(23) => {
                type $t = Zmod<23>;
                Ok($body)
            }
            RingDescriptor::Zn(29) => {
                type $t = Zmod<29>;
                Ok($body)
            }
            RingDescriptor::Zn(31) => {
                type $t = Zmod<31>;
                Ok($body)
            }
            other => Err(AlgebraError::UnknownRing(other.to_string())),
        }
    }};
}
