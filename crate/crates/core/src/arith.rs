//! Exact arithmetic in K = ℚ(ζ_ℓ) and its ring of integers 𝒪 = ℤ[ζ_ℓ] for
//! ℓ ∈ {2, 3}.
//!
//! For ℓ = 2 the field is ℚ itself (ζ₂ = −1, 𝒪 = ℤ); for ℓ = 3 elements are
//! written a₀ + a₁ζ with ζ = ζ₃, ζ² = −1 − ζ, and field norm
//! N(a₀ + a₁ζ) = a₀² − a₀a₁ + a₁² ≥ 0.  Both rings are norm-Euclidean: the
//! nearest-lattice-point quotient leaves a remainder of norm at most
//! (3/4)·N(divisor) when ℓ = 3 (and |b|/2 when ℓ = 2), which powers the
//! Euclidean gcd, extended gcd, and the Chinese-remainder weak approximation
//! below.  Both rings have class number one, so ideal factorization is
//! factorization of elements into prime elements up to units (±1 for ℓ = 2;
//! ±ζ^i, six in all, for ℓ = 3), pinned down by a deterministic choice of
//! canonical associate.
//!
//! Fractions of 𝒪-elements form `CycElem`; the reduced form (numerator and
//! denominator coprime, denominator a canonical associate) is unique, so
//! structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::places::{primes_above, Place, PlaceKind};
use crate::{Error, SearchConfig};

/// The prime ℓ selecting the field: ℓ = 2 ⇒ K = ℚ, ℓ = 3 ⇒ K = ℚ(ζ₃).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ell {
    Two,
    Three,
}

impl Ell {
    pub fn as_u32(self) -> u32 {
        match self {
            Ell::Two => 2,
            Ell::Three => 3,
        }
    }

    pub fn from_u32(n: u32) -> Result<Ell, Error> {
        match n {
            2 => Ok(Ell::Two),
            3 => Ok(Ell::Three),
            _ => Err(Error::Unsupported(format!("ell = {n}, only 2 and 3"))),
        }
    }

    /// Degree φ(ℓ) of K over ℚ (= coordinate length).
    pub fn degree(self) -> usize {
        match self {
            Ell::Two => 1,
            Ell::Three => 2,
        }
    }
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

/// An element of ℤ[ζ_ℓ], stored as coordinates (c₀, c₁) meaning c₀ + c₁ζ.
/// For ℓ = 2 the second coordinate is identically zero (ζ₂ = −1 is folded
/// into c₀ on construction).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    pub ell: Ell,
    pub c0: BigInt,
    pub c1: BigInt,
}

impl CycInt {
    pub fn new(ell: Ell, c0: BigInt, c1: BigInt) -> CycInt {
        match ell {
            // ζ₂ = −1: a + bζ₂ = a − b.
            Ell::Two => CycInt { ell, c0: c0 - c1, c1: BigInt::zero() },
            Ell::Three => CycInt { ell, c0, c1 },
        }
    }

    pub fn from_i64(ell: Ell, n: i64) -> CycInt {
        CycInt { ell, c0: BigInt::from(n), c1: BigInt::zero() }
    }

    pub fn from_big(ell: Ell, n: BigInt) -> CycInt {
        CycInt { ell, c0: n, c1: BigInt::zero() }
    }

    /// ζ_ℓ itself: −1 for ℓ = 2, the coordinate (0, 1) for ℓ = 3.
    pub fn zeta(ell: Ell) -> CycInt {
        CycInt::new(ell, BigInt::zero(), BigInt::one())
    }

    pub fn zero(ell: Ell) -> CycInt {
        CycInt::from_i64(ell, 0)
    }

    pub fn one(ell: Ell) -> CycInt {
        CycInt::from_i64(ell, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.is_one() && self.c1.is_zero()
    }

    /// True iff the element is a rational integer (c₁ = 0).
    pub fn is_rational(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn add(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.ell, o.ell);
        CycInt { ell: self.ell, c0: &self.c0 + &o.c0, c1: &self.c1 + &o.c1 }
    }

    pub fn sub(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.ell, o.ell);
        CycInt { ell: self.ell, c0: &self.c0 - &o.c0, c1: &self.c1 - &o.c1 }
    }

    pub fn neg(&self) -> CycInt {
        CycInt { ell: self.ell, c0: -&self.c0, c1: -&self.c1 }
    }

    pub fn mul(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.ell, o.ell);
        match self.ell {
            Ell::Two => CycInt { ell: self.ell, c0: &self.c0 * &o.c0, c1: BigInt::zero() },
            Ell::Three => {
                // (a₀ + a₁ζ)(b₀ + b₁ζ) with ζ² = −1 − ζ.
                let t = &self.c1 * &o.c1;
                CycInt {
                    ell: self.ell,
                    c0: &self.c0 * &o.c0 - &t,
                    c1: &self.c0 * &o.c1 + &self.c1 * &o.c0 - &t,
                }
            }
        }
    }

    pub fn mul_big(&self, k: &BigInt) -> CycInt {
        CycInt { ell: self.ell, c0: &self.c0 * k, c1: &self.c1 * k }
    }

    /// The nontrivial Galois conjugate for ℓ = 3 (ζ ↦ ζ²); identity for ℓ = 2.
    pub fn conj(&self) -> CycInt {
        match self.ell {
            Ell::Two => self.clone(),
            Ell::Three => CycInt { ell: self.ell, c0: &self.c0 - &self.c1, c1: -&self.c1 },
        }
    }

    /// Field norm N: K → ℚ restricted to 𝒪.  Identity for ℓ = 2 (signed);
    /// a₀² − a₀a₁ + a₁² ≥ 0 for ℓ = 3.
    pub fn norm(&self) -> BigInt {
        match self.ell {
            Ell::Two => self.c0.clone(),
            Ell::Three => &self.c0 * &self.c0 - &self.c0 * &self.c1 + &self.c1 * &self.c1,
        }
    }

    /// |N(x)| — the Euclidean size function.
    pub fn enorm(&self) -> BigInt {
        self.norm().abs()
    }

    pub fn is_unit(&self) -> bool {
        self.enorm().is_one()
    }

    /// Inverse of a unit (±1 for ℓ = 2; ±ζ^i for ℓ = 3, where u⁻¹ = conj(u)
    /// because N(u) = 1).
    pub fn unit_inverse(&self) -> CycInt {
        debug_assert!(self.is_unit());
        match self.ell {
            Ell::Two => self.clone(),
            Ell::Three => self.conj(),
        }
    }

    /// The unit group of 𝒪: {±1} for ℓ = 2, {±ζ^i : 0 ≤ i < 3} for ℓ = 3.
    pub fn units(ell: Ell) -> Vec<CycInt> {
        match ell {
            Ell::Two => vec![CycInt::from_i64(ell, 1), CycInt::from_i64(ell, -1)],
            Ell::Three => {
                let z = CycInt::zeta(ell);
                let z2 = z.mul(&z);
                vec![
                    CycInt::one(ell),
                    CycInt::from_i64(ell, -1),
                    z.clone(),
                    z.neg(),
                    z2.clone(),
                    z2.neg(),
                ]
            }
        }
    }

    pub fn pow(&self, e: u32) -> CycInt {
        let mut acc = CycInt::one(self.ell);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn coords_lex_cmp(&self, o: &CycInt) -> Ordering {
        self.c0.cmp(&o.c0).then_with(|| self.c1.cmp(&o.c1))
    }

    /// The canonical associate: among the unit multiples u·x, those whose
    /// leading coordinate is positive, take the lexicographically least
    /// coordinate vector.  Returns (unit, canonical) with x = unit · canonical.
    /// Deterministic, so factorizations and JSON output are reproducible.
    pub fn canonical_associate(&self) -> (CycInt, CycInt) {
        if self.is_zero() {
            return (CycInt::one(self.ell), self.clone());
        }
        let mut best: Option<(CycInt, CycInt)> = None;
        for u in CycInt::units(self.ell) {
            let cand = u.mul(self);
            if cand.c0.sign() != Sign::Plus {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, b)) => cand.coords_lex_cmp(b) == Ordering::Less,
            };
            if better {
                // x = u⁻¹ · cand.
                best = Some((u.unit_inverse(), cand));
            }
        }
        best.expect("every nonzero element has an associate with positive leading coordinate")
    }

    /// Exact division: Some(q) with self = q·d, or None if d ∤ self.
    pub fn divexact(&self, d: &CycInt) -> Option<CycInt> {
        debug_assert_eq!(self.ell, d.ell);
        if d.is_zero() {
            return None;
        }
        let num = self.mul(&d.conj());
        let den = d.mul(&d.conj()).c0; // = |d|² resp. N(d) > 0
        debug_assert!(den.is_positive());
        let (q0, r0) = num.c0.div_rem(&den);
        let (q1, r1) = num.c1.div_rem(&den);
        if r0.is_zero() && r1.is_zero() {
            Some(CycInt { ell: self.ell, c0: q0, c1: q1 })
        } else {
            None
        }
    }

    /// Total bit size of the coordinates (for overflow guards).
    pub fn bits(&self) -> u64 {
        self.c0.bits() + self.c1.bits()
    }
}

impl PartialOrd for CycInt {
    fn partial_cmp(&self, other: &CycInt) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycInt {
    /// Lexicographic coordinate order (within one ℓ); used for canonical,
    /// reproducible sorting only — it is not compatible with the ring ops.
    fn cmp(&self, other: &CycInt) -> Ordering {
        self.ell.cmp(&other.ell).then_with(|| self.coords_lex_cmp(other))
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wterm = |c: &BigInt| -> String {
            if c.is_one() {
                "w".to_string()
            } else if (-c).is_one() {
                "-w".to_string()
            } else {
                format!("{c}*w")
            }
        };
        if self.c1.is_zero() {
            write!(f, "{}", self.c0)
        } else if self.c0.is_zero() {
            write!(f, "{}", wterm(&self.c1))
        } else if self.c1.is_positive() {
            if self.c1.is_one() {
                write!(f, "{}+w", self.c0)
            } else {
                write!(f, "{}+{}*w", self.c0, self.c1)
            }
        } else {
            let m = -&self.c1;
            if m.is_one() {
                write!(f, "{}-w", self.c0)
            } else {
                write!(f, "{}-{}*w", self.c0, m)
            }
        }
    }
}

/// Rounded quotient ⌊n/d⌉ with ties rounded up; requires d > 0.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let num: BigInt = n * 2 + d;
    let den: BigInt = d * 2;
    num.div_floor(&den)
}

/// Euclidean division: a = q·b + r with |N(r)| < |N(b)|.
///
/// The quotient is the coordinate-wise nearest integer to a·b̄ / (b·b̄); for
/// ℓ = 3 the fractional part f has N(f) ≤ 1/4 + 1/4 + 1/4 = 3/4 < 1, and for
/// ℓ = 2 the remainder satisfies |r| ≤ |b|/2.
pub fn euclid_divmod(a: &CycInt, b: &CycInt) -> Result<(CycInt, CycInt), Error> {
    if a.ell != b.ell {
        return Err(Error::EllMismatch);
    }
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let num = a.mul(&b.conj());
    let den = b.mul(&b.conj()).c0;
    let q = CycInt { ell: a.ell, c0: round_div(&num.c0, &den), c1: round_div(&num.c1, &den) };
    let r = a.sub(&q.mul(b));
    debug_assert!(r.enorm() < b.enorm());
    Ok((q, r))
}

/// Euclidean gcd, returned as a canonical associate (so gcd(a, b) is a
/// well-defined element, not just an ideal).  gcd(0, 0) = 0.
pub fn gcd(a: &CycInt, b: &CycInt) -> CycInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = euclid_divmod(&x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    x.canonical_associate().1
}

/// Extended gcd: returns (g, s, t) with s·a + t·b = g and g the canonical
/// associate of gcd(a, b).
pub fn ext_gcd(a: &CycInt, b: &CycInt) -> (CycInt, CycInt, CycInt) {
    let ell = a.ell;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (CycInt::one(ell), CycInt::zero(ell));
    let (mut t0, mut t1) = (CycInt::zero(ell), CycInt::one(ell));
    while !r1.is_zero() {
        let (q, r) = euclid_divmod(&r0, &r1).expect("nonzero divisor");
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let (u, g) = r0.canonical_associate();
    // r0 = u·g ⇒ g = u⁻¹·r0 = (u⁻¹s₀)a + (u⁻¹t₀)b.
    let ui = u.unit_inverse();
    (g, ui.mul(&s0), ui.mul(&t0))
}

/// An element of K^* (or 0), kept as a reduced fraction num/den of ring
/// elements: gcd(num, den) is a unit and den is a canonical associate.  The
/// reduced form is unique, so derived equality is field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElem {
    num: CycInt,
    den: CycInt,
}

impl CycElem {
    pub fn new(num: CycInt, den: CycInt) -> Result<CycElem, Error> {
        if num.ell != den.ell {
            return Err(Error::EllMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = gcd(&num, &den);
        let mut n = num.divexact(&g).expect("gcd divides");
        let mut d = den.divexact(&g).expect("gcd divides");
        let (u, dc) = d.canonical_associate();
        // num/den = n/(u·dc) = (u⁻¹·n)/dc.
        n = u.unit_inverse().mul(&n);
        d = dc;
        Ok(CycElem { num: n, den: d })
    }

    pub fn from_int(num: CycInt) -> CycElem {
        let one = CycInt::one(num.ell);
        CycElem { num, den: one }
    }

    pub fn from_i64(ell: Ell, n: i64) -> CycElem {
        CycElem::from_int(CycInt::from_i64(ell, n))
    }

    pub fn from_ratio(ell: Ell, n: i64, d: i64) -> CycElem {
        CycElem::new(CycInt::from_i64(ell, n), CycInt::from_i64(ell, d)).expect("d != 0")
    }

    pub fn zeta(ell: Ell) -> CycElem {
        CycElem::from_int(CycInt::zeta(ell))
    }

    pub fn zero(ell: Ell) -> CycElem {
        CycElem::from_i64(ell, 0)
    }

    pub fn one(ell: Ell) -> CycElem {
        CycElem::from_i64(ell, 1)
    }

    pub fn ell(&self) -> Ell {
        self.num.ell
    }

    pub fn numer(&self) -> &CycInt {
        &self.num
    }

    pub fn denom(&self) -> &CycInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True iff the element lies in 𝒪 (reduced denominator is 1).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &CycElem) -> CycElem {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        CycElem::new(n, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &CycElem) -> CycElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CycElem {
        CycElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &CycElem) -> CycElem {
        CycElem::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn div(&self, o: &CycElem) -> Result<CycElem, Error> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        CycElem::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> Result<CycElem, Error> {
        CycElem::one(self.ell()).div(self)
    }

    pub fn conj(&self) -> CycElem {
        CycElem::new(self.num.conj(), self.den.conj()).expect("nonzero denominator")
    }

    /// Field norm N_{K/ℚ} as an exact rational (num/den of plain integers).
    pub fn norm_ratio(&self) -> (BigInt, BigInt) {
        (self.num.norm(), self.den.norm())
    }

    pub fn pow(&self, e: i64) -> Result<CycElem, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycElem::one(self.ell());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn bits(&self) -> u64 {
        self.num.bits() + self.den.bits()
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num_composite = !self.num.c0.is_zero() && !self.num.c1.is_zero();
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den_composite = !self.den.c1.is_zero();
        if num_composite {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if den_composite {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl Serialize for CycElem {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let coords = |x: &CycInt| -> Vec<String> {
            match x.ell {
                Ell::Two => vec![x.c0.to_string()],
                Ell::Three => vec![x.c0.to_string(), x.c1.to_string()],
            }
        };
        let mut st = ser.serialize_struct("CycElem", 3)?;
        st.serialize_field("num", &coords(&self.num))?;
        st.serialize_field("den", &coords(&self.den))?;
        st.serialize_field("ell", &self.ell().as_u32())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<CycElem, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: Vec<String>,
            den: Vec<String>,
            ell: u32,
        }
        let raw = Raw::deserialize(de)?;
        let ell = Ell::from_u32(raw.ell).map_err(D::Error::custom)?;
        let parse_coords = |v: &[String]| -> Result<CycInt, D::Error> {
            if v.is_empty() || v.len() > ell.degree() {
                return Err(D::Error::custom("coordinate vector of wrong length"));
            }
            let c0: BigInt = v[0].parse().map_err(D::Error::custom)?;
            let c1: BigInt = if v.len() > 1 {
                v[1].parse().map_err(D::Error::custom)?
            } else {
                BigInt::zero()
            };
            Ok(CycInt::new(ell, c0, c1))
        };
        let num = parse_coords(&raw.num)?;
        let den = parse_coords(&raw.den)?;
        CycElem::new(num, den).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Expression grammar: signed decimal integers, `w` for ζ_ℓ, operators
// + - * /, parentheses.  Example: (3+w)/2.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    W,
    Plus,
    Minus,
    Star,
    Slash,
    LPar,
    RPar,
}

fn lex(s: &str) -> Result<Vec<Tok>, Error> {
    let mut toks = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LPar);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RPar);
                i += 1;
            }
            'w' => {
                toks.push(Tok::W);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().expect("digits");
                toks.push(Tok::Int(n));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}' at byte {i}"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    ell: Ell,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<CycElem, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CycElem, Error> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.unary()?;
                    acc = acc.div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<CycElem, Error> {
        let mut neg = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    neg = !neg;
                    self.next();
                }
                Some(Tok::Plus) => {
                    self.next();
                }
                _ => break,
            }
        }
        let p = self.primary()?;
        Ok(if neg { p.neg() } else { p })
    }

    fn primary(&mut self) -> Result<CycElem, Error> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(CycElem::from_int(CycInt::from_big(self.ell, n))),
            Some(Tok::W) => Ok(CycElem::zeta(self.ell)),
            Some(Tok::LPar) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RPar) => Ok(e),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse the element grammar (`(3+w)/2`, `-5`, `1-2*w`, …) into a CycElem.
pub fn parse_elem(s: &str, ell: Ell) -> Result<CycElem, Error> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, ell };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing tokens at position {}", p.pos)));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Rational integer factorization: trial division then Pollard–Brent rho with
// deterministic Miller–Rabin.  Desk-scale inputs (norms ≪ 2⁶⁴) factor
// instantly; the rho stage keeps larger accidental inputs from hanging.
// ---------------------------------------------------------------------------

fn modmul(a: &BigInt, b: &BigInt, m: &BigInt) -> BigInt {
    (a * b) % m
}

/// Deterministic Miller–Rabin.  The base set {2, 3, 5, 7, 11, 13, 17, 19, 23,
/// 29, 31, 37} is proven correct for n < 3.3·10²⁴, far beyond desk scale.
pub fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(p).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = modmul(&x, &x, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One Pollard–Brent rho round with polynomial x² + c; returns a nontrivial
/// factor or None if this c degenerated.
fn rho_round(n: &BigInt, c: u64) -> Option<BigInt> {
    let cc = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &cc) % n;
    let mut x = BigInt::from(2);
    let mut y = x.clone();
    let mut d = BigInt::one();
    let mut steps: u64 = 0;
    while d.is_one() {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        if diff.is_zero() {
            return None;
        }
        d = diff.gcd(n);
        steps += 1;
        if steps > 10_000_000 {
            return None;
        }
    }
    if &d == n {
        None
    } else {
        Some(d)
    }
}

fn factor_rec(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1..64u64 {
        if let Some(d) = rho_round(&n, c) {
            let q = &n / &d;
            factor_rec(d, out);
            factor_rec(q, out);
            return;
        }
    }
    panic!("rho failed to split composite {n}");
}

/// Factor n ≥ 1 into (prime, multiplicity) pairs, primes ascending.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor_bigint needs n >= 1");
    let mut n = n.clone();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n && d < BigInt::from(10_000) {
        while (&n % &d).is_zero() {
            primes.push(d.clone());
            n = &n / &d;
        }
        d += 1;
    }
    if !n.is_one() {
        factor_rec(n, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Multiplicity of the prime element `gen` in the nonzero ring element x.
pub(crate) fn val_cycint(x: &CycInt, gen: &CycInt) -> i64 {
    debug_assert!(!x.is_zero());
    let mut v = 0;
    let mut cur = x.clone();
    while let Some(q) = cur.divexact(gen) {
        v += 1;
        cur = q;
    }
    v
}

/// Principal factorization x = unit · Π gen(𝔭)^{e_𝔭} over the canonical prime
/// generators (class number one in both supported fields).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: CycInt,
    pub factors: Vec<(Place, i64)>,
}

impl Factorization {
    /// Multiply the factorization back together (exact reconstruction).
    pub fn reconstruct(&self) -> CycElem {
        let ell = self.unit.ell;
        let mut acc = CycElem::from_int(self.unit.clone());
        for (pl, e) in &self.factors {
            let g = CycElem::from_int(pl.gen.clone());
            acc = acc.mul(&g.pow(*e).expect("prime generator is invertible"));
        }
        debug_assert_eq!(acc.ell(), ell);
        acc
    }
}

/// Factor a nonzero x ∈ K^* into unit × primes, exponents ∈ ℤ.
///
/// Algorithm: factor the rational norms of numerator and denominator, split
/// each rational prime into places, and read off valuations by exact division.
pub fn factor(x: &CycElem) -> Result<Factorization, Error> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ell = x.ell();
    let mut rational_primes: Vec<BigInt> = Vec::new();
    for part in [x.numer(), x.denom()] {
        for (p, _) in factor_bigint(&part.enorm()) {
            if !rational_primes.contains(&p) {
                rational_primes.push(p);
            }
        }
    }
    rational_primes.sort();

    let mut factors: Vec<(Place, i64)> = Vec::new();
    let mut num_left = x.numer().clone();
    let mut den_left = x.denom().clone();
    for p in rational_primes {
        for pl in primes_above(ell, &p) {
            let vn = val_cycint(x.numer(), &pl.gen);
            let vd = val_cycint(x.denom(), &pl.gen);
            if vn > 0 {
                num_left = num_left.divexact(&pl.gen.pow(vn as u32)).expect("valuation counted");
            }
            if vd > 0 {
                den_left = den_left.divexact(&pl.gen.pow(vd as u32)).expect("valuation counted");
            }
            if vn != vd {
                factors.push((pl, vn - vd));
            }
        }
    }
    debug_assert!(num_left.is_unit() && den_left.is_unit());
    let unit = num_left.mul(&den_left.unit_inverse());
    factors.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(Factorization { unit, factors })
}

// ---------------------------------------------------------------------------
// Weak approximation: simultaneous congruences at finitely many finite places,
// with fractional targets and negative precisions allowed.
// ---------------------------------------------------------------------------

/// Reduce x modulo m (Euclidean remainder — any residue system works here).
fn red_mod(x: &CycInt, m: &CycInt) -> CycInt {
    euclid_divmod(x, m).expect("nonzero modulus").1
}

/// Inverse of a mod m for gcd(a, m) a unit.
fn inv_mod(a: &CycInt, m: &CycInt) -> Result<CycInt, Error> {
    let (g, s, _) = ext_gcd(a, m);
    if !g.is_unit() {
        return Err(Error::Precondition(format!("{a} is not invertible mod {m}")));
    }
    Ok(red_mod(&s.mul(&g.unit_inverse()), m))
}

/// Weak approximation / CRT: returns x ∈ K with v_𝔭(x − t_𝔭) ≥ k_𝔭 for every
/// constraint (𝔭, t_𝔭, k_𝔭).  Places must be finite and pairwise distinct;
/// targets may be fractional and precisions negative (the result then merely
/// bounds the pole order).  The empty list yields 0.
pub fn crt_approx(
    constraints: &[(Place, CycElem, i64)],
    cfg: &SearchConfig,
) -> Result<CycElem, Error> {
    if constraints.is_empty() {
        return Ok(CycElem::zero(Ell::Three));
    }
    let ell = constraints[0].1.ell();
    for (pl, t, _) in constraints {
        if pl.kind == PlaceKind::Real {
            return Err(Error::WrongPlaceKind("crt_approx needs finite places".into()));
        }
        if pl.ell != ell || t.ell() != ell {
            return Err(Error::EllMismatch);
        }
    }
    for i in 0..constraints.len() {
        for j in i + 1..constraints.len() {
            if constraints[i].0 == constraints[j].0 {
                return Err(Error::Precondition(format!(
                    "duplicate place {} in crt_approx",
                    constraints[i].0.name()
                )));
            }
        }
    }

    // Clear denominators: x = z/D with D = Π gen_j^{e_j}, where e_j absorbs
    // both the worst pole of any target at 𝔭_j and a negative precision.
    let mut depths: Vec<i64> = Vec::new();
    for (pl, _, k) in constraints {
        let mut e = (-k).max(0);
        for (_, t, _) in constraints {
            if !t.is_zero() {
                e = e.max(-pl.valuation(t));
            }
        }
        depths.push(e);
    }
    let mut dd = CycInt::one(ell);
    for ((pl, _, _), e) in constraints.iter().zip(&depths) {
        dd = dd.mul(&pl.gen.pow(*e as u32));
    }

    // Congruences z ≡ c_j mod gen_j^{m_j} for the constraints still binding
    // after clearing (m_j ≤ 0 is automatically satisfied by the pole bound).
    let mut congruences: Vec<(CycInt, CycInt)> = Vec::new(); // (residue, modulus)
    for ((pl, t, k), e) in constraints.iter().zip(&depths) {
        let m = k + e;
        if m <= 0 {
            continue;
        }
        let modulus = pl.gen.pow(m as u32);
        let u = t.mul(&CycElem::from_int(dd.clone()));
        debug_assert!(u.is_zero() || pl.valuation(&u) >= 0);
        let c = if u.is_zero() {
            CycInt::zero(ell)
        } else {
            // u = n/d reduced with v_𝔭(d) = 0: residue is n·d⁻¹ mod gen^m.
            let dinv = inv_mod(u.denom(), &modulus)?;
            red_mod(&u.numer().mul(&dinv), &modulus)
        };
        congruences.push((c, modulus));
    }

    // Pairwise CRT combination (moduli are powers of non-associate primes,
    // hence coprime).
    let mut r_acc = CycInt::zero(ell);
    let mut m_acc = CycInt::one(ell);
    for (c, m) in congruences {
        let (g, s, _) = ext_gcd(&m_acc, &m);
        if !g.is_unit() {
            return Err(Error::Precondition("crt moduli are not coprime".into()));
        }
        // m_acc·(s·g⁻¹) ≡ 1 mod m ⇒ x = r_acc + m_acc·s·g⁻¹·(c − r_acc).
        let adj = red_mod(&s.mul(&g.unit_inverse()).mul(&c.sub(&r_acc)), &m);
        r_acc = r_acc.add(&m_acc.mul(&adj));
        m_acc = m_acc.mul(&m);
        r_acc = red_mod(&r_acc, &m_acc);
        if r_acc.bits() > cfg.bit_bound || m_acc.bits() > cfg.bit_bound {
            return Err(Error::Overflow(format!(
                "crt_approx intermediate exceeded {} bits",
                cfg.bit_bound
            )));
        }
    }

    let x = CycElem::new(r_acc, dd)?;
    for (pl, t, k) in constraints {
        let diff = x.sub(t);
        if !diff.is_zero() && pl.valuation(&diff) < *k {
            return Err(Error::Precondition(format!(
                "internal: crt_approx missed the target at {}",
                pl.name()
            )));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c3(a: i64, b: i64) -> CycInt {
        CycInt::new(Ell::Three, BigInt::from(a), BigInt::from(b))
    }

    fn e3(a: i64, b: i64) -> CycElem {
        CycElem::from_int(c3(a, b))
    }

    fn rand_cycint(rng: &mut ChaCha8Rng, ell: Ell, bound: i64) -> CycInt {
        let c0 = rng.gen_range(-bound..=bound);
        let c1 = if ell == Ell::Three { rng.gen_range(-bound..=bound) } else { 0 };
        CycInt::new(ell, BigInt::from(c0), BigInt::from(c1))
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..10_000 {
                let x = rand_cycint(&mut rng, ell, 1000);
                let y = rand_cycint(&mut rng, ell, 1000);
                assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            }
        }
        // N(x) = 0 ⟺ x = 0 and N ≥ 0 for ℓ = 3.
        for a in -10..10i64 {
            for b in -10..10i64 {
                let x = c3(a, b);
                assert_eq!(x.norm().is_zero(), x.is_zero());
                assert!(!x.norm().is_negative());
            }
        }
    }

    #[test]
    fn euclid_rational_integers() {
        let (q, r) =
            euclid_divmod(&CycInt::from_i64(Ell::Two, 7), &CycInt::from_i64(Ell::Two, 3)).unwrap();
        assert_eq!(q, CycInt::from_i64(Ell::Two, 2));
        assert_eq!(r, CycInt::from_i64(Ell::Two, 1));
    }

    #[test]
    fn euclid_unit_divisor_is_exact() {
        let x = c3(31, -17);
        let (q, r) = euclid_divmod(&x, &CycInt::one(Ell::Three)).unwrap();
        assert_eq!(q, x);
        assert!(r.is_zero());
    }

    #[test]
    fn euclid_remainder_beats_divisor() {
        // Oracle for the division rule: the quotient must be one of the four
        // lattice points nearest the exact quotient, and the remainder norm
        // must drop.  3 + ζ over 1 − ζ: N(1 − ζ) = 3.
        let a = c3(3, 1);
        let b = c3(1, -1);
        let (q, r) = euclid_divmod(&a, &b).unwrap();
        assert_eq!(a, q.mul(&b).add(&r));
        assert!(r.enorm() < b.enorm());
        // exact quotient = a·b̄/N(b); q is within 1 of it in each coordinate
        let num = a.mul(&b.conj());
        let den = b.norm();
        for (qc, nc) in [(q.c0.clone(), num.c0.clone()), (q.c1.clone(), num.c1.clone())] {
            let diff = (qc * &den - nc).abs();
            assert!(diff <= den); // |q_i − n_i/d| ≤ 1
        }
        // randomized: remainder norm always drops
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..2000 {
                let a = rand_cycint(&mut rng, ell, 500);
                let mut b = rand_cycint(&mut rng, ell, 500);
                if b.is_zero() {
                    b = CycInt::one(ell);
                }
                let (q, r) = euclid_divmod(&a, &b).unwrap();
                assert_eq!(a, q.mul(&b).add(&r));
                assert!(r.enorm() < b.enorm());
            }
        }
    }

    #[test]
    fn gcd_divides_and_is_maximal() {
        // Brute-force oracle on small elements: every common divisor found by
        // exhaustive search divides gcd(a, b).
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a = rand_cycint(&mut rng, Ell::Three, 6);
            let b = rand_cycint(&mut rng, Ell::Three, 6);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = gcd(&a, &b);
            assert!(a.divexact(&g).is_some() && b.divexact(&g).is_some());
            for d0 in -10..=10i64 {
                for d1 in -10..=10i64 {
                    let d = c3(d0, d1);
                    if d.is_zero() || d.enorm() > BigInt::from(100) {
                        continue;
                    }
                    if a.divexact(&d).is_some() && b.divexact(&d).is_some() {
                        assert!(
                            g.divexact(&d).is_some(),
                            "common divisor {d} does not divide gcd {g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..500 {
                let a = rand_cycint(&mut rng, ell, 200);
                let b = rand_cycint(&mut rng, ell, 200);
                let (g, s, t) = ext_gcd(&a, &b);
                assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
                assert_eq!(g, gcd(&a, &b));
            }
        }
    }

    #[test]
    fn canonical_associate_is_canonical() {
        // unit · canonical = x, and all associates share one canonical form.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let x = rand_cycint(&mut rng, Ell::Three, 50);
            if x.is_zero() {
                continue;
            }
            let (u, c) = x.canonical_associate();
            assert!(u.is_unit());
            assert_eq!(u.mul(&c), x);
            assert!(c.c0.is_positive());
            for v in CycInt::units(Ell::Three) {
                let y = v.mul(&x);
                assert_eq!(y.canonical_associate().1, c);
            }
        }
        // units collapse to 1; the prime 3 + ζ above 7 canonicalizes to 1 − 2ζ
        for u in CycInt::units(Ell::Three) {
            assert!(u.canonical_associate().1.is_one());
        }
        assert_eq!(c3(3, 1).canonical_associate().1, c3(1, -2));
        assert_eq!(c3(2, -1).canonical_associate().1, c3(1, 3));
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["(3+w)/2", "7", "-w", "1-2*w", "28/55", "0", "(1+w)/(1-2*w)", "-(2-w)*3"] {
            let x = parse_elem(s, Ell::Three).unwrap();
            let y = parse_elem(&x.to_string(), Ell::Three).unwrap();
            assert_eq!(x, y, "round trip failed for {s}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..500 {
                let n = rand_cycint(&mut rng, ell, 300);
                let mut d = rand_cycint(&mut rng, ell, 300);
                if d.is_zero() {
                    d = CycInt::one(ell);
                }
                let x = CycElem::new(n, d).unwrap();
                let y = parse_elem(&x.to_string(), ell).unwrap();
                assert_eq!(x, y);
            }
        }
        // ℓ = 2: w folds to −1
        assert_eq!(parse_elem("w", Ell::Two).unwrap(), CycElem::from_i64(Ell::Two, -1));
        assert!(parse_elem("3 +", Ell::Three).is_err());
        assert!(parse_elem("1/0", Ell::Three).is_err());
        assert!(parse_elem("zeta", Ell::Three).is_err());
    }

    #[test]
    fn reduced_fraction_is_unique() {
        // num/den normalization: gcd a unit, canonical denominator.
        let x = CycElem::new(c3(4, 0), c3(6, 0)).unwrap();
        assert_eq!(x, CycElem::from_ratio(Ell::Three, 2, 3));
        // (1+w)/(1+w) = 1 even though 1 + ζ = −ζ² is a unit
        let y = CycElem::new(c3(1, 1), c3(1, 1)).unwrap();
        assert!(y.is_one());
        // field ops sanity: (a/b)·(b/a) = 1
        let a = CycElem::new(c3(5, -3), c3(2, 7)).unwrap();
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn factor_bigint_examples() {
        let f = factor_bigint(&BigInt::from(2u32.pow(10) * 3 * 49));
        assert_eq!(
            f,
            vec![(BigInt::from(2), 10), (BigInt::from(3), 1), (BigInt::from(7), 2)]
        );
        assert!(factor_bigint(&BigInt::one()).is_empty());
        // a product of two 11-digit primes goes through the rho stage
        let p = BigInt::from(10_000_000_019u64);
        let q = BigInt::from(10_000_000_033u64);
        assert!(is_prime(&p) && is_prime(&q));
        assert_eq!(factor_bigint(&(&p * &q)), vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn factor_examples() {
        // 1 → empty
        let f = factor(&CycElem::one(Ell::Three)).unwrap();
        assert!(f.factors.is_empty() && f.unit.is_one());
        // 7 splits into the two canonical primes above 7, each of norm 7
        let f = factor(&e3(7, 0)).unwrap();
        assert_eq!(f.factors.len(), 2);
        for (pl, e) in &f.factors {
            assert_eq!(*e, 1);
            assert_eq!(pl.gen.norm(), BigInt::from(7));
        }
        assert_eq!(f.reconstruct(), e3(7, 0));
        // 28/55 = 2²·7 / (5·11): exponents +2 at (2), +1 at both primes above
        // 7, −1 at (5) and (11)
        let x = CycElem::from_ratio(Ell::Three, 28, 55);
        let f = factor(&x).unwrap();
        let mut seen = std::collections::BTreeMap::new();
        for (pl, e) in &f.factors {
            seen.insert((pl.residue_char.clone(), pl.gen.clone()), *e);
        }
        assert_eq!(seen.len(), 5);
        assert_eq!(seen[&(BigInt::from(2), CycInt::from_i64(Ell::Three, 2))], 2);
        assert_eq!(seen[&(BigInt::from(5), CycInt::from_i64(Ell::Three, 5))], -1);
        assert_eq!(seen[&(BigInt::from(7), c3(1, -2))], 1);
        assert_eq!(seen[&(BigInt::from(7), c3(1, 3))], 1);
        assert_eq!(seen[&(BigInt::from(11), CycInt::from_i64(Ell::Three, 11))], -1);
        assert_eq!(f.reconstruct(), x);
    }

    #[test]
    fn factor_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..300 {
                let x = rand_cycint(&mut rng, ell, 60);
                let y = rand_cycint(&mut rng, ell, 60);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let fx = factor(&CycElem::from_int(x.clone())).unwrap();
                let fy = factor(&CycElem::from_int(y.clone())).unwrap();
                let fxy = factor(&CycElem::from_int(x.mul(&y))).unwrap();
                let mut merged = std::collections::BTreeMap::new();
                for (pl, e) in fx.factors.iter().chain(fy.factors.iter()) {
                    *merged.entry(pl.clone()).or_insert(0i64) += e;
                }
                merged.retain(|_, e| *e != 0);
                let got: std::collections::BTreeMap<_, _> = fxy.factors.iter().cloned().collect();
                assert_eq!(merged, got);
                assert_eq!(fxy.unit, fx.unit.mul(&fy.unit));
                assert_eq!(fxy.reconstruct(), CycElem::from_int(x.mul(&y)));
            }
        }
    }

    #[test]
    fn crt_approx_examples() {
        let cfg = SearchConfig::default();
        // empty list → 0
        assert!(crt_approx(&[], &cfg).unwrap().is_zero());
        // single constraint (𝔭, 0, 1): anything in 𝔭𝒪_(𝔭)
        let lambda = primes_above(Ell::Three, &BigInt::from(3)).remove(0);
        let x = crt_approx(&[(lambda.clone(), CycElem::zero(Ell::Three), 1)], &cfg).unwrap();
        assert!(x.is_zero() || lambda.valuation(&x) >= 1);
        // (π₇, 1, 1) and ((2), 0, 1)
        let pi7 = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        let two = primes_above(Ell::Three, &BigInt::from(2)).remove(0);
        let x = crt_approx(
            &[
                (pi7.clone(), CycElem::one(Ell::Three), 1),
                (two.clone(), CycElem::zero(Ell::Three), 1),
            ],
            &cfg,
        )
        .unwrap();
        assert!(pi7.valuation(&x.sub(&CycElem::one(Ell::Three))) >= 1);
        assert!(two.valuation(&x) >= 1);
    }

    #[test]
    fn crt_approx_fractional_targets_and_poles() {
        let cfg = SearchConfig::default();
        let pi7 = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        let two = primes_above(Ell::Three, &BigInt::from(2)).remove(0);
        let lambda = primes_above(Ell::Three, &BigInt::from(3)).remove(0);
        // prescribe a genuine pole: x ≡ gen⁻³ to order v ≥ −2 at π₇, while
        // x ≡ 1/2 mod 2⁴ (fractional target, unit denominator at (2))
        let g = CycElem::from_int(pi7.gen.clone());
        let t1 = g.pow(-3).unwrap();
        let t2 = CycElem::from_ratio(Ell::Three, 1, 2);
        let x = crt_approx(
            &[
                (pi7.clone(), t1.clone(), -2),
                (two.clone(), t2.clone(), 4),
                (lambda.clone(), CycElem::one(Ell::Three), 3),
            ],
            &cfg,
        )
        .unwrap();
        assert!(pi7.valuation(&x.sub(&t1)) >= -2);
        assert_eq!(pi7.valuation(&x), -3); // pole order forced by the target
        assert!(two.valuation(&x.sub(&t2)) >= 4);
        assert!(lambda.valuation(&x.sub(&CycElem::one(Ell::Three))) >= 3);
        // random triples of congruences, verified by valuation
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..60 {
            let mut constraints = Vec::new();
            for pl in [&pi7, &two, &lambda] {
                let t = CycElem::from_int(rand_cycint(&mut rng, Ell::Three, 40));
                let k = rng.gen_range(1..4);
                constraints.push(((*pl).clone(), t, k));
            }
            let x = crt_approx(&constraints, &cfg).unwrap();
            for (pl, t, k) in &constraints {
                let d = x.sub(t);
                assert!(d.is_zero() || pl.valuation(&d) >= *k);
            }
        }
    }
}
