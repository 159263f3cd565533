//! Places of K, valuations, residue fields, and power residue characters.
//!
//! For ℓ = 2 (K = ℚ) every rational prime gives one finite place, plus the
//! single real place.  For ℓ = 3 (K = ℚ(ζ₃), totally imaginary) the splitting
//! of a rational prime p is governed by p mod 3:
//!
//!   p ≡ 1 (mod 3)  — split: two places, found from the two roots of
//!                    x² + x + 1 mod p via gcd(p, ζ − r); e = f = 1;
//!   p ≡ 2 (mod 3)  — inert: one place with residue field 𝔽_{p²}; e = 1, f = 2;
//!   p = 3          — ramified: λ = 1 − ζ, λ² ∼ 3, e = 2, f = 1.
//!
//! The ℓth power residue symbol (a/𝔭)_ℓ at a tame place is read off from
//! red(a)^{(q−1)/ℓ} ∈ μ_ℓ ⊆ 𝔽_q^*, with exponents expressed against the fixed
//! primitive root ω = ζ (ℓ = 3) resp. ω = −1 (ℓ = 2); one global convention
//! keeps exponent bookkeeping consistent across all higher layers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, gcd, CycElem, CycInt, Ell};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Finite,
    Real,
}

/// A place of K.  Finite places carry their canonical prime generator (class
/// number one), residue characteristic p, ramification index e, and residue
/// degree f; the real place exists only for ℓ = 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place {
    pub ell: Ell,
    pub kind: PlaceKind,
    pub gen: CycInt,
    pub residue_char: BigInt,
    pub e: u32,
    pub f: u32,
}

impl Place {
    pub fn real() -> Place {
        Place {
            ell: Ell::Two,
            kind: PlaceKind::Real,
            gen: CycInt::zero(Ell::Two),
            residue_char: BigInt::zero(),
            e: 0,
            f: 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind == PlaceKind::Finite
    }

    /// A place is wild when it divides (ℓ): p = 2 for ℓ = 2, p = 3 for ℓ = 3.
    pub fn is_wild(&self) -> bool {
        self.is_finite() && self.residue_char == BigInt::from(self.ell.as_u32())
    }

    pub fn is_tame(&self) -> bool {
        self.is_finite() && !self.is_wild()
    }

    /// Residue field size q = p^f.
    pub fn residue_size(&self) -> BigInt {
        let mut q = BigInt::one();
        for _ in 0..self.f {
            q *= &self.residue_char;
        }
        q
    }

    /// The prime generator as a field element (a uniformizer).
    pub fn uniformizer(&self) -> CycElem {
        CycElem::from_int(self.gen.clone())
    }

    /// Normalized valuation v_𝔭 on K^*.  Panics on the real place or zero
    /// input (both are contract violations of internal callers; the checked
    /// variant is `try_valuation`).
    pub fn valuation(&self, x: &CycElem) -> i64 {
        self.try_valuation(x).expect("valuation of nonzero element at a finite place")
    }

    pub fn try_valuation(&self, x: &CycElem) -> Result<i64, Error> {
        if !self.is_finite() {
            return Err(Error::WrongPlaceKind("valuation at the real place".into()));
        }
        if x.is_zero() {
            return Err(Error::Precondition("valuation of zero".into()));
        }
        if x.ell() != self.ell {
            return Err(Error::EllMismatch);
        }
        Ok(arith::val_cycint(x.numer(), &self.gen) - arith::val_cycint(x.denom(), &self.gen))
    }

    /// Residue of ζ modulo this place, defined when f = 1 (split, ramified,
    /// and every ℓ = 2 place): gen = c₀ + c₁ζ ≡ 0 forces ζ ≡ −c₀/c₁; for
    /// ℓ = 2, ζ = −1 ≡ p − 1.
    fn zeta_residue(&self) -> BigInt {
        debug_assert!(self.is_finite() && self.f == 1);
        let p = &self.residue_char;
        match self.ell {
            Ell::Two => (p - 1i32).mod_floor(p),
            Ell::Three => {
                let c1 = self.gen.c1.mod_floor(p);
                let inv = c1.modpow(&(p - 2), p);
                (-(&self.gen.c0) * inv).mod_floor(p)
            }
        }
    }

    /// Reduce a 𝔭-integral ring element into the residue field.
    fn reduce_int(&self, x: &CycInt) -> ResidueElem {
        debug_assert!(self.is_finite());
        let p = &self.residue_char;
        let (a, b) = if self.f == 2 {
            (x.c0.mod_floor(p), x.c1.mod_floor(p))
        } else {
            ((&x.c0 + &x.c1 * self.zeta_residue()).mod_floor(p), BigInt::zero())
        };
        ResidueElem { place: self.clone(), a, b }
    }

    /// Reduction map red_𝔭: 𝒪_(𝔭) → 𝔽_q on field elements of valuation ≥ 0.
    pub fn reduce(&self, x: &CycElem) -> Result<ResidueElem, Error> {
        if !self.is_finite() {
            return Err(Error::WrongPlaceKind("reduction at the real place".into()));
        }
        if !x.is_zero() && self.valuation(x) < 0 {
            return Err(Error::Precondition(format!(
                "reduction of {x} with a pole at {}",
                self.name()
            )));
        }
        let n = self.reduce_int(x.numer());
        let d = self.reduce_int(x.denom());
        // v(x) ≥ 0 and num/den reduced ⇒ v(den) = 0 ⇒ d invertible.
        Ok(n.mul(&d.inv()))
    }

    /// Canonical place name: `p` when 𝔭 is the only place above p, `p,idx`
    /// (idx per the canonical order) when p splits, `real` for the real place.
    pub fn name(&self) -> String {
        match self.kind {
            PlaceKind::Real => "real".to_string(),
            PlaceKind::Finite => {
                let sibs = primes_above(self.ell, &self.residue_char);
                if sibs.len() == 1 {
                    format!("{}", self.residue_char)
                } else {
                    let idx = sibs.iter().position(|s| s == self).expect("place is above its p");
                    format!("{},{}", self.residue_char, idx)
                }
            }
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Place) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    /// Canonical ordering: finite places by (residue characteristic,
    /// lexicographic generator coordinates); the real place last.
    fn cmp(&self, other: &Place) -> Ordering {
        match (self.kind, other.kind) {
            (PlaceKind::Real, PlaceKind::Real) => Ordering::Equal,
            (PlaceKind::Real, PlaceKind::Finite) => Ordering::Greater,
            (PlaceKind::Finite, PlaceKind::Real) => Ordering::Less,
            (PlaceKind::Finite, PlaceKind::Finite) => self
                .residue_char
                .cmp(&other.residue_char)
                .then_with(|| self.gen.c0.cmp(&other.gen.c0))
                .then_with(|| self.gen.c1.cmp(&other.gen.c1)),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.kind == PlaceKind::Real {
            let mut st = ser.serialize_struct("Place", 1)?;
            st.serialize_field("name", "real")?;
            return st.end();
        }
        let gen = match self.ell {
            Ell::Two => vec![self.gen.c0.to_string()],
            Ell::Three => vec![self.gen.c0.to_string(), self.gen.c1.to_string()],
        };
        let mut st = ser.serialize_struct("Place", 5)?;
        st.serialize_field("name", &self.name())?;
        st.serialize_field("p", &self.residue_char.to_string())?;
        st.serialize_field("gen", &gen)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("f", &self.f)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Place, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            #[serde(default)]
            gen: Option<Vec<String>>,
        }
        let raw = Raw::deserialize(de)?;
        // The name plus the coordinate count of the generator pin the place;
        // the remaining serialized fields are redundant and re-derived.
        let ell = if raw.name == "real" {
            Ell::Two
        } else {
            match raw.gen.as_ref().map(|g| g.len()) {
                Some(1) => Ell::Two,
                Some(2) => Ell::Three,
                _ => return Err(D::Error::custom("place record lacks a generator")),
            }
        };
        parse_place_name(ell, &raw.name).map_err(D::Error::custom)
    }
}

/// All places of K above the rational prime p, in canonical order.
pub fn primes_above(ell: Ell, p: &BigInt) -> Vec<Place> {
    assert!(arith::is_prime(p), "primes_above needs a rational prime, got {p}");
    match ell {
        Ell::Two => vec![Place {
            ell,
            kind: PlaceKind::Finite,
            gen: CycInt::from_big(ell, p.clone()),
            residue_char: p.clone(),
            e: 1,
            f: 1,
        }],
        Ell::Three => {
            let three = BigInt::from(3);
            let rem = p.mod_floor(&three);
            if *p == three {
                // λ = 1 − ζ, the unique ramified prime: (3) = −ζ²λ².
                vec![Place {
                    ell,
                    kind: PlaceKind::Finite,
                    gen: CycInt::new(ell, BigInt::one(), BigInt::from(-1)),
                    residue_char: p.clone(),
                    e: 2,
                    f: 1,
                }]
            } else if rem == BigInt::one() {
                // split: the two roots of x² + x + 1 mod p are the elements of
                // order 3, found as n^{(p−1)/3} for the first base n that does
                // not collapse to 1.
                let exp = (p - 1) / 3;
                let mut root = BigInt::zero();
                for n in 2.. {
                    let g = BigInt::from(n).modpow(&exp, p);
                    if !g.is_one() {
                        root = g;
                        break;
                    }
                }
                let r2 = (&root * &root).mod_floor(p);
                let mut places: Vec<Place> = [root, r2]
                    .into_iter()
                    .map(|r| {
                        let g = gcd(
                            &CycInt::from_big(ell, p.clone()),
                            &CycInt::new(ell, -r, BigInt::one()),
                        );
                        debug_assert_eq!(g.norm(), *p);
                        Place {
                            ell,
                            kind: PlaceKind::Finite,
                            gen: g,
                            residue_char: p.clone(),
                            e: 1,
                            f: 1,
                        }
                    })
                    .collect();
                places.sort();
                places
            } else {
                // inert: residue field 𝔽_{p²} = 𝔽_p[ζ]/(ζ² + ζ + 1)
                vec![Place {
                    ell,
                    kind: PlaceKind::Finite,
                    gen: CycInt::from_big(ell, p.clone()),
                    residue_char: p.clone(),
                    e: 1,
                    f: 2,
                }]
            }
        }
    }
}

/// Parse a CLI place name: `real`, `p`, or `p,idx`.
pub fn parse_place_name(ell: Ell, s: &str) -> Result<Place, Error> {
    if s == "real" {
        if ell != Ell::Two {
            return Err(Error::WrongPlaceKind("no real place for ell = 3".into()));
        }
        return Ok(Place::real());
    }
    let (pstr, idx) = match s.split_once(',') {
        Some((a, b)) => {
            let idx: usize =
                b.trim().parse().map_err(|_| Error::Parse(format!("bad place index in '{s}'")))?;
            (a.trim(), Some(idx))
        }
        None => (s.trim(), None),
    };
    let p: BigInt = pstr.parse().map_err(|_| Error::Parse(format!("bad prime in '{s}'")))?;
    if !p.is_positive() || !arith::is_prime(&p) {
        return Err(Error::Precondition(format!("{p} is not a rational prime")));
    }
    let mut places = primes_above(ell, &p);
    match idx {
        None => {
            if places.len() == 1 {
                Ok(places.remove(0))
            } else {
                Err(Error::Precondition(format!(
                    "{p} splits; name a place as {p},0 or {p},1"
                )))
            }
        }
        Some(i) if i < places.len() => Ok(places.remove(i)),
        Some(i) => Err(Error::Precondition(format!("no place {p},{i}"))),
    }
}

/// An element of the residue field 𝔽_q of a finite place, in the canonical
/// representative (a, b) ↦ a + bζ with 0 ≤ a, b < p (b = 0 unless f = 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueElem {
    pub place: Place,
    pub a: BigInt,
    pub b: BigInt,
}

impl ResidueElem {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn one(place: &Place) -> ResidueElem {
        ResidueElem { place: place.clone(), a: BigInt::one(), b: BigInt::zero() }
    }

    pub fn mul(&self, o: &ResidueElem) -> ResidueElem {
        debug_assert_eq!(self.place, o.place);
        let p = &self.place.residue_char;
        if self.place.f == 2 {
            // (a₀ + a₁ζ)(b₀ + b₁ζ) mod (p, ζ² + ζ + 1)
            let t = (&self.b * &o.b).mod_floor(p);
            let a = (&self.a * &o.a - &t).mod_floor(p);
            let b = (&self.a * &o.b + &self.b * &o.a - &t).mod_floor(p);
            ResidueElem { place: self.place.clone(), a, b }
        } else {
            ResidueElem {
                place: self.place.clone(),
                a: (&self.a * &o.a).mod_floor(p),
                b: BigInt::zero(),
            }
        }
    }

    pub fn pow(&self, e: &BigInt) -> ResidueElem {
        debug_assert!(!e.is_negative());
        let mut base = self.clone();
        let mut acc = ResidueElem::one(&self.place);
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by Fermat: x^{q−2}.
    pub fn inv(&self) -> ResidueElem {
        debug_assert!(!self.is_zero());
        self.pow(&(self.place.residue_size() - 2))
    }
}

/// An element ω^exp of μ_ℓ, exponents mod ℓ against the fixed primitive root
/// ω (= ζ for ℓ = 3, = −1 for ℓ = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mu {
    pub ell: Ell,
    pub exp: u8,
}

impl Mu {
    pub fn from_exp(ell: Ell, k: i64) -> Mu {
        let l = ell.as_u32() as i64;
        Mu { ell, exp: k.rem_euclid(l) as u8 }
    }

    pub fn one(ell: Ell) -> Mu {
        Mu { ell, exp: 0 }
    }

    pub fn omega(ell: Ell) -> Mu {
        Mu { ell, exp: 1 }
    }

    pub fn is_trivial(&self) -> bool {
        self.exp == 0
    }

    pub fn mul(&self, o: &Mu) -> Mu {
        debug_assert_eq!(self.ell, o.ell);
        Mu::from_exp(self.ell, self.exp as i64 + o.exp as i64)
    }

    pub fn inverse(&self) -> Mu {
        Mu::from_exp(self.ell, -(self.exp as i64))
    }

    pub fn pow(&self, k: i64) -> Mu {
        Mu::from_exp(self.ell, self.exp as i64 * k)
    }

    /// ω^exp as an element of K (used when a symbol value feeds back into
    /// field arithmetic).
    pub fn as_elem(&self) -> CycElem {
        CycElem::zeta(self.ell).pow(self.exp as i64).expect("unit power")
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ell, self.exp) {
            (Ell::Two, 0) => write!(f, "1"),
            (Ell::Two, _) => write!(f, "-1"),
            (Ell::Three, 0) => write!(f, "1"),
            (Ell::Three, 1) => write!(f, "w"),
            (Ell::Three, _) => write!(f, "w^2"),
        }
    }
}

/// The ℓth power residue symbol (a/𝔭)_ℓ = ω^s, characterized by
/// red(a)^{(q−1)/ℓ} = red(ω)^s.  Requires a tame place and v_𝔭(a) = 0.
pub fn power_residue_symbol(a: &CycElem, place: &Place) -> Result<Mu, Error> {
    if !place.is_tame() {
        return Err(Error::WrongPlaceKind(format!(
            "power residue symbol needs a tame finite place, got {}",
            place.name()
        )));
    }
    if a.is_zero() || place.valuation(a) != 0 {
        return Err(Error::Precondition(format!(
            "power residue symbol needs a unit at {}",
            place.name()
        )));
    }
    let ell = place.ell;
    let q = place.residue_size();
    let exp = (&q - 1) / BigInt::from(ell.as_u32());
    let val = place.reduce(a)?.pow(&exp);
    let omega = place.reduce(&CycElem::zeta(ell))?;
    let mut cand = ResidueElem::one(place);
    for s in 0..ell.as_u32() {
        if val == cand {
            return Ok(Mu::from_exp(ell, s as i64));
        }
        cand = cand.mul(&omega);
    }
    unreachable!("a^((q-1)/l) must land in the mu_l generated by red(omega)")
}

/// Splitting class of an unramified place in the bi-Kummer extension
/// K(ℓ√a, ℓ√b)/K: the pair of triviality signs of the two power residue
/// symbols.  (+1, +1) means the Frobenius is trivial (𝔭 splits completely).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrobClass {
    pub i: i8,
    pub j: i8,
}

impl FrobClass {
    pub const TRIVIAL: FrobClass = FrobClass { i: 1, j: 1 };

    pub fn of(pair: (Mu, Mu)) -> FrobClass {
        FrobClass {
            i: if pair.0.is_trivial() { 1 } else { -1 },
            j: if pair.1.is_trivial() { 1 } else { -1 },
        }
    }

    pub fn all() -> [FrobClass; 4] {
        [
            FrobClass { i: 1, j: 1 },
            FrobClass { i: -1, j: -1 },
            FrobClass { i: 1, j: -1 },
            FrobClass { i: -1, j: 1 },
        ]
    }

    pub fn is_trivial(&self) -> bool {
        self.i == 1 && self.j == 1
    }
}

impl fmt::Display for FrobClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// The pair ((a/𝔭)_ℓ, (b/𝔭)_ℓ) classifying Frob_𝔭 in K(ℓ√a, ℓ√b)/K.
/// Requires 𝔭 unramified in that extension: tame and coprime to a and b.
pub fn frobenius_pair(place: &Place, a: &CycElem, b: &CycElem) -> Result<(Mu, Mu), Error> {
    if !place.is_tame() || place.valuation(a) != 0 || place.valuation(b) != 0 {
        return Err(Error::Precondition(format!(
            "frobenius_pair needs {} coprime to l, a, b",
            place.name()
        )));
    }
    Ok((power_residue_symbol(a, place)?, power_residue_symbol(b, place)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e3(a: i64, b: i64) -> CycElem {
        CycElem::from_int(CycInt::new(Ell::Three, BigInt::from(a), BigInt::from(b)))
    }

    #[test]
    fn splitting_types() {
        // 7 ≡ 1 mod 3: two places of norm 7, canonical generators 1−2ζ, 1+3ζ
        let ps = primes_above(Ell::Three, &BigInt::from(7));
        assert_eq!(ps.len(), 2);
        for p in &ps {
            assert_eq!(p.gen.norm(), BigInt::from(7));
            assert_eq!((p.e, p.f), (1, 1));
        }
        assert_eq!(ps[0].gen, CycInt::new(Ell::Three, BigInt::one(), BigInt::from(-2)));
        assert_eq!(ps[1].gen, CycInt::new(Ell::Three, BigInt::one(), BigInt::from(3)));
        assert_eq!(ps[0].name(), "7,0");
        // 2 ≡ 2 mod 3: inert, q = 4
        let ps = primes_above(Ell::Three, &BigInt::from(2));
        assert_eq!(ps.len(), 1);
        assert_eq!((ps[0].e, ps[0].f), (1, 2));
        assert_eq!(ps[0].residue_size(), BigInt::from(4));
        assert_eq!(ps[0].name(), "2");
        // 3: ramified, λ = 1 − ζ, e = 2
        let ps = primes_above(Ell::Three, &BigInt::from(3));
        assert_eq!(ps.len(), 1);
        let lam = &ps[0];
        assert_eq!((lam.e, lam.f), (2, 1));
        assert_eq!(lam.gen.norm(), BigInt::from(3));
        assert!(lam.is_wild());
        // efg consistency on a sample of primes
        for p in [5u32, 7, 11, 13, 31, 43, 61, 103] {
            let ps = primes_above(Ell::Three, &BigInt::from(p));
            let sum: u32 = ps.iter().map(|q| q.e * q.f).sum();
            assert_eq!(sum, 2, "efg mismatch over {p}");
        }
        // ℓ = 2: one finite place per prime
        let ps = primes_above(Ell::Two, &BigInt::from(5));
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].name(), "5");
    }

    #[test]
    fn valuations() {
        let lam = primes_above(Ell::Three, &BigInt::from(3)).remove(0);
        assert_eq!(lam.valuation(&e3(3, 0)), 2); // 3 = −ζ²λ²
        let pi = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        assert_eq!(pi.valuation(&e3(28, 0)), 1);
        assert_eq!(pi.valuation(&CycElem::one(Ell::Three)), 0);
        assert_eq!(pi.valuation(&CycElem::from_ratio(Ell::Three, 1, 7)), -1);
        // v(xy) = v(x) + v(y) on random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let x = e3(rng.gen_range(-50..50), rng.gen_range(-50..50));
            let y = e3(rng.gen_range(-50..50), rng.gen_range(-50..50));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            for pl in [&lam, &pi] {
                assert_eq!(pl.valuation(&x.mul(&y)), pl.valuation(&x) + pl.valuation(&y));
            }
        }
        assert!(Place::real().try_valuation(&CycElem::one(Ell::Two)).is_err());
    }

    #[test]
    fn reduction_map_is_a_ring_hom() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [5u32, 7, 13] {
            for pl in primes_above(Ell::Three, &BigInt::from(p)) {
                for _ in 0..200 {
                    let x = e3(rng.gen_range(-99..99), rng.gen_range(-99..99));
                    let y = e3(rng.gen_range(-99..99), rng.gen_range(-99..99));
                    let rx = pl.reduce(&x).unwrap();
                    let ry = pl.reduce(&y).unwrap();
                    assert_eq!(pl.reduce(&x.mul(&y)).unwrap(), rx.mul(&ry));
                }
            }
        }
        // ζ ≡ 4 at the first place above 7 (gen 1 − 2ζ), ζ ≡ 2 at the second
        let ps = primes_above(Ell::Three, &BigInt::from(7));
        assert_eq!(ps[0].reduce(&CycElem::zeta(Ell::Three)).unwrap().a, BigInt::from(4));
        assert_eq!(ps[1].reduce(&CycElem::zeta(Ell::Three)).unwrap().a, BigInt::from(2));
    }

    /// Brute-force oracle: (a/𝔭) is trivial iff x^ℓ ≡ a mod 𝔭 has a solution,
    /// by exhausting the whole residue field.
    fn residue_is_power(a: &CycElem, pl: &Place) -> bool {
        let ra = pl.reduce(a).unwrap();
        let p = pl.residue_char.to_i64().unwrap();
        let ell = BigInt::from(pl.ell.as_u32());
        let bound = if pl.f == 2 { p } else { 1 };
        for x0 in 0..p {
            for x1 in 0..bound {
                let cand = ResidueElem {
                    place: pl.clone(),
                    a: BigInt::from(x0),
                    b: BigInt::from(x1),
                };
                if cand.is_zero() {
                    continue;
                }
                if cand.pow(&ell) == ra {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn power_residue_symbol_examples() {
        let pi = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        // cubes kill the symbol
        for x in [2i64, 3, 5, 10] {
            let c = e3(x, 0).pow(3).unwrap();
            assert!(power_residue_symbol(&c, &pi).unwrap().is_trivial());
        }
        // 2^((7−1)/3) = 4 ≡ ζ mod π: symbol ω; and (4/π) = ω²
        assert_eq!(power_residue_symbol(&e3(2, 0), &pi).unwrap(), Mu::from_exp(Ell::Three, 1));
        assert_eq!(power_residue_symbol(&e3(4, 0), &pi).unwrap(), Mu::from_exp(Ell::Three, 2));
        assert!(!residue_is_power(&e3(2, 0), &pi));
        // ℓ = 2 sanity: (2/7) = 1, (3/7) = −1 (squares mod 7 are 1, 2, 4)
        let p7 = primes_above(Ell::Two, &BigInt::from(7)).remove(0);
        assert!(power_residue_symbol(&CycElem::from_i64(Ell::Two, 2), &p7).unwrap().is_trivial());
        assert!(!power_residue_symbol(&CycElem::from_i64(Ell::Two, 3), &p7).unwrap().is_trivial());
        // errors: wild place, nonzero valuation
        let lam = primes_above(Ell::Three, &BigInt::from(3)).remove(0);
        assert!(power_residue_symbol(&e3(2, 0), &lam).is_err());
        assert!(power_residue_symbol(&e3(7, 0), &pi).is_err());
    }

    #[test]
    fn symbol_multiplicative_and_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut places = vec![
            primes_above(Ell::Three, &BigInt::from(7)).remove(0),
            primes_above(Ell::Three, &BigInt::from(5)).remove(0), // inert, q = 25
            primes_above(Ell::Three, &BigInt::from(13)).remove(1),
        ];
        places.push(primes_above(Ell::Two, &BigInt::from(11)).remove(0));
        for pl in &places {
            let ell = pl.ell;
            let mut tested = 0;
            while tested < 300 {
                let x = CycElem::from_int(CycInt::new(
                    ell,
                    BigInt::from(rng.gen_range(-80i64..80)),
                    BigInt::from(if ell == Ell::Three { rng.gen_range(-80i64..80) } else { 0 }),
                ));
                let y = CycElem::from_int(CycInt::new(
                    ell,
                    BigInt::from(rng.gen_range(-80i64..80)),
                    BigInt::from(if ell == Ell::Three { rng.gen_range(-80i64..80) } else { 0 }),
                ));
                if x.is_zero() || y.is_zero() || pl.valuation(&x) != 0 || pl.valuation(&y) != 0 {
                    continue;
                }
                tested += 1;
                let sx = power_residue_symbol(&x, pl).unwrap();
                let sy = power_residue_symbol(&y, pl).unwrap();
                let sxy = power_residue_symbol(&x.mul(&y), pl).unwrap();
                assert_eq!(sx.mul(&sy), sxy);
            }
        }
        // triviality ⟺ solvability, exhaustively over small residue fields
        for pl in &places {
            if pl.residue_size() > BigInt::from(200) {
                continue;
            }
            let mut checked = 0;
            let mut x0 = 1i64;
            while checked < 25 {
                let x = CycElem::from_int(CycInt::new(
                    pl.ell,
                    BigInt::from(x0),
                    BigInt::from(if pl.ell == Ell::Three { (x0 * 3) % 11 } else { 0 }),
                ));
                x0 += 1;
                if x.is_zero() || pl.valuation(&x) != 0 {
                    continue;
                }
                checked += 1;
                let s = power_residue_symbol(&x, pl).unwrap();
                assert_eq!(s.is_trivial(), residue_is_power(&x, pl), "at {} for {x}", pl.name());
            }
        }
    }

    #[test]
    fn frobenius_classes_partition() {
        let a = e3(28, 0);
        let b = e3(55, 0);
        let mut seen = std::collections::BTreeMap::new();
        for p in [13u32, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103, 109, 127, 139] {
            for pl in primes_above(Ell::Three, &BigInt::from(p)) {
                let pair = frobenius_pair(&pl, &a, &b).unwrap();
                let class = FrobClass::of(pair);
                assert!(FrobClass::all().contains(&class));
                *seen.entry(class).or_insert(0usize) += 1;
            }
        }
        // all four classes occur among small split primes
        assert_eq!(seen.len(), 4, "classes seen: {seen:?}");
        // ramified-in-L inputs are rejected
        let pi = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        assert!(frobenius_pair(&pi, &a, &b).is_err());
    }

    #[test]
    fn place_names_round_trip() {
        for (ell, name) in [
            (Ell::Three, "7,0"),
            (Ell::Three, "7,1"),
            (Ell::Three, "2"),
            (Ell::Three, "3"),
            (Ell::Two, "2"),
            (Ell::Two, "13"),
            (Ell::Two, "real"),
        ] {
            let pl = parse_place_name(ell, name).unwrap();
            assert_eq!(pl.name(), name);
        }
        assert!(parse_place_name(Ell::Three, "7").is_err()); // ambiguous
        assert!(parse_place_name(Ell::Three, "real").is_err());
        assert!(parse_place_name(Ell::Two, "15").is_err());
    }
}
