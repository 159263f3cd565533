//! Global norm questions for the Kummer extensions K(ℓ√y)/K.
//!
//! For cyclic extensions of prime degree the Hasse norm theorem is exact:
//! x ∈ N(K(ℓ√y)^*) iff x is a norm in every completion, iff every Hilbert
//! symbol (x, y)_𝔭 is trivial.  The obstruction set Δ_{x,y} of places with
//! nontrivial symbol is finite (it sits inside the support of ℓ·x·y and the
//! real place), computable, and empty exactly when x is a norm.
//!
//! The search direction is handled by `norm_solve`, which enumerates tuples
//! (t₀, …, t_{ℓ−1}) ∈ K^ℓ in a deterministic spiral until
//! N(Σ tᵢ α^i) = x with α = ℓ√y, and by `norm_form_coeffs`, which expands
//! the norm form N(Σ tᵢ wᵢ) = Π_k (Σ tᵢ σ^k(wᵢ)) symbolically for an
//! arbitrary K-basis w of K[s]/(s^ℓ − y), σ(s) = ζs.

use std::collections::BTreeMap;

use crate::arith::{factor, CycElem, CycInt, Ell};
use crate::places::Place;
use crate::symbols::hilbert_symbol_support;
use crate::{Error, SearchConfig};

/// Outcome of the Hasse norm test.
#[derive(Debug, Clone)]
pub struct NormVerdict {
    pub is_norm: bool,
    /// Places where the local norm equation fails, in canonical order.
    pub obstructions: Vec<Place>,
}

/// Δ_{x,y}: the places at which (x, y)_𝔭 ≠ 1, in canonical order.
pub fn delta(x: &CycElem, y: &CycElem) -> Result<Vec<Place>, Error> {
    Ok(hilbert_symbol_support(x, y)?
        .into_iter()
        .map(|(pl, _)| pl)
        .collect())
}

/// Hasse norm test: is x a norm from K(ℓ√y)?  (When y is itself an ℓth
/// power the extension is trivial and the answer is always yes — every
/// symbol vanishes.)
pub fn is_norm(x: &CycElem, y: &CycElem) -> Result<NormVerdict, Error> {
    let obstructions = delta(x, y)?;
    Ok(NormVerdict { is_norm: obstructions.is_empty(), obstructions })
}

/// N(t₀ + t₁α + … + t_{ℓ−1}α^{ℓ−1}) with α^ℓ = y, by the closed norm forms
/// t₀² − y t₁² and t₀³ + y t₁³ + y² t₂³ − 3y t₀t₁t₂.
pub fn norm_value(y: &CycElem, t: &[CycElem]) -> Result<CycElem, Error> {
    let ell = y.ell();
    if t.len() != ell.as_u32() as usize {
        return Err(Error::Precondition(format!(
            "norm tuple must have {} coordinates",
            ell.as_u32()
        )));
    }
    if t.iter().any(|c| c.ell() != ell) {
        return Err(Error::EllMismatch);
    }
    match ell {
        Ell::Two => Ok(t[0].mul(&t[0]).sub(&y.mul(&t[1]).mul(&t[1]))),
        Ell::Three => {
            let cube = |c: &CycElem| c.mul(c).mul(c);
            let y2 = y.mul(y);
            let mixed = y.mul(&t[0]).mul(&t[1]).mul(&t[2]).mul(&CycElem::from_i64(ell, 3));
            Ok(cube(&t[0])
                .add(&y.mul(&cube(&t[1])))
                .add(&y2.mul(&cube(&t[2])))
                .sub(&mixed))
        }
    }
}

/// Search for an explicit tuple with N(Σ tᵢ α^i) = x.
///
/// Enumeration order (pinned by tests): numerator index shells s = 0, 1, 2, …
/// by maximum index, lexicographic within a shell, index k ↦ value
/// 0, 1, −1, 2, −2, …; for each shell denominators d = 1, 2, … up to the
/// height bound.  Numerators are bounded by the height bound as well.
pub fn norm_solve(x: &CycElem, y: &CycElem, cfg: &SearchConfig) -> Result<Vec<CycElem>, Error> {
    let ell = x.ell();
    if y.ell() != ell {
        return Err(Error::EllMismatch);
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::Precondition("norm_solve requires nonzero arguments".into()));
    }
    let l = ell.as_u32() as usize;
    let value = |k: u64| -> i64 {
        if k % 2 == 1 {
            ((k + 1) / 2) as i64
        } else {
            -((k / 2) as i64)
        }
    };
    let max_shell = 2 * cfg.height_bound;
    for s in 0..=max_shell {
        // lexicographic walk over [0..=s]^l keeping only max-index = s tuples
        let base = s + 1;
        let mut idx = vec![0u64; l];
        loop {
            if idx.iter().any(|&i| i == s) {
                for d in 1..=cfg.height_bound {
                    let den = CycElem::from_i64(ell, d as i64);
                    let t: Vec<CycElem> = idx
                        .iter()
                        .map(|&i| CycElem::from_i64(ell, value(i)).div(&den))
                        .collect::<Result<_, _>>()?;
                    if &norm_value(y, &t)? == x {
                        return Ok(t);
                    }
                }
            }
            // odometer, most significant digit first (lex order)
            let mut pos = l;
            while pos > 0 {
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < base {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no norm preimage of {x} from K(ℓ√{y}) within height {}",
        cfg.height_bound
    )))
}

/// Exact ℓth root in K, if one exists: all exponents in the prime
/// factorization must be divisible by ℓ and the residual unit must be the
/// ℓth power of a unit (±1 are the unit cubes of ℤ[ζ]; 1 is the unit square
/// of ℤ).
pub fn lth_root(x: &CycElem) -> Result<Option<CycElem>, Error> {
    let ell = x.ell();
    if x.is_zero() {
        return Ok(Some(CycElem::zero(ell)));
    }
    let l = ell.as_u32() as i64;
    let f = factor(x)?;
    let mut root = CycElem::one(ell);
    for (pl, e) in &f.factors {
        if e.rem_euclid(l) != 0 {
            return Ok(None);
        }
        root = root.mul(&pl.uniformizer().pow(e / l)?);
    }
    let unit_root = if f.unit.is_one() {
        CycInt::one(ell)
    } else if f.unit == CycInt::one(ell).neg() && ell == Ell::Three {
        CycInt::one(ell).neg() // (−1)³ = −1
    } else {
        return Ok(None); // −1 is not a square; ±ζ^{±1} are not cubes
    };
    root = root.mul(&CycElem::from_int(unit_root));
    debug_assert_eq!(root.pow(l).unwrap(), *x);
    Ok(Some(root))
}

/// Is x an ℓth power in K^*∪{0}?
pub fn is_lth_power(x: &CycElem) -> Result<bool, Error> {
    Ok(lth_root(x)?.is_some())
}

/// The fully expanded norm form: all C(2ℓ−1, ℓ) degree-ℓ monomials in
/// t₀, …, t_{ℓ−1} in descending lexicographic order, each with its
/// coefficient in K (zero coefficients included).
#[derive(Debug, Clone)]
pub struct NormForm {
    pub ell: Ell,
    pub monomials: Vec<(Vec<u32>, CycElem)>,
}

impl NormForm {
    /// Evaluate the form at a tuple.
    pub fn eval(&self, t: &[CycElem]) -> Result<CycElem, Error> {
        let l = self.ell.as_u32() as usize;
        if t.len() != l {
            return Err(Error::Precondition(format!("norm form takes {l} arguments")));
        }
        let mut acc = CycElem::zero(self.ell);
        for (exps, coeff) in &self.monomials {
            if coeff.is_zero() {
                continue;
            }
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                term = term.mul(&t[i].pow(e as i64)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

/// The standard power basis 1, α, …, α^{ℓ−1} as a basis matrix.
pub fn identity_basis(ell: Ell) -> Vec<Vec<CycElem>> {
    let l = ell.as_u32() as usize;
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    if i == j {
                        CycElem::one(ell)
                    } else {
                        CycElem::zero(ell)
                    }
                })
                .collect()
        })
        .collect()
}

/// Expand N(Σᵢ tᵢ wᵢ) over K where wᵢ = Σⱼ basis[i][j]·α^j, α^ℓ = y, by
/// multiplying the ℓ conjugate linear forms in K[t₀, …][s]/(s^ℓ − y) with
/// σ(s) = ζs.  The product is Galois-invariant, so all positive s-coordinates
/// must cancel — this is checked, not assumed.
pub fn norm_form_coeffs(y: &CycElem, basis: &[Vec<CycElem>]) -> Result<NormForm, Error> {
    let ell = y.ell();
    let l = ell.as_u32() as usize;
    if y.is_zero() {
        return Err(Error::Precondition("norm form needs y ≠ 0".into()));
    }
    if basis.len() != l || basis.iter().any(|row| row.len() != l) {
        return Err(Error::Precondition(format!("basis must be an {l}×{l} matrix")));
    }
    // polynomial in the tᵢ with coefficients in K[s]/(s^ℓ − y):
    // monomial exponent vector → s-coordinate vector
    type Poly = BTreeMap<Vec<u32>, Vec<CycElem>>;
    let zeta = CycElem::zeta(ell);
    let smul = |a: &[CycElem], b: &[CycElem]| -> Vec<CycElem> {
        let mut out = vec![CycElem::zero(ell); l];
        for i in 0..l {
            for j in 0..l {
                let prod = a[i].mul(&b[j]);
                if i + j < l {
                    out[i + j] = out[i + j].add(&prod);
                } else {
                    out[i + j - l] = out[i + j - l].add(&prod.mul(y));
                }
            }
        }
        out
    };
    let mut product: Poly = BTreeMap::new();
    let mut one_coord = vec![CycElem::zero(ell); l];
    one_coord[0] = CycElem::one(ell);
    product.insert(vec![0; l], one_coord);
    for k in 0..l {
        // the k-th conjugate linear form Σᵢ tᵢ Σⱼ basis[i][j] ζ^{kj} s^j
        let mut form: Poly = BTreeMap::new();
        for (i, row) in basis.iter().enumerate() {
            let mut exps = vec![0u32; l];
            exps[i] = 1;
            let coords: Vec<CycElem> = row
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let res: Result<CycElem, Error> =
                        Ok(c.mul(&zeta.pow((k * j) as i64)?));
                    res
                })
                .collect::<Result<_, _>>()?;
            form.insert(exps, coords);
        }
        let mut next: Poly = BTreeMap::new();
        for (m1, c1) in &product {
            for (m2, c2) in &form {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let prod = smul(c1, c2);
                match next.get_mut(&m) {
                    Some(acc) => {
                        for (slot, val) in acc.iter_mut().zip(&prod) {
                            *slot = slot.add(val);
                        }
                    }
                    None => {
                        next.insert(m, prod);
                    }
                }
            }
        }
        product = next;
    }
    // Galois invariance: no residual α-component
    for (m, coords) in &product {
        for c in &coords[1..] {
            if !c.is_zero() {
                return Err(Error::Precondition(format!(
                    "norm form expansion left an α-component at monomial {m:?}"
                )));
            }
        }
    }
    // every degree-ℓ monomial, descending lex
    let mut all_exps: Vec<Vec<u32>> = Vec::new();
    let mut stack = vec![(Vec::<u32>::new(), ell.as_u32())];
    while let Some((prefix, rem)) = stack.pop() {
        if prefix.len() == l - 1 {
            let mut e = prefix.clone();
            e.push(rem);
            all_exps.push(e);
            continue;
        }
        for take in 0..=rem {
            let mut e = prefix.clone();
            e.push(take);
            stack.push((e, rem - take));
        }
    }
    all_exps.sort();
    all_exps.reverse();
    let monomials = all_exps
        .into_iter()
        .map(|e| {
            let coeff = product
                .get(&e)
                .map(|c| c[0].clone())
                .unwrap_or_else(|| CycElem::zero(ell));
            (e, coeff)
        })
        .collect();
    Ok(NormForm { ell, monomials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::primes_above;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e3(a: i64, b: i64) -> CycElem {
        CycElem::from_int(CycInt::new(Ell::Three, BigInt::from(a), BigInt::from(b)))
    }

    fn e2(a: i64) -> CycElem {
        CycElem::from_i64(Ell::Two, a)
    }

    #[test]
    fn hasse_obstructions_match_known_cases() {
        // 3 is not a norm from ℚ(√−1): fails exactly at 2 and 3
        let v = is_norm(&e2(3), &e2(-1)).unwrap();
        assert!(!v.is_norm);
        let names: Vec<String> = v.obstructions.iter().map(|p| p.name()).collect();
        assert_eq!(names, vec!["2", "3"]);
        // 2 is not a norm from ℚ(ζ)(∛7): fails exactly at the two places over 7
        let v = is_norm(&e3(2, 0), &e3(7, 0)).unwrap();
        assert!(!v.is_norm);
        let names: Vec<String> = v.obstructions.iter().map(|p| p.name()).collect();
        assert_eq!(names, vec!["7,0", "7,1"]);
        // obstruction count: Δ never has exactly one element (reciprocity)
        assert_ne!(v.obstructions.len(), 1);
    }

    #[test]
    fn norms_constructed_forward_are_recognized() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for ell in [Ell::Two, Ell::Three] {
            let l = ell.as_u32() as usize;
            for _ in 0..25 {
                let y = loop {
                    let c = CycElem::from_int(CycInt::new(
                        ell,
                        BigInt::from(rng.gen_range(-9i64..=9)),
                        BigInt::from(if ell == Ell::Three {
                            rng.gen_range(-9i64..=9)
                        } else {
                            0
                        }),
                    ));
                    if !c.is_zero() {
                        break c;
                    }
                };
                let t: Vec<CycElem> = (0..l)
                    .map(|_| CycElem::from_i64(ell, rng.gen_range(-3i64..=3)))
                    .collect();
                let x = norm_value(&y, &t).unwrap();
                if x.is_zero() {
                    continue;
                }
                let v = is_norm(&x, &y).unwrap();
                assert!(
                    v.is_norm,
                    "constructed norm rejected: x = {x}, y = {y}, obstructions {:?}",
                    v.obstructions.iter().map(|p| p.name()).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn delta_is_symmetric_and_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for ell in [Ell::Two, Ell::Three] {
            for _ in 0..40 {
                let mut pick = || loop {
                    let c = CycElem::from_int(CycInt::new(
                        ell,
                        BigInt::from(rng.gen_range(-50i64..=50)),
                        BigInt::from(if ell == Ell::Three {
                            rng.gen_range(-50i64..=50)
                        } else {
                            0
                        }),
                    ));
                    if !c.is_zero() {
                        break c;
                    }
                };
                let x = pick();
                let y = pick();
                let dxy = delta(&x, &y).unwrap();
                let dyx = delta(&y, &x).unwrap();
                assert_eq!(dxy, dyx);
                assert_ne!(dxy.len(), 1, "Δ cannot be a singleton");
            }
        }
    }

    #[test]
    fn norm_solve_pinned_example() {
        let cfg = SearchConfig::default();
        let t = norm_solve(&e2(7), &e2(2), &cfg).unwrap();
        assert_eq!(t, vec![e2(3), e2(1)]);
    }

    #[test]
    fn norm_solve_round_trips() {
        let mut cfg = SearchConfig::default();
        cfg.height_bound = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for ell in [Ell::Two, Ell::Three] {
            let l = ell.as_u32() as usize;
            for _ in 0..8 {
                let y = CycElem::from_i64(ell, rng.gen_range(2i64..=7));
                let t: Vec<CycElem> =
                    (0..l).map(|_| CycElem::from_i64(ell, rng.gen_range(-2i64..=2))).collect();
                let x = norm_value(&y, &t).unwrap();
                if x.is_zero() {
                    continue;
                }
                let found = norm_solve(&x, &y, &cfg).unwrap();
                assert_eq!(norm_value(&y, &found).unwrap(), x);
            }
        }
    }

    #[test]
    fn roots_of_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for ell in [Ell::Two, Ell::Three] {
            let l = ell.as_u32() as i64;
            for _ in 0..40 {
                let x = loop {
                    let c = CycElem::from_ratio(
                        ell,
                        rng.gen_range(-30i64..=30),
                        rng.gen_range(1i64..=20),
                    );
                    if !c.is_zero() {
                        break c;
                    }
                };
                let p = x.pow(l).unwrap();
                let r = lth_root(&p).unwrap().expect("power must have a root");
                assert_eq!(r.pow(l).unwrap(), p);
            }
        }
        // specific values
        assert_eq!(lth_root(&e2(4)).unwrap(), Some(e2(2)));
        assert_eq!(lth_root(&e2(-4)).unwrap(), None);
        assert_eq!(lth_root(&CycElem::from_ratio(Ell::Two, 4, 9)).unwrap(),
                   Some(CycElem::from_ratio(Ell::Two, 2, 3)));
        assert_eq!(lth_root(&e3(8, 0)).unwrap(), Some(e3(2, 0)));
        assert_eq!(lth_root(&e3(-1, 0)).unwrap(), Some(e3(-1, 0)));
        // ζ is not the cube of any unit of ℤ[ζ]
        assert_eq!(lth_root(&CycElem::zeta(Ell::Three)).unwrap(), None);
        assert!(!is_lth_power(&e3(2, 0)).unwrap());
        assert!(is_lth_power(&CycElem::zero(Ell::Three)).unwrap());
    }

    #[test]
    fn power_detection_matches_local_everywhere() {
        // a global ℓth power is an ℓth power in every completion; a non-power
        // fails at some small place (not a proof, but a strong consistency check)
        use crate::symbols::is_local_power;
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let lam = crate::symbols::wild_place(Ell::Three);
        let pi = primes_above(Ell::Three, &BigInt::from(7)).remove(0);
        for _ in 0..30 {
            let x = loop {
                let c = CycElem::from_int(CycInt::new(
                    Ell::Three,
                    BigInt::from(rng.gen_range(-40i64..=40)),
                    BigInt::from(rng.gen_range(-40i64..=40)),
                ));
                if !c.is_zero() {
                    break c;
                }
            };
            if is_lth_power(&x).unwrap() {
                assert!(is_local_power(&x, &lam).unwrap());
                assert!(is_local_power(&x, &pi).unwrap());
            }
        }
    }

    #[test]
    fn norm_form_identity_basis() {
        let y = e3(5, 1);
        let form = norm_form_coeffs(&y, &identity_basis(Ell::Three)).unwrap();
        assert_eq!(form.monomials.len(), 10); // C(5, 3)
        let get = |e: &[u32]| -> CycElem {
            form.monomials
                .iter()
                .find(|(m, _)| m == e)
                .map(|(_, c)| c.clone())
                .expect("monomial present")
        };
        assert!(get(&[3, 0, 0]).is_one());
        assert_eq!(get(&[0, 3, 0]), y);
        assert_eq!(get(&[0, 0, 3]), y.mul(&y));
        assert_eq!(get(&[1, 1, 1]), y.mul(&CycElem::from_i64(Ell::Three, -3)));
        // descending lex ordering pinned
        assert_eq!(form.monomials[0].0, vec![3, 0, 0]);
        assert_eq!(form.monomials[9].0, vec![0, 0, 3]);
        // quadratic case: t₀² − y t₁²
        let y2 = e2(7);
        let form2 = norm_form_coeffs(&y2, &identity_basis(Ell::Two)).unwrap();
        assert_eq!(form2.monomials.len(), 3);
        assert!(form2.monomials[0].1.is_one());
        assert!(form2.monomials[1].1.is_zero());
        assert_eq!(form2.monomials[2].1, y2.neg());
    }

    #[test]
    fn norm_form_scaled_basis() {
        let y = e3(2, 0);
        let mut basis = identity_basis(Ell::Three);
        basis[0][0] = e3(2, 0);
        let form = norm_form_coeffs(&y, &basis).unwrap();
        let get = |e: &[u32]| -> CycElem {
            form.monomials.iter().find(|(m, _)| m == e).map(|(_, c)| c.clone()).unwrap()
        };
        // w₀ = 2 scales t₀³ by 8 and the mixed term by 2
        assert_eq!(get(&[3, 0, 0]), e3(8, 0));
        assert_eq!(get(&[1, 1, 1]), y.mul(&CycElem::from_i64(Ell::Three, -6)));
    }

    #[test]
    fn norm_form_agrees_with_norm_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for ell in [Ell::Two, Ell::Three] {
            let l = ell.as_u32() as usize;
            for _ in 0..15 {
                let y = loop {
                    let c = CycElem::from_int(CycInt::new(
                        ell,
                        BigInt::from(rng.gen_range(-9i64..=9)),
                        BigInt::from(if ell == Ell::Three {
                            rng.gen_range(-9i64..=9)
                        } else {
                            0
                        }),
                    ));
                    if !c.is_zero() {
                        break c;
                    }
                };
                let form = norm_form_coeffs(&y, &identity_basis(ell)).unwrap();
                let t: Vec<CycElem> = (0..l)
                    .map(|_| {
                        CycElem::from_ratio(ell, rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4))
                    })
                    .collect();
                assert_eq!(form.eval(&t).unwrap(), norm_value(&y, &t).unwrap());
            }
        }
    }

    #[test]
    fn norm_form_random_basis_is_equivalent_up_to_substitution() {
        // N_B(t) = N(Σ tᵢwᵢ) must equal norm_value(y, B^T t) for any basis B
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let ell = Ell::Three;
        let y = e3(3, 1);
        for _ in 0..6 {
            let basis: Vec<Vec<CycElem>> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| CycElem::from_i64(ell, rng.gen_range(-2i64..=2)))
                        .collect()
                })
                .collect();
            let form = match norm_form_coeffs(&y, &basis) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let t: Vec<CycElem> =
                (0..3).map(|_| CycElem::from_i64(ell, rng.gen_range(-3i64..=3))).collect();
            // substitute: coordinates of Σ tᵢwᵢ in the power basis
            let mut coords = vec![CycElem::zero(ell); 3];
            for (i, row) in basis.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    coords[j] = coords[j].add(&t[i].mul(c));
                }
            }
            assert_eq!(form.eval(&t).unwrap(), norm_value(&y, &coords).unwrap());
        }
    }
}
