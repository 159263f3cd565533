//! End-to-end self-test battery.
//!
//! Nine numbered checks exercise the whole stack against independent oracles:
//! reciprocity vs. the truncated local norm-equation solver at the wild place,
//! the bilinear identities of the Hilbert symbol, the Hasse norm test against
//! bounded brute-force solving, the place-set partitions behind the Φ/Ψ
//! machinery, additive J-decompositions, certificate round trips with
//! adversarial fuzzing, Δ-integrality of trace-set translates, the expanded
//! cubic norm form, and the non-power witness pipeline.
//!
//! Every check is deterministic given [`SearchConfig::seed`]; the reports
//! carry a pass flag, a human-readable detail line, and wall-clock time, so
//! the CLI (`cyclonorm selftest`) and the integration tests can share one
//! implementation.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{check_t_inclusion, sample_norm_one_traces, AlgebraParams};
use crate::arith::{CycElem, CycInt, Ell};
use crate::dioph::{
    build_certificate, classify, find_p, fix_ab, j_decompose, member, r_class_places,
    verify_certificate, Certificate, Params, SetQuery,
};
use crate::norms::{
    delta, identity_basis, is_lth_power, is_norm, lth_root, norm_form_coeffs, norm_solve,
    norm_value,
};
use crate::places::{frobenius_pair, power_residue_symbol, primes_above, FrobClass, Mu, Place};
use crate::symbols::{
    hilbert_symbol_support, is_local_power, local_class_reps, prescribe_symbols, wild_place,
    wild_split_oracle, SymbolConstraint,
};
use crate::{Error, SearchConfig};

/// Outcome of one numbered check.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

fn run(name: &str, body: impl FnOnce() -> Result<String, String>) -> CriterionReport {
    let started = Instant::now();
    let outcome = body();
    CriterionReport {
        name: name.to_string(),
        pass: outcome.is_ok(),
        detail: match outcome {
            Ok(s) => s,
            Err(s) => s,
        },
        millis: started.elapsed().as_millis(),
    }
}

fn s(e: Error) -> String {
    e.to_string()
}

/// Random nonzero element with integer coordinates in [−bound, bound].
fn random_elem(rng: &mut ChaCha8Rng, ell: Ell, bound: i64) -> CycElem {
    loop {
        let c0 = rng.gen_range(-bound..=bound);
        let c1 = if ell == Ell::Three { rng.gen_range(-bound..=bound) } else { 0 };
        let x = CycElem::from_int(CycInt::new(ell, BigInt::from(c0), BigInt::from(c1)));
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random nonzero product of the given primes with exponents in [−2, 2],
/// optionally twisted by a unit.
fn random_rational(rng: &mut ChaCha8Rng, ell: Ell, primes: &[i64]) -> CycElem {
    let mut num = 1i64;
    let mut den = 1i64;
    for p in primes {
        let e: i32 = rng.gen_range(-2..=2);
        if e >= 0 {
            num *= p.pow(e as u32);
        } else {
            den *= p.pow((-e) as u32);
        }
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let base = CycElem::from_ratio(ell, sign * num, den);
    if ell == Ell::Three && rng.gen_bool(0.3) {
        base.mul(&CycElem::zeta(ell))
    } else {
        base
    }
}

// ---------------------------------------------------------------------------
// 1. wild reciprocity vs. the local norm-equation oracle
// ---------------------------------------------------------------------------

pub fn criterion_1(cfg: &SearchConfig) -> CriterionReport {
    run("wild symbol by reciprocity vs local norm oracle (ℓ = 3)", || {
        let ell = Ell::Three;
        let w = wild_place(ell);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xA1));
        let mut checked = 0u32;
        while checked < 200 {
            let a = random_elem(&mut rng, ell, 1000);
            let b = random_elem(&mut rng, ell, 1000);
            let forced = hilbert_symbol_support(&a, &b)
                .map_err(s)?
                .into_iter()
                .find(|(pl, _)| *pl == w)
                .map(|(_, m)| m)
                .unwrap_or_else(|| Mu::one(ell));
            let local = wild_split_oracle(&a, &b).map_err(s)?;
            if forced.is_trivial() != local {
                return Err(format!(
                    "disagreement at pair #{checked}: a = {a}, b = {b}: reciprocity says {}, oracle says {}",
                    forced.is_trivial(),
                    local
                ));
            }
            checked += 1;
        }
        Ok(format!("{checked}/200 random pairs: reciprocity-forced wild symbol ⟺ local solver"))
    })
}

// ---------------------------------------------------------------------------
// 2. symbol algebra and non-degeneracy of the local pairings
// ---------------------------------------------------------------------------

pub fn criterion_2(cfg: &SearchConfig) -> CriterionReport {
    run("symbol bilinearity, antisymmetry, special values, pairing tables", || {
        let mut triples = 0u32;
        for ell in [Ell::Three, Ell::Two] {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xB2));
            let support_map = |u: &CycElem, v: &CycElem| -> Result<Vec<(Place, Mu)>, String> {
                hilbert_symbol_support(u, v).map_err(s)
            };
            let lookup = |m: &[(Place, Mu)], pl: &Place| -> Mu {
                m.iter().find(|(q, _)| q == pl).map(|(_, v)| v.clone()).unwrap_or_else(|| Mu::one(ell))
            };
            for i in 0..1000 {
                let x = random_elem(&mut rng, ell, 30);
                let y = random_elem(&mut rng, ell, 30);
                let z = random_elem(&mut rng, ell, 30);
                let yz = y.mul(&z);
                let m_xy = support_map(&x, &y)?;
                let m_xz = support_map(&x, &z)?;
                let m_xyz = support_map(&x, &yz)?;
                let mut places: BTreeSet<Place> = BTreeSet::new();
                for (pl, _) in m_xy.iter().chain(&m_xz).chain(&m_xyz) {
                    places.insert(pl.clone());
                }
                for pl in &places {
                    let lhs = lookup(&m_xy, pl).mul(&lookup(&m_xz, pl));
                    if lhs != lookup(&m_xyz, pl) {
                        return Err(format!(
                            "bilinearity fails at {} for triple #{i} (ℓ = {}): ({x}, {y})({x}, {z}) ≠ ({x}, {}·{})",
                            pl.name(),
                            ell.as_u32(),
                            y,
                            z
                        ));
                    }
                }
                let m_yx = support_map(&y, &x)?;
                let mut anti: BTreeSet<Place> = BTreeSet::new();
                for (pl, _) in m_xy.iter().chain(&m_yx) {
                    anti.insert(pl.clone());
                }
                for pl in &anti {
                    if !lookup(&m_xy, pl).mul(&lookup(&m_yx, pl)).is_trivial() {
                        return Err(format!(
                            "antisymmetry fails at {} (ℓ = {}): ({x}, {y})({y}, {x}) ≠ 1",
                            pl.name(),
                            ell.as_u32()
                        ));
                    }
                }
                let special = match ell {
                    Ell::Three => support_map(&x, &x)?,
                    Ell::Two => support_map(&x, &x.neg())?,
                };
                if !special.is_empty() {
                    return Err(format!(
                        "special value fails (ℓ = {}): x = {x} has a nontrivial symbol at {}",
                        ell.as_u32(),
                        special[0].0.name()
                    ));
                }
                triples += 1;
            }
        }

        // non-degeneracy of the pairing tables at the small places
        let mut tables = 0u32;
        for ell in [Ell::Three, Ell::Two] {
            let mut pls: Vec<Place> = vec![wild_place(ell)];
            for n in [2i64, 5, 7, 13] {
                pls.extend(
                    primes_above(ell, &BigInt::from(n)).into_iter().filter(|pl| pl.is_tame()),
                );
            }
            for pl in pls {
                let table = local_class_reps(&pl).map_err(s)?;
                let n = table.reps.len();
                let mut trivial_rows = 0usize;
                for i in 0..n {
                    let row_trivial = (0..n).all(|j| table.pairing[i][j].is_trivial());
                    let is_power = is_local_power(&table.reps[i], &pl).map_err(s)?;
                    if row_trivial != is_power {
                        return Err(format!(
                            "pairing table degenerate at {} (ℓ = {}): rep #{i} = {} has {} row but is_local_power = {}",
                            pl.name(),
                            ell.as_u32(),
                            table.reps[i],
                            if row_trivial { "a trivial" } else { "a nontrivial" },
                            is_power
                        ));
                    }
                    if row_trivial {
                        trivial_rows += 1;
                    }
                }
                if trivial_rows != 1 {
                    return Err(format!(
                        "pairing table at {} has {trivial_rows} radical classes; expected exactly the class of 1",
                        pl.name()
                    ));
                }
                tables += 1;
            }
        }
        Ok(format!(
            "{triples} triples satisfy bilinearity/antisymmetry/special values; {tables} local pairing tables non-degenerate"
        ))
    })
}

// ---------------------------------------------------------------------------
// 3. Hasse norm test vs. bounded brute force on a curated suite
// ---------------------------------------------------------------------------

struct NormCase {
    ell: Ell,
    x: CycElem,
    y: CycElem,
    expect: bool,
    /// per-case height bound for the brute-force solver
    bound: u64,
}

fn curated_norm_cases() -> Vec<NormCase> {
    let q2 = |n: i64| CycElem::from_i64(Ell::Two, n);
    let q3 = |n: i64| CycElem::from_i64(Ell::Three, n);
    let r2 = |n: i64, d: i64| CycElem::from_ratio(Ell::Two, n, d);
    let z3 = CycElem::zeta(Ell::Three);
    let mut cases = Vec::new();
    fn tru(cases: &mut Vec<NormCase>, ell: Ell, y: CycElem, t: &[CycElem], bound: u64) {
        let x = norm_value(&y, t).expect("curated witness evaluates");
        cases.push(NormCase { ell, x, y, expect: true, bound });
    }
    // ℓ = 2, norms with recorded witnesses
    tru(&mut cases, Ell::Two, q2(2), &[q2(3), q2(1)], 4); // 7 = 3² − 2
    tru(&mut cases, Ell::Two, q2(5), &[q2(2), q2(1)], 4); // −1
    tru(&mut cases, Ell::Two, q2(-1), &[q2(1), q2(1)], 3); // 2
    tru(&mut cases, Ell::Two, q2(-1), &[r2(3, 2), r2(1, 2)], 4); // 5/2
    tru(&mut cases, Ell::Two, q2(3), &[q2(5), q2(2)], 7); // 13
    tru(&mut cases, Ell::Two, q2(7), &[q2(4), q2(1)], 6); // 9
    tru(&mut cases, Ell::Two, q2(11), &[q2(4), q2(1)], 6); // 5
    tru(&mut cases, Ell::Two, q2(13), &[q2(4), q2(1)], 6); // 3
    tru(&mut cases, Ell::Two, q2(2), &[q2(1), q2(1)], 3); // −1
    tru(&mut cases, Ell::Two, q2(17), &[q2(5), q2(2)], 7); // −43
    tru(&mut cases, Ell::Two, q2(-1), &[q2(3), q2(1)], 5); // 10
    tru(&mut cases, Ell::Two, q2(5), &[q2(7), q2(3)], 9); // 4
    tru(&mut cases, Ell::Two, q2(3), &[q2(2), q2(1)], 4); // 1
    // ℓ = 2, non-norms (local obstructions)
    for (x, y) in [
        (3, -1),
        (7, -1),
        (2, 3),
        (5, 3),
        (3, 5),
        (2, 5),
        (6, -1),
        (-1, 3),
        (5, -2),
        (-3, 2),
        (15, -1),
        (21, -1),
    ] {
        cases.push(NormCase { ell: Ell::Two, x: q2(x), y: q2(y), expect: false, bound: 3 });
    }
    // ℓ = 3, norms with recorded witnesses
    tru(&mut cases, Ell::Three, q3(2), &[q3(1), q3(1), q3(0)], 3); // 3
    tru(&mut cases, Ell::Three, q3(2), &[q3(3), q3(1), q3(0)], 5); // 29
    tru(&mut cases, Ell::Three, q3(2), &[q3(1), q3(1), q3(1)], 3); // 1
    tru(&mut cases, Ell::Three, q3(2), &[q3(1), q3(0), q3(1)], 3); // 5
    tru(&mut cases, Ell::Three, q3(2), &[q3(1), q3(-1), q3(0)], 3); // −1
    tru(&mut cases, Ell::Three, q3(3), &[q3(1), q3(1), q3(0)], 3); // 4
    tru(&mut cases, Ell::Three, q3(3), &[q3(2), q3(1), q3(0)], 4); // 11
    tru(&mut cases, Ell::Three, q3(5), &[q3(1), q3(1), q3(0)], 3); // 6
    tru(&mut cases, Ell::Three, q3(5), &[q3(2), q3(1), q3(0)], 4); // 13
    tru(&mut cases, Ell::Three, q3(7), &[q3(1), q3(1), q3(0)], 3); // 8
    tru(&mut cases, Ell::Three, q3(7), &[q3(2), q3(1), q3(0)], 4); // 15
    tru(&mut cases, Ell::Three, q3(11), &[q3(2), q3(1), q3(0)], 4); // 19
    tru(&mut cases, Ell::Three, q3(6), &[q3(1), q3(1), q3(0)], 3); // 7
    tru(&mut cases, Ell::Three, z3.mul(&q3(2)), &[q3(1), q3(1), q3(0)], 3); // 1 + 2ζ
    // ℓ = 3, non-norms: nontrivial cubic character at a place above 7 or 13
    for (x, y) in [(2, 7), (3, 7), (4, 7), (5, 7), (10, 7), (2, 13), (3, 13), (4, 13), (6, 13), (7, 13)]
    {
        cases.push(NormCase { ell: Ell::Three, x: q3(x), y: q3(y), expect: false, bound: 2 });
    }
    cases.push(NormCase { ell: Ell::Three, x: z3, y: q3(7), expect: false, bound: 2 });
    cases
}

pub fn criterion_3(cfg: &SearchConfig) -> CriterionReport {
    run("Hasse norm test vs bounded brute-force solver (50 curated pairs)", || {
        let cases = curated_norm_cases();
        if cases.len() != 50 {
            return Err(format!("curated suite has {} cases, wanted 50", cases.len()));
        }
        let mut norms = 0u32;
        let mut fails = 0u32;
        for case in &cases {
            let verdict = is_norm(&case.x, &case.y).map_err(s)?;
            if verdict.is_norm != case.expect {
                return Err(format!(
                    "is_norm({}, {}) = {} but the suite expects {} (ℓ = {})",
                    case.x,
                    case.y,
                    verdict.is_norm,
                    case.expect,
                    case.ell.as_u32()
                ));
            }
            let solver_cfg = SearchConfig { height_bound: case.bound, ..cfg.clone() };
            match norm_solve(&case.x, &case.y, &solver_cfg) {
                Ok(t) => {
                    if !case.expect {
                        return Err(format!(
                            "norm_solve found a witness for the non-norm pair ({}, {})",
                            case.x, case.y
                        ));
                    }
                    let back = norm_value(&case.y, &t).map_err(s)?;
                    if back != case.x {
                        return Err(format!(
                            "norm_solve witness fails to evaluate back: N = {back}, wanted {}",
                            case.x
                        ));
                    }
                    norms += 1;
                }
                Err(Error::SearchExhausted(_)) => {
                    if case.expect {
                        return Err(format!(
                            "norm_solve exhausted height {} on the norm pair ({}, {})",
                            case.bound, case.x, case.y
                        ));
                    }
                    fails += 1;
                }
                Err(e) => return Err(s(e)),
            }
        }
        // pinned behaviors: the documented first solution of (7, 2), and the
        // documented obstruction sets of (3, −1) and (2, 7)
        let seven = CycElem::from_i64(Ell::Two, 7);
        let two = CycElem::from_i64(Ell::Two, 2);
        let sol = norm_solve(&seven, &two, &SearchConfig { height_bound: 4, ..cfg.clone() })
            .map_err(s)?;
        if sol != vec![CycElem::from_i64(Ell::Two, 3), CycElem::from_i64(Ell::Two, 1)] {
            return Err(format!("norm_solve(7, 2) returned {sol:?}, expected t = (3, 1)"));
        }
        let v = is_norm(&CycElem::from_i64(Ell::Two, 3), &CycElem::from_i64(Ell::Two, -1))
            .map_err(s)?;
        let obs: Vec<String> = v.obstructions.iter().map(|p| p.name()).collect();
        if v.is_norm || obs != ["2", "3"] {
            return Err(format!("(3, −1) should fail exactly at {{2, 3}}, got {obs:?}"));
        }
        let v = is_norm(&CycElem::from_i64(Ell::Three, 2), &CycElem::from_i64(Ell::Three, 7))
            .map_err(s)?;
        if v.is_norm
            || v.obstructions.is_empty()
            || !v.obstructions.iter().all(|p| p.residue_char == BigInt::from(7))
        {
            return Err("(2, 7) should fail exactly at the places above 7".into());
        }
        Ok(format!(
            "50/50 pairs agree ({norms} norms solved, {fails} non-norms exhausted); pinned obstruction sets match"
        ))
    })
}

// ---------------------------------------------------------------------------
// 4. place-set partitions of generated p vs Frobenius classification
// ---------------------------------------------------------------------------

/// Ascending tame places of the given Frobenius class, coprime to the modulus.
fn class_stream(params: &Params, class: FrobClass, want: usize) -> Result<Vec<Place>, String> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while out.len() < want && n < 200_000 {
        let nb = BigInt::from(n);
        if crate::arith::is_prime(&nb) {
            for pl in primes_above(params.ell, &nb) {
                if !pl.is_tame() || params.modulus_contains(&pl) {
                    continue;
                }
                let pair = frobenius_pair(&pl, &params.a, &params.b).map_err(s)?;
                if FrobClass::of(pair) == class && out.len() < want {
                    out.push(pl);
                }
            }
        }
        n += 1;
    }
    if out.len() < want {
        return Err(format!("only {} places of class {:?} below 200000", out.len(), class));
    }
    Ok(out)
}

fn check_partitions_for(params: &Params, cfg: &SearchConfig, budget: usize) -> Result<usize, String> {
    let ell = params.ell;
    let both = FrobClass { i: -1, j: -1 };
    let mixed = [FrobClass { i: 1, j: -1 }, FrobClass { i: -1, j: 1 }];
    let trivial_places = class_stream(params, FrobClass::TRIVIAL, 2 * budget.div_ceil(4))?;
    let streams: Vec<(FrobClass, Vec<Place>)> = [both, mixed[0], mixed[1]]
        .into_iter()
        .map(|c| Ok((c, class_stream(params, c, budget.div_ceil(4))?)))
        .collect::<Result<_, String>>()?;
    let mut produced = 0usize;
    for i in 0..budget {
        let (p, design) = match i % 4 {
            0 => {
                let g1 = trivial_places[2 * (i / 4)].uniformizer();
                let g2 = trivial_places[2 * (i / 4) + 1].uniformizer();
                (g1.mul(&g2), FrobClass::TRIVIAL)
            }
            k => {
                let (class, places) = &streams[k - 1];
                let target = &places[i / 4];
                (find_p(target, *class, params, cfg).map_err(s)?, *class)
            }
        };
        let cls = classify(&p, params).map_err(s)?;
        // both-nontrivial: the raw intersection is the bucket, always
        let raw: BTreeSet<Place> = r_class_places(params, both, &p).map_err(s)?.into_iter().collect();
        let bucket: BTreeSet<Place> = cls.bucket(both).iter().cloned().collect();
        if raw != bucket {
            return Err(format!(
                "Δ_a ∩ Δ_b ≠ ℙ^(−1,−1) for p = {p} (design {design:?}, ℓ = {})",
                ell.as_u32()
            ));
        }
        // mixed classes: after discarding modulus places the intersection is
        // the bucket — except that a (−1,−1)-class place with χ(a)χ(b) ≠ 1
        // legitimately enters the mixed sets when ℓ = 3, so that design only
        // asserts the both-nontrivial equality above.
        for class in mixed {
            if ell == Ell::Three && design == both {
                continue;
            }
            let cleaned: BTreeSet<Place> = r_class_places(params, class, &p)
                .map_err(s)?
                .into_iter()
                .filter(|pl| !params.modulus_contains(pl))
                .collect();
            let bucket: BTreeSet<Place> = cls.bucket(class).iter().cloned().collect();
            if cleaned != bucket {
                return Err(format!(
                    "mixed {:?} set ∖ 𝔪 ≠ bucket for p = {p} (design {design:?}, ℓ = {})",
                    class,
                    ell.as_u32()
                ));
            }
            if design == class && bucket.len() != 1 {
                return Err(format!("designed class {:?} not isolated for p = {p}", class));
            }
        }
        produced += 1;
    }
    Ok(produced)
}

pub fn criterion_4(cfg: &SearchConfig) -> CriterionReport {
    run("place-set partitions for 100 generated p across four parameter sets", || {
        let anchor = fix_ab(Ell::Three, &[], 0, cfg).map_err(s)?;
        if anchor.a != CycElem::from_i64(Ell::Three, 28)
            || anchor.b != CycElem::from_i64(Ell::Three, 55)
        {
            return Err("anchor parameters should be (28, 55)".into());
        }
        let regenerated = [
            fix_ab(Ell::Three, &[], 1, cfg).map_err(s)?,
            fix_ab(Ell::Three, &[BigInt::from(7)], 0, cfg).map_err(s)?,
            fix_ab(Ell::Two, &[], 0, cfg).map_err(s)?,
        ];
        let mut total = 0usize;
        total += check_partitions_for(&anchor, cfg, 25)?;
        for params in &regenerated {
            total += check_partitions_for(params, cfg, 25)?;
        }
        if total != 100 {
            return Err(format!("checked {total} generated p, wanted 100"));
        }
        Ok("100 generated p: raw (−1,−1) equality and modulus-cleaned mixed equalities all hold"
            .to_string())
    })
}

// ---------------------------------------------------------------------------
// 5. J membership dual route and additive decomposition
// ---------------------------------------------------------------------------

pub fn criterion_5(cfg: &SearchConfig) -> CriterionReport {
    run("J membership dual route (200) and decomposition round trip (100)", || {
        let mut agreements = 0u32;
        let mut round_trips = 0u32;
        for (ell, a, b, primes) in [
            (Ell::Three, CycElem::from_i64(Ell::Three, 2), CycElem::from_i64(Ell::Three, 7), [2i64, 3, 5, 7]),
            (Ell::Two, CycElem::from_i64(Ell::Two, 17), CycElem::from_i64(Ell::Two, 33), [2i64, 3, 11, 17]),
        ] {
            let jq = SetQuery::J { a: a.clone(), b: b.clone() };
            // the petal places of Δ_{a,b}: where membership actually bites
            let petals: BTreeSet<Place> = {
                let mut set: BTreeSet<Place> = BTreeSet::new();
                for src in [&a, &b] {
                    for (pl, e) in crate::arith::factor(src).map_err(s)?.factors {
                        if e.rem_euclid(ell.as_u32() as i64) != 0 {
                            set.insert(pl);
                        }
                    }
                }
                set
            };
            let relevant: Vec<Place> = delta(&a, &b)
                .map_err(s)?
                .into_iter()
                .filter(|pl| petals.contains(pl))
                .collect();
            if relevant.is_empty() {
                return Err(format!("Δ_{{{a}, {b}}} misses the petals; bad fixture"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xC5));
            let mut members = 0u32;
            while agreements < if ell == Ell::Three { 100 } else { 200 } {
                let z = random_rational(&mut rng, ell, &primes);
                let direct = member(&jq, &z).map_err(s)?;
                let oracle = relevant.iter().all(|pl| pl.valuation(&z) >= 1);
                if direct != oracle {
                    return Err(format!(
                        "J membership disagrees for z = {z} (direct {direct}, valuation oracle {oracle})"
                    ));
                }
                agreements += 1;
                if direct && members < 50 {
                    members += 1;
                    let petal = if members % 2 == 0 { &a } else { &b };
                    let (u, v) = j_decompose(&z, &a, &b, petal, cfg).map_err(s)?;
                    if u.add(&v) != z {
                        return Err(format!("decomposition of {z} does not sum back"));
                    }
                    let iq = SetQuery::I { a: a.clone(), b: b.clone(), c: petal.clone() };
                    if !member(&iq, &u).map_err(s)? || !member(&iq, &v).map_err(s)? {
                        return Err(format!("decomposition parts of {z} fall outside the I-set"));
                    }
                    round_trips += 1;
                }
            }
            if members < 50 {
                // top up the round trips with guaranteed members
                while members < 50 {
                    let m = random_rational(&mut rng, ell, &primes[..3]);
                    let mut z = m;
                    for pl in &relevant {
                        let need = 1 - pl.valuation(&z).min(1);
                        if need > 0 {
                            z = z.mul(&pl.uniformizer().pow(need).map_err(s)?);
                        }
                    }
                    if !member(&jq, &z).map_err(s)? {
                        continue;
                    }
                    members += 1;
                    let petal = if members % 2 == 0 { &a } else { &b };
                    let (u, v) = j_decompose(&z, &a, &b, petal, cfg).map_err(s)?;
                    if u.add(&v) != z {
                        return Err(format!("decomposition of {z} does not sum back"));
                    }
                    let iq = SetQuery::I { a: a.clone(), b: b.clone(), c: petal.clone() };
                    if !member(&iq, &u).map_err(s)? || !member(&iq, &v).map_err(s)? {
                        return Err(format!("decomposition parts of {z} fall outside the I-set"));
                    }
                    round_trips += 1;
                }
            }
        }
        if agreements != 200 || round_trips != 100 {
            return Err(format!("{agreements} agreements / {round_trips} round trips"));
        }
        Ok("200 dual-route membership agreements; 100 decompositions sum back inside the I-sets"
            .to_string())
    })
}

// ---------------------------------------------------------------------------
// 6. certificate round trip and adversarial fuzzing
// ---------------------------------------------------------------------------

/// A deterministic pair whose only obstructions sit at places of trivial
/// Frobenius class, forcing the split certificate shape.
///
/// Both places must have residue degree one: the certificate's auxiliary
/// search wants a rational prime with nontrivial character at the anchor,
/// and at a degree-two place every rational number is an ℓth-power residue
/// (ℓ ∣ p + 1 divides (p² − 1)/ℓ away from p − 1).  The balancing place
/// additionally needs χ(x) ≠ 1 there, or no local class can realize the
/// inverse target.
fn split_route_pair(params: &Params, cfg: &SearchConfig) -> Result<(CycElem, CycElem), String> {
    let mut anchor: Option<Place> = None;
    let mut balance: Option<Place> = None;
    let mut n = 2u64;
    while balance.is_none() && n < 50_000 {
        let nb = BigInt::from(n);
        if crate::arith::is_prime(&nb) {
            for pl in primes_above(params.ell, &nb) {
                if !pl.is_tame() || pl.f != 1 || params.modulus_contains(&pl) {
                    continue;
                }
                let pair = frobenius_pair(&pl, &params.a, &params.b).map_err(s)?;
                if !(pair.0.is_trivial() && pair.1.is_trivial()) {
                    continue;
                }
                match &anchor {
                    None => anchor = Some(pl),
                    Some(first) => {
                        let chi = power_residue_symbol(&first.uniformizer(), &pl).map_err(s)?;
                        if !chi.is_trivial() && balance.is_none() {
                            balance = Some(pl);
                        }
                    }
                }
            }
        }
        n += 1;
    }
    let (Some(pl_x), Some(pl_aux)) = (anchor, balance) else {
        return Err("no trivial-class degree-one places for the split fixture".into());
    };
    let x = pl_x.uniformizer();
    let om = Mu::omega(params.ell);
    let y = prescribe_symbols(
        &[
            SymbolConstraint { a: x.clone(), place: pl_x.clone(), target: om.clone() },
            SymbolConstraint { a: x.clone(), place: pl_aux.clone(), target: om.inverse() },
        ],
        &params.finite_modulus_places(),
        cfg,
    )
    .map_err(s)?;
    Ok((x, y))
}

pub fn criterion_6(cfg: &SearchConfig) -> CriterionReport {
    run("certificates: 30 non-norm pairs per ℓ verify; 10⁴ fuzzed certs never do", || {
        let mut shape_counts = [0u32; 3];
        for ell in [Ell::Three, Ell::Two] {
            let params = fix_ab(ell, &[], 0, cfg).map_err(s)?;
            let mut pairs: Vec<(CycElem, CycElem)> = Vec::new();
            let candidates: Vec<(i64, i64)> = match ell {
                Ell::Three => (2..60)
                    .flat_map(|x| [(x, 7), (x, 13)])
                    .collect(),
                Ell::Two => (2..40)
                    .flat_map(|x| [(x, -1), (3, x), (x, 5), (x, -2)])
                    .collect(),
            };
            for (x, y) in candidates {
                if pairs.len() >= 29 {
                    break;
                }
                let xe = CycElem::from_i64(ell, x);
                let ye = CycElem::from_i64(ell, y);
                if xe.is_zero() || ye.is_zero() || xe == ye {
                    continue;
                }
                if pairs.iter().any(|(a, b)| *a == xe && *b == ye) {
                    continue;
                }
                if !is_norm(&xe, &ye).map_err(s)?.is_norm {
                    pairs.push((xe, ye));
                }
            }
            pairs.push(split_route_pair(&params, cfg)?);
            if pairs.len() != 30 {
                return Err(format!("collected {} non-norm pairs for ℓ = {}", pairs.len(), ell.as_u32()));
            }
            for (x, y) in &pairs {
                let cert = build_certificate(x, y, &params, cfg).map_err(|e| {
                    format!("build_certificate({x}, {y}) failed for ℓ = {}: {e}", ell.as_u32())
                })?;
                if !verify_certificate(x, y, &cert, &params) {
                    return Err(format!("certificate for ({x}, {y}) failed verification"));
                }
                match cert {
                    Certificate::DividesModulus { .. } => shape_counts[0] += 1,
                    Certificate::NonSplitClass { .. } => shape_counts[1] += 1,
                    Certificate::SplitClass { .. } => shape_counts[2] += 1,
                }
            }
        }
        if shape_counts.iter().any(|&c| c == 0) {
            return Err(format!(
                "certificate shapes unbalanced: divides/non-split/split = {shape_counts:?}"
            ));
        }

        // fuzzing: random certificates against norm pairs
        let mut fuzzed = 0u32;
        for ell in [Ell::Three, Ell::Two] {
            let params = fix_ab(ell, &[], 0, cfg).map_err(s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xD6));
            // norm pairs by construction: x = N(t)
            let mut norm_pairs = Vec::new();
            while norm_pairs.len() < 15 {
                let y = random_elem(&mut rng, ell, 20);
                let t: Vec<CycElem> = (0..ell.as_u32())
                    .map(|_| CycElem::from_i64(ell, rng.gen_range(-3i64..=3)))
                    .collect();
                let x = norm_value(&y, &t).map_err(s)?;
                if x.is_zero() {
                    continue;
                }
                norm_pairs.push((x, y));
            }
            let primes: &[i64] = if ell == Ell::Three { &[2, 5, 7, 13, 17] } else { &[3, 5, 7, 13] };
            let mut place_pool: Vec<Place> = params.finite_modulus_places();
            place_pool.extend(primes_above(ell, &BigInt::from(29)));
            for i in 0..5000u32 {
                let (x, y) = &norm_pairs[(i as usize) % norm_pairs.len()];
                let cert = match i % 3 {
                    0 => Certificate::DividesModulus {
                        place: place_pool[rng.gen_range(0..place_pool.len())].clone(),
                    },
                    1 => Certificate::NonSplitClass {
                        class: FrobClass::all()[rng.gen_range(0..4)],
                        p: random_rational(&mut rng, ell, primes),
                        r: rng.gen_range(0..4),
                        c: rng.gen_range(0..4),
                        d: rng.gen_range(0..4),
                        k: rng.gen_range(0..4),
                        swapped: rng.gen_bool(0.5),
                    },
                    _ => Certificate::SplitClass {
                        p: random_rational(&mut rng, ell, primes),
                        q: random_rational(&mut rng, ell, primes),
                        r: rng.gen_range(0..4),
                        c: rng.gen_range(0..4),
                        d: rng.gen_range(0..4),
                        k: rng.gen_range(0..4),
                        swapped: rng.gen_bool(0.5),
                    },
                };
                if verify_certificate(x, y, &cert, &params) {
                    return Err(format!(
                        "fuzzed certificate verified against the norm pair ({x}, {y}): {cert:?}"
                    ));
                }
                fuzzed += 1;
            }
        }
        Ok(format!(
            "60 certificates verified (divides/non-split/split = {shape_counts:?}); {fuzzed} fuzzed certificates all rejected"
        ))
    })
}

// ---------------------------------------------------------------------------
// 7. trace-set translates stay inside the Δ-integral ring
// ---------------------------------------------------------------------------

pub fn criterion_7(cfg: &SearchConfig) -> CriterionReport {
    run("trace-set sums stay Δ-integral: 100 triples × 10 pairs × both ℓ", || {
        let mut pairs_done = 0u32;
        for ell in [Ell::Three, Ell::Two] {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xE7));
            let reps: Vec<CycElem> = vec![
                CycElem::zero(ell),
                CycElem::one(ell),
                CycElem::from_i64(ell, -1),
                if ell == Ell::Three { CycElem::zeta(ell) } else { CycElem::from_i64(ell, 2) },
            ];
            let mut done = 0u32;
            while done < 10 {
                let a = random_elem(&mut rng, ell, 20);
                let b = random_elem(&mut rng, ell, 20);
                if delta(&a, &b).map_err(s)?.iter().filter(|p| p.is_finite()).count() == 0 {
                    continue;
                }
                let Ok(ap) = AlgebraParams::new(a.clone(), b.clone()) else { continue };
                let samples = match sample_norm_one_traces(&ap, 5, cfg) {
                    Ok(v) => v,
                    Err(_) => continue, // sparse trace set; resample (a, b)
                };
                let report = check_t_inclusion(&a, &b, &samples, &reps).map_err(s)?;
                if !report.pass {
                    let (s1, s2, r) = report.counterexample.unwrap();
                    return Err(format!(
                        "inclusion fails for (a, b) = ({a}, {b}): {s1} + {s2} + {r} has a pole on Δ"
                    ));
                }
                if report.triples_checked != 100 {
                    return Err(format!(
                        "checked {} triples for ({a}, {b}), wanted 100",
                        report.triples_checked
                    ));
                }
                done += 1;
                pairs_done += 1;
            }
        }
        Ok(format!("{pairs_done} pairs × 100 triples: every s₁ + s₂ + r is Δ-integral"))
    })
}

// ---------------------------------------------------------------------------
// 8. the expanded cubic norm form
// ---------------------------------------------------------------------------

pub fn criterion_8(cfg: &SearchConfig) -> CriterionReport {
    run("cubic norm form: t₀³ + y t₁³ + y² t₂³ − 3y t₀t₁t₂, 20 random y", || {
        let ell = Ell::Three;
        let basis = identity_basis(ell);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xF8));
        for _ in 0..20 {
            let y = random_elem(&mut rng, ell, 50);
            let form = norm_form_coeffs(&y, &basis).map_err(s)?;
            if form.monomials.len() != 10 {
                return Err(format!(
                    "norm form for y = {y} has {} monomials, wanted C(5, 3) = 10",
                    form.monomials.len()
                ));
            }
            for (exps, coeff) in &form.monomials {
                let expected = match exps.as_slice() {
                    [3, 0, 0] => CycElem::one(ell),
                    [0, 3, 0] => y.clone(),
                    [0, 0, 3] => y.mul(&y),
                    [1, 1, 1] => y.mul(&CycElem::from_i64(ell, -3)),
                    _ => CycElem::zero(ell),
                };
                if *coeff != expected {
                    return Err(format!(
                        "coefficient of t^{exps:?} in N(t₀ + t₁∛y + t₂∛y²) is {coeff}, wanted {expected}"
                    ));
                }
            }
            // spot check: the form evaluates like the norm it expands
            let t: Vec<CycElem> =
                (0..3).map(|_| CycElem::from_i64(ell, rng.gen_range(-4i64..=4))).collect();
            if form.eval(&t).map_err(s)? != norm_value(&y, &t).map_err(s)? {
                return Err(format!("norm form and norm_value disagree at t = {t:?}, y = {y}"));
            }
        }
        Ok("20 random y: all 10 identity-basis coefficients match the closed form".to_string())
    })
}

// ---------------------------------------------------------------------------
// 9. non-power witnesses and exact roots
// ---------------------------------------------------------------------------

pub fn criterion_9(cfg: &SearchConfig) -> CriterionReport {
    run("50 non-cubes get verifying witnesses; 50 cubes round-trip lth_root", || {
        let ell = Ell::Three;
        let params = fix_ab(ell, &[], 0, cfg).map_err(s)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x19));
        let mut witnessed = 0u32;
        while witnessed < 50 {
            let x = random_elem(&mut rng, ell, 40);
            if is_lth_power(&x).map_err(s)? {
                continue;
            }
            let y = crate::dioph::nonpower_witness(&x, &params, cfg).map_err(|e| {
                format!("nonpower_witness({x}) failed: {e}")
            })?;
            let verdict = is_norm(&x, &y).map_err(s)?;
            if verdict.is_norm {
                return Err(format!("witness y = {y} for x = {x} is not an obstruction"));
            }
            let cert = build_certificate(&x, &y, &params, cfg).map_err(|e| {
                format!("certificate for witness pair ({x}, {y}) failed: {e}")
            })?;
            if !verify_certificate(&x, &y, &cert, &params) {
                return Err(format!("witness certificate for ({x}, {y}) failed verification"));
            }
            witnessed += 1;
        }
        let mut rooted = 0u32;
        while rooted < 50 {
            let z = random_elem(&mut rng, ell, 15);
            let x = z.pow(3).map_err(s)?;
            if !is_lth_power(&x).map_err(s)? {
                return Err(format!("is_lth_power missed the cube of {z}"));
            }
            let Some(w) = lth_root(&x).map_err(s)? else {
                return Err(format!("lth_root missed the cube of {z}"));
            };
            if w.pow(3).map_err(s)? != x {
                return Err(format!("lth_root({x}) = {w} does not cube back"));
            }
            rooted += 1;
        }
        Ok(format!("{witnessed} witnesses verified; {rooted} cubes rooted exactly"))
    })
}

/// Run the whole battery in order.
pub fn run_all(cfg: &SearchConfig) -> Vec<CriterionReport> {
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
        criterion_9(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full battery runs in the dedicated acceptance test target; here we
    // keep two cheap sanity checks so `--lib` alone still covers the plumbing.

    #[test]
    fn curated_suite_is_balanced() {
        let cases = curated_norm_cases();
        assert_eq!(cases.len(), 50);
        let l2 = cases.iter().filter(|c| c.ell == Ell::Two).count();
        assert_eq!(l2, 25);
        assert!(cases.iter().any(|c| !c.expect));
        for c in &cases {
            if c.expect {
                // recorded witnesses must stay within the recorded bounds
                assert!(c.bound <= 10, "bound {} too large", c.bound);
            }
        }
    }

    #[test]
    fn norm_form_criterion_passes() {
        let report = criterion_8(&SearchConfig::default());
        assert!(report.pass, "{}", report.detail);
    }
}
