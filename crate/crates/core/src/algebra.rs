//! The cyclic algebra (a, b)_ω of degree ℓ over K.
//!
//! Presentation: generated over K by Σ and Τ with Τ^ℓ = a, Σ^ℓ = b and
//! ΣΤ = ωΤΣ, where ω is the fixed primitive ℓth root of unity of K
//! (ω = −1 for ℓ = 2, ω = ζ for ℓ = 3).  A K-basis is Σ^i Τ^j,
//! 0 ≤ i, j < ℓ; the monomial product is
//!
//!   (Σ^i Τ^j)(Σ^k Τ^m) = ω^{−jk} · a^{⌊(j+m)/ℓ⌋} b^{⌊(i+k)/ℓ⌋} · Σ^{(i+k) mod ℓ} Τ^{(j+m) mod ℓ},
//!
//! since ΤΣ = ω^{−1}ΣΤ.  The algebra is split — isomorphic to M_ℓ(K) —
//! exactly when b is a norm from K(ℓ√a), which ties it to `norms::is_norm`
//! and makes Δ_{a,b} (the places of nontrivial Hilbert symbol) its
//! ramification locus.
//!
//! Reduced norm and trace go through the regular splitting model over
//! R = K[s]/(s^ℓ − a): Τ ↦ diag(s, ωs, …, ω^{ℓ−1}s) and Σ ↦ the cyclic
//! shift e_i ↦ e_{i−1} with Σe₀ = b·e_{ℓ−1}.  These matrices satisfy the
//! defining relations, so the embedding is a ring map; Nrd is the
//! determinant and Trd the matrix trace, and both provably lie in K —
//! the code asserts that every s^i-coordinate (i > 0) of the result
//! cancels instead of trusting the theory.

use crate::arith::{CycElem, Ell};
use crate::norms::delta;
use crate::places::Place;
use crate::{Error, SearchConfig};

/// Parameters (a, b) of the algebra; ω is determined by ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraParams {
    pub a: CycElem,
    pub b: CycElem,
}

impl AlgebraParams {
    pub fn new(a: CycElem, b: CycElem) -> Result<AlgebraParams, Error> {
        if a.ell() != b.ell() {
            return Err(Error::EllMismatch);
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::Precondition("algebra parameters must be nonzero".into()));
        }
        Ok(AlgebraParams { a, b })
    }

    pub fn ell(&self) -> Ell {
        self.a.ell()
    }

    pub fn omega(&self) -> CycElem {
        CycElem::zeta(self.ell())
    }
}

/// Element Σ_{i,j} coords[i][j] · Σ^i Τ^j.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElem {
    pub params: AlgebraParams,
    pub coords: Vec<Vec<CycElem>>,
}

impl AlgebraElem {
    pub fn zero(params: &AlgebraParams) -> AlgebraElem {
        let l = params.ell().as_u32() as usize;
        AlgebraElem {
            params: params.clone(),
            coords: vec![vec![CycElem::zero(params.ell()); l]; l],
        }
    }

    pub fn scalar(params: &AlgebraParams, c: &CycElem) -> AlgebraElem {
        let mut u = AlgebraElem::zero(params);
        u.coords[0][0] = c.clone();
        u
    }

    pub fn one(params: &AlgebraParams) -> AlgebraElem {
        AlgebraElem::scalar(params, &CycElem::one(params.ell()))
    }

    /// c · Σ^i Τ^j.
    pub fn monomial(
        params: &AlgebraParams,
        i: usize,
        j: usize,
        c: &CycElem,
    ) -> Result<AlgebraElem, Error> {
        let l = params.ell().as_u32() as usize;
        if i >= l || j >= l {
            return Err(Error::Precondition(format!("monomial exponents must lie below {l}")));
        }
        let mut u = AlgebraElem::zero(params);
        u.coords[i][j] = c.clone();
        Ok(u)
    }

    /// The generator Τ (so Τ^ℓ = a).
    pub fn gen_t(params: &AlgebraParams) -> AlgebraElem {
        AlgebraElem::monomial(params, 0, 1, &CycElem::one(params.ell())).unwrap()
    }

    /// The generator Σ (so Σ^ℓ = b).
    pub fn gen_s(params: &AlgebraParams) -> AlgebraElem {
        AlgebraElem::monomial(params, 1, 0, &CycElem::one(params.ell())).unwrap()
    }

    pub fn add(&self, other: &AlgebraElem) -> Result<AlgebraElem, Error> {
        if self.params != other.params {
            return Err(Error::Precondition("algebra parameter mismatch".into()));
        }
        let mut out = self.clone();
        for (row, orow) in out.coords.iter_mut().zip(&other.coords) {
            for (c, oc) in row.iter_mut().zip(orow) {
                *c = c.add(oc);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> AlgebraElem {
        let mut out = self.clone();
        for row in out.coords.iter_mut() {
            for c in row.iter_mut() {
                *c = c.neg();
            }
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElem) -> Result<AlgebraElem, Error> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycElem) -> AlgebraElem {
        let mut out = self.clone();
        for row in out.coords.iter_mut() {
            for x in row.iter_mut() {
                *x = x.mul(c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    pub fn pow(&self, n: u32) -> Result<AlgebraElem, Error> {
        let mut acc = AlgebraElem::one(&self.params);
        for _ in 0..n {
            acc = alg_mul(&acc, self)?;
        }
        Ok(acc)
    }
}

/// Product in the Σ^i Τ^j basis via the monomial rule.
pub fn alg_mul(u: &AlgebraElem, v: &AlgebraElem) -> Result<AlgebraElem, Error> {
    if u.params != v.params {
        return Err(Error::Precondition("algebra parameter mismatch".into()));
    }
    let params = &u.params;
    let l = params.ell().as_u32() as usize;
    let omega = params.omega();
    let mut out = AlgebraElem::zero(params);
    for i in 0..l {
        for j in 0..l {
            if u.coords[i][j].is_zero() {
                continue;
            }
            for k in 0..l {
                for m in 0..l {
                    if v.coords[k][m].is_zero() {
                        continue;
                    }
                    let mut c = u.coords[i][j].mul(&v.coords[k][m]);
                    c = c.mul(&omega.pow(-((j * k) as i64))?);
                    if j + m >= l {
                        c = c.mul(&params.a);
                    }
                    if i + k >= l {
                        c = c.mul(&params.b);
                    }
                    let si = (i + k) % l;
                    let tj = (j + m) % l;
                    out.coords[si][tj] = out.coords[si][tj].add(&c);
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// splitting model over R = K[s]/(s^ℓ − a)

/// Element of R as its s-coordinate vector (length ℓ).
type RElem = Vec<CycElem>;
type RMatrix = Vec<Vec<RElem>>;

fn r_zero(ell: Ell) -> RElem {
    vec![CycElem::zero(ell); ell.as_u32() as usize]
}

fn r_scalar(ell: Ell, c: &CycElem) -> RElem {
    let mut v = r_zero(ell);
    v[0] = c.clone();
    v
}

fn r_add(x: &RElem, y: &RElem) -> RElem {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

fn r_sub(x: &RElem, y: &RElem) -> RElem {
    x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
}

fn r_mul(x: &RElem, y: &RElem, a: &CycElem) -> RElem {
    let l = x.len();
    let ell = a.ell();
    let mut out = r_zero(ell);
    for i in 0..l {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..l {
            if y[j].is_zero() {
                continue;
            }
            let prod = x[i].mul(&y[j]);
            if i + j < l {
                out[i + j] = out[i + j].add(&prod);
            } else {
                out[i + j - l] = out[i + j - l].add(&prod.mul(a));
            }
        }
    }
    out
}

fn mat_mul(x: &RMatrix, y: &RMatrix, a: &CycElem) -> RMatrix {
    let l = x.len();
    let ell = a.ell();
    let mut out = vec![vec![r_zero(ell); l]; l];
    for i in 0..l {
        for k in 0..l {
            if x[i][k].iter().all(|c| c.is_zero()) {
                continue;
            }
            for j in 0..l {
                let prod = r_mul(&x[i][k], &y[k][j], a);
                out[i][j] = r_add(&out[i][j], &prod);
            }
        }
    }
    out
}

fn mat_identity(ell: Ell) -> RMatrix {
    let l = ell.as_u32() as usize;
    let mut m = vec![vec![r_zero(ell); l]; l];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = r_scalar(ell, &CycElem::one(ell));
    }
    m
}

/// Image of an element under the splitting embedding into M_ℓ(R).
fn embed(u: &AlgebraElem) -> Result<RMatrix, Error> {
    let params = &u.params;
    let ell = params.ell();
    let l = ell.as_u32() as usize;
    let omega = params.omega();
    // Τ ↦ diag(ω^i s), Σ ↦ (e_i ↦ e_{i−1}, e₀ ↦ b·e_{ℓ−1})
    let mut t_mat = vec![vec![r_zero(ell); l]; l];
    for (i, row) in t_mat.iter_mut().enumerate() {
        row[i][1] = omega.pow(i as i64)?;
    }
    let mut s_mat = vec![vec![r_zero(ell); l]; l];
    for c in 1..l {
        s_mat[c - 1][c] = r_scalar(ell, &CycElem::one(ell));
    }
    s_mat[l - 1][0] = r_scalar(ell, &params.b);
    let mut t_pows = vec![mat_identity(ell)];
    let mut s_pows = vec![mat_identity(ell)];
    for k in 1..l {
        t_pows.push(mat_mul(&t_pows[k - 1], &t_mat, &params.a));
        s_pows.push(mat_mul(&s_pows[k - 1], &s_mat, &params.a));
    }
    let mut m = vec![vec![r_zero(ell); l]; l];
    for i in 0..l {
        for j in 0..l {
            if u.coords[i][j].is_zero() {
                continue;
            }
            let mono = mat_mul(&s_pows[i], &t_pows[j], &params.a);
            for r in 0..l {
                for c in 0..l {
                    let scaled: RElem =
                        mono[r][c].iter().map(|x| x.mul(&u.coords[i][j])).collect();
                    m[r][c] = r_add(&m[r][c], &scaled);
                }
            }
        }
    }
    Ok(m)
}

fn descend_to_k(r: RElem, what: &str) -> Result<CycElem, Error> {
    for c in &r[1..] {
        if !c.is_zero() {
            return Err(Error::Precondition(format!(
                "{what} failed to descend to K: residual root-of-a component"
            )));
        }
    }
    Ok(r.into_iter().next().unwrap())
}

/// Nrd(u): determinant of the splitting model, certified to lie in K.
pub fn reduced_norm(u: &AlgebraElem) -> Result<CycElem, Error> {
    let params = &u.params;
    let a = &params.a;
    let m = embed(u)?;
    let det = match params.ell() {
        Ell::Two => r_sub(&r_mul(&m[0][0], &m[1][1], a), &r_mul(&m[0][1], &m[1][0], a)),
        Ell::Three => {
            let minor = |r1: usize, r2: usize, c1: usize, c2: usize| -> RElem {
                r_sub(&r_mul(&m[r1][c1], &m[r2][c2], a), &r_mul(&m[r1][c2], &m[r2][c1], a))
            };
            let t0 = r_mul(&m[0][0], &minor(1, 2, 1, 2), a);
            let t1 = r_mul(&m[0][1], &minor(1, 2, 0, 2), a);
            let t2 = r_mul(&m[0][2], &minor(1, 2, 0, 1), a);
            r_add(&r_sub(&t0, &t1), &t2)
        }
    };
    descend_to_k(det, "reduced norm")
}

/// Trd(u): matrix trace of the splitting model, certified to lie in K.
pub fn reduced_trace(u: &AlgebraElem) -> Result<CycElem, Error> {
    let ell = u.params.ell();
    let l = ell.as_u32() as usize;
    let m = embed(u)?;
    let mut tr = r_zero(ell);
    for i in 0..l {
        tr = r_add(&tr, &m[i][i]);
    }
    descend_to_k(tr, "reduced trace")
}

// ---------------------------------------------------------------------------
// norm-one sampling (Hilbert 90 in the maximal subfields)

/// Polynomial arithmetic in K[s] for the Hilbert-90 quotients; vectors are
/// dense coefficient lists, lowest degree first.
fn poly_trim(p: &mut Vec<CycElem>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(x: &[CycElem], y: &[CycElem], ell: Ell) -> Vec<CycElem> {
    let mut out = vec![CycElem::zero(ell); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(x: &[CycElem], y: &[CycElem], ell: Ell) -> Vec<CycElem> {
    let n = x.len().max(y.len());
    let mut out = vec![CycElem::zero(ell); n];
    for (i, c) in x.iter().enumerate() {
        out[i] = out[i].add(c);
    }
    for (i, c) in y.iter().enumerate() {
        out[i] = out[i].sub(c);
    }
    poly_trim(&mut out);
    out
}

fn poly_is_zero(p: &[CycElem]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Remainder of x modulo y over the field K (y ≠ 0).
fn poly_rem(x: &[CycElem], y: &[CycElem], ell: Ell) -> Result<Vec<CycElem>, Error> {
    let mut r = x.to_vec();
    poly_trim(&mut r);
    let mut yy = y.to_vec();
    poly_trim(&mut yy);
    let lead_inv = yy.last().unwrap().inv()?;
    while !poly_is_zero(&r) && r.len() >= yy.len() {
        let shift = r.len() - yy.len();
        let q = r.last().unwrap().mul(&lead_inv);
        let mut sub = vec![CycElem::zero(ell); shift];
        sub.extend(yy.iter().map(|c| c.mul(&q)));
        r = poly_sub(&r, &sub, ell);
        poly_trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    Ok(r)
}

/// Inverse of c in K[s]/(s^ℓ − modulus-root), if c is invertible there.
fn poly_inv_mod(c: &[CycElem], root: &CycElem, ell: Ell) -> Result<Option<RElem>, Error> {
    let l = ell.as_u32() as usize;
    let mut modulus = vec![CycElem::zero(ell); l + 1];
    modulus[0] = root.neg();
    modulus[l] = CycElem::one(ell);
    // extended Euclid: maintain r = s·c mod modulus (t-coefficients dropped)
    let mut r0 = modulus.clone();
    let mut r1 = c.to_vec();
    poly_trim(&mut r1);
    let mut s0: Vec<CycElem> = vec![CycElem::zero(ell)];
    let mut s1: Vec<CycElem> = vec![CycElem::one(ell)];
    while !poly_is_zero(&r1) {
        // quotient of r0 by r1
        let mut q = vec![CycElem::zero(ell); r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        poly_trim(&mut rem);
        let lead_inv = r1.last().unwrap().inv()?;
        while !poly_is_zero(&rem) && rem.len() >= r1.len() {
            let shift = rem.len() - r1.len();
            let qc = rem.last().unwrap().mul(&lead_inv);
            q[shift] = q[shift].add(&qc);
            let mut sub = vec![CycElem::zero(ell); shift];
            sub.extend(r1.iter().map(|c| c.mul(&qc)));
            rem = poly_sub(&rem, &sub, ell);
            poly_trim(&mut rem);
        }
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, ell), ell);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    poly_trim(&mut r0);
    if r0.len() != 1 {
        return Ok(None); // nontrivial gcd with s^ℓ − root: not invertible
    }
    let scale = r0[0].inv()?;
    let mut inv = poly_mul(&s0, &[scale], ell);
    inv = poly_rem(&inv, &modulus, ell)?;
    let mut out = r_zero(ell);
    for (i, c) in inv.into_iter().enumerate() {
        out[i] = c;
    }
    Ok(Some(out))
}

/// Norm-one elements of K[s]/(s^ℓ − root) of Hilbert-90 shape c/σ(c),
/// harvested from a deterministic grid of small c.
fn hilbert90_stream(root: &CycElem, limit: usize) -> Result<Vec<RElem>, Error> {
    let ell = root.ell();
    let l = ell.as_u32() as usize;
    let omega = CycElem::zeta(ell);
    let vals: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    let mut out = Vec::new();
    let mut idx = vec![0usize; l];
    'outer: loop {
        let c: Vec<CycElem> = idx.iter().map(|&k| CycElem::from_i64(ell, vals[k])).collect();
        if !poly_is_zero(&c) {
            // σ(Σ γ_k s^k) = Σ γ_k ω^k s^k
            let mut sc = c.clone();
            for (k, coord) in sc.iter_mut().enumerate() {
                *coord = coord.mul(&omega.pow(k as i64)?);
            }
            if let Some(inv) = poly_inv_mod(&sc, root, ell)? {
                let mut padded = r_zero(ell);
                for (k, coord) in c.iter().enumerate() {
                    padded[k] = coord.clone();
                }
                let q = r_mul(&padded, &inv, root);
                if !out.contains(&q) {
                    out.push(q);
                    if out.len() >= limit {
                        break 'outer;
                    }
                }
            }
        }
        let mut pos = l;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vals.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(out)
}

/// Deterministic stream of values of the trace set
/// S_A = {Trd(u) : u ∈ A, Nrd(u) = 1}: the identity, Hilbert-90 norm-one
/// elements of the maximal subfields K[Τ] and K[Σ], and their pairwise
/// products.  Every emitted trace is re-verified to come from an element of
/// reduced norm exactly 1.
pub fn sample_norm_one_traces(
    params: &AlgebraParams,
    count: usize,
    cfg: &SearchConfig,
) -> Result<Vec<CycElem>, Error> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let ell = params.ell();
    let one = CycElem::one(ell);
    let seed_limit = (cfg.height_bound as usize).clamp(8, 64);
    let t_side = hilbert90_stream(&params.a, seed_limit)?;
    let s_side = hilbert90_stream(&params.b, seed_limit)?;
    let into_t = |q: &RElem| -> AlgebraElem {
        let mut u = AlgebraElem::zero(params);
        for (j, c) in q.iter().enumerate() {
            u.coords[0][j] = c.clone();
        }
        u
    };
    let into_s = |q: &RElem| -> AlgebraElem {
        let mut u = AlgebraElem::zero(params);
        for (i, c) in q.iter().enumerate() {
            u.coords[i][0] = c.clone();
        }
        u
    };
    let mut elems: Vec<AlgebraElem> = vec![AlgebraElem::one(params)];
    elems.extend(t_side.iter().map(&into_t));
    elems.extend(s_side.iter().map(&into_s));
    for tq in &t_side {
        for sq in &s_side {
            elems.push(alg_mul(&into_t(tq), &into_s(sq))?);
        }
    }
    let mut traces: Vec<CycElem> = Vec::new();
    for u in &elems {
        if reduced_norm(u)? != one {
            return Err(Error::Precondition(
                "norm-one sampler produced an element of reduced norm ≠ 1".into(),
            ));
        }
        let tr = reduced_trace(u)?;
        if !traces.contains(&tr) {
            traces.push(tr);
            if traces.len() >= count {
                return Ok(traces);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "found {} distinct norm-one traces, wanted {count}",
        traces.len()
    )))
}

/// Report of the inclusion check S_A + S_A + R ⊆ T_{a,b}.
#[derive(Debug, Clone)]
pub struct TInclusionReport {
    pub pass: bool,
    pub delta: Vec<Place>,
    pub triples_checked: u64,
    /// (s₁, s₂, r) with s₁ + s₂ + r ∉ T_{a,b}, if the inclusion failed.
    pub counterexample: Option<(CycElem, CycElem, CycElem)>,
}

/// Verify that every s₁ + s₂ + r (sᵢ from the samples, r from the reps) lies
/// in T_{a,b} = ∩_{𝔭 ∈ Δ_{a,b}} 𝒪_(𝔭), i.e. has no pole at any finite place
/// of Δ_{a,b}.
pub fn check_t_inclusion(
    a: &CycElem,
    b: &CycElem,
    samples: &[CycElem],
    reps: &[CycElem],
) -> Result<TInclusionReport, Error> {
    let places: Vec<Place> =
        delta(a, b)?.into_iter().filter(|p| p.is_finite()).collect();
    let mut checked = 0u64;
    for s1 in samples {
        for s2 in samples {
            for r in reps {
                checked += 1;
                let z = s1.add(s2).add(r);
                if z.is_zero() {
                    continue;
                }
                for pl in &places {
                    if pl.valuation(&z) < 0 {
                        return Ok(TInclusionReport {
                            pass: false,
                            delta: places,
                            triples_checked: checked,
                            counterexample: Some((s1.clone(), s2.clone(), r.clone())),
                        });
                    }
                }
            }
        }
    }
    Ok(TInclusionReport { pass: true, delta: places, triples_checked: checked, counterexample: None })
}
