//! Golay complementary sets of arbitrary length from extended Boolean functions.
//!
//! For a length `L` with `p^{m-1} <= L < p^m` and base-`p` digits
//! `L - 1 = d_1 + d_2 p + .. + d_m p^{m-1}`, the generating function is
//!
//! ```text
//! f = (q/p) sum_{a=1}^{m-2} x_pi(a) x_pi(a+1)
//!   + g(x_1, .., x_{m-1}) prod_{l=0}^{d_m - 1} (x_m - l)
//!   + sum_a c_a x_a + c'
//! ```
//!
//! and every `gamma` in `Z_p^k` gives the coset
//! `f + (q/p) (gamma_1 x_pi(1) + sum_{a=2}^{k-1} gamma_a x_a + gamma_k x_m)`.
//! Truncating the `p^k` cosets to length `L` yields a `(q, p^k, L)` set.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ebf::{p_ary_digits, ComplexSequence, Ebf, ZqSequence};
use crate::error::{GcsError, Result};

/// Upper bound on `flock size * length` accepted by [`build_gcs`].
pub const MAX_SET_ENTRIES: u128 = 1 << 26;

/// Number of variables needed for length `length`: the unique `m` with
/// `p^{m-1} <= length < p^m`.
pub fn infer_m(p: u64, length: usize) -> Result<usize> {
    if p < 2 {
        return Err(GcsError::Parameter(format!("p = {p} must be at least 2")));
    }
    if length == 0 {
        return Err(GcsError::Parameter("length must be at least 1".into()));
    }
    let mut m = 1;
    let mut bound = p as u128;
    while bound <= length as u128 {
        bound *= p as u128;
        m += 1;
    }
    Ok(m)
}

/// Selects the flock exponent `k` from the digits `(d_1, .., d_m)` of `L - 1`.
///
/// `k` is the least `k'` in `2..=m-1` such that `d_a = 0` for all
/// `k' <= a <= m-1`. Failing that, `k = 2` when `L = p^{m-1}` (`d_m = 0` and
/// every lower digit is `p - 1`), else `k = m`.
///
/// For `L = (d_m + 1) p^{m-1}` with `d_m >= 1` the last `x_m` block is
/// complete and carries the `g` term, so it needs offsets on every variable:
/// `k = 2` there breaks complementarity for generic `g`.
pub fn compute_k(digits: &[u64], p: u64) -> Result<usize> {
    let m = digits.len();
    if m < 2 {
        return Err(GcsError::Unsupported(format!(
            "the flock exponent needs at least 2 digits, got {m}"
        )));
    }
    // digits[a - 1] is d_a
    let upper = &digits[..m - 1];
    let trailing_zeros = upper.iter().rev().take_while(|&&d| d == 0).count();
    let first_zero_run = m - trailing_zeros; // least k' with d_a = 0 for k' <= a <= m-1
    if trailing_zeros > 0 && first_zero_run < m {
        return Ok(first_zero_run.max(2));
    }
    if digits[m - 1] == 0 && upper.iter().all(|&d| d == p - 1) {
        Ok(2)
    } else {
        Ok(m)
    }
}

/// Free and derived parameters of one construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcsParams {
    p: u64,
    q: u64,
    length: usize,
    m: usize,
    digits: Vec<u64>,
    k: usize,
    pi: Vec<usize>,
    g: Ebf,
    c: Vec<u64>,
    c_prime: u64,
}

impl GcsParams {
    /// Validates and derives `m`, the digits of `L - 1` and `k`.
    ///
    /// `pi` lists the 1-based images of `1..=m-1` and must fix 1. `g` is a
    /// function of `m - 1` variables over the same `p` and `q`. Entries of
    /// `c` and `c_prime` are reduced mod `q`. Checks run in a fixed order and
    /// the first failing one is reported.
    pub fn new(
        p: u64,
        q: u64,
        length: usize,
        pi: Vec<usize>,
        g: Ebf,
        c: Vec<u64>,
        c_prime: u64,
    ) -> Result<Self> {
        let m = Self::check_shape(p, q, length)?;
        if pi.len() != m - 1 {
            return Err(GcsError::Parameter(format!(
                "pi must list {} images, got {}",
                m - 1,
                pi.len()
            )));
        }
        let mut seen = vec![false; m];
        for &img in &pi {
            if img == 0 || img > m - 1 || seen[img] {
                return Err(GcsError::Parameter(format!(
                    "pi = {pi:?} is not a permutation of 1..={}",
                    m - 1
                )));
            }
            seen[img] = true;
        }
        if pi[0] != 1 {
            return Err(GcsError::Parameter(format!(
                "pi(1) = {} but must be 1",
                pi[0]
            )));
        }
        if c.len() != m {
            return Err(GcsError::Parameter(format!(
                "c must have {m} entries, got {}",
                c.len()
            )));
        }
        if (g.p(), g.m(), g.q()) != (p, m - 1, q) {
            return Err(GcsError::Parameter(format!(
                "g must be a function Z_{p}^{} -> Z_{q}, got Z_{}^{} -> Z_{}",
                m - 1,
                g.p(),
                g.m(),
                g.q()
            )));
        }
        let digits = p_ary_digits(length as u64 - 1, p, m)?;
        let k = compute_k(&digits, p)?;
        Ok(Self {
            p,
            q,
            length,
            m,
            digits,
            k,
            pi,
            g,
            c: c.into_iter().map(|v| v % q).collect(),
            c_prime: c_prime % q,
        })
    }

    fn check_shape(p: u64, q: u64, length: usize) -> Result<usize> {
        if p < 2 {
            return Err(GcsError::Parameter(format!("p = {p} must be at least 2")));
        }
        if q == 0 || !q.is_multiple_of(p) {
            return Err(GcsError::Parameter(format!(
                "p = {p} does not divide q = {q}"
            )));
        }
        if length == 0 {
            return Err(GcsError::Parameter("length must be at least 1".into()));
        }
        if (length as u64) < p {
            return Err(GcsError::Unsupported(format!(
                "length {length} < p = {p} leaves a single variable"
            )));
        }
        infer_m(p, length)
    }

    /// Identity `pi`, `g = 0`, `c = 0`, `c' = 0`.
    pub fn with_defaults(p: u64, q: u64, length: usize) -> Result<Self> {
        let m = Self::check_shape(p, q, length)?;
        Self::new(
            p,
            q,
            length,
            (1..m).collect(),
            Ebf::zero(p, m - 1, q)?,
            vec![0; m],
            0,
        )
    }

    /// Draws `pi` uniformly among permutations fixing 1, `g` as up to eight
    /// random monomials with uniform coefficients, and uniform `c`, `c'`.
    pub fn random<R: Rng + ?Sized>(p: u64, q: u64, length: usize, rng: &mut R) -> Result<Self> {
        let m = Self::check_shape(p, q, length)?;
        let mut pi: Vec<usize> = (2..m).collect();
        pi.shuffle(rng);
        pi.insert(0, 1);

        let monomials = (p as u128).pow(m as u32 - 1);
        let count = rng.gen_range(0..=monomials.min(8) as usize);
        let mut chosen = HashSet::new();
        while chosen.len() < count {
            let exps: Vec<u32> = (0..m - 1).map(|_| rng.gen_range(0..p) as u32).collect();
            chosen.insert(exps);
        }
        let mut chosen: Vec<_> = chosen.into_iter().collect();
        chosen.sort();
        let terms: Vec<_> = chosen
            .into_iter()
            .map(|e| (e, rng.gen_range(0..q)))
            .collect();
        let g = Ebf::from_terms(p, m - 1, q, terms)?;

        let c = (0..m).map(|_| rng.gen_range(0..q)).collect();
        let c_prime = rng.gen_range(0..q);
        Self::new(p, q, length, pi, g, c, c_prime)
    }

    /// The quaternary length-19 instance: `pi = id`, `g = 3 x_1 x_2`, `c = 0`.
    pub fn quaternary_length_19(c_prime: u64) -> Self {
        let g = Ebf::from_terms(4, 2, 4, [(vec![1, 1], 3)]).expect("valid g");
        Self::new(4, 4, 19, vec![1, 2], g, vec![0; 3], c_prime).expect("valid params")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(d_1, .., d_m)` with `L - 1 = sum d_a p^{a-1}`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn g(&self) -> &Ebf {
        &self.g
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn c_prime(&self) -> u64 {
        self.c_prime
    }

    /// `p^k`, the number of cosets before deduplication.
    pub fn flock_size(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    fn step(&self) -> u64 {
        self.q / self.p
    }
}

/// The generating function `f`. The `g` term is omitted entirely when
/// `d_m = 0`.
pub fn build_f(params: &GcsParams) -> Result<Ebf> {
    let (p, m, q) = (params.p, params.m, params.q);
    let var = |a: usize| Ebf::variable(p, m, q, a - 1);
    let mut f = Ebf::constant(p, m, q, params.c_prime)?;

    for pair in params.pi.windows(2) {
        let quad = var(pair[0])?.multiply(&var(pair[1])?)?;
        f = f.add(&quad.scale(params.step()))?;
    }

    let d_m = params.digits[m - 1];
    if d_m > 0 {
        let lifted = Ebf::from_terms(
            p,
            m,
            q,
            params.g.terms().map(|(e, c)| {
                let mut exps = e.to_vec();
                exps.push(0);
                (exps, c)
            }),
        )?;
        let x_m = var(m)?;
        let mut product = Ebf::constant(p, m, q, 1)?;
        for l in 0..d_m {
            let shift = Ebf::constant(p, m, q, (q - l % q) % q)?;
            product = product.multiply(&x_m.add(&shift)?)?;
        }
        f = f.add(&lifted.multiply(&product)?)?;
    }

    for (a, &coeff) in params.c.iter().enumerate() {
        f = f.add(&var(a + 1)?.scale(coeff))?;
    }
    Ok(f)
}

/// The coset `a^gamma` of `f` for `gamma` in `Z_p^k`.
pub fn build_coset(f: &Ebf, gamma: &[u64], params: &GcsParams) -> Result<Ebf> {
    let (p, m, q, k) = (params.p, params.m, params.q, params.k);
    if gamma.len() != k {
        return Err(GcsError::Argument(format!(
            "gamma has {} entries, expected k = {k}",
            gamma.len()
        )));
    }
    if let Some(&g) = gamma.iter().find(|&&g| g >= p) {
        return Err(GcsError::Range(format!("gamma entry {g} outside Z_{p}")));
    }
    let step = params.step();
    let var = |a: usize| Ebf::variable(p, m, q, a - 1);
    let mut out = f.add(&var(params.pi[0])?.scale(gamma[0] * step))?;
    for a in 2..k {
        out = out.add(&var(a)?.scale(gamma[a - 1] * step))?;
    }
    out.add(&var(m)?.scale(gamma[k - 1] * step))
}

/// One sequence of a set together with its coset label.
#[derive(Debug, Clone, PartialEq)]
pub struct GcsMember {
    pub gamma: Vec<u64>,
    pub zq: ZqSequence,
    pub complex: ComplexSequence,
}

/// A constructed set and the parameters that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct GcsSet {
    pub params: GcsParams,
    pub members: Vec<GcsMember>,
}

impl GcsSet {
    pub fn flock_size(&self) -> usize {
        self.members.len()
    }

    pub fn length(&self) -> usize {
        self.params.length
    }

    pub fn complex_sequences(&self) -> impl Iterator<Item = &ComplexSequence> {
        self.members.iter().map(|m| &m.complex)
    }

    pub fn zq_sequences(&self) -> impl Iterator<Item = &ZqSequence> {
        self.members.iter().map(|m| &m.zq)
    }
}

/// Emits all `p^k` cosets, `gamma_1` varying fastest.
///
/// `f` is projected once; each coset adds its linear offset pointwise, which
/// agrees with projecting [`build_coset`].
pub fn build_gcs(params: &GcsParams) -> Result<GcsSet> {
    let flock = params.flock_size();
    if flock * params.length as u128 > MAX_SET_ENTRIES {
        return Err(GcsError::BoundExceeded(format!(
            "{flock} sequences of length {} exceed {MAX_SET_ENTRIES} entries",
            params.length
        )));
    }
    let (p, q, k, m) = (params.p, params.q, params.k, params.m);
    let base = build_f(params)?.project_zq(params.length)?;
    // variables carrying gamma_1 .. gamma_k, 0-based
    let mut offset_vars = vec![params.pi[0] - 1];
    offset_vars.extend(1..k - 1);
    offset_vars.push(m - 1);
    let points: Vec<Vec<u64>> = (0..params.length as u64)
        .map(|i| p_ary_digits(i, p, m))
        .collect::<Result<_>>()?;
    let step = params.step();
    let members = (0..flock as u64)
        .map(|r| {
            let gamma = p_ary_digits(r, p, k)?;
            let values = base
                .values()
                .iter()
                .zip(&points)
                .map(|(&v, x)| {
                    let shift: u64 = gamma
                        .iter()
                        .zip(&offset_vars)
                        .map(|(&g, &var)| g * x[var] % q)
                        .sum();
                    (v + step * (shift % q)) % q
                })
                .collect();
            let zq = ZqSequence::new(q, values)?;
            let complex = zq.to_complex();
            Ok(GcsMember { gamma, zq, complex })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GcsSet {
        params: params.clone(),
        members,
    })
}

/// Drops members whose `Z_q` sequence repeats an earlier one.
pub fn dedupe(set: GcsSet) -> GcsSet {
    let mut seen = HashSet::new();
    let GcsSet { params, members } = set;
    let members = members
        .into_iter()
        .filter(|m| seen.insert(m.zq.values().to_vec()))
        .collect();
    GcsSet { params, members }
}
