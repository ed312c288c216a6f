//! Extended Boolean functions `Z_p^m -> Z_q` in algebraic normal form.
//!
//! A function is stored as a sparse map from exponent vectors to nonzero
//! coefficients in `Z_q`. Variables range over `{0, .., p-1}` taken as plain
//! integers, and a monomial `x_1^j_1 .. x_m^j_m` is evaluated with integer
//! powers reduced mod `q` (`0^0 = 1`). Two functions are only compared through
//! their value tables; no canonical form is maintained after [`Ebf::multiply`].
//!
//! Sequence index `i` maps to the point whose little-endian base-`p` digits
//! are those of `i`, so digit 1 is the least significant.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{GcsError, Result};

/// Little-endian base-`p` digits of `i`, padded to `width` entries.
pub fn p_ary_digits(i: u64, p: u64, width: usize) -> Result<Vec<u64>> {
    if p < 2 {
        return Err(GcsError::Argument(format!(
            "base p = {p} must be at least 2"
        )));
    }
    let mut rest = i;
    let mut digits = Vec::with_capacity(width);
    for _ in 0..width {
        digits.push(rest % p);
        rest /= p;
    }
    if rest != 0 {
        return Err(GcsError::Range(format!(
            "{i} does not fit in {width} base-{p} digits"
        )));
    }
    Ok(digits)
}

/// `zeta_q^e` for the primitive root `zeta_q = exp(2 pi i / q)`.
pub fn root_of_unity(q: u64, e: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (e % q) as f64 / q as f64)
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    if q <= u32::MAX as u64 {
        (a % q) * (b % q) % q
    } else {
        ((a as u128 * b as u128) % q as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut exp: u32, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// A `Z_q`-valued sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZqSequence {
    q: u64,
    values: Vec<u64>,
}

impl ZqSequence {
    pub fn new(q: u64, values: Vec<u64>) -> Result<Self> {
        if q < 2 {
            return Err(GcsError::Argument(format!(
                "modulus q = {q} must be at least 2"
            )));
        }
        if values.is_empty() {
            return Err(GcsError::Argument("sequence must be nonempty".into()));
        }
        if let Some((idx, v)) = values.iter().enumerate().find(|(_, &v)| v >= q) {
            return Err(GcsError::Range(format!(
                "entry {idx} = {v} is not reduced mod {q}"
            )));
        }
        Ok(Self { q, values })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Maps every entry `a_i` to `zeta_q^{a_i}`.
    pub fn to_complex(&self) -> ComplexSequence {
        ComplexSequence {
            values: self
                .values
                .iter()
                .map(|&v| root_of_unity(self.q, v))
                .collect(),
        }
    }
}

/// A sequence of unit-modulus complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    values: Vec<Complex64>,
}

impl ComplexSequence {
    /// Modulus tolerance enforced by [`ComplexSequence::new`].
    pub const UNIT_TOLERANCE: f64 = 1e-12;

    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some((idx, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| (v.norm() - 1.0).abs() > Self::UNIT_TOLERANCE)
        {
            return Err(GcsError::Argument(format!(
                "entry {idx} has modulus {} (expected 1)",
                v.norm()
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An extended Boolean function `Z_p^m -> Z_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ebf {
    p: u64,
    m: usize,
    q: u64,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl Ebf {
    pub fn zero(p: u64, m: usize, q: u64) -> Result<Self> {
        if p < 2 {
            return Err(GcsError::Argument(format!(
                "base p = {p} must be at least 2"
            )));
        }
        if m < 1 {
            return Err(GcsError::Argument(
                "an EBF needs at least one variable".into(),
            ));
        }
        if q < 2 {
            return Err(GcsError::Argument(format!(
                "modulus q = {q} must be at least 2"
            )));
        }
        Ok(Self {
            p,
            m,
            q,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(p: u64, m: usize, q: u64, c: u64) -> Result<Self> {
        Self::from_terms(p, m, q, [(vec![0; m], c)])
    }

    /// The single variable `x_{index+1}` (0-based `index`).
    pub fn variable(p: u64, m: usize, q: u64, index: usize) -> Result<Self> {
        if index >= m {
            return Err(GcsError::Argument(format!(
                "variable index {index} out of range for {m} variables"
            )));
        }
        let mut exps = vec![0; m];
        exps[index] = 1;
        Self::from_terms(p, m, q, [(exps, 1)])
    }

    /// Builds a function from `(exponent vector, coefficient)` pairs.
    ///
    /// Coefficients are reduced mod `q` and repeated exponent vectors are
    /// summed. Exponent entries must lie in `[0, p-1]`.
    pub fn from_terms<I>(p: u64, m: usize, q: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        let mut f = Self::zero(p, m, q)?;
        for (exps, coeff) in terms {
            if exps.len() != m {
                return Err(GcsError::Argument(format!(
                    "exponent vector has {} entries, expected {m}",
                    exps.len()
                )));
            }
            if let Some(&e) = exps.iter().find(|&&e| e as u64 >= p) {
                return Err(GcsError::Range(format!(
                    "exponent {e} outside [0, {}]",
                    p - 1
                )));
            }
            f.accumulate(exps, coeff % q);
        }
        Ok(f)
    }

    fn accumulate(&mut self, exps: Vec<u32>, coeff: u64) {
        use std::collections::btree_map::Entry;
        let coeff = coeff % self.q;
        match self.terms.entry(exps) {
            Entry::Occupied(mut slot) => {
                let c = (*slot.get() + coeff) % self.q;
                if c == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = c;
                }
            }
            Entry::Vacant(slot) => {
                if coeff != 0 {
                    slot.insert(coeff);
                }
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn evaluate(&self, x: &[u64]) -> Result<u64> {
        if x.len() != self.m {
            return Err(GcsError::Argument(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.m
            )));
        }
        if let Some(&v) = x.iter().find(|&&v| v >= self.p) {
            return Err(GcsError::Range(format!(
                "coordinate {v} outside Z_{}",
                self.p
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[u64]) -> u64 {
        let q = self.q;
        self.terms.iter().fold(0, |acc, (exps, &coeff)| {
            let mono = exps
                .iter()
                .zip(x)
                .fold(1 % q, |m, (&e, &xi)| mul_mod(m, pow_mod(xi, e, q), q));
            (acc + mul_mod(coeff, mono, q)) % q
        })
    }

    fn check_compatible(&self, other: &Ebf) -> Result<()> {
        if (self.p, self.m, self.q) != (other.p, other.m, other.q) {
            return Err(GcsError::Argument(format!(
                "operands differ: (p, m, q) = ({}, {}, {}) vs ({}, {}, {})",
                self.p, self.m, self.q, other.p, other.m, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Ebf) -> Result<Ebf> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (exps, &c) in &other.terms {
            out.accumulate(exps.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: u64) -> Ebf {
        let mut out = Ebf {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (exps, &c) in &self.terms {
            out.accumulate(exps.clone(), mul_mod(c, s, self.q));
        }
        out
    }

    /// Symbolic product. Exponents add and may exceed `p - 1`; the result is
    /// still evaluated with plain integer powers.
    pub fn multiply(&self, other: &Ebf) -> Result<Ebf> {
        self.check_compatible(other)?;
        let mut out = Ebf {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.accumulate(exps, mul_mod(ca, cb, self.q));
            }
        }
        Ok(out)
    }

    fn check_length(&self, len: usize) -> Result<()> {
        let table = (self.p as u128).checked_pow(self.m as u32);
        let fits = match table {
            Some(t) => len as u128 <= t,
            None => true,
        };
        if len == 0 || !fits {
            return Err(GcsError::Range(format!(
                "length {len} outside [1, {}^{}]",
                self.p, self.m
            )));
        }
        Ok(())
    }

    /// The first `len` values of the truth table, in index order.
    pub fn project_zq(&self, len: usize) -> Result<ZqSequence> {
        self.check_length(len)?;
        let mut point = vec![0u64; self.m];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(self.eval_unchecked(&point));
            // little-endian increment
            for digit in point.iter_mut() {
                *digit += 1;
                if *digit < self.p {
                    break;
                }
                *digit = 0;
            }
        }
        ZqSequence::new(self.q, values)
    }

    pub fn project_complex(&self, len: usize) -> Result<ComplexSequence> {
        Ok(self.project_zq(len)?.to_complex())
    }

    /// Parses the `coeff:e1,..,em;coeff:..` text form. Empty input is the
    /// zero function.
    pub fn parse_anf(text: &str, p: u64, m: usize, q: u64) -> Result<Ebf> {
        let mut terms = Vec::new();
        for (idx, raw) in text.split(';').enumerate() {
            let term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let field = Some(idx + 1);
            let err = |message: String| GcsError::Parse {
                line: None,
                field,
                message,
            };
            let (coeff, exps) = term
                .split_once(':')
                .ok_or_else(|| err(format!("term `{term}` lacks `coeff:exponents`")))?;
            let coeff: u64 = coeff
                .trim()
                .parse()
                .map_err(|_| err(format!("bad coefficient `{}`", coeff.trim())))?;
            let exps = exps
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("bad exponent `{}`", e.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            if exps.len() != m {
                return Err(err(format!(
                    "term `{term}` has {} exponents, expected {m}",
                    exps.len()
                )));
            }
            if let Some(&e) = exps.iter().find(|&&e| e as u64 >= p) {
                return Err(err(format!("exponent {e} outside [0, {}]", p - 1)));
            }
            terms.push((exps, coeff));
        }
        Ebf::from_terms(p, m, q, terms)
    }
}

/// Prints the ANF text form, terms in lexicographic exponent order.
impl fmt::Display for Ebf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (exps, coeff)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(";")?;
            }
            write!(f, "{coeff}:")?;
            for (i, e) in exps.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}
