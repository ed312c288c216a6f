//! Aperiodic correlations and the complementary-set test.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::ebf::ComplexSequence;
use crate::error::{GcsError, Result};

/// Aperiodic cross-correlation `sum_i a_i conj(b_{i+tau})`.
///
/// Negative shifts slide `a` instead of `b`; `|tau| >= L` gives zero.
pub fn accf(a: &ComplexSequence, b: &ComplexSequence, tau: isize) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(GcsError::Argument(format!(
            "sequence lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(accf_slices(a.values(), b.values(), tau))
}

fn accf_slices(a: &[Complex64], b: &[Complex64], tau: isize) -> Complex64 {
    let shift = tau.unsigned_abs();
    if shift >= a.len() {
        return Complex64::new(0.0, 0.0);
    }
    let (lead, lag) = if tau >= 0 {
        (a, &b[shift..])
    } else {
        (&a[shift..], b)
    };
    lead.iter().zip(lag).map(|(x, y)| x * y.conj()).sum()
}

/// Aperiodic autocorrelation at shift `tau`.
pub fn aacf(a: &ComplexSequence, tau: isize) -> Complex64 {
    accf_slices(a.values(), a.values(), tau)
}

/// Correlation values over the shifts `-(L-1) ..= L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    len: usize,
    values: Vec<Complex64>,
}

impl CorrelationProfile {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn max_shift(&self) -> isize {
        self.len as isize - 1
    }

    /// Value at `tau`, zero outside the support.
    pub fn at(&self, tau: isize) -> Complex64 {
        if tau.unsigned_abs() >= self.len {
            return Complex64::new(0.0, 0.0);
        }
        self.values[(tau + self.max_shift()) as usize]
    }

    /// `(tau, value)` pairs in increasing `tau`.
    pub fn iter(&self) -> impl Iterator<Item = (isize, Complex64)> + '_ {
        let lo = -self.max_shift();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (lo + i as isize, v))
    }

    /// CSV with header `tau,real,imag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,real,imag\n");
        for (tau, v) in self.iter() {
            writeln!(out, "{tau},{},{}", format_fixed(v.re), format_fixed(v.im))
                .expect("write to String");
        }
        out
    }
}

/// Fixed-point with 12 decimals; negative zero prints unsigned.
pub fn format_fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Sum of the autocorrelations of every member of `set`, at every shift.
pub fn aacf_sum<'a, I>(set: I) -> Result<CorrelationProfile>
where
    I: IntoIterator<Item = &'a ComplexSequence>,
{
    let mut iter = set.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| GcsError::Argument("empty sequence set".into()))?;
    let len = first.len();
    if len == 0 {
        return Err(GcsError::Argument("sequences must be nonempty".into()));
    }
    let max_shift = len as isize - 1;
    let mut values = vec![Complex64::new(0.0, 0.0); 2 * len - 1];
    let mut add = |seq: &ComplexSequence| {
        // only tau >= 0 is summed; negative shifts follow by conjugation
        for tau in 0..=max_shift {
            values[(tau + max_shift) as usize] += aacf(seq, tau);
        }
    };
    add(first);
    for (idx, seq) in iter.enumerate() {
        if seq.len() != len {
            return Err(GcsError::Argument(format!(
                "member {} has length {}, expected {len}",
                idx + 1,
                seq.len()
            )));
        }
        add(seq);
    }
    for tau in 1..=max_shift {
        values[(max_shift - tau) as usize] = values[(max_shift + tau) as usize].conj();
    }
    Ok(CorrelationProfile { len, values })
}

/// Outcome of [`is_gcs`].
#[derive(Debug, Clone, PartialEq)]
pub struct GcsVerdict {
    pub passed: bool,
    pub tolerance: f64,
    pub flock_size: usize,
    pub length: usize,
    /// Value at `tau = 0`.
    pub peak: Complex64,
    /// Shift of the largest off-peak magnitude; `None` when `L = 1`.
    pub worst_tau: Option<isize>,
    pub worst_magnitude: f64,
}

/// The default zero tolerance `1e-9 * M * L`.
pub fn default_tolerance(flock_size: usize, length: usize) -> f64 {
    1e-9 * (flock_size * length) as f64
}

/// Whether the autocorrelation sum vanishes (within `tol`) at every nonzero
/// shift. The worst offender is reported either way.
pub fn is_gcs<'a, I>(set: I, tol: f64) -> Result<GcsVerdict>
where
    I: IntoIterator<Item = &'a ComplexSequence>,
{
    let seqs: Vec<&ComplexSequence> = set.into_iter().collect();
    let profile = aacf_sum(seqs.iter().copied())?;
    let mut worst_tau = None;
    let mut worst_magnitude = 0.0;
    for tau in 1..=profile.max_shift() {
        let mag = profile.at(tau).norm();
        if worst_tau.is_none() || mag > worst_magnitude {
            worst_tau = Some(tau);
            worst_magnitude = mag;
        }
    }
    Ok(GcsVerdict {
        passed: worst_magnitude <= tol,
        tolerance: tol,
        flock_size: seqs.len(),
        length: profile.len(),
        peak: profile.at(0),
        worst_tau,
        worst_magnitude,
    })
}
