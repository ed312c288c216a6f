//! Peak-to-mean envelope power of multicarrier-modulated sequences.
//!
//! The envelope of `a` is `S(u) = sum_i zeta_q^{a_i} exp(2 pi i (i-1) u)` for
//! the normalized time `u` in `[0, 1)`; the carrier offset is a unit-modulus
//! factor and is dropped. The supremum is approximated on the grid
//! `u_j = j / (oversampling * L)`, which is one inverse DFT of the zero-padded
//! symbol vector.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::construct::GcsSet;
use crate::correlation::format_fixed;
use crate::ebf::ZqSequence;
use crate::error::{GcsError, Result};

pub const DEFAULT_OVERSAMPLING: usize = 64;

/// Slack allowed above the flock-size bound.
pub const BOUND_SLACK: f64 = 1e-6;

/// Sampled envelope power `|S(u_j)|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeGrid {
    pub oversampling: usize,
    pub powers: Vec<f64>,
}

impl EnvelopeGrid {
    /// `u_j` of sample `j`.
    pub fn time(&self, j: usize) -> f64 {
        j as f64 / self.powers.len() as f64
    }
}

/// Grid sample `oversampling * r + s` is the length-`L` inverse DFT, at bin
/// `r`, of the symbols twisted by `exp(2 pi i n s / (oversampling * L))`.
struct Envelope {
    fft: Arc<dyn Fft<f64>>,
    twiddles: Vec<Complex64>,
    len: usize,
    oversampling: usize,
}

impl Envelope {
    fn new(len: usize, oversampling: usize) -> Result<Self> {
        if oversampling == 0 {
            return Err(GcsError::Argument("oversampling must be at least 1".into()));
        }
        let n = len
            .checked_mul(oversampling)
            .ok_or_else(|| GcsError::BoundExceeded("grid size overflows".into()))?;
        let fft = FftPlanner::new().plan_fft_inverse(len);
        let twiddles = (0..oversampling)
            .flat_map(|s| {
                (0..len).map(move |i| {
                    Complex64::from_polar(1.0, 2.0 * PI * ((i * s) % n) as f64 / n as f64)
                })
            })
            .collect();
        Ok(Self {
            fft,
            twiddles,
            len,
            oversampling,
        })
    }

    fn for_each_power(&self, a: &ZqSequence, mut visit: impl FnMut(usize, f64)) -> Result<()> {
        if a.len() != self.len {
            return Err(GcsError::Argument(format!(
                "sequence length {} differs from {}",
                a.len(),
                self.len
            )));
        }
        let symbols = a.to_complex();
        let mut buf: Vec<Complex64> = self
            .twiddles
            .chunks_exact(self.len)
            .flat_map(|tw| symbols.values().iter().zip(tw).map(|(sym, w)| sym * w))
            .collect();
        // one unnormalized inverse transform per chunk: sum_n x_n exp(+2 pi i n r / L)
        self.fft.process(&mut buf);
        for (s, chunk) in buf.chunks_exact(self.len).enumerate() {
            for (r, v) in chunk.iter().enumerate() {
                visit(self.oversampling * r + s, v.norm_sqr());
            }
        }
        Ok(())
    }

    fn grid(&self, a: &ZqSequence) -> Result<EnvelopeGrid> {
        let mut powers = vec![0.0; self.len * self.oversampling];
        self.for_each_power(a, |j, pw| powers[j] = pw)?;
        Ok(EnvelopeGrid {
            oversampling: self.oversampling,
            powers,
        })
    }

    fn pmepr(&self, a: &ZqSequence) -> Result<f64> {
        let mut peak: f64 = 0.0;
        self.for_each_power(a, |_, pw| peak = peak.max(pw))?;
        Ok(peak / self.len as f64)
    }
}

pub fn envelope_power(a: &ZqSequence, oversampling: usize) -> Result<EnvelopeGrid> {
    Envelope::new(a.len(), oversampling)?.grid(a)
}

/// Peak envelope power over the grid divided by the mean power `L`.
pub fn pmepr(a: &ZqSequence, oversampling: usize) -> Result<f64> {
    Envelope::new(a.len(), oversampling)?.pmepr(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PmeprEntry {
    pub index: usize,
    pub gamma: Option<Vec<u64>>,
    pub pmepr: f64,
}

/// Per-member values checked against the flock-size bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PmeprReport {
    pub entries: Vec<PmeprEntry>,
    pub max: f64,
    /// Number of members in the set.
    pub bound: f64,
}

impl PmeprReport {
    pub fn within_bound(&self) -> bool {
        self.max <= self.bound + BOUND_SLACK
    }

    /// CSV with header `member_index,gamma,pmepr`; gamma is a quoted comma list.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("member_index,gamma,pmepr\n");
        for e in &self.entries {
            let gamma = e
                .gamma
                .as_ref()
                .map(|g| {
                    let parts: Vec<String> = g.iter().map(u64::to_string).collect();
                    format!("\"{}\"", parts.join(","))
                })
                .unwrap_or_default();
            writeln!(out, "{},{gamma},{}", e.index, format_fixed(e.pmepr))
                .expect("write to String");
        }
        out
    }
}

/// PMEPR of each sequence, keeping the supplied coset labels.
pub fn pmepr_report_labeled(
    members: Vec<(Option<Vec<u64>>, &ZqSequence)>,
    oversampling: usize,
) -> Result<PmeprReport> {
    let len = members
        .first()
        .map(|(_, s)| s.len())
        .ok_or_else(|| GcsError::Argument("empty sequence set".into()))?;
    let env = Envelope::new(len, oversampling)?;
    let entries = members
        .into_par_iter()
        .enumerate()
        .map(|(index, (gamma, seq))| {
            Ok(PmeprEntry {
                index,
                gamma,
                pmepr: env.pmepr(seq)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = entries.iter().map(|e| e.pmepr).fold(0.0, f64::max);
    Ok(PmeprReport {
        bound: entries.len() as f64,
        entries,
        max,
    })
}

/// PMEPR of every member of a constructed set.
pub fn pmepr_report(set: &GcsSet, oversampling: usize) -> Result<PmeprReport> {
    pmepr_report_labeled(
        set.members
            .iter()
            .map(|m| (Some(m.gamma.clone()), &m.zq))
            .collect(),
        oversampling,
    )
}

/// As [`pmepr_report`], for unlabeled sequences.
pub fn pmepr_report_sequences(seqs: &[ZqSequence], oversampling: usize) -> Result<PmeprReport> {
    pmepr_report_labeled(seqs.iter().map(|s| (None, s)).collect(), oversampling)
}
