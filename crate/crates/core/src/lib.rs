//! Golay complementary sets of arbitrary length and alphabet size.
//!
//! Sequences come from extended Boolean functions `Z_p^m -> Z_q` ([`ebf`]).
//! [`construct`] derives a `(q, p^k, L)` complementary set for any `L >= p`
//! and any `q` divisible by `p`; [`correlation`] and [`pmepr`] verify the
//! sidelobe and envelope-power properties, and [`oracle`] holds independent
//! reference routines used to cross-check them.

pub mod construct;
pub mod correlation;
pub mod ebf;
pub mod error;
pub mod export;
pub mod oracle;
pub mod pmepr;
pub mod sweep;

pub use construct::{
    build_coset, build_f, build_gcs, compute_k, dedupe, infer_m, GcsMember, GcsParams, GcsSet,
};
pub use correlation::{
    aacf, aacf_sum, accf, default_tolerance, is_gcs, CorrelationProfile, GcsVerdict,
};
pub use ebf::{p_ary_digits, ComplexSequence, Ebf, ZqSequence};
pub use error::{GcsError, Result};
pub use pmepr::{envelope_power, pmepr, pmepr_report, EnvelopeGrid, PmeprReport};
