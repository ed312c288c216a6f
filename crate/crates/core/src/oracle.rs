//! Reference implementations that share no code with the main pipeline.
//!
//! Everything here is written straight from the defining sums with 1-based
//! index arithmetic, so agreement with [`crate::correlation`] and
//! [`crate::construct`] is meaningful.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlation::accf;
use crate::ebf::{ComplexSequence, ZqSequence};
use crate::error::{GcsError, Result};

/// Largest candidate space [`exhaustive_tiny_search`] will enumerate.
pub const SEARCH_SPACE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub input: String,
    pub library: Complex64,
    pub oracle: Complex64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub cases_run: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Cross-correlation by literal index translation of the defining sum.
pub fn naive_accf(a: &ComplexSequence, b: &ComplexSequence, tau: isize) -> Result<Complex64> {
    let l = a.len() as isize;
    if b.len() as isize != l {
        return Err(GcsError::Argument(format!(
            "sequence lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let at = |s: &ComplexSequence, i: isize| s.values()[(i - 1) as usize];
    let mut sum = Complex64::new(0.0, 0.0);
    if 0 <= tau && tau < l {
        let mut i = 1;
        while i <= l - tau {
            sum += at(a, i) * at(b, i + tau).conj();
            i += 1;
        }
    } else if -l < tau && tau < 0 {
        let mut i = 1;
        while i <= l + tau {
            sum += at(a, i - tau) * at(b, i).conj();
            i += 1;
        }
    }
    Ok(sum)
}

/// Runs `cases` random comparisons of [`accf`] against [`naive_accf`] with
/// `q` in `2..=12`, `L <= 64` and `tau` spanning beyond both ends.
pub fn accf_agreement(cases: usize, seed: u64, tol: f64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    for _ in 0..cases {
        let q = rng.gen_range(2..=12u64);
        let l = rng.gen_range(1..=64usize);
        let draw = |rng: &mut ChaCha8Rng| {
            let v = (0..l).map(|_| rng.gen_range(0..q)).collect();
            ZqSequence::new(q, v).expect("reduced").to_complex()
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let tau = rng.gen_range(-(l as isize) - 2..=l as isize + 2);
        let library = accf(&a, &b, tau).expect("equal lengths");
        let oracle = naive_accf(&a, &b, tau).expect("equal lengths");
        report.cases_run += 1;
        if (library - oracle).norm() > tol {
            report.mismatches.push(Mismatch {
                input: format!("q={q} L={l} tau={tau}"),
                library,
                oracle,
            });
        }
    }
    report
}

/// `zeta_q^e` as a Gaussian integer, for `q` in `{1, 2, 4}`.
fn gaussian_root(q: u64, e: u64) -> Option<(i64, i64)> {
    match (q, e % q.max(1)) {
        (1, _) => Some((1, 0)),
        (2, 0) | (4, 0) => Some((1, 0)),
        (2, 1) | (4, 2) => Some((-1, 0)),
        (4, 1) => Some((0, 1)),
        (4, 3) => Some((0, -1)),
        _ => None,
    }
}

/// Exact autocorrelation sums for shifts `0..L` as Gaussian integers, or
/// `None` if the alphabet is not a subset of `{1, i, -1, -i}`.
pub fn exact_aacf_sum(set: &[ZqSequence]) -> Option<Vec<(i64, i64)>> {
    let l = set.first()?.len();
    let mut sums = vec![(0i64, 0i64); l];
    for seq in set {
        if seq.len() != l {
            return None;
        }
        let g: Vec<(i64, i64)> = seq
            .values()
            .iter()
            .map(|&v| gaussian_root(seq.q(), v))
            .collect::<Option<_>>()?;
        for (tau, slot) in sums.iter_mut().enumerate() {
            for i in 0..l - tau {
                let (ar, ai) = g[i];
                let (br, bi) = g[i + tau];
                // a * conj(b)
                slot.0 += ar * br + ai * bi;
                slot.1 += ai * br - ar * bi;
            }
        }
    }
    Some(sums)
}

/// Complementarity check built on the oracles only: exact for alphabets
/// inside `{1, i, -1, -i}`, otherwise [`naive_accf`] with tolerance `tol`.
pub fn naive_is_gcs(set: &[ZqSequence], tol: f64) -> bool {
    if set.is_empty() {
        return false;
    }
    if let Some(sums) = exact_aacf_sum(set) {
        return sums.iter().skip(1).all(|&s| s == (0, 0));
    }
    let l = set[0].len();
    if set.iter().any(|s| s.len() != l) {
        return false;
    }
    let complex: Vec<ComplexSequence> = set.iter().map(ZqSequence::to_complex).collect();
    (1..l as isize).all(|tau| {
        let s: Complex64 = complex
            .iter()
            .map(|a| naive_accf(a, a, tau).expect("equal lengths"))
            .sum();
        s.norm() <= tol
    })
}

/// The 16 quaternary sequences of length 19 from
/// `x1 x2 + 3 x1 x2 x3 + g1 x1 + g2 x3 mod 4`, evaluated inline. Row `r` has
/// `g1 = r mod 4`, `g2 = r div 4`.
pub fn direct_length19_quaternary() -> [[u64; 19]; 16] {
    let mut rows = [[0u64; 19]; 16];
    for (r, row) in rows.iter_mut().enumerate() {
        let (g1, g2) = ((r % 4) as u64, (r / 4) as u64);
        for (i, entry) in row.iter_mut().enumerate() {
            let i = i as u64;
            let (x1, x2, x3) = (i % 4, (i / 4) % 4, i / 16);
            *entry = (x1 * x2 + 3 * x1 * x2 * x3 + g1 * x1 + g2 * x3) % 4;
        }
    }
    rows
}

/// Every complementary set of `flock` sequences of length `len` over `Z_q`.
///
/// All `q^(len * flock)` tuples are enumerated; each set is returned once,
/// with members in nondecreasing lexicographic order. Requires `len <= 4`,
/// `flock <= 2` and a candidate space of at most [`SEARCH_SPACE_LIMIT`].
pub fn exhaustive_tiny_search(q: u64, len: usize, flock: usize) -> Result<Vec<Vec<ZqSequence>>> {
    if q < 2 {
        return Err(GcsError::Argument(format!(
            "modulus q = {q} must be at least 2"
        )));
    }
    if len == 0 || flock == 0 {
        return Err(GcsError::Argument(
            "length and flock size must be positive".into(),
        ));
    }
    if len > 4 || flock > 2 {
        return Err(GcsError::BoundExceeded(format!(
            "search limited to L <= 4 and M <= 2, got L = {len}, M = {flock}"
        )));
    }
    let space = (q as u128).pow((len * flock) as u32);
    if space > SEARCH_SPACE_LIMIT as u128 {
        return Err(GcsError::BoundExceeded(format!(
            "{space} candidates exceed {SEARCH_SPACE_LIMIT}"
        )));
    }
    let per_seq = q.pow(len as u32);
    let decode = |mut code: u64| -> Vec<u64> {
        (0..len)
            .map(|_| {
                let v = code % q;
                code /= q;
                v
            })
            .collect()
    };
    let found: Vec<Vec<ZqSequence>> = (0..space as u64)
        .into_par_iter()
        .filter_map(|n| {
            let codes: Vec<u64> = (0..flock)
                .map(|j| (n / per_seq.pow(j as u32)) % per_seq)
                .collect();
            let members: Vec<Vec<u64>> = codes.iter().map(|&c| decode(c)).collect();
            if members.windows(2).any(|w| w[0] > w[1]) {
                return None;
            }
            let set: Vec<ZqSequence> = members
                .into_iter()
                .map(|v| ZqSequence::new(q, v).expect("reduced"))
                .collect();
            naive_is_gcs(&set, 1e-9).then_some(set)
        })
        .collect();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(bits: &[i8]) -> ComplexSequence {
        ComplexSequence::new(
            bits.iter()
                .map(|&b| Complex64::new(b as f64, 0.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn mirrors_the_reference_examples() {
        let a = binary(&[1, 1, 1, -1]);
        assert!((naive_accf(&a, &a, 1).unwrap() - 1.0).norm() < 1e-12);
        assert!((naive_accf(&a, &a, 0).unwrap() - 4.0).norm() < 1e-12);
        assert!(naive_accf(&a, &a, 4).unwrap().norm() < 1e-12);
        assert!(naive_accf(&a, &a, -4).unwrap().norm() < 1e-12);
        assert!((naive_accf(&a, &a, -3).unwrap() + 1.0).norm() < 1e-12);
        assert!(naive_accf(&a, &binary(&[1]), 0).is_err());
    }

    #[test]
    fn agrees_with_library_kernel() {
        let report = accf_agreement(300, 99, 1e-12);
        assert_eq!(report.cases_run, 300);
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn direct_rows_match_known_values() {
        let rows = direct_length19_quaternary();
        assert_eq!(
            rows[0],
            [0, 0, 0, 0, 0, 1, 2, 3, 0, 2, 0, 2, 0, 3, 2, 1, 0, 0, 0]
        );
        assert_eq!(
            rows[15],
            [0, 3, 2, 1, 0, 0, 0, 0, 0, 1, 2, 3, 0, 2, 0, 2, 3, 2, 1]
        );
    }

    #[test]
    fn exact_sums_for_quaternary_pair() {
        // (1, 1, 1, -1) and (1, 1, -1, 1)
        let a = ZqSequence::new(2, vec![0, 0, 0, 1]).unwrap();
        let b = ZqSequence::new(2, vec![0, 0, 1, 0]).unwrap();
        assert_eq!(
            exact_aacf_sum(&[a.clone(), b.clone()]).unwrap(),
            vec![(8, 0), (0, 0), (0, 0), (0, 0)]
        );
        assert!(naive_is_gcs(&[a, b], 0.0));
        let c = ZqSequence::new(3, vec![0, 1]).unwrap();
        assert!(exact_aacf_sum(&[c]).is_none());
    }

    #[test]
    fn tiny_binary_search() {
        let sets = exhaustive_tiny_search(2, 2, 2).unwrap();
        assert!(!sets.is_empty());
        let want = vec![
            ZqSequence::new(2, vec![0, 0]).unwrap(),
            ZqSequence::new(2, vec![0, 1]).unwrap(),
        ];
        assert!(sets.contains(&want));
        assert!(sets.iter().all(|s| naive_is_gcs(s, 0.0)));
        // one sequence with rho(1) = +1 and one with rho(1) = -1
        assert_eq!(sets.len(), 4);
    }

    #[test]
    fn length_three_search_is_self_certifying() {
        let sets = exhaustive_tiny_search(2, 3, 2).unwrap();
        for set in &sets {
            let exact = exact_aacf_sum(set).unwrap();
            assert!(exact[1..].iter().all(|&s| s == (0, 0)));
        }
        let sets = exhaustive_tiny_search(3, 3, 2).unwrap();
        assert!(sets.iter().all(|s| naive_is_gcs(s, 1e-9)));
    }

    #[test]
    fn search_refuses_large_spaces() {
        assert!(matches!(
            exhaustive_tiny_search(2, 10, 2),
            Err(GcsError::BoundExceeded(_))
        ));
        assert!(matches!(
            exhaustive_tiny_search(2, 2, 3),
            Err(GcsError::BoundExceeded(_))
        ));
        assert!(matches!(
            exhaustive_tiny_search(8, 4, 2),
            Err(GcsError::BoundExceeded(_))
        ));
    }
}
