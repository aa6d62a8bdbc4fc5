//! Checking the correspondence on many complexes at once.

use crate::algebra::Torus;
use crate::complex::Complex;
use crate::curves::{compare, fast_double, Verdict};
use crate::doubling::double_cfd_via_oracle;
use crate::error::{Result, StageExt};
use crate::par;
use crate::segments::decompose_cfd;

/// Both routes on one cfd complex.
pub fn verify_cfd(cfd: &Complex<Torus>) -> Result<Verdict> {
    let dec = decompose_cfd(cfd).stage("segments")?;
    let fast = fast_double(&dec).stage("fast path")?;
    let oracle = double_cfd_via_oracle(cfd)?;
    Ok(compare(fast, oracle))
}

/// Verdicts in input order, computed on the thread pool when the `parallel` feature is on.
pub fn verify_many(cfds: &[Complex<Torus>]) -> Vec<Result<Verdict>> {
    par::map(cfds, verify_cfd)
}

pub fn verify_many_seq(cfds: &[Complex<Torus>]) -> Vec<Result<Verdict>> {
    par::map_seq(cfds, verify_cfd)
}
