//! Circular correlation identities for conjugate pair sums and their
//! subspaces.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::number_theory::CcpsId;
use crate::subspace::project_fast;
use crate::sequences::{periodic_extend, Sequence};

/// Tolerance for subspace membership and closure checks.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// One DFT bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    pub bin: usize,
    pub value: Complex64,
}

/// Direct `O(L^2)` DFT, `X(K) = sum_n x(n) e^{-j 2 pi K n / L}`.
pub fn dft(x: &Sequence) -> Vec<SpectrumLine> {
    let len = x.len();
    (0..len)
        .map(|bin| {
            let value = x
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    let r = (bin * n) % len;
                    v * Complex64::from_polar(1.0, -2.0 * PI * r as f64 / len as f64)
                })
                .sum();
            SpectrumLine { bin, value }
        })
        .collect()
}

/// `r_xy(l) = sum_n x(n) conj(y((n - l) mod L))`.
pub fn circ_xcorr(x: &Sequence, y: &Sequence) -> Result<Sequence> {
    let len = x.len();
    if y.len() != len {
        return Err(Error::LengthMismatch(format!(
            "cross-correlation of lengths {} and {}",
            len,
            y.len()
        )));
    }
    Ok(Sequence::from_complex(
        (0..len)
            .map(|l| {
                (0..len)
                    .map(|n| x[n] * y[(n + len - l) % len].conj())
                    .sum()
            })
            .collect(),
    ))
}

fn membership_deviation(x: &Sequence, id: CcpsId) -> Result<f64> {
    let p = project_fast(x, id)?;
    p.max_abs_diff(x)
}

/// Cross-correlates two members of `v_{q,k}` and confirms that the result
/// stays in the subspace.
pub fn ccs_closure_check(x: &Sequence, y: &Sequence, id: CcpsId) -> Result<Sequence> {
    let q = id.q();
    if x.len() != q || y.len() != q {
        return Err(Error::LengthMismatch(format!(
            "closure check needs length-{q} inputs, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    for (which, s) in [("x", x), ("y", y)] {
        let deviation = membership_deviation(s, id)?;
        if deviation > MEMBERSHIP_TOL {
            return Err(Error::NotInSubspace {
                which,
                q,
                k: id.k(),
                deviation,
            });
        }
    }
    let r = circ_xcorr(x, y)?;
    let deviation = membership_deviation(&r, id)?;
    if deviation > MEMBERSHIP_TOL {
        return Err(Error::NotInSubspace {
            which: "cross-correlation",
            q,
            k: id.k(),
            deviation,
        });
    }
    Ok(r)
}

/// Both sides of the autocorrelation decomposition:
/// `lhs = r_x / N` and `rhs = sum_{q|N, k} r_{y_{q,k}} / q`, where
/// `y_{q,k}` is one period of the projection of `x` onto `v_{q,k}` and its
/// length-q autocorrelation is read periodically over the N lags.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSplit {
    pub lhs: Sequence,
    pub rhs: Sequence,
}

impl AutocorrSplit {
    pub fn max_discrepancy(&self) -> f64 {
        self.lhs
            .max_abs_diff(&self.rhs)
            .expect("both sides share the signal length")
    }
}

pub fn autocorr_decompose(x: &Sequence) -> Result<AutocorrSplit> {
    let n = x.len();
    let lhs = circ_xcorr(x, x)?.scale_real(1.0 / n as f64);
    let mut rhs = Sequence::zeros(n);
    for id in CcpsId::all_for_length(n) {
        let q = id.q();
        let p = project_fast(x, id)?;
        let period = Sequence::from_complex(p.values()[..q].to_vec());
        let r = circ_xcorr(&period, &period)?.scale_real(1.0 / q as f64);
        rhs = rhs.add(&periodic_extend(&r, n / q))?;
    }
    Ok(AutocorrSplit { lhs, rhs })
}
