//! Derivative-equivalent filtering with CCPS kernels.
//!
//! Convolving with one period of `c_{q,k}` (q > 1) behaves as a first
//! derivative: zero on constants, non-zero at a step, and the constant
//! `M q` along a ramp. For odd `q`, shifting the kernel circularly by
//! `(q - 1) / 2` cancels the ramp response and yields a second derivative.

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::number_theory::CcpsId;
use crate::sequences::{amplitude, ccps, circular_shift, cos_frac, ramanujan_sum, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

impl DerivativeOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            DerivativeOrder::First => 1,
            DerivativeOrder::Second => 2,
        }
    }
}

impl TryFrom<u8> for DerivativeOrder {
    type Error = u8;

    fn try_from(v: u8) -> std::result::Result<Self, u8> {
        match v {
            1 => Ok(DerivativeOrder::First),
            2 => Ok(DerivativeOrder::Second),
            other => Err(other),
        }
    }
}

/// Where the kernel taps come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    /// A single conjugate pair sum.
    Ccps(CcpsId),
    /// The Ramanujan sum of period q, i.e. the sum of every CCPS of that period.
    Ramanujan(usize),
}

impl KernelSource {
    pub fn q(self) -> usize {
        match self {
            KernelSource::Ccps(id) => id.q(),
            KernelSource::Ramanujan(q) => q,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeKernel {
    source: KernelSource,
    order: DerivativeOrder,
    taps: Sequence,
}

impl DerivativeKernel {
    pub fn source(&self) -> KernelSource {
        self.source
    }

    pub fn order(&self) -> DerivativeOrder {
        self.order
    }

    pub fn taps(&self) -> &Sequence {
        &self.taps
    }

    pub fn q(&self) -> usize {
        self.taps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// Raw linear convolution, `len(x) + q - 1` samples.
    Full,
    /// `len(x)` samples, kernel centred.
    Same,
}

fn check_order(q: usize, order: DerivativeOrder) -> Result<()> {
    let o = order.as_u8();
    match order {
        DerivativeOrder::First if q < 2 => Err(Error::UnsupportedOrder {
            q,
            order: o,
            reason: "first-order kernels need q >= 2",
        }),
        DerivativeOrder::Second if q < 3 || q.is_multiple_of(2) => Err(Error::UnsupportedOrder {
            q,
            order: o,
            reason: "second-order kernels need odd q >= 3",
        }),
        _ => Ok(()),
    }
}

fn shape_taps(base: Sequence, order: DerivativeOrder) -> Sequence {
    match order {
        DerivativeOrder::First => base,
        DerivativeOrder::Second => {
            let m = (base.len() - 1) / 2;
            circular_shift(&base, m as i64)
        }
    }
}

pub fn make_kernel(id: CcpsId, order: DerivativeOrder) -> Result<DerivativeKernel> {
    check_order(id.q(), order)?;
    Ok(DerivativeKernel {
        source: KernelSource::Ccps(id),
        order,
        taps: shape_taps(ccps(id), order),
    })
}

/// Kernel built from the Ramanujan sum of period `q`. By linearity its
/// response equals the sum of the responses of every CCPS kernel of that
/// period.
pub fn make_ramanujan_kernel(q: usize, order: DerivativeOrder) -> Result<DerivativeKernel> {
    check_order(q, order)?;
    Ok(DerivativeKernel {
        source: KernelSource::Ramanujan(q),
        order,
        taps: shape_taps(ramanujan_sum(q)?, order),
    })
}

/// Full linear convolution, `y(n) = sum_l h(l) x(n - l)`.
pub fn linear_convolve(x: &Sequence, h: &Sequence) -> Sequence {
    let (xv, hv) = (x.values(), h.values());
    let mut out = vec![Complex64::new(0.0, 0.0); xv.len() + hv.len() - 1];
    for (i, xi) in xv.iter().enumerate() {
        for (j, hj) in hv.iter().enumerate() {
            out[i + j] += xi * hj;
        }
    }
    Sequence::from_complex(out)
}

/// Full-mode output indices where the kernel overlaps the data completely.
pub fn interior_range(input_len: usize, q: usize) -> Range<usize> {
    q.saturating_sub(1)..input_len
}

pub fn filter_signal(x: &Sequence, kernel: &DerivativeKernel, mode: FilterMode) -> Result<Sequence> {
    let q = kernel.q();
    if x.len() < q {
        return Err(Error::InputTooShort { len: x.len(), q });
    }
    let full = linear_convolve(x, kernel.taps());
    Ok(match mode {
        FilterMode::Full => full,
        FilterMode::Same => {
            let lead = (q - 1) / 2;
            Sequence::from_complex(full.values()[lead..lead + x.len()].to_vec())
        }
    })
}

/// `sum_{l=0}^{q-1} l * c_{q,k}((l - m) mod q)` by direct summation.
///
/// Convolving a ramp `x(n) = n` with the `m`-shifted kernel gives, in the
/// interior, exactly the negative of this value.
pub fn ramp_moment(id: CcpsId, m: usize) -> f64 {
    let c = ccps(id);
    let q = id.q();
    (0..q)
        .map(|l| l as f64 * c[(l + q - m % q) % q].re)
        .sum()
}

/// Closed form of [`ramp_moment`] valid for `1 <= m <= q - 1`:
/// `M q / (1 - cos v) * (cos(u + v) - cos u)` with `u = 2 pi k m / q`,
/// `v = 2 pi k / q`.
pub fn ramp_moment_closed_form(id: CcpsId, m: usize) -> f64 {
    let (q, k) = (id.q(), id.k());
    let cos_u = cos_frac(k * m % q, q);
    let cos_uv = cos_frac(k * (m + 1) % q, q);
    let cos_v = cos_frac(k % q, q);
    amplitude(q) * q as f64 / (1.0 - cos_v) * (cos_uv - cos_u)
}
