//! Finite sequences and the generators built on them: complex conjugate
//! pair sums, their exponential pairs, Ramanujan sums, circular shifts and
//! periodic extension.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::number_theory::{half_residues, CcpsId};

/// A non-empty finite sequence of complex samples.
///
/// Real-valued carriers keep every imaginary part exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    values: Vec<Complex64>,
}

impl Sequence {
    /// Panics when `values` is empty.
    pub fn from_complex(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "a sequence holds at least one sample");
        Self { values }
    }

    /// Panics when `values` is empty.
    pub fn from_real(values: Vec<f64>) -> Self {
        Self::from_complex(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_real(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Real parts of every sample.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.values.iter()
    }

    /// Squared Euclidean norm.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `sum_n self(n) * conj(other(n))`.
    pub fn inner(&self, other: &Sequence) -> Result<Complex64> {
        self.check_same_len(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn add(&self, other: &Sequence) -> Result<Sequence> {
        self.check_same_len(other)?;
        Ok(Sequence::from_complex(
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Sequence) -> Result<Sequence> {
        self.check_same_len(other)?;
        Ok(Sequence::from_complex(
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> Sequence {
        Sequence::from_complex(self.values.iter().map(|v| v * factor).collect())
    }

    pub fn scale_real(&self, factor: f64) -> Sequence {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Largest per-sample modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Sequence) -> Result<f64> {
        self.check_same_len(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same_len(&self, other: &Sequence) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(format!(
                "sequences of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Plain-text form: one sample per line, `re` for real sequences and
    /// `re imag` otherwise.
    pub fn to_text(&self) -> String {
        let real = self.is_real();
        let mut out = String::new();
        for v in &self.values {
            if real {
                let _ = writeln!(out, "{}", fmt_f64(v.re));
            } else {
                let _ = writeln!(out, "{} {}", fmt_f64(v.re), fmt_f64(v.im));
            }
        }
        out
    }

    /// Parses the plain-text form. Blank lines and `#` comments are ignored;
    /// a line holds either one real value or an `re imag` pair.
    pub fn parse_text(text: &str) -> std::result::Result<Sequence, ParseError> {
        let mut values = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| ParseError {
                    line: lineno,
                    message: format!("not a number: {s:?}"),
                })
            };
            let v = match fields.as_slice() {
                [re] => Complex64::new(parse(re)?, 0.0),
                [re, im] => Complex64::new(parse(re)?, parse(im)?),
                _ => {
                    return Err(ParseError {
                        line: lineno,
                        message: format!("expected 1 or 2 fields, found {}", fields.len()),
                    })
                }
            };
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(ParseError {
                    line: lineno,
                    message: "non-finite value".into(),
                });
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(ParseError {
                line: 0,
                message: "no samples".into(),
            });
        }
        Ok(Sequence::from_complex(values))
    }
}

impl Index<usize> for Sequence {
    type Output = Complex64;

    fn index(&self, n: usize) -> &Complex64 {
        &self.values[n]
    }
}

/// Failure to parse a sequence text file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Shortest round-trip decimal form of a sample, negative zero folded to `0`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// The CCPS amplitude factor: 1/2 for q in {1, 2}, 1 otherwise.
pub fn amplitude(q: usize) -> f64 {
    if q <= 2 {
        0.5
    } else {
        1.0
    }
}

/// `cos(2 pi r / q)` for an integer residue `r`, folded so that
/// `cos_frac(r, q) == cos_frac(q - r, q)` bit for bit and quarter turns
/// land on exact zeros.
pub(crate) fn cos_frac(r: usize, q: usize) -> f64 {
    let r = r % q;
    let r = r.min(q - r);
    match (4 * r).cmp(&q) {
        std::cmp::Ordering::Less => (2.0 * PI * r as f64 / q as f64).cos(),
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Greater => -(PI * (q - 2 * r) as f64 / q as f64).cos(),
    }
}

/// `sin(2 pi r / q)` through `cos(2 pi (4r - q) / 4q)`.
pub(crate) fn sin_frac(r: usize, q: usize) -> f64 {
    let r = r % q;
    let shifted = (4 * r + 3 * q) % (4 * q);
    cos_frac(shifted, 4 * q)
}

/// One period `c_{q,k}(n) = 2M cos(2 pi k n / q)`, n = 0..q-1.
pub fn ccps(id: CcpsId) -> Sequence {
    let (q, k) = (id.q(), id.k());
    let scale = 2.0 * amplitude(q);
    Sequence::from_real((0..q).map(|n| scale * cos_frac(k * n % q, q)).collect())
}

/// The conjugate pair `(S_{q,k}, S_{q,q-k})` with `S_{q,k}(n) = e^{j 2 pi k n / q}`.
pub fn exp_pair(id: CcpsId) -> (Sequence, Sequence) {
    let (q, k) = (id.q(), id.k());
    let expo = |freq: usize| {
        Sequence::from_complex(
            (0..q)
                .map(|n| {
                    let r = freq * n % q;
                    Complex64::new(cos_frac(r, q), sin_frac(r, q))
                })
                .collect(),
        )
    };
    (expo(k % q), expo((q - k % q) % q))
}

const RAMANUJAN_SNAP: f64 = 1e-9;

/// Ramanujan sum `c_q(n)` as the sum of CCPS over `k` in the half residue
/// set, snapped to exact integers.
pub fn ramanujan_sum(q: usize) -> Result<Sequence> {
    let mut acc = vec![0.0; q];
    for k in half_residues(q) {
        let term = ccps(CcpsId::new(q, k)?);
        for (a, v) in acc.iter_mut().zip(term.iter()) {
            *a += v.re;
        }
    }
    for (n, a) in acc.iter_mut().enumerate() {
        let rounded = a.round();
        if (*a - rounded).abs() > RAMANUJAN_SNAP {
            return Err(Error::NonIntegerRamanujan { q, n, value: *a });
        }
        *a = rounded + 0.0;
    }
    Ok(Sequence::from_real(acc))
}

/// Circular downshift: `out(n) = x((n - l) mod len)`.
pub fn circular_shift(x: &Sequence, l: i64) -> Sequence {
    let len = x.len();
    let shift = l.rem_euclid(len as i64) as usize;
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&x.values[len - shift..]);
    out.extend_from_slice(&x.values[..len - shift]);
    Sequence::from_complex(out)
}

/// `x` repeated `reps` times back to back.
pub fn periodic_extend(x: &Sequence, reps: usize) -> Sequence {
    assert!(reps >= 1, "periodic extension needs at least one repetition");
    Sequence::from_complex(x.values.repeat(reps))
}
