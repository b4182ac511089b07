//! Complex conjugate subspaces (CCS) and projection onto them.
//!
//! The subspace `v_{q,k}` is the column space of the circulant matrix
//! `D_{q,k}` whose columns are the circular shifts of one CCPS period.
//! `D/q` is an orthogonal projector, so projecting an `N`-sample signal
//! (`q | N`) reduces to folding the signal into one length-`q` block,
//! multiplying by `D` and scaling by `1/N`: `q^2 + q` multiplications.
//! The dense Gram-inverse projector is kept as an independent oracle.

use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::number_theory::{divisors, totient, CcpsId};
use crate::sequences::{ccps, exp_pair, periodic_extend, Sequence};

const FACTORIZATION_TOL: f64 = 1e-10;
const GRAM_CONDITION_LIMIT: f64 = 1e12;
/// Relative tolerance for the reconstruction check in [`decompose`].
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Default relative energy threshold for marking a subspace as present.
pub const DEFAULT_ENERGY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    id: CcpsId,
    d: Matrix,
    f: Matrix,
    b: Vec<Vec<Complex64>>,
}

impl SubspaceBasis {
    pub fn id(&self) -> CcpsId {
        self.id
    }

    /// The q x q circulant matrix; column j is the CCPS shifted down by j.
    pub fn d(&self) -> &Matrix {
        &self.d
    }

    /// Real basis: the first `dim` columns of `D`.
    pub fn f(&self) -> &Matrix {
        &self.f
    }

    /// Columns of the complex factor `B` with `D = B B^H`.
    pub fn b_columns(&self) -> &[Vec<Complex64>] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.f.cols()
    }

    /// `B^H B`, which equals `q I`.
    pub fn b_gram(&self) -> Vec<Vec<Complex64>> {
        self.b
            .iter()
            .map(|ci| {
                self.b
                    .iter()
                    .map(|cj| ci.iter().zip(cj).map(|(a, b)| a.conj() * b).sum())
                    .collect()
            })
            .collect()
    }

    /// `D / q`, the orthogonal projector onto the subspace within one period.
    pub fn projector(&self) -> Matrix {
        self.d.scale(1.0 / self.id.q() as f64)
    }
}

fn circulant(c: &Sequence) -> Matrix {
    let q = c.len();
    Matrix::from_fn(q, q, |i, j| c[(i + q - j) % q].re)
}

pub fn build_basis(id: CcpsId) -> Result<SubspaceBasis> {
    let q = id.q();
    let d = circulant(&ccps(id));
    let dim = id.dim();
    let f = Matrix::from_fn(q, dim, |i, j| d[(i, j)]);
    let (s_k, s_conj) = exp_pair(id);
    // B^H has rows [S_{q,q-k}; S_{q,k}], so B has columns [S_{q,k}, S_{q,q-k}]
    let b = if dim == 2 {
        vec![s_k.into_values(), s_conj.into_values()]
    } else {
        vec![s_k.into_values()]
    };
    let mut deviation = 0.0f64;
    for i in 0..q {
        for j in 0..q {
            let v: Complex64 = b.iter().map(|col| col[i] * col[j].conj()).sum();
            deviation = deviation.max((v - Complex64::new(d[(i, j)], 0.0)).norm());
        }
    }
    if deviation > FACTORIZATION_TOL {
        return Err(Error::FactorizationMismatch {
            q,
            k: id.k(),
            deviation,
        });
    }
    Ok(SubspaceBasis { id, d, f, b })
}

fn check_divides(n: usize, id: CcpsId) -> Result<()> {
    if !n.is_multiple_of(id.q()) {
        return Err(Error::LengthMismatch(format!(
            "period {} does not divide signal length {}",
            id.q(),
            n
        )));
    }
    Ok(())
}

/// Projection of `x` onto `v_{q,k}` together with the number of scalar
/// multiplications spent computing it.
pub fn project_fast_counted(x: &Sequence, id: CcpsId) -> Result<(Sequence, usize)> {
    let n = x.len();
    check_divides(n, id)?;
    let q = id.q();
    let c = ccps(id);
    let mut folded = vec![Complex64::new(0.0, 0.0); q];
    for block in x.values().chunks(q) {
        for (acc, v) in folded.iter_mut().zip(block) {
            *acc += v;
        }
    }
    let mut mults = 0usize;
    let inv_n = 1.0 / n as f64;
    let mut y = Vec::with_capacity(q);
    for i in 0..q {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, xj) in folded.iter().enumerate() {
            acc += xj * c[(i + q - j) % q].re;
            mults += 1;
        }
        y.push(acc * inv_n);
        mults += 1;
    }
    Ok((periodic_extend(&Sequence::from_complex(y), n / q), mults))
}

/// Orthogonal projection of `x` onto `v_{q,k}` through the folded block.
pub fn project_fast(x: &Sequence, id: CcpsId) -> Result<Sequence> {
    project_fast_counted(x, id).map(|(y, _)| y)
}

/// `E_{q,k}`: the real basis `F` stacked `n / q` times.
pub fn tiled_basis(basis: &SubspaceBasis, n: usize) -> Result<Matrix> {
    check_divides(n, basis.id())?;
    let q = basis.id().q();
    let f = basis.f();
    Ok(Matrix::from_fn(n, f.cols(), |i, j| f[(i % q, j)]))
}

/// Dense projector `E (E^T E)^-1 E^T` for length `n`.
pub fn projection_matrix_naive(n: usize, id: CcpsId) -> Result<Matrix> {
    check_divides(n, id)?;
    let basis = build_basis(id)?;
    let e = tiled_basis(&basis, n)?;
    let et = e.transpose();
    let gram = &et * &e;
    let condition = gram.condition_estimate();
    if condition.is_nan() || condition > GRAM_CONDITION_LIMIT {
        return Err(Error::SingularGram { condition });
    }
    let gram_inv = gram.inverse()?;
    Ok(&(&e * &gram_inv) * &et)
}

/// The block-tiled projector `(q/N) [P_hat ... P_hat]` with `P_hat = D/q`.
pub fn projection_matrix_tiled(n: usize, id: CcpsId) -> Result<Matrix> {
    check_divides(n, id)?;
    let basis = build_basis(id)?;
    let p_hat = basis.projector();
    let q = id.q();
    let scale = q as f64 / n as f64;
    Ok(Matrix::from_fn(n, n, |i, j| scale * p_hat[(i % q, j % q)]))
}

/// Projection through the explicit Gram-inverse projector; the reference
/// the fast path is checked against.
pub fn project_naive(x: &Sequence, id: CcpsId) -> Result<Sequence> {
    let p = projection_matrix_naive(x.len(), id)?;
    Ok(Sequence::from_complex(p.mul_vec(x.values())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionEntry {
    pub id: CcpsId,
    pub projection: Sequence,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    pub n: usize,
    pub entries: Vec<ProjectionEntry>,
    pub residual_norm: f64,
    pub signal_energy: f64,
}

/// Projects `x` onto every subspace indexed by a divisor of its length.
pub fn decompose(x: &Sequence) -> Result<ProjectionReport> {
    let n = x.len();
    let mut entries = Vec::new();
    let mut sum = Sequence::zeros(n);
    for id in CcpsId::all_for_length(n) {
        let projection = project_fast(x, id)?;
        sum = sum.add(&projection)?;
        let energy = projection.energy();
        entries.push(ProjectionEntry {
            id,
            projection,
            energy,
        });
    }
    let residual_norm = x.sub(&sum)?.norm();
    Ok(ProjectionReport {
        n,
        entries,
        residual_norm,
        signal_energy: x.energy(),
    })
}

impl ProjectionReport {
    pub fn entry(&self, id: CcpsId) -> Option<&ProjectionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Whether the reconstruction residual is within `RESIDUAL_TOL * ||x||`.
    pub fn reconstructs(&self) -> bool {
        self.residual_norm <= RESIDUAL_TOL * self.signal_energy.sqrt()
    }

    /// `energy > threshold * ||x||^2`.
    pub fn is_present(&self, entry: &ProjectionEntry, threshold: f64) -> bool {
        entry.energy > threshold * self.signal_energy
    }

    /// Entries above the threshold, strongest first; ties go to the smaller
    /// q, then the smaller k.
    pub fn ranked(&self, threshold: f64) -> Vec<&ProjectionEntry> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .filter(|e| self.is_present(e, threshold))
            .collect();
        out.sort_by(|a, b| {
            b.energy
                .total_cmp(&a.energy)
                .then(a.id.q().cmp(&b.id.q()))
                .then(a.id.k().cmp(&b.id.k()))
        });
        out
    }

    /// Line-oriented text form. Header lines carry `N`, `residual_norm`,
    /// `signal_energy` and `threshold`; then one `q .. k .. energy ..
    /// present ..` record per subspace, optionally followed by `samples`.
    pub fn to_text(&self, threshold: f64, with_samples: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# ccps projection report");
        let _ = writeln!(out, "N {}", self.n);
        let _ = writeln!(out, "residual_norm {:.11e}", self.residual_norm);
        let _ = writeln!(out, "signal_energy {:.11e}", self.signal_energy);
        let _ = writeln!(out, "threshold {:e}", threshold);
        for e in &self.entries {
            let _ = write!(
                out,
                "q {} k {} energy {:.11e} present {}",
                e.id.q(),
                e.id.k(),
                e.energy,
                u8::from(self.is_present(e, threshold))
            );
            if with_samples {
                out.push_str(" samples");
                let real = e.projection.is_real();
                for v in e.projection.iter() {
                    if real {
                        let _ = write!(out, " {:e}", v.re);
                    } else {
                        let _ = write!(out, " {:e},{:e}", v.re, v.im);
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// One parsed record of a report file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub q: usize,
    pub k: usize,
    pub energy: f64,
    pub present: bool,
    pub samples: Option<Vec<Complex64>>,
}

/// Header and records of a report file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub n: usize,
    pub residual_norm: f64,
    pub signal_energy: f64,
    pub threshold: f64,
    pub records: Vec<ReportRecord>,
}

pub fn parse_report(text: &str) -> std::result::Result<ReportSummary, String> {
    let mut n = None;
    let mut residual_norm = None;
    let mut signal_energy = None;
    let mut threshold = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| format!("line {}: {m}", idx + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(&format!("bad number {s:?}")));
        match fields[0] {
            "N" if fields.len() == 2 => {
                n = Some(fields[1].parse::<usize>().map_err(|_| err("bad N"))?)
            }
            "residual_norm" if fields.len() == 2 => residual_norm = Some(num(fields[1])?),
            "signal_energy" if fields.len() == 2 => signal_energy = Some(num(fields[1])?),
            "threshold" if fields.len() == 2 => threshold = Some(num(fields[1])?),
            "q" if fields.len() >= 8
                && fields[2] == "k"
                && fields[4] == "energy"
                && fields[6] == "present" =>
            {
                let samples = match fields.get(8) {
                    None => None,
                    Some(&"samples") => Some(
                        fields[9..]
                            .iter()
                            .map(|s| match s.split_once(',') {
                                Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
                                None => Ok(Complex64::new(num(s)?, 0.0)),
                            })
                            .collect::<std::result::Result<Vec<_>, String>>()?,
                    ),
                    Some(other) => return Err(err(&format!("unexpected field {other:?}"))),
                };
                records.push(ReportRecord {
                    q: fields[1].parse().map_err(|_| err("bad q"))?,
                    k: fields[3].parse().map_err(|_| err("bad k"))?,
                    energy: num(fields[5])?,
                    present: fields[7] == "1",
                    samples,
                });
            }
            _ => return Err(err("unrecognised line")),
        }
    }
    Ok(ReportSummary {
        n: n.ok_or("missing N")?,
        residual_norm: residual_norm.ok_or("missing residual_norm")?,
        signal_energy: signal_energy.ok_or("missing signal_energy")?,
        threshold: threshold.ok_or("missing threshold")?,
        records,
    })
}

/// Synthesis matrix `T_N`: the `E_{q,k}` blocks side by side, divisors
/// ascending then k ascending, each block ordered (shift 0, shift 1).
pub fn ccpt_matrix(n: usize) -> Result<Matrix> {
    let mut t = Matrix::zeros(n, n);
    let mut col = 0;
    for id in CcpsId::all_for_length(n) {
        let e = tiled_basis(&build_basis(id)?, n)?;
        for j in 0..e.cols() {
            for i in 0..n {
                t[(i, col)] = e[(i, j)];
            }
            col += 1;
        }
    }
    debug_assert_eq!(col, n);
    Ok(t)
}

/// Transform coefficients of an `N`-sample signal, laid out like the
/// columns of [`ccpt_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct CcptCoefficients {
    pub n: usize,
    pub slots: Vec<(CcpsId, Range<usize>)>,
    pub beta: Vec<Complex64>,
}

impl CcptCoefficients {
    pub fn block(&self, id: CcpsId) -> Option<&[Complex64]> {
        self.slots
            .iter()
            .find(|(s, _)| *s == id)
            .map(|(_, r)| &self.beta[r.clone()])
    }
}

fn coefficient_slots(n: usize) -> Vec<(CcpsId, Range<usize>)> {
    let mut start = 0;
    CcpsId::all_for_length(n)
        .into_iter()
        .map(|id| {
            let r = start..start + id.dim();
            start = r.end;
            (id, r)
        })
        .collect()
}

/// Solves `T_N beta = x`.
pub fn ccpt_analyze(x: &Sequence) -> Result<CcptCoefficients> {
    let n = x.len();
    let t = ccpt_matrix(n)?;
    let beta = Lu::factor(&t)?.solve_complex(x.values());
    Ok(CcptCoefficients {
        n,
        slots: coefficient_slots(n),
        beta,
    })
}

/// `T_N beta`.
pub fn ccpt_synthesize(coeffs: &CcptCoefficients) -> Result<Sequence> {
    let t = ccpt_matrix(coeffs.n)?;
    Ok(Sequence::from_complex(t.mul_vec(&coeffs.beta)))
}

/// `E_{q,k} beta_{q,k}` for one coefficient block.
pub fn synthesize_component(id: CcpsId, beta: &[Complex64], n: usize) -> Result<Sequence> {
    let e = tiled_basis(&build_basis(id)?, n)?;
    if beta.len() != e.cols() {
        return Err(Error::LengthMismatch(format!(
            "{} coefficients for a {}-dimensional subspace",
            beta.len(),
            e.cols()
        )));
    }
    Ok(Sequence::from_complex(e.mul_vec(beta)))
}

/// Coefficients of a length-q block `y` in the basis `F`, from the
/// `dim x dim` normal equations `(F^T F) beta = F^T y`.
pub fn block_coefficients(basis: &SubspaceBasis, y: &Sequence) -> Result<Vec<Complex64>> {
    let f = basis.f();
    if y.len() != f.rows() {
        return Err(Error::LengthMismatch(format!(
            "block of length {} for period {}",
            y.len(),
            f.rows()
        )));
    }
    let ft = f.transpose();
    let gram = &ft * f;
    let rhs = ft.mul_vec(y.values());
    Ok(Lu::factor(&gram)?.solve_complex(&rhs))
}

/// Total multiplications to project an `N`-sample signal onto every
/// subspace: `2 + (1/2) sum_{q|N, q>=3} phi(q) (q^2 + q)`, plus 6 more when
/// N is even.
pub fn mult_count(n: usize) -> u64 {
    assert!(n >= 1);
    let base: u64 = if n.is_multiple_of(2) { 8 } else { 2 };
    let sum: u64 = divisors(n)
        .into_iter()
        .filter(|&q| q >= 3)
        .map(|q| {
            let q = q as u64;
            totient(q as usize) as u64 * (q * q + q)
        })
        .sum();
    base + sum / 2
}

/// `floor(N^2.81)`, the dense-inverse comparison figure.
pub fn strassen_reference(n: usize) -> u64 {
    (n as f64).powf(2.81).floor() as u64
}
