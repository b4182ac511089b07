//! Acceptance suite. Each criterion runs against its fixed tolerance and
//! time limit and prints one PASS/FAIL line; the process fails if any
//! criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ccps_core::correlation::{autocorr_decompose, ccs_closure_check, circ_xcorr, dft};
use ccps_core::derivative::{
    filter_signal, interior_range, make_kernel, ramp_moment, DerivativeOrder, FilterMode,
};
use ccps_core::imageio::{read_pgm, write_pgm, GrayImage, PgmFormat};
use ccps_core::number_theory::half_residues;
use ccps_core::sequences::{amplitude, ccps, circular_shift, Sequence};
use ccps_core::subspace::{
    build_basis, ccpt_analyze, ccpt_synthesize, mult_count, project_fast, project_fast_counted,
    project_naive, strassen_reference, synthesize_component,
};
use ccps_core::CcpsId;

type Outcome = Result<String, String>;

const TABLE: [(usize, u64, u64); 5] = [
    (3, 14, 21),
    (6, 62, 153),
    (8, 172, 344),
    (32, 9708, 16961),
    (82, 170568, 238680),
];

fn id(q: usize, k: usize) -> CcpsId {
    CcpsId::new(q, k).expect("valid id")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Sequence {
    Sequence::from_real((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ccps"];
    argv.extend_from_slice(args);
    let code = ccps_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf8 stdout"),
        String::from_utf8(err).expect("utf8 stderr"),
    )
}

fn ac1_table() -> Outcome {
    for (n, m, s) in TABLE {
        ensure(mult_count(n) == m, || format!("mult_count({n}) = {} != {m}", mult_count(n)))?;
        ensure(strassen_reference(n) == s, || {
            format!("strassen_reference({n}) = {} != {s}", strassen_reference(n))
        })?;
    }
    let (code, out, err) = run_cli(&["bench"]);
    ensure(code == 0, || format!("bench exited {code}: {err}"))?;
    for (n, m, s) in TABLE {
        let row = format!("{n} {m} {s}");
        ensure(out.lines().any(|l| l == row), || format!("bench output lacks row {row:?}"))?;
    }
    Ok("5 rows exact".into())
}

fn ac2_reduction() -> Outcome {
    let mut total = 0.0;
    for (n, _, _) in TABLE {
        let (m, s) = (mult_count(n), strassen_reference(n));
        ensure(m < s, || format!("N={n}: {m} >= {s}"))?;
        total += 1.0 - m as f64 / s as f64;
    }
    let mean = total / TABLE.len() as f64;
    ensure(mean >= 0.35, || format!("mean reduction {mean:.4} < 0.35"))?;
    Ok(format!("mean reduction {:.1}%", 100.0 * mean))
}

fn constant(len: usize) -> Sequence {
    Sequence::from_real(vec![1.0; len])
}

fn ramp(len: usize) -> Sequence {
    Sequence::from_real((0..len).map(|n| n as f64).collect())
}

fn step(len: usize, at: usize) -> Sequence {
    Sequence::from_real((0..len).map(|n| if n >= at { 1.0 } else { 0.0 }).collect())
}

fn ac3_first_derivative() -> Outcome {
    let mut cases = 0;
    for q in 2..=31 {
        for k in half_residues(q) {
            let kernel = make_kernel(id(q, k), DerivativeOrder::First).map_err(|e| e.to_string())?;
            let len = 4 * q;
            let mq = amplitude(q) * q as f64;
            let yc = filter_signal(&constant(len), &kernel, FilterMode::Full).map_err(|e| e.to_string())?;
            let yr = filter_signal(&ramp(len), &kernel, FilterMode::Full).map_err(|e| e.to_string())?;
            for n in interior_range(len, q) {
                ensure(yc[n].norm() <= 1e-9, || format!("q={q} k={k} constant n={n}: {}", yc[n]))?;
                ensure((yr[n] - Complex64::new(mq, 0.0)).norm() <= 1e-9, || {
                    format!("q={q} k={k} ramp n={n}: {} vs {mq}", yr[n])
                })?;
            }
            let at = 2 * q;
            let ys = filter_signal(&step(len, at), &kernel, FilterMode::Full).map_err(|e| e.to_string())?;
            ensure((at..at + q - 1).any(|n| ys[n].norm() > 1e-9), || {
                format!("q={q} k={k}: no step response")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} kernels"))
}

fn ac4_second_derivative() -> Outcome {
    let mut cases = 0;
    for q in (3..=31).step_by(2) {
        for k in half_residues(q) {
            let kernel = make_kernel(id(q, k), DerivativeOrder::Second).map_err(|e| e.to_string())?;
            let len = 4 * q;
            let yc = filter_signal(&constant(len), &kernel, FilterMode::Full).map_err(|e| e.to_string())?;
            let yr = filter_signal(&ramp(len), &kernel, FilterMode::Full).map_err(|e| e.to_string())?;
            for n in interior_range(len, q) {
                ensure(yc[n].norm() <= 1e-9, || format!("q={q} k={k} constant n={n}"))?;
                ensure(yr[n].norm() <= 1e-9, || format!("q={q} k={k} ramp n={n}: {}", yr[n]))?;
            }
            cases += 1;
        }
    }
    for q in 2..=101 {
        for k in half_residues(q) {
            if q % 2 == 1 {
                let v = ramp_moment(id(q, k), (q - 1) / 2);
                ensure(v.abs() <= 1e-9, || format!("q={q} k={k}: moment {v}"))?;
            } else {
                for m in 0..q {
                    let v = ramp_moment(id(q, k), m);
                    ensure(v.abs() > 1e-9, || format!("even q={q} k={k} m={m}: moment {v}"))?;
                }
            }
        }
    }
    Ok(format!("{cases} kernels, moments q<=101"))
}

fn ac5_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut checks = 0;
    let mut worst = 0.0f64;
    for n in [1, 2, 3, 4, 6, 8, 12, 20, 30] {
        for _ in 0..10 {
            let x = random_real(&mut rng, n);
            for ident in CcpsId::all_for_length(n) {
                let (fast, mults) = project_fast_counted(&x, ident).map_err(|e| e.to_string())?;
                let naive = project_naive(&x, ident).map_err(|e| e.to_string())?;
                let q = ident.q();
                ensure(mults == q * q + q, || format!("{ident}: counted {mults} != {}", q * q + q))?;
                let d = fast.max_abs_diff(&naive).map_err(|e| e.to_string())?;
                worst = worst.max(d);
                ensure(d <= 1e-9, || format!("N={n} {ident}: fast vs naive {d:e}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} projections, worst {worst:.1e}"))
}

fn ac6_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for n in 1..=64 {
        let x = random_real(&mut rng, n);
        let energy = x.energy();
        let projections: Vec<Sequence> = CcpsId::all_for_length(n)
            .into_iter()
            .map(|i| project_fast(&x, i))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut sum = Sequence::zeros(n);
        for p in &projections {
            sum = sum.add(p).map_err(|e| e.to_string())?;
        }
        let d = sum.max_abs_diff(&x).map_err(|e| e.to_string())?;
        ensure(d <= 1e-8, || format!("N={n}: reconstruction off by {d:e}"))?;
        for (i, a) in projections.iter().enumerate() {
            for b in &projections[i + 1..] {
                let ip = a.inner(b).map_err(|e| e.to_string())?.norm();
                ensure(ip < 1e-8 * energy, || format!("N={n}: inner product {ip:e}"))?;
            }
        }
    }
    for q in 1..=24 {
        for k in half_residues(q) {
            let p = build_basis(id(q, k)).map_err(|e| e.to_string())?.projector();
            let d2 = (&p * &p).max_abs_diff(&p);
            let dt = p.transpose().max_abs_diff(&p);
            ensure(d2 <= 1e-10 && dt <= 1e-10, || format!("q={q} k={k}: idempotence {d2:e}, symmetry {dt:e}"))?;
        }
    }
    Ok("N<=64, q<=24".into())
}

fn ac7_shift_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut checks = 0;
    for n in [6, 8, 12] {
        let x = random_real(&mut rng, n);
        for ident in CcpsId::all_for_length(n) {
            let px = project_fast(&x, ident).map_err(|e| e.to_string())?;
            for l in 0..n as i64 {
                let lhs = project_fast(&circular_shift(&x, l), ident).map_err(|e| e.to_string())?;
                let d = lhs.max_abs_diff(&circular_shift(&px, l)).map_err(|e| e.to_string())?;
                ensure(d <= 1e-10, || format!("N={n} {ident} l={l}: {d:e}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} shifts"))
}

fn ac8_correlation() -> Outcome {
    for q in 1..=32 {
        for k in half_residues(q) {
            let c = ccps(id(q, k));
            for line in dft(&c) {
                let hit = line.bin == k % q || line.bin == (q - k % q) % q;
                let e = if hit { q as f64 } else { 0.0 };
                ensure((line.value - Complex64::new(e, 0.0)).norm() <= 1e-9, || {
                    format!("q={q} k={k} bin {}: {}", line.bin, line.value)
                })?;
            }
            let r = circ_xcorr(&c, &c).map_err(|e| e.to_string())?;
            let d = r.max_abs_diff(&c.scale_real(q as f64)).map_err(|e| e.to_string())?;
            ensure(d <= 1e-9, || format!("q={q} k={k}: autocorrelation off by {d:e}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut pairs = 0;
    for q in [3, 5, 7, 9] {
        for k in half_residues(q) {
            let basis = build_basis(id(q, k)).map_err(|e| e.to_string())?;
            let (f0, f1) = (basis.f().column(0), basis.f().column(1));
            let member = |rng: &mut ChaCha8Rng| {
                let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                Sequence::from_real(f0.iter().zip(&f1).map(|(u, v)| a * u + b * v).collect())
            };
            for _ in 0..100 {
                let x = member(&mut rng);
                let y = member(&mut rng);
                let r = ccs_closure_check(&x, &y, id(q, k)).map_err(|e| e.to_string())?;
                let back = project_fast(&r, id(q, k)).map_err(|e| e.to_string())?;
                let d = back.max_abs_diff(&r).map_err(|e| e.to_string())?;
                ensure(d <= 1e-8, || format!("q={q} k={k}: closure off by {d:e}"))?;
                pairs += 1;
            }
        }
    }
    let mut worst = 0.0f64;
    for n in [2, 3, 4, 6, 8, 12, 20] {
        for _ in 0..10 {
            let x = random_real(&mut rng, n);
            let d = autocorr_decompose(&x).map_err(|e| e.to_string())?.max_discrepancy();
            worst = worst.max(d);
            ensure(d < 1e-8, || format!("N={n}: autocorrelation identity off by {d:e}"))?;
        }
    }
    Ok(format!("{pairs} closure pairs, identity worst {worst:.1e}"))
}

fn read_raw(path: &Path) -> Result<Vec<f64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    text.lines()
        .map(|l| l.trim().parse::<f64>().map_err(|e| format!("{l:?}: {e}")))
        .collect()
}

fn ac9_edge_pipeline() -> Outcome {
    const SIZE: usize = 64;
    const EDGE_ROW: usize = 32; // first row below the horizontal edge
    const EDGE_COL: usize = 40; // first column right of the vertical edge
    let img = GrayImage::from_fn(SIZE, SIZE, 255, |r, c| {
        40.0 + if r >= EDGE_ROW { 120.0 } else { 0.0 } + if c >= EDGE_COL { 60.0 } else { 0.0 }
    });
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("in.pgm");
    std::fs::write(&input, write_pgm(&img, PgmFormat::P5).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let input_s = input.to_string_lossy().into_owned();

    let run_edge = |tag: &str, extra: &[&str]| -> Result<(Vec<f64>, GrayImage), String> {
        let (out, raw) = (path(&format!("{tag}.pgm")), path(&format!("{tag}.txt")));
        let mut args = vec!["edge", "--in", &input_s, "--out", &out, "--q", "5", "--direction", "col", "--raw", &raw];
        args.extend_from_slice(extra);
        let (code, _, err) = run_cli(&args);
        ensure(code == 0, || format!("edge {tag} exited {code}: {err}"))?;
        let map = read_pgm(&std::fs::read(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        Ok((read_raw(Path::new(&raw))?, map))
    };
    let (k1, map1) = run_edge("k1", &["--k", "1"])?;
    let (k2, _) = run_edge("k2", &["--k", "2"])?;
    let (rs, _) = run_edge("rs", &["--sum-rs"])?;

    // Rows within (q-1)/2 of the top or bottom border straddle the seam
    // between consecutive scanned columns; they are boundary samples.
    let half = 2;
    let mut band_rows = std::collections::BTreeSet::new();
    for r in half..SIZE - half {
        for c in 0..SIZE {
            let v = k1[r * SIZE + c];
            if v.abs() > 1e-6 {
                let dist = if r < EDGE_ROW { EDGE_ROW - 1 - r } else { r - EDGE_ROW };
                ensure(dist <= 4, || format!("response {v} at row {r} col {c}, {dist} px from edge"))?;
                band_rows.insert(r);
            }
            let p = map1.get(r, c);
            ensure((p > 0.0) == (v.abs() > 1e-6), || format!("normalised pixel {p} at ({r},{c}) disagrees with raw {v}"))?;
        }
    }
    for c in 0..SIZE {
        ensure((EDGE_ROW - 4..EDGE_ROW + 4).any(|r| k1[r * SIZE + c].abs() > 1e-6), || {
            format!("column {c} has no horizontal-edge response")
        })?;
    }
    let mut worst = 0.0f64;
    for i in 0..SIZE * SIZE {
        worst = worst.max((k1[i] + k2[i] - rs[i]).abs());
    }
    ensure(worst <= 1e-9, || format!("k1 + k2 differs from Ramanujan-sum response by {worst:e}"))?;
    Ok(format!("band rows {:?}, additivity {worst:.1e}", band_rows))
}

fn ac10_ccpt_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for n in [4, 6, 12] {
        let x = random_real(&mut rng, n);
        let coeffs = ccpt_analyze(&x).map_err(|e| e.to_string())?;
        let back = ccpt_synthesize(&coeffs).map_err(|e| e.to_string())?;
        let d = back.max_abs_diff(&x).map_err(|e| e.to_string())?;
        ensure(d <= 1e-9, || format!("N={n}: round trip off by {d:e}"))?;
        for (ident, _) in &coeffs.slots {
            let beta = coeffs.block(*ident).expect("slot present");
            let comp = synthesize_component(*ident, beta, n).map_err(|e| e.to_string())?;
            let proj = project_fast(&x, *ident).map_err(|e| e.to_string())?;
            let d = comp.max_abs_diff(&proj).map_err(|e| e.to_string())?;
            ensure(d <= 1e-8, || format!("N={n} {ident}: E*beta vs projection {d:e}"))?;
        }
    }
    Ok("N in {4, 6, 12}".into())
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "AC1 table reproduction", limit: Duration::from_secs(1), check: ac1_table },
        Criterion { name: "AC2 reduction claim", limit: Duration::from_secs(1), check: ac2_reduction },
        Criterion { name: "AC3 first-derivative suite", limit: Duration::from_secs(5), check: ac3_first_derivative },
        Criterion { name: "AC4 second-derivative suite", limit: Duration::from_secs(5), check: ac4_second_derivative },
        Criterion { name: "AC5 projection oracle", limit: Duration::from_secs(10), check: ac5_oracle },
        Criterion { name: "AC6 completeness and orthogonality", limit: Duration::from_secs(30), check: ac6_completeness },
        Criterion { name: "AC7 shift invariance", limit: Duration::from_secs(5), check: ac7_shift_invariance },
        Criterion { name: "AC8 spectrum and correlation", limit: Duration::from_secs(10), check: ac8_correlation },
        Criterion { name: "AC9 edge pipeline", limit: Duration::from_secs(5), check: ac9_edge_pipeline },
        Criterion { name: "AC10 transform round trip", limit: Duration::from_secs(5), check: ac10_ccpt_round_trip },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if elapsed <= c.limit => format!("PASS {} ({:.3}s) {detail}", c.name, elapsed.as_secs_f64()),
            Ok(_) => format!("FAIL {} took {:.3}s, limit {:?}", c.name, elapsed.as_secs_f64(), c.limit),
            Err(e) => format!("FAIL {} ({:.3}s): {e}", c.name, elapsed.as_secs_f64()),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict}");
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
