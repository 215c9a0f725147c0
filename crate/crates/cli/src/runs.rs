//! The subcommands. Each run validates its parameters, computes, writes its
//! tables into the output directory and returns a short text report.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weylpath::field_theory::{evolve_fields, initial_field_packet, FieldConfig, ModePacket};
use weylpath::grid::make_grid;
use weylpath::propagator::{brute_force_amplitude, evolve, mixed_step_kernel, MixedHamiltonian};
use weylpath::scattering::{
    half_shell_t, ls_oracle, packet_stats, scattering_state, PacketSpec, PacketStats, ScatterConfig,
};
use weylpath::wavelet::{daubechies_h, overlap_tables, scaling_on_dyadics};
use weylpath::weyl::{
    build_clock_v, build_shift_u, fourier_matrix, qbit_factorize, DenseOperator, WeylBasis,
    SIGMA_1, SIGMA_3,
};
use weylpath::StateVector;

use crate::config::RunConfig;
use crate::csv::{num, Table};
use crate::error::CliError;

/// Residual threshold for `weyl-check`.
pub const WEYL_TOLERANCE: f64 = 1e-11;

/// Norm drift above which a run reports a failed invariant.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest `M` accepted by `weyl-check`.
pub const WEYL_CHECK_LIMIT: usize = 4096;

/// Text summary and written files of one run.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn write(&mut self, table: &Table, dir: &Path, name: &str) -> Result<(), CliError> {
        self.files.push(table.write(dir, name)?);
        Ok(())
    }
}

fn provenance(command: &str, cfg: &RunConfig) -> Vec<String> {
    let mut out = vec![format!("weylpath {} {command}", env!("CARGO_PKG_VERSION"))];
    out.extend(cfg.echo().iter().map(|(k, v)| format!("{k} = {v}")));
    out
}

/// Named residuals of the Weyl-algebra checks.
#[derive(Debug, Clone)]
pub struct WeylCheck {
    pub dim: usize,
    pub qbits: Option<usize>,
    pub residuals: Vec<(String, f64)>,
    /// Entries reported but not held to the tolerance.
    pub diagnostics: Vec<(String, f64)>,
}

impl WeylCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() < WEYL_TOLERANCE
    }
}

/// Residuals of `U^M = I`, `V^M = I`, `UV = VU e^{-2 pi i/M}`, completeness of
/// the `u_n`, and (when `M = 2^L`) the qbit reconstructions.
pub fn weyl_check(dim: Option<usize>, qbits: Option<usize>) -> Result<WeylCheck, CliError> {
    let m = match (dim, qbits) {
        (Some(m), Some(l)) if l < 63 && m == 1usize << l => m,
        (Some(m), Some(l)) => {
            return Err(CliError::Config(format!(
                "--qbits {l} needs --dim {}, got {m}",
                1u128 << l.min(64)
            )))
        }
        (Some(m), None) => m,
        (None, Some(l)) if (1..=12).contains(&l) => 1 << l,
        (None, Some(l)) => {
            return Err(CliError::Config(format!(
                "--qbits must be in 1..=12, got {l}"
            )))
        }
        (None, None) => 16,
    };
    if m < 2 {
        return Err(CliError::Config(format!(
            "--dim must be at least 2, got {m}"
        )));
    }
    if m > WEYL_CHECK_LIMIT {
        return Err(weylpath::Error::MemoryGuard {
            size: (m as u128).pow(2),
            limit: (WEYL_CHECK_LIMIT as u128).pow(2),
        }
        .into());
    }
    let basis = WeylBasis::zero_based(m)?;
    let id = DenseOperator::identity(basis);
    let u = build_shift_u(basis);
    let v = build_clock_v(basis);
    let mut residuals = vec![
        ("U^M - I".to_string(), u.pow(m as u64).max_abs_diff(&id)),
        ("V^M - I".to_string(), v.pow(m as u64).max_abs_diff(&id)),
        (
            "UV - VU e^{-2 pi i/M}".to_string(),
            u.mul(&v)
                .max_abs_diff(&v.mul(&u).scale(basis.root_of_unity(-1))),
        ),
    ];
    let f = fourier_matrix(basis);
    let completeness = DenseOperator::new(basis, f.matrix() * f.matrix().adjoint())?;
    residuals.push((
        "sum |u_n><u_n| - I".to_string(),
        completeness.max_abs_diff(&id),
    ));
    let mut diagnostics = Vec::new();
    if m == 2 {
        let q = qbit_factorize(1)?;
        residuals.push((
            "U - sigma_1".to_string(),
            u.max_abs_diff(&q.embed(&SIGMA_1, 0)),
        ));
        residuals.push((
            "V - sigma_3".to_string(),
            v.max_abs_diff(&q.embed(&SIGMA_3, 0)),
        ));
    }
    let l = if m.is_power_of_two() {
        Some(m.trailing_zeros() as usize)
    } else {
        None
    };
    if let Some(l) = l.filter(|&l| qbits.is_some() || l <= 6) {
        let q = qbit_factorize(l)?;
        let (mut ru, mut rv, mut pauli) = (0.0f64, 0.0f64, 0.0f64);
        let mut up = id.clone();
        let mut vp = id.clone();
        for n in 0..m as u64 {
            ru = ru.max(q.reconstruct_u(n).max_abs_diff(&up));
            rv = rv.max(q.reconstruct_v(n).max_abs_diff(&vp));
            pauli = pauli.max(q.pauli_monomial_u(n).max_abs_diff(&up));
            up = up.mul(&u);
            vp = vp.mul(&v);
        }
        residuals.push(("qbit U^n".to_string(), ru));
        residuals.push(("qbit V^n".to_string(), rv));
        diagnostics.push(("Pauli monomial vs U^n".to_string(), pauli));
    }
    Ok(WeylCheck {
        dim: m,
        qbits: l,
        residuals,
        diagnostics,
    })
}

pub fn run_weyl_check(
    dim: Option<usize>,
    qbits: Option<usize>,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let check = weyl_check(dim, qbits)?;
    let mut report = Report::default();
    report.line(format!("weyl-check M = {}", check.dim));
    for (name, r) in &check.residuals {
        let ok = if *r < WEYL_TOLERANCE { "ok" } else { "FAIL" };
        report.line(format!("  {name:<24} {r:.3e}  {ok}"));
    }
    for (name, r) in &check.diagnostics {
        report.line(format!("  {name:<24} {r:.3e}  (diagnostic)"));
    }
    if let Some(dir) = out {
        let mut t = Table::new(&["check", "residual", "held_to_tolerance"]);
        t.comment(format!("weylpath {} weyl-check", env!("CARGO_PKG_VERSION")))
            .comment(format!("dim = {}", check.dim))
            .comment(format!("tolerance = {WEYL_TOLERANCE:e}"));
        for (name, r) in &check.residuals {
            t.row(vec![name.clone(), num(*r), "1".into()]);
        }
        for (name, r) in &check.diagnostics {
            t.row(vec![name.clone(), num(*r), "0".into()]);
        }
        report.write(&t, dir, "weyl_check.csv")?;
    }
    if !check.passed() {
        return Err(CliError::Invariant(format!(
            "weyl-check residual {:.3e} exceeds {WEYL_TOLERANCE:e}\n{}",
            check.max_residual(),
            report.lines.join("\n")
        )));
    }
    Ok(report)
}

fn scatter_config(cfg: &mut RunConfig) -> Result<(ScatterConfig, usize), CliError> {
    let d = ScatterConfig::standard();
    let config = ScatterConfig {
        k: cfg.take("k", d.k)?,
        trotter_n: cfg.take("trotter_n", d.trotter_n)?,
        lambda: cfg.take("lambda", d.lambda)?,
        alpha: cfg.take("alpha", d.alpha)?,
        packet: PacketSpec {
            mean_p: cfg.take("mean_p", d.packet.mean_p)?,
            delta_p: cfg.take("delta_p", d.packet.delta_p)?,
            mass: cfg.take("mass", d.packet.mass)?,
            tau: cfg.take("tau", d.packet.tau)?,
        },
    };
    let points = cfg.take("ls_points", 64usize)?;
    cfg.finish()?;
    config.validate()?;
    Ok((config, points))
}

fn stats_row(name: &str, s: &PacketStats) -> Vec<String> {
    vec![
        name.to_string(),
        num(s.mean_x),
        num(s.mean_p),
        num(s.delta_x),
        num(s.delta_p),
        num(s.delta_x * s.delta_p),
    ]
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Packet statistics, half-shell T with its Born column, the
/// Lippmann-Schwinger on-shell value and the per-step norm drift.
pub fn run_scatter(mut cfg: RunConfig, out: &Path) -> Result<Report, CliError> {
    let (config, points) = scatter_config(&mut cfg)?;
    let run = scattering_state(&config)?;
    let half = half_shell_t(&config)?;
    let oracle = ls_oracle(
        config.lambda,
        config.alpha,
        config.packet.mass,
        config.packet.mean_p,
        points,
    )?;

    let mut drift = Vec::with_capacity(config.trotter_n + 1);
    let mut psi = run.initial.clone();
    let n0 = psi.norm_sqr();
    drift.push(0.0);
    for _ in 0..config.trotter_n {
        psi = run.kernel.apply(&psi)?;
        drift.push(psi.norm_sqr() - n0);
    }
    let max_drift = drift.iter().fold(0.0f64, |a, d| a.max(d.abs()));

    let mut head = provenance("scatter", &cfg);
    head.push(format!(
        "grid M = {}, eps = {}, extent = {}, dt = {}",
        run.grid.m(),
        num(run.grid.eps()),
        num(run.grid.extent()),
        num(config.dt())
    ));
    head.push(format!(
        "kernel unitarity residual = {}, max norm drift = {}",
        num(run.kernel.unitarity_residual()),
        num(max_drift)
    ));
    head.push(format!(
        "on-shell T = {} {}, Born = {} {}, oracle = {} {} (convergence {})",
        num(half.on_shell_t.re),
        num(half.on_shell_t.im),
        num(half.on_shell_born.re),
        num(half.on_shell_born.im),
        num(oracle.on_shell.re),
        num(oracle.on_shell.im),
        num(oracle.convergence)
    ));

    let mut report = Report::default();
    let mut stats = Table::new(&["state", "mean_x", "mean_p", "delta_x", "delta_p", "dx_dp"]);
    stats.comments(&head);
    stats.row(stats_row(
        "free_minus_tau",
        &packet_stats(&run.grid, &run.initial)?,
    ));
    stats.row(stats_row("free_zero", &packet_stats(&run.grid, &run.free)?));
    stats.row(stats_row(
        "scattered_zero",
        &packet_stats(&run.grid, &run.evolved)?,
    ));
    report.write(&stats, out, "scatter_stats.csv")?;

    let mut t = Table::new(&["p", "t_re", "t_im", "born_re", "born_im"]);
    t.comments(&head);
    for i in 0..half.p.len() {
        t.values(&[
            half.p[i],
            half.t_re[i],
            half.t_im[i],
            half.born_re[i],
            half.born_im[i],
        ]);
    }
    report.write(&t, out, "scatter_half_shell.csv")?;

    let mut on = Table::new(&["quantity", "re", "im", "rel_to_oracle"]);
    on.comments(&head);
    for (name, z) in [
        ("t_on_shell", half.on_shell_t),
        ("born_on_shell", half.on_shell_born),
        ("oracle_on_shell", oracle.on_shell),
    ] {
        let r = if oracle.on_shell.norm() > 0.0 {
            rel(z, oracle.on_shell)
        } else {
            z.norm()
        };
        on.row(vec![name.into(), num(z.re), num(z.im), num(r)]);
    }
    report.write(&on, out, "scatter_on_shell.csv")?;

    let mut log = Table::new(&["step", "norm_drift"]);
    log.comments(&head);
    for (i, d) in drift.iter().enumerate() {
        log.row(vec![i.to_string(), num(*d)]);
    }
    report.write(&log, out, "scatter_norm.csv")?;

    report.line(format!(
        "scatter K = {} N = {} tau = {}: T(p0) = {:.6} {:+.6}i, oracle {:.6} {:+.6}i, Born {:.6}, drift {:.2e}",
        config.k,
        config.trotter_n,
        config.packet.tau,
        half.on_shell_t.re,
        half.on_shell_t.im,
        oracle.on_shell.re,
        oracle.on_shell.im,
        half.on_shell_born.re,
        max_drift
    ));
    if max_drift > NORM_TOLERANCE {
        return Err(CliError::Invariant(format!("norm drift {max_drift:.3e}")));
    }
    Ok(report)
}

fn field_config(cfg: &mut RunConfig) -> Result<FieldConfig, CliError> {
    let k = cfg.take("k", 20usize)?;
    let modes = cfg.take_list("modes", &[0i64, 1])?;
    let ppu = cfg.take("points_per_unit", 256usize)?;
    let mass_sq = cfg.take("mass_sq", 1.0f64)?;
    let lambda = cfg.take("lambda", 1.0f64)?;
    let trotter_n = cfg.take("trotter_n", 20usize)?;
    let total_time = cfg.take("total_time", 0.5f64)?;
    let mean = cfg.take("mean", 0.5f64)?;
    let width = cfg.take("width", 0.5f64)?;
    let mut initial = Vec::with_capacity(modes.len());
    for i in 0..modes.len() {
        let mean_key = format!("mean_{i}");
        let width_key = format!("width_{i}");
        let m = if cfg.contains(&mean_key) {
            cfg.take(&mean_key, mean)?
        } else {
            mean
        };
        let w = if cfg.contains(&width_key) {
            cfg.take(&width_key, width)?
        } else {
            width
        };
        initial.push(ModePacket { mean: m, width: w });
    }
    cfg.finish()?;
    if k == 0 {
        return Err(CliError::Config("k must be at least 1".into()));
    }
    let grid = make_grid(k)?;
    let size = (grid.m() as u128)
        .checked_pow(modes.len() as u32)
        .unwrap_or(u128::MAX);
    if size > weylpath::field_theory::FIELD_LIMIT {
        return Err(weylpath::Error::MemoryGuard {
            size,
            limit: weylpath::field_theory::FIELD_LIMIT,
        }
        .into());
    }
    let tables = overlap_tables(&modes, ppu)?;
    Ok(FieldConfig::from_tables(
        grid, &tables, mass_sq, lambda, trotter_n, total_time, initial,
    )?)
}

/// Initial and evolved field amplitudes: the full grid, the slices with every
/// other mode at zero, and per-mode marginals.
pub fn run_fields(mut cfg: RunConfig, out: &Path) -> Result<Report, CliError> {
    let config = field_config(&mut cfg)?;
    let initial = initial_field_packet(&config)?;
    let evolved = evolve_fields(&config, &initial)?;
    let drift = (evolved.norm() - initial.norm()).abs();

    let mut head = provenance("fields", &cfg);
    head.push(format!(
        "grid M = {}, eps = {}, modes F = {}, dt = {}",
        config.grid.m(),
        num(config.grid.eps()),
        config.fields,
        num(config.dt())
    ));
    head.push(format!(
        "norm drift = {}, max |Im| initial = {}, evolved = {}",
        num(drift),
        num(initial.max_abs_imag()),
        num(evolved.max_abs_imag())
    ));

    let mut report = Report::default();
    let x = config.grid.x();
    let mut cols: Vec<String> = (0..config.fields).map(|i| format!("phi_{i}")).collect();
    cols.extend(["re_initial", "im_initial", "re_evolved", "im_evolved"].map(String::from));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut grid = Table::new(&col_refs);
    grid.comments(&head);
    for (i, (a, b)) in initial
        .amplitudes()
        .iter()
        .zip(evolved.amplitudes())
        .enumerate()
    {
        let mut row: Vec<String> = initial.slots(i).iter().map(|&s| num(x[s])).collect();
        row.extend([num(a.re), num(a.im), num(b.re), num(b.im)]);
        grid.row(row);
    }
    report.write(&grid, out, "fields_grid.csv")?;

    let mut slice = Table::new(&[
        "mode",
        "phi",
        "re_initial",
        "im_initial",
        "re_evolved",
        "im_evolved",
    ]);
    slice
        .comments(&head)
        .comment("every other mode held at phi = 0");
    let mut marg = Table::new(&[
        "mode",
        "phi",
        "prob_initial",
        "prob_evolved",
        "re_amp_evolved",
        "im_amp_evolved",
    ]);
    marg.comments(&head)
        .comment("prob: reduced probability; amp: amplitude summed over the other modes");
    for mode in 0..config.fields {
        let (si, se) = (initial.slice(mode, 0)?, evolved.slice(mode, 0)?);
        let (pi, pe) = (
            initial.marginal_probability(mode)?,
            evolved.marginal_probability(mode)?,
        );
        let ae = evolved.marginal_amplitude(mode)?;
        for s in 0..config.grid.m() {
            slice.row(vec![
                mode.to_string(),
                num(x[s]),
                num(si[s].re),
                num(si[s].im),
                num(se[s].re),
                num(se[s].im),
            ]);
            marg.row(vec![
                mode.to_string(),
                num(x[s]),
                num(pi[s]),
                num(pe[s]),
                num(ae[s].re),
                num(ae[s].im),
            ]);
        }
    }
    report.write(&slice, out, "fields_slice.csv")?;
    report.write(&marg, out, "fields_marginal.csv")?;

    report.line(format!(
        "fields F = {} M = {} N = {} t = {}: max |Im| {:.4e}, norm drift {:.2e}",
        config.fields,
        config.grid.m(),
        config.trotter_n,
        config.total_time,
        evolved.max_abs_imag(),
        drift
    ));
    if drift > NORM_TOLERANCE {
        return Err(CliError::Invariant(format!("field norm drift {drift:.3e}")));
    }
    Ok(report)
}

/// Refinement coefficients, sampled scaling function, `D` and `Gamma`.
pub fn run_wavelet(mut cfg: RunConfig, out: &Path) -> Result<Report, CliError> {
    let modes = cfg.take_list("modes", &[0i64, 1])?;
    let ppu = cfg.take("points_per_unit", 256usize)?;
    cfg.finish()?;
    let tables = overlap_tables(&modes, ppu)?;
    let h = daubechies_h();
    let samples = scaling_on_dyadics(ppu.trailing_zeros())?;

    let mut head = provenance("wavelet", &cfg);
    head.push(format!(
        "h sum residual = {}, orthonormality residual = {}",
        num(h.sum_residual()),
        num(h.orthonormality_residual())
    ));
    head.push(format!(
        "Gamma change on doubling = {}, trapezoid D change on doubling = {}",
        num(tables.gamma_change),
        num(tables.d_trapezoid_change)
    ));

    let mut report = Report::default();
    let mut ht = Table::new(&["l", "h", "wavelet_g"]);
    ht.comments(&head);
    let g = h.wavelet();
    for l in 0..6 {
        ht.row(vec![l.to_string(), num(h.h[l]), num(g[l])]);
    }
    report.write(&ht, out, "wavelet_h.csv")?;

    let mut st = Table::new(&["x", "s", "ds"]);
    st.comments(&head);
    for (i, (v, d)) in samples.values.iter().zip(&samples.derivative).enumerate() {
        st.values(&[samples.x(i), *v, *d]);
    }
    report.write(&st, out, "wavelet_scaling.csv")?;

    let mut dt = Table::new(&["m", "n", "d_exact", "d_trapezoid"]);
    dt.comments(&head);
    let f = tables.len();
    for a in 0..f {
        for b in 0..f {
            dt.row(vec![
                modes[a].to_string(),
                modes[b].to_string(),
                num(tables.d[(a, b)]),
                num(tables.d_trapezoid[(a, b)]),
            ]);
        }
    }
    report.write(&dt, out, "wavelet_d.csv")?;

    let mut gt = Table::new(&["k", "l", "m", "n", "gamma"]);
    gt.comments(&head)
        .comment("one row per sorted index multiset");
    for a in 0..f {
        for b in a..f {
            for c in b..f {
                for d in c..f {
                    gt.row(vec![
                        modes[a].to_string(),
                        modes[b].to_string(),
                        modes[c].to_string(),
                        modes[d].to_string(),
                        num(tables.gamma(a, b, c, d)),
                    ]);
                }
            }
        }
    }
    report.write(&gt, out, "wavelet_gamma.csv")?;

    report.line(format!(
        "wavelet modes {modes:?} at {ppu} points per unit: Gamma delta {:.2e}",
        tables.gamma_change
    ));
    Ok(report)
}

/// `p^2/2 + x^2/2` on centered labels, or a random complex symbol.
fn bruteforce_symbol(
    basis: WeylBasis,
    kind: &str,
    seed: u64,
) -> Result<MixedHamiltonian, CliError> {
    let m = basis.dim();
    let eps = (2.0 * PI / m as f64).sqrt();
    let c = (m as f64 - 1.0) / 2.0;
    match kind {
        "harmonic" => Ok(MixedHamiltonian::from_fn(basis, |n, k| {
            let p = (n as f64 - c) * eps;
            let x = (k as f64 - c) * eps;
            Complex64::new(0.5 * (p * p + x * x), 0.0)
        })),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<Complex64> = (0..m * m)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            Ok(MixedHamiltonian::from_fn(basis, |n, k| {
                vals[n as usize * m + k as usize]
            }))
        }
        other => Err(CliError::Config(format!(
            "hamiltonian must be harmonic or random, got {other}"
        ))),
    }
}

/// Explicit path sums for every final label, next to the kernel-power
/// amplitudes.
pub fn run_bruteforce(mut cfg: RunConfig, seed: u64, out: &Path) -> Result<Report, CliError> {
    let m = cfg.take("dim", 3usize)?;
    let steps = cfg.take("steps", 2usize)?;
    let dt = cfg.take("dt", 0.1f64)?;
    let k_i = cfg.take("k_i", 0i64)?;
    let functional = cfg.take("functional", true)?;
    let kind = cfg.take("hamiltonian", "harmonic".to_string())?;
    cfg.finish()?;
    if m < 2 {
        return Err(CliError::Config(format!("dim must be at least 2, got {m}")));
    }
    let basis = WeylBasis::zero_based(m)?;
    let symbol = bruteforce_symbol(basis, &kind, seed)?;
    let kernel = mixed_step_kernel(&symbol, dt)?;
    let start = StateVector::basis_state(basis, k_i)?;
    let reference = if functional {
        evolve(&kernel, &start, steps)?
    } else {
        start.clone()
    };

    let mut head = provenance("bruteforce", &cfg);
    head.push(format!("seed = {seed}"));
    let mut t = Table::new(&[
        "k_f",
        "path_re",
        "path_im",
        "kernel_re",
        "kernel_im",
        "normalization_re",
        "normalization_im",
        "paths",
    ]);
    let mut worst_norm = 0.0f64;
    let mut worst_amp = 0.0f64;
    let mut rows = Vec::with_capacity(m);
    for k_f in 0..m as i64 {
        let r = brute_force_amplitude(&symbol, dt, steps, k_i, k_f, functional)?;
        let expected = reference.amplitude(k_f)?;
        worst_norm = worst_norm.max((r.normalization_sum - 1.0).norm());
        worst_amp = worst_amp.max((r.amplitude - expected).norm());
        rows.push(vec![
            k_f.to_string(),
            num(r.amplitude.re),
            num(r.amplitude.im),
            num(expected.re),
            num(expected.im),
            num(r.normalization_sum.re),
            num(r.normalization_sum.im),
            r.path_count.to_string(),
        ]);
    }
    head.push(format!(
        "max |sum P - 1| = {}, max |path - kernel| = {}",
        num(worst_norm),
        num(worst_amp)
    ));
    t.comments(&head);
    for r in rows {
        t.row(r);
    }
    let mut report = Report::default();
    report.write(&t, out, "bruteforce.csv")?;
    report.line(format!(
        "bruteforce M = {m} N = {steps}: normalization {worst_norm:.2e}, amplitude {worst_amp:.2e}"
    ));
    if worst_norm > 1e-10 || worst_amp > 1e-10 {
        return Err(CliError::Invariant(format!(
            "path sum normalization {worst_norm:.3e}, amplitude {worst_amp:.3e}"
        )));
    }
    Ok(report)
}
