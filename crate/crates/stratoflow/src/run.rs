//! Experiment dispatch: one function per manifest kind, each writing its
//! tables next to the echoed manifest and `summary.json`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;
use stratocore::dynamics::{
    apriori_bounds, convergence_row, corrector_diagnostics, run_full, solve_limit,
    strictly_decreasing, CorrectorOptions, StudyOptions,
};
use stratocore::init::make_initial_data;
use stratocore::resonance::{
    all_labels, certify_nonresonant, enumerate_resonant_triads, CertifyMethod, Decision,
    NonResonanceCertificate,
};
use stratocore::rng::SeedTree;
use stratocore::spectral_torus::harmonic::{property_suite_harmonic, HarmonicSuiteConfig};
use stratocore::spectral_torus::{divergence_residual, lpv_hsigma_norm, sobolev_norm};
use stratocore::wave_basis::Label;
use stratocore::SpectralField;

use crate::fft::{fft_planner, FftTransform};
use crate::manifest::{InitialData, Kind, LabelSet, Manifest};
use crate::output::{
    fit_decay_rate, least_squares_slope, Cell, Invariant, RunError, Status, Summary, Table,
};
use crate::snapshot::{load_snapshot, save_snapshot};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const SUMMARY_FILE: &str = "summary.json";

/// Largest divergence residual accepted on any stored state.
pub const DIV_TOLERANCE: f64 = 1e-10;
/// Relative slack of the discrete energy inequality.
pub const ENERGY_SLACK: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Overrides `output.dir` of the manifest.
    pub out: Option<PathBuf>,
    /// Worker threads for the parallel parts; `1` gives bit-exact output.
    pub workers: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out: None,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }
}

/// Run `manifest`, always leaving the echoed manifest and a summary in the
/// output directory. Only a failure to create that directory is returned as
/// `Err`; every other failure is recorded in the summary.
pub fn run(manifest: &Manifest, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    let mut m = manifest.clone();
    if let Some(o) = &opts.out {
        m.output.dir = o.clone();
    }
    let dir = m.output.dir.clone();
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(MANIFEST_FILE), m.echo())?;
    let mut summary = Summary::new(m.kind.name());
    summary.files.push(MANIFEST_FILE.into());
    let result = dispatch(&m, opts, &dir, &mut summary);
    match result {
        Ok(()) if summary.all_passed() => {}
        Ok(()) => {
            summary.status = Status::InvariantFailure;
            let failed: Vec<&str> = summary
                .invariants
                .iter()
                .filter(|i| !i.passed)
                .map(|i| i.name.as_str())
                .collect();
            summary.error = Some(format!("invariants failed: {}", failed.join(", ")));
        }
        Err(e) => {
            summary.status = e.status;
            summary.error = Some(e.message);
        }
    }
    summary.exit_code = summary.status.exit_code();
    summary.files.push(SUMMARY_FILE.into());
    let text =
        serde_json::to_string_pretty(&summary).map_err(|e| RunError::runtime(e.to_string()))?;
    fs::write(dir.join(SUMMARY_FILE), text + "\n")?;
    Ok(RunOutcome { dir, summary })
}

fn dispatch(
    m: &Manifest,
    opts: &RunOptions,
    dir: &Path,
    summary: &mut Summary,
) -> Result<(), RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| RunError::runtime(e.to_string()))?;
    pool.install(|| match m.kind {
        Kind::Simulate => simulate(m, dir, summary),
        Kind::Limit => limit(m, dir, summary),
        Kind::Converge => converge(m, dir, summary),
        Kind::ResonanceScan => resonance_scan(m, dir, summary),
        Kind::Certify => certify(m, dir, summary),
        Kind::Propcheck => propcheck(m, dir, summary),
    })
}

/// Initial field of `m`: a named recipe seeded from the manifest seed, or a
/// snapshot on the manifest's torus.
pub fn initial_field(m: &Manifest) -> Result<SpectralField, RunError> {
    match &m.initial {
        InitialData::Recipe(r) => Ok(make_initial_data(
            r,
            &m.torus,
            &SeedTree::new(m.seed).child("initial"),
        )?),
        InitialData::Snapshot(p) => {
            let s = load_snapshot(p)?;
            let t = stratocore::spectral_torus::Spectral::torus(&s.field);
            if t.a != m.torus.a || t.n != m.torus.n {
                return Err(RunError::validation(format!(
                    "snapshot {} is on torus {:?} / grid {:?}, manifest asks for {:?} / {:?}",
                    p.display(),
                    t.a,
                    t.n,
                    m.torus.a,
                    m.torus.n
                )));
            }
            Ok(s.field)
        }
    }
}

fn write_table(dir: &Path, name: &str, t: &Table, summary: &mut Summary) -> Result<(), RunError> {
    t.write(&dir.join(name))?;
    summary.files.push(name.into());
    Ok(())
}

fn certificate_json(c: &NonResonanceCertificate) -> serde_json::Value {
    json!({
        "torus": c.torus.a,
        "grid": c.torus.n,
        "N": c.cutoff,
        "margin": c.margin,
        "method": c.method.name(),
        "witnesses": c.witnesses.iter().map(|w| json!({
            "k": w.k, "m": w.m, "n": w.n,
            "labels": w.label_string(),
            "omega_sum": w.omega_sum,
        })).collect::<Vec<_>>(),
    })
}

fn write_certificate(
    dir: &Path,
    c: &NonResonanceCertificate,
    summary: &mut Summary,
) -> Result<(), RunError> {
    let text = serde_json::to_string_pretty(&certificate_json(c))
        .map_err(|e| RunError::runtime(e.to_string()))?;
    fs::write(dir.join("certificate.json"), text + "\n")?;
    summary.files.push("certificate.json".into());
    Ok(())
}

/// Certificate at the band cutoff, as the limit solver requires.
fn band_certificate(
    m: &Manifest,
    dir: &Path,
    summary: &mut Summary,
) -> Result<NonResonanceCertificate, RunError> {
    let cutoff = *m.torus.band_limit().iter().max().unwrap_or(&1);
    let cert = certify_nonresonant(&m.torus, cutoff.max(1), m.resonance.method)?;
    write_certificate(dir, &cert, summary)?;
    summary.metric("certificate_margin", cert.margin);
    Ok(cert)
}

fn simulate(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let tr = FftTransform::for_torus(&m.torus);
    let u0 = initial_field(m)?;
    let run = run_full(&u0, &m.run, None, m.unknown, &tr)?;
    let mut t = Table::new(&[
        "t",
        "L2",
        "Hs",
        "Hs_dissipation_integral",
        "div_residual",
        "grad_integral",
    ]);
    for j in 0..run.times.len() {
        t.push(vec![
            Cell::F(run.times[j]),
            Cell::F(run.l2[j]),
            Cell::F(run.hs[j]),
            Cell::F(run.hs1_integral[j]),
            Cell::F(run.div_residual[j]),
            Cell::F(run.grad_integral[j]),
        ]);
    }
    write_table(dir, "trajectory.csv", &t, summary)?;
    if m.output.snapshot_every > 0 {
        fs::create_dir_all(dir.join("snapshots"))?;
        for (j, s) in run.states.iter().enumerate() {
            if j % m.output.snapshot_every == 0 || j + 1 == run.states.len() {
                let name = format!("snapshots/snap_{:05}.bin", j);
                save_snapshot(&dir.join(&name), s, run.times[j])?;
                summary.files.push(name);
            }
        }
    }
    let e0 = run.l2[0] * run.l2[0];
    let numin = m.run.nu.min(m.run.nu_prime);
    let excess = (0..run.times.len())
        .map(|j| run.l2[j] * run.l2[j] + 2.0 * numin * run.grad_integral[j] - e0)
        .fold(f64::NEG_INFINITY, f64::max);
    summary.invariants.push(Invariant::at_most(
        "energy_inequality",
        excess,
        ENERGY_SLACK * e0,
        "max_t ‖V(t)‖² + 2 min(ν,ν′) ∫‖∇V‖² − ‖V₀‖²",
    ));
    let div = run.div_residual.iter().cloned().fold(0.0, f64::max);
    summary.invariants.push(Invariant::at_most(
        "divergence_free",
        div,
        DIV_TOLERANCE,
        "max |div v| on the grid",
    ));
    summary.invariants.push(Invariant::holds(
        "finite",
        run.hs.iter().all(|x| x.is_finite()),
        "every sampled H^s norm is finite",
    ));
    summary.metric("step", run.step);
    summary.metric("l2_decay_rate", fit_decay_rate(&run.times, &run.l2));
    Ok(())
}

fn limit(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let tr = FftTransform::for_torus(&m.torus);
    let u0 = initial_field(m)?;
    let cert = band_certificate(m, dir, summary)?;
    let run = solve_limit(&u0, &m.run, &tr, Some(&cert))?;
    let mut t = Table::new(&[
        "t",
        "L2",
        "Hs",
        "bar_L2",
        "bar_Linf_L2h",
        "osc_L2",
        "div_residual",
    ]);
    let (mut bar_l2, mut bar_linf, mut bar_hs, mut osc_l2, mut osc_hs) =
        (vec![], vec![], vec![], vec![], vec![]);
    for (j, u) in run.u.iter().enumerate() {
        let b = &run.bar.samples[j];
        let o = &run.osc.samples[j];
        bar_l2.push(sobolev_norm(b, 0.0));
        bar_linf.push(lpv_hsigma_norm(b, f64::INFINITY, 0.0));
        bar_hs.push(sobolev_norm(b, m.run.s));
        osc_l2.push(sobolev_norm(o, 0.0));
        osc_hs.push(sobolev_norm(o, m.run.s));
        t.push(vec![
            Cell::F(run.times[j]),
            Cell::F(sobolev_norm(u, 0.0)),
            Cell::F(sobolev_norm(u, m.run.s)),
            Cell::F(bar_l2[j]),
            Cell::F(bar_linf[j]),
            Cell::F(osc_l2[j]),
            Cell::F(divergence_residual(u)),
        ]);
    }
    write_table(dir, "limit.csv", &t, summary)?;

    let b = apriori_bounds(&u0, &m.run, &m.bounds)?;
    let c_nu = b.small_c * m.run.nu;
    summary.metric("phi", b.phi);
    summary.metric("e1", b.e1);
    summary.metric("e2", b.e2);
    summary.metric("small_c", b.small_c);
    summary.metric("c_nu", c_nu);
    summary.metric("osc_triads", run.osc.triads as u64);
    let rate = fit_decay_rate(&run.times, &bar_linf);
    summary.metric("bar_decay_rate", rate);
    summary.metric("bar_decay_rate_over_c_nu", rate.map(|r| r / c_nu));

    let monotone = |v: &[f64]| {
        v.windows(2)
            .map(|w| w[1] - w[0] * (1.0 + 1e-12))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    summary.invariants.push(Invariant::at_most(
        "bar_energy_nonincreasing",
        monotone(&bar_l2),
        0.0,
        "largest increase of ‖ū^h‖_{L²} between samples",
    ));
    summary.invariants.push(Invariant::at_most(
        "osc_energy_nonincreasing",
        monotone(&osc_l2),
        0.0,
        "largest increase of ‖U_osc‖_{L²} between samples",
    ));
    let sq_max = |v: &[f64]| v.iter().map(|x| x * x).fold(0.0, f64::max);
    summary.invariants.push(Invariant::at_most(
        "bar_within_e1",
        sq_max(&bar_hs),
        b.e1,
        "sup_t ‖ū^h‖²_{H^s} ≤ E₁",
    ));
    summary.invariants.push(Invariant::at_most(
        "osc_within_e2",
        sq_max(&osc_hs),
        b.e2,
        "sup_t ‖U_osc‖²_{H^s} ≤ E₂",
    ));

    if m.limit.corrector {
        let opts = CorrectorOptions {
            n: m.limit.corrector_n,
            big_c: m.bounds.big_c,
            check_identity: m.limit.check_identity,
            delta: m.limit.delta,
        };
        let series = corrector_diagnostics(&run, &m.run, &opts, None)?;
        let mut t = Table::new(&[
            "t",
            "R_osc_N_L2",
            "R_high_Hsm1",
            "tilde_R_L2",
            "tilde_R_t_L2",
            "Gamma_L2",
            "Theta",
            "identity_defect",
        ]);
        for s in &series.states {
            t.push(vec![
                Cell::F(s.t),
                Cell::F(sobolev_norm(&s.r_osc_n, 0.0)),
                Cell::F(sobolev_norm(&s.r_high, m.run.s - 1.0)),
                Cell::F(sobolev_norm(&s.tilde_r, 0.0)),
                Cell::F(sobolev_norm(&s.tilde_r_t, 0.0)),
                Cell::F(sobolev_norm(&s.gamma, 0.0)),
                Cell::F(s.theta),
                Cell::F(s.identity_defect.unwrap_or(f64::NAN)),
            ]);
        }
        write_table(dir, "corrector.csv", &t, summary)?;
        summary.metric("corrector_smallest_divisor", series.smallest_divisor);
        summary.metric("r_high_norm", series.r_high_norm());
        summary.metric("theta_l1", series.theta_l1());
        summary.metric("gamma_norm", series.gamma_norm());
        if let Some(d) = series.max_identity_defect() {
            summary.invariants.push(Invariant::at_most(
                "corrector_identity",
                d,
                1e-8,
                "relative defect of ∂_t(εR̃) = R_{osc,N} + εR̃^t",
            ));
        }
    }
    Ok(())
}

fn converge(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let tr = FftTransform::for_torus(&m.torus);
    let u0 = initial_field(m)?;
    let cert = band_certificate(m, dir, summary)?;
    let lim = solve_limit(&u0, &m.run, &tr, Some(&cert))?;
    let opts = StudyOptions {
        steps_per_epsilon: m.converge.steps_per_epsilon,
    };
    let rows = m
        .converge
        .epsilons
        .par_iter()
        .map(|&eps| convergence_row(&lim, &u0, &m.run, eps, &tr, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["epsilon", "sup_Hs", "L2_Hs1", "ratio", "step"]);
    for (j, r) in rows.iter().enumerate() {
        let ratio = if j == 0 {
            1.0
        } else {
            r.sup_hs / rows[j - 1].sup_hs
        };
        t.push(vec![
            Cell::F(r.epsilon),
            Cell::F(r.sup_hs),
            Cell::F(r.l2_hs1),
            Cell::F(ratio),
            Cell::F(r.step),
        ]);
    }
    write_table(dir, "converge.csv", &t, summary)?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.epsilon.ln(), r.sup_hs.ln()))
        .collect();
    summary.metric("order", least_squares_slope(&pts));
    summary.invariants.push(Invariant::holds(
        "difference_decreasing",
        strictly_decreasing(&rows),
        "sup_t ‖V^ε − L(−t/ε)U‖_{H^s} strictly decreases down the ε list",
    ));
    Ok(())
}

fn resonance_scan(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let labels: Vec<[Label; 3]> = match m.resonance.labels {
        LabelSet::All => all_labels(),
        LabelSet::Osc => all_labels()
            .into_iter()
            .filter(|l| l.iter().all(|x| *x != Label::Zero))
            .collect(),
    };
    let decision = match m.resonance.method {
        CertifyMethod::Floating => Decision::Floating(m.resonance.tolerance),
        CertifyMethod::Exact => Decision::Exact,
    };
    let triads = enumerate_resonant_triads(&m.torus, m.resonance.cutoff, decision, &labels)?;
    let mut t = Table::new(&[
        "k1",
        "k2",
        "k3",
        "m1",
        "m2",
        "m3",
        "a",
        "b",
        "c",
        "omega_sum",
        "set_class",
    ]);
    let mut by_class = std::collections::BTreeMap::<&str, u64>::new();
    for r in &triads {
        let mut row: Vec<Cell> = r.k.iter().chain(r.m.iter()).map(|&x| Cell::I(x)).collect();
        row.extend(r.labels.iter().map(|l| Cell::S(l.symbol().to_string())));
        row.push(Cell::F(r.omega_sum));
        row.push(Cell::S(r.class().name().into()));
        t.push(row);
        *by_class.entry(r.class().name()).or_default() += 1;
    }
    write_table(dir, "resonant_triads.csv", &t, summary)?;
    summary.metric("resonant_triads", triads.len() as u64);
    summary.metric(
        "by_class",
        serde_json::to_value(&by_class).unwrap_or_default(),
    );
    match certify_nonresonant(&m.torus, m.resonance.cutoff, m.resonance.method) {
        Ok(c) => {
            write_certificate(dir, &c, summary)?;
            summary.metric("nonresonant", true);
            summary.metric("certificate_margin", c.margin);
        }
        Err(e) => {
            summary.metric("nonresonant", false);
            summary.metric("certificate_error", e.to_string());
        }
    }
    Ok(())
}

fn certify(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let c = certify_nonresonant(&m.torus, m.resonance.cutoff, m.resonance.method)?;
    write_certificate(dir, &c, summary)?;
    summary.metric("certificate_margin", c.margin);
    summary.invariants.push(Invariant::holds(
        "certificate_revalidates",
        c.validate().is_ok(),
        "witness triads recompute at or above the margin",
    ));
    Ok(())
}

fn propcheck(m: &Manifest, dir: &Path, summary: &mut Summary) -> Result<(), RunError> {
    let cfg = HarmonicSuiteConfig {
        seed: m.seed,
        samples: m.propcheck.samples,
        bernstein_bound: m.propcheck.bernstein_bound,
        gn_stability: m.propcheck.gn_stability,
        commutator: m.propcheck.commutator,
    };
    let report = property_suite_harmonic(&cfg, &fft_planner)?;
    let mut t = Table::new(&["name", "passed", "fitted", "reference", "detail"]);
    for c in &report.checks {
        t.push(vec![
            Cell::S(c.name.clone()),
            Cell::S(c.passed.to_string()),
            Cell::F(c.fitted),
            Cell::F(c.reference),
            Cell::S(c.detail.clone()),
        ]);
        summary.invariants.push(Invariant {
            name: c.name.clone(),
            passed: c.passed,
            value: c.fitted,
            threshold: c.reference,
            detail: c.detail.clone(),
        });
    }
    write_table(dir, "propcheck.csv", &t, summary)?;
    Ok(())
}
