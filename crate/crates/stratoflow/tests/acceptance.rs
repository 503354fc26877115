//! Acceptance criteria at the stated sizes, tolerances and time budgets.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
//! `ACCEPTANCE_ONLY=<k>` runs criterion `k` alone.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use stratocore::dynamics::{
    convergence_row, corrector_diagnostics, limit_q, run_full, solve_limit, solve_limit_bar,
    strictly_decreasing, CorrectorOptions, RunConfig, StudyOptions, Unknown,
};
use stratocore::init::{make_initial_data, random_vector_with, Recipe};
use stratocore::resonance::{
    a3_root_scan, beta_value, certify_nonresonant, coefficient_c, coefficient_c_int, omega_sum,
    resonance_polynomial, underline_q, CertifyMethod, RootOptions,
};
use stratocore::rng::{int_in, uniform_in, SeedTree};
use stratocore::spectral_torus::harmonic::{property_suite_harmonic, HarmonicSuiteConfig};
use stratocore::spectral_torus::{
    curl_h, gradient, lpv_hsigma_norm, product, sobolev_norm, Spectral,
};
use stratocore::wave_basis::{build_frame, inner4, penalized_apply, Label, WaveFrame};
use stratocore::{ScalarField, SpectralField, TorusSpec, C64};
use stratoflow::output::fit_decay_rate;
use stratoflow::{fft_planner, FftTransform};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn norm4(v: &[C64; 4]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn weight(kc: [f64; 3]) -> f64 {
    1.0 / (1.0 + kc[0] * kc[0] + kc[1] * kc[1] + kc[2] * kc[2])
}

/// Band-limited divergence-free field with zero horizontal average.
fn random_field(t: &TorusSpec, seeds: &SeedTree, label: &str) -> SpectralField {
    let mut rng = seeds.stream(label);
    let mut v = random_vector_with(t, &mut rng, weight, true);
    v.truncate_to_band();
    v.remove_horizontal_average();
    v
}

macro_rules! random_torus {
    ($rng:expr, $n:expr) => {
        TorusSpec::new([0, 1, 2].map(|_| uniform_in(&mut $rng, 0.5, 2.0)), $n).unwrap()
    };
}

fn cube(h: i64) -> impl Iterator<Item = [i64; 3]> {
    (-h..=h).flat_map(move |a| (-h..=h).flat_map(move |b| (-h..=h).map(move |c| [a, b, c])))
}

/// `P(ň)[0, 0, θ, −v³]` evaluated directly from the symbol.
fn pa_symbol(kc: [f64; 3], v: &[C64; 4]) -> [C64; 4] {
    let w = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), v[3]];
    let k2 = kc[0] * kc[0] + kc[1] * kc[1] + kc[2] * kc[2];
    let dot: C64 = (0..3).map(|j| w[j] * kc[j]).sum();
    let mut out = [C64::new(0.0, 0.0); 4];
    for j in 0..3 {
        out[j] = w[j] - dot * (kc[j] / k2);
    }
    out[3] = -v[2];
    out
}

fn eigenstructure() -> Outcome {
    let mut rng = SeedTree::new(1).stream("tori");
    let (mut pa, mut gram, mut div) = (0.0f64, 0.0f64, 0.0f64);
    let mut modes = 0;
    for _ in 0..20 {
        let t = random_torus!(rng, [16, 16, 16]);
        for n in cube(8) {
            let e = build_frame(&t, n);
            if e.degenerate {
                continue;
            }
            let kc = t.check(n);
            for l in Label::OSC {
                let v = e.vector(l);
                let lhs = pa_symbol(kc, &v);
                let iw = C64::new(0.0, l.sign() * e.omega);
                let r: [C64; 4] = core::array::from_fn(|j| lhs[j] - iw * v[j]);
                pa = pa.max(norm4(&r));
            }
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    gram = gram.max((inner4(&e.basis[i], &e.basis[j]) - expect).norm());
                }
            }
            for l in Label::ALL {
                let v = e.vector(l);
                let d: C64 = (0..3).map(|j| v[j] * kc[j]).sum();
                div = div.max(d.norm() / (kc[0] * kc[0] + kc[1] * kc[1] + kc[2] * kc[2]).sqrt());
            }
            modes += 1;
        }
    }
    let detail = format!(
        "{} modes, max PA defect {:.2e}, Gram {:.2e}, divergence {:.2e}",
        modes, pa, gram, div
    );
    ensure(pa <= 1e-13 && gram <= 1e-14 && div <= 1e-14, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn propagator() -> Outcome {
    let seeds = SeedTree::new(2);
    let mut rng = seeds.stream("tori");
    let mut worst_norm = 0.0f64;
    let mut worst_period = 0.0f64;
    for trial in 0..5 {
        let t = random_torus!(rng, [16, 16, 8]);
        let frame = WaveFrame::new(t);
        let f = random_field(&t, &seeds.index(trial), "field");
        for tau in [0.3, 7.1, 123.4] {
            let g = frame.propagate(&f, tau).map_err(|e| e.to_string())?;
            for s in [0.0, 0.7, 2.0] {
                let a = sobolev_norm(&f, s);
                worst_norm = worst_norm.max((sobolev_norm(&g, s) - a).abs() / a);
            }
        }
        for n in [[1, 0, 1], [2, -1, 3], [-3, 4, 1]] {
            let e = build_frame(&t, n);
            for l in Label::OSC {
                let mut m = SpectralField::zeros(t);
                m.set_mode(n, e.vector(l)).map_err(|e| e.to_string())?;
                let back = frame
                    .propagate(&m, 2.0 * PI / e.omega)
                    .map_err(|e| e.to_string())?;
                worst_period = worst_period.max(back.max_abs_diff(&m));
            }
        }
    }
    let detail = format!(
        "relative H^s drift {:.2e}, full-rotation defect {:.2e}",
        worst_norm, worst_period
    );
    ensure(worst_norm <= 1e-12 && worst_period <= 1e-12, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn energy_neutrality() -> Outcome {
    let seeds = SeedTree::new(3);
    let t = TorusSpec::new([1.0, 1.2, 0.9], [16, 16, 8]).unwrap();
    let mut skew = 0.0f64;
    for j in 0..100 {
        let mut rng = seeds.index(j).stream("skew");
        let v = random_vector_with(&t, &mut rng, weight, true);
        let e = v.inner(&v).re;
        skew = skew.max(penalized_apply(&v).inner(&v).norm() / e);
    }
    let t = TorusSpec::new([1.0, 1.0, 1.0], [16, 16, 8]).unwrap();
    let tr = FftTransform::for_torus(&t);
    let v0 = random_field(&t, &seeds, "energy");
    let v0 = v0.scaled(0.2 / sobolev_norm(&v0, 0.0));
    let cfg = |eps| RunConfig {
        epsilon: eps,
        nu: 0.05,
        nu_prime: 0.05,
        dt: 1e-3,
        t_final: 1.0,
        samples: 10,
        ..Default::default()
    };
    let a = run_full(&v0, &cfg(1e-1), None, Unknown::Full, &tr).map_err(|e| e.to_string())?;
    let b = run_full(&v0, &cfg(1e-3), None, Unknown::Full, &tr).map_err(|e| e.to_string())?;
    let e0 = a.l2[0] * a.l2[0];
    let rel =
        a.l2.iter()
            .zip(&b.l2)
            .map(|(x, y)| (x * x - y * y).abs() / e0)
            .fold(0.0, f64::max);
    let detail = format!(
        "max |<PA V, V>|/|V|^2 {:.2e}, L2 energy trace gap {:.2e}",
        skew, rel
    );
    ensure(skew <= 1e-12 && rel <= 1e-3, || detail.clone())?;
    Ok(detail)
}

fn on_summation_set(k: [i64; 3], m: [i64; 3]) -> bool {
    k[2] * k[2] * (m[0] * m[0] + m[1] * m[1]) == m[2] * m[2] * (k[0] * k[0] + k[1] * k[1])
}

fn horizontal(k: [i64; 3]) -> bool {
    k[0] != 0 || k[1] != 0
}

fn cancellations() -> Outcome {
    let mut pairs = 0u64;
    let mut int_fail = 0u64;
    let mut float_defect = 0.0f64;
    let t = TorusSpec::cube(8).unwrap();
    let ks: Vec<[i64; 3]> = cube(6).collect();
    for &k in &ks {
        for &m in &ks {
            let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
            if !horizontal(k) || !horizontal(m) || !horizontal(n) || !on_summation_set(k, m) {
                continue;
            }
            pairs += 1;
            if coefficient_c_int(k, m) + coefficient_c_int(m, k) != 0 {
                int_fail += 1;
            }
            let a = coefficient_c(&t, k, m, n, [Label::Plus, Label::Minus, Label::Zero])
                .map_err(|e| e.to_string())?;
            let b = coefficient_c(&t, m, k, n, [Label::Plus, Label::Minus, Label::Zero])
                .map_err(|e| e.to_string())?;
            float_defect = float_defect.max((a + b).norm());
        }
    }
    let seeds = SeedTree::new(4);
    let ta = TorusSpec::new([1.0, 1.2, 0.9], [8, 8, 8]).unwrap();
    let unit = TorusSpec::cube(8).unwrap();
    let frame = WaveFrame::new(unit);
    let (mut beta, mut uq) = (0.0f64, 0.0f64);
    for j in 0..50 {
        let mut rng = seeds.index(j).stream("beta");
        let u = random_vector_with(&ta, &mut rng, weight, true);
        let scale = u.energy();
        for m1 in -3..=3 {
            for m2 in -3..=3 {
                for n3 in [-6, -4, -2, 2, 4, 6] {
                    let b = beta_value(&u, [m1, m2], n3);
                    beta = beta.max(b[0].norm().max(b[1].norm()) / scale);
                }
            }
        }
        let mut rng = seeds.index(j).stream("underline");
        let u = random_vector_with(&unit, &mut rng, weight, true);
        let scale = u.energy();
        for (_, v) in underline_q(&u, Some(&frame), 1e-12) {
            uq = uq.max(v[0].norm().max(v[1].norm()) / scale);
        }
    }
    let detail = format!(
        "{} summation-set pairs, {} integer failures, float defect {:.2e}, beta {:.2e}, underline-Q {:.2e}",
        pairs, int_fail, float_defect, beta, uq
    );
    ensure(
        pairs > 0 && int_fail == 0 && float_defect <= 1e-13 && beta <= 1e-12 && uq <= 1e-12,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn min_osc_sum(t: &TorusSpec, k: [i64; 3], m: [i64; 3]) -> f64 {
    let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
    let mut best = f64::INFINITY;
    for x in Label::OSC {
        for y in Label::OSC {
            for z in Label::OSC {
                best = best.min(omega_sum(t, k, m, n, [x, y, z]).unwrap().abs());
            }
        }
    }
    best
}

fn polynomial_equivalence() -> Outcome {
    let mut rng = SeedTree::new(5).stream("triads");
    let (mut count, mut disagree, mut zeros) = (0, 0, 0);
    let mut first = String::new();
    while count < 10_000 {
        let k = [0, 1, 2].map(|_| int_in(&mut rng, -4, 4));
        let m = [0, 1, 2].map(|_| int_in(&mut rng, -4, 4));
        let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
        if !horizontal(k) || !horizontal(m) || !horizontal(n) {
            continue;
        }
        let a_h = [
            int_in(&mut rng, 4, 16) as f64 / 8.0,
            int_in(&mut rng, 4, 16) as f64 / 8.0,
        ];
        let mut a3 = uniform_in(&mut rng, 0.5, 2.0);
        if count % 10 == 0 {
            let r = stratocore::resonance::a3_resonant_roots(k, m, a_h, RootOptions::default())
                .map_err(|e| e.to_string())?;
            if let Some(&x) = r.roots.first() {
                a3 = x;
            }
        }
        let a = [a_h[0], a_h[1], a3];
        let t = TorusSpec::new(a, [8, 8, 8]).unwrap();
        // The polynomial is homogeneous of degree 12 in the check frequencies;
        // divide by |ǩ|⁴|m̌|⁴|ň|⁴ to compare in eigenvalue units.
        let sq = |v: [i64; 3]| {
            let c = t.check(v);
            c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
        };
        let (kk, mm, nn) = (sq(k), sq(m), sq(n));
        let p = resonance_polynomial(k, m, a) / (kk * kk * mm * mm * nn * nn);
        let poly_zero = p.abs() <= 1e-9;
        let eig_zero = min_osc_sum(&t, k, m) <= 1e-9;
        if poly_zero != eig_zero {
            disagree += 1;
            if first.is_empty() {
                first = format!(" first at k = {:?}, m = {:?}, a = {:?}", k, m, a);
            }
        }
        zeros += eig_zero as usize;
        count += 1;
    }
    let detail = format!(
        "{} triads, {} resonant, {} disagreements{}",
        count, zeros, disagree, first
    );
    ensure(disagree == 0 && zeros > 0, || detail.clone())?;
    Ok(detail)
}

fn certification() -> Outcome {
    let scan = a3_root_scan(4, [1.0, 1.0], RootOptions::default()).map_err(|e| e.to_string())?;
    let worst = scan.iter().map(|r| r.residual).fold(0.0, f64::max);
    ensure(!scan.is_empty() && worst < 1e-8, || {
        format!("{} roots, worst residual {:.2e}", scan.len(), worst)
    })?;
    let mut roots: Vec<f64> = scan
        .iter()
        .map(|r| r.a3)
        .filter(|x| (0.7..=1.5).contains(x))
        .collect();
    roots.sort_by(f64::total_cmp);
    let (gap, a3) = roots
        .windows(2)
        .map(|w| (w[1] - w[0], 0.5 * (w[0] + w[1])))
        .fold((0.0, 1.0), |best, c| if c.0 > best.0 { c } else { best });
    let t = TorusSpec::new([1.0, 1.0, a3], [8, 8, 8]).unwrap();
    let cert = certify_nonresonant(&t, 4, CertifyMethod::Floating).map_err(|e| e.to_string())?;
    ensure(cert.margin > 0.0, || {
        format!("a3 = {} margin {}", a3, cert.margin)
    })?;
    let within = |v: [i64; 3]| v.iter().all(|x| x.abs() <= 4);
    let root = scan
        .iter()
        .find(|r| within([r.k[0] + r.m[0], r.k[1] + r.m[1], r.k[2] + r.m[2]]))
        .ok_or("no root with the sum inside the cutoff")?;
    let t = TorusSpec::new([1.0, 1.0, root.a3], [8, 8, 8]).unwrap();
    let msg = match certify_nonresonant(&t, 4, CertifyMethod::Floating) {
        Ok(c) => {
            return Err(format!(
                "root a3 = {} certified with margin {}",
                root.a3, c.margin
            ))
        }
        Err(e) => e.to_string(),
    };
    ensure(msg.contains("k = ("), || {
        format!("failure does not name a triad: {}", msg)
    })?;
    Ok(format!(
        "{} roots with residual <= {:.2e}; a3 = {:.6} (gap {:.2e}) margin {:.2e}; root a3 = {:.12} rejected: {}",
        scan.len(),
        worst,
        a3,
        gap,
        cert.margin,
        root.a3,
        msg.lines().next().unwrap_or("")
    ))
}

fn kernel_limit() -> Outcome {
    let t = TorusSpec::new([1.0, 1.2, 0.9], [16, 16, 8]).unwrap();
    let frame = WaveFrame::new(t);
    let tr = FftTransform::for_torus(&t);
    let seeds = SeedTree::new(7);
    let mut worst = 0.0f64;
    for j in 0..3 {
        let u = frame
            .project_bar(&random_field(&t, &seeds.index(j), "kernel"))
            .map_err(|e| e.to_string())?;
        let q = limit_q(&frame, &u, &u).map_err(|e| e.to_string())?;
        let omega = curl_h(&u);
        let g = gradient(&omega);
        let mut adv = ScalarField::zeros(t);
        for c in 0..2 {
            let p =
                product(&u.component(c), &g.component(c), true, &tr).map_err(|e| e.to_string())?;
            for (a, b) in adv.coeffs_mut().iter_mut().zip(p.coeffs()) {
                *a += b;
            }
        }
        let (mut err, mut scale) = (0.0f64, 0.0f64);
        for i in 0..t.len() {
            let e = frame.entry(i);
            if e.degenerate || !t.in_band(e.n) {
                continue;
            }
            let kc = t.check(e.n);
            let expect = -C64::i() * adv.coeffs()[i] / (kc[0] * kc[0] + kc[1] * kc[1]).sqrt();
            let got = inner4(&q.coeffs()[i], &e.e0());
            err = err.max((got - expect).norm());
            scale = scale.max(expect.norm());
        }
        worst = worst.max(err / scale);
    }
    let detail = format!("max relative defect {:.2e} over 3 fields", worst);
    ensure(worst <= 1e-10, || detail.clone())?;
    Ok(detail)
}

fn decay() -> Outcome {
    let t = TorusSpec::new([1.0, 1.2, 0.9], [32, 32, 8]).unwrap();
    let tr = FftTransform::for_torus(&t);
    let u0 = make_initial_data(
        &Recipe::KernelVortex {
            amplitude: 1.0,
            layers: 2,
        },
        &t,
        &SeedTree::new(8),
    )
    .map_err(|e| e.to_string())?;
    let c = t.poincare_constant_h();
    let nu = 0.1;
    let cfg = RunConfig {
        nu,
        nu_prime: nu,
        dt: 0.25,
        t_final: 5.0 / (c * nu),
        samples: 40,
        ..Default::default()
    };
    let bar = solve_limit_bar(&u0, &cfg, &tr, false).map_err(|e| e.to_string())?;
    let norms: Vec<f64> = bar
        .samples
        .iter()
        .map(|u| lpv_hsigma_norm(u, f64::INFINITY, 0.0))
        .collect();
    let rate = fit_decay_rate(&bar.times, &norms).ok_or("no decay fit")?;
    let detail = format!(
        "fitted rate {:.6e} vs c nu {:.6e} (ratio {:.4}) over t <= {:.1}",
        rate,
        c * nu,
        rate / (c * nu),
        cfg.t_final
    );
    ensure(rate >= 0.95 * c * nu, || detail.clone())?;
    Ok(detail)
}

fn convergence() -> Outcome {
    let t = TorusSpec::new([1.0, 1.3, 0.8], [16, 16, 8]).unwrap();
    let tr = FftTransform::for_torus(&t);
    let cutoff = *t.band_limit().iter().max().unwrap();
    let cert =
        certify_nonresonant(&t, cutoff, CertifyMethod::Floating).map_err(|e| e.to_string())?;
    let u0 = make_initial_data(
        &Recipe::RandomSolenoidal {
            s: 1.0,
            amplitude: 0.1,
            max_mode: 2,
        },
        &t,
        &SeedTree::new(9).child("initial"),
    )
    .map_err(|e| e.to_string())?;
    let cfg = RunConfig {
        s: 1.0,
        dt: 0.01,
        t_final: 1.0,
        samples: 10,
        ..Default::default()
    };
    let limit = solve_limit(&u0, &cfg, &tr, Some(&cert)).map_err(|e| e.to_string())?;
    let opts = StudyOptions::default();
    let rows = [1e-1, 3e-2, 1e-2, 3e-3]
        .par_iter()
        .map(|&eps| convergence_row(&limit, &u0, &cfg, eps, &tr, &opts))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let sup: Vec<String> = rows.iter().map(|r| format!("{:.3e}", r.sup_hs)).collect();
    let detail = format!(
        "sup_t H^1 difference [{}], margin {:.2e} at N = {}",
        sup.join(", "),
        cert.margin,
        cutoff
    );
    ensure(
        strictly_decreasing(&rows) && rows[3].sup_hs < 0.5 * rows[0].sup_hs,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn corrector() -> Outcome {
    let t = TorusSpec::new([1.0, 1.3, 0.8], [16, 16, 8]).unwrap();
    let tr = FftTransform::for_torus(&t);
    let cutoff = *t.band_limit().iter().max().unwrap();
    let cert =
        certify_nonresonant(&t, cutoff, CertifyMethod::Floating).map_err(|e| e.to_string())?;
    let u = random_field(&t, &SeedTree::new(10), "corrector");
    // ε‖R̃‖² is quartic in the amplitude and ‖U‖² quadratic; small data keeps
    // the corrector term below the limit-flow term
    let u = u.scaled(0.002 / u.energy_sqrt());
    let cfg = |eps| RunConfig {
        epsilon: eps,
        dt: 0.02,
        t_final: 0.4,
        samples: 4,
        ..Default::default()
    };
    let opts = |n| CorrectorOptions {
        n,
        ..Default::default()
    };
    let run = solve_limit(&u, &cfg(0.05), &tr, Some(&cert)).map_err(|e| e.to_string())?;
    let mut highs = Vec::new();
    let mut identity = 0.0f64;
    for n in [2, 4, 8] {
        let s =
            corrector_diagnostics(&run, &cfg(0.05), &opts(n), None).map_err(|e| e.to_string())?;
        highs.push(s.r_high_norm());
        identity = identity.max(s.max_identity_defect().unwrap_or(f64::NAN));
    }
    let mut thetas = Vec::new();
    for eps in [1e-1, 1e-2] {
        let run = solve_limit(&u, &cfg(eps), &tr, Some(&cert)).map_err(|e| e.to_string())?;
        let s = corrector_diagnostics(
            &run,
            &cfg(eps),
            &CorrectorOptions {
                check_identity: false,
                ..opts(4)
            },
            None,
        )
        .map_err(|e| e.to_string())?;
        thetas.push(s.theta_l1());
    }
    let spread = (thetas[0] - thetas[1]).abs() / thetas[0].min(thetas[1]);
    let detail = format!(
        "high part [{:.3e}, {:.3e}, {:.3e}], identity defect {:.2e}, theta L1 {:.4e} / {:.4e} (spread {:.2}%)",
        highs[0],
        highs[1],
        highs[2],
        identity,
        thetas[0],
        thetas[1],
        100.0 * spread
    );
    ensure(
        highs[0] > highs[1] && highs[1] > highs[2] && identity < 1e-8 && spread < 0.1,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn harmonic() -> Outcome {
    let cfg = HarmonicSuiteConfig {
        samples: 100,
        ..Default::default()
    };
    let report = property_suite_harmonic(&cfg, &fft_planner).map_err(|e| e.to_string())?;
    let lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            format!(
                "{} {} fitted {:.4e} ref {:.4e}",
                c.name,
                if c.passed { "ok" } else { "FAILED" },
                c.fitted,
                c.reference
            )
        })
        .collect();
    let detail = lines.join("; ");
    let names = ["bernstein", "gagliardo_nirenberg", "ordering", "poincare"];
    ensure(
        report.all_passed() && names.iter().all(|n| report.get(n).is_some()),
        || detail.clone(),
    )?;
    Ok(detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("eigenstructure", Duration::from_secs(5), eigenstructure),
        (
            "propagator unitarity and periodicity",
            Duration::from_secs(5),
            propagator,
        ),
        (
            "skew-term energy neutrality",
            Duration::from_secs(120),
            energy_neutrality,
        ),
        (
            "algebraic cancellations",
            Duration::from_secs(60),
            cancellations,
        ),
        (
            "resonance polynomial equivalence",
            Duration::from_secs(30),
            polynomial_equivalence,
        ),
        (
            "non-resonance certification",
            Duration::from_secs(60),
            certification,
        ),
        (
            "kernel limit equivalence",
            Duration::from_secs(60),
            kernel_limit,
        ),
        ("exponential decay", Duration::from_secs(120), decay),
        (
            "singular-limit convergence",
            Duration::from_secs(600),
            convergence,
        ),
        ("corrector behavior", Duration::from_secs(300), corrector),
        ("harmonic-analysis suite", Duration::from_secs(60), harmonic),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{}; over the {:?} budget", d, budget)),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!(
            "{} criterion {}: {}: {} ({:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            name,
            detail,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} of {} criteria failed", failed, criteria.len());
        ExitCode::FAILURE
    }
}
