//! The limit system: resonant bilinear form, averaged diffusion, the
//! two-dimensional kernel flow and the linear oscillating equation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::config::RunConfig;
use super::interact::{symmetric, Band, Resonant};
use crate::math::{exp, sqrt};
use crate::resonance::{NonResonanceCertificate, DEFAULT_TOLERANCE};
use crate::spectral_torus::{
    biot_savart, curl_h, norm2, norm2_h, scalar_from_physical, scalar_to_physical, sobolev_norm,
    ScalarField, Spectral, SpectralField, TorusSpec, Transform,
};
use crate::wave_basis::{WaveFrame, KERNEL, MINUS, PLUS};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `Q(A, B)`: the symmetrized transport restricted to resonant triads
/// `ω^{a,b,c} = 0` inside the two-thirds band, projected per frame slot.
pub fn limit_q(frame: &WaveFrame, a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    let band = Band::new(frame.torus());
    symmetric(&band, frame, a, b, &Resonant(DEFAULT_TOLERANCE))
}

/// Averaged diffusion: `−ν|ň|²` on `e⁰`, `−½(ν+ν′)|ň|²` on `e^±`, and the
/// raw `(ν, ν′)` heat symbol on degenerate modes.
pub fn limit_d(
    frame: &WaveFrame,
    u: &SpectralField,
    nu: f64,
    nu_prime: f64,
) -> Result<SpectralField> {
    if u.torus() != frame.torus() {
        return Err(Error::TorusMismatch);
    }
    let t = *u.torus();
    let mut out = u.clone();
    for (idx, v) in out.coeffs_mut().iter_mut().enumerate() {
        let e = frame.entry(idx);
        let k2 = norm2(t.check(e.n));
        if e.degenerate {
            for c in 0..3 {
                v[c] *= -nu * k2;
            }
            v[3] *= -nu_prime * k2;
            continue;
        }
        let mut c = e.coords(v);
        c[KERNEL] *= -nu * k2;
        c[PLUS] *= -0.5 * (nu + nu_prime) * k2;
        c[MINUS] *= -0.5 * (nu + nu_prime) * k2;
        c[3] = ZERO;
        *v = e.reconstruct(&c);
    }
    Ok(out)
}

/// Kernel flow sampled at the run's output times.
#[derive(Clone, Debug, PartialEq)]
pub struct BarTrajectory {
    pub torus: TorusSpec,
    pub times: Vec<f64>,
    /// `ū^h` at the sample times.
    pub samples: Vec<SpectralField>,
    pub step: f64,
    pub steps_per_sample: usize,
    /// In-band kernel coordinates at the four RK4 stage inputs of every step.
    stages: Option<Vec<[Vec<C64>; 4]>>,
}

impl BarTrajectory {
    pub fn has_stages(&self) -> bool {
        self.stages.is_some()
    }
}

fn kernel_velocity(omega: &ScalarField) -> Result<SpectralField> {
    biot_savart(omega)
}

/// `Ū⁰(k) = −iω̂(k)/|ǩ_h|` on the band.
fn kernel_coords(band: &Band, omega: &ScalarField) -> Vec<C64> {
    band.idx
        .iter()
        .zip(band.check.iter())
        .map(|(&i, kc)| {
            let h2 = norm2_h(*kc);
            if h2 == 0.0 {
                ZERO
            } else {
                -I * omega.coeffs()[i] / sqrt(h2)
            }
        })
        .collect()
}

fn truncate(f: &mut ScalarField, dealias: bool) {
    if dealias {
        f.truncate_to_band();
    }
}

/// `−∇_h·(ū ω)` per layer, pseudospectral.
fn vorticity_rhs(omega: &ScalarField, dealias: bool, tr: &dyn Transform) -> Result<ScalarField> {
    let t = *omega.torus();
    let mut w = omega.clone();
    truncate(&mut w, dealias);
    let u = kernel_velocity(&w)?;
    let wx = scalar_to_physical(&w, tr)?;
    let mut flux = [ScalarField::zeros(t), ScalarField::zeros(t)];
    for (j, f) in flux.iter_mut().enumerate() {
        let uj = scalar_to_physical(&u.component(j), tr)?;
        let prod: Vec<f64> = uj.iter().zip(wx.iter()).map(|(a, b)| a * b).collect();
        *f = scalar_from_physical(&t, &prod, tr)?;
    }
    let mut out = ScalarField::zeros(t);
    for (idx, z) in out.coeffs_mut().iter_mut().enumerate() {
        let kc = t.check(t.freq(idx));
        *z = -I * (flux[0].coeffs()[idx] * kc[0] + flux[1].coeffs()[idx] * kc[1]);
    }
    out.enforce();
    truncate(&mut out, dealias);
    Ok(out)
}

fn heat(f: &ScalarField, nu: f64, h: f64) -> ScalarField {
    let t = *f.torus();
    let mut out = f.clone();
    for (idx, z) in out.coeffs_mut().iter_mut().enumerate() {
        *z *= exp(-nu * norm2(t.check(t.freq(idx))) * h);
    }
    out
}

fn axpy_s(x: &ScalarField, s: f64, y: &ScalarField) -> ScalarField {
    let mut out = x.clone();
    for (a, b) in out.coeffs_mut().iter_mut().zip(y.coeffs()) {
        *a += b * s;
    }
    out
}

fn check_kernel(frame: &WaveFrame, f: &SpectralField) -> Result<()> {
    let total = f.energy();
    let off = frame.project_osc(f)?.energy()
        + frame.project_degenerate(f)?.energy()
        + frame.project_gradient(f)?.energy();
    if off > 1e-20 * total.max(f64::MIN_POSITIVE) {
        return Err(Error::Constraint(format!(
            "initial bar field has relative energy {:e} off the kernel",
            off / total
        )));
    }
    Ok(())
}

/// Two-dimensional stratified Navier-Stokes in vorticity form,
/// `∂_t ω + ū·∇_h ω = νΔω`, `ū = ∇_h^⊥Δ_h^{−1}ω` per layer, by
/// integrating-factor RK4 with the schedule of `cfg`.
///
/// `record_stages` keeps the RK4 stage states needed by
/// [`solve_limit_osc`].
pub fn solve_limit_bar(
    initial: &SpectralField,
    cfg: &RunConfig,
    tr: &dyn Transform,
    record_stages: bool,
) -> Result<BarTrajectory> {
    let t = *initial.torus();
    cfg.validate(&t)?;
    let frame = WaveFrame::new(t);
    check_kernel(&frame, initial)?;
    let band = Band::new(&t);
    let (per, h) = cfg.schedule(cfg.dt);
    let mut omega = curl_h(initial);
    truncate(&mut omega, cfg.dealias);
    let mut out = BarTrajectory {
        torus: t,
        times: vec![0.0],
        samples: vec![kernel_velocity(&omega)?],
        step: h,
        steps_per_sample: per,
        stages: record_stages.then(Vec::new),
    };
    let nu = cfg.nu;
    for j in 1..=cfg.samples {
        for _ in 0..per {
            let w = &omega;
            let k1 = vorticity_rhs(w, cfg.dealias, tr)?;
            let s2 = heat(&axpy_s(w, 0.5 * h, &k1), nu, 0.5 * h);
            let k2 = vorticity_rhs(&s2, cfg.dealias, tr)?;
            let s3 = axpy_s(&heat(w, nu, 0.5 * h), 0.5 * h, &k2);
            let k3 = vorticity_rhs(&s3, cfg.dealias, tr)?;
            let s4 = axpy_s(&heat(w, nu, h), h, &heat(&k3, nu, 0.5 * h));
            let k4 = vorticity_rhs(&s4, cfg.dealias, tr)?;
            if let Some(st) = out.stages.as_mut() {
                st.push([
                    kernel_coords(&band, w),
                    kernel_coords(&band, &s2),
                    kernel_coords(&band, &s3),
                    kernel_coords(&band, &s4),
                ]);
            }
            let mut next = heat(w, nu, h);
            next = axpy_s(&next, h / 6.0, &heat(&k1, nu, h));
            let mid = axpy_s(&k2, 1.0, &k3);
            next = axpy_s(&next, h / 3.0, &heat(&mid, nu, 0.5 * h));
            next = axpy_s(&next, h / 6.0, &k4);
            next.enforce();
            omega = next;
        }
        let u = kernel_velocity(&omega)?;
        let tt = cfg.t_final * j as f64 / cfg.samples as f64;
        let norm = sobolev_norm(&u, cfg.s);
        if !(norm <= cfg.blowup_guard) {
            return Err(Error::Blowup { t: tt, norm });
        }
        out.times.push(tt);
        out.samples.push(u);
    }
    Ok(out)
}

/// Resonant `(kernel, wave) → wave` interaction with its coefficient.
#[derive(Clone, Copy, Debug)]
struct OscTriad {
    kernel: usize,
    osc: usize,
    slot: usize,
    out: usize,
    out_slot: usize,
    coef: C64,
}

fn osc_triads(band: &Band, frame: &WaveFrame) -> Vec<OscTriad> {
    let mut list = Vec::new();
    let tol = DEFAULT_TOLERANCE;
    let inner = |x: &[C64; 4], y: &[C64; 4]| crate::wave_basis::inner4(x, y);
    for (pn, &n) in band.freq.iter().enumerate() {
        let en = frame.entry(band.idx[pn]);
        if en.degenerate {
            continue;
        }
        for (pk, &k) in band.freq.iter().enumerate() {
            let m = [n[0] - k[0], n[1] - k[1], n[2] - k[2]];
            let Some(pm) = band.pos(m) else { continue };
            let ek = frame.entry(band.idx[pk]);
            let em = frame.entry(band.idx[pm]);
            if ek.degenerate || em.degenerate {
                continue;
            }
            let mc = band.check[pm];
            let dot = |v: &[C64; 4]| (v[0] * mc[0] + v[1] * mc[1] + v[2] * mc[2]) * I;
            for (cs, oc) in [(PLUS, en.omega), (MINUS, -en.omega)] {
                // kernel at k, wave at m
                let ak = dot(&ek.basis[KERNEL]);
                for (bs, ob) in [(PLUS, em.omega), (MINUS, -em.omega)] {
                    if (ob - oc).abs() < tol {
                        let coef = ak * inner(&em.basis[bs], &en.basis[cs]);
                        if coef != ZERO {
                            list.push(OscTriad {
                                kernel: pk,
                                osc: pm,
                                slot: bs,
                                out: pn,
                                out_slot: cs,
                                coef,
                            });
                        }
                    }
                }
                // wave at k, kernel at m
                let b0 = inner(&em.basis[KERNEL], &en.basis[cs]);
                for (as_, oa) in [(PLUS, ek.omega), (MINUS, -ek.omega)] {
                    if (oa - oc).abs() < tol {
                        let coef = dot(&ek.basis[as_]) * b0;
                        if coef != ZERO {
                            list.push(OscTriad {
                                kernel: pm,
                                osc: pk,
                                slot: as_,
                                out: pn,
                                out_slot: cs,
                                coef,
                            });
                        }
                    }
                }
            }
        }
    }
    list
}

/// Oscillating part sampled at the run's output times.
#[derive(Clone, Debug, PartialEq)]
pub struct OscTrajectory {
    pub times: Vec<f64>,
    pub samples: Vec<SpectralField>,
    /// Number of resonant interactions in the precomputed list.
    pub triads: usize,
}

type Waves = Vec<[C64; 2]>;

fn slot_index(s: usize) -> usize {
    if s == PLUS {
        0
    } else {
        1
    }
}

fn osc_rhs(list: &[OscTriad], bar: &[C64], u: &Waves) -> Waves {
    let mut out = vec![[ZERO; 2]; u.len()];
    for tr in list {
        let x = u[tr.osc][slot_index(tr.slot)];
        let b = bar[tr.kernel];
        if x == ZERO || b == ZERO {
            continue;
        }
        out[tr.out][slot_index(tr.out_slot)] -= tr.coef * b * x;
    }
    out
}

fn waves_axpy(x: &Waves, s: f64, y: &Waves) -> Waves {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| [a[0] + b[0] * s, a[1] + b[1] * s])
        .collect()
}

fn waves_decay(x: &Waves, f: &[f64]) -> Waves {
    x.iter()
        .zip(f.iter())
        .map(|(a, d)| [a[0] * d, a[1] * d])
        .collect()
}

/// `∂_t U_osc + 2Q(Ū, U_osc) − D U_osc = 0` with the averaged diffusion
/// `½(ν+ν′)|ň|²` on the wave coordinates.
///
/// Needs a bar trajectory recorded with stages on the same schedule, and a
/// certificate covering the torus at the band cutoff.
pub fn solve_limit_osc(
    initial_osc: &SpectralField,
    bar: &BarTrajectory,
    cfg: &RunConfig,
    cert: Option<&NonResonanceCertificate>,
) -> Result<OscTrajectory> {
    let t = *initial_osc.torus();
    if t != bar.torus {
        return Err(Error::TorusMismatch);
    }
    let cutoff = *t.band_limit().iter().max().unwrap_or(&0);
    match cert {
        Some(c) if c.covers(&t, cutoff) => c.validate()?,
        Some(c) => {
            return Err(Error::Certificate(format!(
            "certificate for periods {:?} at cutoff {} does not cover periods {:?} at cutoff {}",
            c.torus.a, c.cutoff, t.a, cutoff
        )))
        }
        None => {
            return Err(Error::Certificate(
                "torus carries no non-resonance certificate".into(),
            ))
        }
    }
    let Some(stages) = bar.stages.as_ref() else {
        return Err(Error::Constraint(
            "bar trajectory was recorded without stages".into(),
        ));
    };
    let (per, h) = cfg.schedule(cfg.dt);
    if per != bar.steps_per_sample
        || (h - bar.step).abs() > 1e-15 * h
        || bar.times.len() != cfg.samples + 1
    {
        return Err(Error::Constraint(
            "bar trajectory schedule differs from the run configuration".into(),
        ));
    }
    let frame = WaveFrame::new(t);
    let band = Band::new(&t);
    let mut u: Waves = vec![[ZERO; 2]; band.len()];
    for (p, &i) in band.idx.iter().enumerate() {
        let e = frame.entry(i);
        let x = initial_osc.coeffs()[i];
        if e.degenerate {
            if x.iter().any(|z| *z != ZERO) {
                return Err(Error::Constraint(format!(
                    "oscillating data has a horizontal average at {:?}",
                    e.n
                )));
            }
            continue;
        }
        let c = e.coords(&x);
        u[p] = [c[PLUS], c[MINUS]];
    }
    let list = osc_triads(&band, &frame);
    let rate: Vec<f64> = band
        .check
        .iter()
        .map(|kc| 0.5 * (cfg.nu + cfg.nu_prime) * norm2(*kc))
        .collect();
    let d_half: Vec<f64> = rate.iter().map(|r| exp(-r * 0.5 * h)).collect();
    let d_full: Vec<f64> = rate.iter().map(|r| exp(-r * h)).collect();
    let to_field = |u: &Waves| -> SpectralField {
        let mut f = SpectralField::zeros(t);
        for (p, &i) in band.idx.iter().enumerate() {
            let e = frame.entry(i);
            if !e.degenerate {
                f.coeffs_mut()[i] = e.reconstruct(&[ZERO, u[p][0], u[p][1], ZERO]);
            }
        }
        f
    };
    let mut out = OscTrajectory {
        times: vec![0.0],
        samples: vec![to_field(&u)],
        triads: list.len(),
    };
    let mut step = 0usize;
    for j in 1..=cfg.samples {
        for _ in 0..per {
            let b = &stages[step];
            let k1 = osc_rhs(&list, &b[0], &u);
            let k2 = osc_rhs(
                &list,
                &b[1],
                &waves_decay(&waves_axpy(&u, 0.5 * h, &k1), &d_half),
            );
            let k3 = osc_rhs(
                &list,
                &b[2],
                &waves_axpy(&waves_decay(&u, &d_half), 0.5 * h, &k2),
            );
            let eu = waves_decay(&u, &d_full);
            let k4 = osc_rhs(
                &list,
                &b[3],
                &waves_axpy(&eu, h, &waves_decay(&k3, &d_half)),
            );
            let mut next = waves_axpy(&eu, h / 6.0, &waves_decay(&k1, &d_full));
            next = waves_axpy(
                &next,
                h / 3.0,
                &waves_decay(&waves_axpy(&k2, 1.0, &k3), &d_half),
            );
            next = waves_axpy(&next, h / 6.0, &k4);
            u = next;
            step += 1;
        }
        out.times.push(cfg.t_final * j as f64 / cfg.samples as f64);
        let f = to_field(&u);
        let norm = sobolev_norm(&f, cfg.s);
        if !(norm <= cfg.blowup_guard) {
            return Err(Error::Blowup {
                t: cfg.t_final * j as f64 / cfg.samples as f64,
                norm,
            });
        }
        out.samples.push(f);
    }
    Ok(out)
}

/// Limit trajectory `U = Ū + U_osc`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRun {
    pub times: Vec<f64>,
    pub u: Vec<SpectralField>,
    pub bar: BarTrajectory,
    pub osc: OscTrajectory,
}

/// Split `u0` into kernel and wave parts and solve both limit equations.
///
/// `u0` must be solenoidal with zero horizontal average.
pub fn solve_limit(
    u0: &SpectralField,
    cfg: &RunConfig,
    tr: &dyn Transform,
    cert: Option<&NonResonanceCertificate>,
) -> Result<LimitRun> {
    let t = *u0.torus();
    let frame = WaveFrame::new(t);
    let total = u0.energy();
    let avg = u0.horizontal_average_energy();
    if avg > 1e-24 * total.max(f64::MIN_POSITIVE) {
        return Err(Error::Constraint(format!(
            "initial data has horizontal-average energy {:e}",
            avg
        )));
    }
    frame.to_eigen(u0)?;
    let bar0 = frame.project_bar(u0)?;
    let osc0 = frame.project_osc(u0)?;
    let bar = solve_limit_bar(&bar0, cfg, tr, true)?;
    let osc = solve_limit_osc(&osc0, &bar, cfg, cert)?;
    let u = bar
        .samples
        .iter()
        .zip(osc.samples.iter())
        .map(|(a, b)| a.add(b))
        .collect();
    Ok(LimitRun {
        times: bar.times.clone(),
        u,
        bar,
        osc,
    })
}
