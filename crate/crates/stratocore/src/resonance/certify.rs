//! Finite-cutoff non-resonance certificates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{for_each_pair, omega, ExactTorus, TriadRecord};
use crate::spectral_torus::TorusSpec;
use crate::wave_basis::Label;
use crate::{Error, Result};

/// Margins at or below this are treated as resonant in floating mode.
pub const MARGIN_FLOOR: f64 = 1e-12;

/// Smallest-margin triads kept on a certificate.
const WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMethod {
    Floating,
    Exact,
}

impl CertifyMethod {
    pub fn name(self) -> &'static str {
        match self {
            CertifyMethod::Floating => "floating",
            CertifyMethod::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "floating" => Some(CertifyMethod::Floating),
            "exact" => Some(CertifyMethod::Exact),
            _ => None,
        }
    }
}

/// Evidence that no oscillating triad with nonzero horizontal parts and
/// `|k|∞, |m|∞, |n|∞ ≤ cutoff` is resonant on `torus`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonResonanceCertificate {
    pub torus: TorusSpec,
    pub cutoff: i64,
    /// `min |ω^{a,b,c}_{k,m,n}|` over the scanned triads.
    pub margin: f64,
    pub method: CertifyMethod,
    /// The triads closest to resonance, smallest first.
    pub witnesses: Vec<TriadRecord>,
}

impl NonResonanceCertificate {
    /// Recompute the listed triads; fails if any drops below the margin.
    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0) {
            return Err(Error::Certificate(format!(
                "non-positive margin {:e}",
                self.margin
            )));
        }
        for w in &self.witnesses {
            let r = TriadRecord::new(&self.torus, w.k, w.m, w.labels);
            if r.omega_sum.abs() < self.margin * (1.0 - 1e-12) {
                return Err(Error::Certificate(format!(
                    "triad {} recomputes below the margin",
                    r.describe()
                )));
            }
        }
        Ok(())
    }

    /// True when the certificate was issued for `t` (same periods) with at
    /// least the given cutoff.
    pub fn covers(&self, t: &TorusSpec, cutoff: i64) -> bool {
        self.torus.a == t.a && self.cutoff >= cutoff
    }
}

fn horizontal(k: [i64; 3]) -> bool {
    k[0] != 0 || k[1] != 0
}

fn within(k: [i64; 3], cutoff: i64) -> bool {
    k.iter().all(|x| x.abs() <= cutoff)
}

/// Scan every oscillating labeling `(±, ±, ±)` of triads with
/// `k_h, m_h, n_h ≠ 0` and `|k|∞, |m|∞, |n|∞ ≤ cutoff`.
///
/// Floating mode fails when the margin is at most [`MARGIN_FLOOR`]; exact mode
/// fails when any triad is exactly resonant, and needs rational `aᵢ²`.
pub fn certify_nonresonant(
    t: &TorusSpec,
    cutoff: i64,
    method: CertifyMethod,
) -> Result<NonResonanceCertificate> {
    if cutoff < 1 {
        return Err(Error::Constraint(format!(
            "cutoff must be at least 1, got {}",
            cutoff
        )));
    }
    let exact = match method {
        CertifyMethod::Exact => Some(ExactTorus::new(t)?),
        CertifyMethod::Floating => None,
    };
    let side = (2 * cutoff + 1) as usize;
    let at = |v: [i64; 3]| {
        ((v[0] + cutoff) as usize)
            + side * (((v[1] + cutoff) as usize) + side * ((v[2] + cutoff) as usize))
    };
    let mut table = alloc::vec![0.0; side * side * side];
    for i in -cutoff..=cutoff {
        for j in -cutoff..=cutoff {
            for l in -cutoff..=cutoff {
                table[at([i, j, l])] = omega(t, [i, j, l]);
            }
        }
    }
    let mut witnesses: Vec<TriadRecord> = Vec::new();
    let mut margin = f64::INFINITY;
    let mut bad_count = 0usize;
    let mut first_bad: Option<String> = None;
    for_each_pair(cutoff, |k, m, n| {
        if !within(n, cutoff) || !horizontal(k) || !horizontal(m) || !horizontal(n) {
            return;
        }
        let (wk, wm, wn) = (table[at(k)], table[at(m)], table[at(n)]);
        for a in Label::OSC {
            for b in Label::OSC {
                for c in Label::OSC {
                    let s = a.sign() * wk + b.sign() * wm - c.sign() * wn;
                    let resonant = match &exact {
                        Some(e) => e.is_resonant(k, m, n, [a, b, c]),
                        None => s.abs() <= MARGIN_FLOOR,
                    };
                    if resonant {
                        bad_count += 1;
                        if first_bad.is_none() {
                            first_bad = Some(TriadRecord::new(t, k, m, [a, b, c]).describe());
                        }
                        continue;
                    }
                    let x = s.abs();
                    margin = margin.min(x);
                    if witnesses.len() < WITNESSES
                        || x < witnesses[witnesses.len() - 1].omega_sum.abs()
                    {
                        let r = TriadRecord::new(t, k, m, [a, b, c]);
                        let pos = witnesses.partition_point(|w| w.omega_sum.abs() <= x);
                        witnesses.insert(pos, r);
                        witnesses.truncate(WITNESSES);
                    }
                }
            }
        }
    });
    if let Some(first) = first_bad {
        return Err(Error::ResonantDomain {
            count: bad_count,
            first,
        });
    }
    if !margin.is_finite() {
        return Err(Error::Certificate(format!(
            "no admissible triads at cutoff {}",
            cutoff
        )));
    }
    Ok(NonResonanceCertificate {
        torus: *t,
        cutoff,
        margin,
        method,
        witnesses,
    })
}
