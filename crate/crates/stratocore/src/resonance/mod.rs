//! Resonant-triad calculus: eigenvalue sums, resonance sets, interaction
//! coefficients, the resonance polynomial in `a₃`, and non-resonance
//! certificates for a torus.
//!
//! Triads are `(k, m, n = k + m)` with labels `(a, b, c)` and
//! `ω^{a,b,c}_{k,m,n} = ω^a(k) + ω^b(m) − ω^c(n)`. Frequencies are bounded in
//! the sup norm and the zero frequency never takes part.

mod certify;
mod coeff;
mod exact;
mod poly;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use certify::{certify_nonresonant, CertifyMethod, NonResonanceCertificate};
pub use coeff::{beta_value, coefficient_c, coefficient_c_int, kernel_on_osc_defect, underline_q};
pub use exact::{rational_square, ExactTorus};
pub use poly::{
    a3_resonant_roots, a3_root_scan, leading_terms, poly_coefficients, resonance_polynomial,
    RootOptions, RootReport, RootWarning, ScanRoot,
};

use crate::spectral_torus::{norm2, norm2_h, TorusSpec};
use crate::wave_basis::Label;
use crate::{Error, Result};

/// Default absolute tolerance on `|ω^{a,b,c}|` in floating mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// `ω(n) = |ň_h|/|ň|`, zero when `n_h = 0`.
pub fn omega(t: &TorusSpec, n: [i64; 3]) -> f64 {
    let kc = t.check(n);
    let h = norm2_h(kc);
    if h == 0.0 {
        0.0
    } else {
        crate::math::sqrt(h / norm2(kc))
    }
}

/// `ω^a(n)`.
pub fn omega_label(t: &TorusSpec, n: [i64; 3], a: Label) -> f64 {
    a.sign() * omega(t, n)
}

/// `ω^a(k) + ω^b(m) − ω^c(n)`; requires `k + m = n`.
pub fn omega_sum(
    t: &TorusSpec,
    k: [i64; 3],
    m: [i64; 3],
    n: [i64; 3],
    labels: [Label; 3],
) -> Result<f64> {
    if (0..3).any(|i| k[i] + m[i] != n[i]) {
        return Err(Error::Constraint(format!(
            "k + m = n fails for k = {:?}, m = {:?}, n = {:?}",
            k, m, n
        )));
    }
    Ok(omega_label(t, k, labels[0]) + omega_label(t, m, labels[1]) - omega_label(t, n, labels[2]))
}

/// Resonance set a triad belongs to.
///
/// For an output on the kernel (`c = 0`): `R0` is `(0,0)`, `R1` equal wave
/// labels, `R2` one wave label and `R3` opposite wave labels. For a wave
/// output (`c = ±`) the class counts the wave inputs: `S0`, `S1`, `S2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetClass {
    R0,
    R1,
    R2,
    R3,
    S0,
    S1,
    S2,
}

impl SetClass {
    pub fn of(labels: [Label; 3]) -> SetClass {
        let [a, b, c] = labels;
        let waves = (a != Label::Zero) as u8 + (b != Label::Zero) as u8;
        if c == Label::Zero {
            match waves {
                0 => SetClass::R0,
                1 => SetClass::R2,
                _ if a == b => SetClass::R1,
                _ => SetClass::R3,
            }
        } else {
            match waves {
                0 => SetClass::S0,
                1 => SetClass::S1,
                _ => SetClass::S2,
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetClass::R0 => "R0",
            SetClass::R1 => "R1",
            SetClass::R2 => "R2",
            SetClass::R3 => "R3",
            SetClass::S0 => "S0",
            SetClass::S1 => "S1",
            SetClass::S2 => "S2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriadRecord {
    pub k: [i64; 3],
    pub m: [i64; 3],
    pub n: [i64; 3],
    pub labels: [Label; 3],
    pub omega_sum: f64,
}

impl TriadRecord {
    pub fn new(t: &TorusSpec, k: [i64; 3], m: [i64; 3], labels: [Label; 3]) -> Self {
        let n = [k[0] + m[0], k[1] + m[1], k[2] + m[2]];
        let omega_sum = omega_label(t, k, labels[0]) + omega_label(t, m, labels[1])
            - omega_label(t, n, labels[2]);
        Self {
            k,
            m,
            n,
            labels,
            omega_sum,
        }
    }

    pub fn class(&self) -> SetClass {
        SetClass::of(self.labels)
    }

    pub fn label_string(&self) -> String {
        self.labels.iter().map(|l| l.symbol()).collect()
    }

    pub fn describe(&self) -> String {
        format!(
            "k = ({}, {}, {}), m = ({}, {}, {}), labels ({}), omega_sum = {:e}",
            self.k[0],
            self.k[1],
            self.k[2],
            self.m[0],
            self.m[1],
            self.m[2],
            self.label_string(),
            self.omega_sum
        )
    }
}

/// How to decide `ω^{a,b,c} = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decision {
    /// `|ω^{a,b,c}| < tol`.
    Floating(f64),
    /// Exact arithmetic on rational `aᵢ²`.
    Exact,
}

impl Default for Decision {
    fn default() -> Self {
        Decision::Floating(DEFAULT_TOLERANCE)
    }
}

fn nonzero(k: [i64; 3]) -> bool {
    k != [0, 0, 0]
}

fn horizontal(k: [i64; 3]) -> bool {
    k[0] != 0 || k[1] != 0
}

/// Labels `(a, b, c)` admissible at `(k, m, n)`: wave labels only at
/// frequencies with nonzero horizontal part.
pub fn admissible(k: [i64; 3], m: [i64; 3], n: [i64; 3], labels: [Label; 3]) -> bool {
    [k, m, n]
        .iter()
        .zip(labels.iter())
        .all(|(f, l)| *l == Label::Zero || horizontal(*f))
}

/// Every label triple in `{0, +, −}³`, lexicographic.
pub fn all_labels() -> Vec<[Label; 3]> {
    let mut out = Vec::with_capacity(27);
    for a in Label::ALL {
        for b in Label::ALL {
            for c in Label::ALL {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Visit every `(k, m)` with `1 ≤ |k|∞, |m|∞ ≤ cutoff` and `n = k + m ≠ 0`,
/// in lexicographic order of `(k, m)`.
pub fn for_each_pair<F: FnMut([i64; 3], [i64; 3], [i64; 3])>(cutoff: i64, mut f: F) {
    let r = -cutoff..=cutoff;
    for k1 in r.clone() {
        for k2 in r.clone() {
            for k3 in r.clone() {
                let k = [k1, k2, k3];
                if !nonzero(k) {
                    continue;
                }
                for m1 in r.clone() {
                    for m2 in r.clone() {
                        for m3 in r.clone() {
                            let m = [m1, m2, m3];
                            let n = [k1 + m1, k2 + m2, k3 + m3];
                            if nonzero(m) && nonzero(n) {
                                f(k, m, n);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// All resonant triads with `|k|∞, |m|∞ ≤ cutoff` among `labels`.
///
/// Exact mode needs every `aᵢ²` to be a rational with a small denominator and
/// fails with [`Error::Exactness`] otherwise.
pub fn enumerate_resonant_triads(
    t: &TorusSpec,
    cutoff: i64,
    decision: Decision,
    labels: &[[Label; 3]],
) -> Result<Vec<TriadRecord>> {
    if cutoff < 1 {
        return Err(Error::Constraint(format!(
            "cutoff must be at least 1, got {}",
            cutoff
        )));
    }
    let exact = match decision {
        Decision::Exact => Some(ExactTorus::new(t)?),
        Decision::Floating(_) => None,
    };
    let mut out = Vec::new();
    for_each_pair(cutoff, |k, m, n| {
        for &l in labels {
            if !admissible(k, m, n, l) {
                continue;
            }
            let rec = TriadRecord::new(t, k, m, l);
            let hit = match (&exact, decision) {
                (Some(e), _) => e.is_resonant(k, m, n, l),
                (None, Decision::Floating(tol)) => rec.omega_sum.abs() < tol,
                _ => false,
            };
            if hit {
                out.push(rec);
            }
        }
    });
    Ok(out)
}
