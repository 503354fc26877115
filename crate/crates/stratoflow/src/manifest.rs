//! Experiment manifests: a flat TOML file with one table per concern.
//!
//! Parsing materializes every default, so [`Manifest::echo`] writes a file
//! that reparses to the same manifest.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use stratocore::dynamics::{BoundConstants, RunConfig, Unknown};
use stratocore::init::Recipe;
use stratocore::resonance::{CertifyMethod, DEFAULT_TOLERANCE};
use stratocore::wave_basis::Label;
use stratocore::{TorusSpec, C64};
use toml::{Spanned, Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Simulate,
    Limit,
    Converge,
    ResonanceScan,
    Certify,
    Propcheck,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::Simulate,
        Kind::Limit,
        Kind::Converge,
        Kind::ResonanceScan,
        Kind::Certify,
        Kind::Propcheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Simulate => "simulate",
            Kind::Limit => "limit",
            Kind::Converge => "converge",
            Kind::ResonanceScan => "resonance-scan",
            Kind::Certify => "certify",
            Kind::Propcheck => "propcheck",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialData {
    Recipe(Recipe),
    Snapshot(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Write a snapshot every this many samples; `0` disables snapshots.
    pub snapshot_every: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergeSpec {
    pub epsilons: Vec<f64>,
    pub steps_per_epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelSet {
    All,
    Osc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceSpec {
    pub cutoff: i64,
    pub method: CertifyMethod,
    /// Floating-point resonance threshold of the scan.
    pub tolerance: f64,
    pub labels: LabelSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSpec {
    pub corrector: bool,
    pub corrector_n: i64,
    pub check_identity: bool,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropcheckSpec {
    pub samples: usize,
    pub bernstein_bound: f64,
    pub gn_stability: f64,
    pub commutator: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub kind: Kind,
    pub seed: u64,
    pub torus: TorusSpec,
    /// `run.seed` always equals `seed`.
    pub run: RunConfig,
    pub unknown: Unknown,
    pub initial: InitialData,
    pub output: OutputSpec,
    pub converge: ConvergeSpec,
    pub resonance: ResonanceSpec,
    pub limit: LimitSpec,
    pub bounds: BoundConstants,
    pub propcheck: PropcheckSpec,
}

/// Parse or validation failure, located in the source when possible.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{}", render(*line, field.as_deref(), message))]
pub struct ManifestError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

fn render(line: Option<usize>, field: Option<&str>, message: &str) -> String {
    let mut s = String::from("manifest");
    if let Some(l) = line {
        s += &format!(" line {}", l);
    }
    if let Some(f) = field {
        s += &format!(" field `{}`", f);
    }
    s + ": " + message
}

type S<T> = Option<Spanned<T>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    kind: S<String>,
    seed: S<i64>,
    torus: S<RawTorus>,
    run: S<RawRun>,
    initial: S<RawInitial>,
    output: S<RawOutput>,
    converge: S<RawConverge>,
    resonance: S<RawResonance>,
    limit: S<RawLimit>,
    bounds: S<RawBounds>,
    propcheck: S<RawPropcheck>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTorus {
    a: S<Vec<f64>>,
    n: S<Vec<i64>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRun {
    epsilon: S<f64>,
    nu: S<f64>,
    nu_prime: S<f64>,
    dt: S<f64>,
    t_final: S<f64>,
    dealias: S<bool>,
    s: S<f64>,
    linearized: S<bool>,
    blowup_guard: S<f64>,
    samples: S<i64>,
    stability_constant: S<f64>,
    unknown: S<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    recipe: S<String>,
    s: S<f64>,
    amplitude: S<f64>,
    max_mode: S<i64>,
    layers: S<i64>,
    modes: S<Vec<Spanned<String>>>,
    path: S<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: S<String>,
    snapshot_every: S<i64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConverge {
    epsilons: S<Vec<f64>>,
    steps_per_epsilon: S<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawResonance {
    cutoff: S<i64>,
    method: S<String>,
    tolerance: S<f64>,
    labels: S<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLimit {
    corrector: S<bool>,
    corrector_n: S<i64>,
    check_identity: S<bool>,
    delta: S<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrName {
    Num(f64),
    Name(String),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    big_c: S<f64>,
    big_k: S<f64>,
    small_c: S<NumOrName>,
    p: S<f64>,
    sigma: S<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPropcheck {
    samples: S<i64>,
    bernstein_bound: S<f64>,
    gn_stability: S<f64>,
    commutator: S<bool>,
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: &Range<usize>) -> usize {
        let end = span.start.min(self.src.len());
        self.src[..end].matches('\n').count() + 1
    }

    fn err(
        &self,
        span: Option<Range<usize>>,
        field: &str,
        message: impl Into<String>,
    ) -> ManifestError {
        ManifestError {
            line: span.map(|s| self.line(&s)),
            field: Some(field.into()),
            message: message.into(),
        }
    }

    fn value<T: Clone>(&self, v: &S<T>, default: T) -> (T, Option<Range<usize>>) {
        match v {
            Some(s) => (s.get_ref().clone(), Some(s.span())),
            None => (default, None),
        }
    }

    fn positive(&self, v: &S<f64>, default: f64, field: &str) -> Result<f64, ManifestError> {
        let (x, span) = self.value(v, default);
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.err(span, field, format!("must be positive, got {}", x)))
        }
    }

    fn count(
        &self,
        v: &S<i64>,
        default: usize,
        min: i64,
        field: &str,
    ) -> Result<usize, ManifestError> {
        let (x, span) = self.value(v, default as i64);
        if x >= min {
            Ok(x as usize)
        } else {
            Err(self.err(span, field, format!("must be at least {}, got {}", min, x)))
        }
    }
}

fn span_of<T>(v: &S<T>) -> Option<Range<usize>> {
    v.as_ref().map(|s| s.span())
}

/// Read and validate the manifest at `path`.
///
/// A relative snapshot path is resolved against the manifest's directory.
pub fn parse_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let src = std::fs::read_to_string(path).map_err(|e| ManifestError {
        line: None,
        field: None,
        message: format!("cannot read {}: {}", path.display(), e),
    })?;
    let mut m = parse_manifest_str(&src)?;
    if let InitialData::Snapshot(p) = &mut m.initial {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(m)
}

pub fn parse_manifest_str(src: &str) -> Result<Manifest, ManifestError> {
    let cx = Ctx { src };
    let raw: RawManifest = toml::from_str(src).map_err(|e| ManifestError {
        line: e.span().map(|s| cx.line(&s)),
        field: None,
        message: e.message().trim().to_string(),
    })?;

    let (kind_s, kind_span) = match &raw.kind {
        Some(k) => (k.get_ref().clone(), Some(k.span())),
        None => return Err(cx.err(None, "kind", "missing")),
    };
    let kind = Kind::parse(&kind_s).ok_or_else(|| {
        let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
        cx.err(
            kind_span,
            "kind",
            format!(
                "unknown kind `{}`; expected one of {}",
                kind_s,
                names.join(", ")
            ),
        )
    })?;
    let (seed, seed_span) = cx.value(&raw.seed, 0);
    if seed < 0 {
        return Err(cx.err(
            seed_span,
            "seed",
            format!("must be non-negative, got {}", seed),
        ));
    }
    let seed = seed as u64;

    let torus = parse_torus(&cx, &raw.torus)?;
    let (run, unknown) = parse_run(&cx, &raw.run, seed, &torus)?;
    let initial = parse_initial(&cx, &raw.initial)?;

    let o = raw.output.as_ref().map(|s| s.get_ref());
    let def = RawOutput::default();
    let o = o.unwrap_or(&def);
    let output = OutputSpec {
        dir: PathBuf::from(cx.value(&o.dir, "out".to_string()).0),
        snapshot_every: cx.count(&o.snapshot_every, 0, 0, "output.snapshot_every")?,
    };

    let def = RawConverge::default();
    let c = raw.converge.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let (epsilons, eps_span) = cx.value(&c.epsilons, vec![1e-1, 3e-2, 1e-2, 3e-3]);
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(cx.err(
            eps_span,
            "converge.epsilons",
            "must be a non-empty list of positive values",
        ));
    }
    let converge = ConvergeSpec {
        epsilons,
        steps_per_epsilon: cx.positive(&c.steps_per_epsilon, 40.0, "converge.steps_per_epsilon")?,
    };

    let def = RawResonance::default();
    let r = raw.resonance.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let (cutoff, cut_span) = cx.value(&r.cutoff, 4);
    if cutoff < 1 {
        return Err(cx.err(
            cut_span,
            "resonance.cutoff",
            format!("must be at least 1, got {}", cutoff),
        ));
    }
    let (method_s, method_span) = cx.value(&r.method, "floating".to_string());
    let method = CertifyMethod::parse(&method_s).ok_or_else(|| {
        cx.err(
            method_span,
            "resonance.method",
            format!("expected `floating` or `exact`, got `{}`", method_s),
        )
    })?;
    let (labels_s, labels_span) = cx.value(&r.labels, "all".to_string());
    let labels = match labels_s.as_str() {
        "all" => LabelSet::All,
        "osc" => LabelSet::Osc,
        _ => {
            return Err(cx.err(
                labels_span,
                "resonance.labels",
                format!("expected `all` or `osc`, got `{}`", labels_s),
            ))
        }
    };
    let resonance = ResonanceSpec {
        cutoff,
        method,
        tolerance: cx.positive(&r.tolerance, DEFAULT_TOLERANCE, "resonance.tolerance")?,
        labels,
    };

    let def = RawLimit::default();
    let l = raw.limit.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let (corrector_n, n_span) = cx.value(&l.corrector_n, 4);
    if corrector_n < 1 {
        return Err(cx.err(
            n_span,
            "limit.corrector_n",
            format!("must be at least 1, got {}", corrector_n),
        ));
    }
    let limit = LimitSpec {
        corrector: cx.value(&l.corrector, false).0,
        corrector_n,
        check_identity: cx.value(&l.check_identity, true).0,
        delta: cx.positive(&l.delta, 1e-5, "limit.delta")?,
    };

    let def = RawBounds::default();
    let b = raw.bounds.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let d = BoundConstants::default();
    let small_c = match &b.small_c {
        None => None,
        Some(s) => match s.get_ref() {
            NumOrName::Num(x) if *x > 0.0 => Some(*x),
            NumOrName::Name(n) if n == "poincare" => None,
            _ => {
                return Err(cx.err(
                    Some(s.span()),
                    "bounds.small_c",
                    "expected a positive number or `poincare`",
                ))
            }
        },
    };
    let bounds = BoundConstants {
        big_c: cx.positive(&b.big_c, d.big_c, "bounds.big_c")?,
        big_k: cx.positive(&b.big_k, d.big_k, "bounds.big_k")?,
        small_c,
        p: {
            let (p, span) = cx.value(&b.p, d.p);
            if !(p >= 1.0) {
                return Err(cx.err(span, "bounds.p", format!("must be at least 1, got {}", p)));
            }
            p
        },
        sigma: {
            let (s, span) = cx.value(&b.sigma, d.sigma);
            if !(s >= 0.0) || !s.is_finite() {
                return Err(cx.err(
                    span,
                    "bounds.sigma",
                    format!("must be finite and non-negative, got {}", s),
                ));
            }
            s
        },
    };

    let def = RawPropcheck::default();
    let p = raw.propcheck.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let propcheck = PropcheckSpec {
        samples: cx.count(&p.samples, 100, 1, "propcheck.samples")?,
        bernstein_bound: cx.positive(&p.bernstein_bound, 4.0, "propcheck.bernstein_bound")?,
        gn_stability: cx.positive(&p.gn_stability, 0.25, "propcheck.gn_stability")?,
        commutator: cx.value(&p.commutator, true).0,
    };

    Ok(Manifest {
        kind,
        seed,
        torus,
        run,
        unknown,
        initial,
        output,
        converge,
        resonance,
        limit,
        bounds,
        propcheck,
    })
}

fn parse_torus(cx: &Ctx, raw: &S<RawTorus>) -> Result<TorusSpec, ManifestError> {
    let t = raw
        .as_ref()
        .ok_or_else(|| cx.err(None, "torus", "missing [torus] section"))?;
    let span = Some(t.span());
    let t = t.get_ref();
    let a =
        t.a.as_ref()
            .ok_or_else(|| cx.err(span.clone(), "torus.a", "missing"))?;
    let n =
        t.n.as_ref()
            .ok_or_else(|| cx.err(span.clone(), "torus.n", "missing"))?;
    let a3: [f64; 3] = a
        .get_ref()
        .as_slice()
        .try_into()
        .map_err(|_| cx.err(Some(a.span()), "torus.a", "expected three periods"))?;
    let n3: [i64; 3] = n
        .get_ref()
        .as_slice()
        .try_into()
        .map_err(|_| cx.err(Some(n.span()), "torus.n", "expected three grid sizes"))?;
    if n3.iter().any(|&x| x < 1) {
        return Err(cx.err(
            Some(n.span()),
            "torus.n",
            format!("grid sizes must be positive, got {:?}", n3),
        ));
    }
    TorusSpec::new(a3, n3.map(|x| x as usize)).map_err(|e| cx.err(span, "torus", e.to_string()))
}

fn parse_run(
    cx: &Ctx,
    raw: &S<RawRun>,
    seed: u64,
    t: &TorusSpec,
) -> Result<(RunConfig, Unknown), ManifestError> {
    let def = RawRun::default();
    let span = raw.as_ref().map(|s| s.span());
    let r = raw.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let d = RunConfig::default();
    let (s, s_span) = cx.value(&r.s, d.s);
    if !(s > 0.5) {
        return Err(cx.err(s_span, "run.s", format!("must exceed 1/2, got {}", s)));
    }
    let cfg = RunConfig {
        epsilon: cx.positive(&r.epsilon, d.epsilon, "run.epsilon")?,
        nu: cx.positive(&r.nu, d.nu, "run.nu")?,
        nu_prime: cx.positive(&r.nu_prime, d.nu_prime, "run.nu_prime")?,
        dt: cx.positive(&r.dt, d.dt, "run.dt")?,
        t_final: cx.positive(&r.t_final, d.t_final, "run.t_final")?,
        dealias: cx.value(&r.dealias, d.dealias).0,
        s,
        seed,
        linearized: cx.value(&r.linearized, d.linearized).0,
        blowup_guard: cx.positive(&r.blowup_guard, d.blowup_guard, "run.blowup_guard")?,
        samples: cx.count(&r.samples, d.samples, 1, "run.samples")?,
        stability_constant: cx.positive(
            &r.stability_constant,
            d.stability_constant,
            "run.stability_constant",
        )?,
    };
    if cfg.dt >= cfg.t_final {
        return Err(cx.err(
            span_of(&r.dt),
            "run.dt",
            format!("must be below t_final = {}", cfg.t_final),
        ));
    }
    cfg.validate(t)
        .map_err(|e| cx.err(span_of(&r.dt).or(span), "run", e.to_string()))?;
    let (u, u_span) = cx.value(&r.unknown, "full".to_string());
    let unknown = match u.as_str() {
        "full" => Unknown::Full,
        "filtered" => Unknown::Filtered,
        _ => {
            return Err(cx.err(
                u_span,
                "run.unknown",
                format!("expected `full` or `filtered`, got `{}`", u),
            ))
        }
    };
    Ok((cfg, unknown))
}

fn parse_mode(cx: &Ctx, s: &Spanned<String>) -> Result<([i64; 3], Label, C64), ManifestError> {
    let bad = || {
        cx.err(
            Some(s.span()),
            "initial.modes",
            format!("expected `k1 k2 k3 +|- re im`, got `{}`", s.get_ref()),
        )
    };
    let parts: Vec<&str> = s.get_ref().split_whitespace().collect();
    if parts.len() != 6 {
        return Err(bad());
    }
    let mut k = [0i64; 3];
    for (d, p) in parts[..3].iter().enumerate() {
        k[d] = p.parse().map_err(|_| bad())?;
    }
    let label = match parts[3] {
        "+" => Label::Plus,
        "-" => Label::Minus,
        _ => return Err(bad()),
    };
    let re: f64 = parts[4].parse().map_err(|_| bad())?;
    let im: f64 = parts[5].parse().map_err(|_| bad())?;
    Ok((k, label, C64::new(re, im)))
}

fn parse_initial(cx: &Ctx, raw: &S<RawInitial>) -> Result<InitialData, ManifestError> {
    let def = RawInitial::default();
    let r = raw.as_ref().map(|s| s.get_ref()).unwrap_or(&def);
    let (name, name_span) = cx.value(&r.recipe, "random_solenoidal".to_string());
    let allowed: &[&str] = match name.as_str() {
        "random_solenoidal" => &["s", "amplitude", "max_mode"],
        "kernel_vortex" => &["amplitude", "layers"],
        "taylor_green" => &["amplitude"],
        "osc_pack" => &["modes"],
        "snapshot" => &["path"],
        _ => {
            return Err(cx.err(
                name_span,
                "initial.recipe",
                format!(
                    "unknown recipe `{}`; expected random_solenoidal, kernel_vortex, taylor_green, osc_pack or snapshot",
                    name
                ),
            ))
        }
    };
    let present = [
        ("s", span_of(&r.s)),
        ("amplitude", span_of(&r.amplitude)),
        ("max_mode", span_of(&r.max_mode)),
        ("layers", span_of(&r.layers)),
        ("modes", span_of(&r.modes)),
        ("path", span_of(&r.path)),
    ];
    for (key, span) in present {
        if span.is_some() && !allowed.contains(&key) {
            return Err(cx.err(
                span,
                &format!("initial.{}", key),
                format!("does not apply to recipe {}", name),
            ));
        }
    }
    let amplitude = |default| cx.positive(&r.amplitude, default, "initial.amplitude");
    let data = match name.as_str() {
        "random_solenoidal" => {
            let (max_mode, span) = cx.value(&r.max_mode, 4);
            if max_mode < 1 {
                return Err(cx.err(
                    span,
                    "initial.max_mode",
                    format!("must be at least 1, got {}", max_mode),
                ));
            }
            let (s, s_span) = cx.value(&r.s, 1.0);
            if !s.is_finite() {
                return Err(cx.err(s_span, "initial.s", "must be finite"));
            }
            InitialData::Recipe(Recipe::RandomSolenoidal {
                s,
                amplitude: amplitude(0.1)?,
                max_mode,
            })
        }
        "kernel_vortex" => {
            let (layers, span) = cx.value(&r.layers, 1);
            if layers < 0 {
                return Err(cx.err(
                    span,
                    "initial.layers",
                    format!("must be non-negative, got {}", layers),
                ));
            }
            InitialData::Recipe(Recipe::KernelVortex {
                amplitude: amplitude(0.1)?,
                layers,
            })
        }
        "taylor_green" => InitialData::Recipe(Recipe::TaylorGreen {
            amplitude: amplitude(0.1)?,
        }),
        "osc_pack" => {
            let modes = r
                .modes
                .as_ref()
                .ok_or_else(|| cx.err(name_span.clone(), "initial.modes", "missing"))?;
            let parsed = modes
                .get_ref()
                .iter()
                .map(|m| parse_mode(cx, m))
                .collect::<Result<Vec<_>, _>>()?;
            if parsed.is_empty() {
                return Err(cx.err(
                    Some(modes.span()),
                    "initial.modes",
                    "must list at least one mode",
                ));
            }
            InitialData::Recipe(Recipe::OscPack { modes: parsed })
        }
        _ => {
            let path = r
                .path
                .as_ref()
                .ok_or_else(|| cx.err(name_span.clone(), "initial.path", "missing"))?;
            InitialData::Snapshot(PathBuf::from(path.get_ref()))
        }
    };
    Ok(data)
}

fn table(entries: Vec<(&str, Value)>) -> Value {
    Value::Table(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    )
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Float(x)).collect())
}

fn int(x: impl TryInto<i64>) -> Value {
    Value::Integer(x.try_into().unwrap_or(i64::MAX))
}

impl Manifest {
    /// TOML text with every field spelled out.
    pub fn echo(&self) -> String {
        let r = &self.run;
        let initial = match &self.initial {
            InitialData::Recipe(Recipe::RandomSolenoidal {
                s,
                amplitude,
                max_mode,
            }) => table(vec![
                ("recipe", Value::String("random_solenoidal".into())),
                ("s", Value::Float(*s)),
                ("amplitude", Value::Float(*amplitude)),
                ("max_mode", int(*max_mode)),
            ]),
            InitialData::Recipe(Recipe::KernelVortex { amplitude, layers }) => table(vec![
                ("recipe", Value::String("kernel_vortex".into())),
                ("amplitude", Value::Float(*amplitude)),
                ("layers", int(*layers)),
            ]),
            InitialData::Recipe(Recipe::TaylorGreen { amplitude }) => table(vec![
                ("recipe", Value::String("taylor_green".into())),
                ("amplitude", Value::Float(*amplitude)),
            ]),
            InitialData::Recipe(Recipe::OscPack { modes }) => table(vec![
                ("recipe", Value::String("osc_pack".into())),
                (
                    "modes",
                    Value::Array(
                        modes
                            .iter()
                            .map(|(k, l, c)| {
                                Value::String(format!(
                                    "{} {} {} {} {} {}",
                                    k[0],
                                    k[1],
                                    k[2],
                                    l.symbol(),
                                    c.re,
                                    c.im
                                ))
                            })
                            .collect(),
                    ),
                ),
            ]),
            InitialData::Snapshot(p) => table(vec![
                ("recipe", Value::String("snapshot".into())),
                ("path", Value::String(p.to_string_lossy().into_owned())),
            ]),
        };
        let b = &self.bounds;
        let doc = table(vec![
            ("kind", Value::String(self.kind.name().into())),
            ("seed", int(self.seed)),
            (
                "torus",
                table(vec![
                    ("a", floats(&self.torus.a)),
                    (
                        "n",
                        Value::Array(self.torus.n.iter().map(|&n| int(n)).collect()),
                    ),
                ]),
            ),
            (
                "run",
                table(vec![
                    ("epsilon", Value::Float(r.epsilon)),
                    ("nu", Value::Float(r.nu)),
                    ("nu_prime", Value::Float(r.nu_prime)),
                    ("dt", Value::Float(r.dt)),
                    ("t_final", Value::Float(r.t_final)),
                    ("dealias", Value::Boolean(r.dealias)),
                    ("s", Value::Float(r.s)),
                    ("linearized", Value::Boolean(r.linearized)),
                    ("blowup_guard", Value::Float(r.blowup_guard)),
                    ("samples", int(r.samples)),
                    ("stability_constant", Value::Float(r.stability_constant)),
                    (
                        "unknown",
                        Value::String(
                            match self.unknown {
                                Unknown::Full => "full",
                                Unknown::Filtered => "filtered",
                            }
                            .into(),
                        ),
                    ),
                ]),
            ),
            ("initial", initial),
            (
                "output",
                table(vec![
                    (
                        "dir",
                        Value::String(self.output.dir.to_string_lossy().into_owned()),
                    ),
                    ("snapshot_every", int(self.output.snapshot_every)),
                ]),
            ),
            (
                "converge",
                table(vec![
                    ("epsilons", floats(&self.converge.epsilons)),
                    (
                        "steps_per_epsilon",
                        Value::Float(self.converge.steps_per_epsilon),
                    ),
                ]),
            ),
            (
                "resonance",
                table(vec![
                    ("cutoff", int(self.resonance.cutoff)),
                    ("method", Value::String(self.resonance.method.name().into())),
                    ("tolerance", Value::Float(self.resonance.tolerance)),
                    (
                        "labels",
                        Value::String(
                            match self.resonance.labels {
                                LabelSet::All => "all",
                                LabelSet::Osc => "osc",
                            }
                            .into(),
                        ),
                    ),
                ]),
            ),
            (
                "limit",
                table(vec![
                    ("corrector", Value::Boolean(self.limit.corrector)),
                    ("corrector_n", int(self.limit.corrector_n)),
                    ("check_identity", Value::Boolean(self.limit.check_identity)),
                    ("delta", Value::Float(self.limit.delta)),
                ]),
            ),
            (
                "bounds",
                table(vec![
                    ("big_c", Value::Float(b.big_c)),
                    ("big_k", Value::Float(b.big_k)),
                    (
                        "small_c",
                        b.small_c
                            .map(Value::Float)
                            .unwrap_or_else(|| Value::String("poincare".into())),
                    ),
                    ("p", Value::Float(b.p)),
                    ("sigma", Value::Float(b.sigma)),
                ]),
            ),
            (
                "propcheck",
                table(vec![
                    ("samples", int(self.propcheck.samples)),
                    (
                        "bernstein_bound",
                        Value::Float(self.propcheck.bernstein_bound),
                    ),
                    ("gn_stability", Value::Float(self.propcheck.gn_stability)),
                    ("commutator", Value::Boolean(self.propcheck.commutator)),
                ]),
            ),
        ]);
        let Value::Table(t) = doc else { unreachable!() };
        toml::to_string(&Table::from(t)).expect("manifest tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "kind = \"certify\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n";

    #[test]
    fn minimal_manifest_fills_defaults() {
        let m = parse_manifest_str(MINIMAL).unwrap();
        assert_eq!(m.kind, Kind::Certify);
        assert_eq!(m.run, RunConfig::default());
        assert_eq!(m.resonance.cutoff, 4);
        let echo = m.echo();
        for key in [
            "nu_prime",
            "stability_constant",
            "steps_per_epsilon",
            "small_c = \"poincare\"",
            "max_mode",
        ] {
            assert!(echo.contains(key), "{} missing from\n{}", key, echo);
        }
        assert_eq!(parse_manifest_str(&echo).unwrap(), m);
    }

    #[test]
    fn negative_viscosity_names_the_field_and_line() {
        let src = format!("{}[run]\nnu = -0.1\n", MINIMAL);
        let e = parse_manifest_str(&src).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("run.nu"));
        assert_eq!(e.line, Some(6));
        assert!(e.to_string().contains("run.nu"));
    }

    #[test]
    fn syntax_and_type_errors_carry_lines() {
        let e = parse_manifest_str("kind = \"limit\"\n[torus]\na = [1.0, 1.0]\nn = [8, 8, 8]\n")
            .unwrap_err();
        assert_eq!((e.line, e.field.as_deref()), (Some(3), Some("torus.a")));
        let e = parse_manifest_str(&format!("{}[run]\nnu = \"slow\"\n", MINIMAL)).unwrap_err();
        assert_eq!(e.line, Some(6));
        let e = parse_manifest_str(&format!("{}[run]\nviscosity = 1.0\n", MINIMAL)).unwrap_err();
        assert_eq!(e.line, Some(6));
        assert!(e.message.contains("viscosity"));
        let e = parse_manifest_str("[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("kind"));
    }

    #[test]
    fn recipe_fields_are_checked() {
        let src = format!(
            "{}[initial]\nrecipe = \"kernel_vortex\"\nmax_mode = 3\n",
            MINIMAL
        );
        let e = parse_manifest_str(&src).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("initial.max_mode"));
        let src = format!("{}[initial]\nrecipe = \"osc_pack\"\nmodes = [\"1 0 1 + 0.5 -0.25\", \"0 1 1 - 1e-3 0\"]\n", MINIMAL);
        let m = parse_manifest_str(&src).unwrap();
        assert_eq!(parse_manifest_str(&m.echo()).unwrap(), m);
        let src = format!(
            "{}[initial]\nrecipe = \"osc_pack\"\nmodes = [\"1 0 1 x 0.5 0\"]\n",
            MINIMAL
        );
        assert_eq!(parse_manifest_str(&src).unwrap_err().line, Some(7));
    }

    #[test]
    fn unstable_step_is_a_validation_error() {
        let src = format!("{}[run]\ndt = 0.5\nt_final = 2.0\nnu = 10.0\n", MINIMAL);
        let e = parse_manifest_str(&src).unwrap_err();
        assert_eq!(e.line, Some(6));
        assert!(e.message.contains("stability"), "{}", e);
    }
}
