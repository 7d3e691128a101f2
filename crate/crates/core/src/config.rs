//! Run configuration: a flat `key = value` document with `[section]` headers
//! and `#` comments.
//!
//! ```text
//! model = gcz1d
//! output_dir = runs/reference
//! seed = 7
//!
//! [material]
//! lambda = 1
//! mu = 1
//!
//! [time]
//! t_max = 50
//!
//! [gcz1d]
//! n = 200
//! tau = 0.5
//! ```
//!
//! Top-level keys, `[material]`, `[time]` and the section named after the
//! selected model are accepted; anything else is an unknown key. Every
//! problem found is reported, not only the first.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::curves::VelocityField;
use crate::elasticity::ElasticConstants;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigErrorKind {
    Syntax(String),
    UnknownKey,
    MissingKey,
    TypeMismatch { expected: String, found: String },
    Precondition(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    /// `section.key`, a bare key at top level, or `line N` for syntax errors.
    pub key: String,
    pub kind: ConfigErrorKind,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConfigErrorKind::Syntax(m) => write!(f, "{}: syntax error: {m}", self.key),
            ConfigErrorKind::UnknownKey => write!(f, "{}: unknown key", self.key),
            ConfigErrorKind::MissingKey => write!(f, "{}: missing required key", self.key),
            ConfigErrorKind::TypeMismatch { expected, found } => {
                write!(f, "{}: expected {expected}, found '{found}'", self.key)
            }
            ConfigErrorKind::Precondition(m) => write!(f, "{}: precondition violated: {m}", self.key),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Micro2d,
    Gb2d,
    Sub1d,
    Gcz1d,
    Curves,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Micro2d,
        ModelKind::Gb2d,
        ModelKind::Sub1d,
        ModelKind::Gcz1d,
        ModelKind::Curves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Micro2d => "micro2d",
            ModelKind::Gb2d => "gb2d",
            ModelKind::Sub1d => "sub1d",
            ModelKind::Gcz1d => "gcz1d",
            ModelKind::Curves => "curves",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Ty {
    Float,
    Int,
    Bool,
    Text,
    Choice(&'static [&'static str]),
}

impl Ty {
    fn describe(self) -> String {
        match self {
            Ty::Float => "a number".into(),
            Ty::Int => "a nonnegative integer".into(),
            Ty::Bool => "true or false".into(),
            Ty::Text => "text".into(),
            Ty::Choice(c) => format!("one of {}", c.join(", ")),
        }
    }

    fn accepts(self, v: &str) -> bool {
        match self {
            Ty::Float => v.parse::<f64>().map(|x| x.is_finite()).unwrap_or(false),
            Ty::Int => v.parse::<u64>().is_ok(),
            Ty::Bool => v == "true" || v == "false",
            Ty::Text => !v.is_empty(),
            Ty::Choice(c) => c.contains(&v),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Default_ {
    Required,
    Optional,
    Value(&'static str),
}

struct KeySpec {
    name: &'static str,
    ty: Ty,
    default: Default_,
}

const fn key(name: &'static str, ty: Ty, default: Default_) -> KeySpec {
    KeySpec { name, ty, default }
}

use Default_::{Optional, Required, Value};

const TOP: &[KeySpec] = &[
    key("model", Ty::Choice(&["micro2d", "gb2d", "sub1d", "gcz1d", "curves"]), Required),
    key("output_dir", Ty::Text, Value("dislodyn-out")),
    key("seed", Ty::Int, Value("0")),
];

const MATERIAL: &[KeySpec] = &[
    key("lambda", Ty::Float, Value("1")),
    key("mu", Ty::Float, Value("1")),
];

fn time_schema(model: ModelKind) -> &'static [KeySpec] {
    match model {
        ModelKind::Micro2d => {
            const S: &[KeySpec] = &[
                key("dt", Ty::Float, Required),
                key("t_max", Ty::Float, Required),
                key("snapshot_every", Ty::Int, Value("1")),
            ];
            S
        }
        ModelKind::Gb2d => {
            const S: &[KeySpec] = &[
                key("cfl", Ty::Float, Value("0.1")),
                key("t_max", Ty::Float, Required),
                key("snapshot_every", Ty::Int, Value("100")),
            ];
            S
        }
        ModelKind::Sub1d => {
            const S: &[KeySpec] = &[
                key("cfl", Ty::Float, Value("0.4")),
                key("t_max", Ty::Float, Required),
                key("snapshot_every", Ty::Int, Value("100")),
            ];
            S
        }
        ModelKind::Gcz1d => {
            const S: &[KeySpec] = &[
                key("dt", Ty::Float, Optional),
                key("t_max", Ty::Float, Value("50")),
                key("snapshot_every", Ty::Int, Value("10000")),
            ];
            S
        }
        ModelKind::Curves => {
            const S: &[KeySpec] = &[
                key("dt", Ty::Float, Required),
                key("t_max", Ty::Float, Required),
                key("snapshot_every", Ty::Int, Value("1")),
            ];
            S
        }
    }
}

fn model_schema(model: ModelKind) -> &'static [KeySpec] {
    match model {
        ModelKind::Micro2d => {
            const S: &[KeySpec] = &[
                key("particles", Ty::Int, Required),
                key("min_separation", Ty::Float, Value("1e-6")),
            ];
            S
        }
        ModelKind::Gb2d => {
            const S: &[KeySpec] = &[
                key("n1", Ty::Int, Value("64")),
                key("n2", Ty::Int, Value("64")),
                key("L", Ty::Float, Value("1")),
                key("amplitude", Ty::Float, Value("0.5")),
                key("modes", Ty::Int, Value("3")),
            ];
            S
        }
        ModelKind::Sub1d => {
            const S: &[KeySpec] = &[
                key("n", Ty::Int, Value("128")),
                key("L", Ty::Float, Value("1")),
                key("c2_override", Ty::Float, Optional),
                key("forcing_amplitude", Ty::Float, Value("0")),
                key("forcing_period", Ty::Float, Value("1")),
            ];
            S
        }
        ModelKind::Gcz1d => {
            const S: &[KeySpec] = &[
                key("n", Ty::Int, Value("200")),
                key("epsilon", Ty::Float, Value("0.1")),
                key("tau", Ty::Float, Value("0")),
                key("c0", Ty::Float, Value("1")),
                key("D0", Ty::Float, Value("1")),
                key("initial", Ty::Choice(&["gaussian", "linear", "sine"]), Value("gaussian")),
                key("sine_amplitude", Ty::Float, Value("0.5")),
                key("residual_tol", Ty::Float, Value("1e-6")),
                key("monitor_gamma", Ty::Float, Value("0")),
                key("gamma_floor", Ty::Float, Optional),
            ];
            S
        }
        ModelKind::Curves => {
            const S: &[KeySpec] = &[
                key("shape", Ty::Choice(&["circle", "ellipse"]), Value("circle")),
                key("radius", Ty::Float, Value("1")),
                key("semi_axis_a", Ty::Float, Value("1.5")),
                key("semi_axis_b", Ty::Float, Value("1")),
                key("center_x", Ty::Float, Value("0")),
                key("center_y", Ty::Float, Value("0")),
                key("vertices", Ty::Int, Value("256")),
                key("velocity", Ty::Choice(&["constant", "linear", "radial"]), Value("constant")),
                key("speed", Ty::Float, Value("1")),
                key("gradient_x", Ty::Float, Value("0")),
                key("gradient_y", Ty::Float, Value("0")),
                key("curvature", Ty::Float, Value("0")),
                key("redistribute", Ty::Bool, Value("false")),
                key("test_functions", Ty::Int, Value("12")),
            ];
            S
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Micro2dConfig {
    pub particles: usize,
    pub min_separation: f64,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gb2dConfig {
    pub n1: usize,
    pub n2: usize,
    pub line_density: f64,
    pub amplitude: f64,
    pub modes: usize,
    pub cfl: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sub1dConfig {
    pub n: usize,
    pub line_density: f64,
    pub c2_override: Option<f64>,
    pub forcing_amplitude: f64,
    pub forcing_period: f64,
    pub cfl: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GczInitial {
    Gaussian,
    Linear,
    Sine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gcz1dConfig {
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub c0: f64,
    pub d0: f64,
    pub initial: GczInitial,
    pub sine_amplitude: f64,
    pub residual_tol: f64,
    pub monitor_gamma: f64,
    pub gamma_floor: f64,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveShape {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvesConfig {
    pub shape: CurveShape,
    pub center: [f64; 2],
    pub vertices: usize,
    pub velocity: VelocityField,
    pub redistribute: bool,
    pub test_functions: usize,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelConfig {
    Micro2d(Micro2dConfig),
    Gb2d(Gb2dConfig),
    Sub1d(Sub1dConfig),
    Gcz1d(Gcz1dConfig),
    Curves(CurvesConfig),
}

impl ModelConfig {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelConfig::Micro2d(_) => ModelKind::Micro2d,
            ModelConfig::Gb2d(_) => ModelKind::Gb2d,
            ModelConfig::Sub1d(_) => ModelKind::Sub1d,
            ModelConfig::Gcz1d(_) => ModelKind::Gcz1d,
            ModelConfig::Curves(_) => ModelKind::Curves,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub model: ModelConfig,
    pub constants: ElasticConstants,
    pub t_max: f64,
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Effective configuration with defaults expanded, in schema order.
    pub effective: Vec<(String, String, String)>,
}

impl SimConfig {
    /// The effective configuration rendered as a configuration document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut section = "";
        for (s, k, v) in &self.effective {
            if s != section {
                out.push_str(&format!("\n[{s}]\n"));
                section = s;
            }
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// Raw entries: `(section, key) -> (value, line)`.
type Document = BTreeMap<(String, String), (String, usize)>;

fn parse_document(text: &str, errors: &mut Vec<ConfigError>) -> (Document, Vec<(String, String)>) {
    let mut doc = Document::new();
    let mut order = Vec::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |m: &str| ConfigError {
            key: format!("line {line_no}"),
            kind: ConfigErrorKind::Syntax(m.into()),
        };
        if let Some(rest) = line.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => section = name.trim().to_string(),
                _ => errors.push(syntax("malformed section header")),
            }
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            errors.push(syntax("expected 'key = value'"));
            continue;
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if k.is_empty() || k.contains(char::is_whitespace) {
            errors.push(syntax("invalid key"));
            continue;
        }
        let id = (section.clone(), k);
        if doc.contains_key(&id) {
            errors.push(ConfigError {
                key: path(&id.0, &id.1),
                kind: ConfigErrorKind::Syntax(format!("duplicate key on line {line_no}")),
            });
            continue;
        }
        order.push(id.clone());
        doc.insert(id, (v, line_no));
    }
    (doc, order)
}

fn path(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

/// Typed view over the validated entries, collecting errors as it goes.
struct Reader<'a> {
    values: BTreeMap<(String, String), String>,
    errors: &'a mut Vec<ConfigError>,
}

impl Reader<'_> {
    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(String::as_str)
    }

    fn f64(&self, section: &str, key: &str) -> Option<f64> {
        self.raw(section, key).and_then(|v| v.parse().ok())
    }

    fn usize(&self, section: &str, key: &str) -> Option<usize> {
        self.raw(section, key).and_then(|v| v.parse().ok())
    }

    fn require(&mut self, ok: bool, section: &str, key: &str, message: &str) {
        if !ok {
            self.errors.push(ConfigError {
                key: path(section, key),
                kind: ConfigErrorKind::Precondition(message.into()),
            });
        }
    }

    fn set(&mut self, section: &str, key: &str, value: String) {
        self.values.insert((section.to_string(), key.to_string()), value);
    }
}

/// Overrides applied on top of the document before validation, as
/// `(section, key, value)`.
pub type Overrides = [(String, String, String)];

pub fn parse_config(text: &str) -> Result<SimConfig> {
    parse_config_with(text, &[])
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<SimConfig> {
    let mut errors = Vec::new();
    let (mut doc, mut order) = parse_document(text, &mut errors);
    for (s, k, v) in overrides {
        let id = (s.clone(), k.clone());
        if !doc.contains_key(&id) {
            order.push(id.clone());
        }
        doc.insert(id, (v.clone(), 0));
    }

    let model_raw = doc.get(&(String::new(), "model".into())).map(|v| v.0.clone());
    let model = model_raw.as_deref().and_then(ModelKind::from_name);

    let mut sections: Vec<(&str, &[KeySpec])> = vec![("", TOP), ("material", MATERIAL)];
    if let Some(m) = model {
        sections.push(("time", time_schema(m)));
        sections.push((m.name(), model_schema(m)));
    }

    for id in &order {
        let known_section = sections.iter().find(|(s, _)| *s == id.0);
        let known = match known_section {
            Some((_, specs)) => specs.iter().any(|k| k.name == id.1),
            // Without a valid model the time and model sections cannot be checked.
            None => model.is_none() && (id.0 == "time" || ModelKind::from_name(&id.0).is_some()),
        };
        if !known {
            errors.push(ConfigError {
                key: path(&id.0, &id.1),
                kind: ConfigErrorKind::UnknownKey,
            });
        }
    }

    let mut values = BTreeMap::new();
    for (section, specs) in &sections {
        for spec in specs.iter() {
            let id = (section.to_string(), spec.name.to_string());
            let value = match (doc.get(&id), spec.default) {
                (Some((v, _)), _) => Some(v.clone()),
                (None, Value(d)) => Some(d.to_string()),
                (None, Optional) => None,
                (None, Required) => {
                    errors.push(ConfigError {
                        key: path(section, spec.name),
                        kind: ConfigErrorKind::MissingKey,
                    });
                    None
                }
            };
            if let Some(v) = value {
                if spec.ty.accepts(&v) {
                    values.insert(id, v);
                } else {
                    errors.push(ConfigError {
                        key: path(section, spec.name),
                        kind: ConfigErrorKind::TypeMismatch {
                            expected: spec.ty.describe(),
                            found: v,
                        },
                    });
                }
            }
        }
    }

    let mut r = Reader {
        values,
        errors: &mut errors,
    };
    let built = build(&mut r, model);
    let values = r.values;
    if !errors.is_empty() {
        return Err(Error::Config(errors));
    }
    let (model_cfg, constants, t_max, snapshot_every) = built.expect("no errors implies a config");

    // Computed defaults are echoed as well.
    let mut echo: Vec<(String, String, String)> = Vec::new();
    for (section, specs) in &sections {
        for spec in specs.iter() {
            let id = (section.to_string(), spec.name.to_string());
            if let Some(v) = values.get(&id) {
                echo.push((id.0, id.1, v.clone()));
            }
        }
    }
    Ok(SimConfig {
        model: model_cfg,
        constants,
        t_max,
        snapshot_every,
        output_dir: PathBuf::from(values[&(String::new(), "output_dir".to_string())].clone()),
        seed: values[&(String::new(), "seed".to_string())].parse().unwrap_or(0),
        effective: echo,
    })
}

type Built = (ModelConfig, ElasticConstants, f64, usize);

fn build(r: &mut Reader<'_>, model: Option<ModelKind>) -> Option<Built> {
    let lambda = r.f64("material", "lambda");
    let mu = r.f64("material", "mu");
    if let Some(mu) = mu {
        r.require(mu > 0.0, "material", "mu", "mu > 0");
    }
    if let (Some(l), Some(m)) = (lambda, mu) {
        r.require(3.0 * l + 2.0 * m > 0.0, "material", "lambda", "3*lambda + 2*mu > 0");
    }
    let constants = match (lambda, mu) {
        (Some(l), Some(m)) => ElasticConstants::new(l, m).ok(),
        _ => None,
    };
    let model = model?;
    let t_max = r.f64("time", "t_max");
    if let Some(t) = t_max {
        r.require(t > 0.0, "time", "t_max", "t_max > 0");
    }
    let snapshot_every = r.usize("time", "snapshot_every");
    if let Some(s) = snapshot_every {
        r.require(s >= 1, "time", "snapshot_every", "snapshot_every >= 1");
    }
    let m = model.name();
    let cfg = match model {
        ModelKind::Micro2d => {
            let particles = r.usize(m, "particles");
            let min_sep = r.f64(m, "min_separation");
            let dt = r.f64("time", "dt");
            if let Some(p) = particles {
                r.require(p >= 1, m, "particles", "particles >= 1");
            }
            if let Some(s) = min_sep {
                r.require(s > 0.0, m, "min_separation", "min_separation > 0");
            }
            if let Some(d) = dt {
                r.require(d > 0.0, "time", "dt", "dt > 0");
            }
            ModelConfig::Micro2d(Micro2dConfig {
                particles: particles?,
                min_separation: min_sep?,
                dt: dt?,
            })
        }
        ModelKind::Gb2d => {
            let n1 = r.usize(m, "n1");
            let n2 = r.usize(m, "n2");
            let l = r.f64(m, "L");
            let amp = r.f64(m, "amplitude");
            let modes = r.usize(m, "modes");
            let cfl = r.f64("time", "cfl");
            for (k, v) in [("n1", n1), ("n2", n2)] {
                if let Some(v) = v {
                    r.require(v >= 4, m, k, "grid size >= 4");
                }
            }
            if let Some(l) = l {
                r.require(l > 0.0, m, "L", "L > 0");
            }
            if let Some(a) = amp {
                r.require((0.0..1.0).contains(&a), m, "amplitude", "0 <= amplitude < 1");
            }
            if let Some(c) = cfl {
                r.require(c > 0.0 && c <= 1.0, "time", "cfl", "0 < cfl <= 1");
            }
            ModelConfig::Gb2d(Gb2dConfig {
                n1: n1?,
                n2: n2?,
                line_density: l?,
                amplitude: amp?,
                modes: modes?,
                cfl: cfl?,
            })
        }
        ModelKind::Sub1d => {
            let n = r.usize(m, "n");
            let l = r.f64(m, "L");
            let c2 = r.f64(m, "c2_override");
            let fa = r.f64(m, "forcing_amplitude");
            let fp = r.f64(m, "forcing_period");
            let cfl = r.f64("time", "cfl");
            if let Some(n) = n {
                r.require(n >= 8, m, "n", "n >= 8");
            }
            if let Some(l) = l {
                r.require(l > 0.0, m, "L", "L > 0");
            }
            if let Some(c2) = c2 {
                r.require(c2 >= 0.0, m, "c2_override", "c2_override >= 0");
            }
            if let Some(p) = fp {
                r.require(p > 0.0, m, "forcing_period", "forcing_period > 0");
            }
            if let Some(c) = cfl {
                r.require(c > 0.0 && c <= 0.5, "time", "cfl", "0 < cfl <= 0.5");
            }
            ModelConfig::Sub1d(Sub1dConfig {
                n: n?,
                line_density: l?,
                c2_override: c2,
                forcing_amplitude: fa?,
                forcing_period: fp?,
                cfl: cfl?,
            })
        }
        ModelKind::Gcz1d => {
            let n = r.usize(m, "n");
            let eps = r.f64(m, "epsilon");
            let tau = r.f64(m, "tau");
            let c0 = r.f64(m, "c0");
            let d0 = r.f64(m, "D0");
            let amp = r.f64(m, "sine_amplitude");
            let tol = r.f64(m, "residual_tol");
            let gamma = r.f64(m, "monitor_gamma");
            let initial = match r.raw(m, "initial") {
                Some("linear") => Some(GczInitial::Linear),
                Some("sine") => Some(GczInitial::Sine),
                Some("gaussian") => Some(GczInitial::Gaussian),
                _ => None,
            };
            if let Some(n) = n {
                r.require(n >= 8, m, "n", "n >= 8");
            }
            if let Some(e) = eps {
                r.require(e > 0.0, m, "epsilon", "epsilon > 0");
            }
            for (k, v) in [("c0", c0), ("D0", d0), ("residual_tol", tol)] {
                if let Some(v) = v {
                    r.require(v > 0.0, m, k, &format!("{k} > 0"));
                }
            }
            if let Some(g) = gamma {
                r.require(g >= 0.0, m, "monitor_gamma", "monitor_gamma >= 0");
            }
            if let Some(a) = amp {
                r.require((0.0..1.0).contains(&a), m, "sine_amplitude", "0 <= sine_amplitude < 1");
            }
            let floor = match (r.f64(m, "gamma_floor"), c0) {
                (Some(f), _) => {
                    r.require(f > 0.0, m, "gamma_floor", "gamma_floor > 0");
                    Some(f)
                }
                (None, Some(c0)) => {
                    let f = 1e-8 * c0;
                    r.set(m, "gamma_floor", format!("{f:e}"));
                    Some(f)
                }
                _ => None,
            };
            let dt = match (r.f64("time", "dt"), n, eps) {
                (Some(dt), Some(n), Some(e)) => {
                    let dy = 2.0 / (n + 1) as f64;
                    let bound = dy * dy / (2.0 * (1.0 + e));
                    r.require(
                        dt > 0.0 && dt <= bound,
                        "time",
                        "dt",
                        &format!("0 < dt <= dy^2/(2(1+epsilon)) = {bound:e}"),
                    );
                    Some(dt)
                }
                (None, Some(n), Some(e)) => {
                    let dy = 2.0 / (n + 1) as f64;
                    let dt = 0.4 * dy * dy / (1.0 + e);
                    r.set("time", "dt", format!("{dt:e}"));
                    Some(dt)
                }
                _ => None,
            };
            ModelConfig::Gcz1d(Gcz1dConfig {
                n: n?,
                epsilon: eps?,
                tau: tau?,
                c0: c0?,
                d0: d0?,
                initial: initial?,
                sine_amplitude: amp?,
                residual_tol: tol?,
                monitor_gamma: gamma?,
                gamma_floor: floor?,
                dt: dt?,
            })
        }
        ModelKind::Curves => {
            let shape = match r.raw(m, "shape") {
                Some("circle") => {
                    let radius = r.f64(m, "radius");
                    if let Some(v) = radius {
                        r.require(v > 0.0, m, "radius", "radius > 0");
                    }
                    radius.map(|radius| CurveShape::Circle { radius })
                }
                Some("ellipse") => {
                    let (a, b) = (r.f64(m, "semi_axis_a"), r.f64(m, "semi_axis_b"));
                    for (k, v) in [("semi_axis_a", a), ("semi_axis_b", b)] {
                        if let Some(v) = v {
                            r.require(v > 0.0, m, k, &format!("{k} > 0"));
                        }
                    }
                    a.zip(b).map(|(a, b)| CurveShape::Ellipse { a, b })
                }
                _ => None,
            };
            let center = r.f64(m, "center_x").zip(r.f64(m, "center_y")).map(|(x, y)| [x, y]);
            let vertices = r.usize(m, "vertices");
            if let Some(v) = vertices {
                r.require(v >= crate::curves::MIN_VERTICES, m, "vertices", "vertices >= 8");
            }
            let speed = r.f64(m, "speed");
            let grad = r.f64(m, "gradient_x").zip(r.f64(m, "gradient_y"));
            let curvature = r.f64(m, "curvature");
            let velocity = match (r.raw(m, "velocity"), speed) {
                (Some("constant"), Some(s)) => Some(VelocityField::Constant(s)),
                (Some("linear"), Some(s)) => grad.map(|(gx, gy)| VelocityField::Linear {
                    gradient: [gx, gy],
                    offset: s,
                }),
                (Some("radial"), Some(s)) => curvature.map(|k| VelocityField::Radial {
                    base: s,
                    curvature: k,
                }),
                _ => None,
            };
            let dt = r.f64("time", "dt");
            if let Some(d) = dt {
                r.require(d > 0.0, "time", "dt", "dt > 0");
            }
            let tf = r.usize(m, "test_functions");
            if let Some(k) = tf {
                r.require(k >= 1, m, "test_functions", "test_functions >= 1");
            }
            let redistribute = r.raw(m, "redistribute").map(|v| v == "true");
            let cfg = CurvesConfig {
                shape: shape?,
                center: center?,
                vertices: vertices?,
                velocity: velocity?,
                redistribute: redistribute?,
                test_functions: tf?,
                dt: dt?,
            };
            check_curve_step(r, &cfg);
            ModelConfig::Curves(cfg)
        }
    };
    Some((cfg, constants?, t_max?, snapshot_every?))
}

/// The first step must satisfy the motion guard of the front tracker.
fn check_curve_step(r: &mut Reader<'_>, cfg: &CurvesConfig) {
    let curve = match cfg.shape {
        CurveShape::Circle { radius } => crate::curves::Curve::circle(cfg.center, radius, cfg.vertices, false),
        CurveShape::Ellipse { a, b } => crate::curves::Curve::ellipse(cfg.center, a, b, cfg.vertices),
    };
    let Ok(curve) = curve else {
        r.require(false, "curves", "shape", "initial curve must be a valid polygon");
        return;
    };
    let min_edge = curve.edge_lengths().into_iter().fold(f64::INFINITY, f64::min);
    let cmax = curve
        .vertices()
        .iter()
        .map(|v| cfg.velocity.value(*v, 0.0).abs())
        .fold(0.0, f64::max);
    r.require(
        cfg.dt * cmax < 0.5 * min_edge,
        "time",
        "dt",
        &format!("dt * max|c| < half the shortest edge ({:e})", 0.5 * min_edge),
    );
}
