//! Plain-text scenario configuration: `key = value` lines under `[section]`
//! headers. Unknown keys are rejected with a suggestion, and validation
//! reports every problem at once rather than stopping at the first.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Params};
use crate::solver::{FarBoundary, OriginBoundary, SchemeConfig};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioKind {
    EvolvePolar,
    EvolveLog,
    EvolveLevelset,
    Experiment(String),
}

impl ScenarioKind {
    pub fn as_str(&self) -> String {
        match self {
            ScenarioKind::EvolvePolar => "evolve_polar".into(),
            ScenarioKind::EvolveLog => "evolve_log".into(),
            ScenarioKind::EvolveLevelset => "evolve_levelset".into(),
            ScenarioKind::Experiment(name) => format!("experiment:{name}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelsetConfig {
    pub a: f64,
    pub b: f64,
    pub n2d: usize,
    pub eps_reg: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// coefficient family for `experiment:bs_assumptions`
    pub family: String,
    pub heat_n: f64,
    pub q_max: f64,
    pub p_max: f64,
    /// sample count for `experiment:psi_survey`
    pub samples: usize,
    pub delta0: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: "spiral".into(),
            heat_n: 3.0,
            q_max: 10.0,
            p_max: 10.0,
            samples: 100_000,
            delta0: vec![0.25, 0.5, 1.0],
        }
    }
}

/// One fully validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub params: Params,
    pub grid: Grid1D,
    pub initial_name: String,
    pub initial_args: BTreeMap<String, f64>,
    pub mollify_eps: Option<f64>,
    /// upper datum of `experiment:comparison`: a named profile, or
    /// `initial + gap` when only a gap is given
    pub upper_name: Option<String>,
    pub upper_args: BTreeMap<String, f64>,
    pub upper_gap: f64,
    pub scheme: SchemeConfig,
    pub levelset: Option<LevelsetConfig>,
    pub experiment: ExperimentConfig,
    pub out_dir: Option<String>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("scenario", &["kind", "seed"]),
    ("params", &["c", "r0"]),
    ("grid", &["lo", "hi", "n"]),
    ("initial", &["name", "a", "amplitude", "center", "width", "mollify_eps"]),
    ("initial_upper", &["name", "a", "amplitude", "center", "width", "gap"]),
    (
        "scheme",
        &["cfl_safety", "t_end", "record_every", "boundary_origin", "boundary_far"],
    ),
    ("levelset", &["a", "b", "n2d", "eps_reg"]),
    ("experiment", &["family", "heat_n", "q_max", "p_max", "samples", "delta0"]),
    ("output", &["dir"]),
];

fn levenshtein(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            cur.push((prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

fn suggest(key: &str, known: &[&str]) -> Option<String> {
    known
        .iter()
        .map(|k| (levenshtein(key, k), *k))
        .filter(|(d, _)| *d <= 2)
        .min_by_key(|(d, _)| *d)
        .map(|(_, k)| k.to_string())
}

/// Raw `section.key -> value` map with source line numbers.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn set(&mut self, path: &str, value: &str) {
        self.entries.insert(path.to_string(), (value.to_string(), 0));
    }

    fn get(&self, path: &str) -> Option<&str> {
        self.entries.get(path).map(|(v, _)| v.as_str())
    }

    fn line(&self, path: &str) -> usize {
        self.entries.get(path).map(|(_, l)| *l).unwrap_or(0)
    }
}

/// Tokenize the text into a raw map, collecting syntax errors with line
/// numbers and unknown-key errors with suggestions.
pub fn lex_config(text: &str, errors: &mut Vec<String>) -> RawConfig {
    let mut raw = RawConfig::default();
    let mut section: Option<&str> = None;
    for (idx, line0) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match line0.find('#') {
            Some(pos) => &line0[..pos],
            None => line0,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            match SECTIONS.iter().find(|(s, _)| *s == name.trim()) {
                Some((s, _)) => section = Some(s),
                None => {
                    let names: Vec<&str> = SECTIONS.iter().map(|(s, _)| *s).collect();
                    let hint = suggest(name.trim(), &names)
                        .map(|s| format!("; did you mean `[{s}]`?"))
                        .unwrap_or_default();
                    errors.push(format!("line {lineno}: unknown section `[{name}]`{hint}"));
                    section = None;
                }
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {lineno}: expected `key = value`, got `{line}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(sec) = section else {
            errors.push(format!("line {lineno}: `{key}` appears before any [section] header"));
            continue;
        };
        let known = SECTIONS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap();
        if !known.contains(&key) {
            let hint = suggest(key, known)
                .map(|s| format!("; did you mean `{s}`?"))
                .unwrap_or_default();
            errors.push(format!("line {lineno}: unknown key `{key}` in [{sec}]{hint}"));
            continue;
        }
        raw.entries.insert(format!("{sec}.{key}"), (value.to_string(), lineno));
    }
    raw
}

struct Checker<'a> {
    raw: &'a RawConfig,
    errors: Vec<String>,
}

impl<'a> Checker<'a> {
    fn f64(&mut self, path: &str) -> Option<f64> {
        let v = self.raw.get(path)?;
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                self.errors.push(format!("{path}: `{v}` is not a finite number"));
                None
            }
        }
    }

    fn f64_or(&mut self, path: &str, default: f64) -> f64 {
        if self.raw.get(path).is_some() {
            self.f64(path).unwrap_or(default)
        } else {
            default
        }
    }

    fn usize_req(&mut self, path: &str) -> Option<usize> {
        let v = self.raw.get(path)?;
        match v.parse::<usize>() {
            Ok(x) => Some(x),
            _ => {
                self.errors.push(format!("{path}: `{v}` is not a non-negative integer"));
                None
            }
        }
    }

    fn require(&mut self, path: &str) -> Option<String> {
        match self.raw.get(path) {
            Some(v) => Some(v.to_string()),
            None => {
                self.errors.push(format!("{path}: required key is missing"));
                None
            }
        }
    }
}

/// Validate a raw map into a [`ScenarioConfig`], reporting the full list of
/// problems on failure.
pub fn validate_config(raw: &RawConfig, mut errors: Vec<String>) -> Result<ScenarioConfig> {
    let mut ck = Checker { raw, errors: Vec::new() };

    let kind = match ck.require("scenario.kind").as_deref() {
        Some("evolve_polar") => Some(ScenarioKind::EvolvePolar),
        Some("evolve_log") => Some(ScenarioKind::EvolveLog),
        Some("evolve_levelset") => Some(ScenarioKind::EvolveLevelset),
        Some(other) if other.starts_with("experiment:") => {
            let name = other.trim_start_matches("experiment:").to_string();
            const KNOWN: &[&str] = &[
                "comparison",
                "gradient",
                "time_regularity",
                "bs_assumptions",
                "psi_survey",
            ];
            if KNOWN.contains(&name.as_str()) {
                Some(ScenarioKind::Experiment(name))
            } else {
                ck.errors.push(format!(
                    "scenario.kind: unknown experiment `{name}` (known: {})",
                    KNOWN.join(", ")
                ));
                None
            }
        }
        Some(other) => {
            ck.errors.push(format!(
                "scenario.kind: `{other}` is not one of evolve_polar, evolve_log, evolve_levelset, experiment:<name>"
            ));
            None
        }
        None => None,
    };

    let seed = match raw.get("scenario.seed") {
        Some(v) => match v.parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                ck.errors.push(format!("scenario.seed: `{v}` is not an unsigned integer"));
                42
            }
        },
        None => 42,
    };

    let c = ck.f64("params.c");
    if raw.get("params.c").is_none() {
        ck.errors.push("params.c: required key is missing".into());
    }
    let r0 = ck.f64_or("params.r0", 1.0);
    let params = match c {
        Some(c) => match Params::with_r0(c, r0) {
            Ok(p) => Some(p),
            Err(e) => {
                ck.errors.push(format!("params: {e}"));
                None
            }
        },
        None => None,
    };

    let lo = ck.f64("grid.lo");
    let hi = ck.f64("grid.hi");
    let n = ck.usize_req("grid.n");
    for (path, v) in [("grid.lo", &lo), ("grid.hi", &hi)] {
        if raw.get(path).is_none() && v.is_none() {
            ck.errors.push(format!("{path}: required key is missing"));
        }
    }
    if raw.get("grid.n").is_none() {
        ck.errors.push("grid.n: required key is missing".into());
    }
    let log_coords = matches!(kind, Some(ScenarioKind::EvolveLog));
    let grid = match (lo, hi, n) {
        (Some(lo), Some(hi), Some(n)) => {
            let built = if log_coords { Grid1D::log(lo, hi, n) } else { Grid1D::polar(lo, hi, n) };
            match built {
                Ok(g) => Some(g),
                Err(e) => {
                    ck.errors.push(format!("grid: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    let initial_name = raw.get("initial.name").unwrap_or("zero").to_string();
    const PROFILES: &[&str] = &["zero", "linear", "logarithmic", "smooth_bump", "compatible_ramp"];
    if !PROFILES.contains(&initial_name.as_str()) {
        let hint = suggest(&initial_name, PROFILES)
            .map(|s| format!("; did you mean `{s}`?"))
            .unwrap_or_default();
        ck.errors.push(format!("initial.name: unknown profile `{initial_name}`{hint}"));
    }
    let mut initial_args = BTreeMap::new();
    for key in ["a", "amplitude", "center", "width"] {
        if raw.get(&format!("initial.{key}")).is_some() {
            if let Some(v) = ck.f64(&format!("initial.{key}")) {
                initial_args.insert(key.to_string(), v);
            }
        }
    }
    let mollify_eps = if raw.get("initial.mollify_eps").is_some() {
        let v = ck.f64("initial.mollify_eps");
        if let Some(e) = v {
            if e <= 0.0 {
                ck.errors.push(format!("initial.mollify_eps: {e} must be positive"));
            }
        }
        v
    } else {
        None
    };

    let upper_name = raw.get("initial_upper.name").map(|s| s.to_string());
    if let Some(name) = &upper_name {
        if !PROFILES.contains(&name.as_str()) {
            ck.errors.push(format!("initial_upper.name: unknown profile `{name}`"));
        }
    }
    let mut upper_args = BTreeMap::new();
    for key in ["a", "amplitude", "center", "width"] {
        if raw.get(&format!("initial_upper.{key}")).is_some() {
            if let Some(v) = ck.f64(&format!("initial_upper.{key}")) {
                upper_args.insert(key.to_string(), v);
            }
        }
    }
    let upper_gap = ck.f64_or("initial_upper.gap", 1.0);

    let t_end = ck.f64("scheme.t_end");
    if raw.get("scheme.t_end").is_none() {
        ck.errors.push("scheme.t_end: required key is missing".into());
    }
    if let Some(t) = t_end {
        if t <= 0.0 {
            ck.errors
                .push(format!("scheme.t_end: {t} is out of range (must be positive)"));
        }
    }
    let cfl_safety = ck.f64_or("scheme.cfl_safety", 0.5);
    if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
        ck.errors
            .push(format!("scheme.cfl_safety: {cfl_safety} is out of range (0, 1]"));
    }
    let record_every = if raw.get("scheme.record_every").is_some() {
        ck.usize_req("scheme.record_every").unwrap_or(1)
    } else {
        10
    };
    if record_every == 0 {
        ck.errors.push("scheme.record_every: must be >= 1".into());
    }
    let boundary_origin = match raw.get("scheme.boundary_origin") {
        None | Some("ghost_neumann") => OriginBoundary::GhostNeumann,
        Some("log_asymptotic") => OriginBoundary::LogAsymptotic,
        Some(other) => {
            ck.errors.push(format!(
                "scheme.boundary_origin: `{other}` is not ghost_neumann or log_asymptotic"
            ));
            OriginBoundary::GhostNeumann
        }
    };
    let boundary_far = match raw.get("scheme.boundary_far") {
        None | Some("linear_extrapolation") => FarBoundary::LinearExtrapolation,
        Some("frozen_initial_slope") => FarBoundary::FrozenInitialSlope,
        Some(other) => {
            ck.errors.push(format!(
                "scheme.boundary_far: `{other}` is not linear_extrapolation or frozen_initial_slope"
            ));
            FarBoundary::LinearExtrapolation
        }
    };

    let levelset = if matches!(kind, Some(ScenarioKind::EvolveLevelset)) {
        let a = ck.f64_or("levelset.a", 0.5);
        let b = ck.f64_or("levelset.b", 4.0);
        let n2d = if raw.get("levelset.n2d").is_some() {
            ck.usize_req("levelset.n2d").unwrap_or(128)
        } else {
            128
        };
        let eps_reg = ck.f64_or("levelset.eps_reg", 1e-6 * a.max(1e-12).recip());
        if !(a >= 0.0 && a < b) {
            ck.errors.push(format!("levelset: radii must satisfy 0 <= a < b, got [{a}, {b}]"));
        }
        if eps_reg <= 0.0 {
            ck.errors.push(format!("levelset.eps_reg: {eps_reg} must be positive"));
        }
        Some(LevelsetConfig { a, b, n2d, eps_reg })
    } else {
        None
    };

    let mut experiment = ExperimentConfig::default();
    if let Some(fam) = raw.get("experiment.family") {
        const FAMILIES: &[&str] = &["spiral", "radial_heat", "pure_diffusion"];
        if FAMILIES.contains(&fam) {
            experiment.family = fam.to_string();
        } else {
            ck.errors.push(format!("experiment.family: unknown family `{fam}`"));
        }
    }
    experiment.heat_n = ck.f64_or("experiment.heat_n", 3.0);
    experiment.q_max = ck.f64_or("experiment.q_max", 10.0);
    experiment.p_max = ck.f64_or("experiment.p_max", 10.0);
    if raw.get("experiment.samples").is_some() {
        experiment.samples = ck.usize_req("experiment.samples").unwrap_or(100_000);
    }
    if let Some(v) = raw.get("experiment.delta0") {
        let mut parsed = Vec::new();
        for part in v.split(',') {
            match part.trim().parse::<f64>() {
                Ok(x) if x > 0.0 => parsed.push(x),
                _ => ck
                    .errors
                    .push(format!("experiment.delta0: `{part}` is not a positive number")),
            }
        }
        if !parsed.is_empty() {
            experiment.delta0 = parsed;
        }
    }

    let out_dir = raw.get("output.dir").map(|s| s.to_string());

    errors.append(&mut ck.errors);
    if !errors.is_empty() {
        return Err(Error::Config(errors.join("\n")));
    }
    let scheme = SchemeConfig {
        cfl_safety,
        t_end: t_end.unwrap(),
        boundary_origin,
        boundary_far,
        record_every,
        frozen_far_slope: None,
        frozen_near_slope: None,
    };
    // suppress unused-line-number lint path: line info only feeds messages
    let _ = raw.line("scenario.kind");
    Ok(ScenarioConfig {
        kind: kind.unwrap(),
        seed,
        params: params.unwrap(),
        grid: grid.unwrap(),
        initial_name,
        initial_args,
        mollify_eps,
        upper_name,
        upper_args,
        upper_gap,
        scheme,
        levelset,
        experiment,
        out_dir,
    })
}

/// Parse a configuration text, applying `overrides` (`section.key = value`
/// pairs from `--set`) before validation.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[(String, String)],
) -> Result<ScenarioConfig> {
    let mut errors = Vec::new();
    let mut raw = lex_config(text, &mut errors);
    for (path, value) in overrides {
        let Some((sec, key)) = path.split_once('.') else {
            errors.push(format!("--set {path}: expected `section.key=value`"));
            continue;
        };
        match SECTIONS.iter().find(|(s, _)| *s == sec) {
            Some((_, keys)) if keys.contains(&key) => raw.set(path, value),
            Some((_, keys)) => {
                let hint = suggest(key, keys)
                    .map(|s| format!("; did you mean `{sec}.{s}`?"))
                    .unwrap_or_default();
                errors.push(format!("--set {path}: unknown key `{key}` in [{sec}]{hint}"));
            }
            None => errors.push(format!("--set {path}: unknown section `{sec}`")),
        }
    }
    validate_config(&raw, errors)
}

/// Parse a configuration text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_with_overrides(text, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[scenario]
kind = evolve_polar
[params]
c = 1.0
[grid]
lo = 0.0
hi = 10.0
n = 400
[scheme]
t_end = 0.01
";

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.kind, ScenarioKind::EvolvePolar);
        assert_eq!(cfg.grid.len(), 400);
        assert_eq!(cfg.params.c, 1.0);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.scheme.record_every, 10);
    }

    #[test]
    fn unknown_key_is_rejected_with_suggestion() {
        let text = format!("{MINIMAL}cflsafety = 0.5\n");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cflsafety"), "{msg}");
        assert!(msg.contains("did you mean `cfl_safety`"), "{msg}");
    }

    #[test]
    fn negative_t_end_is_a_range_error() {
        let text = MINIMAL.replace("t_end = 0.01", "t_end = -1");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn all_errors_reported_not_just_first() {
        let text = "\
[scenario]
kind = evolve_sideways
[params]
c = nanobot
[grid]
lo = 5.0
hi = 1.0
n = 400
[scheme]
t_end = -2
bogus_key = 1
";
        let err = parse_config(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("evolve_sideways"), "{msg}");
        assert!(msg.contains("not a finite number"), "{msg}");
        assert!(msg.contains("lo < hi") || msg.contains("grid"), "{msg}");
        assert!(msg.contains("out of range"), "{msg}");
        assert!(msg.contains("bogus_key"), "{msg}");
        assert!(msg.lines().count() >= 5, "expected all errors listed:\n{msg}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "[scenario]\nkind evolve_polar\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn overrides_apply_and_are_checked() {
        let cfg = parse_config_with_overrides(
            MINIMAL,
            &[("scheme.t_end".into(), "0.5".into()), ("scenario.seed".into(), "7".into())],
        )
        .unwrap();
        assert_eq!(cfg.scheme.t_end, 0.5);
        assert_eq!(cfg.seed, 7);
        let err = parse_config_with_overrides(MINIMAL, &[("scheme.tend".into(), "1".into())])
            .unwrap_err();
        assert!(err.to_string().contains("did you mean `scheme.t_end`"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header comment\n\n{MINIMAL}\n# trailing\n");
        assert!(parse_config(&text).is_ok());
    }

    #[test]
    fn experiment_kind_parses() {
        let text = MINIMAL.replace("kind = evolve_polar", "kind = experiment:comparison");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.kind, ScenarioKind::Experiment("comparison".into()));
        assert_eq!(cfg.upper_gap, 1.0);
    }
}
