//! Run configuration: a JSON document with a fixed key set, overlaid by command-line flags.

use std::path::PathBuf;
use std::str::FromStr;

use rpm_core::{DecimalPotential, DecimalValue, RpmError, SolveOptions};
use serde_json::{Map, Value};

pub const PRECISION_ENV: &str = "RPM_PRECISION_BITS";
const DEFAULT_PRECISION: u32 = 512;
const DEFAULT_SCAN_POINTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Shift,
    Resonance,
    Solve,
    Scan,
    Validate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Shift => "shift",
            Mode::Resonance => "resonance",
            Mode::Solve => "solve",
            Mode::Scan => "scan",
            Mode::Validate => "validate",
        }
    }

    /// Modes that run one job per lambda.
    pub fn is_model(self) -> bool {
        matches!(self, Mode::Shift | Mode::Resonance | Mode::Validate)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "shift" => Mode::Shift,
            "resonance" => Mode::Resonance,
            "solve" => Mode::Solve,
            "scan" => Mode::Scan,
            "validate" => Mode::Validate,
            other => return Err(format!("unknown mode {other:?} (shift|resonance|solve|scan|validate)")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    JsonLines,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Table => "table",
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "json-lines",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "table" => OutputFormat::Table,
            "csv" => OutputFormat::Csv,
            "json-lines" => OutputFormat::JsonLines,
            other => return Err(format!("unknown output format {other:?} (table|csv|json-lines)")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub re: DecimalValue,
    pub im: DecimalValue,
}

/// Search region for scan mode: a real interval, or a rectangle when both `im` bounds are set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub re_lo: DecimalValue,
    pub re_hi: DecimalValue,
    pub im: Option<(DecimalValue, DecimalValue)>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub lambda: Vec<DecimalValue>,
    pub potential: Option<DecimalPotential>,
    pub options: SolveOptions,
    pub seed: Option<SeedSpec>,
    pub scan: Option<ScanSpec>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// Partially specified configuration; file values sit under flag values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub mode: Option<Mode>,
    pub lambda: Option<Vec<DecimalValue>>,
    pub beta: Option<u32>,
    pub mu: Option<DecimalValue>,
    pub v: Option<Vec<DecimalValue>>,
    pub d_min: Option<usize>,
    pub d_max: Option<usize>,
    pub d_values: Option<Vec<usize>>,
    pub precision_bits: Option<u32>,
    pub precision_max: Option<u32>,
    pub seed_re: Option<DecimalValue>,
    pub seed_im: Option<DecimalValue>,
    pub scan_re_lo: Option<DecimalValue>,
    pub scan_re_hi: Option<DecimalValue>,
    pub scan_im_lo: Option<DecimalValue>,
    pub scan_im_hi: Option<DecimalValue>,
    pub scan_points: Option<usize>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

fn config_err(path: &str, msg: impl std::fmt::Display) -> RpmError {
    RpmError::Config(format!("{path}: {msg}"))
}

fn object<'a>(value: &'a Value, path: &str, keys: &[&str]) -> Result<&'a Map<String, Value>, RpmError> {
    let map = value
        .as_object()
        .ok_or_else(|| config_err(path, "expected an object"))?;
    if let Some(bad) = map.keys().find(|k| !keys.contains(&k.as_str())) {
        let full = if path.is_empty() {
            bad.clone()
        } else {
            format!("{path}.{bad}")
        };
        return Err(config_err(&full, "unknown key"));
    }
    Ok(map)
}

/// Numbers keep their literal text; strings are accepted as literals too.
fn decimal(value: &Value, path: &str) -> Result<DecimalValue, RpmError> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(config_err(path, "expected a number")),
    };
    DecimalValue::parse(&text).map_err(|e| config_err(path, e))
}

fn decimal_list(value: &Value, path: &str) -> Result<Vec<DecimalValue>, RpmError> {
    match value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| decimal(x, &format!("{path}[{i}]")))
            .collect(),
        single => Ok(vec![decimal(single, path)?]),
    }
}

fn integer<T: TryFrom<u64>>(value: &Value, path: &str) -> Result<T, RpmError> {
    let n = value
        .as_u64()
        .ok_or_else(|| config_err(path, "expected a non-negative integer"))?;
    T::try_from(n).map_err(|_| config_err(path, "integer out of range"))
}

fn text<'a>(value: &'a Value, path: &str) -> Result<&'a str, RpmError> {
    value.as_str().ok_or_else(|| config_err(path, "expected a string"))
}

const TOP_KEYS: [&str; 12] = [
    "mode",
    "lambda",
    "potential",
    "D_min",
    "D_max",
    "d_values",
    "precision_bits",
    "precision_max",
    "seed",
    "scan",
    "output_format",
    "output_path",
];

impl ConfigLayer {
    pub fn from_json(source: &str) -> Result<Self, RpmError> {
        let root: Value =
            serde_json::from_str(source).map_err(|e| RpmError::Config(format!("config is not valid JSON: {e}")))?;
        let map = object(&root, "", &TOP_KEYS)?;
        let mut layer = ConfigLayer::default();
        for (key, value) in map {
            let key = key.as_str();
            match key {
                "mode" => layer.mode = Some(text(value, key)?.parse().map_err(|e| config_err(key, e))?),
                "lambda" => layer.lambda = Some(decimal_list(value, key)?),
                "potential" => {
                    let p = object(value, key, &["beta", "mu", "v"])?;
                    if let Some(b) = p.get("beta") {
                        layer.beta = Some(integer(b, "potential.beta")?);
                    }
                    if let Some(m) = p.get("mu") {
                        layer.mu = Some(decimal(m, "potential.mu")?);
                    }
                    if let Some(v) = p.get("v") {
                        if !v.is_array() {
                            return Err(config_err("potential.v", "expected an array"));
                        }
                        layer.v = Some(decimal_list(v, "potential.v")?);
                    }
                }
                "D_min" => layer.d_min = Some(integer(value, key)?),
                "D_max" => layer.d_max = Some(integer(value, key)?),
                "d_values" => {
                    let items = value.as_array().ok_or_else(|| config_err(key, "expected an array"))?;
                    layer.d_values = Some(
                        items
                            .iter()
                            .enumerate()
                            .map(|(i, x)| integer(x, &format!("d_values[{i}]")))
                            .collect::<Result<_, _>>()?,
                    );
                }
                "precision_bits" => layer.precision_bits = Some(integer(value, key)?),
                "precision_max" => layer.precision_max = Some(integer(value, key)?),
                "seed" => {
                    let s = object(value, key, &["re", "im"])?;
                    if let Some(re) = s.get("re") {
                        layer.seed_re = Some(decimal(re, "seed.re")?);
                    }
                    if let Some(im) = s.get("im") {
                        layer.seed_im = Some(decimal(im, "seed.im")?);
                    }
                }
                "scan" => {
                    let s = object(value, key, &["re_lo", "re_hi", "im_lo", "im_hi", "points"])?;
                    let field = |name: &str| s.get(name).map(|x| decimal(x, &format!("scan.{name}"))).transpose();
                    layer.scan_re_lo = field("re_lo")?;
                    layer.scan_re_hi = field("re_hi")?;
                    layer.scan_im_lo = field("im_lo")?;
                    layer.scan_im_hi = field("im_hi")?;
                    if let Some(n) = s.get("points") {
                        layer.scan_points = Some(integer(n, "scan.points")?);
                    }
                }
                "output_format" => {
                    layer.output_format = Some(text(value, key)?.parse().map_err(|e| config_err(key, e))?)
                }
                "output_path" => layer.output_path = Some(PathBuf::from(text(value, key)?)),
                _ => unreachable!("keys checked above"),
            }
        }
        Ok(layer)
    }

    /// `self` with every field that `top` sets replaced by `top`'s value.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigLayer { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            mode,
            lambda,
            beta,
            mu,
            v,
            d_min,
            d_max,
            d_values,
            precision_bits,
            precision_max,
            seed_re,
            seed_im,
            scan_re_lo,
            scan_re_hi,
            scan_im_lo,
            scan_im_hi,
            scan_points,
            output_format,
            output_path
        )
    }

    /// Fills defaults and checks that the fields the mode needs are present.
    pub fn finish(self, default_precision: u32) -> Result<RunConfig, RpmError> {
        let mode = self.mode.ok_or_else(|| config_err("mode", "missing required field"))?;
        let defaults = SolveOptions::default();
        let options = SolveOptions {
            d_min: self.d_min.unwrap_or(defaults.d_min),
            d_max: self.d_max.unwrap_or(defaults.d_max),
            d_values: self.d_values.unwrap_or(defaults.d_values),
            precision_bits: self.precision_bits.unwrap_or(default_precision),
            precision_max: self.precision_max.unwrap_or(defaults.precision_max),
            ..defaults
        };
        options.validate()?;

        let lambda = self.lambda.unwrap_or_default();
        if mode.is_model() && lambda.is_empty() {
            return Err(config_err(
                "lambda",
                format!("missing required field for {} mode", mode.name()),
            ));
        }
        if !mode.is_model() && !lambda.is_empty() {
            return Err(config_err("lambda", format!("not used in {} mode", mode.name())));
        }

        let potential = match (self.beta, self.mu, self.v) {
            (None, None, None) => None,
            (beta, mu, Some(v)) => Some(DecimalPotential {
                beta: beta.unwrap_or(1),
                mu: mu.unwrap_or_else(|| DecimalValue::parse("2").expect("literal")),
                v,
            }),
            _ => return Err(config_err("potential.v", "missing required field")),
        };
        match (mode, &potential) {
            (Mode::Solve | Mode::Scan, None) => {
                return Err(config_err(
                    "potential",
                    format!("missing required field for {} mode", mode.name()),
                ))
            }
            (Mode::Shift | Mode::Resonance | Mode::Validate, Some(_)) => {
                return Err(config_err("potential", format!("not used in {} mode", mode.name())))
            }
            _ => {}
        }

        let seed = match (self.seed_re, self.seed_im) {
            (None, None) => None,
            (Some(re), im) => Some(SeedSpec {
                re,
                im: im.unwrap_or_else(|| DecimalValue::parse("0").expect("literal")),
            }),
            (None, Some(_)) => return Err(config_err("seed.re", "missing required field")),
        };
        match (mode, &seed) {
            (Mode::Solve, None) => {
                return Err(config_err(
                    "seed",
                    "missing required field for solve mode (scan mode locates seeds)",
                ))
            }
            (Mode::Shift, Some(s)) if !s.im.at(64).is_zero() => {
                return Err(config_err("seed.im", "the shift seed is a real Delta"))
            }
            (Mode::Resonance, Some(s)) if s.im.at(64).is_zero() => {
                return Err(config_err("seed.im", "a resonance seed needs a nonzero imaginary part"))
            }
            (Mode::Scan | Mode::Validate, Some(_)) => {
                return Err(config_err("seed", format!("not used in {} mode", mode.name())))
            }
            _ => {}
        }

        let scan_given = self.scan_re_lo.is_some()
            || self.scan_re_hi.is_some()
            || self.scan_im_lo.is_some()
            || self.scan_im_hi.is_some()
            || self.scan_points.is_some();
        let scan = if mode == Mode::Scan {
            let re_lo = self
                .scan_re_lo
                .ok_or_else(|| config_err("scan.re_lo", "missing required field"))?;
            let re_hi = self
                .scan_re_hi
                .ok_or_else(|| config_err("scan.re_hi", "missing required field"))?;
            if re_lo.at(64) >= re_hi.at(64) {
                return Err(config_err("scan", "re_lo must be below re_hi"));
            }
            let im = match (self.scan_im_lo, self.scan_im_hi) {
                (None, None) => None,
                (Some(lo), Some(hi)) if lo.at(64) < hi.at(64) => Some((lo, hi)),
                (Some(_), Some(_)) => return Err(config_err("scan", "im_lo must be below im_hi")),
                _ => return Err(config_err("scan", "im_lo and im_hi go together")),
            };
            let points = self.scan_points.unwrap_or(DEFAULT_SCAN_POINTS);
            if points < 8 {
                return Err(config_err("scan.points", "needs at least 8 grid points"));
            }
            Some(ScanSpec {
                re_lo,
                re_hi,
                im,
                points,
            })
        } else if scan_given {
            return Err(config_err("scan", format!("not used in {} mode", mode.name())));
        } else {
            None
        };

        Ok(RunConfig {
            mode,
            lambda,
            potential,
            options,
            seed,
            scan,
            output_format: self.output_format.unwrap_or(OutputFormat::Csv),
            output_path: self.output_path,
        })
    }
}

/// Default working precision: `RPM_PRECISION_BITS` when set, else 512 bits.
pub fn default_precision() -> Result<u32, RpmError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| config_err(PRECISION_ENV, format!("expected a bit count, got {v:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

/// Reads a config document on its own, with the environment's default precision.
pub fn parse_config(source: &str) -> Result<RunConfig, RpmError> {
    ConfigLayer::from_json(source)?.finish(default_precision()?)
}

fn literal(x: &DecimalValue) -> Value {
    // keep the literal as a JSON number when it is one, else as a string
    match serde_json::from_str::<Value>(x.as_str()) {
        Ok(v @ Value::Number(_)) => v,
        _ => Value::String(x.as_str().to_string()),
    }
}

impl RunConfig {
    /// The complete configuration as a document that `parse_config` reads back unchanged.
    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        map.insert("mode".into(), self.mode.name().into());
        if !self.lambda.is_empty() {
            map.insert("lambda".into(), Value::Array(self.lambda.iter().map(literal).collect()));
        }
        if let Some(p) = &self.potential {
            let mut pm = Map::new();
            pm.insert("beta".into(), p.beta.into());
            pm.insert("mu".into(), literal(&p.mu));
            pm.insert("v".into(), Value::Array(p.v.iter().map(literal).collect()));
            map.insert("potential".into(), Value::Object(pm));
        }
        let o = &self.options;
        map.insert("D_min".into(), o.d_min.into());
        map.insert("D_max".into(), o.d_max.into());
        map.insert("d_values".into(), o.d_values.clone().into());
        map.insert("precision_bits".into(), o.precision_bits.into());
        map.insert("precision_max".into(), o.precision_max.into());
        if let Some(s) = &self.seed {
            let mut sm = Map::new();
            sm.insert("re".into(), literal(&s.re));
            sm.insert("im".into(), literal(&s.im));
            map.insert("seed".into(), Value::Object(sm));
        }
        if let Some(s) = &self.scan {
            let mut sm = Map::new();
            sm.insert("re_lo".into(), literal(&s.re_lo));
            sm.insert("re_hi".into(), literal(&s.re_hi));
            if let Some((lo, hi)) = &s.im {
                sm.insert("im_lo".into(), literal(lo));
                sm.insert("im_hi".into(), literal(hi));
            }
            sm.insert("points".into(), s.points.into());
            map.insert("scan".into(), Value::Object(sm));
        }
        map.insert("output_format".into(), self.output_format.name().into());
        if let Some(p) = &self.output_path {
            map.insert("output_path".into(), p.display().to_string().into());
        }
        serde_json::to_string_pretty(&Value::Object(map)).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_document() {
        let cfg = ConfigLayer::from_json(r#"{"mode":"shift","lambda":[0.10],"D_max":20}"#)
            .unwrap()
            .finish(512)
            .unwrap();
        assert_eq!(cfg.mode, Mode::Shift);
        assert_eq!(cfg.lambda[0].as_str(), "0.10");
        assert_eq!(cfg.options.d_max, 20);
        assert_eq!(cfg.options.d_values, vec![0, 1]);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
    }

    #[test]
    fn missing_lambda() {
        let err = ConfigLayer::from_json(r#"{"mode":"shift"}"#)
            .unwrap()
            .finish(512)
            .unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }

    #[test]
    fn unknown_key_reports_path() {
        let err = ConfigLayer::from_json(r#"{"mode":"solve","potential":{"v":[0,-1],"nu":2}}"#).unwrap_err();
        assert!(err.to_string().contains("potential.nu"), "{err}");
    }

    #[test]
    fn malformed_number_reports_path() {
        let err = ConfigLayer::from_json(r#"{"mode":"shift","lambda":[0.1,"0.x"]}"#).unwrap_err();
        assert!(err.to_string().contains("lambda[1]"), "{err}");
    }

    #[test]
    fn literals_survive_unrounded() {
        let long = "0.1000000000000000000000000000000000000001";
        let cfg = ConfigLayer::from_json(&format!(r#"{{"mode":"validate","lambda":[{long}]}}"#))
            .unwrap()
            .finish(512)
            .unwrap();
        assert_eq!(cfg.lambda[0].as_str(), long);
        assert_ne!(cfg.lambda[0].at(256), rug::Float::with_val(256, 0.1f64));
    }

    #[test]
    fn flags_win() {
        let file = ConfigLayer::from_json(r#"{"mode":"shift","lambda":[0.1],"precision_bits":256}"#).unwrap();
        let flags = ConfigLayer {
            mode: Some(Mode::Resonance),
            precision_bits: Some(1024),
            ..Default::default()
        };
        let cfg = file.overlay(flags).finish(512).unwrap();
        assert_eq!(cfg.mode, Mode::Resonance);
        assert_eq!(cfg.options.precision_bits, 1024);
        assert_eq!(cfg.lambda.len(), 1);
    }

    #[test]
    fn dump_round_trip() {
        let src = r#"{"mode":"solve","potential":{"beta":1,"mu":2,"v":[0,-1]},"D_min":3,"D_max":9,
                     "seed":{"re":-0.4,"im":0},"precision_bits":320,"output_format":"json-lines"}"#;
        let cfg = ConfigLayer::from_json(src).unwrap().finish(512).unwrap();
        let again = ConfigLayer::from_json(&cfg.to_json()).unwrap().finish(64).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn mode_requirements() {
        let bad = [
            r#"{"mode":"solve","seed":{"re":-0.4}}"#,
            r#"{"mode":"solve","potential":{"v":[0,-1]}}"#,
            r#"{"mode":"resonance","lambda":[0.1],"seed":{"re":-0.3}}"#,
            r#"{"mode":"scan","potential":{"v":[0,-1]}}"#,
            r#"{"mode":"shift","lambda":[0.1],"D_min":1}"#,
            r#"{"mode":"shift","lambda":[0.1],"precision_bits":9000}"#,
        ];
        for src in bad {
            assert!(ConfigLayer::from_json(src).unwrap().finish(512).is_err(), "{src}");
        }
    }
}
