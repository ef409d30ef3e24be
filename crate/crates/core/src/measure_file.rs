//! Flat `key = value` measure files.
//!
//! ```text
//! # jump weight on the unit circle, evaluated at the jump
//! support.kind = circle
//! support.params = 1
//! weight.A = 2
//! weight.B = 1
//! weight.jump_param = 1.5707963267948966
//! weight.w0 = 1
//! eval.z0 = auto-jump
//! ```
//!
//! | key | value |
//! |---|---|
//! | `support.kind` | `circle`, `interval`, `ellipse` or `lemniscate` |
//! | `support.params` | circle: `r` or `cx, cy, r`; interval: `a, b`; ellipse: `a, b` or `a, b, cx, cy, rotation`; lemniscate: coefficients as `re, im` pairs, constant term first |
//! | `weight.A`, `weight.B`, `weight.jump_param` | jump values and parameter; all three or none |
//! | `weight.w0` | `1` or polynomial coefficients in the arc parameter, ascending |
//! | `weight.profile` | `arc-length` (default) or `arcsine` |
//! | `eval.z0` | `re, im` or `auto-jump` |
//!
//! Values may be double-quoted and lists may be wrapped in brackets. Blank
//! lines and `#` comments are ignored; unknown and repeated keys are errors.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ComplexPolynomial, SupportSpec};
use crate::measure::{DensityProfile, EvalPoint, JumpWeight, MeasureSpec, SmoothFactor, WeightKind, WeightPiece};

const KEYS: [&str; 8] = [
    "support.kind",
    "support.params",
    "weight.A",
    "weight.B",
    "weight.jump_param",
    "weight.w0",
    "weight.profile",
    "eval.z0",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    Circle,
    Interval,
    Ellipse,
    Lemniscate,
}

impl SupportKind {
    pub fn name(self) -> &'static str {
        match self {
            SupportKind::Circle => "circle",
            SupportKind::Interval => "interval",
            SupportKind::Ellipse => "ellipse",
            SupportKind::Lemniscate => "lemniscate",
        }
    }
}

/// Contents of a measure file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFile {
    pub kind: SupportKind,
    pub params: Vec<f64>,
    /// `(A, B, jump_param)`.
    pub jump: Option<(f64, f64, f64)>,
    /// Coefficients of `w0`; a single entry is a constant.
    pub w0: Vec<f64>,
    pub profile: DensityProfile,
    pub z0: EvalPoint,
}

struct Entry {
    line: usize,
    value: String,
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('"').and_then(|r| r.strip_suffix('"')).unwrap_or(s).trim()
}

fn parse_list(e: &Entry) -> Result<Vec<f64>> {
    let s = unquote(&e.value);
    let s = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    let out = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(e.line, format!("'{t}' is not a finite number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(parse_error(e.line, "expected at least one number"));
    }
    Ok(out)
}

fn parse_number(e: &Entry) -> Result<f64> {
    match parse_list(e)?.as_slice() {
        [v] => Ok(*v),
        v => Err(parse_error(e.line, format!("expected one number, got {}", v.len()))),
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `"re,im"` or `auto-jump`.
pub fn parse_eval_point(s: &str) -> Result<EvalPoint> {
    let s = unquote(s);
    if s == "auto-jump" {
        return Ok(EvalPoint::AutoJump);
    }
    let e = Entry {
        line: 0,
        value: s.to_string(),
    };
    match parse_list(&e).map_err(|err| Error::input(format!("bad point '{s}': {err}")))?.as_slice() {
        [re, im] => Ok(EvalPoint::Point(Complex64::new(*re, *im))),
        _ => Err(Error::input(format!("expected 're,im' or 'auto-jump', got '{s}'"))),
    }
}

impl FromStr for MeasureFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: HashMap<&'static str, Entry> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(line, format!("expected 'key = value', got '{content}'")))?;
            let key = key.trim();
            let known = KEYS
                .iter()
                .find(|&&k| k == key)
                .ok_or_else(|| parse_error(line, format!("unknown key '{key}'")))?;
            if let Some(prev) = entries.get(known) {
                return Err(parse_error(line, format!("duplicate key '{key}' (first on line {})", prev.line)));
            }
            entries.insert(
                known,
                Entry {
                    line,
                    value: value.trim().to_string(),
                },
            );
        }
        let last_line = text.lines().count().max(1);
        let required = |key: &str| {
            entries
                .get(key)
                .ok_or_else(|| parse_error(last_line, format!("missing key '{key}'")))
        };

        let kind_entry = required("support.kind")?;
        let kind = match unquote(&kind_entry.value) {
            "circle" => SupportKind::Circle,
            "interval" => SupportKind::Interval,
            "ellipse" => SupportKind::Ellipse,
            "lemniscate" => SupportKind::Lemniscate,
            other => {
                return Err(parse_error(
                    kind_entry.line,
                    format!("unknown support kind '{other}' (circle|interval|ellipse|lemniscate)"),
                ))
            }
        };

        let params_entry = required("support.params")?;
        let params = parse_list(params_entry)?;
        let counts_ok = match kind {
            SupportKind::Circle => matches!(params.len(), 1 | 3),
            SupportKind::Interval => params.len() == 2,
            SupportKind::Ellipse => matches!(params.len(), 2 | 5),
            SupportKind::Lemniscate => params.len() >= 4 && params.len() % 2 == 0,
        };
        if !counts_ok {
            let expected = match kind {
                SupportKind::Circle => "r or cx, cy, r",
                SupportKind::Interval => "a, b",
                SupportKind::Ellipse => "a, b or a, b, cx, cy, rotation",
                SupportKind::Lemniscate => "re, im pairs of a polynomial of degree at least 1",
            };
            return Err(parse_error(
                params_entry.line,
                format!("{} needs {expected}, got {} numbers", kind.name(), params.len()),
            ));
        }

        let jump_keys = ["weight.A", "weight.B", "weight.jump_param"];
        let present: Vec<&Entry> = jump_keys.iter().filter_map(|k| entries.get(k)).collect();
        let jump = match present.len() {
            0 => None,
            3 => Some((
                parse_number(present[0])?,
                parse_number(present[1])?,
                parse_number(present[2])?,
            )),
            _ => {
                return Err(parse_error(
                    present[0].line,
                    "weight.A, weight.B and weight.jump_param must be given together",
                ))
            }
        };
        if let Some((a, b, _)) = jump {
            for (key, v) in [("weight.A", a), ("weight.B", b)] {
                if !(v > 0.0) {
                    return Err(parse_error(entries[key].line, format!("{key} must be positive, got {v}")));
                }
            }
        }

        let w0 = match entries.get("weight.w0") {
            Some(e) => parse_list(e)?,
            None => vec![1.0],
        };

        let profile = match entries.get("weight.profile") {
            None => DensityProfile::ArcLength,
            Some(e) => match unquote(&e.value) {
                "arc-length" => DensityProfile::ArcLength,
                "arcsine" => DensityProfile::Arcsine,
                other => {
                    return Err(parse_error(e.line, format!("unknown profile '{other}' (arc-length|arcsine)")))
                }
            },
        };

        let z0 = match entries.get("eval.z0") {
            Some(e) => parse_eval_point(&e.value).map_err(|err| parse_error(e.line, err.to_string()))?,
            None if jump.is_some() => EvalPoint::AutoJump,
            None => return Err(parse_error(last_line, "missing key 'eval.z0'")),
        };

        Ok(MeasureFile {
            kind,
            params,
            jump,
            w0,
            profile,
            z0,
        })
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for MeasureFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "support.kind = {}", self.kind.name())?;
        writeln!(f, "support.params = {}", join(&self.params))?;
        if let Some((a, b, t0)) = self.jump {
            writeln!(f, "weight.A = {a}")?;
            writeln!(f, "weight.B = {b}")?;
            writeln!(f, "weight.jump_param = {t0}")?;
        }
        writeln!(f, "weight.w0 = {}", join(&self.w0))?;
        if self.profile == DensityProfile::Arcsine {
            writeln!(f, "weight.profile = arcsine")?;
        }
        match self.z0 {
            EvalPoint::AutoJump => writeln!(f, "eval.z0 = auto-jump"),
            EvalPoint::Point(z) => writeln!(f, "eval.z0 = {}, {}", z.re, z.im),
        }
    }
}

impl MeasureFile {
    pub fn support(&self) -> Result<SupportSpec> {
        let p = &self.params;
        Ok(match (self.kind, p.len()) {
            (SupportKind::Circle, 1) => SupportSpec::Circle {
                center: Complex64::new(0.0, 0.0),
                radius: p[0],
            },
            (SupportKind::Circle, _) => SupportSpec::Circle {
                center: Complex64::new(p[0], p[1]),
                radius: p[2],
            },
            (SupportKind::Interval, _) => SupportSpec::Interval { a: p[0], b: p[1] },
            (SupportKind::Ellipse, 2) => SupportSpec::Ellipse {
                a: p[0],
                b: p[1],
                center: Complex64::new(0.0, 0.0),
                rotation: 0.0,
            },
            (SupportKind::Ellipse, _) => SupportSpec::Ellipse {
                a: p[0],
                b: p[1],
                center: Complex64::new(p[2], p[3]),
                rotation: p[4],
            },
            (SupportKind::Lemniscate, _) => SupportSpec::Lemniscate(ComplexPolynomial::new(
                p.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            )?),
        })
    }

    pub fn to_measure(&self) -> Result<MeasureSpec> {
        let kind = match self.jump {
            Some((a, b, t0)) => WeightKind::Jump(JumpWeight::new(a, b, t0)?),
            None => WeightKind::Plain,
        };
        let smooth = match self.w0.as_slice() {
            [c] => SmoothFactor::Constant(*c),
            c => SmoothFactor::Polynomial(c.to_vec()),
        };
        MeasureSpec::with_weight(
            self.support()?,
            WeightPiece {
                arc: None,
                kind,
                smooth,
                profile: self.profile,
            },
            self.z0,
        )
    }
}

/// Reads and builds the measure in `path`.
pub fn load(path: &Path) -> Result<MeasureSpec> {
    std::fs::read_to_string(path)?.parse::<MeasureFile>()?.to_measure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const CIRCLE_JUMP: &str = "# circle\n\
        support.kind = \"circle\"\n\
        support.params = [1]\n\
        weight.A = 2\n\
        weight.B = 1\n\
        weight.jump_param = 1.5707963267948966   # pi/2\n\
        weight.w0 = 1\n\
        eval.z0 = auto-jump\n";

    #[test]
    fn parses_circle_jump() {
        let f: MeasureFile = CIRCLE_JUMP.parse().unwrap();
        assert_eq!(f.kind, SupportKind::Circle);
        assert_eq!(f.jump, Some((2.0, 1.0, PI / 2.0)));
        assert_eq!(f.z0, EvalPoint::AutoJump);
        let mu = f.to_measure().unwrap();
        assert!((mu.z0().unwrap().z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((mu.mass().unwrap() - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn round_trips_through_text() {
        let f: MeasureFile = CIRCLE_JUMP.parse().unwrap();
        let again: MeasureFile = f.to_string().parse().unwrap();
        assert_eq!(f, again);

        let lem = MeasureFile {
            kind: SupportKind::Lemniscate,
            params: vec![-0.25, 0.0, 0.0, 0.0, 1.0, 0.0],
            jump: None,
            w0: vec![1.0, 0.1],
            profile: DensityProfile::ArcLength,
            z0: EvalPoint::Point(Complex64::new(0.1, -1.0 / 3.0)),
        };
        assert_eq!(lem, lem.to_string().parse().unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line_of = |text: &str| match text.parse::<MeasureFile>() {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(line_of("support.kind = circle\n\nsupport.radius = 1\n"), 3);
        assert_eq!(line_of("support.kind = square\n"), 1);
        assert_eq!(line_of("support.kind = circle\nsupport.params = 1, 2\neval.z0 = 1,0\n"), 2);
        assert_eq!(line_of("support.kind = circle\nsupport.params = 1\nsupport.params = 1\n"), 3);
        assert_eq!(line_of("support.kind = circle\nsupport.params = x\n"), 2);
        assert_eq!(line_of("support.kind = circle\nsupport.params = 1\nweight.A = 2\n"), 3);
        assert_eq!(line_of("support.kind = interval\nsupport.params = -1, 1\nweight.A = -2\nweight.B = 1\nweight.jump_param = 0\n"), 3);
        assert_eq!(line_of("support.kind = circle\nsupport.params = 1\neval.z0 = 1\n"), 3);
        assert_eq!(line_of("just text\n"), 1);
    }

    #[test]
    fn missing_keys_are_reported() {
        let err = "support.kind = circle\n".parse::<MeasureFile>().unwrap_err();
        assert!(err.to_string().contains("support.params"));
        let err = "support.kind = circle\nsupport.params = 1\n".parse::<MeasureFile>().unwrap_err();
        assert!(err.to_string().contains("eval.z0"));
    }

    #[test]
    fn builds_every_support_kind() {
        let texts = [
            "support.kind = interval\nsupport.params = -1, 1\nweight.profile = arcsine\neval.z0 = 0, 0\n",
            "support.kind = ellipse\nsupport.params = 1.25, 0.75\nweight.A = 2\nweight.B = 1\nweight.jump_param = 0\n",
            "support.kind = circle\nsupport.params = 1, 1, 2\neval.z0 = 3, 1\n",
            "support.kind = lemniscate\nsupport.params = 0,0, 0,0, 1,0\nweight.A = 2\nweight.B = 1\nweight.jump_param = 1.5707963267948966\n",
        ];
        for text in texts {
            let f: MeasureFile = text.parse().unwrap();
            f.to_measure().unwrap();
        }
        let mu = texts[3].parse::<MeasureFile>().unwrap().to_measure().unwrap();
        let expected = Complex64::from_polar(1.0, PI / 4.0);
        assert!((mu.z0().unwrap().z - expected).norm() < 1e-12);
    }

    #[test]
    fn off_support_point_is_a_domain_error() {
        let f: MeasureFile = "support.kind = circle\nsupport.params = 1\neval.z0 = 2, 0\n".parse().unwrap();
        assert!(matches!(f.to_measure(), Err(Error::Domain(_))));
    }
}
