use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::expr::{parse_polynomial, parse_rational};
use crate::error::{Error, Result};
use crate::poly::{fmt_rational, Polynomial, Rational, VarContext};

/// Per-problem overrides of analysis options (`max_power = 6`, ...).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemOverrides {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_arc_terms: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget_degree: Option<u32>,
}

/// A validated deformation `F(x, t)` with `F(0, t) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationProblem {
    pub vars: VarContext,
    pub f: Polynomial,
    pub witness_points: Vec<Vec<Rational>>,
    pub overrides: ProblemOverrides,
}

impl DeformationProblem {
    pub fn new(
        vars: VarContext,
        f: Polynomial,
        witness_points: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let f = f.embed(vars.full_ring())?;
        let mut at_origin = f.clone();
        for i in 0..vars.n() {
            at_origin = at_origin.specialize(i, &Rational::zero());
        }
        if !at_origin.is_zero() {
            return Err(Error::Validation(format!(
                "F(0,t) ≠ 0: F(0,{}) = {}",
                vars.param(),
                at_origin
            )));
        }
        for w in &witness_points {
            if w.len() != vars.n() {
                return Err(Error::Validation(format!(
                    "witness point has {} coordinates, expected {}",
                    w.len(),
                    vars.n()
                )));
            }
        }
        Ok(DeformationProblem {
            vars,
            f,
            witness_points,
            overrides: ProblemOverrides::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.vars.n()
    }

    /// Renders the problem back into the line-oriented file format.
    pub fn to_file_text(&self) -> String {
        let mut out = format!(
            "vars = {}\nparam = {}\nF = {}\n",
            self.vars.spatial_vars().join(" "),
            self.vars.param(),
            self.f
        );
        for w in &self.witness_points {
            let coords: Vec<String> = w.iter().map(fmt_rational).collect();
            out.push_str(&format!("witness = {}\n", coords.join(" ")));
        }
        let o = &self.overrides;
        let opts = [
            ("max_power", o.max_power.map(|v| v as u64)),
            ("max_weight", o.max_weight.map(|v| v as u64)),
            ("max_arc_terms", o.max_arc_terms.map(|v| v as u64)),
            ("budget_pairs", o.budget_pairs.map(|v| v as u64)),
            ("budget_degree", o.budget_degree.map(|v| v as u64)),
        ];
        for (k, v) in opts {
            if let Some(v) = v {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }
}

fn file_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

/// Shifts expression-level positions so they point into the file.
fn relocate(err: Error, line: usize) -> Error {
    match err {
        Error::Parse {
            column, message, ..
        }
        | Error::Lex {
            column, message, ..
        } => Error::Parse {
            line,
            column,
            message,
        },
        other => other,
    }
}

pub fn parse_problem_file(text: &str) -> Result<DeformationProblem> {
    let mut vars: Option<(usize, Vec<String>)> = None;
    let mut param: Option<String> = None;
    let mut f_text: Option<(usize, String)> = None;
    let mut witnesses: Vec<(usize, String)> = Vec::new();
    let mut overrides = ProblemOverrides::default();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| file_error(lineno, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let number = |v: &str| -> Result<u64> {
            v.parse::<u64>()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| file_error(lineno, format!("`{key}` expects a positive integer")))
        };
        let once = |present: bool| -> Result<()> {
            if present {
                Err(file_error(lineno, format!("duplicate `{key}` line")))
            } else {
                Ok(())
            }
        };
        match key {
            "vars" => {
                once(vars.is_some())?;
                vars = Some((
                    lineno,
                    value.split_whitespace().map(str::to_string).collect(),
                ));
            }
            "param" => {
                once(param.is_some())?;
                param = Some(value.to_string());
            }
            "F" => {
                once(f_text.is_some())?;
                f_text = Some((lineno, value.to_string()));
            }
            "witness" => witnesses.push((lineno, value.to_string())),
            "max_power" => overrides.max_power = Some(number(value)? as u32),
            "max_weight" => overrides.max_weight = Some(number(value)? as u32),
            "max_arc_terms" => overrides.max_arc_terms = Some(number(value)? as u32),
            "budget_pairs" => overrides.budget_pairs = Some(number(value)? as usize),
            "budget_degree" => overrides.budget_degree = Some(number(value)? as u32),
            other => return Err(file_error(lineno, format!("unknown section `{other}`"))),
        }
    }

    let (vars_line, vars) = vars.ok_or_else(|| file_error(1, "missing `vars` line"))?;
    let param = param.unwrap_or_else(|| "t".to_string());
    let ctx = VarContext::new(&vars, &param).map_err(|e| match e {
        Error::Validation(m) => file_error(vars_line, m),
        other => other,
    })?;
    let (f_line, f_text) = f_text.ok_or_else(|| file_error(1, "missing `F` line"))?;
    let f = parse_polynomial(&f_text, &ctx).map_err(|e| relocate(e, f_line))?;
    let mut points = Vec::new();
    for (lineno, w) in witnesses {
        let coords = w
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| file_error(lineno, e.to_string()))?;
        if coords.len() != ctx.n() {
            return Err(file_error(
                lineno,
                format!(
                    "witness has {} coordinates, expected {}",
                    coords.len(),
                    ctx.n()
                ),
            ));
        }
        points.push(coords);
    }
    let mut problem = DeformationProblem::new(ctx, f, points)?;
    problem.overrides = overrides;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn line_singularity_file() {
        let p = parse_problem_file("vars = x y\nparam = t\nF = y^2*(x^2-(y-t)^2)\n").unwrap();
        assert_eq!(p.n(), 2);
        assert!(p.witness_points.is_empty());
    }

    #[test]
    fn constant_term_violates_standing_assumption() {
        let err = parse_problem_file("vars = x\nF = x + 1\n").unwrap_err();
        assert!(err.to_string().contains("F(0,t) ≠ 0"), "{err}");
    }

    #[test]
    fn witness_points_and_overrides() {
        let p = parse_problem_file(
            "vars = x y   # spatial\nF = x^2 + t*y\nwitness = 0 1\nmax_power = 3\nbudget_pairs = 500\n",
        )
        .unwrap();
        assert_eq!(p.witness_points, vec![vec![rat(0), rat(1)]]);
        assert_eq!(p.overrides.max_power, Some(3));
        assert_eq!(p.overrides.budget_pairs, Some(500));
        let again = parse_problem_file(&p.to_file_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn malformed_sections() {
        assert!(parse_problem_file("vars = x\n").is_err());
        assert!(parse_problem_file("F = x\n").is_err());
        assert!(parse_problem_file("vars = x\nF = x\nfoo = 1\n").is_err());
        assert!(parse_problem_file("vars = x\nF = x\nwitness = 1 2\n").is_err());
        assert!(parse_problem_file("vars = x\nF = x\nmax_power = 0\n").is_err());
        assert!(parse_problem_file("vars = x\nvars = y\nF = x\n").is_err());
        let e = parse_problem_file("vars = x\n\nF = x + q\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }
}
