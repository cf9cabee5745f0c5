//! The analysis pipeline, the implication audit and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closure::{self, order_lemma_diagnostics, ClosureOptions, LemmaDiagnostics};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::germ::{self, build_singular_loci, sample_directions, SingularLoci};
use crate::ideal::{germ_radical_member, Budget, Engine, Usage};
use crate::parse::{DeformationProblem, ProblemOverrides};
use crate::poly::{fmt_rational, rat, ParamArc, Polynomial, UniPoly, VarContext};
use crate::verdict::{render_polys, Qualifier, Status, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Cond0,
    Cond,
    Cond2,
    Jacobian,
    Tame,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Cond0,
        Check::Cond,
        Check::Cond2,
        Check::Jacobian,
        Check::Tame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Cond0 => "cond0",
            Check::Cond => "cond",
            Check::Cond2 => "cond2",
            Check::Jacobian => "jacobian",
            Check::Tame => "tame",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub max_power: u32,
    pub max_weight: u32,
    pub max_arc_terms: u32,
    pub budget: Budget,
    pub checks: Vec<Check>,
    /// Demote HOLDS-with-caveat to UNDETERMINED.
    pub strict: bool,
    #[serde(skip)]
    pub mode: ExecMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            max_power: 6,
            max_weight: 4,
            max_arc_terms: 4,
            budget: Budget::default(),
            checks: Check::ALL.to_vec(),
            strict: false,
            mode: ExecMode::default(),
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<()> {
        let b = &self.budget;
        let caps = [
            ("max_power", self.max_power as usize),
            ("max_weight", self.max_weight as usize),
            ("max_arc_terms", self.max_arc_terms as usize),
            ("budget pairs", b.max_pairs),
            ("budget degree", b.max_degree as usize),
            ("budget reductions", b.max_reductions),
            ("budget generators", b.max_generators),
            ("budget work", b.max_work),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(Error::Validation(format!("{name} must be positive")));
            }
        }
        if self.checks.is_empty() {
            return Err(Error::Validation("no checks selected".into()));
        }
        Ok(())
    }

    /// Applies the option lines of a problem file.
    pub fn apply(&mut self, o: &ProblemOverrides) {
        if let Some(v) = o.max_power {
            self.max_power = v;
        }
        if let Some(v) = o.max_weight {
            self.max_weight = v;
        }
        if let Some(v) = o.max_arc_terms {
            self.max_arc_terms = v;
        }
        if let Some(v) = o.budget_pairs {
            self.budget.max_pairs = v;
        }
        if let Some(v) = o.budget_degree {
            self.budget.max_degree = v;
        }
    }

    fn runs(&self, c: Check) -> bool {
        self.checks.contains(&c)
    }

    fn closure(&self) -> ClosureOptions {
        ClosureOptions {
            max_m: self.max_power,
            max_weight: self.max_weight,
            max_arc_terms: self.max_arc_terms,
            mode: self.mode,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub vars: Vec<String>,
    pub param: String,
    #[serde(rename = "F")]
    pub f: String,
    pub witness_points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LociSummary {
    pub f0: String,
    pub sing_f0: Vec<String>,
    pub sing_f: Vec<String>,
    pub sing_ftilde: Vec<String>,
    pub dt_f_at_0: String,
    /// `Sing F = Sing F̃` as set germs at the origin; absent when undecided.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sing_germs_equal: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantSummary {
    pub vars: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorSummary {
    pub minors: Vec<String>,
    /// Polynomials the minors ideal is saturated by.
    pub saturators: Vec<String>,
    /// Empty when the saturation was abandoned.
    pub saturated: Vec<String>,
    /// Saturation by the discriminant pullback changed the ideal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond0: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond2: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tame: Option<Verdict>,
}

impl Verdicts {
    pub fn get(&self, c: Check) -> Option<&Verdict> {
        match c {
            Check::Cond0 => self.cond0.as_ref(),
            Check::Cond => self.cond.as_ref(),
            Check::Cond2 => self.cond2.as_ref(),
            Check::Jacobian => self.jacobian.as_ref(),
            Check::Tame => self.tame.as_ref(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Check, &Verdict)> {
        Check::ALL
            .into_iter()
            .filter_map(|c| self.get(c).map(|v| (c, v)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditStatus {
    Ok,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub premise: String,
    pub conclusion: String,
    pub premise_status: String,
    pub conclusion_status: String,
    pub status: AuditStatus,
}

/// Orders along `x = d·s, t = s` recorded when the Jacobian criterion holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub arc: Vec<String>,
    pub diagnostics: LemmaDiagnostics,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSummary {
    pub limits: Budget,
    pub usage: BTreeMap<String, Usage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub problem: ProblemEcho,
    pub options: AnalysisOptions,
    pub loci: LociSummary,
    pub discriminant: DiscriminantSummary,
    pub milnor_set: MilnorSummary,
    pub verdicts: Verdicts,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lemma_checks: Vec<LemmaCheck>,
    pub audit: Vec<AuditEntry>,
    pub budgets: BudgetSummary,
}

/// Runs the selected checks. Budget exhaustion only affects the stage that hit it;
/// an audit violation is returned as [`Error::Inconsistency`].
pub fn analyze(problem: &DeformationProblem, opts: &AnalysisOptions) -> Result<Report> {
    let report = analyze_unchecked(problem, opts)?;
    if let Some(v) = report
        .audit
        .iter()
        .find(|a| a.status == AuditStatus::Violation)
    {
        return Err(Error::Inconsistency(format!(
            "{} is {} but {} is {}",
            v.premise, v.premise_status, v.conclusion, v.conclusion_status
        )));
    }
    Ok(report)
}

/// [`analyze`] without aborting on audit violations.
pub fn analyze_unchecked(problem: &DeformationProblem, opts: &AnalysisOptions) -> Result<Report> {
    opts.validate()?;
    let ctx = &problem.vars;
    let loci = build_singular_loci(ctx, &problem.f)?;
    let mut record = Vec::new();
    let copts = opts.closure();
    let wp = &problem.witness_points;

    let eng = Engine::new(opts.budget);
    let sing_germs_equal = germ_radical_member(&loci.f.diff(ctx.n()), &loci.sing_ftilde, &eng).ok();
    record.push(("loci", eng.usage()));

    let mut verdicts = Verdicts::default();
    if opts.runs(Check::Cond0) {
        let eng = Engine::new(opts.budget);
        verdicts.cond0 = Some(germ::check_cond0(&loci, &eng));
        record.push(("cond0", eng.usage()));
    }

    let mut disc_summary = DiscriminantSummary::default();
    let mut milnor_summary = MilnorSummary::default();
    if opts.runs(Check::Tame) {
        let eng = Engine::new(opts.budget);
        let disc = germ::discriminant(&loci, &eng);
        record.push(("discriminant", eng.usage()));
        let scope = "germ at the origin of M ∩ {t = 0} ∩ Sing F0";
        verdicts.tame = Some(match disc {
            Ok(disc) => {
                disc_summary.vars = disc.ideal.ring().names().to_vec();
                disc_summary.generators = render_polys(disc.ideal.generators());
                let eng = Engine::new(opts.budget);
                let milnor = germ::milnor_set(&loci, &disc, &eng);
                record.push(("milnor_set", eng.usage()));
                match milnor {
                    Ok(m) => {
                        milnor_summary.minors = render_polys(m.minors.generators());
                        milnor_summary.saturators = render_polys(&m.saturators);
                        if let Some(sat) = &m.saturated {
                            milnor_summary.saturated = render_polys(sat.generators());
                        }
                        milnor_summary.removed = m.removed;
                        milnor_summary.note = m.note.clone();
                        let eng = Engine::new(opts.budget);
                        let v = germ::check_tame(&loci, &m, wp, &eng);
                        record.push(("tame", eng.usage()));
                        v
                    }
                    Err(e) => {
                        milnor_summary.note = Some(e.to_string());
                        Verdict::from_error(scope, &e)
                    }
                }
            }
            Err(e) => {
                disc_summary.note = Some(e.to_string());
                Verdict::from_error(scope, &e)
            }
        });
    }

    if opts.runs(Check::Cond) {
        let eng = Engine::new(opts.budget);
        verdicts.cond = Some(closure::check_cond(&loci, wp, &copts, &eng));
        record.push(("cond", eng.usage()));
    }
    if opts.runs(Check::Cond2) {
        let eng = Engine::new(opts.budget);
        verdicts.cond2 = Some(closure::check_cond2(&loci, wp, &copts, &eng));
        record.push(("cond2", eng.usage()));
    }
    let mut lemma_checks = Vec::new();
    if opts.runs(Check::Jacobian) {
        let eng = Engine::new(opts.budget);
        let v = closure::jacobian_criterion(&loci, &copts, &eng);
        record.push(("jacobian", eng.usage()));
        if v.binding_holds() {
            lemma_checks = lemma_checks_for(&loci)?;
        }
        verdicts.jacobian = Some(v);
    }

    if opts.strict {
        for v in [&mut verdicts.tame, &mut verdicts.cond, &mut verdicts.cond2]
            .into_iter()
            .flatten()
        {
            if v.status == Status::Holds && v.qualifier == Some(Qualifier::WithCaveat) {
                v.status = Status::Undetermined;
                v.qualifier = None;
                v.notes
                    .push("demoted from HOLDS (with-caveat) in strict mode".into());
            }
        }
    }

    let usage: BTreeMap<String, Usage> = record
        .into_iter()
        .map(|(k, u)| (k.to_string(), u))
        .collect();
    let audit = implication_audit(&verdicts, sing_germs_equal, &lemma_checks);
    Ok(Report {
        problem: echo(problem),
        options: opts.clone(),
        loci: LociSummary {
            f0: loci.f0.to_string(),
            sing_f0: render_polys(loci.sing_f0.generators()),
            sing_f: render_polys(loci.sing_f.generators()),
            sing_ftilde: render_polys(loci.sing_ftilde.generators()),
            dt_f_at_0: loci.dt_f_at_0.to_string(),
            sing_germs_equal,
        },
        discriminant: disc_summary,
        milnor_set: milnor_summary,
        verdicts,
        lemma_checks,
        audit,
        budgets: BudgetSummary {
            limits: opts.budget,
            usage,
        },
    })
}

fn echo(p: &DeformationProblem) -> ProblemEcho {
    ProblemEcho {
        vars: p.vars.spatial_vars().to_vec(),
        param: p.vars.param().to_string(),
        f: p.f.to_string(),
        witness_points: p
            .witness_points
            .iter()
            .map(|w| w.iter().map(fmt_rational).collect())
            .collect(),
    }
}

/// Number of radial test arcs used for the order-lemma checks.
const LEMMA_ARCS: usize = 8;

fn lemma_checks_for(loci: &SingularLoci) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    for d in sample_directions(loci.ctx.n()).into_iter().take(LEMMA_ARCS) {
        let mut coords: Vec<UniPoly> = d.iter().map(|c| UniPoly::monomial(c.clone(), 1)).collect();
        coords.push(UniPoly::monomial(rat(1), 1));
        let arc = ParamArc::new(coords);
        let diagnostics = order_lemma_diagnostics(loci, &arc)?;
        let consistent = !diagnostics.applicable
            || diagnostics.kappa.is_none()
            || (diagnostics.coefficients.iter().all(|c| c.2)
                && diagnostics.full_partial_order == diagnostics.kappa);
        out.push(LemmaCheck {
            arc: crate::verdict::render_arc(&arc),
            diagnostics,
            consistent,
        });
    }
    Ok(out)
}

fn status_label(v: Option<&Verdict>) -> String {
    v.map_or_else(|| "NOT RUN".to_string(), Verdict::label)
}

/// Every implication between the conditions, as proved for analytic deformations.
/// Only unqualified verdicts count: a violation needs a binding HOLDS premise and a
/// binding FAILS conclusion.
pub fn implication_audit(
    v: &Verdicts,
    sing_germs_equal: Option<bool>,
    lemma: &[LemmaCheck],
) -> Vec<AuditEntry> {
    let pairs = [
        (Check::Jacobian, Some(Check::Cond), "cond"),
        (Check::Cond, Some(Check::Tame), "tame"),
        (Check::Tame, None, "fibre constancy"),
        (Check::Jacobian, Some(Check::Tame), "tame"),
        (Check::Jacobian, Some(Check::Cond2), "cond2"),
        (Check::Cond2, Some(Check::Cond), "cond"),
        (Check::Cond, Some(Check::Cond0), "cond0"),
    ];
    let mut out = Vec::new();
    for (p, c, cname) in pairs {
        let pv = v.get(p);
        let cv = c.and_then(|c| v.get(c));
        let violated =
            pv.is_some_and(Verdict::binding_holds) && cv.is_some_and(Verdict::binding_fails);
        out.push(AuditEntry {
            premise: p.name().into(),
            conclusion: cname.into(),
            premise_status: status_label(pv),
            conclusion_status: match c {
                Some(_) => status_label(cv),
                None => "NOT COMPUTED".into(),
            },
            status: if violated {
                AuditStatus::Violation
            } else {
                AuditStatus::Ok
            },
        });
    }
    let c2 = v.get(Check::Cond2);
    let sing_fails = sing_germs_equal == Some(false);
    out.push(AuditEntry {
        premise: "cond2".into(),
        conclusion: "Sing F = Sing F~ as germs".into(),
        premise_status: status_label(c2),
        conclusion_status: match sing_germs_equal {
            Some(true) => "HOLDS".into(),
            Some(false) => "FAILS".into(),
            None => "UNDETERMINED".into(),
        },
        status: if c2.is_some_and(Verdict::binding_holds) && sing_fails {
            AuditStatus::Violation
        } else {
            AuditStatus::Ok
        },
    });
    if !lemma.is_empty() {
        let bad = lemma.iter().filter(|l| !l.consistent).count();
        out.push(AuditEntry {
            premise: "jacobian".into(),
            conclusion: "order lemmas along radial arcs".into(),
            premise_status: status_label(v.get(Check::Jacobian)),
            conclusion_status: format!("{} of {} arcs consistent", lemma.len() - bad, lemma.len()),
            status: if bad == 0 {
                AuditStatus::Ok
            } else {
                AuditStatus::Violation
            },
        });
    }
    out
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed report: {e}")))
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let p = &report.problem;
    let _ = writeln!(out, "F({}; {}) = {}", p.vars.join(", "), p.param, p.f);
    let _ = writeln!(out, "F0            = {}", report.loci.f0);
    let _ = writeln!(out, "Sing F0       : {}", report.loci.sing_f0.join(", "));
    let _ = writeln!(
        out,
        "Sing F~       : {}",
        report.loci.sing_ftilde.join(", ")
    );
    if !report.discriminant.generators.is_empty() {
        let _ = writeln!(
            out,
            "discriminant  : {} in ({})",
            report.discriminant.generators.join(", "),
            report.discriminant.vars.join(", ")
        );
    }
    if !report.milnor_set.saturated.is_empty() {
        let _ = writeln!(
            out,
            "Milnor set    : {} generators",
            report.milnor_set.saturated.len()
        );
    }
    let _ = writeln!(out);
    for (c, v) in report.verdicts.iter() {
        let _ = writeln!(out, "{:<10} {:<24} {}", c.name(), v.label(), v.scope);
        for e in &v.evidence {
            let _ = writeln!(out, "{:<10} - {}", "", e.summary());
        }
        for n in &v.notes {
            let _ = writeln!(out, "{:<10} note: {}", "", n);
        }
    }
    let _ = writeln!(out);
    for a in &report.audit {
        let _ = writeln!(
            out,
            "audit {:<9} {} ({}) => {} ({})",
            match a.status {
                AuditStatus::Ok => "ok",
                AuditStatus::Violation => "VIOLATION",
            },
            a.premise,
            a.premise_status,
            a.conclusion,
            a.conclusion_status
        );
    }
    out
}

/// Outcome of re-checking a report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub evidence_checked: usize,
    pub failures: Vec<String>,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks every certificate and witness, and recomputes the audit from the verdicts.
pub fn verify_report(report: &Report) -> VerifySummary {
    let mut s = VerifySummary::default();
    if let Err(e) = problem_polynomial(report) {
        s.failures.push(format!("problem: {e}"));
    }
    for (c, v) in report.verdicts.iter() {
        s.evidence_checked += v.evidence.len();
        if let Err(m) = v.verify() {
            s.failures.push(format!("{}: {m}", c.name()));
        }
        if v.status == Status::Holds
            && v.qualifier == Some(Qualifier::WithCaveat)
            && report.options.strict
        {
            s.failures.push(format!(
                "{}: with-caveat verdict in a strict report",
                c.name()
            ));
        }
    }
    let audit = implication_audit(
        &report.verdicts,
        report.loci.sing_germs_equal,
        &report.lemma_checks,
    );
    if audit != report.audit {
        s.failures.push("audit does not match the verdicts".into());
    }
    if let Some(a) = audit.iter().find(|a| a.status == AuditStatus::Violation) {
        s.failures.push(format!(
            "audit violation: {} => {}",
            a.premise, a.conclusion
        ));
    }
    s
}

/// The deformation echoed in a report, re-parsed.
pub fn problem_polynomial(report: &Report) -> Result<Polynomial> {
    let p = &report.problem;
    let ctx = VarContext::new(&p.vars, &p.param)?;
    crate::parse::parse_polynomial(&p.f, &ctx)
}

#[cfg(test)]
mod tests;
