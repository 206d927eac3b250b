//! Verification runs over a loaded system and their JSON reports.
//!
//! Reports use sorted keys, exact rationals as `"p/q"` strings and
//! polynomials in canonical monomial order, so equal inputs give equal bytes.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebra::Poly;
use crate::cohomology::CohomologyReport;
use crate::dsl::{Bounds, LoadedSystem, CHECKS};
use crate::error::{Error, Result};
use crate::gauge::{MasterFunction, MasterReport, Membership, ProjectibilityReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Ordered so that combining takes the worst outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    fn zero(p: &Poly) -> Self {
        if p.is_zero() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: String,
    pub verdict: Verdict,
    pub detail: Map<String, Value>,
}

impl CheckOutcome {
    pub fn new(check: &str, verdict: Verdict, detail: Value) -> Self {
        let detail = match detail {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        CheckOutcome {
            check: check.into(),
            verdict,
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.detail.clone();
        m.insert("check".into(), json!(self.check));
        m.insert("verdict".into(), json!(self.verdict.as_str()));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub outcomes: Vec<CheckOutcome>,
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            outcomes: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.outcomes.iter().map(|o| o.verdict).max().unwrap_or(Verdict::Pass)
    }

    pub fn outcome(&self, check: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.extra.clone();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("verdict".into(), json!(self.verdict().as_str()));
        m.insert("checks".into(), Value::Array(self.outcomes.iter().map(CheckOutcome::to_json).collect()));
        Value::Object(m)
    }

    pub fn emit(&self) -> String {
        emit_report(&self.to_json())
    }
}

pub fn emit_report(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn poly_json(p: &Poly) -> Value {
    json!(p.to_string())
}

fn named_factors(names: &[String], factors: &[Poly]) -> Value {
    let m: Map<String, Value> = names
        .iter()
        .zip(factors)
        .filter(|(_, f)| !f.is_zero())
        .map(|(n, f)| (n.clone(), poly_json(f)))
        .collect();
    Value::Object(m)
}

pub fn membership_json(loaded: &LoadedSystem, m: &Membership) -> Value {
    match m {
        Membership::Member(c) => json!({
            "verdict": "member",
            "bound": c.degree_bound,
            "constraint_factors": named_factors(&loaded.constraint_names, &c.constraint_factors),
            "generator_factors": named_factors(&loaded.generator_names, &c.generator_factors),
        }),
        Membership::Inconclusive { bound } => json!({"verdict": "inconclusive", "bound": bound}),
    }
}

fn membership_verdict(m: &Membership) -> Verdict {
    if m.is_member() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

pub fn projectibility_json(loaded: &LoadedSystem, r: &ProjectibilityReport) -> Value {
    let names = loaded.constraint_names.iter().chain(&loaded.generator_names);
    let brackets: Vec<Value> = r
        .brackets
        .iter()
        .zip(names)
        .map(|((_, b, m), name)| json!({"with": name, "bracket": poly_json(b), "membership": membership_json(loaded, m)}))
        .collect();
    json!({"projectible": r.projectible(), "brackets": brackets})
}

pub fn master_json(s: &MasterFunction, r: &MasterReport) -> Value {
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|((k, n), p)| json!({"momentum": k, "resolution": n, "value": poly_json(p)}))
        .collect();
    let relations: Map<String, Value> = r.relations.iter().map(|(n, p)| (n.to_string(), poly_json(p))).collect();
    json!({
        "master_function": poly_json(&s.value),
        "closed": s.closed,
        "verified_degree_bound": s.verified_degree_bound,
        "residual": poly_json(&r.residual),
        "components": components,
        "relations": relations,
    })
}

pub fn cohomology_json(r: &CohomologyReport) -> Value {
    let t = &r.truncation;
    json!({
        "graded_by": t.degree_kind.name(),
        "degree": t.degree,
        "ghost": t.ghost,
        "base_degree": t.base_degree,
        "source_dim": r.source_dim,
        "kernel_dim": r.kernel_dim,
        "image_dim": r.image_dim,
        "dimension": r.dimension,
        "representatives": r.representatives.iter().map(poly_json).collect::<Vec<_>>(),
        "bound_too_small": r.bound_too_small,
    })
}

/// A master function completed from the document's data, shared by the
/// checks that need one.
struct Completion {
    result: std::result::Result<(MasterFunction, MasterReport), String>,
}

fn complete(loaded: &LoadedSystem, bounds: Bounds) -> Result<Completion> {
    let sys = &loaded.system;
    match sys.complete_master(&sys.assemble_s0(), bounds.max_res, bounds.deg) {
        Ok(s) => {
            let r = sys.check_master(&s.value)?;
            Ok(Completion { result: Ok((s, r)) })
        }
        Err(Error::NoSolutionAtBound { residual, .. }) => Ok(Completion { result: Err(residual) }),
        Err(e) => Err(e),
    }
}

/// Runs the requested checks (all applicable ones if `checks` is empty).
pub fn verify(loaded: &LoadedSystem, checks: &[String], bounds: Bounds) -> Result<Report> {
    let sys = &loaded.system;
    let spec = sys.spec();
    let br = sys.brackets();
    let wanted: Vec<&str> = if checks.is_empty() {
        CHECKS.to_vec()
    } else {
        checks.iter().map(String::as_str).collect()
    };
    let mut report = Report::new("verify");
    let mut completion: Option<Completion> = None;
    for check in wanted {
        let outcome = match check {
            "structure" => {
                let mut verdict = Verdict::Pass;
                let mut pairs = Vec::new();
                let given = spec.witnesses.as_ref().map(|w| &w.pairs);
                for a in 0..spec.generators.len() {
                    for b in a + 1..spec.generators.len() {
                        let bracket = br.schouten(&spec.generators[a], &spec.generators[b])?;
                        let label = format!("{},{}", loaded.generator_names[a], loaded.generator_names[b]);
                        let entry = if given.is_some_and(|g| g.contains_key(&(a, b))) {
                            json!({"pair": label, "bracket": poly_json(&bracket), "witness": "given", "residual": "0"})
                        } else {
                            let m = sys.ideal_membership(&bracket, bounds.deg)?;
                            verdict = verdict.max(membership_verdict(&m));
                            json!({"pair": label, "bracket": poly_json(&bracket), "membership": membership_json(loaded, &m)})
                        };
                        pairs.push(entry);
                    }
                }
                CheckOutcome::new(check, verdict, json!({ "pairs": pairs }))
            }
            "jacobi" => match &spec.bivector {
                None => continue,
                Some(p) => {
                    let pp = br.schouten(p, p)?;
                    let m = sys.ideal_membership(&pp, bounds.deg)?;
                    CheckOutcome::new(
                        check,
                        membership_verdict(&m),
                        json!({"bracket": poly_json(&pp), "membership": membership_json(loaded, &m)}),
                    )
                }
            },
            "projectible" => {
                let mut verdict = Verdict::Pass;
                let mut items = Map::new();
                let named = [
                    (loaded.bivector_name.as_ref(), spec.bivector.as_ref()),
                    (loaded.dynamics_name.as_ref(), spec.dynamics.as_ref()),
                ];
                for (name, u) in named {
                    let (Some(name), Some(u)) = (name, u) else { continue };
                    let r = sys.check_projectible(u, bounds.deg, None)?;
                    if !r.projectible() {
                        verdict = verdict.max(Verdict::Inconclusive);
                    }
                    items.insert(name.clone(), projectibility_json(loaded, &r));
                }
                if let (Some(p), Some(v)) = (&spec.bivector, &spec.dynamics) {
                    let vp = br.schouten(v, p)?;
                    let entry = if vp.is_zero() {
                        json!({"bracket": "0"})
                    } else {
                        let m = sys.ideal_membership(&vp, bounds.deg)?;
                        verdict = verdict.max(membership_verdict(&m));
                        json!({"bracket": poly_json(&vp), "membership": membership_json(loaded, &m)})
                    };
                    items.insert("dynamics_bivector".into(), entry);
                }
                if items.is_empty() {
                    continue;
                }
                CheckOutcome::new(check, verdict, Value::Object(items))
            }
            "master" => {
                let c = completion.get_or_insert(complete(loaded, bounds)?);
                match &c.result {
                    Err(residual) => {
                        CheckOutcome::new(check, Verdict::Inconclusive, json!({"no_solution_at_bound": bounds.deg, "residual": residual}))
                    }
                    Ok((s, r)) => {
                        let mut detail = master_json(s, r);
                        let mut verdict = if r.passed() { Verdict::Pass } else { Verdict::Inconclusive };
                        if let (Some(v), true) = (&spec.dynamics, r.passed()) {
                            let d = match sys.complete_dynamics(v, &s.value, bounds.max_res, bounds.deg) {
                                Ok(done) => {
                                    let res = br.odd(&s.value, &done.value)?;
                                    if !res.is_zero() {
                                        verdict = verdict.max(Verdict::Inconclusive);
                                    }
                                    json!({"vector_field": poly_json(&done.value), "residual": poly_json(&res)})
                                }
                                Err(Error::NoSolutionAtBound { residual, .. }) => {
                                    verdict = verdict.max(Verdict::Inconclusive);
                                    json!({"no_solution_at_bound": bounds.deg, "residual": residual})
                                }
                                Err(e) => return Err(e),
                            };
                            detail["dynamics"] = d;
                        }
                        CheckOutcome::new(check, verdict, detail)
                    }
                }
            }
            "lift" => {
                let c = completion.get_or_insert(complete(loaded, bounds)?);
                match &c.result {
                    Ok((s, r)) => {
                        let psi = sys.lift(&s.value)?;
                        let pp = br.even(&psi, &psi)?;
                        let verdict = match (r.passed(), pp.is_zero()) {
                            (true, true) => Verdict::Pass,
                            (true, false) | (false, true) => Verdict::Fail,
                            (false, false) => Verdict::Inconclusive,
                        };
                        CheckOutcome::new(check, verdict, json!({"psi": poly_json(&psi), "psi_psi": poly_json(&pp)}))
                    }
                    Err(residual) => {
                        CheckOutcome::new(check, Verdict::Inconclusive, json!({"no_master_function": residual}))
                    }
                }
            }
            "forms" => {
                if loaded.forms.is_empty() {
                    continue;
                }
                let mut verdict = Verdict::Pass;
                let mut items = Map::new();
                for (name, omega) in &loaded.forms {
                    let mut d = Map::new();
                    if let Some(v) = &spec.dynamics {
                        let lie = sys.lie_derivative_form(v, omega)?;
                        verdict = verdict.max(Verdict::zero(&lie));
                        d.insert("interior_product".into(), poly_json(&sys.interior_product(v, omega)?));
                        d.insert("lie_derivative".into(), poly_json(&lie));
                    }
                    let mut gauge = Map::new();
                    for (g, r) in loaded.generator_names.iter().zip(&spec.generators) {
                        let lie = sys.lie_derivative_form(r, omega)?;
                        verdict = verdict.max(Verdict::zero(&lie));
                        gauge.insert(g.clone(), poly_json(&lie));
                    }
                    d.insert("gauge_lie_derivatives".into(), Value::Object(gauge));
                    items.insert(name.clone(), Value::Object(d));
                }
                CheckOutcome::new(check, verdict, Value::Object(items))
            }
            "observables" => {
                if loaded.observables.is_empty() {
                    continue;
                }
                let mut verdict = Verdict::Pass;
                let mut items = Vec::new();
                for f in &loaded.observables {
                    let mut d = BTreeMap::new();
                    d.insert("function".to_string(), poly_json(f));
                    let fields = spec.dynamics.iter().map(|v| ("flow".to_string(), v)).chain(
                        loaded.generator_names.iter().cloned().zip(&spec.generators),
                    );
                    for (label, v) in fields {
                        let df = sys.lie_derivative_form(v, f)?;
                        verdict = verdict.max(Verdict::zero(&df));
                        d.insert(label, poly_json(&df));
                    }
                    items.push(json!(d));
                }
                CheckOutcome::new(check, verdict, json!({ "functions": items }))
            }
            other => return Err(Error::InvalidSpec(format!("unknown check `{other}`"))),
        };
        report.outcomes.push(outcome);
    }
    Ok(report)
}
