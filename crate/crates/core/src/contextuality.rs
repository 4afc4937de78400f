//! Observable constraint systems and the two ways of reading their laws.
//!
//! Under the classical principle (MCP) every law holds in every context,
//! so one global value assignment must satisfy all laws at once. Under the
//! generalized principle (MGP) a law constrains values only where it can
//! be checked, so each law needs a satisfying assignment over its own
//! context and nothing ties the laws together.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextualityError {
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("assignment does not cover observable `{0}`")]
    Missing(String),
    #[error("value {value} is outside the domain of `{observable}`")]
    OutOfDomain { observable: String, value: i64 },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
}

pub type Result<T> = std::result::Result<T, ContextualityError>;

/// Assignment spaces up to this size are enumerated exhaustively.
pub const AUDIT_LIMIT: u128 = 1_000_000;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observable {
    pub name: String,
    /// Tried in this order.
    pub domain: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Context {
    pub name: String,
    pub observables: Vec<String>,
}

/// Supported constraint forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum LawForm {
    /// `Σ c_i v_i = target`, all `c_i = 1` when omitted.
    Sum {
        target: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coefficients: Option<Vec<i64>>,
    },
    /// `Π v_i = target` over `{+1, -1}`.
    Product { target: i64 },
    /// Allowed value tuples.
    Table { allowed: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Law {
    pub name: String,
    pub context: String,
    pub observables: Vec<String>,
    #[serde(flatten)]
    pub form: LawForm,
}

impl Law {
    fn holds(&self, values: &[i64]) -> bool {
        match &self.form {
            LawForm::Sum {
                target,
                coefficients,
            } => {
                let s: i64 = match coefficients {
                    Some(c) => c.iter().zip(values).map(|(c, v)| c * v).sum(),
                    None => values.iter().sum(),
                };
                s == *target
            }
            LawForm::Product { target } => values.iter().product::<i64>() == *target,
            LawForm::Table { allowed } => allowed.iter().any(|row| row.as_slice() == values),
        }
    }

    /// The target of a sum or product law.
    pub fn target(&self) -> Option<i64> {
        match &self.form {
            LawForm::Sum { target, .. } | LawForm::Product { target } => Some(*target),
            LawForm::Table { .. } => None,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let obs = &self.observables;
        match &self.form {
            LawForm::Sum {
                target,
                coefficients,
            } => {
                let terms: Vec<String> = match coefficients {
                    Some(c) => c.iter().zip(obs).map(|(c, o)| format!("{c}*{o}")).collect(),
                    None => obs.clone(),
                };
                write!(f, "{}: {} = {target}", self.name, terms.join(" + "))
            }
            LawForm::Product { target } => {
                write!(f, "{}: {} = {target:+}", self.name, obs.join(" * "))
            }
            LawForm::Table { allowed } => write!(
                f,
                "{}: ({}) in {} allowed tuple(s)",
                self.name,
                obs.join(", "),
                allowed.len()
            ),
        }
    }
}

/// Observables with finite domains, compatible contexts and laws bound
/// to contexts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemDoc", into = "SystemDoc")]
pub struct ObservableConstraintSystem {
    observables: Vec<Observable>,
    contexts: Vec<Context>,
    laws: Vec<Law>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub contexts: Vec<Context>,
    #[serde(default)]
    pub laws: Vec<Law>,
}

impl TryFrom<SystemDoc> for ObservableConstraintSystem {
    type Error = ContextualityError;

    fn try_from(d: SystemDoc) -> Result<Self> {
        ObservableConstraintSystem::new(d.observables, d.contexts, d.laws)
    }
}

impl From<ObservableConstraintSystem> for SystemDoc {
    fn from(s: ObservableConstraintSystem) -> Self {
        SystemDoc {
            observables: s.observables,
            contexts: s.contexts,
            laws: s.laws,
        }
    }
}

impl ObservableConstraintSystem {
    pub fn new(
        observables: Vec<Observable>,
        contexts: Vec<Context>,
        laws: Vec<Law>,
    ) -> Result<Self> {
        let invalid = |m: String| Err(ContextualityError::Invalid(m));
        let mut names = BTreeSet::new();
        for o in &observables {
            if !names.insert(o.name.as_str()) {
                return invalid(format!("observable `{}` declared twice", o.name));
            }
            if o.domain.is_empty() {
                return invalid(format!("observable `{}` has an empty domain", o.name));
            }
            let distinct: BTreeSet<_> = o.domain.iter().collect();
            if distinct.len() != o.domain.len() {
                return invalid(format!("domain of `{}` repeats a value", o.name));
            }
        }
        let mut cnames = BTreeSet::new();
        for c in &contexts {
            if !cnames.insert(c.name.as_str()) {
                return invalid(format!("context `{}` declared twice", c.name));
            }
            if let Some(o) = c.observables.iter().find(|o| !names.contains(o.as_str())) {
                return invalid(format!(
                    "context `{}` mentions unknown observable `{o}`",
                    c.name
                ));
            }
        }
        let mut lnames = BTreeSet::new();
        for l in &laws {
            if !lnames.insert(l.name.as_str()) {
                return invalid(format!("law `{}` declared twice", l.name));
            }
            let Some(ctx) = contexts.iter().find(|c| c.name == l.context) else {
                return invalid(format!(
                    "law `{}` is bound to unknown context `{}`",
                    l.name, l.context
                ));
            };
            let distinct: BTreeSet<_> = l.observables.iter().collect();
            if distinct.len() != l.observables.len() {
                return invalid(format!("law `{}` repeats an observable", l.name));
            }
            if let Some(o) = l.observables.iter().find(|o| !ctx.observables.contains(o)) {
                return invalid(format!(
                    "law `{}` uses `{o}`, which is not in its context `{}`",
                    l.name, l.context
                ));
            }
            match &l.form {
                LawForm::Sum {
                    coefficients: Some(c),
                    ..
                } if c.len() != l.observables.len() => {
                    return invalid(format!(
                        "law `{}` has the wrong number of coefficients",
                        l.name
                    ));
                }
                LawForm::Product { .. } => {
                    for o in &l.observables {
                        let dom = &observables
                            .iter()
                            .find(|x| &x.name == o)
                            .expect("checked")
                            .domain;
                        if dom.iter().any(|v| v.abs() != 1) {
                            return invalid(format!(
                                "product law `{}` needs `{o}` to take values in {{+1, -1}}",
                                l.name
                            ));
                        }
                    }
                }
                LawForm::Table { allowed }
                    if allowed.iter().any(|r| r.len() != l.observables.len()) =>
                {
                    return invalid(format!(
                        "law `{}` has a table row of the wrong width",
                        l.name
                    ));
                }
                _ => {}
            }
        }
        Ok(ObservableConstraintSystem {
            observables,
            contexts,
            laws,
        })
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    fn observable_index(&self, name: &str) -> usize {
        self.observables
            .iter()
            .position(|o| o.name == name)
            .expect("validated observable")
    }

    fn context(&self, name: &str) -> &Context {
        self.contexts
            .iter()
            .find(|c| c.name == name)
            .expect("validated context")
    }

    /// Copy with the target of a sum or product law replaced.
    pub fn with_target(&self, law: &str, target: i64) -> Result<Self> {
        let mut out = self.clone();
        let l = out
            .laws
            .iter_mut()
            .find(|l| l.name == law)
            .ok_or_else(|| ContextualityError::UnknownLaw(law.to_string()))?;
        match &mut l.form {
            LawForm::Sum { target: t, .. } | LawForm::Product { target: t } => *t = target,
            LawForm::Table { .. } => {
                return Err(ContextualityError::Invalid(format!(
                    "law `{law}` has no target"
                )))
            }
        }
        Ok(out)
    }

    /// Number of global assignments.
    pub fn assignment_count(&self) -> u128 {
        self.observables
            .iter()
            .map(|o| o.domain.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }
}

pub type Assignment = BTreeMap<String, i64>;

/// Evaluates a law under an assignment covering its observables.
pub fn check_law(
    assignment: &Assignment,
    law: &Law,
    sys: &ObservableConstraintSystem,
) -> Result<bool> {
    let mut values = Vec::with_capacity(law.observables.len());
    for o in &law.observables {
        let v = *assignment
            .get(o)
            .ok_or_else(|| ContextualityError::Missing(o.clone()))?;
        let dom = &sys.observables[sys.observable_index(o)].domain;
        if !dom.contains(&v) {
            return Err(ContextualityError::OutOfDomain {
                observable: o.clone(),
                value: v,
            });
        }
        values.push(v);
    }
    Ok(law.holds(&values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mcp,
    Mgp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Mcp => "MCP",
            Mode::Mgp => "MGP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
    /// Search stopped at the node budget; nothing is concluded.
    #[serde(rename = "BUDGET_EXHAUSTED")]
    BudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::BudgetExhausted => "BUDGET_EXHAUSTED",
        })
    }
}

/// Exhaustive count over all global assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub assignments: u128,
    pub satisfying: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub satisfiable: bool,
    /// First satisfying assignment of the law's context, in domain order.
    pub witness: Option<Assignment>,
    pub checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub mode: Mode,
    pub status: Status,
    pub assignment: Option<Assignment>,
    /// Search nodes (MCP) or tuples examined (MGP).
    pub nodes: u64,
    pub audit: Option<Audit>,
    pub per_law: Vec<LawResult>,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

struct Search<'a> {
    sys: &'a ObservableConstraintSystem,
    law_vars: Vec<Vec<usize>>,
    var_laws: Vec<Vec<usize>>,
    values: Vec<Option<i64>>,
    nodes: u64,
    budget: u64,
}

struct Exhausted;

impl<'a> Search<'a> {
    fn new(sys: &'a ObservableConstraintSystem, budget: u64) -> Self {
        let n = sys.observables.len();
        let law_vars: Vec<Vec<usize>> = sys
            .laws
            .iter()
            .map(|l| {
                l.observables
                    .iter()
                    .map(|o| sys.observable_index(o))
                    .collect()
            })
            .collect();
        let mut var_laws = vec![Vec::new(); n];
        for (li, vars) in law_vars.iter().enumerate() {
            for &v in vars {
                var_laws[v].push(li);
            }
        }
        Search {
            sys,
            law_vars,
            var_laws,
            values: vec![None; n],
            nodes: 0,
            budget,
        }
    }

    /// Whether some completion of the current partial assignment can
    /// still satisfy the law.
    fn feasible(&self, li: usize) -> bool {
        let law = &self.sys.laws[li];
        let vars = &self.law_vars[li];
        if vars.iter().all(|&v| self.values[v].is_some()) {
            let vals: Vec<i64> = vars
                .iter()
                .map(|&v| self.values[v].expect("assigned"))
                .collect();
            return law.holds(&vals);
        }
        let dom = |v: usize| &self.sys.observables[v].domain;
        match &law.form {
            LawForm::Table { allowed } => allowed.iter().any(|row| {
                vars.iter()
                    .zip(row)
                    .all(|(&v, x)| self.values[v].is_none_or(|y| y == *x) && dom(v).contains(x))
            }),
            LawForm::Sum {
                target,
                coefficients,
            } => {
                let (mut lo, mut hi) = (0i64, 0i64);
                for (i, &v) in vars.iter().enumerate() {
                    let c = coefficients.as_ref().map_or(1, |c| c[i]);
                    match self.values[v] {
                        Some(x) => {
                            lo += c * x;
                            hi += c * x;
                        }
                        None => {
                            let terms = dom(v).iter().map(|x| c * x);
                            lo += terms.clone().min().expect("nonempty domain");
                            hi += terms.max().expect("nonempty domain");
                        }
                    }
                }
                (lo..=hi).contains(target)
            }
            LawForm::Product { target } => {
                let mut reachable: BTreeSet<i64> = [1].into();
                for &v in vars {
                    let choices: Vec<i64> = match self.values[v] {
                        Some(x) => vec![x],
                        None => dom(v).clone(),
                    };
                    reachable = reachable
                        .iter()
                        .flat_map(|r| choices.iter().map(move |c| r * c))
                        .collect();
                }
                reachable.contains(target)
            }
        }
    }

    fn options(&mut self, v: usize) -> Vec<i64> {
        let mut out = Vec::new();
        for &x in &self.sys.observables[v].domain {
            self.values[v] = Some(x);
            if self.var_laws[v].iter().all(|&li| self.feasible(li)) {
                out.push(x);
            }
        }
        self.values[v] = None;
        out
    }

    fn run(&mut self) -> std::result::Result<bool, Exhausted> {
        let mut best: Option<(usize, Vec<i64>)> = None;
        for v in 0..self.values.len() {
            if self.values[v].is_some() {
                continue;
            }
            let opts = self.options(v);
            if opts.is_empty() {
                return Ok(false);
            }
            let better = match &best {
                None => true,
                Some((b, bo)) => {
                    opts.len() < bo.len()
                        || (opts.len() == bo.len()
                            && self.var_laws[v].len() > self.var_laws[*b].len())
                }
            };
            if better {
                best = Some((v, opts));
            }
        }
        let Some((v, opts)) = best else {
            return Ok(true);
        };
        for x in opts {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Exhausted);
            }
            self.values[v] = Some(x);
            if self.run()? {
                return Ok(true);
            }
        }
        self.values[v] = None;
        Ok(false)
    }
}

/// Visits every tuple of the given domains, last position fastest.
fn for_each_tuple(domains: &[&[i64]], mut f: impl FnMut(&[i64]) -> bool) {
    let mut idx = vec![0usize; domains.len()];
    let mut tuple: Vec<i64> = domains.iter().map(|d| d[0]).collect();
    loop {
        if !f(&tuple) {
            return;
        }
        let mut k = domains.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                tuple[k] = domains[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = domains[k][0];
        }
    }
}

/// Counts global assignments satisfying every law; `None` above
/// [`AUDIT_LIMIT`].
pub fn brute_force_audit(sys: &ObservableConstraintSystem) -> Option<Audit> {
    let total = sys.assignment_count();
    if total > AUDIT_LIMIT {
        return None;
    }
    let domains: Vec<&[i64]> = sys
        .observables
        .iter()
        .map(|o| o.domain.as_slice())
        .collect();
    let law_vars: Vec<Vec<usize>> = sys
        .laws
        .iter()
        .map(|l| {
            l.observables
                .iter()
                .map(|o| sys.observable_index(o))
                .collect()
        })
        .collect();
    let mut satisfying = 0u128;
    let mut buf = Vec::new();
    for_each_tuple(&domains, |t| {
        let ok = sys.laws.iter().zip(&law_vars).all(|(l, vars)| {
            buf.clear();
            buf.extend(vars.iter().map(|&v| t[v]));
            l.holds(&buf)
        });
        satisfying += u128::from(ok);
        true
    });
    Some(Audit {
        assignments: total,
        satisfying,
    })
}

/// One global assignment for all laws, by backtracking with forward
/// checking (smallest remaining domain first, ties to the variable in
/// more laws, then declaration order; values in domain order). UNSAT
/// results carry an exhaustive audit when the space is small enough;
/// `audit` requests one for SAT results too.
pub fn mcp_solve(sys: &ObservableConstraintSystem, budget: u64, audit: bool) -> SolveResult {
    let mut s = Search::new(sys, budget);
    let (status, assignment) = match s.run() {
        Ok(true) => {
            let a = sys
                .observables
                .iter()
                .zip(&s.values)
                .map(|(o, v)| (o.name.clone(), v.expect("complete")))
                .collect();
            (Status::Sat, Some(a))
        }
        Ok(false) => (Status::Unsat, None),
        Err(Exhausted) => (Status::BudgetExhausted, None),
    };
    let audit = if audit || status == Status::Unsat {
        brute_force_audit(sys)
    } else {
        None
    };
    SolveResult {
        mode: Mode::Mcp,
        status,
        assignment,
        nodes: s.nodes,
        audit,
        per_law: Vec::new(),
    }
}

/// Each law on its own: the first assignment of its context's observables
/// (law observables enumerated in domain order, the rest at their first
/// value) that satisfies it.
pub fn mgp_check(sys: &ObservableConstraintSystem) -> SolveResult {
    let mut per_law = Vec::with_capacity(sys.laws.len());
    let mut nodes = 0u64;
    for law in &sys.laws {
        let domains: Vec<&[i64]> = law
            .observables
            .iter()
            .map(|o| sys.observables[sys.observable_index(o)].domain.as_slice())
            .collect();
        let mut witness = None;
        let mut checked = 0u64;
        for_each_tuple(&domains, |t| {
            checked += 1;
            if law.holds(t) {
                witness = Some(t.to_vec());
                false
            } else {
                true
            }
        });
        nodes += checked;
        let witness = witness.map(|t| {
            let mut a: Assignment = sys
                .context(&law.context)
                .observables
                .iter()
                .map(|o| {
                    (
                        o.clone(),
                        sys.observables[sys.observable_index(o)].domain[0],
                    )
                })
                .collect();
            for (o, v) in law.observables.iter().zip(t) {
                a.insert(o.clone(), v);
            }
            a
        });
        per_law.push(LawResult {
            law: law.name.clone(),
            satisfiable: witness.is_some(),
            witness,
            checked,
        });
    }
    let status = if per_law.iter().all(|l| l.satisfiable) {
        Status::Sat
    } else {
        Status::Unsat
    };
    SolveResult {
        mode: Mode::Mgp,
        status,
        assignment: None,
        nodes,
        audit: None,
        per_law,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    VacuouslySatisfiable,
    NoContradiction,
    ContextualUnderR,
    LawUnsatisfiable,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::VacuouslySatisfiable => "vacuously satisfiable",
            Classification::NoContradiction => "no contradiction under either mode",
            Classification::ContextualUnderR => {
                "contextual under R, noncontextual-value-assignable per-law under MGP"
            }
            Classification::LawUnsatisfiable => {
                "some law has no satisfying values in its own context"
            }
            Classification::Inconclusive => "inconclusive: search budget exhausted",
        })
    }
}

/// The contextuality argument as a checked narrative.
#[derive(Debug, Clone, Serialize)]
pub struct ContextualityReport {
    /// Observables whose values the argument reasons about.
    pub observables: Vec<String>,
    /// The laws, each within one context of compatible observables.
    pub laws: Vec<String>,
    pub assumption: String,
    pub contradiction: String,
    pub conclusion: String,
    pub classification: Classification,
    pub classification_text: String,
    pub mcp: SolveResult,
    pub mgp: SolveResult,
}

pub fn contextuality_report(sys: &ObservableConstraintSystem, budget: u64) -> ContextualityReport {
    let mcp = mcp_solve(sys, budget, false);
    let mgp = mgp_check(sys);
    let classification = if sys.laws.is_empty() {
        Classification::VacuouslySatisfiable
    } else {
        match (mcp.status, mgp.status) {
            (Status::BudgetExhausted, _) => Classification::Inconclusive,
            (Status::Sat, _) => Classification::NoContradiction,
            (Status::Unsat, Status::Sat) => Classification::ContextualUnderR,
            (Status::Unsat, _) => Classification::LawUnsatisfiable,
        }
    };
    let assumption = "values of all observables are fixed independently of which context is \
                      measured, and every law holds in every context (assumption R): one global \
                      assignment must satisfy all laws"
        .to_string();
    let contradiction = match (&mcp.status, &mcp.audit) {
        (Status::Unsat, Some(a)) => format!(
            "no global assignment satisfies all {} laws ({} of {} assignments checked exhaustively satisfy them)",
            sys.laws.len(),
            a.satisfying,
            a.assignments
        ),
        (Status::Unsat, None) => format!(
            "no global assignment satisfies all {} laws (complete search, {} nodes)",
            sys.laws.len(),
            mcp.nodes
        ),
        (Status::Sat, _) => "no contradiction: a global assignment satisfies every law".to_string(),
        (Status::BudgetExhausted, _) => format!(
            "undecided: the search stopped after {} nodes",
            mcp.nodes
        ),
    };
    let conclusion = match classification {
        Classification::ContextualUnderR => format!(
            "the contradiction refutes context independence only together with R; dropping R in \
             favour of per-context validity (MGP) removes it, since each of the {} laws is \
             satisfiable where it can be checked",
            sys.laws.len()
        ),
        Classification::LawUnsatisfiable => {
            let bad: Vec<&str> = mgp
                .per_law
                .iter()
                .filter(|l| !l.satisfiable)
                .map(|l| l.law.as_str())
                .collect();
            format!(
                "the contradiction survives without R: unsatisfiable law(s) {}",
                bad.join(", ")
            )
        }
        Classification::NoContradiction => {
            "nothing to conclude: the laws admit a context-independent assignment".to_string()
        }
        Classification::VacuouslySatisfiable => "no laws, nothing to conclude".to_string(),
        Classification::Inconclusive => "no conclusion within the budget".to_string(),
    };
    ContextualityReport {
        observables: sys.observables.iter().map(|o| o.name.clone()).collect(),
        laws: sys.laws.iter().map(|l| l.to_string()).collect(),
        assumption,
        contradiction,
        conclusion,
        classification_text: classification.to_string(),
        classification,
        mcp,
        mgp,
    }
}

/// Standard instances.
pub mod instances {
    use super::*;

    fn pm(names: &[&str]) -> Vec<Observable> {
        names
            .iter()
            .map(|n| Observable {
                name: n.to_string(),
                domain: vec![1, -1],
            })
            .collect()
    }

    fn product_law(name: &str, obs: &[&str], target: i64) -> (Context, Law) {
        let observables: Vec<String> = obs.iter().map(|s| s.to_string()).collect();
        (
            Context {
                name: name.to_string(),
                observables: observables.clone(),
            },
            Law {
                name: name.to_string(),
                context: name.to_string(),
                observables,
                form: LawForm::Product { target },
            },
        )
    }

    fn build(
        observables: Vec<Observable>,
        parts: Vec<(Context, Law)>,
    ) -> ObservableConstraintSystem {
        let (contexts, laws) = parts.into_iter().unzip();
        ObservableConstraintSystem::new(observables, contexts, laws).expect("valid instance")
    }

    /// Two-qubit square: rows multiply to +1, columns to +1, +1, -1.
    pub fn mermin_peres() -> ObservableConstraintSystem {
        let grid = [["XI", "IX", "XX"], ["IY", "YI", "YY"], ["XY", "YX", "ZZ"]];
        let mut parts = Vec::new();
        for (i, row) in grid.iter().enumerate() {
            parts.push(product_law(&format!("row{}", i + 1), row, 1));
        }
        for j in 0..3 {
            let col = [grid[0][j], grid[1][j], grid[2][j]];
            parts.push(product_law(
                &format!("col{}", j + 1),
                &col,
                if j == 2 { -1 } else { 1 },
            ));
        }
        build(pm(&grid.concat()), parts)
    }

    pub fn ghz_mermin() -> ObservableConstraintSystem {
        build(
            pm(&["X1", "X2", "X3", "Y1", "Y2", "Y3"]),
            vec![
                product_law("XYY", &["X1", "Y2", "Y3"], 1),
                product_law("YXY", &["Y1", "X2", "Y3"], 1),
                product_law("YYX", &["Y1", "Y2", "X3"], 1),
                product_law("XXX", &["X1", "X2", "X3"], -1),
            ],
        )
    }

    /// Three spin-1 triads sharing directions pairwise; squared spin
    /// components in `{0, 1}` sum to 2 on each triad. Satisfiable.
    pub fn spin1_triads_demo() -> ObservableConstraintSystem {
        let observables = ["a", "b", "c", "d", "e", "f"]
            .iter()
            .map(|n| Observable {
                name: n.to_string(),
                domain: vec![0, 1],
            })
            .collect();
        let triads = [
            ("t1", ["a", "b", "c"]),
            ("t2", ["c", "d", "e"]),
            ("t3", ["e", "f", "a"]),
        ];
        let parts = triads
            .iter()
            .map(|(name, obs)| {
                let observables: Vec<String> = obs.iter().map(|s| s.to_string()).collect();
                (
                    Context {
                        name: name.to_string(),
                        observables: observables.clone(),
                    },
                    Law {
                        name: name.to_string(),
                        context: name.to_string(),
                        observables,
                        form: LawForm::Sum {
                            target: 2,
                            coefficients: None,
                        },
                    },
                )
            })
            .collect();
        build(observables, parts)
    }
}
