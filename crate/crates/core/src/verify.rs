//! One verification per claim about the game: check the hypotheses, run
//! the computation, and derive the verdict from the computed values alone.
//!
//! Reports are plain data. [`TheoremReport::recheck`] re-evaluates every
//! comparison from the stored numbers, so a consumer never has to trust the
//! stored verdict.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::connectivity::{
    disjoint_paths, find_perfect_matching, is_k_connected, is_k_connected_within, min_degree, min_degree_within,
    vertex_connectivity, vertex_connectivity_within, Matching,
};
use crate::forest::{
    beta_context, build_forest_traced, spanning_forest_13_exists, split_betas, BetaContext, ForestError,
    ForestMode,
};
use crate::graph::{components, independence_number, independence_number_within, maximal_independent_subsets, Graph};
use crate::library::{self, SpecError};
use crate::set::VertexSet;
use crate::solver::{SolveError, SolveOptions, Solver};

/// Exact nonnegative-denominator fraction, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Ratio { num: sign * num / g, den: sign * den / g }
    }

    pub fn int(v: i64) -> Ratio {
        Ratio { num: v, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn plus(self, other: Ratio) -> Ratio {
        Ratio::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Integers serialize as numbers, proper fractions as `"a/b"` strings.
impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.den == 1 {
            s.serialize_i64(self.num)
        } else {
            s.collect_str(self)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(Ratio),
    Flag(bool),
}

impl From<usize> for Quantity {
    fn from(v: usize) -> Self {
        Quantity::Number(Ratio::int(v as i64))
    }
}

impl From<u32> for Quantity {
    fn from(v: u32) -> Self {
        Quantity::Number(Ratio::int(v as i64))
    }
}

impl From<Ratio> for Quantity {
    fn from(v: Ratio) -> Self {
        Quantity::Number(v)
    }
}

impl From<bool> for Quantity {
    fn from(v: bool) -> Self {
        Quantity::Flag(v)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Number(r) => r.fmt(f),
            Quantity::Flag(b) => b.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtLeast,
    GreaterThan,
    AtMost,
    Equal,
    Iff,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtLeast => ">=",
            Relation::GreaterThan => ">",
            Relation::AtMost => "<=",
            Relation::Equal => "==",
            Relation::Iff => "<=>",
        }
    }

    /// `computed <relation> stated`; mismatched kinds never hold.
    pub fn evaluate(self, computed: Quantity, stated: Quantity) -> bool {
        use Quantity::{Flag, Number};
        match (self, computed, stated) {
            (Relation::AtLeast, Number(a), Number(b)) => a >= b,
            (Relation::GreaterThan, Number(a), Number(b)) => a > b,
            (Relation::AtMost, Number(a), Number(b)) => a <= b,
            (Relation::Equal, a, b) => a == b,
            (Relation::Iff, Flag(a), Flag(b)) => a == b,
            _ => false,
        }
    }
}

/// One comparison between a computed value and the claimed bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: Option<Quantity>,
    pub relation: Relation,
    pub stated: Quantity,
    /// `None` when the computation was skipped.
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl Check {
    pub fn evaluate(name: &str, computed: impl Into<Quantity>, relation: Relation, stated: impl Into<Quantity>) -> Check {
        let (computed, stated) = (computed.into(), stated.into());
        Check {
            name: name.to_string(),
            computed: Some(computed),
            relation,
            stated,
            holds: Some(relation.evaluate(computed, stated)),
            skipped: None,
        }
    }

    pub fn skip(name: &str, relation: Relation, stated: impl Into<Quantity>, reason: String) -> Check {
        Check {
            name: name.to_string(),
            computed: None,
            relation,
            stated: stated.into(),
            holds: None,
            skipped: Some(reason),
        }
    }

    /// Re-evaluates the relation from the raw values.
    pub fn recompute(&self) -> Option<bool> {
        self.computed.map(|c| self.relation.evaluate(c, self.stated))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub evidence: String,
}

impl Hypothesis {
    fn new(name: &str, holds: bool, evidence: impl Into<String>) -> Hypothesis {
        Hypothesis { name: name.to_string(), holds, evidence: evidence.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HypothesesUnmet,
    /// Every conclusion was skipped for lack of budget.
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "FAILS",
            Verdict::HypothesesUnmet => "hypotheses unmet",
            Verdict::Skipped => "skipped",
        })
    }
}

fn verdict_of(hypotheses: &[Hypothesis], results: impl IntoIterator<Item = Option<bool>>) -> Verdict {
    if hypotheses.iter().any(|h| !h.holds) {
        return Verdict::HypothesesUnmet;
    }
    let mut any = false;
    for r in results {
        match r {
            Some(false) => return Verdict::Fails,
            Some(true) => any = true,
            None => {}
        }
    }
    if any {
        Verdict::Holds
    } else {
        Verdict::Skipped
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimId {
    Main,
    Nonsharp,
    TreeChar,
    Mpw,
    LemmaKconn,
    ForestPipeline,
}

impl ClaimId {
    pub const ALL: [ClaimId; 6] = [
        ClaimId::Main,
        ClaimId::Nonsharp,
        ClaimId::TreeChar,
        ClaimId::Mpw,
        ClaimId::LemmaKconn,
        ClaimId::ForestPipeline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Main => "main",
            ClaimId::Nonsharp => "nonsharp",
            ClaimId::TreeChar => "tree-char",
            ClaimId::Mpw => "mpw",
            ClaimId::LemmaKconn => "lemma-kconn",
            ClaimId::ForestPipeline => "forest-pipeline",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| VerifyError::Precondition(format!("unknown claim {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub explored: usize,
    pub total: usize,
}

impl Coverage {
    pub fn is_full(&self) -> bool {
        self.explored == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub claim: ClaimId,
    pub instance: String,
    pub n: usize,
    pub k: Option<usize>,
    pub hypotheses: Vec<Hypothesis>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    /// Whether the main bound is met with equality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, Value>,
}

impl TheoremReport {
    fn new(claim: ClaimId, inst: &Instance, k: Option<usize>) -> TheoremReport {
        TheoremReport {
            claim,
            instance: inst.name.clone(),
            n: inst.graph.n(),
            k,
            hypotheses: Vec::new(),
            checks: Vec::new(),
            verdict: Verdict::Skipped,
            sharp: None,
            coverage: None,
            artifacts: BTreeMap::new(),
        }
    }

    fn hypotheses_met(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    fn artifact(&mut self, key: &str, value: Value) {
        self.artifacts.insert(key.to_string(), value);
    }

    fn finish(mut self) -> TheoremReport {
        self.verdict = verdict_of(&self.hypotheses, self.checks.iter().map(|c| c.holds));
        self
    }

    /// The verdict recomputed from the raw check values.
    pub fn recheck(&self) -> Verdict {
        verdict_of(&self.hypotheses, self.checks.iter().map(Check::recompute))
    }

    /// True unless an applicable conclusion failed.
    pub fn passes(&self) -> bool {
        self.verdict != Verdict::Fails
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k.map(|k| format!(" k={k}")).unwrap_or_default();
        writeln!(f, "[{}] {} (n={}{}): {}", self.claim, self.instance, self.n, k, self.verdict)?;
        for h in &self.hypotheses {
            writeln!(f, "  hypothesis {}: {} ({})", h.name, if h.holds { "yes" } else { "no" }, h.evidence)?;
        }
        for c in &self.checks {
            match (&c.computed, &c.skipped) {
                (Some(v), _) => writeln!(
                    f,
                    "  {}: {} {} {} -> {}",
                    c.name,
                    v,
                    c.relation.symbol(),
                    c.stated,
                    if c.holds == Some(true) { "ok" } else { "FAIL" }
                )?,
                (None, reason) => writeln!(f, "  {}: {}", c.name, reason.as_deref().unwrap_or("skipped"))?,
            }
        }
        if let Some(sharp) = self.sharp {
            writeln!(f, "  sharp: {sharp}")?;
        }
        if let Some(cov) = self.coverage {
            writeln!(f, "  coverage: {}/{}", cov.explored, cov.total)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub solve: SolveOptions,
    /// Maximum number of (opening, reply) branches enumerated per report.
    pub budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { solve: SolveOptions::default(), budget: 100_000 }
    }
}

/// A named graph, optionally with the perfect matching to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub matching: Option<Matching>,
}

impl Instance {
    pub fn new(name: impl Into<String>, graph: Graph) -> Instance {
        Instance { name: name.into(), graph, matching: None }
    }

    /// Builtins use their canonical matching where one exists (the prism's
    /// three rungs).
    pub fn builtin(spec: &str) -> Result<Instance, SpecError> {
        let graph = library::builtin(spec)?;
        let matching = match spec {
            "prism" => Some(Matching::new(&graph, library::prism_matching()).expect("rungs match the prism")),
            _ => None,
        };
        Ok(Instance { name: spec.to_string(), graph, matching })
    }

    /// The given matching if it is perfect, else the first one found.
    pub fn perfect_matching(&self) -> Option<Matching> {
        match &self.matching {
            Some(m) if m.is_perfect_for(&self.graph) => Some(m.clone()),
            _ => find_perfect_matching(&self.graph),
        }
    }
}

/// Exact values, or the reason they could not be computed.
struct Exact {
    solver: Result<Solver, String>,
}

impl Exact {
    fn new(g: &Graph, opts: &SolveOptions) -> Result<Exact, VerifyError> {
        match Solver::for_graph(g, opts.clone()) {
            Ok(s) => Ok(Exact { solver: Ok(s) }),
            Err(e @ SolveError::CapExceeded { .. }) => Ok(Exact { solver: Err(format!("skipped: cap ({e})")) }),
            Err(e) => Err(e.into()),
        }
    }

    fn value(&mut self, r: VertexSet) -> Result<Result<u32, String>, VerifyError> {
        let solver = match &mut self.solver {
            Ok(s) => s,
            Err(reason) => return Ok(Err(reason.clone())),
        };
        match solver.value(r) {
            Ok(v) => Ok(Ok(v)),
            Err(e @ SolveError::Timeout { .. }) => {
                let reason = format!("skipped: timeout ({e})");
                self.solver = Err(reason.clone());
                Ok(Err(reason))
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn three_halves(n: usize) -> Ratio {
    Ratio::new(3 * n as i64, 2)
}

/// The three hypotheses of the main theorem; also returns the matching.
fn main_hypotheses(inst: &Instance, k: usize) -> (Vec<Hypothesis>, Option<Matching>) {
    let g = &inst.graph;
    let n = g.n();
    let kappa = vertex_connectivity(g);
    let matching = inst.perfect_matching();
    let hyps = vec![
        Hypothesis::new(
            &format!("{}-connected", 3 * k),
            is_k_connected(g, 3 * k),
            format!("vertex connectivity {kappa}, {n} vertices"),
        ),
        Hypothesis::new(&format!("n >= {}", 4 * k), n >= 4 * k, format!("n = {n}")),
        Hypothesis::new(
            "perfect matching",
            matching.is_some(),
            match &matching {
                Some(m) => format!("{:?}", m.pairs()),
                None => "none exists".to_string(),
            },
        ),
    ];
    (hyps, matching)
}

/// `3n/2 + k` when the main theorem's hypotheses hold for `k`, else `None`.
pub fn main_theorem_bound(inst: &Instance, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    let (hyps, _) = main_hypotheses(inst, k);
    hyps.iter().all(|h| h.holds).then(|| 3 * inst.graph.n() / 2 + k)
}

fn require_k(k: usize, min: usize) -> Result<(), VerifyError> {
    if k < min {
        return Err(VerifyError::Precondition(format!("k must be at least {min}, got {k}")));
    }
    Ok(())
}

/// Main theorem: `s̊(G) >= 3n/2 + k` for 3k-connected G with `n >= 4k` and
/// a perfect matching.
pub fn verify_main_theorem(inst: &Instance, k: usize, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    require_k(k, 1)?;
    let g = &inst.graph;
    let mut report = TheoremReport::new(ClaimId::Main, inst, Some(k));
    let (hyps, _) = main_hypotheses(inst, k);
    report.hypotheses = hyps;
    if !report.hypotheses_met() {
        return Ok(report.finish());
    }
    let bound = three_halves(g.n()).plus(Ratio::int(k as i64));
    let name = "s(G) >= 3n/2 + k";
    match Exact::new(g, &opts.solve)?.value(g.vertices())? {
        Ok(value) => {
            report.checks.push(Check::evaluate(name, value, Relation::AtLeast, bound));
            report.sharp = Some(Ratio::int(value as i64) == bound);
        }
        Err(reason) => report.checks.push(Check::skip(name, Relation::AtLeast, bound, reason)),
    }
    Ok(report.finish())
}

fn combinations(len: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            if len - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= len {
        go(0, len, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Every opening of `2k` matching pairs, in lexicographic order of pairs.
pub fn all_openings(matching: &Matching, k: usize) -> Vec<VertexSet> {
    let mut pairs = matching.pairs();
    pairs.sort();
    combinations(pairs.len(), 2 * k)
        .into_iter()
        .map(|choice| choice.iter().flat_map(|&i| [pairs[i].0, pairs[i].1]).collect())
        .collect()
}

/// Every (opening, Painter reply) pair, truncated to `budget`.
fn branches(g: &Graph, matching: &Matching, k: usize, budget: usize) -> (Vec<(VertexSet, VertexSet)>, Coverage) {
    let mut all = Vec::new();
    for opening in all_openings(matching, k) {
        for d in maximal_independent_subsets(g, opening).expect("openings are nonempty") {
            all.push((opening, d));
        }
    }
    let total = all.len();
    all.truncate(budget);
    let explored = all.len();
    (all, Coverage { explored, total })
}

fn has_cycle_within(g: &Graph, within: VertexSet) -> bool {
    g.edges_within(within).len() + components(g, within).len() > within.len()
}

/// Beyond k = 1 the bound is never attained: every G⁻ keeps minimum
/// degree at least k >= 2 and so contains a cycle.
pub fn verify_nonsharpness(inst: &Instance, k: usize, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    require_k(k, 2)?;
    let g = &inst.graph;
    let mut report = TheoremReport::new(ClaimId::Nonsharp, inst, Some(k));
    let (hyps, matching) = main_hypotheses(inst, k);
    report.hypotheses = hyps;
    if !report.hypotheses_met() {
        return Ok(report.finish());
    }
    let matching = matching.expect("hypothesis checked");
    report.checks.push(Check::evaluate("min degree >= 3k", min_degree(g), Relation::AtLeast, 3 * k));

    let (list, coverage) = branches(g, &matching, k, opts.budget);
    let mut min_deg = usize::MAX;
    let mut acyclic = 0usize;
    for &(_, d) in &list {
        let alive = g.vertices().difference(d);
        min_deg = min_deg.min(min_degree_within(g, alive));
        if !has_cycle_within(g, alive) {
            acyclic += 1;
        }
    }
    report.checks.push(Check::evaluate("min degree of every G-", min_deg, Relation::AtLeast, k));
    report.checks.push(Check::evaluate("acyclic G- count", acyclic, Relation::Equal, 0usize));
    report.coverage = Some(coverage);

    let bound = three_halves(g.n()).plus(Ratio::int(k as i64));
    let name = "s(G) > 3n/2 + k";
    match Exact::new(g, &opts.solve)?.value(g.vertices())? {
        Ok(value) => report.checks.push(Check::evaluate(name, value, Relation::GreaterThan, bound)),
        Err(reason) => report.checks.push(Check::skip(name, Relation::GreaterThan, bound, reason)),
    }
    Ok(report.finish())
}

fn is_forest(g: &Graph) -> bool {
    !has_cycle_within(g, g.vertices())
}

/// For forests: `s̊(T) = floor(3n/2)` exactly when T has a spanning forest
/// with degrees in {1,3} (one vertex of degree 0 or 6 allowed for odd n).
pub fn verify_tree_characterization(inst: &Instance, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    let t = &inst.graph;
    if !is_forest(t) {
        return Err(VerifyError::Precondition(format!("{} is not a forest", inst.name)));
    }
    let n = t.n();
    let mut report = TheoremReport::new(ClaimId::TreeChar, inst, None);
    let cert = spanning_forest_13_exists(t, n % 2 == 1)?;
    let target = (3 * n / 2) as u32;
    let name = "s(T) = floor(3n/2) iff {1,3}-forest exists";
    match Exact::new(t, &opts.solve)?.value(t.vertices())? {
        Ok(value) => {
            report.checks.push(Check::evaluate(name, value == target, Relation::Iff, cert.is_some()));
            report.artifact("value", json!(value));
        }
        Err(reason) => report.checks.push(Check::skip(name, Relation::Iff, cert.is_some(), reason)),
    }
    report.artifact("floor_3n_2", json!(target));
    report.artifact("certificate", json!(cert));
    Ok(report.finish())
}

/// Largest vertex count handled by [`verify_mpw_bounds`].
pub const MPW_MAX_VERTICES: usize = 8;

/// `n/(2α) + 1/2 <= s̊/n <= max over induced H of |V(H)|/α(H)`.
pub fn verify_mpw_bounds(inst: &Instance, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    let g = &inst.graph;
    let n = g.n();
    if n == 0 || n > MPW_MAX_VERTICES {
        return Err(VerifyError::Precondition(format!("needs 1..={MPW_MAX_VERTICES} vertices, got {n}")));
    }
    let mut report = TheoremReport::new(ClaimId::Mpw, inst, None);
    let alpha = independence_number(g);
    let lower = Ratio::new(n as i64, 2 * alpha as i64).plus(Ratio::new(1, 2));
    let (mut upper, mut witness) = (Ratio::int(0), VertexSet::EMPTY);
    for h in g.vertices().subsets().skip(1) {
        let r = Ratio::new(h.len() as i64, independence_number_within(g, h) as i64);
        if r > upper {
            (upper, witness) = (r, h);
        }
    }
    report.artifact("alpha", json!(alpha));
    report.artifact("upper_witness", json!(witness));
    let (lo, hi) = ("s(G)/n >= n/(2 alpha) + 1/2", "s(G)/n <= max |V(H)|/alpha(H)");
    match Exact::new(g, &opts.solve)?.value(g.vertices())? {
        Ok(value) => {
            let ratio = Ratio::new(value as i64, n as i64);
            report.checks.push(Check::evaluate(lo, ratio, Relation::AtLeast, lower));
            report.checks.push(Check::evaluate(hi, ratio, Relation::AtMost, upper));
            report.artifact("value", json!(value));
        }
        Err(reason) => {
            report.checks.push(Check::skip(lo, Relation::AtLeast, lower, reason.clone()));
            report.checks.push(Check::skip(hi, Relation::AtMost, upper, reason));
        }
    }
    Ok(report.finish())
}

/// After any 2k-pair opening and any Painter reply, G⁻ is k-connected.
pub fn verify_lemma_kconn(inst: &Instance, k: usize, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    require_k(k, 1)?;
    let g = &inst.graph;
    let mut report = TheoremReport::new(ClaimId::LemmaKconn, inst, Some(k));
    let (hyps, matching) = main_hypotheses(inst, k);
    report.hypotheses = hyps;
    if !report.hypotheses_met() {
        return Ok(report.finish());
    }
    let matching = matching.expect("hypothesis checked");
    let (list, coverage) = branches(g, &matching, k, opts.budget);
    let mut failures = Vec::new();
    let mut max_reply = 0;
    let mut min_kappa = usize::MAX;
    for &(opening, d) in &list {
        let alive = g.vertices().difference(d);
        max_reply = max_reply.max(d.len());
        min_kappa = min_kappa.min(vertex_connectivity_within(g, alive));
        if !is_k_connected_within(g, alive, k) {
            failures.push(json!({"opening": opening, "deleted": d}));
        }
    }
    report.checks.push(Check::evaluate("|D| <= 2k", max_reply, Relation::AtMost, 2 * k));
    report.checks.push(Check::evaluate("G- not k-connected", failures.len(), Relation::Equal, 0usize));
    report.artifact("branches", json!(list.len()));
    report.artifact("min_connectivity", json!(min_kappa));
    if !failures.is_empty() {
        report.artifact("counterexamples", Value::Array(failures));
    }
    report.coverage = Some(coverage);
    Ok(report.finish())
}

/// Tallies for the forest pipeline over all branches.
#[derive(Default)]
struct PipelineTally {
    even: usize,
    odd: usize,
    bad_certificates: Vec<Value>,
    menger_failures: Vec<Value>,
    parity_violations: usize,
    stripped: usize,
    even_value_violations: usize,
    odd_value_violations: usize,
    /// Odd branches where `s̊(G⁻) > 3n/2 - 3k*` fails as literally stated.
    literal_odd_violations: usize,
    min_value: Option<u32>,
    skipped: Option<String>,
    example: Option<Value>,
}

/// Runs F1 = F0 ⊕ E(P) plus cycle stripping on `ctx`; returns the
/// certificate or records why there is none.
fn pipeline_certificate(g: &Graph, ctx: &BetaContext, tally: &mut PipelineTally) -> Result<Option<Value>, VerifyError> {
    let (a, b) = split_betas(ctx.betas)?;
    let paths = match disjoint_paths(g, ctx.alive, a, b, a.len()) {
        Ok(p) => p,
        Err(e) => {
            tally.menger_failures.push(json!({"deleted": ctx.deleted, "alive": ctx.alive, "error": e.to_string()}));
            return Ok(None);
        }
    };
    let built = build_forest_traced(ctx, &paths)?;
    let degrees = built.combined.degrees(g.n());
    if ctx.alive.iter().any(|v| degrees[v] % 2 == 0) {
        tally.parity_violations += 1;
    }
    if !built.stripped_cycles.is_empty() {
        tally.stripped += 1;
    }
    let cert = &built.certificate;
    let strict_ok = cert.mode == ForestMode::Strict
        && cert.check(g).is_ok()
        && cert.ambient() == ctx.alive
        && cert.degrees.values().all(|&d| d == 1 || d == 3);
    if !strict_ok {
        tally.bad_certificates.push(json!({"deleted": ctx.deleted, "certificate": cert}));
        return Ok(None);
    }
    Ok(Some(json!({"context": ctx, "paths": paths, "certificate": cert})))
}

/// The symmetric-difference construction on every branch, with the
/// odd-case split-off accounting and the exact value of every G⁻.
pub fn verify_forest_pipeline(inst: &Instance, k: usize, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    require_k(k, 1)?;
    let g = &inst.graph;
    let n = g.n();
    let mut report = TheoremReport::new(ClaimId::ForestPipeline, inst, Some(k));
    let (hyps, matching) = main_hypotheses(inst, k);
    report.hypotheses = hyps;
    if !report.hypotheses_met() {
        return Ok(report.finish());
    }
    let matching = matching.expect("hypothesis checked");
    let (list, coverage) = branches(g, &matching, k, opts.budget);
    let mut exact = Exact::new(g, &opts.solve)?;
    let mut t = PipelineTally::default();

    for &(opening, d) in &list {
        let ctx = beta_context(g, &matching, d)?;
        let value = match exact.value(ctx.alive)? {
            Ok(v) => Some(v),
            Err(reason) => {
                t.skipped = Some(reason);
                None
            }
        };
        if let Some(v) = value {
            t.min_value = Some(t.min_value.map_or(v, |m| m.min(v)));
        }
        let half_betas = ctx.betas.len() / 2;
        if ctx.betas.len() % 2 == 0 {
            t.even += 1;
            let Some(evidence) = pipeline_certificate(g, &ctx, &mut t)? else { continue };
            if let Some(v) = value {
                if Ratio::int(v as i64) < three_halves(ctx.alive.len()) {
                    t.even_value_violations += 1;
                }
            }
            if t.example.is_none() {
                t.example = Some(json!({"opening": opening, "branch": "even", "construction": evidence}));
            }
        } else {
            t.odd += 1;
            let v_beta = ctx.betas.first().expect("odd count is nonzero");
            let rest = ctx.without_beta(v_beta);
            let Some(evidence) = pipeline_certificate(g, &rest, &mut t)? else { continue };
            if let Some(v) = value {
                // G⁻ splits into G⁻ - v_β and the singleton v_β
                if Ratio::int(v as i64) < three_halves(rest.alive.len()).plus(Ratio::int(1)) {
                    t.odd_value_violations += 1;
                }
                let k_star = half_betas as i64;
                if Ratio::int(v as i64) <= three_halves(n).plus(Ratio::int(-3 * k_star)) {
                    t.literal_odd_violations += 1;
                }
            }
            if t.example.is_none() {
                t.example =
                    Some(json!({"opening": opening, "branch": "odd", "split_off": v_beta, "construction": evidence}));
            }
        }
    }

    report.checks.push(Check::evaluate("Menger path systems missing", t.menger_failures.len(), Relation::Equal, 0usize));
    report.checks.push(Check::evaluate("invalid certificates", t.bad_certificates.len(), Relation::Equal, 0usize));
    report.checks.push(Check::evaluate("F1 with an even degree", t.parity_violations, Relation::Equal, 0usize));
    let value_checks = [
        ("even: s(G-) < 3|G-|/2", t.even_value_violations),
        ("odd: s(G-) < 3|G- - v|/2 + 1", t.odd_value_violations),
    ];
    let floor = three_halves(n).plus(Ratio::int(-3 * k as i64));
    match (&t.skipped, t.min_value) {
        (None, Some(min)) => {
            for (name, count) in value_checks {
                report.checks.push(Check::evaluate(name, count, Relation::Equal, 0usize));
            }
            report.checks.push(Check::evaluate("min s(G-) >= 3n/2 - 3k", min, Relation::AtLeast, floor));
        }
        (reason, _) => {
            let reason = reason.clone().unwrap_or_else(|| "skipped: no branches".into());
            for (name, _) in value_checks {
                report.checks.push(Check::skip(name, Relation::Equal, 0usize, reason.clone()));
            }
            report.checks.push(Check::skip("min s(G-) >= 3n/2 - 3k", Relation::AtLeast, floor, reason));
        }
    }
    report.coverage = Some(coverage);
    report.artifact(
        "branches",
        json!({"even": t.even, "odd": t.odd, "cycles_stripped": t.stripped,
               "literal_odd_bound_violations": t.literal_odd_violations}),
    );
    if let Some(example) = t.example {
        report.artifact("example", example);
    }
    if !t.menger_failures.is_empty() {
        report.artifact("menger_counterexamples", Value::Array(t.menger_failures));
    }
    if !t.bad_certificates.is_empty() {
        report.artifact("bad_certificates", Value::Array(t.bad_certificates));
    }
    Ok(report.finish())
}

/// Runs one claim. `k` defaults to 1 (2 for the non-sharpness claim).
pub fn verify_claim(
    claim: ClaimId,
    inst: &Instance,
    k: Option<usize>,
    opts: &VerifyOptions,
) -> Result<TheoremReport, VerifyError> {
    match claim {
        ClaimId::Main => verify_main_theorem(inst, k.unwrap_or(1), opts),
        ClaimId::Nonsharp => verify_nonsharpness(inst, k.unwrap_or(2), opts),
        ClaimId::TreeChar => verify_tree_characterization(inst, opts),
        ClaimId::Mpw => verify_mpw_bounds(inst, opts),
        ClaimId::LemmaKconn => verify_lemma_kconn(inst, k.unwrap_or(1), opts),
        ClaimId::ForestPipeline => verify_forest_pipeline(inst, k.unwrap_or(1), opts),
    }
}

/// A claim whose precondition does not apply, as a report instead of an error.
fn not_applicable(claim: ClaimId, inst: &Instance, k: Option<usize>, why: String) -> TheoremReport {
    let mut report = TheoremReport::new(claim, inst, k);
    report.hypotheses.push(Hypothesis::new("precondition", false, why));
    report.finish()
}

/// Every claim on one instance; inapplicable claims become "hypotheses
/// unmet" reports.
pub fn verify_all(inst: &Instance, k: Option<usize>, opts: &VerifyOptions) -> Result<Vec<TheoremReport>, VerifyError> {
    let mut out = Vec::new();
    for claim in ClaimId::ALL {
        match verify_claim(claim, inst, k, opts) {
            Ok(r) => out.push(r),
            Err(VerifyError::Precondition(why)) => out.push(not_applicable(claim, inst, k, why)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub instance: Instance,
    pub claim: ClaimId,
    pub k: Option<usize>,
}

/// The standard battery: small named graphs for the connectivity claims,
/// paths, stars and seeded random trees for the forest claims.
pub fn standard_suite(seed: u64) -> Vec<SuiteEntry> {
    let mut entries = Vec::new();
    let mut add = |instance: &Instance, claims: &[ClaimId], k: Option<usize>| {
        for &claim in claims {
            entries.push(SuiteEntry { instance: instance.clone(), claim, k });
        }
    };
    use ClaimId::*;
    for spec in ["prism", "complete:4", "bipartite:3,3", "cube"] {
        let inst = Instance::builtin(spec).expect("builtin");
        add(&inst, &[Main, LemmaKconn, ForestPipeline, Mpw], Some(1));
    }
    let petersen = Instance::builtin("petersen").expect("builtin");
    add(&petersen, &[Main, LemmaKconn, ForestPipeline], Some(1));
    let k8 = Instance::builtin("complete:8").expect("builtin");
    add(&k8, &[Nonsharp], Some(2));
    for n in 1..=8 {
        let inst = Instance::builtin(&format!("path:{n}")).expect("builtin");
        add(&inst, &[TreeChar, Mpw], None);
    }
    for n in 2..=7 {
        let inst = Instance::builtin(&format!("star:{n}")).expect("builtin");
        add(&inst, &[TreeChar, Mpw], None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..12 {
        let n = rng.gen_range(1..=9);
        let tree = library::random_tree(n, &mut rng);
        add(&Instance::new(format!("random-tree:{i}:n={n}"), tree), &[TreeChar], None);
    }
    entries
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub hypotheses_unmet: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[TheoremReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Fails => s.fails += 1,
                Verdict::HypothesesUnmet => s.hypotheses_unmet += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub summary: Summary,
    pub reports: Vec<TheoremReport>,
}

pub fn run_suite(name: &str, seed: u64, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    let entries = match name {
        "standard" => standard_suite(seed),
        other => return Err(VerifyError::Precondition(format!("unknown suite {other:?}"))),
    };
    let reports = entries
        .iter()
        .map(|e| verify_claim(e.claim, &e.instance, e.k, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteReport { suite: name.to_string(), seed, summary: Summary::of(&reports), reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    fn inst(spec: &str) -> Instance {
        Instance::builtin(spec).unwrap()
    }

    fn computed(r: &TheoremReport, name: &str) -> Quantity {
        r.checks.iter().find(|c| c.name == name).and_then(|c| c.computed).unwrap()
    }

    #[test]
    fn ratios() {
        assert_eq!(Ratio::new(6, 4), Ratio::new(3, 2));
        assert_eq!(Ratio::new(3, -6), Ratio::new(-1, 2));
        assert!(Ratio::new(7, 4) < Ratio::int(2));
        assert_eq!(Ratio::new(5, 4).plus(Ratio::new(1, 2)).to_string(), "7/4");
        assert_eq!(serde_json::to_string(&Ratio::int(10)).unwrap(), "10");
        assert_eq!(serde_json::to_string(&Ratio::new(7, 4)).unwrap(), "\"7/4\"");
    }

    #[test]
    fn main_theorem_instances() {
        let r = verify_main_theorem(&inst("complete:4"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(computed(&r, "s(G) >= 3n/2 + k"), Quantity::from(10u32));
        assert_eq!(r.sharp, Some(false));

        // exact value 12 against the bound 10
        let r = verify_main_theorem(&inst("prism"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(computed(&r, "s(G) >= 3n/2 + k"), Quantity::from(12u32));
        assert_eq!(r.sharp, Some(false));

        let r = verify_main_theorem(&inst("path:5"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesesUnmet);
        assert!(r.checks.is_empty());
    }

    #[test]
    fn capped_main_theorem_is_skipped_not_failed() {
        let small = VerifyOptions { solve: SolveOptions::default().with_cap(4), ..opts() };
        let r = verify_main_theorem(&inst("prism"), 1, &small).unwrap();
        assert_eq!(r.verdict, Verdict::Skipped);
        assert!(r.checks[0].skipped.as_deref().unwrap().starts_with("skipped: cap"));
    }

    #[test]
    fn nonsharpness() {
        assert!(matches!(verify_nonsharpness(&inst("prism"), 1, &opts()), Err(VerifyError::Precondition(_))));
        let r = verify_nonsharpness(&inst("complete:8"), 2, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        assert_eq!(computed(&r, "s(G) > 3n/2 + k"), Quantity::from(36u32));
        assert_eq!(computed(&r, "acyclic G- count"), Quantity::from(0usize));
        assert!(r.coverage.unwrap().is_full());
    }

    #[test]
    fn tree_characterization() {
        let r = verify_tree_characterization(&inst("path:6"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.artifacts["value"], json!(9));
        // K_{1,3} is itself a {1,3}-forest and reaches floor(3n/2) = 6
        let r = verify_tree_characterization(&inst("star:4"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.artifacts["value"], json!(6));
        assert!(!r.artifacts["certificate"].is_null());
        // K_{1,5}: both sides false
        let r = verify_tree_characterization(&inst("star:6"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.artifacts["value"], json!(8));
        assert!(r.artifacts["certificate"].is_null());
        let r = verify_tree_characterization(&inst("path:1"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.artifacts["certificate"]["degrees"]["0"], json!(0));
        assert!(verify_tree_characterization(&inst("cycle:4"), &opts()).is_err());
    }

    #[test]
    fn mpw_bounds() {
        let r = verify_mpw_bounds(&inst("cycle:5"), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.checks[0].stated, Quantity::from(Ratio::new(7, 4)));
        assert_eq!(r.checks[1].stated, Quantity::from(Ratio::new(5, 2)));
        let r = verify_mpw_bounds(&inst("empty:4"), &opts()).unwrap();
        assert!(r.checks.iter().all(|c| c.computed == Some(Quantity::from(1usize)) && c.stated == Quantity::from(1usize)));
        let r = verify_mpw_bounds(&inst("prism"), &opts()).unwrap();
        assert_eq!(r.checks[0].stated, Quantity::from(2usize));
        assert_eq!(r.checks[1].stated, Quantity::from(3usize));
        assert_eq!(r.checks[0].computed, Some(Quantity::from(2usize)));
        assert!(verify_mpw_bounds(&inst("petersen"), &opts()).is_err());
    }

    #[test]
    fn lemma_kconn() {
        for spec in ["prism", "complete:6", "cube", "complete:4"] {
            let r = verify_lemma_kconn(&inst(spec), 1, &opts()).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{r}");
            assert!(r.coverage.unwrap().is_full());
        }
    }

    #[test]
    fn forest_pipeline() {
        let r = verify_forest_pipeline(&inst("prism"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        let r = verify_forest_pipeline(&inst("complete:4"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        assert_eq!(r.artifacts["branches"]["even"], json!(0));
        assert_eq!(r.artifacts["branches"]["odd"], json!(4));
        // K4 minus one vertex is a triangle worth 6, not more than 3n/2 - 0
        assert_eq!(r.artifacts["branches"]["literal_odd_bound_violations"], json!(4));
        let r = verify_forest_pipeline(&inst("cube"), 1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
    }

    #[test]
    fn standard_suite_holds_and_rechecks() {
        let suite = run_suite("standard", 7, &opts()).unwrap();
        for r in &suite.reports {
            assert_eq!(r.recheck(), r.verdict, "{r}");
            assert!(matches!(r.verdict, Verdict::Holds), "{r}");
            if let Some(c) = r.coverage {
                assert!(c.is_full());
            }
        }
        assert_eq!(suite.summary.fails, 0);
        let again = run_suite("standard", 7, &opts()).unwrap();
        assert_eq!(serde_json::to_string(&suite).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn claim_ids_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
        }
        assert!("everything".parse::<ClaimId>().is_err());
    }
}
