//! End-to-end runs behind the command line: graph construction and
//! certification, code construction and export, and re-verification of an
//! exported instance from its files alone.
//!
//! All randomness derives from one user seed. Each consumer takes the first
//! `u64` of ChaCha8 seeded with the user seed, on its own stream (see
//! [`Component`]).
//!
//! Reports are JSON objects with the keys `params`, `graph`, `spectrum`,
//! `bounds`, `checks` and `distance`; sections that do not apply are `null`.
//! `checks.results` maps check names to booleans, `checks.details` holds the
//! per-check evidence and `checks.pass` is their conjunction.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::alist::{self, AlistError};
use crate::cayley_code::{
    generator_actions, invariance_actions, measured_rate, sample_rows, theorem_bounds,
    verify_edge_transitive, CayleyCode, CayleyCodeError, DistanceMode, EdgeAction,
    EdgeTransitivity, Premise, TheoremBounds,
};
use crate::cyclic::{
    self, check_good_inner_code, CodeError, CyclicCode, DistanceReport, EXACT_DISTANCE_MAX_DIM,
};
use crate::field::is_prime;
use crate::gf2::Echelon;
use crate::graph::{Adjacency, CayleyGraph, GraphError};
use crate::group::ProjectiveMatrix;
use crate::lsv::{
    build_generators, classify, ideal_candidates, split_quaternion, GeneratorSet, LsvError,
    LsvParams, QuaternionSplit, Variant,
};
use crate::spectrum::{
    ramanujan_bound, spectrum, SpectrumError, SpectrumMode, SpectrumReport, DENSE_MAX_VERTICES,
};

/// Largest group the pipeline will enumerate.
pub const MAX_VERTICES: u128 = 500_000;
pub const DEFAULT_INVARIANCE_ROWS: usize = 200;
pub const DEFAULT_DISTANCE_TRIALS: u64 = 200;

pub const EDGES_FILE: &str = "graph.edges";
pub const ALIST_FILE: &str = "code.alist";
pub const INNER_FILE: &str = "inner.code";
pub const REPORT_FILE: &str = "report.json";

/// The inner-code parameters of the large instance: `q = 4093`, BCH over
/// `GF(2^11)`, `a = 8`.
pub const PAPER_Q: u64 = 4093;
pub const PAPER_M: u32 = 11;
pub const PAPER_A: u64 = 8;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("q^e = {0} must exceed 17")]
    SmallField(u128),
    #[error("the group has {0} elements, above the limit of {MAX_VERTICES}")]
    TooLarge(u128),
    #[error("y-bar index {ybar} gives the {got} variant, not {want}")]
    VariantMismatch {
        ybar: u128,
        want: Variant,
        got: Variant,
    },
    #[error(transparent)]
    Lsv(#[from] LsvError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    CayleyCode(#[from] CayleyCodeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, msg: impl ToString) -> PipelineError {
    PipelineError::Format {
        path: path.to_path_buf(),
        msg: msg.to_string(),
    }
}

/// Consumers of randomness; the discriminant is the ChaCha8 stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    /// Lanczos start vector.
    Spectrum = 1,
    /// Rows sampled for the invariance check.
    InvarianceRows = 2,
    /// Information-set trials of the distance search.
    Distance = 3,
}

pub fn component_seed(seed: u64, component: Component) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(component as u64);
    rng.next_u64()
}

fn seed_table(seed: u64) -> BTreeMap<&'static str, u64> {
    BTreeMap::from([
        ("spectrum", component_seed(seed, Component::Spectrum)),
        (
            "invariance_rows",
            component_seed(seed, Component::InvarianceRows),
        ),
        ("distance", component_seed(seed, Component::Distance)),
    ])
}

/// `|PSL₂(q^e)| = q^e(q^{2e} − 1)/2`, twice that for `PGL₂`.
pub fn expected_order(q: u64, e: usize, variant: Variant) -> Option<u128> {
    let qe = (q as u128).checked_pow(e as u32)?;
    let pgl = qe.checked_mul(qe.checked_mul(qe)? - 1)?;
    Some(match variant {
        Variant::Psl => pgl / 2,
        Variant::Pgl => pgl,
    })
}

/// Named boolean checks with their evidence.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Checks {
    pub results: BTreeMap<String, bool>,
    pub details: BTreeMap<String, Value>,
    pub pass: bool,
}

impl Checks {
    fn record(&mut self, name: &str, ok: bool) {
        self.results.insert(name.to_string(), ok);
        self.pass = self.results.values().all(|&b| b);
    }

    fn detail(&mut self, name: &str, value: &impl Serialize) {
        self.details.insert(name.to_string(), to_value(value));
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report sections serialize")
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub params: Value,
    pub graph: Value,
    pub spectrum: Value,
    pub bounds: Value,
    pub checks: Checks,
    pub distance: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug)]
pub struct GraphOptions {
    pub q: u64,
    pub e: usize,
    pub variant: Variant,
    /// Nonsquare of `F_q`; smallest one when `None`.
    pub delta: Option<u64>,
    /// Index of `ȳ` in `F_{q^e}`; first admissible one when `None`.
    pub ybar: Option<u128>,
    /// Dense up to [`DENSE_MAX_VERTICES`] vertices, iterative above, when
    /// `None`.
    pub mode: Option<SpectrumMode>,
    pub seed: u64,
}

impl GraphOptions {
    pub fn new(q: u64, e: usize, variant: Variant) -> Self {
        Self {
            q,
            e,
            variant,
            delta: None,
            ybar: None,
            mode: None,
            seed: 0,
        }
    }

    /// Parameter checks that need no group arithmetic; returns the group
    /// order. Rejects `q^e <= 17`.
    pub fn validate(&self) -> Result<u128, PipelineError> {
        let order = self.validate_size()?;
        let qe = (self.q as u128).pow(self.e as u32);
        if qe <= 17 {
            return Err(PipelineError::SmallField(qe));
        }
        Ok(order)
    }

    fn validate_size(&self) -> Result<u128, PipelineError> {
        if self.q == 2 || !is_prime(self.q) {
            return Err(LsvError::BadQ(self.q).into());
        }
        if self.e == 0 {
            return Err(LsvError::BadDegree.into());
        }
        match expected_order(self.q, self.e, self.variant) {
            Some(n) if n <= MAX_VERTICES => Ok(n),
            Some(n) => Err(PipelineError::TooLarge(n)),
            None => Err(PipelineError::TooLarge(u128::MAX)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphStructure {
    pub vertices: usize,
    pub edges: usize,
    pub degree: usize,
    pub expected_order: u128,
    pub bipartite: bool,
    pub connected: bool,
    pub loops: usize,
    /// `generator_inverse[i] = j` with `s_j = s_i⁻¹`; needed to read the
    /// edge list back.
    pub generator_inverse: Vec<usize>,
    /// The label-walk actions agree with left multiplication and torus
    /// conjugation computed on matrices.
    pub labels_match_group: bool,
    pub edge_transitivity: Option<EdgeTransitivity>,
}

pub struct GraphRun {
    pub options: GraphOptions,
    pub params: LsvParams,
    pub split: QuaternionSplit,
    pub gens: GeneratorSet,
    pub graph: CayleyGraph<ProjectiveMatrix>,
    pub variant: Variant,
    /// Admissible reductions passed over because their generators failed.
    pub skipped_ideals: usize,
    pub structure: GraphStructure,
    pub spectrum: SpectrumReport,
    pub actions: Option<Vec<EdgeAction>>,
}

impl GraphRun {
    pub fn adjacency(&self) -> &Adjacency {
        self.graph.adjacency()
    }

    fn params_value(&self) -> Value {
        let amb = &self.params.ambient;
        json!({
            "q": self.params.q,
            "e": self.params.e,
            "variant": self.variant,
            "delta": self.params.delta.to_vec()[0],
            "f": self.params.f,
            "y_bar": self.params.y_bar.to_vec(),
            "y_bar_index": amb.index(&self.params.y_bar) as u64,
            "skipped_ideals": self.skipped_ideals,
            "norm_solution": { "u": self.split.u.to_vec(), "v": self.split.v.to_vec() },
            "gamma": self.gens.gamma.to_vecs(),
            "t0": self.gens.t0.matrix.to_vecs(),
            "seed": self.options.seed,
            "seeds": seed_table(self.options.seed),
        })
    }

    fn record_checks(&self, checks: &mut Checks) {
        let s = &self.structure;
        checks.record("order", s.vertices as u128 == s.expected_order);
        checks.record(
            "regular",
            s.degree == self.params.q as usize + 1
                && s.loops == 0
                && 2 * s.edges == s.vertices * s.degree,
        );
        checks.record("connected", s.connected);
        checks.record(
            "bipartite_matches_variant",
            s.bipartite == (self.variant == Variant::Pgl),
        );
        checks.record("labels_match_group", s.labels_match_group);
        checks.record("ramanujan", self.spectrum.ramanujan);
        checks.record(
            "edge_transitive",
            s.edge_transitivity.as_ref().is_some_and(|t| t.pass),
        );
    }

    /// Report with only the graph sections filled in.
    pub fn report(&self) -> Report {
        let mut checks = Checks::default();
        self.record_checks(&mut checks);
        Report {
            params: self.params_value(),
            graph: to_value(&self.structure),
            spectrum: to_value(&self.spectrum),
            bounds: Value::Null,
            checks,
            distance: Value::Null,
        }
    }
}

/// Validate (including `q^e > 17`) and construct.
pub fn run_graph(options: &GraphOptions) -> Result<GraphRun, PipelineError> {
    options.validate()?;
    construct_graph(options)
}

/// Construct and certify without the `q^e > 17` restriction.
pub fn construct_graph(options: &GraphOptions) -> Result<GraphRun, PipelineError> {
    let expected = options.validate_size()?;
    let (params, split, gens, skipped_ideals) = select_generators(options)?;
    let variant = classify(&params, &gens)?;
    let group = gens.group.clone();
    let cap = group.order().min(MAX_VERTICES) as usize;
    let graph = CayleyGraph::generate(
        group.identity(),
        &gens.elements,
        |a, b| group.mul(a, b),
        cap,
    )?;
    let adj = graph.adjacency();
    let actions = generator_actions(adj).ok();
    let labels_match_group = actions
        .as_ref()
        .is_some_and(|a| labels_match_group(&graph, &gens, a).unwrap_or(false));
    let structure = GraphStructure {
        vertices: adj.num_vertices(),
        edges: adj.num_edges(),
        degree: adj.degree(),
        expected_order: expected,
        bipartite: adj.is_bipartite(),
        connected: adj.is_connected(),
        loops: adj.loop_count(),
        generator_inverse: adj.gen_inverse().to_vec(),
        labels_match_group,
        edge_transitivity: actions.as_ref().map(|a| verify_edge_transitive(adj, a)),
    };
    let mode = options
        .mode
        .unwrap_or(if adj.num_vertices() <= DENSE_MAX_VERTICES {
            SpectrumMode::Dense
        } else {
            SpectrumMode::Iterative
        });
    let spectrum = spectrum(adj, mode, component_seed(options.seed, Component::Spectrum))?;
    Ok(GraphRun {
        options: options.clone(),
        params,
        split,
        gens,
        graph,
        variant,
        skipped_ideals,
        structure,
        spectrum,
        actions,
    })
}

/// Certify an arbitrary generating set of the expected size: closure,
/// order, regularity, connectivity, the bipartite/variant match and the
/// Ramanujan bound for `q`. Used to show that damaged sets are reported.
pub fn certify_generating_set(
    q: u64,
    e: usize,
    variant: Variant,
    gens: &GeneratorSet,
    elements: &[ProjectiveMatrix],
    seed: u64,
) -> Result<Checks, PipelineError> {
    let group = &gens.group;
    let cap = group.order().min(MAX_VERTICES) as usize;
    let graph = CayleyGraph::generate(group.identity(), elements, |a, b| group.mul(a, b), cap)?;
    let adj = graph.adjacency();
    let mut checks = Checks::default();
    checks.record(
        "order",
        expected_order(q, e, variant) == Some(adj.num_vertices() as u128),
    );
    checks.record(
        "regular",
        adj.degree() as u64 == q + 1 && adj.loop_count() == 0,
    );
    checks.record("connected", adj.is_connected());
    checks.record(
        "bipartite_matches_variant",
        adj.is_bipartite() == (variant == Variant::Pgl),
    );
    let spec = spectrum(
        adj,
        SpectrumMode::Iterative,
        component_seed(seed, Component::Spectrum),
    )?;
    checks.record(
        "ramanujan",
        spec.trivial_ok && spec.max_nontrivial_abs <= ramanujan_bound(q) + spec.tolerance,
    );
    checks.detail("spectrum", &spec);
    Ok(checks)
}

fn select_generators(
    options: &GraphOptions,
) -> Result<(LsvParams, QuaternionSplit, GeneratorSet, usize), PipelineError> {
    let attempt = |params: &LsvParams| -> Result<(QuaternionSplit, GeneratorSet), LsvError> {
        let split = split_quaternion(&params.ambient, &params.delta_ambient(), &params.c())?;
        split.check(&params.ambient, &params.delta_ambient())?;
        let gens = build_generators(params, &split)?;
        Ok((split, gens))
    };
    if let Some(index) = options.ybar {
        let params = LsvParams::new(options.q, options.e, options.delta, |f| f.element(index))?;
        let got = params.predicted_variant();
        if got != options.variant {
            return Err(PipelineError::VariantMismatch {
                ybar: index,
                want: options.variant,
                got,
            });
        }
        let (split, gens) = attempt(&params)?;
        return Ok((params, split, gens, 0));
    }
    let mut skipped = 0;
    for params in ideal_candidates(options.q, options.e, options.delta)? {
        if params.predicted_variant() != options.variant {
            continue;
        }
        match attempt(&params) {
            Ok((split, gens)) => return Ok((params, split, gens, skipped)),
            Err(_) => skipped += 1,
        }
    }
    Err(LsvError::NoAdmissibleIdeal {
        q: options.q,
        e: options.e,
        want: options.variant,
    }
    .into())
}

/// Compare the label-walk actions (`(s_j, 1)` for every `j`, then
/// `(1, t₀)`) with the same maps computed by matrix multiplication.
fn labels_match_group(
    graph: &CayleyGraph<ProjectiveMatrix>,
    gens: &GeneratorSet,
    actions: &[EdgeAction],
) -> Result<bool, PipelineError> {
    let group = &gens.group;
    let d = gens.len();
    if actions.len() != d + 1 {
        return Ok(false);
    }
    for (j, s) in gens.elements.iter().enumerate() {
        let vp = graph.vertex_perm(|v| group.mul(s, v))?;
        if vp != actions[j].vertex_perm {
            return Ok(false);
        }
    }
    let t = &gens.t0.matrix;
    let vp = graph.vertex_perm(|v| group.conj(t, v))?;
    let gp = gens.conjugation_perm(t)?;
    Ok(vp == actions[d].vertex_perm && gp == actions[d].gen_perm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceChoice {
    None,
    Exact,
    Sampled { trials: u64 },
}

pub struct BuildOptions {
    pub graph: GraphOptions,
    pub inner: CyclicCode,
    pub invariance_rows: usize,
    pub distance: DistanceChoice,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsSection {
    pub theorem: TheoremBounds,
    pub rows: usize,
    pub rank: usize,
    pub dimension: usize,
    /// `1 − rank/|E|`, exact.
    pub measured_rate: Ratio<u64>,
    pub measured_rate_value: f64,
    pub rate_bound_holds: bool,
}

pub struct BuildRun {
    pub graph: GraphRun,
    pub code: CayleyCode,
    pub report: Report,
}

pub fn run_build(options: &BuildOptions) -> Result<BuildRun, PipelineError> {
    options.graph.validate()?;
    let degree = options.graph.q as usize + 1;
    if options.inner.len() != degree {
        return Err(CayleyCodeError::InnerLength {
            inner: options.inner.len(),
            degree,
        }
        .into());
    }
    let graph = construct_graph(&options.graph)?;
    let seed = options.graph.seed;
    let adj = graph.adjacency().clone();
    let code = CayleyCode::build(adj.clone(), options.inner.clone())?;
    let mut report = graph.report();
    let checks = &mut report.checks;

    let inner = code.inner();
    let inner_distance = (inner.dim() <= EXACT_DISTANCE_MAX_DIM)
        .then(|| inner.min_distance(cyclic::DistanceMode::Exact))
        .transpose()?;
    let inner_delta = inner_distance
        .as_ref()
        .and_then(|d| d.exact)
        .map(|d| Ratio::new(d as u64, inner.len() as u64));
    if let Value::Object(map) = &mut report.params {
        map.insert(
            "inner".into(),
            inner_value(inner, inner_distance.as_ref(), inner_delta),
        );
    }

    let rows = code.check_rows();
    checks.record("rows_local", rows.pass);
    checks.detail("rows", &rows);

    let h = code.parity_check();
    let echelon = h.echelon();
    let bounds = code_bounds(&code, &echelon, &graph.spectrum, inner_delta);
    checks.record("rate_bound", bounds.rate_bound_holds);

    let inv_actions = invariance_actions(&adj)?;
    let sampled = sample_rows(
        h.num_rows(),
        options.invariance_rows,
        component_seed(seed, Component::InvarianceRows),
    );
    let invariance = code.verify_invariance(&inv_actions, &sampled, &echelon, true);
    checks.record("invariance", invariance.pass);
    checks.detail("invariance", &invariance);

    if let Some(actions) = &graph.actions {
        let orbit = code.verify_single_orbit(actions, 0, echelon.rank());
        checks.record("single_orbit", orbit.pass);
        checks.detail("single_orbit", &orbit);
    } else {
        checks.record("single_orbit", false);
    }

    let lower_bound_weight = (bounds.theorem.distance_premise == Premise::Holds)
        .then(|| bounds.theorem.distance_lower_bound * code.len() as f64);
    let distance = match options.distance {
        DistanceChoice::None => None,
        DistanceChoice::Exact => Some(code.code_distance(DistanceMode::Exact, lower_bound_weight)?),
        DistanceChoice::Sampled { trials } => Some(code.code_distance(
            DistanceMode::Sampled {
                trials,
                seed: component_seed(seed, Component::Distance),
            },
            lower_bound_weight,
        )?),
    };
    if let Some(d) = &distance {
        checks.record(
            "distance_consistent",
            d.consistent_with_bound != Some(false),
        );
    }
    report.bounds = to_value(&bounds);
    report.distance = distance.as_ref().map_or(Value::Null, to_value);
    Ok(BuildRun {
        graph,
        code,
        report,
    })
}

fn inner_value(
    inner: &CyclicCode,
    distance: Option<&DistanceReport>,
    delta: Option<Ratio<u64>>,
) -> Value {
    json!({
        "n": inner.len(),
        "k": inner.dim(),
        "generator": inner.generator().to_hex(),
        "rate": inner.rate(),
        "distance": distance,
        "delta": delta,
    })
}

fn code_bounds(
    code: &CayleyCode,
    echelon: &Echelon,
    spec: &SpectrumReport,
    inner_delta: Option<Ratio<u64>>,
) -> BoundsSection {
    let lambda_tol = spec.tolerance.max(spec.error_estimate);
    let theorem = theorem_bounds(
        code.inner().rate(),
        inner_delta,
        spec.max_nontrivial_abs,
        lambda_tol,
    );
    let edges = code.len();
    let rank = echelon.rank();
    let measured = measured_rate(edges, rank);
    let as_signed = Ratio::new(*measured.numer() as i64, *measured.denom() as i64);
    BoundsSection {
        rate_bound_holds: as_signed >= theorem.rate_lower_bound,
        theorem,
        rows: code.parity_check().num_rows(),
        rank,
        dimension: edges - rank,
        measured_rate_value: *measured.numer() as f64 / *measured.denom() as f64,
        measured_rate: measured,
    }
}

/// Write `graph.edges`, `code.alist`, `inner.code` and `report.json`.
pub fn write_instance(dir: &Path, run: &BuildRun) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let edges = dir.join(EDGES_FILE);
    write_with(&edges, |w| run.graph.adjacency().write_edges(w))?;
    let alist_path = dir.join(ALIST_FILE);
    write_with(&alist_path, |w| {
        alist::write_alist(run.code.parity_check(), w)
    })?;
    let inner = dir.join(INNER_FILE);
    write_with(&inner, |w| run.code.inner().write_text(w))?;
    let report = dir.join(REPORT_FILE);
    fs::write(&report, run.report.to_json()).map_err(io_err(&report))
}

pub fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), PipelineError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    f(&mut w).and_then(|()| w.flush()).map_err(io_err(path))
}

fn open(path: &Path) -> Result<BufReader<File>, PipelineError> {
    Ok(BufReader::new(File::open(path).map_err(io_err(path))?))
}

pub fn read_inner_code(path: &Path) -> Result<CyclicCode, PipelineError> {
    CyclicCode::read_text(open(path)?).map_err(|e| format_err(path, e))
}

/// Only the B-side of the large instance: the doubled BCH code and the
/// resulting bound values, with `λ` replaced by the Ramanujan bound (which
/// the graph would meet). The group itself is not instantiated.
pub fn paper_instance() -> Result<Report, PipelineError> {
    let good = check_good_inner_code(PAPER_Q, PAPER_M, PAPER_A)?;
    let lambda = ramanujan_bound(PAPER_Q);
    let theorem = theorem_bounds(good.params.rate, Some(good.designed_delta), lambda, 1e-12);
    let mut checks = Checks::default();
    checks.record("rate_exceeds_half", good.rate_exceeds_half);
    checks.record(
        "rate_at_least_half_plus_inv_a",
        good.rate_at_least_half_plus_inv_a,
    );
    checks.record("delta_exceeds_ramanujan", good.delta_exceeds_ramanujan);
    checks.record(
        "distance_premise",
        theorem.distance_premise == Premise::Holds,
    );
    Ok(Report {
        params: json!({
            "q": PAPER_Q,
            "m": PAPER_M,
            "a": PAPER_A,
            "r": good.r,
            "note": "inner-code checks only; the group PSL_2(4093^e) is not instantiated and lambda is the Ramanujan bound 2 sqrt(q)/(q+1)",
        }),
        graph: Value::Null,
        spectrum: Value::Null,
        bounds: json!({ "inner": good, "theorem": theorem }),
        checks,
        distance: Value::Null,
    })
}

/// Re-check an exported instance from `graph.edges`, `code.alist`,
/// `inner.code` and `report.json`, with no group arithmetic: the edge
/// actions come from generator labels. Unreadable or malformed files are
/// errors; everything else becomes a check.
pub fn verify_instance(dir: &Path) -> Result<Checks, PipelineError> {
    let report_path = dir.join(REPORT_FILE);
    let text = fs::read_to_string(&report_path).map_err(io_err(&report_path))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| format_err(&report_path, e))?;
    let field = |ptr: &str| {
        report
            .pointer(ptr)
            .ok_or_else(|| format_err(&report_path, format!("missing {ptr}")))
    };
    let as_u64 = |ptr: &str| {
        field(ptr)?
            .as_u64()
            .ok_or_else(|| format_err(&report_path, format!("{ptr} is not an integer")))
    };
    let q = as_u64("/params/q")?;
    let e = as_u64("/params/e")? as usize;
    let seed = as_u64("/params/seed")?;
    let recorded_rank = as_u64("/bounds/rank")? as usize;
    let variant: Variant = field("/params/variant")?
        .as_str()
        .unwrap_or_default()
        .parse()
        .map_err(|e: String| format_err(&report_path, e))?;
    let gen_inverse: Vec<usize> =
        serde_json::from_value(field("/graph/generator_inverse")?.clone())
            .map_err(|e| format_err(&report_path, e))?;

    let edges_path = dir.join(EDGES_FILE);
    let adj = Adjacency::read_edges(open(&edges_path)?, gen_inverse)
        .map_err(|e| format_err(&edges_path, e))?;
    let inner = read_inner_code(&dir.join(INNER_FILE))?;
    let alist_path = dir.join(ALIST_FILE);
    let h = alist::read_alist(open(&alist_path)?).map_err(|e| match e {
        AlistError::Io(source) => PipelineError::Io {
            path: alist_path.clone(),
            source,
        },
        other => format_err(&alist_path, other),
    })?;

    let mut checks = Checks::default();
    let expected = expected_order(q, e, variant);
    checks.record("order", expected == Some(adj.num_vertices() as u128));
    checks.record(
        "regular",
        adj.degree() as u64 == q + 1 && adj.loop_count() == 0,
    );
    checks.record("connected", adj.is_connected());
    checks.record(
        "bipartite_matches_variant",
        adj.is_bipartite() == (variant == Variant::Pgl),
    );
    match spectrum(
        &adj,
        SpectrumMode::Iterative,
        component_seed(seed, Component::Spectrum),
    ) {
        Ok(s) => {
            checks.record("ramanujan", s.ramanujan);
            checks.detail("spectrum", &s);
        }
        Err(err) => {
            checks.record("ramanujan", false);
            checks.detail("spectrum", &err.to_string());
        }
    }
    let actions = generator_actions(&adj).ok();
    let transitivity = actions.as_ref().map(|a| verify_edge_transitive(&adj, a));
    checks.record(
        "edge_transitive",
        transitivity.as_ref().is_some_and(|t| t.pass),
    );
    checks.detail("edge_transitivity", &transitivity);

    let code = match CayleyCode::from_parts(adj.clone(), inner, h) {
        Ok(code) => code,
        Err(err) => {
            checks.record("code_dimensions", false);
            checks.detail("code_dimensions", &err.to_string());
            return Ok(checks);
        }
    };
    checks.record("code_dimensions", true);
    checks.record("matches_construction", code.matches_construction());
    let rows = code.check_rows();
    checks.record("rows_local", rows.pass);
    checks.detail("rows", &rows);

    let echelon = code.parity_check().echelon();
    checks.record("rank_matches_report", echelon.rank() == recorded_rank);
    let measured = measured_rate(code.len(), echelon.rank());
    let r = code.inner().rate();
    let lower = Ratio::new(2 * *r.numer() as i64 - *r.denom() as i64, *r.denom() as i64);
    checks.record(
        "rate_bound",
        Ratio::new(*measured.numer() as i64, *measured.denom() as i64) >= lower,
    );

    match invariance_actions(&adj) {
        Ok(inv_actions) => {
            let all: Vec<usize> = (0..code.parity_check().num_rows()).collect();
            let invariance = code.verify_invariance(&inv_actions, &all, &echelon, false);
            checks.record("invariance", invariance.pass);
            checks.detail("invariance", &invariance);
        }
        Err(err) => {
            checks.record("invariance", false);
            checks.detail("invariance", &err.to_string());
        }
    }
    match &actions {
        Some(actions) if code.parity_check().num_rows() > 0 => {
            let orbit = code.verify_single_orbit(actions, 0, echelon.rank());
            checks.record("single_orbit", orbit.pass);
            checks.detail("single_orbit", &orbit);
        }
        _ => checks.record("single_orbit", false),
    }
    Ok(checks)
}
