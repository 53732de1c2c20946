//! Codes on the edges of a Cayley graph whose local views lie in a cyclic
//! inner code.
//!
//! Position `i` of the local view at `v` is the edge `(v, i)`, i.e. the edge
//! to `v·s_i`. With `S` ordered by torus powers, conjugation by the torus
//! generator turns into the cyclic shift of local views, which is what makes
//! the code invariant under `G ⋊ T`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cyclic::CyclicCode;
use crate::field::BinaryPoly;
use crate::gf2::{self, Echelon, Gf2Matrix};
use crate::graph::{Adjacency, GraphError};

/// Largest code dimension for which the minimum distance is enumerated.
pub const EXACT_MAX_DIM: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyCodeError {
    #[error("inner code length {inner} differs from the graph degree {degree}")]
    InnerLength { inner: usize, degree: usize },
    #[error("parity-check width {width} differs from the edge count {edges}")]
    Width { width: usize, edges: usize },
    #[error("exact distance needs dimension <= {EXACT_MAX_DIM}, got {0}")]
    TooLargeForExact(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An element of `G ⋊ T` as a permutation datum: vertex map, generator-label
/// map and the induced undirected-edge permutation.
#[derive(Clone, Debug)]
pub struct EdgeAction {
    pub name: String,
    pub vertex_perm: Vec<u32>,
    pub gen_perm: Vec<usize>,
    pub edge_perm: Vec<u32>,
}

impl EdgeAction {
    pub fn new(
        adj: &Adjacency,
        name: String,
        vertex_perm: Vec<u32>,
        gen_perm: Vec<usize>,
    ) -> Result<Self, GraphError> {
        let edge_perm = adj.edge_perm(&vertex_perm, &gen_perm)?;
        Ok(Self {
            name,
            vertex_perm,
            gen_perm,
            edge_perm,
        })
    }

    /// `(s_j, 1)`: left multiplication by `s_j`, labels fixed.
    pub fn left_translation(adj: &Adjacency, j: usize) -> Result<Self, GraphError> {
        let id: Vec<usize> = (0..adj.degree()).collect();
        let vp = adj.walk_map(adj.target(0, j), &id);
        Self::new(adj, format!("(s_{j}, 1)"), vp, id)
    }

    /// `(1, t₀)`: conjugation by the torus generator, which sends label `i`
    /// to `i + 1`.
    pub fn torus_shift(adj: &Adjacency) -> Result<Self, GraphError> {
        let d = adj.degree();
        let shift: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        let vp = adj.walk_map(0, &shift);
        Self::new(adj, "(1, t0)".to_string(), vp, shift)
    }

    pub fn apply(&self, support: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = support
            .iter()
            .map(|&e| self.edge_perm[e as usize])
            .collect();
        out.sort_unstable();
        out
    }
}

/// `(γ, 1)` and `(1, t₀)`, which generate `G ⋊ T`.
pub fn invariance_actions(adj: &Adjacency) -> Result<Vec<EdgeAction>, GraphError> {
    Ok(vec![
        EdgeAction::left_translation(adj, 0)?,
        EdgeAction::torus_shift(adj)?,
    ])
}

/// `(s, 1)` for every `s ∈ S`, then `(1, t₀)`.
pub fn generator_actions(adj: &Adjacency) -> Result<Vec<EdgeAction>, GraphError> {
    let mut out = (0..adj.degree())
        .map(|j| EdgeAction::left_translation(adj, j))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(EdgeAction::torus_shift(adj)?);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeTransitivity {
    pub orbit_size: usize,
    pub edges: usize,
    pub vertex_orbit_size: usize,
    pub vertices: usize,
    pub pass: bool,
}

/// Orbit of edge 0 under `generator_actions`, and of vertex 0 under the
/// left translations alone.
pub fn verify_edge_transitive(adj: &Adjacency, actions: &[EdgeAction]) -> EdgeTransitivity {
    let edge_perms: Vec<Vec<u32>> = actions.iter().map(|a| a.edge_perm.clone()).collect();
    let vertex_perms: Vec<Vec<u32>> = actions
        .iter()
        .filter(|a| a.gen_perm.iter().enumerate().all(|(i, &j)| i == j))
        .map(|a| a.vertex_perm.clone())
        .collect();
    let orbit_size = adj.edge_orbit_size(&edge_perms);
    let vertex_orbit_size = crate::graph::orbit_size(adj.num_vertices(), &vertex_perms);
    EdgeTransitivity {
        orbit_size,
        edges: adj.num_edges(),
        vertex_orbit_size,
        vertices: adj.num_vertices(),
        pass: orbit_size == adj.num_edges() && vertex_orbit_size == adj.num_vertices(),
    }
}

/// The code `{x ∈ F₂^E : x|_{star(v)} ∈ B for all v}` with its parity-check
/// matrix: for each vertex, the `n_B − k_B` shifts of the dual generator
/// placed on its star.
#[derive(Clone, Debug)]
pub struct CayleyCode {
    adj: Adjacency,
    inner: CyclicCode,
    dual_generator: Option<BinaryPoly>,
    h: Gf2Matrix,
}

impl CayleyCode {
    pub fn build(adj: Adjacency, inner: CyclicCode) -> Result<Self, CayleyCodeError> {
        let h = construct_parity_check(&adj, &inner)?;
        Ok(Self::assemble(adj, inner, h))
    }

    /// Wrap an externally supplied parity-check matrix (for re-verification).
    pub fn from_parts(
        adj: Adjacency,
        inner: CyclicCode,
        h: Gf2Matrix,
    ) -> Result<Self, CayleyCodeError> {
        if inner.len() != adj.degree() {
            return Err(CayleyCodeError::InnerLength {
                inner: inner.len(),
                degree: adj.degree(),
            });
        }
        if h.width() != adj.num_edges() {
            return Err(CayleyCodeError::Width {
                width: h.width(),
                edges: adj.num_edges(),
            });
        }
        Ok(Self::assemble(adj, inner, h))
    }

    fn assemble(adj: Adjacency, inner: CyclicCode, h: Gf2Matrix) -> Self {
        let dual_generator = inner.dual_generator();
        Self {
            adj,
            inner,
            dual_generator,
            h,
        }
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn inner(&self) -> &CyclicCode {
        &self.inner
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.adj.num_edges()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the stored matrix is exactly the one this graph and inner
    /// code produce.
    pub fn matches_construction(&self) -> bool {
        construct_parity_check(&self.adj, &self.inner).is_ok_and(|h| h == self.h)
    }

    /// Position of edge `e` in the star of `v`, if incident.
    fn position(&self, e: usize, v: usize) -> Option<usize> {
        let (a, i) = self.adj.edge_endpoint(e);
        if a == v {
            Some(i)
        } else if self.adj.target(a, i) == v {
            Some(self.adj.gen_inverse()[i])
        } else {
            None
        }
    }

    /// If every edge of `support` meets one vertex, that vertex and the
    /// local word.
    pub fn localize(&self, support: &[u32]) -> Option<(usize, Vec<bool>)> {
        self.localizations(support).into_iter().next()
    }

    fn in_local_dual(&self, word: &[bool]) -> bool {
        let poly = BinaryPoly::from_bits(word.iter().copied());
        match &self.dual_generator {
            Some(g) => g.divides(&poly),
            None => poly.is_zero(),
        }
    }

    /// The view of `word` (packed over edges) at vertex `v`.
    pub fn local_view(&self, word: &[u64], v: usize) -> Vec<bool> {
        self.adj
            .star(v)
            .iter()
            .map(|&e| gf2::get_bit(word, e as usize))
            .collect()
    }

    /// Membership by the definition: every local view lies in the inner code.
    pub fn is_codeword_by_views(&self, word: &[u64]) -> bool {
        (0..self.adj.num_vertices()).all(|v| self.inner.contains(&self.local_view(word, v)))
    }

    pub fn check_rows(&self) -> RowChecks {
        let mut max_row_weight = 0;
        let mut nonlocal_rows = Vec::new();
        let mut foreign_rows = Vec::new();
        for r in 0..self.h.num_rows() {
            let support: Vec<u32> = gf2::support(self.h.row(r))
                .into_iter()
                .map(|e| e as u32)
                .collect();
            max_row_weight = max_row_weight.max(support.len());
            match self.localize(&support) {
                None if !support.is_empty() => nonlocal_rows.push(r),
                Some((_, word)) if !self.in_local_dual(&word) => foreign_rows.push(r),
                _ => {}
            }
        }
        let degree = self.adj.degree();
        RowChecks {
            rows: self.h.num_rows(),
            max_row_weight,
            pass: max_row_weight <= degree && nonlocal_rows.is_empty() && foreign_rows.is_empty(),
            nonlocal_rows,
            foreign_rows,
        }
    }

    /// Spans of the rows of `H` supported on each star, as local words.
    /// A row of weight one counts for both endpoints.
    fn local_spans(&self) -> Vec<Echelon> {
        let degree = self.adj.degree();
        let mut local = vec![Gf2Matrix::new(degree); self.adj.num_vertices()];
        for r in 0..self.h.num_rows() {
            let support: Vec<u32> = gf2::support(self.h.row(r))
                .into_iter()
                .map(|e| e as u32)
                .collect();
            for (v, word) in self.localizations(&support) {
                local[v].push_bits(&word);
            }
        }
        local.iter().map(Gf2Matrix::echelon).collect()
    }

    /// Every vertex whose star contains `support`, with the local word.
    fn localizations(&self, support: &[u32]) -> Vec<(usize, Vec<bool>)> {
        let Some(&first) = support.first() else {
            return Vec::new();
        };
        let (a, i) = self.adj.edge_endpoint(first as usize);
        let mut out = Vec::new();
        for v in [a, self.adj.target(a, i)] {
            let mut word = vec![false; self.adj.degree()];
            let inside = support.iter().all(|&e| match self.position(e as usize, v) {
                Some(p) => {
                    word[p] = true;
                    true
                }
                None => false,
            });
            if inside && out.iter().all(|(u, _)| *u != v) {
                out.push((v, word));
            }
        }
        out
    }

    /// For each sampled row and each action, the permuted row lies in the
    /// row space. An image supported on one star is certified locally when
    /// it lies in the span of the rows of `H` on that star; the others (or
    /// all of them with `always_global`) are reduced against the global
    /// echelon basis.
    pub fn verify_invariance(
        &self,
        actions: &[EdgeAction],
        rows: &[usize],
        echelon: &Echelon,
        always_global: bool,
    ) -> InvarianceReport {
        let spans = self.local_spans();
        let mut failures = Vec::new();
        let mut local_certified = 0;
        for &r in rows {
            let support: Vec<u32> = gf2::support(self.h.row(r))
                .into_iter()
                .map(|e| e as u32)
                .collect();
            for a in actions {
                let image = a.apply(&support);
                let local = image.is_empty()
                    || self.localizations(&image).into_iter().any(|(v, word)| {
                        let mut packed = vec![0u64; spans[v].basis().words_per_row()];
                        for (p, _) in word.iter().enumerate().filter(|(_, &b)| b) {
                            gf2::set_bit(&mut packed, p);
                        }
                        spans[v].contains(&packed)
                    });
                if local {
                    local_certified += 1;
                }
                if local && !always_global {
                    continue;
                }
                let mut packed = vec![0u64; self.h.words_per_row()];
                for &e in &image {
                    gf2::set_bit(&mut packed, e as usize);
                }
                if !echelon.contains(&packed) {
                    failures.push(InvarianceFailure {
                        action: a.name.clone(),
                        row: r,
                    });
                }
            }
        }
        InvarianceReport {
            actions: actions.iter().map(|a| a.name.clone()).collect(),
            rows_checked: rows.len(),
            images_checked: rows.len() * actions.len(),
            local_certified,
            global_checked: always_global,
            pass: failures.is_empty(),
            failures,
        }
    }

    /// Orbit of row `v0` under the actions; compares the rank of the orbit
    /// with `h_rank`, and separately certifies span equality star by star
    /// when every row is local.
    pub fn verify_single_orbit(
        &self,
        actions: &[EdgeAction],
        v0: usize,
        h_rank: usize,
    ) -> SingleOrbitReport {
        let start: Vec<u32> = gf2::support(self.h.row(v0))
            .into_iter()
            .map(|e| e as u32)
            .collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
        let mut order = vec![start.clone()];
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(row) = queue.pop_front() {
            for a in actions {
                let image = a.apply(&row);
                if seen.insert(image.clone()) {
                    order.push(image.clone());
                    queue.push_back(image);
                }
            }
        }
        let orbit_rank = self.span_rank(&order);
        let local_certificate = self.local_span_certificate(&order);
        SingleOrbitReport {
            v0_row: v0,
            v0_weight: start.len(),
            orbit_size: order.len(),
            orbit_rank,
            h_rank,
            local_certificate,
            pass: orbit_rank == h_rank,
        }
    }

    /// GF(2) rank of the span of `rows`. Rows on a single star are first
    /// replaced by a basis of their local span (same global span, far fewer
    /// rows to eliminate); other rows are kept as they are.
    fn span_rank(&self, rows: &[Vec<u32>]) -> usize {
        let degree = self.adj.degree();
        let mut local: HashMap<usize, Gf2Matrix> = HashMap::new();
        let mut global = Gf2Matrix::new(self.h.width());
        for row in rows {
            match self.localize(row) {
                Some((v, word)) => local
                    .entry(v)
                    .or_insert_with(|| Gf2Matrix::new(degree))
                    .push_bits(&word),
                None => global.push_support(&row.iter().map(|&e| e as usize).collect::<Vec<_>>()),
            }
        }
        let mut vertices: Vec<usize> = local.keys().copied().collect();
        vertices.sort_unstable();
        for v in vertices {
            let star = self.adj.star(v);
            let basis = local[&v].echelon();
            for r in basis.basis().rows() {
                global.push_support(
                    &gf2::support(r)
                        .into_iter()
                        .map(|i| star[i] as usize)
                        .collect::<Vec<_>>(),
                );
            }
        }
        global.rank()
    }

    /// Star-by-star comparison of the spans of `rows` and of `H`; `true`
    /// proves the two global spans coincide.
    fn local_span_certificate(&self, rows: &[Vec<u32>]) -> bool {
        let degree = self.adj.degree();
        let mut by_vertex: HashMap<usize, (Gf2Matrix, Gf2Matrix)> = HashMap::new();
        let mut put = |support: &[u32], which: usize| -> bool {
            if support.is_empty() {
                return true;
            }
            let Some((v, word)) = self.localize(support) else {
                return false;
            };
            let entry = by_vertex
                .entry(v)
                .or_insert_with(|| (Gf2Matrix::new(degree), Gf2Matrix::new(degree)));
            if which == 0 {
                &mut entry.0
            } else {
                &mut entry.1
            }
            .push_bits(&word);
            true
        };
        for r in 0..self.h.num_rows() {
            let support: Vec<u32> = gf2::support(self.h.row(r))
                .into_iter()
                .map(|e| e as u32)
                .collect();
            if !put(&support, 0) {
                return false;
            }
        }
        for row in rows {
            if !put(row, 1) {
                return false;
            }
        }
        by_vertex.values().all(|(a, b)| {
            let mut both = a.clone();
            for row in b.rows() {
                both.push_row(row);
            }
            let r = both.rank();
            a.rank() == r && b.rank() == r
        })
    }

    /// Minimum distance of the code (the null space of `H`).
    pub fn code_distance(
        &self,
        mode: DistanceMode,
        lower_bound_weight: Option<f64>,
    ) -> Result<CodeDistance, CayleyCodeError> {
        let basis = self.h.nullspace();
        let dim = basis.num_rows();
        let (mode_name, mw, trials) = match mode {
            DistanceMode::Exact => {
                if dim > EXACT_MAX_DIM {
                    return Err(CayleyCodeError::TooLargeForExact(dim));
                }
                ("exact", gf2::exact_min_weight(&basis), None)
            }
            DistanceMode::Sampled { trials, seed } => (
                "sampled",
                gf2::sampled_min_weight(&basis, trials, seed),
                Some(trials),
            ),
        };
        let exact = (mode == DistanceMode::Exact).then_some(mw.weight).flatten();
        Ok(CodeDistance {
            mode: mode_name,
            dimension: dim,
            exact,
            upper: mw.weight,
            trials,
            lower_bound_weight,
            consistent_with_bound: lower_bound_weight
                .zip(mw.weight)
                .map(|(lb, w)| w as f64 >= lb),
        })
    }
}

fn construct_parity_check(
    adj: &Adjacency,
    inner: &CyclicCode,
) -> Result<Gf2Matrix, CayleyCodeError> {
    if inner.len() != adj.degree() {
        return Err(CayleyCodeError::InnerLength {
            inner: inner.len(),
            degree: adj.degree(),
        });
    }
    let dual = inner.dual_basis();
    let mut h = Gf2Matrix::with_capacity(adj.num_edges(), adj.num_vertices() * dual.num_rows());
    for v in 0..adj.num_vertices() {
        let star = adj.star(v);
        for r in dual.rows() {
            let cols: Vec<usize> = gf2::support(r)
                .into_iter()
                .map(|i| star[i] as usize)
                .collect();
            h.push_support(&cols);
        }
    }
    Ok(h)
}

/// Distinct row indices, `count` of them (all rows if fewer), sorted.
pub fn sample_rows(rows: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = sample(&mut rng, rows, count.min(rows)).into_vec();
    out.sort_unstable();
    out
}

/// `1 − rank/|E|`.
pub fn measured_rate(edges: usize, rank: usize) -> Ratio<u64> {
    Ratio::new((edges - rank) as u64, edges as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Exact,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct RowChecks {
    pub rows: usize,
    pub max_row_weight: usize,
    /// Rows not contained in a single star.
    pub nonlocal_rows: Vec<usize>,
    /// Local rows whose view is not a dual word of the inner code.
    pub foreign_rows: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceFailure {
    pub action: String,
    pub row: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub actions: Vec<String>,
    pub rows_checked: usize,
    pub images_checked: usize,
    pub local_certified: usize,
    /// Whether locally certified images were also reduced globally.
    pub global_checked: bool,
    pub failures: Vec<InvarianceFailure>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleOrbitReport {
    pub v0_row: usize,
    pub v0_weight: usize,
    pub orbit_size: usize,
    pub orbit_rank: usize,
    pub h_rank: usize,
    pub local_certificate: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeDistance {
    pub mode: &'static str,
    pub dimension: usize,
    /// Only in exact mode; `None` there means the code is zero.
    pub exact: Option<usize>,
    /// Lightest nonzero codeword found (an upper bound in sampled mode).
    pub upper: Option<usize>,
    pub trials: Option<u64>,
    /// `dist_lb · |E|` when the distance premise holds.
    pub lower_bound_weight: Option<f64>,
    pub consistent_with_bound: Option<bool>,
}

/// Whether `δ(B) > λ`, decided on the interval `[λ − tol, λ + tol]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Premise {
    Holds,
    Fails,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBounds {
    pub rate_inner: Ratio<u64>,
    /// `2r(B) − 1`, exact.
    pub rate_lower_bound: Ratio<i64>,
    /// A proven lower bound on `δ(B)`, when one is known.
    pub delta_inner: Option<Ratio<u64>>,
    pub lambda: f64,
    pub lambda_tolerance: f64,
    pub distance_premise: Premise,
    /// `((δ_B − λ)/(1 − λ))²` evaluated at `λ + tol`, or 0 when the premise
    /// is not established.
    pub distance_lower_bound: f64,
}

/// `r(C) ≥ 2r(B) − 1` and `δ(C) ≥ ((δ(B) − λ)/(1 − λ))²`. The distance
/// bound decreases in `λ`, so evaluating at the top of the interval keeps
/// it a valid lower bound. Without a known `δ(B)` the premise is
/// undetermined.
pub fn theorem_bounds(
    rate_inner: Ratio<u64>,
    delta_inner: Option<Ratio<u64>>,
    lambda: f64,
    tol: f64,
) -> TheoremBounds {
    let r = Ratio::new(*rate_inner.numer() as i64, *rate_inner.denom() as i64);
    let delta = delta_inner.map_or(f64::NAN, |d| *d.numer() as f64 / *d.denom() as f64);
    let hi = lambda + tol;
    let premise = if delta.is_nan() {
        Premise::Undetermined
    } else if delta > hi && hi < 1.0 {
        Premise::Holds
    } else if delta < lambda - tol {
        Premise::Fails
    } else {
        Premise::Undetermined
    };
    let bound = if premise == Premise::Holds {
        ((delta - hi) / (1.0 - hi)).powi(2)
    } else {
        0.0
    };
    TheoremBounds {
        rate_inner,
        rate_lower_bound: r * 2 - 1,
        delta_inner,
        lambda,
        lambda_tolerance: tol,
        distance_premise: premise,
        distance_lower_bound: bound,
    }
}
