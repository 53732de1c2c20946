//! Cayley graphs by BFS closure, with generator-labelled edges.
//!
//! A directed edge is `(v, i)`: from vertex `v` to `v·s_i`. The undirected
//! edge `{(v, i), (v·s_i, i')}` with `s_{i'} = s_i⁻¹` gets the id of its
//! lexicographically smaller directed half; ids are assigned in that order.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("generator {0} has no inverse in the set")]
    NotSymmetric(usize),
    #[error("the identity is a generator")]
    IdentityGenerator,
    #[error("empty generating set")]
    NoGenerators,
    #[error("closure exceeded {0} vertices")]
    CapExceeded(usize),
    #[error("map sends vertex {0} outside the graph")]
    VertexOutside(usize),
    #[error("map is not a permutation")]
    NotBijective,
    #[error("edge list: {0}")]
    Malformed(String),
    #[error("map does not respect the edge pairing at directed edge ({0}, {1})")]
    PairingBroken(usize, usize),
}

/// Regular adjacency with edge indexing; independent of vertex labels.
#[derive(Clone, Debug)]
pub struct Adjacency {
    n: usize,
    degree: usize,
    /// `targets[v * degree + i] = v·s_i`.
    targets: Vec<u32>,
    gen_inverse: Vec<usize>,
    /// Undirected id of each directed edge.
    edge_of: Vec<u32>,
    /// Canonical directed half of each undirected edge.
    edge_rep: Vec<u32>,
    coloring: Option<Vec<bool>>,
}

impl Adjacency {
    pub fn new(n: usize, degree: usize, targets: Vec<u32>, gen_inverse: Vec<usize>) -> Self {
        Self::try_new(n, degree, targets, gen_inverse).expect("consistent adjacency")
    }

    /// Like [`Adjacency::new`], but reports inconsistent input (targets out
    /// of range, `gen_inverse` not an involution, unpaired directed edges).
    pub fn try_new(
        n: usize,
        degree: usize,
        targets: Vec<u32>,
        gen_inverse: Vec<usize>,
    ) -> Result<Self, GraphError> {
        let bad = |m: String| Err(GraphError::Malformed(m));
        if targets.len() != n * degree || gen_inverse.len() != degree {
            return bad("size mismatch".into());
        }
        if let Some(i) =
            (0..degree).find(|&i| gen_inverse[i] >= degree || gen_inverse[gen_inverse[i]] != i)
        {
            return bad(format!("label inverse is not an involution at {i}"));
        }
        if let Some(d) = targets.iter().position(|&t| t as usize >= n) {
            return Err(GraphError::VertexOutside(d / degree));
        }
        let mut edge_of = vec![u32::MAX; n * degree];
        let mut edge_rep = Vec::with_capacity(n * degree / 2);
        for d in 0..n * degree {
            if edge_of[d] != u32::MAX {
                continue;
            }
            let (v, i) = (d / degree, d % degree);
            let partner = targets[d] as usize * degree + gen_inverse[i];
            if targets[partner] as usize != v || (edge_of[partner] != u32::MAX) {
                return Err(GraphError::PairingBroken(v, i));
            }
            let id = edge_rep.len() as u32;
            edge_rep.push(d as u32);
            edge_of[d] = id;
            edge_of[partner] = id;
        }
        let coloring = two_coloring(n, degree, &targets);
        Ok(Self {
            n,
            degree,
            targets,
            gen_inverse,
            edge_of,
            edge_rep,
            coloring,
        })
    }

    /// Inverse of [`Adjacency::write_edges`]. The label pairing is not part
    /// of the edge list and must be supplied; the listed order must be the
    /// canonical edge order so that edge ids survive the round trip.
    pub fn read_edges<R: BufRead>(r: R, gen_inverse: Vec<usize>) -> Result<Self, GraphError> {
        let bad = |m: String| GraphError::Malformed(m);
        let mut lines = r.lines();
        let mut fields = |what: &str| -> Result<Vec<usize>, GraphError> {
            let line = lines
                .next()
                .ok_or_else(|| bad(format!("missing {what}")))?
                .map_err(|e| bad(e.to_string()))?;
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(format!("bad number {t:?}"))))
                .collect()
        };
        let header = fields("header")?;
        let &[n, m, degree] = header.as_slice() else {
            return Err(bad("header must be \"|V| |E| degree\"".into()));
        };
        if gen_inverse.len() != degree || n * degree != 2 * m {
            return Err(bad("header inconsistent with a regular graph".into()));
        }
        let mut targets = vec![u32::MAX; n * degree];
        let mut listed = Vec::with_capacity(m);
        for k in 0..m {
            let f = fields("edge line")?;
            let &[u, v, i] = f.as_slice() else {
                return Err(bad(format!("edge line {k} must be \"u v gen_index\"")));
            };
            if u >= n || v >= n || i >= degree {
                return Err(bad(format!("edge line {k} out of range")));
            }
            for (slot, t) in [(u * degree + i, v), (v * degree + gen_inverse[i], u)] {
                if targets[slot] != u32::MAX && targets[slot] as usize != t {
                    return Err(bad(format!(
                        "edge line {k} reuses directed edge ({}, {})",
                        slot / degree,
                        slot % degree
                    )));
                }
                targets[slot] = t as u32;
            }
            listed.push((u, i));
        }
        if let Some(d) = targets.iter().position(|&t| t == u32::MAX) {
            return Err(bad(format!(
                "directed edge ({}, {}) is missing",
                d / degree,
                d % degree
            )));
        }
        let adj = Self::try_new(n, degree, targets, gen_inverse)?;
        if adj.num_edges() != m
            || listed
                .iter()
                .enumerate()
                .any(|(e, &x)| adj.edge_endpoint(e) != x)
        {
            return Err(bad("edges are not listed in canonical order".into()));
        }
        Ok(adj)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_edges(&self) -> usize {
        self.edge_rep.len()
    }

    pub fn target(&self, v: usize, i: usize) -> usize {
        self.targets[v * self.degree + i] as usize
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[v * self.degree..(v + 1) * self.degree]
    }

    pub fn gen_inverse(&self) -> &[usize] {
        &self.gen_inverse
    }

    /// Undirected id of directed edge `(v, i)`.
    pub fn edge_id(&self, v: usize, i: usize) -> usize {
        self.edge_of[v * self.degree + i] as usize
    }

    /// Canonical `(v, i)` of an undirected edge.
    pub fn edge_endpoint(&self, e: usize) -> (usize, usize) {
        let d = self.edge_rep[e] as usize;
        (d / self.degree, d % self.degree)
    }

    /// Edge ids of the star of `v`, in generator order.
    pub fn star(&self, v: usize) -> &[u32] {
        &self.edge_of[v * self.degree..(v + 1) * self.degree]
    }

    pub fn is_bipartite(&self) -> bool {
        self.coloring.is_some()
    }

    pub fn coloring(&self) -> Option<&[bool]> {
        self.coloring.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        if self.n == 0 {
            return true;
        }
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w as usize);
                }
            }
        }
        count == self.n
    }

    /// Number of directed edges `(v, i)` with `v·s_i = v`.
    pub fn loop_count(&self) -> usize {
        (0..self.n * self.degree)
            .filter(|&d| self.targets[d] as usize == d / self.degree)
            .count()
    }

    /// Undirected edge permutation induced by `(v, i) ↦ (vp[v], gp[i])`,
    /// checked to be well defined on both halves of every edge and
    /// bijective.
    pub fn edge_perm(&self, vp: &[u32], gp: &[usize]) -> Result<Vec<u32>, GraphError> {
        let mut out = Vec::with_capacity(self.num_edges());
        let mut hit = vec![false; self.num_edges()];
        for e in 0..self.num_edges() {
            let (v, i) = self.edge_endpoint(e);
            let w = self.target(v, i);
            let a = self.edge_id(vp[v] as usize, gp[i]);
            let b = self.edge_id(vp[w] as usize, gp[self.gen_inverse[i]]);
            if a != b || self.target(vp[v] as usize, gp[i]) != vp[w] as usize {
                return Err(GraphError::PairingBroken(v, i));
            }
            if std::mem::replace(&mut hit[a], true) {
                return Err(GraphError::NotBijective);
            }
            out.push(a as u32);
        }
        Ok(out)
    }

    /// BFS spanning tree from vertex 0: `(parent, label)` per vertex in BFS
    /// order, with `v = parent·s_label`.
    pub fn bfs_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::with_capacity(self.n);
        if self.n == 0 {
            return out;
        }
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.degree {
                let w = self.target(v, i);
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, v, i));
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// The vertex map `φ` with `φ(0) = start` and `φ(v·s_i) = φ(v)·s_{π(i)}`,
    /// built along the BFS tree. For a Cayley graph with vertex 0 the
    /// identity, `start = s_j` and `π = id` give left translation by `s_j`;
    /// `start = 0` and `π` induced by an automorphism fixing the generating
    /// set give that automorphism. Consistency on non-tree edges is left to
    /// [`Adjacency::edge_perm`].
    pub fn walk_map(&self, start: usize, pi: &[usize]) -> Vec<u32> {
        let mut phi = vec![u32::MAX; self.n];
        if self.n == 0 {
            return phi;
        }
        phi[0] = start as u32;
        for (v, parent, i) in self.bfs_tree() {
            phi[v] = self.target(phi[parent] as usize, pi[i]) as u32;
        }
        phi
    }

    /// Size of the orbit of edge 0 under the group generated by `perms`.
    pub fn edge_orbit_size(&self, perms: &[Vec<u32>]) -> usize {
        orbit_size(self.num_edges(), perms)
    }

    /// Text export: header `"|V| |E| degree"`, then `"u v gen_index"` per
    /// edge in id order.
    pub fn write_edges<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n, self.num_edges(), self.degree)?;
        for e in 0..self.num_edges() {
            let (v, i) = self.edge_endpoint(e);
            writeln!(w, "{} {} {}", v, self.target(v, i), i)?;
        }
        Ok(())
    }
}

/// Orbit of point 0 under the permutations; 0 for an empty set.
pub fn orbit_size(n: usize, perms: &[Vec<u32>]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p[x] as usize;
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

fn two_coloring(n: usize, degree: usize, targets: &[u32]) -> Option<Vec<bool>> {
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].expect("colored");
            for &w in &targets[v * degree..(v + 1) * degree] {
                match color[w as usize] {
                    None => {
                        color[w as usize] = Some(!c);
                        queue.push_back(w as usize);
                    }
                    Some(x) if x == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.expect("colored")).collect())
}

/// A Cayley graph with its vertex labels.
#[derive(Clone, Debug)]
pub struct CayleyGraph<V> {
    vertices: Vec<V>,
    index: HashMap<V, u32>,
    adj: Adjacency,
}

impl<V: Clone + Eq + Hash> CayleyGraph<V> {
    /// BFS closure from `identity` under right multiplication by `gens`,
    /// numbering vertices in discovery order.
    pub fn generate<F>(identity: V, gens: &[V], mul: F, cap: usize) -> Result<Self, GraphError>
    where
        F: Fn(&V, &V) -> V,
    {
        if gens.is_empty() {
            return Err(GraphError::NoGenerators);
        }
        if gens.contains(&identity) {
            return Err(GraphError::IdentityGenerator);
        }
        let gen_inverse = gens
            .iter()
            .enumerate()
            .map(|(i, s)| {
                gens.iter()
                    .position(|t| mul(s, t) == identity)
                    .ok_or(GraphError::NotSymmetric(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let degree = gens.len();
        let mut vertices = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut targets = Vec::new();
        let mut next = 0;
        while next < vertices.len() {
            let v = vertices[next].clone();
            for s in gens {
                let w = mul(&v, s);
                let id = match index.get(&w) {
                    Some(&id) => id,
                    None => {
                        if vertices.len() >= cap {
                            return Err(GraphError::CapExceeded(cap));
                        }
                        let id = vertices.len() as u32;
                        index.insert(w.clone(), id);
                        vertices.push(w);
                        id
                    }
                };
                targets.push(id);
            }
            next += 1;
        }
        let adj = Adjacency::new(vertices.len(), degree, targets, gen_inverse);
        Ok(Self {
            vertices,
            index,
            adj,
        })
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &V) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    /// The vertex permutation induced by `f`, failing if some image is not a
    /// vertex or two vertices collide.
    pub fn vertex_perm(&self, f: impl Fn(&V) -> V) -> Result<Vec<u32>, GraphError> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut hit = vec![false; self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            let j = self
                .vertex_index(&f(v))
                .ok_or(GraphError::VertexOutside(i))?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(GraphError::NotBijective);
            }
            out.push(j as u32);
        }
        Ok(out)
    }
}
