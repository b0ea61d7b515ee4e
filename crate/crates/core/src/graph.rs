//! Crystal graphs: breadth-first closure of a seed under the Kashiwara
//! operators, isomorphism of rooted colored graphs, and export.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{Rank, Weight};
use crate::error::{Error, Result};

/// A realization of a crystal: the operators and maps evaluated on a
/// separate element type. `None` stands for the crystal zero.
pub trait Crystal: Sync {
    type Element: Clone + Eq + Hash + Send + Sync;

    fn rank(&self) -> Rank;

    /// Whether the component through a seed is finite, so that a closure
    /// without a depth limit terminates.
    fn is_finite(&self) -> bool;

    /// Canonical serialization; injective on elements.
    fn key(&self, x: &Self::Element) -> String;

    fn f(&self, x: &Self::Element, i: usize) -> Option<Self::Element>;

    fn e(&self, x: &Self::Element, i: usize) -> Option<Self::Element>;

    fn weight(&self, x: &Self::Element) -> Weight;

    fn eps(&self, x: &Self::Element, i: usize) -> i64;

    fn phi(&self, x: &Self::Element, i: usize) -> i64;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub key: String,
    pub wt: Vec<i64>,
}

/// An `i`-colored arrow `s -> t`, meaning `f̃_i(s) = t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub s: usize,
    pub t: usize,
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub root: usize,
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_limit: Option<u64>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// A generated graph together with the elements behind its vertices.
#[derive(Debug, Clone)]
pub struct Closure<E> {
    pub graph: CrystalGraph,
    pub elements: Vec<E>,
}

impl<E> Closure<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Sequential [`bfs_generate_with`].
pub fn bfs_generate<C: Crystal>(
    model: &C,
    seed: C::Element,
    depth_limit: Option<u64>,
) -> Result<Closure<C::Element>> {
    bfs_generate_with(model, seed, depth_limit, 0)
}

enum Step {
    F,
    E,
}

/// Breadth-first closure of `seed` under every `f̃_i`, and every `ẽ_i` when
/// the model is finite and no limit is given. Vertices are numbered in
/// discovery order, children in color order. With `threads > 0` the children
/// of each layer are computed on a pool of that size; the merge is
/// sequential, so the output does not depend on scheduling.
pub fn bfs_generate_with<C: Crystal>(
    model: &C,
    seed: C::Element,
    depth_limit: Option<u64>,
    threads: usize,
) -> Result<Closure<C::Element>> {
    if depth_limit.is_none() && !model.is_finite() {
        return Err(Error::DepthRequired);
    }
    let with_e = depth_limit.is_none();
    let n = model.rank().get();

    let expand = |x: &C::Element| -> Vec<(usize, Step, C::Element, String)> {
        let mut out = Vec::new();
        for i in 1..=n {
            if let Some(y) = model.f(x, i) {
                let k = model.key(&y);
                out.push((i, Step::F, y, k));
            }
            if with_e {
                if let Some(y) = model.e(x, i) {
                    let k = model.key(&y);
                    out.push((i, Step::E, y, k));
                }
            }
        }
        out
    };

    let pool = if threads > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?,
        )
    } else {
        None
    };

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut elements = Vec::new();
    let mut edges = BTreeSet::new();

    let k = model.key(&seed);
    index.insert(k.clone(), 0);
    vertices.push(Vertex {
        key: k,
        wt: model.weight(&seed).coeffs().to_vec(),
    });
    elements.push(seed);

    let mut frontier = vec![0usize];
    let mut depth = 0u64;
    let mut truncated = false;
    while !frontier.is_empty() {
        if Some(depth) == depth_limit {
            truncated = frontier
                .iter()
                .any(|&u| (1..=n).any(|i| model.f(&elements[u], i).is_some()));
            break;
        }
        let children: Vec<Vec<_>> = match &pool {
            Some(pool) => {
                pool.install(|| frontier.par_iter().map(|&u| expand(&elements[u])).collect())
            }
            None => frontier.iter().map(|&u| expand(&elements[u])).collect(),
        };
        let mut next = Vec::new();
        for (&u, kids) in frontier.iter().zip(children) {
            for (i, step, y, key) in kids {
                let v = match index.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = vertices.len();
                        index.insert(key.clone(), v);
                        vertices.push(Vertex {
                            key,
                            wt: model.weight(&y).coeffs().to_vec(),
                        });
                        elements.push(y);
                        next.push(v);
                        v
                    }
                };
                edges.insert(match step {
                    Step::F => Edge { s: u, t: v, i },
                    Step::E => Edge { s: v, t: u, i },
                });
            }
        }
        frontier = next;
        depth += 1;
    }

    let mut edges: Vec<Edge> = edges.into_iter().collect();
    edges.sort_by_key(|e| (e.s, e.i, e.t));
    Ok(Closure {
        graph: CrystalGraph {
            root: 0,
            truncated,
            depth_limit: if truncated { depth_limit } else { None },
            vertices,
            edges,
        },
        elements,
    })
}

type Adjacency = Vec<Vec<Option<usize>>>;

impl CrystalGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn colors(&self) -> usize {
        self.edges.iter().map(|e| e.i).max().unwrap_or(0)
    }

    /// Outgoing and incoming neighbours indexed by `[vertex][color - 1]`.
    fn adjacency(&self, colors: usize) -> Result<(Adjacency, Adjacency)> {
        let mut out = vec![vec![None; colors]; self.len()];
        let mut inc = vec![vec![None; colors]; self.len()];
        for e in &self.edges {
            if e.s >= self.len() || e.t >= self.len() || e.i == 0 {
                return Err(Error::Parse(format!("edge {e:?} out of range")));
            }
            if out[e.s][e.i - 1].replace(e.t).is_some() {
                return Err(Error::Parse(format!(
                    "two {}-edges leave vertex {}",
                    e.i, e.s
                )));
            }
            if inc[e.t][e.i - 1].replace(e.s).is_some() {
                return Err(Error::Parse(format!(
                    "two {}-edges enter vertex {}",
                    e.i, e.t
                )));
            }
        }
        Ok((out, inc))
    }

    /// Undirected distance from the root; `None` for unreachable vertices.
    pub fn depths(&self) -> Vec<Option<u64>> {
        let mut nbrs = vec![Vec::new(); self.len()];
        for e in &self.edges {
            if e.s < self.len() && e.t < self.len() {
                nbrs[e.s].push(e.t);
                nbrs[e.t].push(e.s);
            }
        }
        let mut depth = vec![None; self.len()];
        if self.root >= self.len() {
            return depth;
        }
        depth[self.root] = Some(0);
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            let d = depth[u].unwrap();
            for &v in &nbrs[u] {
                if depth[v].is_none() {
                    depth[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        depth
    }

    /// Checks the structural invariants: indices in range, at most one
    /// edge of each color in and out of every vertex, connectivity from the
    /// root, and no incoming edges at the root of an untruncated graph.
    pub fn validate(&self) -> Result<()> {
        if self.root >= self.len() {
            return Err(Error::Parse("root out of range".into()));
        }
        let (_, inc) = self.adjacency(self.colors())?;
        if self.depths().iter().any(Option::is_none) {
            return Err(Error::Parse("graph is not connected from the root".into()));
        }
        if !self.truncated && inc[self.root].iter().any(Option::is_some) {
            return Err(Error::Parse("root has an incoming edge".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut g: CrystalGraph = serde_json::from_str(s)?;
        g.validate()?;
        if g.truncated && g.depth_limit.is_none() {
            g.depth_limit = g.depths().into_iter().flatten().max();
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] = [
            "blue",
            "red",
            "darkgreen",
            "orange",
            "purple",
            "brown",
            "magenta",
            "cyan",
        ];
        let mut s = String::from("digraph crystal {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{k} [label=\"{}\"];", v.key.replace('"', "\\\""));
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  v{} -> v{} [label=\"{}\", color=\"{}\"];",
                e.s,
                e.t,
                e.i,
                PALETTE[(e.i - 1) % PALETTE.len()]
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "vertices {} edges {}{}",
            self.len(),
            self.edges.len(),
            if self.truncated { " (truncated)" } else { "" }
        );
        for (k, v) in self.vertices.iter().enumerate() {
            let wt: Vec<String> = v.wt.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "{k}\t{}\twt=({})", v.key, wt.join(","));
        }
        for e in &self.edges {
            let _ = writeln!(s, "{} -{}-> {}", e.s, e.i, e.t);
        }
        s
    }
}

/// Vertices within `limit` of the root (all when `None`).
fn within(g: &CrystalGraph, limit: Option<u64>) -> Vec<bool> {
    g.depths()
        .into_iter()
        .map(|d| {
            matches!((d, limit), (Some(_), None))
                || matches!((d, limit), (Some(d), Some(l)) if d <= l)
        })
        .collect()
}

/// The color- and root-preserving isomorphism `g1 -> g2`, as a map from
/// vertex indices of `g1` to those of `g2`, if one exists. When either graph
/// is truncated, both are cut to the smaller depth limit first. With
/// `compare_weights`, matched vertices must also satisfy
/// `wt(root) - wt(v)` equal on both sides.
pub fn find_isomorphism(
    g1: &CrystalGraph,
    g2: &CrystalGraph,
    compare_weights: bool,
) -> Option<Vec<Option<usize>>> {
    let limit = [g1, g2]
        .iter()
        .filter(|g| g.truncated)
        .map(|g| g.depth_limit.unwrap_or(u64::MAX))
        .min();
    let keep1 = within(g1, limit);
    let keep2 = within(g2, limit);
    let colors = g1.colors().max(g2.colors());
    let (out1, in1) = g1.adjacency(colors).ok()?;
    let (out2, in2) = g2.adjacency(colors).ok()?;
    if keep1.iter().filter(|&&b| b).count() != keep2.iter().filter(|&&b| b).count() {
        return None;
    }
    let rel = |g: &CrystalGraph, v: usize| -> Vec<i64> {
        let r = &g.vertices[g.root].wt;
        r.iter()
            .zip(&g.vertices[v].wt)
            .map(|(a, b)| a - b)
            .collect()
    };

    let mut fwd: Vec<Option<usize>> = vec![None; g1.len()];
    let mut bwd: Vec<Option<usize>> = vec![None; g2.len()];
    let mut queue = VecDeque::new();
    let mut visit = |u: usize,
                     v: usize,
                     fwd: &mut Vec<Option<usize>>,
                     queue: &mut VecDeque<(usize, usize)>|
     -> bool {
        match (fwd[u], bwd[v]) {
            (Some(a), Some(b)) => a == v && b == u,
            (None, None) => {
                if compare_weights && rel(g1, u) != rel(g2, v) {
                    return false;
                }
                fwd[u] = Some(v);
                bwd[v] = Some(u);
                queue.push_back((u, v));
                true
            }
            _ => false,
        }
    };
    if !visit(g1.root, g2.root, &mut fwd, &mut queue) {
        return None;
    }
    while let Some((u, v)) = queue.pop_front() {
        for c in 0..colors {
            for (a, b) in [(out1[u][c], out2[v][c]), (in1[u][c], in2[v][c])] {
                let a = a.filter(|&x| keep1[x]);
                let b = b.filter(|&x| keep2[x]);
                match (a, b) {
                    (None, None) => {}
                    (Some(a), Some(b)) => {
                        if !visit(a, b, &mut fwd, &mut queue) {
                            return None;
                        }
                    }
                    _ => return None,
                }
            }
        }
    }
    let all_mapped = keep1
        .iter()
        .enumerate()
        .all(|(u, &k)| !k || fwd[u].is_some());
    all_mapped.then_some(fwd)
}

pub fn graphs_isomorphic(g1: &CrystalGraph, g2: &CrystalGraph, compare_weights: bool) -> bool {
    find_isomorphism(g1, g2, compare_weights).is_some()
}
