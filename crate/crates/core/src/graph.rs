//! Immutable simple undirected graphs with stable edge ids.
//!
//! Vertices are `0..n`, edges are `0..m` in first-appearance order. The
//! edge-list loader normalizes raw input: comment lines are skipped,
//! self-loops are dropped, duplicate edges (in either orientation) are
//! collapsed, and vertex ids are compacted to `0..n` preserving the order
//! in which they first appear on surviving edges.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Counts of what the edge-list loader had to clean up.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizationLog {
    pub loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl NormalizationLog {
    pub fn is_clean(&self) -> bool {
        self.loops_dropped == 0 && self.duplicates_dropped == 0
    }
}

/// A simple undirected graph. Edge endpoints are stored as `(u, v)` with
/// `u < v`; `adj[v]` lists `(neighbor, edge id)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Build a graph from an explicit edge list. `n` may exceed the largest
    /// endpoint id, in which case the extra ids are isolated vertices.
    pub fn from_edges(n: usize, raw: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParam("graph needs at least one vertex".into()));
        }
        let mut seen = HashMap::with_capacity(raw.len());
        let mut edges = Vec::with_capacity(raw.len());
        for &(a, b) in raw {
            if a == b {
                return Err(Error::InvalidParam(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidParam(format!(
                    "edge ({a}, {b}) references a vertex >= n = {n}"
                )));
            }
            let e = (a.min(b), a.max(b));
            if seen.insert(e, edges.len()).is_some() {
                return Err(Error::InvalidParam(format!("duplicate edge ({a}, {b})")));
            }
            edges.push(e);
        }
        Ok(Graph::assemble(n, edges))
    }

    fn assemble(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Graph { n, edges, adj }
    }

    /// Parse an edge-list stream. Lines starting with `#` or `%` are
    /// comments; data lines carry two integer endpoints and an optional
    /// third token that is ignored.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, NormalizationLog)> {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut log = NormalizationLog::default();

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() < 2 || tokens.len() > 3 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 2 or 3 tokens, found {}", tokens.len()),
                });
            }
            let parse = |tok: &str| -> Result<u64> {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid vertex id {tok:?}"),
                })
            };
            let (ru, rv) = (parse(tokens[0])?, parse(tokens[1])?);
            if ru == rv {
                log.loops_dropped += 1;
                continue;
            }
            // Compact ids in first-appearance order, counting only vertices
            // that survive normalization.
            let next = ids.len();
            let u = *ids.entry(ru).or_insert(next);
            let next = ids.len();
            let v = *ids.entry(rv).or_insert(next);
            let e = (u.min(v), u.max(v));
            if seen.contains_key(&e) {
                log.duplicates_dropped += 1;
                continue;
            }
            seen.insert(e, edges.len());
            edges.push(e);
        }

        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok((Graph::assemble(ids.len(), edges), log))
    }

    pub fn load_edge_list_path<P: AsRef<Path>>(path: P) -> Result<(Graph, NormalizationLog)> {
        let file = File::open(path)?;
        Graph::load_edge_list(BufReader::new(file))
    }

    /// Write the normalized `u v` list, one edge per line, in edge-id order.
    /// Reloading this output reproduces an identical graph.
    pub fn write_edge_list<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = BufWriter::new(writer);
        for &(u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        w.flush()
    }

    pub fn write_edge_list_path<P: AsRef<Path>>(&self, path: P) -> std::io::Result<()> {
        self.write_edge_list(File::create(path)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of edge `e`, as `(u, v)` with `u < v`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// 2m / n.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Edge id of `{u, v}` if present.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, id)| id)
    }
}
