//! Undirected simple graphs and labelled graph datasets.

use serde::Serialize;

use crate::error::{Error, Result};

/// An immutable undirected simple graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted and deduplicated.
/// Neighbor lists are kept in compressed sparse row form, each sorted
/// ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Edge direction and duplicates are
    /// collapsed and self-loops dropped; an endpoint `>= n` is an error.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canonical = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a != b {
                let (u, v) = if a < b { (a, b) } else { (b, a) };
                canonical.push((u as u32, v as u32));
            }
        }
        canonical.sort_unstable();
        canonical.dedup();
        Ok(Self::from_canonical(n, canonical))
    }

    fn from_canonical(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(u, v) in &edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self {
            n,
            edges,
            offsets,
            neighbors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, `u < v`, strictly increasing.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// The same graph with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: self.n,
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize])),
        )
    }
}

/// Graphs with dense class labels `0..k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    name: String,
    graphs: Vec<Graph>,
    labels: Vec<usize>,
    class_values: Vec<i64>,
}

/// Table-style summary of a dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetStats {
    pub graph_count: usize,
    pub class_count: usize,
    pub mean_vertices: f64,
    pub mean_edges: f64,
    pub class_histogram: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset whose class `i` carries the original label value `i`.
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Self::with_class_values(name, graphs, labels, (0..k as i64).collect())
    }

    /// Builds a dataset remembering the original label value of each dense
    /// class index. Every class must occur at least once.
    pub fn with_class_values(
        name: impl Into<String>,
        graphs: Vec<Graph>,
        labels: Vec<usize>,
        class_values: Vec<i64>,
    ) -> Result<Self> {
        if graphs.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: graphs.len(),
                right: labels.len(),
            });
        }
        let k = class_values.len();
        let mut seen = vec![false; k];
        for &l in &labels {
            if l >= k {
                return Err(Error::InvalidArgument(format!("label {l} outside 0..{k}")));
            }
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!("class {missing} has no graphs")));
        }
        Ok(Self {
            name: name.into(),
            graphs,
            labels,
            class_values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_values.len()
    }

    /// Original label value of each dense class index.
    pub fn class_values(&self) -> &[i64] {
        &self.class_values
    }

    pub fn max_vertices(&self) -> usize {
        self.graphs.iter().map(Graph::vertex_count).max().unwrap_or(0)
    }

    pub fn class_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.class_count()];
        for &l in &self.labels {
            h[l] += 1;
        }
        h
    }

    pub fn stats(&self) -> Result<DatasetStats> {
        dataset_stats(self)
    }
}

/// Graph count, class count, mean vertex and undirected edge counts, and the
/// per-class graph histogram.
pub fn dataset_stats(ds: &Dataset) -> Result<DatasetStats> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = ds.len() as f64;
    let vertices: usize = ds.graphs.iter().map(Graph::vertex_count).sum();
    let edges: usize = ds.graphs.iter().map(Graph::edge_count).sum();
    Ok(DatasetStats {
        graph_count: ds.len(),
        class_count: ds.class_count(),
        mean_vertices: vertices as f64 / n,
        mean_edges: edges as f64 / n,
        class_histogram: ds.class_histogram(),
    })
}
