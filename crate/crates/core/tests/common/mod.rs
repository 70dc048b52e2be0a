//! Independent reference implementations and fixtures shared by the
//! integration tests. Nothing here calls into the library's algorithms; the
//! oracles work on plain `Vec<i8>`, `Vec<i64>` and `Vec<f64>`.

#![allow(dead_code)]

pub mod algebra;

use std::path::{Path, PathBuf};

use graphhd::{basis_vector, tie_break_signs, Dataset, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn mutag() -> Dataset {
    graphhd::load_tudataset(data_dir().join("MUTAG"), "MUTAG").expect("vendored MUTAG")
}

/// Random simple graph with `n` vertices; each pair is an edge with
/// probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Adjacency lists with ascending neighbors, built from scratch.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|&(u, v)| (u as usize, v as usize)).collect()
}

/// Power iteration on the dense Google matrix
/// `G = d * M + (1 - d) / n * J`, where column `j` of `M` spreads vertex
/// `j`'s mass evenly over its neighbors, or over all vertices if it has none.
pub fn dense_pagerank(n: usize, edges: &[(usize, usize)], iterations: usize, damping: f64) -> Vec<f64> {
    let adj = adjacency(n, edges);
    let mut m = vec![vec![0.0f64; n]; n];
    for j in 0..n {
        if adj[j].is_empty() {
            for row in m.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        } else {
            for &i in &adj[j] {
                m[i][j] = 1.0 / adj[j].len() as f64;
            }
        }
    }
    let google: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| damping * x + (1.0 - damping) / n as f64).collect())
        .collect();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        x = google
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
    }
    let total: f64 = x.iter().sum();
    x.iter().map(|v| v / total).collect()
}

/// Sparse PageRank written out loop by loop. Floating-point operations happen
/// in the same order as in the library, so results agree bit for bit.
pub fn naive_pagerank(n: usize, edges: &[(usize, usize)], iterations: usize, damping: f64) -> Vec<f64> {
    let adj = adjacency(n, edges);
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    for _ in 0..iterations {
        let mut dangling = 0.0;
        for j in 0..n {
            if adj[j].is_empty() {
                dangling += x[j];
            }
        }
        let mut next = vec![0.0; n];
        for i in 0..n {
            let mut s = 0.0;
            for &j in &adj[i] {
                s += x[j] / adj[j].len() as f64;
            }
            next[i] = (1.0 - damping) / nf + damping * (s + dangling / nf);
        }
        x = next;
    }
    let mut total = 0.0;
    for v in &x {
        total += v;
    }
    x.iter().map(|v| v / total).collect()
}

/// Position of each vertex when sorted by descending score, ties by index.
pub fn naive_ranks(scores: &[f64]) -> Vec<usize> {
    let n = scores.len();
    let mut rank = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if scores[j] > scores[i] || (scores[j] == scores[i] && j < i) {
                rank[i] += 1;
            }
        }
    }
    rank
}

pub fn sign_majority(counts: &[i64], ties: &[i8]) -> Vec<i8> {
    counts
        .iter()
        .zip(ties)
        .map(|(&c, &t)| match c {
            c if c > 0 => 1,
            c if c < 0 => -1,
            _ => t,
        })
        .collect()
}

/// Result of the reference train-and-predict run.
pub struct OraclePipeline {
    pub class_counts: Vec<Vec<i64>>,
    pub class_sizes: Vec<usize>,
    pub labels: Vec<usize>,
    pub similarities: Vec<Vec<f64>>,
}

/// Straightforward graph encoding: vertex hypervectors by PageRank rank,
/// edge hypervectors as element-wise products, graph hypervector as the sign
/// of their sum. `None` for an edgeless graph.
pub fn oracle_encode(
    n: usize,
    edges: &[(usize, usize)],
    dim: usize,
    seed: u64,
    iterations: usize,
    damping: f64,
) -> Option<Vec<i8>> {
    if edges.is_empty() {
        return None;
    }
    let ranks = naive_ranks(&naive_pagerank(n, edges, iterations, damping));
    let hv: Vec<Vec<i8>> = ranks
        .iter()
        .map(|&r| basis_vector(seed, dim, r).unwrap().to_signs())
        .collect();
    let mut counts = vec![0i64; dim];
    for &(u, v) in edges {
        for j in 0..dim {
            counts[j] += i64::from(hv[u][j] * hv[v][j]);
        }
    }
    let ties = tie_break_signs(seed, dim).unwrap().to_signs();
    Some(sign_majority(&counts, &ties))
}

pub fn oracle_pipeline(
    train: &[(&Graph, usize)],
    k: usize,
    test: &[&Graph],
    dim: usize,
    seed: u64,
    iterations: usize,
    damping: f64,
) -> OraclePipeline {
    let mut class_counts = vec![vec![0i64; dim]; k];
    let mut class_sizes = vec![0usize; k];
    for &(g, label) in train {
        if let Some(h) = oracle_encode(g.vertex_count(), &edge_list(g), dim, seed, iterations, damping) {
            for j in 0..dim {
                class_counts[label][j] += i64::from(h[j]);
            }
            class_sizes[label] += 1;
        }
    }
    let mut majority = 0;
    for c in 0..k {
        if class_sizes[c] > class_sizes[majority] {
            majority = c;
        }
    }
    let mut labels = Vec::new();
    let mut similarities = Vec::new();
    for g in test {
        match oracle_encode(g.vertex_count(), &edge_list(g), dim, seed, iterations, damping) {
            None => {
                labels.push(majority);
                similarities.push(vec![0.0; k]);
            }
            Some(q) => {
                let sims: Vec<f64> = class_counts
                    .iter()
                    .map(|c| {
                        let dot: i64 = c.iter().zip(&q).map(|(&a, &b)| a * i64::from(b)).sum();
                        let norm: i64 = c.iter().map(|a| a * a).sum();
                        dot as f64 / (dim as f64 * norm as f64).sqrt()
                    })
                    .collect();
                let mut best = 0;
                for c in 1..k {
                    if sims[c] > sims[best] {
                        best = c;
                    }
                }
                labels.push(best);
                similarities.push(sims);
            }
        }
    }
    OraclePipeline {
        class_counts,
        class_sizes,
        labels,
        similarities,
    }
}

/// Small labelled fixture: paths, cycles and stars on 4 to 8 vertices, plus
/// one edgeless graph.
pub fn small_fixture(seed: u64) -> (Vec<Graph>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..9 {
        let n = rng.random_range(4..=8);
        let (g, label) = match i % 3 {
            0 => (Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap(), 0),
            1 => (Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap(), 1),
            _ => (Graph::new(n, (1..n).map(|v| (0, v))).unwrap(), 2),
        };
        graphs.push(g);
        labels.push(label);
    }
    graphs.push(Graph::new(3, []).unwrap());
    labels.push(0);
    (graphs, labels)
}

/// Checks `value` against the subset of JSON Schema used by the files in
/// `schemas/`: `type`, `const`, `required`, `properties`,
/// `additionalProperties: false`, `items`, `minItems`, `minimum`, `maximum`,
/// `exclusiveMinimum`, `exclusiveMaximum` and local `$ref`s.
pub fn validate_schema(root: &Value, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    let schema = match schema.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let pointer = r.strip_prefix('#').ok_or_else(|| format!("non-local $ref {r}"))?;
            root.pointer(pointer).ok_or_else(|| format!("dangling $ref {r}"))?
        }
        None => schema,
    };
    if let Some(c) = schema.get("const") {
        if c != value {
            return Err(format!("{path}: expected {c}, found {value}"));
        }
    }
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            other => return Err(format!("unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {t}, found {value}"));
        }
    }
    if let Some(x) = value.as_f64() {
        let bound = |key: &str| schema.get(key).and_then(Value::as_f64);
        if bound("minimum").is_some_and(|m| x < m)
            || bound("maximum").is_some_and(|m| x > m)
            || bound("exclusiveMinimum").is_some_and(|m| x <= m)
            || bound("exclusiveMaximum").is_some_and(|m| x >= m)
        {
            return Err(format!("{path}: {x} out of range"));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = req.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        for (key, v) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => validate_schema(root, sub, v, &format!("{path}.{key}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected {key}"))
                }
                None => {}
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(items) = schema.get("items") {
            for (i, v) in arr.iter().enumerate() {
                validate_schema(root, items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn load_schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}
