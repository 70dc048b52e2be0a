//! Seeded synthetic datasets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Dataset, Graph};

/// Generator for graph `index` of a dataset drawn with `seed`.
fn graph_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// One G(n, p) sample: every unordered vertex pair is an edge independently
/// with probability `p`.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside (0, 1)")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// `n_graphs` Erdős–Rényi graphs on `n_vertices` vertices with labels
/// assigned round-robin over `n_classes`. Graph `i` is drawn from its own
/// generator stream, so the result depends only on the arguments.
pub fn generate_er_dataset(
    n_vertices: usize,
    n_graphs: usize,
    n_classes: usize,
    edge_prob: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_vertices == 0 || n_graphs == 0 || n_classes == 0 {
        return Err(Error::InvalidArgument(
            "vertex, graph and class counts must be positive".into(),
        ));
    }
    if !n_graphs.is_multiple_of(n_classes) {
        return Err(Error::InvalidArgument(format!(
            "{n_graphs} graphs cannot be split evenly over {n_classes} classes"
        )));
    }
    let graphs = (0..n_graphs)
        .map(|i| erdos_renyi(n_vertices, edge_prob, &mut graph_rng(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..n_graphs).map(|i| i % n_classes).collect();
    Dataset::new(format!("ER_n{n_vertices}_p{edge_prob}"), graphs, labels)
}

fn add_noise(n: usize, edges: &mut Vec<(usize, usize)>, rng: &mut ChaCha8Rng, from: usize) {
    let extra = rng.random_range(1..=2);
    for _ in 0..extra {
        let u = rng.random_range(from..n);
        let v = rng.random_range(from..n);
        edges.push((u, v));
    }
}

/// A two-class structural benchmark. Class 0 graphs are disjoint triangles
/// on randomly shuffled vertices, class 1 graphs are stars; both get one or
/// two random extra edges. Graph sizes vary between 9 and 15 vertices and
/// labels alternate, starting with class 0.
pub fn triangles_vs_stars(n_graphs: usize, seed: u64) -> Result<Dataset> {
    if n_graphs < 2 || !n_graphs.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "need a positive even number of graphs, got {n_graphs}"
        )));
    }
    let mut graphs = Vec::with_capacity(n_graphs);
    let mut labels = Vec::with_capacity(n_graphs);
    for i in 0..n_graphs {
        let mut rng = graph_rng(seed, i);
        let n = rng.random_range(9..=15);
        let mut edges = Vec::new();
        if i % 2 == 0 {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for t in order.chunks_exact(3) {
                edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
            }
            add_noise(n, &mut edges, &mut rng, 0);
        } else {
            edges.extend((1..n).map(|leaf| (0, leaf)));
            add_noise(n, &mut edges, &mut rng, 1);
        }
        graphs.push(Graph::new(n, edges)?);
        labels.push(i % 2);
    }
    Dataset::new("TRIANGLES_VS_STARS", graphs, labels)
}
