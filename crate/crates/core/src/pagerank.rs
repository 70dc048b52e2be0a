//! Fixed-iteration PageRank on undirected graphs and the centrality rank used
//! as a cross-graph vertex identity.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_ITERATIONS: usize = 10;

/// Per-vertex PageRank scores; a probability distribution over vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityScores {
    pub scores: Vec<f64>,
    pub iterations_run: usize,
}

/// `rank[i]` is vertex `i`'s position when vertices are sorted by decreasing
/// centrality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAssignment {
    pub rank: Vec<usize>,
}

/// Runs exactly `iterations` synchronous power-method steps from the uniform
/// distribution:
///
/// `x'[i] = (1 - damping) / n + damping * (sum_{j in N(i)} x[j] / deg(j) + dangling / n)`
///
/// where `dangling` is the mass sitting on degree-0 vertices. Each undirected
/// edge acts as two directed links. The result is rescaled to sum to one.
pub fn pagerank(g: &Graph, iterations: usize, damping: f64) -> Result<CentralityScores> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("PageRank needs at least one iteration".into()));
    }
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidArgument(format!("damping {damping} outside (0, 1)")));
    }
    let nf = n as f64;
    let base = (1.0 - damping) / nf;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    // x[j] / deg(j), reused by every neighbor of j.
    let mut share = vec![0.0; n];
    for _ in 0..iterations {
        let mut dangling = 0.0;
        for j in 0..n {
            let d = g.degree(j);
            if d == 0 {
                dangling += x[j];
                share[j] = 0.0;
            } else {
                share[j] = x[j] / d as f64;
            }
        }
        for (i, out) in next.iter_mut().enumerate() {
            let sum: f64 = g.neighbors(i).iter().map(|&j| share[j as usize]).sum();
            *out = base + damping * (sum + dangling / nf);
        }
        std::mem::swap(&mut x, &mut next);
    }
    let total: f64 = x.iter().sum();
    for s in &mut x {
        *s /= total;
    }
    Ok(CentralityScores {
        scores: x,
        iterations_run: iterations,
    })
}

/// Orders vertices by decreasing score, breaking exact ties by ascending
/// vertex index, and returns each vertex's position in that order.
pub fn rank_vertices(c: &CentralityScores) -> RankAssignment {
    let scores = &c.scores;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut rank = vec![0; scores.len()];
    for (position, &v) in order.iter().enumerate() {
        rank[v] = position;
    }
    RankAssignment { rank }
}
