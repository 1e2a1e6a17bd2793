use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Propagation delays must stay strictly below this fraction of a period.
pub const DELAY_CAP: f64 = 0.5;

/// Undirected connection with its propagation delay. Always `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub delay: f64,
}

/// Undirected graph of oscillators with per-edge delays.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    n: usize,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

fn check_delay(delay: f64) -> Result<()> {
    if !delay.is_finite() || !(0.0..DELAY_CAP).contains(&delay) {
        return Err(Error::invalid(format!(
            "delay {delay} must satisfy 0 <= delay < {DELAY_CAP} (delay cap)"
        )));
    }
    Ok(())
}

impl NetworkTopology {
    /// Builds a topology from `(a, b, delay)` triples, rejecting self-loops,
    /// duplicates, out-of-range indices and delays outside `[0, DELAY_CAP)`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut list: Vec<Edge> = Vec::new();
        for (a, b, delay) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) refers to an oscillator outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop on oscillator {a}")));
            }
            check_delay(delay)?;
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if list.iter().any(|e| e.a == a && e.b == b) {
                return Err(Error::invalid(format!("duplicate edge ({a}, {b})")));
            }
            list.push(Edge { a, b, delay });
        }
        list.sort_by_key(|e| (e.a, e.b));
        let mut neighbors = vec![Vec::new(); n];
        for e in &list {
            neighbors[e.a].push((e.b, e.delay));
            neighbors[e.b].push((e.a, e.delay));
        }
        for adj in &mut neighbors {
            adj.sort_by_key(|&(j, _)| j);
        }
        Ok(Self {
            n,
            edges: list,
            neighbors,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b, 0.0)));
        Self::new(n, edges).expect("complete graph is well formed")
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`; a single edge for `n = 2`.
    pub fn ring(n: usize) -> Self {
        let edges: Vec<_> = match n {
            0 | 1 => Vec::new(),
            2 => vec![(0, 1, 0.0)],
            _ => (0..n).map(|i| (i, (i + 1) % n, 0.0)).collect(),
        };
        Self::new(n, edges).expect("ring is well formed")
    }

    /// G(n, p) random graph: each pair is connected independently with probability `p`.
    pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("edge probability must lie in [0, 1], got {p}")));
        }
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_range(0.0..1.0) < p {
                    edges.push((a, b, 0.0));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn set_uniform_delay(&mut self, delay: f64) -> Result<()> {
        check_delay(delay)?;
        for e in &mut self.edges {
            e.delay = delay;
        }
        for adj in &mut self.neighbors {
            for (_, d) in adj.iter_mut() {
                *d = delay;
            }
        }
        Ok(())
    }

    pub fn set_edge_delay(&mut self, a: usize, b: usize, delay: f64) -> Result<()> {
        check_delay(delay)?;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let edge = self
            .edges
            .iter_mut()
            .find(|e| e.a == lo && e.b == hi)
            .ok_or_else(|| Error::invalid(format!("no edge ({a}, {b})")))?;
        edge.delay = delay;
        for (i, j) in [(lo, hi), (hi, lo)] {
            for entry in self.neighbors[i].iter_mut().filter(|(k, _)| *k == j) {
                entry.1 = delay;
            }
        }
        Ok(())
    }

    pub fn oscillators(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `i` with the delay of the connecting edge, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn max_delay(&self) -> f64 {
        self.edges.iter().map(|e| e.delay).fold(0.0, f64::max)
    }
}
