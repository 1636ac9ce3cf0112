//! Ground-truth network generation and edge-list loading.
//!
//! Adjacency convention throughout the crate: `adj[(i, j)]` is the weight of
//! the directed edge `j -> i` (the influence of node `j` on node `i`), with a
//! structurally zero diagonal. Undirected networks keep `adj` symmetric.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Weighted directed adjacency matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    adj: Array2<f64>,
    directed: bool,
}

impl Network {
    /// Build a network from an explicit adjacency matrix, validating the
    /// type invariants (square, finite, zero diagonal, symmetric when
    /// undirected).
    pub fn from_adjacency(adj: Array2<f64>, directed: bool) -> Result<Self> {
        let (rows, cols) = adj.dim();
        if rows != cols {
            return Err(Error::ShapeMismatch(format!(
                "adjacency matrix must be square, got {rows}x{cols}"
            )));
        }
        for i in 0..rows {
            if adj[(i, i)] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "adjacency diagonal must be zero (node {i})"
                )));
            }
            for j in 0..cols {
                let a = adj[(i, j)];
                if !a.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency entry ({i}, {j}) is not finite"
                    )));
                }
                if !directed && adj[(i, j)] != adj[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "undirected adjacency must be symmetric, differs at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Network {
            n: rows,
            adj,
            directed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adj(&self) -> &Array2<f64> {
        &self.adj
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Weight of the edge `from -> to` (zero if absent).
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.adj[(to, from)]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.weight(from, to) != 0.0
    }

    /// Nodes with an edge into `i`.
    pub fn in_neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.adj[(i, j)] != 0.0).collect()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.adj[(i, j)] != 0.0).count()
    }

    /// Number of edges: unordered pairs for undirected networks, ordered
    /// pairs otherwise.
    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.adj[(i, j)] != 0.0 {
                    count += 1;
                }
            }
        }
        if self.directed {
            count
        } else {
            count / 2
        }
    }

    /// The Zachary karate club network (34 nodes, 78 edges).
    pub fn zachary() -> Network {
        load_edge_list(include_str!("../fixtures/zachary.edges"))
            .expect("bundled zachary fixture is valid")
    }

    /// Bundled stand-in with the published size of the dolphin social
    /// network (62 nodes, 159 edges).
    pub fn dolphins() -> Network {
        load_edge_list(include_str!("../fixtures/dolphins.edges"))
            .expect("bundled dolphins fixture is valid")
    }

    /// Bundled stand-in with the published size of the college football
    /// network (115 nodes, 613 edges).
    pub fn football() -> Network {
        load_edge_list(include_str!("../fixtures/football.edges"))
            .expect("bundled football fixture is valid")
    }
}

fn validate_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Erdős–Rényi random network: every off-diagonal entry present
/// independently with probability `p`. Undirected networks draw one sample
/// per unordered pair and mirror it.
pub fn gen_er(n: usize, p: f64, directed: bool, seed: u64) -> Result<Network> {
    validate_probability(p, "edge probability p")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = Array2::zeros((n, n));
    if directed {
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random::<f64>() < p {
                    adj[(i, j)] = 1.0;
                }
            }
        }
    } else {
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    adj[(i, j)] = 1.0;
                    adj[(j, i)] = 1.0;
                }
            }
        }
    }
    Network::from_adjacency(adj, directed)
}

/// Barabási–Albert preferential attachment, seeded with a complete clique
/// of `m + 1` nodes; every later node attaches `m` edges.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Network> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    // The seed clique must leave room for at least one attached node.
    if m + 1 >= n {
        return Err(Error::InvalidParameter(format!(
            "seed clique of {} nodes leaves no room in a graph of {n}",
            m + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Array2<f64> = Array2::zeros((n, n));
    let mut degrees = vec![0usize; n];
    let mut add_edge = |adj: &mut Array2<f64>, degrees: &mut Vec<usize>, u: usize, v: usize| {
        adj[(u, v)] = 1.0;
        adj[(v, u)] = 1.0;
        degrees[u] += 1;
        degrees[v] += 1;
    };

    for i in 0..=m {
        for j in (i + 1)..=m {
            add_edge(&mut adj, &mut degrees, i, j);
        }
    }
    let mut total_degree = m * (m + 1);

    for new in (m + 1)..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let mut ticket = rng.random::<f64>() * total_degree as f64;
            let mut chosen = new - 1;
            for node in 0..new {
                ticket -= degrees[node] as f64;
                if ticket <= 0.0 {
                    chosen = node;
                    break;
                }
            }
            if !targets.contains(&chosen) {
                targets.push(chosen);
            }
        }
        for &t in &targets {
            add_edge(&mut adj, &mut degrees, new, t);
        }
        total_degree += 2 * m;
    }
    Network::from_adjacency(adj, false)
}

fn ring_lattice(n: usize, k: usize) -> Result<Array2<f64>> {
    if k % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "lattice degree k must be even, got {k}"
        )));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "lattice degree k = {k} must be smaller than n = {n}"
        )));
    }
    let mut adj = Array2::zeros((n, n));
    for u in 0..n {
        for d in 1..=(k / 2) {
            let v = (u + d) % n;
            adj[(u, v)] = 1.0;
            adj[(v, u)] = 1.0;
        }
    }
    Ok(adj)
}

fn degree_of(adj: &Array2<f64>, u: usize) -> usize {
    adj.row(u).iter().filter(|&&x| x != 0.0).count()
}

/// Newman–Watts small world: ring lattice plus shortcuts. For every lattice
/// edge a shortcut from its source node to a uniformly random non-neighbor
/// is added with probability `p`; no edges are removed.
pub fn gen_nw(n: usize, k: usize, p: f64, seed: u64) -> Result<Network> {
    validate_probability(p, "shortcut probability p")?;
    let mut adj = ring_lattice(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u in 0..n {
        for _d in 1..=(k / 2) {
            if rng.random::<f64>() >= p {
                continue;
            }
            if degree_of(&adj, u) >= n - 1 {
                continue;
            }
            loop {
                let w = rng.random_range(0..n);
                if w != u && adj[(u, w)] == 0.0 {
                    adj[(u, w)] = 1.0;
                    adj[(w, u)] = 1.0;
                    break;
                }
            }
        }
    }
    Network::from_adjacency(adj, false)
}

/// Watts–Strogatz small world: ring lattice with every edge rewired to a
/// uniformly random endpoint with probability `p`. The edge count is
/// preserved.
pub fn gen_ws(n: usize, k: usize, p: f64, seed: u64) -> Result<Network> {
    validate_probability(p, "rewiring probability p")?;
    let mut adj = ring_lattice(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 1..=(k / 2) {
        for u in 0..n {
            if rng.random::<f64>() >= p {
                continue;
            }
            if degree_of(&adj, u) >= n - 1 {
                continue;
            }
            let v = (u + d) % n;
            if adj[(u, v)] == 0.0 {
                // Already rewired away by an earlier pass.
                continue;
            }
            loop {
                let w = rng.random_range(0..n);
                if w != u && adj[(u, w)] == 0.0 {
                    adj[(u, v)] = 0.0;
                    adj[(v, u)] = 0.0;
                    adj[(u, w)] = 1.0;
                    adj[(w, u)] = 1.0;
                    break;
                }
            }
        }
    }
    Network::from_adjacency(adj, false)
}

/// Parse a whitespace-separated edge list: one `u v [w]` triple per line,
/// `#` comments and blank lines skipped. A line consisting of the word
/// `directed` marks the list as directed. 1-based node ids are detected by
/// the minimum index and normalized to 0-based.
pub fn load_edge_list(text: &str) -> Result<Network> {
    let mut directed = false;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.eq_ignore_ascii_case("directed") {
            directed = true;
            continue;
        }
        let mut tokens = line.split_whitespace();
        let u = parse_index(tokens.next(), lineno + 1)?;
        let v = parse_index(tokens.next(), lineno + 1)?;
        let w = match tokens.next() {
            Some(tok) => tok.parse::<f64>().map_err(|_| Error::EdgeListFormat {
                line: lineno + 1,
                msg: format!("weight `{tok}` is not a number"),
            })?,
            None => 1.0,
        };
        if let Some(extra) = tokens.next() {
            return Err(Error::EdgeListFormat {
                line: lineno + 1,
                msg: format!("unexpected trailing token `{extra}`"),
            });
        }
        if u == v {
            return Err(Error::EdgeListFormat {
                line: lineno + 1,
                msg: format!("self-loop on node {u}"),
            });
        }
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(Error::EdgeListFormat {
            line: 0,
            msg: "edge list contains no edges".into(),
        });
    }
    let min_idx = edges.iter().map(|&(u, v, _)| u.min(v)).min().unwrap();
    let offset = if min_idx >= 1 { 1 } else { 0 };
    let max_idx = edges.iter().map(|&(u, v, _)| u.max(v)).max().unwrap() - offset;
    let n = max_idx + 1;
    let mut adj = Array2::zeros((n, n));
    for (u, v, w) in edges {
        let (u, v) = (u - offset, v - offset);
        // `u v` reads as an edge u -> v, stored as adj[(v, u)].
        adj[(v, u)] = w;
        if !directed {
            adj[(u, v)] = w;
        }
    }
    Network::from_adjacency(adj, directed)
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::EdgeListFormat {
        line,
        msg: "expected two node indices".into(),
    })?;
    tok.parse::<usize>().map_err(|_| Error::EdgeListFormat {
        line,
        msg: format!("node index `{tok}` is not a nonnegative integer"),
    })
}
