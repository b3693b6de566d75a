//! Undirected interaction networks: Erdős–Rényi and Barabási–Albert
//! generators plus a plain edge-list text format.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Simple undirected graph stored as sorted adjacency lists.
///
/// Symmetric, loop-free and without duplicate edges. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph { adjacency }
    }

    /// Builds a graph from an edge list. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::NodeOutOfRange { node: i.max(j), n });
            }
            if i == j {
                return Err(Error::config(format!("self-loop on node {i}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for (i, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::config(format!("duplicate edge at node {i}")));
            }
        }
        Ok(Graph { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        self.neighbors(i).map(<[usize]>::len)
    }

    /// Sorted neighbor list of node `i`.
    pub fn neighbors(&self, i: usize) -> Result<&[usize]> {
        self.adjacency
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::NodeOutOfRange { node: i, n: self.n() })
    }

    /// Unchecked neighbor access for hot loops; panics if `i >= n`.
    #[inline]
    pub(crate) fn adj(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.n() as f64
    }

    /// Serializes as `n <count>` followed by one `i j` line per edge, `i < j`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let n = match lines.next() {
            Some((_, header)) => {
                let mut parts = header.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some("n"), Some(count), None) => count
                        .parse::<usize>()
                        .map_err(|e| Error::parse(Some(1), format!("bad node count: {e}")))?,
                    _ => return Err(Error::parse(Some(1), "expected header `n <count>`")),
                }
            }
            None => return Err(Error::parse(None, "empty edge list")),
        };
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(Error::parse(Some(lineno), "expected `i j`")),
            };
            let i: usize = a
                .parse()
                .map_err(|e| Error::parse(Some(lineno), format!("{e}")))?;
            let j: usize = b
                .parse()
                .map_err(|e| Error::parse(Some(lineno), format!("{e}")))?;
            if i >= j {
                return Err(Error::parse(Some(lineno), "edges must be written with i < j"));
            }
            edges.push((i, j));
        }
        Graph::from_edges(n, edges).map_err(|e| Error::parse(None, e.to_string()))
    }
}

/// Network model and size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TopologySpec {
    /// G(n, p) with `p = mean_degree / (n - 1)`.
    Er { n: usize, mean_degree: f64 },
    /// Preferential attachment grown from a complete core of `m_attach + 1` nodes.
    Ba { n: usize, m_attach: usize },
}

impl TopologySpec {
    pub fn n(&self) -> usize {
        match *self {
            TopologySpec::Er { n, .. } | TopologySpec::Ba { n, .. } => n,
        }
    }

    pub fn kind_label(&self) -> &'static str {
        match self {
            TopologySpec::Er { .. } => "er",
            TopologySpec::Ba { .. } => "ba",
        }
    }

    /// Mean degree for ER, attachment count for BA.
    pub fn connectivity(&self) -> f64 {
        match *self {
            TopologySpec::Er { mean_degree, .. } => mean_degree,
            TopologySpec::Ba { m_attach, .. } => m_attach as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TopologySpec::Er { n, mean_degree } => check_er(n, mean_degree),
            TopologySpec::Ba { n, m_attach } => check_ba(n, m_attach),
        }
    }

    pub fn generate(&self, rng_seed: u64) -> Result<Graph> {
        match *self {
            TopologySpec::Er { n, mean_degree } => generate_er(n, mean_degree, rng_seed),
            TopologySpec::Ba { n, m_attach } => generate_ba(n, m_attach, rng_seed),
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TopologySpec::Er { n, mean_degree } => write!(f, "er(n={n},k={mean_degree:?})"),
            TopologySpec::Ba { n, m_attach } => write!(f, "ba(n={n},m={m_attach})"),
        }
    }
}

fn check_er(n: usize, mean_degree: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::config(format!("ER graph needs n >= 2, got {n}")));
    }
    // mean_degree == n - 1 is the complete graph (p = 1).
    if !(mean_degree > 0.0 && mean_degree <= (n - 1) as f64) {
        return Err(Error::config(format!(
            "ER mean_degree must lie in (0, n-1] = (0, {}], got {mean_degree}",
            n - 1
        )));
    }
    Ok(())
}

fn check_ba(n: usize, m_attach: usize) -> Result<()> {
    if m_attach < 1 || n <= m_attach {
        return Err(Error::config(format!(
            "BA graph needs n > m_attach >= 1, got n={n}, m_attach={m_attach}"
        )));
    }
    Ok(())
}

/// Erdős–Rényi G(n, p) with edge probability `mean_degree / (n - 1)`.
pub fn generate_er(n: usize, mean_degree: f64, rng_seed: u64) -> Result<Graph> {
    check_er(n, mean_degree)?;
    let p = mean_degree / (n - 1) as f64;
    let mut rng = seed::rng(rng_seed);
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    // pushes happen in increasing j for i, and increasing i for j: already sorted
    Ok(Graph { adjacency })
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a complete graph on `m_attach + 1` nodes. Each later node
/// draws targets proportionally to degree, redrawing duplicates, until it has
/// `m_attach` distinct targets.
pub fn generate_ba(n: usize, m_attach: usize, rng_seed: u64) -> Result<Graph> {
    check_ba(n, m_attach)?;
    let core = m_attach + 1;
    let mut rng = seed::rng(rng_seed);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    // one entry per edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (core * m_attach / 2 + n * m_attach));
    for i in 0..core {
        for j in (i + 1)..core {
            adjacency[i].push(j);
            adjacency[j].push(i);
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets = Vec::with_capacity(m_attach);
    for new in core..n {
        targets.clear();
        while targets.len() < m_attach {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            adjacency[new].push(t);
            adjacency[t].push(new);
            endpoints.push(new);
            endpoints.push(t);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph { adjacency })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_simple_symmetric(g: &Graph) {
        for i in 0..g.n() {
            let nb = g.neighbors(i).unwrap();
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "sorted and unique");
            for &j in nb {
                assert_ne!(i, j);
                assert!(g.neighbors(j).unwrap().binary_search(&i).is_ok());
            }
        }
    }

    #[test]
    fn er_two_nodes_forces_the_edge() {
        let g = generate_er(2, 1.0, 3).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0).unwrap(), &[1]);
    }

    #[test]
    fn er_is_deterministic() {
        let a = generate_er(100, 5.0, 42).unwrap();
        let b = generate_er(100, 5.0, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_er(100, 5.0, 43).unwrap());
    }

    #[test]
    fn er_rejects_bad_parameters() {
        assert!(generate_er(1, 0.5, 0).is_err());
        assert!(generate_er(100, 0.0, 0).is_err());
        assert!(generate_er(100, 99.5, 0).is_err());
        assert!(generate_er(100, f64::NAN, 0).is_err());
    }

    #[test]
    fn ba_four_nodes_three_links_is_k4() {
        let g = generate_ba(4, 3, 9).unwrap();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn ba_edge_count_is_exact() {
        for seed in 0..20 {
            let g = generate_ba(300, 3, seed).unwrap();
            assert_eq!(g.edge_count(), 6 + (300 - 4) * 3);
            assert_simple_symmetric(&g);
        }
    }

    #[test]
    fn ba_rejects_bad_parameters() {
        assert!(generate_ba(3, 3, 0).is_err());
        assert!(generate_ba(10, 0, 0).is_err());
    }

    #[test]
    fn degree_queries() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.degree(0).unwrap(), 3);
        let g = Graph::empty(3);
        assert_eq!(g.degree(1).unwrap(), 0);
        assert!(g.neighbors(1).unwrap().is_empty());
        assert!(matches!(g.degree(3), Err(Error::NodeOutOfRange { node: 3, n: 3 })));
    }

    #[test]
    fn handshake_on_er() {
        let g = generate_er(100, 5.0, 7).unwrap();
        let total: usize = (0..g.n()).map(|i| g.degree(i).unwrap()).sum();
        assert_eq!(total % 2, 0);
        assert_eq!(total, 2 * g.edge_count());
        assert_simple_symmetric(&g);
    }

    #[test]
    fn from_edges_rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(4, [(2, 0), (1, 3)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "n 4\n0 2\n1 3\n");
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
        assert!(Graph::from_edge_list("n 3\n2 1\n").is_err());
        let err = Graph::from_edge_list("n 3\n0 1\nfoo\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
