//! Simple undirected graphs, equitable partitions and their symmetrized
//! quotients, plus the graph6 / JSON / DOT formats used for I/O.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        let graph = Graph::new(g.n, g.edges.iter().map(|e| (e[0], e[1])))?;
        match g.labels {
            Some(labels) => graph.with_labels(labels),
            None => Ok(graph),
        }
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson { n: g.n, edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(), labels: g.labels }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    /// Repeated edges (in either orientation) collapse to one.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(Self { n, edges: set, adjacency, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Breadth-first distance, `None` when unreachable.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::from([from]);
        dist[from] = 0;
        while let Some(u) = queue.pop_front() {
            if u == to {
                return Some(dist[u]);
            }
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn is_regular(&self) -> bool {
        self.adjacency.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    /// Decodes one graph6 line. An optional `>>graph6<<` header is accepted.
    pub fn from_graph6(line: &str) -> Result<Self> {
        let body = line.trim().strip_prefix(">>graph6<<").unwrap_or(line.trim()).as_bytes();
        if body.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(Error::Parse("graph6 byte outside 63..=126".into()));
        }
        let (n, offset) = match body {
            [] => return Err(Error::Parse("empty graph6 string".into())),
            [126, 126, rest @ ..] if rest.len() >= 6 => (pack6(&rest[..6]), 8),
            [126, rest @ ..] if rest.len() >= 3 && rest[0] != 126 => (pack6(&rest[..3]), 4),
            [126, ..] => return Err(Error::Parse("truncated graph6 size field".into())),
            [b, ..] => ((*b - 63) as usize, 1),
        };
        let data = &body[offset..];
        let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if data.len() != needed {
            return Err(Error::Parse(format!(
                "graph6 body has {} bytes, expected {needed} for n = {n}",
                data.len()
            )));
        }
        let mut edges = Vec::new();
        let mut bit = 0usize;
        for j in 1..n {
            for i in 0..j {
                let byte = data[bit / 6] - 63;
                if byte >> (5 - bit % 6) & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        Graph::new(n, edges)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n < 258_048 {
            out.push(126);
            out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
        } else {
            out.extend([126, 126]);
            out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 is ASCII")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v} [label=\"{}\"];", self.label(v));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

fn pack6(bytes: &[u8]) -> usize {
    bytes.iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize)
}

/// Weighted graph with a symmetric nonnegative weight matrix and zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    weights: DMatrix<f64>,
}

impl WeightedGraph {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::InvalidParameter("weight matrix must be square".into()));
        }
        let n = weights.nrows();
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::SelfLoop(i));
            }
            for j in 0..n {
                let w = weights[(i, j)];
                if w < 0.0 || !w.is_finite() || w != weights[(j, i)] {
                    return Err(Error::InvalidParameter(format!("bad weight at ({i}, {j})")));
                }
            }
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[(u, v)]
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n() {
            let _ = writeln!(s, "  {v};");
        }
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                let w = self.weights[(u, v)];
                if w != 0.0 {
                    let _ = writeln!(s, "  {u} -- {v} [label=\"{w:.6}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Ordered list of disjoint, nonempty cells covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(cells: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MalformedPartition(format!("cell {i} is empty")));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::MalformedPartition(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedPartition(format!("vertex {v} is not covered")));
        }
        Ok(Self { cells, n })
    }

    pub fn discrete(n: usize) -> Self {
        Self { cells: (0..n).map(|v| vec![v]).collect(), n }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n × k` matrix whose columns are cell indicators scaled by `1/√|C|`.
    pub fn normalized_characteristic_matrix(&self) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(self.n, self.cells.len());
        for (j, cell) in self.cells.iter().enumerate() {
            let s = 1.0 / (cell.len() as f64).sqrt();
            for &v in cell {
                p[(v, j)] = s;
            }
        }
        p
    }
}

pub fn build_star(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(Error::InvalidParameter("a star needs at least one leaf".into()));
    }
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

pub fn build_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("a path needs at least one vertex".into()));
    }
    Graph::new(n, (1..n).map(|v| (v - 1, v)))
}

pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("a cycle needs at least three vertices".into()));
    }
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn build_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs a vertex".into()));
    }
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Two stars `K_{1,a+k}` and `K_{1,c+k}` with `k` leaves merged.
///
/// Vertex order: centers 0 and 1, then the `a` private leaves of 0, the `k`
/// shared neighbours, and the `c` private leaves of 1.
pub fn build_stellar(a: usize, k: usize, c: usize) -> Result<Graph> {
    if a == 0 || k == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!("X({a},{k},{c}) needs positive parameters")));
    }
    let (a_start, k_start, c_start) = (2, 2 + a, 2 + a + k);
    let n = c_start + c;
    let edges = (a_start..k_start)
        .map(|v| (0, v))
        .chain((k_start..c_start).flat_map(|v| [(0, v), (1, v)]))
        .chain((c_start..n).map(|v| (1, v)));
    Graph::new(n, edges)
}

/// The five-cell equitable partition of `X(a,k,c)` in quotient-path order:
/// a-leaves, center 0, shared cell, center 1, c-leaves.
pub fn stellar_partition(a: usize, k: usize, c: usize) -> Result<Partition> {
    if a == 0 || k == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!("X({a},{k},{c}) needs positive parameters")));
    }
    let (k_start, c_start) = (2 + a, 2 + a + k);
    Partition::new(
        vec![
            (2..k_start).collect(),
            vec![0],
            (k_start..c_start).collect(),
            vec![1],
            (c_start..c_start + c).collect(),
        ],
        c_start + c,
    )
}

/// Centers of two copies of `K_{1,a}` joined by an edge; centers are 0 and 1.
pub fn build_double_star(a: usize) -> Result<Graph> {
    if a == 0 {
        return Err(Error::InvalidParameter("double star needs a >= 1".into()));
    }
    let n = 2 * a + 2;
    let edges = std::iter::once((0, 1))
        .chain((2..2 + a).map(|v| (0, v)))
        .chain((2 + a..n).map(|v| (1, v)));
    Graph::new(n, edges)
}

/// `X □ Y` with vertex `(x, y)` at index `x * |Y| + y`.
pub fn cartesian_product(x: &Graph, y: &Graph) -> Result<Graph> {
    if x.n() == 0 || y.n() == 0 {
        return Err(Error::InvalidParameter("cartesian product of an empty graph".into()));
    }
    let m = y.n();
    let edges = (0..x.n())
        .flat_map(|xi| y.edges().map(move |(u, v)| (xi * m + u, xi * m + v)))
        .chain(x.edges().flat_map(|(u, v)| (0..m).map(move |yi| (u * m + yi, v * m + yi))));
    Graph::new(x.n() * m, edges.collect::<Vec<_>>())
}

/// Returns the counts `c[j][l]` (neighbours in cell `l` of any vertex of
/// cell `j`) when the partition is equitable, `None` otherwise.
pub fn is_equitable(x: &Graph, p: &Partition) -> Result<Option<Vec<Vec<usize>>>> {
    if p.n() != x.n() {
        return Err(Error::MalformedPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            x.n()
        )));
    }
    let mut cell_of = vec![0; x.n()];
    for (j, cell) in p.cells().iter().enumerate() {
        for &v in cell {
            cell_of[v] = j;
        }
    }
    let k = p.len();
    let count_row = |v: usize| {
        let mut row = vec![0usize; k];
        for &w in x.neighbors(v) {
            row[cell_of[w]] += 1;
        }
        row
    };
    let mut counts = Vec::with_capacity(k);
    for cell in p.cells() {
        let first = count_row(cell[0]);
        if cell[1..].iter().any(|&v| count_row(v) != first) {
            return Ok(None);
        }
        counts.push(first);
    }
    Ok(Some(counts))
}

/// Weighted graph on the cells with edge weight `√(c_jl c_lj)`.
pub fn symmetrized_quotient(x: &Graph, p: &Partition) -> Result<WeightedGraph> {
    let counts = is_equitable(x, p)?.ok_or(Error::NotEquitable)?;
    let k = p.len();
    let mut w = DMatrix::zeros(k, k);
    for j in 0..k {
        for l in 0..k {
            if j != l {
                w[(j, l)] = ((counts[j][l] * counts[l][j]) as f64).sqrt();
            }
        }
    }
    // loops inside a cell are legal for quotients in general but never arise
    // for the partitions used here; reject them rather than drop them
    if (0..k).any(|j| counts[j][j] != 0) {
        return Err(Error::InvalidParameter("quotient has loops (cell with internal edges)".into()));
    }
    WeightedGraph::new(w)
}

/// Induced subgraph on `s` (in the given order) and the map new -> old index.
pub fn induced_subgraph(x: &Graph, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
    let mut index = vec![usize::MAX; x.n()];
    for (i, &v) in s.iter().enumerate() {
        x.check_vertex(v)?;
        if index[v] != usize::MAX {
            return Err(Error::InvalidParameter(format!("vertex {v} repeated in subset")));
        }
        index[v] = i;
    }
    let edges = x
        .edges()
        .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
        .map(|(u, v)| (index[u], index[v]));
    let mut g = Graph::new(s.len(), edges.collect::<Vec<_>>())?;
    if let Some(labels) = x.labels() {
        g = g.with_labels(s.iter().map(|&v| labels[v].clone()).collect())?;
    }
    Ok((g, s.to_vec()))
}

#[cfg(test)]
impl Graph {
    // P4 as 2-0-1-3 so the middle pair sits at indices 0 and 1
    fn relabel_like_double_star(&self) -> Graph {
        let map = [2, 0, 1, 3];
        Graph::new(self.n, self.edges().map(|(u, v)| (map[u], map[v]))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(m: &DMatrix<f64>) -> usize {
        m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count()
    }

    #[test]
    fn stars() {
        let k2 = build_star(1).unwrap();
        assert_eq!((k2.n(), k2.edge_count()), (2, 1));
        let s3 = build_star(3).unwrap();
        assert_eq!(s3.degree(0), 3);
        assert_eq!(rank(&build_star(7).unwrap().adjacency_matrix()), 2);
        assert!(build_star(0).is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(build_path(1).unwrap().edge_count(), 0);
        assert_eq!(build_path(2).unwrap(), build_star(1).unwrap());
        assert!(build_path(0).is_err());
    }

    #[test]
    fn stellar_shape() {
        let x = build_stellar(3, 2, 6).unwrap();
        assert_eq!(x.n(), 13);
        assert_eq!((x.degree(0), x.degree(1)), (5, 8));
        assert!(!x.has_edge(0, 1));
        let common = x.neighbors(0).iter().filter(|v| x.neighbors(1).contains(v)).count();
        assert_eq!(common, 2);
        assert_eq!((2..13).filter(|&v| x.degree(v) == 1).count(), 9);

        let y = build_stellar(1, 4, 1).unwrap();
        assert_eq!((y.n(), y.degree(0), y.degree(1)), (8, 5, 5));
        assert!(build_stellar(0, 1, 1).is_err());
    }

    #[test]
    fn stellar_walk_count() {
        let x = build_stellar(4, 3, 5).unwrap();
        let a = x.adjacency_matrix();
        assert_eq!((&a * &a)[(0, 1)], 3.0);
    }

    #[test]
    fn cartesian_small() {
        let k2 = build_path(2).unwrap();
        let q2 = cartesian_product(&k2, &k2).unwrap();
        assert_eq!(q2.n(), 4);
        assert!((0..4).all(|v| q2.degree(v) == 2));
        assert!(q2.is_connected());

        let ladder = cartesian_product(&k2, &build_path(3).unwrap()).unwrap();
        assert_eq!(ladder.edge_count(), 7);
        // rungs join y and 3 + y
        assert!((0..3).all(|y| ladder.has_edge(y, 3 + y)));

        let x = build_stellar(16, 36, 37).unwrap();
        let z = cartesian_product(&k2, &x).unwrap();
        assert_eq!(z.n(), 182);
        assert_eq!(z.degree(0), 53);
    }

    #[test]
    fn cartesian_matches_kronecker_sum() {
        let x = build_path(3).unwrap();
        let y = build_cycle(4).unwrap();
        let z = cartesian_product(&x, &y).unwrap();
        let expected = DMatrix::identity(3, 3).kronecker(&y.adjacency_matrix())
            + x.adjacency_matrix().kronecker(&DMatrix::identity(4, 4));
        assert_eq!(z.adjacency_matrix(), expected);
    }

    #[test]
    fn equitable_partitions() {
        let x = build_stellar(3, 2, 6).unwrap();
        let p = stellar_partition(3, 2, 6).unwrap();
        let counts = is_equitable(&x, &p).unwrap().expect("equitable");
        assert_eq!(
            counts,
            vec![
                vec![0, 1, 0, 0, 0],
                vec![3, 0, 2, 0, 0],
                vec![0, 1, 0, 1, 0],
                vec![0, 0, 2, 0, 6],
                vec![0, 0, 0, 1, 0],
            ]
        );
        assert!(is_equitable(&x, &Partition::discrete(13)).unwrap().is_some());

        let p3 = build_path(3).unwrap();
        let bad = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        assert!(is_equitable(&p3, &bad).unwrap().is_none());
    }

    #[test]
    fn malformed_partitions() {
        assert!(Partition::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![], vec![0, 1]], 2).is_err());
        let g = build_path(3).unwrap();
        assert!(is_equitable(&g, &Partition::discrete(4)).is_err());
    }

    #[test]
    fn quotients() {
        let (a, k, c) = (3, 2, 6);
        let q = symmetrized_quotient(&build_stellar(a, k, c).unwrap(), &stellar_partition(a, k, c).unwrap())
            .unwrap();
        let expected = [(a as f64).sqrt(), (k as f64).sqrt(), (k as f64).sqrt(), (c as f64).sqrt()];
        for (i, w) in expected.iter().enumerate() {
            assert!((q.weight(i, i + 1) - w).abs() < 1e-15);
        }
        assert_eq!(q.weights(), &q.weights().transpose());

        let q141 = symmetrized_quotient(&build_stellar(1, 4, 1).unwrap(), &stellar_partition(1, 4, 1).unwrap())
            .unwrap();
        let path_weights: Vec<f64> = (0..4).map(|i| q141.weight(i, i + 1)).collect();
        assert_eq!(path_weights, vec![1.0, 2.0, 2.0, 1.0]);

        let c4 = build_cycle(4).unwrap();
        let disc = symmetrized_quotient(&c4, &Partition::discrete(4)).unwrap();
        assert_eq!(disc.weights(), &c4.adjacency_matrix());

        let p3 = build_path(3).unwrap();
        let bad = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        assert_eq!(symmetrized_quotient(&p3, &bad), Err(Error::NotEquitable));
    }

    #[test]
    fn quotient_symmetric_for_unequal_counts() {
        // star K_{1,4}: c_{center,leaves} = 4, c_{leaves,center} = 1
        let s = build_star(4).unwrap();
        let p = Partition::new(vec![vec![0], vec![1, 2, 3, 4]], 5).unwrap();
        let q = symmetrized_quotient(&s, &p).unwrap();
        assert_eq!(q.weight(0, 1), 2.0);
        assert_eq!(q.weight(1, 0), 2.0);
    }

    #[test]
    fn induced() {
        let x = build_stellar(3, 2, 6).unwrap();
        let (all, _) = induced_subgraph(&x, &(0..13).collect::<Vec<_>>()).unwrap();
        assert_eq!(all, x);
        let (pair, map) = induced_subgraph(&x, &[0, 1]).unwrap();
        assert_eq!((pair.n(), pair.edge_count()), (2, 0));
        assert_eq!(map, vec![0, 1]);

        let ladder = cartesian_product(&build_path(2).unwrap(), &build_path(3).unwrap()).unwrap();
        // paper labels {1,4} are indices {0,3}
        let (rung, _) = induced_subgraph(&ladder, &[0, 3]).unwrap();
        assert_eq!(rung.edge_count(), 1);
        assert!(induced_subgraph(&x, &[0, 13]).is_err());
    }

    #[test]
    fn graph_construction_errors() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert!(Graph::new(2, [(0, 2)]).is_err());
        let dup = Graph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn graph6_known_strings() {
        // P3: bits (0,1),(0,2),(1,2) = 1,0,1 -> 0b101000 + 63 = 'g'
        let p3 = Graph::from_graph6("Bg").unwrap();
        assert_eq!(p3, build_path(3).unwrap());
        assert_eq!(Graph::from_graph6("A_").unwrap(), build_path(2).unwrap());
        assert_eq!(Graph::from_graph6(">>graph6<<A_").unwrap().edge_count(), 1);
        assert_eq!(Graph::from_graph6("@").unwrap().n(), 1);
        assert!(Graph::from_graph6("A").is_err());
        assert!(Graph::from_graph6("A_?").is_err());
        assert_eq!(build_cycle(4).unwrap().to_graph6(), Graph::from_graph6(&build_cycle(4).unwrap().to_graph6()).unwrap().to_graph6());
    }

    #[test]
    fn graph6_large_header() {
        let g = build_stellar(30, 30, 30).unwrap();
        let s = g.to_graph6();
        assert!(s.starts_with('~'));
        assert_eq!(Graph::from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn json_schema() {
        let g = Graph::from_json(r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g, build_path(3).unwrap());
        let labelled = Graph::from_json(r#"{"n": 2, "edges": [[0,1]], "labels": ["x","y"]}"#).unwrap();
        assert_eq!(labelled.label(1), "y");
        assert!(Graph::from_json(r#"{"n": 2, "edges": [[0,0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n": 2, "edges": [[0,1]], "labels": ["x"]}"#).is_err());
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.adjacency_matrix(), g.adjacency_matrix());
    }

    #[test]
    fn dot_output() {
        let dot = build_path(2).unwrap().to_dot();
        assert!(dot.contains("0 -- 1;"));
        let q = symmetrized_quotient(&build_star(4).unwrap(), &Partition::new(vec![vec![0], vec![1, 2, 3, 4]], 5).unwrap())
            .unwrap();
        assert!(q.to_dot().contains("label=\"2.000000\""));
    }

    #[test]
    fn double_star_shape() {
        let g = build_double_star(2).unwrap();
        assert_eq!(g.n(), 6);
        assert!(g.has_edge(0, 1));
        assert_eq!((g.degree(0), g.degree(1)), (3, 3));
        assert_eq!(build_double_star(1).unwrap(), build_path(4).unwrap().clone().relabel_like_double_star());
    }
}
