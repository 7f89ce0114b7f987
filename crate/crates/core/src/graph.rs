//! Finite simple undirected graphs as adjacency lists.
//!
//! Vertices are dense 0-based indices; labels only exist in the edge-list
//! file format. Graphs are immutable after construction and every
//! constructor enforces the representation invariants: sorted adjacency,
//! symmetry, no self-loops, no duplicates, indices in range.

use std::collections::VecDeque;
use std::fmt;

/// Immutable simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// An unordered pair of adjacent vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop(usize),
    VertexOutOfRange { vertex: usize, count: usize },
    InvalidParameter(String),
    Parse { line: usize, msg: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::VertexOutOfRange { vertex, count } => {
                write!(f, "vertex {vertex} out of range for {count} vertices")
            }
            GraphError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            GraphError::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Built-in graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// `Star(n)` has `n` leaves attached to vertex 0.
    Star(usize),
    Hypercube(u32),
    Petersen,
    Dodecahedral,
}

/// Builds a member of a built-in family, or rejects parameters below the
/// family minimum.
pub fn generate(family: Family) -> Result<Graph, GraphError> {
    let param = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(GraphError::InvalidParameter(msg.to_string()))
        }
    };
    match family {
        Family::Path(n) => {
            param(n >= 1, "path requires n >= 1")?;
            Graph::from_edge_list((1..n).map(|i| (i - 1, i)), Some(n))
        }
        Family::Cycle(n) => {
            param(n >= 3, "cycle requires n >= 3")?;
            Graph::from_edge_list((0..n).map(|i| (i, (i + 1) % n)), None)
        }
        Family::Complete(n) => {
            param(n >= 3, "complete requires n >= 3")?;
            Graph::from_edge_list((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))), None)
        }
        Family::Star(n) => {
            param(n >= 3, "star requires n >= 3 leaves")?;
            Graph::from_edge_list((1..=n).map(|i| (0, i)), None)
        }
        Family::Hypercube(d) => {
            param(d >= 1, "hypercube requires d >= 1")?;
            param(d <= 20, "hypercube dimension too large")?;
            let n = 1usize << d;
            Graph::from_edge_list(
                (0..n).flat_map(move |i| {
                    (0..d)
                        .map(move |b| (i, i ^ (1 << b)))
                        .filter(move |&(i, j)| i < j)
                }),
                Some(n),
            )
        }
        Family::Petersen => {
            // Outer 5-cycle, spokes, inner pentagram.
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edge_list(edges, Some(10))
        }
        Family::Dodecahedral => {
            // Skeleton of the regular dodecahedron: 20 vertices, 30 edges,
            // 3-regular, girth 5.
            let adj: [[usize; 3]; 20] = [
                [2, 3, 4],
                [5, 6, 7],
                [0, 8, 9],
                [0, 10, 12],
                [0, 11, 13],
                [1, 14, 15],
                [1, 16, 18],
                [1, 17, 19],
                [2, 10, 17],
                [2, 11, 16],
                [3, 8, 19],
                [4, 9, 18],
                [3, 13, 14],
                [4, 12, 15],
                [5, 12, 19],
                [5, 13, 18],
                [6, 9, 17],
                [7, 8, 16],
                [6, 11, 15],
                [7, 10, 14],
            ];
            let edges = adj
                .iter()
                .enumerate()
                .flat_map(|(u, row)| row.iter().map(move |&v| (u, v)));
            Graph::from_edge_list(edges, Some(20))
        }
    }
}

impl Graph {
    /// Builds a graph from unordered vertex pairs. Duplicate pairs and both
    /// orientations collapse to a single edge; the vertex count defaults to
    /// one past the largest index mentioned.
    pub fn from_edge_list(
        pairs: impl IntoIterator<Item = (usize, usize)>,
        vertex_count: Option<usize>,
    ) -> Result<Graph, GraphError> {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        for &(u, v) in &pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }
        let needed = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = match vertex_count {
            Some(n) => {
                if needed > n {
                    let vertex = pairs
                        .iter()
                        .flat_map(|&(u, v)| [u, v])
                        .find(|&w| w >= n)
                        .unwrap();
                    return Err(GraphError::VertexOutOfRange { vertex, count: n });
                }
                n
            }
            None => needed,
        };
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = Graph { adj };
        g.assert_invariants();
        Ok(g)
    }

    /// Representation invariants; violation is a constructor bug.
    fn assert_invariants(&self) {
        let n = self.adj.len();
        for (u, list) in self.adj.iter().enumerate() {
            for window in list.windows(2) {
                assert!(window[0] < window[1], "adjacency of {u} not sorted/deduped");
            }
            for &v in list {
                assert!(v < n, "neighbor {v} out of range");
                assert!(v != u, "self-loop at {u}");
                assert!(
                    self.adj[v].binary_search(&u).is_ok(),
                    "asymmetric edge ({u},{v})"
                );
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&v| u < v)
                .map(move |&v| Edge { u, v })
        })
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>, GraphError> {
        let n = self.adj.len();
        if source >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: source,
                count: n,
            });
        }
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.len() {
            0 => true,
            _ => self.distances_from(0).unwrap().iter().all(Option::is_some),
        }
    }

    /// Length of the shortest cycle, or `None` for forests.
    ///
    /// One BFS per start vertex; a non-tree edge `(u,v)` seen from start `s`
    /// witnesses a closed walk of length `d(s,u) + d(s,v) + 1`, and the
    /// minimum over all starts is exact.
    pub fn girth(&self) -> Option<usize> {
        let n = self.adj.len();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            dist.fill(usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let cycle = dist[u] + dist[v] + 1;
                        if best.is_none_or(|b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    /// Common degree if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut degrees = self.adj.iter().map(Vec::len);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Cartesian product; vertex `(a, b)` becomes index `a * |V_H| + b`.
    pub fn cartesian_product(&self, h: &Graph) -> Graph {
        let nh = h.vertex_count();
        let n = self.vertex_count() * nh;
        let mut edges = Vec::new();
        for a in 0..self.vertex_count() {
            for b in 0..nh {
                for &b2 in h.neighbors(b) {
                    if b2 > b {
                        edges.push((a * nh + b, a * nh + b2));
                    }
                }
                for &a2 in self.neighbors(a) {
                    if a2 > a {
                        edges.push((a * nh + b, a2 * nh + b));
                    }
                }
            }
        }
        Graph::from_edge_list(edges, Some(n)).expect("product of valid graphs is valid")
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts
    /// a comment, blank lines are skipped, and an optional leading
    /// `vertices N` directive pins the vertex count.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut vertex_count: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut saw_content = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap();
            if first == "vertices" {
                if saw_content {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "'vertices' directive must come first".to_string(),
                    });
                }
                let n = tokens
                    .next()
                    .ok_or_else(|| GraphError::Parse {
                        line: line_no,
                        msg: "missing count after 'vertices'".to_string(),
                    })?
                    .parse()
                    .map_err(|_| GraphError::Parse {
                        line: line_no,
                        msg: "bad vertex count".to_string(),
                    })?;
                if tokens.next().is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "trailing tokens after vertex count".to_string(),
                    });
                }
                vertex_count = Some(n);
                saw_content = true;
                continue;
            }
            saw_content = true;
            let parse_vertex = |t: &str| {
                t.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: line_no,
                    msg: format!("'{t}' is not a vertex index"),
                })
            };
            let u = parse_vertex(first)?;
            let v = parse_vertex(tokens.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                msg: "expected two vertex indices".to_string(),
            })?)?;
            if tokens.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "more than two tokens on edge line".to_string(),
                });
            }
            pairs.push((u, v));
        }
        Graph::from_edge_list(pairs, vertex_count)
    }

    /// Edge-list text: `vertices N` directive, then `u v` lines with
    /// `u < v`, lexicographically sorted.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("vertices {}\n", self.vertex_count());
        for e in self.edges() {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph({} vertices, {} edges)",
            self.vertex_count(),
            self.edge_count()
        )
    }
}
