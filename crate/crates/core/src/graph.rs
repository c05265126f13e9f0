//! Simple undirected graphs, the edge-list file format and the synthetic
//! instance generators (grid, net, bipartite, random).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors raised while building, parsing or generating a graph.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid instance label `{0}`")]
    BadLabel(String),
    #[error("instance class `{0}` cannot be generated; load it from an edge-list file")]
    NotGeneratable(String),
}

/// Immutable simple undirected graph stored as sorted adjacency lists.
///
/// Vertices are `0..n`. There are no self-loops and no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Edge positions are reported as
    /// 1-based `line` numbers in errors (the edge's index + 1).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut builder = Builder::new(n);
        for (idx, &(u, v)) in edges.iter().enumerate() {
            builder.add(u, v, idx + 1)?;
        }
        Ok(builder.finish())
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            num_edges: 0,
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut builder = Builder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                builder.insert(u, v);
            }
        }
        builder.finish()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Open neighborhood N(v), sorted ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Serializes to the edge-list format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.num_vertices(), self.num_edges());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

struct Builder {
    n: usize,
    seen: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            n,
            seen: BTreeSet::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, line: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::OutOfRange {
                    line,
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        if !self.seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
        Ok(())
    }

    /// Insert for generators, which never produce invalid pairs.
    fn insert(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.seen.insert((u.min(v), u.max(v)));
    }

    fn finish(self) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.seen {
            adj[u].push(v);
            adj[v].push(u);
        }
        for ns in &mut adj {
            ns.sort_unstable();
        }
        Graph {
            adj,
            num_edges: self.seen.len(),
        }
    }
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines
/// `u v` with 0-based vertex indices. Blank lines and lines starting with
/// `#` are skipped; CRLF line endings are accepted.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        msg: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(header, header_line)?;

    let mut builder = Builder::new(n);
    let mut count = 0;
    let mut last_line = header_line;
    for (line, body) in lines {
        if count == m {
            return Err(GraphError::Malformed {
                line,
                msg: format!("more than the declared {m} edges"),
            });
        }
        let (u, v) = parse_pair(body, line)?;
        builder.add(u, v, line)?;
        count += 1;
        last_line = line;
    }
    if count < m {
        return Err(GraphError::Malformed {
            line: last_line,
            msg: format!("expected {m} edges, found {count}"),
        });
    }
    Ok(builder.finish())
}

fn parse_pair(body: &str, line: usize) -> Result<(usize, usize), GraphError> {
    let mut fields = body.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = fields.next().ok_or(GraphError::Malformed {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Malformed {
            line,
            msg: format!("`{tok}` is not a non-negative integer"),
        })
    };
    let a = next()?;
    let b = next()?;
    if fields.next().is_some() {
        return Err(GraphError::Malformed {
            line,
            msg: "expected exactly two integers".into(),
        });
    }
    Ok((a, b))
}

fn check_dims(rows: usize, cols: usize) -> Result<(), GraphError> {
    if rows == 0 || cols == 0 {
        return Err(GraphError::ZeroDimension { rows, cols });
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::BadProbability(p));
    }
    Ok(())
}

fn lattice(rows: usize, cols: usize, diagonals: bool) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut builder = Builder::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                builder.insert(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows {
                builder.insert(id(r, c), id(r + 1, c));
            }
            if diagonals && r + 1 < rows && c + 1 < cols {
                builder.insert(id(r, c), id(r + 1, c + 1));
                builder.insert(id(r, c + 1), id(r + 1, c));
            }
        }
    }
    builder.finish()
}

/// `rows x cols` 4-neighbor lattice; cell `(r, c)` is vertex `r * cols + c`.
pub fn generate_grid(rows: usize, cols: usize) -> Result<Graph, GraphError> {
    check_dims(rows, cols)?;
    Ok(lattice(rows, cols, false))
}

/// Grid plus both diagonals of every unit cell.
pub fn generate_net(rows: usize, cols: usize) -> Result<Graph, GraphError> {
    check_dims(rows, cols)?;
    Ok(lattice(rows, cols, true))
}

/// Seeded generator used by every randomized instance class: ChaCha8
/// seeded through `seed_from_u64`, which is platform independent.
pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bipartite graph with sides `0..a` and `a..a+b`. Cross pairs are
/// visited in row-major order and each becomes an edge when a uniform draw
/// in `[0, 1)` is below `p`.
pub fn generate_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    check_probability(p)?;
    let mut rng = instance_rng(seed);
    let mut builder = Builder::new(a + b);
    for u in 0..a {
        for v in 0..b {
            if rng.gen::<f64>() < p {
                builder.insert(u, a + v);
            }
        }
    }
    Ok(builder.finish())
}

/// G(n, p): pairs `u < v` in lexicographic order, one draw each.
pub fn generate_random(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    check_probability(p)?;
    let mut rng = instance_rng(seed);
    let mut builder = Builder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                builder.insert(u, v);
            }
        }
    }
    Ok(builder.finish())
}

/// Instance classes used in the benchmark sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceClass {
    Bipartite,
    Grid,
    Net,
    Planar,
    Random,
    Recursive,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 6] = [
        InstanceClass::Bipartite,
        InstanceClass::Grid,
        InstanceClass::Net,
        InstanceClass::Planar,
        InstanceClass::Random,
        InstanceClass::Recursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceClass::Bipartite => "bipartite",
            InstanceClass::Grid => "grid",
            InstanceClass::Net => "net",
            InstanceClass::Planar => "planar",
            InstanceClass::Random => "random",
            InstanceClass::Recursive => "recursive",
        }
    }
}

impl FromStr for InstanceClass {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| GraphError::BadLabel(s.to_string()))
    }
}

/// Instance label: `<class>-<dims>[-<densityPercent>][@<seed>]`, where
/// `<dims>` is one or more positive integers joined by `x`.
///
/// Examples: `grid-3x4`, `net-10x10`, `bipartite-100x100-10@7`,
/// `random-50-20@1`, `planar-100`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceLabel {
    pub class: InstanceClass,
    pub dims: Vec<usize>,
    pub density_percent: Option<u32>,
    pub seed: Option<u64>,
}

impl InstanceLabel {
    /// Builds the graph this label describes. Planar and recursive
    /// instances have no generator and must be read from a file.
    pub fn generate(&self) -> Result<Graph, GraphError> {
        let bad = || GraphError::BadLabel(self.to_string());
        let density = || {
            self.density_percent
                .map(|d| f64::from(d) / 100.0)
                .ok_or_else(bad)
        };
        let seed = self.seed.unwrap_or(0);
        match (self.class, self.dims.as_slice()) {
            (InstanceClass::Grid, &[r, c]) => generate_grid(r, c),
            (InstanceClass::Net, &[r, c]) => generate_net(r, c),
            (InstanceClass::Bipartite, &[a, b]) => generate_bipartite(a, b, density()?, seed),
            (InstanceClass::Random, &[n]) => generate_random(n, density()?, seed),
            (InstanceClass::Planar | InstanceClass::Recursive, _) => {
                Err(GraphError::NotGeneratable(self.class.name().to_string()))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for InstanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-", self.class.name())?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{d}")?;
        }
        if let Some(p) = self.density_percent {
            write!(f, "-{p}")?;
        }
        if let Some(s) = self.seed {
            write!(f, "@{s}")?;
        }
        Ok(())
    }
}

impl FromStr for InstanceLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadLabel(s.to_string());
        let (body, seed) = match s.split_once('@') {
            Some((body, seed)) => (body, Some(seed.parse::<u64>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let mut parts = body.split('-');
        let class: InstanceClass = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let dims = parts
            .next()
            .ok_or_else(bad)?
            .split('x')
            .map(|d| d.parse::<usize>().ok().filter(|&d| d > 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        let density_percent = match parts.next() {
            Some(p) => Some(
                p.parse::<u32>()
                    .ok()
                    .filter(|&p| p <= 100)
                    .ok_or_else(bad)?,
            ),
            None => None,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(InstanceLabel {
            class,
            dims,
            density_percent,
            seed,
        })
    }
}

/// The six-vertex, nine-edge example graph with A..F mapped to 0..5.
/// Its SRDP and STRDP optima are 2 and 4.
pub fn example_graph() -> Graph {
    Graph::from_edges(
        6,
        &[
            (0, 1),
            (0, 5),
            (1, 2),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
        ],
    )
    .expect("static edge list is valid")
}
