use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::gates::check_dim;
use crate::state::StateVector;

/// Which qudit pairs receive a controlled-Z interaction, plus optional
/// per-vertex initial states (default `|+>`).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    d: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
    inputs: Vec<Option<StateVector>>,
}

impl ClusterGraph {
    /// Builds a simple graph. Self-loops, out-of-range vertices and repeated
    /// edges (in either orientation) are rejected.
    pub fn new(d: usize, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_dim(d)?;
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if out.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
            }
            out.push((u, v));
        }
        Ok(Self {
            d,
            n,
            edges: out,
            inputs: vec![None; n],
        })
    }

    pub fn edgeless(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, [])
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn linear(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, (1..n).map(|v| (v - 1, v)))
    }

    /// Erdos-Renyi graph: each of the `n(n-1)/2` pairs is an edge with probability `p`.
    pub fn random(d: usize, n: usize, p: f64, rng: &mut impl Rng) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Self::new(d, n, edges)
    }

    /// Rectangular grid; vertex `(r, c)` has index `r * cols + c`.
    pub fn grid(d: usize, rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(d, rows * cols, edges)
    }

    /// Replaces the initial state of vertex `v`.
    pub fn with_input(mut self, v: usize, state: StateVector) -> Result<Self> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        if state.num_qudits() != 1 || state.dim() != self.d {
            return Err(Error::ShapeMismatch {
                expected: format!("single qudit of dimension {}", self.d),
                found: format!("{} qudits of dimension {}", state.num_qudits(), state.dim()),
            });
        }
        self.inputs[v] = Some(state);
        Ok(self)
    }

    pub fn without_inputs(&self) -> Self {
        Self {
            inputs: vec![None; self.n],
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn input(&self, v: usize) -> Option<&StateVector> {
        self.inputs.get(v).and_then(Option::as_ref)
    }

    pub fn has_custom_inputs(&self) -> bool {
        self.inputs.iter().any(Option::is_some)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Deletes vertex `q` and its incident edges; higher indices shift down by one.
    pub fn without_vertex(&self, q: usize) -> Result<Self> {
        self.check_vertex(q)?;
        let relabel = |v: usize| if v > q { v - 1 } else { v };
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != q && b != q)
            .map(|&(a, b)| (relabel(a), relabel(b)));
        let mut g = Self::new(self.d, self.n - 1, edges)?;
        g.inputs = self
            .inputs
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != q)
            .map(|(_, s)| s.clone())
            .collect();
        Ok(g)
    }

    /// Same graph with the edge list in a different order.
    pub fn with_edge_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.edges.len() {
            return Err(Error::InvalidArgument("edge order has the wrong length".into()));
        }
        let mut g = Self::new(self.d, self.n, order.iter().map(|&i| self.edges[i]))?;
        g.inputs = self.inputs.clone();
        Ok(g)
    }

    /// Parses the text graph format:
    ///
    /// ```text
    /// # comment
    /// d=3 n=4
    /// 0 1
    /// 1 2
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut edge_lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match header {
                None => header = Some(parse_header(line).map_err(err)?),
                Some((_, n)) => {
                    let fields: Vec<&str> = line.split_whitespace().collect();
                    if fields.len() != 2 {
                        return Err(err(format!("expected `<u> <v>`, found `{line}`")));
                    }
                    let parse_vertex = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| err(format!("invalid vertex `{s}`")))
                    };
                    let (u, v) = (parse_vertex(fields[0])?, parse_vertex(fields[1])?);
                    if u >= n || v >= n {
                        return Err(err(format!("vertex out of range for n={n} in `{line}`")));
                    }
                    if u == v {
                        return Err(err(format!("self-loop on vertex {u}")));
                    }
                    if edges
                        .iter()
                        .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
                    {
                        return Err(err(format!("duplicate edge {u}-{v}")));
                    }
                    edges.push((u, v));
                    edge_lines.push(line_no);
                }
            }
        }
        let (d, n) = header.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `d=<int> n=<int>` header".into(),
        })?;
        Self::new(d, n, edges).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("d={} n={}\n", self.d, self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, usize), String> {
    let mut d = None;
    let mut n = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("expected `key=value` in header, found `{field}`"))?;
        let value: usize = value
            .parse()
            .map_err(|_| format!("invalid integer `{value}` for `{key}`"))?;
        match key {
            "d" => d = Some(value),
            "n" => n = Some(value),
            _ => return Err(format!("unknown header key `{key}`")),
        }
    }
    match (d, n) {
        (Some(d), Some(_)) if d < 2 => Err(format!("dimension d={d} must be at least 2")),
        (Some(d), Some(n)) => Ok((d, n)),
        _ => Err("header must be `d=<int> n=<int>`".into()),
    }
}
