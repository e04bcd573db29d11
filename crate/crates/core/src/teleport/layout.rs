//! Recovers logical wires from a cluster graph and a measurement order.
//!
//! Every measured vertex teleports its logical state to one neighbour (its
//! successor). Successors are distinct, so the vertices split into chains; each
//! chain is a logical wire running from an input vertex to an unmeasured output
//! vertex. Remaining edges act as controlled-Z gates between wires and must join
//! two vertices that are wire heads at a common time.

use crate::cluster::ClusterGraph;
use crate::error::{Error, Result};

use super::pattern::{MeasurementPattern, PatternStep};

const NEVER: usize = usize::MAX;

/// A non-link edge used as a two-qudit gate after `time` measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interaction {
    pub u: usize,
    pub v: usize,
    pub time: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireLayout {
    /// Vertex chains, ordered by their first (input) vertex.
    pub wires: Vec<Vec<usize>>,
    /// Wire index of every vertex.
    pub wire_of: Vec<usize>,
    pub interactions: Vec<Interaction>,
}

impl WireLayout {
    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.wires.iter().map(|w| w[0]).collect()
    }

    pub fn outputs(&self) -> Vec<usize> {
        self.wires.iter().map(|w| w[w.len() - 1]).collect()
    }
}

enum Rejection {
    Topology(String),
    Pattern(String),
}

struct Search<'a> {
    g: &'a ClusterGraph,
    neighbors: Vec<Vec<usize>>,
    order: Vec<usize>,
    time: Vec<usize>,
    explicit: Vec<Interaction>,
    succ: Vec<Option<usize>>,
    used: Vec<bool>,
    rejection: Option<Rejection>,
}

/// Infers the wire layout of `pattern` on `g`.
pub fn infer_layout(g: &ClusterGraph, pattern: &MeasurementPattern) -> Result<WireLayout> {
    if pattern.dim() != g.dim() {
        return Err(Error::PatternMismatch(format!(
            "pattern dimension {} differs from cluster dimension {}",
            pattern.dim(),
            g.dim()
        )));
    }
    let n = g.num_vertices();
    let mut time = vec![NEVER; n];
    let mut order = Vec::new();
    let mut explicit = Vec::new();
    for step in pattern.steps() {
        match *step {
            PatternStep::Measure { qudit, .. } => {
                if qudit >= n {
                    return Err(Error::PatternMismatch(format!(
                        "measured qudit {qudit} is not in the {n}-vertex cluster"
                    )));
                }
                if g.neighbors(qudit).is_empty() {
                    return Err(Error::PatternMismatch(format!(
                        "qudit {qudit} is not entangled with any other qudit"
                    )));
                }
                time[qudit] = order.len();
                order.push(qudit);
            }
            PatternStep::Interact { q1, q2 } => {
                if q1 >= n || q2 >= n || !g.has_edge(q1, q2) {
                    return Err(Error::PatternMismatch(format!(
                        "interaction {q1}-{q2} is not an edge of the cluster"
                    )));
                }
                if explicit
                    .iter()
                    .any(|e: &Interaction| (e.u, e.v) == (q1, q2) || (e.u, e.v) == (q2, q1))
                {
                    return Err(Error::PatternMismatch(format!("interaction {q1}-{q2} is declared twice")));
                }
                explicit.push(Interaction {
                    u: q1,
                    v: q2,
                    time: order.len(),
                });
            }
        }
    }
    let mut search = Search {
        g,
        neighbors: (0..n).map(|v| g.neighbors(v)).collect(),
        order,
        time,
        explicit,
        succ: vec![None; n],
        used: vec![false; n],
        rejection: None,
    };
    if let Some(layout) = search.assign(0) {
        return Ok(layout);
    }
    Err(match search.rejection {
        Some(Rejection::Pattern(msg)) => Error::PatternMismatch(msg),
        Some(Rejection::Topology(msg)) => Error::UnsupportedTopology(msg),
        None => Error::UnsupportedTopology(
            "no assignment of teleport links turns the cluster into logical wires".into(),
        ),
    })
}

impl Search<'_> {
    fn assign(&mut self, i: usize) -> Option<WireLayout> {
        if i == self.order.len() {
            return self.validate();
        }
        let q = self.order[i];
        for k in 0..self.neighbors[q].len() {
            let s = self.neighbors[q][k];
            // the successor must still be alive when q is measured
            let later = self.time[s] == NEVER || self.time[s] > self.time[q];
            if self.used[s] || !later {
                continue;
            }
            self.used[s] = true;
            self.succ[q] = Some(s);
            if let Some(layout) = self.assign(i + 1) {
                return Some(layout);
            }
            self.used[s] = false;
            self.succ[q] = None;
        }
        None
    }

    fn reject(&mut self, r: Rejection) -> Option<WireLayout> {
        // pattern-level complaints are more specific than topology ones
        if !matches!(self.rejection, Some(Rejection::Pattern(_))) {
            self.rejection = Some(r);
        }
        None
    }

    fn validate(&mut self) -> Option<WireLayout> {
        let n = self.g.num_vertices();
        let mut wires = Vec::new();
        let mut wire_of = vec![NEVER; n];
        for start in (0..n).filter(|&v| !self.used[v]) {
            let mut chain = vec![start];
            let mut v = start;
            while let Some(s) = self.succ[v] {
                chain.push(s);
                v = s;
            }
            for &v in &chain {
                wire_of[v] = wires.len();
            }
            wires.push(chain);
        }
        if wire_of.contains(&NEVER) {
            return self.reject(Rejection::Topology("teleport links would form a cycle".into()));
        }
        let len = wires[0].len();
        if wires.iter().any(|w| w.len() != len) {
            return self.reject(Rejection::Topology(format!(
                "the cluster does not split into logical wires of equal length: {wires:?}"
            )));
        }
        let mut pred = vec![None; n];
        for (q, s) in self.succ.iter().enumerate() {
            if let Some(s) = s {
                pred[*s] = Some(q);
            }
        }
        let head_from = |v: usize| pred[v].map_or(0, |p| self.time[p] + 1);
        let head_until = |v: usize| self.time[v];
        let is_link = |u: usize, v: usize| self.succ[u] == Some(v) || self.succ[v] == Some(u);

        let mut interactions = Vec::new();
        for &(u, v) in self.g.edges() {
            if is_link(u, v) {
                if self.explicit.iter().any(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)) {
                    return self.reject(Rejection::Pattern(format!(
                        "edge {u}-{v} carries a teleport and cannot be an interaction"
                    )));
                }
                continue;
            }
            let from = head_from(u).max(head_from(v));
            let until = head_until(u).min(head_until(v));
            if from > until {
                return self.reject(Rejection::Topology(format!(
                    "edge {u}-{v} joins qudits that are never simultaneously wire heads"
                )));
            }
            let declared = self
                .explicit
                .iter()
                .find(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u));
            let time = match declared {
                Some(e) if e.time < from || e.time > until => {
                    return self.reject(Rejection::Pattern(format!(
                        "interaction {u}-{v} is declared after {} measurements but is only \
                         available between {from} and {until}",
                        e.time
                    )));
                }
                Some(e) => e.time,
                None => from,
            };
            interactions.push(Interaction { u, v, time });
        }
        interactions.sort_by_key(|e| e.time);
        Some(WireLayout {
            wires,
            wire_of,
            interactions,
        })
    }
}
