//! State graphs `G_s(D)`: circles as vertices, chords as edges.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Resolution, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {edge} references vertex {vertex}, but there are only {count} vertices")]
    BadVertex { edge: usize, vertex: usize, count: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// An edge of a state graph, labelled by the crossing it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub ends: (usize, usize),
    pub crossing: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// Endpoints as an unordered pair.
    pub fn pair(&self) -> (usize, usize) {
        let (u, v) = self.ends;
        (u.min(v), u.max(v))
    }

    pub fn touches(&self, vertex: usize) -> bool {
        self.ends.0 == vertex || self.ends.1 == vertex
    }
}

/// Multigraph with loops; edge order is crossing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl StateGraph {
    /// Edges are given as vertex-index pairs and labelled by position.
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let count = vertices.len();
        for (edge, &(u, v)) in edges.iter().enumerate() {
            if let Some(&vertex) = [u, v].iter().find(|&&x| x >= count) {
                return Err(GraphError::BadVertex { edge, vertex, count });
            }
        }
        let edges = edges.into_iter().enumerate().map(|(crossing, ends)| Edge { ends, crossing }).collect();
        Ok(StateGraph { vertices, edges })
    }

    /// Vertices named `T0..T{m}`.
    pub fn with_anonymous_vertices(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        StateGraph::new((0..vertex_count).map(|k| format!("T{k}")).collect(), edges)
    }

    pub fn from_resolution(resolution: &Resolution) -> Self {
        let vertices = resolution.names().iter().map(|n| n.to_string()).collect();
        let edges =
            resolution.chords().iter().enumerate().map(|(crossing, ch)| Edge { ends: ch.circles, crossing }).collect();
        StateGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn first_loop(&self) -> Option<Edge> {
        self.edges.iter().copied().find(Edge::is_loop)
    }

    pub fn has_loops(&self) -> bool {
        self.first_loop().is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        self.components() == 1
    }

    fn components(&self) -> usize {
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.ends.0, e.ends.1);
        }
        let mut labels = uf.into_labeling();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }

    pub(crate) fn check_loopless(&self) -> Result<(), GraphError> {
        match self.first_loop() {
            Some(e) => Err(GraphError::Loop { edge: e.crossing, vertex: e.ends.0 }),
            None => Ok(()),
        }
    }

    /// Loopless and connected: the input shape for `X_D` and the homotopy formula.
    pub fn check_admissible(&self) -> Result<(), GraphError> {
        self.check_loopless()?;
        if !self.is_connected() || self.vertices.is_empty() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    /// Replaces each multiedge by a single edge, keeping the least crossing label.
    pub fn simple_reduction(&self) -> Result<StateGraph, GraphError> {
        self.check_loopless()?;
        let mut kept: BTreeMap<(usize, usize), Edge> = BTreeMap::new();
        for e in &self.edges {
            kept.entry(e.pair()).or_insert(*e);
        }
        let mut edges: Vec<Edge> = kept.into_values().collect();
        edges.sort_by_key(|e| e.crossing);
        Ok(StateGraph { vertices: self.vertices.clone(), edges })
    }

    /// `|E| - |V| + 1` of a connected graph.
    pub fn cyclomatic_number(&self) -> Result<usize, GraphError> {
        if !self.is_connected() || self.vertices.is_empty() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    /// Two-colouring by breadth-first search; a loop is an odd cycle.
    pub fn is_bipartite(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        let n = self.vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            adjacency[e.ends.0].push(e.ends.1);
            adjacency[e.ends.1].push(e.ends.0);
        }
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].expect("coloured before enqueue");
                for &v in &adjacency[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Graph with one fresh vertex joined to `anchor` by `q` parallel edges,
    /// appended after the existing edges (the state graph of `D # T(2,q)`).
    pub fn with_leaf_multiedge(&self, anchor: usize, q: usize) -> StateGraph {
        let mut g = self.clone();
        let leaf = g.vertices.len();
        g.vertices.push(format!("T{leaf}"));
        let base = g.edges.len();
        g.edges.extend((0..q).map(|k| Edge { ends: (anchor, leaf), crossing: base + k }));
        g
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|e| [e.ends.0, e.ends.1]).collect(),
        })
        .expect("graph JSON serializes")
    }

    /// `{"vertices": [...], "edges": [[u,v],...]}` with vertex indices.
    pub fn from_json(text: &str) -> Result<StateGraph, GraphError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        StateGraph::new(raw.vertices, raw.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
}

pub fn build_state_graph(diagram: &Diagram, state: &State) -> Result<StateGraph, crate::diagram::DiagramError> {
    Ok(StateGraph::from_resolution(&diagram.resolve(state)?))
}

/// `G_A(D)`.
pub fn all_a_graph(diagram: &Diagram) -> StateGraph {
    StateGraph::from_resolution(&diagram.resolve_mask(0))
}

pub fn is_a_adequate(diagram: &Diagram) -> bool {
    !all_a_graph(diagram).has_loops()
}

pub fn is_b_adequate(diagram: &Diagram) -> bool {
    is_a_adequate(&diagram.mirror())
}
