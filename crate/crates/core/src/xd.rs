//! The partial presimplicial set `X_G` of a loopless connected multigraph.
//!
//! With edges `v_0 < ... < v_n` (`n = c - 1`), the top cells are the vertices
//! and a `k`-cell (`k < n`) is an increasing `(k+1)`-tuple of edges whose
//! complement is a nonempty set of mutually parallel edges.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::homology::AbelianGroup;
use crate::presimplicial::{PartialPresimplicialSet, PpsError};
use crate::state_graph::{GraphError, StateGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XdError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cell dimension {k} is outside -1..={max} for {c} edges")]
    DegreeRange { k: i64, c: usize, max: i64 },
    #[error("{size} parallel edges exceed the supported class size {max}")]
    ClassTooLarge { size: usize, max: usize },
    #[error(transparent)]
    Pps(#[from] PpsError),
}

/// A class of `q` parallel edges contributes `2^q - 1` cells.
const MAX_CLASS_SIZE: usize = 24;

fn tuple_name(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|e| format!("v{e}")).collect();
    format!("({})", parts.join(","))
}

/// Builds `X_G`. A graph with no edges (the unknot) gives the empty set.
pub fn build_xd(graph: &StateGraph) -> Result<PartialPresimplicialSet, XdError> {
    graph.check_admissible()?;
    let c = graph.edge_count();
    if c == 0 {
        return Ok(PartialPresimplicialSet::empty());
    }
    let n = c - 1;
    let edges = graph.edges();

    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        classes.entry(e.pair()).or_default().push(k);
    }
    let class_of: Vec<(usize, usize)> = edges.iter().map(|e| e.pair()).collect();

    // level k holds tuples of size k + 1, i.e. complements of size c - k - 1
    let mut levels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for members in classes.values() {
        if members.len() > MAX_CLASS_SIZE {
            return Err(XdError::ClassTooLarge { size: members.len(), max: MAX_CLASS_SIZE });
        }
        for subset in 1u64..1 << members.len() {
            let removed: Vec<usize> =
                (0..members.len()).filter(|b| (subset >> b) & 1 == 1).map(|b| members[b]).collect();
            let k = c - removed.len();
            if k == 0 {
                continue;
            }
            let tuple: Vec<usize> = (0..c).filter(|e| !removed.contains(e)).collect();
            levels[k - 1].push(tuple);
        }
    }
    for level in &mut levels {
        level.sort();
    }

    let mut x = PartialPresimplicialSet::new(n);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); n];
    for (k, level) in levels.iter().enumerate() {
        for tuple in level {
            let id = x.add_cell(k, tuple_name(tuple))?;
            index[k].insert(tuple.clone(), id);
        }
    }
    for j in 0..graph.vertex_count() {
        x.add_cell(n, format!("T{j}"))?;
    }

    for j in 0..graph.vertex_count() {
        for (i, e) in edges.iter().enumerate() {
            if n > 0 && e.touches(j) {
                let face: Vec<usize> = (0..c).filter(|v| *v != i).collect();
                x.set_face(n, j, i, index[n - 1][&face])?;
            }
        }
    }
    for k in 1..n {
        for (a, tuple) in levels[k].iter().enumerate() {
            let rest = (0..c).find(|e| !tuple.contains(e)).expect("complement is nonempty");
            for (i, w) in tuple.iter().enumerate() {
                if class_of[*w] == class_of[rest] {
                    let mut face = tuple.clone();
                    face.remove(i);
                    x.set_face(k, a, i, index[k - 1][&face])?;
                }
            }
        }
    }
    Ok(x)
}

/// Khovanov degree `i = 2k - c + 2` of the cells of dimension `k`.
pub fn khovanov_degree(k: i64, c: usize) -> Result<i64, XdError> {
    let max = c as i64 - 1;
    if k < -1 || k > max {
        return Err(XdError::DegreeRange { k, c, max });
    }
    Ok(2 * k - c as i64 + 2)
}

/// Reduced homology of `X_G`, keyed by Khovanov degree `i`, zeros included.
pub fn xd_homology_by_khovanov_degree(graph: &StateGraph) -> Result<BTreeMap<i64, AbelianGroup>, XdError> {
    let c = graph.edge_count();
    let x = build_xd(graph)?;
    let h = x.reduced_homology()?;
    (-1..=c as i64 - 1).map(|k| Ok((khovanov_degree(k, c)?, h.get(&k).cloned().unwrap_or_default()))).collect()
}
