//! Closed-form homotopy type of `X_G` from the statistics of `G`, and the
//! almost-extreme Khovanov groups it predicts.

use std::collections::BTreeMap;
use std::fmt;

use crate::homology::AbelianGroup;
use crate::state_graph::{GraphError, StateGraph};
use crate::xd::khovanov_degree;

/// A wedge of spheres and at most one suspended projective plane.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HomotopyType {
    /// Sphere dimension (at least -1) to multiplicity; zero multiplicities are not stored.
    spheres: BTreeMap<i64, usize>,
    /// `Some(q)` for a `Sigma^q RP^2` summand.
    rp2_suspensions: Option<usize>,
}

impl HomotopyType {
    /// The one-point space.
    pub fn point() -> Self {
        HomotopyType::default()
    }

    pub fn sphere(dim: i64) -> Self {
        HomotopyType::point().wedge_spheres(dim, 1)
    }

    pub fn suspended_rp2(q: usize) -> Self {
        HomotopyType { spheres: BTreeMap::new(), rp2_suspensions: Some(q) }
    }

    /// Adds `count` copies of `S^dim`.
    pub fn wedge_spheres(mut self, dim: i64, count: usize) -> Self {
        if count > 0 {
            assert!(dim >= -1, "sphere dimension below -1");
            *self.spheres.entry(dim).or_insert(0) += count;
        }
        self
    }

    pub fn spheres(&self) -> &BTreeMap<i64, usize> {
        &self.spheres
    }

    pub fn rp2_suspensions(&self) -> Option<usize> {
        self.rp2_suspensions
    }

    /// Reduced homology, nonzero degrees only.
    pub fn reduced_homology(&self) -> BTreeMap<i64, AbelianGroup> {
        let mut out: BTreeMap<i64, AbelianGroup> = BTreeMap::new();
        for (&d, &n) in &self.spheres {
            let g = out.entry(d).or_default();
            *g = g.plus(&AbelianGroup::free(n));
        }
        if let Some(q) = self.rp2_suspensions {
            let g = out.entry(q as i64 + 1).or_default();
            *g = g.plus(&AbelianGroup::new(0, &[2]));
        }
        out
    }
}

/// Raises every summand by `q` suspensions.
pub fn suspend(t: &HomotopyType, q: usize) -> HomotopyType {
    HomotopyType {
        spheres: t.spheres.iter().map(|(d, n)| (d + q as i64, *n)).collect(),
        rp2_suspensions: t.rp2_suspensions.map(|r| r + q),
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .spheres
            .iter()
            .map(|(d, n)| if *n == 1 { format!("S^{d}") } else { format!("vee({n} x S^{d})") })
            .collect();
        match self.rp2_suspensions {
            Some(0) => parts.push("RP^2".into()),
            Some(q) => parts.push(format!("susp^{q}(RP^2)")),
            None => {}
        }
        if parts.is_empty() {
            f.write_str("pt")
        } else {
            f.write_str(&parts.join(" ∨ "))
        }
    }
}

/// Statistics of a loopless connected graph that decide the homotopy type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    /// Cyclomatic number of the simple reduction.
    pub p1: usize,
    pub bipartite: bool,
}

pub fn graph_stats(graph: &StateGraph) -> Result<GraphStats, GraphError> {
    graph.check_admissible()?;
    let simple = graph.simple_reduction()?;
    Ok(GraphStats {
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        p1: simple.cyclomatic_number()?,
        bipartite: graph.is_bipartite(),
    })
}

/// `vee(p1 x S^{c-2}) ∨ S^{c-1}` for bipartite `G`, otherwise
/// `vee((p1-1) x S^{c-2}) ∨ Sigma^{c-3} RP^2`, with `c = |E(G)|`.
pub fn homotopy_type(graph: &StateGraph) -> Result<HomotopyType, GraphError> {
    let s = graph_stats(graph)?;
    let c = s.edges as i64;
    if s.bipartite {
        Ok(HomotopyType::point().wedge_spheres(c - 2, s.p1).wedge_spheres(c - 1, 1))
    } else {
        assert!(c >= 3 && s.p1 >= 1, "an odd cycle needs three edges");
        let mut t = HomotopyType::suspended_rp2((c - 3) as usize);
        t = t.wedge_spheres(c - 2, s.p1 - 1);
        Ok(t)
    }
}

/// Nonzero groups `H_{i, j_almax}` of a diagram with `c` crossings and `s_a`
/// all-A circles, read off from the reduced homology of `t`.
pub fn predicted_homology(t: &HomotopyType, c: usize, s_a: usize) -> BTreeMap<(i64, i64), AbelianGroup> {
    let j_almax = c as i64 + 2 * s_a as i64 - 4;
    t.reduced_homology()
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(k, g)| {
            let i = khovanov_degree(k, c).expect("homotopy type lives in cell range");
            ((i, j_almax), g)
        })
        .collect()
}
