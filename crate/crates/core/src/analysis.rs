//! Runs the three almost-extreme computations (closed formula, cellular
//! homology of `X_D`, direct Khovanov column) and compares them.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::homology::AbelianGroup;
use crate::homotopy::{graph_stats, homotopy_type, predicted_homology};
use crate::khovanov::{
    almost_extreme_column, euler_polynomial, j_extremes, kauffman_bracket, khovanov_table, KhovanovError, KhovanovTable,
};
use crate::presimplicial::PartialPresimplicialSet;
use crate::state_graph::{all_a_graph, is_b_adequate, GraphError};
use crate::xd::{build_xd, xd_homology_by_khovanov_degree, XdError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("diagram is not A-adequate (crossing {crossing} gives a loop in G_A){}",
        if *b_adequate { "; it is B-adequate, rerun with --auto-mirror" } else { "" })]
    NotAdequate { crossing: usize, b_adequate: bool },
    #[error(transparent)]
    Khovanov(#[from] KhovanovError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Xd(#[from] XdError),
}

/// One nonzero group at `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupEntry {
    pub i: i64,
    pub j: i64,
    pub group: AbelianGroup,
}

fn entries(table: &BTreeMap<(i64, i64), AbelianGroup>) -> Vec<GroupEntry> {
    table.iter().map(|((i, j), g)| GroupEntry { i: *i, j: *j, group: g.clone() }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub pd: String,
    pub crossings: usize,
    pub s_a_circles: usize,
    pub s_b_circles: usize,
    pub a_adequate: bool,
    pub b_adequate: bool,
    pub mirrored: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub p1: usize,
    pub bipartite: bool,
    pub j_max: i64,
    pub j_almax: i64,
    pub homotopy_type: String,
    pub formula: Vec<GroupEntry>,
    pub xd: Vec<GroupEntry>,
    pub khovanov: Vec<GroupEntry>,
    pub agreement: bool,
}

impl AnalysisReport {
    pub fn render_text(&self) -> String {
        let table = |t: &[GroupEntry]| {
            if t.is_empty() {
                "(all zero)".to_string()
            } else {
                t.iter().map(|e| format!("H_{{{},{}}} = {}", e.i, e.j, e.group)).collect::<Vec<_>>().join(", ")
            }
        };
        let mut out = String::new();
        out.push_str(&format!("diagram      {}\n", self.pd));
        out.push_str(&format!(
            "crossings    {}   |s_A| = {}   |s_B| = {}\n",
            self.crossings, self.s_a_circles, self.s_b_circles
        ));
        out.push_str(&format!("adequacy     A: {}   B: {}\n", self.a_adequate, self.b_adequate));
        if let Some(note) = &self.note {
            out.push_str(&format!("note         {note}\n"));
        }
        out.push_str(&format!(
            "G_A          {} vertices, {} edges, p1 = {}, bipartite = {}\n",
            self.graph_vertices, self.graph_edges, self.p1, self.bipartite
        ));
        out.push_str(&format!("j_max        {}   j_almax = {}\n", self.j_max, self.j_almax));
        out.push_str(&format!("|X_D|        {}\n", self.homotopy_type));
        out.push_str(&format!("formula      {}\n", table(&self.formula)));
        out.push_str(&format!("X_D          {}\n", table(&self.xd)));
        out.push_str(&format!("khovanov     {}\n", table(&self.khovanov)));
        out.push_str(&format!("agreement    {}\n", self.agreement));
        out
    }
}

/// The report together with the `X_D` it was computed from.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub xd: PartialPresimplicialSet,
}

/// Cross-checks the almost-extreme homology of `diagram`. A diagram that is
/// only B-adequate is analyzed through its mirror when `auto_mirror` is set.
pub fn analyze(diagram: &Diagram, auto_mirror: bool) -> Result<Analysis, AnalysisError> {
    let g = all_a_graph(diagram);
    let a_adequate = !g.has_loops();
    let b_adequate = is_b_adequate(diagram);
    let (work, mirrored) = match (a_adequate, b_adequate, auto_mirror) {
        (true, _, _) => (diagram.clone(), false),
        (false, true, true) => (diagram.mirror(), true),
        (false, b, _) => {
            let crossing = g.first_loop().expect("inadequate graphs have a loop").crossing;
            return Err(AnalysisError::NotAdequate { crossing, b_adequate: b });
        }
    };
    let graph = all_a_graph(&work);
    let stats = graph_stats(&graph)?;
    let c = work.crossing_count();
    let s_a = work.all_a_circles();
    let (j_max, j_almax) = j_extremes(&work);

    let homotopy = homotopy_type(&graph)?;
    let formula = predicted_homology(&homotopy, c, s_a);

    let xd = build_xd(&graph)?;
    let xd_table: BTreeMap<(i64, i64), AbelianGroup> = xd_homology_by_khovanov_degree(&graph)?
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| ((i, j_almax), g))
        .collect();

    let direct: BTreeMap<(i64, i64), AbelianGroup> = almost_extreme_column(&work)?
        .homology()?
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| ((i, j_almax), g))
        .collect();

    let agreement = formula == xd_table && xd_table == direct;
    let report = AnalysisReport {
        pd: diagram.to_pd_string(),
        crossings: diagram.crossing_count(),
        s_a_circles: diagram.all_a_circles(),
        s_b_circles: diagram.all_b_circles(),
        a_adequate,
        b_adequate,
        mirrored,
        note: mirrored.then(|| {
            "computed on the mirror diagram; all gradings, graph data and groups refer to the mirror".to_string()
        }),
        graph_vertices: stats.vertices,
        graph_edges: stats.edges,
        p1: stats.p1,
        bipartite: stats.bipartite,
        j_max,
        j_almax,
        homotopy_type: homotopy.to_string(),
        formula: entries(&formula),
        xd: entries(&xd_table),
        khovanov: entries(&direct),
        agreement,
    };
    Ok(Analysis { report, xd })
}

/// Full framed table with the Euler characteristic compared against the
/// Kauffman bracket, on chain ranks and on Betti numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub table: KhovanovTable,
    pub bracket: String,
    pub euler_ok: bool,
}

impl TableReport {
    pub fn groups(&self) -> Vec<GroupEntry> {
        entries(&self.table.groups)
    }
}

pub fn full_table(diagram: &Diagram, max_c: usize) -> Result<TableReport, AnalysisError> {
    let table = khovanov_table(diagram, max_c)?;
    let bracket = kauffman_bracket(diagram);
    let euler_ok = euler_polynomial(&table.chain_ranks) == bracket && euler_polynomial(&table.betti()) == bracket;
    Ok(TableReport { table, bracket: bracket.to_string(), euler_ok })
}
