//! Almost-extreme Khovanov homology of semiadequate link diagrams, computed
//! from the Khovanov complex, from the cellular chains of `X_D`, and from the
//! closed homotopy formula.

pub mod analysis;
pub mod diagram;
pub mod homology;
pub mod homotopy;
pub mod khovanov;
pub mod polynomial;
pub mod presimplicial;
pub mod state_graph;
pub mod xd;

pub use analysis::{analyze, full_table, Analysis, AnalysisError, AnalysisReport, GroupEntry, TableReport};
pub use diagram::{parse_pd, Diagram, DiagramError, Label, Resolution, State};
pub use homology::{smith_normal_form, AbelianGroup, IntegerChainComplex, SmithForm, SparseMatrix};
pub use homotopy::{homotopy_type, predicted_homology, suspend, HomotopyType};
pub use khovanov::{build_column, j_extremes, khovanov_table, KhovanovError, KhovanovTable};
pub use presimplicial::{PartialPresimplicialSet, PpsError, Violation};
pub use state_graph::{all_a_graph, build_state_graph, is_a_adequate, is_b_adequate, GraphError, StateGraph};
pub use xd::{build_xd, khovanov_degree, XdError};
