//! Partial presimplicial sets: graded cells with partially defined face maps,
//! the face-map axiom, and cellular chain complexes of pointed realizations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::homology::{AbelianGroup, HomologyError, IntegerChainComplex, SparseMatrix};

/// First failure of `d_i d_j = d_{j-1} d_i`, found on `cell` of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub dim: usize,
    pub cell: String,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d_{i} d_{j} != d_{jm} d_{i} on {cell} (dimension {dim})",
            i = self.i,
            j = self.j,
            jm = self.j - 1,
            cell = self.cell,
            dim = self.dim
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PpsError {
    #[error("malformed PPS JSON: {0}")]
    Json(String),
    #[error("invalid PPS: {0}")]
    Schema(String),
    #[error("face d_{index} of {cell} (dimension {dim}) points to {target:?}, which is not a cell of dimension {}", dim - 1)]
    DanglingFace { dim: usize, cell: String, index: usize, target: String },
    #[error("face axiom fails: {0}")]
    Violation(Violation),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Cells `X_0, ..., X_n` with partial faces `d_i : X_k -> X_{k-1}`, `0 <= i <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPresimplicialSet {
    cells: Vec<Vec<String>>,
    /// `faces[k][a][i]` for `k >= 1`; `faces[0]` is empty per cell.
    faces: Vec<Vec<Vec<Option<usize>>>>,
    index: Vec<HashMap<String, usize>>,
}

impl PartialPresimplicialSet {
    /// No cells in any dimension up to `top_dim`.
    pub fn new(top_dim: usize) -> Self {
        PartialPresimplicialSet {
            cells: vec![Vec::new(); top_dim + 1],
            faces: vec![Vec::new(); top_dim + 1],
            index: vec![HashMap::new(); top_dim + 1],
        }
    }

    /// The empty set, whose realization is empty (`S^-1`).
    pub fn empty() -> Self {
        PartialPresimplicialSet::new(0)
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn cells(&self, dim: usize) -> &[String] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells(dim).len()
    }

    pub fn cell_index(&self, dim: usize, name: &str) -> Option<usize> {
        self.index.get(dim)?.get(name).copied()
    }

    /// Adds a cell with all faces undefined; returns its index.
    pub fn add_cell(&mut self, dim: usize, name: impl Into<String>) -> Result<usize, PpsError> {
        let name = name.into();
        if dim > self.top_dim() {
            return Err(PpsError::Schema(format!("dimension {dim} exceeds top_dim {}", self.top_dim())));
        }
        if self.index[dim].contains_key(&name) {
            return Err(PpsError::Schema(format!("duplicate cell {name:?} in dimension {dim}")));
        }
        let k = self.cells[dim].len();
        self.index[dim].insert(name.clone(), k);
        self.cells[dim].push(name);
        self.faces[dim].push(vec![None; if dim == 0 { 0 } else { dim + 1 }]);
        Ok(k)
    }

    /// Sets `d_i(cell) = target`, both given by index.
    pub fn set_face(&mut self, dim: usize, cell: usize, i: usize, target: usize) -> Result<(), PpsError> {
        if dim == 0 || i > dim {
            return Err(PpsError::Schema(format!("no face d_{i} in dimension {dim}")));
        }
        if target >= self.cells[dim - 1].len() {
            return Err(PpsError::DanglingFace {
                dim,
                cell: self.cells[dim][cell].clone(),
                index: i,
                target: format!("#{target}"),
            });
        }
        self.faces[dim][cell][i] = Some(target);
        Ok(())
    }

    /// `d_i` of a cell, if defined.
    pub fn face(&self, dim: usize, cell: usize, i: usize) -> Option<usize> {
        self.faces.get(dim)?.get(cell)?.get(i).copied().flatten()
    }

    fn face_of(&self, dim: usize, cell: Option<usize>, i: usize) -> Option<usize> {
        cell.and_then(|a| self.face(dim, a, i))
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j`, where an undefined
    /// face and every face of it count as zero.
    pub fn validate(&self) -> Result<(), Violation> {
        for k in 2..=self.top_dim() {
            for a in 0..self.cells[k].len() {
                for j in 1..=k {
                    for i in 0..j {
                        let left = self.face_of(k - 1, self.face(k, a, j), i);
                        let right = self.face_of(k - 1, self.face(k, a, i), j - 1);
                        if left != right {
                            return Err(Violation { dim: k, cell: self.cells[k][a].clone(), i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True when some face of a positive-dimensional cell is undefined, so the
    /// pointed realization carries the basepoint.
    pub fn is_proper(&self) -> bool {
        self.faces.iter().skip(1).flatten().flatten().any(Option::is_none)
    }

    /// Cellular chains with `d = sum (-1)^i d_i`.
    ///
    /// Reduced: relative to the basepoint when the set is proper, otherwise
    /// augmented by a degree -1 copy of `Z`. Unreduced: the basepoint is a
    /// 0-cell receiving every undefined endpoint of a 1-cell.
    pub fn chain_complex(&self, reduced: bool) -> Result<IntegerChainComplex, PpsError> {
        self.validate().map_err(PpsError::Violation)?;
        let proper = self.is_proper();
        let basepoint = !reduced && proper;
        let mut complex = IntegerChainComplex::new(1);
        for k in 0..=self.top_dim() {
            complex.set_rank(k as i64, self.cells[k].len() + usize::from(k == 0 && basepoint));
        }
        for k in 1..=self.top_dim() {
            let rows = complex.rank(k as i64 - 1);
            let mut m = SparseMatrix::zeros(rows, self.cells[k].len());
            for a in 0..self.cells[k].len() {
                for i in 0..=k {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    match self.face(k, a, i) {
                        Some(t) => m.add(t, a, sign),
                        None if k == 1 && basepoint => m.add(rows - 1, a, sign),
                        None => {}
                    }
                }
            }
            complex.set_boundary(k as i64, m)?;
        }
        if reduced && !proper {
            complex.set_rank(-1, 1);
            let mut m = SparseMatrix::zeros(1, self.cells[0].len());
            for a in 0..self.cells[0].len() {
                m.add(0, a, 1);
            }
            complex.set_boundary(0, m)?;
        }
        Ok(complex)
    }

    /// Reduced homology of the pointed realization, in every degree from -1
    /// to the top dimension.
    pub fn reduced_homology(&self) -> Result<BTreeMap<i64, AbelianGroup>, PpsError> {
        let mut h = self.chain_complex(true)?.homology()?;
        for k in -1..=self.top_dim() as i64 {
            h.entry(k).or_default();
        }
        Ok(h)
    }

    pub fn homology(&self) -> Result<BTreeMap<i64, AbelianGroup>, PpsError> {
        Ok(self.chain_complex(false)?.homology()?)
    }

    /// Canonical JSON: dimensions ascending, cells in stored order, and only
    /// defined faces listed.
    pub fn to_json(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut out = format!("{{\"top_dim\":{},\"cells\":{{", self.top_dim());
        for (k, cells) in self.cells.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let names: Vec<String> = cells.iter().map(|c| q(c)).collect();
            let _ = write!(out, "\"{k}\":[{}]", names.join(","));
        }
        out.push_str("},\"faces\":{");
        let mut first_dim = true;
        for k in 1..=self.top_dim() {
            let entries: Vec<String> = (0..self.cells[k].len())
                .filter_map(|a| {
                    let defined: Vec<String> = (0..=k)
                        .filter_map(|i| self.face(k, a, i).map(|t| format!("\"{i}\":{}", q(&self.cells[k - 1][t]))))
                        .collect();
                    (!defined.is_empty()).then(|| format!("{}:{{{}}}", q(&self.cells[k][a]), defined.join(",")))
                })
                .collect();
            if entries.is_empty() {
                continue;
            }
            if !first_dim {
                out.push(',');
            }
            first_dim = false;
            let _ = write!(out, "\"{k}\":{{{}}}", entries.join(","));
        }
        out.push_str("}}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, PpsError> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            top_dim: usize,
            cells: BTreeMap<String, Vec<String>>,
            #[serde(default)]
            faces: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| PpsError::Json(e.to_string()))?;
        if raw.top_dim > 4096 {
            return Err(PpsError::Schema(format!("top_dim {} is unreasonably large", raw.top_dim)));
        }
        let dim_key = |key: &str| -> Result<usize, PpsError> {
            key.parse::<usize>()
                .ok()
                .filter(|k| *k <= raw.top_dim && key == k.to_string())
                .ok_or_else(|| PpsError::Schema(format!("bad dimension key {key:?}")))
        };
        let mut x = PartialPresimplicialSet::new(raw.top_dim);
        let mut by_dim: BTreeMap<usize, &Vec<String>> = BTreeMap::new();
        for (key, names) in &raw.cells {
            by_dim.insert(dim_key(key)?, names);
        }
        for (k, names) in by_dim {
            for name in names {
                x.add_cell(k, name.clone())?;
            }
        }
        for (key, cells) in &raw.faces {
            let k = dim_key(key)?;
            if k == 0 {
                return Err(PpsError::Schema("0-cells have no faces".into()));
            }
            for (name, faces) in cells {
                let a = x.cell_index(k, name).ok_or_else(|| {
                    PpsError::Schema(format!("faces given for unknown cell {name:?} in dimension {k}"))
                })?;
                for (i_key, target) in faces {
                    let i = i_key
                        .parse::<usize>()
                        .ok()
                        .filter(|i| *i <= k && *i_key == i.to_string())
                        .ok_or_else(|| PpsError::Schema(format!("bad face index {i_key:?} on {name:?}")))?;
                    let t = x.cell_index(k - 1, target).ok_or_else(|| PpsError::DanglingFace {
                        dim: k,
                        cell: name.clone(),
                        index: i,
                        target: target.clone(),
                    })?;
                    x.set_face(k, a, i, t)?;
                }
            }
        }
        Ok(x)
    }
}
