//! Exact integer homology of bounded chain complexes via Smith normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("boundary composition is nonzero at degree {degree}")]
    NonzeroComposition { degree: i64 },
    #[error("boundary at degree {degree} has shape {got:?}, expected {expected:?}")]
    Shape { degree: i64, expected: (usize, usize), got: (usize, usize) },
    #[error("cannot parse group {0:?}")]
    Parse(String),
}

/// Sparse integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![BTreeMap::new(); nrows] }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), ncols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.add(r, c, *v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zeros(n, n);
        for k in 0..n {
            m.add(k, k, 1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    /// Adds `value` to entry `(row, col)`, dropping entries that cancel.
    pub fn add(&mut self, row: usize, col: usize, value: i64) {
        assert!(row < self.nrows && col < self.ncols, "entry out of bounds");
        if value == 0 {
            return;
        }
        let slot = self.rows[row].entry(col).or_insert(0);
        *slot += value;
        if *slot == 0 {
            self.rows[row].remove(&col);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.rows[row].get(&col).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, *v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols]; self.nrows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    /// Exact product `self * other`, in arbitrary precision.
    pub fn mul_exact(&self, other: &SparseMatrix) -> BTreeMap<(usize, usize), BigInt> {
        assert_eq!(self.ncols, other.nrows, "product shape mismatch");
        let mut out: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (r, k, a) in self.entries() {
            for (c, b) in &other.rows[k] {
                *out.entry((r, *c)).or_insert_with(BigInt::zero) += BigInt::from(a) * BigInt::from(*b);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Same matrix with rows and columns renumbered: entry `(r, c)` moves to
    /// `(row_perm[r], col_perm[c])`, optionally negating chosen columns.
    pub fn relabelled(&self, row_perm: &[usize], col_perm: &[usize], col_sign: &[i64]) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.entries() {
            m.add(row_perm[r], col_perm[c], v * col_sign[c]);
        }
        m
    }
}

/// Diagonal of the Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` nonnegative entries `d_1 | d_2 | ...`, zeros last.
    pub diagonal: Vec<BigUint>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigUint> {
        self.diagonal.iter().filter(|d| **d > BigUint::one()).cloned().collect()
    }
}

pub fn smith_normal_form(matrix: &SparseMatrix) -> SmithForm {
    let pivots = match eliminate(matrix, Some) {
        Some(p) => p.into_iter().map(BigInt::from).collect(),
        None => eliminate(matrix, |v| Some(BigInt::from(v))).expect("bigint elimination cannot overflow"),
    };
    let mut diagonal = invariant_factors(pivots);
    diagonal.resize(matrix.nrows.min(matrix.ncols), BigUint::zero());
    SmithForm { diagonal }
}

/// Sorts a multiset of nonzero diagonal entries into a divisibility chain
/// (`Z/a + Z/b = Z/gcd + Z/lcm`).
fn invariant_factors(pivots: Vec<BigInt>) -> Vec<BigUint> {
    let mut d: Vec<BigUint> = pivots.into_iter().map(|p| p.magnitude().clone()).collect();
    d.sort();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Unimodular elimination returning the pivots of a diagonalization, or
/// `None` on overflow of `T`.
///
/// Pivot: least nonzero absolute value; ties broken by smallest Markowitz
/// count, then row-major position.
fn eliminate<T, F>(matrix: &SparseMatrix, convert: F) -> Option<Vec<T>>
where
    T: Integer + Signed + Clone + CheckedMul + CheckedSub,
    F: Fn(i64) -> Option<T>,
{
    let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); matrix.nrows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); matrix.ncols];
    for (r, c, v) in matrix.entries() {
        rows[r].insert(c, convert(v)?);
        cols[c].insert(r);
    }
    let mut pivots = Vec::new();

    loop {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                let key = (v.abs(), (row.len() - 1) * (cols[*c].len() - 1));
                let better = match &best {
                    None => true,
                    Some((bv, bm, _, _)) => key.0 < *bv || (key.0 == *bv && key.1 < *bm),
                };
                if better {
                    best = Some((key.0, key.1, r, *c));
                }
            }
        }
        let Some((_, _, mut pr, mut pc)) = best else { break };

        loop {
            let p = rows[pr][&pc].clone();
            // clear the pivot column with row operations
            let others: Vec<usize> = cols[pc].iter().copied().filter(|r| *r != pr).collect();
            let mut repivot = None;
            for r in others {
                let a = rows[r][&pc].clone();
                let q = a.div_floor(&p);
                if !q.is_zero() {
                    axpy_row(&mut rows, &mut cols, r, pr, &q)?;
                }
                if rows[r].contains_key(&pc) {
                    repivot = Some(r);
                    break;
                }
            }
            if let Some(r) = repivot {
                pr = r;
                continue;
            }
            // column pc now only has the pivot; column operations touch row pr only
            let entries: Vec<(usize, T)> =
                rows[pr].iter().filter(|(c, _)| **c != pc).map(|(c, v)| (*c, v.clone())).collect();
            let mut repivot = None;
            for (c, b) in entries {
                let rem = b.mod_floor(&p);
                if rem.is_zero() {
                    rows[pr].remove(&c);
                    cols[c].remove(&pr);
                } else {
                    rows[pr].insert(c, rem);
                    repivot = Some(c);
                    break;
                }
            }
            match repivot {
                Some(c) => pc = c,
                None => break,
            }
        }

        let p = rows[pr].remove(&pc).expect("pivot present");
        debug_assert!(rows[pr].is_empty());
        cols[pc].remove(&pr);
        pivots.push(p);
    }
    Some(pivots)
}

/// `row[target] -= q * row[source]`, maintaining the column index.
fn axpy_row<T>(
    rows: &mut [BTreeMap<usize, T>],
    cols: &mut [BTreeSet<usize>],
    target: usize,
    source: usize,
    q: &T,
) -> Option<()>
where
    T: Integer + Signed + Clone + CheckedMul + CheckedSub,
{
    let src: Vec<(usize, T)> = rows[source].iter().map(|(c, v)| (*c, v.clone())).collect();
    for (c, v) in src {
        let delta = v.checked_mul(q)?;
        let current = rows[target].get(&c).cloned().unwrap_or_else(T::zero);
        let updated = current.checked_sub(&delta)?;
        if updated.is_zero() {
            rows[target].remove(&c);
            cols[c].remove(&target);
        } else {
            rows[target].insert(c, updated);
            cols[c].insert(target);
        }
    }
    Some(())
}

/// A finitely generated abelian group `Z^rank + Z/t1 + Z/t2 + ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AbelianGroup {
    pub rank: usize,
    /// Invariant factors, each > 1, in divisibility order.
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// Canonicalizes arbitrary cyclic orders into invariant factors.
    pub fn new(rank: usize, cyclic_orders: &[u64]) -> Self {
        let pivots = cyclic_orders.iter().filter(|t| **t > 1).map(|t| BigInt::from(*t)).collect();
        AbelianGroup { rank, torsion: nontrivial(invariant_factors(pivots)) }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum.
    pub fn plus(&self, other: &AbelianGroup) -> AbelianGroup {
        let pivots = self.torsion.iter().chain(&other.torsion).map(|t| BigInt::from(t.clone())).collect();
        AbelianGroup { rank: self.rank + other.rank, torsion: nontrivial(invariant_factors(pivots)) }
    }
}

fn nontrivial(factors: Vec<BigUint>) -> Vec<BigUint> {
    factors.into_iter().filter(|f| *f > BigUint::one()).collect()
}

impl serde::Serialize for AbelianGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl FromStr for AbelianGroup {
    type Err = HomologyError;

    /// Parses the rendering produced by `Display`, e.g. `Z^3 + Z/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || HomologyError::Parse(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup::zero());
        }
        let mut rank = 0;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.parse::<usize>().map_err(|_| err())?;
            } else if let Some(t) = part.strip_prefix("Z/") {
                orders.push(t.parse::<u64>().map_err(|_| err())?);
            } else {
                return Err(err());
            }
        }
        Ok(AbelianGroup::new(rank, &orders))
    }
}

/// Bounded complex of free abelian groups with differentials of a fixed
/// degree step: `d_k : C_k -> C_{k - step}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerChainComplex {
    step: i64,
    ranks: BTreeMap<i64, usize>,
    boundaries: BTreeMap<i64, SparseMatrix>,
}

impl IntegerChainComplex {
    pub fn new(step: i64) -> Self {
        assert!(step > 0, "differential step must be positive");
        IntegerChainComplex { step, ranks: BTreeMap::new(), boundaries: BTreeMap::new() }
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn set_rank(&mut self, degree: i64, rank: usize) {
        self.ranks.insert(degree, rank);
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    /// Sets `d_degree`, a `rank(degree - step) x rank(degree)` matrix.
    pub fn set_boundary(&mut self, degree: i64, matrix: SparseMatrix) -> Result<(), HomologyError> {
        let expected = (self.rank(degree - self.step), self.rank(degree));
        if matrix.shape() != expected {
            return Err(HomologyError::Shape { degree, expected, got: matrix.shape() });
        }
        self.boundaries.insert(degree, matrix);
        Ok(())
    }

    pub fn boundary(&self, degree: i64) -> Option<&SparseMatrix> {
        self.boundaries.get(&degree)
    }

    /// Verifies `d_{k-step} d_k = 0` for every `k`.
    pub fn check_composition(&self) -> Result<(), HomologyError> {
        for (&k, dk) in &self.boundaries {
            if let Some(next) = self.boundaries.get(&(k - self.step)) {
                if !next.mul_exact(dk).is_empty() {
                    return Err(HomologyError::NonzeroComposition { degree: k });
                }
            }
        }
        Ok(())
    }

    /// Homology in every degree carrying generators (zero groups included).
    pub fn homology(&self) -> Result<BTreeMap<i64, AbelianGroup>, HomologyError> {
        self.check_composition()?;
        let smith: BTreeMap<i64, SmithForm> = self.boundaries.iter().map(|(k, m)| (*k, smith_normal_form(m))).collect();
        let mut out = BTreeMap::new();
        for (&k, &n) in &self.ranks {
            let out_rank = smith.get(&k).map_or(0, SmithForm::rank);
            let (in_rank, torsion) = smith.get(&(k + self.step)).map_or((0, Vec::new()), |s| (s.rank(), s.torsion()));
            out.insert(k, AbelianGroup { rank: n - out_rank - in_rank, torsion });
        }
        Ok(out)
    }

    /// `sum_k (-1)^(k/step) rank C_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().map(|(k, n)| if (k / self.step).rem_euclid(2) == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }
}

/// Renders an invariant factor as `u64` when it fits.
pub fn factor_u64(f: &BigUint) -> Option<u64> {
    f.to_u64()
}
