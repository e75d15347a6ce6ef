//! Framed Khovanov complex: enhanced states, the degree -2 differential,
//! per-j columns, extreme and almost-extreme extraction, the Kauffman bracket
//! and the framed to oriented grading conversion.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::rc::Rc;

use itertools::Itertools;
use thiserror::Error;

use crate::diagram::{Diagram, Label, Resolution, State};
use crate::homology::{AbelianGroup, HomologyError, IntegerChainComplex, SparseMatrix};
use crate::polynomial::Laurent;
use crate::state_graph::all_a_graph;

/// Default crossing bound for full-table computations.
pub const DEFAULT_MAX_C: usize = 14;

/// States are stored as bit masks of B labels.
const MASK_MAX_C: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhovanovError {
    #[error("diagram has {c} crossings, more than the bound {max}")]
    TooManyCrossings { c: usize, max: usize },
    #[error("PD code is not planar: a crossing change neither merges nor splits")]
    NonPlanar,
    #[error("diagram is not A-adequate: the chord of crossing {crossing} is a loop in G_A")]
    NotAAdequate { crossing: usize },
    #[error("gradings (i, j) = ({i}, {j}) have the wrong parity for writhe {w}")]
    Parity { i: i64, j: i64, w: i64 },
    #[error("enhanced state has {got} signs, but its resolution has {expected} circles")]
    SignCount { expected: usize, got: usize },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A Kauffman state with a sign on each circle of its resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnhancedState {
    pub state: State,
    /// +1 or -1 per circle, in canonical circle order.
    pub signs: Vec<i8>,
}

impl EnhancedState {
    /// `tau`, the sum of the circle signs.
    pub fn tau(&self) -> i64 {
        self.signs.iter().map(|s| i64::from(*s)).sum()
    }

    /// `(i, j) = (sigma, sigma + 2 tau)`.
    pub fn gradings(&self) -> (i64, i64) {
        let i = self.state.sigma();
        (i, i + 2 * self.tau())
    }
}

/// Gradings of an enhanced state, checked against the diagram.
pub fn gradings(diagram: &Diagram, s: &EnhancedState) -> Result<(i64, i64), KhovanovError> {
    let expected = diagram
        .resolve(&s.state)
        .map_err(|_| KhovanovError::SignCount { expected: diagram.crossing_count(), got: s.state.len() })?
        .circle_count();
    if s.signs.len() != expected {
        return Err(KhovanovError::SignCount { expected, got: s.signs.len() });
    }
    Ok(s.gradings())
}

/// `(j_max, j_almax) = (c + 2|s_A D|, c + 2|s_A D| - 4)`.
pub fn j_extremes(diagram: &Diagram) -> (i64, i64) {
    let j_max = diagram.crossing_count() as i64 + 2 * diagram.all_a_circles() as i64;
    (j_max, j_max - 4)
}

/// How a column's states are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enumeration {
    /// Depth-first search from `s_A`, cut off once no enhancement can reach `j`.
    #[default]
    Pruned,
    /// Every one of the `2^c` states.
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Generator {
    b_mask: u64,
    /// Bit k set iff circle k is positive.
    plus: u128,
    circles: usize,
}

impl Generator {
    fn to_enhanced(self, c: usize) -> EnhancedState {
        EnhancedState {
            state: State::from_b_mask(c, self.b_mask),
            signs: (0..self.circles).map(|k| if (self.plus >> k) & 1 == 1 { 1 } else { -1 }).collect(),
        }
    }

    fn order_key(&self, c: usize) -> (Vec<usize>, Vec<i8>) {
        let b_set = (0..c).filter(|x| (self.b_mask >> x) & 1 == 1).collect();
        let signs = (0..self.circles).map(|k| if (self.plus >> k) & 1 == 1 { 1 } else { -1 }).collect();
        (b_set, signs)
    }
}

/// Resolutions of states met while building a column.
struct ResolutionCache<'a> {
    diagram: &'a Diagram,
    map: HashMap<u64, Rc<Resolution>>,
}

impl<'a> ResolutionCache<'a> {
    fn new(diagram: &'a Diagram) -> Self {
        ResolutionCache { diagram, map: HashMap::new() }
    }

    fn get(&mut self, b_mask: u64) -> Rc<Resolution> {
        let diagram = self.diagram;
        self.map.entry(b_mask).or_insert_with(|| Rc::new(diagram.resolve_mask(b_mask))).clone()
    }
}

/// Effect of changing one A label to B on circle signs.
enum Transition {
    Merge { a: usize, b: usize, into: usize, copy: Vec<(usize, usize)> },
    Split { from: usize, into: (usize, usize), copy: Vec<(usize, usize)> },
}

fn transition(diagram: &Diagram, s: &Resolution, t: &Resolution, x: usize) -> Result<Transition, KhovanovError> {
    let touched =
        |r: &Resolution| -> Vec<usize> { (0..4).map(|slot| r.circle_map()[4 * x + slot]).sorted().dedup().collect() };
    let (ts, tt) = (touched(s), touched(t));
    // circles away from x keep their arc ends, hence their canonical names
    let copy: Vec<(usize, usize)> = (0..t.circle_count())
        .filter(|k| !tt.contains(k))
        .map(|k| {
            let end = t.representative(k).expect("crossing diagrams have no free loop");
            (k, s.circle_of(end))
        })
        .collect();
    debug_assert_eq!(diagram.crossing_count(), s.chords().len());
    match (ts.len(), tt.len()) {
        (2, 1) => Ok(Transition::Merge { a: ts[0], b: ts[1], into: tt[0], copy }),
        (1, 2) => Ok(Transition::Split { from: ts[0], into: (tt[0], tt[1]), copy }),
        _ => Err(KhovanovError::NonPlanar),
    }
}

/// The column `C_{*, j}` of the framed Khovanov complex.
#[derive(Debug, Clone)]
pub struct GradedComplexColumn {
    pub j: i64,
    c: usize,
    generators: BTreeMap<i64, Vec<Generator>>,
    complex: IntegerChainComplex,
}

impl GradedComplexColumn {
    /// Generators of degree `i`, in canonical order.
    pub fn generators(&self, i: i64) -> Vec<EnhancedState> {
        self.generators.get(&i).map(|g| g.iter().map(|g| g.to_enhanced(self.c)).collect()).unwrap_or_default()
    }

    /// Degrees with at least one generator.
    pub fn degrees(&self) -> Vec<i64> {
        self.generators.keys().copied().collect()
    }

    pub fn rank(&self, i: i64) -> usize {
        self.generators.get(&i).map_or(0, Vec::len)
    }

    /// Nonzero chain ranks keyed by `i`.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.generators.iter().map(|(i, g)| (*i, g.len())).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `d_i : C_{i,j} -> C_{i-2,j}`, rows indexed by targets.
    pub fn boundary(&self, i: i64) -> Option<&SparseMatrix> {
        self.complex.boundary(i)
    }

    pub fn complex(&self) -> &IntegerChainComplex {
        &self.complex
    }

    /// `H_{i,j}` for every degree carrying generators.
    pub fn homology(&self) -> Result<BTreeMap<i64, AbelianGroup>, KhovanovError> {
        Ok(self.complex.homology()?)
    }
}

fn check_mask_size(diagram: &Diagram) -> Result<(), KhovanovError> {
    let c = diagram.crossing_count();
    if c > MASK_MAX_C {
        return Err(KhovanovError::TooManyCrossings { c, max: MASK_MAX_C });
    }
    if !diagram.is_planar() {
        return Err(KhovanovError::NonPlanar);
    }
    Ok(())
}

/// `|s_A D| + r - |sD|`: never decreases when B labels are added.
fn deficit(s_a: usize, b_mask: u64, circles: usize) -> usize {
    s_a + b_mask.count_ones() as usize - circles
}

/// States whose deficit is at most `bound`, found by adding B labels in
/// increasing crossing order.
fn states_within(cache: &mut ResolutionCache, s_a: usize, bound: usize, method: Enumeration) -> Vec<u64> {
    let c = cache.diagram.crossing_count();
    match method {
        Enumeration::BruteForce => {
            (0..1u64 << c).filter(|m| deficit(s_a, *m, cache.get(*m).circle_count()) <= bound).collect()
        }
        Enumeration::Pruned => {
            let mut out = vec![0u64];
            let mut stack = vec![(0u64, 0usize)];
            while let Some((mask, next)) = stack.pop() {
                for x in next..c {
                    let child = mask | 1 << x;
                    if deficit(s_a, child, cache.get(child).circle_count()) <= bound {
                        out.push(child);
                        stack.push((child, x + 1));
                    }
                }
            }
            out
        }
    }
}

fn enhancements(b_mask: u64, c: usize, circles: usize, j: i64) -> impl Iterator<Item = Generator> {
    let sigma = c as i64 - 2 * i64::from(b_mask.count_ones());
    let diff = j - sigma;
    let n = circles as i64;
    let plus =
        if diff.rem_euclid(2) == 0 && (diff / 2 + n).rem_euclid(2) == 0 { Some((n + diff / 2) / 2) } else { None };
    let p = plus.filter(|p| (0..=n).contains(p)).map(|p| p as usize);
    p.into_iter().flat_map(move |p| {
        (0..circles).combinations(p).map(move |pos| Generator {
            b_mask,
            plus: pos.iter().fold(0u128, |acc, k| acc | 1 << k),
            circles,
        })
    })
}

fn assemble(
    diagram: &Diagram,
    cache: &mut ResolutionCache,
    j: i64,
    states: &[u64],
) -> Result<GradedComplexColumn, KhovanovError> {
    let c = diagram.crossing_count();
    let mut generators: BTreeMap<i64, Vec<Generator>> = BTreeMap::new();
    for &mask in states {
        let circles = cache.get(mask).circle_count();
        let sigma = c as i64 - 2 * i64::from(mask.count_ones());
        for g in enhancements(mask, c, circles, j) {
            generators.entry(sigma).or_default().push(g);
        }
    }
    for gens in generators.values_mut() {
        gens.sort_by_cached_key(|g| g.order_key(c));
    }

    let mut complex = IntegerChainComplex::new(2);
    for (i, gens) in &generators {
        complex.set_rank(*i, gens.len());
    }
    let mut transitions: HashMap<(u64, usize), Rc<Transition>> = HashMap::new();
    for (&i, sources) in &generators {
        let Some(targets) = generators.get(&(i - 2)) else { continue };
        let index: HashMap<(u64, u128), usize> =
            targets.iter().enumerate().map(|(k, g)| ((g.b_mask, g.plus), k)).collect();
        let mut matrix = SparseMatrix::zeros(targets.len(), sources.len());
        for (col, g) in sources.iter().enumerate() {
            for x in (0..c).filter(|x| (g.b_mask >> x) & 1 == 0) {
                let t_mask = g.b_mask | 1 << x;
                let tr = match transitions.get(&(g.b_mask, x)) {
                    Some(tr) => tr.clone(),
                    None => {
                        let (s, t) = (cache.get(g.b_mask), cache.get(t_mask));
                        let tr = Rc::new(transition(diagram, &s, &t, x)?);
                        transitions.insert((g.b_mask, x), tr.clone());
                        tr
                    }
                };
                let sign = if (g.b_mask >> (x + 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                for plus in apply(&tr, g.plus) {
                    let row = index.get(&(t_mask, plus)).expect("differential preserves j");
                    matrix.add(*row, col, sign);
                }
            }
        }
        complex.set_boundary(i, matrix)?;
    }
    Ok(GradedComplexColumn { j, c, generators, complex })
}

fn bit(mask: u128, k: usize) -> bool {
    (mask >> k) & 1 == 1
}

/// Target sign masks of the local merge/split rules.
fn apply(tr: &Transition, plus: u128) -> Vec<u128> {
    let copied =
        |copy: &[(usize, usize)]| copy.iter().fold(0u128, |acc, (t, s)| if bit(plus, *s) { acc | 1 << t } else { acc });
    match tr {
        Transition::Merge { a, b, into, copy } => {
            let base = copied(copy);
            match (bit(plus, *a), bit(plus, *b)) {
                (true, true) => vec![],
                (false, false) => vec![base],
                _ => vec![base | 1 << into],
            }
        }
        Transition::Split { from, into: (u, v), copy } => {
            let base = copied(copy);
            if bit(plus, *from) {
                vec![base | 1 << u | 1 << v]
            } else {
                vec![base | 1 << u, base | 1 << v]
            }
        }
    }
}

/// The column at `j`, with pruned state enumeration.
pub fn build_column(diagram: &Diagram, j: i64) -> Result<GradedComplexColumn, KhovanovError> {
    build_column_with(diagram, j, Enumeration::Pruned)
}

pub fn build_column_with(diagram: &Diagram, j: i64, method: Enumeration) -> Result<GradedComplexColumn, KhovanovError> {
    let (j_max, _) = j_extremes(diagram);
    if diagram.crossing_count() == 0 {
        let states = if j <= j_max { vec![0] } else { vec![] };
        return assemble(diagram, &mut ResolutionCache::new(diagram), j, &states);
    }
    check_mask_size(diagram)?;
    if j > j_max {
        return assemble(diagram, &mut ResolutionCache::new(diagram), j, &[]);
    }
    let bound = ((j_max - j) / 2) as usize;
    let mut cache = ResolutionCache::new(diagram);
    let s_a = cache.get(0).circle_count();
    let states = states_within(&mut cache, s_a, bound, method);
    assemble(diagram, &mut cache, j, &states)
}

fn check_a_adequate(diagram: &Diagram) -> Result<(), KhovanovError> {
    match all_a_graph(diagram).first_loop() {
        Some(e) => Err(KhovanovError::NotAAdequate { crossing: e.crossing }),
        None => Ok(()),
    }
}

/// The almost-extreme column `C_{*, j_almax}` of an A-adequate diagram.
pub fn almost_extreme_column(diagram: &Diagram) -> Result<GradedComplexColumn, KhovanovError> {
    check_a_adequate(diagram)?;
    build_column(diagram, j_extremes(diagram).1)
}

/// Generators of `C_{*, j_almax}` from the closed description: `s_A` with a
/// single negative circle, and all-positive states with `|sD| = |s_A D| + r - 2`.
pub fn almost_extreme_generators(diagram: &Diagram) -> Result<BTreeMap<i64, Vec<EnhancedState>>, KhovanovError> {
    check_a_adequate(diagram)?;
    let c = diagram.crossing_count();
    if c > 0 {
        check_mask_size(diagram)?;
    }
    let mut cache = ResolutionCache::new(diagram);
    let s_a = cache.get(0).circle_count();
    let all_plus = |n: usize| if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut out: BTreeMap<i64, Vec<Generator>> = BTreeMap::new();
    for k in 0..s_a {
        out.entry(c as i64).or_default().push(Generator { b_mask: 0, plus: all_plus(s_a) & !(1 << k), circles: s_a });
    }
    if c > 0 {
        for mask in states_within(&mut cache, s_a, 2, Enumeration::Pruned) {
            let circles = cache.get(mask).circle_count();
            if mask != 0 && deficit(s_a, mask, circles) == 2 {
                let sigma = c as i64 - 2 * i64::from(mask.count_ones());
                out.entry(sigma).or_default().push(Generator { b_mask: mask, plus: all_plus(circles), circles });
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(i, mut gens)| {
            gens.sort_by_cached_key(|g| g.order_key(c));
            (i, gens.into_iter().map(|g| g.to_enhanced(c)).collect())
        })
        .collect())
}

/// The state sum `sum_s A^sigma(s) d^|sD|` with `d = -A^2 - A^-2`, so that the
/// crossingless unknot has bracket `d`. Visits all `2^c` states.
pub fn kauffman_bracket(diagram: &Diagram) -> Laurent {
    let c = diagram.crossing_count();
    let d = Laurent::from_terms(&[(-1, 2), (-1, -2)]);
    let mut by_count: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    for mask in 0..1u64 << c {
        let sigma = c as i64 - 2 * i64::from(mask.count_ones());
        *by_count.entry((sigma, diagram.resolve_mask(mask).circle_count())).or_insert(0) += 1;
    }
    let mut out = Laurent::zero();
    for ((sigma, circles), mult) in by_count {
        let term = &Laurent::monomial(mult, sigma) * &d.pow(circles as u32);
        out = &out + &term;
    }
    out
}

/// `sum (-1)^((j - i)/2) n_{i,j} A^j` over a table of ranks.
pub fn euler_polynomial(ranks: &BTreeMap<(i64, i64), usize>) -> Laurent {
    let mut out = Laurent::zero();
    for (&(i, j), &n) in ranks {
        let sign = if ((j - i) / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(sign * n as i64, j);
    }
    out
}

/// Oriented gradings `(I, J) = ((w - i)/2, (3w - j)/2)`.
pub fn framed_to_oriented(i: i64, j: i64, w: i64) -> Result<(i64, i64), KhovanovError> {
    if (w - i).rem_euclid(2) != 0 || (3 * w - j).rem_euclid(2) != 0 {
        return Err(KhovanovError::Parity { i, j, w });
    }
    Ok(((w - i) / 2, (3 * w - j) / 2))
}

/// Framed Khovanov homology of a diagram, with chain ranks kept for the
/// Euler characteristic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhovanovTable {
    /// Nonzero groups keyed by `(i, j)`.
    pub groups: BTreeMap<(i64, i64), AbelianGroup>,
    /// Nonzero chain ranks keyed by `(i, j)`.
    pub chain_ranks: BTreeMap<(i64, i64), usize>,
}

impl KhovanovTable {
    pub fn shifted(&self, di: i64, dj: i64) -> KhovanovTable {
        KhovanovTable {
            groups: self.groups.iter().map(|((i, j), g)| ((i + di, j + dj), g.clone())).collect(),
            chain_ranks: self.chain_ranks.iter().map(|((i, j), n)| ((i + di, j + dj), *n)).collect(),
        }
    }

    /// Free ranks of homology keyed by `(i, j)`.
    pub fn betti(&self) -> BTreeMap<(i64, i64), usize> {
        self.groups.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (*k, g.rank)).collect()
    }

    /// Groups regraded to oriented `(I, J)` for writhe `w`.
    pub fn oriented(&self, w: i64) -> Result<BTreeMap<(i64, i64), AbelianGroup>, KhovanovError> {
        self.groups.iter().map(|((i, j), g)| Ok((framed_to_oriented(*i, *j, w)?, g.clone()))).collect()
    }

    /// Rows by `j` (descending), columns by `i` (ascending).
    pub fn render(&self) -> String {
        render_grid(&self.groups, "j\\i")
    }
}

/// Text grid of groups keyed by `(column, row)`.
pub fn render_grid(groups: &BTreeMap<(i64, i64), AbelianGroup>, corner: &str) -> String {
    if groups.is_empty() {
        return "(all groups vanish)\n".to_string();
    }
    let cols: Vec<i64> = groups.keys().map(|k| k.0).sorted().dedup().collect();
    let rows: Vec<i64> = groups.keys().map(|k| k.1).sorted().dedup().collect::<Vec<_>>().into_iter().rev().collect();
    let cell = |c: i64, r: i64| groups.get(&(c, r)).map(ToString::to_string).unwrap_or_default();
    let mut width = vec![corner.len()];
    width.extend(
        cols.iter().map(|c| rows.iter().map(|r| cell(*c, *r).len()).chain([c.to_string().len()]).max().unwrap_or(1)),
    );
    width[0] = width[0].max(rows.iter().map(|r| r.to_string().len()).max().unwrap_or(1));
    let mut out = String::new();
    let mut line = format!("{:>w$}", corner, w = width[0]);
    for (k, c) in cols.iter().enumerate() {
        let _ = write!(line, " | {:>w$}", c, w = width[k + 1]);
    }
    out.push_str(line.trim_end());
    out.push('\n');
    for r in &rows {
        let mut line = format!("{:>w$}", r, w = width[0]);
        for (k, c) in cols.iter().enumerate() {
            let _ = write!(line, " | {:>w$}", cell(*c, *r), w = width[k + 1]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Every nonzero `H_{i,j}`; refuses diagrams with more than `max_c` crossings.
pub fn khovanov_table(diagram: &Diagram, max_c: usize) -> Result<KhovanovTable, KhovanovError> {
    let c = diagram.crossing_count();
    if c > max_c {
        return Err(KhovanovError::TooManyCrossings { c, max: max_c });
    }
    let (j_max, _) = j_extremes(diagram);
    let j_min = -(c as i64) - 2 * diagram.all_b_circles() as i64;
    let mut table = KhovanovTable { groups: BTreeMap::new(), chain_ranks: BTreeMap::new() };
    for j in (j_min..=j_max).step_by(2) {
        let column = build_column(diagram, j)?;
        for (i, n) in column.ranks() {
            table.chain_ranks.insert((i, j), n);
        }
        for (i, g) in column.homology()? {
            if !g.is_zero() {
                table.groups.insert((i, j), g);
            }
        }
    }
    Ok(table)
}

/// The state whose only B labels are at `crossings`.
pub fn state_with_b(c: usize, crossings: &[usize]) -> State {
    let mut labels = vec![Label::A; c];
    for x in crossings {
        labels[*x] = Label::B;
    }
    State::new(labels)
}
