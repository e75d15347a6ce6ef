//! Unoriented link diagrams in PD notation, Kauffman states and resolutions.
//!
//! A crossing is a quadruple of arc ids listed counterclockwise, starting at
//! the incoming under-strand. An A-smoothing joins slots `{0,1}` and `{2,3}`,
//! a B-smoothing joins `{0,3}` and `{1,2}`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ArcId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed PD token #{position}: {token:?}")]
    MalformedToken { position: usize, token: String },
    #[error("malformed diagram JSON: {0}")]
    Json(String),
    #[error("arc {arc} occurs {count} time(s), expected exactly 2")]
    ArcOccurrence { arc: ArcId, count: usize },
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("diagram has no crossings and no free loop")]
    Empty,
    #[error("unknown arc id {0}")]
    UnknownArc(ArcId),
    #[error("operation needs at least one crossing")]
    NoCrossings,
    #[error("state has {got} labels but the diagram has {expected} crossings")]
    StateSize { expected: usize, got: usize },
    #[error("crossing permutation is not a permutation of 0..{0}")]
    BadPermutation(usize),
}

/// Smoothing label of a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn flipped(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
        }
    }
}

/// Position of an arc end: crossing index and slot `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcEnd {
    pub crossing: usize,
    pub slot: usize,
}

impl ArcEnd {
    pub fn index(self) -> usize {
        4 * self.crossing + self.slot
    }

    pub fn from_index(index: usize) -> Self {
        ArcEnd { crossing: index / 4, slot: index % 4 }
    }
}

impl fmt::Display for ArcEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.crossing, self.slot)
    }
}

/// A Kauffman state: one label per crossing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    labels: Vec<Label>,
}

impl State {
    pub fn new(labels: Vec<Label>) -> Self {
        State { labels }
    }

    pub fn all_a(c: usize) -> Self {
        State { labels: vec![Label::A; c] }
    }

    pub fn all_b(c: usize) -> Self {
        State { labels: vec![Label::B; c] }
    }

    /// State whose B-labelled crossings are the set bits of `mask`.
    pub fn from_b_mask(c: usize, mask: u64) -> Self {
        let labels = (0..c).map(|x| if (mask >> x) & 1 == 1 { Label::B } else { Label::A }).collect();
        State { labels }
    }

    /// Bit mask of B labels; `None` above 64 crossings.
    pub fn b_mask(&self) -> Option<u64> {
        if self.labels.len() > 64 {
            return None;
        }
        Some(self.labels.iter().enumerate().filter(|(_, l)| **l == Label::B).fold(0u64, |m, (x, _)| m | (1 << x)))
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, crossing: usize) -> Label {
        self.labels[crossing]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn b_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::B).count()
    }

    /// `|s^-1(A)| - |s^-1(B)|`.
    pub fn sigma(&self) -> i64 {
        self.labels.len() as i64 - 2 * self.b_count() as i64
    }

    pub fn with_flip(&self, crossing: usize) -> State {
        let mut labels = self.labels.clone();
        labels[crossing] = labels[crossing].flipped();
        State { labels }
    }

    /// Swaps every A with B.
    pub fn swapped(&self) -> State {
        State { labels: self.labels.iter().map(|l| l.flipped()).collect() }
    }
}

/// Canonical circle name: the least arc end on the circle, or the free loop
/// of the crossingless unknot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleName {
    End(ArcEnd),
    FreeLoop,
}

impl fmt::Display for CircleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleName::End(e) => write!(f, "{e}"),
            CircleName::FreeLoop => f.write_str("O"),
        }
    }
}

/// A chord left by a smoothed crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    /// Circle index of the strand through slot 0, then of the strand through slot 2.
    pub circles: (usize, usize),
    pub label: Label,
}

impl Chord {
    pub fn is_admissible(&self) -> bool {
        self.circles.0 == self.circles.1
    }
}

/// The system of circles and chords `sD`.
///
/// Circles are indexed in canonical order (by least arc end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    circle_of: Vec<usize>,
    names: Vec<CircleName>,
    chords: Vec<Chord>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[CircleName] {
        &self.names
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    /// Circle containing an arc end.
    pub fn circle_of(&self, end: ArcEnd) -> usize {
        self.circle_of[end.index()]
    }

    /// Circle index per arc-end index.
    pub fn circle_map(&self) -> &[usize] {
        &self.circle_of
    }

    /// Least arc end of each circle (none for the free loop).
    pub fn representative(&self, circle: usize) -> Option<ArcEnd> {
        match self.names[circle] {
            CircleName::End(e) => Some(e),
            CircleName::FreeLoop => None,
        }
    }
}

/// A connected unoriented link diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<[ArcId; 4]>,
    free_loops: usize,
    /// Arc-end index of the other end of the same arc.
    partner: Vec<usize>,
}

impl Diagram {
    pub fn new(crossings: Vec<[ArcId; 4]>, free_loops: usize) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            return match free_loops {
                0 => Err(DiagramError::Empty),
                1 => Ok(Diagram::unknot()),
                _ => Err(DiagramError::Disconnected),
            };
        }
        if free_loops > 0 {
            return Err(DiagramError::Disconnected);
        }

        let mut ends: HashMap<ArcId, Vec<usize>> = HashMap::new();
        for (x, quad) in crossings.iter().enumerate() {
            for (slot, arc) in quad.iter().enumerate() {
                ends.entry(*arc).or_default().push(4 * x + slot);
            }
        }
        let mut arcs: Vec<_> = ends.iter().collect();
        arcs.sort();
        let mut partner = vec![0; 4 * crossings.len()];
        for (arc, positions) in arcs {
            if positions.len() != 2 {
                return Err(DiagramError::ArcOccurrence { arc: *arc, count: positions.len() });
            }
            partner[positions[0]] = positions[1];
            partner[positions[1]] = positions[0];
        }

        let mut uf = UnionFind::<usize>::new(crossings.len());
        for (e, p) in partner.iter().enumerate() {
            uf.union(e / 4, p / 4);
        }
        let root = uf.find(0);
        if (1..crossings.len()).any(|x| uf.find(x) != root) {
            return Err(DiagramError::Disconnected);
        }

        Ok(Diagram { crossings, free_loops: 0, partner })
    }

    /// The crossingless diagram of the unknot.
    pub fn unknot() -> Self {
        Diagram { crossings: Vec::new(), free_loops: 1, partner: Vec::new() }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[ArcId; 4]] {
        &self.crossings
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn arc_at(&self, end: ArcEnd) -> ArcId {
        self.crossings[end.crossing][end.slot]
    }

    /// The other end of the arc leaving `end`.
    pub fn partner(&self, end: ArcEnd) -> ArcEnd {
        ArcEnd::from_index(self.partner[end.index()])
    }

    pub fn max_arc(&self) -> Option<ArcId> {
        self.crossings.iter().flatten().copied().max()
    }

    /// Resolves every crossing according to `state`.
    pub fn resolve(&self, state: &State) -> Result<Resolution, DiagramError> {
        if state.len() != self.crossing_count() {
            return Err(DiagramError::StateSize { expected: self.crossing_count(), got: state.len() });
        }
        Ok(self.resolve_with(|x| state.label(x)))
    }

    /// Resolution for the state whose B labels are the bits of `b_mask`.
    pub fn resolve_mask(&self, b_mask: u64) -> Resolution {
        self.resolve_with(|x| if (b_mask >> x) & 1 == 1 { Label::B } else { Label::A })
    }

    fn resolve_with(&self, label: impl Fn(usize) -> Label) -> Resolution {
        let c = self.crossing_count();
        if c == 0 {
            return Resolution { circle_of: Vec::new(), names: vec![CircleName::FreeLoop], chords: Vec::new() };
        }
        let mut uf = UnionFind::<usize>::new(4 * c);
        for (e, p) in self.partner.iter().enumerate() {
            uf.union(e, *p);
        }
        for x in 0..c {
            let base = 4 * x;
            match label(x) {
                Label::A => {
                    uf.union(base, base + 1);
                    uf.union(base + 2, base + 3);
                }
                Label::B => {
                    uf.union(base, base + 3);
                    uf.union(base + 1, base + 2);
                }
            }
        }
        // first-seen order over arc ends == order by least arc end
        let mut index_of_root: HashMap<usize, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut circle_of = Vec::with_capacity(4 * c);
        for e in 0..4 * c {
            let root = uf.find(e);
            let idx = *index_of_root.entry(root).or_insert_with(|| {
                names.push(CircleName::End(ArcEnd::from_index(e)));
                names.len() - 1
            });
            circle_of.push(idx);
        }
        let chords =
            (0..c).map(|x| Chord { circles: (circle_of[4 * x], circle_of[4 * x + 2]), label: label(x) }).collect();
        Resolution { circle_of, names, chords }
    }

    /// `|s_A D|`.
    pub fn all_a_circles(&self) -> usize {
        self.resolve_mask(0).circle_count()
    }

    /// `|s_B D|`.
    pub fn all_b_circles(&self) -> usize {
        self.resolve_with(|_| Label::B).circle_count()
    }

    /// Rotates every quadruple by one slot, exchanging the roles of A and B.
    pub fn mirror(&self) -> Diagram {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let crossings = self.crossings.iter().map(|q| [q[1], q[2], q[3], q[0]]).collect();
        Diagram::new(crossings, 0).expect("rotation preserves validity")
    }

    /// Inserts a positive Reidemeister I kink into arc `arc`.
    ///
    /// The occurrence of `arc` at the smaller arc end is renamed to a fresh
    /// id `a1`, the other occurrence to `a2`, and the crossing `(a1, a2, b, b)`
    /// is appended. Its A-smoothing splits off a leaf circle.
    pub fn add_positive_kink(&self, arc: ArcId) -> Result<Diagram, DiagramError> {
        if self.crossings.is_empty() {
            return Err(DiagramError::NoCrossings);
        }
        let mut positions = (0..4 * self.crossing_count()).filter(|e| self.arc_at(ArcEnd::from_index(*e)) == arc);
        let (first, second) = match (positions.next(), positions.next()) {
            (Some(f), Some(s)) => (ArcEnd::from_index(f), ArcEnd::from_index(s)),
            _ => return Err(DiagramError::UnknownArc(arc)),
        };
        let fresh = self.max_arc().map_or(0, |m| m + 1);
        let (a1, a2, b) = (fresh, fresh + 1, fresh + 2);
        let mut crossings = self.crossings.clone();
        crossings[first.crossing][first.slot] = a1;
        crossings[second.crossing][second.slot] = a2;
        crossings.push([a1, a2, b, b]);
        Diagram::new(crossings, 0)
    }

    /// Reorders crossings: new crossing `k` is old crossing `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Diagram, DiagramError> {
        let c = self.crossing_count();
        let mut seen = vec![false; c];
        if order.len() != c || order.iter().any(|&x| x >= c || std::mem::replace(&mut seen[x], true)) {
            return Err(DiagramError::BadPermutation(c));
        }
        if c == 0 {
            return Ok(self.clone());
        }
        Diagram::new(order.iter().map(|&x| self.crossings[x]).collect(), 0)
    }

    /// Whether the rotation system closes up on a sphere (`V - E + F = 2`).
    ///
    /// Validation does not require this; Khovanov computations do.
    pub fn is_planar(&self) -> bool {
        let c = self.crossing_count();
        if c == 0 {
            return true;
        }
        // faces are orbits of: cross the arc, then turn to the next slot
        let mut seen = vec![false; 4 * c];
        let mut faces = 0;
        for start in 0..4 * c {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                let p = self.partner[e];
                e = 4 * (p / 4) + (p % 4 + 1) % 4;
            }
        }
        faces == c + 2
    }

    pub fn to_pd_string(&self) -> String {
        if self.crossings.is_empty() {
            return "UNKNOT".to_string();
        }
        self.crossings.iter().map(|q| format!("X({},{},{},{})", q[0], q[1], q[2], q[3])).collect::<Vec<_>>().join(";")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson { crossings: self.crossings.clone(), free_loops: self.free_loops })
            .expect("diagram JSON serializes")
    }

    pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
        let raw: DiagramJson = serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
        Diagram::new(raw.crossings, raw.free_loops)
    }

    /// Parses either PD text or diagram JSON, by first non-blank character.
    pub fn parse_any(text: &str) -> Result<Diagram, DiagramError> {
        if text.trim_start().starts_with('{') {
            Diagram::from_json(text)
        } else {
            parse_pd(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    crossings: Vec<[ArcId; 4]>,
    free_loops: usize,
}

/// Parses `X(a,b,c,d);X(...)` or `UNKNOT`.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let text = text.trim();
    if text == "UNKNOT" {
        return Ok(Diagram::unknot());
    }
    let mut crossings = Vec::new();
    for (position, token) in text.split(';').enumerate() {
        let malformed = || DiagramError::MalformedToken { position, token: token.to_string() };
        let inner = token.trim().strip_prefix("X(").and_then(|t| t.strip_suffix(')')).ok_or_else(malformed)?;
        let ids: Vec<ArcId> =
            inner.split(',').map(|s| s.trim().parse::<ArcId>()).collect::<Result<_, _>>().map_err(|_| malformed())?;
        let quad: [ArcId; 4] = ids.try_into().map_err(|_| malformed())?;
        crossings.push(quad);
    }
    Diagram::new(crossings, 0)
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Diagram::parse_any(s)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEFT_TREFOIL: &str = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)";

    #[test]
    fn parses_unknot() {
        let d = parse_pd("UNKNOT").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops(), 1);
    }

    #[test]
    fn parses_left_trefoil() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.crossings()[1], [3, 6, 4, 1]);
    }

    #[test]
    fn accepts_doubled_quadruple() {
        let d = parse_pd("X(1,2,3,4);X(1,2,3,4)").unwrap();
        assert_eq!(d.crossing_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4,5)"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_pd("X(1,-2,3,4)"), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_pd(""), Err(DiagramError::MalformedToken { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(DiagramError::ArcOccurrence { arc: 1, count: 1 })));
        assert!(matches!(parse_pd("X(1,1,1,2);X(2,3,3,4)"), Err(DiagramError::ArcOccurrence { arc: 1, count: 3 })));
        assert_eq!(parse_pd("X(1,1,2,2);X(3,3,4,4)"), Err(DiagramError::Disconnected));
    }

    #[test]
    fn json_rules() {
        assert_eq!(Diagram::from_json(r#"{"crossings":[],"free_loops":0}"#), Err(DiagramError::Empty));
        assert_eq!(Diagram::from_json(r#"{"crossings":[],"free_loops":2}"#), Err(DiagramError::Disconnected));
        assert_eq!(Diagram::from_json(r#"{"crossings":[[1,1,2,2]],"free_loops":1}"#), Err(DiagramError::Disconnected));
        assert!(matches!(Diagram::from_json(r#"{"crossings":[[1,1,2,2]]}"#), Err(DiagramError::Json(_))));
        let d = Diagram::from_json(r#"{"crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]],"free_loops":0}"#).unwrap();
        assert_eq!(d.to_pd_string(), LEFT_TREFOIL);
    }

    #[test]
    fn serializations_are_canonical() {
        let d = parse_pd(" X(1, 4,2,5) ; X(3,6,4,1);X(5,2,6,3) ").unwrap();
        assert_eq!(d.to_pd_string(), LEFT_TREFOIL);
        assert_eq!(d.to_json(), r#"{"crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]],"free_loops":0}"#);
        assert_eq!(Diagram::unknot().to_json(), r#"{"crossings":[],"free_loops":1}"#);
        assert_eq!(Diagram::unknot().to_pd_string(), "UNKNOT");
    }

    #[test]
    fn left_trefoil_resolutions() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        assert_eq!(d.resolve(&State::all_a(3)).unwrap().circle_count(), 3);
        assert_eq!(d.resolve(&State::all_b(3)).unwrap().circle_count(), 2);
        let r = d.resolve(&State::all_a(3)).unwrap();
        assert_eq!(r.chords().len(), 3);
        assert!(r.chords().iter().all(|ch| !ch.is_admissible()));
    }

    #[test]
    fn unknot_resolution() {
        let r = Diagram::unknot().resolve(&State::all_a(0)).unwrap();
        assert_eq!(r.circle_count(), 1);
        assert!(r.chords().is_empty());
        assert_eq!(r.names()[0].to_string(), "O");
    }

    #[test]
    fn state_size_checked() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        assert_eq!(d.resolve(&State::all_a(2)), Err(DiagramError::StateSize { expected: 3, got: 2 }));
    }

    #[test]
    fn mirror_swaps_smoothings() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        let m = d.mirror();
        assert_eq!(m.all_a_circles(), 2);
        assert_eq!(m.all_b_circles(), 3);
        assert_eq!(Diagram::unknot().mirror(), Diagram::unknot());
    }

    #[test]
    fn kink_adds_leaf_circle() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        for arc in 1..=6 {
            let k = d.add_positive_kink(arc).unwrap();
            assert_eq!(k.crossing_count(), 4);
            assert_eq!(k.all_a_circles(), 4);
            assert!(k.is_planar());
        }
        assert_eq!(d.add_positive_kink(99), Err(DiagramError::UnknownArc(99)));
        assert_eq!(Diagram::unknot().add_positive_kink(0), Err(DiagramError::NoCrossings));
    }

    #[test]
    fn kink_renames_deterministically() {
        let d = parse_pd(LEFT_TREFOIL).unwrap();
        let k = d.add_positive_kink(4).unwrap();
        assert_eq!(k.to_pd_string(), "X(1,7,2,5);X(3,6,8,1);X(5,2,6,3);X(7,8,9,9)");
    }

    #[test]
    fn planarity() {
        assert!(parse_pd(LEFT_TREFOIL).unwrap().is_planar());
        assert!(Diagram::unknot().is_planar());
        // loop joining opposite slots is not realizable in the plane
        assert!(!parse_pd("X(1,2,3,2);X(3,4,1,4)").unwrap().is_planar());
    }

    #[test]
    fn sigma_and_masks() {
        let s = State::from_b_mask(4, 0b0101);
        assert_eq!(s.sigma(), 0);
        assert_eq!(s.b_mask(), Some(0b0101));
        assert_eq!(s.swapped().b_mask(), Some(0b1010));
        assert_eq!(s.with_flip(1).b_count(), 3);
    }
}
