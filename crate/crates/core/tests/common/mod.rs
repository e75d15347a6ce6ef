#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use khxd_core::diagram::{ArcEnd, Diagram, Label, State};
use khxd_core::state_graph::StateGraph;

pub const LEFT_TREFOIL: &str = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)";
/// 3_1 as listed in KnotInfo; its all-A graph is two vertices with three edges.
pub const RIGHT_TREFOIL: &str = "X(1,5,2,4);X(3,1,4,6);X(5,3,6,2)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1);X(8,6,1,5);X(6,3,7,4);X(2,7,3,8)";
/// L2a1{1} as listed in LinkInfo (positive Hopf link).
pub const HOPF: &str = "X(4,2,3,1);X(2,4,1,3)";
/// A two-crossing code whose rotation system is not planar.
pub const NONPLANAR_HOPF: &str = "X(1,3,2,4);X(2,4,1,3)";
pub const K8_20: &str =
    "X(1,7,2,6);X(4,13,5,14);X(5,9,6,8);X(7,3,8,2);X(10,15,11,16);X(12,9,13,10);X(14,3,15,4);X(16,11,1,12)";
/// KnotInfo's 10_44 listing, before mirroring.
pub const K10_44_LISTED: &str = "X(1,14,2,15);X(3,17,4,16);X(5,20,6,1);X(7,19,8,18);X(9,7,10,6);X(11,5,12,4);\
X(13,2,14,3);X(15,13,16,12);X(17,10,18,11);X(19,9,20,8)";

pub fn pd(text: &str) -> Diagram {
    text.parse().unwrap()
}

/// The 10_44 diagram whose all-A graph has 7 vertices and `p1 = 4`.
pub fn k10_44() -> Diagram {
    pd(K10_44_LISTED).mirror()
}

/// Standard closed 2-braid diagram with `q` crossings; its all-A graph is a
/// `q`-cycle. The mirror has two vertices joined by `q` edges.
pub fn torus_2q(q: usize) -> Diagram {
    assert!(q >= 1);
    let (mut a0, mut a1, mut next) = (1u64, 2u64, 3u64);
    let mut crossings = Vec::new();
    for _ in 0..q {
        let (n0, n1) = (next, next + 1);
        next += 2;
        crossings.push([a0, a1, n0, n1]);
        a0 = n1;
        a1 = n0;
    }
    let rename = |x: u64| {
        if x == a0 {
            1
        } else if x == a1 {
            2
        } else {
            x
        }
    };
    let crossings = crossings.into_iter().map(|q| q.map(rename)).collect();
    Diagram::new(crossings, 0).unwrap()
}

/// A-adequate diagrams of the cross-check corpus.
pub fn corpus() -> Vec<(String, Diagram)> {
    let mut out = vec![
        ("left trefoil".to_string(), pd(LEFT_TREFOIL)),
        ("right trefoil".to_string(), pd(RIGHT_TREFOIL)),
        ("figure-eight".to_string(), pd(FIGURE_EIGHT)),
        ("Hopf".to_string(), pd(HOPF)),
        ("mirror Hopf".to_string(), pd(HOPF).mirror()),
    ];
    for q in 1..=6 {
        out.push((format!("T(2,{q}) two-vertex"), torus_2q(q).mirror()));
        if q >= 2 {
            out.push((format!("T(2,{q}) cycle"), torus_2q(q)));
        }
    }
    out.push(("8_20".to_string(), pd(K8_20)));
    out.push(("10_44".to_string(), k10_44()));
    out
}

/// Each corpus diagram with one positive kink on each of its arcs.
pub fn kinked_corpus() -> Vec<(String, Diagram)> {
    let mut out = Vec::new();
    for (name, d) in corpus() {
        for arc in arcs(&d) {
            out.push((format!("{name} + kink on {arc}"), d.add_positive_kink(arc).unwrap()));
        }
    }
    out
}

pub fn arcs(d: &Diagram) -> Vec<u64> {
    d.crossings().iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Number of circles of a state, by walking strands rather than union-find.
pub fn walk_circles(d: &Diagram, state: &State) -> usize {
    let c = d.crossing_count();
    if c == 0 {
        return 1;
    }
    let across = |x: usize, slot: usize| match (state.label(x), slot) {
        (Label::A, s) => s ^ 1,
        (Label::B, 0) => 3,
        (Label::B, 3) => 0,
        (Label::B, 1) => 2,
        (Label::B, _) => 1,
    };
    let mut seen = vec![false; 4 * c];
    let mut circles = 0;
    for start in 0..4 * c {
        if seen[start] {
            continue;
        }
        circles += 1;
        let mut e = start;
        loop {
            seen[e] = true;
            let p = d.partner(ArcEnd::from_index(e));
            seen[p.index()] = true;
            let next = 4 * p.crossing + across(p.crossing, p.slot);
            if seen[next] {
                break;
            }
            e = next;
        }
    }
    circles
}

/// `sum_s A^sigma (-A^2 - A^-2)^|sD|` as exponent -> coefficient.
pub fn bracket_oracle(d: &Diagram) -> BTreeMap<i64, i64> {
    let c = d.crossing_count();
    let mut total: BTreeMap<i64, i64> = BTreeMap::new();
    for mask in 0..1u64 << c {
        let state = State::from_b_mask(c, mask);
        let mut term: BTreeMap<i64, i64> = BTreeMap::from([(state.sigma(), 1)]);
        for _ in 0..walk_circles(d, &state) {
            let mut next = BTreeMap::new();
            for (e, k) in term {
                *next.entry(e + 2).or_insert(0) -= k;
                *next.entry(e - 2).or_insert(0) -= k;
            }
            term = next;
        }
        for (e, k) in term {
            *total.entry(e).or_insert(0) += k;
        }
    }
    total.retain(|_, k| *k != 0);
    total
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|col| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, v)| *v).collect())
                .collect();
            let sign = if col % 2 == 0 { 1 } else { -1 };
            sign * m[0][col] * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Smith diagonal from determinantal divisors: `d_k = D_k / D_{k-1}` where
/// `D_k` is the gcd of all `k x k` minors.
pub fn snf_oracle(m: &[Vec<i64>]) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|r| cs.iter().map(|c| i128::from(m[*r][*c])).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        divisors.push(g);
    }
    (1..divisors.len()).map(|k| if divisors[k] == 0 { 0 } else { (divisors[k] / divisors[k - 1]) as u64 }).collect()
}

pub type EdgeList = Vec<(usize, usize)>;

pub fn canonical(vertices: usize, edges: &EdgeList) -> EdgeList {
    let mut best: Option<EdgeList> = None;
    let mut perm: Vec<usize> = (0..vertices).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut relabelled: EdgeList = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p[u], p[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        relabelled.sort();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            best = Some(relabelled);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Every loopless connected multigraph with exactly `edges` edges, one per
/// isomorphism class, as `(vertex count, sorted edge list)`.
pub fn connected_multigraphs(edges: usize) -> Vec<(usize, EdgeList)> {
    let mut level: BTreeSet<(usize, EdgeList)> = BTreeSet::from([(1, vec![])]);
    for _ in 0..edges {
        let mut next = BTreeSet::new();
        for (n, es) in &level {
            for u in 0..*n {
                for v in u + 1..=*n {
                    let vertices = if v == *n { n + 1 } else { *n };
                    let mut grown = es.clone();
                    grown.push((u, v));
                    next.insert((vertices, canonical(vertices, &grown)));
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

pub fn to_graph(vertices: usize, edges: &EdgeList) -> StateGraph {
    StateGraph::with_anonymous_vertices(vertices, edges.clone()).unwrap()
}
