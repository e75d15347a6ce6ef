mod common;

use std::collections::BTreeMap;

use common::*;
use khxd_core::diagram::{Diagram, State};
use khxd_core::homology::{AbelianGroup, SparseMatrix};
use khxd_core::khovanov::{
    almost_extreme_column, almost_extreme_generators, build_column, build_column_with, euler_polynomial, j_extremes,
    kauffman_bracket, khovanov_table, Enumeration, KhovanovError, DEFAULT_MAX_C,
};
use proptest::prelude::*;

/// Integral Khovanov polynomials from KnotInfo (`t^I q^J`, `T^(2)` for Z/2).
const KNOTINFO_3_1: &str = "q+ q^(3)+ t^(2)*q^(5)+ t^(3)*q^(9)+ t^(3)*q^(7)*T^(2)";
const KNOTINFO_4_1: &str =
    "t^(-2)*q^(-5)+ t^(-1)*q^(-1)+ q^(-1)+ q+ t*q+ t^(2)*q^(5)+ t^(-1)*q^(-3)*T^(2)+ t^(2)*q^(3)*T^(2)";
const KNOTINFO_8_20: &str = "t^(-5)*q^(-11)+ t^(-4)*q^(-7)+ t^(-3)*q^(-7)+ t^(-2)*q^(-5)+ t^(-2)*q^(-3)+ \
t^(-1)*q^(-1)+ 2*q^(-1)+ q+ t*q^(3)+ t^(-4)*q^(-9)*T^(2)+ t^(-2)*q^(-5)*T^(2)+ t^(-1)*q^(-3)*T^(2)+ t*q*T^(2)";
const KNOTINFO_10_44: &str = "t^(-4)*q^(-7)+ 2*t^(-3)*q^(-5)+ t^(-3)*q^(-3)+ 4*t^(-2)*q^(-3)+ 2*t^(-2)*q^(-1)+ \
5*t^(-1)*q^(-1)+ 4*t^(-1)*q+ 7*q+ 6*q^(3)+ 7*t*q^(3)+ 6*t*q^(5)+ 6*t^(2)*q^(5)+ 7*t^(2)*q^(7)+ 4*t^(3)*q^(7)+ \
6*t^(3)*q^(9)+ 3*t^(4)*q^(9)+ 4*t^(4)*q^(11)+ t^(5)*q^(11)+ 3*t^(5)*q^(13)+ t^(6)*q^(15)+ t^(-3)*q^(-5)*T^(2)+ \
2*t^(-2)*q^(-3)*T^(2)+ 4*t^(-1)*q^(-1)*T^(2)+ 5*q*T^(2)+ 6*t*q^(3)*T^(2)+ 7*t^(2)*q^(5)*T^(2)+ \
6*t^(3)*q^(7)*T^(2)+ 4*t^(4)*q^(9)*T^(2)+ 3*t^(5)*q^(11)*T^(2)+ t^(6)*q^(13)*T^(2)";

fn parse_khovanov_polynomial(text: &str) -> BTreeMap<(i64, i64), AbelianGroup> {
    let exponent = |factor: &str, var: &str| -> Option<i64> {
        if factor == var {
            return Some(1);
        }
        factor.strip_prefix(&format!("{var}^("))?.strip_suffix(')')?.parse().ok()
    };
    let mut out: BTreeMap<(i64, i64), AbelianGroup> = BTreeMap::new();
    for term in text.split('+').map(str::trim) {
        let (mut k, mut t, mut q, mut torsion) = (1usize, 0, 0, false);
        for factor in term.split('*') {
            if let Ok(n) = factor.parse::<usize>() {
                k = n;
            } else if let Some(e) = exponent(factor, "t") {
                t = e;
            } else if let Some(e) = exponent(factor, "q") {
                q = e;
            } else if factor == "T^(2)" {
                torsion = true;
            } else {
                panic!("unexpected factor {factor:?}");
            }
        }
        let g = if torsion { AbelianGroup::new(0, &vec![2; k]) } else { AbelianGroup::free(k) };
        let slot = out.entry((t, q)).or_default();
        *slot = slot.plus(&g);
    }
    out
}

/// Writhes `w` for which the oriented table, regraded by
/// `i = w - 2I`, `j = 3w - 2J`, equals the framed table of `d`.
fn matching_writhes(d: &Diagram, oriented: &BTreeMap<(i64, i64), AbelianGroup>) -> Vec<i64> {
    let framed = khovanov_table(d, DEFAULT_MAX_C).unwrap().groups;
    let c = d.crossing_count() as i64;
    (-c..=c)
        .filter(|w| {
            let regraded: BTreeMap<(i64, i64), AbelianGroup> =
                oriented.iter().map(|((i, j), g)| ((w - 2 * i, 3 * w - 2 * j), g.clone())).collect();
            regraded == framed
        })
        .collect()
}

#[test]
fn full_tables_match_knot_tables() {
    assert_eq!(matching_writhes(&pd(RIGHT_TREFOIL), &parse_khovanov_polynomial(KNOTINFO_3_1)), vec![3]);
    assert_eq!(matching_writhes(&pd(FIGURE_EIGHT), &parse_khovanov_polynomial(KNOTINFO_4_1)), vec![0]);
    assert_eq!(matching_writhes(&pd(K8_20), &parse_khovanov_polynomial(KNOTINFO_8_20)).len(), 1);
    assert_eq!(matching_writhes(&pd(K10_44_LISTED), &parse_khovanov_polynomial(KNOTINFO_10_44)).len(), 1);
}

#[test]
fn right_trefoil_framed_table() {
    let t = khovanov_table(&pd(RIGHT_TREFOIL), DEFAULT_MAX_C).unwrap();
    let expected = BTreeMap::from([
        ((3, 7), AbelianGroup::free(1)),
        ((3, 3), AbelianGroup::free(1)),
        ((-1, -1), AbelianGroup::free(1)),
        ((-3, -9), AbelianGroup::free(1)),
        ((-3, -5), AbelianGroup::new(0, &[2])),
    ]);
    assert_eq!(t.groups, expected);
}

#[test]
fn left_trefoil_bracket() {
    let b = kauffman_bracket(&pd(LEFT_TREFOIL));
    assert_eq!(b.to_string(), "-A^9 + A + A^-3 + A^-7");
    let oracle = bracket_oracle(&pd(LEFT_TREFOIL));
    assert_eq!(b.terms().collect::<BTreeMap<_, _>>(), oracle);
}

#[test]
fn bracket_matches_state_sum_oracle() {
    for (name, d) in corpus() {
        if d.crossing_count() > 10 {
            continue;
        }
        let ours: BTreeMap<i64, i64> = kauffman_bracket(&d).terms().collect();
        assert_eq!(ours, bracket_oracle(&d), "{name}");
    }
    // top coefficient of the two-vertex trefoil chirality
    let d = pd(RIGHT_TREFOIL);
    let (j_max, _) = j_extremes(&d);
    assert_eq!(kauffman_bracket(&d).coefficient(j_max), 1);
    assert_eq!(kauffman_bracket(&d).max_degree(), Some(j_max));
}

#[test]
fn euler_identity_on_corpus() {
    for (name, d) in corpus() {
        let t = khovanov_table(&d, DEFAULT_MAX_C).unwrap();
        let b = kauffman_bracket(&d);
        assert_eq!(euler_polynomial(&t.chain_ranks), b, "{name} chain ranks");
        assert_eq!(euler_polynomial(&t.betti()), b, "{name} betti numbers");
    }
}

#[test]
fn j_extreme_values() {
    assert_eq!(j_extremes(&pd(LEFT_TREFOIL)), (9, 5));
    assert_eq!(j_extremes(&pd(FIGURE_EIGHT)), (10, 6));
    assert_eq!(j_extremes(&pd(K8_20)), (16, 12));
    assert_eq!(j_extremes(&k10_44()), (24, 20));
    assert_eq!(j_extremes(&Diagram::unknot()), (2, -2));
}

#[test]
fn almost_extreme_ranks() {
    let ranks = |d: &Diagram| almost_extreme_column(d).unwrap().ranks();
    assert_eq!(ranks(&pd(LEFT_TREFOIL)), BTreeMap::from([(3, 3), (1, 3)]));
    assert_eq!(ranks(&pd(FIGURE_EIGHT)), BTreeMap::from([(4, 3), (2, 4), (0, 1)]));
    assert_eq!(ranks(&pd(HOPF)), BTreeMap::from([(2, 2), (0, 2), (-2, 1)]));
    for (name, d) in corpus() {
        let c = d.crossing_count() as i64;
        let r = ranks(&d);
        assert_eq!(r[&c], d.all_a_circles(), "{name}");
        assert_eq!(r[&(c - 2)], d.crossing_count(), "{name}");
    }
}

#[test]
fn closed_generators_match_brute_force() {
    for (name, d) in corpus().into_iter().chain(kinked_corpus()) {
        if d.crossing_count() > 9 {
            continue;
        }
        let (_, j_almax) = j_extremes(&d);
        let brute = build_column_with(&d, j_almax, Enumeration::BruteForce).unwrap();
        let closed = almost_extreme_generators(&d).unwrap();
        assert_eq!(closed.keys().copied().collect::<Vec<_>>(), brute.degrees(), "{name}");
        for (i, gens) in closed {
            assert_eq!(gens, brute.generators(i), "{name} degree {i}");
        }
    }
}

#[test]
fn pruned_enumeration_is_exact() {
    for (name, d) in corpus() {
        if d.crossing_count() > 8 {
            continue;
        }
        let (j_max, _) = j_extremes(&d);
        let j_min = -(d.crossing_count() as i64) - 2 * d.all_b_circles() as i64;
        for j in (j_min - 2..=j_max + 2).step_by(2) {
            let a = build_column_with(&d, j, Enumeration::Pruned).unwrap();
            let b = build_column_with(&d, j, Enumeration::BruteForce).unwrap();
            assert_eq!(a.ranks(), b.ranks(), "{name} j = {j}");
            for i in a.degrees() {
                assert_eq!(a.boundary(i), b.boundary(i), "{name} ({i}, {j})");
            }
        }
    }
}

#[test]
fn generators_carry_their_gradings() {
    let d = pd(FIGURE_EIGHT);
    for j in (-10..=10).step_by(2) {
        let col = build_column(&d, j).unwrap();
        for i in col.degrees() {
            for g in col.generators(i) {
                assert_eq!(g.gradings(), (i, j));
                assert_eq!(g.signs.len(), d.resolve(&g.state).unwrap().circle_count());
            }
        }
    }
}

#[test]
fn extreme_column_is_single_z() {
    for (name, d) in corpus().into_iter().chain(kinked_corpus()) {
        let (j_max, _) = j_extremes(&d);
        let h = build_column(&d, j_max).unwrap().homology().unwrap();
        let c = d.crossing_count() as i64;
        let nonzero: Vec<_> = h.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        assert_eq!(nonzero, vec![(c, AbelianGroup::free(1))], "{name}");
    }
}

#[test]
fn kink_shifts_table() {
    for (name, d) in corpus() {
        if d.crossing_count() > 6 {
            continue;
        }
        let t = khovanov_table(&d, DEFAULT_MAX_C).unwrap();
        for arc in arcs(&d) {
            let k = khovanov_table(&d.add_positive_kink(arc).unwrap(), DEFAULT_MAX_C).unwrap();
            assert_eq!(k.groups, t.shifted(1, 3).groups, "{name} arc {arc}");
        }
    }
}

#[test]
fn kinked_unknot_table() {
    // a single crossing whose A-smoothing splits off a leaf circle
    let kinked = pd("X(1,1,2,2)");
    assert_eq!(kinked.all_a_circles(), 2);
    let u = khovanov_table(&Diagram::unknot(), DEFAULT_MAX_C).unwrap();
    assert_eq!(u.groups, BTreeMap::from([((0, -2), AbelianGroup::free(1)), ((0, 2), AbelianGroup::free(1))]));
    let t = khovanov_table(&kinked, DEFAULT_MAX_C).unwrap();
    assert_eq!(t.groups, u.shifted(1, 3).groups);
}

#[test]
fn rejects_bad_inputs() {
    let np = pd(NONPLANAR_HOPF);
    assert_eq!(build_column(&np, 0).unwrap_err(), KhovanovError::NonPlanar);
    let big = khovanov_table(&k10_44(), 9).unwrap_err();
    assert_eq!(big, KhovanovError::TooManyCrossings { c: 10, max: 9 });
    let loopy = pd(LEFT_TREFOIL).mirror().add_positive_kink(1).unwrap().mirror();
    assert!(matches!(almost_extreme_column(&loopy), Err(KhovanovError::NotAAdequate { .. })));
}

fn shuffled(d: &Diagram, seed: u64) -> Diagram {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut order: Vec<usize> = (0..d.crossing_count()).collect();
    order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    d.permuted(&order).unwrap()
}

fn composes_to_zero(a: &SparseMatrix, b: &SparseMatrix) -> bool {
    a.mul_exact(b).is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differential_squares_to_zero(idx in 0usize..14, arc_pick in 0usize..32, kink in any::<bool>(), jj in 0i64..16) {
        let mut d = corpus()[idx].1.clone();
        if kink {
            let a = arcs(&d);
            d = d.add_positive_kink(a[arc_pick % a.len()]).unwrap();
        }
        let (j_max, _) = j_extremes(&d);
        let col = build_column(&d, j_max - 2 * jj).unwrap();
        for i in col.degrees() {
            if let (Some(a), Some(b)) = (col.boundary(i - 2), col.boundary(i)) {
                prop_assert!(composes_to_zero(a, b));
            }
        }
    }

    #[test]
    fn homology_ignores_crossing_order(idx in 0usize..18, seed in any::<u64>()) {
        let (_, d) = &corpus()[idx];
        prop_assume!(d.crossing_count() <= 8);
        let p = shuffled(d, seed);
        prop_assert_eq!(khovanov_table(d, DEFAULT_MAX_C).unwrap().groups, khovanov_table(&p, DEFAULT_MAX_C).unwrap().groups);
    }

    #[test]
    fn single_flips_change_one_circle(idx in 0usize..18, mask in any::<u64>(), x in 0usize..16) {
        let (_, d) = &corpus()[idx];
        let c = d.crossing_count();
        let s = State::from_b_mask(c, mask & ((1u64 << c) - 1));
        let n = d.resolve(&s).unwrap().circle_count() as i64;
        let m = d.resolve(&s.with_flip(x % c)).unwrap().circle_count() as i64;
        prop_assert_eq!((n - m).abs(), 1);
    }
}
