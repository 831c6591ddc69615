//! Cross-checks against independent brute-force and closed-form oracles.

use cauchon::grid::{enumerate_diagrams, is_valid_diagram};
use cauchon::minors::{minor_family, MinorFamily, MinorIndex};
use cauchon::perm::{bruhat_leq, enumerate_restricted, in_restricted_set};
use cauchon::pipedream::diagram_to_permutation;
use cauchon::{CauchonDiagram, GridPos, GridShape, Permutation};

fn shape(m: usize, p: usize) -> GridShape {
    GridShape::new(m, p).unwrap()
}

fn stirling2(n: u64, k: u64) -> u64 {
    match (n, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Closed form for the number of Cauchon diagrams (poly-Bernoulli numbers).
fn poly_bernoulli(m: u64, p: u64) -> u64 {
    (0..=m.min(p))
        .map(|j| factorial(j).pow(2) * stirling2(m + 1, j + 1) * stirling2(p + 1, j + 1))
        .sum()
}

/// The defining condition, checked box by box on a set of positions.
fn brute_force_valid(black: &[(usize, usize)]) -> bool {
    let is_black = |i, a| black.contains(&(i, a));
    black
        .iter()
        .all(|&(i, a)| (1..a).all(|b| is_black(i, b)) || (1..i).all(|k| is_black(k, a)))
}

/// Every permutation of `1..=n`, by Heap's algorithm.
fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            go(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    go(n, &mut (1..=n).collect(), &mut out);
    out
}

/// Tableau criterion: u ≤ v iff for every k the sorted first k values of u
/// are componentwise at most those of v.
fn tableau_leq(u: &[usize], v: &[usize]) -> bool {
    (1..=u.len()).all(|k| {
        let mut a = u[..k].to_vec();
        let mut b = v[..k].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a.iter().zip(&b).all(|(x, y)| x <= y)
    })
}

#[test]
fn diagram_counts_match_closed_form() {
    for m in 1..=5 {
        for p in 1..=(8 - m).min(5) {
            let count = enumerate_diagrams(shape(m, p)).unwrap().count() as u64;
            assert_eq!(count, poly_bernoulli(m as u64, p as u64), "{m}x{p}");
        }
    }
    assert_eq!(poly_bernoulli(3, 3), 230);
    assert_eq!(poly_bernoulli(4, 4), 6902);
}

#[test]
fn validity_matches_definition_on_every_subset() {
    for (m, p) in [(2, 2), (2, 3), (3, 2), (3, 3), (1, 4), (2, 4)] {
        let cells: Vec<(usize, usize)> = (1..=m).flat_map(|i| (1..=p).map(move |a| (i, a))).collect();
        for mask in 0u32..(1 << cells.len()) {
            let black: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let positions: Vec<GridPos> = black.iter().map(|&(i, a)| GridPos::new(i, a)).collect();
            assert_eq!(
                is_valid_diagram(shape(m, p), &positions).unwrap(),
                brute_force_valid(&black),
                "{m}x{p} {black:?}"
            );
        }
    }
}

#[test]
fn restricted_set_matches_filter() {
    for m in 1..=4 {
        for p in 1..=(7 - m) {
            let n = m + p;
            let mut filtered: Vec<Vec<usize>> = heap_permutations(n)
                .into_iter()
                .filter(|w| {
                    w.iter()
                        .enumerate()
                        .all(|(i, &v)| v + p > i && v <= i + 1 + m)
                })
                .collect();
            filtered.sort();
            let listed: Vec<Vec<usize>> = enumerate_restricted(shape(m, p))
                .unwrap()
                .iter()
                .map(|w| w.images().to_vec())
                .collect();
            assert_eq!(listed, filtered, "{m}x{p}");
        }
    }
}

#[test]
fn bruhat_matches_tableau_criterion() {
    for n in 1..=5 {
        let all = heap_permutations(n);
        for u in &all {
            let pu = Permutation::new(u.clone()).unwrap();
            for v in &all {
                let pv = Permutation::new(v.clone()).unwrap();
                assert_eq!(bruhat_leq(&pu, &pv).unwrap(), tableau_leq(u, v), "{u:?} {v:?}");
            }
        }
    }
    let u = Permutation::new(vec![2, 1, 3]).unwrap();
    let v = Permutation::new(vec![3, 1, 2]).unwrap();
    assert!(bruhat_leq(&u, &v).unwrap());
}

#[test]
fn four_by_five_example_maps_into_restricted_set() {
    let black = [
        (1, 1),
        (1, 2),
        (1, 4),
        (2, 4),
        (3, 1),
        (3, 2),
        (3, 3),
        (3, 4),
        (3, 5),
        (4, 1),
        (4, 2),
        (4, 4),
    ];
    let s = shape(4, 5);
    let d = CauchonDiagram::new(s, black.iter().map(|&(i, a)| GridPos::new(i, a))).unwrap();
    let w = diagram_to_permutation(&d);
    assert_eq!(w.size(), 9);
    assert!(in_restricted_set(&w, s).unwrap());
}

#[test]
fn single_black_corner_family() {
    let s = shape(2, 2);
    let d = CauchonDiagram::new(s, [GridPos::new(1, 1)]).unwrap();
    let w = diagram_to_permutation(&d);
    let det = MinorIndex::new(vec![1, 2], vec![1, 2]).unwrap();
    assert_eq!(minor_family(&w, s).unwrap(), MinorFamily::new(s, [det]).unwrap());
}
