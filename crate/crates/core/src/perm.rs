//! Permutations of `[1, N]`, the Bruhat order and the restricted set
//! `S = { w : -p <= w(i) - i <= m }`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridShape;

/// Default bound on `N = m + p` for restricted-set enumeration.
pub const DEFAULT_RESTRICTED_BOUND: usize = 9;

/// A permutation `w` of `[1, N]`, stored as its 1-based image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermutationJson", into = "PermutationJson")]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermutationJson {
    n: usize,
    images: Vec<usize>,
}

impl TryFrom<PermutationJson> for Permutation {
    type Error = Error;
    fn try_from(raw: PermutationJson) -> Result<Self> {
        if raw.images.len() != raw.n {
            return Err(Error::SizeMismatch {
                expected: raw.n,
                found: raw.images.len(),
            });
        }
        Permutation::new(raw.images)
    }
}

impl From<Permutation> for PermutationJson {
    fn from(w: Permutation) -> Self {
        PermutationJson {
            n: w.images.len(),
            images: w.images,
        }
    }
}

impl Permutation {
    /// Validates that `images` is a bijection of `[1, images.len()]`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::input("a permutation needs at least one point"));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::input(format!("{images:?} is not a permutation of [1,{n}]")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        same_size(self, other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        })
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.size();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Image of a set of points, sorted ascending.
    pub fn image_sorted(&self, points: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut out: Vec<usize> = points.into_iter().map(|i| self.apply(i)).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn same_size(u: &Permutation, v: &Permutation) -> Result<()> {
    if u.size() == v.size() {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            expected: u.size(),
            found: v.size(),
        })
    }
}

/// The longest element of `S_r`: `i ↦ r + 1 - i`.
pub fn longest_element(r: usize) -> Result<Permutation> {
    if r == 0 {
        return Err(Error::input("longest element needs r >= 1"));
    }
    Ok(Permutation {
        images: (1..=r).rev().collect(),
    })
}

/// The block permutation `(w°^p, w°^m)` of `S_{m+p}`: the first `p` points
/// reversed among themselves, then the last `m` points reversed.
pub fn block_longest(m: usize, p: usize) -> Result<Permutation> {
    if m == 0 || p == 0 {
        return Err(Error::input("block_longest needs m, p >= 1"));
    }
    let first = (1..=p).rev();
    let second = (p + 1..=p + m).rev();
    Ok(Permutation {
        images: first.chain(second).collect(),
    })
}

/// The maximum of the restricted set in Bruhat order:
/// `[m+1, ..., m+p, 1, ..., m]`.
pub fn restricted_max(shape: GridShape) -> Permutation {
    let (m, p) = (shape.m(), shape.p());
    Permutation {
        images: (m + 1..=m + p).chain(1..=m).collect(),
    }
}

/// Bruhat comparison by the rank-matrix criterion:
/// `u <= v` iff `#{k <= i : u(k) >= j} <= #{k <= i : v(k) >= j}` for all `i, j`.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    same_size(u, v)?;
    let n = u.size();
    // cu[j], cv[j] hold #{k <= i : w(k) >= j} for the current prefix length i.
    let mut cu = vec![0usize; n + 2];
    let mut cv = vec![0usize; n + 2];
    for i in 0..n {
        cu[1..=u.images[i]].iter_mut().for_each(|c| *c += 1);
        cv[1..=v.images[i]].iter_mut().for_each(|c| *c += 1);
        if (1..=n).any(|j| cu[j] > cv[j]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `-p <= w(i) - i <= m` for every `i`.
pub fn in_restricted_set(w: &Permutation, shape: GridShape) -> Result<bool> {
    if w.size() != shape.n() {
        return Err(Error::SizeMismatch {
            expected: shape.n(),
            found: w.size(),
        });
    }
    Ok(w.images.iter().enumerate().all(|(k, &v)| displacement_ok(k + 1, v, shape)))
}

fn displacement_ok(i: usize, v: usize, shape: GridShape) -> bool {
    let d = v as isize - i as isize;
    -(shape.p() as isize) <= d && d <= shape.m() as isize
}

pub(crate) fn ensure_restricted(w: &Permutation, shape: GridShape) -> Result<()> {
    if in_restricted_set(w, shape)? {
        Ok(())
    } else {
        Err(Error::NotRestricted(w.images.clone()))
    }
}

/// Enumerates the restricted set in lexicographic order of image lists,
/// using [`DEFAULT_RESTRICTED_BOUND`].
pub fn enumerate_restricted(shape: GridShape) -> Result<Vec<Permutation>> {
    enumerate_restricted_with_bound(shape, DEFAULT_RESTRICTED_BOUND)
}

pub fn enumerate_restricted_with_bound(shape: GridShape, bound: usize) -> Result<Vec<Permutation>> {
    if shape.n() > bound {
        return Err(Error::BoundExceeded {
            what: "restricted-set enumeration",
            size: shape.n(),
            bound,
        });
    }
    let n = shape.n();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    extend_restricted(shape, &mut images, &mut used, &mut out);
    Ok(out)
}

fn extend_restricted(shape: GridShape, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    let n = shape.n();
    let i = images.len() + 1;
    if i > n {
        out.push(Permutation { images: images.clone() });
        return;
    }
    // A value v can sit no later than position v + p.
    if i > shape.p() + 1 && (1..i - shape.p()).any(|v| !used[v]) {
        return;
    }
    let lo = i.saturating_sub(shape.p()).max(1);
    let hi = (i + shape.m()).min(n);
    for v in lo..=hi {
        if !used[v] {
            used[v] = true;
            images.push(v);
            extend_restricted(shape, images, used, out);
            images.pop();
            used[v] = false;
        }
    }
}

/// All of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut current = Some((1..=n).collect::<Vec<usize>>());
    std::iter::from_fn(move || {
        let images = current.take()?;
        current = next_lexicographic(&images);
        Some(Permutation { images })
    })
}

fn next_lexicographic(v: &[usize]) -> Option<Vec<usize>> {
    let mut next = v.to_vec();
    let i = (1..next.len()).rev().find(|&i| next[i - 1] < next[i])?;
    let j = (i..next.len()).rev().find(|&j| next[j] > next[i - 1])?;
    next.swap(i - 1, j);
    next[i..].reverse();
    Some(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn shape(m: usize, p: usize) -> GridShape {
        GridShape::new(m, p).unwrap()
    }

    #[test]
    fn longest_elements() {
        assert!(longest_element(1).unwrap().is_identity());
        assert_eq!(longest_element(2).unwrap(), perm(&[2, 1]));
        assert_eq!(longest_element(4).unwrap(), perm(&[4, 3, 2, 1]));
        assert!(longest_element(0).is_err());
    }

    #[test]
    fn block_longest_examples() {
        assert_eq!(block_longest(1, 1).unwrap(), perm(&[1, 2]));
        assert_eq!(block_longest(2, 2).unwrap(), perm(&[2, 1, 4, 3]));
        assert_eq!(block_longest(1, 2).unwrap(), perm(&[2, 1, 3]));
        assert_eq!(block_longest(3, 1).unwrap(), perm(&[1, 4, 3, 2]));
    }

    #[test]
    fn bruhat_examples() {
        let w = perm(&[3, 1, 2]);
        assert!(bruhat_leq(&w, &w).unwrap());
        assert!(bruhat_leq(&Permutation::identity(3), &w).unwrap());
        assert!(bruhat_leq(&perm(&[2, 1, 3]), &w).unwrap());
        assert!(!bruhat_leq(&w, &perm(&[2, 1, 3])).unwrap());
        assert!(!bruhat_leq(&perm(&[2, 1, 3]), &perm(&[1, 3, 2])).unwrap());
        assert!(matches!(
            bruhat_leq(&w, &Permutation::identity(4)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn restricted_membership() {
        assert!(in_restricted_set(&Permutation::identity(4), shape(2, 2)).unwrap());
        assert!(in_restricted_set(&perm(&[3, 4, 1, 2]), shape(2, 2)).unwrap());
        assert!(!in_restricted_set(&perm(&[4, 1, 2, 3]), shape(2, 2)).unwrap());
        assert!(in_restricted_set(&perm(&[1, 2, 3]), shape(2, 2)).is_err());
    }

    #[test]
    fn restricted_counts() {
        assert_eq!(enumerate_restricted(shape(1, 1)).unwrap().len(), 2);
        assert_eq!(enumerate_restricted(shape(2, 2)).unwrap().len(), 14);
        assert_eq!(enumerate_restricted(shape(3, 3)).unwrap().len(), 230);
        assert!(matches!(
            enumerate_restricted(shape(5, 5)),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn restricted_enumeration_matches_filter() {
        for (m, p) in [(1, 3), (2, 2), (3, 2), (2, 4)] {
            let s = shape(m, p);
            let filtered: Vec<Permutation> = all_permutations(s.n())
                .filter(|w| in_restricted_set(w, s).unwrap())
                .collect();
            assert_eq!(enumerate_restricted(s).unwrap(), filtered);
        }
    }

    #[test]
    fn compose_and_inverse() {
        let w = perm(&[2, 3, 1]);
        let id = w.compose(&w.inverse()).unwrap();
        assert!(id.is_identity());
        // (u∘v)(1) = u(v(1))
        let u = perm(&[3, 1, 2]);
        assert_eq!(u.compose(&w).unwrap().apply(1), u.apply(w.apply(1)));
        assert_eq!(perm(&[3, 2, 1]).length(), 3);
    }

    #[test]
    fn all_permutations_counts() {
        assert_eq!(all_permutations(4).count(), 24);
        assert_eq!(all_permutations(1).count(), 1);
    }

    #[test]
    fn json_shape() {
        let w = perm(&[2, 1, 3]);
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"n":3,"images":[2,1,3]}"#);
        assert!(serde_json::from_str::<Permutation>(r#"{"n":3,"images":[2,2,3]}"#).is_err());
        assert!(serde_json::from_str::<Permutation>(r#"{"n":4,"images":[2,1,3]}"#).is_err());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }
}
