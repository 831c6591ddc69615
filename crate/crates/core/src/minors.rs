//! Minor indices, the componentwise order on index sets, and the families
//! `M_q(w)` attached to restricted permutations.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridShape;
use crate::perm::{ensure_restricted, Permutation};

/// Componentwise order on equal-size index sets listed in ascending order:
/// `A <= B` iff `a_k <= b_k` for every `k`.
pub fn indexset_leq(a: &[usize], b: &[usize]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(leq_unchecked(a, b))
}

fn leq_unchecked(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A minor `[I | Λ]` with `I ⊆ [1,m]`, `Λ ⊆ [1,p]`, `|I| = |Λ| >= 1`, both
/// strictly ascending.
///
/// Ordered by size, then rows, then columns.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MinorJson")]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Deserialize)]
struct MinorJson {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl TryFrom<MinorJson> for MinorIndex {
    type Error = Error;
    fn try_from(raw: MinorJson) -> Result<Self> {
        MinorIndex::new(raw.rows, raw.cols)
    }
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("the empty minor is not a member of any family"));
        }
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch {
                expected: rows.len(),
                found: cols.len(),
            });
        }
        for set in [&rows, &cols] {
            if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::input(format!("index set {set:?} must be strictly ascending and 1-based")));
            }
        }
        Ok(MinorIndex { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn fits(&self, shape: GridShape) -> bool {
        self.rows.last().is_some_and(|&r| r <= shape.m()) && self.cols.last().is_some_and(|&c| c <= shape.p())
    }

    pub(crate) fn ensure_fits(&self, shape: GridShape) -> Result<()> {
        if self.fits(shape) {
            Ok(())
        } else {
            Err(Error::input(format!("minor {self} does not fit the {shape} grid")))
        }
    }
}

impl Ord for MinorIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.cols.cmp(&other.cols))
    }
}

impl PartialOrd for MinorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_indices(f: &mut fmt::Formatter<'_>, set: &[usize]) -> fmt::Result {
    if set.iter().all(|&v| v < 10) {
        set.iter().try_for_each(|v| write!(f, "{v}"))
    } else {
        write!(f, "{}", set.iter().join(","))
    }
}

/// `[12|13]` notation.
impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        write_indices(f, &self.rows)?;
        write!(f, "|")?;
        write_indices(f, &self.cols)?;
        write!(f, "]")
    }
}

impl fmt::Debug for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every nonempty minor of the shape, in [`MinorIndex`] order.
/// There are `C(m+p, m) - 1` of them.
pub fn enumerate_minors(shape: GridShape) -> Vec<MinorIndex> {
    let mut out = Vec::new();
    for k in 1..=shape.m().min(shape.p()) {
        for rows in (1..=shape.m()).combinations(k) {
            for cols in (1..=shape.p()).combinations(k) {
                out.push(MinorIndex {
                    rows: rows.clone(),
                    cols,
                });
            }
        }
    }
    out
}

/// A set of minors of one shape.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct MinorFamily {
    shape: GridShape,
    members: BTreeSet<MinorIndex>,
}

/// Wire form: `{"m":…, "p":…, "minors": [{"rows":[...], "cols":[...]}, ...]}`.
#[derive(Serialize, Deserialize)]
struct FamilyJson {
    m: usize,
    p: usize,
    minors: Vec<MinorIndex>,
}

impl TryFrom<FamilyJson> for MinorFamily {
    type Error = Error;
    fn try_from(raw: FamilyJson) -> Result<Self> {
        MinorFamily::new(GridShape::new(raw.m, raw.p)?, raw.minors)
    }
}

impl From<MinorFamily> for FamilyJson {
    fn from(f: MinorFamily) -> Self {
        FamilyJson {
            m: f.shape.m(),
            p: f.shape.p(),
            minors: f.members.into_iter().collect(),
        }
    }
}

impl MinorFamily {
    pub fn new(shape: GridShape, members: impl IntoIterator<Item = MinorIndex>) -> Result<Self> {
        let members: BTreeSet<MinorIndex> = members.into_iter().collect();
        for ix in &members {
            ix.ensure_fits(shape)?;
        }
        Ok(MinorFamily { shape, members })
    }

    pub fn empty(shape: GridShape) -> Self {
        MinorFamily {
            shape,
            members: BTreeSet::new(),
        }
    }

    /// All minors of the shape.
    pub fn all(shape: GridShape) -> Self {
        MinorFamily {
            shape,
            members: enumerate_minors(shape).into_iter().collect(),
        }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn contains(&self, ix: &MinorIndex) -> bool {
        self.members.contains(ix)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MinorIndex> {
        self.members.iter()
    }

    /// Minors in exactly one of the two families.
    pub fn symmetric_difference(&self, other: &MinorFamily) -> Vec<MinorIndex> {
        self.members.symmetric_difference(&other.members).cloned().collect()
    }
}

impl fmt::Debug for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.iter().join(", "))
    }
}

impl fmt::Display for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which of the four defining conditions of `M_q(w)` a minor satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMembership {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl FamilyMembership {
    pub fn any(&self) -> bool {
        self.c1 || self.c2 || self.c3 || self.c4
    }
}

/// Evaluates the four membership conditions of `M_q(w)` for the minor `ix`.
///
/// With `N = m + p`, `w°^r(i) = r + 1 - i` and set images sorted ascending:
///
/// 1. `I ≰ w°^m w(L)` for all `L ⊆ [1,p] ∩ w⁻¹[1,m]` with `|L| = |I|`, `L <= Λ`;
/// 2. `m + Λ ≰ w w°^N(L)` for all `L ⊆ [1,m] ∩ w°^N w⁻¹[m+1,N]` with `|L| = |Λ|`, `L <= I`;
/// 3. some `1 <= r <= s <= p` has `|Λ ∩ [r,s]| > |[r,s] \ w⁻¹[m+r, m+s]|`;
/// 4. some `1 <= r <= s <= m` has `|I ∩ [r,s]| > |w°^N[r,s] \ w⁻¹ w°^m[r,s]|`.
pub fn minor_in_family(w: &Permutation, ix: &MinorIndex, shape: GridShape) -> Result<FamilyMembership> {
    ensure_restricted(w, shape)?;
    ix.ensure_fits(shape)?;
    Ok(membership(w, &w.inverse(), ix, shape))
}

fn membership(w: &Permutation, w_inv: &Permutation, ix: &MinorIndex, shape: GridShape) -> FamilyMembership {
    let (m, p, n) = (shape.m(), shape.p(), shape.n());
    let k = ix.size();
    let rows = ix.rows();
    let cols = ix.cols();

    let c1 = {
        let domain = (1..=p).filter(|&l| w.apply(l) <= m);
        !domain.combinations(k).any(|l_set| {
            leq_unchecked(&l_set, cols) && {
                let image = sorted(l_set.iter().map(|&l| m + 1 - w.apply(l)));
                leq_unchecked(rows, &image)
            }
        })
    };

    let c2 = {
        let shifted: Vec<usize> = cols.iter().map(|&c| m + c).collect();
        let domain = (1..=m).filter(|&l| w.apply(n + 1 - l) > m);
        !domain.combinations(k).any(|l_set| {
            leq_unchecked(&l_set, rows) && {
                let image = sorted(l_set.iter().map(|&l| w.apply(n + 1 - l)));
                leq_unchecked(&shifted, &image)
            }
        })
    };

    let c3 = intervals(p).any(|(r, s)| {
        let hit = cols.iter().filter(|&&c| (r..=s).contains(&c)).count();
        let kept = (r..=s).filter(|&a| !(m + r..=m + s).contains(&w.apply(a))).count();
        hit > kept
    });

    let c4 = intervals(m).any(|(r, s)| {
        let hit = rows.iter().filter(|&&i| (r..=s).contains(&i)).count();
        // w⁻¹ w°^m [r,s]
        let removed: BTreeSet<usize> = (r..=s).map(|i| w_inv.apply(m + 1 - i)).collect();
        let kept = (r..=s).map(|i| n + 1 - i).filter(|x| !removed.contains(x)).count();
        hit > kept
    });

    FamilyMembership { c1, c2, c3, c4 }
}

fn intervals(top: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=top).flat_map(move |r| (r..=top).map(move |s| (r, s)))
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v
}

/// `M_q(w)`: every minor satisfying at least one membership condition.
pub fn minor_family(w: &Permutation, shape: GridShape) -> Result<MinorFamily> {
    ensure_restricted(w, shape)?;
    let w_inv = w.inverse();
    let members = enumerate_minors(shape)
        .into_iter()
        .filter(|ix| membership(w, &w_inv, ix, shape).any());
    MinorFamily::new(shape, members)
}
