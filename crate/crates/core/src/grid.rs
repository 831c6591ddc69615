//! Grid shapes, Cauchon diagrams and the lexicographic step set used by the
//! deleting-derivations and restoration algorithms.
//!
//! A diagram is stored as a bitmask over row-major cell indices: cell `(i, α)`
//! (1-based) occupies bit `(i - 1) * p + (α - 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of cells a diagram bitmask can hold.
pub const MAX_CELLS: usize = 64;

/// Default bound on `m * p` for exhaustive diagram enumeration.
pub const DEFAULT_DIAGRAM_BOUND: usize = 20;

/// An `m × p` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ShapeJson", into = "ShapeJson")]
pub struct GridShape {
    m: usize,
    p: usize,
}

#[derive(Serialize, Deserialize)]
struct ShapeJson {
    m: usize,
    p: usize,
}

impl TryFrom<ShapeJson> for GridShape {
    type Error = Error;
    fn try_from(raw: ShapeJson) -> Result<Self> {
        GridShape::new(raw.m, raw.p)
    }
}

impl From<GridShape> for ShapeJson {
    fn from(s: GridShape) -> Self {
        ShapeJson { m: s.m, p: s.p }
    }
}

impl GridShape {
    pub fn new(m: usize, p: usize) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::input(format!("grid shape {m}x{p} must have m, p >= 1")));
        }
        if m * p > MAX_CELLS {
            return Err(Error::BoundExceeded {
                what: "grid",
                size: m * p,
                bound: MAX_CELLS,
            });
        }
        Ok(GridShape { m, p })
    }

    /// Row count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Column count.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn cells(&self) -> usize {
        self.m * self.p
    }

    /// Size `N = m + p` of the associated symmetric group.
    pub fn n(&self) -> usize {
        self.m + self.p
    }

    pub fn contains(&self, pos: GridPos) -> bool {
        (1..=self.m).contains(&pos.row) && (1..=self.p).contains(&pos.col)
    }

    pub(crate) fn index(&self, pos: GridPos) -> usize {
        (pos.row - 1) * self.p + (pos.col - 1)
    }

    pub(crate) fn pos(&self, index: usize) -> GridPos {
        GridPos::new(index / self.p + 1, index % self.p + 1)
    }

    /// All cells in lexicographic (row-major) order.
    pub fn positions(&self) -> impl Iterator<Item = GridPos> + '_ {
        (0..self.cells()).map(move |k| self.pos(k))
    }

    fn full_mask(&self) -> u64 {
        if self.cells() == 64 {
            u64::MAX
        } else {
            (1u64 << self.cells()) - 1
        }
    }

    fn check(&self, pos: GridPos) -> Result<()> {
        if self.contains(pos) {
            Ok(())
        } else {
            Err(Error::input(format!(
                "position ({},{}) lies outside the {}x{} grid",
                pos.row, pos.col, self.m, self.p
            )))
        }
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.p)
    }
}

/// A 1-based grid position. The derived ordering is the lexicographic order
/// on pairs: rows first, then columns.
/// Serialized as `[row, col]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

impl From<(usize, usize)> for GridPos {
    fn from((row, col): (usize, usize)) -> Self {
        GridPos { row, col }
    }
}

impl From<GridPos> for (usize, usize) {
    fn from(pos: GridPos) -> Self {
        (pos.row, pos.col)
    }
}

impl GridPos {
    pub const fn new(row: usize, col: usize) -> Self {
        GridPos { row, col }
    }
}

impl fmt::Display for GridPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Per-cell masks of the boxes strictly to the left and strictly above.
struct CauchonMasks {
    left: Vec<u64>,
    above: Vec<u64>,
}

impl CauchonMasks {
    fn new(shape: GridShape) -> Self {
        let mut left = Vec::with_capacity(shape.cells());
        let mut above = Vec::with_capacity(shape.cells());
        for pos in shape.positions() {
            let l = (1..pos.col).fold(0u64, |acc, c| acc | 1 << shape.index(GridPos::new(pos.row, c)));
            let a = (1..pos.row).fold(0u64, |acc, r| acc | 1 << shape.index(GridPos::new(r, pos.col)));
            left.push(l);
            above.push(a);
        }
        CauchonMasks { left, above }
    }

    /// First black box violating the condition, if any.
    fn violation(&self, mask: u64) -> Option<usize> {
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & self.left[k] != self.left[k] && mask & self.above[k] != self.above[k] {
                return Some(k);
            }
        }
        None
    }
}

/// Checks the Cauchon condition for an arbitrary set of black boxes.
///
/// Every black box must have either all boxes strictly to its left black or
/// all boxes strictly above it black.
pub fn is_valid_diagram(shape: GridShape, black: &[GridPos]) -> Result<bool> {
    let mut mask = 0u64;
    for &pos in black {
        shape.check(pos)?;
        mask |= 1 << shape.index(pos);
    }
    Ok(CauchonMasks::new(shape).violation(mask).is_none())
}

/// An `m × p` Cauchon diagram.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct CauchonDiagram {
    shape: GridShape,
    black: u64,
}

/// Wire form: `{"m": int, "p": int, "black": [[i, a], ...]}` with the black
/// list sorted lexicographically.
#[derive(Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    p: usize,
    black: Vec<[usize; 2]>,
}

impl TryFrom<DiagramJson> for CauchonDiagram {
    type Error = Error;
    fn try_from(raw: DiagramJson) -> Result<Self> {
        let shape = GridShape::new(raw.m, raw.p)?;
        CauchonDiagram::new(shape, raw.black.iter().map(|&[r, c]| GridPos::new(r, c)))
    }
}

impl From<CauchonDiagram> for DiagramJson {
    fn from(d: CauchonDiagram) -> Self {
        DiagramJson {
            m: d.shape.m,
            p: d.shape.p,
            black: d.black_boxes().map(|pos| [pos.row, pos.col]).collect(),
        }
    }
}

impl CauchonDiagram {
    /// Builds a diagram from its black boxes, rejecting positions outside the
    /// grid and sets that break the Cauchon condition.
    pub fn new(shape: GridShape, black: impl IntoIterator<Item = GridPos>) -> Result<Self> {
        let mut mask = 0u64;
        for pos in black {
            shape.check(pos)?;
            mask |= 1 << shape.index(pos);
        }
        Self::from_mask(shape, mask)
    }

    pub fn from_mask(shape: GridShape, mask: u64) -> Result<Self> {
        if mask & !shape.full_mask() != 0 {
            return Err(Error::input(format!("bitmask {mask:#x} has bits outside the {shape} grid")));
        }
        if let Some(k) = CauchonMasks::new(shape).violation(mask) {
            let pos = shape.pos(k);
            return Err(Error::InvalidDiagram {
                row: pos.row,
                col: pos.col,
            });
        }
        Ok(CauchonDiagram { shape, black: mask })
    }

    /// The all-white diagram.
    pub fn empty(shape: GridShape) -> Self {
        CauchonDiagram { shape, black: 0 }
    }

    /// The all-black diagram.
    pub fn full(shape: GridShape) -> Self {
        CauchonDiagram {
            shape,
            black: shape.full_mask(),
        }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn mask(&self) -> u64 {
        self.black
    }

    pub fn is_black(&self, pos: GridPos) -> bool {
        self.shape.contains(pos) && self.black >> self.shape.index(pos) & 1 == 1
    }

    pub fn black_count(&self) -> usize {
        self.black.count_ones() as usize
    }

    /// Black boxes in lexicographic order.
    pub fn black_boxes(&self) -> impl Iterator<Item = GridPos> + '_ {
        self.shape.positions().filter(|&pos| self.is_black(pos))
    }

    /// White boxes in lexicographic order.
    pub fn white_boxes(&self) -> impl Iterator<Item = GridPos> + '_ {
        self.shape.positions().filter(|&pos| !self.is_black(pos))
    }
}

impl fmt::Debug for CauchonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CauchonDiagram({}, black=[", self.shape)?;
        for (k, pos) in self.black_boxes().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{pos}")?;
        }
        write!(f, "])")
    }
}

/// Renders the grid with `#` for black boxes and `.` for white ones.
impl fmt::Display for CauchonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 1..=self.shape.m {
            let line: String = (1..=self.shape.p)
                .map(|col| if self.is_black(GridPos::new(row, col)) { '#' } else { '.' })
                .collect();
            if row < self.shape.m {
                writeln!(f, "{line}")?;
            } else {
                write!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Enumerates every Cauchon diagram of `shape` in ascending bitmask order,
/// using [`DEFAULT_DIAGRAM_BOUND`].
pub fn enumerate_diagrams(shape: GridShape) -> Result<Diagrams> {
    enumerate_diagrams_with_bound(shape, DEFAULT_DIAGRAM_BOUND)
}

pub fn enumerate_diagrams_with_bound(shape: GridShape, bound: usize) -> Result<Diagrams> {
    if shape.cells() > bound || shape.cells() >= 64 {
        return Err(Error::BoundExceeded {
            what: "diagram enumeration",
            size: shape.cells(),
            bound: bound.min(63),
        });
    }
    Ok(Diagrams {
        shape,
        masks: CauchonMasks::new(shape),
        next: 0,
        end: 1u64 << shape.cells(),
    })
}

/// Iterator returned by [`enumerate_diagrams`].
pub struct Diagrams {
    shape: GridShape,
    masks: CauchonMasks,
    next: u64,
    end: u64,
}

impl Iterator for Diagrams {
    type Item = CauchonDiagram;

    fn next(&mut self) -> Option<CauchonDiagram> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if self.masks.violation(mask).is_none() {
                return Some(CauchonDiagram {
                    shape: self.shape,
                    black: mask,
                });
            }
        }
        None
    }
}

/// Terminal element `(m, p+1)` of the step set `E`.
pub fn terminal_step(shape: GridShape) -> GridPos {
    GridPos::new(shape.m, shape.p + 1)
}

/// Whether `r` lies in `E° = [1,m]×[1,p] \ {(1,1)}`.
pub fn in_interior_steps(r: GridPos, shape: GridShape) -> bool {
    shape.contains(r) && r != GridPos::new(1, 1)
}

/// Whether `r` lies in `E = E° ∪ {(m, p+1)}`.
pub fn in_steps(r: GridPos, shape: GridShape) -> bool {
    in_interior_steps(r, shape) || r == terminal_step(shape)
}

/// `E°` in ascending lexicographic order.
pub fn interior_steps(shape: GridShape) -> impl DoubleEndedIterator<Item = GridPos> {
    let p = shape.p;
    (1..shape.cells()).map(move |k| GridPos::new(k / p + 1, k % p + 1))
}

/// The successor `r⁺`: the smallest element of `E` strictly greater than `r`.
pub fn step_successor(r: GridPos, shape: GridShape) -> Result<GridPos> {
    if !in_interior_steps(r, shape) {
        return Err(Error::input(format!("{r} is not in the interior step set of the {shape} grid")));
    }
    Ok(if r.col < shape.p {
        GridPos::new(r.row, r.col + 1)
    } else if r.row < shape.m {
        GridPos::new(r.row + 1, 1)
    } else {
        terminal_step(shape)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: usize, p: usize) -> GridShape {
        GridShape::new(m, p).unwrap()
    }

    fn cells(list: &[(usize, usize)]) -> Vec<GridPos> {
        list.iter().map(|&(r, c)| GridPos::new(r, c)).collect()
    }

    #[test]
    fn four_by_five_example_is_valid() {
        let black = cells(&[
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
        ]);
        assert!(is_valid_diagram(shape(4, 5), &black).unwrap());
    }

    #[test]
    fn lone_bottom_right_box_is_invalid() {
        assert!(!is_valid_diagram(shape(2, 2), &cells(&[(2, 2)])).unwrap());
        assert_eq!(
            CauchonDiagram::new(shape(2, 2), cells(&[(2, 2)])),
            Err(Error::InvalidDiagram { row: 2, col: 2 })
        );
    }

    #[test]
    fn empty_set_is_valid_everywhere() {
        for m in 1..5 {
            for p in 1..5 {
                assert!(is_valid_diagram(shape(m, p), &[]).unwrap());
            }
        }
    }

    #[test]
    fn out_of_grid_is_an_input_error() {
        assert!(matches!(
            is_valid_diagram(shape(2, 2), &cells(&[(3, 1)])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            is_valid_diagram(shape(2, 2), &cells(&[(1, 0)])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn zero_dimension_shape_rejected() {
        assert!(GridShape::new(0, 3).is_err());
        assert!(GridShape::new(3, 0).is_err());
        assert!(GridShape::new(9, 8).is_err());
    }

    #[test]
    fn diagram_counts() {
        assert_eq!(enumerate_diagrams(shape(1, 1)).unwrap().count(), 2);
        assert_eq!(enumerate_diagrams(shape(2, 2)).unwrap().count(), 14);
        assert_eq!(enumerate_diagrams(shape(3, 3)).unwrap().count(), 230);
    }

    #[test]
    fn enumeration_is_ascending_by_mask() {
        let masks: Vec<u64> = enumerate_diagrams(shape(3, 2)).unwrap().map(|d| d.mask()).collect();
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_bound() {
        assert!(matches!(
            enumerate_diagrams(shape(4, 6)),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(enumerate_diagrams_with_bound(shape(4, 6), 24).is_ok());
    }

    #[test]
    fn successor_examples() {
        let s = shape(2, 2);
        assert_eq!(step_successor(GridPos::new(1, 2), s).unwrap(), GridPos::new(2, 1));
        assert_eq!(step_successor(GridPos::new(2, 2), s).unwrap(), GridPos::new(2, 3));
        let s = shape(3, 4);
        assert_eq!(step_successor(GridPos::new(1, 4), s).unwrap(), GridPos::new(2, 1));
        assert_eq!(step_successor(GridPos::new(3, 4), s).unwrap(), GridPos::new(3, 5));
        assert!(step_successor(GridPos::new(1, 1), s).is_err());
        assert!(step_successor(GridPos::new(3, 5), s).is_err());
    }

    #[test]
    fn successor_chain_visits_interior_once() {
        for (m, p) in [(1, 1), (1, 4), (3, 1), (3, 4), (4, 4)] {
            let s = shape(m, p);
            let mut visited = Vec::new();
            let mut r = GridPos::new(1, 2);
            if !in_interior_steps(r, s) {
                // 1×1 and m×1 shapes start at (2,1)
                r = GridPos::new(2, 1);
            }
            while in_interior_steps(r, s) {
                visited.push(r);
                r = step_successor(r, s).unwrap();
            }
            if m * p > 1 {
                assert_eq!(r, terminal_step(s));
            }
            let expected: Vec<GridPos> = interior_steps(s).collect();
            assert_eq!(visited, expected);
            assert_eq!(visited.len(), m * p - 1);
        }
    }

    #[test]
    fn json_shape() {
        let d = CauchonDiagram::new(shape(2, 3), cells(&[(1, 2), (1, 1)])).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"m":2,"p":3,"black":[[1,1],[1,2]]}"#);
        let back: CauchonDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<CauchonDiagram>(r#"{"m":2,"p":2,"black":[[2,2]]}"#).is_err());
    }

    #[test]
    fn display_grid() {
        let d = CauchonDiagram::new(shape(2, 2), cells(&[(1, 1)])).unwrap();
        assert_eq!(d.to_string(), "#.\n..");
    }
}
