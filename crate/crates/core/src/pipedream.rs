//! Pipe-dream bijection between Cauchon diagrams and the restricted set.
//!
//! Tiling: a white box holds two elbows (bottom edge to left edge, right edge
//! to top edge); a black box holds a crossing. Pipes enter on the south-east
//! boundary and leave on the north-west boundary:
//!
//! * inputs: bottom edge of column `α` is labelled `α` (`1..p`, left to right),
//!   right edge of row `i` is labelled `p + m + 1 - i` (`p+1..p+m`, bottom to top);
//! * outputs: left edge of row `i` is labelled `m + 1 - i` (`1..m`, bottom to
//!   top), top edge of column `α` is labelled `m + α`.
//!
//! `w(a)` is the output label reached by the pipe entering at input `a`. Under
//! this labelling the all-white diagram maps to the identity and the
//! all-black one to `[m+1, ..., m+p, 1, ..., m]`.

use crate::error::{Error, Result};
use crate::grid::{CauchonDiagram, GridPos, GridShape};
use crate::perm::{ensure_restricted, Permutation};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Heading {
    Up,
    Left,
}

/// Traces every pipe through the tiling of `diagram`.
pub fn diagram_to_permutation(diagram: &CauchonDiagram) -> Permutation {
    let shape = diagram.shape();
    let (m, p) = (shape.m(), shape.p());
    let mut images = vec![0; shape.n()];
    for col in 1..=p {
        images[col - 1] = trace(diagram, GridPos::new(m, col), Heading::Up);
    }
    for row in 1..=m {
        images[p + m - row] = trace(diagram, GridPos::new(row, p), Heading::Left);
    }
    Permutation::new(images).expect("pipe tracing always yields a bijection")
}

fn trace(diagram: &CauchonDiagram, start: GridPos, heading: Heading) -> usize {
    let m = diagram.shape().m();
    let (mut row, mut col, mut heading) = (start.row, start.col, heading);
    loop {
        if !diagram.is_black(GridPos::new(row, col)) {
            heading = match heading {
                Heading::Up => Heading::Left,
                Heading::Left => Heading::Up,
            };
        }
        match heading {
            Heading::Up if row == 1 => return m + col,
            Heading::Up => row -= 1,
            Heading::Left if col == 1 => return m + 1 - row,
            Heading::Left => col -= 1,
        }
    }
}

/// Inverse of [`diagram_to_permutation`].
///
/// Reading the boundary as a lattice path swept from south-east to
/// north-west, box `(i, α)` acts on path positions `α + m - i` and
/// `α + m - i + 1`, swapping the two pipes there exactly when it is black.
/// Undoing the sweep row by row from the top, a box is black iff the current
/// arrangement has a descent at its position.
pub fn permutation_to_diagram(w: &Permutation, shape: GridShape) -> Result<CauchonDiagram> {
    ensure_restricted(w, shape)?;
    let m = shape.m();
    // arrangement[pos - 1] = label of the pipe occupying output position pos
    let mut arrangement = w.inverse().images().to_vec();
    let mut black = Vec::new();
    for pos in shape.positions() {
        let k = pos.col + m - pos.row;
        if arrangement[k - 1] > arrangement[k] {
            arrangement.swap(k - 1, k);
            black.push(pos);
        }
    }
    if arrangement.iter().enumerate().any(|(i, &v)| v != i + 1) {
        return Err(Error::NotRestricted(w.images().to_vec()));
    }
    let diagram = CauchonDiagram::new(shape, black).map_err(|e| {
        Error::InvariantViolation(format!("inverse pipe-dream sweep produced an invalid diagram: {e}"))
    })?;
    Ok(diagram)
}
