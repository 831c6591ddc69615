//! Commutative restoration and deleting-derivations algorithms, and the
//! vanishing-set oracle built on them.
//!
//! Matrices are indexed by stages `r ∈ E`. A restoration step at
//! `r = (j, β) ∈ E°` turns the stage-`r` matrix into the stage-`r⁺` matrix:
//! when the pivot `x_{j,β}` is nonzero,
//!
//! ```text
//! x_{i,α} ← x_{i,α} + x_{i,β} · x_{j,β}⁻¹ · x_{j,α}     (i < j, α < β)
//! ```
//!
//! and every other entry is copied. The deleting-derivations step is the same
//! update with a minus sign, taking stage `r⁺` back to stage `r`. Neither
//! step touches row `j` or column `β`, so the pivot is the same on both sides
//! and the two steps are exact inverses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ExactField, FieldChoice, Fp};
use crate::grid::{in_interior_steps, in_steps, interior_steps, step_successor, terminal_step, CauchonDiagram, GridPos, GridShape};
use crate::minors::{enumerate_minors, MinorFamily, MinorIndex};
use num_rational::BigRational;

/// Largest `m * p` accepted by [`vanishing_set`].
pub const VANISHING_CELL_BOUND: usize = 36;

/// Default number of identity-testing trials.
pub const DEFAULT_TRIALS: usize = 5;

/// The smallest element of `E`: the stage holding the parameter matrix `(t_{i,α})`.
pub fn first_stage(shape: GridShape) -> GridPos {
    interior_steps(shape).next().unwrap_or_else(|| terminal_step(shape))
}

/// The largest element of `E°` smaller than `stage`, i.e. the `r` with `r⁺ = stage`.
fn predecessor(stage: GridPos, shape: GridShape) -> Option<GridPos> {
    interior_steps(shape).rev().find(|&r| r < stage)
}

/// An `m × p` matrix over an exact field, tagged with the stage it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleMatrix<F> {
    shape: GridShape,
    entries: Vec<F>,
    stage: GridPos,
}

impl<F: ExactField> OracleMatrix<F> {
    /// `entries` in row-major order.
    pub fn new(shape: GridShape, entries: Vec<F>, stage: GridPos) -> Result<Self> {
        if entries.len() != shape.cells() {
            return Err(Error::SizeMismatch {
                expected: shape.cells(),
                found: entries.len(),
            });
        }
        if !in_steps(stage, shape) {
            return Err(Error::input(format!("stage {stage} is not in the step set of the {shape} grid")));
        }
        Ok(OracleMatrix { shape, entries, stage })
    }

    pub fn from_rows(rows: Vec<Vec<F>>, stage: GridPos) -> Result<Self> {
        let m = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::input("ragged matrix rows"));
        }
        let shape = GridShape::new(m, p)?;
        Self::new(shape, rows.into_iter().flatten().collect(), stage)
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn stage(&self) -> GridPos {
        self.stage
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    /// Entry `x_{row,col}` (1-based).
    pub fn get(&self, row: usize, col: usize) -> &F {
        &self.entries[self.shape.index(GridPos::new(row, col))]
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.entries.chunks(self.shape.p()).map(<[F]>::to_vec).collect()
    }

    /// Applies the rank-one update against pivot `(j, β)` with the given sign.
    fn eliminate(&self, pivot: GridPos, restore: bool, stage: GridPos) -> OracleMatrix<F> {
        let mut next = self.clone();
        next.stage = stage;
        let u = self.get(pivot.row, pivot.col);
        if let Some(u_inv) = u.inv() {
            for i in 1..pivot.row {
                let factor = self.get(i, pivot.col).mul(&u_inv);
                for a in 1..pivot.col {
                    let delta = factor.mul(self.get(pivot.row, a));
                    let k = self.shape.index(GridPos::new(i, a));
                    next.entries[k] = if restore {
                        self.entries[k].add(&delta)
                    } else {
                        self.entries[k].sub(&delta)
                    };
                }
            }
        }
        next
    }
}

/// One deleting-derivations step: stage `r⁺` to stage `r`.
pub fn deleting_derivations_step<F: ExactField>(matrix: &OracleMatrix<F>) -> Result<OracleMatrix<F>> {
    let shape = matrix.shape;
    let r = predecessor(matrix.stage, shape).ok_or_else(|| {
        Error::input(format!(
            "stage {} is the first stage; no deleting-derivations step leads below it",
            matrix.stage
        ))
    })?;
    Ok(matrix.eliminate(r, false, r))
}

/// One restoration step: stage `r` to stage `r⁺`.
pub fn restoration_step<F: ExactField>(matrix: &OracleMatrix<F>) -> Result<OracleMatrix<F>> {
    let r = matrix.stage;
    let next = step_successor(r, matrix.shape)?;
    Ok(matrix.eliminate(r, true, next))
}

/// Values `t_{i,α}` for the restoration algorithm: zero on black boxes and
/// nonzero on white ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterAssignment<F> {
    diagram: CauchonDiagram,
    values: Vec<F>,
}

impl<F: ExactField> ParameterAssignment<F> {
    /// `values` covers the whole grid in row-major order.
    pub fn new(diagram: CauchonDiagram, values: Vec<F>) -> Result<Self> {
        let shape = diagram.shape();
        if values.len() != shape.cells() {
            return Err(Error::SizeMismatch {
                expected: shape.cells(),
                found: values.len(),
            });
        }
        for (pos, v) in shape.positions().zip(&values) {
            match (diagram.is_black(pos), v.is_zero()) {
                (true, false) => {
                    return Err(Error::input(format!("black box {pos} must carry the value 0")));
                }
                (false, true) => {
                    return Err(Error::ZeroPivot {
                        row: pos.row,
                        col: pos.col,
                    });
                }
                _ => {}
            }
        }
        Ok(ParameterAssignment { diagram, values })
    }

    /// `white` lists the white-box values in lexicographic order.
    pub fn from_white(diagram: CauchonDiagram, white: Vec<F>) -> Result<Self> {
        let shape = diagram.shape();
        let expected = shape.cells() - diagram.black_count();
        if white.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                found: white.len(),
            });
        }
        let mut white = white.into_iter();
        let values = shape
            .positions()
            .map(|pos| {
                if diagram.is_black(pos) {
                    F::zero()
                } else {
                    white.next().expect("length checked above")
                }
            })
            .collect();
        Self::new(diagram, values)
    }

    /// Independent random nonzero values on the white boxes.
    pub fn sample<R: rand::Rng + ?Sized>(diagram: CauchonDiagram, rng: &mut R) -> Self {
        let values = diagram
            .shape()
            .positions()
            .map(|pos| {
                if diagram.is_black(pos) {
                    F::zero()
                } else {
                    F::sample_nonzero(rng)
                }
            })
            .collect();
        ParameterAssignment { diagram, values }
    }

    pub fn diagram(&self) -> &CauchonDiagram {
        &self.diagram
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// The parameter matrix `(t_{i,α})` at the first stage.
    pub fn matrix(&self) -> OracleMatrix<F> {
        let shape = self.diagram.shape();
        OracleMatrix {
            shape,
            entries: self.values.clone(),
            stage: first_stage(shape),
        }
    }
}

/// Every stage matrix `M^{(r)}`, `r ∈ E`, produced by one restoration run.
#[derive(Clone, Debug)]
pub struct RestorationTrace<F> {
    stages: Vec<OracleMatrix<F>>,
}

impl<F: ExactField> RestorationTrace<F> {
    pub fn run(assign: &ParameterAssignment<F>) -> Self {
        let mut current = assign.matrix();
        let mut stages = vec![current.clone()];
        while in_interior_steps(current.stage, current.shape) {
            current = restoration_step(&current).expect("interior stage has a successor");
            stages.push(current.clone());
        }
        RestorationTrace { stages }
    }

    /// `M^{(r)}` for `r ∈ E`.
    pub fn at(&self, r: GridPos) -> Option<&OracleMatrix<F>> {
        self.stages
            .binary_search_by(|m| m.stage.cmp(&r))
            .ok()
            .map(|k| &self.stages[k])
    }

    pub fn final_matrix(&self) -> &OracleMatrix<F> {
        self.stages.last().expect("a trace holds at least one stage")
    }

    pub fn stages(&self) -> &[OracleMatrix<F>] {
        &self.stages
    }
}

/// Runs the restoration algorithm over `E°` in ascending order, starting from
/// the parameter matrix. Returns the matrix at stage `(m, p+1)`.
pub fn run_restoration<F: ExactField>(diagram: &CauchonDiagram, assign: &ParameterAssignment<F>) -> Result<OracleMatrix<F>> {
    if assign.diagram() != diagram {
        return Err(Error::input("parameter assignment was built for a different diagram"));
    }
    let mut current = assign.matrix();
    while in_interior_steps(current.stage, current.shape) {
        current = restoration_step(&current)?;
    }
    Ok(current)
}

/// Runs the deleting-derivations algorithm down to the first stage.
pub fn run_deleting_derivations<F: ExactField>(matrix: &OracleMatrix<F>) -> Result<OracleMatrix<F>> {
    let first = first_stage(matrix.shape);
    let mut current = matrix.clone();
    while current.stage != first {
        current = deleting_derivations_step(&current)?;
    }
    Ok(current)
}

/// Determinant by Gaussian elimination with row swaps.
pub fn determinant<F: ExactField>(mut rows: Vec<Vec<F>>) -> F {
    let n = rows.len();
    let mut det = F::one();
    for c in 0..n {
        let Some(pivot_row) = (c..n).find(|&r| !rows[r][c].is_zero()) else {
            return F::zero();
        };
        if pivot_row != c {
            rows.swap(pivot_row, c);
            det = det.neg();
        }
        let pivot = rows[c][c].clone();
        det = det.mul(&pivot);
        let inv = pivot.inv().expect("pivot is nonzero");
        let (upper, lower) = rows.split_at_mut(c + 1);
        let pivot_row = &upper[c];
        for row in lower.iter_mut().filter(|row| !row[c].is_zero()) {
            let factor = row[c].mul(&inv);
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = x.sub(&factor.mul(y));
            }
        }
    }
    det
}

fn submatrix_det<F: ExactField>(matrix: &OracleMatrix<F>, rows: &[usize], cols: &[usize]) -> F {
    let sub = rows
        .iter()
        .map(|&i| cols.iter().map(|&a| matrix.get(i, a).clone()).collect())
        .collect();
    determinant(sub)
}

/// The minor `[I | Λ]` of `matrix`: the ordinary determinant of the submatrix.
pub fn minor_value<F: ExactField>(matrix: &OracleMatrix<F>, ix: &MinorIndex) -> Result<F> {
    ix.ensure_fits(matrix.shape)?;
    Ok(submatrix_det(matrix, ix.rows(), ix.cols()))
}

/// Outcome of a vanishing-set computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub diagram: CauchonDiagram,
    pub vanishing: MinorFamily,
    pub trials: usize,
    pub field: FieldChoice,
    pub seed: u64,
}

/// Minors of the restored matrix that vanish identically in the white-box
/// parameters, decided by evaluation at `trials` independent random points.
pub fn vanishing_set(diagram: &CauchonDiagram, trials: usize, field: FieldChoice, seed: u64) -> Result<VanishingReport> {
    let shape = diagram.shape();
    if trials == 0 {
        return Err(Error::input("at least one trial is required"));
    }
    if shape.cells() > VANISHING_CELL_BOUND {
        return Err(Error::BoundExceeded {
            what: "vanishing-set oracle",
            size: shape.cells(),
            bound: VANISHING_CELL_BOUND,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vanishing = match field {
        FieldChoice::Prime => vanishing_over::<Fp, _>(diagram, trials, &mut rng),
        FieldChoice::Rational => vanishing_over::<BigRational, _>(diagram, trials, &mut rng),
    }?;
    Ok(VanishingReport {
        diagram: *diagram,
        vanishing,
        trials,
        field,
        seed,
    })
}

fn vanishing_over<F: ExactField, R: rand::Rng>(diagram: &CauchonDiagram, trials: usize, rng: &mut R) -> Result<MinorFamily> {
    let mut candidates = enumerate_minors(diagram.shape());
    for _ in 0..trials {
        let assign = ParameterAssignment::<F>::sample(*diagram, rng);
        let restored = run_restoration(diagram, &assign)?;
        candidates.retain(|ix| submatrix_det(&restored, ix.rows(), ix.cols()).is_zero());
    }
    MinorFamily::new(diagram.shape(), candidates)
}

/// Which relation between `δ^{(j,β)⁺}` and `δ^{(j,β)}` applies to a minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityCase {
    /// Pivot `u = 0`: the two stages agree, so `δ^{(j,β)⁺} = δ^{(j,β)}`.
    ZeroPivot,
    /// `u ≠ 0` and the step leaves the minor alone (`i_l = j`, `β ∈ Λ` or
    /// `β < α_1`): `δ^{(j,β)⁺} = δ^{(j,β)}`.
    Unchanged,
    /// `u ≠ 0`, `i_l < j`, `α_h < β < α_{h+1}`:
    /// `δ^{(j,β)⁺} u = δ^{(j,β)} u + δ_{α_h→β}^{(j,α_h)} x_{j,α_h}^{(j,α_h)}`.
    Correction { h: usize },
    /// `u ≠ 0` and `(i_l, α_l) = (j, β)`:
    /// `δ^{(j,β)⁺} = δ_{ĵ,β̂}^{(j,β)} x_{j,β}^{(j,β)}`.
    PivotFactorization,
}

/// Result of [`check_local_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIdentity {
    pub case: IdentityCase,
    pub holds: bool,
}

/// Checks the stage relations of one restoration run against every
/// admissible `(r, minor)` pair.
pub struct LocalIdentityChecker<F> {
    trace: RestorationTrace<F>,
}

impl<F: ExactField> LocalIdentityChecker<F> {
    pub fn new(assign: &ParameterAssignment<F>) -> Self {
        LocalIdentityChecker {
            trace: RestorationTrace::run(assign),
        }
    }

    pub fn shape(&self) -> GridShape {
        self.trace.final_matrix().shape
    }

    /// Whether `(r, ix)` is admissible: `r ∈ E°` and `(i_l, α_l) <= r`.
    pub fn admissible(&self, r: GridPos, ix: &MinorIndex) -> bool {
        let shape = self.shape();
        in_interior_steps(r, shape) && ix.fits(shape) && corner(ix) <= r
    }

    pub fn check(&self, r: GridPos, ix: &MinorIndex) -> Result<LocalIdentity> {
        let shape = self.shape();
        if !in_interior_steps(r, shape) {
            return Err(Error::input(format!("{r} is not in the interior step set of the {shape} grid")));
        }
        ix.ensure_fits(shape)?;
        if corner(ix) > r {
            return Err(Error::input(format!(
                "minor {ix} has corner {} beyond step {r}",
                corner(ix)
            )));
        }
        let (j, beta) = (r.row, r.col);
        let at = |s: GridPos| self.trace.at(s).expect("every step-set stage is recorded");
        let before = at(step_successor(r, shape)?);
        let after = at(r);
        let u = before.get(j, beta).clone();
        let delta_plus = submatrix_det(before, ix.rows(), ix.cols());
        let delta = submatrix_det(after, ix.rows(), ix.cols());

        if u.is_zero() {
            return Ok(LocalIdentity {
                case: IdentityCase::ZeroPivot,
                holds: delta_plus == delta,
            });
        }

        let rows = ix.rows();
        let cols = ix.cols();
        let last_row = *rows.last().expect("minors are nonempty");

        if corner(ix) == r {
            let minor_rows = &rows[..rows.len() - 1];
            let minor_cols = &cols[..cols.len() - 1];
            let reduced = submatrix_det(after, minor_rows, minor_cols);
            return Ok(LocalIdentity {
                case: IdentityCase::PivotFactorization,
                holds: delta_plus == reduced.mul(after.get(j, beta)),
            });
        }

        if last_row == j || cols.contains(&beta) || beta < cols[0] {
            return Ok(LocalIdentity {
                case: IdentityCase::Unchanged,
                holds: delta_plus == delta,
            });
        }

        // i_l < j and α_h < β < α_{h+1} with α_{l+1} = p + 1
        let h = cols.iter().rposition(|&a| a < beta).expect("beta > alpha_1 here") + 1;
        let alpha_h = cols[h - 1];
        let swapped: Vec<usize> = cols.iter().map(|&a| if a == alpha_h { beta } else { a }).collect();
        let mid = at(GridPos::new(j, alpha_h));
        let correction = submatrix_det(mid, rows, &swapped).mul(mid.get(j, alpha_h));
        Ok(LocalIdentity {
            case: IdentityCase::Correction { h },
            holds: delta_plus.mul(&u) == delta.mul(&u).add(&correction),
        })
    }
}

/// `(i_l, α_l)`: the largest row and column of a minor.
fn corner(ix: &MinorIndex) -> GridPos {
    GridPos::new(*ix.rows().last().expect("nonempty"), *ix.cols().last().expect("nonempty"))
}

/// Checks the stage relation for one `(r, minor)` pair under `assign`.
pub fn check_local_identity<F: ExactField>(
    diagram: &CauchonDiagram,
    r: GridPos,
    ix: &MinorIndex,
    assign: &ParameterAssignment<F>,
) -> Result<LocalIdentity> {
    if assign.diagram() != diagram {
        return Err(Error::input("parameter assignment was built for a different diagram"));
    }
    LocalIdentityChecker::new(assign).check(r, ix)
}
