//! Totally nonnegative matrices realizing a Cauchon diagram.
//!
//! Running the restoration algorithm on positive real weights for the white
//! boxes produces a totally nonnegative matrix whose vanishing minors are
//! those of the diagram's cell. Weights here are exact positive rationals.

use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rational_from_str, rational_to_string, sample_positive_rational, sign_of, FieldChoice, Sign};
use crate::grid::CauchonDiagram;
use crate::minors::{enumerate_minors, MinorFamily, MinorIndex};
use crate::oracle::{minor_value, run_restoration, vanishing_set, ParameterAssignment, DEFAULT_TRIALS};

/// Sign of one minor of a witness matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorSign {
    #[serde(flatten)]
    pub minor: MinorIndex,
    pub sign: Sign,
}

/// A restored matrix together with the sign of every minor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "WitnessJson", try_from = "WitnessJson")]
pub struct TnnWitness {
    pub diagram: CauchonDiagram,
    pub matrix: Vec<Vec<BigRational>>,
    pub minor_signs: Vec<MinorSign>,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    diagram: CauchonDiagram,
    matrix: Vec<Vec<String>>,
    minor_signs: Vec<MinorSign>,
}

impl From<TnnWitness> for WitnessJson {
    fn from(w: TnnWitness) -> Self {
        WitnessJson {
            diagram: w.diagram,
            matrix: w
                .matrix
                .iter()
                .map(|row| row.iter().map(rational_to_string).collect())
                .collect(),
            minor_signs: w.minor_signs,
        }
    }
}

impl TryFrom<WitnessJson> for TnnWitness {
    type Error = Error;

    fn try_from(j: WitnessJson) -> Result<Self> {
        let matrix = j
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| rational_from_str(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let shape = j.diagram.shape();
        if matrix.len() != shape.m() || matrix.iter().any(|r| r.len() != shape.p()) {
            return Err(Error::input("witness matrix does not match the diagram shape"));
        }
        Ok(TnnWitness {
            diagram: j.diagram,
            matrix,
            minor_signs: j.minor_signs,
        })
    }
}

impl TnnWitness {
    /// Minors that are exactly zero.
    pub fn zero_set(&self) -> MinorFamily {
        let zeros = self
            .minor_signs
            .iter()
            .filter(|s| s.sign == Sign::Zero)
            .map(|s| s.minor.clone());
        MinorFamily::new(self.diagram.shape(), zeros).expect("witness minors fit the grid")
    }
}

/// Restores `diagram` from positive `weights` on its white boxes (listed in
/// lexicographic order) and records the sign of every minor.
///
/// A negative minor means the realizer is broken and is reported as an
/// invariant violation.
pub fn realize_tnn(diagram: &CauchonDiagram, weights: &[BigRational]) -> Result<TnnWitness> {
    if let Some(k) = weights.iter().position(|w| !w.is_positive()) {
        return Err(Error::input(format!(
            "weight {} (index {k}) is not positive",
            rational_to_string(&weights[k])
        )));
    }
    let assign = ParameterAssignment::from_white(*diagram, weights.to_vec())?;
    let restored = run_restoration(diagram, &assign)?;
    let mut minor_signs = Vec::new();
    for ix in enumerate_minors(diagram.shape()) {
        let sign = sign_of(&minor_value(&restored, &ix)?);
        if sign == Sign::Negative {
            return Err(Error::InvariantViolation(format!(
                "minor {ix} is negative for diagram {diagram:?}"
            )));
        }
        minor_signs.push(MinorSign { minor: ix, sign });
    }
    Ok(TnnWitness {
        diagram: *diagram,
        matrix: restored.rows(),
        minor_signs,
    })
}

/// Random positive weights for every white box of `diagram`.
pub fn sample_weights<R: rand::Rng + ?Sized>(diagram: &CauchonDiagram, rng: &mut R) -> Vec<BigRational> {
    diagram.white_boxes().map(|_| sample_positive_rational(rng)).collect()
}

/// Witness for a diagram's cell, checked against independent samples and the
/// vanishing-set oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellWitness {
    pub witness: TnnWitness,
    pub zero_set: MinorFamily,
    pub samples: usize,
    pub seed: u64,
    /// Every sample had the same zero set, and it equals the oracle's
    /// vanishing set.
    pub consistent: bool,
}

/// Draws `samples` independent weight vectors and realizes each one.
pub fn cell_witness(diagram: &CauchonDiagram, samples: usize, seed: u64) -> Result<CellWitness> {
    if samples == 0 {
        return Err(Error::input("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = realize_tnn(diagram, &sample_weights(diagram, &mut rng))?;
    let zero_set = first.zero_set();
    let mut consistent = true;
    for _ in 1..samples {
        let w = realize_tnn(diagram, &sample_weights(diagram, &mut rng))?;
        consistent &= w.zero_set() == zero_set;
    }
    let oracle = vanishing_set(diagram, DEFAULT_TRIALS, FieldChoice::Prime, seed)?;
    consistent &= oracle.vanishing == zero_set;
    Ok(CellWitness {
        witness: first,
        zero_set,
        samples,
        seed,
        consistent,
    })
}
