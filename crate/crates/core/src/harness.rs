//! End-to-end checks across the combinatorial and algebraic sides: counts,
//! the Bruhat interval, the pipe-dream bijection, and the agreement of the
//! three minor families attached to each diagram.

use std::collections::{BTreeSet, HashSet};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ExactField, FieldChoice, Fp};
use crate::grid::{enumerate_diagrams, interior_steps, CauchonDiagram, GridPos, GridShape};
use crate::minors::{enumerate_minors, minor_family, MinorFamily, MinorIndex};
use crate::oracle::{
    run_deleting_derivations, run_restoration, vanishing_set, IdentityCase, LocalIdentityChecker, ParameterAssignment,
    DEFAULT_TRIALS,
};
use crate::perm::{all_permutations, block_longest, bruhat_leq, enumerate_restricted, in_restricted_set, longest_element, Permutation};
use crate::pipedream::{diagram_to_permutation, permutation_to_diagram};
use crate::tnn::{cell_witness, realize_tnn, sample_weights};

/// Shapes with at most this many cells are checked over every diagram.
pub const EXHAUSTIVE_CELL_BOUND: usize = 9;

/// Diagrams drawn per shape in sampled mode.
pub const DEFAULT_SAMPLE_SIZE: usize = 200;

/// Positive rational samples per diagram for the witness zero set.
pub const DEFAULT_WITNESS_SAMPLES: usize = 10;

/// Largest `m + p` for the Bruhat interval check.
pub const BRUHAT_BOUND: usize = 8;

/// Mixes a run seed with a per-item tag (splitmix64 finalizer), so each
/// diagram gets its own stream regardless of processing order.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// Draws `count` diagrams uniformly (with replacement) by rejection sampling
/// on bitmasks.
pub fn sample_diagrams(shape: GridShape, count: usize, seed: u64) -> Vec<CauchonDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = shape.cells();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mask = if cells == 64 {
            rng.gen::<u64>()
        } else {
            rng.gen_range(0..1u64 << cells)
        };
        if let Ok(d) = CauchonDiagram::from_mask(shape, mask) {
            out.push(d);
        }
    }
    out
}

/// Every diagram when the shape is small enough (or `sample` is `None` and
/// the shape is within the exhaustive bound), otherwise a uniform sample.
fn select_diagrams(shape: GridShape, sample: Option<usize>, seed: u64) -> Result<(Mode, Vec<CauchonDiagram>)> {
    match sample {
        None if shape.cells() <= EXHAUSTIVE_CELL_BOUND => Ok((Mode::Exhaustive, enumerate_diagrams(shape)?.collect())),
        None => Ok((Mode::Sampled, sample_diagrams(shape, DEFAULT_SAMPLE_SIZE, seed))),
        Some(0) => Err(Error::input("sample size must be positive")),
        Some(n) => Ok((Mode::Sampled, sample_diagrams(shape, n, seed))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub shape: GridShape,
    pub diagrams: usize,
    pub restricted: usize,
    pub equal: bool,
}

/// Counts diagrams and restricted permutations with independent enumerators.
pub fn verify_counts(shape: GridShape) -> Result<CountReport> {
    let diagrams = enumerate_diagrams(shape)?.count();
    let restricted = enumerate_restricted(shape)?.len();
    Ok(CountReport {
        shape,
        diagrams,
        restricted,
        equal: diagrams == restricted,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruhatReport {
    pub shape: GridShape,
    /// `|{w_0 w : w ∈ S}|`
    pub translated: usize,
    /// `|{y : y ≥ block longest element}|`
    pub interval: usize,
    pub equal: bool,
}

/// Compares the left translate of the restricted set by the longest element
/// with the Bruhat upper interval above the block longest element.
pub fn verify_bruhat_interval(shape: GridShape) -> Result<BruhatReport> {
    let n = shape.n();
    if n > BRUHAT_BOUND {
        return Err(Error::BoundExceeded {
            what: "Bruhat interval check (m + p)",
            size: n,
            bound: BRUHAT_BOUND,
        });
    }
    let top = longest_element(n)?;
    let translated = enumerate_restricted(shape)?
        .iter()
        .map(|w| top.compose(w))
        .collect::<Result<BTreeSet<Permutation>>>()?;
    let base = block_longest(shape.m(), shape.p())?;
    let mut interval = BTreeSet::new();
    for y in all_permutations(n) {
        if bruhat_leq(&base, &y)? {
            interval.insert(y);
        }
    }
    Ok(BruhatReport {
        shape,
        translated: translated.len(),
        interval: interval.len(),
        equal: translated == interval,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub shape: GridShape,
    pub diagrams: usize,
    pub distinct_images: usize,
    pub restricted: usize,
    /// Every image lies in the restricted set and the images cover it.
    pub onto: bool,
    /// `permutation_to_diagram` undoes `diagram_to_permutation` everywhere.
    pub inverse: bool,
    /// All-white maps to the identity and all-black to the maximal element.
    pub extremes: bool,
}

impl BijectionReport {
    pub fn ok(&self) -> bool {
        self.distinct_images == self.diagrams && self.onto && self.inverse && self.extremes
    }
}

pub fn verify_bijection(shape: GridShape) -> Result<BijectionReport> {
    let diagrams: Vec<CauchonDiagram> = enumerate_diagrams(shape)?.collect();
    let restricted: BTreeSet<Permutation> = enumerate_restricted(shape)?.into_iter().collect();
    let mut images = BTreeSet::new();
    let mut inverse = true;
    let mut inside = true;
    for d in &diagrams {
        let w = diagram_to_permutation(d);
        inside &= in_restricted_set(&w, shape)?;
        inverse &= permutation_to_diagram(&w, shape).ok() == Some(*d);
        images.insert(w);
    }
    let extremes = diagram_to_permutation(&CauchonDiagram::empty(shape)).is_identity()
        && diagram_to_permutation(&CauchonDiagram::full(shape)) == crate::perm::restricted_max(shape);
    Ok(BijectionReport {
        shape,
        diagrams: diagrams.len(),
        distinct_images: images.len(),
        restricted: restricted.len(),
        onto: inside && images == restricted,
        inverse,
        extremes,
    })
}

/// Differences between the three families, each as a symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDiff {
    pub family_vs_vanishing: Vec<MinorIndex>,
    pub family_vs_zero_set: Vec<MinorIndex>,
    pub vanishing_vs_zero_set: Vec<MinorIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    AllEqual,
    Mismatch { diff: FamilyDiff },
}

/// The three minor families attached to one diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceRecord {
    pub diagram: CauchonDiagram,
    pub permutation: Permutation,
    pub family: MinorFamily,
    pub vanishing: MinorFamily,
    pub zero_set: MinorFamily,
    pub verdict: Verdict,
}

impl EquivalenceRecord {
    pub fn new(
        diagram: CauchonDiagram,
        permutation: Permutation,
        family: MinorFamily,
        vanishing: MinorFamily,
        zero_set: MinorFamily,
    ) -> Self {
        let verdict = if family == vanishing && vanishing == zero_set {
            Verdict::AllEqual
        } else {
            Verdict::Mismatch {
                diff: FamilyDiff {
                    family_vs_vanishing: family.symmetric_difference(&vanishing),
                    family_vs_zero_set: family.symmetric_difference(&zero_set),
                    vanishing_vs_zero_set: vanishing.symmetric_difference(&zero_set),
                },
            }
        };
        EquivalenceRecord {
            diagram,
            permutation,
            family,
            vanishing,
            zero_set,
            verdict,
        }
    }

    pub fn all_equal(&self) -> bool {
        self.verdict == Verdict::AllEqual
    }
}

/// Knobs for [`verify_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceConfig {
    /// Identity-testing trials for the vanishing set.
    pub trials: usize,
    pub field: FieldChoice,
    /// Positive rational samples for the witness zero set.
    pub witness_samples: usize,
    pub seed: u64,
    /// Force sampled mode with this many diagrams.
    pub sample: Option<usize>,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            trials: DEFAULT_TRIALS,
            field: FieldChoice::Prime,
            witness_samples: DEFAULT_WITNESS_SAMPLES,
            seed: 0,
            sample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub shape: GridShape,
    pub mode: Mode,
    pub diagrams: usize,
    pub all_equal: usize,
    pub mismatches: usize,
    /// Distinct diagrams have distinct vanishing sets.
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub records: Vec<EquivalenceRecord>,
    pub summary: EquivalenceSummary,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.summary.mismatches == 0 && self.summary.injective
    }

    /// One record per line followed by a `{"summary": ...}` footer.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let footer = serde_json::json!({ "summary": self.summary });
        out.push_str(&footer.to_string());
        out.push('\n');
        out
    }
}

fn equivalence_record(d: &CauchonDiagram, config: &EquivalenceConfig) -> Result<EquivalenceRecord> {
    let shape = d.shape();
    let seed = derive_seed(config.seed, d.mask());
    let w = diagram_to_permutation(d);
    let family = minor_family(&w, shape)?;
    let vanishing = vanishing_set(d, config.trials, config.field, seed)?.vanishing;
    let zero_set = cell_witness(d, config.witness_samples, seed)?.zero_set;
    Ok(EquivalenceRecord::new(*d, w, family, vanishing, zero_set))
}

/// For each selected diagram, compares the combinatorial family of its
/// permutation, the oracle vanishing set and the witness zero set.
/// Records come back in enumeration (or sampling) order.
pub fn verify_equivalence(shape: GridShape, config: &EquivalenceConfig) -> Result<EquivalenceReport> {
    let (mode, diagrams) = select_diagrams(shape, config.sample, config.seed)?;
    let records = diagrams
        .par_iter()
        .map(|d| equivalence_record(d, config))
        .collect::<Result<Vec<_>>>()?;
    let all_equal = records.iter().filter(|r| r.all_equal()).count();
    let distinct_diagrams: BTreeSet<u64> = records.iter().map(|r| r.diagram.mask()).collect();
    let distinct_sets: HashSet<&MinorFamily> = records.iter().map(|r| &r.vanishing).collect();
    Ok(EquivalenceReport {
        summary: EquivalenceSummary {
            shape,
            mode,
            diagrams: records.len(),
            all_equal,
            mismatches: records.len() - all_equal,
            injective: distinct_sets.len() == distinct_diagrams.len(),
        },
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub diagram: CauchonDiagram,
    pub step: GridPos,
    pub minor: MinorIndex,
    pub case: IdentityCase,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCounts {
    pub zero_pivot: usize,
    pub unchanged: usize,
    pub correction: usize,
    pub pivot_factorization: usize,
}

impl CaseCounts {
    fn record(&mut self, case: IdentityCase) {
        match case {
            IdentityCase::ZeroPivot => self.zero_pivot += 1,
            IdentityCase::Unchanged => self.unchanged += 1,
            IdentityCase::Correction { .. } => self.correction += 1,
            IdentityCase::PivotFactorization => self.pivot_factorization += 1,
        }
    }

    fn merge(mut self, other: CaseCounts) -> CaseCounts {
        self.zero_pivot += other.zero_pivot;
        self.unchanged += other.unchanged;
        self.correction += other.correction;
        self.pivot_factorization += other.pivot_factorization;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub shape: GridShape,
    pub mode: Mode,
    pub diagrams: usize,
    pub assignments: usize,
    pub checked: usize,
    pub cases: CaseCounts,
    pub failures: Vec<IdentityFailure>,
}

impl IdentitySweep {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the local stage relations for every admissible `(step, minor)`
/// pair, over `assignments` random prime-field assignments per diagram.
pub fn local_identity_sweep(shape: GridShape, assignments: usize, seed: u64, sample: Option<usize>) -> Result<IdentitySweep> {
    if assignments == 0 {
        return Err(Error::input("at least one assignment is required"));
    }
    let (mode, diagrams) = select_diagrams(shape, sample, seed)?;
    let minors = enumerate_minors(shape);
    let steps: Vec<GridPos> = interior_steps(shape).collect();
    let per_diagram = diagrams
        .par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, d.mask()));
            let mut cases = CaseCounts::default();
            let mut failures = Vec::new();
            for _ in 0..assignments {
                let assign = ParameterAssignment::<Fp>::sample(*d, &mut rng);
                let checker = LocalIdentityChecker::new(&assign);
                for &r in &steps {
                    for ix in minors.iter().filter(|ix| checker.admissible(r, ix)) {
                        let outcome = checker.check(r, ix)?;
                        cases.record(outcome.case);
                        if !outcome.holds {
                            failures.push(IdentityFailure {
                                diagram: *d,
                                step: r,
                                minor: ix.clone(),
                                case: outcome.case,
                            });
                        }
                    }
                }
            }
            Ok((cases, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cases = CaseCounts::default();
    let mut failures = Vec::new();
    for (c, f) in per_diagram {
        cases = cases.merge(c);
        failures.extend(f);
    }
    let checked = cases.zero_pivot + cases.unchanged + cases.correction + cases.pivot_factorization;
    Ok(IdentitySweep {
        shape,
        mode,
        diagrams: diagrams.len(),
        assignments,
        checked,
        cases,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub shape: GridShape,
    pub pairs: usize,
    pub failures: Vec<CauchonDiagram>,
}

impl RoundTripReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn round_trips<F: ExactField>(d: &CauchonDiagram, assign: &ParameterAssignment<F>) -> Result<bool> {
    let restored = run_restoration(d, assign)?;
    Ok(run_deleting_derivations(&restored)? == assign.matrix())
}

/// Restores then deletes derivations for `pairs` random (diagram, rational
/// assignment) pairs and checks the parameter matrix comes back exactly.
pub fn round_trip_sweep(shape: GridShape, pairs: usize, seed: u64) -> Result<RoundTripReport> {
    let diagrams = sample_diagrams(shape, pairs, seed);
    let failures = diagrams
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
            let assign = ParameterAssignment::<BigRational>::sample(*d, &mut rng);
            Ok((!round_trips(d, &assign)?).then_some(*d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RoundTripReport {
        shape,
        pairs,
        failures: failures.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnegativityReport {
    pub shape: GridShape,
    pub mode: Mode,
    pub diagrams: usize,
    pub minors_checked: usize,
    pub violations: Vec<String>,
}

impl NonnegativityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Realizes one witness per selected diagram and collects negative minors.
pub fn nonnegativity_sweep(shape: GridShape, seed: u64, sample: Option<usize>) -> Result<NonnegativityReport> {
    let (mode, diagrams) = select_diagrams(shape, sample, seed)?;
    let outcomes = diagrams
        .par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, d.mask()));
            match realize_tnn(d, &sample_weights(d, &mut rng)) {
                Ok(w) => Ok(Ok(w.minor_signs.len())),
                Err(Error::InvariantViolation(msg)) => Ok(Err(msg)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut minors_checked = 0;
    let mut violations = Vec::new();
    for o in outcomes {
        match o {
            Ok(n) => minors_checked += n,
            Err(msg) => violations.push(msg),
        }
    }
    Ok(NonnegativityReport {
        shape,
        mode,
        diagrams: diagrams.len(),
        minors_checked,
        violations,
    })
}
