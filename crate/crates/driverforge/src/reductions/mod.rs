//! Constructive mappings between subset-sum style problems and constraint
//! instances, plus the binary-matrix gadget machinery.
//!
//! The submodules split the work: `oracles` holds exact exponential-time
//! solvers used as ground truth, `adder` is the single add-one-pair gadget,
//! `binary_lp` assembles whole adder networks, and `reduced_example` stores
//! a small hand-built network used as a fixed test vector.

pub mod adder;
pub mod binary_lp;
pub mod oracles;
pub mod reduced_example;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{DriverTerm, ExactComplex};
use crate::model::{bigint_to_json_number, json_number_to_bigint, Constraint, ConstraintSet};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("number {0} is not an integer")]
    NonIntegerNumber(String),
    #[error("the value list is empty")]
    EmptyValues,
    #[error("value at position {index} is {value}; every value must be positive")]
    NonPositiveValue { index: usize, value: BigInt },
    #[error("this operation needs a target value")]
    TargetRequired,
    #[error("target {0} must be positive for this reduction")]
    TargetNotPositive(BigInt),
    #[error("{n} values exceed the oracle cap of {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("ancilla pair count {0} must be at least 1")]
    PairCountOutOfRange(usize),
    #[error("expected {expected} ancilla coefficients, got {got}")]
    AncillaArity { expected: usize, got: usize },
    #[error("ancilla coefficient {value} at position {index} must exceed {bound}")]
    AncillaTooSmall {
        index: usize,
        value: BigInt,
        bound: BigInt,
    },
    #[error("the adder network needs at least 2 values")]
    SetTooSmall,
    #[error("assignment has {got} entries, the layout has {expected} columns")]
    AssignmentArity { expected: usize, got: usize },
    #[error("assignment entry at position {index} is {value}; entries must be -1, 0, or 1")]
    BadAssignmentEntry { index: usize, value: i64 },
    #[error("vector is not in the nullspace; row {row} evaluates to {value}")]
    NullspaceViolation { row: usize, value: BigInt },
    #[error("nullspace vector is zero on every integer column; with a zero vector there is nothing to map back")]
    ZeroOnIntegerColumns,
    #[error("exhaustive enumeration over {columns} columns exceeds the cap of {cap}")]
    EnumerationTooLarge { columns: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// A list of positive integers with an optional target sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetInstance {
    values: Vec<BigInt>,
    target: Option<BigInt>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubsetInstance {
    values: Vec<serde_json::Number>,
    #[serde(default)]
    target: Option<serde_json::Number>,
}

impl SubsetInstance {
    pub fn new(values: Vec<BigInt>, target: Option<BigInt>) -> Result<Self, ReductionError> {
        if values.is_empty() {
            return Err(ReductionError::EmptyValues);
        }
        for (index, value) in values.iter().enumerate() {
            if !value.is_positive() {
                return Err(ReductionError::NonPositiveValue {
                    index,
                    value: value.clone(),
                });
            }
        }
        Ok(SubsetInstance { values, target })
    }

    pub fn from_ints(values: &[i64], target: Option<i64>) -> Result<Self, ReductionError> {
        SubsetInstance::new(
            values.iter().copied().map(BigInt::from).collect(),
            target.map(BigInt::from),
        )
    }

    /// Parses `{"values": [...], "target": ...}` with arbitrary-size
    /// integers; unknown fields are rejected.
    pub fn parse(json: &str) -> Result<Self, ReductionError> {
        let raw: RawSubsetInstance = serde_json::from_str(json)?;
        let values = raw
            .values
            .iter()
            .map(json_number_to_bigint)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| match e {
                crate::model::ModelError::NonIntegerNumber(s) => {
                    ReductionError::NonIntegerNumber(s)
                }
                other => ReductionError::Model(other),
            })?;
        let target = match raw.target {
            Some(ref num) => Some(json_number_to_bigint(num).map_err(|e| match e {
                crate::model::ModelError::NonIntegerNumber(s) => {
                    ReductionError::NonIntegerNumber(s)
                }
                other => ReductionError::Model(other),
            })?),
            None => None,
        };
        SubsetInstance::new(values, target)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "values".into(),
            serde_json::Value::Array(
                self.values
                    .iter()
                    .map(|v| serde_json::Value::Number(bigint_to_json_number(v)))
                    .collect(),
            ),
        );
        if let Some(ref t) = self.target {
            obj.insert(
                "target".into(),
                serde_json::Value::Number(bigint_to_json_number(t)),
            );
        }
        serde_json::Value::Object(obj)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn target(&self) -> Option<&BigInt> {
        self.target.as_ref()
    }

    pub(crate) fn target_or_err(&self) -> Result<&BigInt, ReductionError> {
        self.target.as_ref().ok_or(ReductionError::TargetRequired)
    }
}

/// A sign vector in {-1, 0, 1} over a value list; +1 entries form one
/// subset, -1 entries the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    entries: Vec<i8>,
}

impl Assignment {
    pub fn new(entries: Vec<i8>) -> Result<Self, ReductionError> {
        for (index, &value) in entries.iter().enumerate() {
            if !(-1..=1).contains(&value) {
                return Err(ReductionError::BadAssignmentEntry {
                    index,
                    value: value as i64,
                });
            }
        }
        Ok(Assignment { entries })
    }

    /// Builds the sign vector with +1 on `plus`, -1 on `minus`.
    pub fn from_subsets(len: usize, plus: &[usize], minus: &[usize]) -> Self {
        let mut entries = vec![0i8; len];
        for &i in plus {
            entries[i] = 1;
        }
        for &i in minus {
            entries[i] = -1;
        }
        Assignment { entries }
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The (+1 positions, -1 positions) index pair.
    pub fn subsets(&self) -> (Vec<usize>, Vec<usize>) {
        let plus = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(i, _)| i)
            .collect();
        let minus = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| i)
            .collect();
        (plus, minus)
    }

    /// The signed sum over `values`.
    pub fn weighted_sum(&self, values: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (v, &sign) in values.iter().zip(&self.entries) {
            match sign {
                1 => acc += v,
                -1 => acc -= v,
                _ => {}
            }
        }
        acc
    }
}

/// Embeds an equal-sum-pair question as a one-row homogeneous instance.
///
/// A commuting off-diagonal driver term for the row corresponds exactly to
/// an equal-sum witness: raise sites pick one subset, lower sites the other.
pub fn reduce_ess_to_constraint(inst: &SubsetInstance) -> ConstraintSet {
    ConstraintSet::new(
        inst.len(),
        vec![Constraint {
            coeffs: inst.values().to_vec(),
            value: BigInt::zero(),
        }],
        None,
    )
    .expect("positive values form a valid row")
}

/// Output of [`reduce_ss_to_2om`]: the grown instance plus the index of the
/// value it appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsTo2om {
    pub instance: SubsetInstance,
    pub appended_index: usize,
}

impl SsTo2om {
    /// Maps a two-subset witness of the grown instance back to a subset-sum
    /// witness of the original.
    ///
    /// A subset of the grown instance summing to the target either avoids
    /// the appended value or is exactly the appended singleton (anything
    /// else would overshoot, since all values are positive). The two
    /// witnesses are distinct, so at least one avoids it; that one answers
    /// the original question.
    pub fn backmap(&self, first: &[usize], second: &[usize]) -> Vec<usize> {
        if first == [self.appended_index] {
            second.to_vec()
        } else {
            first.to_vec()
        }
    }
}

/// Grows a target-sum instance by one copy of the target itself, turning
/// "is there a subset summing to T" into "are there two distinct ones".
pub fn reduce_ss_to_2om(inst: &SubsetInstance) -> Result<SsTo2om, ReductionError> {
    let target = inst.target_or_err()?;
    if !target.is_positive() {
        return Err(ReductionError::TargetNotPositive(target.clone()));
    }
    let mut values = inst.values().to_vec();
    values.push(target.clone());
    Ok(SsTo2om {
        instance: SubsetInstance::new(values, Some(target.clone()))?,
        appended_index: inst.len(),
    })
}

/// Output of [`reduce_2om_to_nontrivial`].
#[derive(Debug, Clone)]
pub struct NontrivialReduction {
    /// One row: the values as coefficients, the target as the value.
    pub constraint_set: ConstraintSet,
    /// The operator eigenvalue shared by every feasible state, `sum(S) - 2T`.
    pub spin_eigenvalue: BigInt,
}

/// Embeds "two or more subsets sum to T" as a one-row instance whose
/// feasible states are exactly the subsets summing to T; the answer is yes
/// precisely when at least two feasible states exist, which is when some
/// driver term acts nontrivially on the feasible space.
pub fn reduce_2om_to_nontrivial(
    inst: &SubsetInstance,
) -> Result<NontrivialReduction, ReductionError> {
    let target = inst.target_or_err()?;
    let constraint_set = ConstraintSet::new(
        inst.len(),
        vec![Constraint {
            coeffs: inst.values().to_vec(),
            value: target.clone(),
        }],
        None,
    )?;
    let sum: BigInt = inst.values().iter().sum();
    Ok(NontrivialReduction {
        constraint_set,
        spin_eigenvalue: sum - BigInt::from(2) * target,
    })
}

/// Output of [`append_given_k_gadget`].
#[derive(Debug, Clone)]
pub struct GivenKGadget {
    /// The instance with 2k ancilla variables appended.
    pub extended: ConstraintSet,
    /// The coefficient used for each ancilla pair.
    pub ancilla_coeffs: Vec<BigInt>,
    /// One swap term per pair, acting only on that pair.
    pub terms: Vec<DriverTerm>,
}

/// Appends `k` ancilla pairs that are each forced into the two-state
/// {10, 01} factor, multiplying the feasible count by exactly 2^k.
///
/// Pair `j` enters every row with one shared coefficient `a_j` and raises
/// every row value by `a_j`. A pair summing to anything but 1 would move
/// the row total by at least `a_j` in one direction, and the coefficients
/// grow fast enough that no original assignment can absorb that shift.
///
/// When `coeffs` is given it must hold `k` values, each exceeding the
/// largest original row norm plus all earlier coefficients. The computed
/// defaults also add the row value's magnitude, which keeps the product
/// guarantee even for rows whose value is outside the reachable range.
pub fn append_given_k_gadget(
    cs: &ConstraintSet,
    k: usize,
    coeffs: Option<&[BigInt]>,
) -> Result<GivenKGadget, ReductionError> {
    if k < 1 {
        return Err(ReductionError::PairCountOutOfRange(k));
    }
    if let Some(supplied) = coeffs {
        if supplied.len() != k {
            return Err(ReductionError::AncillaArity {
                expected: k,
                got: supplied.len(),
            });
        }
    }
    let norm_bound = cs
        .constraints()
        .iter()
        .map(|c| c.one_norm())
        .max()
        .expect("at least one row");
    let safe_bound = cs
        .constraints()
        .iter()
        .map(|c| c.one_norm() + c.value.abs())
        .max()
        .expect("at least one row");

    let mut ancilla_coeffs: Vec<BigInt> = Vec::with_capacity(k);
    let mut running = BigInt::zero();
    for j in 0..k {
        let a = match coeffs {
            Some(supplied) => {
                let bound = &norm_bound + &running;
                if supplied[j] <= bound {
                    return Err(ReductionError::AncillaTooSmall {
                        index: j,
                        value: supplied[j].clone(),
                        bound,
                    });
                }
                supplied[j].clone()
            }
            None => &safe_bound + &running + 1,
        };
        running += &a;
        ancilla_coeffs.push(a);
    }

    let n = cs.n();
    let rows = cs
        .constraints()
        .iter()
        .map(|c| {
            let mut coeffs = c.coeffs.clone();
            for a in &ancilla_coeffs {
                coeffs.push(a.clone());
                coeffs.push(a.clone());
            }
            Constraint {
                coeffs,
                value: &c.value + &running,
            }
        })
        .collect();
    let extended = ConstraintSet::new(n + 2 * k, rows, None)?;
    let terms = (0..k)
        .map(|j| {
            DriverTerm::new(
                vec![],
                vec![n + 2 * j],
                vec![n + 2 * j + 1],
                ExactComplex::one(),
            )
            .expect("fresh disjoint sites")
        })
        .collect();
    Ok(GivenKGadget {
        extended,
        ancilla_coeffs,
        terms,
    })
}
