//! Linear equality constraints over binary variables and their JSON format.
//!
//! An instance is a list of rows `c_j · x = b_j` with integer coefficients,
//! all sharing one variable count `n`. Viewed as a spin operator a row becomes
//! `Σ_i c_ji σ_i^z`, whose eigenvalue on the basis state `x` is
//! `Σ_i c_ji (1 - 2 x_i)`; a state satisfying `c · x = b` therefore sits in
//! the eigenspace with eigenvalue `Σ_i c_i - 2 b`. Coefficients are
//! arbitrary-precision so adversarially large reductions stay exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

/// Coefficient family of an instance. `Binary01 ⊂ Pm01 ⊂ Integer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    /// Arbitrary integer coefficients.
    Integer,
    /// Coefficients restricted to {0, 1}.
    Binary01,
    /// Coefficients restricted to {-1, 0, 1}.
    Pm01,
}

impl DomainTag {
    /// True when `coeff` is representable under this tag.
    pub fn admits(&self, coeff: &BigInt) -> bool {
        match self {
            DomainTag::Integer => true,
            DomainTag::Binary01 => coeff.is_zero() || coeff.is_one(),
            DomainTag::Pm01 => coeff.magnitude() <= &1u32.into(),
        }
    }

    /// Tightest tag admitting every coefficient produced by `coeffs`.
    pub fn infer<'a>(coeffs: impl Iterator<Item = &'a BigInt> + Clone) -> DomainTag {
        if coeffs.clone().all(|c| DomainTag::Binary01.admits(c)) {
            DomainTag::Binary01
        } else if coeffs.clone().all(|c| DomainTag::Pm01.admits(c)) {
            DomainTag::Pm01
        } else {
            DomainTag::Integer
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            DomainTag::Integer => "integer",
            DomainTag::Binary01 => "binary01",
            DomainTag::Pm01 => "pm01",
        }
    }

    fn parse(text: &str) -> Option<DomainTag> {
        match text {
            "integer" => Some(DomainTag::Integer),
            "binary01" => Some(DomainTag::Binary01),
            "pm01" => Some(DomainTag::Pm01),
            _ => None,
        }
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One equality row `coeffs · x = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigInt>,
    pub value: BigInt,
}

impl Constraint {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_all_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Σ_i coeffs[i] · x_i` where bit `i` of `state` is `x_{i+1}`.
    pub fn dot_state(&self, state: u64) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if state >> i & 1 == 1 {
                acc += c;
            }
        }
        acc
    }

    /// Eigenvalue `Σ_i coeffs[i] · (1 - 2 x_i)` of the row's spin embedding.
    pub fn spin_eigenvalue(&self, state: u64) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if state >> i & 1 == 1 {
                acc -= c;
            } else {
                acc += c;
            }
        }
        acc
    }

    /// `Σ_i |coeffs[i]|`.
    pub fn one_norm(&self) -> BigInt {
        self.coeffs.iter().map(Signed::abs).sum()
    }

    /// Sum of all coefficients.
    pub fn coeff_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

/// Spin eigenvalue carried by every state of a feasibility class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinValue {
    pub eigenvalue: BigInt,
}

/// A full instance: `n` variables, a domain tag, one or more rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    n: usize,
    domain_tag: DomainTag,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed instance JSON: {0}")]
    Json(String),
    #[error("`{0}` is not an integer")]
    NonIntegerNumber(String),
    #[error("unknown domain tag `{0}`")]
    UnknownDomainTag(String),
    #[error("instance has no constraints")]
    EmptyConstraintList,
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("constraint {row} is all zeros")]
    AllZeroRow { row: usize },
    #[error("constraint {row} has coefficient {coeff} outside domain `{tag}`")]
    DomainViolation {
        row: usize,
        coeff: BigInt,
        tag: DomainTag,
    },
    #[error("row {row} out of range; instance has {m} constraints")]
    RowOutOfRange { row: usize, m: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    #[serde(default)]
    domain: Option<String>,
    constraints: Vec<RawConstraint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    coeffs: Vec<serde_json::Number>,
    value: serde_json::Number,
}

/// Converts a JSON number into an exact integer, rejecting fractions and
/// exponent forms.
pub(crate) fn json_number_to_bigint(num: &serde_json::Number) -> Result<BigInt, ModelError> {
    let text = num.to_string();
    BigInt::from_str(&text).map_err(|_| ModelError::NonIntegerNumber(text))
}

/// Renders an exact integer as a JSON number of arbitrary size.
pub(crate) fn bigint_to_json_number(value: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&value.to_string())
        .expect("integer literal is a valid JSON number")
}

impl ConstraintSet {
    /// Validates rows and fixes the domain tag (inferring the tightest one
    /// when `tag` is `None`). Rejects empty row lists, dimension mismatches,
    /// and all-zero rows; duplicate rows are allowed and can be inspected via
    /// [`ConstraintSet::duplicate_row_pairs`].
    pub fn new(
        n: usize,
        constraints: Vec<Constraint>,
        tag: Option<DomainTag>,
    ) -> Result<Self, ModelError> {
        if constraints.is_empty() {
            return Err(ModelError::EmptyConstraintList);
        }
        for (row, c) in constraints.iter().enumerate() {
            if c.len() != n {
                return Err(ModelError::DimensionMismatch {
                    row,
                    expected: n,
                    got: c.len(),
                });
            }
            if c.is_all_zero() {
                return Err(ModelError::AllZeroRow { row });
            }
        }
        let domain_tag = match tag {
            Some(tag) => {
                for (row, c) in constraints.iter().enumerate() {
                    if let Some(bad) = c.coeffs.iter().find(|x| !tag.admits(x)) {
                        return Err(ModelError::DomainViolation {
                            row,
                            coeff: bad.clone(),
                            tag,
                        });
                    }
                }
                tag
            }
            None => DomainTag::infer(constraints.iter().flat_map(|c| c.coeffs.iter())),
        };
        Ok(ConstraintSet {
            n,
            domain_tag,
            constraints,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn domain_tag(&self) -> DomainTag {
        self.domain_tag
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, row: usize) -> Result<&Constraint, ModelError> {
        self.constraints
            .get(row)
            .ok_or(ModelError::RowOutOfRange { row, m: self.m() })
    }

    /// Column `j` across all rows, as owned values.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.constraints
            .iter()
            .map(|c| c.coeffs[j].clone())
            .collect()
    }

    /// True when column `j` is zero in every row.
    pub fn column_is_zero(&self, j: usize) -> bool {
        self.constraints.iter().all(|c| c.coeffs[j].is_zero())
    }

    /// Index pairs `(i, j)` with `i < j` whose rows are identical, in
    /// lexicographic order. Duplicates are legal; callers may warn.
    pub fn duplicate_row_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.constraints.len() {
            for j in i + 1..self.constraints.len() {
                if self.constraints[i] == self.constraints[j] {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// Parses the JSON instance format:
    /// `{"n": 4, "domain": "binary01", "constraints": [{"coeffs": [...], "value": ...}]}`.
    /// `domain` is optional (tightest tag inferred); unknown fields are
    /// rejected; coefficients must be integers but may exceed 64 bits.
    pub fn parse_instance(text: &str) -> Result<Self, ModelError> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let tag = match &raw.domain {
            Some(s) => {
                Some(DomainTag::parse(s).ok_or_else(|| ModelError::UnknownDomainTag(s.clone()))?)
            }
            None => None,
        };
        let mut constraints = Vec::with_capacity(raw.constraints.len());
        for rc in &raw.constraints {
            let coeffs = rc
                .coeffs
                .iter()
                .map(json_number_to_bigint)
                .collect::<Result<Vec<_>, _>>()?;
            let value = json_number_to_bigint(&rc.value)?;
            constraints.push(Constraint { coeffs, value });
        }
        ConstraintSet::new(raw.n, constraints, tag)
    }

    /// Serializes back to the instance format with the domain tag explicit.
    /// `parse_instance(to_json_string(cs))` reproduces `cs` exactly.
    pub fn to_json_value(&self) -> serde_json::Value {
        let constraints: Vec<serde_json::Value> = self
            .constraints
            .iter()
            .map(|c| {
                serde_json::json!({
                    "coeffs": c
                        .coeffs
                        .iter()
                        .map(|x| serde_json::Value::Number(bigint_to_json_number(x)))
                        .collect::<Vec<_>>(),
                    "value": serde_json::Value::Number(bigint_to_json_number(&c.value)),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "domain": self.domain_tag.as_str(),
            "constraints": constraints,
        })
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// Spin eigenvalue shared by every state of the row-`row` class `c · x = b`:
/// `Σ_i c_i - 2 b`.
pub fn spin_value_of(cs: &ConstraintSet, row: usize, b: &BigInt) -> Result<SpinValue, ModelError> {
    let c = cs.constraint(row)?;
    Ok(SpinValue {
        eigenvalue: c.coeff_sum() - 2 * b,
    })
}
