//! Literal sparse-matrix oracle over exact complex rationals.
//!
//! Operators are assembled the long way: per-site 2×2 matrices combined by
//! Kronecker products, sums of entry maps, and a generic sparse
//! matrix-matrix product. Nothing here knows about commutation defects or
//! transition streams, which is the point: this module is the independent
//! slow route that the fast checks are tested against, and the route the
//! CLI's `--dense-oracle` flag selects.
//!
//! Basis convention: site 1 is the most significant Kronecker factor, so the
//! state `x` maps to index `Σ_i x_i 2^(n-i)`. [`basis_index`] converts from
//! the bitmask convention used elsewhere (bit `i-1` = `x_i`).

use std::collections::BTreeMap;

use crate::algebra::{DriverHamiltonian, DriverTerm, ExactComplex};
use crate::model::Constraint;

/// Sparse square matrix with exact complex entries; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseExactMatrix {
    dim: u64,
    entries: BTreeMap<(u64, u64), ExactComplex>,
}

/// The four single-site factors a term is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteOp {
    Identity,
    Z,
    Raise,
    Lower,
}

impl SiteOp {
    /// The literal 2×2 matrix in the (|0⟩, |1⟩) basis. `Raise` consumes a 1:
    /// `|0⟩⟨1|`; `Lower` produces one: `|1⟩⟨0|`.
    fn matrix(self) -> SparseExactMatrix {
        let mut m = SparseExactMatrix::zero(2);
        match self {
            SiteOp::Identity => {
                m.set(0, 0, ExactComplex::one());
                m.set(1, 1, ExactComplex::one());
            }
            SiteOp::Z => {
                m.set(0, 0, ExactComplex::one());
                m.set(1, 1, ExactComplex::from_int(-1));
            }
            SiteOp::Raise => {
                m.set(0, 1, ExactComplex::one());
            }
            SiteOp::Lower => {
                m.set(1, 0, ExactComplex::one());
            }
        }
        m
    }
}

impl SparseExactMatrix {
    pub fn zero(dim: u64) -> Self {
        SparseExactMatrix {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn set(&mut self, row: u64, col: u64, value: ExactComplex) {
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: u64, col: u64) -> ExactComplex {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(ExactComplex::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u64, u64), &ExactComplex)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_offdiagonal_entry(&self) -> bool {
        self.entries.keys().any(|&(r, c)| r != c)
    }

    pub fn kron(&self, other: &SparseExactMatrix) -> SparseExactMatrix {
        let mut out = SparseExactMatrix::zero(self.dim * other.dim);
        for (&(r1, c1), v1) in &self.entries {
            for (&(r2, c2), v2) in &other.entries {
                out.set(r1 * other.dim + r2, c1 * other.dim + c2, v1.mul(v2));
            }
        }
        out
    }

    pub fn add(&self, other: &SparseExactMatrix) -> SparseExactMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (&pos, v) in &other.entries {
            let sum = out.get(pos.0, pos.1).add(v);
            out.set(pos.0, pos.1, sum);
        }
        out
    }

    pub fn sub(&self, other: &SparseExactMatrix) -> SparseExactMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (&pos, v) in &other.entries {
            let diff = out.get(pos.0, pos.1).sub(v);
            out.set(pos.0, pos.1, diff);
        }
        out
    }

    pub fn scale(&self, factor: &ExactComplex) -> SparseExactMatrix {
        let mut out = SparseExactMatrix::zero(self.dim);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.mul(factor));
        }
        out
    }

    /// Generic sparse product; cost is one multiply per nonzero pair meeting
    /// on an inner index.
    pub fn mul(&self, other: &SparseExactMatrix) -> SparseExactMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut rows_of_other: BTreeMap<u64, Vec<(u64, &ExactComplex)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            rows_of_other.entry(r).or_default().push((c, v));
        }
        let mut out = SparseExactMatrix::zero(self.dim);
        for (&(r, k), v) in &self.entries {
            if let Some(row) = rows_of_other.get(&k) {
                for &(c, w) in row {
                    let sum = out.get(r, c).add(&v.mul(w));
                    out.set(r, c, sum);
                }
            }
        }
        out
    }
}

/// Index of the basis state `mask` (bit `i` = `x_{i+1}`) in the Kronecker
/// ordering where site 1 is most significant.
pub fn basis_index(mask: u64, n: usize) -> u64 {
    let mut idx = 0u64;
    for i in 0..n {
        if mask >> i & 1 == 1 {
            idx |= 1 << (n - 1 - i);
        }
    }
    idx
}

fn kron_product(ops: &[SiteOp]) -> SparseExactMatrix {
    let mut acc = SparseExactMatrix::zero(1);
    acc.set(0, 0, ExactComplex::one());
    for &op in ops {
        acc = acc.kron(&op.matrix());
    }
    acc
}

fn site_ops_of(term: &DriverTerm, n: usize) -> Vec<SiteOp> {
    let mut ops = vec![SiteOp::Identity; n];
    for &s in term.z_sites() {
        ops[s] = SiteOp::Z;
    }
    for &s in term.raise_sites() {
        ops[s] = SiteOp::Raise;
    }
    for &s in term.lower_sites() {
        ops[s] = SiteOp::Lower;
    }
    ops
}

/// The Hermitian matrix of one term: `α · K(ops) + conj(α) · K(partner ops)`.
/// A self-conjugate (diagonal) term is not doubled.
pub fn term_matrix(term: &DriverTerm, n: usize) -> SparseExactMatrix {
    let direct = kron_product(&site_ops_of(term, n)).scale(term.coeff());
    if term.is_diagonal() {
        return direct;
    }
    let partner = term.conjugate_partner();
    direct.add(&kron_product(&site_ops_of(&partner, n)).scale(partner.coeff()))
}

/// The diagonal matrix `Σ_i c_i Z_i` of a constraint row.
pub fn constraint_matrix(row: &Constraint, n: usize) -> SparseExactMatrix {
    let mut acc = SparseExactMatrix::zero(1 << n);
    for (i, c) in row.coeffs.iter().enumerate() {
        let mut ops = vec![SiteOp::Identity; n];
        ops[i] = SiteOp::Z;
        acc = acc.add(&kron_product(&ops).scale(&ExactComplex::one().scale_int(c)));
    }
    acc
}

/// Sum of all term matrices of a merged expansion.
pub fn hamiltonian_matrix(h: &DriverHamiltonian) -> SparseExactMatrix {
    let mut acc = SparseExactMatrix::zero(1 << h.n());
    for term in h.terms() {
        acc = acc.add(&term_matrix(term, h.n()));
    }
    acc
}

/// `a·b - b·a`, computed with two literal sparse products.
pub fn commutator(a: &SparseExactMatrix, b: &SparseExactMatrix) -> SparseExactMatrix {
    a.mul(b).sub(&b.mul(a))
}
