//! Binary-expansion encoding of the equal-sum problem as a homogeneous
//! linear system with 0/1 coefficients over three-valued variables.
//!
//! For positive integers s_1..s_n the construction builds a matrix whose
//! nullspace over {-1, 0, 1} assignments, projected onto the first n
//! columns, is exactly the set of sign vectors u with sum u_i s_i = 0.
//! Each binary digit of the weighted sum is accumulated by a chain of
//! adder cells; the digit outputs and the last remaining carry are pinned
//! to zero by dedicated single-entry rows.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::algebra::DriverTerm;
use crate::reductions::adder::{adder_outputs, internal_wires, primary_output};
use crate::reductions::oracles::sign_vectors;
use crate::reductions::{ReductionError, SubsetInstance};

/// Which internal wire of an adder cell a column carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdderWire {
    X1,
    X2,
    X3,
}

impl AdderWire {
    fn as_str(self) -> &'static str {
        match self {
            AdderWire::X1 => "x1",
            AdderWire::X2 => "x2",
            AdderWire::X3 => "x3",
        }
    }
}

/// What a matrix column stands for. Indices inside roles are 1-based to
/// match the JSON output; column positions elsewhere in the API are
/// 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    IntegerVar { index: usize },
    AdderInternal { adder: usize, wire: AdderWire },
    Carry { layer: usize, index: usize },
    Sum { layer: usize, index: usize },
}

impl ColumnRole {
    pub fn to_json_value(&self) -> serde_json::Value {
        match *self {
            ColumnRole::IntegerVar { index } => json!({"role": "integer", "index": index}),
            ColumnRole::AdderInternal { adder, wire } => {
                json!({"role": "wire", "adder": adder, "wire": wire.as_str()})
            }
            ColumnRole::Carry { layer, index } => {
                json!({"role": "carry", "layer": layer, "index": index})
            }
            ColumnRole::Sum { layer, index } => {
                json!({"role": "sum", "layer": layer, "index": index})
            }
        }
    }
}

/// One adder input: a column position and a 0/1 coefficient. A zero
/// coefficient detaches the input, so its column value does not matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderInput {
    pub column: usize,
    pub coeff: u8,
}

/// Where one adder cell sits in the layout and which columns it owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderRecord {
    pub layer: usize,
    pub position: usize,
    pub input_a: AdderInput,
    pub input_b: AdderInput,
    pub x_columns: [usize; 3],
    pub carry_column: usize,
    pub sum_column: usize,
}

impl AdderRecord {
    fn output_columns(&self) -> [usize; 5] {
        [
            self.x_columns[0],
            self.x_columns[1],
            self.x_columns[2],
            self.carry_column,
            self.sum_column,
        ]
    }
}

/// The assembled constraint matrix together with its column book-keeping.
#[derive(Debug, Clone)]
pub struct GadgetLayout {
    values: Vec<BigInt>,
    columns: Vec<ColumnRole>,
    rows: Vec<Vec<(usize, u8)>>,
    forced_zero_rows: Vec<usize>,
    adders: Vec<AdderRecord>,
    layer_count: usize,
}

impl GadgetLayout {
    pub(crate) fn from_parts(
        values: Vec<BigInt>,
        columns: Vec<ColumnRole>,
        rows: Vec<Vec<(usize, u8)>>,
        forced_zero_rows: Vec<usize>,
        adders: Vec<AdderRecord>,
        layer_count: usize,
    ) -> Self {
        let layout = GadgetLayout {
            values,
            columns,
            rows,
            forced_zero_rows,
            adders,
            layer_count,
        };
        layout.assert_consistency();
        layout
    }

    fn assert_consistency(&self) {
        let n = self.integer_count();
        let adders = self.adders.len();
        assert_eq!(
            self.columns.len(),
            n + 5 * adders,
            "each adder must add exactly five columns"
        );
        assert_eq!(
            self.rows.len(),
            6 * adders + self.forced_zero_rows.len(),
            "each adder must add exactly six rows"
        );
        assert_eq!(
            self.forced_zero_rows.len(),
            self.layer_count + 1,
            "one forced digit per layer plus the final carry"
        );
        for (i, role) in self.columns.iter().take(n).enumerate() {
            assert_eq!(*role, ColumnRole::IntegerVar { index: i + 1 });
        }
        for row in &self.rows {
            assert!(!row.is_empty());
            for &(column, coeff) in row {
                assert!(column < self.columns.len());
                assert!(coeff == 1, "stored row entries always have coefficient 1");
            }
        }
        for &row in &self.forced_zero_rows {
            assert!(self.rows[row].len() == 1, "forced rows pin a single column");
        }
        let mut produced: HashSet<usize> = HashSet::new();
        for (k, adder) in self.adders.iter().enumerate() {
            assert!(adder.layer >= 1 && adder.layer <= self.layer_count);
            let wires = [AdderWire::X1, AdderWire::X2, AdderWire::X3];
            for (slot, wire) in wires.into_iter().enumerate() {
                assert_eq!(
                    self.columns[adder.x_columns[slot]],
                    ColumnRole::AdderInternal { adder: k + 1, wire }
                );
            }
            assert_eq!(
                self.columns[adder.carry_column],
                ColumnRole::Carry {
                    layer: adder.layer,
                    index: adder.position
                }
            );
            assert_eq!(
                self.columns[adder.sum_column],
                ColumnRole::Sum {
                    layer: adder.layer,
                    index: adder.position
                }
            );
            for input in [adder.input_a, adder.input_b] {
                assert!(
                    input.column < n || produced.contains(&input.column),
                    "adder inputs must be integer columns or outputs of earlier adders"
                );
            }
            produced.extend(adder.output_columns());
        }
    }

    /// How many leading columns carry the integer variables.
    pub fn integer_count(&self) -> usize {
        self.values.len()
    }

    /// The integer values the layout was built for.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> &[ColumnRole] {
        &self.columns
    }

    /// Sparse rows as (column, coefficient) pairs; zero coefficients are
    /// never stored.
    pub fn rows(&self) -> &[Vec<(usize, u8)>] {
        &self.rows
    }

    /// Indices of the rows that pin a column to zero, in row order: the
    /// digit output of every layer, then the final carry.
    pub fn forced_zero_rows(&self) -> &[usize] {
        &self.forced_zero_rows
    }

    pub fn adders(&self) -> &[AdderRecord] {
        &self.adders
    }

    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    /// The columns pinned to zero by the forced rows.
    pub fn forced_columns(&self) -> Vec<usize> {
        self.forced_zero_rows
            .iter()
            .map(|&row| self.rows[row][0].0)
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut dense = vec![vec![0u8; self.columns.len()]; self.rows.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for &(column, coeff) in row {
                dense[r][column] = coeff;
            }
        }
        dense
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "matrix": self.to_dense(),
            "columns": self.columns.iter().map(|role| role.to_json_value()).collect::<Vec<_>>(),
            "forced_zero_rows": self.forced_zero_rows,
        })
    }

    /// Checks that the assignment zeroes every row, reporting the first
    /// violated row otherwise.
    pub fn check_nullspace(&self, assignment: &[i8]) -> Result<(), ReductionError> {
        validate_digits(assignment, self.columns.len())?;
        for (row_index, row) in self.rows.iter().enumerate() {
            let value: i64 = row
                .iter()
                .map(|&(column, coeff)| coeff as i64 * assignment[column] as i64)
                .sum();
            if value != 0 {
                return Err(ReductionError::NullspaceViolation {
                    row: row_index,
                    value: BigInt::from(value),
                });
            }
        }
        Ok(())
    }
}

fn validate_digits(entries: &[i8], expected: usize) -> Result<(), ReductionError> {
    if entries.len() != expected {
        return Err(ReductionError::AssignmentArity {
            expected,
            got: entries.len(),
        });
    }
    for (index, &value) in entries.iter().enumerate() {
        if !(-1..=1).contains(&value) {
            return Err(ReductionError::BadAssignmentEntry {
                index,
                value: value as i64,
            });
        }
    }
    Ok(())
}

struct LayoutBuilder {
    columns: Vec<ColumnRole>,
    rows: Vec<Vec<(usize, u8)>>,
    adders: Vec<AdderRecord>,
}

impl LayoutBuilder {
    /// Sums the inputs with a chain of adders: the running total rides on
    /// the sum wires, one fresh carry falls out per adder. Returns the
    /// carry columns and the column holding the final digit.
    fn chain_layer(&mut self, layer: usize, inputs: &[AdderInput]) -> (Vec<usize>, usize) {
        assert!(inputs.len() >= 2, "a layer needs at least two inputs");
        let mut carries = Vec::new();
        let mut acc = inputs[0];
        for (offset, &input) in inputs[1..].iter().enumerate() {
            let (carry, sum) = self.add_adder(layer, offset + 1, acc, input);
            carries.push(carry);
            acc = AdderInput {
                column: sum,
                coeff: 1,
            };
        }
        (carries, acc.column)
    }

    fn add_adder(
        &mut self,
        layer: usize,
        position: usize,
        input_a: AdderInput,
        input_b: AdderInput,
    ) -> (usize, usize) {
        let columns_before = self.columns.len();
        let rows_before = self.rows.len();
        let adder = self.adders.len() + 1;

        let x1 = self.push_column(ColumnRole::AdderInternal {
            adder,
            wire: AdderWire::X1,
        });
        let x2 = self.push_column(ColumnRole::AdderInternal {
            adder,
            wire: AdderWire::X2,
        });
        let x3 = self.push_column(ColumnRole::AdderInternal {
            adder,
            wire: AdderWire::X3,
        });
        let carry = self.push_column(ColumnRole::Carry {
            layer,
            index: position,
        });
        let sum = self.push_column(ColumnRole::Sum {
            layer,
            index: position,
        });

        let mut balance = Vec::new();
        for input in [input_a, input_b] {
            if input.coeff != 0 {
                balance.push((input.column, input.coeff));
            }
        }
        balance.extend([(x1, 1), (x2, 1), (x3, 1)]);
        self.rows.push(balance);
        self.rows.push(vec![(x1, 1), (x3, 1), (carry, 1), (sum, 1)]);
        self.rows.push(vec![(x2, 1), (x3, 1), (carry, 1), (sum, 1)]);
        self.rows.push(vec![(x1, 1), (carry, 1)]);
        self.rows.push(vec![(x2, 1), (carry, 1)]);
        self.rows.push(vec![(x3, 1), (sum, 1)]);

        self.adders.push(AdderRecord {
            layer,
            position,
            input_a,
            input_b,
            x_columns: [x1, x2, x3],
            carry_column: carry,
            sum_column: sum,
        });
        assert_eq!(self.columns.len() - columns_before, 5);
        assert_eq!(self.rows.len() - rows_before, 6);
        (carry, sum)
    }

    fn push_column(&mut self, role: ColumnRole) -> usize {
        self.columns.push(role);
        self.columns.len() - 1
    }
}

/// Builds the constraint layout for one value list.
///
/// One bit layer per binary digit of the largest value (plus a top guard
/// digit) sums that digit of every value together with the carries from
/// the layer below; afterwards carry-only layers keep folding until a
/// single carry remains. The digit output of every layer and the last
/// carry are pinned to zero.
pub fn build_binary_lp(inst: &SubsetInstance) -> Result<GadgetLayout, ReductionError> {
    let n = inst.len();
    if n < 2 {
        return Err(ReductionError::SetTooSmall);
    }
    let largest = inst.values().iter().max().expect("values are nonempty");
    let bits = largest.bits();
    let power_of_two = (largest & &(largest - BigInt::one())).is_zero();
    let bit_layers = if power_of_two { bits } else { bits + 1 };

    let mut builder = LayoutBuilder {
        columns: (1..=n)
            .map(|index| ColumnRole::IntegerVar { index })
            .collect(),
        rows: Vec::new(),
        adders: Vec::new(),
    };
    let mut carries: Vec<usize> = Vec::new();
    let mut layer_digits: Vec<usize> = Vec::new();
    let mut layer = 0usize;
    loop {
        let mut inputs: Vec<AdderInput> = Vec::new();
        if (layer as u64) < bit_layers {
            for (i, value) in inst.values().iter().enumerate() {
                inputs.push(AdderInput {
                    column: i,
                    coeff: u8::from(value.bit(layer as u64)),
                });
            }
        } else if carries.len() < 2 {
            break;
        }
        layer += 1;
        inputs.extend(
            carries
                .drain(..)
                .map(|column| AdderInput { column, coeff: 1 }),
        );
        let (new_carries, digit) = builder.chain_layer(layer, &inputs);
        carries = new_carries;
        layer_digits.push(digit);
    }
    assert_eq!(carries.len(), 1, "exactly one carry must remain at the top");

    let mut forced_zero_rows = Vec::new();
    for column in layer_digits.into_iter().chain(carries) {
        forced_zero_rows.push(builder.rows.len());
        builder.rows.push(vec![(column, 1)]);
    }

    Ok(GadgetLayout::from_parts(
        inst.values().to_vec(),
        builder.columns,
        builder.rows,
        forced_zero_rows,
        builder.adders,
        layer,
    ))
}

/// Fills the non-integer columns from a sign vector on the integer
/// columns, always taking the carry-free adder mode. Returns the full
/// assignment when every pinned column lands on zero, `None` otherwise,
/// which happens exactly when the weighted sum of the sign vector is
/// nonzero.
pub fn forward_propagate(
    layout: &GadgetLayout,
    u: &[i8],
) -> Result<Option<Vec<i8>>, ReductionError> {
    validate_digits(u, layout.integer_count())?;
    let mut values = vec![0i8; layout.column_count()];
    values[..u.len()].copy_from_slice(u);
    for adder in layout.adders() {
        let a = values[adder.input_a.column] * adder.input_a.coeff as i8;
        let b = values[adder.input_b.column] * adder.input_b.coeff as i8;
        let (carry, sum) = primary_output(a, b).expect("propagated values stay in digit range");
        let (x1, x2, x3) = internal_wires(carry, sum);
        values[adder.x_columns[0]] = x1;
        values[adder.x_columns[1]] = x2;
        values[adder.x_columns[2]] = x3;
        values[adder.carry_column] = carry;
        values[adder.sum_column] = sum;
    }
    for column in layout.forced_columns() {
        if values[column] != 0 {
            return Ok(None);
        }
    }
    Ok(Some(values))
}

/// Reads the two equal-sum index sets off a nullspace vector: +1 entries
/// on the integer columns form the first set, -1 entries the second.
pub fn backmap_solution(
    layout: &GadgetLayout,
    mu: &[i8],
) -> Result<(Vec<usize>, Vec<usize>), ReductionError> {
    layout.check_nullspace(mu)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, &v) in mu[..layout.integer_count()].iter().enumerate() {
        match v {
            1 => plus.push(i),
            -1 => minus.push(i),
            _ => {}
        }
    }
    if plus.is_empty() && minus.is_empty() {
        return Err(ReductionError::ZeroOnIntegerColumns);
    }
    assert!(
        !plus.is_empty() && !minus.is_empty(),
        "positive values cannot cancel with a single sign"
    );
    let total =
        |indices: &[usize]| -> BigInt { indices.iter().map(|&i| layout.values()[i].clone()).sum() };
    assert_eq!(
        total(&plus),
        total(&minus),
        "recovered subsets must balance"
    );
    Ok((plus, minus))
}

/// As [`backmap_solution`], but packages the sign vector restricted to the
/// integer columns as a driver term.
pub fn backmap_term(layout: &GadgetLayout, mu: &[i8]) -> Result<DriverTerm, ReductionError> {
    backmap_solution(layout, mu)?;
    let term = crate::algebra::term_from_u(&mu[..layout.integer_count()], &[])
        .expect("a balanced sign vector forms a valid term");
    Ok(term)
}

/// Completes a sign vector on the integer columns to a full nullspace
/// vector, or reports that no completion exists. The search is layered:
/// within a layer every admissible mode chain is explored, and layers
/// communicate only through the values of the columns later layers still
/// read, so equivalent partial assignments collapse. The returned vector
/// is deterministic for a given layout and input.
pub fn complete_assignment(
    layout: &GadgetLayout,
    u: &[i8],
) -> Result<Option<Vec<i8>>, ReductionError> {
    validate_digits(u, layout.integer_count())?;
    Ok(extension_search(layout, u))
}

/// Whether a sign vector on the integer columns extends to a nullspace
/// vector. For layouts built by [`build_binary_lp`] this holds exactly
/// when the weighted sum of the sign vector is zero.
pub fn extension_exists(layout: &GadgetLayout, u: &[i8]) -> Result<bool, ReductionError> {
    Ok(complete_assignment(layout, u)?.is_some())
}

/// The first nonzero nullspace vector, scanning sign vectors on the
/// integer columns in digit order 0, 1, -1 and completing the first one
/// that extends. The all-zero sign vector is skipped: with positive
/// values it only extends to the zero vector.
pub fn find_nonzero_nullspace(layout: &GadgetLayout) -> Option<Vec<i8>> {
    for u in sign_vectors(layout.integer_count()).skip(1) {
        if let Some(mu) = extension_search(layout, &u) {
            return Some(mu);
        }
    }
    None
}

/// Every nonzero nullspace vector, found by depth-first search over all
/// column assignments with rows checked as soon as their last column is
/// set. Exponential in the column count, hence the explicit cap.
pub fn enumerate_nullspace_exhaustive(
    layout: &GadgetLayout,
    max_columns: usize,
) -> Result<Vec<Vec<i8>>, ReductionError> {
    let columns = layout.column_count();
    if columns > max_columns {
        return Err(ReductionError::EnumerationTooLarge {
            columns,
            cap: max_columns,
        });
    }
    let mut rows_by_last = vec![Vec::new(); columns];
    let mut rows_of_column = vec![Vec::new(); columns];
    for (r, row) in layout.rows().iter().enumerate() {
        let last = row
            .iter()
            .map(|&(c, _)| c)
            .max()
            .expect("rows are never empty");
        rows_by_last[last].push(r);
        for &(c, coeff) in row {
            rows_of_column[c].push((r, coeff));
        }
    }
    let mut search = ExhaustiveSearch {
        rows_by_last,
        rows_of_column,
        partial: vec![0i64; layout.row_count()],
        assignment: vec![0i8; columns],
        found: Vec::new(),
    };
    search.descend(0);
    Ok(search.found)
}

struct ExhaustiveSearch {
    rows_by_last: Vec<Vec<usize>>,
    rows_of_column: Vec<Vec<(usize, u8)>>,
    partial: Vec<i64>,
    assignment: Vec<i8>,
    found: Vec<Vec<i8>>,
}

impl ExhaustiveSearch {
    fn descend(&mut self, column: usize) {
        if column == self.assignment.len() {
            if self.assignment.iter().any(|&v| v != 0) {
                self.found.push(self.assignment.clone());
            }
            return;
        }
        for digit in [0i8, 1, -1] {
            self.assignment[column] = digit;
            for i in 0..self.rows_of_column[column].len() {
                let (row, coeff) = self.rows_of_column[column][i];
                self.partial[row] += coeff as i64 * digit as i64;
            }
            let closed_ok = self.rows_by_last[column]
                .iter()
                .all(|&row| self.partial[row] == 0);
            if closed_ok {
                self.descend(column + 1);
            }
            for i in 0..self.rows_of_column[column].len() {
                let (row, coeff) = self.rows_of_column[column][i];
                self.partial[row] -= coeff as i64 * digit as i64;
            }
        }
        self.assignment[column] = 0;
    }
}

/// Interface after each layer: the columns produced up to that layer that
/// a later layer still reads. Detached inputs (coefficient zero) do not
/// count as reads.
fn interface_columns(layout: &GadgetLayout) -> Vec<Vec<usize>> {
    let mut produced_in: HashMap<usize, usize> = HashMap::new();
    for adder in layout.adders() {
        for column in adder.output_columns() {
            produced_in.insert(column, adder.layer);
        }
    }
    let mut interfaces: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); layout.layer_count()];
    for adder in layout.adders() {
        for input in [adder.input_a, adder.input_b] {
            if input.coeff == 0 {
                continue;
            }
            let Some(&source) = produced_in.get(&input.column) else {
                continue;
            };
            assert!(
                source <= adder.layer,
                "inputs cannot come from later layers"
            );
            for l in source..adder.layer {
                interfaces[l - 1].insert(input.column);
            }
        }
    }
    interfaces
        .into_iter()
        .map(|set| set.into_iter().collect())
        .collect()
}

fn adders_by_layer(layout: &GadgetLayout) -> Vec<Vec<&AdderRecord>> {
    let mut groups: Vec<Vec<&AdderRecord>> = vec![Vec::new(); layout.layer_count()];
    for adder in layout.adders() {
        groups[adder.layer - 1].push(adder);
    }
    for group in &groups {
        assert!(!group.is_empty(), "every layer owns at least one adder");
        for (i, adder) in group.iter().enumerate() {
            assert_eq!(adder.position, i + 1, "layer positions must be contiguous");
        }
    }
    groups
}

fn input_value(
    layout: &GadgetLayout,
    u: &[i8],
    known: &HashMap<usize, i8>,
    input: AdderInput,
) -> i8 {
    if input.coeff == 0 {
        return 0;
    }
    let base = if input.column < layout.integer_count() {
        u[input.column]
    } else {
        *known
            .get(&input.column)
            .unwrap_or_else(|| panic!("column {} read before it is produced", input.column))
    };
    base * input.coeff as i8
}

type LayerTrace = BTreeMap<Vec<i8>, (Vec<i8>, Vec<(i8, i8)>)>;

struct ChainSearch<'a> {
    layout: &'a GadgetLayout,
    group: &'a [&'a AdderRecord],
    u: &'a [i8],
    forced: &'a HashSet<usize>,
    out_interface: &'a [usize],
    /// When the layer is a chain with a pinned digit, every valid mode
    /// path has total carry `target`, so prefixes that cannot reach it
    /// any more are cut.
    carry_target: Option<i32>,
}

impl ChainSearch<'_> {
    fn descend(
        &self,
        step: usize,
        carry_sum: i32,
        known: &mut HashMap<usize, i8>,
        choices: &mut Vec<(i8, i8)>,
        in_state: &[i8],
        next: &mut LayerTrace,
    ) {
        if step == self.group.len() {
            let out: Vec<i8> = self.out_interface.iter().map(|c| known[c]).collect();
            next.entry(out)
                .or_insert_with(|| (in_state.to_vec(), choices.clone()));
            return;
        }
        let adder = self.group[step];
        let a = input_value(self.layout, self.u, known, adder.input_a);
        let b = input_value(self.layout, self.u, known, adder.input_b);
        for (carry, sum, _) in adder_outputs(a, b).expect("chain values stay in digit range") {
            if let Some(target) = self.carry_target {
                let remaining = (self.group.len() - step - 1) as i32;
                if (target - carry_sum - carry as i32).abs() > remaining {
                    continue;
                }
            }
            let (x1, x2, x3) = internal_wires(carry, sum);
            let outputs = [
                (adder.x_columns[0], x1),
                (adder.x_columns[1], x2),
                (adder.x_columns[2], x3),
                (adder.carry_column, carry),
                (adder.sum_column, sum),
            ];
            if outputs
                .iter()
                .any(|&(column, value)| value != 0 && self.forced.contains(&column))
            {
                continue;
            }
            for &(column, value) in &outputs {
                known.insert(column, value);
            }
            choices.push((carry, sum));
            self.descend(
                step + 1,
                carry_sum + carry as i32,
                known,
                choices,
                in_state,
                next,
            );
            choices.pop();
            for &(column, _) in &outputs {
                known.remove(&column);
            }
        }
    }
}

/// The inputs a chain layer reads from outside itself: the first adder's
/// left input and every adder's right input. `None` when the layer is not
/// a simple chain.
fn chain_external_inputs(group: &[&AdderRecord]) -> Option<Vec<AdderInput>> {
    for window in group.windows(2) {
        let a = window[1].input_a;
        if a.column != window[0].sum_column || a.coeff != 1 {
            return None;
        }
    }
    let mut externals = vec![group[0].input_a];
    externals.extend(group.iter().map(|adder| adder.input_b));
    Some(externals)
}

fn extension_search(layout: &GadgetLayout, u: &[i8]) -> Option<Vec<i8>> {
    let forced: HashSet<usize> = layout.forced_columns().into_iter().collect();
    let interfaces = interface_columns(layout);
    let groups = adders_by_layer(layout);
    let layer_total = groups.len();

    let mut history: Vec<LayerTrace> = Vec::with_capacity(layer_total);
    let mut frontier: BTreeSet<Vec<i8>> = BTreeSet::new();
    frontier.insert(Vec::new());
    for (li, group) in groups.iter().enumerate() {
        let in_interface: &[usize] = if li == 0 { &[] } else { &interfaces[li - 1] };
        let out_interface: &[usize] = &interfaces[li];
        let externals = chain_external_inputs(group);
        let digit_pinned = forced.contains(&group.last().expect("nonempty layer").sum_column);
        let mut next = LayerTrace::new();
        for state in &frontier {
            let mut known: HashMap<usize, i8> = in_interface
                .iter()
                .copied()
                .zip(state.iter().copied())
                .collect();
            let carry_target = match (&externals, digit_pinned) {
                (Some(inputs), true) => {
                    // The chain telescopes to: sum of inputs equals twice
                    // the total carry plus the pinned digit, so the total
                    // carry is determined. An odd input sum cannot close.
                    let total: i32 = inputs
                        .iter()
                        .map(|&input| input_value(layout, u, &known, input) as i32)
                        .sum();
                    if total.rem_euclid(2) != 0 {
                        continue;
                    }
                    let target = total / 2;
                    if target.unsigned_abs() as usize > group.len() {
                        continue;
                    }
                    Some(target)
                }
                _ => None,
            };
            let search = ChainSearch {
                layout,
                group,
                u,
                forced: &forced,
                out_interface,
                carry_target,
            };
            search.descend(0, 0, &mut known, &mut Vec::new(), state, &mut next);
        }
        if next.is_empty() {
            return None;
        }
        frontier = next.keys().cloned().collect();
        history.push(next);
    }

    let mut per_layer: Vec<Vec<(i8, i8)>> = vec![Vec::new(); layer_total];
    let mut state = history
        .last()
        .expect("at least one layer")
        .keys()
        .next()
        .expect("nonempty frontier")
        .clone();
    for li in (0..layer_total).rev() {
        let (previous, choices) = history[li][&state].clone();
        per_layer[li] = choices;
        state = previous;
    }

    let mut mu = vec![0i8; layout.column_count()];
    mu[..u.len()].copy_from_slice(u);
    for (li, group) in groups.iter().enumerate() {
        assert_eq!(group.len(), per_layer[li].len());
        for (adder, &(carry, sum)) in group.iter().zip(&per_layer[li]) {
            let (x1, x2, x3) = internal_wires(carry, sum);
            mu[adder.x_columns[0]] = x1;
            mu[adder.x_columns[1]] = x2;
            mu[adder.x_columns[2]] = x3;
            mu[adder.carry_column] = carry;
            mu[adder.sum_column] = sum;
        }
    }
    layout
        .check_nullspace(&mu)
        .expect("a completed extension lies in the nullspace");
    Some(mu)
}
