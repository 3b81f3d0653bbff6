//! A fully worked instance of the adder encoding, small enough to audit
//! by hand: the value list {1, 2} would be trivial, so this uses {1, 1, 2}
//! with the minimal wiring of two adder cells.
//!
//! The first cell adds the two weight-one values; its carry holds the twos
//! digit and flows into the second cell together with the third value.
//! The ones digit, the final carry, and the twos digit are pinned to zero,
//! so a nullspace vector over {-1, 0, 1} restricted to the first three
//! columns is exactly a signed split of the values into two equal-sum
//! groups.

use num_bigint::BigInt;

use crate::reductions::binary_lp::{AdderInput, AdderRecord, AdderWire, ColumnRole, GadgetLayout};

/// The 15 x 13 constraint matrix of the worked instance, written out
/// literally.
pub fn example_triple_matrix() -> Vec<Vec<u8>> {
    vec![
        vec![1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ]
}

/// The same instance assembled as a [`GadgetLayout`], so propagation,
/// completion, and backmapping work on it directly.
pub fn example_triple_layout() -> GadgetLayout {
    let values = vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)];
    let columns = vec![
        ColumnRole::IntegerVar { index: 1 },
        ColumnRole::IntegerVar { index: 2 },
        ColumnRole::IntegerVar { index: 3 },
        ColumnRole::AdderInternal {
            adder: 1,
            wire: AdderWire::X1,
        },
        ColumnRole::AdderInternal {
            adder: 1,
            wire: AdderWire::X2,
        },
        ColumnRole::AdderInternal {
            adder: 1,
            wire: AdderWire::X3,
        },
        ColumnRole::Carry { layer: 1, index: 1 },
        ColumnRole::Sum { layer: 1, index: 1 },
        ColumnRole::AdderInternal {
            adder: 2,
            wire: AdderWire::X1,
        },
        ColumnRole::AdderInternal {
            adder: 2,
            wire: AdderWire::X2,
        },
        ColumnRole::AdderInternal {
            adder: 2,
            wire: AdderWire::X3,
        },
        ColumnRole::Carry { layer: 2, index: 1 },
        ColumnRole::Sum { layer: 2, index: 1 },
    ];
    let rows = vec![
        vec![(0, 1), (1, 1), (3, 1), (4, 1), (5, 1)],
        vec![(3, 1), (5, 1), (6, 1), (7, 1)],
        vec![(4, 1), (5, 1), (6, 1), (7, 1)],
        vec![(3, 1), (6, 1)],
        vec![(4, 1), (6, 1)],
        vec![(5, 1), (7, 1)],
        vec![(2, 1), (6, 1), (8, 1), (9, 1), (10, 1)],
        vec![(8, 1), (10, 1), (11, 1), (12, 1)],
        vec![(9, 1), (10, 1), (11, 1), (12, 1)],
        vec![(8, 1), (11, 1)],
        vec![(9, 1), (11, 1)],
        vec![(10, 1), (12, 1)],
        vec![(7, 1)],
        vec![(11, 1)],
        vec![(12, 1)],
    ];
    let forced_zero_rows = vec![12, 13, 14];
    let adders = vec![
        AdderRecord {
            layer: 1,
            position: 1,
            input_a: AdderInput {
                column: 0,
                coeff: 1,
            },
            input_b: AdderInput {
                column: 1,
                coeff: 1,
            },
            x_columns: [3, 4, 5],
            carry_column: 6,
            sum_column: 7,
        },
        AdderRecord {
            layer: 2,
            position: 1,
            input_a: AdderInput {
                column: 2,
                coeff: 1,
            },
            input_b: AdderInput {
                column: 6,
                coeff: 1,
            },
            x_columns: [8, 9, 10],
            carry_column: 11,
            sum_column: 12,
        },
    ];
    GadgetLayout::from_parts(values, columns, rows, forced_zero_rows, adders, 2)
}

/// Nullspace witness splitting {1, 1} against {2}: the first two values
/// carry +1, the third -1, and the first adder's carry holds the twos
/// digit of their sum.
pub fn example_witness_triple() -> Vec<i8> {
    vec![1, 1, -1, -1, -1, 0, 1, 0, 0, 0, 0, 0, 0]
}

/// Nullspace witness splitting {1} against {1}: everything downstream
/// stays zero.
pub fn example_witness_pair() -> Vec<i8> {
    vec![1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::adder::adder_constraint_rows;
    use crate::reductions::binary_lp::{
        backmap_solution, find_nonzero_nullspace, forward_propagate,
    };

    #[test]
    fn layout_reproduces_the_literal_matrix() {
        let layout = example_triple_layout();
        assert_eq!(layout.to_dense(), example_triple_matrix());
        assert_eq!(layout.forced_zero_rows(), &[12, 13, 14]);
        assert_eq!(layout.forced_columns(), vec![7, 11, 12]);
    }

    #[test]
    fn each_adder_block_is_a_cell_instance() {
        let matrix = example_triple_matrix();
        let project = |rows: &[usize], cols: [usize; 7]| -> Vec<Vec<u8>> {
            rows.iter()
                .map(|&r| cols.iter().map(|&c| matrix[r][c]).collect())
                .collect()
        };
        let cell = adder_constraint_rows(1, 1);
        assert_eq!(project(&[0, 1, 2, 3, 4, 5], [0, 1, 3, 4, 5, 6, 7]), cell);
        assert_eq!(
            project(&[6, 7, 8, 9, 10, 11], [2, 6, 8, 9, 10, 11, 12]),
            cell
        );
    }

    #[test]
    fn both_witnesses_are_annihilated() {
        let layout = example_triple_layout();
        layout.check_nullspace(&example_witness_triple()).unwrap();
        layout.check_nullspace(&example_witness_pair()).unwrap();
    }

    #[test]
    fn forward_propagation_reproduces_the_witnesses() {
        let layout = example_triple_layout();
        assert_eq!(
            forward_propagate(&layout, &[1, 1, -1]).unwrap(),
            Some(example_witness_triple())
        );
        assert_eq!(
            forward_propagate(&layout, &[1, -1, 0]).unwrap(),
            Some(example_witness_pair())
        );
        // An unbalanced sign vector trips a pinned digit.
        assert_eq!(forward_propagate(&layout, &[1, 1, 1]).unwrap(), None);
    }

    #[test]
    fn witnesses_map_back_to_equal_sum_subsets() {
        let layout = example_triple_layout();
        assert_eq!(
            backmap_solution(&layout, &example_witness_triple()).unwrap(),
            (vec![0, 1], vec![2])
        );
        assert_eq!(
            backmap_solution(&layout, &example_witness_pair()).unwrap(),
            (vec![0], vec![1])
        );
    }

    #[test]
    fn the_search_lands_on_the_triple_witness() {
        let layout = example_triple_layout();
        assert_eq!(
            find_nonzero_nullspace(&layout),
            Some(example_witness_triple())
        );
    }
}
