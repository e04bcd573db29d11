//! Complex linear algebra, modular arithmetic and the qudit gate set.

pub mod compare;
pub mod gates;
pub mod matrix;
pub mod modular;
pub mod permgroup;
pub mod phase;
pub mod random;

pub use compare::{
    matrices_equal_up_to_phase, states_equal_up_to_phase, PhaseComparison, UpToPhase,
    DEFAULT_TOLERANCE,
};
pub use gates::{
    basis_vector, clifford_p, controlled_z, embed, fourier_c, fourier_gate, fourier_phase_gate,
    fourier_vector, pauli_gates, pauli_word, pauli_x_power, pauli_z_power, perm_gate_sc,
    permutation_matrix, phase_gate, swap_gate,
};
pub use matrix::{omega, CMatrix, C64};
pub use modular::{is_prime, modp, unit_inverse, units, ModUnit};
pub use permgroup::{
    affine_group_order, generated_group_order, sc_label_permutation, x_label_permutation,
    LabelPermutation,
};
pub use phase::PhaseVector;
pub use random::{random_phase_vector, random_state_vector, random_unitary};
