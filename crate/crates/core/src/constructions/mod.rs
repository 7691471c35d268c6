//! Constructions behind the main results, each returning replayable
//! certificates.

pub mod blocks;
pub mod diagonal;
pub mod dset;
pub mod sequences;
pub mod wss;
pub mod yspace;

pub use blocks::{block_of, dense_witness_in_am, in_a_m, in_some_block};
pub use diagonal::{diagonal_avoid_selector, xi_not_qplus, DiagonalReport, Selector};
pub use dset::{d_membership, d_status};
pub use sequences::{
    accumulation_check, closed_discrete_check, converging_sequence, gamma_preimage, no_convergence_witness,
};
pub use wss::{xinoss_certificate, yknoss_pipeline, TowerBounds};
pub use yspace::{y_not_qplus, YReport};
