//! Basic open sets of the ideal topologies, probe families and bounded
//! density checks.

pub mod basic;
pub mod density;
pub mod probe;
pub mod symdiff;

pub use basic::{
    basic_nonempty, block_witness, find_x_member, find_y_member, member_basic, split_basic, Atom, BasicOpen,
    Sign, SubbasicConstraint, Theta,
};
pub use density::{avoid_scan, beta_refinement, d_density_witness, density_probe, nwd_probe, Target};
pub use probe::{seeded_rng, Bounds, ProbeFamily};
pub use symdiff::{symdiff_bound_check, symdiff_scan};
