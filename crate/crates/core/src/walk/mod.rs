//! The arc-reversal walk with Grover coin: arc space, transition matrix,
//! eigenprojections and time evolution.

mod arcs;
mod spectrum;
mod state;

pub use arcs::{build_arc_space, transition_matrix, ArcSpace};
pub use spectrum::{
    entry_formula, evolve, walk_spectrum, Correspondence, ProjectionLabel, ProjectionPair,
    WalkResiduals, WalkSpectrum, TAU_WALK,
};
pub use state::{
    arc_distribution, flatness_deficit, imaginary_profile, initial_state, realness_deficit,
    ImaginaryProfile, State, STATE_NORM_TOL,
};
