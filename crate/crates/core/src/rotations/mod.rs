//! Path-cycle systems, chord rotations and the 2-factor search built on them.
//!
//! A system is at most one properly coloured path plus disjoint properly
//! coloured cycles. A rotation along a chord from a path end rewires the
//! system on the same vertex set and moves that end; repeated rotations on
//! both ends eventually expose an end pair that closes into a cycle.

mod expansion;
mod rotate;
mod system;
mod two_factor;

pub use expansion::{expand_end_colours, EndState, Expansion, ExpansionOptions, TwoColourWitness};
pub use rotate::{
    apply_sequence, combine_sequences, find_chords, is_spread_out, points_spread_out, rotate, rotate_towards,
    rotation_outcomes, Chord, ChordSequence, RotationStep, DEFAULT_SPREAD,
};
pub use system::{Params, PathCycleSystem, Side, Slot};
pub use two_factor::{
    find_pc_two_factor, maximal_path_cycle, maximal_path_cycle_with, TwoFactorConfig, TwoFactorOutcome,
    TwoFactorReport, TwoFactorStats, DEFAULT_GREEDY_RESTARTS,
};
