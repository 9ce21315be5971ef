//! Direct time-dependent simulation: a Gaussian packet in an infinite well
//! with the oscillating delta barrier at its centre.

pub mod basis;
pub mod coupling;
pub mod propagate;

pub use basis::{
    even_condition, even_spectrum, even_spectrum_n, odd_spectrum, EvenState, InstantBasis, OddState, WellSpec,
};
pub use coupling::{adiabatic_couplings, CouplingMatrix};
pub use propagate::{
    coupling_at, crossing_time, default_levels, default_t_final, find_plateau, minimum_levels, p_right, phase_count,
    plateau_of_trace, propagate, propagate_phase_averaged, strength_rate, transmitted_probability, PacketSpec,
    PhaseAverage, Plateau, PlateauOptions, PropagationOptions, Sample, TdseRun,
};
