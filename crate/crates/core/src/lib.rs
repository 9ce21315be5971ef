//! Scattering of a quantum particle by an oscillating delta barrier
//! `V(x, t) = V0 δ(x) (1 + ε cos Ωt)`.
//!
//! Three independent routes to the sideband amplitudes:
//!
//! * [`fs`]: the truncated tridiagonal Floquet system (full solution),
//! * [`ts`]: the 3×3 Toeplitz closure with exponential tails,
//! * [`tdse`]: direct propagation of a Gaussian packet in a box, in the
//!   instantaneous eigenbasis, with an adaptive Cash–Karp integrator.
//!
//! [`analysis`] turns them into time scales: the sideband asymmetry and its
//! slope in Ω, the delta-barrier time `2ħ³/(mV0²)`, and the rectangular
//! barrier reference times.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod fs;
pub mod io;
pub mod ode;
pub mod params;
pub mod roots;
pub mod solution;
pub mod tdse;
pub mod tridiag;
pub mod ts;

pub use channel::{channel, classify_regime, static_transmission, Channel, ChannelKind, Regime, RegimeClass};
pub use error::{Error, Result};
pub use fs::{converge_truncation, solve_fs, TruncationOptions};
pub use params::{BarrierParams, Units};
pub use solution::{Method, SidebandSolution};
pub use ts::{decay_exponents, solve_ts, DecayExponents};
