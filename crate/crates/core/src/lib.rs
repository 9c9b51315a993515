//! Finite-dimensional quantum measurement theory.
//!
//! Effects and their sequential product, states and conditioning, observables
//! (POVMs) and conditioned observables, instruments and the three competing
//! joint-probability definitions, unitary measurement models and their
//! dilation, plus closed-form qubit formulas used as cross-checks.
//!
//! Every fallible operation takes a [`Tolerance`] and returns [`Result`].

pub mod effect;
pub mod error;
pub mod instrument;
pub mod interchange;
pub mod linalg;
pub mod model;
pub mod observable;
pub mod qubit;
pub mod random;
pub mod state;

pub use effect::Effect;
pub use error::{Error, Result};
pub use instrument::{Instrument, JointMethod, QuantumOperation};
pub use linalg::{ComplexMatrix, Tolerance, C64};
pub use model::MeasurementModel;
pub use observable::{Observable, ProbDistribution};
pub use qubit::Direction;
pub use state::{PartialState, State};
