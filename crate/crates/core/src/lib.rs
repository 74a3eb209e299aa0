//! Moment theory of piecewise solutions of linear ODEs with polynomial
//! coefficients.
//!
//! The crate builds the moment recurrence of a differential operator,
//! checks it exactly against signals with known moments, bounds how many
//! leading moments of a nonzero signal can vanish, verifies the ODE satisfied
//! by the moment generating function, and reconstructs the jump data of a
//! signal from finitely many moments.

pub mod bounds;
pub mod concomitant;
pub mod corpus;
pub mod diffop;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod mgf;
pub mod momrec;
pub mod poly;
pub mod powersums;
pub mod ratfun;
pub mod reconstruct;
pub mod roots;
pub mod scalar;
pub mod series;

pub use bounds::{BoundReport, ConditionalBound, VanishingCount};
pub use concomitant::{c_to_jump, epsilon_direct, jump_to_c, CMatrix, JumpData};
pub use corpus::{CorpusSignal, Piece, PiecewiseSpec};
pub use diffop::{AlphaProfile, DiffOperator, Exponent, InfinityAnalysis};
pub use error::{Error, Result};
pub use laurent::{Expansion, LaurentTail};
pub use momrec::MomentSequence;
pub use poly::Poly;
pub use powersums::{NodeEstimate, NodeRecoveryConfig, PowerSumModel};
pub use ratfun::RatFun;
pub use reconstruct::{Reconstruction, ReconstructionConfig};
pub use scalar::{Rat, Scalar};
