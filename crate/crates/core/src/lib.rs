//! Uniform random samplers for Motzkin and Schröder lattice paths in linear
//! time with asymptotically optimal randomness, plus the exact-arithmetic
//! verification oracles and the entropy/time metering bench that back them.
//!
//! The crate is organized around the spec of each subsystem:
//!
//! * [`paths`] — step alphabet, instrumented path container, structural
//!   rewrites (unfold/fold, flip, lift).
//! * [`exact`] / [`random`] — exact arithmetic in Q(√2) and the metered
//!   fair-bit source with exact discrete sampling primitives.
//! * [`motzkin`] / [`schroeder`] — the recovery samplers.
//! * [`florentine`] — the anticipated-rejection baseline.
//! * [`oracles`] — exhaustive enumeration, counting, symbolic distributions
//!   of the recovery primitives, full choice-tree sampler distributions, and
//!   exact first-try success probabilities.
//! * [`metrics`] — the benchmark harness (time factor, entropy factor,
//!   restart statistics) and the limit-law simulation it is compared to.

pub mod exact;
pub mod florentine;
pub mod metrics;
pub mod motzkin;
pub mod oracles;
pub mod paths;
pub mod random;
pub mod sampler;
pub mod schroeder;
pub mod verify;

pub use exact::Exact;
pub use florentine::BaselineModel;
pub use paths::{Model, Path, PathClass, Step};
pub use random::{BitSource, Meter, RandomDraws};
pub use sampler::{Sample, SamplerSpec};
