//! Numerical building blocks: compensated sums, running statistics,
//! quadrature rules and seeded random streams.

mod quad;
mod rng;
mod stats;
mod sum;

pub use quad::{adaptive_gk15, gauss_legendre_pieces, QuadResult};
pub use rng::{stream_rng, StreamRng};
pub use stats::{Estimate, MeanAccumulator, Method};
pub use sum::{pairwise_abs_diff_sum, NeumaierSum};
