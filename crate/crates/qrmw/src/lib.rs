//! Multi-wavelength quantum image toolkit.
//!
//! Images with several wavelength channels are held in a single
//! superposed register triple — color code, channel index, and pixel
//! position all live in computational basis states, so color retrieval is
//! exact rather than statistical. The crate covers the full round trip at
//! desk scale:
//!
//! - [`geometry`] / [`image`]: register layout bookkeeping and the
//!   classical image container with its text and PPM interchange formats.
//! - [`state`]: the symbolic encoded state — color table plus uniform
//!   amplitude — with exact pixel retrieval and decoding.
//! - [`circuit`]: a small gate IR (H, X, multi-controlled X with signed
//!   controls), preparation-circuit synthesis, operator counting, and a
//!   deterministic text format.
//! - [`compress`]: merging equal-color cells into don't-care implicants to
//!   shrink the preparation circuit, with exact (minimum disjoint cover)
//!   and column-grouping minimizers.
//! - [`colorops`]: color complement, per-channel complement, channel
//!   exchange, and position exchange, each as both a symbolic rewrite and
//!   a circuit.
//! - [`sim`]: a dense statevector simulator used as the oracle that every
//!   synthesized circuit prepares the state it should.
//! - [`costs`]: closed-form register and operand counts for comparing
//!   against neighboring image models.
//!
//! Floating-point scalars are generic via [`num_traits::Float`]; the
//! [`QrmwState64`]/[`StateVector64`] aliases (and their `32` variants)
//! pick concrete precisions at the crate root.

pub mod circuit;
pub mod colorops;
pub mod compress;
pub mod costs;
pub mod error;
pub mod geometry;
pub mod image;
pub mod samples;
pub mod sim;
pub mod state;

pub use circuit::{Circuit, Control, CountReport, Gate, PrepMode};
pub use colorops::OperatorSpec;
pub use compress::{CompressMode, CompressionReport, Implicant};
pub use costs::{Model, ModelCostReport};
pub use error::{Error, Result};
pub use geometry::{ImageGeometry, PixelAddress};
pub use image::ClassicalImage;
pub use sim::StateVector;
pub use state::QrmwState;

/// Double-precision symbolic state.
pub type QrmwState64 = state::QrmwState<f64>;
/// Single-precision symbolic state.
pub type QrmwState32 = state::QrmwState<f32>;
/// Double-precision dense statevector.
pub type StateVector64 = sim::StateVector<f64>;
/// Single-precision dense statevector.
pub type StateVector32 = sim::StateVector<f32>;
