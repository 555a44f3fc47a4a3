//! Symbolic quantum state of an encoded image.
//!
//! Because color codes live in basis states, the full superposition is
//! determined by the color table plus one uniform amplitude. The state is
//! stored that way — one `u64` per channel slot and a single scalar — and
//! retrieval is an exact lookup rather than a sampling procedure.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{ImageGeometry, PixelAddress};
use crate::image::ClassicalImage;

/// Basis-state image superposition: a total color table over all
/// `2^(b+n+m)` channel/position addresses and the shared amplitude
/// `1/sqrt(2^(b+n+m))`.
///
/// Slots `lambda >= cn` exist in the superposition and carry color 0.
#[derive(Debug, Clone, PartialEq)]
pub struct QrmwState<T> {
    geometry: ImageGeometry,
    table: Vec<u64>,
    amplitude: T,
}

impl<T: Float> QrmwState<T> {
    /// Encodes a classical image; the prepared state is fully determined by
    /// the color function, so no circuit is involved here.
    pub fn encode(image: &ClassicalImage) -> Self {
        let g = *image.geometry();
        let mut table = vec![0u64; g.slot_count()];
        for (addr, value) in image.cells() {
            table[g
                .slot_index(addr)
                .expect("image addresses are slot addresses")] = value;
        }
        QrmwState {
            geometry: g,
            table,
            amplitude: uniform_amplitude(g.address_bits()),
        }
    }

    /// Assembles a state from an already-validated table (register
    /// operators permute or rewrite the table without re-encoding).
    pub(crate) fn from_parts(geometry: ImageGeometry, table: Vec<u64>, amplitude: T) -> Self {
        debug_assert_eq!(table.len(), geometry.slot_count());
        QrmwState {
            geometry,
            table,
            amplitude,
        }
    }

    pub fn geometry(&self) -> &ImageGeometry {
        &self.geometry
    }

    /// The uniform amplitude `1/sqrt(2^(b+n+m))`.
    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// Color table over all channel slots, in slot-index order.
    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Deterministic pixel readout; colors are exact because they occupy
    /// basis states. `addr.lambda` ranges over all `2^b` slots.
    pub fn retrieve_pixel(&self, addr: PixelAddress) -> Result<u64> {
        Ok(self.table[self.geometry.slot_index(addr)?])
    }

    /// Reconstructs the classical image, dropping slots `lambda >= cn`.
    pub fn decode(&self) -> ClassicalImage {
        let g = self.geometry;
        let mut image = ClassicalImage::new(g).expect("state geometry fits an image");
        for y in 0..g.rows() {
            for x in 0..g.cols() {
                for lambda in 0..g.channel_count() {
                    let addr = PixelAddress::new(lambda, y, x);
                    let v = self.table[g.slot_index(addr).expect("in range")];
                    if v != 0 {
                        image = image.set(addr, v).expect("colors stay in range");
                    }
                }
            }
        }
        image
    }

    /// True iff the color tables are identical and the amplitudes agree
    /// within `tol`. Errors when the geometries differ.
    pub fn approx_eq(&self, other: &Self, tol: T) -> Result<bool> {
        if self.geometry != other.geometry {
            return Err(Error::GeometryMismatch);
        }
        Ok(self.table == other.table && (self.amplitude - other.amplitude).abs() <= tol)
    }
}

/// `1/sqrt(2^k)`, computed as `sqrt(0.5^k)` so each factor is exact.
pub fn uniform_amplitude<T: Float>(k: u32) -> T {
    let half = T::from(0.5).expect("0.5 is representable");
    half.powi(k as i32).sqrt()
}
