//! Register geometry of a multi-wavelength image.
//!
//! An image is `2^n` rows by `2^m` columns with `cn` wavelength channels and
//! `q`-bit color codes. Channel labels live in a `b`-qubit register with
//! `b = ceil(log2 cn)`, so a state may carry up to `2^b` channel slots of
//! which only the first `cn` hold image data.

use crate::error::{Error, Result};

/// Parameter tuple `(q, cn, b, n, m)` governing register widths.
///
/// `b` is always derived from `cn`; construction through [`ImageGeometry::new`]
/// is the only way to obtain a value, which keeps the derived width honest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImageGeometry {
    q: u32,
    cn: u64,
    b: u32,
    n: u32,
    m: u32,
}

/// Largest supported register total; basis indices must fit in a `u64`.
pub const MAX_TOTAL_QUBITS: u32 = 63;

pub(crate) fn ceil_log2(v: u64) -> u32 {
    debug_assert!(v >= 1);
    64 - (v - 1).leading_zeros()
}

impl ImageGeometry {
    /// Builds a geometry from color depth `q`, channel count `cn` and
    /// position widths `n` (rows) and `m` (columns).
    pub fn new(q: u32, cn: u64, n: u32, m: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("color depth q must be >= 1".into()));
        }
        if cn == 0 {
            return Err(Error::InvalidParameter(
                "channel count cn must be >= 1".into(),
            ));
        }
        let b = ceil_log2(cn);
        let total = q as u64 + b as u64 + n as u64 + m as u64;
        if total > MAX_TOTAL_QUBITS as u64 {
            return Err(Error::InvalidParameter(format!(
                "q + b + n + m = {total} exceeds {MAX_TOTAL_QUBITS} qubits"
            )));
        }
        Ok(ImageGeometry { q, cn, b, n, m })
    }

    /// Color register width in qubits.
    pub fn color_bits(&self) -> u32 {
        self.q
    }

    /// Number of real wavelength channels.
    pub fn channel_count(&self) -> u64 {
        self.cn
    }

    /// Channel register width, `ceil(log2 cn)`.
    pub fn channel_bits(&self) -> u32 {
        self.b
    }

    /// Row register width.
    pub fn row_bits(&self) -> u32 {
        self.n
    }

    /// Column register width.
    pub fn col_bits(&self) -> u32 {
        self.m
    }

    pub fn rows(&self) -> u64 {
        1 << self.n
    }

    pub fn cols(&self) -> u64 {
        1 << self.m
    }

    /// Channel slots addressable by the channel register, `2^b >= cn`.
    pub fn channel_slots(&self) -> u64 {
        1 << self.b
    }

    pub fn total_qubits(&self) -> u32 {
        self.q + self.b + self.n + self.m
    }

    /// Combined width of the channel and position registers.
    pub fn address_bits(&self) -> u32 {
        self.b + self.n + self.m
    }

    /// Largest representable color code, `2^q - 1`.
    pub fn max_color(&self) -> u64 {
        if self.q >= 64 {
            u64::MAX
        } else {
            (1u64 << self.q) - 1
        }
    }

    /// Number of stored values, `cn * 2^(n+m)`.
    pub fn value_count(&self) -> usize {
        (self.cn << (self.n + self.m)) as usize
    }

    /// Number of channel-slot addresses, `2^(b+n+m)`.
    pub fn slot_count(&self) -> usize {
        1usize << self.address_bits()
    }

    /// Index into the dense value array for a real-channel address.
    pub fn value_index(&self, addr: PixelAddress) -> Result<usize> {
        if addr.lambda >= self.cn || addr.y >= self.rows() || addr.x >= self.cols() {
            return Err(Error::AddressOutOfRange {
                lambda: addr.lambda,
                y: addr.y,
                x: addr.x,
            });
        }
        Ok(((addr.lambda << self.n | addr.y) << self.m | addr.x) as usize)
    }

    /// Index over all `2^b` channel slots; used by the symbolic state.
    pub fn slot_index(&self, addr: PixelAddress) -> Result<usize> {
        if addr.lambda >= self.channel_slots() || addr.y >= self.rows() || addr.x >= self.cols() {
            return Err(Error::AddressOutOfRange {
                lambda: addr.lambda,
                y: addr.y,
                x: addr.x,
            });
        }
        Ok(((addr.lambda << self.n | addr.y) << self.m | addr.x) as usize)
    }

    /// Inverse of [`ImageGeometry::slot_index`].
    pub fn slot_address(&self, index: usize) -> PixelAddress {
        let index = index as u64;
        PixelAddress {
            lambda: index >> (self.n + self.m),
            y: (index >> self.m) & (self.rows() - 1),
            x: index & (self.cols() - 1),
        }
    }

    /// Checks a color code against the `q`-bit range.
    pub fn check_color(&self, value: u64) -> Result<()> {
        if value > self.max_color() {
            return Err(Error::ColorOutOfRange {
                value,
                max: self.max_color(),
            });
        }
        Ok(())
    }
}

/// A `(channel, row, column)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelAddress {
    pub lambda: u64,
    pub y: u64,
    pub x: u64,
}

impl PixelAddress {
    pub fn new(lambda: u64, y: u64, x: u64) -> Self {
        PixelAddress { lambda, y, x }
    }
}
