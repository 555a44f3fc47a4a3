//! Analytic resource comparison across basis-state and amplitude image
//! models: register widths and preparation operand counts under the
//! conventional benchmark of four channels on a `2^n × 2^n` grid.
//!
//! Step costs report the dominant operand count (the expression inside the
//! asymptotic bound) as an integer. They bound, rather than equal, the
//! measured gate tallies of the circuit module.

use crate::error::{Error, Result};
use crate::geometry::ceil_log2;

/// Image models compared by the resource formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Basis-state color with a binary channel register (this crate).
    Qrmw,
    /// Amplitude-encoded color over three angle qubits.
    Mcqi,
    /// Basis-state color with one register per channel.
    Qmcr,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Qrmw, Model::Mcqi, Model::Qmcr];

    pub fn name(&self) -> &'static str {
        match self {
            Model::Qrmw => "QRMW",
            Model::Mcqi => "MCQI",
            Model::Qmcr => "QMCR",
        }
    }
}

/// Resource figures for one model at color depth `q` and grid exponent
/// `n`: register qubits, extra working qubits, and the step-1/step-2
/// preparation operand counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelCostReport {
    pub model: Model,
    pub qubits: u64,
    /// Working qubits beyond the registers; nonzero only for QMCR.
    pub arbitrary_qubits: u64,
    pub step1_cost: u64,
    pub step2_cost: u64,
}

impl ModelCostReport {
    pub fn total_qubits(&self) -> u64 {
        self.qubits + self.arbitrary_qubits
    }
}

fn check_params(q: u64, n: u64) -> Result<()> {
    if q == 0 || n == 0 {
        return Err(Error::InvalidParameter("q and n must be >= 1".into()));
    }
    Ok(())
}

fn pow2(exp: u64) -> Result<u64> {
    if exp >= 64 {
        return Err(Error::InvalidParameter(format!(
            "2^{exp} overflows a 64-bit count"
        )));
    }
    Ok(1u64 << exp)
}

fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| Error::InvalidParameter("cost overflows a 64-bit count".into()))
}

/// Register and working qubit counts for a 4-channel `2^n × 2^n` image:
/// QRMW `q+2+2n`, MCQI `3+2n`, QMCR `4q+2n` plus `4q` working qubits.
pub fn qubit_counts(model: Model, q: u64, n: u64) -> Result<ModelCostReport> {
    check_params(q, n)?;
    let (qubits, arbitrary_qubits) = match model {
        Model::Qrmw => (q + 2 + 2 * n, 0),
        Model::Mcqi => (3 + 2 * n, 0),
        Model::Qmcr => (4 * q + 2 * n, 4 * q),
    };
    let (step1_cost, step2_cost) = prep_cost(model, q, n)?;
    Ok(ModelCostReport {
        model,
        qubits,
        arbitrary_qubits,
        step1_cost,
        step2_cost,
    })
}

/// Dominant preparation operand counts `(step1, step2)`: QRMW
/// `(q+2+2n, q·2^(2+2n))`, MCQI `(3+2n, 2^(3+4n))`, QMCR
/// `(4q+2n, q·n·2^(2+2n))`.
pub fn prep_cost(model: Model, q: u64, n: u64) -> Result<(u64, u64)> {
    check_params(q, n)?;
    match model {
        Model::Qrmw => Ok((q + 2 + 2 * n, checked_mul(q, pow2(2 + 2 * n)?)?)),
        Model::Mcqi => Ok((3 + 2 * n, pow2(3 + 4 * n)?)),
        Model::Qmcr => Ok((
            4 * q + 2 * n,
            checked_mul(checked_mul(q, n)?, pow2(2 + 2 * n)?)?,
        )),
    }
}

/// Register width for an arbitrary geometry: `q + ceil(log2 cn) + n + m`.
/// At `cn = 4, m = n` this reduces to the 4-channel-square formula.
pub fn generalized_qrmw_qubits(q: u32, cn: u64, n: u32, m: u32) -> Result<u64> {
    if q == 0 || cn == 0 {
        return Err(Error::InvalidParameter("q and cn must be >= 1".into()));
    }
    Ok(u64::from(q) + u64::from(ceil_log2(cn)) + u64::from(n) + u64::from(m))
}
