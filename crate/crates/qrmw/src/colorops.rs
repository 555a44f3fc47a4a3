//! Register-level image operators: color complement (global, per-channel,
//! and bit-masked), channel exchange, and position exchange.
//!
//! Every operator is a basis-state permutation built from X gates and
//! controlled flips, so each has two equivalent realizations: a direct
//! rewrite of the symbolic color table and a circuit acting on the
//! prepared state. Both are provided; tests hold them to agreement.
//!
//! Masks live in value space: bit `j` of a mask refers to the register bit
//! of weight `2^j`. A selector, where allowed, fixes the *non-masked* bits
//! of the same register, turning the plain X layer into controlled flips
//! that fire only on matching channels or positions.

use num_traits::Float;

use crate::circuit::{pattern_controls, Circuit, Gate};
use crate::error::{Error, Result};
use crate::geometry::ImageGeometry;
use crate::state::QrmwState;

/// Parsed description of one register operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSpec {
    /// Complement masked color bits of every cell (`cc[:mask]`).
    CompleteColor { mask: u64 },
    /// Complement masked color bits of cells on one channel
    /// (`pc:<channel>[:mask]`).
    PartialColor { channel: u64, mask: u64 },
    /// XOR the channel label with `mask`, optionally only where the
    /// non-masked channel bits equal `selector` (`ch[:mask[:selector]]`).
    ChannelExchange { mask: u64, selector: Option<u64> },
    /// XOR the position bits (row bits then column bits) with `mask`,
    /// optionally gated on `selector` (`po[:mask[:selector]]`).
    PositionExchange { mask: u64, selector: Option<u64> },
}

impl OperatorSpec {
    /// Checks mask and selector against the register they act on: masks
    /// must be nonzero and in range, selectors must be disjoint from the
    /// mask and in range, and a partial-color channel must name one of the
    /// `2^b` channel slots.
    pub fn validate(&self, geometry: &ImageGeometry) -> Result<()> {
        match *self {
            OperatorSpec::CompleteColor { mask } => {
                check_register_mask(mask, geometry.max_color(), "color")
            }
            OperatorSpec::PartialColor { channel, mask } => {
                if channel >= geometry.channel_slots() {
                    return Err(Error::InvalidOperatorSpec(format!(
                        "channel {channel} out of range for {} slots",
                        geometry.channel_slots()
                    )));
                }
                check_register_mask(mask, geometry.max_color(), "color")
            }
            OperatorSpec::ChannelExchange { mask, selector } => {
                let full = geometry.channel_slots() - 1;
                check_register_mask(mask, full, "channel")?;
                check_selector(selector, mask, full, "channel")
            }
            OperatorSpec::PositionExchange { mask, selector } => {
                let full = geometry.rows() * geometry.cols() - 1;
                check_register_mask(mask, full, "position")?;
                check_selector(selector, mask, full, "position")
            }
        }
    }
}

fn check_register_mask(mask: u64, register_full: u64, register: &str) -> Result<()> {
    if mask == 0 {
        return Err(Error::EmptyMask);
    }
    if mask & !register_full != 0 {
        return Err(Error::InvalidOperatorSpec(format!(
            "mask {mask:#b} has bits outside the {register} register"
        )));
    }
    Ok(())
}

fn check_selector(
    selector: Option<u64>,
    mask: u64,
    register_full: u64,
    register: &str,
) -> Result<()> {
    let Some(sel) = selector else { return Ok(()) };
    if sel & !register_full != 0 {
        return Err(Error::InvalidOperatorSpec(format!(
            "selector {sel:#b} has bits outside the {register} register"
        )));
    }
    if sel & mask != 0 {
        return Err(Error::InvalidOperatorSpec(format!(
            "selector {sel:#b} overlaps mask {mask:#b}"
        )));
    }
    Ok(())
}

/// Complements the masked color bits of every table entry (full mask:
/// `f → 2^q − 1 − f`). Unused channel slots are rewritten too — the
/// circuit's X gates do not see channel bounds — but decode drops them.
pub fn apply_ucc<T: Float>(state: &QrmwState<T>, mask: u64) -> Result<QrmwState<T>> {
    apply_operator(state, &OperatorSpec::CompleteColor { mask })
}

/// Complements masked color bits only where the channel register equals
/// `channel`; all other entries are untouched.
pub fn apply_upc<T: Float>(state: &QrmwState<T>, channel: u64, mask: u64) -> Result<QrmwState<T>> {
    apply_operator(state, &OperatorSpec::PartialColor { channel, mask })
}

/// Relabels channels by `λ → λ XOR mask` (full mask: `λ → 2^b − 1 − λ`);
/// with a selector, only channels whose non-masked bits match it move.
pub fn apply_uch<T: Float>(
    state: &QrmwState<T>,
    mask: u64,
    selector: Option<u64>,
) -> Result<QrmwState<T>> {
    apply_operator(state, &OperatorSpec::ChannelExchange { mask, selector })
}

/// Relocates pixels by XOR on the position bits (full mask: a 180° point
/// reflection, `(y,x) → (2^n−1−y, 2^m−1−x)`); with a selector, only
/// matching rows/columns move.
pub fn apply_upo<T: Float>(
    state: &QrmwState<T>,
    mask: u64,
    selector: Option<u64>,
) -> Result<QrmwState<T>> {
    apply_operator(state, &OperatorSpec::PositionExchange { mask, selector })
}

/// Applies any operator to the symbolic state, returning the rewritten
/// state.
pub fn apply_operator<T: Float>(state: &QrmwState<T>, spec: &OperatorSpec) -> Result<QrmwState<T>> {
    let g = *state.geometry();
    spec.validate(&g)?;
    let pos_bits = g.row_bits() + g.col_bits();
    let table = match *spec {
        OperatorSpec::CompleteColor { mask } => state.table().iter().map(|&v| v ^ mask).collect(),
        OperatorSpec::PartialColor { channel, mask } => state
            .table()
            .iter()
            .enumerate()
            .map(|(slot, &v)| {
                if slot as u64 >> pos_bits == channel {
                    v ^ mask
                } else {
                    v
                }
            })
            .collect(),
        OperatorSpec::ChannelExchange { mask, selector } => {
            // without a selector every slot moves; with one, only slots
            // whose non-masked channel bits spell the selector
            let match_mask = selector.map_or(0, |_| !mask & (g.channel_slots() - 1));
            relabel_slots(
                state.table(),
                mask << pos_bits,
                match_mask << pos_bits,
                selector.unwrap_or(0) << pos_bits,
            )
        }
        OperatorSpec::PositionExchange { mask, selector } => {
            let match_mask = selector.map_or(0, |_| !mask & (g.rows() * g.cols() - 1));
            relabel_slots(state.table(), mask, match_mask, selector.unwrap_or(0))
        }
    };
    Ok(QrmwState::from_parts(g, table, state.amplitude()))
}

/// Moves each table entry whose slot matches `match_val` on `match_mask`
/// to `slot XOR shift`; the shift never touches match bits, so matching
/// slots swap in pairs and the result is a permutation of the table.
fn relabel_slots(table: &[u64], shift: u64, match_mask: u64, match_val: u64) -> Vec<u64> {
    let mut out = vec![0u64; table.len()];
    for (slot, &v) in table.iter().enumerate() {
        let s = slot as u64;
        let dst = if s & match_mask == match_val {
            s ^ shift
        } else {
            s
        };
        out[dst as usize] = v;
    }
    out
}

/// Synthesizes the circuit realization: X gates on the masked register
/// bits for unconditioned forms; controlled flips with the selector (or,
/// for partial color, the channel value) spelled out on the controlling
/// qubits otherwise.
pub fn operator_to_circuit(spec: &OperatorSpec, geometry: &ImageGeometry) -> Result<Circuit> {
    spec.validate(geometry)?;
    let q = geometry.color_bits();
    let b = geometry.channel_bits();
    let pos_bits = geometry.row_bits() + geometry.col_bits();
    let mut circuit = Circuit::new(geometry.total_qubits() as usize).expect("geometry has qubits");
    let mut flips =
        |mask: u64, width: u32, first: usize, controls: &[crate::circuit::Control]| -> Result<()> {
            for i in 0..width as usize {
                if mask >> (width as usize - 1 - i) & 1 == 1 {
                    circuit.push(Gate::controlled_flip(controls.to_vec(), first + i))?;
                }
            }
            Ok(())
        };
    match *spec {
        OperatorSpec::CompleteColor { mask } => {
            flips(mask, q, 0, &[])?;
        }
        OperatorSpec::PartialColor { channel, mask } => {
            let full = geometry.channel_slots() - 1;
            let controls = pattern_controls(full, channel, b, q as usize);
            flips(mask, q, 0, &controls)?;
        }
        OperatorSpec::ChannelExchange { mask, selector } => {
            let full = geometry.channel_slots() - 1;
            let controls = match selector {
                Some(sel) => pattern_controls(!mask & full, sel, b, q as usize),
                None => Vec::new(),
            };
            flips(mask, b, q as usize, &controls)?;
        }
        OperatorSpec::PositionExchange { mask, selector } => {
            let full = geometry.rows() * geometry.cols() - 1;
            let first = (q + b) as usize;
            let controls = match selector {
                Some(sel) => pattern_controls(!mask & full, sel, pos_bits, first),
                None => Vec::new(),
            };
            flips(mask, pos_bits, first, &controls)?;
        }
    }
    Ok(circuit)
}

/// Parses the text form used by the command line: `cc[:mask]`,
/// `pc:<channel>[:mask]`, `ch[:mask[:selector]]`, `po[:mask[:selector]]`.
/// The channel is decimal; masks and selectors are binary strings read
/// MSB-first (`cc:10000000` complements the top color bit of q = 8).
/// Omitted masks default to the full register.
pub fn parse_operator_spec(text: &str, geometry: &ImageGeometry) -> Result<OperatorSpec> {
    let mut parts = text.split(':');
    let kind = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let spec = match kind {
        "cc" => {
            let mask = optional_bits(&rest, 0, geometry.max_color())?;
            expect_len(text, &rest, 1)?;
            OperatorSpec::CompleteColor { mask }
        }
        "pc" => {
            let channel = rest
                .first()
                .ok_or_else(|| {
                    Error::InvalidOperatorSpec(format!("`{text}` is missing the channel"))
                })?
                .parse()
                .map_err(|_| {
                    Error::InvalidOperatorSpec(format!("`{text}` has a non-decimal channel"))
                })?;
            let mask = optional_bits(&rest, 1, geometry.max_color())?;
            expect_len(text, &rest, 2)?;
            OperatorSpec::PartialColor { channel, mask }
        }
        "ch" => {
            let mask = optional_bits(&rest, 0, geometry.channel_slots() - 1)?;
            let selector = rest.get(1).map(|s| parse_bits(s)).transpose()?;
            expect_len(text, &rest, 2)?;
            OperatorSpec::ChannelExchange { mask, selector }
        }
        "po" => {
            let mask = optional_bits(&rest, 0, geometry.rows() * geometry.cols() - 1)?;
            let selector = rest.get(1).map(|s| parse_bits(s)).transpose()?;
            expect_len(text, &rest, 2)?;
            OperatorSpec::PositionExchange { mask, selector }
        }
        other => {
            return Err(Error::InvalidOperatorSpec(format!(
                "unknown operator `{other}` (expected cc, pc, ch, or po)"
            )));
        }
    };
    spec.validate(geometry)?;
    Ok(spec)
}

fn optional_bits(rest: &[&str], index: usize, default: u64) -> Result<u64> {
    match rest.get(index) {
        Some(s) => parse_bits(s),
        None => Ok(default),
    }
}

fn parse_bits(s: &str) -> Result<u64> {
    u64::from_str_radix(s, 2)
        .map_err(|_| Error::InvalidOperatorSpec(format!("`{s}` is not a binary bit string")))
}

fn expect_len(text: &str, rest: &[&str], max: usize) -> Result<()> {
    if rest.len() > max {
        return Err(Error::InvalidOperatorSpec(format!(
            "`{text}` has trailing fields"
        )));
    }
    Ok(())
}
