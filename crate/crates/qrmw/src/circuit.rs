//! Gate-level circuit IR and preparation-circuit synthesis.
//!
//! A preparation circuit has two layers: Hadamards that spread the channel
//! and position registers into a uniform superposition, then one
//! color-setting group per addressed cell. Each group flips the color
//! register to the cell's value exactly when the channel/position registers
//! match that cell's address, which an MCX per set color bit realizes
//! directly (negative controls are first-class, so no X sandwiches are
//! needed and gate counts stay at the operator level).
//!
//! Qubit ordering is global across the crate: qubits `0..q` hold the color
//! code MSB-first, followed by `b` channel bits, `n` row bits, and `m`
//! column bits, all MSB-first.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{ImageGeometry, PixelAddress};
use crate::image::ClassicalImage;

/// Magic token opening the circuit text format.
pub const CIRCUIT_MAGIC: &str = "QCIRCv1";

/// A control terminal of a multi-controlled gate. `polarity` is `true` for
/// a positive control (fires on |1⟩) and `false` for a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn positive(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: true,
        }
    }

    pub fn negative(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: false,
        }
    }
}

/// Circuit primitive. MCX keeps its control list explicit; H and X have
/// none. Decomposition into one/two-qubit gates is out of scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H {
        target: usize,
    },
    X {
        target: usize,
    },
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
}

impl Gate {
    /// Controlled color flip: a plain X when the control set is empty.
    pub fn controlled_flip(controls: Vec<Control>, target: usize) -> Self {
        if controls.is_empty() {
            Gate::X { target }
        } else {
            Gate::Mcx { controls, target }
        }
    }

    pub fn target(&self) -> usize {
        match self {
            Gate::H { target } | Gate::X { target } | Gate::Mcx { target, .. } => *target,
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Mcx { controls, .. } => controls,
            _ => &[],
        }
    }
}

/// Ordered gate list over a fixed qubit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    total_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(total_qubits: usize) -> Result<Self> {
        if total_qubits == 0 {
            return Err(Error::InvalidParameter(
                "circuit needs at least one qubit".into(),
            ));
        }
        Ok(Circuit {
            total_qubits,
            gates: Vec::new(),
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking it against `total_qubits`: the target
    /// and every control must be in range, controls pairwise distinct, and
    /// no control may coincide with the target.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.target() >= self.total_qubits {
            return Err(Error::InvalidGate(format!(
                "target {} out of range for {} qubits",
                gate.target(),
                self.total_qubits
            )));
        }
        let controls = gate.controls();
        for (i, c) in controls.iter().enumerate() {
            if c.qubit >= self.total_qubits {
                return Err(Error::InvalidGate(format!(
                    "control {} out of range for {} qubits",
                    c.qubit, self.total_qubits
                )));
            }
            if c.qubit == gate.target() {
                return Err(Error::InvalidGate(format!(
                    "control {} coincides with the target",
                    c.qubit
                )));
            }
            if controls[..i].iter().any(|prev| prev.qubit == c.qubit) {
                return Err(Error::InvalidGate(format!("duplicate control {}", c.qubit)));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for gate in gates {
            self.push(gate)?;
        }
        Ok(())
    }

    /// Deterministic text emission: header line, then one gate per line.
    /// Identical circuits yield byte-identical output and distinct gate
    /// lists yield distinct output.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", CIRCUIT_MAGIC, self.total_qubits);
        for gate in &self.gates {
            match gate {
                Gate::H { target } => writeln!(out, "H {target}").unwrap(),
                Gate::X { target } => writeln!(out, "X {target}").unwrap(),
                Gate::Mcx { controls, target } => {
                    out.push_str("MCX");
                    for c in controls {
                        write!(out, " {}:{}", c.qubit, u8::from(c.polarity)).unwrap();
                    }
                    writeln!(out, " -> {target}").unwrap();
                }
            }
        }
        out
    }

    /// Parses the text format produced by [`Circuit::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty circuit text"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(CIRCUIT_MAGIC) {
            return Err(Error::parse(
                1,
                format!("expected `{CIRCUIT_MAGIC}` header"),
            ));
        }
        let total_qubits: usize = parts
            .next()
            .ok_or_else(|| Error::parse(1, "missing qubit count"))?
            .parse()
            .map_err(|_| Error::parse(1, "qubit count is not a number"))?;
        if parts.next().is_some() {
            return Err(Error::parse(1, "trailing tokens after header"));
        }
        let mut circuit = Circuit::new(total_qubits)
            .map_err(|_| Error::parse(1, "qubit count must be positive"))?;

        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let gate = match tokens.next().unwrap() {
                "H" => Gate::H {
                    target: parse_qubit(tokens.next(), lineno)?,
                },
                "X" => Gate::X {
                    target: parse_qubit(tokens.next(), lineno)?,
                },
                "MCX" => {
                    let mut controls = Vec::new();
                    let mut target = None;
                    while let Some(tok) = tokens.next() {
                        if tok == "->" {
                            target = Some(parse_qubit(tokens.next(), lineno)?);
                            break;
                        }
                        let (q, p) = tok.split_once(':').ok_or_else(|| {
                            Error::parse(lineno, "control must be qubit:polarity")
                        })?;
                        let qubit = q
                            .parse()
                            .map_err(|_| Error::parse(lineno, "bad control qubit"))?;
                        let polarity = match p {
                            "0" => false,
                            "1" => true,
                            _ => return Err(Error::parse(lineno, "polarity must be 0 or 1")),
                        };
                        controls.push(Control { qubit, polarity });
                    }
                    let target =
                        target.ok_or_else(|| Error::parse(lineno, "MCX line missing `->`"))?;
                    Gate::Mcx { controls, target }
                }
                other => {
                    return Err(Error::parse(lineno, format!("unknown gate `{other}`")));
                }
            };
            if tokens.next().is_some() {
                return Err(Error::parse(lineno, "trailing tokens after gate"));
            }
            circuit
                .push(gate)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
        }
        Ok(circuit)
    }
}

fn parse_qubit(token: Option<&str>, lineno: usize) -> Result<usize> {
    token
        .ok_or_else(|| Error::parse(lineno, "missing qubit index"))?
        .parse()
        .map_err(|_| Error::parse(lineno, "bad qubit index"))
}

/// Whether color-setting groups are synthesized for zero-valued cells.
/// Both modes produce identical gate lists (a zero color needs no flips);
/// they differ only in how [`count_image_ops`] tallies the group count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepMode {
    /// One group per addressed cell, including zero-valued ones.
    Strict,
    /// Groups only for nonzero-valued cells.
    SkipZero,
}

/// Operator- and gate-level tallies for a circuit or an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountReport {
    pub h_gates: u64,
    /// Number of color-setting groups (one per addressed cell, or per
    /// implicant after compression).
    pub omega_ops: u64,
    /// Controlled color flips; a zero-control flip (plain X emitted by a
    /// group with an empty control set) counts here too.
    pub mcx_gates: u64,
    pub total_gates: u64,
}

/// Synthesizes the color-setting group for one cell: one controlled flip
/// per set bit of `color`, targeting that color qubit, controlled on every
/// channel/position qubit with polarities spelling out the cell's address.
/// `color = 0` yields an empty list.
pub fn omega_gates(addr: PixelAddress, color: u64, geometry: &ImageGeometry) -> Result<Vec<Gate>> {
    geometry.slot_index(addr)?;
    geometry.check_color(color)?;
    let width = geometry.address_bits();
    let bits = (addr.lambda << geometry.row_bits() | addr.y) << geometry.col_bits() | addr.x;
    let full = if width == 0 { 0 } else { (1 << width) - 1 };
    let controls = pattern_controls(full, bits, width, geometry.color_bits() as usize);
    Ok(color_flip_gates(
        &controls,
        color,
        geometry.color_bits() as usize,
    ))
}

/// Control pattern over a register starting at `first_qubit`: one control
/// per set bit of `mask`, polarity from the matching bit of `value`, both
/// read MSB-first across `width` bits. Don't-care positions (mask bit 0)
/// get no control.
pub(crate) fn pattern_controls(
    mask: u64,
    value: u64,
    width: u32,
    first_qubit: usize,
) -> Vec<Control> {
    (0..width as usize)
        .filter(|i| mask >> (width as usize - 1 - i) & 1 == 1)
        .map(|i| Control {
            qubit: first_qubit + i,
            polarity: value >> (width as usize - 1 - i) & 1 == 1,
        })
        .collect()
}

/// One controlled flip per set bit of `color` (MSB-first over `q` color
/// qubits), all sharing `controls`. Zero color yields no gates.
pub(crate) fn color_flip_gates(controls: &[Control], color: u64, q: usize) -> Vec<Gate> {
    (0..q)
        .filter(|k| color >> (q - 1 - k) & 1 == 1)
        .map(|k| Gate::controlled_flip(controls.to_vec(), k))
        .collect()
}

/// Builds the full preparation circuit: H on every channel/position qubit,
/// then color-setting groups in channel-major, row, column order. Group
/// order is immaterial to the prepared state (each group fires on a
/// distinct address pattern), so a fixed order keeps emission
/// deterministic. Both modes return the same gate list.
pub fn build_preparation_circuit(image: &ClassicalImage, _mode: PrepMode) -> Circuit {
    let g = image.geometry();
    let q = g.color_bits() as usize;
    let mut circuit = Circuit::new(g.total_qubits() as usize).expect("geometry has qubits");
    for i in 0..g.address_bits() as usize {
        circuit.push(Gate::H { target: q + i }).expect("in range");
    }
    for (addr, value) in image.cells() {
        let gates = omega_gates(addr, value, g).expect("image cells are valid");
        circuit.extend(gates).expect("synthesized gates are valid");
    }
    circuit
}

/// Analytic tallies for an image: `h_gates = b+n+m`, one group per cell
/// (strict) or per nonzero cell (skip-zero), and one controlled flip per
/// set color bit across all cells.
pub fn count_image_ops(image: &ClassicalImage, mode: PrepMode) -> CountReport {
    let g = image.geometry();
    let h_gates = g.address_bits() as u64;
    let omega_ops = match mode {
        PrepMode::Strict => g.value_count() as u64,
        PrepMode::SkipZero => image.cells().filter(|&(_, v)| v != 0).count() as u64,
    };
    let mcx_gates: u64 = image.cells().map(|(_, v)| u64::from(v.count_ones())).sum();
    CountReport {
        h_gates,
        omega_ops,
        mcx_gates,
        total_gates: h_gates + mcx_gates,
    }
}

/// Tallies an existing gate list. A color-setting group appears in a
/// circuit as a maximal run of consecutive controlled flips sharing one
/// control list, so `omega_ops` counts those runs; H gates break runs and
/// are tallied separately.
pub fn count_circuit_ops(circuit: &Circuit) -> CountReport {
    let mut h_gates = 0u64;
    let mut mcx_gates = 0u64;
    let mut omega_ops = 0u64;
    let mut run: Option<&[Control]> = None;
    for gate in circuit.gates() {
        match gate {
            Gate::H { .. } => {
                h_gates += 1;
                run = None;
            }
            Gate::X { .. } | Gate::Mcx { .. } => {
                mcx_gates += 1;
                if run != Some(gate.controls()) {
                    omega_ops += 1;
                    run = Some(gate.controls());
                }
            }
        }
    }
    CountReport {
        h_gates,
        omega_ops,
        mcx_gates,
        total_gates: circuit.gates().len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use proptest::prelude::*;

    #[test]
    fn omega_example_two_bit_color() {
        let g = ImageGeometry::new(2, 2, 1, 1).unwrap();
        let gates = omega_gates(PixelAddress::new(1, 0, 1), 0b11, &g).unwrap();
        let expected_controls = vec![
            Control::positive(2),
            Control::negative(3),
            Control::positive(4),
        ];
        assert_eq!(gates.len(), 2);
        for (k, gate) in gates.iter().enumerate() {
            assert_eq!(gate.target(), k);
            assert_eq!(gate.controls(), expected_controls.as_slice());
        }
    }

    #[test]
    fn omega_zero_color_is_empty() {
        let g = ImageGeometry::new(8, 4, 3, 2).unwrap();
        assert!(omega_gates(PixelAddress::new(0, 0, 0), 0, &g)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn omega_full_color_has_q_gates() {
        let g = ImageGeometry::new(8, 4, 3, 2).unwrap();
        let gates = omega_gates(PixelAddress::new(2, 5, 1), 255, &g).unwrap();
        assert_eq!(gates.len(), 8);
        let targets: Vec<usize> = gates.iter().map(Gate::target).collect();
        assert_eq!(targets, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn omega_rejects_bad_inputs() {
        let g = ImageGeometry::new(2, 2, 1, 1).unwrap();
        assert!(omega_gates(PixelAddress::new(2, 0, 0), 1, &g).is_err());
        assert_eq!(
            omega_gates(PixelAddress::new(0, 0, 0), 4, &g),
            Err(Error::ColorOutOfRange { value: 4, max: 3 })
        );
    }

    #[test]
    fn omega_emits_x_when_address_register_is_empty() {
        let g = ImageGeometry::new(2, 1, 0, 0).unwrap();
        let gates = omega_gates(PixelAddress::new(0, 0, 0), 0b10, &g).unwrap();
        assert_eq!(gates, vec![Gate::X { target: 0 }]);
    }

    #[test]
    fn all_zero_image_prep_is_hadamard_layer() {
        let g = ImageGeometry::new(1, 1, 1, 1).unwrap();
        let img = ClassicalImage::new(g).unwrap();
        let circ = build_preparation_circuit(&img, PrepMode::Strict);
        assert_eq!(circ.gates().len(), 2);
        assert!(circ.gates().iter().all(|g| matches!(g, Gate::H { .. })));
    }

    #[test]
    fn demo_image_counts() {
        let img = samples::column_stripes();
        let skip = count_image_ops(&img, PrepMode::SkipZero);
        assert_eq!(skip.h_gates, 7);
        assert_eq!(skip.omega_ops, 72);
        assert_eq!(skip.mcx_gates, 72 * 8);
        assert_eq!(skip.total_gates, 7 + 576);
        let strict = count_image_ops(&img, PrepMode::Strict);
        assert_eq!(strict.omega_ops, 4 * 32);
        assert_eq!(strict.mcx_gates, 576);
    }

    #[test]
    fn four_channel_2x2_has_four_h_gates() {
        let g = ImageGeometry::new(8, 4, 1, 1).unwrap();
        let img = ClassicalImage::new(g)
            .unwrap()
            .set(PixelAddress::new(0, 0, 0), 9)
            .unwrap();
        let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
        let report = count_circuit_ops(&circ);
        assert_eq!(report.h_gates, 4);
    }

    #[test]
    fn all_distinct_nonzero_4x4_three_channel_counts_48() {
        let g = ImageGeometry::new(8, 3, 2, 2).unwrap();
        let values: Vec<u64> = (1..=48).collect();
        let img = ClassicalImage::from_values(g, values).unwrap();
        assert_eq!(count_image_ops(&img, PrepMode::SkipZero).omega_ops, 48);
    }

    #[test]
    fn circuit_counts_match_image_counts() {
        let img = samples::column_stripes();
        let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
        let from_circ = count_circuit_ops(&circ);
        let from_img = count_image_ops(&img, PrepMode::SkipZero);
        assert_eq!(from_circ.h_gates, from_img.h_gates);
        assert_eq!(from_circ.omega_ops, from_img.omega_ops);
        assert_eq!(from_circ.mcx_gates, from_img.mcx_gates);
        assert_eq!(from_circ.total_gates, 7 + 576);
    }

    #[test]
    fn modes_build_identical_gate_lists() {
        let img = samples::column_stripes();
        assert_eq!(
            build_preparation_circuit(&img, PrepMode::Strict),
            build_preparation_circuit(&img, PrepMode::SkipZero)
        );
    }

    #[test]
    fn push_validates_gates() {
        let mut c = Circuit::new(3).unwrap();
        assert!(c.push(Gate::H { target: 3 }).is_err());
        assert!(c
            .push(Gate::Mcx {
                controls: vec![Control::positive(1)],
                target: 1
            })
            .is_err());
        assert!(c
            .push(Gate::Mcx {
                controls: vec![Control::positive(1), Control::negative(1)],
                target: 0,
            })
            .is_err());
        assert!(c
            .push(Gate::Mcx {
                controls: vec![Control::positive(5)],
                target: 0
            })
            .is_err());
        assert!(c
            .push(Gate::Mcx {
                controls: vec![Control::positive(1), Control::negative(2)],
                target: 0,
            })
            .is_ok());
    }

    #[test]
    fn text_format_lines() {
        let mut c = Circuit::new(12).unwrap();
        c.push(Gate::H { target: 3 }).unwrap();
        c.push(Gate::X { target: 11 }).unwrap();
        c.push(Gate::Mcx {
            controls: vec![Control::positive(8), Control::negative(9)],
            target: 0,
        })
        .unwrap();
        assert_eq!(c.to_text(), "QCIRCv1 12\nH 3\nX 11\nMCX 8:1 9:0 -> 0\n");
    }

    #[test]
    fn demo_emission_has_seven_h_lines_and_72_groups() {
        let img = samples::column_stripes();
        let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
        let text = circ.to_text();
        let h_lines = text.lines().filter(|l| l.starts_with("H ")).count();
        assert_eq!(h_lines, 7);
        assert_eq!(count_circuit_ops(&circ).omega_ops, 72);
        // emission is reproducible byte for byte
        assert_eq!(
            text,
            build_preparation_circuit(&img, PrepMode::Strict).to_text()
        );
    }

    #[test]
    fn from_text_round_trip() {
        let img = samples::column_stripes();
        let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
        let parsed = Circuit::from_text(&circ.to_text()).unwrap();
        assert_eq!(parsed, circ);
    }

    #[test]
    fn from_text_rejects_malformed_lines() {
        assert!(Circuit::from_text("").is_err());
        assert!(Circuit::from_text("QCIRCv1 0\n").is_err());
        assert!(Circuit::from_text("NOPE 4\nH 0\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nH x\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nCZ 0\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nMCX 1:1 2:0\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nMCX 1:2 -> 0\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nMCX 1:1 -> 9\n").is_err());
        assert!(Circuit::from_text("QCIRCv1 4\nH 0 extra\n").is_err());
    }

    prop_compose! {
        fn arb_small_image()(q in 1u32..=4, cn in 1u64..=4, n in 0u32..=2, m in 0u32..=2)
                           (seed in any::<u64>(), q in Just(q), cn in Just(cn),
                            n in Just(n), m in Just(m))
                           -> ClassicalImage {
            let g = ImageGeometry::new(q, cn, n, m).unwrap();
            let mut acc = seed | 1;
            let values = (0..g.value_count()).map(|_| {
                acc = acc.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (acc >> 32) & g.max_color()
            }).collect();
            ClassicalImage::from_values(g, values).unwrap()
        }
    }

    proptest! {
        #[test]
        fn circuit_text_round_trips(img in arb_small_image()) {
            let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
            prop_assert_eq!(Circuit::from_text(&circ.to_text()).unwrap(), circ);
        }

        #[test]
        fn image_and_circuit_tallies_agree(img in arb_small_image()) {
            let circ = build_preparation_circuit(&img, PrepMode::SkipZero);
            let a = count_circuit_ops(&circ);
            let b = count_image_ops(&img, PrepMode::SkipZero);
            prop_assert_eq!(a.h_gates, b.h_gates);
            prop_assert_eq!(a.mcx_gates, b.mcx_gates);
            prop_assert_eq!(a.omega_ops, b.omega_ops);
        }

        #[test]
        fn step2_gate_count_is_bounded(img in arb_small_image()) {
            let g = *img.geometry();
            let bound = u64::from(g.color_bits()) * g.channel_count() * (g.rows() * g.cols());
            let report = count_image_ops(&img, PrepMode::Strict);
            prop_assert!(report.mcx_gates <= bound);
        }
    }
}
