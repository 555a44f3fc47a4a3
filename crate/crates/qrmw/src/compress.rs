//! Preparation-circuit compression by Boolean cover minimization.
//!
//! Cells sharing one color value are merged into implicants — address
//! patterns with don't-care bits — so one controlled operator group serves
//! many cells at once. Because the synthesized gates *flip* color bits,
//! a cell covered by two implicants of its color would be flipped twice
//! and end up corrupted; covers here are therefore exact and disjoint:
//! every nonzero cell is covered exactly once and nothing else is covered
//! at all (zero cells and unused channel slots carry color 0 in the state
//! and must stay untouched).
//!
//! Two minimization modes exist. `Exact` searches for a minimum-cardinality
//! disjoint cube partition of each color's onset (branch-and-bound with a
//! generous work budget). `Paper` merges only full columns — all `2^n`
//! row values of one (channel, column) sharing a nonzero color — and keeps
//! every other cell as a singleton; it reproduces the column-grouping
//! counts that motivated the scheme.

use std::collections::{BTreeMap, HashSet};

use crate::circuit::{color_flip_gates, pattern_controls, Circuit, Gate};
use crate::error::{Error, Result};
use crate::image::ClassicalImage;

/// Widest onset space the exact minimizer accepts; beyond this the dense
/// membership bitset would outgrow desk scale.
pub const MAX_EXACT_WIDTH: u32 = 24;

/// Search budget for the exact minimizer: branch nodes and elementary
/// membership checks. Exhausting either keeps the best disjoint cover
/// found so far (still exact, possibly not minimum); desk-scale inputs
/// stay far below both limits.
const NODE_BUDGET: u64 = 200_000;
const WORK_BUDGET: u64 = 20_000_000;

/// A cube over the `b+n+m` address bits: `mask` marks fixed positions
/// (don't-cares are zero bits), `value` gives the fixed bits' values, and
/// every covered cell carries `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Implicant {
    width: u32,
    mask: u64,
    value: u64,
    color: u64,
}

impl Implicant {
    pub fn new(width: u32, mask: u64, value: u64, color: u64) -> Result<Self> {
        if width > 63 {
            return Err(Error::InvalidParameter(format!(
                "implicant width {width} exceeds 63"
            )));
        }
        let space = if width == 0 { 0 } else { (1u64 << width) - 1 };
        if mask & !space != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask {mask:#b} has bits outside width {width}"
            )));
        }
        if value & !mask != 0 {
            return Err(Error::InvalidParameter(format!(
                "value {value:#b} sets bits outside mask {mask:#b}"
            )));
        }
        Ok(Implicant {
            width,
            mask,
            value,
            color,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Fixed-position mask; a zero bit is a don't-care.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn color(&self) -> u64 {
        self.color
    }

    pub fn dont_care_count(&self) -> u32 {
        self.width - self.mask.count_ones()
    }

    /// Number of cells covered: `2^dont_care_count`.
    pub fn cell_count(&self) -> u64 {
        1 << self.dont_care_count()
    }

    pub fn covers(&self, minterm: u64) -> bool {
        minterm & self.mask == self.value
    }

    /// All covered minterms in ascending order.
    pub fn expand(&self) -> Vec<u64> {
        let space = if self.width == 0 {
            0
        } else {
            (1u64 << self.width) - 1
        };
        let dc = space & !self.mask;
        let mut out = Vec::with_capacity(self.cell_count() as usize);
        let mut s = 0u64;
        loop {
            out.push(self.value | s);
            s = s.wrapping_sub(dc) & dc;
            if s == 0 {
                break;
            }
        }
        out
    }
}

/// Which cover minimizer drives compression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressMode {
    /// Minimum-cardinality disjoint cube partition per color.
    Exact,
    /// Full-column grouping only; everything else stays a singleton.
    Paper,
}

/// Operator counts before and after compression, with the percentage
/// saved: `(1 − after/before)·100`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionReport {
    pub ops_before: u64,
    pub ops_after: u64,
    pub ratio_percent: f64,
}

/// Partitions the nonzero cells by color value: each entry maps a color to
/// the ascending list of its address minterms `(λ·2^n + y)·2^m + x`. Zero
/// cells need no operator and are excluded.
pub fn group_onsets(image: &ClassicalImage) -> BTreeMap<u64, Vec<u64>> {
    let g = image.geometry();
    let mut map: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (addr, value) in image.cells() {
        if value != 0 {
            let minterm = g.value_index(addr).expect("cell addresses are valid") as u64;
            map.entry(value).or_default().push(minterm);
        }
    }
    map
}

/// Finds a minimum-cardinality set of pairwise-disjoint cubes covering
/// `onset` exactly — no cell outside the onset is covered, and every onset
/// cell is covered once. All returned implicants carry `color`.
///
/// Branch-and-bound over cube partitions, seeded with a greedy solution;
/// if the search budget runs out on an adversarial input, the best cover
/// found so far is returned (still exact and disjoint).
pub fn minimize_exact(onset: &[u64], width: u32, color: u64) -> Result<Vec<Implicant>> {
    if width > MAX_EXACT_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "onset width {width} exceeds the exact-minimizer cap {MAX_EXACT_WIDTH}"
        )));
    }
    if onset.is_empty() {
        return Err(Error::InvalidParameter("onset is empty".into()));
    }
    let space = if width == 0 { 0 } else { (1u64 << width) - 1 };
    let mut cells: Vec<u64> = onset.to_vec();
    cells.sort_unstable();
    cells.dedup();
    if let Some(&bad) = cells.iter().find(|&&m| m & !space != 0) {
        return Err(Error::InvalidParameter(format!(
            "minterm {bad} out of range for width {width}"
        )));
    }

    let search = PartitionSearch::new(&cells, width);
    let best = search.run();
    let mut implicants: Vec<Implicant> = best
        .into_iter()
        .map(|(dc, base)| {
            Implicant::new(width, space & !dc, base, color).expect("search emits valid cubes")
        })
        .collect();
    implicants.sort_unstable_by_key(|imp| (imp.value, imp.mask));
    Ok(implicants)
}

/// Dense membership set over the `2^width` cube space.
struct CellSet {
    words: Vec<u64>,
}

impl CellSet {
    fn new(width: u32) -> Self {
        let bits = 1usize << width;
        CellSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    fn contains(&self, v: u64) -> bool {
        self.words[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    fn insert(&mut self, v: u64) {
        self.words[(v >> 6) as usize] |= 1 << (v & 63);
    }

    fn remove(&mut self, v: u64) {
        self.words[(v >> 6) as usize] &= !(1 << (v & 63));
    }
}

/// Branch-and-bound state for the minimum disjoint cube partition. Cubes
/// are carried as `(dc, base)` pairs — don't-care mask plus the covered
/// cell with all dc bits cleared.
struct PartitionSearch<'a> {
    cells: &'a [u64],
    width: u32,
    remaining: CellSet,
    remaining_count: usize,
    max_cube_cells: u64,
    chosen: Vec<(u64, u64)>,
    best: Vec<(u64, u64)>,
    nodes_left: u64,
    work_left: u64,
}

impl<'a> PartitionSearch<'a> {
    fn new(cells: &'a [u64], width: u32) -> Self {
        let mut remaining = CellSet::new(width);
        for &m in cells {
            remaining.insert(m);
        }
        let mut search = PartitionSearch {
            cells,
            width,
            remaining,
            remaining_count: cells.len(),
            max_cube_cells: 1,
            chosen: Vec::new(),
            best: Vec::new(),
            nodes_left: NODE_BUDGET,
            work_left: WORK_BUDGET,
        };
        search.max_cube_cells = search.largest_cube_cells();
        search.best = search.greedy();
        search
    }

    fn run(mut self) -> Vec<(u64, u64)> {
        self.branch(0);
        self.best.clone()
    }

    /// Size of the largest cube contained in the onset, via level-by-level
    /// cube merging; used as the denominator of the node lower bound. Falls
    /// back to the trivial bound if the level sets outgrow the budget.
    fn largest_cube_cells(&mut self) -> u64 {
        let mut level: HashSet<(u64, u64)> = self.cells.iter().map(|&m| (0u64, m)).collect();
        let mut dc_bits = 0u32;
        while !level.is_empty() {
            let mut next = HashSet::new();
            for &(dc, base) in &level {
                for b in 0..self.width {
                    let bit = 1u64 << b;
                    if dc & bit == 0 && base & bit == 0 && level.contains(&(dc, base | bit)) {
                        next.insert((dc | bit, base));
                    }
                }
                if self.work_left < self.width as u64 {
                    return 1 << self.width.min(63);
                }
                self.work_left -= self.width as u64;
            }
            if next.is_empty() {
                break;
            }
            dc_bits += 1;
            level = next;
        }
        1 << dc_bits
    }

    /// Deterministic first solution: walk cells in ascending order and grow
    /// a maximal cube around each uncovered one, trying don't-care bits
    /// from low to high.
    fn greedy(&mut self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for &m in self.cells {
            if !self.remaining.contains(m) {
                continue;
            }
            let mut dc = 0u64;
            for b in 0..self.width {
                let bit = 1u64 << b;
                if self.half_fits(m, dc, bit) {
                    dc |= bit;
                }
            }
            self.take_cube(m, dc);
            out.push((dc, m & !dc));
        }
        // restore: the greedy pass consumed the remaining set
        for &m in self.cells {
            self.remaining.insert(m);
        }
        self.remaining_count = self.cells.len();
        out
    }

    /// True iff doubling cube `(m, dc)` along `bit` stays inside the
    /// remaining set, i.e. every covered cell's `bit`-neighbor is present.
    fn half_fits(&mut self, m: u64, dc: u64, bit: u64) -> bool {
        let mut s = 0u64;
        loop {
            self.work_left = self.work_left.saturating_sub(1);
            if !self.remaining.contains(m ^ s ^ bit) {
                return false;
            }
            s = s.wrapping_sub(dc) & dc;
            if s == 0 {
                return true;
            }
        }
    }

    fn take_cube(&mut self, m: u64, dc: u64) {
        let mut s = 0u64;
        loop {
            self.remaining.remove((m & !dc) | s);
            self.remaining_count -= 1;
            s = s.wrapping_sub(dc) & dc;
            if s == 0 {
                break;
            }
        }
    }

    fn put_back_cube(&mut self, m: u64, dc: u64) {
        let mut s = 0u64;
        loop {
            self.remaining.insert((m & !dc) | s);
            self.remaining_count += 1;
            s = s.wrapping_sub(dc) & dc;
            if s == 0 {
                break;
            }
        }
    }

    fn branch(&mut self, hint: usize) {
        if self.nodes_left == 0 || self.work_left == 0 {
            return;
        }
        self.nodes_left -= 1;
        let mut i = hint;
        while i < self.cells.len() && !self.remaining.contains(self.cells[i]) {
            i += 1;
        }
        if i == self.cells.len() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        let lower = (self.remaining_count as u64).div_ceil(self.max_cube_cells);
        if self.chosen.len() as u64 + lower >= self.best.len() as u64 {
            return;
        }
        let m = self.cells[i];
        let mut candidates = Vec::new();
        self.enumerate_cubes(m, 0, 0, &mut candidates);
        // larger cubes first reaches strong covers early and tightens the bound
        candidates.sort_unstable_by_key(|&dc| (std::cmp::Reverse(dc.count_ones()), dc));
        for dc in candidates {
            self.take_cube(m, dc);
            self.chosen.push((dc, m & !dc));
            self.branch(i + 1);
            self.chosen.pop();
            self.put_back_cube(m, dc);
        }
    }

    /// Collects every don't-care mask whose cube around `m` lies inside the
    /// remaining set. Bits are added in ascending order so each mask is
    /// produced once; growth is monotone, so a failing extension prunes all
    /// its supersets.
    fn enumerate_cubes(&mut self, m: u64, dc: u64, next_bit: u32, out: &mut Vec<u64>) {
        out.push(dc);
        for b in next_bit..self.width {
            let bit = 1u64 << b;
            if self.work_left == 0 {
                return;
            }
            if self.half_fits(m, dc, bit) {
                self.enumerate_cubes(m, dc | bit, b + 1, out);
            }
        }
    }
}

/// Column-grouping minimizer: one implicant per (channel, column) whose
/// `2^n` row cells all share a single nonzero color (row bits become
/// don't-cares), and a singleton implicant for every other nonzero cell.
pub fn minimize_paper_mode(image: &ClassicalImage) -> Vec<Implicant> {
    let g = image.geometry();
    let width = g.address_bits();
    let space = if width == 0 { 0 } else { (1u64 << width) - 1 };
    let row_dc = ((1u64 << g.row_bits()) - 1) << g.col_bits();
    let mut out = Vec::new();
    for lambda in 0..g.channel_count() {
        for x in 0..g.cols() {
            let column: Vec<u64> = (0..g.rows())
                .map(|y| {
                    image
                        .get(crate::geometry::PixelAddress::new(lambda, y, x))
                        .expect("in range")
                })
                .collect();
            let shared = column[0];
            if shared != 0 && column.iter().all(|&v| v == shared) {
                let base = (lambda << g.row_bits()) << g.col_bits() | x;
                out.push(
                    Implicant::new(width, space & !row_dc, base, shared)
                        .expect("column cube is valid"),
                );
            } else {
                for (y, &v) in column.iter().enumerate() {
                    if v != 0 {
                        let addr = (lambda << g.row_bits() | y as u64) << g.col_bits() | x;
                        out.push(
                            Implicant::new(width, space, addr, v).expect("cell cube is valid"),
                        );
                    }
                }
            }
        }
    }
    out.sort_unstable_by_key(|imp| (imp.value, imp.mask));
    out
}

/// Runs the chosen minimizer over the whole image: per-color exact
/// partitions (ascending color order) or the column grouping.
pub fn minimize_image(image: &ClassicalImage, mode: CompressMode) -> Result<Vec<Implicant>> {
    match mode {
        CompressMode::Paper => Ok(minimize_paper_mode(image)),
        CompressMode::Exact => {
            let width = image.geometry().address_bits();
            let mut out = Vec::new();
            for (color, onset) in group_onsets(image) {
                out.extend(minimize_exact(&onset, width, color)?);
            }
            Ok(out)
        }
    }
}

/// Synthesizes the compressed preparation circuit: the Hadamard layer,
/// then one controlled-flip group per implicant with controls only on the
/// implicant's fixed bits.
pub fn build_compressed_circuit(image: &ClassicalImage, mode: CompressMode) -> Result<Circuit> {
    let g = image.geometry();
    let q = g.color_bits() as usize;
    let mut circuit = Circuit::new(g.total_qubits() as usize).expect("geometry has qubits");
    for i in 0..g.address_bits() as usize {
        circuit.push(Gate::H { target: q + i }).expect("in range");
    }
    for imp in minimize_image(image, mode)? {
        let controls = pattern_controls(imp.mask(), imp.value(), imp.width(), q);
        circuit
            .extend(color_flip_gates(&controls, imp.color(), q))
            .expect("synthesized gates are valid");
    }
    Ok(circuit)
}

/// Compression ratio of the operator counts: `(1 − after/before)·100`.
pub fn compression_ratio(ops_before: u64, ops_after: u64) -> Result<CompressionReport> {
    if ops_before == 0 {
        return Err(Error::EmptyCompressionBaseline);
    }
    if ops_after > ops_before {
        return Err(Error::InvalidParameter(format!(
            "ops_after {ops_after} exceeds ops_before {ops_before}"
        )));
    }
    Ok(CompressionReport {
        ops_before,
        ops_after,
        ratio_percent: (1.0 - ops_after as f64 / ops_before as f64) * 100.0,
    })
}

/// End-to-end report for an image: operator count before (one per nonzero
/// cell) vs. after minimization.
pub fn compression_report(image: &ClassicalImage, mode: CompressMode) -> Result<CompressionReport> {
    let before =
        crate::circuit::count_image_ops(image, crate::circuit::PrepMode::SkipZero).omega_ops;
    let after = minimize_image(image, mode)?.len() as u64;
    compression_ratio(before, after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ImageGeometry, PixelAddress};
    use crate::samples;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn expand_all(implicants: &[Implicant]) -> Vec<u64> {
        let mut cells: Vec<u64> = implicants.iter().flat_map(Implicant::expand).collect();
        cells.sort_unstable();
        cells
    }

    fn assert_exact_disjoint(implicants: &[Implicant], onset: &[u64]) {
        let cells = expand_all(implicants);
        let mut unique: Vec<u64> = cells.clone();
        unique.dedup();
        assert_eq!(cells.len(), unique.len(), "implicants overlap");
        let mut want = onset.to_vec();
        want.sort_unstable();
        assert_eq!(unique, want, "cover does not equal the onset");
    }

    #[test]
    fn implicant_basics() {
        let imp = Implicant::new(4, 0b1010, 0b1000, 7).unwrap();
        assert_eq!(imp.dont_care_count(), 2);
        assert_eq!(imp.cell_count(), 4);
        assert_eq!(imp.expand(), vec![0b1000, 0b1001, 0b1100, 0b1101]);
        assert!(imp.covers(0b1101));
        assert!(!imp.covers(0b0000));
    }

    #[test]
    fn implicant_rejects_inconsistent_fields() {
        assert!(Implicant::new(64, 0, 0, 1).is_err());
        assert!(Implicant::new(3, 0b1000, 0, 1).is_err());
        assert!(Implicant::new(3, 0b010, 0b001, 1).is_err());
    }

    #[test]
    fn demo_image_has_one_onset_of_72() {
        let groups = group_onsets(&samples::column_stripes());
        assert_eq!(groups.len(), 1);
        let onset = &groups[&255];
        assert_eq!(onset.len(), 72);
        assert!(onset.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn all_zero_image_has_no_groups() {
        let g = ImageGeometry::new(4, 2, 1, 1).unwrap();
        let img = ClassicalImage::new(g).unwrap();
        assert!(group_onsets(&img).is_empty());
        assert!(minimize_image(&img, CompressMode::Paper)
            .unwrap()
            .is_empty());
        assert!(minimize_image(&img, CompressMode::Exact)
            .unwrap()
            .is_empty());
        assert_eq!(
            compression_report(&img, CompressMode::Paper),
            Err(Error::EmptyCompressionBaseline)
        );
    }

    #[test]
    fn demo_paper_mode_yields_nine_column_groups() {
        let implicants = minimize_paper_mode(&samples::column_stripes());
        assert_eq!(implicants.len(), 9);
        for imp in &implicants {
            assert_eq!(imp.color(), 255);
            assert_eq!(imp.dont_care_count(), 3);
            assert_eq!(imp.cell_count(), 8);
        }
        let onset = &group_onsets(&samples::column_stripes())[&255];
        assert_exact_disjoint(&implicants, onset);
    }

    #[test]
    fn demo_exact_mode_reaches_five_groups() {
        let img = samples::column_stripes();
        let implicants = minimize_image(&img, CompressMode::Exact).unwrap();
        assert_eq!(implicants.len(), 5);
        let onset = &group_onsets(&img)[&255];
        assert_exact_disjoint(&implicants, onset);
    }

    #[test]
    fn full_column_onset_collapses_to_one_implicant() {
        // one lit column of the demo geometry: λ=0, x=0, every y
        let g = ImageGeometry::new(8, 4, 3, 2).unwrap();
        let onset: Vec<u64> = (0..8u64).map(|y| y << 2).collect();
        let implicants = minimize_exact(&onset, g.address_bits(), 255).unwrap();
        assert_eq!(implicants.len(), 1);
        assert_eq!(implicants[0].dont_care_count(), 3);
        assert_exact_disjoint(&implicants, &onset);
    }

    #[test]
    fn singleton_onset_stays_singleton() {
        let implicants = minimize_exact(&[5], 4, 9).unwrap();
        assert_eq!(implicants.len(), 1);
        assert_eq!(implicants[0].mask(), 0b1111);
        assert_eq!(implicants[0].value(), 5);
        assert_eq!(implicants[0].dont_care_count(), 0);
    }

    #[test]
    fn minimize_exact_validates_input() {
        assert!(minimize_exact(&[], 4, 1).is_err());
        assert!(minimize_exact(&[16], 4, 1).is_err());
        assert!(minimize_exact(&[0], 25, 1).is_err());
    }

    #[test]
    fn all_distinct_image_stays_singletons_in_both_modes() {
        let g = ImageGeometry::new(8, 3, 2, 2).unwrap();
        let values: Vec<u64> = (1..=48).collect();
        let img = ClassicalImage::from_values(g, values).unwrap();
        let paper = minimize_paper_mode(&img);
        let exact = minimize_image(&img, CompressMode::Exact).unwrap();
        assert_eq!(paper.len(), 48);
        assert_eq!(exact.len(), 48);
        assert!(paper.iter().all(|i| i.dont_care_count() == 0));
    }

    #[test]
    fn paper_mode_requires_the_whole_column() {
        // two of four rows lit: no column group, two singletons
        let g = ImageGeometry::new(4, 1, 2, 0).unwrap();
        let img = ClassicalImage::from_values(g, vec![3, 3, 0, 0]).unwrap();
        let implicants = minimize_paper_mode(&img);
        assert_eq!(implicants.len(), 2);
        assert!(implicants.iter().all(|i| i.dont_care_count() == 0));
        // exact mode merges the adjacent pair
        let exact = minimize_image(&img, CompressMode::Exact).unwrap();
        assert_eq!(exact.len(), 1);
        assert_eq!(exact[0].cell_count(), 2);
    }

    #[test]
    fn ratio_examples() {
        let r = compression_ratio(72, 9).unwrap();
        assert_eq!(r.ratio_percent, 87.5);
        let r = compression_ratio(48, 4).unwrap();
        assert!((r.ratio_percent - 91.6666666667).abs() < 1e-9);
        let r = compression_ratio(48, 48).unwrap();
        assert_eq!(r.ratio_percent, 0.0);
        assert_eq!(
            compression_ratio(0, 0),
            Err(Error::EmptyCompressionBaseline)
        );
        assert!(compression_ratio(3, 5).is_err());
    }

    #[test]
    fn demo_report_is_87_5_percent() {
        let report = compression_report(&samples::column_stripes(), CompressMode::Paper).unwrap();
        assert_eq!(report.ops_before, 72);
        assert_eq!(report.ops_after, 9);
        assert_eq!(report.ratio_percent, 87.5);
    }

    #[test]
    fn compressed_circuit_of_all_zero_image_is_h_layer() {
        let g = ImageGeometry::new(2, 2, 1, 1).unwrap();
        let img = ClassicalImage::new(g).unwrap();
        let circ = build_compressed_circuit(&img, CompressMode::Exact).unwrap();
        assert_eq!(circ.gates().len(), 3);
        assert!(circ
            .gates()
            .iter()
            .all(|gate| matches!(gate, Gate::H { .. })));
    }

    #[test]
    fn single_set_pixel_compresses_to_the_uncompressed_circuit() {
        let g = ImageGeometry::new(3, 2, 1, 1).unwrap();
        let img = ClassicalImage::new(g)
            .unwrap()
            .set(PixelAddress::new(1, 0, 1), 5)
            .unwrap();
        let plain =
            crate::circuit::build_preparation_circuit(&img, crate::circuit::PrepMode::SkipZero);
        for mode in [CompressMode::Exact, CompressMode::Paper] {
            assert_eq!(build_compressed_circuit(&img, mode).unwrap(), plain);
        }
    }

    proptest! {
        #[test]
        fn exact_cover_oracle(raw in proptest::collection::btree_set(0u64..64, 1..40)) {
            let onset: Vec<u64> = raw.iter().copied().collect();
            let implicants = minimize_exact(&onset, 6, 1).unwrap();
            assert_exact_disjoint(&implicants, &onset);
        }

        #[test]
        fn exact_is_never_larger_than_paper(seed in any::<u64>(), q in 1u32..=4,
                                            cn in 1u64..=3, n in 0u32..=2, m in 0u32..=2) {
            let g = ImageGeometry::new(q, cn, n, m).unwrap();
            let mut acc = seed;
            let values: Vec<u64> = (0..g.value_count()).map(|_| {
                acc = acc.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                // few distinct colors so groups actually form
                (acc >> 32) % 3.min(g.max_color() + 1)
            }).collect();
            let img = ClassicalImage::from_values(g, values).unwrap();
            let nonzero = img.values().iter().filter(|&&v| v != 0).count() as u64;
            let paper = minimize_paper_mode(&img).len() as u64;
            let exact = minimize_image(&img, CompressMode::Exact).unwrap().len() as u64;
            prop_assert!(exact <= paper);
            prop_assert!(paper <= nonzero);
        }

        #[test]
        fn exact_covers_random_images(seed in any::<u64>(), n in 0u32..=2, m in 0u32..=2) {
            let g = ImageGeometry::new(2, 3, n, m).unwrap();
            let mut acc = seed;
            let values: Vec<u64> = (0..g.value_count()).map(|_| {
                acc = acc.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (acc >> 32) & g.max_color()
            }).collect();
            let img = ClassicalImage::from_values(g, values).unwrap();
            let implicants = minimize_image(&img, CompressMode::Exact).unwrap();
            // per color: exact disjoint cover of that color's onset
            for (color, onset) in group_onsets(&img) {
                let of_color: Vec<Implicant> = implicants
                    .iter()
                    .filter(|i| i.color() == color)
                    .copied()
                    .collect();
                let got: BTreeSet<u64> = of_color.iter().flat_map(|i| i.expand()).collect();
                let want: BTreeSet<u64> = onset.iter().copied().collect();
                prop_assert_eq!(&got, &want);
                let total: u64 = of_color.iter().map(|i| i.cell_count()).sum();
                prop_assert_eq!(total as usize, got.len());
            }
        }

        #[test]
        fn ratio_stays_in_bounds(before in 1u64..500, after_frac in 0.0f64..=1.0) {
            let after = ((before as f64) * after_frac) as u64;
            let r = compression_ratio(before, after).unwrap();
            prop_assert!(r.ratio_percent >= 0.0);
            prop_assert!(r.ratio_percent <= 100.0);
        }
    }
}
