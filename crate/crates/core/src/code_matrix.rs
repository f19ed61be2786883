//! Truncated Sylvester-Hadamard code matrices and nearest-codeword decoding.
//!
//! Rows are class codewords and columns index the binary base classifiers.
//! A code whose minimum row distance is `d` corrects every pattern of fewer
//! than `m = floor(d / 2)` bit errors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EcocError, Result};

/// Largest Sylvester order accepted by [`sylvester_hadamard`] (a 65536² matrix).
pub const MAX_HADAMARD_ORDER: u32 = 16;

/// Dense row-major {0,1} matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(bits.len()) {
            return Err(EcocError::argument(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows.saturating_mul(cols),
                bits.len()
            )));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(EcocError::argument(format!(
                "entry {pos} is {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != cols) {
            return Err(EcocError::argument(format!(
                "row {i} has {} entries, expected {cols}",
                rows[i].len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.bits[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u8]> {
        self.bits.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Hamming distance between two rows.
    pub fn row_distance(&self, a: usize, b: usize) -> usize {
        hamming(self.row(a), self.row(b))
    }

    /// Sub-matrix made of `rows × cols` starting at `(row0, col0)`.
    fn window(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> BitMatrix {
        let mut bits = Vec::with_capacity(rows * cols);
        for r in row0..row0 + rows {
            bits.extend_from_slice(&self.row(r)[col0..col0 + cols]);
        }
        BitMatrix { rows, cols, bits }
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// The 2^k × 2^k Sylvester-Hadamard matrix in {0,1} form.
///
/// Entry (i, j) is the parity of `popcount(i & j)`, which is the doubling
/// construction `H_{k+1} = [[H, H], [H, -H]]` with +1 mapped to 0.
pub fn sylvester_hadamard(k: u32) -> Result<BitMatrix> {
    if k > MAX_HADAMARD_ORDER {
        return Err(EcocError::Size(format!(
            "Hadamard order {k} exceeds cap {MAX_HADAMARD_ORDER}"
        )));
    }
    let size = 1usize << k;
    let mut bits = Vec::with_capacity(size * size);
    for i in 0..size {
        bits.extend((0..size).map(|j| ((i & j).count_ones() & 1) as u8));
    }
    Ok(BitMatrix {
        rows: size,
        cols: size,
        bits,
    })
}

/// Minimum Hamming distance over all unordered row pairs.
pub fn min_row_distance(matrix: &BitMatrix) -> Result<usize> {
    if matrix.rows() < 2 {
        return Err(EcocError::argument(format!(
            "minimum row distance needs at least 2 rows, got {}",
            matrix.rows()
        )));
    }
    let mut best = usize::MAX;
    for a in 0..matrix.rows() {
        for b in a + 1..matrix.rows() {
            best = best.min(matrix.row_distance(a, b));
        }
    }
    Ok(best)
}

/// Which corner of the Hadamard matrix survives truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Delete the leading rows and columns, keeping the bottom-right block.
    /// This is the variant that yields m = 2 for 10 classes and m = 6 for 26.
    #[default]
    KeepBottomRight,
    /// Delete the trailing rows and columns, keeping the top-left block.
    KeepTopLeft,
}

impl Orientation {
    pub const ALL: [Orientation; 2] = [Orientation::KeepBottomRight, Orientation::KeepTopLeft];

    pub fn name(self) -> &'static str {
        match self {
            Orientation::KeepBottomRight => "keep-bottom-right",
            Orientation::KeepTopLeft => "keep-top-left",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orientation {
    type Err = EcocError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep-bottom-right" => Ok(Orientation::KeepBottomRight),
            "keep-top-left" => Ok(Orientation::KeepTopLeft),
            other => Err(EcocError::argument(format!(
                "unknown orientation `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Return the lowest-index row among the nearest ones.
    #[default]
    LowestIndex,
    /// Same choice as `LowestIndex`, but flag non-unique minima.
    ReportTie,
}

/// Result of nearest-codeword decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub class: usize,
    pub distance: usize,
    /// Set only under [`TiePolicy::ReportTie`] when several rows share the minimum.
    pub tie: bool,
}

/// An ECOC matrix together with its distance parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    matrix: BitMatrix,
    d: usize,
    m: usize,
    words: usize,
    packed: Vec<u64>,
}

impl CodeMatrix {
    /// Wraps an arbitrary {0,1} matrix, computing `d` by exhaustive scan.
    ///
    /// Rows must be pairwise distinct (d ≥ 1). Codes with d = 1 have m = 0
    /// and guarantee no error correction.
    pub fn from_matrix(matrix: BitMatrix) -> Result<Self> {
        let d = min_row_distance(&matrix)?;
        if d == 0 {
            return Err(EcocError::argument(
                "code matrix has duplicate rows (d = 0)",
            ));
        }
        if matrix.cols() == 0 {
            return Err(EcocError::argument("code matrix has no columns"));
        }
        let words = matrix.cols().div_ceil(64);
        let mut packed = Vec::with_capacity(matrix.rows() * words);
        for row in matrix.iter_rows() {
            packed.extend(pack_bits(row, words));
        }
        Ok(Self {
            m: d / 2,
            d,
            matrix,
            words,
            packed,
        })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Number of classes (rows).
    pub fn classes(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of base classifiers (columns).
    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ratio(&self) -> f64 {
        self.m as f64 / self.n() as f64
    }

    pub fn codeword(&self, class: usize) -> &[u8] {
        self.matrix.row(class)
    }

    pub fn decode(&self, word: &[u8], tie_policy: TiePolicy) -> Result<Decoded> {
        if word.len() != self.n() {
            return Err(EcocError::argument(format!(
                "word has {} bits, code has {} columns",
                word.len(),
                self.n()
            )));
        }
        if let Some(pos) = word.iter().position(|&b| b > 1) {
            return Err(EcocError::argument(format!("bit {pos} is not 0 or 1")));
        }
        let packed = pack_bits(word, self.words);
        Ok(self.decode_packed(&packed, tie_policy))
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn packed_row(&self, class: usize) -> &[u64] {
        &self.packed[class * self.words..(class + 1) * self.words]
    }

    pub(crate) fn decode_packed(&self, word: &[u64], tie_policy: TiePolicy) -> Decoded {
        let mut best = (0usize, usize::MAX);
        let mut tie = false;
        for (class, row) in self.packed.chunks_exact(self.words).enumerate() {
            let dist: usize = row
                .iter()
                .zip(word)
                .map(|(a, b)| (a ^ b).count_ones() as usize)
                .sum();
            if dist < best.1 {
                best = (class, dist);
                tie = false;
            } else if dist == best.1 {
                tie = true;
            }
        }
        Decoded {
            class: best.0,
            distance: best.1,
            tie: tie && tie_policy == TiePolicy::ReportTie,
        }
    }

    /// Plain-text form: a `n d m` header line followed by one line of `0`/`1`
    /// characters per codeword.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n(), self.d, self.m);
        for row in self.matrix.iter_rows() {
            out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    /// Parses [`CodeMatrix::to_text`] output, re-deriving and checking the header.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| EcocError::parse(1, "empty code matrix text"))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| EcocError::parse(1, format!("bad header `{header}`: {e}")))?;
        let [n, d, m] = fields[..] else {
            return Err(EcocError::parse(1, "header must be `n d m`"));
        };
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            let row = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(EcocError::parse(
                        idx as u64 + 1,
                        format!("unexpected `{other}`"),
                    )),
                })
                .collect::<Result<Vec<u8>>>()?;
            if row.len() != n {
                return Err(EcocError::parse(
                    idx as u64 + 1,
                    format!("row has {} bits, header says {n}", row.len()),
                ));
            }
            rows.push(row);
        }
        let code = Self::from_matrix(BitMatrix::from_rows(&rows)?)?;
        if code.d != d || code.m != m {
            return Err(EcocError::parse(
                1,
                format!(
                    "header claims d={d} m={m}, matrix has d={} m={}",
                    code.d, code.m
                ),
            ));
        }
        Ok(code)
    }
}

pub(crate) fn pack_bits(bits: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 64] |= u64::from(b & 1) << (i % 64);
    }
    out
}

/// Square `num_classes × num_classes` code cut from the smallest Sylvester
/// matrix of order `2^k ≥ num_classes`.
pub fn build_code_matrix(num_classes: usize, orientation: Orientation) -> Result<CodeMatrix> {
    if num_classes < 2 {
        return Err(EcocError::argument(format!(
            "need at least 2 classes, got {num_classes}"
        )));
    }
    let k = num_classes.next_power_of_two().trailing_zeros();
    let full = sylvester_hadamard(k)?;
    let drop = full.rows() - num_classes;
    let kept = match orientation {
        Orientation::KeepBottomRight => full.window(drop, drop, num_classes, num_classes),
        Orientation::KeepTopLeft => full.window(0, 0, num_classes, num_classes),
    };
    CodeMatrix::from_matrix(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sylvester_small_orders() {
        assert_eq!(sylvester_hadamard(0).unwrap().as_slice(), &[0]);
        assert_eq!(sylvester_hadamard(1).unwrap().as_slice(), &[0, 0, 0, 1]);
        let h2 = sylvester_hadamard(2).unwrap();
        assert_eq!(
            h2.as_slice(),
            &[0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0]
        );
    }

    #[test]
    fn sylvester_rows_are_equidistant() {
        for k in 1..=6 {
            let h = sylvester_hadamard(k).unwrap();
            for a in 0..h.rows() {
                for b in a + 1..h.rows() {
                    assert_eq!(h.row_distance(a, b), 1 << (k - 1), "k={k} rows {a},{b}");
                }
            }
        }
        let h4 = sylvester_hadamard(4).unwrap();
        assert_eq!(min_row_distance(&h4).unwrap(), 8);
        assert_eq!(
            min_row_distance(&sylvester_hadamard(3).unwrap()).unwrap(),
            4
        );
    }

    #[test]
    fn sylvester_cap() {
        assert!(matches!(sylvester_hadamard(17), Err(EcocError::Size(_))));
    }

    #[test]
    fn min_distance_examples() {
        let same = BitMatrix::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(min_row_distance(&same).unwrap(), 0);
        let comp = BitMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(min_row_distance(&comp).unwrap(), 2);
        let one = BitMatrix::from_rows(&[vec![0, 1]]).unwrap();
        assert!(matches!(
            min_row_distance(&one),
            Err(EcocError::Argument(_))
        ));
    }

    #[test]
    fn bit_matrix_validation() {
        assert!(BitMatrix::new(2, 2, vec![0, 1, 2, 0]).is_err());
        assert!(BitMatrix::new(2, 2, vec![0, 1, 1]).is_err());
        assert!(BitMatrix::from_rows(&[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn default_orientation_matches_published_ratios() {
        let letters = build_code_matrix(26, Orientation::default()).unwrap();
        assert_eq!((letters.n(), letters.d(), letters.m()), (26, 12, 6));
        assert_eq!(letters.ratio(), 6.0 / 26.0);
        let usps = build_code_matrix(10, Orientation::default()).unwrap();
        assert_eq!((usps.d(), usps.m()), (4, 2));
        let vowel = build_code_matrix(11, Orientation::default()).unwrap();
        assert_eq!(vowel.m(), 2);

        let top_left = build_code_matrix(26, Orientation::KeepTopLeft).unwrap();
        assert_eq!((top_left.d(), top_left.m()), (10, 5));
        let top_left = build_code_matrix(10, Orientation::KeepTopLeft).unwrap();
        assert_eq!((top_left.d(), top_left.m()), (2, 1));
    }

    #[test]
    fn two_class_code_in_both_orientations() {
        // 2 classes use the 2x2 Sylvester matrix untouched, so both agree.
        for o in Orientation::ALL {
            let code = build_code_matrix(2, o).unwrap();
            assert_eq!(code.matrix().as_slice(), &[0, 0, 0, 1]);
            assert_eq!((code.d(), code.m()), (1, 0));
        }
        assert!(build_code_matrix(1, Orientation::default()).is_err());
    }

    #[test]
    fn stored_distance_matches_rescan() {
        for n in 2..=40 {
            for o in Orientation::ALL {
                let code = build_code_matrix(n, o).unwrap();
                assert_eq!(min_row_distance(code.matrix()).unwrap(), code.d());
                assert_eq!(code.m(), code.d() / 2);
            }
        }
    }

    #[test]
    fn decode_codewords_and_ties() {
        let code = build_code_matrix(26, Orientation::default()).unwrap();
        for i in 0..code.classes() {
            let got = code.decode(code.codeword(i), TiePolicy::ReportTie).unwrap();
            assert_eq!((got.class, got.distance, got.tie), (i, 0, false));
        }

        let tiny =
            CodeMatrix::from_matrix(BitMatrix::from_rows(&[vec![0, 0], vec![1, 1]]).unwrap())
                .unwrap();
        let low = tiny.decode(&[0, 1], TiePolicy::LowestIndex).unwrap();
        assert_eq!((low.class, low.tie), (0, false));
        let rep = tiny.decode(&[0, 1], TiePolicy::ReportTie).unwrap();
        assert_eq!((rep.class, rep.tie), (0, true));

        assert!(matches!(
            tiny.decode(&[0, 1, 1], TiePolicy::LowestIndex),
            Err(EcocError::Argument(_))
        ));
    }

    #[test]
    fn corrects_up_to_m_minus_one_flips_on_letters_code() {
        let code = build_code_matrix(26, Orientation::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..1000 {
            let class = rng.random_range(0..code.classes());
            let mut word = code.codeword(class).to_vec();
            for pos in sample(&mut rng, code.n(), code.m() - 1) {
                word[pos] ^= 1;
            }
            let got = code.decode(&word, TiePolicy::ReportTie).unwrap();
            assert_eq!(got.class, class);
            assert!(!got.tie);
        }
    }

    #[test]
    fn corrects_small_flip_sets_exhaustively() {
        for n in 3..=12 {
            let code = build_code_matrix(n, Orientation::default()).unwrap();
            let t = code.m().saturating_sub(1);
            for class in 0..code.classes() {
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize > t {
                        continue;
                    }
                    let word: Vec<u8> = code
                        .codeword(class)
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| b ^ ((mask >> i) & 1) as u8)
                        .collect();
                    assert_eq!(
                        code.decode(&word, TiePolicy::LowestIndex).unwrap().class,
                        class
                    );
                }
            }
        }
    }

    #[test]
    fn text_round_trip_and_header_check() {
        let code = build_code_matrix(26, Orientation::default()).unwrap();
        let text = code.to_text();
        assert!(text.starts_with("26 12 6\n"));
        assert_eq!(text.lines().count(), 27);
        assert_eq!(CodeMatrix::from_text(&text).unwrap(), code);

        let tampered = text.replacen("26 12 6", "26 12 5", 1);
        assert!(matches!(
            CodeMatrix::from_text(&tampered),
            Err(EcocError::Parse { .. })
        ));
        let bad_char = text.replacen("\n0", "\n2", 1);
        assert!(matches!(
            CodeMatrix::from_text(&bad_char),
            Err(EcocError::Parse { .. })
        ));
    }

    #[test]
    fn packing_handles_wide_codes() {
        let code = build_code_matrix(100, Orientation::default()).unwrap();
        assert_eq!(code.words(), 2);
        let mut word = code.codeword(57).to_vec();
        for pos in [0, 63, 64, 99] {
            word[pos] ^= 1;
        }
        assert_eq!(
            code.decode(&word, TiePolicy::LowestIndex).unwrap().class,
            57
        );
        assert_eq!(code.packed_row(57), &pack_bits(code.codeword(57), 2)[..]);
    }
}
