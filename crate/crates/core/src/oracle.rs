//! Gauge-scaling oracle.
//!
//! A holomorphic bundle filtered by pieces `V_1, ..., V_n` is written as a
//! smooth direct sum, its `dbar`-operator upper triangular and its Higgs
//! field a full block matrix. Conjugating `(dbar, z * Phi)` by the constant
//! gauge `g(z) = diag(z^{w_1}, ..., z^{w_n})` multiplies Higgs block `(i, j)`
//! by `z^{1 + w_j - w_i}` and `dbar` block `(i, j)` by `z^{w_j - w_i}`. The
//! limit `z -> 0` exists iff no nonzero block carries a negative exponent,
//! and keeps exactly the nonzero blocks of exponent zero.
//!
//! Only zero/nonzero patterns matter, so no matrix entries are stored.
//! Indices are zero-based: block `(1, 0)` is the map from the first piece
//! to the second.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::types::{CaseTag, FixedComponent, LimitOutcome};

/// Zero or nonzero block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    /// Identically zero.
    Zero,
    /// Possibly nonzero.
    NonZero,
}

impl Block {
    fn is_nonzero(self) -> bool {
        self == Block::NonZero
    }

    fn symbol(self) -> char {
        match self {
            Block::Zero => '.',
            Block::NonZero => '*',
        }
    }
}

/// Square grid stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    n: usize,
    cells: Vec<T>,
}

impl<T: Copy> Grid<T> {
    fn filled(n: usize, value: T) -> Self {
        Grid {
            n,
            cells: vec![value; n * n],
        }
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let cells = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Grid { n, cells }
    }

    /// Side length.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> T {
        self.cells[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, value: T) {
        self.cells[row * self.n + col] = value;
    }

    fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).map(move |j| (i, j)))
    }
}

impl Grid<Block> {
    /// Positions of the nonzero blocks, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.positions()
            .filter(|&(i, j)| self.get(i, j).is_nonzero())
            .collect()
    }
}

/// Malformed block patterns.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    /// Grid sizes disagree with the number of weights.
    #[error("expected {expected} x {expected} grids")]
    DimensionMismatch {
        /// Number of weights.
        expected: usize,
    },
    /// Hodge weights are non-negative.
    #[error("weight {0} is negative")]
    NegativeWeight(i64),
    /// The `dbar` pattern lives strictly above the diagonal.
    #[error("dbar block ({0}, {1}) is on or below the diagonal")]
    DbarNotStrictlyUpper(usize, usize),
    /// Text format problem.
    #[error("bad pattern text: {0}")]
    Parse(String),
}

/// Weights plus zero/nonzero patterns of the Higgs field and of the
/// off-diagonal part of the `dbar`-operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPattern {
    weights: Vec<i64>,
    higgs: Grid<Block>,
    dbar: Grid<Block>,
}

impl BlockPattern {
    /// Checked constructor; grids are row-major `n x n`.
    pub fn new(
        weights: Vec<i64>,
        higgs: Vec<Block>,
        dbar: Vec<Block>,
    ) -> Result<Self, PatternError> {
        let n = weights.len();
        if higgs.len() != n * n || dbar.len() != n * n {
            return Err(PatternError::DimensionMismatch { expected: n });
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0) {
            return Err(PatternError::NegativeWeight(w));
        }
        let dbar = Grid { n, cells: dbar };
        if let Some((i, j)) = dbar.support().into_iter().find(|&(i, j)| i >= j) {
            return Err(PatternError::DbarNotStrictlyUpper(i, j));
        }
        Ok(BlockPattern {
            weights,
            higgs: Grid { n, cells: higgs },
            dbar,
        })
    }

    /// Every Higgs block and every block above the diagonal nonzero.
    pub fn generic(weights: Vec<i64>) -> Result<Self, PatternError> {
        let n = weights.len();
        let higgs = vec![Block::NonZero; n * n];
        let dbar = (0..n * n)
            .map(|idx| {
                if idx / n < idx % n {
                    Block::NonZero
                } else {
                    Block::Zero
                }
            })
            .collect();
        BlockPattern::new(weights, higgs, dbar)
    }

    /// Same pattern with Higgs block `(row, col)` replaced.
    pub fn with_higgs(mut self, row: usize, col: usize, block: Block) -> Self {
        self.higgs.set(row, col, block);
        self
    }

    /// Hodge weights of the gauge.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Higgs pattern.
    pub fn higgs(&self) -> &Grid<Block> {
        &self.higgs
    }

    /// `dbar` pattern.
    pub fn dbar(&self) -> &Grid<Block> {
        &self.dbar
    }

    /// Number of pieces.
    pub fn size(&self) -> usize {
        self.weights.len()
    }

    /// The same pattern with every weight shifted by `shift`.
    pub fn shifted(&self, shift: i64) -> Result<Self, PatternError> {
        let weights = self.weights.iter().map(|w| w + shift).collect();
        BlockPattern::new(weights, self.higgs.cells.clone(), self.dbar.cells.clone())
    }
}

impl fmt::Display for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("w:")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("\n")?;
        for grid in [&self.higgs, &self.dbar] {
            for i in 0..grid.n {
                for j in 0..grid.n {
                    write!(f, "{}", grid.get(i, j).symbol())?;
                }
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BlockPattern {
    type Err = PatternError;

    /// Reads `w:<weights>` followed by `n` Higgs rows and `n` `dbar` rows of
    /// `.`/`*`.
    fn from_str(text: &str) -> Result<Self, PatternError> {
        let bad = |why: &str| PatternError::Parse(why.into());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let weights: Vec<i64> = header
            .strip_prefix("w:")
            .ok_or_else(|| bad("missing w: line"))?
            .split(',')
            .map(|w| w.trim().parse().map_err(|_| bad("bad weight")))
            .collect::<Result<_, _>>()?;
        let n = weights.len();
        let mut read_grid = || -> Result<Vec<Block>, PatternError> {
            let mut cells = Vec::with_capacity(n * n);
            for _ in 0..n {
                let row = lines.next().ok_or_else(|| bad("missing grid row"))?;
                if row.chars().count() != n {
                    return Err(bad("grid row has the wrong length"));
                }
                for c in row.chars() {
                    cells.push(match c {
                        '.' => Block::Zero,
                        '*' => Block::NonZero,
                        _ => return Err(bad("grid symbols are '.' and '*'")),
                    });
                }
            }
            Ok(cells)
        };
        let higgs = read_grid()?;
        let dbar = read_grid()?;
        if lines.next().is_some() {
            return Err(bad("trailing lines"));
        }
        BlockPattern::new(weights, higgs, dbar)
    }
}

/// Exponents of `z` picked up by each block under the gauge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponents {
    /// `1 + w_j - w_i`.
    pub higgs: Grid<i64>,
    /// `w_j - w_i`.
    pub dbar: Grid<i64>,
}

/// Which operator a block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    /// Higgs field.
    Higgs,
    /// `dbar`-operator.
    Dbar,
}

/// Result of letting `z -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitPattern {
    /// No nonzero block blows up.
    pub converges: bool,
    /// Surviving Higgs blocks.
    pub limit_higgs: Grid<Block>,
    /// Surviving off-diagonal `dbar` blocks.
    pub limit_dbar: Grid<Block>,
    /// Exponents used.
    pub exponents: Exponents,
    /// Nonzero blocks with negative exponent.
    pub diverging: Vec<(Operator, usize, usize)>,
}

/// Exponent of `z` on every block.
pub fn scale_exponents(pattern: &BlockPattern) -> Exponents {
    let w = &pattern.weights;
    let n = w.len();
    Exponents {
        higgs: Grid::from_fn(n, |i, j| 1 + w[j] - w[i]),
        dbar: Grid::from_fn(n, |i, j| w[j] - w[i]),
    }
}

/// Limit of the gauge-transformed pair as `z -> 0`.
pub fn take_limit(pattern: &BlockPattern) -> LimitPattern {
    let exponents = scale_exponents(pattern);
    let n = pattern.size();
    let mut limit_higgs = Grid::filled(n, Block::Zero);
    let mut limit_dbar = Grid::filled(n, Block::Zero);
    let mut diverging = Vec::new();
    for (op, source, exps, target) in [
        (
            Operator::Higgs,
            &pattern.higgs,
            &exponents.higgs,
            &mut limit_higgs,
        ),
        (
            Operator::Dbar,
            &pattern.dbar,
            &exponents.dbar,
            &mut limit_dbar,
        ),
    ] {
        for (i, j) in source.support() {
            match exps.get(i, j) {
                e if e < 0 => diverging.push((op, i, j)),
                0 => target.set(i, j, Block::NonZero),
                _ => {}
            }
        }
    }
    LimitPattern {
        converges: diverging.is_empty(),
        limit_higgs,
        limit_dbar,
        exponents,
        diverging,
    }
}

/// The filtration pattern behind each case, the Higgs blocks its limit
/// keeps, and for strictly polystable cases the coupling dropped when
/// passing to the polystable representative.
struct CaseShape {
    pattern: BlockPattern,
    kept: Vec<(usize, usize)>,
    dropped: Option<(usize, usize)>,
}

fn case_shape(case: CaseTag) -> CaseShape {
    let two_step = || BlockPattern::generic(vec![0, 1]).expect("valid weights");
    // I saturates phi(E_1) (resp. N = ker phi_32), so phi_31 vanishes in
    // the refined splitting
    let three_step = || {
        BlockPattern::generic(vec![0, 1, 2])
            .expect("valid weights")
            .with_higgs(2, 0, Block::Zero)
    };
    let chain = vec![(1, 0), (2, 1)];
    match case {
        CaseTag::Semistable => CaseShape {
            pattern: BlockPattern::generic(vec![0]).expect("valid weights"),
            kept: Vec::new(),
            dropped: None,
        },
        CaseTag::Rank2Unstable | CaseTag::C1_1 | CaseTag::C2_1 => CaseShape {
            pattern: two_step(),
            kept: vec![(1, 0)],
            dropped: None,
        },
        CaseTag::C1_3 | CaseTag::C1_4 | CaseTag::C2_3 | CaseTag::C2_4 | CaseTag::C3_1 => {
            CaseShape {
                pattern: three_step(),
                kept: chain,
                dropped: None,
            }
        }
        CaseTag::C1_2 => CaseShape {
            pattern: three_step(),
            kept: vec![(1, 0)],
            dropped: Some((2, 1)),
        },
        CaseTag::C2_2 => CaseShape {
            pattern: three_step(),
            kept: vec![(2, 1)],
            dropped: Some((1, 0)),
        },
        // gauge (1, z) on E_2 + E/E_2, refined along E_1 in E_2
        CaseTag::C3_2 => CaseShape {
            pattern: BlockPattern::generic(vec![0, 0, 1]).expect("valid weights"),
            kept: vec![(2, 0)],
            dropped: Some((2, 1)),
        },
    }
}

/// Checks that the outcome's component label is the Hodge bundle the
/// gauge limit produces on the outcome's graded pieces.
fn label_matches(outcome: &LimitOutcome, shape: &CaseShape) -> bool {
    let g = &outcome.graded_degrees;
    if g.len() != shape.pattern.size() {
        return false;
    }
    match &outcome.component {
        FixedComponent::Min { degree, .. } => g.as_slice() == [*degree],
        FixedComponent::Rank2 { d1 } => g[0] == *d1,
        FixedComponent::Type12 { sub, quotient } | FixedComponent::Type21 { sub, quotient } => {
            g.as_slice() == [*sub, *quotient]
        }
        FixedComponent::Type111 { l } => g.as_slice() == l,
        FixedComponent::PolystableSum(parts) => {
            let (Some(dropped), [(row, col)]) = (shape.dropped, shape.kept.as_slice()) else {
                return false;
            };
            let coupled = [g[*col], g[*row]];
            let lone: Vec<i64> = (0..g.len())
                .filter(|&i| i != *row && i != *col)
                .map(|i| g[i])
                .collect();
            let found_coupled = parts
                .iter()
                .any(|p| p.degrees == coupled && p.weights == [0, 1]);
            let found_lone = parts.iter().any(|p| p.degrees == lone && p.weights == [0]);
            parts.len() == 2 && found_coupled && found_lone && dropped != (*row, *col)
        }
    }
}

/// Rebuilds the block pattern behind the outcome's case, takes the gauge
/// limit, and compares the surviving Higgs blocks with the outcome's fixed
/// point. For strictly polystable cases the limit must contain the
/// polystable representative's blocks plus exactly the dropped coupling,
/// which must itself carry exponent zero.
pub fn oracle_check(outcome: &LimitOutcome) -> bool {
    let shape = case_shape(outcome.case);
    if !label_matches(outcome, &shape) {
        return false;
    }
    let limit = take_limit(&shape.pattern);
    if !limit.converges {
        return false;
    }
    let mut expected = shape.kept.clone();
    if let Some((i, j)) = shape.dropped {
        if limit.exponents.higgs.get(i, j) != 0 || shape.kept.contains(&(i, j)) {
            return false;
        }
        expected.push((i, j));
    }
    expected.sort_unstable();
    limit.limit_higgs.support() == expected
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_two_pieces() {
        let p = BlockPattern::generic(vec![0, 1]).unwrap();
        let e = scale_exponents(&p);
        assert_eq!(e.higgs.cells, [1, 2, 0, 1]);
        assert_eq!(e.dbar.get(0, 1), 1);
    }

    #[test]
    fn exponents_three_pieces() {
        let e = scale_exponents(&BlockPattern::generic(vec![0, 1, 2]).unwrap());
        assert_eq!(e.higgs.get(0, 2), 3);
        assert_eq!(e.higgs.get(2, 0), -1);
        assert_eq!(e.dbar.get(0, 2), 2);
        let flat = scale_exponents(&BlockPattern::generic(vec![0, 0]).unwrap());
        assert!(flat.higgs.cells.iter().all(|&x| x == 1));
    }

    #[test]
    fn limits() {
        let l = take_limit(&BlockPattern::generic(vec![0, 1]).unwrap());
        assert!(l.converges);
        assert_eq!(l.limit_higgs.support(), [(1, 0)]);
        assert!(l.limit_dbar.support().is_empty());

        let p = BlockPattern::generic(vec![0, 1, 2])
            .unwrap()
            .with_higgs(2, 0, Block::Zero);
        let l = take_limit(&p);
        assert!(l.converges);
        assert_eq!(l.limit_higgs.support(), [(1, 0), (2, 1)]);

        let l = take_limit(&BlockPattern::generic(vec![0, 1, 2]).unwrap());
        assert!(!l.converges);
        assert_eq!(l.diverging, [(Operator::Higgs, 2, 0)]);
    }

    #[test]
    fn pattern_text() {
        let p = BlockPattern::generic(vec![0, 1, 2])
            .unwrap()
            .with_higgs(2, 0, Block::Zero);
        let text = alloc::format!("{p}");
        assert_eq!(text, "w:0,1,2\n***\n***\n.**\n.**\n..*\n...\n");
        assert_eq!(text.parse::<BlockPattern>().unwrap(), p);
        assert!("w:0,1\n**\n**\n..\n*.\n".parse::<BlockPattern>().is_err());
        assert!("w:0,-1\n**\n**\n.*\n..\n".parse::<BlockPattern>().is_err());
    }

    #[test]
    fn every_case_shape_is_self_consistent() {
        for case in CaseTag::ALL {
            let shape = case_shape(case);
            let limit = take_limit(&shape.pattern);
            assert!(limit.converges, "{case}");
            for &(i, j) in &shape.kept {
                assert_eq!(limit.limit_higgs.get(i, j), Block::NonZero, "{case}");
            }
        }
    }
}
