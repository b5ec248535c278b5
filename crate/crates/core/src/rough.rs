//! Approximation spaces: partitions of a universe and the lower/upper
//! approximation operators they induce.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::universe::{elements, ensure_same, Subset, Universe};

/// An equivalence relation stored as its blocks `U/R`.
///
/// Blocks are kept in canonical order, ascending by smallest member index.
#[derive(Clone)]
pub struct Partition {
    universe: Arc<Universe>,
    blocks: Vec<u64>,
    // element index -> block index
    owner: Vec<usize>,
}

impl Partition {
    pub fn new(universe: &Arc<Universe>, blocks: &[Subset]) -> Result<Self> {
        let mut masks = Vec::with_capacity(blocks.len());
        for b in blocks {
            ensure_same(universe, b.universe())?;
            masks.push(b.mask());
        }
        Self::from_masks(universe, masks)
    }

    pub fn from_masks(universe: &Arc<Universe>, mut blocks: Vec<u64>) -> Result<Self> {
        let mut seen = 0u64;
        for &b in &blocks {
            universe.check_mask(b)?;
            if b == 0 {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if seen & b != 0 {
                let dup = (seen & b).trailing_zeros() as usize;
                return Err(Error::InvalidPartition(format!(
                    "element `{}` lies in two blocks",
                    universe.label(dup)
                )));
            }
            seen |= b;
        }
        if seen != universe.full_mask() {
            let missing = (universe.full_mask() & !seen).trailing_zeros() as usize;
            return Err(Error::InvalidPartition(format!(
                "element `{}` lies in no block",
                universe.label(missing)
            )));
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        let mut owner = vec![0; universe.len()];
        for (k, &b) in blocks.iter().enumerate() {
            for i in elements(b) {
                owner[i] = k;
            }
        }
        Ok(Partition {
            universe: universe.clone(),
            blocks,
            owner,
        })
    }

    /// Builds the universe from the blocks, in first-appearance order.
    pub fn from_labels<B, S>(blocks: &[B]) -> Result<Self>
    where
        B: AsRef<[S]>,
        S: AsRef<str>,
    {
        let labels: Vec<&str> = blocks
            .iter()
            .flat_map(|b| b.as_ref().iter().map(AsRef::as_ref))
            .collect();
        let universe = Universe::new(labels)?;
        let masks = blocks
            .iter()
            .map(|b| Subset::from_labels(&universe, b.as_ref()).map(|s| s.mask()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(&universe, masks)
    }

    /// Every element in its own block (the identity relation).
    pub fn discrete(universe: &Arc<Universe>) -> Self {
        let blocks = (0..universe.len()).map(|i| 1u64 << i).collect();
        Self::from_masks(universe, blocks).expect("singletons partition the universe")
    }

    /// A single block (the universal relation).
    pub fn indiscrete(universe: &Arc<Universe>) -> Self {
        Self::from_masks(universe, vec![universe.full_mask()]).expect("one block covers")
    }

    /// Partition from a restricted growth string: element `i` goes to block `rgs[i]`.
    pub fn from_rgs(universe: &Arc<Universe>, rgs: &[usize]) -> Result<Self> {
        if rgs.len() != universe.len() {
            return Err(Error::InvalidPartition(format!(
                "growth string has {} entries for {} elements",
                rgs.len(),
                universe.len()
            )));
        }
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![0u64; k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b] |= 1 << i;
        }
        Self::from_masks(universe, blocks)
    }

    /// All partitions of `universe`, each exactly once, via restricted growth strings.
    pub fn enumerate(universe: &Arc<Universe>) -> impl Iterator<Item = Partition> + '_ {
        RestrictedGrowth::new(universe.len())
            .map(move |rgs| Self::from_rgs(universe, &rgs).expect("valid growth string"))
    }

    /// Reads the text format: one block per line, elements separated by
    /// whitespace, `#` lines ignored.
    pub fn parse(text: &str, cap: usize) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut seen = std::collections::HashMap::new();
        let mut last_line = 0;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut block = Vec::new();
            for token in trimmed.split_whitespace() {
                if seen.insert(token.to_string(), line).is_some() {
                    return Err(Error::Parse {
                        line,
                        message: format!("element `{token}` already appears in another block"),
                    });
                }
                block.push(labels.len());
                labels.push(token.to_string());
            }
            blocks.push((line, block));
        }
        if blocks.is_empty() {
            return Err(Error::Parse {
                line: last_line.max(1),
                message: "no blocks found".into(),
            });
        }
        let universe = Universe::with_cap(labels, cap).map_err(|e| Error::Parse {
            line: last_line,
            message: e.to_string(),
        })?;
        let masks = blocks
            .iter()
            .map(|(_, b)| b.iter().fold(0u64, |m, &i| m | 1 << i))
            .collect();
        Self::from_masks(&universe, masks)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn blocks(&self) -> impl Iterator<Item = Subset> + '_ {
        self.blocks
            .iter()
            .map(|&b| Subset::from_mask_unchecked(&self.universe, b))
    }

    /// `RN(x)` for the element with the given label.
    pub fn block_of(&self, label: &str) -> Result<Subset> {
        let i = self.universe.index_of(label)?;
        Ok(self.block_of_index(i))
    }

    pub fn block_of_index(&self, index: usize) -> Subset {
        Subset::from_mask_unchecked(&self.universe, self.blocks[self.owner[index]])
    }

    /// `R_*(X)`: elements whose whole block lies inside `X`.
    pub fn lower_approx(&self, x: &Subset) -> Result<Subset> {
        ensure_same(&self.universe, x.universe())?;
        Ok(Subset::from_mask_unchecked(
            &self.universe,
            self.lower_mask(x.mask()),
        ))
    }

    /// `R^*(X)`: elements whose block meets `X`.
    pub fn upper_approx(&self, x: &Subset) -> Result<Subset> {
        ensure_same(&self.universe, x.universe())?;
        Ok(Subset::from_mask_unchecked(
            &self.universe,
            self.upper_mask(x.mask()),
        ))
    }

    pub fn is_precise(&self, x: &Subset) -> Result<bool> {
        ensure_same(&self.universe, x.universe())?;
        Ok(self.lower_mask(x.mask()) == self.upper_mask(x.mask()))
    }

    pub fn is_rough(&self, x: &Subset) -> Result<bool> {
        self.is_precise(x).map(|p| !p)
    }

    pub fn lower_mask(&self, x: u64) -> u64 {
        self.blocks
            .iter()
            .filter(|&&b| b & !x == 0)
            .fold(0, |acc, b| acc | b)
    }

    pub fn upper_mask(&self, x: u64) -> u64 {
        self.blocks
            .iter()
            .filter(|&&b| b & x != 0)
            .fold(0, |acc, b| acc | b)
    }

    /// Number of blocks meeting `x`.
    pub fn blocks_meeting(&self, x: u64) -> usize {
        self.blocks.iter().filter(|&&b| b & x != 0).count()
    }

    /// The common refinement, i.e. the partition of `R₁ ∩ R₂`.
    pub fn refine(&self, other: &Partition) -> Result<Partition> {
        ensure_same(&self.universe, &other.universe)?;
        let blocks = self
            .blocks
            .iter()
            .flat_map(|&a| other.blocks.iter().map(move |&b| a & b))
            .filter(|&m| m != 0)
            .collect();
        Self::from_masks(&self.universe, blocks)
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|&b| coarser.blocks[coarser.owner[b.trailing_zeros() as usize]] & b == b)
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.blocks == other.blocks
    }
}

impl Eq for Partition {}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.universe.render(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition[{self}]")
    }
}

/// Restricted growth strings of length `n` in lexicographic order.
///
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`; each string is one set partition.
pub struct RestrictedGrowth {
    current: Option<Vec<usize>>,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: Some(vec![0; n]),
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // prefix maxima
        let mut maxes = Vec::with_capacity(next.len());
        let mut m = 0;
        for &v in &next {
            m = m.max(v);
            maxes.push(m);
        }
        for i in (1..next.len()).rev() {
            if next[i] <= maxes[i - 1] {
                next[i] += 1;
                for v in &mut next[i + 1..] {
                    *v = 0;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Lower/upper operators on raw masks, so the property checker can run on any
/// candidate operator pair.
pub trait ApproximationOperators {
    fn universe(&self) -> &Arc<Universe>;
    fn lower(&self, x: u64) -> u64;
    fn upper(&self, x: u64) -> u64;
}

impl ApproximationOperators for Partition {
    fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    fn lower(&self, x: u64) -> u64 {
        self.lower_mask(x)
    }

    fn upper(&self, x: u64) -> u64 {
        self.upper_mask(x)
    }
}

/// The classical properties of the approximation operators.
///
/// `1L` is normality `R_*(∅) = ∅` and `3L` is `R_*(X∩Y) = R_*(X)∩R_*(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxProperty {
    CoNormality,
    Normality,
    Contraction,
    Extension,
    Multiplication,
    Addition,
    LowerDuality,
    UpperDuality,
    LowerComplement,
    UpperComplement,
    Monotone,
}

impl ApproxProperty {
    pub const ALL: [ApproxProperty; 11] = [
        ApproxProperty::CoNormality,
        ApproxProperty::Normality,
        ApproxProperty::Contraction,
        ApproxProperty::Extension,
        ApproxProperty::Multiplication,
        ApproxProperty::Addition,
        ApproxProperty::LowerDuality,
        ApproxProperty::UpperDuality,
        ApproxProperty::LowerComplement,
        ApproxProperty::UpperComplement,
        ApproxProperty::Monotone,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ApproxProperty::CoNormality => "1H",
            ApproxProperty::Normality => "1L",
            ApproxProperty::Contraction => "2L",
            ApproxProperty::Extension => "2H",
            ApproxProperty::Multiplication => "3L",
            ApproxProperty::Addition => "3H",
            ApproxProperty::LowerDuality => "4L",
            ApproxProperty::UpperDuality => "4H",
            ApproxProperty::LowerComplement => "5L",
            ApproxProperty::UpperComplement => "5H",
            ApproxProperty::Monotone => "6H",
        }
    }

    fn is_binary(self) -> bool {
        matches!(
            self,
            ApproxProperty::Multiplication | ApproxProperty::Addition | ApproxProperty::Monotone
        )
    }

    fn holds<A: ApproximationOperators + ?Sized>(self, ops: &A, x: u64, y: u64) -> bool {
        let full = ops.universe().full_mask();
        let not = |m: u64| !m & full;
        match self {
            ApproxProperty::CoNormality => ops.upper(full) == full,
            ApproxProperty::Normality => ops.lower(0) == 0,
            ApproxProperty::Contraction => ops.lower(x) & !x == 0,
            ApproxProperty::Extension => x & !ops.upper(x) == 0,
            ApproxProperty::Multiplication => ops.lower(x & y) == ops.lower(x) & ops.lower(y),
            ApproxProperty::Addition => ops.upper(x | y) == ops.upper(x) | ops.upper(y),
            ApproxProperty::LowerDuality => ops.lower(x) == not(ops.upper(not(x))),
            ApproxProperty::UpperDuality => ops.upper(x) == not(ops.lower(not(x))),
            ApproxProperty::LowerComplement => ops.lower(not(ops.lower(x))) == not(ops.lower(x)),
            ApproxProperty::UpperComplement => ops.upper(not(ops.upper(x))) == not(ops.upper(x)),
            ApproxProperty::Monotone => x & !y != 0 || ops.upper(x) & !ops.upper(y) == 0,
        }
    }
}

impl fmt::Display for ApproxProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every pair `(X, Y)` of subsets; requires the universe to be within its cap.
    Exhaustive,
    /// `samples` uniformly drawn pairs from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub x: Subset,
    pub y: Option<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub property: ApproxProperty,
    pub counterexample: Option<Counterexample>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub mode: CheckMode,
    pub pairs: u64,
    pub results: Vec<PropertyResult>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            CheckMode::Exhaustive => writeln!(f, "PROPERTIES exhaustive pairs={}", self.pairs)?,
            CheckMode::Sampled { seed, .. } => {
                writeln!(f, "PROPERTIES sampled seed={seed} pairs={}", self.pairs)?
            }
        }
        for r in &self.results {
            match &r.counterexample {
                None => writeln!(f, "PROPERTY {} PASS", r.property)?,
                Some(Counterexample { x, y: None }) => {
                    writeln!(f, "PROPERTY {} FAIL X={x}", r.property)?
                }
                Some(Counterexample { x, y: Some(y) }) => {
                    writeln!(f, "PROPERTY {} FAIL X={x} Y={y}", r.property)?
                }
            }
        }
        Ok(())
    }
}

/// Evaluates every [`ApproxProperty`] and keeps the first counterexample of each,
/// in ascending `(X, Y)` mask order for exhaustive runs and draw order otherwise.
pub fn check_approx_properties<A>(ops: &A, mode: CheckMode) -> Result<PropertyReport>
where
    A: ApproximationOperators + ?Sized,
{
    let universe = ops.universe().clone();
    let mut found: Vec<Option<(u64, u64)>> = vec![None; ApproxProperty::ALL.len()];
    let mut visit = |x: u64, y: u64, with_unary: bool| {
        for (slot, p) in found.iter_mut().zip(ApproxProperty::ALL) {
            if slot.is_some() || (!p.is_binary() && !with_unary) {
                continue;
            }
            if !p.holds(ops, x, y) {
                *slot = Some((x, y));
            }
        }
    };
    let pairs = match mode {
        CheckMode::Exhaustive => {
            universe.ensure_exhaustive()?;
            let full = universe.full_mask();
            for x in 0..=full {
                for y in 0..=full {
                    visit(x, y, y == 0);
                }
            }
            (full + 1) * (full + 1)
        }
        CheckMode::Sampled { samples, seed } => {
            let full = universe.full_mask();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = rng.gen::<u64>() & full;
                let y = rng.gen::<u64>() & full;
                visit(x, y, true);
            }
            samples as u64
        }
    };
    let results = ApproxProperty::ALL
        .iter()
        .zip(found)
        .map(|(&property, hit)| PropertyResult {
            property,
            counterexample: hit.map(|(x, y)| Counterexample {
                x: Subset::from_mask_unchecked(&universe, x),
                y: property
                    .is_binary()
                    .then(|| Subset::from_mask_unchecked(&universe, y)),
            }),
        })
        .collect();
    Ok(PropertyReport {
        mode,
        pairs,
        results,
    })
}
