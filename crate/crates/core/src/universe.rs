//! Finite universes and bitmask subsets over them.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Exhaustive operations refuse universes larger than this unless overridden.
pub const DEFAULT_CAP: usize = 20;
/// Upper bound for any cap override.
pub const HARD_CAP: usize = 24;
/// Widest universe a mask can describe.
pub const MAX_WIDTH: usize = 64;

/// An ordered, nonempty ground set of distinct labels.
///
/// Element `i` corresponds to bit `i` of every [`Subset`] mask. The universe also
/// carries the cap for operations that enumerate its power set.
#[derive(Debug, Clone)]
pub struct Universe {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    cap: usize,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_cap(labels, DEFAULT_CAP)
    }

    pub fn with_cap<I, S>(labels: I, cap: usize) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if cap == 0 || cap > HARD_CAP {
            return Err(Error::InvalidCap {
                requested: cap,
                max: HARD_CAP,
            });
        }
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if labels.len() > MAX_WIDTH {
            return Err(Error::UniverseTooWide {
                size: labels.len(),
                max: MAX_WIDTH,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        Ok(Arc::new(Universe { labels, index, cap }))
    }

    /// The universe `{1, 2, ..., n}` with decimal labels.
    pub fn numbered(n: usize) -> Result<Arc<Self>> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    /// Same labels, different exhaustive cap.
    pub fn recapped(&self, cap: usize) -> Result<Arc<Self>> {
        Self::with_cap(self.labels.iter().cloned(), cap)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Mask with every element of the universe set.
    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    /// Fails unless the power set of this universe may be enumerated.
    pub fn ensure_exhaustive(&self) -> Result<()> {
        if self.len() > self.cap {
            Err(Error::CapExceeded {
                size: self.len(),
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_mask(&self, mask: u64) -> Result<u64> {
        if mask & !self.full_mask() != 0 {
            Err(Error::MaskOutOfRange {
                mask,
                size: self.len(),
            })
        } else {
            Ok(mask)
        }
    }

    /// Renders a mask as `{a,b,c}` in universe order.
    pub fn render(&self, mask: u64) -> String {
        let mut out = String::from("{");
        for (n, i) in elements(mask).enumerate() {
            if n > 0 {
                out.push(',');
            }
            out.push_str(&self.labels[i]);
        }
        out.push('}');
        out
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Universe {}

pub(crate) fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same(a: &Arc<Universe>, b: &Arc<Universe>) -> Result<()> {
    if same_universe(a, b) {
        Ok(())
    } else {
        Err(Error::UniverseMismatch)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Lexicographic comparison of two masks read as ascending element lists.
pub(crate) fn lex_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    elements(a).cmp(elements(b))
}

/// A subset of a [`Universe`], stored as a membership bitmask.
///
/// The operator impls (`|`, `&`, `-`, `!`) panic when the operands come from
/// different universes; use the checked methods at API boundaries.
#[derive(Clone)]
pub struct Subset {
    universe: Arc<Universe>,
    mask: u64,
}

impl Subset {
    pub fn empty(universe: &Arc<Universe>) -> Self {
        Subset {
            universe: universe.clone(),
            mask: 0,
        }
    }

    pub fn full(universe: &Arc<Universe>) -> Self {
        Subset {
            universe: universe.clone(),
            mask: universe.full_mask(),
        }
    }

    pub fn from_mask(universe: &Arc<Universe>, mask: u64) -> Result<Self> {
        universe.check_mask(mask)?;
        Ok(Subset {
            universe: universe.clone(),
            mask,
        })
    }

    pub(crate) fn from_mask_unchecked(universe: &Arc<Universe>, mask: u64) -> Self {
        debug_assert_eq!(mask & !universe.full_mask(), 0);
        Subset {
            universe: universe.clone(),
            mask,
        }
    }

    pub fn from_labels<I, S>(universe: &Arc<Universe>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0;
        for label in labels {
            mask |= 1 << universe.index_of(label.as_ref())?;
        }
        Ok(Subset {
            universe: universe.clone(),
            mask,
        })
    }

    pub fn singleton(universe: &Arc<Universe>, index: usize) -> Self {
        assert!(index < universe.len(), "element index out of range");
        Subset {
            universe: universe.clone(),
            mask: 1 << index,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.mask >> index & 1 == 1
    }

    pub fn contains_label(&self, label: &str) -> Result<bool> {
        Ok(self.contains(self.universe.index_of(label)?))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        elements(self.mask)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.indices().map(|i| self.universe.label(i))
    }

    pub fn is_subset(&self, other: &Subset) -> Result<bool> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.mask & !other.mask == 0)
    }

    pub fn try_union(&self, other: &Subset) -> Result<Subset> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.with_mask(self.mask | other.mask))
    }

    pub fn try_intersection(&self, other: &Subset) -> Result<Subset> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.with_mask(self.mask & other.mask))
    }

    pub fn try_difference(&self, other: &Subset) -> Result<Subset> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.with_mask(self.mask & !other.mask))
    }

    /// `∼X`, the complement within the universe.
    pub fn complement(&self) -> Subset {
        self.with_mask(!self.mask & self.universe.full_mask())
    }

    pub fn with(&self, index: usize) -> Subset {
        assert!(index < self.universe.len(), "element index out of range");
        self.with_mask(self.mask | 1 << index)
    }

    pub fn without(&self, index: usize) -> Subset {
        self.with_mask(self.mask & !(1 << index))
    }

    fn with_mask(&self, mask: u64) -> Subset {
        Subset {
            universe: self.universe.clone(),
            mask,
        }
    }

    fn expect_same(&self, other: &Subset) {
        assert!(
            same_universe(&self.universe, &other.universe),
            "set operation across different universes"
        );
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && same_universe(&self.universe, &other.universe)
    }
}

impl Eq for Subset {}

impl Hash for Subset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mask.cmp(&other.mask)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.universe.render(self.mask))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&Subset> for &Subset {
            type Output = Subset;

            fn $method(self, rhs: &Subset) -> Subset {
                self.expect_same(rhs);
                let ($a, $b) = (self.mask, rhs.mask);
                self.with_mask($body)
            }
        }
    };
}

binop!(BitOr, bitor, |a, b| a | b);
binop!(BitAnd, bitand, |a, b| a & b);
binop!(Sub, sub, |a, b| a & !b);

impl Not for &Subset {
    type Output = Subset;

    fn not(self) -> Subset {
        self.complement()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_labels() {
        assert_eq!(
            Universe::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyUniverse
        );
        assert_eq!(
            Universe::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
        assert_eq!(Universe::new(["a", ""]).unwrap_err(), Error::EmptyLabel);
        assert!(matches!(
            Universe::with_cap(["a"], 25),
            Err(Error::InvalidCap { .. })
        ));
    }

    #[test]
    fn cap_gate() {
        let u = Universe::with_cap((0..5).map(|i| i.to_string()), 4).unwrap();
        assert_eq!(
            u.ensure_exhaustive(),
            Err(Error::CapExceeded { size: 5, cap: 4 })
        );
        assert!(u.recapped(5).unwrap().ensure_exhaustive().is_ok());
    }

    #[test]
    fn algebra_and_rendering() {
        let u = Universe::new(["a", "b", "c", "d"]).unwrap();
        let x = Subset::from_labels(&u, ["c", "a"]).unwrap();
        let y = Subset::from_labels(&u, ["b", "c"]).unwrap();
        assert_eq!(x.to_string(), "{a,c}");
        assert_eq!((&x | &y).to_string(), "{a,b,c}");
        assert_eq!((&x & &y).to_string(), "{c}");
        assert_eq!((&x - &y).to_string(), "{a}");
        assert_eq!((!&x).to_string(), "{b,d}");
        assert_eq!(Subset::empty(&u).to_string(), "{}");
        assert!(Subset::from_mask(&u, 0b1_0000).is_err());
        assert_eq!(
            Subset::from_labels(&u, ["z"]).unwrap_err(),
            Error::UnknownElement("z".into())
        );
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let u = Universe::new(["a", "b"]).unwrap();
        let v = Universe::new(["a", "c"]).unwrap();
        let x = Subset::full(&u);
        let y = Subset::full(&v);
        assert_eq!(x.try_union(&y), Err(Error::UniverseMismatch));
        // equal labels count as the same universe even across allocations
        let w = Universe::new(["a", "b"]).unwrap();
        assert!(x.is_subset(&Subset::full(&w)).unwrap());
    }

    #[test]
    #[should_panic(expected = "different universes")]
    fn operator_panics_on_mismatch() {
        let u = Universe::new(["a"]).unwrap();
        let v = Universe::new(["b"]).unwrap();
        let _ = &Subset::full(&u) | &Subset::full(&v);
    }

    #[test]
    fn lex_order_of_masks() {
        use std::cmp::Ordering;
        // {0,3} before {1,2}, {0,1,2} before {0,3}
        assert_eq!(lex_cmp(0b1001, 0b0110), Ordering::Less);
        assert_eq!(lex_cmp(0b0111, 0b1001), Ordering::Less);
    }
}
