//! Explicit families of subsets and the `Upp`/`Low`/`Max`/`Min`/`Opp` combinators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::universe::{ensure_same, Subset, Universe};

/// A deduplicated family of subsets, kept in ascending mask order.
#[derive(Clone)]
pub struct SetFamily {
    universe: Arc<Universe>,
    masks: Vec<u64>,
}

impl SetFamily {
    pub fn empty(universe: &Arc<Universe>) -> Self {
        SetFamily {
            universe: universe.clone(),
            masks: Vec::new(),
        }
    }

    pub fn new<'a, I>(universe: &Arc<Universe>, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Subset>,
    {
        let mut masks = Vec::new();
        for s in members {
            ensure_same(universe, s.universe())?;
            masks.push(s.mask());
        }
        Ok(Self::from_masks_unchecked(universe, masks))
    }

    pub fn from_masks<I: IntoIterator<Item = u64>>(
        universe: &Arc<Universe>,
        masks: I,
    ) -> Result<Self> {
        let masks = masks
            .into_iter()
            .map(|m| universe.check_mask(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_masks_unchecked(universe, masks))
    }

    pub(crate) fn from_masks_unchecked(universe: &Arc<Universe>, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        SetFamily {
            universe: universe.clone(),
            masks,
        }
    }

    /// Builds a family from label lists, e.g. `&[&["a", "b"][..], &[][..]]`.
    pub fn from_labels<B, S>(universe: &Arc<Universe>, sets: &[B]) -> Result<Self>
    where
        B: AsRef<[S]>,
        S: AsRef<str>,
    {
        let masks = sets
            .iter()
            .map(|s| Subset::from_labels(universe, s.as_ref()).map(|s| s.mask()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_masks_unchecked(universe, masks))
    }

    /// All `2^|U|` subsets.
    pub fn power_set(universe: &Arc<Universe>) -> Result<Self> {
        universe.ensure_exhaustive()?;
        Ok(SetFamily {
            universe: universe.clone(),
            masks: (0..=universe.full_mask()).collect(),
        })
    }

    /// Subsets of `universe` satisfying `pred`, by enumeration.
    pub fn filter_power_set<F>(universe: &Arc<Universe>, mut pred: F) -> Result<Self>
    where
        F: FnMut(u64) -> bool,
    {
        universe.ensure_exhaustive()?;
        Ok(SetFamily {
            universe: universe.clone(),
            masks: (0..=universe.full_mask()).filter(|&m| pred(m)).collect(),
        })
    }

    /// Reads the text format: one set per line, whitespace-separated elements,
    /// `-` for the empty set, `#` lines ignored.
    ///
    /// With `universe` unset, the universe is every listed element in
    /// first-appearance order.
    pub fn parse(text: &str, universe: Option<&Arc<Universe>>, cap: usize) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens == ["-"] {
                rows.push((n + 1, Vec::new()));
            } else if tokens.contains(&"-") {
                return Err(Error::Parse {
                    line: n + 1,
                    message: "`-` must stand alone on its line".into(),
                });
            } else {
                rows.push((n + 1, tokens));
            }
        }
        let universe = match universe {
            Some(u) => u.clone(),
            None => {
                let mut labels: Vec<&str> = Vec::new();
                for (_, row) in &rows {
                    for t in row {
                        if !labels.contains(t) {
                            labels.push(t);
                        }
                    }
                }
                if labels.is_empty() {
                    return Err(Error::Parse {
                        line: rows.last().map_or(1, |r| r.0),
                        message: "cannot infer a universe from a family with no elements".into(),
                    });
                }
                Universe::with_cap(labels, cap).map_err(|e| Error::Parse {
                    line: rows.last().map_or(1, |r| r.0),
                    message: e.to_string(),
                })?
            }
        };
        let mut masks = Vec::with_capacity(rows.len());
        for (line, row) in rows {
            let mut mask = 0u64;
            for t in row {
                let i = universe.index_of(t).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
                if mask >> i & 1 == 1 {
                    return Err(Error::Parse {
                        line,
                        message: format!("element `{t}` repeated within a set"),
                    });
                }
                mask |= 1 << i;
            }
            masks.push(mask);
        }
        Ok(Self::from_masks_unchecked(&universe, masks))
    }

    /// Inverse of [`SetFamily::parse`].
    pub fn to_file_format(&self) -> String {
        let mut out = String::new();
        for &m in &self.masks {
            if m == 0 {
                out.push('-');
            } else {
                let labels: Vec<&str> = crate::universe::elements(m)
                    .map(|i| self.universe.label(i))
                    .collect();
                out.push_str(&labels.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.masks
            .iter()
            .map(|&m| Subset::from_mask_unchecked(&self.universe, m))
    }

    pub fn contains(&self, s: &Subset) -> bool {
        crate::universe::same_universe(&self.universe, s.universe()) && self.contains_mask(s.mask())
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    /// Family inclusion.
    pub fn is_subfamily(&self, other: &SetFamily) -> Result<bool> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.masks.iter().all(|&m| other.contains_mask(m)))
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        ensure_same(&self.universe, &other.universe)?;
        let mut masks = self.masks.clone();
        masks.extend_from_slice(&other.masks);
        Ok(Self::from_masks_unchecked(&self.universe, masks))
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.retain(|m| other.contains_mask(m)))
    }

    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        ensure_same(&self.universe, &other.universe)?;
        Ok(self.retain(|m| !other.contains_mask(m)))
    }

    pub(crate) fn retain<F: FnMut(u64) -> bool>(&self, mut keep: F) -> SetFamily {
        SetFamily {
            universe: self.universe.clone(),
            masks: self.masks.iter().copied().filter(|&m| keep(m)).collect(),
        }
    }

    /// Membership table indexed by mask, `2^|U|` entries.
    fn indicator(&self) -> Vec<bool> {
        let mut table = vec![false; 1usize << self.universe.len()];
        for &m in &self.masks {
            table[m as usize] = true;
        }
        table
    }

    fn from_table(universe: &Arc<Universe>, table: &[bool]) -> SetFamily {
        SetFamily {
            universe: universe.clone(),
            masks: table
                .iter()
                .enumerate()
                .filter(|(_, &hit)| hit)
                .map(|(m, _)| m as u64)
                .collect(),
        }
    }

    fn exhaustive_ok(&self) -> bool {
        self.universe.ensure_exhaustive().is_ok()
    }
}

/// `table[X]` becomes true when some `Y ⊆ X` was marked.
fn close_upward(table: &mut [bool], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..table.len() {
            if m & b != 0 && table[m ^ b] {
                table[m] = true;
            }
        }
    }
}

/// `table[X]` becomes true when some `Y ⊇ X` was marked.
fn close_downward(table: &mut [bool], n: usize) {
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..table.len() {
            if m & b == 0 && table[m | b] {
                table[m] = true;
            }
        }
    }
}

/// `Upp(A)`: every subset containing some member of `A`.
pub fn upp(a: &SetFamily) -> Result<SetFamily> {
    a.universe.ensure_exhaustive()?;
    let mut table = a.indicator();
    close_upward(&mut table, a.universe.len());
    Ok(SetFamily::from_table(&a.universe, &table))
}

/// `Low(A)`: every subset contained in some member of `A`.
pub fn low(a: &SetFamily) -> Result<SetFamily> {
    a.universe.ensure_exhaustive()?;
    let mut table = a.indicator();
    close_downward(&mut table, a.universe.len());
    Ok(SetFamily::from_table(&a.universe, &table))
}

/// `Max(A)`: members not strictly contained in another member.
pub fn max_elems(a: &SetFamily) -> SetFamily {
    if a.exhaustive_ok() {
        // above[X]: some member lies strictly above X
        let n = a.universe.len();
        let mut above = a.indicator();
        close_downward(&mut above, n);
        a.retain(|m| (0..n).all(|i| m >> i & 1 == 1 || !above[(m | 1 << i) as usize]))
    } else {
        a.retain(|x| a.masks.iter().all(|&y| y == x || x & !y != 0))
    }
}

/// `Min(A)`: members with no other member strictly inside them.
pub fn min_elems(a: &SetFamily) -> SetFamily {
    if a.exhaustive_ok() {
        let n = a.universe.len();
        let mut below = a.indicator();
        close_upward(&mut below, n);
        a.retain(|m| (0..n).all(|i| m >> i & 1 == 0 || !below[(m & !(1 << i)) as usize]))
    } else {
        a.retain(|x| a.masks.iter().all(|&y| y == x || y & !x != 0))
    }
}

/// `Opp(A)`: the subsets of `U` not in `A`.
pub fn opp(a: &SetFamily) -> Result<SetFamily> {
    a.universe.ensure_exhaustive()?;
    let table = a.indicator();
    Ok(SetFamily {
        universe: a.universe.clone(),
        masks: (0..=a.universe.full_mask())
            .filter(|&m| !table[m as usize])
            .collect(),
    })
}

/// True when no member strictly contains another.
pub fn is_antichain(a: &SetFamily) -> bool {
    a.masks
        .iter()
        .all(|&x| a.masks.iter().all(|&y| x == y || x & !y != 0))
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.masks == other.masks && crate::universe::same_universe(&self.universe, &other.universe)
    }
}

impl Eq for SetFamily {}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, &m) in self.masks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&self.universe.render(m))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
