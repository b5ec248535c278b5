//! Matroids over an explicit independent-set family.
//!
//! Besides the matroid itself this module holds the three axiom checkers used to
//! move between descriptions: independent sets (I1-I3), support sets (S1-S3)
//! and closed sets (F1-F3). Each checker reports the first failure it meets in
//! ascending mask order, with the sets and element that exhibit it.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::setfam::{self, SetFamily};
use crate::universe::{elements, ensure_same, Subset, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    I1,
    I2,
    I3,
    S1,
    S2,
    S3,
    F1,
    F2,
    F3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Up to two sets and one element exhibiting an axiom failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: Option<Subset>,
    pub second: Option<Subset>,
    pub element: Option<String>,
}

impl Witness {
    fn none() -> Self {
        Witness {
            first: None,
            second: None,
            element: None,
        }
    }

    fn sets(universe: &Arc<Universe>, first: u64, second: Option<u64>) -> Self {
        Witness {
            first: Some(Subset::from_mask_unchecked(universe, first)),
            second: second.map(|m| Subset::from_mask_unchecked(universe, m)),
            element: None,
        }
    }

    fn with_element(mut self, universe: &Universe, index: usize) -> Self {
        self.element = Some(universe.label(index).to_string());
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(x) = &self.first {
            parts.push(format!("X={x}"));
        }
        if let Some(y) = &self.second {
            parts.push(format!("Y={y}"));
        }
        if let Some(e) = &self.element {
            parts.push(format!("e={e}"));
        }
        if parts.is_empty() {
            f.write_str("family=empty")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    /// Present exactly when the axiom failed.
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn from_check(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomReport { axiom, witness }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "AXIOM {} PASS", self.axiom),
            Some(w) => write!(f, "AXIOM {} FAIL {w}", self.axiom),
        }
    }
}

pub fn all_passed(reports: &[AxiomReport]) -> bool {
    reports.iter().all(AxiomReport::passed)
}

fn first_failure(reports: Vec<AxiomReport>) -> Result<()> {
    match reports.into_iter().find(|r| !r.passed()) {
        Some(r) => Err(Error::AxiomFailure(r)),
        None => Ok(()),
    }
}

fn indicator(fam: &SetFamily) -> Vec<bool> {
    let mut table = vec![false; 1usize << fam.universe().len()];
    for &m in fam.masks() {
        table[m as usize] = true;
    }
    table
}

/// `table[X]` = size of the largest member contained in `X`, or `-1` if none.
fn largest_member_within(member: &[bool], n: usize) -> Vec<i8> {
    let mut best: Vec<i8> = member
        .iter()
        .enumerate()
        .map(|(m, &hit)| if hit { m.count_ones() as i8 } else { -1 })
        .collect();
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..best.len() {
            if m & b != 0 {
                best[m] = best[m].max(best[m ^ b]);
            }
        }
    }
    best
}

/// `table[X]` = size of the smallest member containing `X`, or `i8::MAX` if none.
fn smallest_member_above(member: &[bool], n: usize) -> Vec<i8> {
    let mut best: Vec<i8> = member
        .iter()
        .enumerate()
        .map(|(m, &hit)| if hit { m.count_ones() as i8 } else { i8::MAX })
        .collect();
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..best.len() {
            if m & b == 0 {
                best[m] = best[m].min(best[m | b]);
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// independence axioms

fn check_i1(a: &SetFamily) -> Option<Witness> {
    (!a.contains_mask(0)).then(|| Witness::sets(a.universe(), 0, None))
}

/// Every one-element-smaller subset of every member is a member; by induction
/// this is the full hereditary property.
fn check_i2(a: &SetFamily) -> Option<Witness> {
    let u = a.universe();
    for &m in a.masks() {
        for e in elements(m) {
            let smaller = m & !(1 << e);
            if !a.contains_mask(smaller) {
                return Some(Witness::sets(u, m, Some(smaller)).with_element(u, e));
            }
        }
    }
    None
}

/// Augmentation by scanning every ordered pair of members.
pub(crate) fn check_i3_pairwise(a: &SetFamily) -> Option<Witness> {
    let masks = a.masks();
    for &small in masks {
        for &big in masks {
            if big.count_ones() <= small.count_ones() {
                continue;
            }
            let extends = elements(big & !small).any(|e| a.contains_mask(small | 1 << e));
            if !extends {
                return Some(Witness::sets(a.universe(), small, Some(big)));
            }
        }
    }
    None
}

/// Augmentation via a size table.
///
/// `small` fails to augment from some larger member exactly when a member larger
/// than `small` fits inside `small ∪ D`, where `D` holds the elements that cannot
/// be added to `small`. The witness is the same pair the pairwise scan finds.
fn check_i3_table(a: &SetFamily) -> Option<Witness> {
    let n = a.universe().len();
    let member = indicator(a);
    let largest = largest_member_within(&member, n);
    let full = a.universe().full_mask();
    for &small in a.masks() {
        let dead = (0..n)
            .filter(|&e| small >> e & 1 == 0 && !member[(small | 1 << e) as usize])
            .fold(0u64, |d, e| d | 1 << e);
        let room = (small | dead) & full;
        if largest[room as usize] > small.count_ones() as i8 {
            let big = a
                .masks()
                .iter()
                .copied()
                .find(|&m| m.count_ones() > small.count_ones() && m & !room == 0)
                .expect("table promised a larger member");
            return Some(Witness::sets(a.universe(), small, Some(big)));
        }
    }
    None
}

/// Evaluates I1 (∅ ∈ A), I2 (hereditary) and I3 (augmentation).
pub fn check_independence_axioms(a: &SetFamily) -> Vec<AxiomReport> {
    let i3 = if a.universe().ensure_exhaustive().is_ok() {
        check_i3_table(a)
    } else {
        check_i3_pairwise(a)
    };
    vec![
        AxiomReport::from_check(Axiom::I1, check_i1(a)),
        AxiomReport::from_check(Axiom::I2, check_i2(a)),
        AxiomReport::from_check(Axiom::I3, i3),
    ]
}

// ---------------------------------------------------------------------------
// support axioms

fn check_s2(s: &SetFamily) -> Option<Witness> {
    let u = s.universe();
    for &m in s.masks() {
        for e in elements(u.full_mask() & !m) {
            let bigger = m | 1 << e;
            if !s.contains_mask(bigger) {
                return Some(Witness::sets(u, m, Some(bigger)).with_element(u, e));
            }
        }
    }
    None
}

fn removable(s: &SetFamily, m: u64) -> u64 {
    elements(m)
        .filter(|&e| s.contains_mask(m & !(1 << e)))
        .fold(0, |k, e| k | 1 << e)
}

pub(crate) fn check_s3_pairwise(s: &SetFamily) -> Option<Witness> {
    for &big in s.masks() {
        let keep = removable(s, big);
        for &small in s.masks() {
            if big.count_ones() > small.count_ones() && (big & !small) & keep == 0 {
                return Some(Witness::sets(s.universe(), big, Some(small)));
            }
        }
    }
    None
}

/// `big` violates S3 exactly when some smaller member contains every element
/// whose removal keeps `big` in the family.
fn check_s3_table(s: &SetFamily) -> Option<Witness> {
    let n = s.universe().len();
    let smallest = smallest_member_above(&indicator(s), n);
    for &big in s.masks() {
        let keep = removable(s, big);
        if smallest[keep as usize] < big.count_ones() as i8 {
            let small = s
                .masks()
                .iter()
                .copied()
                .find(|&m| m.count_ones() < big.count_ones() && keep & !m == 0)
                .expect("table promised a smaller member");
            return Some(Witness::sets(s.universe(), big, Some(small)));
        }
    }
    None
}

/// Evaluates S1 (nonempty), S2 (upward closed) and S3 (exchange by removal).
pub fn check_support_axioms(s: &SetFamily) -> Vec<AxiomReport> {
    let s1 = s.is_empty().then(Witness::none);
    let s3 = if s.universe().ensure_exhaustive().is_ok() {
        check_s3_table(s)
    } else {
        check_s3_pairwise(s)
    };
    vec![
        AxiomReport::from_check(Axiom::S1, s1),
        AxiomReport::from_check(Axiom::S2, check_s2(s)),
        AxiomReport::from_check(Axiom::S3, s3),
    ]
}

// ---------------------------------------------------------------------------
// closed-set axioms

fn check_f2_pairwise(l: &SetFamily) -> Option<Witness> {
    let masks = l.masks();
    for (i, &a) in masks.iter().enumerate() {
        for &b in &masks[i + 1..] {
            if !l.contains_mask(a & b) {
                return Some(Witness::sets(l.universe(), a, Some(b)));
            }
        }
    }
    None
}

/// `table[X]` = intersection of all members containing `X`, `U` when there are none.
fn meet_table(member: &[bool], full: u64, n: usize) -> Vec<u64> {
    let mut meet: Vec<u64> = member
        .iter()
        .enumerate()
        .map(|(m, &hit)| if hit { m as u64 } else { full })
        .collect();
    for bit in 0..n {
        let b = 1usize << bit;
        for m in (0..meet.len()).rev() {
            if m & b == 0 {
                meet[m] &= meet[m | b];
            }
        }
    }
    meet
}

/// Checks that the differences `G − F` over the given covers partition `U − F`.
fn covers_partition(l: &SetFamily, f: u64, covers: &[u64]) -> Option<Witness> {
    let u = l.universe();
    let mut covered = 0u64;
    for &g in covers {
        let d = g & !f;
        if d & covered != 0 {
            let e = (d & covered).trailing_zeros() as usize;
            return Some(Witness::sets(u, f, Some(g)).with_element(u, e));
        }
        covered |= d;
    }
    let rest = u.full_mask() & !f;
    if covered != rest {
        let e = (rest & !covered).trailing_zeros() as usize;
        return Some(Witness::sets(u, f, None).with_element(u, e));
    }
    None
}

fn minimal_masks(mut candidates: Vec<u64>) -> Vec<u64> {
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .iter()
        .copied()
        .filter(|&x| candidates.iter().all(|&y| y == x || y & !x != 0))
        .collect()
}

fn check_f3_pairwise(l: &SetFamily) -> Option<Witness> {
    for &f in l.masks() {
        let supersets: Vec<u64> = l
            .masks()
            .iter()
            .copied()
            .filter(|&g| g != f && g & f == f)
            .collect();
        if let Some(w) = covers_partition(l, f, &minimal_masks(supersets)) {
            return Some(w);
        }
    }
    None
}

/// With F2 in force, the minimal proper supersets of `F` are the minimal sets
/// among `meet(F ∪ {e})` for `e ∉ F`.
fn check_f3_with_meets(l: &SetFamily, meet: &[u64], member: &[bool]) -> Option<Witness> {
    let u = l.universe();
    for &f in l.masks() {
        let candidates: Vec<u64> = elements(u.full_mask() & !f)
            .map(|e| meet[(f | 1 << e) as usize])
            .filter(|&g| member[g as usize])
            .collect();
        if let Some(w) = covers_partition(l, f, &minimal_masks(candidates)) {
            return Some(w);
        }
    }
    None
}

/// Evaluates F1 (U ∈ L), F2 (closed under ∩) and F3 (covers of each member
/// partition its complement).
pub fn check_closedset_axioms(l: &SetFamily) -> Result<Vec<AxiomReport>> {
    let u = l.universe().clone();
    u.ensure_exhaustive()?;
    let full = u.full_mask();
    let f1 = (!l.contains_mask(full)).then(|| Witness::sets(&u, full, None));

    let member = indicator(l);
    let meet = meet_table(&member, full, u.len());
    let f2_holds = meet.iter().all(|&m| m == full || member[m as usize]);
    let (f2, f3) = if f2_holds {
        (None, check_f3_with_meets(l, &meet, &member))
    } else {
        (check_f2_pairwise(l), check_f3_pairwise(l))
    };
    debug_assert_eq!(f2.is_none(), f2_holds);
    Ok(vec![
        AxiomReport::from_check(Axiom::F1, f1),
        AxiomReport::from_check(Axiom::F2, f2),
        AxiomReport::from_check(Axiom::F3, f3),
    ])
}

// ---------------------------------------------------------------------------
// the matroid

/// A matroid `(U, 𝐈)` given by its independent sets.
#[derive(Clone)]
pub struct Matroid {
    independents: SetFamily,
    // rank of every subset, indexed by mask
    rank: Vec<u8>,
}

impl Matroid {
    /// Validates I1-I3; the first failing axiom is returned as the error.
    pub fn new(independents: SetFamily) -> Result<Self> {
        independents.universe().ensure_exhaustive()?;
        first_failure(check_independence_axioms(&independents))?;
        let n = independents.universe().len();
        let rank = largest_member_within(&indicator(&independents), n)
            .into_iter()
            .map(|r| r as u8)
            .collect();
        Ok(Matroid { independents, rank })
    }

    /// The matroid whose independent sets are `Low(Min(S))`.
    ///
    /// Rejects families failing S1-S3, and faults if the result's support
    /// sets do not reproduce `S`.
    pub fn from_supports(supports: &SetFamily) -> Result<Self> {
        supports.universe().ensure_exhaustive()?;
        first_failure(check_support_axioms(supports))?;
        let independents = setfam::low(&setfam::min_elems(supports))?;
        let m = Matroid::new(independents).map_err(|e| match e {
            Error::AxiomFailure(r) => Error::theorem(
                "support-axioms",
                format!("Low(Min(S)) is not a matroid: {r}"),
            ),
            other => other,
        })?;
        let back = m.support_sets();
        if &back != supports {
            return Err(Error::theorem(
                "support-round-trip",
                format!("S(M) = {back} differs from S = {supports}"),
            ));
        }
        Ok(m)
    }

    /// Free matroid: every subset independent.
    pub fn free(universe: &Arc<Universe>) -> Result<Self> {
        Matroid::new(SetFamily::power_set(universe)?)
    }

    /// Uniform matroid `U(k, n)`: subsets of size at most `k`.
    pub fn uniform(universe: &Arc<Universe>, k: usize) -> Result<Self> {
        Matroid::new(SetFamily::filter_power_set(universe, |m| {
            m.count_ones() as usize <= k
        })?)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.independents.universe()
    }

    pub fn independents(&self) -> &SetFamily {
        &self.independents
    }

    pub fn is_independent(&self, x: &Subset) -> bool {
        self.independents.contains(x)
    }

    /// `Max(𝐈)`.
    pub fn bases(&self) -> SetFamily {
        let b = setfam::max_elems(&self.independents);
        let size = b.masks()[0].count_ones();
        assert!(
            b.masks().iter().all(|m| m.count_ones() == size),
            "bases of a matroid share one size"
        );
        b
    }

    pub fn rank(&self, x: &Subset) -> Result<usize> {
        ensure_same(self.universe(), x.universe())?;
        Ok(self.rank_mask(x.mask()))
    }

    pub fn rank_mask(&self, x: u64) -> usize {
        self.rank[x as usize] as usize
    }

    pub fn full_rank(&self) -> usize {
        self.rank_mask(self.universe().full_mask())
    }

    /// `cl(X) = {e : r(X ∪ {e}) = r(X)}`.
    pub fn closure(&self, x: &Subset) -> Result<Subset> {
        ensure_same(self.universe(), x.universe())?;
        Ok(Subset::from_mask_unchecked(
            self.universe(),
            self.closure_mask(x.mask()),
        ))
    }

    pub fn closure_mask(&self, x: u64) -> u64 {
        let r = self.rank_mask(x);
        (0..self.universe().len())
            .filter(|&e| self.rank_mask(x | 1 << e) == r)
            .fold(0, |c, e| c | 1 << e)
    }

    pub fn is_closed(&self, x: &Subset) -> Result<bool> {
        ensure_same(self.universe(), x.universe())?;
        Ok(self.closure_mask(x.mask()) == x.mask())
    }

    /// All fixed points of the closure operator.
    pub fn closed_sets(&self) -> SetFamily {
        SetFamily::filter_power_set(self.universe(), |m| self.closure_mask(m) == m)
            .expect("matroid universes are within the cap")
    }

    /// `Upp(B(M))`: every set containing a base.
    pub fn support_sets(&self) -> SetFamily {
        setfam::upp(&self.bases()).expect("matroid universes are within the cap")
    }

    /// Closed sets of rank `r(U) − 1`, cross-checked against `Max(Opp(S(M)))`.
    pub fn hyperplanes(&self) -> Result<SetFamily> {
        let by_rank = self.hyperplanes_by_rank();
        let by_supports = setfam::max_elems(&setfam::opp(&self.support_sets())?);
        if by_rank != by_supports {
            return Err(Error::theorem(
                "hyperplane-lemma",
                format!("closed sets of corank 1 {by_rank} differ from Max(Opp(S)) {by_supports}"),
            ));
        }
        Ok(by_rank)
    }

    /// Closed sets of rank `r(U) − 1`, straight from the definition.
    pub fn hyperplanes_by_rank(&self) -> SetFamily {
        match self.full_rank().checked_sub(1) {
            None => SetFamily::empty(self.universe()),
            Some(target) => SetFamily::filter_power_set(self.universe(), |m| {
                self.rank_mask(m) == target && self.closure_mask(m) == m
            })
            .expect("matroid universes are within the cap"),
        }
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid {{ independents: {} }}", self.independents)
    }
}

/// Free-function form of [`Matroid::from_supports`].
pub fn matroid_from_supports(supports: &SetFamily) -> Result<Matroid> {
    Matroid::from_supports(supports)
}
