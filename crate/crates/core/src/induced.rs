//! The support matroid `M(R)` of a partition and its closed-form descriptions.
//!
//! `S(R)` collects the sets whose upper approximation is the whole universe.
//! It satisfies the support-set axioms, so it determines a matroid; that matroid
//! turns out to be the partition matroid with capacity one per block. Every
//! structure here has a direct formula in terms of blocks, and
//! [`InducedMatroid`] checks each formula against the generic matroid engine
//! when it is built.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matroid::{self, Matroid};
use crate::rough::Partition;
use crate::setfam::{self, SetFamily};
use crate::universe::{ensure_same, lex_cmp, Subset, Universe};

fn meets_every_block(p: &Partition, x: u64) -> bool {
    p.block_masks().iter().all(|&b| b & x != 0)
}

/// `S(R)`: sets meeting every block.
pub fn support_family(p: &Partition) -> Result<SetFamily> {
    SetFamily::filter_power_set(p.universe(), |x| meets_every_block(p, x))
}

/// `S(R)` as `{X : R^*(X) = U}`.
pub fn supports_by_upper(p: &Partition) -> Result<SetFamily> {
    let full = p.universe().full_mask();
    SetFamily::filter_power_set(p.universe(), |x| p.upper_mask(x) == full)
}

/// `S(R)` as `{X : R_*(∼X) = ∅}`.
pub fn supports_by_lower_complement(p: &Partition) -> Result<SetFamily> {
    let full = p.universe().full_mask();
    SetFamily::filter_power_set(p.universe(), |x| p.lower_mask(!x & full) == 0)
}

/// `B(R)`: sets meeting every block in exactly one element.
pub fn induced_bases(p: &Partition) -> Result<SetFamily> {
    SetFamily::filter_power_set(p.universe(), |x| {
        p.block_masks().iter().all(|&b| (b & x).count_ones() == 1)
    })
}

/// `𝐈(R)`: sets meeting every block in at most one element.
pub fn induced_independents(p: &Partition) -> Result<SetFamily> {
    SetFamily::filter_power_set(p.universe(), |x| {
        p.block_masks().iter().all(|&b| (b & x).count_ones() <= 1)
    })
}

/// `r(X)`: the number of blocks meeting `X`.
pub fn induced_rank(p: &Partition, x: &Subset) -> Result<usize> {
    ensure_same(p.universe(), x.universe())?;
    Ok(p.blocks_meeting(x.mask()))
}

/// Sets `X ≠ U` with `R^*(X) = U − RN(x)` for every `x ∉ X`.
///
/// The quantifier is read with existential import: `X = U` satisfies it only
/// vacuously and is not a hyperplane, so it is excluded.
pub fn hyperplanes_by_predicate(p: &Partition) -> Result<SetFamily> {
    let full = p.universe().full_mask();
    SetFamily::filter_power_set(p.universe(), |x| {
        if x == full {
            return false;
        }
        let upper = p.upper_mask(x);
        (0..p.universe().len())
            .filter(|&e| x >> e & 1 == 0)
            .all(|e| upper == full & !p.block_of_index(e).mask())
    })
}

/// `{U − B : B ∈ U/R}`.
pub fn block_complements(p: &Partition) -> SetFamily {
    let full = p.universe().full_mask();
    SetFamily::from_masks_unchecked(
        p.universe(),
        p.block_masks().iter().map(|&b| full & !b).collect(),
    )
}

/// `H(R)` by the predicate, checked against block complements and `Max(Opp(S(R)))`.
pub fn induced_hyperplanes(p: &Partition) -> Result<SetFamily> {
    let by_predicate = hyperplanes_by_predicate(p)?;
    let complements = block_complements(p);
    if by_predicate != complements {
        return Err(Error::theorem(
            "hyperplanes",
            format!("predicate gives {by_predicate}, block complements give {complements}"),
        ));
    }
    let by_supports = setfam::max_elems(&setfam::opp(&support_family(p)?)?);
    if by_predicate != by_supports {
        return Err(Error::theorem(
            "hyperplanes",
            format!("predicate gives {by_predicate}, Max(Opp(S(R))) gives {by_supports}"),
        ));
    }
    Ok(by_predicate)
}

/// `L(R)`: every union of blocks, `∅` and `U` included.
pub fn induced_closed_family(p: &Partition) -> Result<SetFamily> {
    p.universe().ensure_exhaustive()?;
    let blocks = p.block_masks();
    let unions = (0..1u64 << blocks.len())
        .map(|pick| {
            blocks
                .iter()
                .enumerate()
                .filter(|(k, _)| pick >> k & 1 == 1)
                .fold(0, |acc, (_, &b)| acc | b)
        })
        .collect();
    Ok(SetFamily::from_masks_unchecked(p.universe(), unions))
}

/// The six equivalent descriptions of a closed set of `M(R)`, evaluated for one set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub set: Subset,
    pub closed: bool,
    pub union_of_blocks: bool,
    pub upper_fixed: bool,
    pub lower_fixed: bool,
    pub approximations_equal: bool,
    pub precise: bool,
    pub rough: bool,
}

impl EquivalenceReport {
    /// Evaluates all descriptions without asserting agreement.
    pub fn evaluate(p: &Partition, m: &Matroid, x: &Subset) -> Result<Self> {
        let lower = p.lower_approx(x)?;
        let upper = p.upper_approx(x)?;
        let inside = p
            .block_masks()
            .iter()
            .filter(|&&b| b & !x.mask() == 0)
            .fold(0, |acc, b| acc | b);
        Ok(EquivalenceReport {
            set: x.clone(),
            closed: m.is_closed(x)?,
            union_of_blocks: inside == x.mask(),
            upper_fixed: &upper == x,
            lower_fixed: &lower == x,
            approximations_equal: upper == lower,
            precise: p.is_precise(x)?,
            rough: p.is_rough(x)?,
        })
    }

    pub fn predicates(&self) -> [bool; 6] {
        [
            self.closed,
            self.union_of_blocks,
            self.upper_fixed,
            self.lower_fixed,
            self.approximations_equal,
            self.precise,
        ]
    }

    pub fn agree(&self) -> bool {
        let p = self.predicates();
        p.iter().all(|&v| v == p[0]) && self.rough == !self.precise
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X={} closed={} union={} upper-fixed={} lower-fixed={} equal={} precise={} rough={}",
            self.set,
            self.closed,
            self.union_of_blocks,
            self.upper_fixed,
            self.lower_fixed,
            self.approximations_equal,
            self.precise,
            self.rough
        )
    }
}

/// Outcome of comparing `S(R₁ ∩ R₂)` with `S(R₁) ∩ S(R₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub refined: Partition,
    pub refined_supports: usize,
    pub common_supports: usize,
    /// Shortest, then lexicographically first, set in the difference.
    pub witness: Option<Subset>,
}

impl InclusionReport {
    pub fn is_strict(&self) -> bool {
        self.witness.is_some()
    }
}

impl fmt::Display for InclusionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "THEOREM intersection-inclusion PASS ")?;
        match &self.witness {
            Some(w) => write!(f, "strict witness={w}"),
            None => write!(f, "equal"),
        }
    }
}

/// Checks `S(R₁ ∩ R₂) ⊆ S(R₁) ∩ S(R₂)` and reports whether it is strict.
pub fn intersection_inclusion_check(p1: &Partition, p2: &Partition) -> Result<InclusionReport> {
    let refined = p1.refine(p2)?;
    let inner = support_family(&refined)?;
    let common = support_family(p1)?.intersection(&support_family(p2)?)?;
    if let Some(&bad) = inner.masks().iter().find(|&&m| !common.contains_mask(m)) {
        return Err(Error::theorem(
            "intersection-inclusion",
            format!(
                "{} supports the refinement but not both inputs",
                p1.universe().render(bad)
            ),
        ));
    }
    let extra = common.difference(&inner)?;
    let witness = extra
        .masks()
        .iter()
        .copied()
        .min_by(|&a, &b| a.count_ones().cmp(&b.count_ones()).then(lex_cmp(a, b)))
        .map(|m| Subset::from_mask_unchecked(p1.universe(), m));
    Ok(InclusionReport {
        refined,
        refined_supports: inner.len(),
        common_supports: common.len(),
        witness,
    })
}

/// `M(R)` together with its block-formula families, each verified on construction.
#[derive(Debug, Clone)]
pub struct InducedMatroid {
    partition: Partition,
    matroid: Matroid,
    supports: SetFamily,
    bases: SetFamily,
    independents: SetFamily,
    hyperplanes: SetFamily,
    closed: SetFamily,
}

/// Names of the equivalences [`InducedMatroid::new`] verifies, in order.
pub const CONSTRUCTION_THEOREMS: [&str; 9] = [
    "support-hitting",
    "support-axioms",
    "support-matroid",
    "bases",
    "independents",
    "rank",
    "hyperplanes",
    "closed-sets",
    "closed-axioms",
];

fn agree(theorem: &'static str, what: &str, a: &SetFamily, b: &SetFamily) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::theorem(theorem, format!("{what}: {a} vs {b}")))
    }
}

impl InducedMatroid {
    pub fn new(partition: &Partition) -> Result<Self> {
        let p = partition;
        p.universe().ensure_exhaustive()?;

        let supports = support_family(p)?;
        agree(
            "support-hitting",
            "hitting sets vs R^*(X) = U",
            &supports,
            &supports_by_upper(p)?,
        )?;
        agree(
            "support-hitting",
            "hitting sets vs R_*(~X) = empty",
            &supports,
            &supports_by_lower_complement(p)?,
        )?;

        if let Some(r) = matroid::check_support_axioms(&supports)
            .into_iter()
            .find(|r| !r.passed())
        {
            return Err(Error::theorem("support-axioms", r.to_string()));
        }
        let matroid = Matroid::from_supports(&supports).map_err(|e| match e {
            Error::AxiomFailure(r) => Error::theorem("support-matroid", r.to_string()),
            other => other,
        })?;

        let bases = induced_bases(p)?;
        agree(
            "bases",
            "transversals vs Min(S)",
            &bases,
            &setfam::min_elems(&supports),
        )?;
        agree("bases", "transversals vs Max(I)", &bases, &matroid.bases())?;

        let independents = induced_independents(p)?;
        agree(
            "independents",
            "partial transversals vs Low(Min(S))",
            &independents,
            matroid.independents(),
        )?;

        let full = p.universe().full_mask();
        if let Some(x) = (0..=full).find(|&x| p.blocks_meeting(x) != matroid.rank_mask(x)) {
            return Err(Error::theorem(
                "rank",
                format!(
                    "X={}: {} blocks met, matroid rank {}",
                    p.universe().render(x),
                    p.blocks_meeting(x),
                    matroid.rank_mask(x)
                ),
            ));
        }

        let hyperplanes = induced_hyperplanes(p)?;
        agree(
            "hyperplanes",
            "block complements vs closed corank-1 sets",
            &hyperplanes,
            &matroid.hyperplanes()?,
        )?;

        let closed = induced_closed_family(p)?;
        agree(
            "closed-sets",
            "block unions vs closure fixed points",
            &closed,
            &matroid.closed_sets(),
        )?;
        if let Some(r) = matroid::check_closedset_axioms(&closed)?
            .into_iter()
            .find(|r| !r.passed())
        {
            return Err(Error::theorem("closed-axioms", r.to_string()));
        }

        Ok(InducedMatroid {
            partition: p.clone(),
            matroid,
            supports,
            bases,
            independents,
            hyperplanes,
            closed,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.partition.universe()
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn supports(&self) -> &SetFamily {
        &self.supports
    }

    pub fn bases(&self) -> &SetFamily {
        &self.bases
    }

    pub fn independents(&self) -> &SetFamily {
        &self.independents
    }

    pub fn hyperplanes(&self) -> &SetFamily {
        &self.hyperplanes
    }

    pub fn closed_sets(&self) -> &SetFamily {
        &self.closed
    }

    pub fn rank(&self, x: &Subset) -> Result<usize> {
        induced_rank(&self.partition, x)
    }

    /// Evaluates the six closed-set descriptions for `x`; disagreement is a fault.
    pub fn closed_iff_checks(&self, x: &Subset) -> Result<EquivalenceReport> {
        let report = EquivalenceReport::evaluate(&self.partition, &self.matroid, x)?;
        if report.agree() {
            Ok(report)
        } else {
            Err(Error::theorem("closed-iff", report.to_string()))
        }
    }
}

pub fn induced_matroid(p: &Partition) -> Result<InducedMatroid> {
    InducedMatroid::new(p)
}

/// One-shot form of [`InducedMatroid::closed_iff_checks`].
pub fn closed_iff_checks(p: &Partition, x: &Subset) -> Result<EquivalenceReport> {
    InducedMatroid::new(p)?.closed_iff_checks(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blocks() -> Partition {
        Partition::from_labels(&[["1", "2"], ["3", "4"]]).unwrap()
    }

    fn fam(u: &Arc<Universe>, sets: &[&[&str]]) -> SetFamily {
        SetFamily::from_labels(u, sets).unwrap()
    }

    fn set(u: &Arc<Universe>, labels: &[&str]) -> Subset {
        Subset::from_labels(u, labels).unwrap()
    }

    #[test]
    fn supports() {
        let p = two_blocks();
        let u = p.universe().clone();
        let s = support_family(&p).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s, supports_by_upper(&p).unwrap());
        assert_eq!(s, supports_by_lower_complement(&p).unwrap());
        assert_eq!(
            support_family(&Partition::indiscrete(&u)).unwrap().len(),
            15
        );
        assert_eq!(
            support_family(&Partition::discrete(&u)).unwrap(),
            fam(&u, &[&["1", "2", "3", "4"]])
        );
    }

    #[test]
    fn bases_and_independents() {
        let p = two_blocks();
        let u = p.universe().clone();
        assert_eq!(
            induced_bases(&p).unwrap(),
            fam(&u, &[&["1", "3"], &["1", "4"], &["2", "3"], &["2", "4"]])
        );
        assert_eq!(
            induced_bases(&Partition::discrete(&u)).unwrap(),
            fam(&u, &[&["1", "2", "3", "4"]])
        );
        assert_eq!(
            induced_bases(&Partition::indiscrete(&u)).unwrap(),
            fam(&u, &[&["1"], &["2"], &["3"], &["4"]])
        );
        assert_eq!(
            induced_independents(&p).unwrap(),
            fam(
                &u,
                &[
                    &[],
                    &["1"],
                    &["2"],
                    &["3"],
                    &["4"],
                    &["1", "3"],
                    &["1", "4"],
                    &["2", "3"],
                    &["2", "4"]
                ]
            )
        );
        assert_eq!(
            induced_independents(&Partition::discrete(&u)).unwrap(),
            SetFamily::power_set(&u).unwrap()
        );
        assert_eq!(
            induced_independents(&Partition::indiscrete(&u)).unwrap(),
            fam(&u, &[&[], &["1"], &["2"], &["3"], &["4"]])
        );
    }

    #[test]
    fn rank() {
        let p = two_blocks();
        let u = p.universe().clone();
        assert_eq!(induced_rank(&p, &set(&u, &["1", "2"])).unwrap(), 1);
        assert_eq!(induced_rank(&p, &Subset::empty(&u)).unwrap(), 0);
        assert_eq!(induced_rank(&p, &Subset::full(&u)).unwrap(), 2);
        let other = Universe::numbered(3).unwrap();
        assert_eq!(
            induced_rank(&p, &Subset::full(&other)).unwrap_err(),
            Error::UniverseMismatch
        );
    }

    #[test]
    fn hyperplanes() {
        let p = two_blocks();
        let u = p.universe().clone();
        assert_eq!(
            induced_hyperplanes(&p).unwrap(),
            fam(&u, &[&["1", "2"], &["3", "4"]])
        );
        let u3 = Universe::numbered(3).unwrap();
        assert_eq!(
            induced_hyperplanes(&Partition::discrete(&u3)).unwrap(),
            fam(&u3, &[&["1", "2"], &["1", "3"], &["2", "3"]])
        );
        assert_eq!(
            induced_hyperplanes(&Partition::indiscrete(&u)).unwrap(),
            fam(&u, &[&[]])
        );
    }

    #[test]
    fn predicate_excludes_the_vacuous_top() {
        // without the X ≠ U guard, U would satisfy the predicate vacuously
        let p = two_blocks();
        let h = hyperplanes_by_predicate(&p).unwrap();
        assert!(!h.contains(&Subset::full(p.universe())));
    }

    #[test]
    fn closed_family() {
        let p = two_blocks();
        let u = p.universe().clone();
        assert_eq!(
            induced_closed_family(&p).unwrap(),
            fam(&u, &[&[], &["1", "2"], &["3", "4"], &["1", "2", "3", "4"]])
        );
        assert_eq!(
            induced_closed_family(&Partition::discrete(&u)).unwrap(),
            SetFamily::power_set(&u).unwrap()
        );
        assert_eq!(
            induced_closed_family(&Partition::indiscrete(&u)).unwrap(),
            fam(&u, &[&[], &["1", "2", "3", "4"]])
        );
    }

    #[test]
    fn induced_matroids() {
        let p = two_blocks();
        let u = p.universe().clone();
        let m = induced_matroid(&p).unwrap();
        assert_eq!(m.independents().len(), 9);
        assert_eq!(m.matroid().full_rank(), 2);

        let free = induced_matroid(&Partition::discrete(&u)).unwrap();
        assert_eq!(free.independents(), &SetFamily::power_set(&u).unwrap());

        let uniform = induced_matroid(&Partition::indiscrete(&u)).unwrap();
        assert_eq!(uniform.matroid().full_rank(), 1);
        assert_eq!(
            uniform.independents(),
            Matroid::uniform(&u, 1).unwrap().independents()
        );
    }

    #[test]
    fn closed_iff() {
        let p = two_blocks();
        let u = p.universe().clone();
        let m = induced_matroid(&p).unwrap();
        let r = m.closed_iff_checks(&set(&u, &["1", "2"])).unwrap();
        assert_eq!(r.predicates(), [true; 6]);
        assert!(!r.rough);
        let r = closed_iff_checks(&p, &set(&u, &["1"])).unwrap();
        assert_eq!(r.predicates(), [false; 6]);
        assert!(r.rough);
        let r = m.closed_iff_checks(&Subset::empty(&u)).unwrap();
        assert_eq!(r.predicates(), [true; 6]);
    }

    #[test]
    fn intersection() {
        let p1 = two_blocks();
        let u = p1.universe().clone();
        let p2 = Partition::new(&u, &[set(&u, &["1", "3"]), set(&u, &["2", "4"])]).unwrap();
        let r = intersection_inclusion_check(&p1, &p2).unwrap();
        assert!(r.is_strict());
        assert_eq!(r.witness, Some(set(&u, &["1", "4"])));
        assert_eq!(r.refined, Partition::discrete(&u));
        assert_eq!(
            r.to_string(),
            "THEOREM intersection-inclusion PASS strict witness={1,4}"
        );

        let same = intersection_inclusion_check(&p1, &p1).unwrap();
        assert!(!same.is_strict());
        let coarse = intersection_inclusion_check(&p1, &Partition::indiscrete(&u)).unwrap();
        assert!(!coarse.is_strict());
        assert_eq!(coarse.refined_supports, 9);
        assert_eq!(coarse.common_supports, 9);
    }
}
