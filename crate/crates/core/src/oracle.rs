//! Brute-force recomputation of every induced structure from first definitions.
//!
//! Nothing here calls the approximation operators of [`Partition`], the family
//! combinators or the matroid engine. The partition is read once to build the
//! relation `xRy`; from there equivalence classes, approximations, supports,
//! independents, bases, rank, closure, closed sets and hyperplanes are all
//! recomputed element by element and pair by pair on [`Subset`] values.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::induced::{self, EquivalenceReport};
use crate::matroid::Matroid;
use crate::rough::Partition;
use crate::setfam::{self, SetFamily};
use crate::universe::{Subset, Universe};

/// Largest universe [`sweep_all_partitions`] accepts.
pub const MAX_SWEEP: usize = 7;

/// Every subset of `u` in ascending mask order.
pub fn enumerate_subsets(u: &Arc<Universe>) -> Result<impl Iterator<Item = Subset> + '_> {
    u.ensure_exhaustive()?;
    Ok((0..=u.full_mask()).map(move |m| Subset::from_mask_unchecked(u, m)))
}

/// The relation as an explicit boolean matrix.
struct Relation {
    universe: Arc<Universe>,
    related: Vec<Vec<bool>>,
}

impl Relation {
    fn of(p: &Partition) -> Self {
        let u = p.universe().clone();
        let blocks: Vec<Subset> = p.blocks().collect();
        let n = u.len();
        let related = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| blocks.iter().any(|b| b.contains(x) && b.contains(y)))
                    .collect()
            })
            .collect();
        Relation {
            universe: u,
            related,
        }
    }

    /// `RN(x) = {y : xRy}`.
    fn class(&self, x: usize) -> Subset {
        (0..self.universe.len())
            .filter(|&y| self.related[x][y])
            .fold(Subset::empty(&self.universe), |s, y| s.with(y))
    }

    fn upper(&self, set: &Subset) -> Subset {
        (0..self.universe.len())
            .filter(|&x| self.class(x).indices().any(|y| set.contains(y)))
            .fold(Subset::empty(&self.universe), |s, x| s.with(x))
    }

    fn lower(&self, set: &Subset) -> Subset {
        (0..self.universe.len())
            .filter(|&x| self.class(x).indices().all(|y| set.contains(y)))
            .fold(Subset::empty(&self.universe), |s, x| s.with(x))
    }
}

fn strict_subset(a: &Subset, b: &Subset) -> bool {
    a != b && a.indices().all(|i| b.contains(i))
}

fn subset_of(a: &Subset, b: &Subset) -> bool {
    a.indices().all(|i| b.contains(i))
}

fn to_family(u: &Arc<Universe>, sets: &[Subset]) -> SetFamily {
    SetFamily::new(u, sets).expect("oracle sets share the universe")
}

/// `S(R) = {X : R^*(X) = U}`, with `R^*` evaluated per element.
pub fn brute_force_supports(p: &Partition) -> Result<SetFamily> {
    let u = p.universe();
    let rel = Relation::of(p);
    let full = Subset::full(u);
    let sets: Vec<Subset> = enumerate_subsets(u)?
        .filter(|x| rel.upper(x) == full)
        .collect();
    Ok(to_family(u, &sets))
}

/// Every structure of `M(R)`, recomputed from definitions.
pub struct OracleModel {
    universe: Arc<Universe>,
    pub supports: Vec<Subset>,
    pub independents: Vec<Subset>,
    pub bases: Vec<Subset>,
    pub closed: Vec<Subset>,
    pub hyperplanes: Vec<Subset>,
    // indexed by mask
    rank: Vec<usize>,
    lower: Vec<Subset>,
    upper: Vec<Subset>,
}

impl OracleModel {
    pub fn build(p: &Partition) -> Result<Self> {
        let u = p.universe().clone();
        let rel = Relation::of(p);
        let all: Vec<Subset> = enumerate_subsets(&u)?.collect();
        let full = Subset::full(&u);
        let upper: Vec<Subset> = all.iter().map(|x| rel.upper(x)).collect();
        let lower: Vec<Subset> = all.iter().map(|x| rel.lower(x)).collect();

        let supports: Vec<Subset> = all
            .iter()
            .zip(&upper)
            .filter(|(_, up)| **up == full)
            .map(|(x, _)| x.clone())
            .collect();

        // I(R) = Low(Min(S(R)))
        let minimal: Vec<&Subset> = supports
            .iter()
            .filter(|x| !supports.iter().any(|y| strict_subset(y, x)))
            .collect();
        let independents: Vec<Subset> = all
            .iter()
            .filter(|x| minimal.iter().any(|m| subset_of(x, m)))
            .cloned()
            .collect();

        let bases: Vec<Subset> = independents
            .iter()
            .filter(|x| !independents.iter().any(|y| strict_subset(x, y)))
            .cloned()
            .collect();

        let rank: Vec<usize> = all
            .iter()
            .map(|x| {
                independents
                    .iter()
                    .filter(|i| subset_of(i, x))
                    .map(Subset::len)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let rank_of = |s: &Subset| rank[s.mask() as usize];

        let closure = |x: &Subset| -> Subset {
            (0..u.len())
                .filter(|&e| rank_of(&x.with(e)) == rank_of(x))
                .fold(Subset::empty(&u), |c, e| c.with(e))
        };
        let closed: Vec<Subset> = all.iter().filter(|x| closure(x) == **x).cloned().collect();
        let top = rank_of(&full);
        let hyperplanes: Vec<Subset> = closed
            .iter()
            .filter(|h| top >= 1 && rank_of(h) == top - 1)
            .cloned()
            .collect();

        Ok(OracleModel {
            universe: u,
            supports,
            independents,
            bases,
            closed,
            hyperplanes,
            rank,
            lower,
            upper,
        })
    }

    pub fn rank(&self, x: &Subset) -> usize {
        self.rank[x.mask() as usize]
    }

    pub fn lower(&self, x: &Subset) -> &Subset {
        &self.lower[x.mask() as usize]
    }

    pub fn upper(&self, x: &Subset) -> &Subset {
        &self.upper[x.mask() as usize]
    }

    pub fn family(&self, sets: &[Subset]) -> SetFamily {
        to_family(&self.universe, sets)
    }
}

/// Disagreement between a fast route and the oracle for one structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diff {
    pub name: String,
    pub only_in_fast: SetFamily,
    pub only_in_oracle: SetFamily,
}

impl Diff {
    pub fn compare(name: impl Into<String>, fast: &SetFamily, oracle: &SetFamily) -> Self {
        Diff {
            name: name.into(),
            only_in_fast: fast.difference(oracle).expect("same universe"),
            only_in_oracle: oracle.difference(fast).expect("same universe"),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.only_in_fast.is_empty() && self.only_in_oracle.is_empty()
    }
}

impl fmt::Display for Diff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            write!(f, "DIFF {} PASS", self.name)
        } else {
            write!(
                f,
                "DIFF {} FAIL only-in-fast={} only-in-oracle={}",
                self.name, self.only_in_fast, self.only_in_oracle
            )
        }
    }
}

fn rank_diff<F>(name: &str, u: &Arc<Universe>, oracle: &OracleModel, fast: F) -> Diff
where
    F: Fn(&Subset) -> usize,
{
    // sets where the fast rank overshoots / undershoots the oracle
    let mut over = Vec::new();
    let mut under = Vec::new();
    for x in enumerate_subsets(u).expect("checked by caller") {
        let (a, b) = (fast(&x), oracle.rank(&x));
        if a > b {
            over.push(x);
        } else if a < b {
            under.push(x);
        }
    }
    Diff {
        name: name.into(),
        only_in_fast: to_family(u, &over),
        only_in_oracle: to_family(u, &under),
    }
}

/// Compares every fast route for `M(R)` against the oracle; all diffs clean on success.
pub fn cross_validate(p: &Partition) -> Result<Vec<Diff>> {
    let u = p.universe().clone();
    u.ensure_exhaustive()?;
    let oracle = OracleModel::build(p)?;
    let o_supports = oracle.family(&oracle.supports);
    let o_indep = oracle.family(&oracle.independents);
    let o_bases = oracle.family(&oracle.bases);
    let o_closed = oracle.family(&oracle.closed);
    let o_hyper = oracle.family(&oracle.hyperplanes);

    let supports = induced::support_family(p)?;
    let min_s = setfam::min_elems(&supports);
    let mut diffs = vec![
        Diff::compare("S/hitting", &supports, &o_supports),
        Diff::compare("S/upper", &induced::supports_by_upper(p)?, &o_supports),
        Diff::compare(
            "S/lower-complement",
            &induced::supports_by_lower_complement(p)?,
            &o_supports,
        ),
        Diff::compare("B/transversals", &induced::induced_bases(p)?, &o_bases),
        Diff::compare("B/min-supports", &min_s, &o_bases),
        Diff::compare(
            "I/partial-transversals",
            &induced::induced_independents(p)?,
            &o_indep,
        ),
        Diff::compare("I/low-min-supports", &setfam::low(&min_s)?, &o_indep),
        rank_diff("rank/blocks-met", &u, &oracle, |x| {
            p.blocks_meeting(x.mask())
        }),
        Diff::compare(
            "H/predicate",
            &induced::hyperplanes_by_predicate(p)?,
            &o_hyper,
        ),
        Diff::compare(
            "H/block-complements",
            &induced::block_complements(p),
            &o_hyper,
        ),
        Diff::compare(
            "H/max-opp-supports",
            &setfam::max_elems(&setfam::opp(&supports)?),
            &o_hyper,
        ),
        Diff::compare(
            "L/block-unions",
            &induced::induced_closed_family(p)?,
            &o_closed,
        ),
    ];

    match Matroid::from_supports(&supports) {
        Ok(m) => {
            diffs.push(Diff::compare("B/generic", &m.bases(), &o_bases));
            diffs.push(Diff::compare("I/generic", m.independents(), &o_indep));
            diffs.push(rank_diff("rank/generic", &u, &oracle, |x| {
                m.rank_mask(x.mask())
            }));
            diffs.push(Diff::compare(
                "H/generic",
                &m.hyperplanes_by_rank(),
                &o_hyper,
            ));
            diffs.push(Diff::compare("L/generic", &m.closed_sets(), &o_closed));
            diffs.extend(closed_iff_diffs(p, &m, &o_closed)?);
        }
        Err(e) if e.is_check_failure() => {
            diffs.push(Diff {
                name: "M(R)/construction".into(),
                only_in_fast: supports.clone(),
                only_in_oracle: SetFamily::empty(&u),
            });
        }
        Err(e) => return Err(e),
    }

    // the oracle's own operators must match the partition's
    let mut op_mismatch = Vec::new();
    for x in enumerate_subsets(&u)? {
        if oracle.lower(&x) != &p.lower_approx(&x)? || oracle.upper(&x) != &p.upper_approx(&x)? {
            op_mismatch.push(x);
        }
    }
    diffs.push(Diff {
        name: "approx/operators".into(),
        only_in_fast: to_family(&u, &op_mismatch),
        only_in_oracle: SetFamily::empty(&u),
    });

    Ok(diffs)
}

fn closed_iff_diffs(p: &Partition, m: &Matroid, o_closed: &SetFamily) -> Result<Vec<Diff>> {
    let u = p.universe();
    let reports = enumerate_subsets(u)?
        .map(|x| EquivalenceReport::evaluate(p, m, &x))
        .collect::<Result<Vec<_>>>()?;
    type Pick = fn(&EquivalenceReport) -> bool;
    let routes: [(&str, Pick); 7] = [
        ("closed-iff/closed", |r| r.closed),
        ("closed-iff/union-of-blocks", |r| r.union_of_blocks),
        ("closed-iff/upper-fixed", |r| r.upper_fixed),
        ("closed-iff/lower-fixed", |r| r.lower_fixed),
        ("closed-iff/approximations-equal", |r| {
            r.approximations_equal
        }),
        ("closed-iff/precise", |r| r.precise),
        ("closed-iff/not-rough", |r| !r.rough),
    ];
    Ok(routes
        .iter()
        .map(|(name, pick)| {
            let sets: Vec<Subset> = reports
                .iter()
                .filter(|r| pick(r))
                .map(|r| r.set.clone())
                .collect();
            Diff::compare(*name, &to_family(u, &sets), o_closed)
        })
        .collect())
}

pub fn all_clean(diffs: &[Diff]) -> bool {
    diffs.iter().all(Diff::is_clean)
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub n: usize,
    pub partitions: usize,
    pub failures: usize,
    /// First failing partition in enumeration order, with its dirty diffs.
    pub first_failure: Option<(Partition, Vec<Diff>)>,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SWEEP n={} partitions={} failures={}",
            self.n, self.partitions, self.failures
        )
    }
}

/// Cross-validates every partition of `{1..n}`.
pub fn sweep_all_partitions(n: usize) -> Result<SweepSummary> {
    if !(1..=MAX_SWEEP).contains(&n) {
        return Err(Error::OutOfRange {
            what: "sweep size",
            value: n,
            min: 1,
            max: MAX_SWEEP,
        });
    }
    let u = Universe::numbered(n)?;
    let partitions: Vec<Partition> = Partition::enumerate(&u).collect();
    let outcomes = partitions
        .par_iter()
        .map(cross_validate)
        .collect::<Result<Vec<_>>>()?;
    let failures = outcomes.iter().filter(|d| !all_clean(d)).count();
    let first_failure = partitions
        .iter()
        .zip(&outcomes)
        .find(|(_, d)| !all_clean(d))
        .map(|(p, d)| {
            (
                p.clone(),
                d.iter().filter(|d| !d.is_clean()).cloned().collect(),
            )
        });
    Ok(SweepSummary {
        n,
        partitions: partitions.len(),
        failures,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_mask_order() {
        let u = Universe::numbered(2).unwrap();
        let all: Vec<String> = enumerate_subsets(&u)
            .unwrap()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(all, ["{}", "{1}", "{2}", "{1,2}"]);
        let u4 = Universe::numbered(4).unwrap();
        let masks: Vec<u64> = enumerate_subsets(&u4).unwrap().map(|s| s.mask()).collect();
        assert_eq!(masks, (0..16).collect::<Vec<_>>());
        let wide = Universe::with_cap((0..6).map(|i| i.to_string()), 5).unwrap();
        assert!(enumerate_subsets(&wide).is_err());
    }

    #[test]
    fn oracle_supports() {
        let p = Partition::from_labels(&[["1", "2"], ["3", "4"]]).unwrap();
        let s = brute_force_supports(&p).unwrap();
        assert_eq!(s.len(), 9);
        let u = p.universe().clone();
        assert_eq!(
            brute_force_supports(&Partition::discrete(&u))
                .unwrap()
                .masks(),
            &[0b1111]
        );
        assert_eq!(
            brute_force_supports(&Partition::indiscrete(&u))
                .unwrap()
                .masks(),
            (1..16).collect::<Vec<u64>>()
        );
    }

    #[test]
    fn clean_on_small_cases() {
        let p = Partition::from_labels(&[["1", "2"], ["3", "4"]]).unwrap();
        let diffs = cross_validate(&p).unwrap();
        assert!(all_clean(&diffs), "{diffs:?}");
        assert_eq!(diffs.len(), 25);
        let u5 = Universe::numbered(5).unwrap();
        assert!(all_clean(
            &cross_validate(&Partition::discrete(&u5)).unwrap()
        ));
    }

    #[test]
    fn sweep_bounds_and_counts() {
        assert!(matches!(
            sweep_all_partitions(0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            sweep_all_partitions(8),
            Err(Error::OutOfRange { .. })
        ));
        let one = sweep_all_partitions(1).unwrap();
        assert_eq!((one.partitions, one.failures), (1, 0));
        let four = sweep_all_partitions(4).unwrap();
        assert_eq!((four.partitions, four.failures), (15, 0));
        assert_eq!(four.to_string(), "SWEEP n=4 partitions=15 failures=0");
    }

    #[test]
    fn diff_reports_both_sides() {
        let u = Universe::numbered(2).unwrap();
        let a = SetFamily::from_masks(&u, [0, 1]).unwrap();
        let b = SetFamily::from_masks(&u, [1, 3]).unwrap();
        let d = Diff::compare("demo", &a, &b);
        assert!(!d.is_clean());
        assert_eq!(
            d.to_string(),
            "DIFF demo FAIL only-in-fast={{}} only-in-oracle={{1,2}}"
        );
    }
}
