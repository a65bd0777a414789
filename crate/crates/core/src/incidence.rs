//! Incidence between Shatz strata (HN types) and Bialynicki-Birula strata
//! (fixed-point components reached by the limit).
//!
//! A stratum "meets" a component when some admissible value of its
//! auxiliary invariant flows into that component. Reachability only: no
//! intersection dimensions are recorded.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::admissibility::{enumerate_strata, invariant_range, AdmissibleStratum, InvariantRange};
use crate::classifier::{classify, ClassifierInput};
use crate::fixed_points::enumerate_fixed_components;
use crate::types::{FixedComponent, Genus, HNType, Invariant, LimitOutcome, Rank};

/// Errors from the coincidence checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    /// The check applies to another rank.
    #[error("check needs a rank {expected} table, got rank {got}")]
    RankMismatch {
        /// Rank the check handles.
        expected: Rank,
        /// Rank of the table.
        got: Rank,
    },
    /// A type (1,1,1) label in scope of the coincidence theorem is reached
    /// from somewhere else. Indicates a classifier bug.
    #[error("label t111:{},{},{} violates the coincidence: {reason}", label[0], label[1], label[2])]
    TheoremViolated {
        /// The offending label.
        label: [i64; 3],
        /// What went wrong.
        reason: &'static str,
    },
}

/// One Shatz stratum with every admissible invariant and its limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceRow {
    /// The stratum.
    pub stratum: AdmissibleStratum,
    /// Its admissible invariants.
    pub range: InvariantRange,
    /// `(invariant, limit)` pairs in the order of `range`.
    pub entries: Vec<(Invariant, LimitOutcome)>,
}

/// Full incidence relation for one `(rank, degree, genus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceTable {
    /// Rank.
    pub rank: Rank,
    /// Degree.
    pub degree: i64,
    /// Genus.
    pub genus: Genus,
    /// One row per admissible stratum, in enumeration order.
    pub rows: Vec<IncidenceRow>,
    /// Component -> HN types whose strata reach it.
    pub bb_index: BTreeMap<FixedComponent, BTreeSet<HNType>>,
}

impl IncidenceTable {
    /// Every `(stratum, invariant, outcome)` triple.
    pub fn outcomes(
        &self,
    ) -> impl Iterator<Item = (&AdmissibleStratum, &Invariant, &LimitOutcome)> {
        self.rows
            .iter()
            .flat_map(|row| row.entries.iter().map(move |(i, o)| (&row.stratum, i, o)))
    }

    /// The row of a given HN type.
    pub fn row(&self, hn: &HNType) -> Option<&IncidenceRow> {
        self.rows.iter().find(|r| r.stratum.hn() == hn)
    }
}

/// Classifies every admissible stratum over all of its admissible
/// invariants and indexes the outcomes by component.
pub fn build_table(rank: Rank, degree: i64, genus: Genus) -> IncidenceTable {
    let mut rows = Vec::new();
    let mut bb_index: BTreeMap<FixedComponent, BTreeSet<HNType>> = BTreeMap::new();
    for stratum in enumerate_strata(rank, degree, genus) {
        let range = match rank {
            Rank::Three => invariant_range(&stratum).expect("rank 3 stratum"),
            Rank::Two => InvariantRange::not_applicable(),
        };
        let entries: Vec<(Invariant, LimitOutcome)> = range
            .feasible_invariants()
            .into_iter()
            .map(|invariant| {
                let input = ClassifierInput::new(stratum.clone(), invariant);
                let outcome = classify(&input).expect("admissible invariants always classify");
                (invariant, outcome)
            })
            .collect();
        for (_, outcome) in &entries {
            bb_index
                .entry(outcome.component.clone())
                .or_default()
                .insert(stratum.hn().clone());
        }
        rows.push(IncidenceRow {
            stratum,
            range,
            entries,
        });
    }
    IncidenceTable {
        rank,
        degree,
        genus,
        rows,
        bb_index,
    }
}

/// In rank 2 the stratum -> component map is a bijection: the semistable
/// stratum onto `Min` and `[(1,d1),(1,d-d1)]` onto `Rank2(d1)`.
pub fn check_rank2_coincidence(table: &IncidenceTable) -> Result<bool, IncidenceError> {
    if table.rank != Rank::Two {
        return Err(IncidenceError::RankMismatch {
            expected: Rank::Two,
            got: table.rank,
        });
    }
    let components: BTreeSet<FixedComponent> =
        enumerate_fixed_components(Rank::Two, table.degree, table.genus)
            .into_iter()
            .collect();
    let mut image = BTreeSet::new();
    for row in &table.rows {
        let [(_, outcome)] = row.entries.as_slice() else {
            return Ok(false);
        };
        let expected = match row.stratum.hn().steps() {
            [_] => FixedComponent::Min {
                rank: 2,
                degree: table.degree,
            },
            [first, _] => FixedComponent::Rank2 { d1: first.degree },
            _ => return Ok(false),
        };
        if outcome.component != expected || !image.insert(expected) {
            return Ok(false);
        }
    }
    Ok(image == components)
}

/// For every type (1,1,1) label with `l1 - l3 > 2g - 2` in the table,
/// checks that exactly one stratum reaches it, that this stratum's HN type
/// is the label itself, and that all of its admissible invariants land
/// there. Returns the labels verified.
pub fn check_hn_bb_theorem(table: &IncidenceTable) -> Result<Vec<[i64; 3]>, IncidenceError> {
    if table.rank != Rank::Three {
        return Err(IncidenceError::RankMismatch {
            expected: Rank::Three,
            got: table.rank,
        });
    }
    let k = table.genus.canonical_degree();
    let mut verified = Vec::new();
    for (component, preimage) in &table.bb_index {
        let FixedComponent::Type111 { l } = component else {
            continue;
        };
        let label = *l;
        if label[0] - label[2] <= k {
            continue;
        }
        let violated = |reason| IncidenceError::TheoremViolated { label, reason };
        if !(label[0] > label[1] && label[1] > label[2]) {
            return Err(violated("degrees are not strictly decreasing"));
        }
        let own = HNType::from_line_degrees(&label).expect("three line bundles");
        if preimage.len() != 1 || !preimage.contains(&own) {
            return Err(violated("reached from a stratum of a different HN type"));
        }
        let row = table
            .row(&own)
            .ok_or(violated("matching stratum is missing"))?;
        if row.entries.iter().any(|(_, o)| &o.component != component) {
            return Err(violated("matching stratum also flows elsewhere"));
        }
        verified.push(label);
    }
    Ok(verified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CaseTag;
    use alloc::string::ToString;

    fn g(n: i64) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn rank3_degree0_genus2() {
        let t = build_table(Rank::Three, 0, g(2));
        assert_eq!(t.rows.len(), 5);
        let row = t.row(&"2:1,1:-1".parse().unwrap()).unwrap();
        assert_eq!(row.entries.len(), 1);
        assert_eq!(row.entries[0].1.case, CaseTag::C2_2);
        assert_eq!(check_hn_bb_theorem(&t).unwrap(), [[2, 0, -2]]);
        let pre = &t.bb_index[&FixedComponent::Type111 { l: [2, 0, -2] }];
        assert_eq!(
            pre.iter().map(ToString::to_string).collect::<Vec<_>>(),
            ["1:2,1:0,1:-2"]
        );
    }

    #[test]
    fn one_stratum_meets_two_components() {
        let t = build_table(Rank::Three, 1, g(3));
        let row = t.row(&"1:1,2:0".parse().unwrap()).unwrap();
        let targets: BTreeSet<_> = row
            .entries
            .iter()
            .map(|(_, o)| o.component.to_string())
            .collect();
        assert_eq!(
            targets.into_iter().collect::<Vec<_>>(),
            ["t111:1,0,0", "t12:1|0"]
        );
        let to_t12 = row
            .entries
            .iter()
            .filter(|(_, o)| o.component.to_string() == "t12:1|0")
            .count();
        assert_eq!(to_t12, 3);
    }

    #[test]
    fn rank2_bijection() {
        for (d, genus) in [(1, 2), (0, 2), (3, 4)] {
            let t = build_table(Rank::Two, d, g(genus));
            assert_eq!(check_rank2_coincidence(&t), Ok(true));
        }
        let t = build_table(Rank::Two, 1, g(2));
        assert!(check_hn_bb_theorem(&t).is_err());
        let t3 = build_table(Rank::Three, 1, g(2));
        assert!(check_rank2_coincidence(&t3).is_err());
    }

    #[test]
    fn semistable_row_is_the_only_way_to_min() {
        let t = build_table(Rank::Three, 2, g(3));
        let min = FixedComponent::Min { rank: 3, degree: 2 };
        let pre = &t.bb_index[&min];
        assert_eq!(pre.len(), 1);
        assert!(pre.iter().next().unwrap().is_semistable());
    }
}
