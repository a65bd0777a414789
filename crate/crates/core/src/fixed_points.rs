//! Fixed-point components of the `C*`-action on rank 2 and rank 3 moduli.
//!
//! Type (1,1,1) components `L_1 + L_2 + L_3` with `phi_21`, `phi_32` are
//! labelled either by the degrees `(l1, l2, l3)` in weight order or by
//!
//! ```text
//! m1 = l2 - l1 + 2g-2,   m2 = l3 - l2 + 2g-2,
//! ```
//!
//! subject to `m_i >= 0`, `2 m1 + m2 < 6g-6`, `m1 + 2 m2 < 6g-6`, and the
//! congruence that makes `l1 + l2 + l3 = d` solvable. Types (1,2) and (2,1)
//! have no intrinsic constraint list here; they are enumerated as the
//! targets the classifier actually reaches.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::admissibility::{enumerate_strata, invariant_range};
use crate::classifier::{classify, ClassifierInput};
use crate::types::{CaseTag, FixedComponent, Genus, Rank};

/// Dictionary failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedPointError {
    /// `3 l1 = d - 2 m1 - m2 + 3(2g-2)` has no integer solution.
    #[error("NoIntegerSolution: m = ({m1}, {m2}) is incompatible with degree {degree}")]
    NoIntegerSolution {
        /// First invariant.
        m1: i64,
        /// Second invariant.
        m2: i64,
        /// Ambient degree.
        degree: i64,
    },
}

/// `(m1, m2)` invariants of a type (1,1,1) Hodge bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MInvariants {
    /// `deg L2 - deg L1 + 2g-2`.
    pub m1: i64,
    /// `deg L3 - deg L2 + 2g-2`.
    pub m2: i64,
    /// Genus of the curve.
    pub genus: Genus,
    /// Total degree.
    pub degree: i64,
}

impl MInvariants {
    /// All constraints cutting out a nonempty component.
    pub fn satisfies_constraints(&self) -> bool {
        let bound = 3 * self.genus.canonical_degree();
        let (m1, m2) = (self.m1, self.m2);
        m1 >= 0
            && m2 >= 0
            && 2 * m1 + m2 < bound
            && m1 + 2 * m2 < bound
            && (m1 + 2 * m2 + self.degree).rem_euclid(3) == 0
    }
}

/// Weight-ordered degrees `(l1, l2, l3)` of a type (1,1,1) Hodge bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LInvariants {
    /// `(deg L1, deg L2, deg L3)`.
    pub l: [i64; 3],
    /// Genus of the curve.
    pub genus: Genus,
}

impl LInvariants {
    /// Component label.
    pub fn label(&self) -> FixedComponent {
        FixedComponent::Type111 { l: self.l }
    }
}

/// Solves `l2 = l1 + m1 - k`, `l3 = l2 + m2 - k`, `l1 + l2 + l3 = d` with
/// `k = 2g - 2`.
pub fn m_to_l(m: &MInvariants) -> Result<LInvariants, FixedPointError> {
    let k = m.genus.canonical_degree();
    let three_l1 = m.degree - 2 * m.m1 - m.m2 + 3 * k;
    if three_l1.rem_euclid(3) != 0 {
        return Err(FixedPointError::NoIntegerSolution {
            m1: m.m1,
            m2: m.m2,
            degree: m.degree,
        });
    }
    let l1 = three_l1 / 3;
    let l2 = l1 + m.m1 - k;
    let l3 = l2 + m.m2 - k;
    Ok(LInvariants {
        l: [l1, l2, l3],
        genus: m.genus,
    })
}

/// Inverse of [`m_to_l`].
pub fn l_to_m(l: &LInvariants) -> MInvariants {
    let k = l.genus.canonical_degree();
    let [l1, l2, l3] = l.l;
    MInvariants {
        m1: l2 - l1 + k,
        m2: l3 - l2 + k,
        genus: l.genus,
        degree: l1 + l2 + l3,
    }
}

/// True iff `(l1, l2, l3)` has total degree `degree`, nonnegative twisted
/// gaps `l_{i+1} - l_i + 2g-2`, and is stable: `l3 < mu` and
/// `(l2 + l3)/2 < mu`, i.e. `l1 + l2 - 2 l3 > 0` and `2 l1 - l2 - l3 > 0`.
pub fn validate_fixed_111(l: &LInvariants, degree: i64) -> bool {
    let k = l.genus.canonical_degree();
    let [l1, l2, l3] = l.l;
    l1 + l2 + l3 == degree
        && l2 - l1 + k >= 0
        && l3 - l2 + k >= 0
        && l1 + l2 - 2 * l3 > 0
        && 2 * l1 - l2 - l3 > 0
}

/// Every type (1,1,1) component of `M(3, degree)`, from the `(m1, m2)`
/// constraint region.
pub fn enumerate_type111(degree: i64, genus: Genus) -> Vec<LInvariants> {
    let bound = 3 * genus.canonical_degree();
    let mut out: Vec<LInvariants> = (0..bound)
        .flat_map(|m1| (0..bound).map(move |m2| (m1, m2)))
        .map(|(m1, m2)| MInvariants {
            m1,
            m2,
            genus,
            degree,
        })
        .filter(MInvariants::satisfies_constraints)
        .map(|m| m_to_l(&m).expect("congruence checked"))
        .collect();
    out.sort();
    out
}

/// Labels of the fixed-point components of `M(rank, degree)`.
///
/// Rank 2: `Min` and one `Rank2(d1)` for each `d < 2 d1 <= d + 2g-2`.
/// Rank 3: `Min`, every type (1,1,1) label, and the (1,2)/(2,1) labels
/// reached by the classifier from admissible strata.
pub fn enumerate_fixed_components(rank: Rank, degree: i64, genus: Genus) -> Vec<FixedComponent> {
    let mut out = BTreeSet::new();
    out.insert(FixedComponent::Min {
        rank: rank.get(),
        degree,
    });
    match rank {
        Rank::Two => {
            let k = genus.canonical_degree();
            for d1 in (degree.div_euclid(2) + 1)..=(degree + k).div_euclid(2) {
                out.insert(FixedComponent::Rank2 { d1 });
            }
        }
        Rank::Three => {
            out.extend(
                enumerate_type111(degree, genus)
                    .iter()
                    .map(LInvariants::label),
            );
            for stratum in enumerate_strata(rank, degree, genus) {
                if stratum.is_semistable() {
                    continue;
                }
                let range = invariant_range(&stratum).expect("rank 3 stratum");
                for invariant in range.feasible_invariants() {
                    let input = ClassifierInput::new(stratum.clone(), invariant);
                    if let Ok(outcome) = classify(&input) {
                        if matches!(outcome.case, CaseTag::C1_1 | CaseTag::C2_1) {
                            out.insert(outcome.component);
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> Genus {
        Genus::new(n).unwrap()
    }

    fn m(m1: i64, m2: i64, genus: i64, degree: i64) -> MInvariants {
        MInvariants {
            m1,
            m2,
            genus: g(genus),
            degree,
        }
    }

    #[test]
    fn m_to_l_examples() {
        assert_eq!(m_to_l(&m(1, 1, 2, 0)).unwrap().l, [1, 0, -1]);
        assert_eq!(m_to_l(&m(0, 0, 2, 0)).unwrap().l, [2, 0, -2]);
        for d in [-3, 0, 3, 6] {
            let l = m_to_l(&m(2, 2, 2, d)).unwrap();
            assert_eq!(l.l, [d / 3; 3]);
            assert!(!validate_fixed_111(&l, d));
        }
        assert_eq!(
            m_to_l(&m(1, 0, 2, 0)),
            Err(FixedPointError::NoIntegerSolution {
                m1: 1,
                m2: 0,
                degree: 0
            })
        );
    }

    #[test]
    fn validate_examples() {
        let l = |l| LInvariants { l, genus: g(2) };
        assert!(validate_fixed_111(&l([1, 0, -1]), 0));
        assert!(validate_fixed_111(&l([2, 0, -2]), 0));
        assert!(!validate_fixed_111(&l([0, 0, 0]), 0));
        assert!(!validate_fixed_111(&l([1, 0, -1]), 1));
        assert!(!validate_fixed_111(&l([3, 0, -3]), 0));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_fixed_components(Rank::Two, 1, g(2)),
            [
                FixedComponent::Min { rank: 2, degree: 1 },
                FixedComponent::Rank2 { d1: 1 }
            ]
        );
        assert_eq!(
            enumerate_fixed_components(Rank::Two, 0, g(2)),
            [
                FixedComponent::Min { rank: 2, degree: 0 },
                FixedComponent::Rank2 { d1: 1 }
            ]
        );
        let t111: Vec<[i64; 3]> = enumerate_type111(0, g(2)).iter().map(|l| l.l).collect();
        assert_eq!(t111, [[1, 0, -1], [2, 0, -2]]);
        let all = enumerate_fixed_components(Rank::Three, 0, g(2));
        assert!(all.contains(&FixedComponent::Type111 { l: [2, 0, -2] }));
        assert_eq!(all[0], FixedComponent::Min { rank: 3, degree: 0 });
    }

    #[test]
    fn constraint_region_matches_l_inequalities() {
        for genus in 2..=4 {
            for d in -4..=4 {
                for l in enumerate_type111(d, g(genus)) {
                    assert!(validate_fixed_111(&l, d));
                    assert!(l_to_m(&l).satisfies_constraints());
                }
            }
        }
    }
}
