//! Slope bounds on the HN types that occur for semistable Higgs bundles,
//! enumeration of the resulting strata, and the feasible range of the
//! auxiliary invariant (`mu(I)`, `mu(N)` or the alignment flag) that the
//! rank 3 limit classification needs.
//!
//! For a semistable rank 3 Higgs bundle with HN slopes
//! `mu_1 >= mu_2 >= mu_3`, both gaps `mu_1 - mu_2` and `mu_2 - mu_3` lie in
//! `[0, 2g-2]`. In rank 2 the unstable types satisfy `d < 2 d_1 <= d + 2g-2`.
//! These are necessary conditions only: an enumerated stratum is
//! *admissible*, not certified nonempty.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::types::{int, Genus, HNType, Invariant, Rank, Rational};

/// Which slope gap of a rank 3 HN type broke its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gap {
    /// `mu_1 - mu_2`.
    FirstSecond,
    /// `mu_2 - mu_3`.
    SecondThird,
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gap::FirstSecond => "mu1-mu2",
            Gap::SecondThird => "mu2-mu3",
        })
    }
}

/// Reasons an HN type cannot occur for a semistable Higgs bundle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmissibilityError {
    /// Only ranks 2 and 3 are classified.
    #[error("rank {0} is not supported (expected 2 or 3)")]
    RankUnsupported(u32),
    /// A rank 3 slope gap exceeds `2g - 2`.
    #[error("Rank3BoundViolated: {gap} = {value} > 2g-2 = {bound}")]
    Rank3BoundViolated {
        /// The gap that failed.
        gap: Gap,
        /// Its value.
        value: Rational,
        /// `2g - 2`.
        bound: i64,
    },
    /// `2 d_1 - d` exceeds `2g - 2`.
    #[error("Rank2BoundViolated: 2d1-d = {excess} > 2g-2 = {bound}")]
    Rank2BoundViolated {
        /// `2 d_1 - d`.
        excess: i64,
        /// `2g - 2`.
        bound: i64,
    },
    /// The invariant range only exists for rank 3 strata.
    #[error("invariant range needs a rank 3 stratum, got rank {0}")]
    NotRankThree(u32),
}

/// A validated Shatz stratum label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleStratum {
    hn: HNType,
    genus: Genus,
    mu: Rational,
    mu_vector: Vec<Rational>,
}

impl AdmissibleStratum {
    /// The HN type.
    pub fn hn(&self) -> &HNType {
        &self.hn
    }

    /// Genus of the base curve.
    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// Total slope `mu = d / r`.
    pub fn mu(&self) -> Rational {
        self.mu
    }

    /// `(mu_1, ..., mu_r)` with multiplicity, non-increasing.
    pub fn mu_vector(&self) -> &[Rational] {
        &self.mu_vector
    }

    /// Total rank.
    pub fn rank(&self) -> u32 {
        self.hn.total_rank()
    }

    /// Total degree.
    pub fn degree(&self) -> i64 {
        self.hn.total_degree()
    }

    /// True when the underlying bundle is semistable.
    pub fn is_semistable(&self) -> bool {
        self.hn.is_semistable()
    }

    /// `(mu_1, mu_2, mu_3)` for a rank 3 stratum.
    pub(crate) fn mu3(&self) -> Option<[Rational; 3]> {
        self.mu_vector.as_slice().try_into().ok()
    }
}

/// Checks the slope bounds and returns the validated stratum.
pub fn validate(hn: &HNType, genus: Genus) -> Result<AdmissibleStratum, AdmissibilityError> {
    let rank = hn.total_rank();
    let bound = genus.canonical_degree();
    match rank {
        2 => {
            if let [first, _] = hn.steps() {
                let excess = 2 * first.degree - hn.total_degree();
                if excess > bound {
                    return Err(AdmissibilityError::Rank2BoundViolated { excess, bound });
                }
            }
        }
        3 => {
            let mu = hn.slope_vector();
            for (gap, value) in [
                (Gap::FirstSecond, mu[0] - mu[1]),
                (Gap::SecondThird, mu[1] - mu[2]),
            ] {
                if value > int(bound) {
                    return Err(AdmissibilityError::Rank3BoundViolated { gap, value, bound });
                }
            }
        }
        other => return Err(AdmissibilityError::RankUnsupported(other)),
    }
    Ok(AdmissibleStratum {
        hn: hn.clone(),
        genus,
        mu: hn.slope(),
        mu_vector: hn.slope_vector(),
    })
}

/// Every admissible HN type of the given rank and degree, semistable type
/// included.
///
/// Output order is a linear extension of polygon dominance (lowest polygon,
/// i.e. the semistable type, first), ties broken by the step list.
pub fn enumerate_strata(rank: Rank, degree: i64, genus: Genus) -> Vec<AdmissibleStratum> {
    let k = genus.canonical_degree();
    let d = degree;
    let mut types: Vec<HNType> = Vec::new();
    let mut push = |steps: &[(u32, i64)]| {
        types.push(HNType::new(steps.iter().copied()).expect("generated steps are decreasing"));
    };
    match rank {
        Rank::Two => {
            push(&[(2, d)]);
            // d < 2 d1 <= d + k
            for d1 in (d.div_euclid(2) + 1)..=(d + k).div_euclid(2) {
                push(&[(1, d1), (1, d - d1)]);
            }
        }
        Rank::Three => {
            push(&[(3, d)]);
            // (1,2): gap mu1 - mu2 = (3a - d)/2 in (0, k]
            for a in (d.div_euclid(3) + 1)..=(d + 2 * k).div_euclid(3) {
                push(&[(1, a), (2, d - a)]);
            }
            // (2,1): gap mu2 - mu3 = (3a - 2d)/2 in (0, k]
            for a in ((2 * d).div_euclid(3) + 1)..=(2 * d + 2 * k).div_euclid(3) {
                push(&[(2, a), (1, d - a)]);
            }
            // (1,1,1): x = mu1 - mu2, y = mu2 - mu3 in [1, k], 3 mu3 = d - x - 2y
            for x in 1..=k {
                for y in 1..=k {
                    let rest = d - x - 2 * y;
                    if rest.rem_euclid(3) == 0 {
                        let c = rest / 3;
                        push(&[(1, c + x + y), (1, c + y), (1, c)]);
                    }
                }
            }
        }
    }
    let mut strata: Vec<AdmissibleStratum> = types
        .iter()
        .map(|t| validate(t, genus).expect("generated types satisfy the bounds"))
        .collect();
    strata.sort_by(|a, b| {
        let (pa, pb) = (a.hn.polygon(), b.hn.polygon());
        pa.height_sum()
            .cmp(&pb.height_sum())
            .then_with(|| a.hn.steps().cmp(b.hn.steps()))
    });
    strata
}

/// Which auxiliary datum drives the rank 3 classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseFamily {
    /// `mu_2 < mu`: the slope of `I` decides.
    SlopeOfI,
    /// `mu_2 > mu`: the slope of `N` decides.
    SlopeOfN,
    /// `mu_2 = mu`: whether `N = E_1` decides.
    Alignment,
    /// Semistable: nothing to decide.
    None,
}

impl CaseFamily {
    /// Short code used in text output.
    pub fn as_str(self) -> &'static str {
        match self {
            CaseFamily::SlopeOfI => "I",
            CaseFamily::SlopeOfN => "N",
            CaseFamily::Alignment => "flag",
            CaseFamily::None => "none",
        }
    }
}

impl fmt::Display for CaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Range of admissible values of the auxiliary invariant of a rank 3
/// stratum.
///
/// For `I` (resp. `N`) the admissible slopes are the closed interval plus
/// the isolated point `mu_2` (resp. `mu_1`). Values strictly between `mu_3`
/// and `mu_2` (resp. `mu_2` and `mu_1`) are excluded because the limit
/// polygon would fall below the original one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantRange {
    /// Which datum is free.
    pub family: CaseFamily,
    /// Closed interval `[low, high]`; may be empty (`low > high`).
    pub interval: Option<(Rational, Rational)>,
    /// Extra admissible value outside the interval.
    pub isolated_point: Option<Rational>,
    /// Integers in the interval, then the isolated point if integral.
    pub feasible_integers: Vec<i64>,
    /// For the alignment family: whether `N != E_1` is possible, which
    /// needs `mu_1 - mu_3 <= 2g - 2`.
    pub misalignment_allowed: bool,
}

impl InvariantRange {
    /// Range of a stratum that needs no auxiliary datum.
    pub fn not_applicable() -> Self {
        InvariantRange {
            family: CaseFamily::None,
            interval: None,
            isolated_point: None,
            feasible_integers: Vec::new(),
            misalignment_allowed: false,
        }
    }

    /// Every admissible invariant value as a classifier input.
    pub fn feasible_invariants(&self) -> Vec<Invariant> {
        match self.family {
            CaseFamily::SlopeOfI => self
                .feasible_integers
                .iter()
                .map(|&v| Invariant::SlopeI(int(v)))
                .collect(),
            CaseFamily::SlopeOfN => self
                .feasible_integers
                .iter()
                .map(|&v| Invariant::SlopeN(int(v)))
                .collect(),
            CaseFamily::Alignment => {
                let mut out = alloc::vec![Invariant::Aligned(true)];
                if self.misalignment_allowed {
                    out.push(Invariant::Aligned(false));
                }
                out
            }
            CaseFamily::None => alloc::vec![Invariant::NotApplicable],
        }
    }

    /// True if `value` lies in the closed interval.
    pub fn interval_contains(&self, value: Rational) -> bool {
        self.interval
            .is_some_and(|(low, high)| low <= value && value <= high)
    }

    /// True if `value` is admissible (interval or isolated point).
    pub fn admits(&self, value: Rational) -> bool {
        self.interval_contains(value) || self.isolated_point == Some(value)
    }
}

/// The free datum of a rank 3 stratum and its admissible values.
pub fn invariant_range(stratum: &AdmissibleStratum) -> Result<InvariantRange, AdmissibilityError> {
    let [m1, m2, m3] = stratum
        .mu3()
        .ok_or(AdmissibilityError::NotRankThree(stratum.rank()))?;
    let k = int(stratum.genus.canonical_degree());
    let mu = stratum.mu;
    let slope_range = |family, low: Rational, high: Rational, isolated: Option<Rational>| {
        let mut feasible: Vec<i64> = if low <= high {
            (low.ceil().to_integer()..=high.floor().to_integer()).collect()
        } else {
            Vec::new()
        };
        if let Some(p) = isolated.filter(|p| p.is_integer()) {
            feasible.push(p.to_integer());
        }
        InvariantRange {
            family,
            interval: Some((low, high)),
            isolated_point: isolated,
            feasible_integers: feasible,
            misalignment_allowed: false,
        }
    };
    let range = if stratum.is_semistable() {
        InvariantRange::not_applicable()
    } else if m2 < mu {
        slope_range(CaseFamily::SlopeOfI, m1 - k, m3, (m2 > m3).then_some(m2))
    } else if m2 > mu {
        slope_range(
            CaseFamily::SlopeOfN,
            m1 + m2 - m3 - k,
            m2,
            (m1 > m2).then_some(m1),
        )
    } else {
        InvariantRange {
            family: CaseFamily::Alignment,
            interval: None,
            isolated_point: None,
            feasible_integers: Vec::new(),
            misalignment_allowed: m1 - m3 <= k,
        }
    };
    Ok(range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ratio;
    use alloc::vec;

    fn hn(text: &str) -> HNType {
        text.parse().unwrap()
    }

    fn g(n: i64) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            validate(&hn("1:3,2:0"), g(2)),
            Err(AdmissibilityError::Rank3BoundViolated {
                gap: Gap::FirstSecond,
                value: int(3),
                bound: 2
            })
        );
        let s = validate(&hn("1:1,1:0,1:-1"), g(2)).unwrap();
        assert_eq!(s.mu_vector(), &[int(1), int(0), int(-1)]);
        assert!(validate(&hn("3:0"), g(2)).unwrap().is_semistable());
        assert_eq!(
            validate(&hn("1:3,1:0"), g(2)),
            Err(AdmissibilityError::Rank2BoundViolated {
                excess: 3,
                bound: 2
            })
        );
        assert_eq!(
            validate(&hn("1:1,1:0,1:0,1:-1"), g(2)),
            Err(AdmissibilityError::RankUnsupported(4))
        );
        assert!(validate(&hn("1:1,1:0,1:-2"), g(2)).is_ok());
        assert!(matches!(
            validate(&hn("1:1,1:0,1:-3"), g(2)),
            Err(AdmissibilityError::Rank3BoundViolated {
                gap: Gap::SecondThird,
                ..
            })
        ));
    }

    fn labels(rank: Rank, d: i64, genus: i64) -> Vec<alloc::string::String> {
        use alloc::string::ToString;
        enumerate_strata(rank, d, g(genus))
            .iter()
            .map(|s| s.hn().to_string())
            .collect()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(labels(Rank::Two, 1, 2), ["2:1", "1:1,1:0"]);
        let mut got = labels(Rank::Three, 0, 2);
        got.sort();
        let mut want = vec![
            "3:0",
            "1:1,1:0,1:-1",
            "1:2,1:0,1:-2",
            "1:1,2:-1",
            "2:1,1:-1",
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(labels(Rank::Three, 1, 2).contains(&"1:1,2:0".into()));
    }

    #[test]
    fn enumeration_order_is_a_dominance_extension() {
        let strata = enumerate_strata(Rank::Three, 0, g(3));
        assert!(strata[0].is_semistable());
        for (i, a) in strata.iter().enumerate() {
            for b in &strata[..i] {
                // a later stratum never lies strictly below an earlier one
                let (pa, pb) = (a.hn().polygon(), b.hn().polygon());
                assert!(!(pb.dominates(&pa).unwrap() && pa != pb));
            }
        }
    }

    #[test]
    fn range_examples() {
        let s = validate(&hn("1:1,2:0"), g(3)).unwrap();
        let r = invariant_range(&s).unwrap();
        assert_eq!(r.family, CaseFamily::SlopeOfI);
        assert_eq!(r.interval, Some((int(-3), int(0))));
        assert_eq!(r.isolated_point, None);
        assert_eq!(r.feasible_integers, [-3, -2, -1, 0]);

        let s = validate(&hn("2:1,1:-1"), g(2)).unwrap();
        let r = invariant_range(&s).unwrap();
        assert_eq!(r.family, CaseFamily::SlopeOfN);
        assert_eq!(r.interval, Some((int(0), ratio(1, 2))));
        assert_eq!(r.isolated_point, None);
        assert_eq!(r.feasible_integers, [0]);

        let s = validate(&hn("1:2,1:0,1:-2"), g(2)).unwrap();
        let r = invariant_range(&s).unwrap();
        assert_eq!(r.family, CaseFamily::Alignment);
        assert!(!r.misalignment_allowed);
        assert_eq!(r.feasible_invariants(), [Invariant::Aligned(true)]);

        let s = validate(&hn("3:2"), g(2)).unwrap();
        assert_eq!(invariant_range(&s).unwrap().family, CaseFamily::None);

        let s = validate(&hn("1:1,1:0"), g(2)).unwrap();
        assert_eq!(
            invariant_range(&s),
            Err(AdmissibilityError::NotRankThree(2))
        );
    }

    #[test]
    fn isolated_point_only_when_interval_is_empty() {
        // (2, 0, -1), d = 1: mu2 = 0 < mu = 1/3 and mu1 - mu3 = 3 > 2g-2
        let s = validate(&hn("1:2,1:0,1:-1"), g(2)).unwrap();
        let r = invariant_range(&s).unwrap();
        assert_eq!(r.family, CaseFamily::SlopeOfI);
        assert_eq!(r.interval, Some((int(0), int(-1))));
        assert_eq!(r.feasible_integers, [0]);
        assert_eq!(r.isolated_point, Some(int(0)));
    }
}
