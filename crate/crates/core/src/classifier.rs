//! Limit of the `C*`-flow `z -> (E, z * Phi)` as `z -> 0`, decided from the
//! HN type of `E` and one auxiliary invariant.
//!
//! Rank 3 splits into three families according to the sign of `mu_2 - mu`:
//!
//! | family      | datum     | sub-cases by exact comparison                                           |
//! |-------------|-----------|-------------------------------------------------------------------------|
//! | `mu_2 < mu` | `mu(I)`   | `< t` (1.1), `= t` (1.2), `(t, mu_3]` (1.3), `= mu_2 > mu_3` (1.4)        |
//! | `mu_2 > mu` | `mu(N)`   | `< mu` (2.1), `= mu` (2.2), `(mu, mu_2]` (2.3), `= mu_1 > mu_2` (2.4)     |
//! | `mu_2 = mu` | `N = E_1` | yes (3.1), no (3.2)                                                     |
//!
//! with `t = -mu_1/3 + 2 mu_2/3 + 2 mu_3/3`. Inputs are checked against the
//! admissible range before anything is classified; nothing is clamped.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::admissibility::{invariant_range, AdmissibleStratum, CaseFamily};
use crate::types::{
    int, CaseTag, FixedComponent, HNType, HodgeSummand, Invariant, LimitOutcome, Rational,
};

/// A stratum plus the auxiliary datum selecting the sub-case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierInput {
    /// Validated HN type.
    pub stratum: AdmissibleStratum,
    /// `mu(I)`, `mu(N)`, the alignment flag, or nothing.
    pub invariant: Invariant,
}

impl ClassifierInput {
    /// Pairs a stratum with an invariant.
    pub fn new(stratum: AdmissibleStratum, invariant: Invariant) -> Self {
        ClassifierInput { stratum, invariant }
    }
}

/// Why a classifier input was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    /// `classify_semistable` was given an unstable type.
    #[error("NotSemistable: {0} has more than one HN step")]
    NotSemistable(HNType),
    /// An unstable classifier was given the semistable type.
    #[error("SemistableInput: {0} is semistable")]
    SemistableInput(HNType),
    /// Wrong rank for the requested classifier.
    #[error("RankMismatch: expected rank {expected}, got {got}")]
    RankMismatch {
        /// Rank the classifier handles.
        expected: u32,
        /// Rank of the input.
        got: u32,
    },
    /// The slope lies strictly inside the excluded gap, where the limit's
    /// HN polygon would sit below the original one.
    #[error("InfeasibleBySpecialization: {value} lies strictly between {low} and {high}")]
    InfeasibleBySpecialization {
        /// Offending slope.
        value: Rational,
        /// Lower end of the open gap.
        low: Rational,
        /// Upper end of the open gap.
        high: Rational,
    },
    /// The slope violates the a-priori bounds on `mu(I)` or `mu(N)`.
    #[error("SlopeOutOfBounds: {value} is outside [{low}, {high}]")]
    SlopeOutOfBounds {
        /// Offending slope.
        value: Rational,
        /// Lower bound.
        low: Rational,
        /// Upper bound.
        high: Rational,
    },
    /// The kind of invariant does not match the stratum's family.
    #[error("CaseFamilyMismatch: stratum needs datum {expected}, got {got}")]
    CaseFamilyMismatch {
        /// Family of the stratum.
        expected: CaseFamily,
        /// What was supplied.
        got: Invariant,
    },
    /// `N != E_1` needs a nonzero `phi_31`, hence `mu_1 - mu_3 <= 2g - 2`.
    #[error("AlignmentImpossible: mu1-mu3 = {spread} > 2g-2 = {bound}")]
    AlignmentImpossible {
        /// `mu_1 - mu_3`.
        spread: Rational,
        /// `2g - 2`.
        bound: i64,
    },
    /// `I` and `N` are line bundles, so their slopes are integers.
    #[error("NonIntegralSlope: {0} is not an integer")]
    NonIntegralSlope(Rational),
}

/// `t = -mu_1/3 + 2 mu_2/3 + 2 mu_3/3`, the threshold separating 1.1 from
/// 1.3.
pub fn case_one_threshold(mu: &[Rational; 3]) -> Rational {
    (-mu[0] + int(2) * mu[1] + int(2) * mu[2]) / int(3)
}

/// Semistable bundles flow to `(E, 0)`.
pub fn classify_semistable(stratum: &AdmissibleStratum) -> Result<LimitOutcome, ClassifyError> {
    if !stratum.is_semistable() {
        return Err(ClassifyError::NotSemistable(stratum.hn().clone()));
    }
    Ok(LimitOutcome::new(
        CaseTag::Semistable,
        FixedComponent::Min {
            rank: stratum.rank(),
            degree: stratum.degree(),
        },
        vec![stratum.degree()],
        stratum.hn().clone(),
    ))
}

/// Unstable rank 2: the limit is `E_1 + E/E_1` with the induced `phi_21`.
pub fn classify_rank2(stratum: &AdmissibleStratum) -> Result<LimitOutcome, ClassifyError> {
    if stratum.rank() != 2 {
        return Err(ClassifyError::RankMismatch {
            expected: 2,
            got: stratum.rank(),
        });
    }
    let [first, second] = stratum.hn().steps() else {
        return Err(ClassifyError::SemistableInput(stratum.hn().clone()));
    };
    Ok(LimitOutcome::new(
        CaseTag::Rank2Unstable,
        FixedComponent::Rank2 { d1: first.degree },
        vec![first.degree, second.degree],
        stratum.hn().clone(),
    ))
}

fn integral(value: Rational) -> Result<i64, ClassifyError> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(ClassifyError::NonIntegralSlope(value))
    }
}

fn check_slope(
    value: Rational,
    bounds: (Rational, Rational),
    gap: (Rational, Rational),
) -> Result<i64, ClassifyError> {
    let v = integral(value)?;
    let (gap_low, gap_high) = gap;
    if gap_low < value && value < gap_high {
        return Err(ClassifyError::InfeasibleBySpecialization {
            value,
            low: gap_low,
            high: gap_high,
        });
    }
    let (low, high) = bounds;
    if value < low || value > high {
        return Err(ClassifyError::SlopeOutOfBounds { value, low, high });
    }
    Ok(v)
}

fn line_hn(degrees: &[i64]) -> HNType {
    HNType::from_line_degrees(degrees).expect("nonempty list of line bundles")
}

/// Unstable rank 3.
pub fn classify_rank3(input: &ClassifierInput) -> Result<LimitOutcome, ClassifyError> {
    let stratum = &input.stratum;
    let Some(mu3) = stratum.mu3() else {
        return Err(ClassifyError::RankMismatch {
            expected: 3,
            got: stratum.rank(),
        });
    };
    if stratum.is_semistable() {
        return Err(ClassifyError::SemistableInput(stratum.hn().clone()));
    }
    let [m1, m2, m3] = mu3;
    let mu = stratum.mu();
    let d = stratum.degree();
    let k = stratum.genus().canonical_degree();
    let family = invariant_range(stratum).expect("rank checked above").family;
    let hn = stratum.hn().clone();

    let outcome = match (family, input.invariant) {
        (CaseFamily::SlopeOfI, Invariant::SlopeI(value)) => {
            let v = check_slope(value, (m1 - int(k), m2), (m3, m2))?;
            // mu_1 > mu_2 here, so E_1 is a line bundle of integral degree
            let d1 = m1.to_integer();
            let t = case_one_threshold(&mu3);
            if value == m2 && m2 > m3 {
                let l = [d1, m2.to_integer(), m3.to_integer()];
                LimitOutcome::new(CaseTag::C1_4, FixedComponent::Type111 { l }, l.to_vec(), hn)
            } else if value < t {
                LimitOutcome::new(
                    CaseTag::C1_1,
                    FixedComponent::Type12 {
                        sub: d1,
                        quotient: d - d1,
                    },
                    vec![d1, d - d1],
                    hn,
                )
            } else {
                let q = d - d1 - v;
                if value == t {
                    let component = FixedComponent::PolystableSum(vec![
                        HodgeSummand {
                            degrees: vec![d1, v],
                            weights: vec![0, 1],
                        },
                        HodgeSummand {
                            degrees: vec![q],
                            weights: vec![0],
                        },
                    ]);
                    LimitOutcome::new(
                        CaseTag::C1_2,
                        component,
                        vec![d1, v, q],
                        line_hn(&[d1, q, v]),
                    )
                } else {
                    let l = [d1, v, q];
                    LimitOutcome::new(
                        CaseTag::C1_3,
                        FixedComponent::Type111 { l },
                        l.to_vec(),
                        line_hn(&l),
                    )
                }
            }
        }
        (CaseFamily::SlopeOfN, Invariant::SlopeN(value)) => {
            let v = check_slope(value, (m1 + m2 - m3 - int(k), m1), (m2, m1))?;
            // mu_2 > mu_3 here, so E/E_2 is a line bundle of integral degree
            let e3 = m3.to_integer();
            let e2 = d - e3;
            if value == m1 && m1 > m2 {
                let l = [v, m2.to_integer(), e3];
                LimitOutcome::new(CaseTag::C2_4, FixedComponent::Type111 { l }, l.to_vec(), hn)
            } else if value < mu {
                LimitOutcome::new(
                    CaseTag::C2_1,
                    FixedComponent::Type21 {
                        sub: e2,
                        quotient: e3,
                    },
                    vec![e2, e3],
                    hn,
                )
            } else {
                let r = e2 - v;
                if value == mu {
                    let component = FixedComponent::PolystableSum(vec![
                        HodgeSummand {
                            degrees: vec![v],
                            weights: vec![0],
                        },
                        HodgeSummand {
                            degrees: vec![r, e3],
                            weights: vec![0, 1],
                        },
                    ]);
                    LimitOutcome::new(
                        CaseTag::C2_2,
                        component,
                        vec![v, r, e3],
                        line_hn(&[r, v, e3]),
                    )
                } else {
                    let l = [v, r, e3];
                    LimitOutcome::new(
                        CaseTag::C2_3,
                        FixedComponent::Type111 { l },
                        l.to_vec(),
                        line_hn(&l),
                    )
                }
            }
        }
        (CaseFamily::Alignment, Invariant::Aligned(aligned)) => {
            // mu_1 > mu_2 = mu > mu_3: three line bundles
            let l = [m1.to_integer(), m2.to_integer(), m3.to_integer()];
            if aligned {
                LimitOutcome::new(CaseTag::C3_1, FixedComponent::Type111 { l }, l.to_vec(), hn)
            } else {
                if m1 - m3 > int(k) {
                    return Err(ClassifyError::AlignmentImpossible {
                        spread: m1 - m3,
                        bound: k,
                    });
                }
                let component = FixedComponent::PolystableSum(vec![
                    HodgeSummand {
                        degrees: vec![l[0], l[2]],
                        weights: vec![0, 1],
                    },
                    HodgeSummand {
                        degrees: vec![l[1]],
                        weights: vec![0],
                    },
                ]);
                LimitOutcome::new(CaseTag::C3_2, component, l.to_vec(), hn)
            }
        }
        (expected, got) => return Err(ClassifyError::CaseFamilyMismatch { expected, got }),
    };
    Ok(outcome)
}

/// Dispatches on rank and semistability.
pub fn classify(input: &ClassifierInput) -> Result<LimitOutcome, ClassifyError> {
    let stratum = &input.stratum;
    if stratum.is_semistable() {
        return match input.invariant {
            Invariant::NotApplicable => classify_semistable(stratum),
            got => Err(ClassifyError::CaseFamilyMismatch {
                expected: CaseFamily::None,
                got,
            }),
        };
    }
    match stratum.rank() {
        2 => match input.invariant {
            Invariant::NotApplicable => classify_rank2(stratum),
            got => Err(ClassifyError::CaseFamilyMismatch {
                expected: CaseFamily::None,
                got,
            }),
        },
        _ => classify_rank3(input),
    }
}

/// One inequality `mu(subobject) < mu` (or `<=`) from the stability check
/// of a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    /// Which `Phi_0`-invariant subobject.
    pub subobject: &'static str,
    /// Its slope, or the largest slope it can have.
    pub slope: Rational,
    /// Slope of the whole bundle.
    pub bound: Rational,
    /// Strict inequality required.
    pub strict: bool,
    /// Whether the inequality holds.
    pub holds: bool,
}

impl AuditEntry {
    fn new(subobject: &'static str, slope: Rational, bound: Rational, strict: bool) -> Self {
        let holds = if strict {
            slope < bound
        } else {
            slope <= bound
        };
        AuditEntry {
            subobject,
            slope,
            bound,
            strict,
            holds,
        }
    }

    /// The subobject has exactly the slope of the bundle.
    pub fn is_equality(&self) -> bool {
        self.slope == self.bound
    }
}

/// Re-derives, with exact arithmetic, the slope inequalities that certify
/// the limit is (poly)stable: one entry per `Phi_0`-invariant subobject
/// considered in the stability argument for the outcome's case.
///
/// Every entry should hold; the strictly polystable cases have exactly one
/// equality, every other case none.
pub fn stability_audit(outcome: &LimitOutcome, input: &ClassifierInput) -> Vec<AuditEntry> {
    let mu = input.stratum.mu();
    let g = &outcome.graded_degrees;
    let piece = |i: usize| g.get(i).copied().map(int);
    let pair = |i: usize, j: usize| match (piece(i), piece(j)) {
        (Some(a), Some(b)) => Some((a + b) / int(2)),
        _ => None,
    };
    let given_slope = match input.invariant {
        Invariant::SlopeI(v) | Invariant::SlopeN(v) => Some(v),
        _ => None,
    };
    let mu_vec = input.stratum.mu_vector();
    let entry = |name, slope: Option<Rational>, strict| match slope {
        Some(s) => AuditEntry::new(name, s, mu, strict),
        // missing data never passes
        None => AuditEntry {
            subobject: name,
            slope: mu,
            bound: mu,
            strict: true,
            holds: false,
        },
    };
    let polystable = outcome.case.is_strictly_polystable();
    match outcome.case {
        CaseTag::Semistable => Vec::new(),
        CaseTag::Rank2Unstable => vec![entry("E/E1", piece(1), true)],
        CaseTag::C1_1 => vec![
            entry(
                "E1+I",
                given_slope.zip(piece(0)).map(|(v, d1)| (v + d1) / int(2)),
                true,
            ),
            entry("E/E1", piece(1).map(|x| x / int(2)), true),
            entry("line L in E/E1", mu_vec.get(1).copied(), true),
        ],
        CaseTag::C1_2 | CaseTag::C1_3 | CaseTag::C1_4 => vec![
            entry("I+Q", pair(1, 2), true),
            entry("Q", piece(2), !polystable),
        ],
        CaseTag::C2_1 => vec![
            entry("N", given_slope, true),
            entry("E/E2", piece(1), true),
            entry(
                "L+E/E2",
                mu_vec
                    .first()
                    .copied()
                    .zip(piece(1))
                    .map(|(m1, e3)| (m1 + e3) / int(2)),
                true,
            ),
        ],
        CaseTag::C2_2 | CaseTag::C2_3 | CaseTag::C2_4 => vec![
            entry("E/E2", piece(2), true),
            entry("E2/N+E/E2", pair(1, 2), !polystable),
        ],
        CaseTag::C3_1 => vec![
            entry("E/E2", piece(2), true),
            entry("E2/E1+E/E2", pair(1, 2), true),
        ],
        CaseTag::C3_2 => vec![
            entry("E/E2", piece(2), true),
            entry("E1+E/E2", pair(0, 2), false),
        ],
    }
}

/// True when every audit entry holds and equalities occur exactly in the
/// strictly polystable cases (once).
pub fn audit_passes(outcome: &LimitOutcome, entries: &[AuditEntry]) -> bool {
    let equalities = entries.iter().filter(|e| e.is_equality()).count();
    let expected = usize::from(outcome.strictly_polystable);
    entries.iter().all(|e| e.holds) && equalities == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::validate;
    use crate::types::{ratio, Genus};
    use alloc::string::ToString;

    fn input(hn: &str, genus: i64, invariant: Invariant) -> ClassifierInput {
        let stratum = validate(&hn.parse().unwrap(), Genus::new(genus).unwrap()).unwrap();
        ClassifierInput::new(stratum, invariant)
    }

    fn run(hn: &str, genus: i64, invariant: Invariant) -> Result<LimitOutcome, ClassifyError> {
        classify(&input(hn, genus, invariant))
    }

    fn si(v: i64) -> Invariant {
        Invariant::SlopeI(int(v))
    }

    fn sn(v: i64) -> Invariant {
        Invariant::SlopeN(int(v))
    }

    #[test]
    fn semistable_examples() {
        for (hn, genus, d) in [("3:0", 2, 0), ("2:1", 2, 1), ("3:2", 3, 2)] {
            let o = run(hn, genus, Invariant::NotApplicable).unwrap();
            assert_eq!(o.case, CaseTag::Semistable);
            assert_eq!(o.component.to_string(), "min");
            assert_eq!(o.graded_degrees, [d]);
            assert_eq!(o.hnt_limit.to_string(), hn);
        }
        let unstable = input("1:1,1:0", 2, Invariant::NotApplicable).stratum;
        assert!(matches!(
            classify_semistable(&unstable),
            Err(ClassifyError::NotSemistable(_))
        ));
    }

    #[test]
    fn rank2_examples() {
        let o = run("1:1,1:0", 2, Invariant::NotApplicable).unwrap();
        assert_eq!(
            (o.case, o.component.to_string()),
            (CaseTag::Rank2Unstable, "r2:1".into())
        );
        assert_eq!(o.graded_degrees, [1, 0]);
        let o = run("1:2,1:0", 3, Invariant::NotApplicable).unwrap();
        assert_eq!(o.component, FixedComponent::Rank2 { d1: 2 });
        assert_eq!(o.graded_degrees, [2, 0]);
        let ss = input("2:1", 2, Invariant::NotApplicable).stratum;
        assert!(matches!(
            classify_rank2(&ss),
            Err(ClassifyError::SemistableInput(_))
        ));
    }

    #[test]
    fn case_one_examples() {
        let o = run("1:1,2:0", 3, si(-1)).unwrap();
        assert_eq!(o.case, CaseTag::C1_1);
        assert_eq!(
            o.component,
            FixedComponent::Type12 {
                sub: 1,
                quotient: 0
            }
        );
        assert_eq!(o.graded_degrees, [1, 0]);
        assert_eq!(o.hnt_limit.to_string(), "1:1,2:0");

        let o = run("1:1,2:0", 3, si(0)).unwrap();
        assert_eq!(o.case, CaseTag::C1_3);
        assert_eq!(o.component, FixedComponent::Type111 { l: [1, 0, 0] });
        assert_eq!(o.hnt_limit.to_string(), "1:1,2:0");

        let o = run("1:1,2:-1", 2, si(-1)).unwrap();
        assert_eq!(o.case, CaseTag::C1_2);
        assert_eq!(o.component.to_string(), "poly:[1,-1;0,1]+[0;0]");
        assert_eq!(o.hnt_limit.to_string(), "1:1,1:0,1:-1");
        assert!(o.strictly_polystable);

        assert!(matches!(
            run("1:1,2:0", 3, si(1)),
            Err(ClassifyError::SlopeOutOfBounds { .. })
        ));
        assert!(matches!(
            run("1:1,2:-1", 2, si(0)),
            Err(ClassifyError::SlopeOutOfBounds { .. })
        ));
    }

    #[test]
    fn case_one_four_and_gap() {
        // mu = (2, 0, -1), d = 1, g = 2: feasible set is {0} = {mu_2}
        let o = run("1:2,1:0,1:-1", 2, si(0)).unwrap();
        assert_eq!(o.case, CaseTag::C1_4);
        assert_eq!(o.component, FixedComponent::Type111 { l: [2, 0, -1] });
        // mu = (4, 1, -1), d = 4, g = 3: gap (mu_3, mu_2) = (-1, 1)
        assert!(matches!(
            run("1:4,1:1,1:-1", 3, si(0)),
            Err(ClassifyError::InfeasibleBySpecialization { .. })
        ));
    }

    #[test]
    fn case_two_examples() {
        let o = run("2:1,1:-1", 2, sn(0)).unwrap();
        assert_eq!(o.case, CaseTag::C2_2);
        assert_eq!(o.component.to_string(), "poly:[0;0]+[1,-1;0,1]");
        assert_eq!(o.graded_degrees, [0, 1, -1]);
        assert_eq!(o.hnt_limit.to_string(), "1:1,1:0,1:-1");

        // mu = (3/2, 3/2, -2), d = 1, g = 4: N ranges over [-1, 3/2]
        let o = run("2:3,1:-2", 4, sn(0)).unwrap();
        assert_eq!(o.case, CaseTag::C2_1);
        assert_eq!(
            o.component,
            FixedComponent::Type21 {
                sub: 3,
                quotient: -2
            }
        );
        let o = run("2:3,1:-2", 4, sn(1)).unwrap();
        assert_eq!(o.case, CaseTag::C2_3);
        assert_eq!(o.component, FixedComponent::Type111 { l: [1, 2, -2] });
        assert_eq!(o.hnt_limit.to_string(), "1:2,1:1,1:-2");
    }

    #[test]
    fn case_three_examples() {
        let o = run("1:2,1:0,1:-2", 2, Invariant::Aligned(true)).unwrap();
        assert_eq!(o.case, CaseTag::C3_1);
        assert_eq!(o.component, FixedComponent::Type111 { l: [2, 0, -2] });
        assert!(matches!(
            run("1:2,1:0,1:-2", 2, Invariant::Aligned(false)),
            Err(ClassifyError::AlignmentImpossible { .. })
        ));
        let o = run("1:1,1:0,1:-1", 2, Invariant::Aligned(false)).unwrap();
        assert_eq!(o.case, CaseTag::C3_2);
        assert_eq!(o.component.to_string(), "poly:[1,-1;0,1]+[0;0]");
        assert_eq!(o.hnt_limit.to_string(), "1:1,1:0,1:-1");
    }

    #[test]
    fn rejects_mismatched_or_fractional_data() {
        assert!(matches!(
            run("1:1,2:0", 3, sn(0)),
            Err(ClassifyError::CaseFamilyMismatch {
                expected: CaseFamily::SlopeOfI,
                ..
            })
        ));
        assert!(matches!(
            run("1:1,2:0", 3, Invariant::SlopeI(ratio(-1, 2))),
            Err(ClassifyError::NonIntegralSlope(_))
        ));
        assert!(matches!(
            run("3:0", 2, si(0)),
            Err(ClassifyError::CaseFamilyMismatch {
                expected: CaseFamily::None,
                ..
            })
        ));
    }

    #[test]
    fn audit_examples() {
        let i = input("1:1,2:0", 3, si(-1));
        let o = classify(&i).unwrap();
        let audit = stability_audit(&o, &i);
        assert_eq!(audit.len(), 3);
        assert!(audit
            .iter()
            .all(|e| e.holds && e.strict && !e.is_equality()));
        assert_eq!(audit[0].slope, int(0));
        assert_eq!(audit[1].slope, int(0));
        assert_eq!(audit[2].slope, int(0));

        let i = input("1:1,2:-1", 2, si(-1));
        let o = classify(&i).unwrap();
        let audit = stability_audit(&o, &i);
        assert!(audit_passes(&o, &audit));
        let eq: Vec<_> = audit.iter().filter(|e| e.is_equality()).collect();
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].subobject, "Q");
    }
}
