//! The acceptance checks, run over a grid of genera and degrees.
//!
//! Each check recomputes its expectation independently of the code path it
//! tests where that is possible: fixed-component counts from the degree
//! bound, case membership from the inequalities defining each case, gap
//! values from the slope vector.

use std::fmt;
use std::ops::RangeInclusive;

use hnbb_core::{
    audit_passes, build_table, check_hn_bb_theorem, check_rank2_coincidence, classify,
    enumerate_fixed_components, enumerate_type111, l_to_m, m_to_l, oracle_check, stability_audit,
    take_limit, Block, BlockPattern, CaseTag, ClassifierInput, ClassifyError, FixedComponent,
    Genus, IncidenceTable, Invariant, Rank, Rational,
};

use crate::formats::incidence_json;

/// Genera and degrees to sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Genera, each at least 2.
    pub genera: RangeInclusive<i64>,
    /// Degrees.
    pub degrees: RangeInclusive<i64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            genera: 2..=5,
            degrees: -6..=6,
        }
    }
}

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    /// Criterion number, 1 to 9.
    pub id: u8,
    /// Short name.
    pub name: &'static str,
    /// Number of individual facts checked.
    pub checked: usize,
    /// Descriptions of the facts that failed; empty on success.
    pub failures: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, name: &'static str) -> Self {
        CriterionReport {
            id,
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// No failures.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} [{}] {}: {} checks, {} failures",
            self.id,
            self.name,
            self.checked,
            self.failures.len()
        )?;
        if let Some(first) = self.failures.first() {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

struct Sweep {
    rank2: Vec<IncidenceTable>,
    rank3: Vec<IncidenceTable>,
}

impl Sweep {
    fn build(config: &SweepConfig) -> Result<Self, String> {
        let mut rank2 = Vec::new();
        let mut rank3 = Vec::new();
        for g in config.genera.clone() {
            let genus = Genus::new(g).map_err(|e| e.to_string())?;
            for d in config.degrees.clone() {
                rank2.push(build_table(Rank::Two, d, genus));
                rank3.push(build_table(Rank::Three, d, genus));
            }
        }
        Ok(Sweep { rank2, rank3 })
    }
}

fn here(t: &IncidenceTable) -> String {
    format!("g={} d={}", t.genus.get(), t.degree)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Case tags whose defining inequalities hold for this input. Written out
/// from the case conditions alone, with no reference to the classifier.
pub fn matching_cases(mu: [Rational; 3], k: i64, invariant: Invariant) -> Vec<CaseTag> {
    let [m1, m2, m3] = mu;
    let mean = (m1 + m2 + m3) / int(3);
    let k = int(k);
    let mut out = Vec::new();
    match invariant {
        Invariant::SlopeI(v) if m2 < mean && m1 - k <= v => {
            let t = (-m1 + int(2) * m2 + int(2) * m3) / int(3);
            if v < t {
                out.push(CaseTag::C1_1);
            }
            if v == t {
                out.push(CaseTag::C1_2);
            }
            if t < v && v <= m3 {
                out.push(CaseTag::C1_3);
            }
            if v == m2 && m3 < m2 {
                out.push(CaseTag::C1_4);
            }
        }
        Invariant::SlopeN(v) if m2 > mean && m1 + m2 - m3 - k <= v => {
            if v < mean {
                out.push(CaseTag::C2_1);
            }
            if v == mean {
                out.push(CaseTag::C2_2);
            }
            if mean < v && v <= m2 {
                out.push(CaseTag::C2_3);
            }
            if v == m1 && m1 > m2 {
                out.push(CaseTag::C2_4);
            }
        }
        Invariant::Aligned(true) if m2 == mean => out.push(CaseTag::C3_1),
        Invariant::Aligned(false) if m2 == mean && m1 - m3 <= k => out.push(CaseTag::C3_2),
        _ => {}
    }
    out
}

fn rank2_coincidence(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(1, "rank 2 Shatz = Bialynicki-Birula");
    for t in &sweep.rank2 {
        r.expect(check_rank2_coincidence(t) == Ok(true), || {
            format!("{}: map is not the expected bijection", here(t))
        });
        let k = t.genus.canonical_degree();
        let d = t.degree;
        // d < 2 d1 <= d + k
        let lo = d.div_euclid(2) + 1;
        let hi = (d + k).div_euclid(2);
        let count = (lo..=hi).filter(|d1| d < 2 * d1 && 2 * d1 <= d + k).count() + 1;
        let got = enumerate_fixed_components(Rank::Two, d, t.genus).len();
        r.expect(got == count, || {
            format!("{}: {got} components, expected {count}", here(t))
        });
    }
    r
}

fn exhaustiveness(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(2, "every admissible input classifies to exactly one case");
    for t in &sweep.rank3 {
        let k = t.genus.canonical_degree();
        for row in &t.rows {
            let s = &row.stratum;
            if s.is_semistable() {
                r.expect(row.entries.len() == 1, || {
                    format!("{}: semistable row", here(t))
                });
                continue;
            }
            let v = s.mu_vector();
            let mu = [v[0], v[1], v[2]];
            let feasible = row.range.feasible_invariants();
            r.expect(!feasible.is_empty(), || {
                format!("{} {}: empty feasible set", here(t), s.hn())
            });
            for inv in feasible {
                let matches = matching_cases(mu, k, inv);
                let got = classify(&ClassifierInput::new(s.clone(), inv));
                r.expect(
                    matches.len() == 1 && got.as_ref().map(|o| o.case).ok() == Some(matches[0]),
                    || {
                        format!(
                            "{} {} {inv}: cases {matches:?}, got {got:?}",
                            here(t),
                            s.hn()
                        )
                    },
                );
            }
            let [m1, m2, m3] = mu;
            let (family_value, gap): (fn(Rational) -> Invariant, _) = if m2 < s.mu() {
                (Invariant::SlopeI, (m3, m2))
            } else if m2 > s.mu() {
                (Invariant::SlopeN, (m2, m1))
            } else {
                continue;
            };
            let (low, high) = gap;
            let first = low.floor().to_integer() + 1;
            let last = high.ceil().to_integer() - 1;
            for value in first..=last {
                let inv = family_value(int(value));
                let got = classify(&ClassifierInput::new(s.clone(), inv));
                r.expect(
                    matches!(got, Err(ClassifyError::InfeasibleBySpecialization { .. })),
                    || format!("{} {} {inv}: gap value gave {got:?}", here(t), s.hn()),
                );
            }
        }
    }
    r
}

fn monotonicity(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(3, "limit HN polygon dominates the input polygon");
    for t in &sweep.rank3 {
        for (s, inv, o) in t.outcomes() {
            let ok = o
                .hnt_limit
                .polygon()
                .dominates(&s.hn().polygon())
                .unwrap_or(false);
            r.expect(ok, || {
                format!("{} {} {inv}: limit {}", here(t), s.hn(), o.hnt_limit)
            });
        }
    }
    r
}

fn coprimality(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(4, "coprime degree has no polystable limits and no case 3");
    for t in sweep.rank3.iter().filter(|t| t.degree.rem_euclid(3) != 0) {
        let polystable = t
            .outcomes()
            .filter(|(_, _, o)| o.strictly_polystable)
            .count();
        let case3 = t
            .rows
            .iter()
            .filter(|row| {
                let v = row.stratum.mu_vector();
                !row.stratum.is_semistable() && v[1] == row.stratum.mu()
            })
            .count();
        r.expect(polystable == 0 && case3 == 0, || {
            format!(
                "{}: {polystable} polystable, {case3} case 3 strata",
                here(t)
            )
        });
    }
    r
}

fn hn_bb(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(5, "type (1,1,1) strata with l1-l3 > 2g-2 coincide");
    for t in &sweep.rank3 {
        let k = t.genus.canonical_degree();
        let in_scope: Vec<[i64; 3]> = t
            .bb_index
            .keys()
            .filter_map(|c| match c {
                FixedComponent::Type111 { l } if l[0] - l[2] > k => Some(*l),
                _ => None,
            })
            .collect();
        match check_hn_bb_theorem(t) {
            Ok(verified) => r.expect(verified == in_scope, || {
                format!("{}: verified {verified:?}, in scope {in_scope:?}", here(t))
            }),
            Err(e) => r.expect(false, || format!("{}: {e}", here(t))),
        }
    }
    let genus = Genus::new(2).expect("valid genus");
    let t = build_table(Rank::Three, 0, genus);
    let verified = check_hn_bb_theorem(&t).unwrap_or_default();
    r.expect(verified == [[2, 0, -2]], || {
        format!("g=2 d=0: verified {verified:?}, expected [[2, 0, -2]]")
    });
    r.expect(
        t.bb_index
            .contains_key(&FixedComponent::Type111 { l: [1, 0, -1] }),
        || "g=2 d=0: label (1,0,-1) never reached".into(),
    );
    r
}

fn fixed_points(config: &SweepConfig) -> CriterionReport {
    let mut r = CriterionReport::new(6, "type (1,1,1) components and m <-> l dictionary");
    let genus = Genus::new(2).expect("valid genus");
    let labels: Vec<[i64; 3]> = enumerate_type111(0, genus).iter().map(|l| l.l).collect();
    r.expect(labels == [[1, 0, -1], [2, 0, -2]], || {
        format!("g=2 d=0: got {labels:?}")
    });
    for g in config.genera.clone() {
        let Ok(genus) = Genus::new(g) else { continue };
        for d in config.degrees.clone() {
            for l in enumerate_type111(d, genus) {
                r.expect(m_to_l(&l_to_m(&l)) == Ok(l), || {
                    format!("g={g} d={d}: {:?} does not round-trip", l.l)
                });
            }
        }
    }
    r
}

/// The two limit displays the oracle must reproduce block for block.
pub fn reference_patterns_hold() -> bool {
    let two = BlockPattern::generic(vec![0, 1]).expect("valid weights");
    let two_limit = take_limit(&two);
    let three = BlockPattern::generic(vec![0, 1, 2])
        .expect("valid weights")
        .with_higgs(2, 0, Block::Zero);
    let three_limit = take_limit(&three);
    two_limit.converges
        && two_limit.limit_higgs.support() == [(1, 0)]
        && two_limit.limit_dbar.support().is_empty()
        && three_limit.converges
        && three_limit.limit_higgs.support() == [(1, 0), (2, 1)]
        && three_limit.limit_dbar.support().is_empty()
}

fn oracle(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(7, "gauge-scaling oracle agrees with every limit");
    for t in sweep.rank2.iter().chain(&sweep.rank3) {
        for (s, inv, o) in t.outcomes() {
            r.expect(oracle_check(o), || {
                format!("{} {} {inv}: {}", here(t), s.hn(), o)
            });
        }
    }
    r.expect(reference_patterns_hold(), || {
        "reference limit displays not reproduced".into()
    });
    r
}

fn audit(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(8, "stability audit of every limit");
    for t in &sweep.rank3 {
        for (s, inv, o) in t.outcomes() {
            let entries = stability_audit(o, &ClassifierInput::new(s.clone(), *inv));
            let equalities = entries.iter().filter(|e| e.is_equality()).count();
            let strict_rest = entries
                .iter()
                .filter(|e| !e.is_equality())
                .all(|e| e.strict);
            let ok = audit_passes(o, &entries)
                && equalities == usize::from(o.strictly_polystable)
                && strict_rest;
            r.expect(ok, || format!("{} {} {inv}: {entries:?}", here(t), s.hn()));
        }
    }
    r
}

fn determinism(sweep: &Sweep) -> CriterionReport {
    let mut r = CriterionReport::new(9, "incidence JSON is byte-identical across runs");
    for t in &sweep.rank3 {
        let again = build_table(t.rank, t.degree, t.genus);
        let (a, b) = (incidence_json(t), incidence_json(&again));
        r.expect(matches!((&a, &b), (Ok(x), Ok(y)) if x == y), || {
            format!("{}: outputs differ", here(t))
        });
    }
    r
}

/// Runs all nine criteria.
pub fn run_all(config: &SweepConfig) -> Result<Vec<CriterionReport>, String> {
    let sweep = Sweep::build(config)?;
    Ok(vec![
        rank2_coincidence(&sweep),
        exhaustiveness(&sweep),
        monotonicity(&sweep),
        coprimality(&sweep),
        hn_bb(&sweep),
        fixed_points(config),
        oracle(&sweep),
        audit(&sweep),
        determinism(&sweep),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(a: i64, b: i64, c: i64) -> [Rational; 3] {
        [int(a), int(b), int(c)]
    }

    #[test]
    fn case_conditions() {
        // mu = (1, 0, 0), g = 3: threshold t = -1/3
        let m = mu(1, 0, 0);
        assert_eq!(
            matching_cases(m, 4, Invariant::SlopeI(int(-1))),
            [CaseTag::C1_1]
        );
        assert_eq!(
            matching_cases(m, 4, Invariant::SlopeI(int(0))),
            [CaseTag::C1_3]
        );
        assert!(matching_cases(m, 4, Invariant::SlopeI(int(-4))).is_empty());
        assert!(matching_cases(m, 4, Invariant::SlopeN(int(0))).is_empty());
        let m = mu(1, 0, -1);
        assert_eq!(
            matching_cases(m, 2, Invariant::Aligned(false)),
            [CaseTag::C3_2]
        );
        assert!(matching_cases(mu(2, 0, -2), 2, Invariant::Aligned(false)).is_empty());
    }

    #[test]
    fn small_sweep_passes() {
        let config = SweepConfig {
            genera: 2..=2,
            degrees: 0..=1,
        };
        let reports = run_all(&config).unwrap();
        assert!(reports.iter().all(CriterionReport::passed));
        assert!(run_all(&SweepConfig {
            genera: 1..=2,
            degrees: 0..=0
        })
        .is_err());
    }
}
