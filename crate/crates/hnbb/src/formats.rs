//! Output formats: JSON documents, CSV, DOT and plain text tables.
//!
//! JSON field names are stable; downstream scripts key on them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use hnbb_core::{
    format_rational, l_to_m, AdmissibleStratum, CaseFamily, CaseTag, FixedComponent, Genus,
    IncidenceTable, Invariant, InvariantRange, LInvariants, LimitOutcome,
};

/// What was asked for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    /// Subcommand name.
    pub command: String,
    /// Genus of the curve.
    pub genus: i64,
    /// Rank of the bundles.
    pub rank: u32,
    /// Degree of the bundles.
    pub degree: i64,
    /// HN type text, for `limit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn: Option<String>,
    /// Invariant text, for `limit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
}

/// One `(stratum, invariant) -> limit` line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeRecord {
    /// HN type of the input.
    pub stratum: String,
    /// Invariant value used.
    pub invariant: String,
    /// Case tag.
    pub case: String,
    /// Fixed-point component label.
    pub component: String,
    /// Degrees of the graded pieces in weight order.
    pub graded_degrees: Vec<i64>,
    /// HN type of the limit bundle.
    pub hnt_limit: String,
    /// Limit is strictly polystable.
    pub strictly_polystable: bool,
    /// Every admissible invariant value of the stratum.
    pub feasible_set: Vec<String>,
}

/// One admissible stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumRecord {
    /// HN type.
    pub stratum: String,
    /// Slopes with multiplicity.
    pub slopes: Vec<String>,
    /// Single HN step.
    pub semistable: bool,
    /// Which datum selects the limit case: `I`, `N`, `flag` or `none`.
    pub family: String,
    /// Closed interval of admissible slopes.
    pub interval: Option<[String; 2]>,
    /// Admissible slope outside the interval.
    pub isolated_point: Option<String>,
    /// Every admissible invariant value.
    pub feasible_set: Vec<String>,
}

/// One fixed-point component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    /// Label.
    pub component: String,
    /// `min`, `rank2`, `type12`, `type21` or `type111`.
    pub kind: String,
    /// `(m1, m2)` for type (1,1,1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[i64; 2]>,
}

/// Any result line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Record {
    /// Limit classification.
    Outcome(OutcomeRecord),
    /// Stratum listing.
    Stratum(StratumRecord),
    /// Component listing.
    Component(ComponentRecord),
}

/// Context for interpreting the results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    /// Genus of the curve.
    pub genus: i64,
    /// Case tags occurring in the results, in case order.
    pub paper_cases: Vec<String>,
    /// Strata satisfy necessary conditions only; none is certified
    /// nonempty.
    pub strata: String,
    /// Every feasible invariant value is treated as realized by some
    /// Higgs bundle.
    pub realizability: String,
    /// Component -> HN types reaching it, for incidence tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bb_index: Option<BTreeMap<String, Vec<String>>>,
}

/// Top-level JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    /// The request.
    pub query: Query,
    /// Result lines.
    pub results: Vec<Record>,
    /// Metadata.
    pub meta: Meta,
}

impl Document {
    /// Wraps results, filling in the metadata.
    pub fn new(query: Query, results: Vec<Record>) -> Self {
        let occurring: Vec<&str> = results
            .iter()
            .filter_map(|r| match r {
                Record::Outcome(o) => Some(o.case.as_str()),
                _ => None,
            })
            .collect();
        let paper_cases = CaseTag::ALL
            .iter()
            .map(|t| t.as_str())
            .filter(|t| occurring.contains(t))
            .map(String::from)
            .collect();
        Document {
            meta: Meta {
                genus: query.genus,
                paper_cases,
                strata: "admissible".into(),
                realizability: "assumed".into(),
                bb_index: None,
            },
            query,
            results,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// Inverse of [`Document::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn invariant_text(inv: &Invariant) -> String {
    inv.to_string()
}

fn feasible_set(range: &InvariantRange) -> Vec<String> {
    if range.family == CaseFamily::None {
        return Vec::new();
    }
    range
        .feasible_invariants()
        .iter()
        .map(invariant_text)
        .collect()
}

/// Record for one classified input.
pub fn outcome_record(
    stratum: &AdmissibleStratum,
    invariant: &Invariant,
    outcome: &LimitOutcome,
    range: &InvariantRange,
) -> OutcomeRecord {
    OutcomeRecord {
        stratum: stratum.hn().to_string(),
        invariant: invariant_text(invariant),
        case: outcome.case.as_str().into(),
        component: outcome.component.to_string(),
        graded_degrees: outcome.graded_degrees.clone(),
        hnt_limit: outcome.hnt_limit.to_string(),
        strictly_polystable: outcome.strictly_polystable,
        feasible_set: feasible_set(range),
    }
}

/// Record for one stratum.
pub fn stratum_record(stratum: &AdmissibleStratum, range: &InvariantRange) -> StratumRecord {
    StratumRecord {
        stratum: stratum.hn().to_string(),
        slopes: stratum.mu_vector().iter().map(format_rational).collect(),
        semistable: stratum.is_semistable(),
        family: range.family.as_str().into(),
        interval: range
            .interval
            .map(|(low, high)| [format_rational(&low), format_rational(&high)]),
        isolated_point: range.isolated_point.as_ref().map(format_rational),
        feasible_set: feasible_set(range),
    }
}

/// Record for one component.
pub fn component_record(component: &FixedComponent, genus: Genus) -> ComponentRecord {
    let (kind, m) = match component {
        FixedComponent::Min { .. } => ("min", None),
        FixedComponent::Rank2 { .. } => ("rank2", None),
        FixedComponent::Type12 { .. } => ("type12", None),
        FixedComponent::Type21 { .. } => ("type21", None),
        FixedComponent::Type111 { l } => {
            let m = l_to_m(&LInvariants { l: *l, genus });
            ("type111", Some([m.m1, m.m2]))
        }
        FixedComponent::PolystableSum(_) => ("polystable", None),
    };
    ComponentRecord {
        component: component.to_string(),
        kind: kind.into(),
        m,
    }
}

/// Outcome records of a whole table, row by row.
pub fn table_records(table: &IncidenceTable) -> Vec<Record> {
    table
        .rows
        .iter()
        .flat_map(|row| {
            row.entries
                .iter()
                .map(|(inv, o)| Record::Outcome(outcome_record(&row.stratum, inv, o, &row.range)))
        })
        .collect()
}

/// Component -> sorted HN type texts.
pub fn bb_index_text(table: &IncidenceTable) -> BTreeMap<String, Vec<String>> {
    table
        .bb_index
        .iter()
        .map(|(c, types)| {
            (
                c.to_string(),
                types.iter().map(ToString::to_string).collect(),
            )
        })
        .collect()
}

/// JSON document for an incidence table.
pub fn incidence_json(table: &IncidenceTable) -> Result<String> {
    let query = Query {
        command: "incidence".into(),
        genus: table.genus.get(),
        rank: table.rank.get(),
        degree: table.degree,
        hn: None,
        invariant: None,
    };
    let mut doc = Document::new(query, table_records(table));
    doc.meta.bb_index = Some(bb_index_text(table));
    doc.to_json()
}

/// Header shared by every outcome CSV.
pub const OUTCOME_CSV_HEADER: [&str; 5] =
    ["stratum", "invariant", "case", "component", "hnt_limit"];

/// CSV of result records. Outcome lines use [`OUTCOME_CSV_HEADER`].
pub fn to_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match records.first() {
        Some(Record::Stratum(_)) => w.write_record(["stratum", "family", "feasible_set"])?,
        Some(Record::Component(_)) => w.write_record(["component", "kind"])?,
        _ => w.write_record(OUTCOME_CSV_HEADER)?,
    }
    for r in records {
        match r {
            Record::Outcome(o) => w.write_record([
                &o.stratum,
                &o.invariant,
                &o.case,
                &o.component,
                &o.hnt_limit,
            ])?,
            Record::Stratum(s) => {
                w.write_record([&s.stratum, &s.family, &s.feasible_set.join(" ")])?
            }
            Record::Component(c) => w.write_record([&c.component, &c.kind])?,
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Bipartite graph: Shatz strata as boxes, fixed-point components as
/// ellipses, one edge per reachable pair labelled with the invariants that
/// realize it.
pub fn incidence_dot(table: &IncidenceTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "digraph incidence_r{}_d{}_g{} {{",
        table.rank,
        table.degree,
        table.genus.get()
    );
    out.push_str("  rankdir=LR;\n");
    for row in &table.rows {
        let hn = row.stratum.hn().to_string();
        let _ = writeln!(out, "  \"s {hn}\" [shape=box, label=\"{hn}\"];");
    }
    for component in table.bb_index.keys() {
        let c = component.to_string();
        let _ = writeln!(out, "  \"c {c}\" [shape=ellipse, label=\"{c}\"];");
    }
    for row in &table.rows {
        let hn = row.stratum.hn().to_string();
        let mut edges: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (inv, o) in &row.entries {
            edges
                .entry(o.component.to_string())
                .or_default()
                .push(inv.to_string());
        }
        for (c, invs) in edges {
            let _ = writeln!(
                out,
                "  \"s {hn}\" -> \"c {c}\" [label=\"{}\"];",
                invs.join(" ")
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Left-aligned text table.
pub fn to_table(records: &[Record]) -> String {
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match records.first() {
        Some(Record::Stratum(_)) => (
            vec![
                "stratum", "slopes", "family", "interval", "isolated", "feasible",
            ],
            records
                .iter()
                .filter_map(|r| match r {
                    Record::Stratum(s) => Some(vec![
                        s.stratum.clone(),
                        s.slopes.join(" "),
                        s.family.clone(),
                        s.interval
                            .as_ref()
                            .map(|[a, b]| format!("[{a}, {b}]"))
                            .unwrap_or_else(|| "-".into()),
                        s.isolated_point.clone().unwrap_or_else(|| "-".into()),
                        s.feasible_set.join(" "),
                    ]),
                    _ => None,
                })
                .collect(),
        ),
        Some(Record::Component(_)) => (
            vec!["component", "kind", "m"],
            records
                .iter()
                .filter_map(|r| match r {
                    Record::Component(c) => Some(vec![
                        c.component.clone(),
                        c.kind.clone(),
                        c.m.map(|[a, b]| format!("({a}, {b})"))
                            .unwrap_or_else(|| "-".into()),
                    ]),
                    _ => None,
                })
                .collect(),
        ),
        _ => (
            vec![
                "stratum",
                "invariant",
                "case",
                "component",
                "graded",
                "hnt_limit",
            ],
            records
                .iter()
                .filter_map(|r| match r {
                    Record::Outcome(o) => Some(vec![
                        o.stratum.clone(),
                        o.invariant.clone(),
                        o.case.clone(),
                        o.component.clone(),
                        o.graded_degrees
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" "),
                        o.hnt_limit.clone(),
                    ]),
                    _ => None,
                })
                .collect(),
        ),
    };
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let text: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(text.join("  ").trim_end());
        out.push('\n');
    };
    line(header.clone());
    for row in &rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hnbb_core::{build_table, Rank};

    #[test]
    fn document_round_trip() {
        let table = build_table(Rank::Three, 1, Genus::new(3).unwrap());
        let text = incidence_json(&table).unwrap();
        let doc = Document::from_json(&text).unwrap();
        assert_eq!(doc.to_json().unwrap(), text);
        assert!(doc.results.iter().all(|r| matches!(r, Record::Outcome(_))));
        assert_eq!(
            doc.meta.paper_cases,
            ["ss", "1.1", "1.3", "1.4", "2.1", "2.3", "2.4"]
        );
    }

    #[test]
    fn table_columns_align() {
        let g = Genus::new(2).unwrap();
        let records: Vec<Record> = [
            FixedComponent::Min { rank: 3, degree: 0 },
            FixedComponent::Type111 { l: [2, 0, -2] },
        ]
        .iter()
        .map(|c| Record::Component(component_record(c, g)))
        .collect();
        assert_eq!(
            to_table(&records),
            "component    kind     m\nmin          min      -\nt111:2,0,-2  type111  (0, 0)\n"
        );
    }
}
