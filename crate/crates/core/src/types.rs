//! Shared vocabulary: exact slopes, genus, Harder-Narasimhan types and
//! polygons, fixed-point component labels and limit outcomes.
//!
//! Canonical text encodings:
//! - HN type: comma separated `rank:degree` pairs, e.g. `1:1,2:-1`.
//! - Rational: `p/q`, or a bare integer when `q = 1`.
//! - Fixed component: `min`, `r2:d1`, `t12:a|b`, `t21:a|b`, `t111:l1,l2,l3`,
//!   `poly:[degrees;weights]+[degrees;weights]`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

/// Exact fraction in lowest terms with positive denominator.
pub type Rational = num_rational::Ratio<i64>;

/// Errors raised while building or parsing the shared types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    /// A slope was requested for a rank-zero object.
    #[error("rank must be positive")]
    ZeroRank,
    /// Genus below 2.
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(i64),
    /// An HN type needs at least one step.
    #[error("HN type has no steps")]
    EmptyHnType,
    /// Step slopes must be non-increasing; equal neighbours get merged.
    #[error("HN step {index} has a slope larger than the step before it")]
    SlopesIncreasing {
        /// Zero-based index of the offending step.
        index: usize,
    },
    /// Two polygons compared by dominance must share their endpoints.
    #[error("polygons end at ({0}, {1}) and ({2}, {3})")]
    EndpointMismatch(u32, i64, u32, i64),
    /// Malformed text encoding.
    #[error("cannot parse {what} from {text:?}")]
    Parse {
        /// Which kind of value was being parsed.
        what: &'static str,
        /// The offending input.
        text: String,
    },
}

fn parse_err(what: &'static str, text: &str) -> TypeError {
    TypeError::Parse {
        what,
        text: text.to_string(),
    }
}

/// `degree / rank` in lowest terms.
pub fn slope(rank: u32, degree: i64) -> Result<Rational, TypeError> {
    if rank == 0 {
        return Err(TypeError::ZeroRank);
    }
    Ok(Rational::new(degree, i64::from(rank)))
}

pub(crate) fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub(crate) fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// The ranks this crate classifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    /// Rank 2.
    Two,
    /// Rank 3.
    Three,
}

impl Rank {
    /// Numeric value.
    pub fn get(self) -> u32 {
        match self {
            Rank::Two => 2,
            Rank::Three => 3,
        }
    }
}

impl TryFrom<u32> for Rank {
    type Error = u32;

    fn try_from(value: u32) -> Result<Self, u32> {
        match value {
            2 => Ok(Rank::Two),
            3 => Ok(Rank::Three),
            other => Err(other),
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Genus of the base curve; always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus(i64);

impl Genus {
    /// Checked constructor.
    pub fn new(g: i64) -> Result<Self, TypeError> {
        if g < 2 {
            return Err(TypeError::GenusTooSmall(g));
        }
        Ok(Genus(g))
    }

    /// The genus `g`.
    pub fn get(self) -> i64 {
        self.0
    }

    /// `deg K = 2g - 2`.
    pub fn canonical_degree(self) -> i64 {
        2 * self.0 - 2
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One semistable subquotient of a Harder-Narasimhan filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    /// Rank of the subquotient, positive.
    pub rank: u32,
    /// Degree of the subquotient.
    pub degree: i64,
}

impl Step {
    /// Slope of the subquotient.
    pub fn slope(&self) -> Rational {
        ratio(self.degree, i64::from(self.rank))
    }
}

/// Harder-Narasimhan type: the `(rank, degree)` list of subquotients with
/// strictly decreasing slopes. Also used as the label of a Shatz stratum.
///
/// Neighbouring steps of equal slope are merged on construction, so
/// `[(1,a),(1,a)]` and `[(2,2a)]` name the same type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HNType {
    steps: Vec<Step>,
}

impl HNType {
    /// Builds a type from `(rank, degree)` pairs listed by non-increasing
    /// slope.
    pub fn new<I>(steps: I) -> Result<Self, TypeError>
    where
        I: IntoIterator<Item = (u32, i64)>,
    {
        let mut merged: Vec<Step> = Vec::new();
        for (index, (rank, degree)) in steps.into_iter().enumerate() {
            if rank == 0 {
                return Err(TypeError::ZeroRank);
            }
            let step = Step { rank, degree };
            match merged.last_mut() {
                Some(last) if last.slope() == step.slope() => {
                    last.rank += rank;
                    last.degree += degree;
                }
                Some(last) if last.slope() < step.slope() => {
                    return Err(TypeError::SlopesIncreasing { index });
                }
                _ => merged.push(step),
            }
        }
        if merged.is_empty() {
            return Err(TypeError::EmptyHnType);
        }
        Ok(HNType { steps: merged })
    }

    /// The semistable type of the given rank and degree.
    pub fn semistable(rank: u32, degree: i64) -> Result<Self, TypeError> {
        HNType::new([(rank, degree)])
    }

    /// HN type of a direct sum of line bundles with the given degrees, in
    /// any order.
    pub fn from_line_degrees(degrees: &[i64]) -> Result<Self, TypeError> {
        let mut sorted = degrees.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        HNType::new(sorted.into_iter().map(|d| (1, d)))
    }

    /// The merged steps.
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Sum of the step ranks.
    pub fn total_rank(&self) -> u32 {
        self.steps.iter().map(|s| s.rank).sum()
    }

    /// Sum of the step degrees.
    pub fn total_degree(&self) -> i64 {
        self.steps.iter().map(|s| s.degree).sum()
    }

    /// Slope of the whole bundle.
    pub fn slope(&self) -> Rational {
        ratio(self.total_degree(), i64::from(self.total_rank()))
    }

    /// A single step means the underlying bundle is semistable.
    pub fn is_semistable(&self) -> bool {
        self.steps.len() == 1
    }

    /// Slopes `(mu_1, ..., mu_r)` repeated with multiplicity, non-increasing.
    pub fn slope_vector(&self) -> Vec<Rational> {
        self.steps
            .iter()
            .flat_map(|s| core::iter::repeat_n(s.slope(), s.rank as usize))
            .collect()
    }

    /// Harder-Narasimhan polygon.
    pub fn polygon(&self) -> HNPolygon {
        let mut vertices = Vec::with_capacity(self.steps.len() + 1);
        let (mut r, mut d) = (0u32, 0i64);
        vertices.push((r, d));
        for s in &self.steps {
            r += s.rank;
            d += s.degree;
            vertices.push((r, d));
        }
        HNPolygon { vertices }
    }
}

impl fmt::Display for HNType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", s.rank, s.degree)?;
        }
        Ok(())
    }
}

impl FromStr for HNType {
    type Err = TypeError;

    fn from_str(text: &str) -> Result<Self, TypeError> {
        let mut steps = Vec::new();
        for pair in text.split(',') {
            let (rank, degree) = pair
                .trim()
                .split_once(':')
                .ok_or_else(|| parse_err("HN type", text))?;
            let rank = rank
                .trim()
                .parse::<u32>()
                .map_err(|_| parse_err("HN type", text))?;
            let degree = degree
                .trim()
                .parse::<i64>()
                .map_err(|_| parse_err("HN type", text))?;
            steps.push((rank, degree));
        }
        HNType::new(steps)
    }
}

/// Convex polygon through the cumulative `(rank, degree)` points of an HN
/// type, starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HNPolygon {
    vertices: Vec<(u32, i64)>,
}

impl HNPolygon {
    /// Vertices from `(0, 0)` to `(rank, degree)`.
    pub fn vertices(&self) -> &[(u32, i64)] {
        &self.vertices
    }

    /// Final vertex.
    pub fn endpoint(&self) -> (u32, i64) {
        *self
            .vertices
            .last()
            .expect("polygon has at least the origin")
    }

    /// Height of the piecewise-linear polygon over `rank` (clamped to the
    /// polygon's horizontal extent).
    pub fn height_at(&self, rank: u32) -> Rational {
        for pair in self.vertices.windows(2) {
            let (r0, d0) = pair[0];
            let (r1, d1) = pair[1];
            if rank <= r1 {
                let run = i64::from(r1 - r0);
                let offset = i64::from(rank.saturating_sub(r0));
                return int(d0) + ratio((d1 - d0) * offset, run);
            }
        }
        int(self.endpoint().1)
    }

    /// True when successive edge slopes strictly decrease.
    pub fn is_strictly_convex(&self) -> bool {
        let slopes: Vec<Rational> = self
            .vertices
            .windows(2)
            .map(|w| ratio(w[1].1 - w[0].1, i64::from(w[1].0 - w[0].0)))
            .collect();
        slopes.windows(2).all(|w| w[0] > w[1])
    }

    /// `self` lies on or above `other` at every integer rank. Both polygons
    /// must share their endpoints.
    pub fn dominates(&self, other: &HNPolygon) -> Result<bool, TypeError> {
        let (r, d) = self.endpoint();
        let (r2, d2) = other.endpoint();
        if (r, d) != (r2, d2) {
            return Err(TypeError::EndpointMismatch(r, d, r2, d2));
        }
        Ok((1..r).all(|k| self.height_at(k) >= other.height_at(k)))
    }

    /// Sum of the heights over the interior integer ranks; strictly
    /// increases along strict dominance.
    pub(crate) fn height_sum(&self) -> Rational {
        let (r, _) = self.endpoint();
        (1..r).fold(Rational::zero(), |acc, k| acc + self.height_at(k))
    }
}

/// Which alternative of the limit classification fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(missing_docs)]
pub enum CaseTag {
    Semistable,
    Rank2Unstable,
    C1_1,
    C1_2,
    C1_3,
    C1_4,
    C2_1,
    C2_2,
    C2_3,
    C2_4,
    C3_1,
    C3_2,
}

impl CaseTag {
    /// All tags in canonical order.
    pub const ALL: [CaseTag; 12] = [
        CaseTag::Semistable,
        CaseTag::Rank2Unstable,
        CaseTag::C1_1,
        CaseTag::C1_2,
        CaseTag::C1_3,
        CaseTag::C1_4,
        CaseTag::C2_1,
        CaseTag::C2_2,
        CaseTag::C2_3,
        CaseTag::C2_4,
        CaseTag::C3_1,
        CaseTag::C3_2,
    ];

    /// Short code used in every serialized form.
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Semistable => "ss",
            CaseTag::Rank2Unstable => "rk2",
            CaseTag::C1_1 => "1.1",
            CaseTag::C1_2 => "1.2",
            CaseTag::C1_3 => "1.3",
            CaseTag::C1_4 => "1.4",
            CaseTag::C2_1 => "2.1",
            CaseTag::C2_2 => "2.2",
            CaseTag::C2_3 => "2.3",
            CaseTag::C2_4 => "2.4",
            CaseTag::C3_1 => "3.1",
            CaseTag::C3_2 => "3.2",
        }
    }

    /// The limit is strictly polystable exactly in these cases.
    pub fn is_strictly_polystable(self) -> bool {
        matches!(self, CaseTag::C1_2 | CaseTag::C2_2 | CaseTag::C3_2)
    }

    /// Cases whose limit has the same associated graded bundle as the input.
    pub fn preserves_graded(self) -> bool {
        matches!(
            self,
            CaseTag::Semistable
                | CaseTag::Rank2Unstable
                | CaseTag::C1_1
                | CaseTag::C1_4
                | CaseTag::C2_1
                | CaseTag::C2_4
                | CaseTag::C3_1
                | CaseTag::C3_2
        )
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = TypeError;

    fn from_str(text: &str) -> Result<Self, TypeError> {
        CaseTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == text)
            .ok_or_else(|| parse_err("case tag", text))
    }
}

/// One stable summand of a strictly polystable Hodge bundle: the degrees
/// of its graded pieces and their Hodge weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgeSummand {
    /// Degrees of the line bundle pieces, weight order.
    pub degrees: Vec<i64>,
    /// Hodge weights, one per piece.
    pub weights: Vec<u32>,
}

impl fmt::Display for HodgeSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_joined(f, &self.degrees)?;
        f.write_str(";")?;
        write_joined(f, &self.weights)?;
        f.write_str("]")
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Label of a fixed-point component of the `C*`-action, i.e. of a
/// Bialynicki-Birula stratum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedComponent {
    /// Zero Higgs field: the moduli of semistable bundles.
    Min {
        /// Ambient rank.
        rank: u32,
        /// Ambient degree.
        degree: i64,
    },
    /// Rank 2 Hodge bundle `E_1 + E_2` with `deg E_1 = d1`.
    Rank2 {
        /// Degree of the weight-zero line bundle.
        d1: i64,
    },
    /// Rank 3 Hodge bundle of type (1,2): a line bundle followed by a rank
    /// 2 piece.
    Type12 {
        /// Degree of the line bundle.
        sub: i64,
        /// Degree of the rank 2 piece.
        quotient: i64,
    },
    /// Rank 3 Hodge bundle of type (2,1).
    Type21 {
        /// Degree of the rank 2 piece.
        sub: i64,
        /// Degree of the line bundle.
        quotient: i64,
    },
    /// Rank 3 Hodge bundle of type (1,1,1), degrees in weight order.
    Type111 {
        /// `(l1, l2, l3)`.
        l: [i64; 3],
    },
    /// Strictly polystable limit, kept apart from every `F_lambda`.
    PolystableSum(Vec<HodgeSummand>),
}

impl FixedComponent {
    /// Sum of all degrees in the label. Rank 2 labels record only `d1`, so
    /// they have no total of their own.
    pub fn total_degree(&self) -> Option<i64> {
        match self {
            FixedComponent::Min { degree, .. } => Some(*degree),
            FixedComponent::Rank2 { .. } => None,
            FixedComponent::Type12 { sub, quotient } | FixedComponent::Type21 { sub, quotient } => {
                Some(sub + quotient)
            }
            FixedComponent::Type111 { l } => Some(l.iter().sum()),
            FixedComponent::PolystableSum(parts) => {
                Some(parts.iter().flat_map(|p| p.degrees.iter()).sum())
            }
        }
    }

    /// Parses the text encoding. `min` carries no numbers, so the ambient
    /// rank and degree are supplied by the caller.
    pub fn parse(text: &str, rank: u32, degree: i64) -> Result<Self, TypeError> {
        let bad = || parse_err("component label", text);
        if text == "min" {
            return Ok(FixedComponent::Min { rank, degree });
        }
        let (kind, body) = text.split_once(':').ok_or_else(bad)?;
        let pair = |body: &str| -> Result<(i64, i64), TypeError> {
            let (a, b) = body.split_once('|').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        };
        match kind {
            "r2" => Ok(FixedComponent::Rank2 {
                d1: body.parse().map_err(|_| bad())?,
            }),
            "t12" => {
                let (sub, quotient) = pair(body)?;
                Ok(FixedComponent::Type12 { sub, quotient })
            }
            "t21" => {
                let (sub, quotient) = pair(body)?;
                Ok(FixedComponent::Type21 { sub, quotient })
            }
            "t111" => {
                let l: Vec<i64> = parse_list(body).ok_or_else(bad)?;
                let l: [i64; 3] = l.try_into().map_err(|_| bad())?;
                Ok(FixedComponent::Type111 { l })
            }
            "poly" => {
                let mut parts = Vec::new();
                for chunk in body.split('+') {
                    let inner = chunk
                        .strip_prefix('[')
                        .and_then(|c| c.strip_suffix(']'))
                        .ok_or_else(bad)?;
                    let (degrees, weights) = inner.split_once(';').ok_or_else(bad)?;
                    let degrees: Vec<i64> = parse_list(degrees).ok_or_else(bad)?;
                    let weights: Vec<u32> = parse_list(weights).ok_or_else(bad)?;
                    if degrees.len() != weights.len() {
                        return Err(bad());
                    }
                    parts.push(HodgeSummand { degrees, weights });
                }
                Ok(FixedComponent::PolystableSum(parts))
            }
            _ => Err(bad()),
        }
    }
}

fn parse_list<T: FromStr>(text: &str) -> Option<Vec<T>> {
    text.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedComponent::Min { .. } => f.write_str("min"),
            FixedComponent::Rank2 { d1 } => write!(f, "r2:{d1}"),
            FixedComponent::Type12 { sub, quotient } => write!(f, "t12:{sub}|{quotient}"),
            FixedComponent::Type21 { sub, quotient } => write!(f, "t21:{sub}|{quotient}"),
            FixedComponent::Type111 { l } => write!(f, "t111:{},{},{}", l[0], l[1], l[2]),
            FixedComponent::PolystableSum(parts) => {
                f.write_str("poly:")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// The auxiliary datum that selects a sub-case of the rank 3
/// classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    /// Slope of the line bundle `I` saturating `phi_21(E_1)` in `E/E_1`.
    SlopeI(Rational),
    /// Slope of the line bundle `N = ker(phi_32)` in `E_2`.
    SlopeN(Rational),
    /// Whether `N = E_1` (equivalently `I = E_2/E_1`).
    Aligned(bool),
    /// Semistable and rank 2 inputs need no extra datum.
    NotApplicable,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::SlopeI(v) => write!(f, "I={v}"),
            Invariant::SlopeN(v) => write!(f, "N={v}"),
            Invariant::Aligned(true) => f.write_str("aligned"),
            Invariant::Aligned(false) => f.write_str("misaligned"),
            Invariant::NotApplicable => f.write_str("-"),
        }
    }
}

/// Description of the limit `lim_{z -> 0} (E, z * Phi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LimitOutcome {
    /// Which alternative fired.
    pub case: CaseTag,
    /// Fixed-point component containing the limit.
    pub component: FixedComponent,
    /// Degrees of the graded pieces of the limit, listed by the weights of
    /// the gauge that produced it (non-decreasing Hodge weight).
    pub graded_degrees: Vec<i64>,
    /// HN type of the limit's underlying bundle.
    pub hnt_limit: HNType,
    /// True for the strictly polystable cases.
    pub strictly_polystable: bool,
}

impl LimitOutcome {
    pub(crate) fn new(
        case: CaseTag,
        component: FixedComponent,
        graded_degrees: Vec<i64>,
        hnt_limit: HNType,
    ) -> Self {
        LimitOutcome {
            case,
            component,
            graded_degrees,
            hnt_limit,
            strictly_polystable: case.is_strictly_polystable(),
        }
    }
}

impl fmt::Display for LimitOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} graded [", self.case, self.component)?;
        write_joined(f, &self.graded_degrees)?;
        write!(f, "] HNT {}", self.hnt_limit)?;
        if self.strictly_polystable {
            f.write_str(" (strictly polystable)")?;
        }
        Ok(())
    }
}

/// Renders a rational the way every text format expects.
pub fn format_rational(value: &Rational) -> String {
    format!("{value}")
}
