//! JSON documents for problems, reports and cross-checks.
//!
//! Rationals are strings `"p/q"` (or `"p"`); bare JSON integers are accepted
//! on input, floating-point literals are rejected.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::OrderingCone;
use crate::error::{Error, Result};
use crate::exactmath::{LinConstraint, Matrix, Relation};
use crate::oracle::{Crosscheck, GridSpec};
use crate::polyhedron::{HPolyhedron, VPolyhedron};
use crate::pwl::{Piece, PiecewiseLinearFn, Problem};
use crate::semiclosed::{Region, SemiClosedPolyhedron};
use crate::solver::{Connectivity, SolveReport, SolveStats};
use crate::{Rat, Subspace};

pub const DEFAULT_MAX_PIECES: usize = 16;
pub const DEFAULT_MAX_DIM: usize = 6;

/// Parses `"p"` or `"p/q"` with `q ≠ 0`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// A rational that serializes as its canonical string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatStr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatStr, E> {
                parse_rat(v).map(RatStr).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(Rat::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(Rat::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<RatStr, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} not allowed; write rationals as strings"
                )))
            }
        }
        d.deserialize_any(V)
    }
}

fn to_vec(v: &[RatStr]) -> Vec<Rat> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn from_vec(v: &[Rat]) -> Vec<RatStr> {
    v.iter().cloned().map(RatStr).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowDoc {
    pub a: Vec<RatStr>,
    pub b: RatStr,
}

/// Half-space form; `lt` is present only for semi-closed sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HFormDoc {
    pub dim: usize,
    #[serde(default)]
    pub eq: Vec<RowDoc>,
    #[serde(default)]
    pub le: Vec<RowDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lt: Vec<RowDoc>,
}

impl HFormDoc {
    fn rows(&self, what: &str) -> Result<Vec<LinConstraint<Rat>>> {
        let mut out = Vec::new();
        for (rows, rel) in [
            (&self.eq, Relation::Eq),
            (&self.le, Relation::Le),
            (&self.lt, Relation::Lt),
        ] {
            for r in rows {
                if r.a.len() != self.dim {
                    return Err(Error::DimensionMismatch(format!(
                        "{what}: row of length {} in a dim {} system",
                        r.a.len(),
                        self.dim
                    )));
                }
                out.push(LinConstraint::new(to_vec(&r.a), rel, r.b.0.clone()));
            }
        }
        Ok(out)
    }

    pub fn to_semiclosed(&self, what: &str) -> Result<SemiClosedPolyhedron<Rat>> {
        Ok(SemiClosedPolyhedron::from_constraints(
            self.dim,
            self.rows(what)?,
        ))
    }

    pub fn to_polyhedron(&self, what: &str) -> Result<HPolyhedron<Rat>> {
        if !self.lt.is_empty() {
            return Err(Error::Parse(format!(
                "{what}: strict rows are not allowed here"
            )));
        }
        Ok(HPolyhedron::from_constraints(self.dim, self.rows(what)?))
    }

    pub fn from_semiclosed(s: &SemiClosedPolyhedron<Rat>) -> Self {
        let rows = |rs: &[LinConstraint<Rat>]| {
            rs.iter()
                .map(|r| RowDoc {
                    a: from_vec(&r.coeffs),
                    b: RatStr(r.rhs.clone()),
                })
                .collect()
        };
        HFormDoc {
            dim: s.dim,
            eq: rows(&s.equalities),
            le: rows(&s.closed),
            lt: rows(&s.strict),
        }
    }

    pub fn from_polyhedron(p: &HPolyhedron<Rat>) -> Self {
        Self::from_semiclosed(&p.clone().into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VFormDoc {
    pub dim: usize,
    #[serde(default)]
    pub points: Vec<Vec<RatStr>>,
    #[serde(default)]
    pub rays: Vec<Vec<RatStr>>,
    #[serde(default)]
    pub lineality: Vec<Vec<RatStr>>,
}

impl VFormDoc {
    pub fn from_polyhedron(v: &VPolyhedron<Rat>) -> Self {
        VFormDoc {
            dim: v.dim,
            points: v.points.iter().map(|p| from_vec(p)).collect(),
            rays: v.rays.iter().map(|p| from_vec(p)).collect(),
            lineality: v.lineality.basis().iter().map(|p| from_vec(p)).collect(),
        }
    }

    pub fn to_polyhedron(&self) -> Result<VPolyhedron<Rat>> {
        let all = self.points.iter().chain(&self.rays).chain(&self.lineality);
        if all.clone().any(|p| p.len() != self.dim) {
            return Err(Error::DimensionMismatch(
                "generator length differs from dim".into(),
            ));
        }
        Ok(VPolyhedron::new(
            self.dim,
            self.points.iter().map(|p| to_vec(p)).collect(),
            self.rays.iter().map(|p| to_vec(p)).collect(),
            Subspace::span(self.dim, self.lineality.iter().map(|p| to_vec(p))),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub rows: Vec<Vec<RatStr>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub domain: HFormDoc,
    pub map: Vec<Vec<RatStr>>,
    pub offset: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    #[serde(rename = "box")]
    pub bounds: Vec<[RatStr; 2]>,
    pub steps: Vec<usize>,
}

impl GridDoc {
    pub fn to_spec(&self) -> Result<GridSpec<Rat>> {
        GridSpec::new(
            self.bounds.iter().map(|b| b[0].0.clone()).collect(),
            self.bounds.iter().map(|b| b[1].0.clone()).collect(),
            self.steps.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsDoc {
    #[serde(default = "default_max_pieces")]
    pub max_pieces: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

fn default_max_pieces() -> usize {
    DEFAULT_MAX_PIECES
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

impl Default for LimitsDoc {
    fn default() -> Self {
        LimitsDoc {
            max_pieces: DEFAULT_MAX_PIECES,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub source_dim: usize,
    pub image_dim: usize,
    pub feasible: HFormDoc,
    pub cone: ConeDoc,
    pub pieces: Vec<PieceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitsDoc>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn limits(&self) -> LimitsDoc {
        self.limits.clone().unwrap_or_default()
    }

    /// Builds the problem; fails on limit violations and malformed shapes.
    pub fn to_problem(&self) -> Result<Problem<Rat>> {
        let limits = self.limits();
        let dim = self.source_dim.max(self.image_dim);
        if dim > limits.max_dim {
            return Err(Error::Limit(format!(
                "dimension {dim} exceeds max_dim {}",
                limits.max_dim
            )));
        }
        if self.pieces.len() > limits.max_pieces {
            return Err(Error::Limit(format!(
                "{} pieces exceed max_pieces {}",
                self.pieces.len(),
                limits.max_pieces
            )));
        }
        let feasible = self.feasible.to_polyhedron("feasible")?;
        let cone = OrderingCone::build(
            self.image_dim,
            self.cone.rows.iter().map(|r| to_vec(r)).collect(),
        )?;
        let mut pieces = Vec::new();
        for (k, p) in self.pieces.iter().enumerate() {
            let what = format!("piece {k}");
            if p.map.len() != self.image_dim || p.map.iter().any(|r| r.len() != self.source_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "{what}: map must be {}x{}",
                    self.image_dim, self.source_dim
                )));
            }
            pieces.push(Piece {
                domain: p.domain.to_polyhedron(&what)?,
                map: Matrix::from_rows(self.source_dim, p.map.iter().map(|r| to_vec(r)).collect()),
                offset: to_vec(&p.offset),
            });
        }
        let f = PiecewiseLinearFn::new(self.source_dim, self.image_dim, pieces)?;
        Problem::new(f, feasible, cone)
    }

    pub fn from_problem(p: &Problem<Rat>) -> Self {
        ProblemFile {
            source_dim: p.f.source_dim,
            image_dim: p.f.image_dim,
            feasible: HFormDoc::from_polyhedron(&p.feasible),
            cone: ConeDoc {
                rows: p.cone.rows().iter().map(|r| from_vec(r)).collect(),
            },
            pieces: p
                .f
                .pieces
                .iter()
                .map(|pc| PieceDoc {
                    domain: HFormDoc::from_polyhedron(&pc.domain),
                    map: pc.map.rows().iter().map(|r| from_vec(r)).collect(),
                    offset: from_vec(&pc.offset),
                })
                .collect(),
            grid: None,
            limits: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub dim: usize,
    pub pieces: Vec<HFormDoc>,
}

impl RegionDoc {
    pub fn from_region(r: &Region<Rat>) -> Self {
        RegionDoc {
            dim: r.dim,
            pieces: r.pieces.iter().map(HFormDoc::from_semiclosed).collect(),
        }
    }

    pub fn to_region(&self) -> Result<Region<Rat>> {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.to_semiclosed(&format!("region piece {i}")))
            .collect::<Result<Vec<_>>>()?;
        if pieces.iter().any(|p| p.dim != self.dim) {
            return Err(Error::DimensionMismatch("region piece dim differs".into()));
        }
        Ok(Region::new(self.dim, pieces))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityDoc {
    pub connected: bool,
    pub components: Vec<Vec<usize>>,
    pub certified: bool,
}

impl From<&Connectivity> for ConnectivityDoc {
    fn from(c: &Connectivity) -> Self {
        ConnectivityDoc {
            connected: c.connected,
            components: c.components.clone(),
            certified: c.certified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificatesDoc {
    pub sol: ConnectivityDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wsol: Option<ConnectivityDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub image_pieces: usize,
    pub q_pieces: usize,
    pub frontier_pieces: usize,
    pub weak_frontier_pieces: usize,
    pub sol_pieces: usize,
    pub wsol_pieces: usize,
    pub lp_count: u64,
}

impl From<&SolveStats> for StatsDoc {
    fn from(s: &SolveStats) -> Self {
        StatsDoc {
            image_pieces: s.image_pieces,
            q_pieces: s.q_pieces,
            frontier_pieces: s.frontier_pieces,
            weak_frontier_pieces: s.weak_frontier_pieces,
            sol_pieces: s.sol_pieces,
            wsol_pieces: s.wsol_pieces,
            lp_count: s.lp_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub sol: Vec<Vec<(usize, usize)>>,
    pub wsol: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub sol: RegionDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wsol: Option<RegionDoc>,
    pub convex: bool,
    pub sol_closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wsol_closed: Option<bool>,
    pub certificates: CertificatesDoc,
    pub provenance: ProvenanceDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsDoc>,
    pub notes: Vec<String>,
}

impl ReportDoc {
    pub fn from_report(r: &SolveReport<Rat>, with_stats: bool) -> Self {
        ReportDoc {
            sol: RegionDoc::from_region(&r.sol),
            wsol: r.wsol.as_ref().map(RegionDoc::from_region),
            convex: r.convex,
            sol_closed: r.sol_closed,
            wsol_closed: r.wsol_closed,
            certificates: CertificatesDoc {
                sol: (&r.sol_connectivity).into(),
                wsol: r.wsol_connectivity.as_ref().map(Into::into),
            },
            provenance: ProvenanceDoc {
                sol: r.sol_provenance.clone(),
                wsol: r.wsol_provenance.clone(),
            },
            stats: with_stats.then(|| (&r.stats).into()),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MismatchDoc {
    pub point: Vec<RatStr>,
    pub oracle_sol: bool,
    pub decomp_sol: bool,
    pub oracle_wsol: Option<bool>,
    pub decomp_wsol: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckDoc {
    pub checked: usize,
    pub skipped: usize,
    pub mismatches: Vec<MismatchDoc>,
}

impl From<&Crosscheck<Rat>> for CrosscheckDoc {
    fn from(c: &Crosscheck<Rat>) -> Self {
        CrosscheckDoc {
            checked: c.checked,
            skipped: c.skipped,
            mismatches: c
                .mismatches
                .iter()
                .map(|m| MismatchDoc {
                    point: from_vec(&m.point),
                    oracle_sol: m.oracle_sol,
                    decomp_sol: m.decomp_sol,
                    oracle_wsol: m.oracle_wsol,
                    decomp_wsol: m.decomp_wsol,
                })
                .collect(),
        }
    }
}

/// One line per row, e.g. `t1 + 2 t2 <= 3`.
pub fn format_row(row: &LinConstraint<Rat>, var: &str) -> String {
    let mut lhs = String::new();
    for (i, c) in row.coeffs.iter().enumerate() {
        if c == &Rat::from_integer(0.into()) {
            continue;
        }
        let neg = c < &Rat::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        let sign = match (lhs.is_empty(), neg) {
            (true, true) => "-".to_string(),
            (true, false) => String::new(),
            (false, true) => " - ".to_string(),
            (false, false) => " + ".to_string(),
        };
        let coef = if mag == Rat::from_integer(1.into()) {
            String::new()
        } else {
            format!("{mag} ")
        };
        lhs.push_str(&format!("{sign}{coef}{var}{}", i + 1));
    }
    if lhs.is_empty() {
        lhs.push('0');
    }
    let rel = match row.rel {
        Relation::Eq => "=",
        Relation::Le => "<=",
        Relation::Lt => "<",
    };
    format!("{lhs} {rel} {}", row.rhs)
}

pub fn format_piece(p: &SemiClosedPolyhedron<Rat>, var: &str) -> String {
    let rows: Vec<String> = p.constraints().iter().map(|r| format_row(r, var)).collect();
    if rows.is_empty() {
        "{ whole space }".to_string()
    } else {
        format!("{{ {} }}", rows.join(", "))
    }
}
