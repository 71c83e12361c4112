//! Report values emitted by the command-line tool, as JSON or aligned text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use subadj_core::families::{CbfReport, ContractedModel};
use subadj_core::surfaces::{DivisorKind, SurfaceModel};
use subadj_core::{rational, LabelSet, Rational};

use crate::schema::{qs, Q};
use crate::CliError;

pub trait Render {
    fn table(&self) -> String;
}

/// Left-aligned columns separated by two spaces.
pub fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = widths[i] - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    for r in rows {
        out.push_str(&line(r.clone()));
    }
    out
}

fn r(x: &Rational) -> String {
    rational::format(x)
}

fn set(s: &[u32]) -> String {
    let body: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", body.join(","))
}

fn class_string(c: &[Q]) -> String {
    let body: Vec<String> = c.iter().map(|q| r(&q.0)).collect();
    format!("({})", body.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataReport {
    pub n: u32,
    /// `"boundary"` for all decompositions, `"edge_cuts"` for those of one tree.
    pub source: String,
    pub count: usize,
    pub decompositions: Vec<Split>,
}

impl Render for StrataReport {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .decompositions
            .iter()
            .map(|s| vec![set(&s.first), set(&s.second)])
            .collect();
        format!("n = {}  {}: {}\n{}", self.n, self.source, self.count, aligned(&["side with 1", "other side"], &rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRow {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
    pub alpha_first: Q,
    pub charged: Vec<u32>,
    pub coefficient: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRow {
    pub id: u32,
    pub tails: Vec<u32>,
    pub coefficient: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub vertex: u32,
    pub carried: Vec<u32>,
    pub alpha: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsupportReport {
    pub weights: Vec<Q>,
    pub cuts: Vec<CutRow>,
    pub vertices: Vec<VertexRow>,
    pub contraction: Vec<StepRow>,
    pub k0: usize,
    pub distinguished: u32,
}

impl Render for FsupportReport {
    fn table(&self) -> String {
        let cuts: Vec<Vec<String>> = self
            .cuts
            .iter()
            .map(|c| vec![format!("{}|{}", set(&c.first), set(&c.second)), r(&c.alpha_first.0), set(&c.charged), r(&c.coefficient.0)])
            .collect();
        let verts: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| vec![v.id.to_string(), set(&v.tails), r(&v.coefficient.0)])
            .collect();
        let steps: Vec<Vec<String>> = self
            .contraction
            .iter()
            .enumerate()
            .map(|(k, s)| vec![k.to_string(), s.vertex.to_string(), set(&s.carried), r(&s.alpha.0)])
            .collect();
        format!(
            "{}\n{}\n{}\ndistinguished vertex: {} (step {})\n",
            aligned(&["cut", "alpha(side with 1)", "charged side", "coefficient"], &cuts),
            aligned(&["vertex", "tails", "F coefficient"], &verts),
            aligned(&["step", "vertex", "carried", "alpha"], &steps),
            self.distinguished,
            self.k0
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionRow {
    pub colliding: Vec<u32>,
    pub base: Q,
    pub tangency: u32,
    pub order: u64,
    /// `order / (m·p)`.
    pub normalized: Q,
    /// Boundary coefficient when `colliding | rest` is a one-edge degeneration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli_coefficient: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionJson {
    pub numerator: Vec<Q>,
    pub denominator: Vec<Q>,
    pub form_weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub weights: Vec<Q>,
    pub m: u64,
    pub p: u64,
    pub form_weight: u64,
    pub points: Vec<Q>,
    pub pole_orders: Vec<i64>,
    pub divisor_empty: bool,
    pub divisor_degree: i64,
    pub collisions: Vec<CollisionRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionJson>,
}

impl Render for OmegaReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "m = {}  p = {}  form weight m·p = {}", self.m, self.p, self.form_weight);
        let rows: Vec<Vec<String>> = self
            .points
            .iter()
            .zip(&self.pole_orders)
            .enumerate()
            .map(|(i, (pt, o))| vec![(i + 1).to_string(), r(&pt.0), r(&self.weights[i].0), o.to_string()])
            .collect();
        out.push_str(&aligned(&["label", "point", "d", "pole order"], &rows));
        let _ = writeln!(out, "zero divisor empty: {} (degree {})", self.divisor_empty, self.divisor_degree);
        if !self.collisions.is_empty() {
            let rows: Vec<Vec<String>> = self
                .collisions
                .iter()
                .map(|c| {
                    vec![
                        set(&c.colliding),
                        c.tangency.to_string(),
                        c.order.to_string(),
                        r(&c.normalized.0),
                        c.moduli_coefficient.as_ref().map_or_else(|| String::from("-"), |q| r(&q.0)),
                    ]
                })
                .collect();
            out.push_str(&aligned(&["colliding", "tangency", "order", "order/(mp)", "boundary coefficient"], &rows));
        }
        if let Some(s) = &self.section {
            let _ = writeln!(out, "numerator:   {}", class_string(&s.numerator));
            let _ = writeln!(out, "denominator: {}", class_string(&s.denominator));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRow {
    pub name: String,
    /// `"section"` or `"vertical"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    pub d: Q,
    pub class: Vec<Q>,
    pub self_intersection: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberComponentRow {
    pub name: String,
    pub w: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSummary {
    pub point: String,
    pub components: Vec<FiberComponentRow>,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub genus: u32,
    pub e: i64,
    pub rank: usize,
    pub canonical: Vec<Q>,
    pub canonical_square: Q,
    pub relative_canonical: Vec<Q>,
    pub gram_determinant: Q,
    pub divisors: Vec<DivisorRow>,
    pub fibers: Vec<FiberSummary>,
    /// Pairwise intersections of tracked divisors, in `divisors` order.
    pub intersections: Vec<Vec<Q>>,
    pub log_class: Vec<Q>,
    pub log_class_is_pullback: bool,
}

impl ModelReport {
    pub fn of(m: &SurfaceModel) -> Result<Self, CliError> {
        let mut divisors = Vec::new();
        for t in m.tracked() {
            let (kind, point, w) = match &t.kind {
                DivisorKind::Horizontal => ("section", None, None),
                DivisorKind::Vertical { point, multiplicity } => ("vertical", Some(point.clone()), Some(*multiplicity)),
            };
            divisors.push(DivisorRow {
                name: t.name.clone(),
                kind: kind.to_string(),
                point,
                w,
                d: Q::from(&t.coefficient),
                class: qs(t.class.coeffs()),
                self_intersection: Q(m.intersect(&t.class, &t.class)?),
            });
        }
        let mut fibers = Vec::new();
        for q in m.points() {
            let comps = m
                .fiber_decomposition(q)?
                .into_iter()
                .map(|(t, w)| FiberComponentRow { name: t.name.clone(), w })
                .collect();
            fibers.push(FiberSummary { point: q.clone(), components: comps, identity_holds: m.fiber_identity_holds(q)? });
        }
        let mut intersections = Vec::new();
        for a in m.tracked() {
            let mut row = Vec::new();
            for b in m.tracked() {
                row.push(Q(m.intersect(&a.class, &b.class)?));
            }
            intersections.push(row);
        }
        let log = &m.relative_canonical() + &m.weighted_sum(|_| true);
        Ok(ModelReport {
            genus: m.genus(),
            e: m.e(),
            rank: m.rank(),
            canonical: qs(m.canonical().coeffs()),
            canonical_square: Q(m.intersect(m.canonical(), m.canonical())?),
            relative_canonical: qs(m.relative_canonical().coeffs()),
            gram_determinant: Q(m.gram_determinant()),
            divisors,
            fibers,
            intersections,
            log_class_is_pullback: m.is_numeric_pullback(&log)?,
            log_class: qs(log.coeffs()),
        })
    }
}

impl Render for ModelReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "genus {}  e = {}  lattice rank {}  (basis C0, F, E1..)", self.genus, self.e, self.rank);
        let _ = writeln!(out, "K = {}  K^2 = {}", class_string(&self.canonical), r(&self.canonical_square.0));
        let _ = writeln!(out, "K_rel = {}", class_string(&self.relative_canonical));
        let _ = writeln!(out, "Gram determinant = {}", r(&self.gram_determinant.0));
        let rows: Vec<Vec<String>> = self
            .divisors
            .iter()
            .map(|d| {
                vec![
                    d.name.clone(),
                    d.kind.clone(),
                    d.point.clone().unwrap_or_else(|| String::from("-")),
                    d.w.map_or_else(|| String::from("-"), |w| w.to_string()),
                    r(&d.d.0),
                    class_string(&d.class),
                    r(&d.self_intersection.0),
                ]
            })
            .collect();
        out.push_str(&aligned(&["name", "kind", "over", "w", "d", "class", "self-int"], &rows));
        for f in &self.fibers {
            let comps: Vec<String> = f.components.iter().map(|c| format!("{}·{}", c.w, c.name)).collect();
            let _ = writeln!(out, "fiber over {}: {}  (Σ w·class = F: {})", f.point, comps.join(" + "), f.identity_holds);
        }
        let _ = writeln!(
            out,
            "K_rel + D = {}  numerically a pullback: {}",
            class_string(&self.log_class),
            self.log_class_is_pullback
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub name: String,
    pub w: u64,
    pub d: Q,
    pub dbar: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberJson {
    pub point: String,
    pub components: Vec<ComponentJson>,
    pub delta: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointValue {
    pub point: String,
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbfFlags {
    pub all_delta_below_one: bool,
    pub witnessed_deltas_nonnegative: bool,
    pub deg_m_nonnegative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbfJson {
    pub fibers: Vec<FiberJson>,
    pub discriminant: Vec<PointValue>,
    pub deg_l: Q,
    pub deg_m: Q,
    pub flags: CbfFlags,
}

impl From<&CbfReport> for CbfJson {
    fn from(c: &CbfReport) -> Self {
        CbfJson {
            fibers: c
                .fibers
                .iter()
                .map(|f| FiberJson {
                    point: f.point.clone(),
                    components: f
                        .components
                        .iter()
                        .map(|x| ComponentJson {
                            name: x.name.clone(),
                            w: x.multiplicity,
                            d: Q::from(&x.coefficient),
                            dbar: Q::from(&x.dbar),
                        })
                        .collect(),
                    delta: Q::from(&f.delta),
                    witness: f.witness.clone(),
                })
                .collect(),
            discriminant: c.discriminant().into_iter().map(|(point, v)| PointValue { point, value: Q(v) }).collect(),
            deg_l: Q::from(&c.deg_l),
            deg_m: Q::from(&c.deg_m),
            flags: CbfFlags {
                all_delta_below_one: c.all_delta_below_one,
                witnessed_deltas_nonnegative: c.witnessed_deltas_nonnegative(),
                deg_m_nonnegative: c.deg_m_nonnegative,
            },
        }
    }
}

impl CbfJson {
    pub fn flags_hold(&self) -> bool {
        self.flags.all_delta_below_one && self.flags.witnessed_deltas_nonnegative && self.flags.deg_m_nonnegative
    }
}

impl Render for CbfJson {
    fn table(&self) -> String {
        let mut rows = Vec::new();
        for f in &self.fibers {
            for c in &f.components {
                rows.push(vec![f.point.clone(), c.name.clone(), c.w.to_string(), r(&c.d.0), r(&c.dbar.0)]);
            }
        }
        let mut out = aligned(&["point", "component", "w", "d", "dbar"], &rows);
        let disc: Vec<Vec<String>> = self
            .fibers
            .iter()
            .map(|f| vec![f.point.clone(), r(&f.delta.0), f.witness.clone().unwrap_or_else(|| String::from("-"))])
            .collect();
        out.push_str(&aligned(&["point", "delta", "witness (1-w <= d)"], &disc));
        let _ = writeln!(out, "deg L = {}", r(&self.deg_l.0));
        let _ = writeln!(out, "deg M = deg L - deg Delta = {}", r(&self.deg_m.0));
        let _ = writeln!(
            out,
            "all delta < 1: {}  witnessed delta >= 0: {}  deg M >= 0: {}",
            self.flags.all_delta_below_one, self.flags.witnessed_deltas_nonnegative, self.flags.deg_m_nonnegative
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushedJson {
    pub name: String,
    pub labels: Vec<u32>,
    pub d: Q,
    pub class: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub component: String,
    pub genus: u32,
    pub e: i64,
    pub pushed: Vec<PushedJson>,
    pub anchors: Vec<(String, String)>,
    pub discriminant: Vec<PointValue>,
    pub deg_l: Q,
    pub deg_m: Q,
    pub truncated_degree: Q,
    pub truncation_agrees: bool,
    pub deg_m_nonnegative: bool,
}

impl FamilyJson {
    pub fn of(c: &ContractedModel, deg_l: &Rational) -> Self {
        let deg_m = deg_l - c.discriminant_degree();
        FamilyJson {
            component: c.component.clone(),
            genus: c.genus,
            e: c.e,
            pushed: c
                .pushed
                .iter()
                .map(|p| PushedJson {
                    name: p.name.clone(),
                    labels: p.labels.to_vec(),
                    d: Q::from(&p.coefficient),
                    class: qs(p.class.coeffs()),
                })
                .collect(),
            anchors: c.anchors.clone(),
            discriminant: c.discriminant.iter().map(|(p, v)| PointValue { point: p.clone(), value: Q::from(v) }).collect(),
            deg_l: Q::from(deg_l),
            deg_m_nonnegative: deg_m >= rational::zero(),
            deg_m: Q(deg_m),
            truncation_agrees: c.truncated_degree == *deg_l,
            truncated_degree: Q::from(&c.truncated_degree),
        }
    }
}

impl Render for FamilyJson {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "distinguished component: {}  (genus {}, e = {})", self.component, self.genus, self.e);
        let rows: Vec<Vec<String>> = self
            .pushed
            .iter()
            .map(|p| vec![p.name.clone(), set(&p.labels), r(&p.d.0), class_string(&p.class)])
            .collect();
        out.push_str(&aligned(&["pushed section", "labels", "d#", "class on ruled model"], &rows));
        let rows: Vec<Vec<String>> = self
            .anchors
            .iter()
            .zip(&self.discriminant)
            .map(|((p, a), d)| vec![p.clone(), a.clone(), r(&d.value.0)])
            .collect();
        out.push_str(&aligned(&["point", "kept component", "delta"], &rows));
        let _ = writeln!(out, "deg L = {}", r(&self.deg_l.0));
        let _ = writeln!(out, "deg M = {}", r(&self.deg_m.0));
        let _ = writeln!(
            out,
            "truncated degree = {}  (agrees: {})",
            r(&self.truncated_degree.0),
            self.truncation_agrees
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRow>,
    pub passed: bool,
}

impl Render for VerifyReport {
    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| vec![if c.passed { "PASS" } else { "FAIL" }.to_string(), c.name.clone(), c.detail.clone()])
            .collect();
        let mut out = aligned(&["status", "check", "detail"], &rows);
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

pub fn labels(s: LabelSet) -> Vec<u32> {
    s.to_vec()
}
