//! Discriminant and moduli parts along one-parameter families.
//!
//! A [`LogFibration`] is a blown-up ruled surface with log coefficients on its
//! tracked divisors. For such a pair, `K_{X/B} + D` is numerically `f*(L)` and
//! `L = M + Δ` with `Δ = Σ δ_ℓ Q_ℓ`, where `δ_ℓ` is the largest
//! `(d + w − 1)/w` over the components of the fiber over `Q_ℓ`.
//!
//! A [`FamilyModel`] glues several surfaces along sections into a family of
//! pointed stable rational curves; [`contract_and_degree`] computes `deg L` by
//! collapsing it onto one ruled component.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::labels::LabelSet;
use crate::linalg;
use crate::rational::{self, Rational};
use crate::surfaces::{DivisorClass, DivisorKind, SurfaceModel, TrackedDivisor};
use crate::trees::{StableTree, VertexId};
use crate::weights::{distinguished_component, WeightVector};
use crate::{Error, Result};

/// `(d + w − 1)/w`.
pub fn dbar(d: &Rational, w: u64) -> Result<Rational> {
    if w == 0 {
        return Err(Error::InvalidInput(String::from("fiber multiplicity must be at least 1")));
    }
    let w = rational::int(w as i64);
    Ok((d + &w - rational::one()) / w)
}

/// Largest `dbar` over a fiber given as `(w, d)` pairs.
pub fn delta_at(fiber: &[(u64, Rational)]) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for (w, d) in fiber {
        if *d >= rational::one() {
            return Err(Error::InvalidInput(format!("vertical coefficient {d} is not below 1")));
        }
        let v = dbar(d, *w)?;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| Error::InvalidInput(String::from("empty fiber")))
}

/// First entry with `1 − w ≤ d`; its presence forces `δ ≥ 0`.
pub fn nonnegativity_witness(fiber: &[(u64, Rational)]) -> Option<usize> {
    fiber.iter().position(|(w, d)| rational::one() - rational::int(*w as i64) <= *d)
}

/// A blown-up ruled surface whose tracked coefficients form the log divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogFibration {
    surface: SurfaceModel,
}

impl LogFibration {
    pub fn new(surface: SurfaceModel) -> Result<Self> {
        let mut fiber_degree = rational::zero();
        for t in surface.tracked() {
            if t.is_horizontal() {
                if !t.coefficient.is_positive() || t.coefficient > rational::one() {
                    return Err(Error::InvalidInput(format!(
                        "horizontal coefficient {} on `{}` outside (0, 1]",
                        t.coefficient, t.name
                    )));
                }
                fiber_degree += &t.coefficient * surface.intersect(&t.class, &surface.fiber_class())?;
            } else if t.coefficient >= rational::one() {
                return Err(Error::InvalidInput(format!(
                    "vertical coefficient {} on `{}` is not below 1",
                    t.coefficient, t.name
                )));
            }
        }
        if fiber_degree != rational::int(2) {
            return Err(Error::FiberDegree(format!("horizontal coefficients sum to {fiber_degree}, not 2")));
        }
        Ok(LogFibration { surface })
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn into_surface(self) -> SurfaceModel {
        self.surface
    }

    /// `K_{X/B} + D`.
    pub fn log_class(&self) -> DivisorClass {
        &self.surface.relative_canonical() + &self.surface.weighted_sum(|_| true)
    }

    /// `(w, d)` per component over `point`.
    pub fn fiber(&self, point: &str) -> Result<Vec<(u64, Rational)>> {
        Ok(self
            .surface
            .fiber_decomposition(point)?
            .into_iter()
            .map(|(t, w)| (w, t.coefficient.clone()))
            .collect())
    }
}

/// `δ_ℓ` at every special point, in declaration order.
pub fn discriminant(fib: &LogFibration) -> Result<Vec<(String, Rational)>> {
    fib.surface
        .points()
        .iter()
        .map(|q| Ok((q.clone(), delta_at(&fib.fiber(q)?)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRow {
    pub name: String,
    pub multiplicity: u64,
    pub coefficient: Rational,
    pub dbar: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRow {
    pub point: String,
    pub components: Vec<ComponentRow>,
    pub delta: Rational,
    /// A component with `1 − w ≤ d`, when one exists.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbfReport {
    pub fibers: Vec<FiberRow>,
    pub deg_l: Rational,
    pub deg_m: Rational,
    pub all_delta_below_one: bool,
    pub deg_m_nonnegative: bool,
}

impl CbfReport {
    pub fn discriminant(&self) -> Vec<(String, Rational)> {
        self.fibers.iter().map(|f| (f.point.clone(), f.delta.clone())).collect()
    }

    pub fn discriminant_degree(&self) -> Rational {
        self.fibers.iter().fold(rational::zero(), |acc, f| acc + &f.delta)
    }

    /// Every fiber with a witness has `δ ≥ 0`.
    pub fn witnessed_deltas_nonnegative(&self) -> bool {
        self.fibers.iter().all(|f| f.witness.is_none() || !f.delta.is_negative())
    }
}

pub fn cbf_report(fib: &LogFibration) -> Result<CbfReport> {
    let s = fib.surface();
    let log = fib.log_class();
    let fiber_degree = s.intersect(&log, &s.fiber_class())?;
    if !fiber_degree.is_zero() {
        return Err(Error::FiberDegree(format!("(K + D)·F = {fiber_degree}")));
    }
    let deg_l = s.pullback_degree(&log)?;
    let mut fibers = Vec::with_capacity(s.points().len());
    for q in s.points() {
        let comps = s.fiber_decomposition(q)?;
        let mut rows = Vec::with_capacity(comps.len());
        for (t, w) in &comps {
            rows.push(ComponentRow {
                name: t.name.clone(),
                multiplicity: *w,
                coefficient: t.coefficient.clone(),
                dbar: dbar(&t.coefficient, *w)?,
            });
        }
        let pairs: Vec<(u64, Rational)> = rows.iter().map(|r| (r.multiplicity, r.coefficient.clone())).collect();
        let delta = delta_at(&pairs)?;
        let witness = nonnegativity_witness(&pairs).map(|i| rows[i].name.clone());
        fibers.push(FiberRow { point: q.clone(), components: rows, delta, witness });
    }
    let total = fibers.iter().fold(rational::zero(), |acc, f| acc + &f.delta);
    let deg_m = &deg_l - total;
    Ok(CbfReport {
        all_delta_below_one: fibers.iter().all(|f| f.delta < rational::one()),
        deg_m_nonnegative: !deg_m.is_negative(),
        fibers,
        deg_l,
        deg_m,
    })
}

/// Blow-up whose exceptional coefficient keeps `K + D` crepant:
/// `d_E = Σ d·mult − 1` over the listed divisors.
pub fn blow_up_log(
    surface: &SurfaceModel,
    at: &str,
    through: &[(String, u64)],
    name: Option<&str>,
) -> Result<SurfaceModel> {
    let mut d_new = -rational::one();
    for (n, mult) in through {
        d_new += &surface.divisor(n)?.coefficient * rational::int(*mult as i64);
    }
    surface.blow_up(at, through, d_new, name)
}

/// Vertical coefficients over `point`, zero on `anchor`, making
/// `K_{X/B} + D_h + V` orthogonal to every component of that fiber.
pub fn vertical_solution(
    surface: &SurfaceModel,
    horizontal: &DivisorClass,
    point: &str,
    anchor: &str,
) -> Result<Vec<(String, Rational)>> {
    let comps: Vec<&TrackedDivisor> = surface.fiber_decomposition(point)?.into_iter().map(|(t, _)| t).collect();
    if !comps.iter().any(|t| t.name == anchor) {
        return Err(Error::UnknownDivisor(format!("{anchor} over {point}")));
    }
    let base = &surface.relative_canonical() + horizontal;
    let others: Vec<&TrackedDivisor> = comps.iter().copied().filter(|t| t.name != anchor).collect();
    let mut matrix = Vec::with_capacity(others.len());
    let mut rhs = Vec::with_capacity(others.len());
    for row in &others {
        let mut r = Vec::with_capacity(others.len());
        for col in &others {
            r.push(surface.intersect(&row.class, &col.class)?);
        }
        matrix.push(r);
        rhs.push(-surface.intersect(&base, &row.class)?);
    }
    let solved = linalg::solve(matrix, rhs)?;
    let mut out = Vec::with_capacity(comps.len());
    let mut it = solved.into_iter();
    for t in comps {
        let v = if t.name == anchor { rational::zero() } else { it.next().expect("one value per component") };
        out.push((t.name.clone(), v));
    }
    Ok(out)
}

/// Replaces every vertical coefficient so that `K_{X/B} + D` is numerically a
/// pullback and `δ_ℓ = 0` at every special point.
pub fn normalize_vertical(surface: &SurfaceModel) -> Result<SurfaceModel> {
    let horizontal = surface.weighted_sum(TrackedDivisor::is_horizontal);
    let fiber_degree = surface.intersect(&(&surface.relative_canonical() + &horizontal), &surface.fiber_class())?;
    if !fiber_degree.is_zero() {
        return Err(Error::FiberDegree(format!("(K + D_h)·F = {fiber_degree}")));
    }
    let mut next = surface.clone();
    for q in surface.points() {
        let comps = surface.fiber_decomposition(q)?;
        let anchor = comps[0].0.name.clone();
        let sol = vertical_solution(surface, &horizontal, q, &anchor)?;
        let mut shift: Option<Rational> = None;
        for ((_, v), (_, w)) in sol.iter().zip(&comps) {
            let b = dbar(v, *w)?;
            if shift.as_ref().is_none_or(|s| b > *s) {
                shift = Some(b);
            }
        }
        let shift = shift.expect("fiber has a component");
        for ((name, v), (_, w)) in sol.into_iter().zip(&comps) {
            next = next.with_coefficient(&name, v - &shift * rational::int(*w as i64))?;
        }
    }
    Ok(next)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SectionRef {
    pub component: String,
    pub section: String,
}

impl SectionRef {
    pub fn new(component: &str, section: &str) -> Self {
        SectionRef { component: component.to_string(), section: section.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyComponent {
    pub name: String,
    pub surface: SurfaceModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyModel {
    components: Vec<FamilyComponent>,
    gluings: Vec<(SectionRef, SectionRef)>,
    marks: BTreeMap<u32, SectionRef>,
    weights: WeightVector,
}

/// Fiber of the whole family over one base point, as a tree of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberTree {
    pub tree: StableTree,
    /// `(component, fiber component)` per vertex id; a component without this
    /// special point contributes its whole fiber under the name `*`.
    pub vertices: Vec<(String, String)>,
}

impl FamilyModel {
    pub fn new(
        components: Vec<FamilyComponent>,
        gluings: Vec<(SectionRef, SectionRef)>,
        marks: BTreeMap<u32, SectionRef>,
        weights: WeightVector,
    ) -> Result<Self> {
        let fam = FamilyModel { components, gluings, marks, weights };
        fam.check()?;
        Ok(fam)
    }

    /// One surface with the given sections as marks `1..=n` in order.
    pub fn single(surface: SurfaceModel, sections: &[&str], weights: WeightVector) -> Result<Self> {
        let marks = sections
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32 + 1, SectionRef::new("X", s)))
            .collect();
        FamilyModel::new(vec![FamilyComponent { name: String::from("X"), surface }], Vec::new(), marks, weights)
    }

    pub fn components(&self) -> &[FamilyComponent] {
        &self.components
    }

    pub fn gluings(&self) -> &[(SectionRef, SectionRef)] {
        &self.gluings
    }

    pub fn marks(&self) -> &BTreeMap<u32, SectionRef> {
        &self.marks
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    fn component_index(&self, name: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown component `{name}`")))
    }

    fn section(&self, r: &SectionRef) -> Result<(usize, &TrackedDivisor)> {
        let i = self.component_index(&r.component)?;
        let t = self.components[i].surface.divisor(&r.section)?;
        if !t.is_horizontal() {
            return Err(Error::InvalidInput(format!("`{}` on `{}` is not a section", r.section, r.component)));
        }
        Ok((i, t))
    }

    fn check(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidInput(String::from("family has no components")));
        }
        for (i, c) in self.components.iter().enumerate() {
            if self.components[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::InvalidInput(format!("component `{}` listed twice", c.name)));
            }
            if c.surface.genus() != self.components[0].surface.genus() {
                return Err(Error::InvalidInput(String::from("components lie over bases of different genus")));
            }
        }
        let n = self.weights.len() as u32;
        if self.marks.len() != n as usize || self.marks.keys().any(|&l| l == 0 || l > n) {
            return Err(Error::SizeMismatch { expected: n as usize, found: self.marks.len() });
        }
        let mut used: Vec<&SectionRef> = Vec::new();
        for r in self.marks.values().chain(self.gluings.iter().flat_map(|(a, b)| [a, b])) {
            self.section(r)?;
            if used.contains(&r) {
                return Err(Error::InvalidInput(format!("section `{}` on `{}` used twice", r.section, r.component)));
            }
            used.push(r);
        }
        for (a, b) in &self.gluings {
            if a.component == b.component {
                return Err(Error::InvalidTree(format!("component `{}` glued to itself", a.component)));
            }
        }
        self.generic_tree().ensure_valid()?;
        for q in self.special_points() {
            self.fiber_tree(&q)?.tree.ensure_valid()?;
        }
        Ok(())
    }

    /// Union of the components' special points, first-seen order.
    pub fn special_points(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.components {
            for p in c.surface.points() {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    /// Components as vertices, gluings as edges, marks as tails.
    pub fn generic_tree(&self) -> StableTree {
        let mut tails: Vec<(VertexId, Vec<u32>)> = (0..self.components.len()).map(|i| (i as VertexId, Vec::new())).collect();
        for (&l, r) in &self.marks {
            if let Ok(i) = self.component_index(&r.component) {
                tails[i].1.push(l);
            }
        }
        let edges: Vec<(VertexId, VertexId)> = self
            .gluings
            .iter()
            .filter_map(|(a, b)| {
                Some((self.component_index(&a.component).ok()? as VertexId, self.component_index(&b.component).ok()? as VertexId))
            })
            .collect();
        let parts: Vec<(VertexId, &[u32])> = tails.iter().map(|(v, t)| (*v, t.as_slice())).collect();
        StableTree::from_parts(self.weights.len() as u32, &parts, &edges)
    }

    pub fn fiber_tree(&self, point: &str) -> Result<FiberTree> {
        let mut vertices: Vec<(String, String)> = Vec::new();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for c in &self.components {
            let s = &c.surface;
            if !s.points().iter().any(|p| p == point) {
                vertices.push((c.name.clone(), String::from("*")));
                continue;
            }
            let comps = s.fiber_decomposition(point)?;
            let start = vertices.len();
            for (i, (t, w)) in comps.iter().enumerate() {
                if *w != 1 {
                    return Err(Error::InvalidTree(format!("`{}` has multiplicity {w} in a family fiber", t.name)));
                }
                for (j, (u, _)) in comps.iter().enumerate().take(i) {
                    let x = s.intersect(&t.class, &u.class)?;
                    if x == rational::one() {
                        edges.push(((start + j) as VertexId, (start + i) as VertexId));
                    } else if !x.is_zero() {
                        return Err(Error::InvalidTree(format!("`{}` and `{}` meet {x} times", t.name, u.name)));
                    }
                }
                vertices.push((c.name.clone(), t.name.clone()));
            }
        }
        let land = |r: &SectionRef| -> Result<VertexId> {
            let (ci, t) = self.section(r)?;
            let s = &self.components[ci].surface;
            let mut hit = None;
            for (v, (cn, vn)) in vertices.iter().enumerate() {
                if *cn != r.component {
                    continue;
                }
                if vn == "*" {
                    return Ok(v as VertexId);
                }
                let x = s.intersect(&t.class, &s.divisor(vn)?.class)?;
                if x == rational::one() {
                    if hit.is_some() {
                        return Err(Error::InvalidTree(format!("`{}` meets two components over {point}", r.section)));
                    }
                    hit = Some(v as VertexId);
                } else if !x.is_zero() {
                    return Err(Error::InvalidTree(format!("`{}` meets `{vn}` {x} times", r.section)));
                }
            }
            hit.ok_or_else(|| Error::InvalidTree(format!("`{}` misses the fiber over {point}", r.section)))
        };
        let mut tails: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for (&l, r) in &self.marks {
            tails[land(r)? as usize].push(l);
        }
        for (a, b) in &self.gluings {
            edges.push((land(a)?, land(b)?));
        }
        let parts: Vec<(VertexId, &[u32])> = tails.iter().enumerate().map(|(v, t)| (v as VertexId, t.as_slice())).collect();
        Ok(FiberTree { tree: StableTree::from_parts(self.weights.len() as u32, &parts, &edges), vertices })
    }

    /// Labels reachable from `component` without crossing the gluing `via`.
    fn labels_behind(&self, component: usize, via: usize) -> LabelSet {
        let mut seen = vec![false; self.components.len()];
        seen[component] = true;
        let mut stack = vec![component];
        let mut labels = LabelSet::EMPTY;
        while let Some(c) = stack.pop() {
            for (&l, r) in &self.marks {
                if self.component_index(&r.component).ok() == Some(c) {
                    let _ = labels.insert(l);
                }
            }
            for (g, (a, b)) in self.gluings.iter().enumerate() {
                if g == via {
                    continue;
                }
                let (ia, ib) = match (self.component_index(&a.component), self.component_index(&b.component)) {
                    (Ok(x), Ok(y)) => (x, y),
                    _ => continue,
                };
                for (from, to) in [(ia, ib), (ib, ia)] {
                    if from == c && !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
        }
        labels
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushedSection {
    pub name: String,
    /// Marks that land on this section after contraction.
    pub labels: LabelSet,
    pub coefficient: Rational,
    /// Class on the unblown ruled surface.
    pub class: DivisorClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedModel {
    pub component: String,
    pub genus: u32,
    pub e: i64,
    pub pushed: Vec<PushedSection>,
    /// Fiber component kept over each special point of the chosen surface.
    pub anchors: Vec<(String, String)>,
    /// `δ_ℓ` of the normalized vertical coefficients at each special point.
    pub discriminant: Vec<(String, Rational)>,
    /// Degree read on the unblown surface by dropping exceptional classes.
    pub truncated_degree: Rational,
}

impl ContractedModel {
    pub fn discriminant_degree(&self) -> Rational {
        self.discriminant.iter().fold(rational::zero(), |acc, (_, d)| acc + d)
    }
}

/// Collapses the family onto its distinguished component and returns the
/// degree of `K + D̄` on the resulting ruled surface.
pub fn contract_and_degree(fam: &FamilyModel) -> Result<(ContractedModel, Rational)> {
    let generic = fam.generic_tree();
    let target = distinguished_component(&generic, &fam.weights)? as usize;
    let comp = &fam.components[target];
    let s = &comp.surface;

    let mut pushed: Vec<(String, LabelSet, Rational)> = Vec::new();
    for (&l, r) in &fam.marks {
        if r.component == comp.name {
            pushed.push((r.section.clone(), LabelSet::from_labels([l])?, fam.weights.get(l)?.clone()));
        }
    }
    for (g, (a, b)) in fam.gluings.iter().enumerate() {
        let (mine, other) = if a.component == comp.name {
            (a, b)
        } else if b.component == comp.name {
            (b, a)
        } else {
            continue;
        };
        let labels = fam.labels_behind(fam.component_index(&other.component)?, g);
        let value = fam.weights.alpha(labels)?;
        if value > rational::one() {
            return Err(Error::PushedCoefficient { section: mine.section.clone(), value: value.to_string() });
        }
        pushed.push((mine.section.clone(), labels, value));
    }

    let mut horizontal = s.zero_class();
    for (name, _, d) in &pushed {
        horizontal = &horizontal + &s.divisor(name)?.class.scale(d);
    }
    let pushed_weights = WeightVector::new(pushed.iter().map(|p| p.2.clone()).collect())?;

    let mut total = &s.relative_canonical() + &horizontal;
    let mut anchors = Vec::new();
    let mut discriminant = Vec::new();
    for q in s.points() {
        let comps = s.fiber_decomposition(q)?;
        let mut edges = Vec::new();
        for i in 0..comps.len() {
            for j in 0..i {
                if s.intersect(&comps[i].0.class, &comps[j].0.class)? == rational::one() {
                    edges.push((j as VertexId, i as VertexId));
                }
            }
        }
        let mut tails: Vec<Vec<u32>> = vec![Vec::new(); comps.len()];
        for (k, (name, _, _)) in pushed.iter().enumerate() {
            let class = &s.divisor(name)?.class;
            let v = comps
                .iter()
                .position(|(t, _)| s.intersect(class, &t.class).is_ok_and(|x| x.is_one()))
                .ok_or_else(|| Error::InvalidTree(format!("`{name}` misses the fiber over {q}")))?;
            tails[v].push(k as u32 + 1);
        }
        let parts: Vec<(VertexId, &[u32])> = tails.iter().enumerate().map(|(v, t)| (v as VertexId, t.as_slice())).collect();
        let tree = StableTree::from_parts(pushed.len() as u32, &parts, &edges);
        let keep = distinguished_component(&tree, &pushed_weights)? as usize;
        let anchor = comps[keep].0.name.clone();
        let sol = vertical_solution(s, &horizontal, q, &anchor)?;
        let mut delta: Option<Rational> = None;
        for (name, v) in &sol {
            total = &total + &s.divisor(name)?.class.scale(v);
            if delta.as_ref().is_none_or(|d| v > d) {
                delta = Some(v.clone());
            }
        }
        discriminant.push((q.clone(), delta.expect("fiber has a component")));
        anchors.push((q.clone(), anchor));
    }
    let degree = s.pullback_degree(&total)?;

    let mut unblown = SurfaceModel::new_ruled::<&str>(s.genus(), s.e(), &[])?;
    let mut pushed_out = Vec::with_capacity(pushed.len());
    for (name, labels, d) in pushed {
        let class = s.divisor(&name)?.class.truncated();
        unblown = unblown.add_section(&name, class.fiber_coeff().clone(), d.clone())?;
        pushed_out.push(PushedSection { name, labels, coefficient: d, class });
    }
    let truncated = &unblown.relative_canonical() + &unblown.weighted_sum(|t| matches!(t.kind, DivisorKind::Horizontal));
    let truncated_degree = unblown.pullback_degree(&truncated)?;

    Ok((
        ContractedModel {
            component: comp.name.clone(),
            genus: s.genus(),
            e: s.e(),
            pushed: pushed_out,
            anchors,
            discriminant,
            truncated_degree,
        },
        degree,
    ))
}
