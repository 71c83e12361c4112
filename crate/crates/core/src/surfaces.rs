//! Picard lattices of ruled surfaces over a curve and their iterated blow-ups.
//!
//! Classes are written in the basis `(C₀, F, E₁, …, E_k)`: `C₀` a normalized
//! section with `C₀² = −e`, `F` the fiber, `E_i` the total transforms of the
//! exceptional curves. The form is `C₀·F = 1`, `F² = 0`, `E_i² = −1`, all other
//! products zero, and the canonical class is
//! `K = −2C₀ + (2g − 2 − e)F + Σ E_i`.
//!
//! Curves are tracked by name. Incidence at blow-up centers is declared by the
//! caller, not derived; the model only refuses declarations that consume more
//! intersection between two tracked curves than they have left.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::linalg;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    coeffs: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::RankMismatch { left: coeffs.len(), right: 2 });
        }
        Ok(DivisorClass { coeffs })
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coeffs: vec![rational::zero(); rank] }
    }

    fn basis(rank: usize, i: usize) -> Self {
        let mut c = DivisorClass::zero(rank);
        c.coeffs[i] = rational::one();
        c
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn c0_coeff(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn fiber_coeff(&self) -> &Rational {
        &self.coeffs[1]
    }

    /// Coefficient of `E_i` (1-based).
    pub fn exceptional_coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i + 1).cloned().unwrap_or_else(rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> DivisorClass {
        DivisorClass { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Pads with zero exceptional coordinates up to `rank`.
    pub fn padded(&self, rank: usize) -> DivisorClass {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(rank.max(coeffs.len()), rational::zero());
        DivisorClass { coeffs }
    }

    /// Pushforward to the unblown ruled surface: drop exceptional coordinates.
    pub fn truncated(&self) -> DivisorClass {
        DivisorClass { coeffs: self.coeffs[..2].to_vec() }
    }

    fn checked(&self, other: &DivisorClass) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked(other)?;
        Ok(self + other)
    }
}

impl<'a> Add<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    /// Panics on rank mismatch; see [`DivisorClass::try_add`].
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "class rank mismatch");
        DivisorClass { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "class rank mismatch");
        DivisorClass { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorKind {
    /// A section: `class·F = 1`.
    Horizontal,
    /// A fiber component over `point` with multiplicity `w` in the fiber.
    Vertical { point: String, multiplicity: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedDivisor {
    pub name: String,
    pub class: DivisorClass,
    pub kind: DivisorKind,
    /// Coefficient in the log divisor `D`.
    pub coefficient: Rational,
}

impl TrackedDivisor {
    pub fn is_horizontal(&self) -> bool {
        self.kind == DivisorKind::Horizontal
    }

    pub fn vertical_over(&self, point: &str) -> Option<u64> {
        match &self.kind {
            DivisorKind::Vertical { point: p, multiplicity } if p == point => Some(*multiplicity),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub exceptional: String,
    pub at: String,
    pub through: Vec<(String, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    genus: u32,
    e: i64,
    points: Vec<String>,
    blowups: Vec<BlowUp>,
    tracked: Vec<TrackedDivisor>,
    canonical: DivisorClass,
}

/// Name of the original fiber component over a special point.
pub fn fiber_name(point: &str) -> String {
    format!("F@{point}")
}

impl SurfaceModel {
    /// Ruled surface over a genus-`g` curve with invariant `e`; each special
    /// point starts with the single reduced fiber component `F@<label>`.
    pub fn new_ruled<S: AsRef<str>>(genus: u32, e: i64, points: &[S]) -> Result<Self> {
        let mut model = SurfaceModel {
            genus,
            e,
            points: Vec::new(),
            blowups: Vec::new(),
            tracked: Vec::new(),
            canonical: DivisorClass::new(vec![rational::int(-2), rational::int(2 * genus as i64 - 2 - e)])?,
        };
        for p in points {
            let p = p.as_ref();
            if model.points.iter().any(|q| q == p) {
                return Err(Error::InvalidInput(format!("special point `{p}` listed twice")));
            }
            model.points.push(p.to_string());
            model.push_tracked(TrackedDivisor {
                name: fiber_name(p),
                class: model.fiber_class(),
                kind: DivisorKind::Vertical { point: p.to_string(), multiplicity: 1 },
                coefficient: rational::zero(),
            })?;
        }
        Ok(model)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn blowups(&self) -> &[BlowUp] {
        &self.blowups
    }

    pub fn tracked(&self) -> &[TrackedDivisor] {
        &self.tracked
    }

    pub fn rank(&self) -> usize {
        2 + self.blowups.len()
    }

    pub fn section_class(&self) -> DivisorClass {
        DivisorClass::basis(self.rank(), 0)
    }

    pub fn fiber_class(&self) -> DivisorClass {
        DivisorClass::basis(self.rank(), 1)
    }

    /// `E_i`, 1-based.
    pub fn exceptional_class(&self, i: usize) -> Result<DivisorClass> {
        if i == 0 || i > self.blowups.len() {
            return Err(Error::InvalidInput(format!("no exceptional class E{i}")));
        }
        Ok(DivisorClass::basis(self.rank(), i + 1))
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass::zero(self.rank())
    }

    /// `C₀ + a·F`.
    pub fn section_plus_fibers(&self, a: &Rational) -> DivisorClass {
        &self.section_class() + &self.fiber_class().scale(a)
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    /// `K − (2g − 2)F`.
    pub fn relative_canonical(&self) -> DivisorClass {
        let shift = rational::int(2 * self.genus as i64 - 2);
        &self.canonical - &self.fiber_class().scale(&shift)
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        for c in [a, b] {
            if c.rank() != self.rank() {
                return Err(Error::RankMismatch { left: c.rank(), right: self.rank() });
            }
        }
        let (a0, a1) = (&a.coeffs[0], &a.coeffs[1]);
        let (b0, b1) = (&b.coeffs[0], &b.coeffs[1]);
        let mut s = -(a0 * b0) * rational::int(self.e) + a0 * b1 + a1 * b0;
        for (x, y) in a.coeffs[2..].iter().zip(&b.coeffs[2..]) {
            s -= x * y;
        }
        Ok(s)
    }

    pub fn gram_matrix(&self) -> Vec<Vec<Rational>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        self.intersect(&DivisorClass::basis(r, i), &DivisorClass::basis(r, j))
                            .expect("basis classes have the model rank")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn gram_determinant(&self) -> Rational {
        linalg::determinant(self.gram_matrix())
    }

    pub fn divisor(&self, name: &str) -> Result<&TrackedDivisor> {
        self.tracked
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::UnknownDivisor(name.to_string()))
    }

    pub fn sections(&self) -> impl Iterator<Item = &TrackedDivisor> {
        self.tracked.iter().filter(|t| t.is_horizontal())
    }

    pub fn verticals(&self) -> impl Iterator<Item = &TrackedDivisor> {
        self.tracked.iter().filter(|t| !t.is_horizontal())
    }

    fn require_point(&self, point: &str) -> Result<()> {
        if self.points.iter().any(|p| p == point) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(point.to_string()))
        }
    }

    fn push_tracked(&mut self, t: TrackedDivisor) -> Result<()> {
        if self.tracked.iter().any(|x| x.name == t.name) {
            return Err(Error::InvalidInput(format!("divisor `{}` already exists", t.name)));
        }
        let dot_f = self.intersect(&t.class, &self.fiber_class())?;
        let ok = match t.kind {
            DivisorKind::Horizontal => dot_f == rational::one(),
            DivisorKind::Vertical { .. } => dot_f.is_zero(),
        };
        if !ok {
            return Err(Error::InvalidInput(format!("`{}` has fiber degree {dot_f}", t.name)));
        }
        self.tracked.push(t);
        Ok(())
    }

    /// Tracks the section `C₀ + a·F` with log coefficient `d`.
    pub fn add_section(&self, name: &str, a: Rational, d: Rational) -> Result<SurfaceModel> {
        let mut next = self.clone();
        let class = next.section_plus_fibers(&a);
        next.push_tracked(TrackedDivisor {
            name: name.to_string(),
            class,
            kind: DivisorKind::Horizontal,
            coefficient: d,
        })?;
        Ok(next)
    }

    /// Sets the log coefficient of a tracked divisor.
    pub fn with_coefficient(&self, name: &str, d: Rational) -> Result<SurfaceModel> {
        let mut next = self.clone();
        let t = next
            .tracked
            .iter_mut()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::UnknownDivisor(name.to_string()))?;
        t.coefficient = d;
        Ok(next)
    }

    /// Blows up a point over `at` lying on the listed curves with the given
    /// multiplicities. The exceptional curve joins the fiber with multiplicity
    /// `Σ w·mult` over the listed fiber components and log coefficient `d_new`.
    pub fn blow_up(
        &self,
        at: &str,
        through: &[(String, u64)],
        d_new: Rational,
        name: Option<&str>,
    ) -> Result<SurfaceModel> {
        self.require_point(at)?;
        let mut listed: Vec<(&TrackedDivisor, u64)> = Vec::with_capacity(through.len());
        for (n, mult) in through {
            if *mult == 0 {
                return Err(Error::InvalidInput(format!("zero multiplicity for `{n}`")));
            }
            if listed.iter().any(|(t, _)| &t.name == n) {
                return Err(Error::InvalidInput(format!("`{n}` listed twice")));
            }
            listed.push((self.divisor(n)?, *mult));
        }
        let mut vertical_count = 0;
        let mut w_new = 0u64;
        for (t, mult) in &listed {
            if let DivisorKind::Vertical { point, multiplicity } = &t.kind {
                if point != at {
                    return Err(Error::InvalidInput(format!("`{}` lies over `{point}`, not `{at}`", t.name)));
                }
                vertical_count += 1;
                w_new += multiplicity * mult;
            }
        }
        if vertical_count > 2 {
            return Err(Error::InvalidInput(String::from("a center lies on at most two fiber components")));
        }
        if vertical_count == 0 {
            return Err(Error::FiberIdentity(format!("center over `{at}` lies on no fiber component")));
        }
        for i in 0..listed.len() {
            for j in i + 1..listed.len() {
                let (a, ma) = listed[i];
                let (b, mb) = listed[j];
                let left = self.intersect(&a.class, &b.class)?;
                if left < rational::int((ma * mb) as i64) {
                    return Err(Error::IntersectionBudget { first: a.name.clone(), second: b.name.clone() });
                }
            }
        }

        let k = self.blowups.len() + 1;
        let exc_name = name.map_or_else(|| format!("E{k}"), str::to_string);
        let mut next = self.clone();
        let rank = next.rank() + 1;
        for t in next.tracked.iter_mut() {
            t.class = t.class.padded(rank);
        }
        next.canonical = next.canonical.padded(rank);
        next.blowups.push(BlowUp { exceptional: exc_name.clone(), at: at.to_string(), through: through.to_vec() });
        let e_class = DivisorClass::basis(rank, rank - 1);
        next.canonical = &next.canonical + &e_class;
        for (n, mult) in through {
            let t = next.tracked.iter_mut().find(|t| &t.name == n).expect("checked above");
            t.class = &t.class - &e_class.scale(&rational::int(*mult as i64));
        }
        next.push_tracked(TrackedDivisor {
            name: exc_name,
            class: e_class,
            kind: DivisorKind::Vertical { point: at.to_string(), multiplicity: w_new },
            coefficient: d_new,
        })?;
        if !next.fiber_identity_holds(at)? {
            return Err(Error::FiberIdentity(format!("Σ w·class ≠ F over `{at}`")));
        }
        Ok(next)
    }

    /// Components over `point` with their multiplicities, in creation order.
    pub fn fiber_decomposition(&self, point: &str) -> Result<Vec<(&TrackedDivisor, u64)>> {
        self.require_point(point)?;
        Ok(self.tracked.iter().filter_map(|t| t.vertical_over(point).map(|w| (t, w))).collect())
    }

    pub fn fiber_identity_holds(&self, point: &str) -> Result<bool> {
        let mut total = self.zero_class();
        for (t, w) in self.fiber_decomposition(point)? {
            total = &total + &t.class.scale(&rational::int(w as i64));
        }
        Ok(total == self.fiber_class())
    }

    /// `c·F = 0` and `c` is orthogonal to every tracked fiber component.
    pub fn is_numeric_pullback(&self, c: &DivisorClass) -> Result<bool> {
        if !self.intersect(c, &self.fiber_class())?.is_zero() {
            return Ok(false);
        }
        for t in self.verticals() {
            if !self.intersect(c, &t.class)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Degree on the base of a class that is numerically a pullback, read off
    /// as its intersection with a section. Every tracked section must agree.
    pub fn pullback_degree(&self, c: &DivisorClass) -> Result<Rational> {
        if !self.is_numeric_pullback(c)? {
            return Err(Error::NotPullback(String::from("class meets a fiber component")));
        }
        let mut degree: Option<Rational> = None;
        for s in self.sections() {
            let v = self.intersect(c, &s.class)?;
            match &degree {
                None => degree = Some(v),
                Some(prev) if *prev != v => {
                    return Err(Error::NotPullback(format!(
                        "degree {prev} against one section but {v} against `{}`",
                        s.name
                    )))
                }
                _ => {}
            }
        }
        degree.ok_or_else(|| Error::InvalidInput(String::from("no tracked section to measure degree")))
    }

    /// `Σ d·class` over tracked divisors selected by `filter`.
    pub fn weighted_sum<F: Fn(&TrackedDivisor) -> bool>(&self, filter: F) -> DivisorClass {
        let mut total = self.zero_class();
        for t in self.tracked.iter().filter(|t| filter(t)) {
            total = &total + &t.class.scale(&t.coefficient);
        }
        total
    }

    /// `K·σ + σ² − (2g − 2)`; zero for every smooth section (adjunction).
    pub fn adjunction_defect(&self, c: &DivisorClass) -> Result<Rational> {
        let self_int = self.intersect(c, c)?;
        let k = self.intersect(&self.canonical, c)?;
        Ok(self_int + k - rational::int(2 * self.genus as i64 - 2))
    }
}
