//! The canonical pluri-differential `ω_{D,m}` on a marked projective line.
//!
//! For weights `d` and a multiplier `m` with every `m·d_j` integral, the pairing
//! set `P(D,m)` consists of all sequences `(j_1, j'_1, …, j_m, j'_m)` with
//! `j_i ≠ j'_i` in which label `j` occurs exactly `m·d_j` times. Each pair gives
//! the residue-normalized form
//!
//! ```text
//! ω_{j,j'} = (p_j − p_j') / ((x − p_j)(x − p_j')) dx      res_{p_j} = +1, res_{p_j'} = −1
//! ```
//!
//! and `ω_{D,m}` is the product of all of them, an `m·p`-fold differential with
//! `p = #P(D,m)`. Marked points live in an affine coordinate `x`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::labels::LabelSet;
use crate::poly::{Poly, RationalFunction};
use crate::rational::{self, Rational};
use crate::weights::WeightVector;
use crate::{Error, Result};

/// Refuse to materialize pairing sets larger than this.
pub const MAX_PAIRINGS: usize = 2_000_000;

/// Distinct marked points `p_1..p_n` on the affine line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLine {
    points: Vec<Rational>,
}

impl MarkedLine {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!("{} marked points, need at least 2", points.len())));
        }
        for i in 0..points.len() {
            if points[..i].contains(&points[i]) {
                return Err(Error::InvalidInput(format!("marked point {} repeats {}", i + 1, points[i])));
            }
        }
        Ok(MarkedLine { points })
    }

    /// `0, 1, …, n−1`.
    pub fn standard(n: usize) -> Self {
        MarkedLine { points: (0..n as i64).map(rational::int).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn point(&self, label: u32) -> Result<&Rational> {
        self.points
            .get((label as usize).wrapping_sub(1))
            .ok_or(Error::LabelOutOfRange { label, n: self.points.len() as u32 })
    }
}

/// One element `J` of the pairing set, as 1-based ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pairing {
    pub pairs: Vec<(u32, u32)>,
}

impl Pairing {
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    /// Occurrence count of each label `1..=k`.
    pub fn occurrences(&self, k: usize) -> Vec<u64> {
        let mut out = vec![0u64; k];
        for &(a, b) in &self.pairs {
            out[a as usize - 1] += 1;
            out[b as usize - 1] += 1;
        }
        out
    }

    pub fn is_admissible(&self, d: &WeightVector, m: u64) -> bool {
        let k = d.len();
        if self.pairs.len() as u64 != m {
            return false;
        }
        if self.pairs.iter().any(|&(a, b)| a == b || a == 0 || b == 0 || a as usize > k || b as usize > k) {
            return false;
        }
        let occ = self.occurrences(k);
        d.entries()
            .iter()
            .zip(occ)
            .all(|(dj, c)| dj * rational::int(m as i64) == rational::int(c as i64))
    }
}

/// `m·d_j` for every label, or the first label where it is not an integer.
pub fn multiplicities(d: &WeightVector, m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::InvalidInput(String::from("m must be positive")));
    }
    let mq = rational::int(m as i64);
    d.entries()
        .iter()
        .enumerate()
        .map(|(i, dj)| {
            let v = dj * &mq;
            if !v.is_integer() {
                return Err(Error::NonIntegralMultiple { label: i as u32 + 1 });
            }
            rational::to_i64(&v).map(|x| x as u64).ok_or(Error::NonIntegralMultiple { label: i as u32 + 1 })
        })
        .collect()
}

/// The full pairing set `P(D,m)` in lexicographic order; `p` is its length.
pub fn enumerate_pairings(d: &WeightVector, m: u64) -> Result<Vec<Pairing>> {
    let mut remaining = multiplicities(d, m)?;
    let mut out = Vec::new();
    let mut seq: Vec<u32> = Vec::with_capacity(2 * m as usize);
    pairing_dfs(&mut remaining, m as usize, &mut seq, &mut out)?;
    Ok(out)
}

fn pairing_dfs(remaining: &mut [u64], m: usize, seq: &mut Vec<u32>, out: &mut Vec<Pairing>) -> Result<()> {
    let pos = seq.len();
    if pos == 2 * m {
        if out.len() >= MAX_PAIRINGS {
            return Err(Error::InvalidInput(format!("pairing set exceeds {MAX_PAIRINGS} elements")));
        }
        let pairs = seq.chunks(2).map(|c| (c[0], c[1])).collect();
        out.push(Pairing { pairs });
        return Ok(());
    }
    for j in 0..remaining.len() {
        if remaining[j] == 0 {
            continue;
        }
        if pos % 2 == 1 && seq[pos - 1] == j as u32 + 1 {
            continue;
        }
        remaining[j] -= 1;
        seq.push(j as u32 + 1);
        // A label occurs at most once per pair, so after completing the
        // current pair no label may need more slots than pairs remain.
        let pairs_left = m - (pos + 2) / 2;
        let feasible = if pos % 2 == 1 {
            remaining.iter().all(|&r| r as usize <= pairs_left)
        } else {
            // mid-pair: the label just placed cannot fill the partner slot
            remaining
                .iter()
                .enumerate()
                .all(|(i, &r)| (r as usize) <= pairs_left + usize::from(i != j))
        };
        if feasible {
            pairing_dfs(remaining, m, seq, out)?;
        }
        seq.pop();
        remaining[j] += 1;
    }
    Ok(())
}

/// `g(x)·dx^weight`.
#[derive(Clone, Debug)]
pub struct Differential {
    pub coefficient: RationalFunction,
    pub weight: u64,
}

impl Differential {
    pub fn mul(&self, other: &Differential) -> Differential {
        Differential {
            coefficient: self.coefficient.mul(&other.coefficient),
            weight: self.weight + other.weight,
        }
    }

    pub fn neg(&self) -> Differential {
        Differential { coefficient: self.coefficient.scale(&-rational::one()), weight: self.weight }
    }

    /// Order of the differential at infinity (`ord(g) − 2·weight`).
    pub fn order_at_infinity(&self) -> Option<i64> {
        Some(self.coefficient.order_at_infinity()? - 2 * self.weight as i64)
    }
}

impl PartialEq for Differential {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.coefficient == other.coefficient
    }
}

/// `ω_{j,j'}`: simple poles at `p_j`, `p_j'` with residues `+1`, `−1`.
pub fn pair_form(line: &MarkedLine, j: u32, j2: u32) -> Result<Differential> {
    if j == j2 {
        return Err(Error::InvalidInput(format!("pair form needs distinct labels, got ({j},{j2})")));
    }
    let a = line.point(j)?;
    let b = line.point(j2)?;
    let num = Poly::constant(a - b);
    let den = &Poly::linear_root(a) * &Poly::linear_root(b);
    Ok(Differential { coefficient: RationalFunction::new(num, den), weight: 1 })
}

/// `ω_J = ∏ ω_{j_i, j'_i}`.
pub fn product_form(line: &MarkedLine, d: &WeightVector, m: u64, pairing: &Pairing) -> Result<Differential> {
    if line.len() != d.len() {
        return Err(Error::SizeMismatch { expected: d.len(), found: line.len() });
    }
    if !pairing.is_admissible(d, m) {
        return Err(Error::InvalidInput(format!("pairing {:?} is not admissible for m = {m}", pairing.pairs)));
    }
    let mut acc = Differential { coefficient: RationalFunction::constant(rational::one()), weight: 0 };
    for &(a, b) in &pairing.pairs {
        acc = acc.mul(&pair_form(line, a, b)?);
    }
    Ok(acc)
}

/// `ω_{D,m}` as `numerator / denominator · dx^{form_weight}`.
#[derive(Clone, Debug)]
pub struct CanonicalSection {
    pub numerator: Poly,
    pub denominator: Poly,
    pub form_weight: u64,
    pub line: MarkedLine,
    pub weights: WeightVector,
    pub m: u64,
    pub p: u64,
}

/// Divisor of `ω_{D,m}` viewed as a section of `mp(K + D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionDivisor {
    /// Order at each marked point: `mp·d_j − pole order`.
    pub at_marked: Vec<i64>,
    pub at_infinity: i64,
    /// Degree of zeros of the numerator away from the marked points.
    pub elsewhere: i64,
}

impl SectionDivisor {
    pub fn degree(&self) -> i64 {
        self.at_marked.iter().sum::<i64>() + self.at_infinity + self.elsewhere
    }

    pub fn is_effective(&self) -> bool {
        self.at_marked.iter().all(|&v| v >= 0) && self.at_infinity >= 0 && self.elsewhere >= 0
    }

    pub fn is_empty(&self) -> bool {
        self.at_marked.iter().all(|&v| v == 0) && self.at_infinity == 0 && self.elsewhere == 0
    }
}

/// Builds `ω_{D,m} = ∏_{J ∈ P(D,m)} ω_J`.
///
/// The product is accumulated as a constant times `∏ (x − p_j)^{e_j}`, which is
/// the same exact product regrouped; the dense denominator is expanded once.
pub fn canonical_section(line: &MarkedLine, d: &WeightVector, m: u64) -> Result<CanonicalSection> {
    if line.len() != d.len() {
        return Err(Error::SizeMismatch { expected: d.len(), found: line.len() });
    }
    let pairings = enumerate_pairings(d, m)?;
    let mut constant = rational::one();
    let mut exponents = vec![0u64; line.len()];
    for pairing in &pairings {
        for &(a, b) in &pairing.pairs {
            constant *= line.point(a)? - line.point(b)?;
            exponents[a as usize - 1] += 1;
            exponents[b as usize - 1] += 1;
        }
    }
    let mut denominator = Poly::one();
    for (pt, &e) in line.points().iter().zip(&exponents) {
        denominator = &denominator * &Poly::root_power(pt, e);
    }
    let p = pairings.len() as u64;
    Ok(CanonicalSection {
        numerator: Poly::constant(constant),
        denominator,
        form_weight: m * p,
        line: line.clone(),
        weights: d.clone(),
        m,
        p,
    })
}

impl CanonicalSection {
    pub fn as_differential(&self) -> Differential {
        Differential {
            coefficient: RationalFunction::new(self.numerator.clone(), self.denominator.clone()),
            weight: self.form_weight,
        }
    }

    /// Pole order of the coefficient function at marked point `label`.
    pub fn pole_order(&self, label: u32) -> Result<i64> {
        let pt = self.line.point(label)?;
        Ok(self.as_differential().coefficient.pole_order(pt))
    }

    pub fn divisor(&self) -> SectionDivisor {
        let f = self.as_differential();
        let mp = rational::int(self.form_weight as i64);
        let mut at_marked = Vec::with_capacity(self.line.len());
        let mut numerator_marked = 0i64;
        for (pt, dj) in self.line.points().iter().zip(self.weights.entries()) {
            let expected = rational::to_i64(&(dj * &mp)).expect("integral by construction");
            at_marked.push(expected - f.coefficient.pole_order(pt));
            numerator_marked += self.numerator.root_multiplicity(pt) as i64;
        }
        let numerator_degree = self.numerator.degree().map_or(0, |d| d as i64);
        let at_infinity = f.order_at_infinity().unwrap_or(i64::MAX);
        SectionDivisor { at_marked, at_infinity, elsewhere: numerator_degree - numerator_marked }
    }

    /// Coefficient function of `φ^*ω` for the Möbius map `φ`, as a function of the
    /// source coordinate.
    pub fn pullback(&self, phi: &Mobius) -> RationalFunction {
        phi.pullback(&self.as_differential())
    }
}

/// `x ↦ (a x + b)/(c x + d)` with `ad − bc ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::InvalidInput(String::from("degenerate Möbius map")));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn determinant(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// `None` when `x` goes to infinity.
    pub fn apply(&self, x: &Rational) -> Option<Rational> {
        let den = &self.c * x + &self.d;
        if den.is_zero() {
            return None;
        }
        Some((&self.a * x + &self.b) / den)
    }

    /// Image line; fails if a point goes to infinity.
    pub fn map_line(&self, line: &MarkedLine) -> Result<MarkedLine> {
        let pts = line
            .points()
            .iter()
            .map(|x| self.apply(x).ok_or_else(|| Error::InvalidInput(format!("{x} maps to infinity"))))
            .collect::<Result<Vec<_>>>()?;
        MarkedLine::new(pts)
    }

    /// Coefficient of `φ^*(g(y) dy^w) = g(φ(x)) φ'(x)^w dx^w`.
    pub fn pullback(&self, form: &Differential) -> RationalFunction {
        let f = &form.coefficient;
        let deg_num = f.numerator.degree().unwrap_or(0);
        let deg_den = f.denominator.degree().unwrap_or(0);
        let num = f.numerator.homogenized_compose(&self.a, &self.b, &self.c, &self.d, deg_num);
        let den = f.denominator.homogenized_compose(&self.a, &self.b, &self.c, &self.d, deg_den);
        // g(φ) = num/den · (cx+d)^{deg_den − deg_num}, φ' = det/(cx+d)^2
        let w = form.weight as i64;
        let shift = deg_den as i64 - deg_num as i64 - 2 * w;
        let det_pow = pow_rat(&self.determinant(), form.weight);
        let lin = Poly::linear(self.c.clone(), self.d.clone());
        let (num, den) = if shift >= 0 {
            (&num * &lin.pow(shift as u64), den)
        } else {
            (num, &den * &lin.pow((-shift) as u64))
        };
        RationalFunction::new(num.scale(&det_pow), den)
    }
}

fn pow_rat(x: &Rational, e: u64) -> Rational {
    let mut acc = rational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Labels in `colliding` move as `p_a(t) = base + direction_a · t^tangency`;
/// the others stay at their positions on the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub colliding: LabelSet,
    pub base: Rational,
    pub directions: BTreeMap<u32, Rational>,
    pub tangency: u32,
}

impl Collision {
    /// Transversal approach at `base` with directions `1, 2, 3, …`.
    pub fn transversal(colliding: LabelSet, base: Rational) -> Self {
        let directions = colliding.iter().zip(1i64..).map(|(l, c)| (l, rational::int(c))).collect();
        Collision { colliding, base, directions, tangency: 1 }
    }

    /// Position of label `l` as a polynomial in `t`.
    fn position(&self, line: &MarkedLine, l: u32) -> Result<Poly> {
        if self.colliding.contains(l) {
            let c = self.directions[&l].clone();
            Ok(&Poly::constant(self.base.clone()) + &Poly::monomial(c, self.tangency as usize))
        } else {
            Ok(Poly::constant(line.point(l)?.clone()))
        }
    }

    fn check(&self, line: &MarkedLine) -> Result<()> {
        if self.colliding.len() < 2 {
            return Err(Error::DegenerateDirections(String::from("fewer than two colliding labels")));
        }
        if self.tangency == 0 {
            return Err(Error::DegenerateDirections(String::from("tangency order must be positive")));
        }
        let mut seen: Vec<&Rational> = Vec::new();
        for l in self.colliding.iter() {
            line.point(l)?;
            let c = self
                .directions
                .get(&l)
                .ok_or_else(|| Error::DegenerateDirections(format!("no direction for label {l}")))?;
            if seen.contains(&c) {
                return Err(Error::DegenerateDirections(format!("repeated direction {c}")));
            }
            seen.push(c);
        }
        for l in 1..=line.len() as u32 {
            if !self.colliding.contains(l) && *line.point(l)? == self.base {
                return Err(Error::DegenerateDirections(format!("label {l} sits at the collision point")));
            }
        }
        Ok(())
    }
}

/// `t`-adic valuation at `t = 0` of the coefficient function of `ω_{D,m}` after
/// substituting the collision.
///
/// The coefficient is a product of `(p_j(t) − p_j'(t)) / ((x − p_j(t))(x − p_j'(t)))`.
/// Each denominator factor is a unit in `ℚ(x)[[t]]` (its `t⁰` term is
/// `x − p_j(0) ≠ 0`), so the valuation is the sum over factors of the valuation
/// of the exact polynomial `p_j(t) − p_j'(t)`.
pub fn collision_order(d: &WeightVector, m: u64, line: &MarkedLine, collision: &Collision) -> Result<u64> {
    if line.len() != d.len() {
        return Err(Error::SizeMismatch { expected: d.len(), found: line.len() });
    }
    collision.check(line)?;
    let pairings = enumerate_pairings(d, m)?;
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for pairing in &pairings {
        for &(a, b) in &pairing.pairs {
            *counts.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut total = 0u64;
    for ((a, b), count) in counts {
        let diff = &collision.position(line, a)? - &collision.position(line, b)?;
        let v = diff
            .valuation()
            .ok_or_else(|| Error::DegenerateDirections(format!("p_{a} and p_{b} coincide identically")))?;
        total += v as u64 * count;
    }
    Ok(total)
}

/// `collision_order / (m·p)` for a one-edge degeneration `A | Aᶜ`.
///
/// The boundary divisor `Δ_{A|Aᶜ}` is reached both by colliding `A` and by
/// colliding `Aᶜ`. The coefficient is read on the side of weight at most one
/// (the side the contraction to a ruled model collapses); when `α(A) > 1` the
/// complement is collided instead.
pub fn moduli_coefficient(d: &WeightVector, m: u64, side: LabelSet) -> Result<Rational> {
    let full = d.labels();
    if !side.is_subset(full) {
        return Err(Error::LabelOutOfRange { label: side.max().unwrap_or(0), n: d.len() as u32 });
    }
    let other = full.difference(side);
    if side.len() < 2 || other.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "one-edge degeneration needs both sides of size ≥ 2, got {{{side}|{other}}}"
        )));
    }
    let colliding = if d.alpha(side)? <= rational::one() { side } else { other };
    let line = MarkedLine::standard(d.len());
    // Collide away from every marked point.
    let base = rational::int(-1);
    let collision = Collision::transversal(colliding, base);
    let order = collision_order(d, m, &line, &collision)?;
    let p = enumerate_pairings(d, m)?.len() as i64;
    Ok(rational::ratio(order as i64, m as i64 * p))
}

/// Signed sum of residues of a form at all its finite poles and at infinity.
pub fn residue_sum(form: &Differential, poles: &[Rational]) -> Option<Rational> {
    if form.weight != 1 {
        return None;
    }
    let mut s = form.coefficient.residue_at_infinity();
    for p in poles {
        s += form.coefficient.residue_simple(p)?;
    }
    Some(s)
}

/// Pole orders at the given points; negative values are zeros.
pub fn pole_orders(form: &Differential, points: &[Rational]) -> Vec<i64> {
    points.iter().map(|p| form.coefficient.pole_order(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn half4() -> WeightVector {
        WeightVector::uniform(4).unwrap()
    }

    fn ls(v: &[u32]) -> LabelSet {
        LabelSet::from_labels(v.iter().copied()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let d = WeightVector::new(vec![int(1), int(1)]).unwrap();
        let ps = enumerate_pairings(&d, 1).unwrap();
        assert_eq!(ps, vec![Pairing { pairs: vec![(1, 2)] }, Pairing { pairs: vec![(2, 1)] }]);
        assert_eq!(enumerate_pairings(&half4(), 2).unwrap().len(), 24);
        assert_eq!(enumerate_pairings(&half4(), 1), Err(Error::NonIntegralMultiple { label: 1 }));
        // lexicographic order
        let ps = enumerate_pairings(&half4(), 2).unwrap();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ps[0].pairs, vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn pair_form_examples() {
        let line = MarkedLine::new(vec![int(0), int(1)]).unwrap();
        let w12 = pair_form(&line, 1, 2).unwrap();
        let expected = RationalFunction::new(Poly::constant(int(-1)), Poly::new(vec![int(0), int(-1), int(1)]));
        assert_eq!(w12.coefficient, expected);
        assert_eq!(w12.coefficient.residue_simple(&int(0)), Some(int(1)));
        assert_eq!(w12.coefficient.residue_simple(&int(1)), Some(int(-1)));
        assert_eq!(pair_form(&line, 2, 1).unwrap(), w12.neg());
        assert_eq!(residue_sum(&w12, line.points()), Some(int(0)));
        assert_eq!(w12.order_at_infinity(), Some(0));
        assert!(pair_form(&line, 1, 1).is_err());
    }

    #[test]
    fn product_form_poles() {
        let line = MarkedLine::new(vec![int(0), int(1), int(3), ratio(-1, 2)]).unwrap();
        let j = Pairing { pairs: vec![(1, 2), (3, 4)] };
        let f = product_form(&line, &half4(), 2, &j).unwrap();
        assert_eq!(pole_orders(&f, line.points()), vec![1, 1, 1, 1]);
        assert_eq!(f.weight, 2);
        assert!(product_form(&line, &half4(), 2, &Pairing { pairs: vec![(1, 2), (1, 2)] }).is_err());
    }

    #[test]
    fn canonical_section_examples() {
        let d = WeightVector::new(vec![int(1), int(1)]).unwrap();
        let line = MarkedLine::new(vec![int(0), int(1)]).unwrap();
        let w = canonical_section(&line, &d, 1).unwrap();
        assert_eq!(w.form_weight, 2);
        let w12 = pair_form(&line, 1, 2).unwrap();
        assert_eq!(w.as_differential(), w12.mul(&w12).neg());

        let line = MarkedLine::new(vec![int(0), int(1), int(2), int(5)]).unwrap();
        let w = canonical_section(&line, &half4(), 2).unwrap();
        assert_eq!((w.p, w.form_weight), (24, 48));
        for l in 1..=4 {
            assert_eq!(w.pole_order(l).unwrap(), 24);
        }
        assert!(w.divisor().is_empty());
    }

    #[test]
    fn collisions() {
        let d = WeightVector::new(vec![int(1), int(1)]).unwrap();
        let line = MarkedLine::standard(2);
        let c = Collision::transversal(ls(&[1, 2]), int(7));
        assert_eq!(collision_order(&d, 1, &line, &c).unwrap(), 2);

        let line = MarkedLine::standard(4);
        let c = Collision::transversal(ls(&[1, 2]), int(-3));
        assert_eq!(collision_order(&half4(), 2, &line, &c).unwrap(), 8);
        let c = Collision::transversal(ls(&[1, 2, 3]), int(-3));
        assert_eq!(collision_order(&half4(), 2, &line, &c).unwrap(), 24);

        let mut bad = Collision::transversal(ls(&[1, 2]), int(2));
        assert!(matches!(collision_order(&half4(), 2, &line, &bad), Err(Error::DegenerateDirections(_))));
        bad.base = int(10);
        bad.directions.insert(2, int(1));
        assert!(matches!(collision_order(&half4(), 2, &line, &bad), Err(Error::DegenerateDirections(_))));
    }

    #[test]
    fn moduli_coefficients() {
        assert_eq!(moduli_coefficient(&half4(), 2, ls(&[1, 2])).unwrap(), ratio(1, 6));
        assert_eq!(moduli_coefficient(&half4(), 4, ls(&[3, 4])).unwrap(), ratio(1, 6));
        assert!(moduli_coefficient(&half4(), 2, ls(&[1])).is_err());
        // α({1,2}) = 3/2: the coefficient is read from the {3,4} collision.
        let d = WeightVector::new(vec![ratio(3, 4), ratio(3, 4), ratio(1, 4), ratio(1, 4)]).unwrap();
        assert_eq!(moduli_coefficient(&d, 4, ls(&[3, 4])).unwrap(), ratio(1, 28));
        assert_eq!(moduli_coefficient(&d, 4, ls(&[1, 2])).unwrap(), ratio(1, 28));
        assert_eq!(moduli_coefficient(&d, 4, ls(&[1, 3])).unwrap(), ratio(3, 28));
    }

    #[test]
    fn mobius_identity_and_inverse() {
        let line = MarkedLine::new(vec![int(0), int(1), int(3)]).unwrap();
        let d = WeightVector::new(vec![int(1), ratio(1, 2), ratio(1, 2)]).unwrap();
        let w = canonical_section(&line, &d, 2).unwrap();
        let id = Mobius::new(int(1), int(0), int(0), int(1)).unwrap();
        assert_eq!(w.pullback(&id), w.as_differential().coefficient);
        let phi = Mobius::new(int(2), int(1), int(1), int(-7)).unwrap();
        let image = phi.map_line(&line).unwrap();
        let w_img = canonical_section(&image, &d, 2).unwrap();
        assert_eq!(w_img.pullback(&phi), w.as_differential().coefficient);
        assert!(Mobius::new(int(1), int(2), int(2), int(4)).is_err());
    }
}
