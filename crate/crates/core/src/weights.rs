//! Weight vectors on marked points and the boundary correction divisor.
//!
//! For a decomposition `S = {S', S''}` put `α(S') = Σ_{j∈S'} d_j`. The boundary
//! charge of `S` is `α(S') − 1` on the `S''` side when `α(S') ≥ 1`, and
//! `1 − α(S')` on the `S'` side otherwise. On a fiber with dual tree `τ`, only
//! the edge cuts of `τ` contribute.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::labels::LabelSet;
use crate::rational::{self, Rational};
use crate::trees::{Decomposition, StableTree, VertexId};
use crate::{Error, Result};

/// `d_1..d_n` with `0 < d_j ≤ 1` and `Σ d_j = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightViolation {
    TooFew(usize),
    NotPositive { label: u32 },
    AboveOne { label: u32 },
    SumNotTwo(Rational),
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::TooFew(n) => write!(f, "{n} weights, need at least 2"),
            WeightViolation::NotPositive { label } => write!(f, "d_{label} ≤ 0"),
            WeightViolation::AboveOne { label } => write!(f, "d_{label} > 1"),
            WeightViolation::SumNotTwo(s) => write!(f, "weights sum to {s}, not 2"),
        }
    }
}

/// Itemized check of the weight-vector invariants.
pub fn validate_weights(entries: &[Rational]) -> Vec<WeightViolation> {
    let mut out = Vec::new();
    if entries.len() < 2 {
        out.push(WeightViolation::TooFew(entries.len()));
    }
    for (i, d) in entries.iter().enumerate() {
        let label = i as u32 + 1;
        if !d.is_positive() {
            out.push(WeightViolation::NotPositive { label });
        } else if *d > rational::one() {
            out.push(WeightViolation::AboveOne { label });
        }
    }
    let sum: Rational = entries.iter().sum();
    if sum != rational::int(2) {
        out.push(WeightViolation::SumNotTwo(sum));
    }
    out
}

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if let Some(v) = validate_weights(&entries).first() {
            return Err(Error::InvalidWeights(format!("{v}")));
        }
        if entries.len() > crate::labels::MAX_LABELS as usize {
            return Err(Error::InvalidWeights(format!("{} labels", entries.len())));
        }
        Ok(WeightVector { entries })
    }

    /// `n` copies of `2/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        WeightVector::new(core::iter::repeat_n(rational::ratio(2, n as i64), n).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Weight of a 1-based label.
    pub fn get(&self, label: u32) -> Result<&Rational> {
        self.entries
            .get((label as usize).wrapping_sub(1))
            .ok_or(Error::LabelOutOfRange { label, n: self.entries.len() as u32 })
    }

    pub fn labels(&self) -> LabelSet {
        LabelSet::full(self.entries.len() as u32).expect("length checked at construction")
    }

    /// `α(S') = Σ_{j∈S'} d_j`.
    pub fn alpha(&self, side: LabelSet) -> Result<Rational> {
        let mut sum = rational::zero();
        for l in side.iter() {
            sum += self.get(l)?;
        }
        Ok(sum)
    }

    /// Least `m ≥ 1` with every `m·d_j` integral.
    pub fn least_multiplier(&self) -> u64 {
        self.entries.iter().fold(1u64, |acc, d| {
            let den = u64::try_from(d.denom()).expect("denominator fits in u64");
            num_integer::lcm(acc, den)
        })
    }

    /// Relabels: entry `i` of the result is entry `perm[i]` of `self` (0-based).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.entries.len() {
            return Err(Error::SizeMismatch { expected: self.entries.len(), found: perm.len() });
        }
        WeightVector::new(perm.iter().map(|&i| self.entries[i].clone()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChargedSide {
    /// The side containing label 1.
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCharge {
    pub decomposition: Decomposition,
    /// The labels of the side carrying the charge.
    pub charged: LabelSet,
    pub coefficient: Rational,
}

impl BoundaryCharge {
    pub fn charged_side(&self) -> ChargedSide {
        if self.charged == self.decomposition.first() {
            ChargedSide::First
        } else {
            ChargedSide::Second
        }
    }
}

/// Boundary charge of `S`. Reading `S'` as the side containing label 1 the rule
/// is symmetric, so the result does not depend on which side is called `S'`.
/// At `α = 1` the coefficient is 0 and the side opposite to label 1 is reported.
pub fn f_charge(d: &WeightVector, s: &Decomposition) -> Result<BoundaryCharge> {
    if s.n() as usize != d.len() {
        return Err(Error::SizeMismatch { expected: d.len(), found: s.n() as usize });
    }
    let first = s.first();
    let alpha = d.alpha(first)?;
    let one = rational::one();
    let (charged, coefficient) = if alpha >= one {
        (s.second(), alpha - one)
    } else {
        (first, one - alpha)
    };
    Ok(BoundaryCharge { decomposition: *s, charged, coefficient })
}

/// Per-vertex coefficient of the correction divisor on the fiber with dual
/// tree `t`: every edge cut adds its charge to each vertex on its charged side.
pub fn f_vertex_coefficients(t: &StableTree, d: &WeightVector) -> Result<BTreeMap<VertexId, Rational>> {
    if t.n as usize != d.len() {
        return Err(Error::SizeMismatch { expected: d.len(), found: t.n as usize });
    }
    let cuts = t.edge_cuts()?;
    let mut out: BTreeMap<VertexId, Rational> =
        t.vertices.iter().map(|&v| (v, rational::zero())).collect();
    let charges = cuts.iter().map(|s| f_charge(d, s)).collect::<Result<Vec<_>>>()?;
    for (&v, total) in out.iter_mut() {
        let tails = t.tails_at(v);
        for (cut, charge) in t.edges.iter().zip(&charges) {
            if charge.coefficient.is_zero() {
                continue;
            }
            if vertex_on_side(t, v, *cut, charge.charged, tails) {
                *total += &charge.coefficient;
            }
        }
    }
    Ok(out)
}

/// Whether `v` lies on the side of edge `cut` whose labels are `side`.
fn vertex_on_side(t: &StableTree, v: VertexId, cut: (VertexId, VertexId), side: LabelSet, tails: LabelSet) -> bool {
    if !tails.is_empty() {
        return tails.is_subset(side);
    }
    // Tail-less vertex: walk to any vertex with tails without crossing `cut`.
    let mut seen = alloc::vec![v];
    let mut stack = alloc::vec![v];
    while let Some(x) = stack.pop() {
        let x_tails = t.tails_at(x);
        if !x_tails.is_empty() {
            return x_tails.is_subset(side);
        }
        for &(a, b) in &t.edges {
            if (a, b) == cut || (b, a) == cut {
                continue;
            }
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    false
}

/// The component `C_0` of the first leaf contraction reaching weight ≥ 1;
/// it never lies in the support of the correction divisor.
pub fn distinguished_component(t: &StableTree, d: &WeightVector) -> Result<VertexId> {
    Ok(t.contraction_sequence(d)?.distinguished())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn ls(v: &[u32]) -> LabelSet {
        LabelSet::from_labels(v.iter().copied()).unwrap()
    }

    fn remark5() -> WeightVector {
        WeightVector::new(vec![ratio(4, 7), ratio(4, 7), ratio(2, 7), ratio(2, 7), ratio(2, 7)]).unwrap()
    }

    #[test]
    fn validation() {
        let v = validate_weights(&[int(1), int(1), int(0), int(0)]);
        assert!(v.contains(&WeightViolation::NotPositive { label: 3 }));
        assert!(validate_weights(remark5().entries()).is_empty());
        assert!(WeightVector::uniform(4).is_ok());
        assert!(matches!(
            validate_weights(&[int(1), int(1), ratio(1, 2)])[..],
            [WeightViolation::SumNotTwo(_)]
        ));
        assert!(validate_weights(&[ratio(3, 2), ratio(1, 2)]).contains(&WeightViolation::AboveOne { label: 1 }));
    }

    #[test]
    fn alpha_values() {
        let d = remark5();
        assert_eq!(d.alpha(ls(&[1, 2])).unwrap(), ratio(8, 7));
        assert_eq!(WeightVector::uniform(4).unwrap().alpha(ls(&[1, 2])).unwrap(), int(1));
        assert_eq!(d.alpha(LabelSet::EMPTY).unwrap(), int(0));
        assert!(d.alpha(ls(&[6])).is_err());
        assert_eq!(d.least_multiplier(), 7);
    }

    #[test]
    fn charges() {
        let d = remark5();
        let s = Decomposition::new(5, ls(&[1, 2])).unwrap();
        let c = f_charge(&d, &s).unwrap();
        assert_eq!(c.coefficient, ratio(1, 7));
        assert_eq!(c.charged, ls(&[3, 4, 5]));

        let u = WeightVector::uniform(4).unwrap();
        for s in crate::trees::enumerate_decompositions(4).unwrap() {
            let c = f_charge(&u, &s).unwrap();
            assert_eq!(c.coefficient, int(0));
            assert_eq!(c.charged_side(), ChargedSide::Second);
        }

        let d = WeightVector::new(vec![int(1), ratio(1, 3), ratio(1, 3), ratio(1, 3)]).unwrap();
        let c = f_charge(&d, &Decomposition::new(4, ls(&[2, 3])).unwrap()).unwrap();
        assert_eq!(c.coefficient, ratio(1, 3));
        assert_eq!(c.charged, ls(&[2, 3]));
        assert!(f_charge(&remark5(), &Decomposition::new(4, ls(&[1, 2])).unwrap()).is_err());
    }

    #[test]
    fn vertex_coefficients() {
        let t = StableTree::smooth(5);
        assert!(f_vertex_coefficients(&t, &remark5()).unwrap().values().all(Zero::is_zero));

        let t = StableTree::from_parts(5, &[(1, &[1, 2]), (2, &[3, 4, 5])], &[(1, 2)]);
        let f = f_vertex_coefficients(&t, &remark5()).unwrap();
        assert_eq!(f[&1], int(0));
        assert_eq!(f[&2], ratio(1, 7));
        assert_eq!(distinguished_component(&t, &remark5()).unwrap(), 1);

        let chain = StableTree::from_parts(5, &[(1, &[1, 2]), (2, &[3]), (3, &[4, 5])], &[(1, 2), (2, 3)]);
        let d = WeightVector::new(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2), ratio(1, 2), ratio(1, 2)]).unwrap();
        let f = f_vertex_coefficients(&chain, &d).unwrap();
        assert_eq!((f[&1].clone(), f[&2].clone(), f[&3].clone()), (ratio(1, 2), int(0), int(0)));
        assert_eq!(distinguished_component(&chain, &d).unwrap(), 2);
    }

    #[test]
    fn tailless_vertex_side() {
        // 1,2 – hub – 3,4 with the hub carrying no tails
        let t = StableTree::from_parts(6, &[(0, &[1, 2]), (1, &[]), (2, &[3, 4]), (3, &[5, 6])], &[(0, 1), (1, 2), (1, 3)]);
        assert!(t.is_valid());
        let d = WeightVector::new(vec![ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 2), ratio(1, 2)]).unwrap();
        let f = f_vertex_coefficients(&t, &d).unwrap();
        // each leaf side has α = 1/2 or 1 → charges 1/2, 1/2, 0 on the leaves
        assert_eq!(f[&0], ratio(1, 2));
        assert_eq!(f[&1], int(0));
        assert_eq!(f[&2], ratio(1, 2));
        assert_eq!(f[&3], int(0));
        let c0 = distinguished_component(&t, &d).unwrap();
        assert!(f[&c0].is_zero());
    }
}
