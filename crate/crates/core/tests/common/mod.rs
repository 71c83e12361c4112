#![allow(dead_code)]

use proptest::prelude::*;
use subadj_core::rational::{int, ratio};
use subadj_core::trees::{StableTree, VertexId};
use subadj_core::weights::WeightVector;
use subadj_core::Rational;

/// Weights `a_j / N` with positive integers `a_j ≤ N` summing to `2N`.
pub fn weights(n_range: std::ops::RangeInclusive<usize>, max_den: i64) -> impl Strategy<Value = WeightVector> {
    (n_range, 2..=max_den, prop::collection::vec(any::<u32>(), 64)).prop_map(|(n, den, picks)| {
        let den = den.max((n as i64 + 1) / 2);
        let mut a = vec![1i64; n];
        let mut left = 2 * den - n as i64;
        let mut k = 0;
        while left > 0 {
            let j = (picks[k % picks.len()] as usize + k) % n;
            k += 1;
            let room = den - a[j];
            if room == 0 {
                continue;
            }
            let step = 1 + (picks[(k * 7) % picks.len()] as i64 % room.min(left));
            a[j] += step;
            left -= step;
        }
        WeightVector::new(a.into_iter().map(|x| ratio(x, den)).collect()).unwrap()
    })
}

/// A stable tree on labels `1..=n` grown by repeatedly splitting a vertex
/// with at least four special points into two.
pub fn stable_tree(n: u32, picks: &[u32], splits: usize) -> StableTree {
    let mut labels: Vec<Vec<u32>> = vec![(1..=n).collect()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut k = 0usize;
    let mut next = || {
        let v = picks[k % picks.len()];
        k += 1;
        v as usize
    };
    for _ in 0..splits {
        let valence = |v: usize, labels: &Vec<Vec<u32>>, edges: &Vec<(usize, usize)>| {
            labels[v].len() + edges.iter().filter(|&&(a, b)| a == v || b == v).count()
        };
        let candidates: Vec<usize> = (0..labels.len()).filter(|&v| valence(v, &labels, &edges) >= 4).collect();
        if candidates.is_empty() {
            break;
        }
        let v = candidates[next() % candidates.len()];
        // items: labels then incident edges
        let mut items: Vec<(bool, usize)> = labels[v].iter().map(|&l| (true, l as usize)).collect();
        items.extend(edges.iter().enumerate().filter(|(_, &(a, b))| a == v || b == v).map(|(i, _)| (false, i)));
        let mut side: Vec<bool> = items.iter().map(|_| next() % 2 == 0).collect();
        let mut moved = side.iter().filter(|&&s| s).count();
        let mut i = 0;
        while moved < 2 {
            if !side[i] {
                side[i] = true;
                moved += 1;
            }
            i += 1;
        }
        let mut i = 0;
        while items.len() - moved < 2 {
            if side[i] {
                side[i] = false;
                moved -= 1;
            }
            i += 1;
        }
        let u = labels.len();
        labels.push(Vec::new());
        for (item, s) in items.iter().zip(&side) {
            if !*s {
                continue;
            }
            match item {
                (true, l) => {
                    labels[v].retain(|x| *x as usize != *l);
                    labels[u].push(*l as u32);
                }
                (false, e) => {
                    let (a, b) = edges[*e];
                    edges[*e] = if a == v { (u, b) } else { (a, u) };
                }
            }
        }
        edges.push((v, u));
    }
    let parts: Vec<(VertexId, &[u32])> = labels.iter().enumerate().map(|(v, l)| (v as VertexId, l.as_slice())).collect();
    let edges: Vec<(VertexId, VertexId)> = edges.iter().map(|&(a, b)| (a as VertexId, b as VertexId)).collect();
    StableTree::from_parts(n, &parts, &edges)
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| ratio(a, b))
}

pub fn nonzero_small() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |x| *x != int(0))
}
