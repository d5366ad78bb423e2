//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's evaluation, jump or derivative code.

#![allow(dead_code)]

use num_traits::{One, Zero};
use plcircle::rational::{int, Q};
use plcircle::{PlHomeo, SymbolicSet};

/// Periodic piecewise-linear interpolation of a lift from its vertices.
pub struct Lift {
    /// Vertices repeated over three periods around `[0, 1)`.
    ext: Vec<(Q, Q)>,
}

fn floor(t: &Q) -> Q {
    Q::from_integer(t.floor().to_integer())
}

impl Lift {
    pub fn of(h: &PlHomeo) -> Self {
        let mut v = h.lift_vertices();
        // Drop the closing vertex, which repeats the first one period up.
        if v.len() > 1 && v[v.len() - 1].0 == &v[0].0 + int(1) {
            v.pop();
        }
        let ext = (-1i64..=1)
            .flat_map(|k| v.iter().map(move |(x, y)| (x + int(k), y + int(k))))
            .collect();
        Lift { ext }
    }

    /// Segment containing `[s, s + eps)` when `right`, else `(s - eps, s]`.
    fn segment(&self, s: &Q, right: bool) -> (&(Q, Q), &(Q, Q)) {
        self.ext
            .windows(2)
            .map(|w| (&w[0], &w[1]))
            .find(|(a, b)| {
                if right {
                    a.0 <= *s && *s < b.0
                } else {
                    a.0 < *s && *s <= b.0
                }
            })
            .expect("point outside the extended period")
    }

    pub fn slope(&self, s: &Q, right: bool) -> Q {
        let (a, b) = self.segment(s, right);
        (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    pub fn eval(&self, t: &Q) -> Q {
        let base = floor(t);
        let s = t - &base;
        let (a, b) = self.segment(&s, true);
        &a.1 + (&b.1 - &a.1) / (&b.0 - &a.0) * (&s - &a.0) + base
    }

    /// Circle value in `[0, 1)`.
    pub fn eval_circle(&self, t: &Q) -> Q {
        let v = self.eval(t);
        &v - floor(&v)
    }

    /// `D+ / D-` at `t` in `[0, 1)`.
    pub fn jump(&self, t: &Q) -> Q {
        self.slope(t, true) / self.slope(t, false)
    }

    /// Product of jumps over one period's vertices, which telescopes to 1.
    pub fn telescoped_product(&self) -> Q {
        let n = self.ext.len() / 3;
        self.ext[n..2 * n]
            .iter()
            .fold(Q::one(), |acc, (x, _)| acc * self.jump(&(x - floor(x))))
    }
}

pub fn circle_dist(a: &Q, b: &Q) -> Q {
    let d = if a > b { a - b } else { b - a };
    let e = int(1) - &d;
    if d < e {
        d
    } else {
        e
    }
}

/// Nearest-neighbour distance of each point of `pts` inside `cloud`
/// (both sorted in `[0, 1)`).
fn nn_dist(cloud: &[Q], p: &Q) -> Q {
    let mut best: Option<Q> = None;
    let i = cloud.partition_point(|c| c < p);
    let n = cloud.len() as isize;
    for off in -2isize..=2 {
        let c = &cloud[(i as isize + off).rem_euclid(n) as usize];
        if c == p {
            continue;
        }
        let d = circle_dist(c, p);
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    best.unwrap_or_else(Q::zero)
}

/// Points of `s.realize(depth)` whose nearest-neighbour distance keeps
/// shrinking as the realization depth grows: the accumulation points
/// visible at `depth`.
pub fn brute_force_accumulation(s: &SymbolicSet, depth: usize) -> Vec<Q> {
    let base = s.realize(depth);
    let clouds: Vec<Vec<Q>> = (depth + 2..=depth + 4).map(|d| s.realize(d)).collect();
    base.into_iter()
        .filter(|p| {
            let d: Vec<Q> = clouds.iter().map(|c| nn_dist(c, p)).collect();
            d.windows(2).all(|w| w[1] < w[0])
        })
        .collect()
}

/// Rank by repeated brute-force derivation, each step checked against
/// the symbolic derivative. Returns `None` on the first disagreement.
pub fn brute_force_rank(s: &SymbolicSet, depth: usize) -> Option<usize> {
    let mut cur = s.clone();
    let mut rank = 0;
    while !cur.is_empty() {
        let acc = brute_force_accumulation(&cur, depth);
        let next = plcircle::cb_derivative(&cur);
        if acc != next.realize(depth) {
            return None;
        }
        rank += 1;
        cur = next;
    }
    Some(rank)
}
