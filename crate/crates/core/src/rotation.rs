//! Fixed points, rotation numbers and a numeric semi-conjugacy to a
//! rotation.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::circle::{reduce_mod1, CirclePoint};
use crate::error::Error;
use crate::homeo::PlHomeo;
use crate::rational::{self, int, Q};

/// A maximal connected component of a fixed-point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedComponent {
    Point {
        at: CirclePoint,
    },
    /// Closed arc traversed positively from `start` to `end`.
    Arc {
        start: CirclePoint,
        end: CirclePoint,
    },
    Circle,
}

impl FixedComponent {
    pub fn start(&self) -> &CirclePoint {
        match self {
            FixedComponent::Point { at } => at,
            FixedComponent::Arc { start, .. } => start,
            FixedComponent::Circle => panic!("full circle has no endpoints"),
        }
    }

    pub fn end(&self) -> &CirclePoint {
        match self {
            FixedComponent::Point { at } => at,
            FixedComponent::Arc { end, .. } => end,
            FixedComponent::Circle => panic!("full circle has no endpoints"),
        }
    }

    /// Some point of the component.
    pub fn representative(&self) -> CirclePoint {
        match self {
            FixedComponent::Circle => CirclePoint::zero(),
            c => c.start().clone(),
        }
    }

    /// Finitely many sample points: the endpoints and, for an arc, its
    /// midpoint.
    pub fn samples(&self) -> Vec<CirclePoint> {
        match self {
            FixedComponent::Point { at } => vec![at.clone()],
            FixedComponent::Arc { start, end } => {
                let half = start.forward_distance(end) / int(2);
                vec![start.clone(), start.translate(&half), end.clone()]
            }
            FixedComponent::Circle => vec![CirclePoint::zero()],
        }
    }
}

/// Exact solution set of `h(x) = x`, as maximal components sorted by start.
pub fn fixed_points(h: &PlHomeo) -> Vec<FixedComponent> {
    let v = h.lift_vertices();
    // closed lift intervals [start, start + len]
    let mut raw: Vec<(Q, Q)> = Vec::new();
    for w in v.windows(2) {
        let (a, ya) = &w[0];
        let (b, yb) = &w[1];
        let s = (yb - ya) / (b - a);
        let da = ya - a;
        if s.is_one() {
            if da.is_integer() {
                raw.push((a.clone(), b - a));
            }
            continue;
        }
        let db = yb - b;
        let (lo, hi) = if da < db { (&da, &db) } else { (&db, &da) };
        let mut m = lo.ceil();
        while m <= *hi {
            let t = a + (&m - &da) / (&s - int(1));
            raw.push((t, int(0)));
            m += int(1);
        }
    }
    merge_on_circle(raw)
}

fn merge_on_circle(raw: Vec<(Q, Q)>) -> Vec<FixedComponent> {
    if raw.iter().any(|(_, len)| *len >= int(1)) {
        return vec![FixedComponent::Circle];
    }
    let mut iv: Vec<(Q, Q)> = raw
        .into_iter()
        .map(|(s, len)| {
            let s = rational::frac(&s);
            let e = &s + len;
            (s, e)
        })
        .collect();
    iv.sort();
    let mut merged: Vec<(Q, Q)> = Vec::new();
    for (s, e) in iv {
        match merged.last_mut() {
            Some(last) if s <= last.1 => {
                if e > last.1 {
                    last.1 = e;
                }
            }
            _ => merged.push((s, e)),
        }
    }
    if merged.len() > 1 {
        let first = merged[0].clone();
        let last = merged.last().unwrap().clone();
        if last.1 >= &first.0 + int(1) {
            merged.pop();
            let end = (&first.1 + int(1)).max(last.1.clone());
            merged[0] = (last.0, end);
        }
    }
    if merged.iter().any(|(s, e)| e - s >= int(1)) {
        return vec![FixedComponent::Circle];
    }
    let mut out: Vec<FixedComponent> = merged
        .into_iter()
        .map(|(s, e)| {
            if s == e {
                FixedComponent::Point {
                    at: reduce_mod1(&s),
                }
            } else {
                FixedComponent::Arc {
                    start: reduce_mod1(&s),
                    end: reduce_mod1(&e),
                }
            }
        })
        .collect();
    out.sort_by(|a, b| a.start().cmp(b.start()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotNumResult {
    /// Exact rational rotation number in `[0, 1)`.
    Exact {
        #[serde(with = "rational::serde_q")]
        value: Q,
    },
    /// Closed Farey bracket `lo <= rho <= hi` after `depth` refinements.
    /// No endpoint with denominator up to the search bound is the rotation
    /// number.
    Bracket {
        #[serde(with = "rational::serde_q")]
        lo: Q,
        #[serde(with = "rational::serde_q")]
        hi: Q,
        depth: usize,
    },
}

impl RotNumResult {
    pub fn exact(&self) -> Option<&Q> {
        match self {
            RotNumResult::Exact { value } => Some(value),
            RotNumResult::Bracket { .. } => None,
        }
    }
}

impl fmt::Display for RotNumResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotNumResult::Exact { value } => write!(f, "{} (exact)", rational::format(value)),
            RotNumResult::Bracket { lo, hi, depth } => write!(
                f,
                "[{}, {}] after {} refinements",
                rational::format(lo),
                rational::format(hi),
                depth
            ),
        }
    }
}

/// A power `h^q` together with its lift: `lift(t) = map.lift(t) + shift`,
/// where the lift of `h` is normalized so that it sends 0 into `[0, 1)`.
#[derive(Debug, Clone)]
struct LiftPower {
    map: PlHomeo,
    shift: Q,
}

impl LiftPower {
    fn of(h: &PlHomeo) -> Self {
        LiftPower {
            map: h.clone(),
            shift: -h.lift(&int(0)).floor(),
        }
    }

    fn at(&self, t: &Q) -> Q {
        self.map.lift(t) + &self.shift
    }

    /// `self ∘ inner`.
    fn after(&self, inner: &LiftPower) -> LiftPower {
        let map = self.map.compose(&inner.map);
        let zero = int(0);
        let offset = self.map.lift(&inner.map.lift(&zero)) - map.lift(&zero);
        debug_assert!(offset.is_integer());
        LiftPower {
            map,
            shift: &self.shift + &inner.shift + offset,
        }
    }
}

/// Exact rotation number when `h^q` has a fixed point for some
/// `q <= max_q`; otherwise a Farey bracket refined `depth` times by sign
/// tests of `lift^q(0) - p`.
pub fn rotation_number(h: &PlHomeo, max_q: u64, depth: usize) -> RotNumResult {
    let base = LiftPower::of(h);
    let mut hq = base.clone();
    for q in 1..=max_q {
        if q > 1 {
            hq = base.after(&hq);
        }
        if let Some(c) = fixed_points(&hq.map).first() {
            let x = c.representative().into_value();
            let p = hq.at(&x) - &x;
            debug_assert!(p.is_integer());
            return RotNumResult::Exact {
                value: rational::frac(&(p / int(q as i64))),
            };
        }
    }
    // Each endpoint carries the power of `h` matching its denominator, so a
    // mediant costs one composition.
    let (mut lo, mut hi) = (int(0), int(1));
    let (mut lo_pow, mut hi_pow) = (base.clone(), base);
    for _ in 0..depth {
        let m = Q::new(lo.numer() + hi.numer(), lo.denom() + hi.denom());
        let m_pow = lo_pow.after(&hi_pow);
        let diff = m_pow.at(&int(0)) - Q::from_integer(m.numer().clone());
        if diff.is_zero() {
            return RotNumResult::Exact { value: m };
        } else if diff.is_positive() {
            lo = m;
            lo_pow = m_pow;
        } else {
            hi = m;
            hi_pow = m_pow;
        }
    }
    RotNumResult::Bracket { lo, hi, depth }
}

/// Floating-point copy of a map for long numeric orbits.
#[derive(Debug, Clone)]
pub struct FloatMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl FloatMap {
    pub fn new(h: &PlHomeo) -> Self {
        let v = h.lift_vertices();
        FloatMap {
            xs: v.iter().map(|(x, _)| rational::to_f64(x)).collect(),
            ys: v.iter().map(|(_, y)| rational::to_f64(y)).collect(),
        }
    }

    pub fn lift(&self, t: f64) -> f64 {
        let n = (t - self.xs[0]).floor();
        let r = t - n;
        let k = self.xs.len() - 1;
        let i = (self.xs[..k].partition_point(|&x| x <= r)).max(1) - 1;
        let s = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + s * (r - self.xs[i]) + n
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = self.lift(x);
        y - y.floor()
    }
}

/// Numeric semi-conjugacy: the empirical distribution function of the
/// orbit of 0, sampled on a uniform grid.
#[derive(Debug, Clone, Serialize)]
pub struct SemiconjugacyTable {
    pub samples: Vec<(CirclePoint, f64)>,
    pub rotation_estimate: f64,
    #[serde(skip)]
    orbit: Vec<f64>,
    #[serde(skip)]
    map: Option<FloatMap>,
}

impl SemiconjugacyTable {
    /// Empirical distribution function at `x` in `[0, 1)`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.orbit.partition_point(|&t| t < x) as f64 / self.orbit.len() as f64
    }

    /// `max_x |Phi(h(x)) - Phi(x) - rho|` over the sample grid, measured
    /// on the circle.
    pub fn equivariance_residual(&self) -> f64 {
        let map = self.map.as_ref().expect("table built from a map");
        self.samples
            .iter()
            .map(|(x, phi)| {
                let lhs = self.value_at(map.eval(x.to_f64()));
                let d = lhs - phi - self.rotation_estimate;
                let d = d - d.round();
                d.abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the identity map on the grid.
    pub fn deviation_from_identity(&self) -> f64 {
        self.samples
            .iter()
            .map(|(x, phi)| (phi - x.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,phi\n");
        for (x, phi) in &self.samples {
            out.push_str(&format!("{},{:.12}\n", x, phi));
        }
        out
    }
}

pub fn semiconjugacy_table(
    h: &PlHomeo,
    n_samples: usize,
    n_iter: usize,
) -> Result<SemiconjugacyTable, Error> {
    if n_samples == 0 || n_iter == 0 {
        return Err(Error::InvalidArgument(
            "n_samples and n_iter must be positive".into(),
        ));
    }
    if !fixed_points(h).is_empty() {
        return Err(Error::InvalidArgument(
            "map has a fixed point; the semi-conjugacy degenerates".into(),
        ));
    }
    let map = FloatMap::new(h);
    let mut orbit = Vec::with_capacity(n_iter);
    let mut t = 0.0f64;
    let mut lifted = 0.0f64;
    let shift = map.lift(0.0).floor();
    for _ in 0..n_iter {
        orbit.push(t);
        let next = map.lift(t) - shift;
        lifted += next - t;
        t = next - next.floor();
    }
    orbit.sort_by(|a, b| a.partial_cmp(b).expect("finite orbit"));
    let mut table = SemiconjugacyTable {
        samples: Vec::with_capacity(n_samples),
        rotation_estimate: lifted / n_iter as f64,
        orbit,
        map: Some(map),
    };
    for j in 0..n_samples {
        let x = rational::q(j as i64, n_samples as i64);
        let phi = table.value_at(rational::to_f64(&x));
        table.samples.push((reduce_mod1(&x), phi));
    }
    Ok(table)
}
