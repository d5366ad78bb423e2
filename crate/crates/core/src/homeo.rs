//! Orientation-preserving PL homeomorphisms of the circle.
//!
//! A map is stored by the vertices of one period of its lift
//! `(x_0, y_0), ..., (x_{k-1}, y_{k-1})`, with the closing vertex
//! `(x_0 + 1, y_0 + 1)` implied. In canonical form:
//!
//! * every stored vertex is a genuine breakpoint, or `k == 1` and the map is
//!   a rotation stored as the single vertex `(0, alpha)`;
//! * `x_0` is the smallest breakpoint in `[0, 1)`;
//! * `y_0` lies in `[0, 1)`.
//!
//! Canonical form is unique, so derived equality is equality of maps.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circle::{reduce_mod1, CirclePoint};
use crate::error::Error;
use crate::rational::{self, int, Q};

/// The structural invariant a candidate vertex list breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("at least two lift vertices are required (first and closing)")]
    TooFewVertices,
    #[error("x-coordinates must be strictly increasing (violated at vertex {0})")]
    XNotIncreasing(usize),
    #[error("slopes must be strictly positive (piece {0} has slope {1})")]
    NonPositiveSlope(usize, String),
    #[error("closing vertex must satisfy x_k = x_0 + 1 (got x_0 = {0}, x_k = {1})")]
    PeriodMismatch(String, String),
    #[error("degree-1 continuity requires y_k = y_0 + 1 (got y_0 = {0}, y_k = {1})")]
    DegreeNotOne(String, String),
    #[error("base point x_0 = {0} must lie in [0, 1)")]
    BaseOutOfRange(String),
    #[error("removable breakpoint at x = {0} (equal slopes on both sides)")]
    RemovableBreakpoint(String),
    #[error("base vertex is not the smallest breakpoint")]
    BaseNotSmallest,
    #[error("y_0 = {0} must lie in [0, 1)")]
    LiftNotNormalized(String),
    #[error("rotation must be stored with base vertex x_0 = 0")]
    RotationBase,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlHomeo {
    verts: Vec<(Q, Q)>,
}

impl PlHomeo {
    pub fn identity() -> Self {
        Self::rotation(&int(0))
    }

    pub fn rotation(alpha: &Q) -> Self {
        PlHomeo {
            verts: vec![(int(0), rational::frac(alpha))],
        }
    }

    /// Builds a map from lift vertices including the closing vertex
    /// `(x_0 + 1, y_0 + 1)`, validating every invariant and canonicalizing.
    pub fn from_lift_vertices(v: &[(Q, Q)]) -> Result<Self, InvariantViolation> {
        if v.len() < 2 {
            return Err(InvariantViolation::TooFewVertices);
        }
        let (x0, y0) = &v[0];
        if x0.is_negative() || *x0 >= int(1) {
            return Err(InvariantViolation::BaseOutOfRange(rational::format(x0)));
        }
        for i in 1..v.len() {
            if v[i].0 <= v[i - 1].0 {
                return Err(InvariantViolation::XNotIncreasing(i));
            }
        }
        for i in 0..v.len() - 1 {
            let s = (&v[i + 1].1 - &v[i].1) / (&v[i + 1].0 - &v[i].0);
            if !s.is_positive() {
                return Err(InvariantViolation::NonPositiveSlope(
                    i,
                    rational::format(&s),
                ));
            }
        }
        let (xk, yk) = &v[v.len() - 1];
        if *xk != x0 + int(1) {
            return Err(InvariantViolation::PeriodMismatch(
                rational::format(x0),
                rational::format(xk),
            ));
        }
        if *yk != y0 + int(1) {
            return Err(InvariantViolation::DegreeNotOne(
                rational::format(y0),
                rational::format(yk),
            ));
        }
        Ok(Self::canonicalize(v[..v.len() - 1].to_vec()))
    }

    /// Canonical form of a lift given by one period of vertices with
    /// strictly increasing x (spanning less than one unit) and the closing
    /// vertex implied.
    fn canonicalize(points: Vec<(Q, Q)>) -> Self {
        let k = points.len();
        debug_assert!(k >= 1);
        let closing = |i: usize| -> (Q, Q) {
            if i == k {
                (&points[0].0 + int(1), &points[0].1 + int(1))
            } else {
                points[i].clone()
            }
        };
        let slopes: Vec<Q> = (0..k)
            .map(|i| {
                let (a, b) = (closing(i), closing(i + 1));
                (b.1 - a.1) / (b.0 - a.0)
            })
            .collect();
        let mut kept: Vec<(Q, Q)> = (0..k)
            .filter(|&i| slopes[(i + k - 1) % k] != slopes[i])
            .map(|i| {
                let (x, y) = &points[i];
                let n = x.floor();
                (x - &n, y - &n)
            })
            .collect();
        if kept.is_empty() {
            return Self::rotation(&(&points[0].1 - &points[0].0));
        }
        kept.sort_by(|a, b| a.0.cmp(&b.0));
        let m = kept[0].1.floor();
        for v in kept.iter_mut() {
            v.1 -= &m;
        }
        PlHomeo { verts: kept }
    }

    /// Checks the canonical-form invariants of an existing value.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        let k = self.verts.len();
        if k == 0 {
            return Err(InvariantViolation::TooFewVertices);
        }
        let full = self.lift_vertices();
        let rebuilt = Self::from_lift_vertices(&full)?;
        let (x0, y0) = &self.verts[0];
        if y0.is_negative() || *y0 >= int(1) {
            return Err(InvariantViolation::LiftNotNormalized(rational::format(y0)));
        }
        if k == 1 {
            if !x0.is_zero() {
                return Err(InvariantViolation::RotationBase);
            }
            return Ok(());
        }
        let slopes = self.slopes();
        for i in 0..k {
            if slopes[(i + k - 1) % k] == slopes[i] {
                return Err(InvariantViolation::RemovableBreakpoint(rational::format(
                    &self.verts[i].0,
                )));
            }
        }
        if rebuilt != *self {
            return Err(InvariantViolation::BaseNotSmallest);
        }
        Ok(())
    }

    /// Lift vertices including the closing vertex.
    pub fn lift_vertices(&self) -> Vec<(Q, Q)> {
        let mut v = self.verts.clone();
        v.push(self.vertex(self.verts.len()));
        v
    }

    fn vertex(&self, i: usize) -> (Q, Q) {
        let k = self.verts.len();
        if i == k {
            (&self.verts[0].0 + int(1), &self.verts[0].1 + int(1))
        } else {
            self.verts[i].clone()
        }
    }

    fn slope(&self, i: usize) -> Q {
        let (a, b) = (self.vertex(i), self.vertex(i + 1));
        (b.1 - a.1) / (b.0 - a.0)
    }

    pub fn slopes(&self) -> Vec<Q> {
        (0..self.verts.len()).map(|i| self.slope(i)).collect()
    }

    pub fn is_rotation(&self) -> bool {
        self.verts.len() == 1
    }

    pub fn is_identity(&self) -> bool {
        self.is_rotation() && self.verts[0].1.is_zero()
    }

    /// The rotation amount in `[0, 1)` when the map is a rotation.
    pub fn rotation_amount(&self) -> Option<Q> {
        self.is_rotation().then(|| self.verts[0].1.clone())
    }

    pub fn breakpoints(&self) -> Vec<CirclePoint> {
        if self.is_rotation() {
            return Vec::new();
        }
        self.verts
            .iter()
            .map(|(x, _)| CirclePoint::new(x.clone()).expect("canonical x in [0,1)"))
            .collect()
    }

    pub fn num_breakpoints(&self) -> usize {
        if self.is_rotation() {
            0
        } else {
            self.verts.len()
        }
    }

    fn base(&self) -> &Q {
        &self.verts[0].0
    }

    /// Index of the piece `[x_i, x_{i+1})` containing `t` in `[x_0, x_0 + 1)`.
    fn piece_at(&self, t: &Q) -> usize {
        self.verts.partition_point(|(x, _)| x <= t) - 1
    }

    /// Splits `t = n + r` with `r` in `[x_0, x_0 + 1)`.
    fn fold(&self, t: &Q) -> (Q, Q) {
        let n = (t - self.base()).floor();
        let r = t - &n;
        (n, r)
    }

    /// The canonical lift evaluated at any rational.
    pub fn lift(&self, t: &Q) -> Q {
        let (n, r) = self.fold(t);
        let i = self.piece_at(&r);
        let (xi, yi) = &self.verts[i];
        yi + self.slope(i) * (&r - xi) + n
    }

    /// Inverse of the canonical lift.
    pub fn lift_inverse(&self, u: &Q) -> Q {
        let y0 = &self.verts[0].1;
        let n = (u - y0).floor();
        let r = u - &n;
        let i = self.verts.partition_point(|(_, y)| *y <= r) - 1;
        let (xi, yi) = &self.verts[i];
        xi + (&r - yi) / self.slope(i) + n
    }

    pub fn eval(&self, p: &CirclePoint) -> CirclePoint {
        reduce_mod1(&self.lift(p.value()))
    }

    pub fn eval_inverse(&self, p: &CirclePoint) -> CirclePoint {
        reduce_mod1(&self.lift_inverse(p.value()))
    }

    /// `(D^- h(p), D^+ h(p))`.
    pub fn left_right_slopes(&self, p: &CirclePoint) -> (Q, Q) {
        let k = self.verts.len();
        let (_, r) = self.fold(p.value());
        let i = self.piece_at(&r);
        let right = self.slope(i);
        let left = if r == self.verts[i].0 {
            self.slope((i + k - 1) % k)
        } else {
            right.clone()
        };
        (left, right)
    }

    /// `D^+ h(p) / D^- h(p)`; equals 1 off the breakpoints.
    pub fn jump_at(&self, p: &CirclePoint) -> Q {
        let (l, r) = self.left_right_slopes(p);
        r / l
    }

    /// `self ∘ h`.
    pub fn compose(&self, h: &PlHomeo) -> PlHomeo {
        let a = h.base().clone();
        let mut cuts: Vec<Q> = h.verts.iter().map(|(x, _)| x.clone()).collect();
        if !self.is_rotation() {
            let y0 = &h.verts[0].1;
            for (b, _) in &self.verts {
                let u = b + (y0 - b).ceil();
                cuts.push(h.lift_inverse(&u));
            }
        }
        cuts.sort();
        cuts.dedup();
        debug_assert!(cuts[0] >= a && cuts[cuts.len() - 1] < &a + int(1));
        let points = cuts
            .into_iter()
            .map(|t| {
                let y = self.lift(&h.lift(&t));
                (t, y)
            })
            .collect();
        Self::canonicalize(points)
    }

    pub fn inverse(&self) -> PlHomeo {
        let points = self
            .verts
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        Self::canonicalize(points)
    }

    /// `h^n` by sequential composition; negative `n` iterates the inverse.
    pub fn iterate(&self, n: i64) -> PlHomeo {
        let step = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = PlHomeo::identity();
        for _ in 0..n.unsigned_abs() {
            acc = step.compose(&acc);
        }
        acc
    }

    /// `phi ∘ self ∘ phi^{-1}`.
    pub fn conjugate_by(&self, phi: &PlHomeo) -> PlHomeo {
        phi.compose(&self.compose(&phi.inverse()))
    }

    /// Closed-form element of the exotic circle `S_A`: multiplication by
    /// `lambda` on `[1/(A-1), A/(A-1)]` with the ends glued by `x ~ A x`,
    /// translated so the glued end sits at 0.
    pub fn exotic_element(e: &ExoticParams) -> PlHomeo {
        let c = (&e.a - int(1)).recip();
        let knee = &c * (&e.a - &e.lambda) / &e.lambda;
        let v = vec![
            (int(0), (&e.lambda - int(1)) * &c),
            (knee, int(1)),
            (int(1), (&e.lambda - int(1)) * &c + int(1)),
        ];
        Self::from_lift_vertices(&v).expect("exotic construction is a homeomorphism")
    }

    /// Deterministic pseudo-random map with at most `k` breakpoints whose
    /// coordinates have denominators dividing `denom_bound`.
    pub fn random(seed: u64, k: usize, denom_bound: u64) -> PlHomeo {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = denom_bound.max(1);
        let grid = |n: u64| rational::q(n as i64, d as i64);
        if k < 2 || d < 2 {
            return PlHomeo::rotation(&grid(rng.gen_range(0..d)));
        }
        let k = k.min(d as usize);
        let mut xs: Vec<u64> = sample(&mut rng, d as usize, k)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        xs.sort_unstable();
        let y0 = rng.gen_range(0..d);
        let mut offs: Vec<u64> = sample(&mut rng, d as usize - 1, k - 1)
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect();
        offs.sort_unstable();
        let mut points = vec![(grid(xs[0]), grid(y0))];
        for (x, off) in xs[1..].iter().zip(&offs) {
            points.push((grid(*x), grid(y0 + off)));
        }
        Self::canonicalize(points)
    }
}

impl fmt::Display for PlHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.rotation_amount() {
            return write!(f, "rotation({})", rational::format(&a));
        }
        let parts: Vec<String> = self
            .lift_vertices()
            .iter()
            .map(|(x, y)| format!("({}, {})", rational::format(x), rational::format(y)))
            .collect();
        write!(f, "PL[{}]", parts.join(" "))
    }
}

/// Parameters of an exotic-circle element: modulus `A > 1` and
/// multiplier `1 < lambda < A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExoticParams {
    pub a: Q,
    pub lambda: Q,
}

impl ExoticParams {
    pub fn new(a: Q, lambda: Q) -> Result<Self, Error> {
        if a <= int(1) {
            return Err(Error::ExoticParams(format!(
                "A = {} must exceed 1",
                rational::format(&a)
            )));
        }
        if lambda <= int(1) || lambda >= a {
            return Err(Error::ExoticParams(format!(
                "lambda = {} must lie strictly between 1 and A = {}",
                rational::format(&lambda),
                rational::format(&a)
            )));
        }
        Ok(ExoticParams { a, lambda })
    }
}
