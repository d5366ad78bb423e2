//! The derivative-jump cocycle, the affine isometric action it defines on
//! finitely supported vectors, and the breakpoint-growth experiments.
//!
//! Cocycle values are kept multiplicatively: the additive coordinate at a
//! point is the log of the stored jump `D^+h / D^-h`, so exact identities
//! can be checked in rationals and logs only appear in norms.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Deref;

use num_traits::{One, Signed};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::circle::{Arc, CirclePoint};
use crate::error::Error;
use crate::homeo::PlHomeo;
use crate::rational::{self, int, Q};
use crate::rotation::{fixed_points, FixedComponent};

/// A finitely supported vector of `l2(S^1)` in multiplicative coordinates.
/// Entries equal to 1 (additive zero) are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteVector {
    entries: BTreeMap<CirclePoint, Q>,
}

impl FiniteVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (CirclePoint, Q)>,
    {
        let mut v = FiniteVector::new();
        for (p, val) in entries {
            if !val.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "vector entry at {p} must be positive, got {}",
                    rational::format(&val)
                )));
            }
            v.mul_at(p, &val);
        }
        Ok(v)
    }

    /// Multiplies the entry at `p` by `by`, pruning a resulting 1.
    pub fn mul_at(&mut self, p: CirclePoint, by: &Q) {
        if by.is_one() {
            return;
        }
        match self.entries.entry(p) {
            btree_map::Entry::Vacant(e) => {
                e.insert(by.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() *= by;
                if e.get().is_one() {
                    e.remove();
                }
            }
        }
    }

    /// Value at `p`; 1 off the support.
    pub fn get(&self, p: &CirclePoint) -> Q {
        self.entries.get(p).cloned().unwrap_or_else(|| int(1))
    }

    pub fn iter(&self) -> btree_map::Iter<'_, CirclePoint, Q> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &CirclePoint> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn product(&self) -> Q {
        self.entries.values().fold(int(1), |acc, v| acc * v)
    }

    /// Pointwise quotient `self / other`: the additive difference vector.
    pub fn quotient(&self, other: &FiniteVector) -> FiniteVector {
        let mut out = self.clone();
        for (p, v) in other.iter() {
            out.mul_at(p.clone(), &v.recip());
        }
        out
    }

    /// Squared l2 norm of the additive vector `(log v(x))_x`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.entries.values().map(|v| rational::ln(v).powi(2)).sum()
    }
}

impl FromIterator<(CirclePoint, Q)> for FiniteVector {
    fn from_iter<I: IntoIterator<Item = (CirclePoint, Q)>>(iter: I) -> Self {
        let mut v = FiniteVector::new();
        for (p, val) in iter {
            v.mul_at(p, &val);
        }
        v
    }
}

impl Serialize for FiniteVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.entries.len()))?;
        for (p, v) in &self.entries {
            m.serialize_entry(&p.to_string(), &rational::format(v))?;
        }
        m.end()
    }
}

pub fn l2_norm_sq(v: &FiniteVector) -> f64 {
    v.l2_norm_sq()
}

/// Jumps of a single map; support is exactly its breakpoint set and the
/// product of all values is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct JumpVector(FiniteVector);

impl JumpVector {
    pub fn into_vector(self) -> FiniteVector {
        self.0
    }
}

impl Deref for JumpVector {
    type Target = FiniteVector;

    fn deref(&self) -> &FiniteVector {
        &self.0
    }
}

pub fn jump_cocycle(h: &PlHomeo) -> JumpVector {
    JumpVector(
        h.breakpoints()
            .into_iter()
            .map(|b| {
                let j = h.jump_at(&b);
                (b, j)
            })
            .collect(),
    )
}

fn push_forward(h: &PlHomeo, inverse_jumps: &JumpVector, v: &FiniteVector) -> FiniteVector {
    let mut out: FiniteVector = v.iter().map(|(p, val)| (h.eval(p), val.clone())).collect();
    for (p, j) in inverse_jumps.iter() {
        out.mul_at(p.clone(), j);
    }
    out
}

/// The affine action: the new value at `x` is `v(h^{-1} x) * jump(h^{-1}, x)`.
pub fn affine_apply(h: &PlHomeo, v: &FiniteVector) -> FiniteVector {
    push_forward(h, &jump_cocycle(&h.inverse()), v)
}

/// Squared norms of `rho(f^n) 0` for `n = 1..=n_max`.
pub fn orbit_norm_seq(f: &PlHomeo, n_max: usize) -> Vec<f64> {
    orbit_vectors(f, n_max).map(|v| v.l2_norm_sq()).collect()
}

/// The orbit `rho(f) 0, rho(f^2) 0, ...` computed incrementally.
pub fn orbit_vectors(f: &PlHomeo, n_max: usize) -> impl Iterator<Item = FiniteVector> + '_ {
    let inv_jumps = jump_cocycle(&f.inverse());
    let mut cur = FiniteVector::new();
    (0..n_max).map(move |_| {
        cur = push_forward(f, &inv_jumps, &cur);
        cur.clone()
    })
}

/// `|BP(f^n)|` for `n = 1..=n_max`.
pub fn breakpoint_growth(f: &PlHomeo, n_max: usize) -> Vec<usize> {
    iterates(f, n_max).map(|g| g.num_breakpoints()).collect()
}

/// `f, f^2, ..., f^{n_max}` by sequential composition.
pub fn iterates(f: &PlHomeo, n_max: usize) -> impl Iterator<Item = PlHomeo> + '_ {
    let mut cur = PlHomeo::identity();
    (0..n_max).map(move |_| {
        cur = f.compose(&cur);
        cur.clone()
    })
}

/// Constants of the breakpoint-growth bound on one contracting component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthParams {
    pub component: Arc,
    /// The analysis was carried out on `f^{-1}` because `f` expands on
    /// the component.
    pub used_inverse: bool,
    #[serde(with = "rational::serde_q")]
    pub right_slope_at_start: Q,
    #[serde(with = "rational::serde_q")]
    pub left_slope_at_end: Q,
    pub c0: f64,
    pub c1: f64,
    #[serde(serialize_with = "serialize_q_list")]
    pub jump_value_superset: Vec<Q>,
    pub mu: f64,
    pub beta: f64,
}

fn serialize_q_list<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

impl GrowthParams {
    /// The lower bound `n (c1 - c0) / mu` on the breakpoint count of `f^n`.
    pub fn breakpoint_bound(&self, n: usize) -> f64 {
        n as f64 * (self.c1 - self.c0) / self.mu
    }
}

/// Subset products `{ prod_{c in E} jump(f, c) : E ⊆ BP(f) }`.
pub fn jump_value_superset(f: &PlHomeo) -> Vec<Q> {
    let mut set: BTreeSet<Q> = BTreeSet::from([int(1)]);
    for (_, j) in jump_cocycle(f).iter() {
        let more: Vec<Q> = set.iter().map(|s| s * j).collect();
        set.extend(more);
    }
    set.into_iter().collect()
}

pub fn growth_params(f: &PlHomeo) -> Result<GrowthParams, Error> {
    let fixed = fixed_points(f);
    if fixed.is_empty() {
        return Err(Error::NoFixedPoint);
    }
    if fixed.iter().any(|c| matches!(c, FixedComponent::Circle)) {
        return Err(Error::IdentityMap);
    }
    let n = fixed.len();
    let component = Arc::new(fixed[0].end().clone(), fixed[1 % n].start().clone());

    let y = component.midpoint();
    let moved = f.eval(&y);
    let contracting =
        component.start.forward_distance(&moved) < component.start.forward_distance(&y);
    let g = if contracting { f.clone() } else { f.inverse() };

    let right_slope_at_start = g.left_right_slopes(&component.start).1;
    let left_slope_at_end = g.left_right_slopes(&component.end).0;
    let superset = jump_value_superset(&g);
    let logs: Vec<f64> = superset
        .iter()
        .filter(|s| !s.is_one())
        .map(|s| rational::ln(s).abs())
        .collect();
    if logs.is_empty() {
        return Err(Error::IdentityMap);
    }
    let mu = logs.iter().cloned().fold(f64::MIN, f64::max);
    let beta = logs.iter().cloned().fold(f64::MAX, f64::min);
    Ok(GrowthParams {
        component,
        used_inverse: !contracting,
        c0: rational::ln(&right_slope_at_start),
        c1: rational::ln(&left_slope_at_end),
        right_slope_at_start,
        left_slope_at_end,
        jump_value_superset: superset,
        mu,
        beta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub breakpoints: usize,
    pub norm_sq: f64,
    pub bound: Option<f64>,
}

/// Joint breakpoint-growth and orbit-norm run over `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthExperiment {
    pub params: Option<GrowthParams>,
    pub rows: Vec<GrowthRow>,
}

impl GrowthExperiment {
    pub fn run(f: &PlHomeo, n_max: usize) -> Self {
        let params = growth_params(f).ok();
        let rows = iterates(f, n_max)
            .zip(orbit_vectors(f, n_max))
            .enumerate()
            .map(|(i, (g, v))| GrowthRow {
                n: i + 1,
                breakpoints: g.num_breakpoints(),
                norm_sq: v.l2_norm_sq(),
                bound: params.as_ref().map(|p| p.breakpoint_bound(i + 1)),
            })
            .collect();
        GrowthExperiment { params, rows }
    }

    /// First line: JSON object with the growth parameters (or `null`);
    /// then a CSV table `n,M_n,norm_sq,bound`.
    pub fn to_csv(&self) -> String {
        let mut out = serde_json::to_string(&serde_json::json!({ "growth_params": self.params }))
            .expect("serializable");
        out.push('\n');
        out.push_str("n,M_n,norm_sq,bound\n");
        for r in &self.rows {
            let bound = r.bound.map(|b| format!("{b:.12e}")).unwrap_or_default();
            writeln!(
                out,
                "{},{},{:.12e},{}",
                r.n, r.breakpoints, r.norm_sq, bound
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::ExoticParams;
    use crate::rational::q;
    use proptest::prelude::*;

    fn pt(n: i64, d: i64) -> CirclePoint {
        CirclePoint::new(q(n, d)).unwrap()
    }

    fn standard() -> PlHomeo {
        PlHomeo::from_lift_vertices(&[(q(0, 1), q(0, 1)), (q(1, 2), q(1, 4)), (q(1, 1), q(1, 1))])
            .unwrap()
    }

    #[test]
    fn jumps_of_standard_map() {
        assert!(jump_cocycle(&PlHomeo::rotation(&q(2, 9))).is_empty());
        let j = jump_cocycle(&standard());
        let expected: FiniteVector = [(pt(0, 1), q(1, 3)), (pt(1, 2), int(3))]
            .into_iter()
            .collect();
        assert_eq!(*j, expected);
        assert_eq!(j.product(), int(1));
    }

    #[test]
    fn inverse_jump_identity() {
        let h = standard();
        let ji = jump_cocycle(&h.inverse());
        let j = jump_cocycle(&h);
        for i in 0..64 {
            let x = pt(i, 64);
            assert_eq!(ji.get(&x), j.get(&h.eval_inverse(&x)).recip());
        }
        for b in h.inverse().breakpoints() {
            assert_eq!(ji.get(&b), j.get(&h.eval_inverse(&b)).recip());
        }
    }

    #[test]
    fn affine_examples() {
        let h = standard();
        let v: FiniteVector = [(pt(1, 3), q(5, 7)), (pt(1, 2), int(2))]
            .into_iter()
            .collect();
        assert_eq!(affine_apply(&PlHomeo::identity(), &v), v);
        assert_eq!(
            affine_apply(&h, &FiniteVector::new()),
            jump_cocycle(&h.inverse()).into_vector()
        );
    }

    #[test]
    fn norms() {
        assert_eq!(l2_norm_sq(&FiniteVector::new()), 0.0);
        let v: FiniteVector = [(pt(1, 7), int(2))].into_iter().collect();
        assert!((l2_norm_sq(&v) - 0.480_453_013_918_201_4).abs() < 1e-12);
        let a: FiniteVector = [(pt(1, 7), int(2)), (pt(2, 7), q(1, 5))]
            .into_iter()
            .collect();
        let b: FiniteVector = [(pt(3, 7), int(2)), (pt(5, 7), q(1, 5))]
            .into_iter()
            .collect();
        assert!((l2_norm_sq(&a) - l2_norm_sq(&b)).abs() < 1e-15);
    }

    #[test]
    fn rotation_orbits_are_trivial() {
        let r = PlHomeo::rotation(&q(3, 11));
        assert!(orbit_norm_seq(&r, 10).iter().all(|&x| x == 0.0));
        assert!(breakpoint_growth(&r, 10).iter().all(|&m| m == 0));
    }

    #[test]
    fn growth_params_of_standard_map() {
        let p = growth_params(&standard()).unwrap();
        assert_eq!(p.component, Arc::new(pt(0, 1), pt(0, 1)));
        assert!(!p.used_inverse);
        assert_eq!(p.right_slope_at_start, q(1, 2));
        assert_eq!(p.left_slope_at_end, q(3, 2));
        assert!((p.c0 - 0.5f64.ln()).abs() < 1e-15);
        assert!((p.c1 - 1.5f64.ln()).abs() < 1e-15);
        assert_eq!(p.jump_value_superset, vec![q(1, 3), int(1), int(3)]);
        assert!((p.mu - 3f64.ln()).abs() < 1e-15);
        assert!((p.beta - 3f64.ln()).abs() < 1e-15);
        assert!(matches!(
            growth_params(&PlHomeo::rotation(&q(1, 3))),
            Err(Error::NoFixedPoint)
        ));
        assert!(matches!(
            growth_params(&PlHomeo::identity()),
            Err(Error::IdentityMap)
        ));
    }

    #[test]
    fn expanding_maps_use_the_inverse() {
        let p = growth_params(&standard().inverse()).unwrap();
        assert!(p.used_inverse);
        assert_eq!(p.right_slope_at_start, q(1, 2));
    }

    #[test]
    fn standard_growth_closed_form() {
        // BP(f^n) = {0} ∪ f^{-k}(1/2), k < n; the jump at 0 is 3^{-n}.
        let f = standard();
        let m = breakpoint_growth(&f, 30);
        for (i, &mn) in m.iter().enumerate() {
            assert_eq!(mn, i + 2);
        }
        let ln3 = 3f64.ln();
        for (i, x) in orbit_norm_seq(&f, 30).iter().enumerate() {
            let n = (i + 1) as f64;
            let expected = (n * n + n) * ln3 * ln3;
            assert!((x - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn exotic_growth_is_bounded() {
        let g = PlHomeo::exotic_element(&ExoticParams::new(int(4), int(2)).unwrap());
        assert!(breakpoint_growth(&g, 100).iter().all(|&m| m <= 2));
        let norms = orbit_norm_seq(&g, 100);
        let max = norms.iter().cloned().fold(0.0, f64::max);
        assert!(max <= 2.0 * 4f64.ln().powi(2) + 1e-9);
    }

    #[test]
    fn csv_layout() {
        let e = GrowthExperiment::run(&standard(), 3);
        let csv = e.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("{\"growth_params\":{"));
        assert_eq!(lines[1], "n,M_n,norm_sq,bound");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("1,2,"));
        let rot = GrowthExperiment::run(&PlHomeo::rotation(&q(1, 2)), 2).to_csv();
        assert!(rot.starts_with("{\"growth_params\":null}"));
        assert!(rot.lines().nth(2).unwrap().ends_with(','));
    }

    fn arb_map(max_k: usize) -> impl Strategy<Value = PlHomeo> {
        (any::<u64>(), 0..=max_k).prop_map(|(s, k)| PlHomeo::random(s, k, 32))
    }

    fn arb_vector() -> impl Strategy<Value = FiniteVector> {
        prop::collection::vec((0i64..32, 1i64..6, 1i64..6), 0..5).prop_map(|v| {
            v.into_iter()
                .map(|(x, n, d)| (pt(x, 32), q(n, d)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn chain_rule(g in arb_map(5), h in arb_map(5), i in 0i64..128) {
            let x = pt(i, 128);
            let gh = jump_cocycle(&g.compose(&h));
            let (jg, jh) = (jump_cocycle(&g), jump_cocycle(&h));
            prop_assert_eq!(gh.get(&x), jg.get(&h.eval(&x)) * jh.get(&x));
            for b in h.breakpoints() {
                prop_assert_eq!(gh.get(&b), jg.get(&h.eval(&b)) * jh.get(&b));
            }
        }

        #[test]
        fn product_one(h in arb_map(8)) {
            prop_assert_eq!(jump_cocycle(&h).product(), int(1));
        }

        #[test]
        fn homomorphism_and_isometry(g in arb_map(4), h in arb_map(4), u in arb_vector(), v in arb_vector()) {
            let lhs = affine_apply(&g, &affine_apply(&h, &v));
            prop_assert_eq!(lhs, affine_apply(&g.compose(&h), &v));
            let before = u.quotient(&v).l2_norm_sq();
            let after = affine_apply(&h, &u).quotient(&affine_apply(&h, &v)).l2_norm_sq();
            prop_assert!((after - before).abs() <= 1e-9 * (1.0 + before));
        }
    }
}
