//! Points and arcs of the circle `R/Z`, all in exact rationals.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::{self, Q};

/// A point of `R/Z`, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Q);

impl CirclePoint {
    pub fn zero() -> Self {
        CirclePoint(rational::int(0))
    }

    /// Checked constructor; the value must already lie in `[0, 1)`.
    pub fn new(value: Q) -> Result<Self, Error> {
        if value < rational::int(0) || value >= rational::int(1) {
            return Err(Error::PointOutOfRange(rational::format(&value)));
        }
        Ok(CirclePoint(value))
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn into_value(self) -> Q {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.0)
    }

    /// Positive displacement from `self` to `other`, in `[0, 1)`.
    pub fn forward_distance(&self, other: &CirclePoint) -> Q {
        rational::frac(&(&other.0 - &self.0))
    }

    pub fn translate(&self, by: &Q) -> CirclePoint {
        reduce_mod1(&(&self.0 + by))
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format(&self.0))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let v = rational::parse(&s).map_err(serde::de::Error::custom)?;
        CirclePoint::new(v).map_err(serde::de::Error::custom)
    }
}

pub fn reduce_mod1(x: &Q) -> CirclePoint {
    CirclePoint(rational::frac(x))
}

/// Positively oriented open arc. `start == end` denotes the circle with
/// that single point removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub start: CirclePoint,
    pub end: CirclePoint,
}

impl Arc {
    pub fn new(start: CirclePoint, end: CirclePoint) -> Self {
        Arc { start, end }
    }

    /// Length in `(0, 1]`.
    pub fn length(&self) -> Q {
        let d = self.start.forward_distance(&self.end);
        if d == rational::int(0) {
            rational::int(1)
        } else {
            d
        }
    }

    pub fn contains(&self, p: &CirclePoint) -> bool {
        if *p == self.start {
            return false;
        }
        self.start.forward_distance(p) < self.length()
    }

    pub fn midpoint(&self) -> CirclePoint {
        self.start.translate(&(self.length() / rational::int(2)))
    }
}

pub fn arc_contains(a: &Arc, p: &CirclePoint) -> bool {
    a.contains(p)
}

/// Whether `b` lies on the open positively oriented arc from `a` to `c`.
pub fn cyclic_between(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> Result<bool, Error> {
    if a == b || b == c || a == c {
        return Err(Error::CoincidentPoints);
    }
    Ok(a.forward_distance(b) < a.forward_distance(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    fn pt(n: i64, d: i64) -> CirclePoint {
        CirclePoint::new(q(n, d)).unwrap()
    }

    #[test]
    fn reduce() {
        assert_eq!(reduce_mod1(&q(5, 3)), pt(2, 3));
        assert_eq!(reduce_mod1(&q(-1, 4)), pt(3, 4));
        assert_eq!(reduce_mod1(&int(0)), CirclePoint::zero());
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(CirclePoint::new(int(1)).is_err());
        assert!(CirclePoint::new(q(-1, 5)).is_err());
    }

    #[test]
    fn arcs() {
        assert!(arc_contains(&Arc::new(pt(0, 1), pt(1, 2)), &pt(1, 4)));
        assert!(arc_contains(&Arc::new(pt(3, 4), pt(1, 4)), &pt(0, 1)));
        assert!(!arc_contains(&Arc::new(pt(0, 1), pt(1, 2)), &pt(1, 2)));
        assert!(!arc_contains(&Arc::new(pt(0, 1), pt(1, 2)), &pt(0, 1)));
        let punctured = Arc::new(pt(1, 3), pt(1, 3));
        assert_eq!(punctured.length(), int(1));
        assert!(punctured.contains(&pt(0, 1)));
        assert!(!punctured.contains(&pt(1, 3)));
    }

    #[test]
    fn between() {
        assert!(cyclic_between(&pt(0, 1), &pt(1, 4), &pt(1, 2)).unwrap());
        assert!(cyclic_between(&pt(1, 2), &pt(3, 4), &pt(0, 1)).unwrap());
        assert!(!cyclic_between(&pt(0, 1), &pt(1, 2), &pt(1, 4)).unwrap());
        assert!(cyclic_between(&pt(0, 1), &pt(0, 1), &pt(1, 4)).is_err());
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn reduce_is_periodic(x in arb_q(), n in -50i64..50) {
            prop_assert_eq!(reduce_mod1(&(&x + int(n))), reduce_mod1(&x));
        }

        #[test]
        fn between_is_exclusive(a in arb_q(), b in arb_q(), c in arb_q()) {
            let (a, b, c) = (reduce_mod1(&a), reduce_mod1(&b), reduce_mod1(&c));
            prop_assume!(a != b && b != c && a != c);
            let x = cyclic_between(&a, &b, &c).unwrap();
            let y = cyclic_between(&a, &c, &b).unwrap();
            prop_assert!(x ^ y);
        }
    }
}
