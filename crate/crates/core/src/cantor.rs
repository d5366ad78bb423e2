//! Countable compact subsets of the circle encoded as finite trees, and
//! their Cantor-Bendixson derivatives and (finite) ranks.
//!
//! A `limit` node stands for its apex together with infinitely many scaled
//! copies of its child set accumulating at the apex. Child sets live in a
//! template coordinate in `[0, 1)`; copy `n >= 1` is the affine image of the
//! template onto `[r^{n+1}, r^n)` measured from the apex, on the side given
//! by `direction`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circle::{reduce_mod1, CirclePoint};
use crate::error::Error;
use crate::rational::{self, int, Q};

/// Depth at which `validate` realizes a set to check disjointness.
pub const VALIDATION_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limit {
    pub apex: CirclePoint,
    pub child: SymbolicSet,
    pub direction: Direction,
    #[serde(with = "rational::serde_q")]
    pub ratio: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf(CirclePoint),
    Limit(Box<Limit>),
}

impl Node {
    pub fn leaf(p: CirclePoint) -> Self {
        Node::Leaf(p)
    }

    pub fn limit(apex: CirclePoint, child: SymbolicSet, direction: Direction, ratio: Q) -> Self {
        Node::Limit(Box::new(Limit {
            apex,
            child,
            direction,
            ratio,
        }))
    }

    fn anchor(&self) -> &CirclePoint {
        match self {
            Node::Leaf(p) => p,
            Node::Limit(l) => &l.apex,
        }
    }

    /// Rank of the closed set this node realizes.
    pub fn rank(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Limit(l) => 1 + l.child.structural_rank(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicSet {
    pub clusters: Vec<Node>,
}

impl SymbolicSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(clusters: Vec<Node>) -> Result<Self, Error> {
        let s = SymbolicSet { clusters };
        s.validate()?;
        Ok(s)
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Whether the realized set is finite (no limit nodes).
    pub fn is_finite(&self) -> bool {
        self.clusters.iter().all(|c| matches!(c, Node::Leaf(_)))
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.validate_nodes("clusters")?;
        let pts = self.realize(VALIDATION_DEPTH);
        let distinct: BTreeSet<&Q> = pts.iter().collect();
        if distinct.len() != pts.len() {
            return Err(Error::InvalidSymbolicSet(format!(
                "realized points coincide at depth {VALIDATION_DEPTH}"
            )));
        }
        Ok(())
    }

    fn validate_nodes(&self, path: &str) -> Result<(), Error> {
        for (i, node) in self.clusters.iter().enumerate() {
            let here = format!("{path}[{i}]");
            if let Node::Limit(l) = node {
                if l.ratio <= int(0) || l.ratio >= int(1) {
                    return Err(Error::InvalidSymbolicSet(format!(
                        "{here}: ratio {} must lie in (0, 1)",
                        rational::format(&l.ratio)
                    )));
                }
                if l.child.is_empty() {
                    return Err(Error::InvalidSymbolicSet(format!(
                        "{here}: limit node needs a nonempty child set"
                    )));
                }
                let tpl = l.child.realize_template(VALIDATION_DEPTH);
                let distinct: BTreeSet<&Q> = tpl.iter().collect();
                if distinct.len() != tpl.len() {
                    return Err(Error::InvalidSymbolicSet(format!(
                        "{here}: child points coincide at depth {VALIDATION_DEPTH}"
                    )));
                }
                if tpl.iter().any(|t| *t < int(0) || *t >= int(1)) {
                    return Err(Error::InvalidSymbolicSet(format!(
                        "{here}: child set leaves the template interval [0, 1)"
                    )));
                }
                l.child.validate_nodes(&format!("{here}.child"))?;
            }
        }
        Ok(())
    }

    /// Template coordinates (not reduced mod 1), copies `1..=depth` of
    /// every limit node.
    pub fn realize_template(&self, depth: usize) -> Vec<Q> {
        let mut out = Vec::new();
        for node in &self.clusters {
            match node {
                Node::Leaf(p) => out.push(p.value().clone()),
                Node::Limit(l) => {
                    let apex = l.apex.value();
                    out.push(apex.clone());
                    let child = l.child.realize_template(depth);
                    let mut hi = l.ratio.clone();
                    for _ in 1..=depth {
                        let lo = &hi * &l.ratio;
                        let width = &hi - &lo;
                        for t in &child {
                            let offset = &lo + t * &width;
                            out.push(match l.direction {
                                Direction::Right => apex + offset,
                                Direction::Left => apex - offset,
                            });
                        }
                        hi = lo;
                    }
                }
            }
        }
        out
    }

    /// Points on the circle, copies `1..=depth` of every limit node,
    /// sorted.
    pub fn realize(&self, depth: usize) -> Vec<Q> {
        let mut pts: Vec<Q> = self
            .realize_template(depth)
            .iter()
            .map(|t| reduce_mod1(t).into_value())
            .collect();
        pts.sort();
        pts
    }

    /// Sorted points of the set when it is finite.
    pub fn finite_points(&self) -> Option<Vec<CirclePoint>> {
        if !self.is_finite() {
            return None;
        }
        let mut pts: Vec<CirclePoint> = self.clusters.iter().map(|c| c.anchor().clone()).collect();
        pts.sort();
        Some(pts)
    }

    /// `1 + max` child rank over limit nodes, 1 for leaves, 0 when empty.
    pub fn structural_rank(&self) -> usize {
        self.clusters.iter().map(Node::rank).max().unwrap_or(0)
    }
}

/// The set of accumulation points.
pub fn cb_derivative(s: &SymbolicSet) -> SymbolicSet {
    let clusters = s
        .clusters
        .iter()
        .filter_map(|node| match node {
            Node::Leaf(_) => None,
            Node::Limit(l) => {
                let child = cb_derivative(&l.child);
                Some(if child.is_empty() {
                    Node::Leaf(l.apex.clone())
                } else {
                    Node::limit(l.apex.clone(), child, l.direction, l.ratio.clone())
                })
            }
        })
        .collect();
    SymbolicSet { clusters }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CbRank {
    pub rank: usize,
    /// Cardinality of the last nonempty derivative (always finite); 0 for
    /// the empty set.
    pub top_finite_set_size: usize,
}

/// Iterates [`cb_derivative`] until the set is empty.
pub fn cb_rank(s: &SymbolicSet) -> CbRank {
    let chain = derivative_chain(s);
    CbRank {
        rank: chain.len(),
        top_finite_set_size: chain.last().map_or(0, |c| c.clusters.len()),
    }
}

/// `C, C', C'', ...` up to the last nonempty derivative.
pub fn derivative_chain(s: &SymbolicSet) -> Vec<SymbolicSet> {
    let mut chain = Vec::new();
    let mut cur = s.clone();
    while !cur.is_empty() {
        let next = cb_derivative(&cur);
        chain.push(cur);
        cur = next;
    }
    chain
}

/// The `k`-fold nested limit at `apex`: rank `k + 1`.
pub fn nested_limit(apex: CirclePoint, k: usize, ratio: Q) -> SymbolicSet {
    let mut child = SymbolicSet {
        clusters: vec![Node::Leaf(CirclePoint::new(rational::q(1, 2)).unwrap())],
    };
    for _ in 1..k {
        child = SymbolicSet {
            clusters: vec![Node::limit(
                CirclePoint::new(rational::q(1, 4)).unwrap(),
                child,
                Direction::Right,
                ratio.clone(),
            )],
        };
    }
    if k == 0 {
        return SymbolicSet {
            clusters: vec![Node::Leaf(apex)],
        };
    }
    SymbolicSet {
        clusters: vec![Node::limit(apex, child, Direction::Right, ratio)],
    }
}
