//! Smoothing a finitely generated group of PL homeomorphisms into the
//! rotations.
//!
//! A germ at a point modulo regular (affine) germs is determined by its
//! derivative jump, so the coset data attached to a point is a single
//! positive rational. Conjugating every generator `g` into a rotation by a
//! PL map `phi` amounts to finding values `a_y = jump(phi, y)` with
//!
//! ```text
//! a_y = jump(g, y) * a_{g(y)}
//! ```
//!
//! for every generator (and inverse) and every point `y` of the orbit of
//! the generators' breakpoints. The orbit graph carries one edge per such
//! equation; the solver propagates values along a spanning forest, checks
//! every remaining edge, and fixes one free scale per component so that the
//! values multiply to 1 (a condition every PL circle map satisfies).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;
use serde::Serialize;

use crate::circle::CirclePoint;
use crate::cocycle::FiniteVector;
use crate::error::Error;
use crate::homeo::PlHomeo;
use crate::rational::{self, int, Q};
use crate::rotation::fixed_points;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<(String, PlHomeo)>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<(String, PlHomeo)>) -> Result<Self, Error> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "presentation has no generators".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for (name, _) in &generators {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator name {name:?}"
                )));
            }
        }
        Ok(GroupPresentation { generators })
    }

    pub fn generators(&self) -> &[(String, PlHomeo)] {
        &self.generators
    }

    /// Generators followed by their inverses, with labels `g` and `g^-1`.
    fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for (i, (name, g)) in self.generators.iter().enumerate() {
            out.push(Letter {
                generator: i,
                inverse: false,
                label: name.clone(),
                map: g.clone(),
            });
            out.push(Letter {
                generator: i,
                inverse: true,
                label: format!("{name}^-1"),
                map: g.inverse(),
            });
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Letter {
    generator: usize,
    inverse: bool,
    label: String,
    map: PlHomeo,
}

/// `|BP(g)| + |BP(g^{-1})|`: the size of `g(A) △ A` for the trivial section.
pub fn commensuration_defect(g: &PlHomeo) -> usize {
    g.num_breakpoints() + g.inverse().num_breakpoints()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub source: CirclePoint,
    /// Generator name, suffixed `^-1` for an inverse.
    pub letter: String,
    pub target: CirclePoint,
    #[serde(with = "rational::serde_q")]
    pub weight: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct EdgeRef {
    source: usize,
    target: usize,
    letter: usize,
}

#[derive(Debug, Clone)]
pub struct OrbitGraph {
    vertices: Vec<CirclePoint>,
    index: BTreeMap<CirclePoint, usize>,
    letters: Vec<Letter>,
    // out-edges per vertex, one per letter whose target is present
    adjacency: Vec<Vec<(EdgeRef, Q)>>,
    seed: Vec<CirclePoint>,
    escaping: Vec<CirclePoint>,
}

impl OrbitGraph {
    pub fn vertices(&self) -> &[CirclePoint] {
        &self.vertices
    }

    pub fn seed(&self) -> &[CirclePoint] {
        &self.seed
    }

    pub fn is_closed(&self) -> bool {
        self.escaping.is_empty()
    }

    /// Images that would have exceeded the vertex budget.
    pub fn escaping(&self) -> &[CirclePoint] {
        &self.escaping
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.adjacency
            .iter()
            .flatten()
            .map(|(e, w)| self.edge(e, w))
            .collect()
    }

    fn edge(&self, e: &EdgeRef, w: &Q) -> Edge {
        Edge {
            source: self.vertices[e.source].clone(),
            letter: self.letters[e.letter].label.clone(),
            target: self.vertices[e.target].clone(),
            weight: w.clone(),
        }
    }

    fn inverse_letter(&self, l: usize) -> usize {
        let letter = &self.letters[l];
        self.letters
            .iter()
            .position(|m| m.generator == letter.generator && m.inverse != letter.inverse)
            .expect("letters come in pairs")
    }
}

/// Breadth-first closure of the generators' breakpoints under the
/// generators and their inverses, stopping at `max_vertices`.
pub fn build_orbit_graph(g: &GroupPresentation, max_vertices: usize) -> Result<OrbitGraph, Error> {
    let letters = g.letters();
    let seed: Vec<CirclePoint> = g
        .generators
        .iter()
        .flat_map(|(_, h)| h.breakpoints())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if seed.len() > max_vertices {
        return Err(Error::InvalidArgument(format!(
            "vertex budget {max_vertices} is smaller than the seed ({} points)",
            seed.len()
        )));
    }
    let mut graph = OrbitGraph {
        vertices: Vec::new(),
        index: BTreeMap::new(),
        letters,
        adjacency: Vec::new(),
        seed: seed.clone(),
        escaping: Vec::new(),
    };
    let mut escaping = BTreeSet::new();
    let mut queue = VecDeque::new();
    for p in seed {
        graph.index.insert(p.clone(), graph.vertices.len());
        queue.push_back(graph.vertices.len());
        graph.vertices.push(p);
        graph.adjacency.push(Vec::new());
    }
    while let Some(v) = queue.pop_front() {
        let p = graph.vertices[v].clone();
        for (l, letter) in graph.letters.iter().enumerate() {
            let image = letter.map.eval(&p);
            let weight = letter.map.jump_at(&p);
            let target = match graph.index.get(&image) {
                Some(&t) => t,
                None if graph.vertices.len() < max_vertices => {
                    let t = graph.vertices.len();
                    graph.index.insert(image.clone(), t);
                    graph.vertices.push(image);
                    graph.adjacency.push(Vec::new());
                    queue.push_back(t);
                    t
                }
                None => {
                    escaping.insert(image);
                    continue;
                }
            };
            graph.adjacency[v].push((
                EdgeRef {
                    source: v,
                    target,
                    letter: l,
                },
                weight,
            ));
        }
    }
    graph.escaping = escaping.into_iter().collect();
    Ok(graph)
}

/// Finitely supported positive values `a_y`, never equal to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct JumpAssignment(FiniteVector);

impl JumpAssignment {
    pub fn new(values: FiniteVector) -> Self {
        JumpAssignment(values)
    }

    pub fn values(&self) -> &FiniteVector {
        &self.0
    }

    pub fn get(&self, p: &CirclePoint) -> Q {
        self.0.get(p)
    }
}

/// A closed walk in the orbit graph whose weights do not multiply to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub cycle: Vec<Edge>,
    #[serde(with = "rational::serde_q")]
    pub expected: Q,
    #[serde(with = "rational::serde_q")]
    pub found: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoboundarySolution {
    Solved {
        assignment: JumpAssignment,
    },
    Obstruction(Obstruction),
    /// Every edge equation is solvable, but no choice of per-component
    /// scales makes the values multiply to 1 over the rationals.
    Infeasible {
        component_sizes: Vec<usize>,
        #[serde(with = "rational::serde_q")]
        product: Q,
    },
}

struct Propagation {
    value: Vec<Q>,
    parent: Vec<Option<EdgeRef>>,
    component: Vec<usize>,
    sizes: Vec<usize>,
}

/// Spanning-forest propagation with root value 1 in every component.
fn propagate(graph: &OrbitGraph) -> Propagation {
    let n = graph.vertices.len();
    let mut value: Vec<Option<Q>> = vec![None; n];
    let mut parent: Vec<Option<EdgeRef>> = vec![None; n];
    let mut component: Vec<usize> = vec![0; n];
    let mut sizes = Vec::new();
    for root in 0..n {
        if value[root].is_some() {
            continue;
        }
        let c = sizes.len();
        let mut size = 1;
        value[root] = Some(int(1));
        component[root] = c;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (e, w) in &graph.adjacency[v] {
                if value[e.target].is_none() {
                    let tv = value[v].as_ref().unwrap() / w;
                    value[e.target] = Some(tv);
                    parent[e.target] = Some(*e);
                    component[e.target] = c;
                    size += 1;
                    queue.push_back(e.target);
                }
            }
        }
        sizes.push(size);
    }
    Propagation {
        value: value.into_iter().map(|v| v.unwrap()).collect(),
        parent,
        component,
        sizes,
    }
}

fn first_obstruction(graph: &OrbitGraph, prop: &Propagation) -> Option<Obstruction> {
    for edges in &graph.adjacency {
        for (e, w) in edges {
            if prop.value[e.source] != w * &prop.value[e.target] {
                return Some(obstruction_cycle(graph, &prop.parent, e, w));
            }
        }
    }
    None
}

/// An inconsistent cycle among the explored vertices, if any. Valid on
/// truncated graphs too: every edge present is a genuine constraint.
pub fn find_obstruction(graph: &OrbitGraph) -> Option<Obstruction> {
    first_obstruction(graph, &propagate(graph))
}

/// Solves `a_y = w * a_{target}` on every edge of a closed orbit graph.
pub fn solve_coboundary(graph: &OrbitGraph) -> Result<CoboundarySolution, Error> {
    if !graph.is_closed() {
        return Err(Error::TruncatedGraph);
    }
    let prop = propagate(graph);
    if let Some(o) = first_obstruction(graph, &prop) {
        return Ok(CoboundarySolution::Obstruction(o));
    }
    Ok(normalize(graph, prop))
}

/// Picks one scale per component so the values multiply to 1. Scaling a
/// component of size `n` by `t` multiplies the product by `t^n`, so this is
/// solvable over the rationals iff the product's inverse is a `d`-th power,
/// `d` the gcd of the component sizes.
fn normalize(graph: &OrbitGraph, prop: Propagation) -> CoboundarySolution {
    let Propagation {
        value,
        component,
        sizes,
        ..
    } = prop;
    let product = value.iter().fold(int(1), |acc, v| acc * v);
    let mut scales = vec![int(1); sizes.len()];
    if !product.is_one() {
        let (d, coeffs) = bezout(&sizes);
        match rational::exact_root(&product.recip(), d as u32) {
            Some(r) => {
                for (s, k) in scales.iter_mut().zip(coeffs) {
                    *s = rational::pow(&r, k);
                }
            }
            None => {
                return CoboundarySolution::Infeasible {
                    component_sizes: sizes,
                    product,
                }
            }
        }
    }
    let assignment: FiniteVector = value
        .into_iter()
        .enumerate()
        .map(|(v, a)| (graph.vertices[v].clone(), a * &scales[component[v]]))
        .collect();
    debug_assert!(assignment.product().is_one());
    CoboundarySolution::Solved {
        assignment: JumpAssignment(assignment),
    }
}

/// `gcd(sizes)` with integer coefficients realizing it.
fn bezout(sizes: &[usize]) -> (i64, Vec<i64>) {
    let mut g = sizes[0] as i64;
    let mut coeffs = vec![1i64];
    for &s in &sizes[1..] {
        let (g2, a, b) = rational::ext_gcd(g, s as i64);
        for c in coeffs.iter_mut() {
            *c *= a;
        }
        coeffs.push(b);
        g = g2;
    }
    (g, coeffs)
}

/// Closed walk `target -> root -> source -> target` through the spanning
/// forest and the inconsistent edge.
fn obstruction_cycle(
    graph: &OrbitGraph,
    parent: &[Option<EdgeRef>],
    bad: &EdgeRef,
    bad_weight: &Q,
) -> Obstruction {
    let weight_of = |e: &EdgeRef| -> Q {
        graph.adjacency[e.source]
            .iter()
            .find(|(f, _)| f == e)
            .map(|(_, w)| w.clone())
            .expect("edge present")
    };
    let mut cycle = Vec::new();
    // upward: reverse each tree edge via the inverse letter
    let mut v = bad.target;
    while let Some(pe) = parent[v] {
        let inv = graph.inverse_letter(pe.letter);
        let up = graph.adjacency[v]
            .iter()
            .find(|(f, _)| f.letter == inv && f.target == pe.source)
            .map(|(f, _)| *f)
            .expect("inverse edge present in a closed graph");
        cycle.push(up);
        v = pe.source;
    }
    let mut down = Vec::new();
    let mut v = bad.source;
    while let Some(pe) = parent[v] {
        down.push(pe);
        v = pe.source;
    }
    down.reverse();
    cycle.extend(down);
    cycle.push(*bad);
    let mut found = int(1);
    let edges: Vec<Edge> = cycle
        .iter()
        .map(|e| {
            let w = if e == bad {
                bad_weight.clone()
            } else {
                weight_of(e)
            };
            found *= &w;
            graph.edge(e, &w)
        })
        .collect();
    Obstruction {
        cycle: edges,
        expected: int(1),
        found,
    }
}

/// The PL map whose jumps are exactly `a`, fixing the smallest support
/// point.
pub fn synthesize_conjugator(a: &JumpAssignment) -> Result<PlHomeo, Error> {
    let product = a.0.product();
    if !product.is_one() {
        return Err(Error::ProductNotOne(rational::format(&product)));
    }
    if a.0.is_empty() {
        return Ok(PlHomeo::identity());
    }
    let support: Vec<(Q, Q)> =
        a.0.iter()
            .map(|(p, j)| (p.value().clone(), j.clone()))
            .collect();
    let m = support.len();
    let base = support[0].0.clone();
    let length = |i: usize| -> Q {
        let next = if i + 1 == m {
            &base + int(1)
        } else {
            support[i + 1].0.clone()
        };
        next - &support[i].0
    };
    let mut relative = Vec::with_capacity(m);
    let mut s = int(1);
    for (i, (_, j)) in support.iter().enumerate() {
        if i > 0 {
            s *= j;
        }
        relative.push(s.clone());
    }
    let rise: Q = (0..m).map(|i| &relative[i] * length(i)).sum();
    let scale = rise.recip();
    let mut vertices = Vec::with_capacity(m + 1);
    let mut y = base.clone();
    for (i, (x, _)) in support.iter().enumerate() {
        vertices.push((x.clone(), y.clone()));
        y += &scale * &relative[i] * length(i);
    }
    vertices.push((&base + int(1), &base + int(1)));
    Ok(PlHomeo::from_lift_vertices(&vertices)?)
}

/// A common finite orbit of size at most `max_period`, searched among
/// periodic points of each generator.
pub fn detect_finite_orbit(g: &GroupPresentation, max_period: usize) -> Option<Vec<CirclePoint>> {
    let letters = g.letters();
    let mut candidates = BTreeSet::new();
    for (_, h) in &g.generators {
        let mut hq = PlHomeo::identity();
        for _ in 0..max_period {
            hq = h.compose(&hq);
            for c in fixed_points(&hq) {
                candidates.extend(c.samples());
            }
        }
    }
    'candidate: for start in candidates {
        let mut orbit = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for letter in &letters {
                let image = letter.map.eval(&p);
                if orbit.insert(image.clone()) {
                    if orbit.len() > max_period {
                        continue 'candidate;
                    }
                    queue.push_back(image);
                }
            }
        }
        return Some(orbit.into_iter().collect());
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothingOutcome {
    Success {
        phi: PlHomeo,
        conjugated: Vec<(String, PlHomeo)>,
    },
    FiniteOrbit {
        orbit: Vec<CirclePoint>,
    },
    Obstruction(Obstruction),
    Infeasible {
        component_sizes: Vec<usize>,
        #[serde(with = "rational::serde_q")]
        product: Q,
    },
    Truncated {
        escaping: Vec<CirclePoint>,
    },
}

impl SmoothingOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, SmoothingOutcome::Success { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothOptions {
    pub max_vertices: usize,
    /// When set, a failed solve is followed by a finite-orbit search with
    /// this period bound.
    pub finite_orbit_period: Option<usize>,
}

pub fn smooth_group(g: &GroupPresentation, max_vertices: usize) -> Result<SmoothingOutcome, Error> {
    smooth_group_with(
        g,
        SmoothOptions {
            max_vertices,
            finite_orbit_period: None,
        },
    )
}

pub fn smooth_group_with(
    g: &GroupPresentation,
    opts: SmoothOptions,
) -> Result<SmoothingOutcome, Error> {
    let outcome = solve_and_conjugate(g, opts.max_vertices)?;
    if outcome.is_success() {
        return Ok(outcome);
    }
    if let Some(period) = opts.finite_orbit_period {
        if let Some(orbit) = detect_finite_orbit(g, period) {
            return Ok(SmoothingOutcome::FiniteOrbit { orbit });
        }
    }
    Ok(outcome)
}

fn solve_and_conjugate(
    g: &GroupPresentation,
    max_vertices: usize,
) -> Result<SmoothingOutcome, Error> {
    let graph = build_orbit_graph(g, max_vertices)?;
    let prop = propagate(&graph);
    if let Some(o) = first_obstruction(&graph, &prop) {
        return Ok(SmoothingOutcome::Obstruction(o));
    }
    if !graph.is_closed() {
        return Ok(SmoothingOutcome::Truncated {
            escaping: graph.escaping,
        });
    }
    let assignment = match normalize(&graph, prop) {
        CoboundarySolution::Solved { assignment } => assignment,
        CoboundarySolution::Obstruction(o) => return Ok(SmoothingOutcome::Obstruction(o)),
        CoboundarySolution::Infeasible {
            component_sizes,
            product,
        } => {
            return Ok(SmoothingOutcome::Infeasible {
                component_sizes,
                product,
            })
        }
    };
    let phi = synthesize_conjugator(&assignment)?;
    let conjugated: Vec<(String, PlHomeo)> = g
        .generators
        .iter()
        .map(|(name, h)| (name.clone(), h.conjugate_by(&phi)))
        .collect();
    for (name, c) in &conjugated {
        assert!(
            c.is_rotation(),
            "conjugate of {name} kept breakpoints after a successful solve: {c}"
        );
    }
    Ok(SmoothingOutcome::Success { phi, conjugated })
}
