//! Inputs shared by the criterion benchmarks.

use plcircle::rational::q;
use plcircle::{GroupPresentation, PlHomeo};

/// The contracting map with lift vertices (0,0), (1/2,1/4), (1,1).
pub fn contracting_map() -> PlHomeo {
    PlHomeo::from_lift_vertices(&[(q(0, 1), q(0, 1)), (q(1, 2), q(1, 4)), (q(1, 1), q(1, 1))])
        .expect("valid map")
}

/// `phi * {rotation(1/3), rotation(1/5)} * phi^-1` for a seeded `phi`.
pub fn conjugated_rotations(seed: u64) -> GroupPresentation {
    let phi = PlHomeo::random(seed, 4, 64);
    GroupPresentation::new(vec![
        ("a".into(), PlHomeo::rotation(&q(1, 3)).conjugate_by(&phi)),
        ("b".into(), PlHomeo::rotation(&q(1, 5)).conjugate_by(&phi)),
    ])
    .expect("distinct names")
}
