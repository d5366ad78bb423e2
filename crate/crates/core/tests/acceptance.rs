//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_rank, Lift};
use plcircle::cantor::{nested_limit, Direction, Node};
use plcircle::cocycle::{iterates, orbit_vectors};
use plcircle::format::{parse_json, presentation_from_json};
use plcircle::rational::{self, int, q, Q};
use plcircle::{
    affine_apply, cb_rank, jump_cocycle, rotation_number, smooth_group, synthesize_conjugator,
    CirclePoint, ExoticParams, FiniteVector, GroupPresentation, GrowthExperiment, JumpAssignment,
    PlHomeo, SmoothingOutcome, SymbolicSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let el = start.elapsed();
    check(el <= limit, || format!("took {el:.2?}, limit {limit:?}"))?;
    Ok(el)
}

fn pt(x: &Q) -> CirclePoint {
    CirclePoint::new(x.clone()).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize, denom: i64) -> FiniteVector {
    let n = rng.gen_range(0..=max_len);
    (0..n)
        .map(|_| {
            let p = pt(&q(rng.gen_range(0..denom), denom));
            (p, q(rng.gen_range(1..8), rng.gen_range(1..8)))
        })
        .collect()
}

fn standard_map() -> PlHomeo {
    PlHomeo::from_lift_vertices(&[(int(0), int(0)), (q(1, 2), q(1, 4)), (int(1), int(1))]).unwrap()
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn chain_rule() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = PlHomeo::random(rng.gen(), rng.gen_range(0..=6), 64);
        let h = PlHomeo::random(rng.gen(), rng.gen_range(0..=6), 64);
        let gh = g.compose(&h);
        let (lg, lh) = (Lift::of(&g), Lift::of(&h));
        let j = jump_cocycle(&gh);
        let mut candidates: BTreeSet<CirclePoint> = h.breakpoints().into_iter().collect();
        candidates.extend(g.breakpoints().iter().map(|b| h.eval_inverse(b)));
        for x in &candidates {
            let hx = lh.eval_circle(x.value());
            let expected = lg.jump(&hx) * lh.jump(x.value());
            check(j.get(x) == expected, || {
                format!(
                    "seed {seed}: jump of g∘h at {x} is {} not {}",
                    j.get(x),
                    expected
                )
            })?;
            checked += 1;
        }
        for x in j.support() {
            check(candidates.contains(x), || {
                format!("seed {seed}: stray jump at {x}")
            })?;
        }
    }
    let el = within(Duration::from_secs(10), start)?;
    Ok(format!("500 pairs, {checked} points, {el:.2?}"))
}

fn product_one() -> Outcome {
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let h = PlHomeo::random(rng.gen(), rng.gen_range(0..=8), 64);
        let oracle = Lift::of(&h);
        check(oracle.telescoped_product().is_one(), || {
            format!("seed {seed}: oracle telescoping failed for {h}")
        })?;
        let j = jump_cocycle(&h);
        for b in h.breakpoints() {
            check(j.get(&b) == oracle.jump(b.value()), || {
                format!("seed {seed}: jump at {b} disagrees with slopes")
            })?;
        }
        check(j.product().is_one(), || {
            format!("seed {seed}: product {}", j.product())
        })?;
    }
    Ok("1000 maps".into())
}

fn affine_action() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(7919));
        let g = PlHomeo::random(rng.gen(), rng.gen_range(0..=6), 64);
        let h = PlHomeo::random(rng.gen(), rng.gen_range(0..=6), 64);
        let v = random_vector(&mut rng, 6, 64);
        let w = random_vector(&mut rng, 6, 64);
        let lhs = affine_apply(&g, &affine_apply(&h, &v));
        let rhs = affine_apply(&g.compose(&h), &v);
        check(lhs == rhs, || format!("seed {seed}: homomorphism fails"))?;
        let before = v.quotient(&w).l2_norm_sq();
        let after = affine_apply(&g, &v)
            .quotient(&affine_apply(&g, &w))
            .l2_norm_sq();
        let rel = if before == 0.0 {
            after.abs()
        } else {
            (after - before).abs() / before
        };
        worst = worst.max(rel);
        check(rel <= 1e-9, || {
            format!("seed {seed}: isometry residual {rel:e}")
        })?;
    }
    Ok(format!("200 triples, worst isometry residual {worst:.1e}"))
}

fn breakpoint_growth() -> Outcome {
    let start = Instant::now();
    let f = standard_map();
    let oracle = Lift::of(&f);
    let c0 = rational::ln(&oracle.slope(&int(0), true));
    let c1 = rational::ln(&oracle.slope(&int(0), false));
    check(
        (c0 - (0.5f64).ln()).abs() < 1e-15 && (c1 - (1.5f64).ln()).abs() < 1e-15,
        || "oracle slopes at the fixed point are not 1/2 and 3/2".into(),
    )?;
    let exp = GrowthExperiment::run(&f, 200);
    let p = exp.params.as_ref().ok_or("no growth parameters")?;
    check(
        (p.c0 - c0).abs() < 1e-12 && (p.c1 - c1).abs() < 1e-12,
        || format!("c0, c1 = {}, {} differ from slopes", p.c0, p.c1),
    )?;
    for r in &exp.rows {
        let bound = r.n as f64 * (c1 - c0) / p.mu;
        check(r.breakpoints as f64 >= bound, || {
            format!("n = {}: M_n = {} below {bound}", r.n, r.breakpoints)
        })?;
        let floor = r.breakpoints as f64 * p.beta * p.beta - 1e-9;
        check(r.norm_sq >= floor, || {
            format!("n = {}: norm² {} below {floor}", r.n, r.norm_sq)
        })?;
    }
    let (first, last) = (&exp.rows[0], exp.rows.last().unwrap());
    check(last.breakpoints > 10 * first.breakpoints, || {
        "M_n not growing".into()
    })?;
    check(last.norm_sq > 10.0 * first.norm_sq, || {
        "orbit norm not growing".into()
    })?;
    let el = within(Duration::from_secs(30), start)?;
    Ok(format!(
        "n <= 200, M_200 = {}, norm² = {:.3}, {el:.2?}",
        last.breakpoints, last.norm_sq
    ))
}

fn exotic_bounded() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    for (a, l) in [(4, 2), (9, 3)] {
        let g = PlHomeo::exotic_element(&ExoticParams::new(int(a), int(l)).unwrap());
        let mut values: BTreeSet<Q> = BTreeSet::new();
        for (i, gn) in iterates(&g, 1000).enumerate() {
            check(gn.num_breakpoints() <= 2, || {
                format!(
                    "({a},{l}): g^{} has {} breakpoints",
                    i + 1,
                    gn.num_breakpoints()
                )
            })?;
            values.extend(jump_cocycle(&gn).iter().map(|(_, j)| j.clone()));
        }
        check(values.len() <= 3, || {
            format!("({a},{l}): {} jump values", values.len())
        })?;
        let cap = 2.0
            * values
                .iter()
                .map(|v| rational::ln(v).powi(2))
                .fold(0.0, f64::max);
        let max_norm = orbit_vectors(&g, 1000)
            .map(|v| v.l2_norm_sq())
            .fold(0.0, f64::max);
        check(max_norm <= cap + 1e-12, || {
            format!("({a},{l}): norm² {max_norm} above {cap}")
        })?;
        details.push(format!("({a},{l}) max norm² {max_norm:.3}"));
    }
    let el = within(Duration::from_secs(20), start)?;
    Ok(format!("{}, {el:.2?}", details.join(", ")))
}

fn rotation_numbers() -> Outcome {
    let mut count = 0;
    for den in 1..=30i64 {
        for num in 0..den {
            if num_integer::gcd(num, den) != 1 {
                continue;
            }
            let a = q(num, den);
            let r = rotation_number(&PlHomeo::rotation(&a), 30, 64);
            check(r.exact() == Some(&a), || format!("rotation({a}) gave {r}"))?;
            count += 1;
        }
    }
    let g = PlHomeo::exotic_element(&ExoticParams::new(int(4), int(2)).unwrap());
    check(g.iterate(2).is_identity(), || {
        "exotic(4,2) squared is not the identity".into()
    })?;
    let r = rotation_number(&g, 30, 64);
    check(r.exact() == Some(&q(1, 2)), || {
        format!("exotic(4,2) gave {r}")
    })?;
    let third = PlHomeo::rotation(&q(1, 3));
    for seed in 0..50u64 {
        let phi = PlHomeo::random(seed, 2 + (seed % 5) as usize, 32);
        let r = rotation_number(&third.conjugate_by(&phi), 30, 64);
        check(r.exact() == Some(&q(1, 3)), || {
            format!("conjugation seed {seed} gave {r}")
        })?;
    }
    Ok(format!(
        "{count} rotations, exotic(4,2) = 1/2, 50 conjugations"
    ))
}

fn four_break_map(seed: u64) -> PlHomeo {
    (0..)
        .map(|j| PlHomeo::random(seed * 1000 + j, 4, 24))
        .find(|phi| phi.num_breakpoints() == 4)
        .unwrap()
}

fn smoothing_roundtrip() -> Outcome {
    let start = Instant::now();
    let (r3, r5) = (PlHomeo::rotation(&q(1, 3)), PlHomeo::rotation(&q(1, 5)));
    for seed in 0..20u64 {
        let phi0 = four_break_map(seed);
        let g = GroupPresentation::new(vec![
            ("a".into(), r3.conjugate_by(&phi0)),
            ("b".into(), r5.conjugate_by(&phi0)),
        ])
        .unwrap();
        match smooth_group(&g, 2000).map_err(|e| e.to_string())? {
            SmoothingOutcome::Success { conjugated, .. } => {
                check(conjugated[0].1 == r3 && conjugated[1].1 == r5, || {
                    format!(
                        "seed {seed}: conjugates {} and {}",
                        conjugated[0].1, conjugated[1].1
                    )
                })?;
            }
            other => return Err(format!("seed {seed}: {other:?}")),
        }
    }
    let el = within(Duration::from_secs(10), start)?;
    Ok(format!("20 conjugators, {el:.2?}"))
}

fn obstruction() -> Outcome {
    let v = parse_json(&fixture("fixed_point_jump.json")).map_err(|e| e.to_string())?;
    let g = presentation_from_json(&v).map_err(|e| e.to_string())?;
    let f = &g.generators()[0].1;
    let oracle = Lift::of(f);
    let inv_oracle = Lift::of(&f.inverse());
    let o = match smooth_group(&g, 50).map_err(|e| e.to_string())? {
        SmoothingOutcome::Obstruction(o) => o,
        other => return Err(format!("expected an obstruction, got {other:?}")),
    };
    check(o.expected.is_one() && !o.found.is_one(), || {
        format!("expected {} found {}", o.expected, o.found)
    })?;
    let mut product = Q::one();
    for (i, e) in o.cycle.iter().enumerate() {
        let next = &o.cycle[(i + 1) % o.cycle.len()];
        check(e.target == next.source, || {
            "cycle is not a closed walk".into()
        })?;
        let (lift, want) = if e.letter.ends_with("^-1") {
            (&inv_oracle, f.eval_inverse(&e.source))
        } else {
            (&oracle, f.eval(&e.source))
        };
        check(e.target == want, || {
            format!("edge {} does not follow {}", e.source, e.letter)
        })?;
        check(e.weight == lift.jump(e.source.value()), || {
            format!("edge weight {} disagrees with slopes", e.weight)
        })?;
        product *= &e.weight;
    }
    check(product == o.found && !product.is_one(), || {
        format!("cycle product {product}")
    })?;
    let self_loop = o.cycle.len() == 1 && o.cycle[0].source == o.cycle[0].target;
    check(self_loop, || format!("cycle of length {}", o.cycle.len()))?;
    Ok(format!(
        "self-loop at {}, product {}",
        o.cycle[0].source,
        rational::format(&product)
    ))
}

fn synthesis_roundtrip() -> Outcome {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 40_000);
        let k = rng.gen_range(1..=8);
        let mut pts: BTreeSet<CirclePoint> = BTreeSet::new();
        while pts.len() < k {
            pts.insert(pt(&q(rng.gen_range(0..64), 64)));
        }
        let pts: Vec<CirclePoint> = pts.into_iter().collect();
        let mut values: Vec<Q> = (1..k)
            .map(|_| q(rng.gen_range(1..9), rng.gen_range(1..9)))
            .collect();
        let prod: Q = values.iter().fold(Q::one(), |a, v| a * v);
        values.push(prod.recip());
        let a = JumpAssignment::new(pts.into_iter().zip(values).collect());
        let phi = synthesize_conjugator(&a).map_err(|e| format!("seed {seed}: {e}"))?;
        check(*jump_cocycle(&phi) == *a.values(), || {
            format!("seed {seed}: jumps of {phi}")
        })?;
    }
    Ok("200 assignments".into())
}

fn cantor_bendixson() -> Outcome {
    let p = |n, d| pt(&q(n, d));
    let mut cases: Vec<(String, SymbolicSet, usize)> = vec![(
        "finite".into(),
        SymbolicSet::new(vec![
            Node::leaf(p(0, 1)),
            Node::leaf(p(1, 3)),
            Node::leaf(p(5, 7)),
        ])
        .unwrap(),
        1,
    )];
    let single = SymbolicSet::new(vec![Node::limit(
        p(1, 5),
        SymbolicSet::new(vec![Node::leaf(p(1, 2))]).unwrap(),
        Direction::Left,
        q(1, 2),
    )])
    .unwrap();
    cases.push(("single limit".into(), single, 2));
    for k in 1..=5 {
        cases.push((
            format!("{k}-fold"),
            nested_limit(p(0, 1), k, q(1, 2)),
            k + 1,
        ));
    }
    for (name, s, want) in &cases {
        let got = cb_rank(s).rank;
        check(got == *want, || {
            format!("{name}: rank {got}, expected {want}")
        })?;
        let brute = brute_force_rank(s, 2);
        check(brute == Some(*want), || {
            format!("{name}: brute-force oracle gave {brute:?}")
        })?;
    }
    Ok(format!(
        "{} sets, ranks agree with the brute-force oracle",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cocycle chain rule", chain_rule),
        ("product of jumps is one", product_one),
        ("affine action homomorphism and isometry", affine_action),
        ("breakpoint and orbit-norm growth", breakpoint_growth),
        ("exotic circle boundedness", exotic_bounded),
        ("rotation numbers", rotation_numbers),
        ("smoothing roundtrip", smoothing_roundtrip),
        ("obstruction detection", obstruction),
        ("synthesis roundtrip", synthesis_roundtrip),
        ("Cantor-Bendixson ranks", cantor_bendixson),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
