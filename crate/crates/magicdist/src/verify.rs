//! Named end-to-end checks covering every frozen claim: counts, faces,
//! counterexamples, fixed points, oracle agreement, thresholds, trajectories,
//! and the exhaustive searches. The `verify` command runs them one by one;
//! tamper tests corrupt a table copy and watch the right check fail.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::clifford::generate_clifford_group;
use crate::coeffs::{tensor_power, tensor_product, DensityMatrix, PauliCoefficients};
use crate::data::{dual_bound_equality_point, Tables, EQUALITY_POINT_SCALE, FROZEN_DATA_DIGEST,
    TWISTED_CURVE_LOWER_X};
use crate::maps::{
    bisect_predicate_boundary, bisect_sign_change, dual_round_gain_interval, dual_round_map,
    fidelity_derivative_numerator, five_qubit_symmetric_step, iterate, pair_parity_map,
    parity_map, region_check, twisted_five_qubit_map, twisted_scheme_step, BlochVector,
    FidelityTuple, Region,
};
use crate::oracle::{oracle_code_distill, run_protocol, ProtocolStep};
use crate::pauli::PauliOperator;
use crate::polytope::{facet_orbit_census, verify_halfspace};
use crate::rat::{rat, Rat};
use crate::reductions::{
    apply_reduction, check_structure, exhaustive_search, verify_counterexample, Objective,
    SearchOptions,
};
use crate::stabilizer::{
    count_reductions, count_stabilizer_states, enumerate_reductions, enumerate_stabilizer_states,
    StabilizerGroup,
};
use crate::thresholds::{
    alternate_worst_case_constant, expected_threshold, pi8_parity_output, threshold_search,
    NoiseChannel, NoiseKind, ALL_CRITERIA, ALL_NOISE_KINDS,
};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

type CheckFn = fn(&Tables) -> Result<String, String>;

pub struct Check {
    pub name: &'static str,
    run: CheckFn,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

const CHECKS: [Check; 14] = [
    Check { name: "data_digest", run: data_digest },
    Check { name: "data_tables", run: data_tables },
    Check { name: "stabilizer_counts", run: stabilizer_counts },
    Check { name: "polytope_faces", run: polytope_faces },
    Check { name: "polytope_census", run: polytope_census },
    Check { name: "reductions_counterexamples", run: reductions_counterexamples },
    Check { name: "reductions_structure", run: reductions_structure },
    Check { name: "maps_fixed_points", run: maps_fixed_points },
    Check { name: "maps_monotonicity", run: maps_monotonicity },
    Check { name: "maps_trajectory", run: maps_trajectory },
    Check { name: "oracle_agreement", run: oracle_agreement },
    Check { name: "thresholds_constants", run: thresholds_constants },
    Check { name: "search_small", run: search_small },
    Check { name: "search_five_copy", run: search_five_copy },
];

pub fn all_checks() -> &'static [Check] {
    &CHECKS
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

/// Run every check whose name contains `only` (all of them when `None`)
/// against the given tables.
pub fn run_checks(tables: &Tables, only: Option<&str>) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .filter(|c| only.is_none_or(|f| c.name.contains(f)))
        .map(|c| {
            let t0 = Instant::now();
            let result = (c.run)(tables);
            CheckOutcome {
                name: c.name,
                passed: result.is_ok(),
                detail: result.unwrap_or_else(|e| e),
                seconds: t0.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn data_digest(tables: &Tables) -> Result<String, String> {
    let digest = tables.digest();
    ensure!(
        digest == FROZEN_DATA_DIGEST,
        "embedded tables hash to {digest}, expected the frozen {FROZEN_DATA_DIGEST}"
    );
    Ok(format!("tables hash to the frozen {}...", &digest[..12]))
}

fn data_tables(tables: &Tables) -> Result<String, String> {
    let states = tables.counterexample_states();
    ensure!(states.len() == 7, "expected seven embedded states, found {}", states.len());
    for (i, s) in states.iter().enumerate() {
        ensure!(s.is_valid_state(), "embedded state {} is not a density matrix", i + 1);
    }
    ensure!(
        tables.face_rows.len() == 8,
        "expected eight face inequalities, found {}",
        tables.face_rows.len()
    );
    let code = tables.five_qubit_code().map_err(|e| format!("code generators: {e}"))?;
    ensure!(code.elements().len() == 16, "four generators must span sixteen elements");
    let (x_l, z_l) = tables.five_qubit_logicals().map_err(|e| format!("logicals: {e}"))?;
    for g in &code.generators {
        let cx = crate::pauli::commutes(g, &x_l).map_err(|e| e.to_string())?;
        let cz = crate::pauli::commutes(g, &z_l).map_err(|e| e.to_string())?;
        ensure!(cx && cz, "logicals must centralize the code generators");
    }
    Ok("7 valid states, 8 faces, five-qubit code with centralizing logicals".into())
}

fn stabilizer_counts(_: &Tables) -> Result<String, String> {
    let want = [6u64, 60, 1080, 36720, 2423520];
    for (n, &w) in (1..=5).zip(&want) {
        let got = count_stabilizer_states(n);
        ensure!(got == w, "count formula gives {got} states on {n} qubits, expected {w}");
    }
    for (n, &w) in (1..=3).zip(&want) {
        let got = enumerate_stabilizer_states(n).map_err(|e| e.to_string())?.len() as u64;
        ensure!(got == w, "enumeration lists {got} states on {n} qubits, expected {w}");
    }
    let listed = enumerate_reductions(2).map_err(|e| e.to_string())?.len() as u64;
    ensure!(
        listed == 30 && count_reductions(2) == 30,
        "two-qubit reductions: formula {}, enumerated {listed}, expected 30",
        count_reductions(2)
    );
    Ok("6/60/1080/36720/2423520 states and 30 two-qubit reductions, enumerated exactly".into())
}

fn polytope_faces(tables: &Tables) -> Result<String, String> {
    let vertices = enumerate_stabilizer_states(2).map_err(|e| e.to_string())?;
    let faces = tables.face_inequalities();
    for (j, face) in faces.iter().enumerate() {
        let (max, tight) = verify_halfspace(face, &vertices);
        ensure!(
            max.is_zero(),
            "face {} has maximum {max} over the vertices, expected exactly zero",
            j + 1
        );
        ensure!(tight >= 15, "face {} is tight on only {tight} vertices", j + 1);
    }
    let states = tables.counterexample_states();
    for j in 0..7 {
        let value = faces[j].inner_product(&states[j]);
        ensure!(
            value > Rat::zero(),
            "face {} fails to separate its paired state (value {value})",
            j + 1
        );
        if j == 0 {
            ensure!(
                value == rat(1, 6),
                "face 1 on state 1 gives {value}, expected exactly 1/6"
            );
        }
    }
    Ok("8 faces: max 0 with >= 15 tight vertices each; face 1 on state 1 is exactly 1/6".into())
}

fn polytope_census(tables: &Tables) -> Result<String, String> {
    let group = generate_clifford_group(2).map_err(|e| e.to_string())?;
    ensure!(group.len() == 11520, "two-qubit Clifford action has {} elements", group.len());
    let sizes = facet_orbit_census(&tables.face_inequalities(), &group)
        .map_err(|e| e.to_string())?;
    let total: usize = sizes.iter().sum();
    ensure!(
        total == 22320,
        "face orbits sum to {total}, expected 22320 (sizes {sizes:?})"
    );
    Ok(format!("orbit sizes {sizes:?} sum to 22320; representatives pairwise inequivalent"))
}

fn reductions_counterexamples(tables: &Tables) -> Result<String, String> {
    let states = tables.counterexample_states();
    for (i, s) in states.iter().enumerate() {
        ensure!(s.is_valid_state(), "state {} is not a valid density matrix", i + 1);
        let report = verify_counterexample(s).map_err(|e| e.to_string())?;
        ensure!(
            report.outside_polytope(),
            "state {} is not certified outside the two-qubit polytope",
            i + 1
        );
        ensure!(
            report.all_reductions_inside(),
            "some reduction of state {} escapes the octahedron",
            i + 1
        );
    }
    // the quoted parity reduction of the first state
    let zz = StabilizerGroup::from_labels(&["ZZ"]).map_err(|e| e.to_string())?;
    let out = apply_reduction(&states[0], &zz).map_err(|e| e.to_string())?;
    ensure!(out.c[0] == rat(1, 4), "parity success weight of state 1 is {}", out.c[0]);
    let mut mags: Vec<Rat> = out.c[1..].iter().map(|v| v.abs()).collect();
    mags.sort();
    ensure!(
        mags == vec![rat(1, 12), rat(1, 12), rat(1, 12)],
        "parity output magnitudes of state 1 are {mags:?}, expected 1/12 each"
    );
    let side_i = states[0].get("II").unwrap() + states[0].get("ZZ").unwrap();
    let side_l = (states[0].get("IZ").unwrap() + states[0].get("ZI").unwrap()).abs()
        + (states[0].get("XX").unwrap() - states[0].get("YY").unwrap()).abs()
        + (states[0].get("XY").unwrap() + states[0].get("YX").unwrap()).abs();
    ensure!(
        side_i == rat(1, 4) && side_l == rat(1, 4),
        "coordinate-averaging comparison gives {side_i} vs {side_l}, expected 1/4 on both sides"
    );
    Ok("7 states outside the hull, every reduction inside the octahedron; \
        state 1 parity output at magnitude (1/3, 1/3, 1/3) with both comparison sides 1/4"
        .into())
}

fn reductions_structure(tables: &Tables) -> Result<String, String> {
    let s = &tables.counterexample_states()[0];
    let (pairwise, products, outside_triples) = check_structure(s);
    ensure!(pairwise, "two support elements of state 1 commute");
    ensure!(products, "a support product commutes with one of its factors");
    ensure!(
        outside_triples,
        "some Pauli outside the support does not commute with exactly three support elements"
    );
    Ok("support pairwise anticommutes, products anticommute with both factors, \
        every outside Pauli commutes with exactly three"
        .into())
}

fn maps_fixed_points(_: &Tables) -> Result<String, String> {
    let step = |f: f64| five_qubit_symmetric_step(&FidelityTuple::uniform(f)).1 - f;
    let fp = bisect_sign_change(step, 0.6, 0.7, 1e-13).map_err(|e| e.to_string())?;
    let want = (3.0f64 / 7.0).sqrt();
    ensure!(
        (fp - want).abs() < 1e-12,
        "five-qubit symmetric fixed point at {fp}, expected sqrt(3/7) = {want}"
    );
    let (lo, hi) = dual_round_gain_interval();
    ensure!(lo == 0.5, "gain interval opens at {lo}, expected exactly 1/2");
    ensure!((0.67..0.69).contains(&hi), "gain interval closes at {hi}, outside (0.67, 0.69)");
    ensure!(
        (dual_round_map(hi) - hi).abs() < 1e-9,
        "upper endpoint {hi} is not a fixed point of the dual-round map"
    );
    Ok(format!("fixed point sqrt(3/7) to 1e-12; dual-round gain on (1/2, {hi:.10})"))
}

fn maps_monotonicity(_: &Tables) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = 1e-5;
    for _ in 0..10_000 {
        let mut f = [0.0f64; 5];
        for slot in &mut f {
            *slot = rng.random_range(h..1.0 - h);
        }
        let t = FidelityTuple { f };
        for i in 0..5 {
            let mut up = t;
            up.f[i] += h;
            let mut down = t;
            down.f[i] -= h;
            let diff = (five_qubit_symmetric_step(&up).1 - five_qubit_symmetric_step(&down).1)
                / (2.0 * h);
            ensure!(
                diff >= -1e-9,
                "output fidelity decreases in input {i} at {f:?} (slope {diff})"
            );
            let mut others = [0.0f64; 4];
            let mut k = 0;
            for (j, &v) in f.iter().enumerate() {
                if j != i {
                    others[k] = v;
                    k += 1;
                }
            }
            let numerator = fidelity_derivative_numerator(others);
            ensure!(
                numerator >= -1e-12,
                "derivative numerator negative ({numerator}) at {others:?}"
            );
        }
    }
    Ok("10000 tuples: finite-difference slopes >= -1e-9 and numerator nonnegative".into())
}

fn maps_trajectory(_: &Tables) -> Result<String, String> {
    let p = dual_bound_equality_point();
    let diag = 2.0 * p.x + p.z - 3.0 / 7f64.sqrt();
    let cone = p.z + SQRT_2 * p.x - 1.0;
    ensure!(
        diag.abs() < 1e-12 && cone.abs() < 1e-12,
        "equality point misses its two bounds by {diag:.2e} and {cone:.2e}"
    );
    let stop = |b: &BlochVector| {
        region_check(b, Region::DiagonalFiveQubit) || region_check(b, Region::PairSumCodes)
    };
    let t = iterate(twisted_scheme_step, p.scale(EQUALITY_POINT_SCALE), stop, 200);
    ensure!(
        t.reached,
        "twisted iteration from the scaled equality point never certifies distillation"
    );
    // Lower endpoint of the improvement stretch: seed the iteration on the
    // cone-bound curve z = 1 - sqrt2 x of the x = y cross-section and
    // bisect where the twisted scheme stops winning.
    let fails = |x: f64| {
        let start = BlochVector::new(x, x, 1.0 - SQRT_2 * x);
        !iterate(twisted_scheme_step, start, stop, 300).reached
    };
    ensure!(
        fails(0.15) && !fails(0.30),
        "cone-curve seeds do not bracket the improvement stretch"
    );
    let endpoint = bisect_predicate_boundary(fails, 0.15, 0.30, 1e-7)
        .map_err(|e| e.to_string())?;
    ensure!(
        (endpoint - TWISTED_CURVE_LOWER_X).abs() < 5e-4,
        "improvement stretch opens at x = {endpoint:.6}, expected near {TWISTED_CURVE_LOWER_X}"
    );
    Ok(format!(
        "scaled equality point certified in {} steps; improvement stretch opens at x = {:.5}",
        t.steps(),
        endpoint
    ))
}

fn bloch_density(b: &BlochVector) -> DensityMatrix {
    DensityMatrix::from_coeffs(&PauliCoefficients::from_bloch(b))
}

fn random_ball_vector(rng: &mut ChaCha8Rng, radius: f64) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v.scale(radius);
        }
    }
}

fn parity_decode() -> ProtocolStep {
    ProtocolStep::Decode {
        group: StabilizerGroup::from_labels(&["ZZ"]).expect("parity group"),
        logical_x: PauliOperator::parse("XX").expect("logical"),
        logical_z: PauliOperator::parse("ZI").expect("logical"),
    }
}

fn dual_parity_decode() -> ProtocolStep {
    ProtocolStep::Decode {
        group: StabilizerGroup::from_labels(&["XX"]).expect("dual parity group"),
        logical_x: PauliOperator::parse("XI").expect("logical"),
        logical_z: PauliOperator::parse("ZZ").expect("logical"),
    }
}

fn decoded_bloch(d: &DensityMatrix) -> Result<BlochVector, String> {
    let c = d.to_coeffs(1e-9).map_err(|e| e.to_string())?;
    Ok(BlochVector::new(2.0 * c.c[2], 2.0 * c.c[3], 2.0 * c.c[1]))
}

fn close(a: &BlochVector, b: &BlochVector, tol: f64) -> bool {
    (a.x - b.x).abs() < tol && (a.y - b.y).abs() < tol && (a.z - b.z).abs() < tol
}

fn oracle_agreement(_: &Tables) -> Result<String, String> {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for trial in 0..100 {
        let b = random_ball_vector(&mut rng, 0.95);
        let (out, _) = run_protocol(&[bloch_density(&b), bloch_density(&b)], &[parity_decode()])
            .map_err(|e| e.to_string())?;
        ensure!(
            close(&decoded_bloch(&out)?, &parity_map(&b), tol),
            "parity map disagrees with the dense decode on trial {trial}"
        );
    }
    for trial in 0..100 {
        let b = random_ball_vector(&mut rng, 0.95);
        let (out, _) = run_protocol(&[bloch_density(&b), bloch_density(&b)], &[parity_decode()])
            .map_err(|e| e.to_string())?;
        let refl = BlochVector::new(b.x, -b.y, b.z);
        let (pair, _) =
            run_protocol(&[bloch_density(&b), bloch_density(&refl)], &[parity_decode()])
                .map_err(|e| e.to_string())?;
        let _ = out;
        ensure!(
            close(&decoded_bloch(&pair)?, &pair_parity_map(&b), tol),
            "pair-parity map disagrees with the dense decode on trial {trial}"
        );
    }
    for trial in 0..100 {
        let x = rng.random_range(0.05..0.95);
        let b = BlochVector::new(x, 0.0, x);
        let (stage, _) = run_protocol(&[bloch_density(&b), bloch_density(&b)], &[parity_decode()])
            .map_err(|e| e.to_string())?;
        let s1 = decoded_bloch(&stage)?;
        let (second, _) = run_protocol(
            &[bloch_density(&s1), bloch_density(&s1)],
            &[dual_parity_decode()],
        )
        .map_err(|e| e.to_string())?;
        let out = crate::maps::symmetrize_xz(&decoded_bloch(&second)?);
        ensure!(
            (out.x - dual_round_map(x)).abs() < tol,
            "dual-round scalar disagrees with the four-copy pipeline at x = {x} (trial {trial})"
        );
    }
    let s = 1.0 / 3f64.sqrt();
    for trial in 0..100 {
        let mut f = [0.0f64; 5];
        for slot in &mut f {
            *slot = rng.random_range(0.3..0.95);
        }
        let t = FidelityTuple { f };
        let inputs: [BlochVector; 5] = t.f.map(|v| BlochVector::new(v * s, v * s, v * s));
        let (out, p) = oracle_code_distill(&inputs, [0; 5]).map_err(|e| e.to_string())?;
        let (p_want, f_want) = five_qubit_symmetric_step(&t);
        ensure!(
            (p - p_want).abs() < 1e-10,
            "five-qubit branch probability disagrees on trial {trial}"
        );
        for coord in [out.x, out.y, out.z] {
            ensure!(
                (coord.abs() - f_want * s).abs() < tol,
                "five-qubit output coordinate disagrees on trial {trial}"
            );
        }
    }
    for trial in 0..100 {
        let b = random_ball_vector(&mut rng, 0.8);
        let (raw, _) = oracle_code_distill(&[b; 5], [2, 2, 0, 0, 0]).map_err(|e| e.to_string())?;
        let got = BlochVector::new(-raw.z, raw.x, -raw.y);
        ensure!(
            close(&got, &twisted_five_qubit_map(&b), tol),
            "twisted five-qubit map disagrees with the dense decode on trial {trial}"
        );
    }
    let p_star = crate::thresholds::jamiolkowski_threshold();
    for trial in 0..100 {
        let eps = rng.random_range(0.0..0.05);
        let ch = NoiseChannel { kind: NoiseKind::Depolarizing, p: p_star - eps };
        let s2 = crate::thresholds::jamiolkowski_state(&ch);
        let (out, _) = run_protocol(
            &[DensityMatrix::from_coeffs(&s2)],
            &[parity_decode()],
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            close(&decoded_bloch(&out)?, &pi8_parity_output(eps), tol),
            "parity output of the noisy rotation disagrees on trial {trial}"
        );
    }
    Ok("parity, pair-parity, dual-round, five-qubit, twisted, and noisy-rotation \
        closed forms all match the dense decodes on 100 random inputs each"
        .into())
}

fn thresholds_constants(_: &Tables) -> Result<String, String> {
    for kind in ALL_NOISE_KINDS {
        for criterion in ALL_CRITERIA {
            let got = threshold_search(kind, criterion).map_err(|e| e.to_string())?;
            let want = expected_threshold(kind, criterion);
            ensure!(
                (got - want).abs() < 1e-9,
                "{} + {} threshold {got}, expected {want}",
                kind.tag(),
                criterion.tag()
            );
        }
    }
    let b0 = pi8_parity_output(0.0);
    ensure!(
        (b0.x.abs() + b0.y.abs() - 1.0).abs() < 1e-13,
        "parity output at the threshold misses the octahedron boundary by {:.2e}",
        b0.x.abs() + b0.y.abs() - 1.0
    );
    let b1 = pi8_parity_output(1e-3);
    ensure!(
        b1.x.abs() + b1.y.abs() > 1.0,
        "parity output fails to escape the octahedron just below the threshold"
    );
    let alt = alternate_worst_case_constant();
    let computed = expected_threshold(NoiseKind::WorstCase, crate::thresholds::DistillCriterion::DirectPlus);
    ensure!(
        (alt / computed - SQRT_2).abs() < 1e-12,
        "the two worst-case readings no longer differ by sqrt2"
    );
    Ok(format!(
        "six thresholds land on (6-2sqrt2)/7, 1-1/sqrt2, (2-sqrt2)/4 to 1e-9; \
         the antipodal convention is reproduced, not the sqrt2-larger reading {alt:.4}"
    ))
}

fn search_small(_: &Tables) -> Result<String, String> {
    let mut b = PauliCoefficients::<Rat>::maximally_mixed(1);
    b.set("X", rat(501, 2000)).map_err(|e| e.to_string())?;
    b.set("Z", rat(501, 2000)).map_err(|e| e.to_string())?;
    let opts = SearchOptions::default();
    let three = exhaustive_search(
        &tensor_power(&b, 3).map_err(|e| e.to_string())?,
        Objective::SumXZ,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        three.completed && three.evaluated == 1260,
        "three-copy search did not cover all 1260 reductions"
    );
    ensure!(
        (three.best_value - 1.0021804935874963).abs() < 1e-12,
        "three-copy optimum {} drifted from the parity-stage value",
        three.best_value
    );
    let four = exhaustive_search(
        &tensor_power(&b, 4).map_err(|e| e.to_string())?,
        Objective::SumXZ,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        four.completed && four.evaluated == 91800,
        "four-copy search did not cover all 91800 reductions"
    );
    ensure!(
        (four.best_value - 1.0024594518998142).abs() < 1e-12,
        "four-copy optimum {} drifted from the dual-round value",
        four.best_value
    );
    let tables = Tables::embedded();
    for (i, s) in tables.counterexample_states().iter().enumerate() {
        let doubled = tensor_product(s, s).map_err(|e| e.to_string())?;
        let escape = exhaustive_search(&doubled, Objective::EscapeO1, &opts)
            .map_err(|e| e.to_string())?;
        ensure!(
            escape.completed && escape.evaluated == 91800,
            "two-copy escape search over state {} is incomplete",
            i + 1
        );
        ensure!(
            escape.best_value <= 1e-15,
            "two copies of state {} escape the octahedron (margin {})",
            i + 1,
            escape.best_value
        );
    }
    Ok(format!(
        "three- and four-copy optima at {:.12} and {:.12}; \
         no two-copy escape for any of the seven states over 91800 reductions",
        three.best_value, four.best_value
    ))
}

fn search_five_copy(tables: &Tables) -> Result<String, String> {
    let mut b = PauliCoefficients::<Rat>::maximally_mixed(1);
    for label in ["X", "Y", "Z"] {
        b.set(label, rat(1, 4)).map_err(|e| e.to_string())?;
    }
    let s = tensor_power(&b, 5).map_err(|e| e.to_string())?;
    let result = exhaustive_search(&s, Objective::TFidelity, &SearchOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(
        result.completed && result.evaluated == 12_521_520,
        "five-copy search covered {} of 12521520 reductions",
        result.evaluated
    );
    let code = tables.five_qubit_code().map_err(|e| e.to_string())?;
    let code_out = apply_reduction(&s, &code).map_err(|e| e.to_string())?;
    let code_value = Objective::TFidelity
        .evaluate(&code_out.to_f64())
        .ok_or_else(|| "the five-qubit code reduction is degenerate".to_string())?;
    ensure!(
        (result.best_value - code_value).abs() < 1e-12,
        "search optimum {} differs from the five-qubit code's {}",
        result.best_value,
        code_value
    );
    let closed = (31.0 + 17.0 * 3f64.sqrt()) / 62.0;
    ensure!(
        (result.best_value - closed).abs() < 1e-12,
        "search optimum {} differs from the closed form (31 + 17 sqrt3)/62",
        result.best_value
    );
    Ok(format!(
        "all 12521520 five-copy reductions evaluated; optimum {:.12} equals the \
         five-qubit code's output fidelity",
        result.best_value
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_are_unique_and_prefixed_by_module() {
        let names = check_names();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len(), "duplicate check names");
        for name in names {
            assert!(
                name.chars().all(|c| c.is_ascii_lowercase() || c == '_'),
                "check name {name} is not snake_case"
            );
        }
    }

    #[test]
    fn filtering_selects_matching_checks_only() {
        let outcomes = run_checks(&Tables::embedded(), Some("data"));
        let names: Vec<_> = outcomes.iter().map(|o| o.name).collect();
        assert_eq!(names, ["data_digest", "data_tables"], "substring filter on name");
        assert!(outcomes.iter().all(|o| o.passed), "clean tables pass the data checks");
    }

    #[test]
    fn fast_checks_pass_on_the_embedded_tables() {
        let tables = Tables::embedded();
        for only in [
            "stabilizer_counts",
            "polytope_faces",
            "reductions_structure",
            "maps_fixed_points",
            "maps_trajectory",
            "thresholds_constants",
        ] {
            let outcomes = run_checks(&tables, Some(only));
            assert_eq!(outcomes.len(), 1, "exactly one check named {only}");
            assert!(
                outcomes[0].passed,
                "{only} failed on clean tables: {}",
                outcomes[0].detail
            );
        }
    }

    #[test]
    fn corrupting_a_face_sign_fails_the_digest_and_the_pairing() {
        let mut tables = Tables::embedded();
        tables.flip_sign("faces", 0, 2).unwrap();
        let outcomes = run_checks(&tables, Some("data_digest"));
        assert!(!outcomes[0].passed, "tampered tables must fail the digest check");
        let faces = run_checks(&tables, Some("polytope_faces"));
        assert!(
            !faces[0].passed,
            "flipping a face coefficient must break the face checks"
        );
        assert!(
            faces[0].detail.contains("face 1"),
            "failure names the corrupted face: {}",
            faces[0].detail
        );
        let counts = run_checks(&tables, Some("stabilizer_counts"));
        assert!(counts[0].passed, "table-independent checks still pass");
    }

    #[test]
    fn corrupting_a_counterexample_sign_fails_a_named_check() {
        // Sign flips on the first state leave it a genuine counterexample
        // (its support admits every sign pattern), so the face pairing is
        // what catches the tampering.
        let mut tables = Tables::embedded();
        tables.flip_sign("counterexamples", 0, 1).unwrap();
        let digest = run_checks(&tables, Some("data_digest"));
        assert!(!digest[0].passed, "any flip must fail the digest check");
        let faces = run_checks(&tables, Some("polytope_faces"));
        assert!(!faces[0].passed, "the pairing with face 1 must break");
        assert!(
            faces[0].detail.contains("face 1"),
            "failure names the face: {}",
            faces[0].detail
        );
        // A flip on the third state breaks the counterexample property
        // itself.
        let mut tables = Tables::embedded();
        tables.flip_sign("counterexamples", 2, 0).unwrap();
        let outcomes = run_checks(&tables, Some("reductions_counterexamples"));
        assert!(
            !outcomes[0].passed,
            "flipping a coordinate of state 3 must break the counterexample check"
        );
        assert!(
            outcomes[0].detail.contains("state 3"),
            "failure names the state: {}",
            outcomes[0].detail
        );
    }
}
