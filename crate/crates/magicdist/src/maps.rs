//! Closed-form distillation maps on the Bloch sphere, the region predicates
//! guarding them, and iteration/bisection drivers for sweeps.

use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// Transverse radius in the xy plane.
    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Longitude in the xy plane.
    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// |x| + |y| + |z|; at most 1 exactly for stabilizer mixtures.
    pub fn octahedron_norm(&self) -> f64 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    /// Largest two-coordinate sum max(|x|+|y|, |x|+|z|, |y|+|z|).
    pub fn max_pair_sum(&self) -> f64 {
        let (a, b, c) = (self.x.abs(), self.y.abs(), self.z.abs());
        (a + b).max(a + c).max(b + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        BlochVector { x: self.x * s, y: self.y * s, z: self.z * s }
    }

    /// Convex mixture (1-p) self + p other.
    pub fn mix(&self, other: &BlochVector, p: f64) -> Self {
        BlochVector {
            x: (1.0 - p) * self.x + p * other.x,
            y: (1.0 - p) * self.y + p * other.y,
            z: (1.0 - p) * self.z + p * other.z,
        }
    }
}

/// The magic state on the equator, (1/sqrt2, 1/sqrt2, 0).
pub fn h_state() -> BlochVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    BlochVector::new(s, s, 0.0)
}

/// The magic state on the diagonal, (1,1,1)/sqrt3.
pub fn t_state() -> BlochVector {
    let s = 1.0 / 3f64.sqrt();
    BlochVector::new(s, s, s)
}

/// Postselected even-parity check of two (possibly different) states:
/// ((x1 x2 - y1 y2), (x1 y2 + y1 x2), (z1 + z2)) / (1 + z1 z2).
pub fn parity_check_two(a: &BlochVector, b: &BlochVector) -> BlochVector {
    let den = 1.0 + a.z * b.z;
    BlochVector {
        x: (a.x * b.x - a.y * b.y) / den,
        y: (a.x * b.y + a.y * b.x) / den,
        z: (a.z + b.z) / den,
    }
}

/// Parity check of two copies: (x^2 - y^2, 2xy, 2z)/(1 + z^2). In polar form
/// r -> r^2/(1+z^2) and the longitude doubles.
pub fn parity_map(b: &BlochVector) -> BlochVector {
    parity_check_two(b, b)
}

/// Parity check in the dual (Hadamard-rotated) basis: swap x and z on the way
/// in and out.
pub fn dual_parity_check_two(a: &BlochVector, b: &BlochVector) -> BlochVector {
    let swap = |v: &BlochVector| BlochVector::new(v.z, v.y, v.x);
    let out = parity_check_two(&swap(a), &swap(b));
    BlochVector::new(out.z, out.y, out.x)
}

/// Average with the Hadamard-reflected state, forcing x = z (and y = -y
/// averaging to 0 when y = 0 already).
pub fn symmetrize_xz(b: &BlochVector) -> BlochVector {
    BlochVector::new(0.5 * (b.x + b.z), 0.0, 0.5 * (b.x + b.z))
}

/// One full round on the x = z diagonal: parity-check pairs, dual-parity-check
/// the two outputs, resymmetrize. Closed form x^2 (3 + x^2)/(1 + 2x^2 + 2x^4).
pub fn dual_round_map(x: f64) -> f64 {
    let x2 = x * x;
    x2 * (3.0 + x2) / (1.0 + 2.0 * x2 + 2.0 * x2 * x2)
}

/// Even-parity projection of rho(x,y,z) paired with its y-reflected partner:
/// (r^2/(1+z^2), 0, 2z/(1+z^2)) with r^2 = x^2 + y^2.
pub fn pair_parity_map(b: &BlochVector) -> BlochVector {
    let refl = BlochVector::new(b.x, -b.y, b.z);
    parity_check_two(b, &refl)
}

/// Average over {identity, diagonal rotation, its square}: the positive-octant
/// symmetrization onto the (1,1,1) axis.
pub fn symmetrize_diagonal(b: &BlochVector) -> BlochVector {
    let m = (b.x + b.y + b.z) / 3.0;
    BlochVector::new(m, m, m)
}

/// Quarter turn about z: (x, y, z) -> (-y, x, z).
pub fn quarter_turn_z(b: &BlochVector) -> BlochVector {
    BlochVector::new(-b.y, b.x, b.z)
}

/// Five copies projected onto the five-qubit code with a quarter-period twist
/// applied to two of them, then decoded:
/// denominator 1 + x^4 + y^4 + z^4 + 4xyz(x + y + z), numerators as below,
/// overall factor 2.
pub fn twisted_five_qubit_map(b: &BlochVector) -> BlochVector {
    let (x, y, z) = (b.x, b.y, b.z);
    let den = 1.0 + x.powi(4) + y.powi(4) + z.powi(4) + 4.0 * x * y * z * (x + y + z);
    let nx = x.powi(3) - x * x * (y.powi(3) + z.powi(3))
        + y * z * (y + z + 2.0 * x - x * y * z);
    let ny = -y.powi(3) + y * y * (x.powi(3) + z.powi(3))
        - x * z * (x + z + 2.0 * y - x * y * z);
    let nz = z.powi(3) - z * z * (x.powi(3) + y.powi(3))
        + x * y * (x + y + 2.0 * z - x * y * z);
    BlochVector::new(2.0 * nx / den, 2.0 * ny / den, 2.0 * nz / den)
}

/// The twisted map followed by its declared resymmetrizer (quarter turn about
/// z), which returns diagonal inputs to the diagonal.
pub fn twisted_scheme_step(b: &BlochVector) -> BlochVector {
    quarter_turn_z(&twisted_five_qubit_map(b))
}

/// Input fidelities of five diagonal states rho(f_i/sqrt3 (1,1,1)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityTuple {
    pub f: [f64; 5],
}

impl FidelityTuple {
    pub fn uniform(f: f64) -> Self {
        FidelityTuple { f: [f; 5] }
    }

    /// Elementary symmetric sum over size-s subsets, via the coefficients of
    /// prod_i (1 + f_i t).
    pub fn elem_sym(&self, s: usize) -> f64 {
        let mut coeffs = [0.0f64; 6];
        coeffs[0] = 1.0;
        for (i, &f) in self.f.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                coeffs[k] += f * coeffs[k - 1];
            }
        }
        coeffs[s]
    }
}

/// Success probability and output fidelity of the five-qubit-code step:
/// p = (3 + [f]^4)/48 and f_out = ([f]^3 - 2 [f]^5)/(3 + [f]^4).
pub fn five_qubit_symmetric_step(t: &FidelityTuple) -> (f64, f64) {
    let e3 = t.elem_sym(3);
    let e4 = t.elem_sym(4);
    let e5 = t.elem_sym(5);
    let p_success = (3.0 + e4) / 48.0;
    let f_out = (e3 - 2.0 * e5) / (3.0 + e4);
    (p_success, f_out)
}

/// Numerator of the output-fidelity partial derivative in the fifth input,
/// as a sum of six pair terms, each individually nonnegative on [0,1]^4:
/// f_i f_j (3 - f_i f_j f_k f_l - f_k f_l - (1/3) f_i f_j f_k^2 f_l^2
///          - (1/3) f_i f_j (f_k^2 + f_l^2)).
pub fn fidelity_derivative_numerator(f: [f64; 4]) -> f64 {
    let mut total = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut rest = [0.0; 2];
            let mut idx = 0;
            for m in 0..4 {
                if m != i && m != j {
                    rest[idx] = f[m];
                    idx += 1;
                }
            }
            let (fi, fj, fk, fl) = (f[i], f[j], rest[0], rest[1]);
            total += fi
                * fj
                * (3.0
                    - fi * fj * fk * fl
                    - fk * fl
                    - fi * fj * fk * fk * fl * fl / 3.0
                    - fi * fj * (fk * fk + fl * fl) / 3.0);
        }
    }
    total
}

/// Distillable-region predicates; each is invariant under coordinate
/// permutations and sign flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// max pair sum > 1.015: reachable by the large-code schemes.
    PairSumCodes,
    /// |x|+|y|+|z| > 3/sqrt7: reachable by the five-qubit code.
    DiagonalFiveQubit,
    /// max pair sum > 1: reachable by parity-check distillation.
    PairSumUnit,
    /// max over axes of |b_i| + transverse radius > 1: the cone criterion.
    ConeUnit,
}

pub const ALL_REGIONS: [Region; 4] =
    [Region::PairSumCodes, Region::DiagonalFiveQubit, Region::PairSumUnit, Region::ConeUnit];

impl Region {
    pub fn tag(&self) -> &'static str {
        match self {
            Region::PairSumCodes => "pair_sum_codes",
            Region::DiagonalFiveQubit => "diagonal_five_qubit",
            Region::PairSumUnit => "pair_sum_unit",
            Region::ConeUnit => "cone_unit",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        ALL_REGIONS
            .iter()
            .copied()
            .find(|r| r.tag() == tag)
            .ok_or_else(|| Error::BadLabel(format!("unknown region tag {tag:?}")))
    }

    /// The scalar whose comparison against the region bound decides the test.
    pub fn criterion(&self, b: &BlochVector) -> f64 {
        match self {
            Region::PairSumCodes | Region::PairSumUnit => b.max_pair_sum(),
            Region::DiagonalFiveQubit => b.octahedron_norm(),
            Region::ConeUnit => {
                let (ax, ay, az) = (b.x.abs(), b.y.abs(), b.z.abs());
                (ax + b.y.hypot(b.z)).max(ay + b.x.hypot(b.z)).max(az + b.x.hypot(b.y))
            }
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            Region::PairSumCodes => 1.015,
            Region::DiagonalFiveQubit => 3.0 / 7f64.sqrt(),
            Region::PairSumUnit | Region::ConeUnit => 1.0,
        }
    }
}

pub fn region_check(b: &BlochVector, which: Region) -> bool {
    which.criterion(b) > which.bound()
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<BlochVector>,
    /// True when the stop predicate fired before the iteration cap.
    pub reached: bool,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Apply `step` from `start` until `stop` holds or `max_iters` applications.
/// Any per-step resymmetrization must already be composed into `step`.
pub fn iterate(
    step: impl Fn(&BlochVector) -> BlochVector,
    start: BlochVector,
    stop: impl Fn(&BlochVector) -> bool,
    max_iters: usize,
) -> Trajectory {
    let mut points = vec![start];
    loop {
        let current = *points.last().expect("nonempty");
        if stop(&current) {
            return Trajectory { points, reached: true };
        }
        if points.len() > max_iters {
            return Trajectory { points, reached: false };
        }
        points.push(step(&current));
    }
}

/// Mix toward (1,0,0) with the smallest weight p that lands the longitude on
/// a multiple of pi/2^l while keeping r + z > 1.
pub fn angle_align_mix(b: &BlochVector, l: u32) -> Result<(f64, BlochVector)> {
    if b.r() + b.z <= 1.0 {
        return Err(Error::NoNiceAngle(format!(
            "r + z = {} leaves no slack above 1",
            b.r() + b.z
        )));
    }
    let step = std::f64::consts::PI / f64::from(1u32 << l);
    let phi = b.phi();
    let steps_off = phi / step;
    if (steps_off - steps_off.round()).abs() < 1e-12 {
        return Ok((0.0, *b));
    }
    // Mixing toward +x pulls the longitude monotonically toward 0, so the
    // nearest nice angle on the zero side needs the smallest weight.
    let target = if phi > 0.0 { steps_off.floor() * step } else { steps_off.ceil() * step };
    let plus = BlochVector::new(1.0, 0.0, 0.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let phi_mid = b.mix(&plus, mid).phi();
        // phi moves toward 0 as p grows; bracket the crossing of `target`.
        if (phi_mid - target) * phi.signum() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let out = b.mix(&plus, p);
    if out.r() + out.z <= 1.0 {
        return Err(Error::NoNiceAngle(format!(
            "longitude {phi:.6} needs weight {p:.6}, which sinks r + z to {:.6}",
            out.r() + out.z
        )));
    }
    Ok((p, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkOutcome {
    pub success: bool,
    pub steps: u32,
}

/// The +-theta phase random walk: each parity check adds theta on even parity
/// and subtracts it on odd, absorbing at +theta. At theta = pi/4 the
/// half-turn correction repairs the odd branch, so one check always suffices.
pub fn phase_injection_walk(
    theta: f64,
    cap: u32,
    with_correction: bool,
    seed: u64,
) -> WalkOutcome {
    assert!(cap >= 1, "walk needs at least one step");
    if with_correction && (theta - std::f64::consts::FRAC_PI_4).abs() < 1e-12 {
        return WalkOutcome { success: true, steps: 1 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut position: i64 = 0;
    for steps in 1..=cap {
        position += if rng.random::<bool>() { 1 } else { -1 };
        if position == 1 {
            return WalkOutcome { success: true, steps };
        }
    }
    WalkOutcome { success: false, steps: cap }
}

/// Bisection for a sign change of `f` on [lo, hi], to absolute tolerance
/// `tol` in the argument.
pub fn bisect_sign_change(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BadBracket(format!(
            "f({lo}) = {flo:.3e} and f({hi}) = {fhi:.3e} have the same sign"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection for the boundary of a predicate that holds at `lo` and fails at
/// `hi` (or vice versa).
pub fn bisect_predicate_boundary(
    pred: impl Fn(f64) -> bool,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let (plo, phi) = (pred(lo), pred(hi));
    if plo == phi {
        return Err(Error::BadBracket(format!(
            "predicate is {plo} at both {lo} and {hi}"
        )));
    }
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) == plo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Endpoints of the interval where one dual round strictly gains, x' > x.
/// The fixed-point equation factors as x (2x - 1)(x^3 + x - 1) = 0 after
/// clearing the denominator, so the lower endpoint is exactly 1/2 and the
/// upper is the real root of x^3 + x - 1.
pub fn dual_round_gain_interval() -> (f64, f64) {
    let upper = bisect_sign_change(|x| x * x * x + x - 1.0, 0.67, 0.69, 1e-15)
        .expect("cubic changes sign on [0.67, 0.69]");
    (0.5, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_ball(rng: &mut ChaCha8Rng) -> BlochVector {
        loop {
            let b = BlochVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if b.norm() <= 1.0 {
                return b;
            }
        }
    }

    #[test]
    fn parity_map_fixes_the_poles_of_its_axes() {
        for fixed in [BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(1.0, 0.0, 0.0)] {
            let out = parity_map(&fixed);
            assert!((out.x - fixed.x).abs() < 1e-15);
            assert!((out.y - fixed.y).abs() < 1e-15);
            assert!((out.z - fixed.z).abs() < 1e-15);
        }
    }

    #[test]
    fn parity_map_doubles_the_longitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let b = random_ball(&mut rng);
            if b.r() < 1e-3 {
                continue;
            }
            let out = parity_map(&b);
            let expect = (2.0 * b.phi()).rem_euclid(2.0 * std::f64::consts::PI);
            let got = out.phi().rem_euclid(2.0 * std::f64::consts::PI);
            let diff = (expect - got).abs();
            let wrapped = diff.min(2.0 * std::f64::consts::PI - diff);
            assert!(wrapped < 1e-12, "longitude {} -> {} not doubled", b.phi(), out.phi());
        }
    }

    #[test]
    fn parity_map_preserves_r_plus_z_above_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut checked = 0;
        while checked < 10_000 {
            let b = random_ball(&mut rng);
            if b.r() + b.z <= 1.0 {
                continue;
            }
            checked += 1;
            let out = parity_map(&b);
            assert!(
                out.r() + out.z > 1.0,
                "gain region left at ({}, {}, {})",
                b.x,
                b.y,
                b.z
            );
        }
    }

    #[test]
    fn dual_round_closed_form_matches_its_construction_from_parity_checks() {
        for i in 0..100 {
            let x = i as f64 / 100.0;
            let b = BlochVector::new(x, 0.0, x);
            let p = parity_map(&b);
            let composed = symmetrize_xz(&dual_parity_check_two(&p, &p));
            let closed = dual_round_map(x);
            assert!(
                (composed.x - closed).abs() < 1e-13 && (composed.z - closed).abs() < 1e-13,
                "mismatch at x = {x}"
            );
        }
    }

    #[test]
    fn dual_round_gains_strictly_inside_its_interval_only() {
        let (lo, hi) = dual_round_gain_interval();
        assert_eq!(lo, 0.5);
        assert!((0.67..0.69).contains(&hi));
        let root = hi * hi * hi + hi - 1.0;
        assert!(root.abs() < 1e-10, "cubic root to bisection tolerance");
        assert!(dual_round_map(0.51) > 0.51);
        assert!(dual_round_map(0.49) < 0.49);
        assert!(dual_round_map(0.7) < 0.7);
        assert_eq!(dual_round_map(0.5), 0.5, "lower endpoint is exactly fixed");
    }

    #[test]
    fn pair_parity_zeroes_y_and_matches_parity_on_the_xz_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let b = random_ball(&mut rng);
            let out = pair_parity_map(&b);
            assert!(out.y.abs() < 1e-15, "y must be zeroed");
            let r2 = b.x * b.x + b.y * b.y;
            assert!((out.x - r2 / (1.0 + b.z * b.z)).abs() < 1e-13);
        }
        let equator = BlochVector::new(0.0, 0.8, 0.0);
        let out = pair_parity_map(&equator);
        assert!((out.x - 0.64).abs() < 1e-15 && out.y == 0.0 && out.z.abs() < 1e-15);
    }

    #[test]
    fn twisted_map_on_the_diagonal_matches_the_symmetric_step_magnitude() {
        for i in 1..20 {
            let s = i as f64 / (20.0 * 3f64.sqrt()); // s in (0, 1/sqrt3)
            let b = BlochVector::new(s, s, s);
            let out = twisted_five_qubit_map(&b);
            let m = 2.0 * (5.0 * s.powi(3) - 3.0 * s.powi(5)) / (1.0 + 15.0 * s.powi(4));
            assert!((out.x - m).abs() < 1e-13, "x at s = {s}");
            assert!((out.y + m).abs() < 1e-13, "y at s = {s}");
            assert!((out.z - m).abs() < 1e-13, "z at s = {s}");
            let f = s * 3f64.sqrt();
            let (_, f_out) = five_qubit_symmetric_step(&FidelityTuple::uniform(f));
            assert!(
                (m - f_out / 3f64.sqrt()).abs() < 1e-13,
                "twist changes the diagonal magnitude at s = {s}"
            );
        }
    }

    #[test]
    fn twisted_scheme_fixes_both_diagonal_fixed_points() {
        for s in [1.0 / 3f64.sqrt(), 1.0 / 7f64.sqrt()] {
            let b = BlochVector::new(s, s, s);
            let out = twisted_scheme_step(&b);
            assert!(
                (out.x - s).abs() < 1e-13
                    && (out.y - s).abs() < 1e-13
                    && (out.z - s).abs() < 1e-13,
                "diagonal point {s} should be fixed"
            );
        }
    }

    #[test]
    fn symmetric_step_evaluates_the_known_special_points() {
        let (p, f) = five_qubit_symmetric_step(&FidelityTuple::uniform(1.0));
        assert!((p - 1.0 / 6.0).abs() < 1e-15, "success probability at perfect inputs");
        assert!((f - 1.0).abs() < 1e-15, "perfect inputs stay perfect");
        let fixed = (3f64 / 7.0).sqrt();
        let (_, f_fixed) = five_qubit_symmetric_step(&FidelityTuple::uniform(fixed));
        assert!((f_fixed - fixed).abs() < 1e-12, "sqrt(3/7) is the nontrivial fixed point");
        let bumped = 1.01 * fixed;
        let (_, f_up) = five_qubit_symmetric_step(&FidelityTuple::uniform(bumped));
        assert!(f_up > bumped, "inputs above the fixed point gain fidelity");
    }

    #[test]
    fn elementary_symmetric_sums_match_direct_subset_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let t = FidelityTuple {
                f: [
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                ],
            };
            for s in 0..=5 {
                let mut direct = 0.0;
                for mask in 0u32..32 {
                    if mask.count_ones() as usize != s {
                        continue;
                    }
                    let mut prod = 1.0;
                    for i in 0..5 {
                        if mask >> i & 1 == 1 {
                            prod *= t.f[i];
                        }
                    }
                    direct += prod;
                }
                assert!((t.elem_sym(s) - direct).abs() < 1e-12, "size-{s} symmetric sum");
            }
        }
    }

    #[test]
    fn derivative_numerator_matches_the_quotient_rule_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let f4 = [
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            ];
            // With a = e3 - 2 e5 and b = 3 + e4 in all five inputs, the
            // quotient-rule numerator b da/df5 - a db/df5 reduces to
            // 3 e2' - 6 e4' + e2' e4' - 2 e4'^2 - e3'^2 in the other four.
            let quad = FidelityTuple { f: [f4[0], f4[1], f4[2], f4[3], 0.0] };
            let e2 = quad.elem_sym(2);
            let e3 = quad.elem_sym(3);
            let e4 = quad.elem_sym(4);
            let reduced = 3.0 * e2 - 6.0 * e4 + e2 * e4 - 2.0 * e4 * e4 - e3 * e3;
            let closed_form = fidelity_derivative_numerator(f4);
            assert!(
                (reduced - closed_form).abs() < 1e-10,
                "the two numerator expressions disagree"
            );
            assert!(closed_form >= 0.0, "numerator must be nonnegative on the unit box");
        }
    }

    #[test]
    fn region_predicates_classify_the_landmark_points() {
        let h = h_state();
        assert!(region_check(&h, Region::PairSumUnit));
        assert!(region_check(&h, Region::PairSumCodes));
        assert!(region_check(&h, Region::ConeUnit));
        let inside = BlochVector::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        for region in ALL_REGIONS {
            assert!(!region_check(&inside, region), "octahedron corner mixture is inside");
        }
        let t = t_state();
        assert!(region_check(&t, Region::DiagonalFiveQubit), "diagonal magic state");
    }

    #[test]
    fn region_predicates_are_invariant_under_signed_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for _ in 0..200 {
            let b = random_ball(&mut rng);
            let coords = [b.x, b.y, b.z];
            for perm in perms {
                for signs in 0..8u32 {
                    let pick = |i: usize| {
                        let v = coords[perm[i]];
                        if signs >> i & 1 == 1 {
                            -v
                        } else {
                            v
                        }
                    };
                    let moved = BlochVector::new(pick(0), pick(1), pick(2));
                    for region in ALL_REGIONS {
                        assert_eq!(
                            region_check(&b, region),
                            region_check(&moved, region),
                            "{} broke under a signed permutation",
                            region.tag()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn iteration_from_inside_the_octahedron_never_stops() {
        let start = BlochVector::new(0.2, 0.1, 0.3);
        let t = iterate(
            parity_map,
            start,
            |b| ALL_REGIONS.iter().any(|&r| region_check(b, r)),
            50,
        );
        assert!(!t.reached, "stabilizer mixtures stay inside every region");
        assert_eq!(t.steps(), 50);
    }

    #[test]
    fn angle_align_finds_zero_weight_for_already_nice_angles() {
        let b = BlochVector::new(0.7, 0.7, 0.05);
        let (p, out) = angle_align_mix(&b, 2).unwrap();
        assert_eq!(p, 0.0, "longitude pi/4 is already a multiple of pi/4");
        assert_eq!(out, b);
    }

    #[test]
    fn angle_align_lands_on_a_nice_angle_and_keeps_slack() {
        let b = BlochVector::new(0.81, 0.42, 0.3);
        let l = 3;
        let (p, out) = angle_align_mix(&b, l).unwrap();
        assert!(p > 0.0 && p < 1.0);
        let step = std::f64::consts::PI / 8.0;
        let ratio = out.phi() / step;
        assert!(
            (ratio - ratio.round()).abs() < 1e-9,
            "landing longitude {} is not a multiple of pi/8",
            out.phi()
        );
        assert!(out.r() + out.z > 1.0, "slack must survive the mixing");
    }

    #[test]
    fn angle_align_rejects_states_without_slack() {
        let b = BlochVector::new(0.6, 0.0, 0.4);
        assert!(angle_align_mix(&b, 4).is_err(), "r + z = 1 exactly has no slack");
    }

    #[test]
    fn corrected_quarter_angle_walk_ends_in_one_step() {
        for seed in 0..20 {
            let out =
                phase_injection_walk(std::f64::consts::FRAC_PI_4, 1000, true, seed);
            assert_eq!(out, WalkOutcome { success: true, steps: 1 });
        }
    }

    #[test]
    fn walk_success_frequency_matches_the_first_passage_law() {
        // P(first passage to +1 within 7 steps) = 1/2 + 1/8 + 1/16 + 5/128.
        let exact = 93.0 / 128.0;
        let trials = 40_000;
        let mut hits = 0;
        for seed in 0..trials {
            if phase_injection_walk(0.3, 7, false, seed as u64).success {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!(
            (freq - exact).abs() < 0.01,
            "empirical {freq} vs exact first-passage {exact}"
        );
    }

    #[test]
    fn one_step_walk_succeeds_about_half_the_time() {
        let trials = 20_000;
        let mut hits = 0;
        for seed in 0..trials {
            let out = phase_injection_walk(0.3, 1, false, seed as u64);
            assert_eq!(out.steps, 1);
            if out.success {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "single step is a fair coin, got {freq}");
    }

    #[test]
    fn bisection_rejects_brackets_without_a_sign_change() {
        assert!(bisect_sign_change(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
        let root = bisect_sign_change(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-11);
    }
}
