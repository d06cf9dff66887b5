//! Noise thresholds for a single non-Clifford rotation: how much noise the
//! pi/8 rotation tolerates before everything it can produce, directly or
//! through the Bell-pair construction, falls inside the stabilizer regions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::coeffs::PauliCoefficients;
use crate::maps::{bisect_predicate_boundary, region_check, BlochVector, Region};
use crate::reductions::apply_reduction;
use crate::stabilizer::StabilizerGroup;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    /// rho -> (1-p) rho + p I/2.
    Depolarizing,
    /// rho -> (1-p) rho + p Z rho Z, with p the flip probability.
    Dephasing,
    /// With probability p the output is replaced by an adversarial state,
    /// chosen against the distillability criterion.
    WorstCase,
}

pub const ALL_NOISE_KINDS: [NoiseKind; 3] =
    [NoiseKind::Depolarizing, NoiseKind::Dephasing, NoiseKind::WorstCase];

impl NoiseKind {
    pub fn tag(&self) -> &'static str {
        match self {
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::WorstCase => "worst_case",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        ALL_NOISE_KINDS
            .iter()
            .copied()
            .find(|k| k.tag() == tag)
            .ok_or_else(|| Error::BadLabel(format!("unknown noise kind {tag:?}")))
    }

    /// Upper end of the threshold search range. A flip probability above
    /// 1/2 is the mirror channel followed by a deterministic (and perfectly
    /// correctable) Z, so dephasing rates are only meaningful up to 1/2;
    /// past it the distillability criterion recovers and bisection would
    /// chase a spurious second crossing.
    pub fn rate_ceiling(&self) -> f64 {
        match self {
            NoiseKind::Dephasing => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseChannel {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseChannel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidState(format!("noise rate {p} is outside [0, 1]")));
        }
        Ok(NoiseChannel { kind, p })
    }
}

/// The pi/8 rotation exp(i pi Z / 8), as a dense gate.
pub fn pi8_gate() -> DMatrix<Complex64> {
    let theta = std::f64::consts::FRAC_PI_8;
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(theta.cos(), theta.sin()),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(theta.cos(), -theta.sin()),
        ],
    )
}

/// Bloch vector of the noisy rotation applied to |+>: the noiseless gate
/// turns (1, 0, 0) on the equator to (1, -1, 0)/sqrt2. Depolarizing shrinks
/// by 1-p, dephasing by 1-2p. The worst-case adversary replaces the output
/// with the antipodal pure state, shrinking by 1-2p; past p = 1/2 it can
/// cancel the equatorial part entirely, so the factor floors at zero.
pub fn noisy_pi8_on_plus(ch: &NoiseChannel) -> BlochVector {
    let factor = match ch.kind {
        NoiseKind::Depolarizing => 1.0 - ch.p,
        NoiseKind::Dephasing => 1.0 - 2.0 * ch.p,
        NoiseKind::WorstCase => (1.0 - 2.0 * ch.p).max(0.0),
    };
    BlochVector::new(factor * FRAC_1_SQRT_2, -factor * FRAC_1_SQRT_2, 0.0)
}

/// Two-qubit coefficients of the noisy rotation applied to the second half
/// of a Bell pair. With q the surviving fraction of the equatorial
/// coordinates, the state is
///   (1/4)(II + q/sqrt2 (XX - XY - YX - YY) + c ZZ),
/// where depolarizing gives q = 1-p, c = 1-p and dephasing gives q = 1-2p,
/// c = 1. The worst-case replacement branch is uncorrelated and the free
/// adversarial marginal moves only coordinates the parity check discards, so
/// it is pinned at the center and coincides with depolarizing.
pub fn jamiolkowski_state(ch: &NoiseChannel) -> PauliCoefficients<f64> {
    let (q, c) = match ch.kind {
        NoiseKind::Depolarizing | NoiseKind::WorstCase => (1.0 - ch.p, 1.0 - ch.p),
        NoiseKind::Dephasing => (1.0 - 2.0 * ch.p, 1.0),
    };
    let mut s = PauliCoefficients::<f64>::maximally_mixed(2);
    let w = q * FRAC_1_SQRT_2 / 4.0;
    s.set("XX", w).unwrap();
    s.set("XY", -w).unwrap();
    s.set("YX", -w).unwrap();
    s.set("YY", -w).unwrap();
    s.set("ZZ", c / 4.0).unwrap();
    s
}

/// Depolarizing rate below which the Bell-pair route distills: (6-2sqrt2)/7.
pub fn jamiolkowski_threshold() -> f64 {
    (6.0 - 2.0 * SQRT_2) / 7.0
}

/// Depolarizing rate below which the direct route distills: 1 - 1/sqrt2.
pub fn direct_depolarizing_threshold() -> f64 {
    1.0 - FRAC_1_SQRT_2
}

/// Rate below which the direct route survives antipodal replacement (and,
/// with the flip-probability convention, dephasing): (2-sqrt2)/4.
pub fn antipodal_replacement_threshold() -> f64 {
    (2.0 - SQRT_2) / 4.0
}

/// A candidate value for the same worst-case boundary that is larger by a
/// factor of sqrt2, (sqrt2-1)/2. The searches here reproduce
/// antipodal_replacement_threshold; this constant is reported alongside it
/// for comparison.
pub fn alternate_worst_case_constant() -> f64 {
    (SQRT_2 - 1.0) / 2.0
}

/// Renormalized output of the even-parity check on the Bell-pair state at
/// depolarizing rate (6-2sqrt2)/7 - eps, in the parity map's frame:
/// (sqrt2 q/(1+q)) (1, -1, 0) with q = (1+2sqrt2)/7 + eps. At eps = 0 the
/// coordinates satisfy |x|+|y| = 1 exactly; any eps > 0 pushes them outside
/// the octahedron.
pub fn pi8_parity_output(eps: f64) -> BlochVector {
    let q = (1.0 + 2.0 * SQRT_2) / 7.0 + eps;
    let x = SQRT_2 * q / (1.0 + q);
    BlochVector::new(x, -x, 0.0)
}

/// A second closed-form family for the same construction,
/// ((1+2sqrt2)q - 1, -2sqrt2 q, 0)/(1+3q) at q = (1+2sqrt2)/7 + eps: it
/// meets |x|+|y| = 1 at eps = 0 exactly like pi8_parity_output and shares
/// its threshold rate, but its success weight (1+3q)/4 is not the success
/// weight of any two-to-one reduction of the Bell-pair state (the tests
/// check all of them), so it describes a different renormalization. Kept
/// for side-by-side reporting.
pub fn pi8_parity_reference(eps: f64) -> BlochVector {
    let q = (1.0 + 2.0 * SQRT_2) / 7.0 + eps;
    let den = 1.0 + 3.0 * q;
    BlochVector::new(
        ((1.0 + 2.0 * SQRT_2) * q - 1.0) / den,
        -2.0 * SQRT_2 * q / den,
        0.0,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistillCriterion {
    /// Parity-check the Bell-pair state down to one qubit, then ask for
    /// max pair sum > 1.
    JamiolkowskiParity,
    /// Apply the noisy rotation to |+> directly and ask for
    /// max pair sum > 1.
    DirectPlus,
}

pub const ALL_CRITERIA: [DistillCriterion; 2] =
    [DistillCriterion::JamiolkowskiParity, DistillCriterion::DirectPlus];

impl DistillCriterion {
    pub fn tag(&self) -> &'static str {
        match self {
            DistillCriterion::JamiolkowskiParity => "jamiolkowski_parity",
            DistillCriterion::DirectPlus => "direct_plus",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        ALL_CRITERIA
            .iter()
            .copied()
            .find(|c| c.tag() == tag)
            .ok_or_else(|| Error::BadLabel(format!("unknown criterion tag {tag:?}")))
    }
}

/// Whether the route is still distillable at rate p.
pub fn distillable(kind: NoiseKind, criterion: DistillCriterion, p: f64) -> bool {
    let b = match criterion {
        DistillCriterion::DirectPlus => noisy_pi8_on_plus(&NoiseChannel { kind, p }),
        DistillCriterion::JamiolkowskiParity => {
            let s = jamiolkowski_state(&NoiseChannel { kind, p });
            let parity = StabilizerGroup::from_labels(&["ZZ"]).expect("parity group");
            match apply_reduction(&s, &parity).expect("two-qubit reduction").bloch() {
                Some(b) => b,
                None => return false,
            }
        }
    };
    region_check(&b, Region::PairSumUnit)
}

/// Largest rate where the predicate still holds on [lo, hi]. The predicate
/// must hold at lo, fail at hi, and flip exactly once on a 400-point scan;
/// anything else is reported instead of silently bisecting a spurious
/// crossing.
pub fn monotone_boundary(
    pred: impl Fn(f64) -> bool,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let grid = 400;
    let mut prev = pred(lo);
    if !prev {
        return Err(Error::NotMonotone(format!("criterion already fails at rate {lo}")));
    }
    let mut flips = 0;
    for i in 1..=grid {
        let p = lo + (hi - lo) * i as f64 / grid as f64;
        let cur = pred(p);
        if cur != prev {
            flips += 1;
            prev = cur;
        }
    }
    if flips != 1 {
        return Err(Error::NotMonotone(format!(
            "criterion flips {flips} times on [{lo}, {hi}], expected exactly one crossing"
        )));
    }
    bisect_predicate_boundary(pred, lo, hi, tol)
}

/// Bisect for the noise threshold: the largest rate at which the chosen
/// route still produces something distillable.
pub fn threshold_search(kind: NoiseKind, criterion: DistillCriterion) -> Result<f64> {
    monotone_boundary(
        |p| distillable(kind, criterion, p),
        0.0,
        kind.rate_ceiling(),
        1e-12,
    )
}

/// The closed-form boundary each (noise, criterion) pair lands on.
pub fn expected_threshold(kind: NoiseKind, criterion: DistillCriterion) -> f64 {
    match (kind, criterion) {
        // The parity check only sees the surviving fraction of the
        // equatorial coordinates, so replacement noise costs exactly as much
        // as depolarizing on the Bell-pair route.
        (NoiseKind::Depolarizing | NoiseKind::WorstCase, DistillCriterion::JamiolkowskiParity) => {
            jamiolkowski_threshold()
        }
        (NoiseKind::Depolarizing, DistillCriterion::DirectPlus) => {
            direct_depolarizing_threshold()
        }
        // Dephasing keeps the ZZ correlation intact, so the Bell pair buys
        // nothing and both routes share the antipodal boundary.
        (NoiseKind::Dephasing, _) | (NoiseKind::WorstCase, DistillCriterion::DirectPlus) => {
            antipodal_replacement_threshold()
        }
    }
}
