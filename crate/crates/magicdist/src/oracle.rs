//! Dense density-matrix protocols, independent of every closed form in the
//! rest of the crate: stabilizer projections, explicit unitaries, partial
//! traces, and logical readout, with success-probability bookkeeping. The
//! tests here re-derive the parity, dual-round, pair-parity, and five-qubit
//! maps from first principles and check the coefficient-space reduction
//! against an explicit disentangling Clifford.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coeffs::{pauli_trace, DensityMatrix, PauliCoefficients};
use crate::maps::BlochVector;
use crate::pauli::{commutes, pauli_multiply, symplectic_product, to_dense, PauliOperator,
    MAX_QUBITS};
use crate::reductions::{logical_operators, ReductionOutput};
use crate::stabilizer::StabilizerGroup;
use crate::{Error, Result};

/// Branch probabilities at or below this are reported as impossible.
const ZERO_BRANCH: f64 = 1e-14;

/// Projector onto the joint +1 eigenspace of the group, as the average of its
/// dense elements. Idempotent and Hermitian up to rounding.
pub fn projector(group: &StabilizerGroup) -> DMatrix<Complex64> {
    let dim = 1usize << group.n;
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    let elements = group.elements();
    for e in &elements {
        acc += to_dense(e);
    }
    acc * Complex64::new(1.0 / elements.len() as f64, 0.0)
}

/// Trace out every qubit not in `keep` (strictly increasing indices). The
/// kept qubits retain their relative order; qubit j occupies index bit
/// n-1-j, so the first kept qubit stays the most significant.
pub fn partial_trace(
    m: &DMatrix<Complex64>,
    n: usize,
    keep: &[usize],
) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::InvalidState(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || *keep.last().unwrap() >= n
    {
        return Err(Error::InvalidState(format!(
            "keep list {keep:?} is not a strictly increasing subset of 0..{n}"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
    let k = keep.len();
    let bit = |j: usize| n - 1 - j;
    let mut out = DMatrix::<Complex64>::zeros(1 << k, 1 << k);
    for ro in 0..1usize << k {
        for co in 0..1usize << k {
            let mut base_row = 0usize;
            let mut base_col = 0usize;
            for (pos, &j) in keep.iter().enumerate() {
                base_row |= ((ro >> (k - 1 - pos)) & 1) << bit(j);
                base_col |= ((co >> (k - 1 - pos)) & 1) << bit(j);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..1usize << traced.len() {
                let mut extra = 0usize;
                for (pos, &j) in traced.iter().enumerate() {
                    extra |= ((t >> pos) & 1) << bit(j);
                }
                acc += m[(base_row | extra, base_col | extra)];
            }
            out[(ro, co)] = acc;
        }
    }
    Ok(out)
}

/// One step of a dense postselected protocol.
pub enum ProtocolStep {
    /// Project onto the group's +1 eigenspace. With `renormalize` the branch
    /// probability is folded into the running success probability and the
    /// state rescaled to unit trace; without it the state stays unnormalized.
    Project {
        group: StabilizerGroup,
        renormalize: bool,
    },
    /// Conjugate the state by a unitary on all current qubits.
    ApplyUnitary(DMatrix<Complex64>),
    /// Discard every qubit not listed.
    PartialTrace { keep: Vec<usize> },
    /// Project onto the code and read the chosen logical frame out into a
    /// fresh single qubit (logical Y is fixed as i X_L Z_L). Folds the branch
    /// probability into the running success probability.
    Decode {
        group: StabilizerGroup,
        logical_x: PauliOperator,
        logical_z: PauliOperator,
    },
}

/// Run the steps on the tensor product of the inputs (first input = leftmost
/// factor) and return the final state with the accumulated success
/// probability. A branch whose probability vanishes is reported as a zeroed
/// state with probability 0 rather than an error, so parameter sweeps can
/// record it and move on.
pub fn run_protocol(
    inputs: &[DensityMatrix],
    steps: &[ProtocolStep],
) -> Result<(DensityMatrix, f64)> {
    if inputs.is_empty() {
        return Err(Error::InvalidState("protocol needs at least one input".into()));
    }
    let mut n: usize = inputs.iter().map(|d| d.n).sum();
    if n > MAX_QUBITS {
        return Err(Error::QubitLimit(n, MAX_QUBITS));
    }
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for inp in inputs {
        m = m.kronecker(&inp.m);
    }
    let mut probability = 1.0f64;
    for step in steps {
        match step {
            ProtocolStep::Project { group, renormalize } => {
                if group.n != n {
                    return Err(Error::QubitMismatch { expected: n, got: group.n });
                }
                let pi = projector(group);
                m = &pi * &m * &pi;
                if *renormalize {
                    let p = m.diagonal().sum().re;
                    probability *= p.max(0.0);
                    if p <= ZERO_BRANCH {
                        let dim = 1usize << n;
                        return Ok((DensityMatrix::new(n, DMatrix::zeros(dim, dim))?, 0.0));
                    }
                    m *= Complex64::new(1.0 / p, 0.0);
                }
            }
            ProtocolStep::ApplyUnitary(u) => {
                let dim = 1usize << n;
                if u.nrows() != dim || u.ncols() != dim {
                    return Err(Error::InvalidState(format!(
                        "unitary is {}x{}, expected {dim}x{dim}",
                        u.nrows(),
                        u.ncols()
                    )));
                }
                m = u * &m * u.adjoint();
            }
            ProtocolStep::PartialTrace { keep } => {
                m = partial_trace(&m, n, keep)?;
                n = keep.len();
            }
            ProtocolStep::Decode { group, logical_x, logical_z } => {
                if group.n != n {
                    return Err(Error::QubitMismatch { expected: n, got: group.n });
                }
                check_logical_frame(group, logical_x, logical_z)?;
                let pi = projector(group);
                let post = &pi * &m * &pi;
                let p = post.diagonal().sum().re;
                probability *= p.max(0.0);
                if p <= ZERO_BRANCH {
                    return Ok((DensityMatrix::new(1, DMatrix::zeros(2, 2))?, 0.0));
                }
                let logical_y = pauli_multiply(logical_x, logical_z)?.times_i();
                let x = pauli_trace(&post, logical_x).re / p;
                let y = pauli_trace(&post, &logical_y).re / p;
                let z = pauli_trace(&post, logical_z).re / p;
                m = single_qubit_density(x, y, z);
                n = 1;
            }
        }
    }
    Ok((DensityMatrix::new(n, m)?, probability))
}

fn check_logical_frame(
    group: &StabilizerGroup,
    logical_x: &PauliOperator,
    logical_z: &PauliOperator,
) -> Result<()> {
    for l in [logical_x, logical_z] {
        if l.n != group.n {
            return Err(Error::QubitMismatch { expected: group.n, got: l.n });
        }
        if !l.is_hermitian() {
            return Err(Error::InvalidGroup(format!(
                "logical operator {} is not Hermitian",
                l.label()
            )));
        }
        for g in &group.generators {
            if !commutes(l, g)? {
                return Err(Error::InvalidGroup(format!(
                    "logical operator {} does not commute with generator {}",
                    l.label(),
                    g.label()
                )));
            }
        }
    }
    if commutes(logical_x, logical_z)? {
        return Err(Error::InvalidGroup(format!(
            "logical pair {}, {} must anticommute",
            logical_x.label(),
            logical_z.label()
        )));
    }
    Ok(())
}

fn single_qubit_density(x: f64, y: f64, z: f64) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )
}

/// A Clifford unitary that maps the canonical logical pair of the two-qubit
/// reduction to X and Z on qubit 0 and the measured generator to Z on qubit
/// 1, so the projected state factors as (logical qubit) x |0><0|. Built by
/// completing (X_L, Z_L, generator) to a symplectic basis and mapping the
/// joint eigenvectors to the computational basis.
pub fn disentangling_clifford(r: &StabilizerGroup) -> Result<DMatrix<Complex64>> {
    if r.n != 2 || r.generators.len() != 1 {
        return Err(Error::InvalidGroup(format!(
            "disentangler wants one generator on two qubits, got {} on {}",
            r.generators.len(),
            r.n
        )));
    }
    let (xl, _, zl) = logical_operators(r)?;
    let g = &r.generators[0];
    // Fourth symplectic direction: anticommutes with the generator, commutes
    // with both logicals.
    let w_label = (1u32..16)
        .find(|&l| {
            symplectic_product(l >> 2, l & 3, g.x_bits, g.z_bits) == 1
                && symplectic_product(l >> 2, l & 3, xl.x_bits, xl.z_bits) == 0
                && symplectic_product(l >> 2, l & 3, zl.x_bits, zl.z_bits) == 0
        })
        .ok_or_else(|| Error::InvalidGroup("no symplectic completion".into()))?;
    let w = to_dense(&PauliOperator::from_label_index(2, w_label as usize));

    // The (Z_L, g) = (+1, +1) joint eigenspace has rank one; take its best
    // column as the seed eigenvector.
    let id = DMatrix::<Complex64>::identity(4, 4);
    let sector = (&id + to_dense(&zl)) * (&id + to_dense(g)) * Complex64::new(0.25, 0.0);
    let mut seed_col = 0;
    for j in 1..4 {
        if sector.column(j).norm() > sector.column(seed_col).norm() + 1e-12 {
            seed_col = j;
        }
    }
    let psi00 = sector.column(seed_col).unscale(sector.column(seed_col).norm());
    let xd = to_dense(&xl);
    let psi01 = &w * &psi00;
    let psi10 = &xd * &psi00;
    let psi11 = &xd * &psi01;

    // Row a*2+b receives the (Z_L, g) = ((-1)^a, (-1)^b) eigenvector, so
    // U Z_L U* = ZI, U g U* = IZ, U X_L U* = XI, U W U* = IX.
    let mut u = DMatrix::<Complex64>::zeros(4, 4);
    for (row, psi) in [(0, &psi00), (1, &psi01), (2, &psi10), (3, &psi11)] {
        for col in 0..4 {
            u[(row, col)] = psi[col].conj();
        }
    }
    debug_assert!((&u * u.adjoint() - id).norm() < 1e-10, "disentangler is unitary");
    Ok(u)
}

/// Dense re-derivation of `apply_reduction` for two qubits: project, rotate
/// by the explicit disentangling Clifford, trace out the fixed qubit, and
/// read the surviving qubit's coefficients. Matches the coset sums in the
/// same canonical logical frame, with c'_I equal to half the branch
/// probability. A zero-probability branch comes back degenerate (c'_I = 0).
pub fn oracle_reduction(
    s: &PauliCoefficients<f64>,
    r: &StabilizerGroup,
) -> Result<ReductionOutput<f64>> {
    if s.n != 2 {
        return Err(Error::QubitMismatch { expected: 2, got: s.n });
    }
    if r.n != 2 {
        return Err(Error::QubitMismatch { expected: 2, got: r.n });
    }
    let u = disentangling_clifford(r)?;
    let rho = DensityMatrix::from_coeffs(s);
    let pi = projector(r);
    let rotated = &u * (&pi * &rho.m * &pi) * u.adjoint();
    let free = partial_trace(&rotated, 2, &[0])?;
    // Single-qubit label indices are I=0, Z=1, X=2, Y=3; the output order is
    // (I, X, Y, Z) to match the coset sums.
    let c = [0usize, 2, 3, 1].map(|idx| {
        pauli_trace(&free, &PauliOperator::from_label_index(1, idx)).re / 2.0
    });
    Ok(ReductionOutput { c })
}

/// The quarter-period twist: an order-three Clifford rotation cycling the
/// Pauli axes, with matrix ((-1+i, 1+i), (-1+i, -1-i))/2.
pub fn twist_gate() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(-0.5, 0.5),
            Complex64::new(0.5, 0.5),
            Complex64::new(-0.5, 0.5),
            Complex64::new(-0.5, -0.5),
        ],
    )
}

/// Distill five single-qubit states through the five-qubit code: twist copy
/// i by the quarter-period rotation to the power `twists[i]` (0, 1, or 2),
/// project onto the code, and decode in the transversal logical frame.
/// Returns the output Bloch vector and the success probability; an
/// impossible branch comes back as the zero vector with probability 0.
pub fn oracle_code_distill(
    inputs: &[BlochVector; 5],
    twists: [u8; 5],
) -> Result<(BlochVector, f64)> {
    if twists.iter().any(|&k| k > 2) {
        return Err(Error::InvalidState(format!(
            "twist powers must be 0, 1, or 2, got {twists:?}"
        )));
    }
    let t = twist_gate();
    let rhos: Vec<DensityMatrix> = inputs
        .iter()
        .zip(twists)
        .map(|(b, k)| {
            let mut m = DensityMatrix::from_coeffs(&PauliCoefficients::from_bloch(b)).m;
            for _ in 0..k {
                m = &t * &m * t.adjoint();
            }
            DensityMatrix { n: 1, m }
        })
        .collect();
    let (logical_x, logical_z) = crate::data::five_qubit_logicals();
    let step = ProtocolStep::Decode {
        group: crate::data::five_qubit_code(),
        logical_x,
        logical_z,
    };
    let (out, p) = run_protocol(&rhos, &[step])?;
    if p <= ZERO_BRANCH {
        return Ok((BlochVector::new(0.0, 0.0, 0.0), 0.0));
    }
    let c = out.to_coeffs(1e-9)?;
    Ok((BlochVector::new(2.0 * c.c[2], 2.0 * c.c[3], 2.0 * c.c[1]), p))
}
