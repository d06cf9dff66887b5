//! States as real coefficient vectors over the unsigned Pauli basis.
//!
//! A Hermitian operator rho on n qubits is written rho = sum_P c_P P with
//! c_P = tr(P rho) / 2^n; a normalized state has c_I = 1/2^n. Vectors come in
//! an exact rational flavour (certificates, polytope work) and an f64 flavour
//! (map iteration, oracle comparisons). Conversion between the two is always
//! explicit.

use crate::pauli::{to_dense, PauliOperator};
use crate::rat::{is_psd_hermitian, rat, rat_to_f64, GaussMatrix, GaussRat, Rat};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct PauliCoefficients<T> {
    pub n: usize,
    /// Length 4^n, indexed by `(x_bits << n) | z_bits`.
    pub c: Vec<T>,
}

impl<T: Clone + Zero> PauliCoefficients<T> {
    pub fn zeros(n: usize) -> Self {
        PauliCoefficients { n, c: vec![T::zero(); 1 << (2 * n)] }
    }

    pub fn get(&self, label: &str) -> Result<&T> {
        let p = PauliOperator::parse(label)?;
        if p.n != self.n {
            return Err(Error::QubitMismatch { expected: self.n, got: p.n });
        }
        Ok(&self.c[p.label_index()])
    }

    pub fn set(&mut self, label: &str, value: T) -> Result<()> {
        let p = PauliOperator::parse(label)?;
        if p.n != self.n {
            return Err(Error::QubitMismatch { expected: self.n, got: p.n });
        }
        self.c[p.label_index()] = value;
        Ok(())
    }
}

impl PauliCoefficients<Rat> {
    pub fn maximally_mixed(n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.c[0] = Rat::new(BigInt::one(), BigInt::from(1i64 << n));
        v
    }

    /// Build from (label, value) pairs; unlisted labels are zero.
    pub fn from_label_pairs(n: usize, pairs: &[(&str, Rat)]) -> Result<Self> {
        let mut v = Self::zeros(n);
        for (label, value) in pairs {
            v.set(label, value.clone())?;
        }
        Ok(v)
    }

    pub fn to_f64(&self) -> PauliCoefficients<f64> {
        PauliCoefficients { n: self.n, c: self.c.iter().map(rat_to_f64).collect() }
    }

    /// Single-qubit state (I + x X + y Y + z Z) / 2 with exact coordinates.
    pub fn from_bloch_rational(x: Rat, y: Rat, z: Rat) -> Self {
        let two = Rat::from_integer(BigInt::from(2));
        PauliCoefficients { n: 1, c: vec![rat(1, 2), z / &two, x / &two, y / &two] }
    }

    /// Exact dense matrix sum_P c_P P over the Gaussian rationals.
    pub fn dense_exact(&self) -> GaussMatrix {
        let dim = 1usize << self.n;
        let mut m = GaussMatrix::zeros(dim);
        for (idx, coeff) in self.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let p = PauliOperator::from_label_index(self.n, idx);
            add_pauli_exact(&mut m, &p, coeff);
        }
        m
    }

    /// Trace one and positive semidefinite, decided exactly.
    pub fn is_valid_state(&self) -> bool {
        let half_n = Rat::new(BigInt::one(), BigInt::from(1i64 << self.n));
        self.c[0] == half_n && is_psd_hermitian(&self.dense_exact())
    }

    /// `{"n": 2, "coeffs": [["II", 1, 4], ...]}`; zero entries are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = (0..self.c.len())
            .filter(|&i| !self.c[i].is_zero())
            .map(|i| {
                let label = PauliOperator::from_label_index(self.n, i).label();
                serde_json::json!([label, bigint_json(self.c[i].numer()), bigint_json(self.c[i].denom())])
            })
            .collect();
        serde_json::json!({ "n": self.n, "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::InvalidState("missing qubit count".into()))? as usize;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::QubitLimit(n, crate::pauli::MAX_QUBITS));
        }
        let mut out = Self::zeros(n);
        let entries = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::InvalidState("missing coeffs array".into()))?;
        for entry in entries {
            let triple = entry
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::InvalidState("coeff entry is not [label, num, den]".into()))?;
            let label = triple[0]
                .as_str()
                .ok_or_else(|| Error::InvalidState("coeff label is not a string".into()))?;
            let numer = bigint_from_json(&triple[1])?;
            let denom = bigint_from_json(&triple[2])?;
            if denom.is_zero() {
                return Err(Error::InvalidState(format!("zero denominator for {label}")));
            }
            out.set(label, Rat::new(numer, denom))?;
        }
        Ok(out)
    }
}

/// Coefficients multiply across a tensor product: tr((P tensor Q) rho1 tensor rho2)
/// factors, and the 2^n normalizations cancel exactly.
pub fn tensor_product<T>(
    a: &PauliCoefficients<T>,
    b: &PauliCoefficients<T>,
) -> Result<PauliCoefficients<T>>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    let n = a.n + b.n;
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::QubitLimit(n, crate::pauli::MAX_QUBITS));
    }
    let mut out = PauliCoefficients::<T>::zeros(n);
    let low = (1usize << a.n) - 1;
    for (i, ca) in a.c.iter().enumerate() {
        let (xa, za) = (i >> a.n, i & low);
        for (j, cb) in b.c.iter().enumerate() {
            let (xb, zb) = (j >> b.n, j & ((1usize << b.n) - 1));
            let x = xa | (xb << a.n);
            let z = za | (zb << a.n);
            out.c[(x << n) | z] = ca.clone() * cb.clone();
        }
    }
    Ok(out)
}

pub fn tensor_power<T>(s: &PauliCoefficients<T>, k: usize) -> Result<PauliCoefficients<T>>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    if k == 0 {
        return Err(Error::InvalidState("tensor power needs at least one factor".into()));
    }
    let mut out = s.clone();
    for _ in 1..k {
        out = tensor_product(&out, s)?;
    }
    Ok(out)
}

fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(small) if small.abs() <= (1i64 << 53) => serde_json::json!(small),
        _ => serde_json::json!(v.to_string()),
    }
}

fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidState(format!("bad integer literal {s:?}")));
    }
    Err(Error::InvalidState(format!("expected integer, got {v}")))
}

impl PauliCoefficients<f64> {
    pub fn maximally_mixed(n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.c[0] = 1.0 / (1u64 << n) as f64;
        v
    }

    /// Single-qubit state (I + x X + y Y + z Z) / 2.
    pub fn from_bloch(b: &crate::maps::BlochVector) -> Self {
        PauliCoefficients { n: 1, c: vec![0.5, b.z / 2.0, b.x / 2.0, b.y / 2.0] }
    }

    /// Exact dyadic rationalization (every f64 is a rational number).
    pub fn rationalize(&self) -> PauliCoefficients<Rat> {
        PauliCoefficients {
            n: self.n,
            c: self.c.iter().map(|&x| Rat::from_float(x).expect("finite coefficient")).collect(),
        }
    }
}

/// Exact entries of a Hermitian Pauli accumulated into a matrix: scale times
/// i^|x&z| X^x Z^z, with qubit 0 as the most significant index bit.
fn add_pauli_exact(m: &mut GaussMatrix, p: &PauliOperator, scale: &Rat) {
    let n = p.n;
    let dim = 1usize << n;
    let xr = bitrev(p.x_bits, n) as usize;
    let zr = bitrev(p.z_bits, n) as usize;
    let unit = GaussRat::i_pow((p.x_bits & p.z_bits).count_ones() as u8 + p.phase_exp);
    debug_assert!(p.is_hermitian(), "exact dense conversion expects Hermitian input");
    for col in 0..dim {
        let row = col ^ xr;
        let sign_neg = (col & zr).count_ones() % 2 == 1;
        let mut v = unit.scale(scale);
        if sign_neg {
            v = v.neg();
        }
        m[(row, col)] = m[(row, col)].add(&v);
    }
}

/// Map mask bit j (qubit j) to index bit n-1-j (row/column bit).
fn bitrev(mask: u32, n: usize) -> u32 {
    (0..n).fold(0, |acc, j| acc | ((mask >> j) & 1) << (n - 1 - j))
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub n: usize,
    pub m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(n: usize, m: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(DensityMatrix { n, m })
    }

    pub fn from_coeffs(c: &PauliCoefficients<f64>) -> Self {
        let dim = 1usize << c.n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (idx, &coeff) in c.c.iter().enumerate() {
            if coeff == 0.0 {
                continue;
            }
            let p = PauliOperator::from_label_index(c.n, idx);
            m += to_dense(&p) * Complex64::new(coeff, 0.0);
        }
        DensityMatrix { n: c.n, m }
    }

    /// c_P = tr(P rho) / 2^n. Errors if rho is not Hermitian to `tol`.
    pub fn to_coeffs(&self, tol: f64) -> Result<PauliCoefficients<f64>> {
        let herm_gap = (&self.m - self.m.adjoint()).norm();
        if herm_gap > tol {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (deviation {herm_gap:.3e})"
            )));
        }
        let mut out = PauliCoefficients::<f64>::zeros(self.n);
        let dim = 1usize << self.n;
        for idx in 0..out.c.len() {
            let p = PauliOperator::from_label_index(self.n, idx);
            out.c[idx] = pauli_trace(&self.m, &p).re / dim as f64;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.m.diagonal().sum()
    }

    /// Trace close to one and all eigenvalues at least -tol.
    pub fn is_valid_state(&self, tol: f64) -> bool {
        if (self.trace() - Complex64::new(1.0, 0.0)).norm() > tol {
            return false;
        }
        if (&self.m - self.m.adjoint()).norm() > tol {
            return false;
        }
        let eigs = self.m.clone().symmetric_eigenvalues();
        eigs.iter().all(|&e| e >= -tol)
    }
}

/// tr(P rho), using that P has one nonzero entry per column.
pub fn pauli_trace(m: &DMatrix<Complex64>, p: &PauliOperator) -> Complex64 {
    let n = p.n;
    let dim = 1usize << n;
    debug_assert_eq!(m.nrows(), dim);
    let xr = bitrev(p.x_bits, n) as usize;
    let zr = bitrev(p.z_bits, n) as usize;
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let unit = units
        [(((p.x_bits & p.z_bits).count_ones() as usize) + p.phase_exp as usize) % 4];
    let mut acc = Complex64::new(0.0, 0.0);
    for col in 0..dim {
        let row = col ^ xr;
        let sign = if (col & zr).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        // P[row, col] = unit * sign, so tr(P rho) accumulates rho[col, row].
        acc += m[(col, row)] * unit * sign;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let dim = 1usize << n;
        let a = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
    }

    #[test]
    fn coefficient_round_trip_reproduces_random_hermitian_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let m = random_hermitian(n, &mut rng);
            let c = DensityMatrix { n, m: m.clone() }.to_coeffs(1e-12).unwrap();
            let back = DensityMatrix::from_coeffs(&c);
            assert!(
                (&back.m - &m).norm() < 1e-12,
                "round trip drifted for {n} qubits"
            );
        }
    }

    #[test]
    fn zero_ket_has_equal_identity_and_z_coefficients() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let c = DensityMatrix { n: 1, m }.to_coeffs(1e-12).unwrap();
        assert_eq!(c.get("I").unwrap(), &0.5);
        assert_eq!(c.get("Z").unwrap(), &0.5);
        assert_eq!(c.get("X").unwrap(), &0.0);
        assert_eq!(c.get("Y").unwrap(), &0.0);
    }

    #[test]
    fn exact_dense_matrix_matches_float_dense_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut c = PauliCoefficients::<Rat>::zeros(2);
            for idx in 0..16 {
                c.c[idx] = rat(rng.random_range(-4..=4), rng.random_range(1..=4));
            }
            let exact = c.dense_exact();
            let float = DensityMatrix::from_coeffs(&c.to_f64());
            for row in 0..4 {
                for col in 0..4 {
                    let g = &exact[(row, col)];
                    let f = float.m[(row, col)];
                    assert!(
                        (rat_to_f64(&g.re) - f.re).abs() < 1e-12
                            && (rat_to_f64(&g.im) - f.im).abs() < 1e-12,
                        "entry ({row},{col}) disagrees"
                    );
                }
            }
        }
    }

    #[test]
    fn pure_octant_state_is_valid_but_cube_corner_is_not() {
        let s3 = 0.5773502691896258;
        let mut good = PauliCoefficients::<f64>::maximally_mixed(1);
        good.c[1] = s3 / 2.0;
        good.c[2] = s3 / 2.0;
        good.c[3] = s3 / 2.0;
        assert!(DensityMatrix::from_coeffs(&good).is_valid_state(1e-10),
            "Bloch vector of norm 1 is a pure state");
        let mut bad = PauliCoefficients::<f64>::maximally_mixed(1);
        bad.c[1] = 0.5;
        bad.c[2] = 0.5;
        bad.c[3] = 0.5;
        assert!(!DensityMatrix::from_coeffs(&bad).is_valid_state(1e-10),
            "Bloch vector of norm sqrt(3) leaves the ball");
    }

    #[test]
    fn exact_validity_agrees_on_rational_test_states() {
        // (3/5, 0, 4/5) sits on the sphere: valid, and PSD is tight.
        let on_sphere = PauliCoefficients::from_label_pairs(
            1,
            &[("I", rat(1, 2)), ("X", rat(3, 10)), ("Z", rat(2, 5))],
        )
        .unwrap();
        assert!(on_sphere.is_valid_state(), "point on the Bloch sphere");
        let outside = PauliCoefficients::from_label_pairs(
            1,
            &[("I", rat(1, 2)), ("X", rat(2, 5)), ("Z", rat(2, 5)), ("Y", rat(2, 5))],
        )
        .unwrap();
        assert!(!outside.is_valid_state(), "norm 4sqrt(3)/5 > 1 leaves the ball");
        let wrong_trace = PauliCoefficients::from_label_pairs(1, &[("I", rat(1, 3))]).unwrap();
        assert!(!wrong_trace.is_valid_state(), "trace is 2/3, not 1");
    }

    #[test]
    fn json_round_trip_preserves_exact_entries() {
        let state = PauliCoefficients::from_label_pairs(
            2,
            &[("II", rat(1, 4)), ("XX", rat(-1, 6)), ("ZZ", rat(1, 6)), ("YI", rat(1, 12))],
        )
        .unwrap();
        let v = state.to_json();
        let back = PauliCoefficients::from_json(&v).unwrap();
        assert_eq!(back, state);
    }

    #[test]
    fn tensor_product_multiplies_coefficients_factorwise() {
        let a = PauliCoefficients::from_label_pairs(
            1,
            &[("I", rat(1, 2)), ("X", rat(1, 3)), ("Z", rat(1, 5))],
        )
        .unwrap();
        let b = PauliCoefficients::from_label_pairs(
            1,
            &[("I", rat(1, 2)), ("Y", rat(1, 7))],
        )
        .unwrap();
        let t = tensor_product(&a, &b).unwrap();
        assert_eq!(t.n, 2);
        assert_eq!(t.get("II").unwrap(), &rat(1, 4));
        assert_eq!(t.get("XY").unwrap(), &rat(1, 21), "first factor on qubit 0");
        assert_eq!(t.get("ZI").unwrap(), &rat(1, 10));
        assert_eq!(t.get("IY").unwrap(), &rat(1, 14));
        assert_eq!(t.get("YX").unwrap(), &rat(0, 1));
        let sq = tensor_power(&PauliCoefficients::<Rat>::maximally_mixed(1), 3).unwrap();
        assert_eq!(sq, PauliCoefficients::<Rat>::maximally_mixed(3),
            "mixed states stay mixed under tensor powers");
    }

    #[test]
    fn sparse_pauli_trace_matches_dense_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_hermitian(3, &mut rng);
        for idx in 0..64 {
            let p = PauliOperator::from_label_index(3, idx);
            let dense = (to_dense(&p) * &m).diagonal().sum();
            let sparse = pauli_trace(&m, &p);
            assert!((dense - sparse).norm() < 1e-12, "trace of {}", p.label());
        }
    }
}
