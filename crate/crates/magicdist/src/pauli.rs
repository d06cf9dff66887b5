//! Signed Pauli operators in the symplectic bit representation.
//!
//! An n-qubit operator is stored as `i^phase_exp * sigma(x_bits, z_bits)`
//! where `sigma(x, z)` is the Hermitian Pauli whose qubit-j factor is I, X, Z
//! or Y according to the bit pair `(x_j, z_j)`; bit j of each mask belongs to
//! qubit j, which is the leftmost character of the label string. Hermitian
//! operators therefore have `phase_exp` 0 (+) or 2 (-).

use crate::{Error, Result};
use num_complex::Complex64;

pub const MAX_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    pub n: usize,
    pub x_bits: u32,
    pub z_bits: u32,
    /// Power of i multiplying the Hermitian Pauli named by the bit masks.
    pub phase_exp: u8,
}

impl PauliOperator {
    pub fn new(n: usize, x_bits: u32, z_bits: u32, phase_exp: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitLimit(n, MAX_QUBITS));
        }
        let mask = (1u32 << n) - 1;
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::BadLabel(format!(
                "bit masks ({x_bits:#b},{z_bits:#b}) exceed {n} qubits"
            )));
        }
        Ok(PauliOperator { n, x_bits, z_bits, phase_exp: phase_exp % 4 })
    }

    pub fn identity(n: usize) -> Self {
        PauliOperator { n, x_bits: 0, z_bits: 0, phase_exp: 0 }
    }

    /// Parse a label like `"IXZ"` (optionally prefixed with `+` or `-`);
    /// character k acts on qubit k.
    pub fn parse(label: &str) -> Result<Self> {
        let (neg, body) = match label.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, label.strip_prefix('+').unwrap_or(label)),
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::BadLabel(label.to_string()));
        }
        let (mut x, mut z) = (0u32, 0u32);
        for (j, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << j,
                'Y' => {
                    x |= 1 << j;
                    z |= 1 << j;
                }
                'Z' => z |= 1 << j,
                _ => return Err(Error::BadLabel(label.to_string())),
            }
        }
        Ok(PauliOperator { n, x_bits: x, z_bits: z, phase_exp: if neg { 2 } else { 0 } })
    }

    /// Unsigned label string, first character = qubit 0.
    pub fn label(&self) -> String {
        (0..self.n)
            .map(|j| {
                match (self.x_bits >> j & 1, self.z_bits >> j & 1) {
                    (0, 0) => 'I',
                    (1, 0) => 'X',
                    (1, 1) => 'Y',
                    _ => 'Z',
                }
            })
            .collect()
    }

    /// Canonical index of the unsigned label: `(x_bits << n) | z_bits`.
    pub fn label_index(&self) -> usize {
        ((self.x_bits as usize) << self.n) | self.z_bits as usize
    }

    pub fn from_label_index(n: usize, index: usize) -> Self {
        let x = (index >> n) as u32;
        let z = (index & ((1 << n) - 1)) as u32;
        PauliOperator { n, x_bits: x, z_bits: z, phase_exp: 0 }
    }

    pub fn is_identity_label(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_exp % 2 == 0
    }

    /// +1 or -1 for a Hermitian operator.
    pub fn sign(&self) -> Result<i8> {
        match self.phase_exp {
            0 => Ok(1),
            2 => Ok(-1),
            _ => Err(Error::BadLabel(format!("{self:?} is not Hermitian"))),
        }
    }

    pub fn negate(&self) -> Self {
        PauliOperator { phase_exp: (self.phase_exp + 2) % 4, ..*self }
    }

    pub fn times_i(&self) -> Self {
        PauliOperator { phase_exp: (self.phase_exp + 1) % 4, ..*self }
    }

    /// Number of qubits on which the operator acts nontrivially.
    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }
}

/// Exact product with phase tracking. `X * Z = -iY`, `P * P = I`.
pub fn pauli_multiply(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    if a.n != b.n {
        return Err(Error::QubitMismatch { expected: a.n, got: b.n });
    }
    let x = a.x_bits ^ b.x_bits;
    let z = a.z_bits ^ b.z_bits;
    // sigma(x1,z1) sigma(x2,z2) = i^g sigma(x1^x2, z1^z2) with
    // g = |x1&z1| + |x2&z2| + 2|z1&x2| - |x&z|  (mod 4).
    let g = (a.x_bits & a.z_bits).count_ones() as i32
        + (b.x_bits & b.z_bits).count_ones() as i32
        + 2 * (a.z_bits & b.x_bits).count_ones() as i32
        - (x & z).count_ones() as i32;
    let phase = (a.phase_exp as i32 + b.phase_exp as i32 + g).rem_euclid(4) as u8;
    Ok(PauliOperator { n: a.n, x_bits: x, z_bits: z, phase_exp: phase })
}

/// Whether two Paulis commute: the symplectic inner product
/// `|x1 & z2| + |z1 & x2|` is even.
pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::QubitMismatch { expected: a.n, got: b.n });
    }
    Ok(symplectic_product(a.x_bits, a.z_bits, b.x_bits, b.z_bits) == 0)
}

/// Symplectic inner product of two bit-mask pairs, in F2.
pub fn symplectic_product(x1: u32, z1: u32, x2: u32, z2: u32) -> u8 {
    (((x1 & z2).count_ones() + (z1 & x2).count_ones()) % 2) as u8
}

impl std::fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.phase_exp {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{}{}", prefix, self.label())
    }
}

/// Dense matrix of the operator, qubit 0 as the leftmost tensor factor.
pub fn to_dense(p: &PauliOperator) -> nalgebra::DMatrix<Complex64> {
    use nalgebra::DMatrix;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut m = DMatrix::from_element(1, 1, one);
    for j in 0..p.n {
        let f = match (p.x_bits >> j & 1, p.z_bits >> j & 1) {
            (0, 0) => DMatrix::from_row_slice(2, 2, &[one, 0.0.into(), 0.0.into(), one]),
            (1, 0) => DMatrix::from_row_slice(2, 2, &[0.0.into(), one, one, 0.0.into()]),
            (1, 1) => DMatrix::from_row_slice(2, 2, &[0.0.into(), -i, i, 0.0.into()]),
            _ => DMatrix::from_row_slice(2, 2, &[one, 0.0.into(), 0.0.into(), -one]),
        };
        // label reads left to right, so earlier qubits are the outer factor
        m = m.kronecker(&f);
    }
    let phase = [one, i, -one, -i][p.phase_exp as usize % 4];
    m * phase
}
