//! Clifford group elements as signed permutations of the nontrivial Pauli
//! coordinates, generated by closure from dense conjugation tables.

use crate::coeffs::PauliCoefficients;
use crate::maps::BlochVector;
use crate::pauli::{pauli_multiply, to_dense, PauliOperator};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::{HashSet, VecDeque};

/// Conjugation action of one Clifford unitary: label l maps to the label
/// `perm[l]` with sign `sign[l]`. Slot 0 (identity) is fixed with sign +1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    pub n: usize,
    perm: Vec<u32>,
    sign: Vec<i8>,
}

impl CliffordElement {
    pub fn identity(n: usize) -> Self {
        let count = 1usize << (2 * n);
        CliffordElement {
            n,
            perm: (0..count as u32).collect(),
            sign: vec![1; count],
        }
    }

    /// Image of an unsigned nontrivial Pauli label: (new label, sign).
    pub fn image(&self, label: usize) -> (usize, i8) {
        (self.perm[label] as usize, self.sign[label])
    }

    /// self after other: first conjugate by `other`, then by `self`.
    pub fn compose(&self, other: &CliffordElement) -> CliffordElement {
        assert_eq!(self.n, other.n, "composition needs matching qubit counts");
        let count = self.perm.len();
        let mut perm = vec![0u32; count];
        let mut sign = vec![1i8; count];
        for l in 0..count {
            let mid = other.perm[l] as usize;
            perm[l] = self.perm[mid];
            sign[l] = other.sign[l] * self.sign[mid];
        }
        CliffordElement { n: self.n, perm, sign }
    }

    /// The perm/sign table must be a sign-respecting bijection.
    pub fn is_bijection(&self) -> bool {
        let count = self.perm.len();
        let mut seen = vec![false; count];
        if self.perm[0] != 0 || self.sign[0] != 1 {
            return false;
        }
        for l in 0..count {
            let m = self.perm[l] as usize;
            if m >= count || seen[m] || (l > 0 && m == 0) {
                return false;
            }
            seen[m] = true;
        }
        true
    }

    /// Action on a single-qubit coordinate vector (c_X, c_Y, c_Z).
    pub fn bloch_action(&self, b: &BlochVector) -> BlochVector {
        assert_eq!(self.n, 1, "coordinate action is single-qubit");
        // label order for n=1: Z = 1, X = 2, Y = 3
        let coords = [0.0, b.z, b.x, b.y];
        let mut out = [0.0f64; 4];
        for l in 1..4 {
            out[self.perm[l] as usize] = f64::from(self.sign[l]) * coords[l];
        }
        BlochVector::new(out[2], out[3], out[1])
    }

    /// The 3x3 signed permutation matrix of the coordinate action, row-major.
    pub fn coordinate_matrix(&self) -> [[i8; 3]; 3] {
        assert_eq!(self.n, 1);
        // rows and columns in (x, y, z) order, labels (2, 3, 1)
        let axis = |label: u32| match label {
            2 => 0,
            3 => 1,
            1 => 2,
            _ => unreachable!("nontrivial single-qubit label"),
        };
        let mut m = [[0i8; 3]; 3];
        for l in [1u32, 2, 3] {
            m[axis(self.perm[l as usize])][axis(l)] = self.sign[l as usize];
        }
        m
    }
}

fn dense_identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

fn hadamard_matrix() -> DMatrix<Complex64> {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

fn phase_matrix() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ],
    )
}

/// Embed a single-qubit gate on qubit j of n, qubit 0 outermost.
fn embed_gate(n: usize, j: usize, gate: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = dense_identity(1);
    for q in 0..n {
        let factor = if q == j { gate.clone() } else { dense_identity(2) };
        out = out.kronecker(&factor);
    }
    out
}

/// CNOT with the given control and target, qubit 0 the most significant bit.
fn cnot_matrix(n: usize, control: usize, target: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let cbit = col >> (n - 1 - control) & 1;
        let row = if cbit == 1 { col ^ (1 << (n - 1 - target)) } else { col };
        m[(row, col)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Read off the signed permutation a unitary induces by conjugation.
/// Panics if the unitary maps some Pauli outside the signed Pauli frame.
pub fn conjugation_table(n: usize, u: &DMatrix<Complex64>) -> CliffordElement {
    let count = 1usize << (2 * n);
    let mut perm = vec![0u32; count];
    let mut sign = vec![1i8; count];
    let udag = u.adjoint();
    let dense: Vec<DMatrix<Complex64>> = (0..count)
        .map(|l| to_dense(&PauliOperator::from_label_index(n, l)))
        .collect();
    for l in 1..count {
        let img = u * &dense[l] * &udag;
        let mut found = false;
        'search: for (m, candidate) in dense.iter().enumerate().skip(1) {
            for s in [1.0f64, -1.0] {
                let diff = &img - candidate.scale(s);
                if diff.norm() < 1e-9 {
                    perm[l] = m as u32;
                    sign[l] = s as i8;
                    found = true;
                    break 'search;
                }
            }
        }
        assert!(found, "conjugation left the signed Pauli frame at label {l}");
    }
    CliffordElement { n, perm, sign }
}

fn group_generators(n: usize) -> Vec<CliffordElement> {
    let mut gens = Vec::new();
    for j in 0..n {
        gens.push(conjugation_table(n, &embed_gate(n, j, &hadamard_matrix())));
        gens.push(conjugation_table(n, &embed_gate(n, j, &phase_matrix())));
    }
    if n == 2 {
        gens.push(conjugation_table(n, &cnot_matrix(n, 0, 1)));
        gens.push(conjugation_table(n, &cnot_matrix(n, 1, 0)));
    }
    gens
}

fn table_key(e: &CliffordElement) -> Vec<i32> {
    e.perm
        .iter()
        .zip(&e.sign)
        .map(|(&m, &s)| m as i32 * i32::from(s))
        .collect()
}

/// All conjugation actions generated by Hadamard, the phase gate, and (for
/// n = 2) both CNOTs: 24 elements on one qubit, 11520 on two.
pub fn generate_clifford_group(n: usize) -> Result<Vec<CliffordElement>> {
    if !(1..=2).contains(&n) {
        return Err(Error::QubitLimit(n, 2));
    }
    let gens = group_generators(n);
    let identity = CliffordElement::identity(n);
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    seen.insert(table_key(&identity));
    let mut queue = VecDeque::from([identity.clone()]);
    let mut group = vec![identity];
    while let Some(current) = queue.pop_front() {
        for g in &gens {
            let next = g.compose(&current);
            if seen.insert(table_key(&next)) {
                queue.push_back(next.clone());
                group.push(next);
            }
        }
    }
    Ok(group)
}

/// Permute the coefficient vector: c'_{C(P)} = sign * c_P.
pub fn apply_clifford<T>(c: &CliffordElement, s: &PauliCoefficients<T>) -> Result<PauliCoefficients<T>>
where
    T: Clone + std::ops::Neg<Output = T>,
{
    if c.n != s.n {
        return Err(Error::QubitMismatch { expected: c.n, got: s.n });
    }
    let mut out = s.c.clone();
    for l in 1..s.c.len() {
        let value = s.c[l].clone();
        out[c.perm[l] as usize] = if c.sign[l] < 0 { -value } else { value };
    }
    Ok(PauliCoefficients { n: s.n, c: out })
}

/// Conjugate each generator of a stabilizer group, g -> C g C^dagger.
pub fn conjugate_group(
    c: &CliffordElement,
    r: &crate::stabilizer::StabilizerGroup,
) -> Result<crate::stabilizer::StabilizerGroup> {
    if c.n != r.n {
        return Err(Error::QubitMismatch { expected: r.n, got: c.n });
    }
    let generators = r
        .generators
        .iter()
        .map(|g| {
            let (label, sign) = c.image(g.label_index());
            let mut p = PauliOperator::from_label_index(r.n, label);
            if sign * g.sign().expect("hermitian generator") < 0 {
                p = p.negate();
            }
            p
        })
        .collect();
    crate::stabilizer::StabilizerGroup::new(generators)
}

/// The order-3 rotation cycling X -> Y -> Z -> X (the 120 degree turn about
/// the positive diagonal); coordinates cycle (x, y, z) -> (z, x, y).
pub fn diagonal_rotation() -> CliffordElement {
    // labels: Z = 1 -> X = 2, X = 2 -> Y = 3, Y = 3 -> Z = 1
    CliffordElement { n: 1, perm: vec![0, 2, 3, 1], sign: vec![1; 4] }
}

/// Conjugation table of the Hadamard gate: X <-> Z, Y -> -Y.
pub fn hadamard_element() -> CliffordElement {
    conjugation_table(1, &hadamard_matrix())
}

/// Check that a table respects the Pauli product structure: the image of a
/// product is the product of the images, signs included.
pub fn respects_products(e: &CliffordElement) -> bool {
    let count = 1usize << (2 * e.n);
    for a in 1..count {
        for b in 1..count {
            let pa = PauliOperator::from_label_index(e.n, a);
            let pb = PauliOperator::from_label_index(e.n, b);
            let prod = pauli_multiply(&pa, &pb).expect("matching qubit counts");
            let (ia, sa) = e.image(a);
            let (ib, sb) = e.image(b);
            let qa = PauliOperator::from_label_index(e.n, ia);
            let qb = PauliOperator::from_label_index(e.n, ib);
            let mut img_prod = pauli_multiply(&qa, &qb).expect("matching qubit counts");
            if sa * sb < 0 {
                img_prod = img_prod.negate();
            }
            let expect = if prod.is_identity_label() {
                // products proportional to identity must map to the same phase
                img_prod.label_index() == 0 && img_prod.phase_exp == prod.phase_exp
            } else {
                let (ip, sp) = e.image(prod.label_index());
                let mut moved = PauliOperator::from_label_index(e.n, ip);
                moved.phase_exp = (moved.phase_exp + prod.phase_exp) % 4;
                if sp < 0 {
                    moved = moved.negate();
                }
                img_prod == moved
            };
            if !expect {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::enumerate_stabilizer_states;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_qubit_group_has_twenty_four_elements() {
        let group = generate_clifford_group(1).unwrap();
        assert_eq!(group.len(), 24, "one-qubit conjugation group size");
        for e in &group {
            assert!(e.is_bijection(), "every element permutes the Pauli frame");
        }
    }

    #[test]
    fn two_qubit_group_has_eleven_thousand_five_hundred_twenty_elements() {
        let group = generate_clifford_group(2).unwrap();
        assert_eq!(group.len(), 11520, "two-qubit conjugation group size");
    }

    #[test]
    fn single_qubit_elements_are_the_rotations_of_the_octahedron() {
        let group = generate_clifford_group(1).unwrap();
        let mut seen = HashSet::new();
        for e in &group {
            let m = e.coordinate_matrix();
            // determinant of the 3x3 signed permutation matrix
            let mut det = 0i32;
            for perm in [[0usize, 1, 2], [1, 2, 0], [2, 0, 1]] {
                det += i32::from(m[0][perm[0]]) * i32::from(m[1][perm[1]]) * i32::from(m[2][perm[2]]);
            }
            for perm in [[2usize, 1, 0], [0, 2, 1], [1, 0, 2]] {
                det -= i32::from(m[0][perm[0]]) * i32::from(m[1][perm[1]]) * i32::from(m[2][perm[2]]);
            }
            assert_eq!(det, 1, "coordinate action must be a proper rotation");
            seen.insert(m);
        }
        assert_eq!(seen.len(), 24, "all 24 octahedral rotations appear");
    }

    #[test]
    fn hadamard_action_swaps_x_and_z_and_flips_y() {
        let h = hadamard_element();
        let b = BlochVector::new(0.2, 0.3, 0.4);
        let out = h.bloch_action(&b);
        assert_eq!((out.x, out.y, out.z), (0.4, -0.3, 0.2));
    }

    #[test]
    fn diagonal_rotation_cycles_the_axes_and_lies_in_the_group() {
        let t = diagonal_rotation();
        let b = BlochVector::new(0.1, 0.2, 0.3);
        let out = t.bloch_action(&b);
        assert_eq!((out.x, out.y, out.z), (0.3, 0.1, 0.2));
        let cubed = t.compose(&t).compose(&t);
        assert_eq!(cubed, CliffordElement::identity(1), "the rotation has order three");
        let group = generate_clifford_group(1).unwrap();
        assert!(group.contains(&t), "the 120 degree turn is a Clifford");
    }

    #[test]
    fn every_single_qubit_element_respects_pauli_products() {
        let group = generate_clifford_group(1).unwrap();
        for e in &group {
            assert!(respects_products(e), "sign tracking broke for {:?}", e.perm);
        }
    }

    #[test]
    fn sampled_two_qubit_elements_respect_pauli_products() {
        let group = generate_clifford_group(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let e = &group[rng.random_range(0..group.len())];
            assert!(respects_products(e), "sign tracking broke for {:?}", e.perm);
        }
    }

    #[test]
    fn group_contains_inverses_of_sampled_elements() {
        let group = generate_clifford_group(2).unwrap();
        let identity = CliffordElement::identity(2);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let e = &group[rng.random_range(0..group.len())];
            let found = group.iter().any(|f| f.compose(e) == identity);
            assert!(found, "a group element has no inverse in the closure");
        }
    }

    #[test]
    fn clifford_action_permutes_the_stabilizer_states() {
        let states = enumerate_stabilizer_states(2).unwrap();
        let keys: HashSet<String> =
            states.iter().map(|s| s.to_json().to_string()).collect();
        let group = generate_clifford_group(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let probe = &states[17];
        let mut orbit = HashSet::new();
        for e in &group {
            let moved = apply_clifford(e, probe).unwrap();
            assert!(
                moved.is_valid_state(),
                "Clifford action must preserve state validity"
            );
            let key = moved.to_json().to_string();
            assert!(keys.contains(&key), "image left the stabilizer-state set");
            orbit.insert(key);
        }
        assert_eq!(orbit.len(), 60, "two-qubit stabilizer states form one orbit");
        // spot check on a handful of other base states
        for _ in 0..5 {
            let s = &states[rng.random_range(0..states.len())];
            let e = &group[rng.random_range(0..group.len())];
            let key = apply_clifford(e, s).unwrap().to_json().to_string();
            assert!(keys.contains(&key));
        }
    }

    #[test]
    fn apply_clifford_rejects_mismatched_sizes() {
        let e = CliffordElement::identity(1);
        let s = PauliCoefficients::<crate::Rat>::maximally_mixed(2);
        assert!(matches!(
            apply_clifford(&e, &s),
            Err(Error::QubitMismatch { expected: 1, got: 2 })
        ));
    }
}
