//! Stabilizer groups, stabilizer states and postselected reductions.
//!
//! Unsigned Pauli subspaces are enumerated by depth-first search over greedy
//! canonical generating sequences: generators strictly increase as label
//! indices, each is outside the current span, commutes with it, and is the
//! minimum of its coset. Every isotropic subspace is produced exactly once,
//! in a deterministic order that checkpointed searches rely on.

use crate::coeffs::PauliCoefficients;
use crate::pauli::{commutes, pauli_multiply, symplectic_product, PauliOperator};
use crate::rat::Rat;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;

/// Independent, pairwise commuting signed Paulis; k < n generators describe a
/// postselected reduction onto a single logical qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    pub n: usize,
    pub generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let n = generators.first().map(|g| g.n).unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidGroup("no generators".into()));
        }
        for g in &generators {
            if g.n != n {
                return Err(Error::QubitMismatch { expected: n, got: g.n });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidGroup(format!("{g} is not Hermitian")));
            }
            if g.is_identity_label() {
                return Err(Error::InvalidGroup("identity generator".into()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[..i] {
                if !commutes(a, b)? {
                    return Err(Error::InvalidGroup(format!("{a} and {b} anticommute")));
                }
            }
        }
        if !symplectically_independent(&generators) {
            return Err(Error::InvalidGroup(
                "generators are dependent (some subset multiplies to the identity label)".into(),
            ));
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn from_labels(labels: &[&str]) -> Result<Self> {
        let gens = labels.iter().map(|l| PauliOperator::parse(l)).collect::<Result<Vec<_>>>()?;
        StabilizerGroup::new(gens)
    }

    /// All 2^k signed group elements, the identity first.
    pub fn elements(&self) -> Vec<PauliOperator> {
        let k = self.generators.len();
        let mut out = Vec::with_capacity(1 << k);
        out.push(PauliOperator::identity(self.n));
        for mask in 1usize..(1 << k) {
            let low = mask.trailing_zeros() as usize;
            let prev = out[mask ^ (1 << low)];
            out.push(pauli_multiply(&prev, &self.generators[low]).expect("same qubit count"));
        }
        out
    }
}

/// Gaussian elimination over F2 on the symplectic vectors (x|z).
fn symplectically_independent(gens: &[PauliOperator]) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for g in gens {
        let mut v = ((g.x_bits as u64) << 32) | g.z_bits as u64;
        for b in &basis {
            if (v ^ b).leading_zeros() > v.leading_zeros() {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    true
}

/// 2^n (2^n + 1)(2^(n-1) + 1) ... (2 + 1).
pub fn count_stabilizer_states(n: usize) -> u64 {
    let mut count = 1u64 << n;
    for k in 1..=n {
        count *= (1u64 << k) + 1;
    }
    count
}

/// (2^n - 1)/6 of the stabilizer-state count: the number of distinct
/// (n-1)-generator reduction groups.
pub fn count_reductions(n: usize) -> u64 {
    ((1u64 << n) - 1) * count_stabilizer_states(n) / 6
}

/// An unsigned isotropic subspace with its canonical generators and, for each
/// of the 2^dim elements, the unsigned label, the sign of the product of the
/// all-positive generators, and the generator subset that produces it.
#[derive(Clone, Debug, Default)]
pub struct SubspaceElements {
    pub n: usize,
    pub generators: Vec<u32>,
    /// (label_index, base_sign, generator_subset_mask), identity first.
    pub elements: Vec<(u32, i8, u32)>,
}

impl SubspaceElements {
    /// Rebuild the element table from unsigned generator labels, e.g. when
    /// resuming from a saved search position.
    pub fn from_generators(n: usize, gens: &[u32]) -> Result<Self> {
        for (i, &a) in gens.iter().enumerate() {
            if a == 0 || a >= 1u32 << (2 * n) {
                return Err(Error::InvalidGroup(format!("label index {a} out of range")));
            }
            for &b in &gens[..i] {
                if symp(n, a, b) != 0 {
                    return Err(Error::InvalidGroup(format!(
                        "labels {a} and {b} anticommute"
                    )));
                }
            }
        }
        let ops: Vec<PauliOperator> =
            gens.iter().map(|&g| PauliOperator::from_label_index(n, g as usize)).collect();
        if !symplectically_independent(&ops) {
            return Err(Error::InvalidGroup("dependent generator labels".into()));
        }
        let mut out = SubspaceElements::default();
        emit_elements(n, gens, &mut out);
        Ok(out)
    }

    /// The signed group obtained by negating the generators selected by
    /// `sign_bits` (bit i negates generator i).
    pub fn group(&self, sign_bits: u32) -> StabilizerGroup {
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, &label)| {
                let mut g = PauliOperator::from_label_index(self.n, label as usize);
                if sign_bits >> i & 1 == 1 {
                    g = g.negate();
                }
                g
            })
            .collect();
        StabilizerGroup { n: self.n, generators }
    }

    /// Sign of each element under a generator sign assignment.
    pub fn element_sign(&self, element: usize, sign_bits: u32) -> i8 {
        let (_, base, subset) = self.elements[element];
        if (subset & sign_bits).count_ones() % 2 == 1 {
            -base
        } else {
            base
        }
    }
}

fn symp(n: usize, a: u32, b: u32) -> u8 {
    let mask = (1u32 << n) - 1;
    symplectic_product(a >> n, a & mask, b >> n, b & mask)
}

/// Visit every dim-dimensional isotropic unsigned subspace once, in canonical
/// order. The callback receives a running subspace index and a reused buffer.
pub fn for_each_isotropic_subspace(
    n: usize,
    dim: usize,
    mut visit: impl FnMut(usize, &SubspaceElements),
) {
    assert!(dim <= n, "isotropic dimension exceeds qubit count");
    let labels = 1u32 << (2 * n);
    let mut gens: Vec<u32> = Vec::with_capacity(dim);
    let mut span: Vec<u32> = vec![0];
    let mut index = 0usize;
    let mut buffer = SubspaceElements::default();

    // Explicit stack of candidate labels per DFS depth.
    fn descend(
        n: usize,
        dim: usize,
        labels: u32,
        gens: &mut Vec<u32>,
        span: &mut Vec<u32>,
        index: &mut usize,
        buffer: &mut SubspaceElements,
        visit: &mut impl FnMut(usize, &SubspaceElements),
    ) {
        if gens.len() == dim {
            emit_elements(n, gens, buffer);
            visit(*index, buffer);
            *index += 1;
            return;
        }
        let start = gens.last().map(|&g| g + 1).unwrap_or(1);
        'candidates: for g in start..labels {
            for &s in span.iter() {
                if s != 0 && (g ^ s) < g {
                    continue 'candidates; // not the coset minimum (covers span membership)
                }
            }
            for &h in gens.iter() {
                if symp(n, g, h) != 0 {
                    continue 'candidates;
                }
            }
            let old = span.len();
            for i in 0..old {
                let v = span[i] ^ g;
                span.push(v);
            }
            gens.push(g);
            descend(n, dim, labels, gens, span, index, buffer, visit);
            gens.pop();
            span.truncate(old);
        }
    }

    descend(n, dim, labels, &mut gens, &mut span, &mut index, &mut buffer, &mut visit);
}

fn emit_elements(n: usize, gens: &[u32], buffer: &mut SubspaceElements) {
    buffer.n = n;
    buffer.generators.clear();
    buffer.generators.extend_from_slice(gens);
    buffer.elements.clear();
    buffer.elements.push((0, 1, 0));
    let mut ops: Vec<PauliOperator> = Vec::with_capacity(1 << gens.len());
    ops.push(PauliOperator::identity(n));
    for mask in 1u32..(1 << gens.len()) {
        let low = mask.trailing_zeros() as usize;
        let prev = ops[(mask ^ (1 << low)) as usize];
        let gen = PauliOperator::from_label_index(n, gens[low] as usize);
        let prod = pauli_multiply(&prev, &gen).expect("same qubit count");
        ops.push(prod);
        buffer
            .elements
            .push((prod.label_index() as u32, prod.sign().expect("commuting product"), mask));
    }
}

/// All stabilizer states as exact coefficient vectors, 1/2^n on each signed
/// group element. Canonical order: subspace DFS order, then sign bits.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<PauliCoefficients<Rat>>> {
    if n > 3 {
        return Err(Error::QubitLimit(n, 3));
    }
    let weight = Rat::new(BigInt::one(), BigInt::from(1i64 << n));
    let mut out = Vec::with_capacity(count_stabilizer_states(n) as usize);
    for_each_isotropic_subspace(n, n, |_, sub| {
        for sign_bits in 0..(1u32 << n) {
            let mut state = PauliCoefficients::<Rat>::zeros(n);
            for (e, &(label, _, _)) in sub.elements.iter().enumerate() {
                let signed = match sub.element_sign(e, sign_bits) {
                    1 => weight.clone(),
                    _ => -weight.clone(),
                };
                state.c[label as usize] = signed;
            }
            out.push(state);
        }
    });
    Ok(out)
}

/// All (n-1)-generator reduction groups. Materializes the full list; use
/// [`for_each_isotropic_subspace`] directly to stream n = 5.
pub fn enumerate_reductions(n: usize) -> Result<Vec<StabilizerGroup>> {
    if !(2..=4).contains(&n) {
        return Err(Error::QubitLimit(n, 4));
    }
    let mut out = Vec::with_capacity(count_reductions(n) as usize);
    for_each_isotropic_subspace(n, n - 1, |_, sub| {
        for sign_bits in 0..(1u32 << (n - 1)) {
            out.push(sub.group(sign_bits));
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use std::collections::HashSet;

    #[test]
    fn closed_form_counts_match_known_values() {
        assert_eq!(count_stabilizer_states(1), 6);
        assert_eq!(count_stabilizer_states(2), 60);
        assert_eq!(count_stabilizer_states(3), 1080);
        assert_eq!(count_stabilizer_states(4), 36720);
        assert_eq!(count_stabilizer_states(5), 2423520);
        assert_eq!(count_reductions(2), 30);
        assert_eq!(count_reductions(3), 1260);
        assert_eq!(count_reductions(4), 91800);
        assert_eq!(count_reductions(5), 12521520);
    }

    #[test]
    fn enumerated_states_are_distinct_and_match_counts() {
        for n in 1..=3 {
            let states = enumerate_stabilizer_states(n).unwrap();
            assert_eq!(states.len(), count_stabilizer_states(n) as usize, "{n} qubits");
            let distinct: HashSet<String> =
                states.iter().map(|s| format!("{:?}", s.c)).collect();
            assert_eq!(distinct.len(), states.len(), "duplicate state at {n} qubits");
        }
    }

    #[test]
    fn single_qubit_states_are_the_six_pauli_eigenstates() {
        let states = enumerate_stabilizer_states(1).unwrap();
        let mut blochs: Vec<(i64, i64, i64)> = states
            .iter()
            .map(|s| {
                let v = |idx: usize| {
                    let r = &s.c[idx] * Rat::from(BigInt::from(2));
                    r.to_integer().try_into().unwrap()
                };
                (v(2), v(3), v(1)) // x, y, z
            })
            .collect();
        blochs.sort_unstable();
        let mut expect =
            vec![(0, 0, 1), (0, 0, -1), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)];
        expect.sort_unstable();
        assert_eq!(blochs, expect);
    }

    #[test]
    fn every_enumerated_state_is_a_valid_density_matrix() {
        for n in 1..=2 {
            for state in enumerate_stabilizer_states(n).unwrap() {
                assert!(state.is_valid_state(), "invalid stabilizer state at {n} qubits");
            }
        }
    }

    #[test]
    fn two_qubit_states_include_the_sign_flipped_bell_state() {
        let q = Rat::new(BigInt::one(), BigInt::from(4));
        let target = PauliCoefficients::from_label_pairs(
            2,
            &[("II", q.clone()), ("XX", -q.clone()), ("YY", q.clone()), ("ZZ", q.clone())],
        )
        .unwrap();
        let states = enumerate_stabilizer_states(2).unwrap();
        assert!(states.contains(&target), "Bell state with XX sign switched is missing");
    }

    #[test]
    fn reduction_enumeration_matches_counts_and_is_distinct() {
        for n in 2..=4 {
            let mut seen = HashSet::new();
            let mut total = 0u64;
            for_each_isotropic_subspace(n, n - 1, |_, sub| {
                for sign_bits in 0..(1u32 << (n - 1)) {
                    let mut key: Vec<(u32, i8)> = sub
                        .elements
                        .iter()
                        .enumerate()
                        .map(|(e, &(label, _, _))| (label, sub.element_sign(e, sign_bits)))
                        .collect();
                    key.sort_unstable();
                    assert!(seen.insert(key), "duplicate reduction group at n = {n}");
                    total += 1;
                }
            });
            assert_eq!(total, count_reductions(n), "reduction count at n = {n}");
        }
        assert_eq!(enumerate_reductions(2).unwrap().len(), 30);
    }

    #[test]
    fn five_qubit_subspace_count_supports_the_reduction_formula() {
        let mut subspaces = 0u64;
        for_each_isotropic_subspace(5, 4, |_, _| subspaces += 1);
        assert_eq!(subspaces * 16, count_reductions(5), "12521520 = 782595 * 16");
    }

    #[test]
    fn three_qubit_state_enumeration_cross_checks_the_counting_formula() {
        let mut subspaces = 0u64;
        for_each_isotropic_subspace(3, 3, |_, sub| {
            assert_eq!(sub.elements.len(), 8);
            subspaces += 1;
        });
        assert_eq!(subspaces * 8, count_stabilizer_states(3));
    }

    #[test]
    fn group_constructor_rejects_bad_generator_sets() {
        assert!(StabilizerGroup::from_labels(&["XX", "ZZ"]).is_ok());
        assert!(
            StabilizerGroup::from_labels(&["XI", "ZI"]).is_err(),
            "anticommuting generators"
        );
        assert!(
            StabilizerGroup::from_labels(&["XX", "-XX"]).is_err(),
            "dependent generators (product is -identity)"
        );
        assert!(
            StabilizerGroup::from_labels(&["XX", "YY", "ZZ"]).is_err(),
            "dependent triple (product is -identity)"
        );
        assert!(StabilizerGroup::from_labels(&["II"]).is_err(), "identity generator");
    }

    #[test]
    fn group_elements_include_products_with_tracked_signs() {
        let g = StabilizerGroup::from_labels(&["XX", "ZZ"]).unwrap();
        let elements = g.elements();
        assert_eq!(elements.len(), 4);
        let yy = PauliOperator::parse("YY").unwrap().negate();
        assert!(elements.contains(&yy), "XX * ZZ = -YY belongs to the group");
    }

    #[test]
    fn stabilizer_state_coefficients_live_on_the_group() {
        let states = enumerate_stabilizer_states(2).unwrap();
        for s in &states {
            let support = s.c.iter().filter(|c| !c.is_zero()).count();
            assert_eq!(support, 4, "a two-qubit stabilizer state has 4 nonzero coefficients");
        }
    }
}
