//! Exact membership certificates for the stabilizer polytopes, face
//! verification, and the Clifford-orbit census of the two-qubit faces.

use crate::clifford::CliffordElement;
use crate::coeffs::PauliCoefficients;
use crate::rat::{rint, Rat};
use crate::stabilizer::enumerate_stabilizer_states;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A linear inequality over the Pauli coordinates: a state satisfies it when
/// sum_P coeffs_P c_P <= 0. Stated in the same normalization as the embedded
/// face tables, so integer vectors stay integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub n: usize,
    pub coeffs: Vec<Rat>,
}

impl Halfspace {
    pub fn new(n: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != 1 << (2 * n) {
            return Err(Error::BadCertificate(format!(
                "halfspace on {n} qubits needs {} coefficients, got {}",
                1 << (2 * n),
                coeffs.len()
            )));
        }
        if coeffs.iter().all(Rat::is_zero) {
            return Err(Error::BadCertificate("halfspace is identically zero".into()));
        }
        Ok(Halfspace { n, coeffs })
    }

    pub fn from_integers(n: usize, coeffs: &[i64]) -> Result<Self> {
        Halfspace::new(n, coeffs.iter().map(|&v| rint(v)).collect())
    }

    pub fn inner_product(&self, s: &PauliCoefficients<Rat>) -> Rat {
        self.coeffs
            .iter()
            .zip(&s.c)
            .map(|(h, c)| h * c)
            .fold(Rat::zero(), |acc, v| acc + v)
    }

    /// Scale to the unique primitive integer vector (positive scaling only,
    /// so the inequality is unchanged).
    pub fn canonical_integers(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let scaled: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rat::from(lcm.clone())).to_integer()).collect();
        let mut gcd = BigInt::zero();
        for v in &scaled {
            gcd = gcd.gcd(v);
        }
        if gcd.is_zero() {
            return scaled;
        }
        scaled.into_iter().map(|v| v / &gcd).collect()
    }

    /// Transform covariantly with the conjugation action, so that inner
    /// products with transformed states are preserved.
    pub fn apply_clifford(&self, e: &CliffordElement) -> Result<Halfspace> {
        if self.n != e.n {
            return Err(Error::QubitMismatch { expected: e.n, got: self.n });
        }
        let mut out = self.coeffs.clone();
        for l in 1..self.coeffs.len() {
            let (m, sign) = e.image(l);
            out[m] = if sign < 0 { -self.coeffs[l].clone() } else { self.coeffs[l].clone() };
        }
        Ok(Halfspace { n: self.n, coeffs: out })
    }
}

#[derive(Clone, Debug)]
pub enum MembershipCertificate {
    /// Convex weights over the enumerated stabilizer states reproducing the
    /// query exactly; indices refer to enumeration order.
    Inside { weights: Vec<(usize, Rat)> },
    /// A hyperplane with every stabilizer state on the <= 0 side and the
    /// query strictly positive.
    Outside { halfspace: Halfspace, value: Rat },
}

impl MembershipCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipCertificate::Inside { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            MembershipCertificate::Inside { weights } => serde_json::json!({
                "verdict": "inside",
                "weights": weights
                    .iter()
                    .map(|(idx, w)| serde_json::json!([idx, w.numer().to_string(), w.denom().to_string()]))
                    .collect::<Vec<_>>(),
            }),
            MembershipCertificate::Outside { halfspace, value } => serde_json::json!({
                "verdict": "outside",
                "halfspace": halfspace
                    .canonical_integers()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>(),
                "value": [value.numer().to_string(), value.denom().to_string()],
            }),
        }
    }
}

/// Phase-one simplex (Bland's rule) deciding whether `targets = A w` has a
/// nonnegative solution. Returns the weights or the Farkas dual vector.
fn feasible_combination(columns: &[Vec<Rat>], target: &[Rat]) -> std::result::Result<Vec<Rat>, Vec<Rat>> {
    let m = target.len();
    let k = columns.len();
    // rows are sign-flipped so the right-hand side is nonnegative
    let flip: Vec<bool> = target.iter().map(Rat::is_negative).collect();
    let cell = |i: usize, j: usize| -> Rat {
        let v = columns[j][i].clone();
        if flip[i] {
            -v
        } else {
            v
        }
    };
    // tableau: k structural columns, m artificial columns, rhs
    let width = k + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row: Vec<Rat> = Vec::with_capacity(width);
        for j in 0..k {
            row.push(cell(i, j));
        }
        for a in 0..m {
            row.push(if a == i { Rat::one() } else { Rat::zero() });
        }
        let rhs = if flip[i] { -target[i].clone() } else { target[i].clone() };
        row.push(rhs);
        t.push(row);
    }
    // reduced-cost row for minimizing the artificial sum; the artificial
    // columns are basic and therefore keep reduced cost zero
    let mut obj: Vec<Rat> = vec![Rat::zero(); width];
    for i in 0..m {
        for j in 0..k {
            obj[j] -= &t[i][j];
        }
        obj[width - 1] -= &t[i][width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (k..k + m).collect();
    loop {
        // Bland: entering column is the lowest index with a negative cost
        let Some(enter) = (0..k + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => &ratio < b || (&ratio == b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded below");
        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == leave || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        basis[leave] = enter;
    }
    let optimum = -t[m][width - 1].clone();
    if optimum.is_zero() {
        let mut weights = vec![Rat::zero(); k];
        for i in 0..m {
            if basis[i] < k {
                weights[basis[i]] = t[i][width - 1].clone();
            }
        }
        Ok(weights)
    } else {
        // duals: artificial column a's reduced cost is 1 - y_a in flipped rows
        let mut y = Vec::with_capacity(m);
        for a in 0..m {
            let ya = Rat::one() - &t[m][k + a];
            y.push(if flip[a] { -ya } else { ya });
        }
        Err(y)
    }
}

/// Exact membership test against the convex hull of the stabilizer states,
/// with a certificate that is re-verified before being returned.
pub fn membership(s: &PauliCoefficients<Rat>) -> Result<MembershipCertificate> {
    if s.n > 2 {
        return Err(Error::QubitLimit(s.n, 2));
    }
    if !s.is_valid_state() {
        return Err(Error::InvalidState(
            "membership query must be a valid density matrix".into(),
        ));
    }
    let vertices = enumerate_stabilizer_states(s.n)?;
    let columns: Vec<Vec<Rat>> = vertices.iter().map(|v| v.c.clone()).collect();
    match feasible_combination(&columns, &s.c) {
        Ok(weights) => {
            let mut total = Rat::zero();
            let mut reconstructed = vec![Rat::zero(); s.c.len()];
            let mut sparse = Vec::new();
            for (v, w) in weights.iter().enumerate() {
                if w.is_negative() {
                    return Err(Error::BadCertificate("negative convex weight".into()));
                }
                if w.is_zero() {
                    continue;
                }
                total += w;
                for (slot, coord) in reconstructed.iter_mut().zip(&columns[v]) {
                    *slot += w * coord;
                }
                sparse.push((v, w.clone()));
            }
            if !total.is_one() || reconstructed != s.c {
                return Err(Error::BadCertificate(
                    "convex weights fail to reproduce the query".into(),
                ));
            }
            Ok(MembershipCertificate::Inside { weights: sparse })
        }
        Err(y) => {
            let halfspace = Halfspace::new(s.n, y)?;
            let (max_value, _) = verify_halfspace(&halfspace, &vertices);
            let value = halfspace.inner_product(s);
            if max_value.is_positive() || !value.is_positive() {
                return Err(Error::BadCertificate(
                    "separating hyperplane fails re-verification".into(),
                ));
            }
            Ok(MembershipCertificate::Outside { halfspace, value })
        }
    }
}

/// Maximum of the inner product over the vertex list, and how many vertices
/// sit exactly on the hyperplane.
pub fn verify_halfspace(
    h: &Halfspace,
    vertices: &[PauliCoefficients<Rat>],
) -> (Rat, usize) {
    let mut max_value: Option<Rat> = None;
    let mut tight = 0usize;
    for v in vertices {
        let value = h.inner_product(v);
        if value.is_zero() {
            tight += 1;
        }
        max_value = Some(match max_value {
            None => value,
            Some(m) => {
                if value > m {
                    value
                } else {
                    m
                }
            }
        });
    }
    (max_value.expect("vertex list must be nonempty"), tight)
}

fn integer_coeffs_i64(h: &Halfspace) -> Vec<i64> {
    h.canonical_integers()
        .iter()
        .map(|v| v.to_i64().expect("face coefficients fit in i64"))
        .collect()
}

/// Orbit sizes of the face representatives under the conjugation action.
/// Every orbit member is checked to be a genuine face (maximum 0 over the
/// vertices, at least 15 tight), and the orbits must be pairwise disjoint.
pub fn facet_orbit_census(
    representatives: &[Halfspace],
    group: &[CliffordElement],
) -> Result<Vec<usize>> {
    let n = representatives.first().map(|h| h.n).unwrap_or(2);
    let vertices = enumerate_stabilizer_states(n)?;
    // 2^n c_P of every vertex is in {0, +1, -1}, so faces check in integers
    let scaled_vertices: Vec<Vec<i64>> = vertices
        .iter()
        .map(|v| {
            v.c.iter()
                .map(|c| (c * rint(1 << n)).to_integer().to_i64().expect("small"))
                .collect()
        })
        .collect();
    let count = 1usize << (2 * n);
    let mut seen_anywhere: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut sizes = Vec::with_capacity(representatives.len());
    for (r, rep) in representatives.iter().enumerate() {
        let base = integer_coeffs_i64(rep);
        let mut orbit: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
        for e in group {
            let mut moved = base.clone();
            for l in 1..count {
                let (m, sign) = e.image(l);
                moved[m] = i64::from(sign) * base[l];
            }
            if orbit.insert(moved.clone()) {
                if !seen_anywhere.insert(moved.clone()) {
                    return Err(Error::BadCertificate(format!(
                        "face representative {r} is equivalent to an earlier one"
                    )));
                }
                let mut max = i64::MIN;
                let mut tight = 0;
                for v in &scaled_vertices {
                    let dot: i64 = moved.iter().zip(v).map(|(a, b)| a * b).sum();
                    max = max.max(dot);
                    if dot == 0 {
                        tight += 1;
                    }
                }
                if max != 0 || tight < 15 {
                    return Err(Error::BadCertificate(format!(
                        "orbit of representative {r} contains a non-face (max {max}, tight {tight})"
                    )));
                }
            }
        }
        sizes.push(orbit.len());
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::PauliCoefficients;
    use crate::rat::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn single_qubit_state(x: Rat, y: Rat, z: Rat) -> PauliCoefficients<Rat> {
        let half = rat(1, 2);
        PauliCoefficients {
            n: 1,
            c: vec![half.clone(), &half * &z, &half * &x, &half * &y],
        }
    }

    #[test]
    fn stabilizer_mixture_on_the_octahedron_edge_is_inside() {
        let s = single_qubit_state(rat(1, 2), rat(0, 1), rat(1, 2));
        match membership(&s).unwrap() {
            MembershipCertificate::Inside { weights } => {
                assert!(!weights.is_empty());
            }
            MembershipCertificate::Outside { .. } => {
                panic!("an octahedron boundary point is a stabilizer mixture")
            }
        }
    }

    #[test]
    fn maximally_mixed_state_is_inside_both_polytopes() {
        for n in 1..=2usize {
            let s = PauliCoefficients::<Rat>::maximally_mixed(n);
            assert!(
                matches!(membership(&s).unwrap(), MembershipCertificate::Inside { .. }),
                "the polytope center must be inside for n = {n}"
            );
        }
    }

    #[test]
    fn point_beyond_the_octahedron_gets_a_verified_separating_plane() {
        let s = single_qubit_state(rat(5, 8), rat(0, 1), rat(5, 8));
        match membership(&s).unwrap() {
            MembershipCertificate::Outside { halfspace, value } => {
                assert!(value.is_positive());
                let vertices = enumerate_stabilizer_states(1).unwrap();
                let (max, _) = verify_halfspace(&halfspace, &vertices);
                assert!(max <= Rat::zero(), "hyperplane must hold on every vertex");
            }
            MembershipCertificate::Inside { .. } => {
                panic!("|x|+|z| = 5/4 > 1 cannot be a stabilizer mixture")
            }
        }
    }

    #[test]
    fn membership_rejects_invalid_density_matrices() {
        let s = single_qubit_state(rat(4, 5), rat(4, 5), rat(4, 5));
        assert!(matches!(membership(&s), Err(Error::InvalidState(_))));
    }

    #[test]
    fn single_qubit_membership_agrees_with_the_octahedron_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let random_coord = |rng: &mut ChaCha8Rng| {
            let den = rng.random_range(1..=16i64);
            let num = rng.random_range(-den..=den);
            rat(num, den)
        };
        let mut tested = 0;
        while tested < 10_000 {
            let x = random_coord(&mut rng);
            let y = random_coord(&mut rng);
            let z = random_coord(&mut rng);
            // stay within the Bloch ball so the query is a valid state
            let norm2 = &x * &x + &y * &y + &z * &z;
            if norm2 > Rat::one() {
                continue;
            }
            tested += 1;
            let closed_form = x.abs() + y.abs() + z.abs() <= Rat::one();
            let s = single_qubit_state(x, y, z);
            let inside = matches!(
                membership(&s).unwrap(),
                MembershipCertificate::Inside { .. }
            );
            assert_eq!(inside, closed_form, "linear program disagrees with |x|+|y|+|z| <= 1");
        }
    }

    #[test]
    fn reversed_identity_halfspace_is_valid_but_never_tight() {
        let mut coeffs = vec![Rat::zero(); 16];
        coeffs[0] = rint(-1);
        let h = Halfspace::new(2, coeffs).unwrap();
        let vertices = enumerate_stabilizer_states(2).unwrap();
        let (max, tight) = verify_halfspace(&h, &vertices);
        assert_eq!(max, rat(-1, 4), "every vertex has identity coordinate 1/4");
        assert_eq!(tight, 0);
    }

    #[test]
    fn face_orbits_partition_the_two_qubit_face_set() {
        let reps = crate::data::face_inequalities();
        let group = crate::clifford::generate_clifford_group(2).unwrap();
        let sizes = facet_orbit_census(&reps, &group).unwrap();
        assert_eq!(sizes.len(), 8, "one orbit per representative");
        assert_eq!(sizes.iter().sum::<usize>(), 22320, "face census total");
    }

    #[test]
    fn canonical_integers_strip_common_factors_only_by_positive_scaling() {
        let h = Halfspace::new(1, vec![rat(-2, 4), rat(1, 2), rat(0, 1), rat(3, 2)]).unwrap();
        let ints: Vec<i64> = h.canonical_integers().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![-1, 1, 0, 3], "sign of the inequality must be preserved");
    }
}
