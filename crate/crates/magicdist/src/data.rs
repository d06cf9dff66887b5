//! Embedded reference data: the seven two-qubit states that defeat every
//! two-to-one reduction, the eight face inequalities of the two-qubit
//! stabilizer polytope, the five-qubit code, and the marked boundary point
//! where two region bounds meet with equality.

use crate::coeffs::PauliCoefficients;
use crate::maps::BlochVector;
use crate::pauli::PauliOperator;
use crate::polytope::Halfspace;
use crate::rat::{rat, Rat};
use crate::stabilizer::StabilizerGroup;
use crate::Result;
use sha2::{Digest, Sha256};

/// Column order shared by both embedded tables (after the identity).
pub const COORDINATE_LABELS: [&str; 15] = [
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

/// Numerators of the seven states' coordinates, one row per state; the state
/// is (1/4) II plus (row / denominator) over COORDINATE_LABELS.
const COUNTEREXAMPLE_ROWS: [[i64; 15]; 7] = [
    [0, 1, 1, 0, -1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [1, 2, -2, 2, -6, -1, -1, 6, -2, -1, 1, 1, 3, 2, 2],
    [2, 1, 0, -2, 0, 6, -3, 3, 0, 2, -2, 6, -1, -2, 0],
    [2, 5, -1, -2, -1, 2, 2, 5, -2, -5, -1, 1, 2, 1, -1],
    [3, 1, 1, -3, -1, -3, -3, 3, -1, 3, -3, 3, -1, -3, 3],
    [2, 2, 2, 1, -3, 0, 1, 6, -2, -2, 1, 1, 0, -3, 1],
    [1, -1, 1, -3, 3, -1, 3, 1, 1, -1, -3, -1, 3, 1, -1],
];

const COUNTEREXAMPLE_DENOMINATORS: [i64; 7] = [12, 76, 72, 76, 52, 60, 52];

/// Face inequalities: identity coefficient first, then COORDINATE_LABELS.
/// Row j separates counterexample state j for j < 7; the last row is the
/// face whose center admits a reduction onto the octahedron boundary.
const FACE_ROWS: [[i64; 16]; 8] = [
    [-1, 0, 1, 1, 0, -1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [-2, 1, 1, -1, 1, -2, 0, 0, 2, -1, -1, 1, 0, 1, 1, 1],
    [-2, 1, 1, 0, -1, 0, 2, -1, 1, 0, 0, -1, 2, -1, -1, 0],
    [-2, 1, 2, 0, -1, 0, 1, 1, 2, -1, -2, 0, 0, 1, 0, 0],
    [-2, 1, 0, 0, -1, 0, -1, -1, 1, 0, 1, -1, 1, 0, -1, 1],
    [-3, 2, 2, 1, 1, -2, 0, 1, 3, -2, -2, -1, 1, 0, -2, 1],
    [-4, 2, -1, 2, -3, 3, -2, 3, 1, 1, -2, -3, -1, 3, 2, -1],
    [-1, 1, 1, 1, 1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0],
];

/// Five-qubit code generators, then the transversal logical X and Z.
const CODE_LABELS: [&str; 6] = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "XXXXX", "ZZZZZ"];

/// Owned copy of the embedded integer tables. Verification checks run on a
/// value of this type so that tamper tests can flip individual entries and
/// watch the right check fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub counterexample_rows: Vec<Vec<i64>>,
    pub counterexample_denominators: Vec<i64>,
    pub face_rows: Vec<Vec<i64>>,
    /// Four code generators followed by the two transversal logicals.
    pub code_labels: Vec<String>,
}

impl Tables {
    pub fn embedded() -> Self {
        Tables {
            counterexample_rows: COUNTEREXAMPLE_ROWS.iter().map(|r| r.to_vec()).collect(),
            counterexample_denominators: COUNTEREXAMPLE_DENOMINATORS.to_vec(),
            face_rows: FACE_ROWS.iter().map(|r| r.to_vec()).collect(),
            code_labels: CODE_LABELS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Negate one table entry. Refuses zero entries (negating them changes
    /// nothing) and unknown coordinates, so a tamper test cannot silently
    /// corrupt nothing.
    pub fn flip_sign(&mut self, table: &str, row: usize, col: usize) -> Result<()> {
        use crate::Error;
        let entry = match table {
            "counterexamples" => self
                .counterexample_rows
                .get_mut(row)
                .and_then(|r| r.get_mut(col)),
            "faces" => self.face_rows.get_mut(row).and_then(|r| r.get_mut(col)),
            _ => {
                return Err(Error::BadTableEntry(format!(
                    "unknown table {table:?}, expected \"counterexamples\" or \"faces\""
                )))
            }
        };
        let Some(v) = entry else {
            return Err(Error::BadTableEntry(format!("no entry {table}[{row}][{col}]")));
        };
        if *v == 0 {
            return Err(Error::BadTableEntry(format!(
                "entry {table}[{row}][{col}] is zero; flipping its sign changes nothing"
            )));
        }
        *v = -*v;
        Ok(())
    }

    /// Content hash of the tables, byte for byte over the integer entries
    /// and code labels.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for (row, den) in self.counterexample_rows.iter().zip(&self.counterexample_denominators)
        {
            for v in row {
                hasher.update(v.to_le_bytes());
            }
            hasher.update(den.to_le_bytes());
        }
        for row in &self.face_rows {
            for v in row {
                hasher.update(v.to_le_bytes());
            }
        }
        for label in &self.code_labels {
            hasher.update(label.as_bytes());
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn counterexample_states(&self) -> Vec<PauliCoefficients<Rat>> {
        self.counterexample_rows
            .iter()
            .zip(&self.counterexample_denominators)
            .map(|(row, &den)| {
                let mut s = PauliCoefficients::<Rat>::maximally_mixed(2);
                for (label, &num) in COORDINATE_LABELS.iter().zip(row) {
                    s.set(label, rat(num, den)).expect("embedded label");
                }
                s
            })
            .collect()
    }

    pub fn face_inequalities(&self) -> Vec<Halfspace> {
        self.face_rows
            .iter()
            .map(|row| {
                // reorder from table column order to label-index order
                let mut coeffs = vec![0i64; 16];
                coeffs[0] = row[0];
                for (label, &v) in COORDINATE_LABELS.iter().zip(&row[1..]) {
                    let idx =
                        PauliOperator::parse(label).expect("embedded label").label_index();
                    coeffs[idx] = v;
                }
                Halfspace::from_integers(2, &coeffs).expect("embedded face")
            })
            .collect()
    }

    pub fn five_qubit_code(&self) -> Result<StabilizerGroup> {
        let gens: Vec<&str> = self.code_labels[..4].iter().map(|s| s.as_str()).collect();
        StabilizerGroup::from_labels(&gens)
    }

    pub fn five_qubit_logicals(&self) -> Result<(PauliOperator, PauliOperator)> {
        let x = PauliOperator::parse(&self.code_labels[4])?;
        let z = PauliOperator::parse(&self.code_labels[5])?;
        Ok((x, z))
    }
}

/// The seven embedded states, exact.
pub fn counterexample_states() -> Vec<PauliCoefficients<Rat>> {
    Tables::embedded().counterexample_states()
}

/// The scale applied to each counterexample's integer coordinate row.
pub fn counterexample_fractions() -> Vec<Rat> {
    COUNTEREXAMPLE_DENOMINATORS.iter().map(|&d| rat(1, d)).collect()
}

/// The eight face inequalities of the two-qubit stabilizer polytope, one
/// representative per symmetry class.
pub fn face_inequalities() -> Vec<Halfspace> {
    Tables::embedded().face_inequalities()
}

/// Stabilizer generators of the five-qubit code.
pub fn five_qubit_code() -> StabilizerGroup {
    Tables::embedded().five_qubit_code().expect("embedded generators")
}

/// Transversal logical operators for the five-qubit code.
pub fn five_qubit_logicals() -> (PauliOperator, PauliOperator) {
    Tables::embedded().five_qubit_logicals().expect("embedded logicals")
}

/// The point on the x = y cross-section satisfying both the diagonal bound
/// (2x + z = 3/sqrt7) and the cone bound (z + x sqrt2 = 1) with equality:
/// x = y = (3 sqrt7 - 7)/(7 (2 - sqrt2)), z = (14 - 3 sqrt14)/(7 (2 - sqrt2)).
pub fn dual_bound_equality_point() -> BlochVector {
    let den = 7.0 * (2.0 - std::f64::consts::SQRT_2);
    let xy = (3.0 * 7f64.sqrt() - 7.0) / den;
    let z = (14.0 - 3.0 * 14f64.sqrt()) / den;
    BlochVector::new(xy, xy, z)
}

/// Largest shrink factor at which the twisted five-qubit scheme is still
/// known to converge from the equality point.
pub const EQUALITY_POINT_SCALE: f64 = 0.9895;

/// Published lower end of the x = y stretch where the twisted scheme
/// improves on the other criteria (the upper end is 1/sqrt7).
pub const TWISTED_CURVE_LOWER_X: f64 = 0.1956;

/// Frozen hash of the embedded tables; reports carry it and the tamper
/// checks compare against it.
pub const FROZEN_DATA_DIGEST: &str =
    "de2c8f0b48e2b8034b69bc245a0f5d6f4f69db2631ed62396158335431ce8e1d";

/// Content hash of every embedded table, for report headers and tamper
/// detection.
pub fn data_tables_digest() -> String {
    Tables::embedded().digest()
}

/// Every embedded table row re-validated; used by the named-check registry.
pub fn validate_embedded_data() -> Result<()> {
    use crate::Error;
    for (i, s) in counterexample_states().iter().enumerate() {
        if !s.is_valid_state() {
            return Err(Error::InvalidState(format!(
                "embedded state {} is not a density matrix",
                i + 1
            )));
        }
    }
    let faces = face_inequalities();
    if faces.len() != 8 {
        return Err(Error::InvalidState("expected eight face inequalities".into()));
    }
    five_qubit_code();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::commutes;
    use crate::polytope::verify_halfspace;
    use crate::stabilizer::enumerate_stabilizer_states;
    use num_traits::Zero;

    #[test]
    fn every_embedded_state_is_a_valid_density_matrix() {
        for (i, s) in counterexample_states().iter().enumerate() {
            assert!(s.is_valid_state(), "state {} fails the exact matrix check", i + 1);
        }
    }

    #[test]
    fn first_embedded_state_matches_its_quoted_expansion() {
        let s = &counterexample_states()[0];
        let mut expect = PauliCoefficients::<Rat>::maximally_mixed(2);
        for (label, sign) in [("IY", 1), ("IZ", 1), ("XX", -1), ("YX", 1), ("ZX", 1)] {
            expect.set(label, rat(sign, 12)).unwrap();
        }
        assert_eq!(s.c, expect.c);
    }

    #[test]
    fn each_face_holds_on_all_vertices_with_at_least_fifteen_tight() {
        let vertices = enumerate_stabilizer_states(2).unwrap();
        for (j, face) in face_inequalities().iter().enumerate() {
            let (max, tight) = verify_halfspace(face, &vertices);
            assert!(max.is_zero(), "face {} must have maximum exactly zero", j + 1);
            assert!(tight >= 15, "face {} has only {tight} tight vertices", j + 1);
        }
    }

    #[test]
    fn face_j_separates_state_j_and_the_first_gives_one_sixth() {
        let states = counterexample_states();
        let faces = face_inequalities();
        for j in 0..7 {
            let value = faces[j].inner_product(&states[j]);
            assert!(
                value > Rat::zero(),
                "face {} fails to separate its paired state",
                j + 1
            );
            if j == 0 {
                assert_eq!(value, rat(1, 6), "quoted inner product of the first pair");
            }
        }
    }

    #[test]
    fn five_qubit_code_has_sixteen_elements_and_transversal_logicals() {
        let code = five_qubit_code();
        assert_eq!(code.elements().len(), 16, "four generators span a rank-four group");
        let (x_l, z_l) = five_qubit_logicals();
        for g in &code.generators {
            assert!(commutes(g, &x_l).unwrap(), "logical X must centralize the code");
            assert!(commutes(g, &z_l).unwrap(), "logical Z must centralize the code");
        }
        assert!(!commutes(&x_l, &z_l).unwrap(), "logical pair anticommutes");
    }

    #[test]
    fn equality_point_sits_on_both_region_bounds() {
        let p = dual_bound_equality_point();
        assert!(
            (2.0 * p.x + p.z - 3.0 / 7f64.sqrt()).abs() < 1e-15,
            "diagonal bound with equality"
        );
        assert!(
            (p.z + p.x * std::f64::consts::SQRT_2 - 1.0).abs() < 1e-15,
            "cone bound with equality"
        );
        assert!((p.x - 0.2286).abs() < 5e-5);
        assert!((p.z - 0.6768).abs() < 5e-5);
    }

    #[test]
    fn data_digest_is_frozen() {
        assert_eq!(
            data_tables_digest(),
            FROZEN_DATA_DIGEST,
            "embedded tables changed; update downstream reports deliberately"
        );
    }

    #[test]
    fn sign_flips_move_the_digest_and_zero_flips_are_refused() {
        let mut t = Tables::embedded();
        t.flip_sign("faces", 0, 2).unwrap();
        assert_ne!(t.digest(), FROZEN_DATA_DIGEST, "tampering must change the hash");
        t.flip_sign("faces", 0, 2).unwrap();
        assert_eq!(t.digest(), FROZEN_DATA_DIGEST, "a double flip restores the tables");
        assert!(
            t.flip_sign("faces", 0, 1).is_err(),
            "the zero entry cannot be corrupted by a sign flip"
        );
        assert!(t.flip_sign("vertices", 0, 0).is_err(), "unknown table name");
        assert!(t.flip_sign("faces", 9, 0).is_err(), "row out of range");
    }

    #[test]
    fn embedded_data_validates() {
        validate_embedded_data().unwrap();
    }
}
