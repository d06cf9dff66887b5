//! Postselected n-to-one-qubit reductions applied to coefficient vectors.
//!
//! A reduction is a stabilizer group with n-1 generators on n qubits. Applying
//! it projects onto the joint +1 eigenspace and reads the surviving logical
//! qubit: each logical coefficient is a signed sum of the input coefficients
//! over one coset of the group. The module also packages counterexample
//! reports (a membership certificate plus all 30 two-qubit reductions) and a
//! parallel, checkpointable search over every reduction at a given size.

use crate::coeffs::PauliCoefficients;
use crate::pauli::{pauli_multiply, symplectic_product, PauliOperator};
use crate::polytope::{membership, MembershipCertificate};
use crate::rat::{rat_to_f64, Rat};
use crate::stabilizer::{
    count_reductions, for_each_isotropic_subspace, StabilizerGroup, SubspaceElements,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Unnormalized logical coefficients (c_I', c_X', c_Y', c_Z') of the output
/// qubit. Dividing the last three by c_I' gives the postselected Bloch
/// coordinates; c_I' itself is the success weight (the postselection
/// probability up to the projector normalization).
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput<T> {
    pub c: [T; 4],
}

impl<T: Zero> ReductionOutput<T> {
    pub fn success_weight(&self) -> &T {
        &self.c[0]
    }

    /// Zero success weight: the postselection never fires.
    pub fn is_degenerate(&self) -> bool {
        self.c[0].is_zero()
    }
}

impl ReductionOutput<Rat> {
    pub fn to_f64(&self) -> ReductionOutput<f64> {
        ReductionOutput {
            c: [
                rat_to_f64(&self.c[0]),
                rat_to_f64(&self.c[1]),
                rat_to_f64(&self.c[2]),
                rat_to_f64(&self.c[3]),
            ],
        }
    }
}

impl ReductionOutput<f64> {
    /// Normalized Bloch coordinates of the output qubit; None when degenerate.
    pub fn bloch(&self) -> Option<crate::maps::BlochVector> {
        if self.c[0] <= 0.0 {
            return None;
        }
        Some(crate::maps::BlochVector::new(
            self.c[1] / self.c[0],
            self.c[2] / self.c[0],
            self.c[3] / self.c[0],
        ))
    }
}

/// Canonical logical operators (X_L, Y_L, Z_L) for the free qubit: X_L is the
/// lowest label index in the centralizer that is not a group element, Z_L the
/// lowest centralizer label anticommuting with X_L, and Y_L = i X_L Z_L.
/// The choice fixes an output frame; any other valid choice differs by a
/// single-qubit Clifford on the output.
pub fn logical_operators(
    r: &StabilizerGroup,
) -> Result<(PauliOperator, PauliOperator, PauliOperator)> {
    let n = r.n;
    if r.generators.len() + 1 != n {
        return Err(Error::InvalidGroup(format!(
            "a reduction to one qubit needs {} generators on {} qubits, got {}",
            n - 1,
            n,
            r.generators.len()
        )));
    }
    let mask = (1u32 << n) - 1;
    let centralizes = |label: u32| {
        r.generators
            .iter()
            .all(|g| symplectic_product(label >> n, label & mask, g.x_bits, g.z_bits) == 0)
    };
    let span: Vec<u32> = r.elements().iter().map(|e| e.label_index() as u32).collect();
    let labels = 1u32 << (2 * n);
    let x_label = (1..labels)
        .find(|&l| !span.contains(&l) && centralizes(l))
        .ok_or_else(|| Error::InvalidGroup("no logical X candidate".into()))?;
    let xp = PauliOperator::from_label_index(n, x_label as usize);
    // Everything below x_label in the centralizer lies in the group span and
    // so commutes with X_L; the scan can continue upward.
    let z_label = (x_label + 1..labels)
        .find(|&l| {
            centralizes(l)
                && symplectic_product(l >> n, l & mask, xp.x_bits, xp.z_bits) == 1
        })
        .ok_or_else(|| Error::InvalidGroup("no logical Z candidate".into()))?;
    let zp = PauliOperator::from_label_index(n, z_label as usize);
    let yp = pauli_multiply(&xp, &zp)?.times_i();
    debug_assert!(yp.is_hermitian(), "i X_L Z_L of anticommuting logicals is Hermitian");
    Ok((xp, yp, zp))
}

/// Project onto the group's +1 eigenspace and read the logical qubit: each
/// output coefficient is the signed coset sum c'_Q = sum_g sign(Q g) c_|Q g|
/// over the 2^(n-1) group elements. The group constructor already excludes
/// -identity (its generators would be dependent).
pub fn apply_reduction<T>(
    s: &PauliCoefficients<T>,
    r: &StabilizerGroup,
) -> Result<ReductionOutput<T>>
where
    T: Clone + Zero + std::ops::Neg<Output = T>,
{
    if s.n != r.n {
        return Err(Error::QubitMismatch { expected: r.n, got: s.n });
    }
    let (x_l, y_l, z_l) = logical_operators(r)?;
    let elements = r.elements();
    let identity = PauliOperator::identity(r.n);
    let mut out = [T::zero(), T::zero(), T::zero(), T::zero()];
    for (slot, q) in [identity, x_l, y_l, z_l].iter().enumerate() {
        let mut acc = T::zero();
        for g in &elements {
            let p = pauli_multiply(q, g)?;
            let v = s.c[p.label_index()].clone();
            acc = if p.sign()? < 0 { acc + (-v) } else { acc + v };
        }
        out[slot] = acc;
    }
    Ok(ReductionOutput { c: out })
}

/// |c_X'| + |c_Y'| + |c_Z'| <= c_I', with degenerate outputs counting as
/// inside (a reduction that never succeeds distills nothing).
pub fn in_octahedron<T: Signed + PartialOrd>(o: &ReductionOutput<T>) -> bool {
    if o.c[0].is_zero() {
        return true;
    }
    let sum = o.c[1].abs() + o.c[2].abs() + o.c[3].abs();
    sum.le(&o.c[0])
}

/// Three structural facts about the support S of the nonzero nontrivial
/// coefficients: (1) no two elements of S commute; (2) the product of any two
/// elements of S commutes with neither factor; (3) every nontrivial Pauli
/// outside S commutes with exactly three elements of S.
pub fn check_structure<T: Zero>(s: &PauliCoefficients<T>) -> (bool, bool, bool) {
    let n = s.n;
    let mask = (1u32 << n) - 1;
    let support: Vec<u32> =
        (1..s.c.len()).filter(|&i| !s.c[i].is_zero()).map(|i| i as u32).collect();
    let anticommute =
        |a: u32, b: u32| symplectic_product(a >> n, a & mask, b >> n, b & mask) == 1;
    let mut pairwise = true;
    let mut products = true;
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[..i] {
            if !anticommute(a, b) {
                pairwise = false;
            }
            let prod = a ^ b;
            if !anticommute(prod, a) || !anticommute(prod, b) {
                products = false;
            }
        }
    }
    let mut outside_triples = true;
    for q in 1..(1u32 << (2 * n)) {
        if support.contains(&q) {
            continue;
        }
        let commuting = support.iter().filter(|&&a| !anticommute(a, q)).count();
        if commuting != 3 {
            outside_triples = false;
        }
    }
    (pairwise, products, outside_triples)
}

#[derive(Clone, Debug)]
pub struct ReductionCheck {
    pub group: StabilizerGroup,
    pub output: ReductionOutput<Rat>,
    pub inside: bool,
}

/// Membership certificate for the state itself plus the outputs of all 30
/// two-qubit reductions.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub membership: MembershipCertificate,
    pub checks: Vec<ReductionCheck>,
}

impl CounterexampleReport {
    pub fn outside_polytope(&self) -> bool {
        !self.membership.is_inside()
    }

    pub fn all_reductions_inside(&self) -> bool {
        self.checks.iter().all(|c| c.inside)
    }

    /// A genuine counterexample leaves the convex hull, yet no reduction
    /// extracts anything outside the octahedron from it.
    pub fn passes(&self) -> bool {
        self.outside_polytope() && self.all_reductions_inside()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "outside_polytope": self.outside_polytope(),
            "all_reductions_inside": self.all_reductions_inside(),
            "passes": self.passes(),
            "membership": self.membership.to_json(),
            "reductions": self.checks.iter().map(|c| serde_json::json!({
                "generators": c.group.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "c": c.output.c.iter()
                    .map(|v| serde_json::json!([v.numer().to_string(), v.denom().to_string()]))
                    .collect::<Vec<_>>(),
                "inside": c.inside,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn verify_counterexample(s: &PauliCoefficients<Rat>) -> Result<CounterexampleReport> {
    if s.n != 2 {
        return Err(Error::QubitLimit(s.n, 2));
    }
    let membership = membership(s)?;
    let mut checks = Vec::with_capacity(30);
    for group in crate::stabilizer::enumerate_reductions(2)? {
        let output = apply_reduction(s, &group)?;
        let inside = in_octahedron(&output);
        checks.push(ReductionCheck { group, output, inside });
    }
    Ok(CounterexampleReport { membership, checks })
}

/// Search objectives, all invariant under the free single-qubit Clifford on
/// the output so that the canonical logical frame does not matter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Best achievable x' + z' after an output Clifford: the largest sum of
    /// two normalized coordinate magnitudes.
    SumXZ,
    /// Fidelity with the pure state along the positive diagonal,
    /// (1 + (|x|+|y|+|z|)/sqrt(3)) / 2.
    TFidelity,
    /// Octahedron escape margin |x| + |y| + |z| - 1.
    EscapeO1,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::SumXZ, Objective::TFidelity, Objective::EscapeO1];

    pub fn tag(self) -> &'static str {
        match self {
            Objective::SumXZ => "sum_xz",
            Objective::TFidelity => "t_fidelity",
            Objective::EscapeO1 => "escape_o1",
        }
    }

    pub fn parse(tag: &str) -> Result<Objective> {
        Objective::ALL
            .into_iter()
            .find(|o| o.tag() == tag)
            .ok_or_else(|| Error::InvalidState(format!("unknown objective {tag:?}")))
    }

    /// Value on a normalized output; None when degenerate.
    pub fn evaluate(self, o: &ReductionOutput<f64>) -> Option<f64> {
        if o.c[0] <= 0.0 {
            return None;
        }
        let ax = (o.c[1] / o.c[0]).abs();
        let ay = (o.c[2] / o.c[0]).abs();
        let az = (o.c[3] / o.c[0]).abs();
        Some(match self {
            Objective::SumXZ => (ax + ay).max(ax + az).max(ay + az),
            Objective::TFidelity => 0.5 * (1.0 + (ax + ay + az) / 3f64.sqrt()),
            Objective::EscapeO1 => ax + ay + az - 1.0,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Reductions between checkpoint writes.
    pub checkpoint_every: u64,
    /// Subspaces per parallel block (each subspace carries 2^(n-1) sign
    /// choices).
    pub block_size: usize,
    /// Stop after this many full blocks; the result is marked incomplete.
    pub max_blocks: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 0,
            checkpoint: None,
            checkpoint_every: 1_000_000,
            block_size: 2048,
            max_blocks: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub objective: Objective,
    /// Position in the canonical enumeration (subspace index times 2^(n-1)
    /// plus the generator sign bits).
    pub best_index: u64,
    pub best_group: StabilizerGroup,
    pub best_output: ReductionOutput<Rat>,
    pub best_value: f64,
    pub evaluated: u64,
    pub total: u64,
    pub completed: bool,
    /// Whether objective comparisons ran on exact integers (small common
    /// denominator) or on f64.
    pub exact_arithmetic: bool,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "objective": self.objective.tag(),
            "best_index": self.best_index,
            "best_generators": self.best_group.generators.iter()
                .map(|g| g.to_string()).collect::<Vec<_>>(),
            "best_c": self.best_output.c.iter()
                .map(|v| serde_json::json!([v.numer().to_string(), v.denom().to_string()]))
                .collect::<Vec<_>>(),
            "best_value": self.best_value,
            "evaluated": self.evaluated,
            "total": self.total,
            "completed": self.completed,
            "exact_arithmetic": self.exact_arithmetic,
        })
    }
}

/// Number type the search engine runs on: exact integer numerators over a
/// common denominator, or f64 when the denominators are too large.
trait SearchNum: Copy + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn abs_val(self) -> Self;
    fn max_val(self, o: Self) -> Self;
    fn positive(self) -> bool;
    /// a1/s1 > a2/s2 with positive denominators, decided without division.
    fn ratio_gt(a1: Self, s1: Self, a2: Self, s2: Self) -> bool;
}

impl SearchNum for i128 {
    fn zero() -> Self {
        0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs_val(self) -> Self {
        self.abs()
    }
    fn max_val(self, o: Self) -> Self {
        self.max(o)
    }
    fn positive(self) -> bool {
        self > 0
    }
    fn ratio_gt(a1: Self, s1: Self, a2: Self, s2: Self) -> bool {
        a1 * s2 > a2 * s1
    }
}

impl SearchNum for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs_val(self) -> Self {
        self.abs()
    }
    fn max_val(self, o: Self) -> Self {
        self.max(o)
    }
    fn positive(self) -> bool {
        self > 0.0
    }
    fn ratio_gt(a1: Self, s1: Self, a2: Self, s2: Self) -> bool {
        a1 * s2 > a2 * s1
    }
}

#[derive(Clone, Debug)]
struct Candidate<N> {
    a: N,
    s: N,
    index: u64,
    generators: Vec<u32>,
}

/// Deterministic max-merge: larger objective ratio wins, ties go to the
/// earlier enumeration index. Total order, so any reduce tree agrees.
fn better<N: SearchNum>(l: Option<Candidate<N>>, r: Option<Candidate<N>>) -> Option<Candidate<N>> {
    match (l, r) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if N::ratio_gt(b.a, b.s, a.a, a.s) {
            b
        } else if N::ratio_gt(a.a, a.s, b.a, b.s) {
            a
        } else if a.index <= b.index {
            a
        } else {
            b
        }),
    }
}

/// Evaluate all 2^(n-1) sign choices of one subspace. Coset term tables are
/// built once per subspace; the sign loop only flips precomputed signs.
fn eval_subspace<N: SearchNum>(
    nums: &[N],
    sub: &SubspaceElements,
    objective: Objective,
    base_index: u64,
) -> Option<Candidate<N>> {
    let n = sub.n;
    let group = sub.group(0);
    let (x_l, y_l, z_l) = logical_operators(&group).expect("enumerated groups are valid");
    let identity = PauliOperator::identity(n);
    let mut terms: [Vec<(usize, i8, u32)>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for (slot, q) in [identity, x_l, y_l, z_l].iter().enumerate() {
        terms[slot].reserve(sub.elements.len());
        for &(label, base_sign, subset) in &sub.elements {
            let mut g = PauliOperator::from_label_index(n, label as usize);
            if base_sign < 0 {
                g = g.negate();
            }
            let p = pauli_multiply(q, &g).expect("same qubit count");
            terms[slot].push((p.label_index(), p.sign().expect("hermitian coset element"), subset));
        }
    }
    let mut best: Option<(N, N, u64)> = None;
    for sign_bits in 0..(1u32 << sub.generators.len()) {
        let mut c = [N::zero(); 4];
        for slot in 0..4 {
            let mut acc = N::zero();
            for &(ci, sg, subset) in &terms[slot] {
                let flip = (sg < 0) ^ ((subset & sign_bits).count_ones() & 1 == 1);
                acc = acc.add(if flip { nums[ci].neg() } else { nums[ci] });
            }
            c[slot] = acc;
        }
        if !c[0].positive() {
            continue;
        }
        let (ax, ay, az) = (c[1].abs_val(), c[2].abs_val(), c[3].abs_val());
        let a = match objective {
            Objective::SumXZ => ax.add(ay).max_val(ax.add(az)).max_val(ay.add(az)),
            Objective::TFidelity | Objective::EscapeO1 => ax.add(ay).add(az),
        };
        let cand = (a, c[0], base_index + sign_bits as u64);
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if N::ratio_gt(cand.0, cand.1, cur.0, cur.1) {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    best.map(|(a, s, index)| Candidate { a, s, index, generators: sub.generators.clone() })
}

const CHECKPOINT_FORMAT: &str = "magicdist-search-1";

/// Input and objective fingerprint; a checkpoint only resumes the exact run
/// that wrote it.
fn search_digest(s: &PauliCoefficients<Rat>, objective: Objective) -> String {
    let mut h = Sha256::new();
    h.update(s.to_json().to_string().as_bytes());
    h.update(objective.tag().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

struct DriveState<N> {
    best: Option<Candidate<N>>,
    next_subspace: u64,
    evaluated: u64,
    completed: bool,
}

fn write_checkpoint<N: SearchNum>(
    path: &Path,
    digest: &str,
    state: &DriveState<N>,
    signs_per: u64,
) -> Result<()> {
    let best = state.best.as_ref().map(|b| {
        serde_json::json!({ "index": b.index, "generators": b.generators })
    });
    let v = serde_json::json!({
        "format": CHECKPOINT_FORMAT,
        "digest": digest,
        "next_index": state.next_subspace * signs_per,
        "best_so_far": best,
    });
    let tmp = PathBuf::from(format!("{}.tmp", path.display()));
    std::fs::write(&tmp, serde_json::to_string_pretty(&v)? + "\n")?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

struct ResumePoint {
    start_subspace: u64,
    best: Option<(u64, Vec<u32>)>,
}

fn read_checkpoint(
    path: &Path,
    digest: &str,
    n: usize,
    subspaces_total: u64,
) -> Result<ResumePoint> {
    let signs_per = 1u64 << (n - 1);
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::BadCheckpoint(format!("not valid JSON: {e}")))?;
    if v.get("format").and_then(|f| f.as_str()) != Some(CHECKPOINT_FORMAT) {
        return Err(Error::BadCheckpoint("unrecognized format marker".into()));
    }
    if v.get("digest").and_then(|d| d.as_str()) != Some(digest) {
        return Err(Error::BadCheckpoint(
            "digest does not match this input and objective".into(),
        ));
    }
    let next_index = v
        .get("next_index")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::BadCheckpoint("missing next_index".into()))?;
    if next_index % signs_per != 0 || next_index / signs_per > subspaces_total {
        return Err(Error::BadCheckpoint(format!(
            "next_index {next_index} is not a valid resume position"
        )));
    }
    let best = match v.get("best_so_far") {
        None | Some(serde_json::Value::Null) => None,
        Some(b) => {
            let index = b
                .get("index")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::BadCheckpoint("best_so_far is missing its index".into()))?;
            if index >= next_index {
                return Err(Error::BadCheckpoint(
                    "best_so_far.index lies beyond the processed range".into(),
                ));
            }
            let generators = b
                .get("generators")
                .and_then(|g| g.as_array())
                .ok_or_else(|| Error::BadCheckpoint("best_so_far has no generator list".into()))?
                .iter()
                .map(|x| x.as_u64().and_then(|u| u32::try_from(u).ok()))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| {
                    Error::BadCheckpoint("generator labels are not small integers".into())
                })?;
            if generators.len() + 1 != n {
                return Err(Error::BadCheckpoint(format!(
                    "stored best has {} generators, expected {}",
                    generators.len(),
                    n - 1
                )));
            }
            Some((index, generators))
        }
    };
    Ok(ResumePoint { start_subspace: next_index / signs_per, best })
}

/// Replay the stored best reduction; it must evaluate back to the same index
/// (it was the maximum of its own subspace when written).
fn reseed<N: SearchNum>(
    nums: &[N],
    n: usize,
    objective: Objective,
    point: &ResumePoint,
) -> Result<Option<Candidate<N>>> {
    let Some((index, gens)) = &point.best else {
        return Ok(None);
    };
    let signs_per = 1u64 << (n - 1);
    let sub = SubspaceElements::from_generators(n, gens)
        .map_err(|e| Error::BadCheckpoint(format!("stored best does not rebuild: {e}")))?;
    let subspace_idx = index / signs_per;
    match eval_subspace(nums, &sub, objective, subspace_idx * signs_per) {
        Some(c) if c.index == *index => Ok(Some(c)),
        _ => Err(Error::BadCheckpoint(
            "stored best does not replay to the same reduction".into(),
        )),
    }
}

fn drive<N: SearchNum>(
    nums: &[N],
    n: usize,
    objective: Objective,
    start_subspace: u64,
    seed: Option<Candidate<N>>,
    opts: &SearchOptions,
    digest: &str,
    subspaces_total: u64,
) -> Result<DriveState<N>> {
    let signs_per = 1u64 << (n - 1);
    let block_size = opts.block_size.max(1);
    let mut state = DriveState {
        best: seed,
        next_subspace: start_subspace,
        evaluated: start_subspace * signs_per,
        completed: false,
    };
    let mut block: Vec<(u64, SubspaceElements)> = Vec::with_capacity(block_size);
    let mut since_checkpoint = 0u64;
    let mut blocks_done = 0u64;
    let mut halted = false;
    let mut failure: Option<Error> = None;

    let flush = |block: &mut Vec<(u64, SubspaceElements)>,
                 state: &mut DriveState<N>,
                 since: &mut u64|
     -> Result<()> {
        if block.is_empty() {
            return Ok(());
        }
        let local = block
            .par_iter()
            .map(|(idx, sub)| eval_subspace(nums, sub, objective, idx * signs_per))
            .reduce(|| None, better);
        state.best = better(state.best.take(), local);
        let count = block.len() as u64 * signs_per;
        state.evaluated += count;
        *since += count;
        state.next_subspace = block.last().expect("nonempty block").0 + 1;
        block.clear();
        if let Some(path) = &opts.checkpoint {
            if *since >= opts.checkpoint_every {
                write_checkpoint(path, digest, state, signs_per)?;
                *since = 0;
            }
        }
        Ok(())
    };

    for_each_isotropic_subspace(n, n - 1, |idx, sub| {
        if halted || failure.is_some() {
            return;
        }
        let idx = idx as u64;
        if idx < start_subspace {
            return;
        }
        block.push((idx, sub.clone()));
        if block.len() >= block_size {
            if let Err(e) = flush(&mut block, &mut state, &mut since_checkpoint) {
                failure = Some(e);
                return;
            }
            blocks_done += 1;
            if opts.max_blocks.is_some_and(|m| blocks_done >= m) {
                halted = true;
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if !halted {
        flush(&mut block, &mut state, &mut since_checkpoint)?;
    }
    state.completed = state.next_subspace == subspaces_total;
    if let Some(path) = &opts.checkpoint {
        write_checkpoint(path, digest, &state, signs_per)?;
    }
    Ok(state)
}

/// Integer numerators over the common denominator, when small enough that
/// every objective comparison stays below 2^120 in i128.
fn integer_numerators(s: &PauliCoefficients<Rat>) -> Option<Vec<i128>> {
    let mut common = BigInt::one();
    for c in &s.c {
        common = common.lcm(c.denom());
    }
    if common.bits() > 52 {
        return None;
    }
    let mut out = Vec::with_capacity(s.c.len());
    for c in &s.c {
        let scaled = c.numer() * (&common / c.denom());
        if scaled.bits() > 53 {
            return None;
        }
        out.push(scaled.to_i128()?);
    }
    Some(out)
}

/// Evaluate the objective on every reduction of the input's size, in the
/// canonical enumeration order, and return the argmax (ties broken toward the
/// earlier index). Runs block-parallel and, when a checkpoint path is set,
/// resumes from and rewrites `{next_index, best_so_far}` snapshots.
pub fn exhaustive_search(
    s: &PauliCoefficients<Rat>,
    objective: Objective,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let n = s.n;
    if !(2..=5).contains(&n) {
        return Err(Error::QubitLimit(n, 5));
    }
    let total = count_reductions(n);
    let signs_per = 1u64 << (n - 1);
    let subspaces_total = total / signs_per;
    let digest = search_digest(s, objective);
    let resume = match &opts.checkpoint {
        Some(path) if path.exists() => Some(read_checkpoint(path, &digest, n, subspaces_total)?),
        _ => None,
    };
    let exact_nums = integer_numerators(s);
    let run = || -> Result<(Option<(u64, Vec<u32>)>, u64, bool, bool)> {
        match &exact_nums {
            Some(nums) => {
                let seed = match &resume {
                    Some(r) => reseed(nums, n, objective, r)?,
                    None => None,
                };
                let start = resume.as_ref().map_or(0, |r| r.start_subspace);
                let st = drive(nums, n, objective, start, seed, opts, &digest, subspaces_total)?;
                Ok((st.best.map(|b| (b.index, b.generators)), st.evaluated, st.completed, true))
            }
            None => {
                let nums: Vec<f64> = s.c.iter().map(rat_to_f64).collect();
                let seed = match &resume {
                    Some(r) => reseed(&nums, n, objective, r)?,
                    None => None,
                };
                let start = resume.as_ref().map_or(0, |r| r.start_subspace);
                let st = drive(&nums, n, objective, start, seed, opts, &digest, subspaces_total)?;
                Ok((st.best.map(|b| (b.index, b.generators)), st.evaluated, st.completed, false))
            }
        }
    };
    let (best, evaluated, completed, exact_arithmetic) = if opts.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::InvalidState(format!("thread pool: {e}")))?
            .install(run)?
    } else {
        run()?
    };
    let Some((best_index, generators)) = best else {
        return Err(Error::Degenerate(
            "every evaluated reduction had zero success weight".into(),
        ));
    };
    let sign_bits = (best_index % signs_per) as u32;
    let sub = SubspaceElements::from_generators(n, &generators)?;
    let best_group = sub.group(sign_bits);
    let best_output = apply_reduction(s, &best_group)?;
    let best_value = objective
        .evaluate(&best_output.to_f64())
        .ok_or_else(|| Error::Degenerate("best reduction replayed as degenerate".into()))?;
    Ok(SearchResult {
        objective,
        best_index,
        best_group,
        best_output,
        best_value,
        evaluated,
        total,
        completed,
        exact_arithmetic,
    })
}
