//! The FIMAX distillation step, fixed-stabilizer steps, the dense
//! standard-form oracle and the iteration loop.
//!
//! One step consumes two copies of a Bell-diagonal state. Both parties project
//! onto codespaces of a stabilizer (outcomes `a` for Alice, `b` for Bob), keep
//! the run if `a - b` equals the chosen syndrome `s`, decode, discard the first
//! pair and apply a Weyl correction on Alice's side. For the canonic encoding
//! every coset `C ⊂ E(s)` acts on the kept pair as a Weyl operator `W_{L(C)}`,
//! so the output is again Bell-diagonal with
//!
//! ```text
//! p̂(L(C) - L(Ĉ)) = P(C) / P(E(s))
//! ```
//!
//! where `Ĉ` is the coset whose action is undone. FIMAX picks the stabilizer,
//! syndrome and `Ĉ` maximising `P(Ĉ)/P(E(s))`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::{canonic_encoding, coset_action, conjugate_error, EncodingMatrix};
use crate::error::{Error, Result};
use crate::field::{FieldScalar, Prime};
use crate::linalg::{kron, trace, CMatrix};
use crate::stabilizer::{enumerate_stabilizers, CosetId, CosetTable, Stabilizer};
use crate::states::{bell_index, two_copy_dense, two_copy_distribution, weyl_twirl, BdsState, DenseState, State};
use crate::weyl::{dense_matrix, ErrorElement};

/// Ratios must beat the incumbent by this much to replace it, so that
/// floating-point noise cannot reorder exact ties.
const TIE_EPS: f64 = 1e-12;
const STALL_EPS: f64 = 1e-12;

/// Outcome of the FIMAX selection.
#[derive(Clone, Debug, PartialEq)]
pub struct FimaxChoice {
    pub stabilizer: Stabilizer,
    pub coset: CosetId,
    pub syndrome: FieldScalar,
    /// `P(C_max) / P(E(s_max))`.
    pub predicted_fidelity: f64,
    /// `P(E(s_max))`.
    pub success_probability: f64,
    /// Weyl label of the action of `C_max` in the canonic encoding.
    pub action: ErrorElement,
    /// Label of the Weyl correction applied after decoding, `-action`.
    pub correction: ErrorElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub choice: FimaxChoice,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistillationRun {
    pub records: Vec<IterationRecord>,
    pub reached_target: bool,
    pub efficiency: f64,
    /// Fidelity of the last state produced (the input if no step ran).
    pub final_fidelity: f64,
}

impl DistillationRun {
    pub fn n_iterations(&self) -> usize {
        self.records.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RunJson::from(self)).expect("runs always serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    fidelity_before: f64,
    fidelity_after: f64,
    success_probability: f64,
    generator: Vec<u32>,
    coset_representative: Vec<u32>,
    syndrome: u32,
    correction: [u32; 2],
}

#[derive(Serialize, Deserialize)]
struct RunJson {
    records: Vec<RecordJson>,
    reached_target: bool,
    efficiency: f64,
}

impl From<&DistillationRun> for RunJson {
    fn from(run: &DistillationRun) -> Self {
        RunJson {
            records: run
                .records
                .iter()
                .map(|r| RecordJson {
                    fidelity_before: r.fidelity_before,
                    fidelity_after: r.fidelity_after,
                    success_probability: r.choice.success_probability,
                    generator: r.choice.stabilizer.generator().coords().to_vec(),
                    coset_representative: r.choice.coset.representative.coords().to_vec(),
                    syndrome: r.choice.syndrome.value(),
                    correction: [r.choice.correction.copy(0).0, r.choice.correction.copy(0).1],
                })
                .collect(),
            reached_target: run.reached_target,
            efficiency: run.efficiency,
        }
    }
}

/// How states that are not Bell-diagonal enter the iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NonBdsMode {
    /// Choose each step from the Bell diagonal but run it on the full state.
    Diag,
    /// Twirl once to the Bell diagonal, then iterate on that.
    #[default]
    Twirl,
}

impl FromStr for NonBdsMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "diag" => Ok(NonBdsMode::Diag),
            "twirl" => Ok(NonBdsMode::Twirl),
            other => Err(format!("unknown mode {other:?} (expected diag or twirl)")),
        }
    }
}

impl fmt::Display for NonBdsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonBdsMode::Diag => "diag",
            NonBdsMode::Twirl => "twirl",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistillOptions {
    pub target: f64,
    pub max_iterations: usize,
    pub nonbds: NonBdsMode,
}

impl Default for DistillOptions {
    fn default() -> Self {
        DistillOptions { target: 0.999, max_iterations: 200, nonbds: NonBdsMode::Twirl }
    }
}

struct Entry {
    table: CosetTable,
    /// Bell index of the canonic action label of each coset.
    labels: Vec<usize>,
    /// Coset indices sorted by representative.
    order: Vec<usize>,
}

/// Precomputed coset tables and action labels of every stabilizer for one `d`.
pub struct FimaxEngine {
    d: Prime,
    entries: Vec<Entry>,
}

impl FimaxEngine {
    pub fn new(d: Prime) -> Self {
        let entries = enumerate_stabilizers(d)
            .iter()
            .map(|stab| {
                let table = CosetTable::new(stab);
                let labels = table
                    .cosets()
                    .iter()
                    .map(|c| {
                        let (k, l) = coset_action(stab, c).expect("two-copy stabilizer").label.copy(0);
                        bell_index(d, k, l)
                    })
                    .collect();
                let mut order: Vec<usize> = (0..table.cosets().len()).collect();
                order.sort_by(|&i, &j| {
                    table.cosets()[i].representative.cmp(&table.cosets()[j].representative)
                });
                Entry { table, labels, order }
            })
            .collect();
        FimaxEngine { d, entries }
    }

    /// Engine for `d`, built once per process.
    pub fn shared(d: Prime) -> Arc<FimaxEngine> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FimaxEngine>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("engine cache poisoned");
        map.entry(d.get()).or_insert_with(|| Arc::new(FimaxEngine::new(d))).clone()
    }

    pub fn modulus(&self) -> Prime {
        self.d
    }

    pub fn stabilizers(&self) -> impl Iterator<Item = &Stabilizer> {
        self.entries.iter().map(|e| e.table.stabilizer())
    }

    fn entry(&self, stab: &Stabilizer) -> Result<&Entry> {
        self.entries
            .binary_search_by(|e| e.table.stabilizer().cmp(stab))
            .map(|i| &self.entries[i])
            .map_err(|_| Error::InvalidGenerator(format!("{stab} is not a two-copy stabilizer for d={}", self.d)))
    }

    fn check(&self, bds: &BdsState) -> Result<()> {
        if bds.modulus() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "state has d={}, engine d={}",
                bds.modulus(),
                self.d
            )));
        }
        Ok(())
    }

    /// Exact maximisation of `P(C)/P(E(s))` over all stabilizers and cosets.
    pub fn select(&self, bds: &BdsState) -> Result<FimaxChoice> {
        self.check(bds)?;
        let d = self.d;
        let dist = two_copy_distribution(bds);
        let per = d.as_usize() * d.as_usize();
        let mut best: Option<(f64, usize, usize, f64)> = None;
        for (si, entry) in self.entries.iter().enumerate() {
            let cp = entry.table.coset_probabilities(&dist);
            let pe: Vec<f64> = cp.chunks(per).map(|c| c.iter().sum()).collect();
            for &ci in &entry.order {
                let s = ci / per;
                if pe[s] <= 0.0 {
                    continue;
                }
                let ratio = cp[ci] / pe[s];
                if best.is_none_or(|(r, ..)| ratio > r + TIE_EPS) {
                    best = Some((ratio, si, ci, pe[s]));
                }
            }
        }
        let (ratio, si, ci, pe) = best.ok_or(Error::DegenerateInput)?;
        let entry = &self.entries[si];
        let coset = entry.table.cosets()[ci].clone();
        let (k, l) = crate::states::bell_label(d, entry.labels[ci]);
        let action = ErrorElement::single(d, k as i64, l as i64);
        Ok(FimaxChoice {
            stabilizer: entry.table.stabilizer().clone(),
            syndrome: coset.syndrome,
            coset,
            predicted_fidelity: ratio,
            success_probability: pe,
            correction: -&action,
            action,
        })
    }

    /// Output of post-selecting syndrome `s` without any correction:
    /// `p̂(L(C)) = P(C)/P(E(s))`, together with `P(E(s))`.
    pub fn uncorrected(&self, bds: &BdsState, stab: &Stabilizer, s: FieldScalar) -> Result<(BdsState, f64)> {
        self.corrected(bds, stab, s, None)
    }

    /// Fixed-stabilizer step undoing the action of `correction`.
    pub fn generic_step(
        &self,
        bds: &BdsState,
        stab: &Stabilizer,
        s: FieldScalar,
        correction: &CosetId,
    ) -> Result<(BdsState, f64)> {
        if correction.syndrome != s {
            return Err(Error::CosetMismatch { coset: correction.syndrome.value(), expected: s.value() });
        }
        self.corrected(bds, stab, s, Some(correction))
    }

    fn corrected(
        &self,
        bds: &BdsState,
        stab: &Stabilizer,
        s: FieldScalar,
        correction: Option<&CosetId>,
    ) -> Result<(BdsState, f64)> {
        self.check(bds)?;
        let d = self.d;
        let entry = self.entry(stab)?;
        let dist = two_copy_distribution(bds);
        let cp = entry.table.coset_probabilities(&dist);
        let per = d.as_usize() * d.as_usize();
        let range = s.value() as usize * per..(s.value() as usize + 1) * per;
        let pe: f64 = cp[range.clone()].iter().sum();
        if pe <= 0.0 {
            return Err(Error::ImpossiblePostselection);
        }
        let shift = match correction {
            Some(c) => entry.labels[entry.table.coset_index(&c.representative)],
            None => 0,
        };
        let (sk, sl) = crate::states::bell_label(d, shift);
        let mut out = vec![0.0; per];
        for ci in range {
            let (k, l) = crate::states::bell_label(d, entry.labels[ci]);
            let idx = bell_index(d, d.reduce(k as i64 - sk as i64), d.reduce(l as i64 - sl as i64));
            out[idx] += cp[ci] / pe;
        }
        Ok((BdsState::new(d, out)?, pe))
    }

    /// One FIMAX iteration.
    pub fn step(&self, bds: &BdsState) -> Result<(BdsState, IterationRecord)> {
        let choice = self.select(bds)?;
        let (out, _) = self.generic_step(bds, &choice.stabilizer, choice.syndrome, &choice.coset)?;
        let record = IterationRecord {
            fidelity_before: bds.fidelity(),
            fidelity_after: out.fidelity(),
            choice,
        };
        Ok((out, record))
    }
}

pub fn fimax_select(bds: &BdsState) -> Result<FimaxChoice> {
    FimaxEngine::shared(bds.modulus()).select(bds)
}

pub fn fimax_step(bds: &BdsState) -> Result<(BdsState, IterationRecord)> {
    FimaxEngine::shared(bds.modulus()).step(bds)
}

/// Post-select syndrome `s` of `stab` and undo the action of coset
/// `correction ⊂ E(s)`; returns the output state and `P(E(s))`.
pub fn generic_step(
    bds: &BdsState,
    stab: &Stabilizer,
    s: FieldScalar,
    correction: &CosetId,
) -> Result<(BdsState, f64)> {
    FimaxEngine::shared(bds.modulus()).generic_step(bds, stab, s, correction)
}

/// Post-select syndrome `s` of `stab` without correcting.
pub fn uncorrected_step(bds: &BdsState, stab: &Stabilizer, s: FieldScalar) -> Result<(BdsState, f64)> {
    FimaxEngine::shared(bds.modulus()).uncorrected(bds, stab, s)
}

/// `f_C(k,l) = |Tr(W_{k,l}† T)/d|²` for the block `T` of `C` that arrives in
/// Alice's codespace `Q(a)`.
pub fn coset_fidelity(
    enc: &EncodingMatrix,
    coset: &CosetId,
    a: FieldScalar,
    label: &ErrorElement,
) -> Result<f64> {
    let blocks = conjugate_error(enc, &coset.representative)?;
    Ok(weyl_weight(blocks.block_into(a), label))
}

/// `|Tr(W_label† B)/d|²`.
pub(crate) fn weyl_weight(block: &CMatrix, label: &ErrorElement) -> f64 {
    let d = label.modulus().as_usize() as f64;
    let w = dense_matrix(label);
    let overlap: Complex64 = w.iter().zip(block.iter()).map(|(x, y)| x.conj() * y).sum();
    (overlap / d).norm_sqr()
}

/// Dense reference for one outcome pair: projects the two-copy state
/// (ordering `A1 A2 B1 B2`) onto Alice's codespace `Q(a)` and Bob's conjugate
/// codespace `Q*(b)`, decodes with `U†` and `Uᵀ`, drops the first pair and
/// returns the normalised state on `A2 B2` with the outcome probability.
pub fn standard_form_oracle(
    two_copy: &CMatrix,
    enc: &EncodingMatrix,
    a: FieldScalar,
    b: FieldScalar,
) -> Result<(DenseState, f64)> {
    let d = enc.modulus();
    let n = d.as_usize();
    let dim = n.pow(4);
    if two_copy.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} two-copy state, got {:?}",
            two_copy.shape()
        )));
    }
    let u = enc.unitary();
    let alice = CMatrix::from_fn(n, n * n, |k, j| u[(j, a.value() as usize * n + k)].conj());
    let bob = CMatrix::from_fn(n, n * n, |k, j| u[(j, b.value() as usize * n + k)]);
    let kraus = kron(&alice, &bob);
    let out = &kraus * two_copy * kraus.adjoint();
    let prob = trace(&out).re;
    if prob <= 1e-14 {
        return Err(Error::ImpossiblePostselection);
    }
    Ok((DenseState::from_matrix_unchecked(d, out.unscale(prob)), prob))
}

/// `(W_label ⊗ 1) ρ (W_label ⊗ 1)†`.
pub fn apply_alice_weyl(state: &DenseState, label: &ErrorElement) -> DenseState {
    let n = state.modulus().as_usize();
    let w = kron(&dense_matrix(label), &CMatrix::identity(n, n));
    DenseState::from_matrix_unchecked(state.modulus(), &w * state.matrix() * w.adjoint())
}

/// One step on a dense state: the FIMAX choice is made on the Bell diagonal,
/// then the protocol runs on `ρ ⊗ ρ` through the oracle, averaging over Bob's
/// outcome with `a = b + s_max`.
pub fn dense_step(rho: &DenseState) -> Result<(DenseState, IterationRecord)> {
    let d = rho.modulus();
    let choice = fimax_select(&weyl_twirl(rho))?;
    let enc = canonic_encoding(&choice.stabilizer)?;
    let two = two_copy_dense(rho.matrix(), rho.matrix(), d);
    let n = d.as_usize();
    let mut acc = CMatrix::zeros(n * n, n * n);
    let mut total = 0.0;
    for b in d.elements() {
        match standard_form_oracle(&two, &enc, b + choice.syndrome, b) {
            Ok((out, prob)) => {
                acc += out.matrix() * Complex64::new(prob, 0.0);
                total += prob;
            }
            Err(Error::ImpossiblePostselection) => {}
            Err(e) => return Err(e),
        }
    }
    if total <= 0.0 {
        return Err(Error::ImpossiblePostselection);
    }
    let mixed = DenseState::from_matrix_unchecked(d, acc.unscale(total));
    let out = apply_alice_weyl(&mixed, &choice.correction);
    let mut choice = choice;
    choice.success_probability = total;
    let record = IterationRecord { fidelity_before: rho.fidelity(), fidelity_after: out.fidelity(), choice };
    Ok((out, record))
}

/// Iterates FIMAX until the target fidelity, the iteration cap, or a step
/// that fails to raise the fidelity by more than `1e-12`.
pub fn distill(state: &State, opts: &DistillOptions) -> Result<DistillationRun> {
    match (state, opts.nonbds) {
        (State::Bds(bds), _) => distill_bds(bds, opts),
        (State::Dense(rho), NonBdsMode::Twirl) => distill_bds(&weyl_twirl(rho), opts),
        (State::Dense(rho), NonBdsMode::Diag) => distill_dense(rho, opts),
    }
}

pub fn distill_bds(bds: &BdsState, opts: &DistillOptions) -> Result<DistillationRun> {
    let engine = FimaxEngine::shared(bds.modulus());
    iterate(bds.clone(), opts, |s| s.fidelity(), |s| engine.step(s))
}

fn distill_dense(rho: &DenseState, opts: &DistillOptions) -> Result<DistillationRun> {
    iterate(rho.clone(), opts, |s| s.fidelity(), dense_step)
}

fn iterate<S>(
    mut state: S,
    opts: &DistillOptions,
    fidelity: impl Fn(&S) -> f64,
    mut step: impl FnMut(&S) -> Result<(S, IterationRecord)>,
) -> Result<DistillationRun> {
    let mut records: Vec<IterationRecord> = Vec::new();
    while fidelity(&state) < opts.target && records.len() < opts.max_iterations {
        let (next, record) = step(&state)?;
        let stalled = record.fidelity_after - record.fidelity_before < STALL_EPS;
        records.push(record);
        state = next;
        if stalled {
            break;
        }
    }
    let final_fidelity = fidelity(&state);
    let reached_target = final_fidelity >= opts.target;
    let efficiency = if reached_target {
        records.iter().map(|r| 0.5 * r.choice.success_probability).product()
    } else {
        0.0
    };
    Ok(DistillationRun { records, reached_target, efficiency, final_fidelity })
}
