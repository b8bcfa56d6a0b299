//! Numerical invariant suites.
//!
//! Each suite returns one [`Check`] per invariant with the largest residual
//! observed and the tolerance it is held to.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encoding::{
    canonic_encoding, compose_encoding, conjugate_error, error_action, generator_eigenvalue,
    random_blocks, EncodingMatrix,
};
use crate::error::Result;
use crate::field::{PhaseExponent, Prime};
use crate::linalg::{complex_normal, eigenvalues, kron, max_abs, max_abs_diff, trace, unitarity_residual, CMatrix, CVector};
use crate::protocol::{dense_step, fimax_step, standard_form_oracle, uncorrected_step, weyl_weight, FimaxEngine};
use crate::stabilizer::{enumerate_stabilizers, CosetTable, Stabilizer};
use crate::states::{bell_label, random_bds, two_copy_dense, two_copy_distribution};
use crate::sweep::derive_seed;
use crate::weyl::{
    adjoint, bell_vector, dense_matrix, eigensystem, eigenvector_shift, multiply, symplectic_product,
    weyl_matrix, ErrorElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Encodings,
    Oracle,
    Maximality,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "encodings" => Ok(Suite::Encodings),
            "oracle" => Ok(Suite::Oracle),
            "maximality" => Ok(Suite::Maximality),
            other => Err(format!(
                "unknown suite {other:?} (expected algebra, encodings, oracle or maximality)"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Algebra => "algebra",
            Suite::Encodings => "encodings",
            Suite::Oracle => "oracle",
            Suite::Maximality => "maximality",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Number of individual comparisons folded into `max_residual`.
    pub cases: usize,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub d: u32,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {} d={} {}: max residual {:.3e} (tol {:.0e}, {} cases)",
                if c.passed() { "PASS" } else { "FAIL" },
                self.suite,
                self.d,
                c.name,
                c.max_residual,
                c.tolerance,
                c.cases
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random two-copy pairs for the algebra suite.
    pub random_pairs: usize,
    /// Random matrices for the trace identity.
    pub trace_matrices: usize,
    /// Composed encodings per stabilizer in the encodings suite.
    pub composed_encodings: usize,
    /// Random Bell-diagonal inputs in the oracle suite.
    pub oracle_states: usize,
    /// Random Bell-diagonal inputs in the maximality suite.
    pub maximality_states: usize,
    /// Composed encodings per stabilizer in the maximality suite.
    pub maximality_encodings: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            random_pairs: 100,
            trace_matrices: 50,
            composed_encodings: 10,
            oracle_states: 20,
            maximality_states: 100,
            maximality_encodings: 20,
        }
    }
}

pub fn run_suite(suite: Suite, d: Prime, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Algebra => algebra(d, cfg),
        Suite::Encodings => encodings(d, cfg)?,
        Suite::Oracle => oracle(d, cfg)?,
        Suite::Maximality => maximality(d, cfg)?,
    };
    Ok(SuiteReport { suite, d: d.get(), checks })
}

/// Running maximum of a residual over many cases.
struct Acc {
    name: &'static str,
    tol: f64,
    max: f64,
    cases: usize,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Acc { name, tol, max: 0.0, cases: 0 }
    }

    fn add(&mut self, r: f64) {
        // NaN must fail the check
        self.max = if r.is_nan() || self.max.is_nan() { f64::NAN } else { self.max.max(r) };
        self.cases += 1;
    }

    fn finish(self) -> Check {
        let max_residual = if self.max.is_nan() { f64::INFINITY } else { self.max };
        Check { name: self.name.into(), max_residual, tolerance: self.tol, cases: self.cases }
    }
}

fn random_element<R: Rng>(d: Prime, n: usize, rng: &mut R) -> ErrorElement {
    let k: Vec<i64> = (0..n).map(|_| rng.random_range(0..d.get()) as i64).collect();
    let l: Vec<i64> = (0..n).map(|_| rng.random_range(0..d.get()) as i64).collect();
    ErrorElement::new(d, &k, &l).expect("equal lengths")
}

fn algebra(d: Prime, cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 1));
    let singles: Vec<ErrorElement> = ErrorElement::all(d, 1).collect();
    let pairs: Vec<(ErrorElement, ErrorElement)> = (0..cfg.random_pairs)
        .map(|_| (random_element(d, 2, &mut rng), random_element(d, 2, &mut rng)))
        .collect();

    let mut group = Acc::new("group law", 1e-12);
    let mut adj = Acc::new("adjoint", 1e-12);
    let mut comm = Acc::new("commutation phase", 1e-12);
    let mut each_pair = |e: &ErrorElement, f: &ErrorElement| {
        let (we, wf) = (dense_matrix(e), dense_matrix(f));
        let prod = multiply(e, f).expect("same shape").dense();
        group.add(max_abs_diff(&prod, &(&we * &wf)));
        adj.add(max_abs_diff(&adjoint(e).dense(), &we.adjoint()));
        let s = symplectic_product(e, f).expect("same shape");
        let phase = PhaseExponent::omega_power(s.value() as i64, d).value();
        comm.add(max_abs_diff(&(&we * &wf), &(&wf * &we * phase)));
    };
    for e in &singles {
        for f in &singles {
            each_pair(e, f);
        }
    }
    for (e, f) in &pairs {
        each_pair(e, f);
    }

    let mut bilinear = Acc::new("symplectic bilinearity", 0.0);
    let mut check_triple = |e: &ErrorElement, f: &ErrorElement, h: &ErrorElement| {
        let sp = |x: &ErrorElement, y: &ErrorElement| symplectic_product(x, y).expect("same shape");
        let left = sp(&(e + f), h) == sp(e, h) + sp(f, h);
        let right = sp(h, &(e + f)) == sp(h, e) + sp(h, f);
        let anti = sp(e, f) == -sp(f, e);
        bilinear.add(if left && right && anti { 0.0 } else { 1.0 });
    };
    for e in &singles {
        for f in &singles {
            for h in &singles {
                check_triple(e, f, h);
            }
        }
    }
    for (e, f) in &pairs {
        let h = random_element(d, 2, &mut rng);
        check_triple(e, f, &h);
    }

    let mut eig = Acc::new("eigenbasis residual", 1e-12);
    let mut shift = Acc::new("eigenvector shift residual", 1e-12);
    for a in d.elements() {
        for b in d.elements() {
            let sys = eigensystem(a, b);
            eig.add(unitarity_residual(&sys.matrix()));
            let w = weyl_matrix(d, a.value(), b.value());
            for l in d.elements() {
                let v = sys.vector(l);
                eig.add((&w * v - v * sys.eigenvalue(l).value()).norm());
            }
            for x in d.elements() {
                for y in d.elements() {
                    let wxy = weyl_matrix(d, x.value(), y.value());
                    let sh = eigenvector_shift(a, b, x, y);
                    for l in d.elements() {
                        let lhs = &wxy * sys.vector(l);
                        let rhs = sys.vector(l + sh.shift) * sh.phase.eval(l).value();
                        shift.add((lhs - rhs).norm());
                    }
                }
            }
        }
    }

    // Every two-copy generator has d eigenvalues of multiplicity d.
    let mut mult = Acc::new("generator eigenvalue multiplicity", 1e-9);
    for stab in enumerate_stabilizers(d) {
        let ev = eigenvalues(&dense_matrix(stab.generator()));
        let mut counts = vec![0usize; d.as_usize()];
        let mut worst: f64 = 0.0;
        for z in &ev {
            let (x, dist) = d
                .elements()
                .map(|x| (x, (generator_eigenvalue(&stab, x).value() - z).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .expect("d >= 2");
            counts[x.value() as usize] += 1;
            worst = worst.max(dist);
        }
        let balanced = counts.iter().all(|&c| c == d.as_usize());
        mult.add(if balanced { worst } else { f64::INFINITY });
    }

    let dim = d.as_usize() * d.as_usize();
    let omega = bell_vector(&ErrorElement::zero(d, 2));
    let mut trace_id = Acc::new("trace identity", 1e-12);
    for _ in 0..cfg.trace_matrices {
        let m = CMatrix::from_fn(dim, dim, |_, _| complex_normal(&mut rng));
        let big = kron(&m, &CMatrix::identity(dim, dim));
        let lhs = (omega.adjoint() * big * &omega)[(0, 0)];
        trace_id.add((lhs - trace(&m) / dim as f64).norm());
    }

    vec![
        group.finish(),
        adj.finish(),
        comm.finish(),
        bilinear.finish(),
        eig.finish(),
        shift.finish(),
        mult.finish(),
        trace_id.finish(),
    ]
}

/// Off-pattern weight of `U† W(e) U` for shift `s`.
fn structure_residual(enc: &EncodingMatrix, e: &ErrorElement) -> f64 {
    let n = enc.modulus().as_usize();
    let s = enc.stabilizer().syndrome(e).expect("same shape").value() as usize;
    let mut m = enc.unitary().adjoint() * dense_matrix(e) * enc.unitary();
    for x in 0..n {
        let y = (x + s) % n;
        m.view_mut((y * n, x * n), (n, n)).fill(Complex64::new(0.0, 0.0));
    }
    max_abs(&m)
}

/// `‖B' - cB‖` for the best unimodular `c`, plus the deviation of `|c|` from 1.
fn phase_residual(target: &CMatrix, reference: &CMatrix) -> f64 {
    let n = reference.nrows() as f64;
    let c: Complex64 = reference.iter().zip(target.iter()).map(|(r, t)| r.conj() * t).sum::<Complex64>() / n;
    max_abs_diff(target, &(reference * c)) + (c.norm() - 1.0).abs()
}

fn composed_encodings(base: &EncodingMatrix, count: usize, seed: u64) -> Vec<EncodingMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let blocks = random_blocks(base.modulus(), &mut rng);
            compose_encoding(base, &blocks).expect("Haar blocks are unitary")
        })
        .collect()
}

fn encodings(d: Prime, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let stabs = enumerate_stabilizers(d);
    let per_stab: Vec<Vec<Check>> = stabs
        .par_iter()
        .enumerate()
        .map(|(i, stab)| encoding_checks(stab, cfg, derive_seed(cfg.seed, 1000 + i as u64)))
        .collect::<Result<_>>()?;
    Ok(merge(per_stab))
}

fn merge(parts: Vec<Vec<Check>>) -> Vec<Check> {
    let mut out = parts[0].clone();
    for part in &parts[1..] {
        for (o, c) in out.iter_mut().zip(part) {
            o.max_residual = o.max_residual.max(c.max_residual);
            o.cases += c.cases;
        }
    }
    out
}

fn encoding_checks(stab: &Stabilizer, cfg: &VerifyConfig, seed: u64) -> Result<Vec<Check>> {
    let d = stab.modulus();
    let n = d.as_usize();
    let canonic = canonic_encoding(stab)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = CosetTable::new(stab);
    let elements: Vec<ErrorElement> = ErrorElement::all(d, 2).collect();

    let mut unitary = Acc::new("encoding unitarity", 1e-12);
    let mut codeword = Acc::new("codeword property", 1e-12);
    let mut action = Acc::new("analytic action vs dense blocks", 1e-12);
    let mut shift = Acc::new("syndrome shift", 1e-10);
    let mut prop6 = Acc::new("composed block transform", 1e-10);
    let mut coset_inv = Acc::new("coset invariance of blocks", 1e-10);
    let mut linear = Acc::new("block linearity", 1e-10);
    let mut basis = Acc::new("action basis orthonormality", 1e-10);
    let mut norm_label = Acc::new("coset fidelity sum over labels", 1e-9);
    let mut norm_coset = Acc::new("coset fidelity sum over cosets", 1e-9);
    let mut canonic_f = Acc::new("canonic coset fidelity is a delta", 1e-9);

    unitary.add(unitarity_residual(canonic.unitary()));
    codeword.add(canonic.codeword_residual());
    for e in &elements {
        let a = error_action(stab, e)?;
        let dec = conjugate_error(&canonic, e)?;
        let (t, l) = a.label.copy(0);
        let w = weyl_matrix(d, t, l);
        for x in d.elements() {
            action.add(max_abs_diff(dec.block_from(x), &(&w * a.phase_map.eval(x).value())));
        }
        shift.add(structure_residual(&canonic, e));
    }

    // Bell vectors of the canonic actions within each syndrome class.
    for s in d.elements() {
        let vs: Vec<CVector> = table
            .cosets_with_syndrome(s)
            .iter()
            .map(|c| {
                let block = conjugate_error(&canonic, &c.representative).expect("valid encoding");
                let b = block.block_from(d.scalar(0));
                CVector::from_fn(n * n, |idx, _| b[(idx / n, idx % n)] / (n as f64).sqrt())
            })
            .collect();
        let gram = CMatrix::from_columns(&vs);
        basis.add(unitarity_residual(&gram));
    }

    let gens = stab.elements();
    let pairs: Vec<(usize, usize)> = (0..20)
        .map(|_| (rng.random_range(0..elements.len()), rng.random_range(0..elements.len())))
        .collect();

    let composed = composed_encodings(&canonic, cfg.composed_encodings, rng.random());
    let mut all = vec![canonic.clone()];
    all.extend(composed.iter().cloned());
    for (idx, enc) in all.iter().enumerate() {
        let is_canonic = idx == 0;
        if !is_canonic {
            unitary.add(unitarity_residual(enc.unitary()));
            codeword.add(enc.codeword_residual());
        }
        // Block operators per coset, read at every target block.
        let blocks: Vec<_> = table
            .cosets()
            .iter()
            .map(|c| conjugate_error(enc, &c.representative))
            .collect::<Result<_>>()?;
        for (ci, c) in table.cosets().iter().enumerate() {
            if !is_canonic {
                shift.add(structure_residual(enc, &c.representative));
                // V = U·blockdiag(Y) recovered from V and U
                let canon = conjugate_error(&canonic, &c.representative)?;
                let y: Vec<CMatrix> = (0..n)
                    .map(|x| {
                        canonic.unitary().view((0, x * n), (n * n, n)).adjoint()
                            * enc.unitary().view((0, x * n), (n * n, n))
                    })
                    .collect();
                for x in d.elements() {
                    let t = x + canon.shift;
                    let expect = y[t.value() as usize].adjoint() * canon.block_from(x) * &y[x.value() as usize];
                    prop6.add(max_abs_diff(blocks[ci].block_from(x), &expect));
                }
            }
            for m in &gens {
                let other = conjugate_error(enc, &(&c.representative + m))?;
                for x in d.elements() {
                    coset_inv.add(phase_residual(other.block_from(x), blocks[ci].block_from(x)));
                }
            }
        }
        for &(i, j) in &pairs {
            let (e, f) = (&elements[i], &elements[j]);
            let be = conjugate_error(enc, e)?;
            let bf = conjugate_error(enc, f)?;
            let bef = conjugate_error(enc, &(e + f))?;
            for x in d.elements() {
                let composed = be.block_from(x + bf.shift) * bf.block_from(x);
                linear.add(phase_residual(bef.block_from(x), &composed));
            }
        }
        let labels: Vec<ErrorElement> = ErrorElement::all(d, 1).collect();
        for s in d.elements() {
            let start = s.value() as usize * n * n;
            for a in d.elements() {
                let f: Vec<Vec<f64>> = (start..start + n * n)
                    .map(|ci| labels.iter().map(|l| weyl_weight(blocks[ci].block_into(a), l)).collect())
                    .collect();
                for row in &f {
                    norm_label.add((row.iter().sum::<f64>() - 1.0).abs());
                }
                for li in 0..labels.len() {
                    norm_coset.add((f.iter().map(|row| row[li]).sum::<f64>() - 1.0).abs());
                }
                if is_canonic {
                    for (row, ci) in f.iter().zip(start..) {
                        let label = error_action(stab, &table.cosets()[ci].representative)?.label;
                        for (li, l) in labels.iter().enumerate() {
                            let expect = if *l == label { 1.0 } else { 0.0 };
                            canonic_f.add((row[li] - expect).abs());
                        }
                    }
                }
            }
        }
    }

    Ok(vec![
        unitary.finish(),
        codeword.finish(),
        action.finish(),
        shift.finish(),
        prop6.finish(),
        coset_inv.finish(),
        linear.finish(),
        basis.finish(),
        norm_label.finish(),
        norm_coset.finish(),
        canonic_f.finish(),
    ])
}

/// `max_{i≠j} |⟨Ω_i|ρ|Ω_j⟩|` and the Bell diagonal of a `d² × d²` state.
fn bell_decomposition(d: Prime, rho: &CMatrix) -> (f64, Vec<f64>) {
    let n = d.as_usize() * d.as_usize();
    let basis = CMatrix::from_columns(
        &(0..n)
            .map(|i| {
                let (k, l) = bell_label(d, i);
                bell_vector(&ErrorElement::single(d, k as i64, l as i64))
            })
            .collect::<Vec<_>>(),
    );
    let m = basis.adjoint() * rho * basis;
    let mut off: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(m[(i, j)].norm());
            }
        }
    }
    (off, (0..n).map(|i| m[(i, i)].re).collect())
}

fn oracle(d: Prime, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let stabs = enumerate_stabilizers(d);
    let encs: Vec<EncodingMatrix> = stabs.iter().map(canonic_encoding).collect::<Result<_>>()?;
    let parts: Vec<Vec<Check>> = (0..cfg.oracle_states)
        .into_par_iter()
        .map(|i| {
            let bds = random_bds(d, derive_seed(cfg.seed, 2000 + i as u64));
            let rho = bds.to_dense();
            let two = two_copy_dense(rho.matrix(), rho.matrix(), d);
            let mut diag = Acc::new("oracle Bell diagonal vs fast path", 1e-9);
            let mut closure = Acc::new("oracle output is Bell-diagonal", 1e-9);
            let mut prob = Acc::new("outcome probability P(E(a-b))/d", 1e-9);
            let mut complete = Acc::new("outcome probabilities sum to one", 1e-9);
            let mut step = Acc::new("dense FIMAX step vs fast step", 1e-9);
            for (stab, enc) in stabs.iter().zip(&encs) {
                let mut total = 0.0;
                for a in d.elements() {
                    for b in d.elements() {
                        let s = a - b;
                        let (fast, pe) = uncorrected_step(&bds, stab, s)?;
                        let (out, pr) = standard_form_oracle(&two, enc, a, b)?;
                        total += pr;
                        prob.add((pr - pe / d.get() as f64).abs());
                        let (off, bell) = bell_decomposition(d, out.matrix());
                        closure.add(off);
                        let r = bell.iter().zip(fast.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                        diag.add(r);
                    }
                }
                complete.add((total - 1.0).abs());
            }
            let (fast, frec) = fimax_step(&bds)?;
            let (dense, drec) = dense_step(&rho)?;
            let (off, bell) = bell_decomposition(d, dense.matrix());
            closure.add(off);
            let r = bell.iter().zip(fast.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            step.add(r.max((frec.choice.success_probability - drec.choice.success_probability).abs()));
            Ok(vec![diag.finish(), closure.finish(), prob.finish(), complete.finish(), step.finish()])
        })
        .collect::<Result<_>>()?;
    Ok(merge(parts))
}

/// `f[coset][a][label]` for every coset of the table, every target block and
/// every single-qudit Weyl label.
fn fidelity_table(enc: &EncodingMatrix, table: &CosetTable) -> Result<Vec<Vec<Vec<f64>>>> {
    let d = enc.modulus();
    let labels: Vec<ErrorElement> = ErrorElement::all(d, 1).collect();
    table
        .cosets()
        .iter()
        .map(|c| {
            let blocks = conjugate_error(enc, &c.representative)?;
            Ok(d.elements()
                .map(|a| labels.iter().map(|l| weyl_weight(blocks.block_into(a), l)).collect())
                .collect())
        })
        .collect()
}

fn maximality(d: Prime, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = d.as_usize();
    let per = n * n;
    let engine = FimaxEngine::shared(d);
    let stabs: Vec<Stabilizer> = engine.stabilizers().cloned().collect();
    // (table, fidelity tables of the canonic and composed encodings)
    let prepared: Vec<(CosetTable, Vec<Vec<Vec<Vec<f64>>>>)> = stabs
        .par_iter()
        .enumerate()
        .map(|(i, stab)| {
            let table = CosetTable::new(stab);
            let canonic = canonic_encoding(stab)?;
            let seed = derive_seed(cfg.seed, 3000 + i as u64);
            let mut encs = vec![canonic.clone()];
            encs.extend(composed_encodings(&canonic, cfg.maximality_encodings, seed));
            let tables = encs.iter().map(|e| fidelity_table(e, &table)).collect::<Result<_>>()?;
            Ok((table, tables))
        })
        .collect::<Result<_>>()?;

    let parts: Vec<Vec<Check>> = (0..cfg.maximality_states)
        .into_par_iter()
        .map(|i| {
            let bds = random_bds(d, derive_seed(cfg.seed, 4000 + i as u64));
            let dist = two_copy_distribution(&bds);
            let choice = engine.select(&bds)?;
            let mut excess = Acc::new("no encoding beats FIMAX", 1e-9);
            let mut attained = Acc::new("FIMAX value is attained", 1e-9);
            let mut best_seen = f64::NEG_INFINITY;
            for (table, tables) in &prepared {
                let cp = table.coset_probabilities(&dist);
                for s in 0..n {
                    let pe: f64 = cp[s * per..(s + 1) * per].iter().sum();
                    if pe <= 0.0 {
                        continue;
                    }
                    for f in tables {
                        for a in 0..n {
                            for label in 0..per {
                                let fid: f64 = (s * per..(s + 1) * per)
                                    .map(|ci| cp[ci] * f[ci][a][label])
                                    .sum::<f64>()
                                    / pe;
                                best_seen = best_seen.max(fid);
                                excess.add((fid - choice.predicted_fidelity).max(0.0));
                            }
                        }
                    }
                }
            }
            attained.add((best_seen - choice.predicted_fidelity).abs());
            Ok(vec![excess.finish(), attained.finish()])
        })
        .collect::<Result<_>>()?;
    Ok(merge(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            seed: 3,
            random_pairs: 10,
            trace_matrices: 5,
            composed_encodings: 2,
            oracle_states: 2,
            maximality_states: 3,
            maximality_encodings: 2,
        }
    }

    #[test]
    fn suites_pass_on_qubits() {
        let d = Prime::new(2).unwrap();
        for suite in [Suite::Algebra, Suite::Encodings, Suite::Oracle, Suite::Maximality] {
            let report = run_suite(suite, d, &small()).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn suite_names() {
        for s in ["algebra", "encodings", "oracle", "maximality"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("other".parse::<Suite>().is_err());
    }

    #[test]
    fn failing_checks_are_reported() {
        let mut acc = Acc::new("x", 1e-9);
        acc.add(f64::NAN);
        acc.add(0.0);
        assert!(!acc.finish().passed());
    }
}
