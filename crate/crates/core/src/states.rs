//! Bell-diagonal and dense bipartite states, the benchmark families, twirling
//! and the two-copy error distribution.
//!
//! Bell probabilities are indexed `k + d·l` (k fastest): `Ω_{0,0}, Ω_{1,0}, …`.
//! Bipartite matrices use the ordering `A ⊗ B`.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::Exp1;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::{complex_normal, hermiticity_residual, trace, CMatrix, CVector};
use crate::stabilizer::ErrorDistribution;
use crate::weyl::{bell_vector, ErrorElement};

const DENSE_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-9;

/// Position of `Ω_{k,l}` in a Bell-probability vector.
pub fn bell_index(d: Prime, k: u32, l: u32) -> usize {
    k as usize + d.as_usize() * l as usize
}

/// `(k, l)` at position `i` of a Bell-probability vector.
pub fn bell_label(d: Prime, i: usize) -> (u32, u32) {
    ((i % d.as_usize()) as u32, (i / d.as_usize()) as u32)
}

/// A mixture of Bell states `Σ p_{k,l} |Ω_{k,l}⟩⟨Ω_{k,l}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BdsState {
    d: Prime,
    probs: Vec<f64>,
}

impl BdsState {
    /// Validates length, sign and normalization; entries above `-1e-12` are
    /// clamped to zero to absorb rounding.
    pub fn new(d: Prime, mut probs: Vec<f64>) -> Result<Self> {
        let n = d.as_usize() * d.as_usize();
        if probs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} Bell probabilities, got {}",
                probs.len()
            )));
        }
        for p in probs.iter_mut() {
            if p.is_nan() || *p < -1e-12 {
                return Err(Error::InvalidMixture(format!("negative Bell probability {p}")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidMixture(format!("Bell probabilities sum to {total}")));
        }
        Ok(BdsState { d, probs })
    }

    /// The pure Bell state `Ω_{k,l}`.
    pub fn bell(d: Prime, k: u32, l: u32) -> Self {
        let mut probs = vec![0.0; d.as_usize() * d.as_usize()];
        probs[bell_index(d, k % d.get(), l % d.get())] = 1.0;
        BdsState { d, probs }
    }

    pub fn uniform(d: Prime) -> Self {
        let n = d.as_usize() * d.as_usize();
        BdsState { d, probs: vec![1.0 / n as f64; n] }
    }

    pub fn modulus(&self) -> Prime {
        self.d
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: u32, l: u32) -> f64 {
        self.probs[bell_index(self.d, k, l)]
    }

    /// Fidelity with `Ω_{0,0}`.
    pub fn fidelity(&self) -> f64 {
        self.probs[0]
    }

    pub fn to_dense(&self) -> DenseState {
        let n = self.d.as_usize();
        let mut m = CMatrix::zeros(n * n, n * n);
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let (k, l) = bell_label(self.d, i);
            let v = bell_vector(&ErrorElement::single(self.d, k as i64, l as i64));
            m += (&v * v.adjoint()) * Complex64::new(p, 0.0);
        }
        DenseState { d: self.d, matrix: m }
    }
}

/// `p |Ω_{0,0}⟩⟨Ω_{0,0}| + (1-p) 1/d²`.
pub fn isotropic(d: Prime, p: f64) -> Result<BdsState> {
    let n = d.as_usize() * d.as_usize();
    let mut probs = vec![(1.0 - p) / n as f64; n];
    probs[0] += p;
    BdsState::new(d, probs)
}

/// The `d = 3` off-line family: `p σ + (1-p) 1/9` with `σ` the equal mixture
/// of `Ω_{0,0}`, `Ω_{1,0}` and `Ω_{0,1}`.
pub fn offline(p: f64) -> Result<BdsState> {
    let d = Prime::new(3)?;
    let mut probs = vec![(1.0 - p) / 9.0; 9];
    for (k, l) in [(0, 0), (1, 0), (0, 1)] {
        probs[bell_index(d, k, l)] += p / 3.0;
    }
    BdsState::new(d, probs)
}

/// A bipartite density matrix on `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    d: Prime,
    matrix: CMatrix,
}

impl DenseState {
    /// Checks Hermiticity, unit trace and positivity, each within `1e-10`.
    pub fn new(d: Prime, matrix: CMatrix) -> Result<Self> {
        let n = d.as_usize() * d.as_usize();
        if matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {n}x{n} matrix, got {:?}",
                matrix.shape()
            )));
        }
        let herm = hermiticity_residual(&matrix);
        if herm > DENSE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig < -DENSE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DenseState { d, matrix })
    }

    /// Skips validation; for matrices produced by trace-preserving arithmetic.
    pub(crate) fn from_matrix_unchecked(d: Prime, matrix: CMatrix) -> Self {
        DenseState { d, matrix }
    }

    pub fn modulus(&self) -> Prime {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `⟨Ω_{k,l}|ρ|Ω_{k,l}⟩`.
    pub fn fidelity_at(&self, k: u32, l: u32) -> f64 {
        let v = bell_vector(&ErrorElement::single(self.d, k as i64, l as i64));
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity_at(0, 0)
    }
}

/// Bell diagonal `⟨Ω_{k,l}|ρ|Ω_{k,l}⟩` of a dense state.
pub fn weyl_twirl(state: &DenseState) -> BdsState {
    let d = state.d;
    let n = d.as_usize() * d.as_usize();
    let probs = (0..n)
        .map(|i| {
            let (k, l) = bell_label(d, i);
            state.fidelity_at(k, l).max(0.0)
        })
        .collect();
    BdsState { d, probs }
}

/// Haar-random pure state on `C^d ⊗ C^d`, deterministic in `seed`.
pub fn random_pure(d: Prime, seed: u64) -> DenseState {
    let psi = random_pure_vector(d, seed);
    DenseState { d, matrix: &psi * psi.adjoint() }
}

/// State vector behind [`random_pure`].
pub fn random_pure_vector(d: Prime, seed: u64) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = d.as_usize() * d.as_usize();
    let psi = CVector::from_fn(n, |_, _| complex_normal(&mut rng));
    psi.unscale(psi.norm())
}

/// `|⟨Ω_{0,0}|ψ⟩|²`.
pub fn pure_fidelity(d: Prime, psi: &CVector) -> f64 {
    let n = d.as_usize();
    let overlap: Complex64 = (0..n).map(|i| psi[i * n + i]).sum();
    overlap.norm_sqr() / n as f64
}

/// Bell-diagonal state with flat-Dirichlet probabilities, deterministic in `seed`.
pub fn random_bds(d: Prime, seed: u64) -> BdsState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = d.as_usize() * d.as_usize();
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    BdsState { d, probs: raw.into_iter().map(|x| x / total).collect() }
}

/// `p(e) = p_{k1,l1} p_{k2,l2}` for two copies of the same state.
pub fn two_copy_distribution(bds: &BdsState) -> ErrorDistribution {
    let d = bds.d;
    let probs = ErrorElement::all(d, 2)
        .map(|e| {
            let (k1, l1) = e.copy(0);
            let (k2, l2) = e.copy(1);
            bds.prob(k1, l1) * bds.prob(k2, l2)
        })
        .collect();
    ErrorDistribution::new(d, 2, probs).expect("product of normalized distributions")
}

/// `ρ₁ ⊗ ρ₂` on pairs `(A1,B1)`, `(A2,B2)`, reordered to `A1 A2 B1 B2`.
pub fn two_copy_dense(first: &CMatrix, second: &CMatrix, d: Prime) -> CMatrix {
    let n = d.as_usize();
    let dim = n.pow(4);
    // position in A1 A2 B1 B2 order of the basis state with index i in A1 B1 A2 B2 order
    let perm: Vec<usize> = (0..dim)
        .map(|i| {
            let (a1, b1, a2, b2) = (i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n);
            ((a1 * n + a2) * n + b1) * n + b2
        })
        .collect();
    let mut out = CMatrix::zeros(dim, dim);
    let nn = n * n;
    for r in 0..dim {
        for c in 0..dim {
            let v = first[(r / nn, c / nn)] * second[(r % nn, c % nn)];
            out[(perm[r], perm[c])] = v;
        }
    }
    out
}

/// Either representation of a bipartite state.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Bds(BdsState),
    Dense(DenseState),
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    d: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bell_probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

impl State {
    pub fn modulus(&self) -> Prime {
        match self {
            State::Bds(s) => s.modulus(),
            State::Dense(s) => s.modulus(),
        }
    }

    pub fn fidelity(&self) -> f64 {
        match self {
            State::Bds(s) => s.fidelity(),
            State::Dense(s) => s.fidelity(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            State::Bds(s) => StateFile {
                d: s.d.get(),
                kind: "bds".into(),
                bell_probs: Some(s.probs.clone()),
                matrix: None,
            },
            State::Dense(s) => StateFile {
                d: s.d.get(),
                kind: "dense".into(),
                bell_probs: None,
                matrix: Some(
                    s.matrix
                        .row_iter()
                        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                ),
            },
        };
        serde_json::to_string_pretty(&file).expect("state files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        let d = Prime::new(file.d)?;
        match file.kind.as_str() {
            "bds" => {
                let probs = file
                    .bell_probs
                    .ok_or_else(|| Error::InvalidState("bds state without bell_probs".into()))?;
                Ok(State::Bds(BdsState::new(d, probs)?))
            }
            "dense" => {
                let rows = file
                    .matrix
                    .ok_or_else(|| Error::InvalidState("dense state without matrix".into()))?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch("matrix rows differ in length".into()));
                }
                let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                Ok(State::Dense(DenseState::new(d, m)?))
            }
            other => Err(Error::InvalidState(format!("unknown state kind {other:?}"))),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidState(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn p(d: u32) -> Prime {
        Prime::new(d).unwrap()
    }

    /// The qutrit worked example: 0.56 on `Ω_{2,1}`, 0.055 on the other eight.
    fn qutrit_example() -> BdsState {
        let mut probs = vec![0.055; 9];
        probs[5] = 0.56;
        BdsState::new(p(3), probs).unwrap()
    }

    #[test]
    fn bell_indexing() {
        let d = p(3);
        assert_eq!(bell_index(d, 2, 1), 5);
        assert_eq!(bell_label(d, 5), (2, 1));
        assert_eq!(qutrit_example().prob(2, 1), 0.56);
    }

    #[test]
    fn family_fidelities() {
        assert!((isotropic(p(3), 0.26).unwrap().fidelity() - (0.26 + 0.74 / 9.0)).abs() < 1e-15);
        assert!((isotropic(p(2), 0.35).unwrap().fidelity() - 0.5125).abs() < 1e-15);
        assert_eq!(isotropic(p(3), 1.0).unwrap().fidelity(), 1.0);
        assert!(isotropic(p(3), 0.0).unwrap().probs().iter().all(|&x| (x - 1.0 / 9.0).abs() < 1e-15));
        assert!((offline(1.0).unwrap().fidelity() - 1.0 / 3.0).abs() < 1e-15);
        assert!((offline(0.7).unwrap().fidelity() - (0.7 / 3.0 + 0.3 / 9.0)).abs() < 1e-15);
        for i in 0..=100 {
            assert!(offline(i as f64 / 100.0).unwrap().fidelity() <= 1.0 / 3.0 + 1e-15);
        }
        assert!(matches!(isotropic(p(2), 1.5), Err(Error::InvalidMixture(_))));
        assert!(isotropic(p(2), -1.0 / 3.0).is_ok());
    }

    #[test]
    fn dense_fidelities() {
        let d = p(3);
        let pure = BdsState::bell(d, 0, 0).to_dense();
        assert!((pure.fidelity() - 1.0).abs() < 1e-12);
        let b = qutrit_example();
        let dense = b.to_dense();
        for i in 0..9 {
            let (k, l) = bell_label(d, i);
            assert!((dense.fidelity_at(k, l) - b.probs()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn twirl_keeps_bell_diagonal() {
        let b = qutrit_example();
        let t = weyl_twirl(&b.to_dense());
        for (x, y) in t.probs().iter().zip(b.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        let r = random_pure(p(2), 42);
        let t = weyl_twirl(&r);
        assert!((t.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(t.probs().iter().all(|&x| x >= 0.0));
        assert!((t.fidelity() - r.fidelity()).abs() < 1e-15);
        let tt = weyl_twirl(&t.to_dense());
        for (x, y) in tt.probs().iter().zip(t.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn random_pure_is_rank_one_and_seeded() {
        let d = p(3);
        let a = random_pure(d, 11);
        assert_eq!(a, random_pure(d, 11));
        assert_ne!(a, random_pure(d, 12));
        assert!(DenseState::new(d, a.matrix().clone()).is_ok());
        let mut ev: Vec<f64> = a.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-10);
        assert!(ev[1].abs() < 1e-10);
        let psi = random_pure_vector(d, 11);
        assert!((pure_fidelity(d, &psi) - a.fidelity()).abs() < 1e-12);
    }

    #[test]
    fn haar_mean_fidelity() {
        let d = p(2);
        let n = 10_000;
        let f: Vec<f64> = (0..n).map(|s| pure_fidelity(d, &random_pure_vector(d, s))).collect();
        let mean = f.iter().sum::<f64>() / n as f64;
        let var = f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn random_bds_is_normalized_and_seeded() {
        let a = random_bds(p(3), 4);
        assert_eq!(a, random_bds(p(3), 4));
        assert!((a.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(a.probs().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn dense_validation() {
        let d = p(2);
        let mut m = CMatrix::identity(4, 4) * Complex64::new(0.25, 0.0);
        assert!(DenseState::new(d, m.clone()).is_ok());
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(DenseState::new(d, m), Err(Error::InvalidState(_))));
        let mut neg = CMatrix::zeros(4, 4);
        neg[(0, 0)] = Complex64::new(1.5, 0.0);
        neg[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(DenseState::new(d, neg), Err(Error::InvalidState(_))));
        assert!(matches!(
            DenseState::new(d, CMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn two_copy_products() {
        let d = p(3);
        let b = qutrit_example();
        let dist = two_copy_distribution(&b);
        let e = ErrorElement::from_copies(d, &[(2, 1), (2, 1)]);
        assert!((dist.prob(&e) - 0.3136).abs() < 1e-15);
        let pure = two_copy_distribution(&BdsState::bell(d, 0, 0));
        assert_eq!(pure.prob(&ErrorElement::zero(d, 2)), 1.0);
        for f in ErrorElement::all(d, 2) {
            let (k1, l1) = f.copy(0);
            let (k2, l2) = f.copy(1);
            let swapped = ErrorElement::from_copies(d, &[(k2 as i64, l2 as i64), (k1 as i64, l1 as i64)]);
            assert_eq!(dist.prob(&f), dist.prob(&swapped));
        }
        // marginal of the first copy
        for i in 0..9 {
            let (k, l) = bell_label(d, i);
            let m: f64 = ErrorElement::all(d, 2)
                .filter(|f| f.copy(0) == (k, l))
                .map(|f| dist.prob(&f))
                .sum();
            assert!((m - b.probs()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn two_copy_dense_matches_bell_vectors() {
        let d = p(2);
        let a = random_pure(d, 1);
        let b = BdsState::bell(d, 1, 1).to_dense();
        let m = two_copy_dense(a.matrix(), b.matrix(), d);
        // Bell pairs (A1,B1),(A2,B2) in A1A2B1B2 order are the two-copy Bell vectors
        let e = ErrorElement::from_copies(d, &[(0, 0), (1, 1)]);
        let v = bell_vector(&e);
        let expect = a.fidelity() * 1.0;
        assert!(((v.adjoint() * &m * &v)[(0, 0)].re - expect).abs() < 1e-12);
        assert!((trace(&m).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let b = State::Bds(qutrit_example());
        assert_eq!(State::from_json(&b.to_json()).unwrap(), b);
        let r = State::Dense(random_pure(p(2), 5));
        let back = State::from_json(&r.to_json()).unwrap();
        match (&back, &r) {
            (State::Dense(x), State::Dense(y)) => assert!(max_abs_diff(x.matrix(), y.matrix()) < 1e-15),
            _ => panic!("kind changed"),
        }
        assert!(State::from_json(r#"{"d":4,"kind":"bds","bell_probs":[]}"#).is_err());
        assert!(State::from_json(r#"{"d":2,"kind":"mixed"}"#).is_err());
        assert!(State::from_json(r#"{"d":2,"kind":"bds","bell_probs":[0.5,0.5,0.5,0.5]}"#).is_err());
    }
}
