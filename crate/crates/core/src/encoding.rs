//! Encodings of two-copy stabilizers: the canonic product eigenbasis, block
//! compositions of it, analytic action operators of errors, and the dense
//! conjugation `U† W(e) U`.
//!
//! Column `x·d + k` of an encoding is the codeword `|u_{x,k}⟩`: the `k`-th
//! basis vector of the codespace `Q(x)` on which the generator acts with
//! eigenvalue label `x`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldScalar, PhaseExponent, Prime};
use crate::linalg::{haar_unitary, max_abs, unitarity_residual, CMatrix, CVector};
use crate::stabilizer::{CosetId, Stabilizer};
use crate::weyl::{dense_matrix, eigensystem, eigenvector_shift, AffinePhase, ErrorElement};

const BLOCK_UNITARITY_TOL: f64 = 1e-12;
const STRUCTURE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    Canonic,
    Composed,
}

/// Which single-qudit factors of `W(g) = W_{a1,b1} ⊗ W_{a2,b2}` are the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicLayout {
    /// `|u_{x,k}⟩ = |ω¹_k⟩ ⊗ |ω²_{x-k}⟩`.
    Product,
    /// `W_{a2,b2} = 1`: `|u_{x,k}⟩ = |ω¹_x⟩ ⊗ |k⟩`.
    SecondTrivial,
    /// `W_{a1,b1} = 1`: `|u_{x,k}⟩ = |k⟩ ⊗ |ω²_x⟩`.
    FirstTrivial,
}

impl CanonicLayout {
    pub fn of(stab: &Stabilizer) -> Result<Self> {
        let g = stab.generator();
        if g.n_copies() != 2 {
            return Err(Error::InvalidGenerator(format!(
                "encodings need a two-copy generator, got {} copies",
                g.n_copies()
            )));
        }
        let trivial = |n: usize| g.copy(n) == (0, 0);
        Ok(match (trivial(0), trivial(1)) {
            (false, false) => CanonicLayout::Product,
            (false, true) => CanonicLayout::SecondTrivial,
            (true, false) => CanonicLayout::FirstTrivial,
            (true, true) => return Err(Error::InvalidGenerator("identity generator".into())),
        })
    }
}

/// A `d² × d²` unitary whose columns are codewords of `stabilizer`.
#[derive(Clone, Debug)]
pub struct EncodingMatrix {
    stabilizer: Stabilizer,
    unitary: CMatrix,
    kind: EncodingKind,
}

impl EncodingMatrix {
    pub fn stabilizer(&self) -> &Stabilizer {
        &self.stabilizer
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn modulus(&self) -> Prime {
        self.stabilizer.modulus()
    }

    /// Codeword `|u_{x,k}⟩`.
    pub fn codeword(&self, x: usize, k: usize) -> CVector {
        self.unitary.column(x * self.modulus().as_usize() + k).into_owned()
    }

    /// `max_{x,k} ‖W(g)|u_{x,k}⟩ - ω_x |u_{x,k}⟩‖`.
    pub fn codeword_residual(&self) -> f64 {
        let d = self.modulus();
        let w = dense_matrix(self.stabilizer.generator());
        let image = &w * &self.unitary;
        let mut worst: f64 = 0.0;
        for x in 0..d.as_usize() {
            let eig = generator_eigenvalue(&self.stabilizer, d.scalar(x as i64)).value();
            for k in 0..d.as_usize() {
                let col = x * d.as_usize() + k;
                let r = (image.column(col) - self.unitary.column(col) * eig).norm();
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// Eigenvalue of `W(g)` on `Q(x)`: `ω^x`, or `τ^{2x - Σ a_n b_n}` for `d = 2`.
pub fn generator_eigenvalue(stab: &Stabilizer, x: FieldScalar) -> PhaseExponent {
    let d = stab.modulus();
    let g = stab.generator();
    let twist: i64 = if d.get() == 2 {
        g.k_values().iter().zip(g.l_values()).map(|(&a, &b)| (a * b) as i64).sum()
    } else {
        0
    };
    PhaseExponent::new(2 * x.value() as i64 - twist, d)
}

/// The canonic encoding built from the single-qudit eigenbases of the
/// generator's factors.
pub fn canonic_encoding(stab: &Stabilizer) -> Result<EncodingMatrix> {
    let layout = CanonicLayout::of(stab)?;
    let d = stab.modulus();
    let n = d.as_usize();
    let g = stab.generator();
    let e1 = eigensystem(g.k(0), g.l(0));
    let e2 = eigensystem(g.k(1), g.l(1));
    let mut unitary = CMatrix::zeros(n * n, n * n);
    for x in d.elements() {
        for k in d.elements() {
            let (v1, v2) = match layout {
                CanonicLayout::Product => (e1.vector(k), e2.vector(x - k)),
                CanonicLayout::SecondTrivial => (e1.vector(x), e2.vector(k)),
                CanonicLayout::FirstTrivial => (e1.vector(k), e2.vector(x)),
            };
            let col = x.value() as usize * n + k.value() as usize;
            for i in 0..n {
                for j in 0..n {
                    unitary[(i * n + j, col)] = v1[i] * v2[j];
                }
            }
        }
    }
    Ok(EncodingMatrix { stabilizer: stab.clone(), unitary, kind: EncodingKind::Canonic })
}

/// `U · (Σ_x |x⟩⟨x| ⊗ Y_x)`.
pub fn compose_encoding(base: &EncodingMatrix, blocks: &[CMatrix]) -> Result<EncodingMatrix> {
    let n = base.modulus().as_usize();
    if blocks.len() != n {
        return Err(Error::DimensionMismatch(format!("expected {n} blocks, got {}", blocks.len())));
    }
    let mut diag = CMatrix::zeros(n * n, n * n);
    for (x, y) in blocks.iter().enumerate() {
        if y.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!("block {x} has shape {:?}", y.shape())));
        }
        let residual = unitarity_residual(y);
        if residual > BLOCK_UNITARITY_TOL {
            return Err(Error::InvalidBlock { index: x, residual });
        }
        diag.view_mut((x * n, x * n), (n, n)).copy_from(y);
    }
    Ok(EncodingMatrix {
        stabilizer: base.stabilizer.clone(),
        unitary: &base.unitary * diag,
        kind: EncodingKind::Composed,
    })
}

/// `d` independent Haar-random `d × d` blocks.
pub fn random_blocks<R: Rng + ?Sized>(d: Prime, rng: &mut R) -> Vec<CMatrix> {
    (0..d.as_usize()).map(|_| haar_unitary(d.as_usize(), rng)).collect()
}

/// Action of a single error in the canonic encoding:
/// `U† W(e) U = Σ_x |x+s⟩⟨x| ⊗ τ^{phase_map(x)} W_label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorAction {
    pub shift: FieldScalar,
    pub label: ErrorElement,
    pub phase_map: AffinePhase,
}

/// Analytic action of `W(e)` in the canonic encoding of `stab`.
pub fn error_action(stab: &Stabilizer, e: &ErrorElement) -> Result<ErrorAction> {
    let layout = CanonicLayout::of(stab)?;
    let d = stab.modulus();
    if e.modulus() != d || e.n_copies() != 2 {
        return Err(Error::DimensionMismatch(format!("error {e} vs stabilizer {stab}")));
    }
    let g = stab.generator();
    let sh1 = eigenvector_shift(g.k(0), g.l(0), e.k(0), e.l(0));
    let sh2 = eigenvector_shift(g.k(1), g.l(1), e.k(1), e.l(1));
    // W(e) U|x,k⟩ = τ^{2t·k + x_slope·x + c0} U|x + shift, k + delta⟩
    let (t, delta, x_slope, shift) = match layout {
        CanonicLayout::Product => (
            sh1.phase.omega_slope() - sh2.phase.omega_slope(),
            sh1.shift,
            sh2.phase.slope(),
            sh1.shift + sh2.shift,
        ),
        CanonicLayout::SecondTrivial => {
            (sh2.phase.omega_slope(), sh2.shift, sh1.phase.slope(), sh1.shift)
        }
        CanonicLayout::FirstTrivial => {
            (sh1.phase.omega_slope(), sh1.shift, sh2.phase.slope(), sh2.shift)
        }
    };
    let c0 = sh1.phase.offset() + sh2.phase.offset();
    let offset = c0 - 2 * t.value() as i64 * delta.value() as i64;
    Ok(ErrorAction {
        shift,
        label: ErrorElement::single(d, t.value() as i64, -(delta.value() as i64)),
        phase_map: AffinePhase::new(d, x_slope, offset),
    })
}

/// Action operator of a coset: the common Weyl label of its members in the
/// canonic encoding, with the phase map of its representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionOperator {
    pub coset: CosetId,
    pub label: ErrorElement,
    pub phase_map: AffinePhase,
}

pub fn coset_action(stab: &Stabilizer, coset: &CosetId) -> Result<ActionOperator> {
    let action = error_action(stab, &coset.representative)?;
    Ok(ActionOperator { coset: coset.clone(), label: action.label, phase_map: action.phase_map })
}

/// `U† W(e) U = Σ_x |x+s⟩⟨x| ⊗ B_x`, blocks stored by source index `x`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub shift: FieldScalar,
    blocks: Vec<CMatrix>,
}

impl BlockDecomposition {
    /// `B_x`, the block leaving `Q(x)`.
    pub fn block_from(&self, x: FieldScalar) -> &CMatrix {
        &self.blocks[x.value() as usize]
    }

    /// The block arriving in `Q(y)`, i.e. `B_{y-s}`.
    pub fn block_into(&self, y: FieldScalar) -> &CMatrix {
        &self.blocks[(y - self.shift).value() as usize]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }
}

/// Densely computes and factors `U† W(e) U`.
pub fn conjugate_error(enc: &EncodingMatrix, e: &ErrorElement) -> Result<BlockDecomposition> {
    let d = enc.modulus();
    let n = d.as_usize();
    let shift = enc.stabilizer.syndrome(e)?;
    let u = &enc.unitary;
    let m = u.adjoint() * dense_matrix(e) * u;
    let mut rest = m.clone();
    let mut blocks = Vec::with_capacity(n);
    for x in 0..n {
        let y = (x + shift.value() as usize) % n;
        let block = m.view((y * n, x * n), (n, n)).into_owned();
        rest.view_mut((y * n, x * n), (n, n)).fill(num_complex::Complex64::new(0.0, 0.0));
        blocks.push(block);
    }
    let mut residual = max_abs(&rest);
    for b in &blocks {
        residual = residual.max(unitarity_residual(b));
    }
    if residual > STRUCTURE_TOL {
        return Err(Error::StructureViolation { residual });
    }
    Ok(BlockDecomposition { shift, blocks })
}
