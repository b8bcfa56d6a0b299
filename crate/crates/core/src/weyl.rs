//! Weyl-Heisenberg error elements and their dense realizations.
//!
//! `W_{k,l} = Σ_j ω^{jk} |j⟩⟨j+l|`. An `N`-copy error element `(k⃗, l⃗)` labels
//! `W_{k_1,l_1} ⊗ … ⊗ W_{k_N,l_N}`; the labels form the additive group
//! `Z_d^N × Z_d^N` and the operators multiply up to an `ω`-phase:
//!
//! ```text
//! W(e) W(f) = ω^{l⃗(e)·k⃗(f)} W(e + f)
//! W(e)†     = ω^{k⃗(e)·l⃗(e)} W(-e)
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldScalar, PhaseExponent, Prime};
use crate::linalg::{kron, CMatrix, CVector, ZERO};

/// Label `(k⃗, l⃗) ∈ Z_d^N × Z_d^N` of a Weyl error.
///
/// Stored flattened as `(k_1, …, k_N, l_1, …, l_N)`; the derived ordering is
/// lexicographic on that tuple, which every canonical choice downstream uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorElement {
    d: Prime,
    coords: Vec<u32>,
}

impl ErrorElement {
    pub fn new(d: Prime, k: &[i64], l: &[i64]) -> Result<Self> {
        if k.len() != l.len() || k.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "k has {} entries, l has {}",
                k.len(),
                l.len()
            )));
        }
        let coords = k.iter().chain(l.iter()).map(|&v| d.reduce(v)).collect();
        Ok(ErrorElement { d, coords })
    }

    /// Builds an element from per-copy `(k_n, l_n)` pairs.
    pub fn from_copies(d: Prime, copies: &[(i64, i64)]) -> Self {
        let n = copies.len();
        let mut coords = vec![0; 2 * n];
        for (i, &(k, l)) in copies.iter().enumerate() {
            coords[i] = d.reduce(k);
            coords[n + i] = d.reduce(l);
        }
        ErrorElement { d, coords }
    }

    pub fn single(d: Prime, k: i64, l: i64) -> Self {
        ErrorElement { d, coords: vec![d.reduce(k), d.reduce(l)] }
    }

    pub fn zero(d: Prime, n_copies: usize) -> Self {
        ErrorElement { d, coords: vec![0; 2 * n_copies] }
    }

    /// Inverse of [`ErrorElement::index`].
    pub fn from_index(d: Prime, n_copies: usize, mut index: usize) -> Self {
        let dd = d.as_usize();
        let mut coords = vec![0; 2 * n_copies];
        for c in coords.iter_mut().rev() {
            *c = (index % dd) as u32;
            index /= dd;
        }
        ErrorElement { d, coords }
    }

    /// Position in the lexicographic enumeration of all `d^{2N}` elements.
    pub fn index(&self) -> usize {
        let dd = self.d.as_usize();
        self.coords.iter().fold(0, |acc, &c| acc * dd + c as usize)
    }

    /// Every element for `N` copies, in lexicographic order.
    pub fn all(d: Prime, n_copies: usize) -> impl Iterator<Item = ErrorElement> {
        let count = d.as_usize().pow(2 * n_copies as u32);
        (0..count).map(move |i| ErrorElement::from_index(d, n_copies, i))
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.d
    }

    #[inline]
    pub fn n_copies(&self) -> usize {
        self.coords.len() / 2
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn k_values(&self) -> &[u32] {
        &self.coords[..self.n_copies()]
    }

    pub fn l_values(&self) -> &[u32] {
        &self.coords[self.n_copies()..]
    }

    pub fn k(&self, n: usize) -> FieldScalar {
        self.d.scalar(self.k_values()[n] as i64)
    }

    pub fn l(&self, n: usize) -> FieldScalar {
        self.d.scalar(self.l_values()[n] as i64)
    }

    /// `(k_n, l_n)` of copy `n`.
    pub fn copy(&self, n: usize) -> (u32, u32) {
        (self.k_values()[n], self.l_values()[n])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, m: i64) -> Self {
        let coords = self.coords.iter().map(|&c| self.d.reduce(c as i64 * m)).collect();
        ErrorElement { d: self.d, coords }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| self.d.reduce(a as i64 + b as i64))
            .collect();
        Ok(ErrorElement { d: self.d, coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }
}

impl std::ops::Neg for &ErrorElement {
    type Output = ErrorElement;
    fn neg(self) -> ErrorElement {
        self.scaled(-1)
    }
}

impl std::ops::Add for &ErrorElement {
    type Output = ErrorElement;

    /// Panics on mismatched `d` or `N`; use [`ErrorElement::try_add`] otherwise.
    fn add(self, rhs: &ErrorElement) -> ErrorElement {
        self.try_add(rhs).expect("adding incompatible error elements")
    }
}

impl fmt::Display for ErrorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for n in 0..self.n_copies() {
            if n > 0 {
                write!(f, ",")?;
            }
            let (k, l) = self.copy(n);
            write!(f, "({k},{l})")?;
        }
        write!(f, "]")
    }
}

fn check_compatible(e: &ErrorElement, f: &ErrorElement) -> Result<()> {
    if e.d != f.d || e.coords.len() != f.coords.len() {
        return Err(Error::DimensionMismatch(format!(
            "d={} N={} vs d={} N={}",
            e.d,
            e.n_copies(),
            f.d,
            f.n_copies()
        )));
    }
    Ok(())
}

fn dot(a: &[u32], b: &[u32]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x as i64 * y as i64).sum()
}

/// A Weyl operator with its exact phase, `τ^phase · W(element)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasedWeyl {
    pub phase: PhaseExponent,
    pub element: ErrorElement,
}

impl PhasedWeyl {
    pub fn dense(&self) -> CMatrix {
        dense_matrix(&self.element) * self.phase.value()
    }
}

/// `W(e)·W(f)` expressed as a phase times `W(e + f)`.
pub fn multiply(e: &ErrorElement, f: &ErrorElement) -> Result<PhasedWeyl> {
    let element = e.try_add(f)?;
    let phase = PhaseExponent::omega_power(dot(e.l_values(), f.k_values()), e.d);
    Ok(PhasedWeyl { phase, element })
}

/// `W(e)†` expressed as a phase times `W(-e)`.
pub fn adjoint(e: &ErrorElement) -> PhasedWeyl {
    PhasedWeyl {
        phase: PhaseExponent::omega_power(dot(e.k_values(), e.l_values()), e.d),
        element: -e,
    }
}

/// `⟨e, f⟩ = Σ_i l_i(e) k_i(f) - k_i(e) l_i(f)`, so that
/// `W(e) W(f) = ω^{⟨e,f⟩} W(f) W(e)`.
pub fn symplectic_product(e: &ErrorElement, f: &ErrorElement) -> Result<FieldScalar> {
    check_compatible(e, f)?;
    let v = dot(e.l_values(), f.k_values()) - dot(e.k_values(), f.l_values());
    Ok(e.d.scalar(v))
}

pub(crate) fn omega(d: Prime, power: i64) -> Complex64 {
    PhaseExponent::omega_power(power, d).value()
}

/// Single-qudit `W_{k,l}`.
pub fn weyl_matrix(d: Prime, k: u32, l: u32) -> CMatrix {
    let n = d.as_usize();
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, (j + l as usize) % n)] = omega(d, j as i64 * k as i64);
    }
    m
}

/// `W(e)` as a `d^N × d^N` matrix; copy 1 is the most significant factor.
pub fn dense_matrix(e: &ErrorElement) -> CMatrix {
    (0..e.n_copies()).fold(CMatrix::identity(1, 1), |acc, n| {
        let (k, l) = e.copy(n);
        kron(&acc, &weyl_matrix(e.d, k, l))
    })
}

/// Affine phase `λ ↦ τ^{slope·λ + offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffinePhase {
    d: Prime,
    slope: i64,
    offset: i64,
}

impl AffinePhase {
    /// Exponents are in `τ` units and reduced modulo `2d`.
    pub fn new(d: Prime, slope: i64, offset: i64) -> Self {
        let period = 2 * d.get() as i64;
        AffinePhase { d, slope: slope.rem_euclid(period), offset: offset.rem_euclid(period) }
    }

    pub fn constant(p: PhaseExponent) -> Self {
        AffinePhase::new(p.modulus(), 0, p.exponent() as i64)
    }

    pub fn slope(&self) -> i64 {
        self.slope
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// `λ`-slope as a power of `ω`; all slopes produced here are even.
    pub fn omega_slope(&self) -> FieldScalar {
        debug_assert_eq!(self.slope % 2, 0);
        self.d.scalar(self.slope / 2)
    }

    pub fn eval(&self, lambda: FieldScalar) -> PhaseExponent {
        PhaseExponent::new(self.slope * lambda.value() as i64 + self.offset, self.d)
    }
}

/// Eigenbasis of a single-qudit `W_{a,b}` in a fixed gauge, indexed by `λ ∈ Z_d`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    a: FieldScalar,
    b: FieldScalar,
    eigenvalues: Vec<PhaseExponent>,
    vectors: Vec<CVector>,
}

impl EigenSystem {
    pub fn a(&self) -> FieldScalar {
        self.a
    }

    pub fn b(&self) -> FieldScalar {
        self.b
    }

    pub fn eigenvalue(&self, lambda: FieldScalar) -> PhaseExponent {
        self.eigenvalues[lambda.value() as usize]
    }

    pub fn vector(&self, lambda: FieldScalar) -> &CVector {
        &self.vectors[lambda.value() as usize]
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Eigenvectors as the columns of a unitary matrix, in `λ` order.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors)
    }
}

/// Eigenvalues and eigenvectors of `W_{a,b}`, labelled by `λ ∈ Z_d`:
///
/// * `a = b = 0`: `|λ⟩`, eigenvalue 1;
/// * `a ≠ 0, b = 0`: `|λ a⁻¹⟩`, eigenvalue `ω^λ`;
/// * `b ≠ 0`, odd `d`: `d^{-1/2} Σ_j ω^{Γ(λ,j)} |j⟩` with
///   `Γ(λ,j) = μλ - μ(μ-1)ab/2`, `μ = j b⁻¹`, eigenvalue `ω^λ`;
/// * `b ≠ 0`, `d = 2`: `(|0⟩ + ω_λ |1⟩)/√2`, eigenvalue `ω_λ = ω^{λ - ab/2}`.
pub fn eigensystem(a: FieldScalar, b: FieldScalar) -> EigenSystem {
    let d = a.modulus();
    let n = d.as_usize();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for lambda in d.elements() {
        let lv = lambda.value() as i64;
        let (value, vec) = if a.is_zero() && b.is_zero() {
            (PhaseExponent::zero(d), basis_vector(n, lv as usize))
        } else if b.is_zero() {
            let idx = (lambda * a.inverse().expect("a is nonzero")).value() as usize;
            (PhaseExponent::omega_power(lv, d), basis_vector(n, idx))
        } else if d.get() == 2 {
            let value = PhaseExponent::new(2 * lv - (a.value() * b.value()) as i64, d);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let v = CVector::from_vec(vec![Complex64::new(s, 0.0), value.value() * s]);
            (value, v)
        } else {
            let b_inv = b.inverse().expect("b is nonzero");
            let ab = (a * b).value() as i64;
            let norm = 1.0 / (n as f64).sqrt();
            let v = CVector::from_fn(n, |j, _| {
                let mu = (d.scalar(j as i64) * b_inv).value() as i64;
                let gamma = mu * lv - (mu * (mu - 1) / 2) * ab;
                omega(d, gamma) * norm
            });
            (PhaseExponent::omega_power(lv, d), v)
        };
        eigenvalues.push(value);
        vectors.push(vec);
    }
    EigenSystem { a, b, eigenvalues, vectors }
}

fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::from_element(n, ZERO);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// How `W_{x,y}` permutes the eigenbasis of `W_{a,b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenShift {
    /// `W_{x,y} |ω_λ⟩ ∝ |ω_{λ + shift}⟩`.
    pub shift: FieldScalar,
    /// The proportionality factor as a function of `λ`.
    pub phase: AffinePhase,
}

/// `W_{x,y} |ω_λ⟩ = τ^{phase(λ)} |ω_{λ + shift}⟩` for the eigenbasis of
/// [`eigensystem`]`(a, b)`.
pub fn eigenvector_shift(a: FieldScalar, b: FieldScalar, x: FieldScalar, y: FieldScalar) -> EigenShift {
    let d = a.modulus();
    let (xv, yv) = (x.value() as i64, y.value() as i64);
    if a.is_zero() && b.is_zero() {
        EigenShift { shift: -y, phase: AffinePhase::new(d, 2 * xv, -2 * xv * yv) }
    } else if b.is_zero() {
        let slope = (x * a.inverse().expect("a is nonzero")).value() as i64;
        EigenShift { shift: -(a * y), phase: AffinePhase::new(d, 2 * slope, -2 * xv * yv) }
    } else if d.get() == 2 {
        let ab = (a.value() * b.value()) as i64;
        EigenShift { shift: b * x - a * y, phase: AffinePhase::new(d, 2 * yv, -yv * ab) }
    } else {
        let eta = (y * b.inverse().expect("b is nonzero")).value() as i64;
        let ab = (a * b).value() as i64;
        let c = -(eta * (eta - 1) / 2) * ab;
        EigenShift { shift: b * x - a * y, phase: AffinePhase::new(d, 2 * eta, 2 * c) }
    }
}

/// `|Ω(e)⟩ = (W(e) ⊗ 1)|Ω_{0,0}⟩^{⊗N}` with all Alice qudits before all Bob
/// qudits (`A_1…A_N B_1…B_N`).
pub fn bell_vector(e: &ErrorElement) -> CVector {
    let w = dense_matrix(e);
    let dim = w.nrows();
    let norm = 1.0 / (dim as f64).sqrt();
    CVector::from_fn(dim * dim, |idx, _| w[(idx / dim, idx % dim)] * norm)
}
