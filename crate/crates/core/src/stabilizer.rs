//! Single-generator stabilizers on two copies, their syndrome classes and
//! coset decompositions, and probability bookkeeping over error distributions.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldScalar, Prime};
use crate::weyl::{symplectic_product, ErrorElement};

/// Cyclic stabilizer `{0, g, 2g, …, (d-1)g}` stored by its canonical generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stabilizer {
    generator: ErrorElement,
}

impl Stabilizer {
    /// The stabilizer generated by `g` (any generator of the subgroup).
    pub fn new(g: &ErrorElement) -> Result<Self> {
        Ok(Stabilizer { generator: canonical_generator(g)? })
    }

    pub fn generator(&self) -> &ErrorElement {
        &self.generator
    }

    pub fn modulus(&self) -> Prime {
        self.generator.modulus()
    }

    pub fn n_copies(&self) -> usize {
        self.generator.n_copies()
    }

    /// `m·g` for `m = 0..d`.
    pub fn elements(&self) -> Vec<ErrorElement> {
        (0..self.modulus().get() as i64).map(|m| self.generator.scaled(m)).collect()
    }

    pub fn contains(&self, e: &ErrorElement) -> bool {
        self.elements().contains(e)
    }

    /// `⟨g, e⟩`.
    pub fn syndrome(&self, e: &ErrorElement) -> Result<FieldScalar> {
        symplectic_product(&self.generator, e)
    }
}

impl PartialOrd for Stabilizer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stabilizer {
    fn cmp(&self, other: &Self) -> Ordering {
        self.generator.cmp(&other.generator)
    }
}

impl fmt::Display for Stabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.generator)
    }
}

/// Lexicographically smallest nonzero multiple of `e`.
pub fn canonical_generator(e: &ErrorElement) -> Result<ErrorElement> {
    if e.is_zero() {
        return Err(Error::InvalidGenerator("the identity generates the trivial group".into()));
    }
    let d = e.modulus().get() as i64;
    Ok((1..d).map(|m| e.scaled(m)).min().expect("d >= 2"))
}

/// All `(d²+1)(d+1)` single-generator stabilizers on two copies, ordered by
/// canonical generator.
pub fn enumerate_stabilizers(d: Prime) -> Vec<Stabilizer> {
    let mut out: Vec<Stabilizer> = ErrorElement::all(d, 2)
        .filter(|e| !e.is_zero())
        .filter_map(|e| {
            let g = canonical_generator(&e).expect("nonzero");
            (g == e).then_some(Stabilizer { generator: g })
        })
        .collect();
    out.sort();
    out
}

/// A coset `e + G_S`, named by its lexicographically smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetId {
    pub stabilizer: Stabilizer,
    pub representative: ErrorElement,
    pub syndrome: FieldScalar,
}

impl CosetId {
    /// `representative + m·g` for `m = 0..d`.
    pub fn members(&self) -> Vec<ErrorElement> {
        self.stabilizer
            .elements()
            .iter()
            .map(|s| &self.representative + s)
            .collect()
    }

    pub fn is_stabilizer(&self) -> bool {
        self.representative.is_zero()
    }
}

pub fn coset_of(stab: &Stabilizer, e: &ErrorElement) -> Result<CosetId> {
    let syndrome = stab.syndrome(e)?;
    let representative = stab
        .elements()
        .iter()
        .map(|s| e + s)
        .min()
        .expect("stabilizer is nonempty");
    Ok(CosetId { stabilizer: stab.clone(), representative, syndrome })
}

/// `E(s) = {e : ⟨g, e⟩ = s}` in lexicographic order.
pub fn syndrome_partition(stab: &Stabilizer, s: FieldScalar) -> Vec<ErrorElement> {
    ErrorElement::all(stab.modulus(), stab.n_copies())
        .filter(|e| stab.syndrome(e).expect("same shape") == s)
        .collect()
}

/// The cosets making up `E(s)`, ordered by representative.
pub fn cosets_in(stab: &Stabilizer, s: FieldScalar) -> Vec<CosetId> {
    let mut out: Vec<CosetId> = syndrome_partition(stab, s)
        .iter()
        .map(|e| coset_of(stab, e).expect("same shape"))
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out.dedup_by(|a, b| a.representative == b.representative);
    out
}

/// Probability distribution over the `d^{2N}` error elements of `N` copies,
/// stored densely in [`ErrorElement::index`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorDistribution {
    d: Prime,
    n_copies: usize,
    probs: Vec<f64>,
}

impl ErrorDistribution {
    pub fn new(d: Prime, n_copies: usize, probs: Vec<f64>) -> Result<Self> {
        let expected = d.as_usize().pow(2 * n_copies as u32);
        if probs.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidMixture(format!("negative or NaN probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMixture(format!("probabilities sum to {total}")));
        }
        Ok(ErrorDistribution { d, n_copies, probs })
    }

    pub fn uniform(d: Prime, n_copies: usize) -> Self {
        let n = d.as_usize().pow(2 * n_copies as u32);
        ErrorDistribution { d, n_copies, probs: vec![1.0 / n as f64; n] }
    }

    pub fn modulus(&self) -> Prime {
        self.d
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn prob(&self, e: &ErrorElement) -> f64 {
        self.probs[e.index()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// `P(C) = Σ_{e ∈ C} p(e)`.
pub fn coset_probability(dist: &ErrorDistribution, c: &CosetId) -> f64 {
    c.members().iter().map(|e| dist.prob(e)).sum()
}

/// `P(E(s))`.
pub fn partition_probability(dist: &ErrorDistribution, stab: &Stabilizer, s: FieldScalar) -> f64 {
    syndrome_partition(stab, s).iter().map(|e| dist.prob(e)).sum()
}

/// Precomputed coset decomposition of every error element for one stabilizer.
///
/// Cosets are grouped by syndrome and ordered by representative inside each
/// group, so `cosets()[s·d² + j]` is the `j`-th coset of `E(s)` (for `N = 2`).
#[derive(Clone, Debug)]
pub struct CosetTable {
    stabilizer: Stabilizer,
    cosets: Vec<CosetId>,
    per_syndrome: usize,
    coset_index: Vec<usize>,
}

impl CosetTable {
    pub fn new(stab: &Stabilizer) -> Self {
        let d = stab.modulus();
        let n = stab.n_copies();
        let total = d.as_usize().pow(2 * n as u32);
        let per_syndrome = total / (d.as_usize() * d.as_usize());
        let mut groups: Vec<Vec<CosetId>> = vec![Vec::new(); d.as_usize()];
        let mut slot: Vec<Option<(usize, usize)>> = vec![None; total];
        let members = stab.elements();
        // A lexicographic scan meets each coset first at its smallest member.
        for e in ErrorElement::all(d, n) {
            if slot[e.index()].is_some() {
                continue;
            }
            let s = stab.syndrome(&e).expect("same shape");
            let group = &mut groups[s.value() as usize];
            for m in &members {
                slot[(&e + m).index()] = Some((s.value() as usize, group.len()));
            }
            group.push(CosetId { stabilizer: stab.clone(), representative: e, syndrome: s });
        }
        let coset_index = slot
            .into_iter()
            .map(|o| {
                let (s, j) = o.expect("every element is covered");
                s * per_syndrome + j
            })
            .collect();
        CosetTable {
            stabilizer: stab.clone(),
            cosets: groups.into_iter().flatten().collect(),
            per_syndrome,
            coset_index,
        }
    }

    pub fn stabilizer(&self) -> &Stabilizer {
        &self.stabilizer
    }

    pub fn cosets(&self) -> &[CosetId] {
        &self.cosets
    }

    pub fn cosets_per_syndrome(&self) -> usize {
        self.per_syndrome
    }

    pub fn cosets_with_syndrome(&self, s: FieldScalar) -> &[CosetId] {
        let start = s.value() as usize * self.per_syndrome;
        &self.cosets[start..start + self.per_syndrome]
    }

    /// Position in [`CosetTable::cosets`] of the coset containing `e`.
    pub fn coset_index(&self, e: &ErrorElement) -> usize {
        self.coset_index[e.index()]
    }

    /// `P(C)` for every coset, aligned with [`CosetTable::cosets`].
    pub fn coset_probabilities(&self, dist: &ErrorDistribution) -> Vec<f64> {
        let mut out = vec![0.0; self.cosets.len()];
        for (i, p) in dist.probs().iter().enumerate() {
            out[self.coset_index[i]] += p;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Prime {
        Prime::new(d).unwrap()
    }

    fn el(d: Prime, copies: &[(i64, i64)]) -> ErrorElement {
        ErrorElement::from_copies(d, copies)
    }

    #[test]
    fn stabilizer_counts() {
        assert_eq!(enumerate_stabilizers(p(2)).len(), 15);
        assert_eq!(enumerate_stabilizers(p(3)).len(), 40);
        assert_eq!(enumerate_stabilizers(p(5)).len(), 26 * 6);
    }

    #[test]
    fn stabilizers_cover_group_disjointly() {
        for d in [2, 3] {
            let d = p(d);
            let mut seen = vec![0u32; d.as_usize().pow(4)];
            for s in enumerate_stabilizers(d) {
                let els = s.elements();
                assert_eq!(els.len(), d.as_usize());
                for e in els.iter().filter(|e| !e.is_zero()) {
                    seen[e.index()] += 1;
                }
            }
            assert!(seen.iter().skip(1).all(|&c| c == 1));
        }
    }

    #[test]
    fn canonical_generator_examples() {
        let d = p(3);
        let a = canonical_generator(&el(d, &[(1, 1), (0, 0)])).unwrap();
        let b = canonical_generator(&el(d, &[(2, 2), (0, 0)])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, el(d, &[(1, 1), (0, 0)]));
        assert_eq!(canonical_generator(&a).unwrap(), a);
        let d2 = p(2);
        let e = el(d2, &[(1, 0), (0, 1)]);
        assert_eq!(canonical_generator(&e).unwrap(), e);
        assert!(matches!(
            canonical_generator(&ErrorElement::zero(d, 2)),
            Err(Error::InvalidGenerator(_))
        ));
    }

    #[test]
    fn partition_and_coset_sizes() {
        for d in [2, 3] {
            let d = p(d);
            let n = d.as_usize();
            for stab in enumerate_stabilizers(d) {
                assert_eq!(syndrome_partition(&stab, d.scalar(0))[0], ErrorElement::zero(d, 2));
                assert!(syndrome_partition(&stab, d.scalar(0)).contains(stab.generator()));
                for s in d.elements() {
                    let part = syndrome_partition(&stab, s);
                    assert_eq!(part.len(), n * n * n);
                    let cosets = cosets_in(&stab, s);
                    assert_eq!(cosets.len(), n * n);
                    let mut union: Vec<_> = cosets.iter().flat_map(|c| c.members()).collect();
                    union.sort();
                    assert_eq!(union, part);
                    assert!(cosets.windows(2).all(|w| w[0].representative < w[1].representative));
                }
            }
        }
    }

    #[test]
    fn qutrit_example_coset_listing() {
        // generator with k = (1,1), l = (0,0); coset of k = (0,0), l = (1,1)
        let d = p(3);
        let stab = Stabilizer::new(&ErrorElement::new(d, &[1, 1], &[0, 0]).unwrap()).unwrap();
        let c = coset_of(&stab, &ErrorElement::new(d, &[0, 0], &[1, 1]).unwrap()).unwrap();
        let members = c.members();
        let expect: Vec<_> = [[0, 0], [1, 1], [2, 2]]
            .iter()
            .map(|k| ErrorElement::new(d, k, &[1, 1]).unwrap())
            .collect();
        assert_eq!(members, expect);
        assert_eq!(c.syndrome.value(), 1);
    }

    #[test]
    fn coset_table_matches_direct_enumeration() {
        let d = p(3);
        for stab in enumerate_stabilizers(d).iter().step_by(7) {
            let table = CosetTable::new(stab);
            for s in d.elements() {
                assert_eq!(table.cosets_with_syndrome(s), cosets_in(stab, s).as_slice());
            }
            for e in ErrorElement::all(d, 2) {
                let c = &table.cosets()[table.coset_index(&e)];
                assert_eq!(c, &coset_of(stab, &e).unwrap());
            }
        }
    }

    #[test]
    fn uniform_probabilities() {
        let d = p(3);
        let dist = ErrorDistribution::uniform(d, 2);
        let stab = &enumerate_stabilizers(d)[5];
        for c in cosets_in(stab, d.scalar(2)) {
            assert!((coset_probability(&dist, &c) - 1.0 / 27.0).abs() < 1e-15);
        }
        let total: f64 = d.elements().map(|s| partition_probability(&dist, stab, s)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_validation() {
        let d = p(2);
        assert!(matches!(ErrorDistribution::new(d, 2, vec![0.5; 3]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(ErrorDistribution::new(d, 2, vec![0.1; 16]), Err(Error::InvalidMixture(_))));
        let mut v = vec![0.0; 16];
        v[0] = 1.5;
        v[1] = -0.5;
        assert!(matches!(ErrorDistribution::new(d, 2, v), Err(Error::InvalidMixture(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element(d: u32) -> impl Strategy<Value = ErrorElement> {
            proptest::collection::vec(0..d as i64, 4)
                .prop_map(move |v| ErrorElement::new(p(d), &v[..2], &v[2..]).unwrap())
        }

        proptest! {
            #[test]
            fn coset_of_is_constant_on_cosets(g in element(5), e in element(5), m in 0i64..5) {
                prop_assume!(!g.is_zero());
                let stab = Stabilizer::new(&g).unwrap();
                let shifted = &e + &g.scaled(m);
                prop_assert_eq!(coset_of(&stab, &e).unwrap(), coset_of(&stab, &shifted).unwrap());
            }

            #[test]
            fn canonical_generator_is_idempotent(e in element(5)) {
                prop_assume!(!e.is_zero());
                let g = canonical_generator(&e).unwrap();
                prop_assert_eq!(canonical_generator(&g).unwrap(), g.clone());
                prop_assert!(g <= e);
            }
        }
    }
}
