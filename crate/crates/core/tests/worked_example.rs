//! The qutrit worked example: 0.56 on Ω_{2,1}, 0.055 on every other Bell state.

use qudit_distill::encoding::{canonic_encoding, coset_action};
use qudit_distill::protocol::{fimax_select, fimax_step, generic_step};
use qudit_distill::stabilizer::{coset_of, coset_probability, cosets_in, partition_probability, Stabilizer};
use qudit_distill::states::{two_copy_distribution, BdsState};
use qudit_distill::{ErrorElement, Prime};

fn d3() -> Prime {
    Prime::new(3).unwrap()
}

fn input() -> BdsState {
    let mut probs = vec![0.055; 9];
    probs[5] = 0.56;
    BdsState::new(d3(), probs).unwrap()
}

/// Stabilizer generated by W_{1,0} ⊗ W_{1,0}.
fn example_stabilizer() -> Stabilizer {
    Stabilizer::new(&ErrorElement::new(d3(), &[1, 1], &[0, 0]).unwrap()).unwrap()
}

#[test]
fn example_stabilizer_ties_the_selection() {
    // Several stabilizers reach the maximum; the first in sorted order wins.
    let choice = fimax_select(&input()).unwrap();
    assert_eq!(choice.syndrome.value(), 1);
    assert_eq!(choice.action, ErrorElement::single(d3(), 0, 1));
    let stab = example_stabilizer();
    let cmax = coset_of(&stab, &ErrorElement::from_copies(d3(), &[(2, 1), (2, 1)])).unwrap();
    assert_eq!(cmax.syndrome, d3().scalar(1));
    assert_eq!(coset_action(&stab, &cmax).unwrap().label, ErrorElement::single(d3(), 0, 1));
    let dist = two_copy_distribution(&input());
    let ratio = coset_probability(&dist, &cmax) / partition_probability(&dist, &stab, cmax.syndrome);
    assert!((ratio - choice.predicted_fidelity).abs() < 1e-12);
    assert!(choice.stabilizer <= stab);
}

#[test]
fn exact_sums() {
    let dist = two_copy_distribution(&input());
    let stab = example_stabilizer();
    let cmax = coset_of(&stab, &ErrorElement::from_copies(d3(), &[(2, 1), (2, 1)])).unwrap();
    // 0.56² + 2·0.055²
    assert!((coset_probability(&dist, &cmax) - 0.31965).abs() < 1e-12);
    let pe = partition_probability(&dist, &stab, d3().scalar(1));
    assert!((pe - 0.50335).abs() < 1e-12);
    let total: f64 = d3().elements().map(|s| partition_probability(&dist, &stab, s)).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let by_cosets: f64 = cosets_in(&stab, d3().scalar(1)).iter().map(|c| coset_probability(&dist, c)).sum();
    assert!((by_cosets - pe).abs() < 1e-12);
}

#[test]
fn remaining_coset_ratios() {
    let dist = two_copy_distribution(&input());
    let stab = example_stabilizer();
    let s = d3().scalar(1);
    let pe = partition_probability(&dist, &stab, s);
    let mut ratios: Vec<f64> = cosets_in(&stab, s).iter().map(|c| coset_probability(&dist, c) / pe).collect();
    ratios.sort_by(|a, b| b.total_cmp(a));
    let expect = [0.635, 0.13, 0.13, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02];
    for (r, e) in ratios.iter().zip(expect) {
        assert!((r - e).abs() < 0.01, "{ratios:?}");
    }
}

#[test]
fn output_state() {
    let (out, rec) = fimax_step(&input()).unwrap();
    assert!((out.fidelity() - 0.635).abs() < 1e-3);
    assert!((out.prob(1, 0) - 0.128).abs() < 1e-3);
    assert!((out.prob(2, 0) - 0.128).abs() < 1e-3);
    for (k, l) in [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)] {
        assert!((out.prob(k, l) - 0.018).abs() < 1e-3);
    }
    assert!((rec.fidelity_after - rec.choice.predicted_fidelity).abs() < 1e-12);
    assert_eq!(rec.fidelity_before, input().fidelity());
}

#[test]
fn encoding_is_the_documented_permutation() {
    let u = canonic_encoding(&example_stabilizer()).unwrap();
    for x in 0..3 {
        for k in 0..3 {
            let col = u.codeword(x, k);
            let row = k * 3 + (x + 3 - k) % 3;
            assert!((col[row].re - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn fixed_stabilizer_without_correction() {
    let bds = input();
    let stab = example_stabilizer();
    let zero = d3().scalar(0);
    let s_coset = coset_of(&stab, &ErrorElement::zero(d3(), 2)).unwrap();
    let (out, prob) = generic_step(&bds, &stab, zero, &s_coset).unwrap();
    let dist = two_copy_distribution(&bds);
    let expect = coset_probability(&dist, &s_coset) / partition_probability(&dist, &stab, zero);
    assert!((out.fidelity() - expect).abs() < 1e-12);
    assert!((prob - partition_probability(&dist, &stab, zero)).abs() < 1e-12);
}
