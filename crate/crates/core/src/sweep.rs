//! Batch runs over the benchmark families.
//!
//! Rows are computed in parallel but always returned in grid (or bin, then
//! draw) order, and every random draw gets its own seed derived from the
//! master seed and the draw index, so results do not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::protocol::{distill, DistillOptions};
use crate::states::{isotropic, offline, pure_fidelity, random_pure, random_pure_vector, BdsState, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Isotropic,
    Offline,
    Random,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "isotropic" => Ok(Family::Isotropic),
            "offline" => Ok(Family::Offline),
            "random" => Ok(Family::Random),
            other => Err(format!("unknown family {other:?} (expected isotropic, offline or random)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Isotropic => "isotropic",
            Family::Offline => "offline",
            Family::Random => "random",
        })
    }
}

/// Extra columns of a random-state row.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomColumns {
    pub seed: u64,
    pub bin: usize,
    pub bin_mean_efficiency: f64,
    pub bin_std_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub family: Family,
    pub d: u32,
    pub parameter: f64,
    pub input_fidelity: f64,
    pub reached: bool,
    pub n_iterations: usize,
    pub efficiency: f64,
    pub random: Option<RandomColumns>,
}

/// SplitMix64 finaliser applied to `master + index·γ`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `from, from + step, …` up to `to` inclusive, each value rounded to 12
/// decimals so that accumulated steps print cleanly.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::InvalidParameter(format!("bad grid {from}..{to} step {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Member of a parametrised family.
pub fn family_state(family: Family, d: Prime, p: f64) -> Result<BdsState> {
    match family {
        Family::Isotropic => isotropic(d, p),
        Family::Offline if d.get() == 3 => offline(p),
        Family::Offline => Err(Error::InvalidParameter("the offline family is defined for d = 3".into())),
        Family::Random => Err(Error::InvalidParameter("the random family has no parameter grid".into())),
    }
}

/// Distils every grid point of an isotropic or offline family.
pub fn parameter_sweep(family: Family, d: Prime, grid: &[f64], opts: &DistillOptions) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&p| {
            let bds = family_state(family, d, p)?;
            let run = distill(&State::Bds(bds.clone()), opts)?;
            Ok(SweepRow {
                family,
                d: d.get(),
                parameter: p,
                input_fidelity: bds.fidelity(),
                reached: run.reached_target,
                n_iterations: run.n_iterations(),
                efficiency: run.efficiency,
                random: None,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RandomSweepConfig {
    pub d: Prime,
    /// Samples wanted in every fidelity bin.
    pub samples_per_bin: usize,
    /// Bins of width 0.01 centred on `0.00, 0.01, …`.
    pub bins: usize,
    pub seed: u64,
    pub options: DistillOptions,
    /// Stop drawing after this many candidates even if bins are unfilled.
    pub max_draws: u64,
}

impl RandomSweepConfig {
    /// Bin count covering the fidelities that random pure states reach with
    /// reasonable rejection rates.
    pub fn default_bins(d: Prime) -> usize {
        if d.get() == 2 {
            91
        } else {
            61
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomSweepResult {
    pub rows: Vec<SweepRow>,
    pub draws: u64,
    /// Bins that ended with fewer samples than requested.
    pub underfilled: Vec<usize>,
}

const DRAW_CHUNK: u64 = 1 << 14;

/// Random pure states binned by input fidelity (rejection fill), each
/// distilled with the configured options.
pub fn random_sweep(cfg: &RandomSweepConfig) -> Result<RandomSweepResult> {
    if cfg.samples_per_bin == 0 || cfg.bins == 0 {
        return Err(Error::InvalidParameter("samples and bins must be positive".into()));
    }
    let d = cfg.d;
    let mut accepted: Vec<Vec<(u64, f64)>> = vec![Vec::new(); cfg.bins];
    let mut open = cfg.bins;
    let mut draws = 0u64;
    while open > 0 && draws < cfg.max_draws {
        let end = (draws + DRAW_CHUNK).min(cfg.max_draws);
        let batch: Vec<(u64, f64)> = (draws..end)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(cfg.seed, i);
                (seed, pure_fidelity(d, &random_pure_vector(d, seed)))
            })
            .collect();
        for (seed, f) in batch {
            let bin = (f * 100.0).round() as usize;
            if bin < cfg.bins && accepted[bin].len() < cfg.samples_per_bin {
                accepted[bin].push((seed, f));
                if accepted[bin].len() == cfg.samples_per_bin {
                    open -= 1;
                }
            }
        }
        draws = end;
    }
    let jobs: Vec<(usize, u64, f64)> = accepted
        .iter()
        .enumerate()
        .flat_map(|(bin, v)| v.iter().map(move |&(seed, f)| (bin, seed, f)))
        .collect();
    let mut rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(bin, seed, f)| {
            let run = distill(&State::Dense(random_pure(d, seed)), &cfg.options)?;
            Ok(SweepRow {
                family: Family::Random,
                d: d.get(),
                parameter: bin as f64 / 100.0,
                input_fidelity: f,
                reached: run.reached_target,
                n_iterations: run.n_iterations(),
                efficiency: run.efficiency,
                random: Some(RandomColumns { seed, bin, bin_mean_efficiency: 0.0, bin_std_error: 0.0 }),
            })
        })
        .collect::<Result<_>>()?;
    let mut start = 0;
    for v in &accepted {
        let chunk = &mut rows[start..start + v.len()];
        let (mean, se) = mean_and_std_error(chunk.iter().map(|r| r.efficiency));
        for r in chunk.iter_mut() {
            let extra = r.random.as_mut().expect("random rows");
            extra.bin_mean_efficiency = mean;
            extra.bin_std_error = se;
        }
        start += v.len();
    }
    let underfilled = accepted
        .iter()
        .enumerate()
        .filter(|(_, v)| v.len() < cfg.samples_per_bin)
        .map(|(b, _)| b)
        .collect();
    Ok(RandomSweepResult { rows, draws, underfilled })
}

/// Sample mean and `σ/√n` (zero for fewer than two samples).
fn mean_and_std_error(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
