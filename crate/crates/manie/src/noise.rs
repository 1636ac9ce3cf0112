//! Observational-noise injection for time series, payoff records, and
//! binary state records.
//!
//! Every injector is the identity when its intensity parameter is zero,
//! never changes array shapes, and reports exactly which samples it
//! touched through a [`CorruptionMask`]. Partially corrupting a continuous
//! series invalidates any derivative field it carried: derivatives of
//! measured data must be re-estimated from the corrupted values.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dynamics::{BinaryTimeSeries, EgRecord, TimeSeries};
use crate::error::{Error, Result};

/// Ground-truth record of which samples received noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionMask {
    noisy: Vec<bool>,
}

impl CorruptionMask {
    pub fn all_clean(m: usize) -> Self {
        CorruptionMask {
            noisy: vec![false; m],
        }
    }

    pub fn noisy(&self) -> &[bool] {
        &self.noisy
    }

    pub fn len(&self) -> usize {
        self.noisy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.noisy.is_empty()
    }

    pub fn count_noisy(&self) -> usize {
        self.noisy.iter().filter(|&&b| b).count()
    }
}

/// Declarative description of one noise scenario, as written in experiment
/// configs. `seed`, when absent, is derived from the experiment seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    None,
    AwgnGlobal {
        snr_db: f64,
    },
    AwgnLocal {
        snr_db: f64,
        prob: f64,
        #[serde(default)]
        per_entry: bool,
    },
    AwgnLocalRandomSnr {
        snr_lo: f64,
        snr_hi: f64,
        prob: f64,
    },
    AmpUniform {
        amplitude: f64,
        prob: f64,
    },
    AmpUniformRandom {
        amplitude: f64,
        prob: f64,
    },
    DropNodes {
        frac: f64,
    },
    FlipBits {
        prob: f64,
    },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        let check_prob = |p: f64, name: &str| {
            if !(0.0..=1.0).contains(&p) {
                Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            NoiseSpec::None | NoiseSpec::AwgnGlobal { .. } => {}
            NoiseSpec::AwgnLocal { prob, .. } => check_prob(prob, "prob")?,
            NoiseSpec::AwgnLocalRandomSnr {
                snr_lo,
                snr_hi,
                prob,
            } => {
                check_prob(prob, "prob")?;
                if snr_lo > snr_hi {
                    return Err(Error::InvalidParameter(format!(
                        "snr range must be ordered, got [{snr_lo}, {snr_hi}]"
                    )));
                }
            }
            NoiseSpec::AmpUniform { amplitude, prob }
            | NoiseSpec::AmpUniformRandom { amplitude, prob } => {
                check_prob(prob, "prob")?;
                if amplitude < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "amplitude must be nonnegative, got {amplitude}"
                    )));
                }
            }
            NoiseSpec::DropNodes { frac } => check_prob(frac, "frac")?,
            NoiseSpec::FlipBits { prob } => check_prob(prob, "prob")?,
        }
        Ok(())
    }

    /// Short identifier used in result rows.
    pub fn id(&self) -> String {
        match self {
            NoiseSpec::None => "none".into(),
            NoiseSpec::AwgnGlobal { snr_db } => format!("awgn_global_snr{snr_db}"),
            NoiseSpec::AwgnLocal { snr_db, prob, .. } => {
                format!("awgn_local_snr{snr_db}_p{prob}")
            }
            NoiseSpec::AwgnLocalRandomSnr {
                snr_lo,
                snr_hi,
                prob,
            } => format!("awgn_local_snr{snr_lo}to{snr_hi}_p{prob}"),
            NoiseSpec::AmpUniform { amplitude, prob } => format!("amp{amplitude}_p{prob}"),
            NoiseSpec::AmpUniformRandom { amplitude, prob } => {
                format!("amp_rand{amplitude}_p{prob}")
            }
            NoiseSpec::DropNodes { frac } => format!("drop{frac}"),
            NoiseSpec::FlipBits { prob } => format!("flip{prob}"),
        }
    }
}

/// Per-node-series raw signal power (mean square of the clean series).
fn node_power(ts: &TimeSeries) -> Result<Vec<f64>> {
    let m = ts.n_samples() as f64;
    (0..ts.n_nodes())
        .map(|i| {
            let p = ts.values.row(i).iter().map(|x| x * x).sum::<f64>() / m;
            if p > 0.0 {
                Ok(p)
            } else {
                Err(Error::ZeroPower { node: i })
            }
        })
        .collect()
}

fn snr_to_sigma(power: f64, snr_db: f64) -> f64 {
    (power / 10f64.powf(snr_db / 10.0)).sqrt()
}

/// Drop derivative information when anything was corrupted; measured data
/// no longer carries exact derivatives.
fn finalize_series(mut ts: TimeSeries, mask: CorruptionMask) -> (TimeSeries, CorruptionMask) {
    if mask.count_noisy() > 0 {
        ts.deriv = None;
        ts.deriv_valid = None;
    }
    (ts, mask)
}

/// Add zero-mean Gaussian noise to every entry; per-node noise variance is
/// the node's raw signal power divided by 10^(snr_db / 10).
pub fn add_awgn_global(
    ts: &TimeSeries,
    snr_db: f64,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)> {
    let sigmas: Vec<f64> = node_power(ts)?
        .into_iter()
        .map(|p| snr_to_sigma(p, snr_db))
        .collect();
    let mut out = ts.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = vec![false; ts.n_samples()];
    for t in 0..ts.n_samples() {
        for i in 0..ts.n_nodes() {
            let z: f64 = rng.sample(StandardNormal);
            let delta = sigmas[i] * z;
            if delta != 0.0 {
                out.values[(i, t)] += delta;
                noisy[t] = true;
            }
        }
    }
    Ok(finalize_series(out, CorruptionMask { noisy }))
}

/// Corrupt whole time steps: each step is independently selected with
/// probability `prob`, and every node's entry at a selected step receives
/// Gaussian noise at the given SNR.
pub fn add_awgn_local(
    ts: &TimeSeries,
    snr_db: f64,
    prob: f64,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)> {
    add_awgn_local_steps(ts, |_| snr_db, prob, seed)
}

/// As [`add_awgn_local`], but the SNR of each corrupted step is drawn
/// uniformly from [snr_lo, snr_hi] dB.
pub fn add_awgn_local_random_snr(
    ts: &TimeSeries,
    snr_lo: f64,
    snr_hi: f64,
    prob: f64,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)> {
    if snr_lo > snr_hi {
        return Err(Error::InvalidParameter(format!(
            "snr range must be ordered, got [{snr_lo}, {snr_hi}]"
        )));
    }
    add_awgn_local_steps(
        ts,
        move |rng: &mut ChaCha8Rng| {
            if snr_lo == snr_hi {
                snr_lo
            } else {
                rng.random_range(snr_lo..=snr_hi)
            }
        },
        prob,
        seed,
    )
}

fn add_awgn_local_steps<F>(
    ts: &TimeSeries,
    mut step_snr: F,
    prob: f64,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)>
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "prob must lie in [0, 1], got {prob}"
        )));
    }
    let powers = node_power(ts)?;
    let mut out = ts.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = vec![false; ts.n_samples()];
    for t in 0..ts.n_samples() {
        if rng.random::<f64>() >= prob {
            continue;
        }
        let snr_db = step_snr(&mut rng);
        for i in 0..ts.n_nodes() {
            let z: f64 = rng.sample(StandardNormal);
            let delta = snr_to_sigma(powers[i], snr_db) * z;
            if delta != 0.0 {
                out.values[(i, t)] += delta;
                noisy[t] = true;
            }
        }
    }
    Ok(finalize_series(out, CorruptionMask { noisy }))
}

/// Entry-granular variant of [`add_awgn_local`]: each (node, step) entry
/// is corrupted independently with probability `prob`.
pub fn add_awgn_local_per_entry(
    ts: &TimeSeries,
    snr_db: f64,
    prob: f64,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "prob must lie in [0, 1], got {prob}"
        )));
    }
    let powers = node_power(ts)?;
    let mut out = ts.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = vec![false; ts.n_samples()];
    for t in 0..ts.n_samples() {
        for i in 0..ts.n_nodes() {
            if rng.random::<f64>() >= prob {
                continue;
            }
            let z: f64 = rng.sample(StandardNormal);
            let delta = snr_to_sigma(powers[i], snr_db) * z;
            if delta != 0.0 {
                out.values[(i, t)] += delta;
                noisy[t] = true;
            }
        }
    }
    Ok(finalize_series(out, CorruptionMask { noisy }))
}

/// Additive uniform payoff noise on [-a, a] applied to every node at each
/// selected round. With `random_amp`, a fresh a ~ U(0, amplitude) is drawn
/// per selected round; otherwise a = amplitude.
pub fn add_amp_noise(
    eg: &EgRecord,
    amplitude: f64,
    random_amp: bool,
    prob: f64,
    seed: u64,
) -> Result<(EgRecord, CorruptionMask)> {
    if amplitude < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be nonnegative, got {amplitude}"
        )));
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "prob must lie in [0, 1], got {prob}"
        )));
    }
    let mut out = eg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = vec![false; eg.n_samples()];
    for t in 0..eg.n_samples() {
        if rng.random::<f64>() >= prob {
            continue;
        }
        let a = if random_amp {
            rng.random_range(0.0..=amplitude)
        } else {
            amplitude
        };
        for i in 0..eg.n_nodes() {
            let delta = if a > 0.0 { rng.random_range(-a..=a) } else { 0.0 };
            if delta != 0.0 {
                out.payoffs[(i, t)] += delta;
                noisy[t] = true;
            }
        }
    }
    Ok((out, CorruptionMask { noisy }))
}

/// Mark ceil(frac * N) uniformly chosen nodes as missing. Their rows are
/// kept in place but excluded from all downstream design matrices.
pub fn drop_nodes(bts: &BinaryTimeSeries, frac: f64, seed: u64) -> Result<BinaryTimeSeries> {
    if !(0.0..=1.0).contains(&frac) {
        return Err(Error::InvalidParameter(format!(
            "frac must lie in [0, 1], got {frac}"
        )));
    }
    let n = bts.n_nodes();
    let raw = frac * n as f64;
    // Guard the ceiling against float dust in frac * n.
    let k = if (raw - raw.round()).abs() < 1e-9 {
        raw.round() as usize
    } else {
        raw.ceil() as usize
    };
    let mut out = bts.clone();
    if k == 0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, n, k.min(n));
    for i in chosen {
        out.missing[i] = true;
    }
    Ok(out)
}

/// Flip each observed entry independently with probability `prob`. Rows of
/// missing nodes are left untouched (they are unobserved). The mask marks
/// every time step containing at least one flip.
pub fn flip_bits(
    bts: &BinaryTimeSeries,
    prob: f64,
    seed: u64,
) -> Result<(BinaryTimeSeries, CorruptionMask)> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "prob must lie in [0, 1], got {prob}"
        )));
    }
    let mut out = bts.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = vec![false; bts.n_samples()];
    for t in 0..bts.n_samples() {
        for i in 0..bts.n_nodes() {
            if bts.missing[i] {
                continue;
            }
            if rng.random::<f64>() < prob {
                out.states[(i, t)] ^= 1;
                noisy[t] = true;
            }
        }
    }
    Ok((out, CorruptionMask { noisy }))
}

/// Apply a continuous-series spec. Errors for specs that target other
/// record types.
pub fn apply_to_series(
    spec: &NoiseSpec,
    ts: &TimeSeries,
    seed: u64,
) -> Result<(TimeSeries, CorruptionMask)> {
    spec.validate()?;
    match *spec {
        NoiseSpec::None => Ok((ts.clone(), CorruptionMask::all_clean(ts.n_samples()))),
        NoiseSpec::AwgnGlobal { snr_db } => add_awgn_global(ts, snr_db, seed),
        NoiseSpec::AwgnLocal {
            snr_db,
            prob,
            per_entry,
        } => {
            if per_entry {
                add_awgn_local_per_entry(ts, snr_db, prob, seed)
            } else {
                add_awgn_local(ts, snr_db, prob, seed)
            }
        }
        NoiseSpec::AwgnLocalRandomSnr {
            snr_lo,
            snr_hi,
            prob,
        } => add_awgn_local_random_snr(ts, snr_lo, snr_hi, prob, seed),
        _ => Err(Error::Config(format!(
            "noise spec {} does not apply to continuous time series",
            spec.id()
        ))),
    }
}

/// Apply a payoff-record spec.
pub fn apply_to_record(
    spec: &NoiseSpec,
    eg: &EgRecord,
    seed: u64,
) -> Result<(EgRecord, CorruptionMask)> {
    spec.validate()?;
    match *spec {
        NoiseSpec::None => Ok((eg.clone(), CorruptionMask::all_clean(eg.n_samples()))),
        NoiseSpec::AmpUniform { amplitude, prob } => {
            add_amp_noise(eg, amplitude, false, prob, seed)
        }
        NoiseSpec::AmpUniformRandom { amplitude, prob } => {
            add_amp_noise(eg, amplitude, true, prob, seed)
        }
        _ => Err(Error::Config(format!(
            "noise spec {} does not apply to payoff records",
            spec.id()
        ))),
    }
}

/// Apply a binary-record spec.
pub fn apply_to_binary(
    spec: &NoiseSpec,
    bts: &BinaryTimeSeries,
    seed: u64,
) -> Result<(BinaryTimeSeries, CorruptionMask)> {
    spec.validate()?;
    match *spec {
        NoiseSpec::None => Ok((bts.clone(), CorruptionMask::all_clean(bts.n_samples()))),
        NoiseSpec::DropNodes { frac } => Ok((
            drop_nodes(bts, frac, seed)?,
            CorruptionMask::all_clean(bts.n_samples()),
        )),
        NoiseSpec::FlipBits { prob } => flip_bits(bts, prob, seed),
        _ => Err(Error::Config(format!(
            "noise spec {} does not apply to binary records",
            spec.id()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_eg, Game};
    use crate::graphgen::gen_er;
    use ndarray::Array2;

    fn ramp_series(n: usize, m: usize) -> TimeSeries {
        let values =
            Array2::from_shape_fn((n, m), |(i, t)| ((i + 1) as f64) * (0.05 * t as f64).sin() + 1.0);
        TimeSeries::new(values, 0.05).unwrap()
    }

    fn empirical_snr_db(clean: &TimeSeries, noisy: &TimeSeries) -> f64 {
        let signal: f64 = clean.values.iter().map(|x| x * x).sum();
        let noise: f64 = clean
            .values
            .iter()
            .zip(noisy.values.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        10.0 * (signal / noise).log10()
    }

    #[test]
    fn huge_snr_is_nearly_identity() {
        let ts = ramp_series(3, 100);
        let (noisy, mask) = add_awgn_global(&ts, 300.0, 1).unwrap();
        for (a, b) in ts.values.iter().zip(noisy.values.iter()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
        assert_eq!(mask.count_noisy(), mask.len());
    }

    #[test]
    fn empirical_snr_matches_target() {
        let ts = ramp_series(1, 10_000);
        let (noisy, _) = add_awgn_global(&ts, 10.0, 7).unwrap();
        let snr = empirical_snr_db(&ts, &noisy);
        assert!((snr - 10.0).abs() < 0.5, "empirical SNR {snr} dB");
    }

    #[test]
    fn zero_power_series_is_rejected() {
        let ts = TimeSeries::new(Array2::zeros((2, 10)), 0.1).unwrap();
        assert!(matches!(
            add_awgn_global(&ts, 10.0, 0),
            Err(Error::ZeroPower { .. })
        ));
    }

    #[test]
    fn local_prob_zero_is_identity() {
        let mut ts = ramp_series(2, 50);
        ts.deriv = Some(Array2::ones((2, 50)));
        let (noisy, mask) = add_awgn_local(&ts, 10.0, 0.0, 3).unwrap();
        assert_eq!(noisy, ts);
        assert!(noisy.deriv.is_some(), "identity keeps the derivative field");
        assert_eq!(mask.count_noisy(), 0);
    }

    #[test]
    fn local_prob_one_corrupts_every_step() {
        let ts = ramp_series(2, 200);
        let (_, mask) = add_awgn_local(&ts, 10.0, 1.0, 3).unwrap();
        assert_eq!(mask.count_noisy(), 200);
    }

    #[test]
    fn corruption_drops_derivatives() {
        let mut ts = ramp_series(2, 50);
        ts.deriv = Some(Array2::ones((2, 50)));
        let (noisy, _) = add_awgn_local(&ts, 10.0, 0.5, 3).unwrap();
        assert!(noisy.deriv.is_none());
    }

    #[test]
    fn local_corruption_fraction_is_binomial() {
        let ts = ramp_series(1, 10_000);
        let (_, mask) = add_awgn_local(&ts, 10.0, 0.5, 11).unwrap();
        let frac = mask.count_noisy() as f64 / mask.len() as f64;
        let sigma = (0.5 * 0.5 / 10_000f64).sqrt();
        assert!((frac - 0.5).abs() <= 3.0 * sigma);
    }

    #[test]
    fn degenerate_snr_range_matches_fixed_snr() {
        let ts = ramp_series(2, 500);
        let (a, ma) = add_awgn_local_random_snr(&ts, 10.0, 10.0, 0.5, 4).unwrap();
        let (b, mb) = add_awgn_local(&ts, 10.0, 0.5, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(ma, mb);
    }

    #[test]
    fn random_snr_spreads_over_range() {
        let ts = ramp_series(4, 4000);
        let (noisy, mask) = add_awgn_local_random_snr(&ts, 0.0, 10.0, 1.0, 5).unwrap();
        // Per-step empirical SNR estimates should spread across the band.
        let mut snrs = Vec::new();
        for t in 0..ts.n_samples() {
            if !mask.noisy()[t] {
                continue;
            }
            let sig: f64 = ts.values.column(t).iter().map(|x| x * x).sum();
            let err: f64 = ts
                .values
                .column(t)
                .iter()
                .zip(noisy.values.column(t).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            snrs.push(10.0 * (sig / err).log10());
        }
        let lo = snrs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = snrs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // Noisy per-step estimates; just require genuine spread.
        assert!(lo < 4.0 && hi > 6.0, "per-step SNRs in [{lo}, {hi}]");
    }

    fn sample_record() -> EgRecord {
        let net = gen_er(8, 0.4, false, 2).unwrap();
        simulate_eg(&net, Game::Pdg { b: 1.2 }, 10, 6, 0.1, 3).unwrap()
    }

    #[test]
    fn amp_noise_identity_cases() {
        let eg = sample_record();
        let (out, mask) = add_amp_noise(&eg, 0.0, false, 0.5, 9).unwrap();
        assert_eq!(out, eg);
        assert_eq!(mask.count_noisy(), 0);
        let (out, mask) = add_amp_noise(&eg, 10.0, false, 0.0, 9).unwrap();
        assert_eq!(out, eg);
        assert_eq!(mask.count_noisy(), 0);
    }

    #[test]
    fn amp_noise_respects_support_bound() {
        let eg = sample_record();
        let amplitude = 10.0;
        for random_amp in [false, true] {
            let (out, mask) = add_amp_noise(&eg, amplitude, random_amp, 0.7, 13).unwrap();
            let mut max_delta: f64 = 0.0;
            for t in 0..eg.n_samples() {
                for i in 0..eg.n_nodes() {
                    let d = (out.payoffs[(i, t)] - eg.payoffs[(i, t)]).abs();
                    max_delta = max_delta.max(d);
                    if d > 0.0 {
                        assert!(mask.noisy()[t]);
                    }
                }
            }
            assert!(max_delta <= amplitude);
            assert!(out.strategies == eg.strategies);
        }
    }

    #[test]
    fn drop_nodes_counts() {
        let bts = BinaryTimeSeries::new(Array2::zeros((40, 10))).unwrap();
        let out = drop_nodes(&bts, 0.0, 1).unwrap();
        assert_eq!(out, bts);
        let out = drop_nodes(&bts, 0.1, 1).unwrap();
        assert_eq!(out.missing.iter().filter(|&&m| m).count(), 4);
        assert_eq!(out.states, bts.states);
    }

    #[test]
    fn flip_bits_extremes() {
        let states = Array2::from_shape_fn((5, 20), |(i, t)| ((i + t) % 2) as u8);
        let bts = BinaryTimeSeries::new(states).unwrap();
        let (out, mask) = flip_bits(&bts, 0.0, 2).unwrap();
        assert_eq!(out, bts);
        assert_eq!(mask.count_noisy(), 0);
        let (out, mask) = flip_bits(&bts, 1.0, 2).unwrap();
        for (a, b) in bts.states.iter().zip(out.states.iter()) {
            assert_eq!(a ^ 1, *b);
        }
        assert_eq!(mask.count_noisy(), 20);
    }

    #[test]
    fn flip_fraction_is_binomial() {
        let bts = BinaryTimeSeries::new(Array2::zeros((100, 100))).unwrap();
        let (out, _) = flip_bits(&bts, 0.1, 6).unwrap();
        let flipped = out.states.iter().filter(|&&s| s == 1).count() as f64;
        let total = 10_000f64;
        let sigma = (total * 0.1 * 0.9).sqrt();
        assert!((flipped - 0.1 * total).abs() <= 3.0 * sigma);
    }

    #[test]
    fn injectors_are_deterministic() {
        let ts = ramp_series(3, 300);
        let a = add_awgn_local(&ts, 10.0, 0.5, 123).unwrap();
        let b = add_awgn_local(&ts, 10.0, 0.5, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spec_validation() {
        assert!(NoiseSpec::AwgnLocal {
            snr_db: 10.0,
            prob: 1.5,
            per_entry: false
        }
        .validate()
        .is_err());
        assert!(NoiseSpec::AwgnLocalRandomSnr {
            snr_lo: 10.0,
            snr_hi: 0.0,
            prob: 0.5
        }
        .validate()
        .is_err());
        assert!(NoiseSpec::AmpUniform {
            amplitude: -1.0,
            prob: 0.5
        }
        .validate()
        .is_err());
    }

    #[test]
    fn mismatched_spec_and_record_is_rejected() {
        let ts = ramp_series(2, 10);
        assert!(apply_to_series(&NoiseSpec::FlipBits { prob: 0.1 }, &ts, 0).is_err());
        let bts = BinaryTimeSeries::new(Array2::zeros((2, 10))).unwrap();
        assert!(apply_to_binary(&NoiseSpec::AwgnGlobal { snr_db: 10.0 }, &bts, 0).is_err());
    }
}
