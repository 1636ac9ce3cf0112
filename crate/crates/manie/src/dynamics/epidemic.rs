//! Discrete-time epidemic processes: SIS and the contact process.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::BinaryTimeSeries;
use crate::error::{Error, Result};
use crate::graphgen::Network;

fn validate_epidemic(
    net: &Network,
    beta: f64,
    delta: f64,
    initially_infected: &[usize],
    steps: usize,
) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) || !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "beta and delta must lie in [0, 1], got beta={beta}, delta={delta}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(
            "at least 2 samples are required".into(),
        ));
    }
    if let Some(&bad) = initially_infected.iter().find(|&&i| i >= net.n()) {
        return Err(Error::InvalidParameter(format!(
            "initially infected node {bad} out of range"
        )));
    }
    if initially_infected.is_empty() && beta > 0.0 {
        log::warn!("no initially infected nodes: the all-susceptible state is absorbing");
    }
    Ok(())
}

/// Susceptible-infected-susceptible dynamics: a susceptible node is
/// infected with probability 1 - prod over infected in-neighbors of
/// (1 - beta); an infected node recovers with probability delta. Updates
/// are synchronous.
pub fn simulate_sis(
    net: &Network,
    beta: f64,
    delta: f64,
    initially_infected: &[usize],
    steps: usize,
    seed: u64,
) -> Result<BinaryTimeSeries> {
    validate_epidemic(net, beta, delta, initially_infected, steps)?;
    let n = net.n();
    let adj = net.adj();
    let mut states = Array2::zeros((n, steps));
    let mut current = vec![0u8; n];
    for &i in initially_infected {
        current[i] = 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for t in 0..steps {
        for i in 0..n {
            states[(i, t)] = current[i];
        }
        if t + 1 == steps {
            break;
        }
        let mut next = vec![0u8; n];
        for i in 0..n {
            let u = rng.random::<f64>();
            if current[i] == 1 {
                next[i] = if u < delta { 0 } else { 1 };
            } else {
                let mut escape = 1.0;
                for j in 0..n {
                    if adj[(i, j)] != 0.0 && current[j] == 1 {
                        escape *= 1.0 - beta;
                    }
                }
                next[i] = if u < 1.0 - escape { 1 } else { 0 };
            }
        }
        current = next;
    }
    BinaryTimeSeries::new(states)
}

/// Contact process: a susceptible node samples one in-neighbor uniformly
/// at random and is infected with probability beta if that neighbor is
/// infected; recovery with probability delta.
pub fn simulate_cp(
    net: &Network,
    beta: f64,
    delta: f64,
    initially_infected: &[usize],
    steps: usize,
    seed: u64,
) -> Result<BinaryTimeSeries> {
    validate_epidemic(net, beta, delta, initially_infected, steps)?;
    let n = net.n();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| net.in_neighbors(i)).collect();
    let mut states = Array2::zeros((n, steps));
    let mut current = vec![0u8; n];
    for &i in initially_infected {
        current[i] = 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for t in 0..steps {
        for i in 0..n {
            states[(i, t)] = current[i];
        }
        if t + 1 == steps {
            break;
        }
        let mut next = vec![0u8; n];
        for i in 0..n {
            if current[i] == 1 {
                next[i] = if rng.random::<f64>() < delta { 0 } else { 1 };
            } else if !neighbors[i].is_empty() {
                let pick = neighbors[i][rng.random_range(0..neighbors[i].len())];
                if current[pick] == 1 && rng.random::<f64>() < beta {
                    next[i] = 1;
                }
            }
        }
        current = next;
    }
    BinaryTimeSeries::new(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::load_edge_list;

    fn star(leaves: usize) -> Network {
        let text: String = (1..=leaves).map(|v| format!("0 {v}\n")).collect();
        load_edge_list(&text).unwrap()
    }

    #[test]
    fn sis_no_transmission_is_nonincreasing() {
        let net = star(6);
        let bts = simulate_sis(&net, 0.0, 0.3, &[0, 1, 2], 50, 4).unwrap();
        let mut prev = bts.infected_count(0);
        for t in 1..50 {
            let now = bts.infected_count(t);
            assert!(now <= prev);
            prev = now;
        }
    }

    #[test]
    fn sis_deterministic_spread_fills_graph() {
        // beta = 1, delta = 0 on a star: everyone infected by step 2.
        let net = star(5);
        let bts = simulate_sis(&net, 1.0, 0.0, &[0], 4, 0).unwrap();
        assert_eq!(bts.infected_count(1), 6);
    }

    #[test]
    fn sis_single_neighbor_infection_rate() {
        // Star center infected, beta = 0.3: each leaf's one-step infection
        // frequency estimates beta.
        let net = star(4);
        let beta = 0.3;
        let trials = 10_000;
        let mut infected = 0usize;
        for seed in 0..trials {
            let bts = simulate_sis(&net, beta, 0.0, &[0], 2, seed as u64).unwrap();
            infected += bts.states[(1, 1)] as usize;
        }
        let freq = infected as f64 / trials as f64;
        let sigma = (beta * (1.0 - beta) / trials as f64).sqrt();
        assert!(
            (freq - beta).abs() <= 3.0 * sigma,
            "one-step infection frequency {freq} vs beta {beta}"
        );
    }

    #[test]
    fn cp_no_transmission_never_infects() {
        let net = star(6);
        let bts = simulate_cp(&net, 0.0, 0.2, &[0], 40, 9).unwrap();
        for t in 0..40 {
            for leaf in 1..7 {
                assert_eq!(bts.states[(leaf, t)], 0);
            }
        }
    }

    #[test]
    fn cp_forced_choice_matches_beta() {
        // A leaf has exactly one neighbor (the infected center), so its
        // per-step infection probability is beta.
        let net = star(3);
        let beta = 0.4;
        let trials = 10_000;
        let mut infected = 0usize;
        for seed in 0..trials {
            let bts = simulate_cp(&net, beta, 0.0, &[0], 2, seed as u64).unwrap();
            infected += bts.states[(1, 1)] as usize;
        }
        let freq = infected as f64 / trials as f64;
        let sigma = (beta * (1.0 - beta) / trials as f64).sqrt();
        assert!((freq - beta).abs() <= 3.0 * sigma);
    }

    #[test]
    fn cp_halved_rate_with_one_of_two_neighbors_infected() {
        // Path 1 - 0 - 2 with only node 1 infected: node 0 picks the
        // infected neighbor half the time, so P(infect) = beta / 2.
        let net = load_edge_list("0 1\n0 2\n").unwrap();
        let beta = 0.5;
        let trials = 10_000;
        let mut infected = 0usize;
        for seed in 0..trials {
            let bts = simulate_cp(&net, beta, 0.0, &[1], 2, seed as u64).unwrap();
            infected += bts.states[(0, 1)] as usize;
        }
        let freq = infected as f64 / trials as f64;
        let expect = beta / 2.0;
        let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
        assert!((freq - expect).abs() <= 3.0 * sigma);
    }

    #[test]
    fn simulators_are_deterministic() {
        let net = star(8);
        let a = simulate_sis(&net, 0.2, 0.2, &[0, 3], 200, 123).unwrap();
        let b = simulate_sis(&net, 0.2, 0.2, &[0, 3], 200, 123).unwrap();
        assert_eq!(a, b);
        let a = simulate_cp(&net, 0.2, 0.2, &[0, 3], 200, 123).unwrap();
        let b = simulate_cp(&net, 0.2, 0.2, &[0, 3], 200, 123).unwrap();
        assert_eq!(a, b);
        assert!(a.missing.iter().all(|&m| !m));
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let net = star(3);
        assert!(simulate_sis(&net, 1.5, 0.2, &[0], 10, 0).is_err());
        assert!(simulate_cp(&net, 0.2, -0.1, &[0], 10, 0).is_err());
        assert!(simulate_sis(&net, 0.2, 0.2, &[9], 10, 0).is_err());
    }
}
