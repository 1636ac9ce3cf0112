//! Evolutionary games on networks with Fermi imitation updates.

use ndarray::{Array1, Array2, ArrayView1};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{EgRecord, Game, COOPERATE, DEFECT};
use crate::error::{Error, Result};
use crate::graphgen::Network;

/// Round payoffs: g_i = sum_j a_ij * P(s_i, s_j) over i's in-neighbors.
pub fn eg_payoffs(net: &Network, game: Game, strategies: ArrayView1<u8>) -> Array1<f64> {
    let n = net.n();
    let adj = net.adj();
    let mut payoffs = Array1::zeros(n);
    for i in 0..n {
        let si = strategies[i];
        let mut g = 0.0;
        for j in 0..n {
            let a = adj[(i, j)];
            if a != 0.0 {
                g += a * game.payoff(si, strategies[j]);
            }
        }
        payoffs[i] = g;
    }
    payoffs
}

/// Play `reps` independent repetitions of `rounds` rounds each, recording
/// strategies and payoffs before every update. Strategies update
/// synchronously: node i imitates a uniformly random neighbor j with
/// probability 1 / (1 + exp((g_i - g_j) / kappa)).
pub fn simulate_eg(
    net: &Network,
    game: Game,
    rounds: usize,
    reps: usize,
    kappa: f64,
    seed: u64,
) -> Result<EgRecord> {
    game.validate()?;
    if rounds < 1 || reps < 1 {
        return Err(Error::InvalidParameter(
            "rounds and reps must be at least 1".into(),
        ));
    }
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Fermi temperature kappa must be positive, got {kappa}"
        )));
    }
    let n = net.n();
    let m = rounds * reps;
    let mut strategies = Array2::zeros((n, m));
    let mut payoffs = Array2::zeros((n, m));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| net.in_neighbors(i)).collect();

    for rep in 0..reps {
        let mut s: Vec<u8> = (0..n)
            .map(|_| if rng.random::<bool>() { COOPERATE } else { DEFECT })
            .collect();
        for round in 0..rounds {
            let col = rep * rounds + round;
            let g = eg_payoffs(net, game, ArrayView1::from(&s));
            for i in 0..n {
                strategies[(i, col)] = s[i];
                payoffs[(i, col)] = g[i];
            }
            // Synchronous Fermi imitation of one random neighbor.
            let mut next = s.clone();
            for i in 0..n {
                if neighbors[i].is_empty() {
                    continue;
                }
                let j = neighbors[i][rng.random_range(0..neighbors[i].len())];
                let p = 1.0 / (1.0 + ((g[i] - g[j]) / kappa).exp());
                if rng.random::<f64>() < p {
                    next[i] = s[j];
                }
            }
            s = next;
        }
    }

    let record = EgRecord {
        strategies,
        payoffs,
        game,
    };
    record.validate()?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{gen_er, load_edge_list};

    #[test]
    fn defector_among_cooperators_collects_temptation() {
        // Star with 4 leaves; center defects against cooperating leaves.
        let net = load_edge_list("0 1\n0 2\n0 3\n0 4\n").unwrap();
        let s = ndarray::array![DEFECT, COOPERATE, COOPERATE, COOPERATE, COOPERATE];
        let g = eg_payoffs(&net, Game::Pdg { b: 1.2 }, s.view());
        assert!((g[0] - 1.2 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn isolated_node_earns_nothing() {
        let mut adj = Array2::zeros((3, 3));
        adj[(0, 1)] = 1.0;
        adj[(1, 0)] = 1.0;
        let net = Network::from_adjacency(adj, false).unwrap();
        let record = simulate_eg(&net, Game::Pdg { b: 1.2 }, 10, 2, 0.1, 5).unwrap();
        for t in 0..record.n_samples() {
            assert_eq!(record.payoffs[(2, t)], 0.0);
        }
    }

    #[test]
    fn path_payoffs_match_hand_evaluation() {
        // 0 - 1 - 2 with strategies (C, D, C), b = 1.5:
        // node 1 defects against two cooperators -> 3.0; ends earn 0.
        let net = load_edge_list("0 1\n1 2\n").unwrap();
        let s = ndarray::array![COOPERATE, DEFECT, COOPERATE];
        let g = eg_payoffs(&net, Game::Pdg { b: 1.5 }, s.view());
        assert_eq!(g.to_vec(), vec![0.0, 3.0, 0.0]);
    }

    #[test]
    fn recorded_payoffs_recomputable_from_strategies() {
        let net = gen_er(12, 0.3, false, 2).unwrap();
        let game = Game::Pdg { b: 1.2 };
        let record = simulate_eg(&net, game, 10, 3, 0.1, 9).unwrap();
        for t in 0..record.n_samples() {
            let g = eg_payoffs(&net, game, record.strategies.column(t));
            for i in 0..net.n() {
                assert_eq!(record.payoffs[(i, t)], g[i]);
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let net = gen_er(10, 0.4, false, 1).unwrap();
        let a = simulate_eg(&net, Game::Sg { r: 0.3 }, 10, 6, 0.1, 77).unwrap();
        let b = simulate_eg(&net, Game::Sg { r: 0.3 }, 10, 6, 0.1, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_degenerate_games() {
        let net = gen_er(5, 0.5, false, 0).unwrap();
        assert!(simulate_eg(&net, Game::Pdg { b: 1.0 }, 5, 1, 0.1, 0).is_err());
        assert!(simulate_eg(&net, Game::Pdg { b: 1.2 }, 0, 1, 0.1, 0).is_err());
    }
}
