use serde::Serialize;

use super::CentralityError;
use crate::network::TradeNetwork;

pub const TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitsResult {
    pub hubs: Vec<f64>,
    pub authorities: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// HITS on the weighted adjacency matrix, both vectors L2-normalized each step.
pub fn hits(net: &TradeNetwork) -> Result<HitsResult, CentralityError> {
    let n = net.node_count();
    let links: Vec<(usize, usize, f64)> = net
        .active_edges()
        .map(|(_, e)| (e.source.0, e.target.0, e.weight))
        .collect();
    if links.is_empty() {
        return Err(CentralityError::EmptyEdgeSet);
    }
    let init = 1.0 / (n as f64).sqrt();
    let mut hubs = vec![init; n];
    let mut auth = vec![init; n];
    let mut new_hubs = vec![0.0; n];
    let mut new_auth = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        new_auth.fill(0.0);
        for &(s, t, w) in &links {
            new_auth[t] += w * hubs[s];
        }
        normalize(&mut new_auth);
        new_hubs.fill(0.0);
        for &(s, t, w) in &links {
            new_hubs[s] += w * new_auth[t];
        }
        normalize(&mut new_hubs);
        let change = l1_diff(&new_auth, &auth) + l1_diff(&new_hubs, &hubs);
        std::mem::swap(&mut auth, &mut new_auth);
        std::mem::swap(&mut hubs, &mut new_hubs);
        if change < TOLERANCE {
            converged = true;
            break;
        }
    }
    Ok(HitsResult {
        hubs,
        authorities: auth,
        iterations,
        converged,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
