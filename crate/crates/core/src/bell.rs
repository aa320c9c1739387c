use crate::error::SystemError;
use crate::system::System;

/// CHSH success probability (1/4)·Σ_{x⊕y = u·v} P(x,y|u,v) of a bipartite
/// binary system: the chance of winning the game "outputs must differ
/// exactly when both inputs are 1" under uniform inputs. Local systems
/// reach at most 3/4; the non-signalling maximum is 1.
pub fn chsh_value(sys: &System) -> Result<f64, SystemError> {
    let s = sys.scenario();
    if !s.is_bipartite_binary() {
        return Err(s.shape_error("bipartite binary scenario [2,2] → [2,2]"));
    }
    let mut sum = 0.0;
    for u in 0..2 {
        for v in 0..2 {
            for x in 0..2 {
                let y = x ^ (u & v);
                sum += sys.get(&[u, v], &[x, y]);
            }
        }
    }
    Ok(sum / 4.0)
}

/// Chained correlation value over N settings per side: with inputs read
/// 1-based, the 2N uniformly weighted constraints ask for equal outputs on
/// the chain pairs (u,u) and (u,u+1) for u = 1..N, except the closing pair
/// (N,1) which asks for different outputs. Local systems reach at most
/// 1 − 1/(2N); the chain tightens as N grows.
pub fn braunstein_caves_value(sys: &System, n_settings: usize) -> Result<f64, SystemError> {
    let s = sys.scenario();
    let want = s.parties() == 2
        && s.input_sizes() == [n_settings, n_settings]
        && s.output_sizes() == [2, 2];
    if n_settings < 2 || !want {
        return Err(s.shape_error("bipartite scenario [N,N] → [2,2] with N ≥ 2"));
    }
    let mut sum = 0.0;
    for u in 0..n_settings {
        // pairs (u, u) and (u, u+1), skipping the wrap which is handled
        // separately with flipped outputs
        for v in [u, u + 1] {
            if v >= n_settings {
                continue;
            }
            for x in 0..2 {
                sum += sys.get(&[u, v], &[x, x]);
            }
        }
    }
    for x in 0..2 {
        sum += sys.get(&[n_settings - 1, 0], &[x, 1 - x]);
    }
    Ok(sum / (2 * n_settings) as f64)
}
