//! Exact Normal-Wishart posterior simulation.
//!
//! Σ is drawn by the Bartlett construction of a Wishart on the inverted
//! scale, B|Σ as a matrix normal. Each draw consumes its own counter-keyed
//! RNG stream, so parallel execution cannot reorder randomness.

use super::VarxPosterior;
use crate::error::{Error, Result};
use crate::linalg::cholesky_ridge;
use crate::rng::stream_rng;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, StandardNormal};
use rayon::prelude::*;

/// One joint draw from the coefficient/covariance posterior.
#[derive(Debug, Clone)]
pub struct PosteriorDraw {
    /// k×n coefficients.
    pub b: DMatrix<f64>,
    /// n×n innovation covariance.
    pub sigma: DMatrix<f64>,
}

/// Draws `n_draws` i.i.d. (B, Σ) pairs. Draw `i` always uses RNG stream `i`
/// of `seed`, making the output independent of thread count and
/// bit-identical across runs.
pub fn sample_posterior(
    moments: &VarxPosterior,
    n_draws: usize,
    seed: u64,
) -> Result<Vec<PosteriorDraw>> {
    let n = moments.n;
    if moments.alpha_hat <= (n - 1) as f64 {
        return Err(Error::InvalidDof {
            dof: moments.alpha_hat,
            min: (n - 1) as f64,
        });
    }
    if n_draws == 0 {
        return Err(Error::InvalidSpec("need at least one posterior draw".into()));
    }
    let (s_chol, _) = cholesky_ridge(&moments.s_hat, "posterior scale")?;
    let l_s = s_chol.l();
    let draws: Vec<PosteriorDraw> = (0..n_draws)
        .into_par_iter()
        .map(|i| one_draw(moments, &l_s, seed, i as u64))
        .collect();
    Ok(draws)
}

fn one_draw(
    moments: &VarxPosterior,
    l_s: &DMatrix<f64>,
    seed: u64,
    stream: u64,
) -> PosteriorDraw {
    let mut rng = stream_rng(seed, stream);
    let n = moments.n;
    let k = moments.b_hat.nrows();

    // Bartlett factor A of a Wishart(I, α̂): chi-square diagonal with
    // decreasing degrees of freedom, standard-normal subdiagonal.
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let chi = ChiSquared::new(moments.alpha_hat - i as f64)
            .expect("degrees of freedom checked positive");
        a[(i, i)] = rng.sample::<f64, _>(chi).sqrt();
        for j in 0..i {
            a[(i, j)] = rng.sample(StandardNormal);
        }
    }
    // With W = L_inv·A·Aᵀ·L_invᵀ ~ Wishart(Ŝ⁻¹, α̂), the inverse draw is
    // Σ = W⁻¹ = G·Gᵀ for G = L_S·A⁻ᵀ, solved triangularly.
    let a_inv = a
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .expect("Bartlett factor has strictly positive diagonal");
    let g = l_s * a_inv.transpose();
    let sigma = &g * g.transpose();

    // B = B̂ + F·Z·Gᵀ with F·Fᵀ = Ω̂ gives the matrix normal MN(B̂, Ω̂, Σ).
    let mut z = DMatrix::zeros(k, n);
    for c in 0..n {
        for r in 0..k {
            z[(r, c)] = rng.sample(StandardNormal);
        }
    }
    let b = &moments.b_hat + &moments.omega_factor * z * g.transpose();
    PosteriorDraw { b, sigma }
}
