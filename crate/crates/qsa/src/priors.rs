//! Prior densities on Bloch coordinates and their 2-D marginals.
//!
//! Densities are handled unnormalized throughout; normalization
//! constants cancel in the posterior-mean ratios.  The characteristic
//! function of the Bloch body is *not* part of the density — the
//! integrator applies it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch_geometry::{bounding_box, chi_b};
use crate::error::{Error, Result};
use crate::qmc::{splitmix64, ScrambledSobol, MAX_DIM};
use crate::su_basis::{BlochVector, SQRT_3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Prior {
    /// Constant density on the Bloch body (the canonical volume element).
    Constant,
    /// exp(−|x − center|² / (2 s²)) with breadth s, spherically symmetric
    /// about a state of the Bloch body.
    GaussianLike { center: BlochVector, breadth: f64 },
}

impl Prior {
    pub fn gaussian_like(center: BlochVector, breadth: f64) -> Result<Self> {
        if !(breadth > 0.0) {
            return Err(Error::InvalidParams("breadth must be positive".into()));
        }
        if !chi_b(&center) {
            return Err(Error::InvalidParams(
                "prior center must lie in the Bloch body".into(),
            ));
        }
        Ok(Self::GaussianLike { center, breadth })
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant)
    }

    /// Unnormalized density at a point of R⁸.
    #[inline]
    pub fn density(&self, x: &BlochVector) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::GaussianLike { center, breadth } => {
                (-x.distance_sq(center) / (2.0 * breadth * breadth)).exp()
            }
        }
    }
}

/// The Gaussian-like prior of the study: centred on |2⟩⟨2| with
/// breadth 1/(2√2).
pub fn default_gaussian_prior() -> Prior {
    let center = BlochVector([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0 / SQRT_3]);
    Prior::gaussian_like(center, 0.5 / std::f64::consts::SQRT_2).expect("valid by construction")
}

/// Marginal density of two Bloch coordinates, estimated on an n×n grid
/// over their box ranges by integrating g·χ_B over the remaining six
/// coordinates with a scrambled low-discrepancy rule per cell.
///
/// The grid is normalized so that (sum of cells) × (cell area) = 1.
/// Cells are independent and deterministically seeded by (seed, i, j),
/// so the result does not depend on evaluation order.
pub fn marginal_density_grid(
    prior: &Prior,
    axes: (usize, usize),
    grid: usize,
    samples_per_cell: u64,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let (i, j) = axes;
    if i == j || !(1..=8).contains(&i) || !(1..=8).contains(&j) {
        return Err(Error::InvalidPlane(i, j));
    }
    if grid < 16 {
        return Err(Error::InvalidParams(format!(
            "grid resolution must be at least 16, got {grid}"
        )));
    }
    if samples_per_cell == 0 {
        return Err(Error::InvalidParams("samples_per_cell must be positive".into()));
    }
    let (ai, aj) = (i - 1, j - 1);
    let boxx = bounding_box();
    let rest: Vec<usize> = (0..8).filter(|d| *d != ai && *d != aj).collect();
    let sub_volume: f64 = rest
        .iter()
        .map(|&d| boxx.upper[d] - boxx.lower[d])
        .product();
    let step_i = (boxx.upper[ai] - boxx.lower[ai]) / grid as f64;
    let step_j = (boxx.upper[aj] - boxx.lower[aj]) / grid as f64;

    let mut rows: Vec<Vec<f64>> = (0..grid)
        .into_par_iter()
        .map(|gi| {
            let vi = boxx.lower[ai] + (gi as f64 + 0.5) * step_i;
            (0..grid)
                .map(|gj| {
                    let vj = boxx.lower[aj] + (gj as f64 + 0.5) * step_j;
                    let mut state = seed
                        ^ (gi as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
                        ^ (gj as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
                    let mut seeds = [0u32; MAX_DIM];
                    for s in &mut seeds {
                        *s = splitmix64(&mut state) as u32;
                    }
                    let mut stream = ScrambledSobol::new(6, seeds);
                    let mut u = [0.0f64; 6];
                    let mut sum = 0.0;
                    for _ in 0..samples_per_cell {
                        stream.next_point(&mut u);
                        let mut x = [0.0; 8];
                        x[ai] = vi;
                        x[aj] = vj;
                        for (k, &d) in rest.iter().enumerate() {
                            x[d] = boxx.lower[d] + u[k] * (boxx.upper[d] - boxx.lower[d]);
                        }
                        let x = BlochVector(x);
                        if chi_b(&x) {
                            sum += prior.density(&x);
                        }
                    }
                    sub_volume * sum / samples_per_cell as f64
                })
                .collect()
        })
        .collect();

    let total: f64 = rows.iter().flatten().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateMarginal);
    }
    let norm = total * step_i * step_j;
    for row in &mut rows {
        for v in row {
            *v /= norm;
        }
    }
    Ok(rows)
}
