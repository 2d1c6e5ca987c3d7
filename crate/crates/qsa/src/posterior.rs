//! Likelihood evaluation and quasi-Monte Carlo estimation of the
//! posterior moment integrals L_j and Z over the bounding box C₈.
//!
//! The box volume times the mean of x_j·likelihood·prior·χ_B over a
//! low-discrepancy point set estimates L_j; the same without the x_j
//! factor estimates Z.  The body's characteristic function enters as a
//! multiplicative factor rather than a rejection filter, which keeps
//! the stratification of the point set intact.  Standard errors come
//! from the spread across independently scrambled replicates.

use serde::{Deserialize, Serialize};

use crate::bloch_geometry::{bounding_box, chi_b};
use crate::error::{Error, Result};
use crate::priors::Prior;
use crate::qmc::{replicate_seeds, replicate_sums};
use crate::su_basis::{BlochVector, SQRT_3};

/// Absolute frequencies (N₁, N₂, N₃) of the three outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrequencyTriple {
    pub counts: (u32, u32, u32),
}

impl FrequencyTriple {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Self {
        Self { counts: (n1, n2, n3) }
    }

    pub fn total(&self) -> u32 {
        self.counts.0 + self.counts.1 + self.counts.2
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.counts.0, self.counts.1, self.counts.2]
    }

    /// N! / (N₁! N₂! N₃!) as a float.
    pub fn multinomial_weight(&self) -> f64 {
        fn ln_factorial(n: u32) -> f64 {
            (2..=n as u64).map(|k| (k as f64).ln()).sum()
        }
        let (n1, n2, n3) = self.counts;
        (ln_factorial(n1 + n2 + n3) - ln_factorial(n1) - ln_factorial(n2) - ln_factorial(n3))
            .exp()
            .round()
    }
}

impl std::fmt::Display for FrequencyTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.counts.0, self.counts.1, self.counts.2)
    }
}

/// Integration budget and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmcConfig {
    /// Points per replicate.
    pub n_samples: u64,
    pub replicates: u32,
    pub seed: u64,
}

impl Default for QmcConfig {
    fn default() -> Self {
        Self { n_samples: 2_000_000, replicates: 8, seed: 20_070_429 }
    }
}

impl QmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 10_000 {
            return Err(Error::InvalidConfig(format!(
                "n_samples must be at least 10000, got {}",
                self.n_samples
            )));
        }
        if self.replicates < 2 {
            return Err(Error::InvalidConfig(format!(
                "replicates must be at least 2, got {}",
                self.replicates
            )));
        }
        Ok(())
    }
}

/// Raw moment estimates with replicate-based standard errors.
///
/// `l` and `z` estimate the integrals L_j and Z up to the prior's
/// normalization constant, which cancels in the ratios `l[j]/z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub l: [f64; 8],
    pub z: f64,
    pub stderr_l: [f64; 8],
    pub stderr_z: f64,
    /// Points that fell inside the Bloch body, over all replicates.
    pub accepted: u64,
    /// Points evaluated, over all replicates.
    pub total: u64,
    pub replicates: u32,
    pub seed: u64,
}

impl MomentEstimate {
    /// The posterior-mean Bloch components L_j/Z.
    pub fn ratios(&self) -> [f64; 8] {
        std::array::from_fn(|j| self.l[j] / self.z)
    }

    /// First-order propagated standard errors of L_j/Z.
    pub fn ratio_stderr(&self) -> [f64; 8] {
        std::array::from_fn(|j| {
            let r = self.l[j] / self.z;
            (self.stderr_l[j].powi(2) + (r * self.stderr_z).powi(2)).sqrt() / self.z
        })
    }
}

/// Diagonal entries of ρ(x) as functions of the Bloch coordinates.
#[inline]
pub fn diagonal_probabilities(x: &BlochVector) -> [f64; 3] {
    let third = 1.0 / 3.0;
    let x3 = x.0[2];
    let x8s = x.0[7] / SQRT_3;
    [
        third + 0.5 * (x3 + x8s),
        third - x8s,
        third + 0.5 * (-x3 + x8s),
    ]
}

/// Π ρ_ii(x)^{N_i} with the 0⁰ = 1 convention.
///
/// The caller must have established x ∈ B₈; a diagonal entry below
/// −1e-12 then signals an internal inconsistency.
pub fn likelihood(x: &BlochVector, f: &FrequencyTriple) -> Result<f64> {
    let p = diagonal_probabilities(x);
    if p.iter().any(|v| *v < -1e-12) {
        return Err(Error::Internal(format!(
            "negative diagonal probability {p:?} inside the Bloch body"
        )));
    }
    Ok(likelihood_unchecked(&p, f))
}

/// Hot-loop likelihood on precomputed diagonals; tiny negative
/// round-off is clamped to zero.
#[inline]
fn likelihood_unchecked(p: &[f64; 3], f: &FrequencyTriple) -> f64 {
    let n = f.as_array();
    let mut w = 1.0;
    for i in 0..3 {
        if n[i] > 0 {
            w *= p[i].max(0.0).powi(n[i] as i32);
        }
    }
    w
}

/// Estimates the nine moment integrals for an arbitrary nonnegative
/// weight w(x) in place of likelihood·prior: L_j = ∫ x_j·w·χ_B and
/// Z = ∫ w·χ_B over C₈.
///
/// This is the shared core behind [`compute_moments`] and the smeared
/// measurement path.
pub fn compute_moments_weighted(
    weight: &(impl Fn(&BlochVector) -> f64 + Sync),
    cfg: &QmcConfig,
) -> Result<MomentEstimate> {
    cfg.validate()?;
    let boxx = bounding_box();
    let vol = boxx.volume();
    let n = cfg.n_samples;

    // Slots: [w, x1·w, …, x8·w, χ_B].
    let integrand = |u: &[f64]| -> [f64; 10] {
        let x = boxx.map_unit(u);
        if !chi_b(&x) {
            return [0.0; 10];
        }
        let w = weight(&x);
        let mut out = [0.0; 10];
        out[0] = w;
        for j in 0..8 {
            out[1 + j] = x.0[j] * w;
        }
        out[9] = 1.0;
        out
    };

    let mut z_reps = Vec::with_capacity(cfg.replicates as usize);
    let mut l_reps: Vec<[f64; 8]> = Vec::with_capacity(cfg.replicates as usize);
    let mut accepted = 0u64;
    for r in 0..cfg.replicates {
        let sums = replicate_sums(8, n, replicate_seeds(cfg.seed, r), &integrand);
        z_reps.push(vol * sums[0] / n as f64);
        l_reps.push(std::array::from_fn(|j| vol * sums[1 + j] / n as f64));
        accepted += sums[9] as u64;
    }

    if accepted == 0 {
        return Err(Error::EmptyBody);
    }
    let r = cfg.replicates as f64;
    let z = z_reps.iter().sum::<f64>() / r;
    if z <= 0.0 {
        return Err(Error::DegenerateEvidence);
    }
    let l: [f64; 8] =
        std::array::from_fn(|j| l_reps.iter().map(|v| v[j]).sum::<f64>() / r);
    let stderr = |vals: &dyn Fn(usize) -> f64, mean: f64| -> f64 {
        let var = (0..cfg.replicates as usize)
            .map(|i| (vals(i) - mean).powi(2))
            .sum::<f64>()
            / (r - 1.0);
        (var / r).sqrt()
    };
    let stderr_z = stderr(&|i| z_reps[i], z);
    let stderr_l: [f64; 8] = std::array::from_fn(|j| stderr(&|i| l_reps[i][j], l[j]));

    Ok(MomentEstimate {
        l,
        z,
        stderr_l,
        stderr_z,
        accepted,
        total: n * cfg.replicates as u64,
        replicates: cfg.replicates,
        seed: cfg.seed,
    })
}

/// Estimates L_j and Z for the given counts and prior.
pub fn compute_moments(
    f: &FrequencyTriple,
    prior: &Prior,
    cfg: &QmcConfig,
) -> Result<MomentEstimate> {
    let counts = *f;
    let weight = move |x: &BlochVector| {
        likelihood_unchecked(&diagonal_probabilities(x), &counts) * prior.density(x)
    };
    compute_moments_weighted(&weight, cfg)
}

/// Z(f)/Z(0,0,0): the normalized plausibility of the outcome sequence.
///
/// Both evidences use the same seed and thus the same point set, so
/// multinomial-weighted sums of these ratios over a fixed total count
/// telescope to 1 up to floating-point round-off.
pub fn evidence_ratio(f: &FrequencyTriple, prior: &Prior, cfg: &QmcConfig) -> Result<f64> {
    let num = compute_moments(f, prior, cfg)?;
    let den = compute_moments(&FrequencyTriple::new(0, 0, 0), prior, cfg)?;
    Ok(num.z / den.z)
}
