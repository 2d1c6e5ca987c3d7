//! Symmetry transformations of the Bloch body that relate moment
//! integrals of permuted count triples.
//!
//! The 1↔3 level swap negates x₃ and fixes x₈ for both priors; the
//! cyclic level permutation rotates the (x₃, x₈) plane by 2π/3 but maps
//! the Gaussian-like prior's center elsewhere, so it is valid for the
//! constant prior only.  Six of the eight components vanish identically
//! for every diagonal measurement record.

use crate::error::{Error, Result};
use crate::posterior::{FrequencyTriple, MomentEstimate};
use crate::priors::Prior;
use crate::su_basis::SQRT_3;

/// One generator of the count-permutation action on moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleTransform {
    /// Levels 1 and 3 exchanged: (N₁,N₂,N₃) → (N₃,N₂,N₁), valid for
    /// both priors.
    Swap13,
    /// Cyclic shift (N₁,N₂,N₃) → (N₂,N₃,N₁), valid for the constant
    /// prior only.
    Cycle,
}

impl TripleTransform {
    pub fn applies_to(&self, prior: &Prior) -> bool {
        match self {
            Self::Swap13 => true,
            Self::Cycle => prior.is_constant(),
        }
    }

    fn apply_counts(&self, f: FrequencyTriple) -> FrequencyTriple {
        let (n1, n2, n3) = f.counts;
        match self {
            Self::Swap13 => FrequencyTriple::new(n3, n2, n1),
            Self::Cycle => FrequencyTriple::new(n2, n3, n1),
        }
    }
}

/// Indices (1-based) of the Bloch components that vanish exactly for
/// the given counts and prior.
///
/// Components 1, 2, 4, 5, 6, 7 vanish for every diagonal record; x₃
/// vanishes additionally when N₁ = N₃; for the constant prior and
/// counts (n,n,n), x₈ vanishes as well.
pub fn vanishing_components(f: &FrequencyTriple, prior: &Prior) -> Vec<usize> {
    let mut v = vec![1, 2, 4, 5, 6, 7];
    let (n1, n2, n3) = f.counts;
    if n1 == n3 {
        v.insert(2, 3);
        if n1 == n2 && prior.is_constant() {
            v.push(8);
        }
    }
    v.sort_unstable();
    v
}

/// Moments of (N₃,N₂,N₁) from those of (N₁,N₂,N₃): L₃ negated, L₈ and
/// Z unchanged, standard errors carried over.
pub fn swap13_relations(m: &MomentEstimate) -> MomentEstimate {
    let mut out = *m;
    out.l[2] = -m.l[2];
    out
}

/// Moments of (N₂,N₃,N₁) from those of (N₁,N₂,N₃), constant prior
/// only: the (L₃, L₈) pair rotates by 2π/3, Z is unchanged.
pub fn cycle_relations(m: &MomentEstimate, prior: &Prior) -> Result<MomentEstimate> {
    if !prior.is_constant() {
        return Err(Error::SymmetryNotApplicable(
            "the cyclic level permutation preserves only the constant prior".into(),
        ));
    }
    let mut out = *m;
    let (l3, l8) = (m.l[2], m.l[7]);
    out.l[2] = -0.5 * l3 - (SQRT_3 / 2.0) * l8;
    out.l[7] = (SQRT_3 / 2.0) * l3 - 0.5 * l8;
    let (s3, s8) = (m.stderr_l[2], m.stderr_l[7]);
    out.stderr_l[2] = ((0.5 * s3).powi(2) + (SQRT_3 / 2.0 * s8).powi(2)).sqrt();
    out.stderr_l[7] = ((SQRT_3 / 2.0 * s3).powi(2) + (0.5 * s8).powi(2)).sqrt();
    out
        .l
        .iter()
        .all(|v| v.is_finite())
        .then_some(out)
        .ok_or_else(|| Error::Internal("non-finite moments after rotation".into()))
}

/// Applies a transform's moment relations.
pub fn apply_transform(
    t: TripleTransform,
    m: &MomentEstimate,
    prior: &Prior,
) -> Result<MomentEstimate> {
    match t {
        TripleTransform::Swap13 => Ok(swap13_relations(m)),
        TripleTransform::Cycle => cycle_relations(m, prior),
    }
}

/// The canonical representative of a triple's symmetry orbit, together
/// with the transform sequence that maps the representative's moments
/// back to those of `f`.
///
/// Constant prior: representative with N₂ ≥ N₁ ≥ N₃ (full S₃ orbit).
/// Gaussian-like prior: only Swap13 is available; representative has
/// N₁ ≥ N₃.
pub fn canonical_triple(
    f: &FrequencyTriple,
    prior: &Prior,
) -> (FrequencyTriple, Vec<TripleTransform>) {
    use TripleTransform::{Cycle, Swap13};
    if prior.is_constant() {
        // Search words over the generators, shortest first, for the one
        // whose action on the candidate representative yields f.
        let words: [&[TripleTransform]; 6] = [
            &[],
            &[Swap13],
            &[Cycle],
            &[Cycle, Cycle],
            &[Cycle, Swap13],
            &[Cycle, Cycle, Swap13],
        ];
        let mut arr = f.as_array();
        arr.sort_unstable();
        let canonical = FrequencyTriple::new(arr[1], arr[2], arr[0]);
        for word in words {
            let mut g = canonical;
            for t in word {
                g = t.apply_counts(g);
            }
            if g == *f {
                return (canonical, word.to_vec());
            }
        }
        unreachable!("the six words exhaust the S₃ orbit");
    } else {
        let (n1, n2, n3) = f.counts;
        if n1 >= n3 {
            (*f, vec![])
        } else {
            (FrequencyTriple::new(n3, n2, n1), vec![Swap13])
        }
    }
}

/// Reconstructs the moments of `f` from the moments of its canonical
/// representative.
pub fn reconstruct_moments(
    canonical_moments: &MomentEstimate,
    transforms: &[TripleTransform],
    prior: &Prior,
) -> Result<MomentEstimate> {
    let mut m = *canonical_moments;
    for t in transforms {
        m = apply_transform(*t, &m, prior)?;
    }
    Ok(m)
}
