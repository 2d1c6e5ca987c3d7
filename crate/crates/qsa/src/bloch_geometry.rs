//! Geometry of the qutrit Bloch body B₈: the ball and cubic membership
//! inequalities, the bounding orthotope C₈, the pure-state
//! parametrization of its extreme points, and planar sections through
//! the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su_basis::{rho_from_bloch, BlochVector, SQRT_3};

/// Axis-aligned box in R^8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orthotope8 {
    pub lower: [f64; 8],
    pub upper: [f64; 8],
}

impl Orthotope8 {
    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(self.upper.iter())
            .map(|(l, u)| u - l)
            .product()
    }

    pub fn contains(&self, x: &BlochVector) -> bool {
        x.0.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    /// Affine map of a point of the unit cube into the box.
    #[inline]
    pub fn map_unit(&self, u: &[f64]) -> BlochVector {
        debug_assert!(u.len() >= 8);
        let mut x = [0.0; 8];
        for j in 0..8 {
            x[j] = self.lower[j] + u[j] * (self.upper[j] - self.lower[j]);
        }
        BlochVector(x)
    }
}

/// The smallest box containing B₈: [−1,1]⁷ × [−2/√3, 1/√3].
pub fn bounding_box() -> Orthotope8 {
    let mut lower = [-1.0; 8];
    let mut upper = [1.0; 8];
    lower[7] = -2.0 / SQRT_3;
    upper[7] = 1.0 / SQRT_3;
    Orthotope8 { lower, upper }
}

/// Round-off allowance on the membership inequalities: pure states sit
/// exactly on both boundaries, and evaluating them in floating point
/// overshoots by a few ulps (e.g. (−2/√3)² > 4/3 in f64).
const BOUNDARY_TOL: f64 = 1e-12;

/// First membership inequality: |x|² ≤ 4/3.
#[inline]
pub fn ball_condition(x: &BlochVector) -> bool {
    x.norm_sq() <= 4.0 / 3.0 + BOUNDARY_TOL
}

/// Left-hand side of the second membership inequality; membership
/// requires a nonnegative value.
///
/// The polynomial equals 216·det ρ(x) and was re-derived symbolically
/// for this crate's component sign convention (x₂ = 2 Im ρ₂₁ and so
/// on); the signs of the x₁x₅x₇ and x₂x₄x₇ terms differ from texts
/// that take the imaginary components with the opposite sign.
#[inline]
pub fn cubic_condition_value(x: &BlochVector) -> f64 {
    let [x1, x2, x3, x4, x5, x6, x7, x8] = x.0;
    let n2 = x.norm_sq();
    8.0 - 18.0 * n2
        + 27.0 * x3 * (x1 * x1 + x2 * x2 - x6 * x6 - x7 * x7)
        - 6.0 * SQRT_3 * x8 * x8 * x8
        + 9.0 * SQRT_3
            * x8
            * (2.0 * (x3 * x3 + x4 * x4 + x5 * x5) - (x1 * x1 + x2 * x2 + x6 * x6 + x7 * x7))
        + 54.0 * (x1 * x4 * x6 + x1 * x5 * x7 - x2 * x4 * x7 + x2 * x5 * x6)
}

/// Characteristic function of B₈ (non-strict inequalities; the boundary
/// has measure zero).
#[inline]
pub fn chi_b(x: &BlochVector) -> bool {
    ball_condition(x) && cubic_condition_value(x) >= -BOUNDARY_TOL
}

/// Independent positivity oracle: smallest eigenvalue of ρ(x) ≥ −tol.
pub fn chi_eigen_oracle(x: &BlochVector, tol: f64) -> bool {
    rho_from_bloch(x).min_eigenvalue() >= -tol
}

/// Parameters of a generic ray a|1⟩ + e^{−iβ}b|2⟩ + e^{−iγ}c|3⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PureStateParams {
    pub fn new(a: f64, b: f64, c: f64, beta: f64, gamma: f64) -> Result<Self> {
        if a < 0.0 || b < 0.0 || c < 0.0 {
            return Err(Error::InvalidParams("amplitudes must be nonnegative".into()));
        }
        if !(0.0..=std::f64::consts::TAU + 1e-12).contains(&beta)
            || !(0.0..=std::f64::consts::TAU + 1e-12).contains(&gamma)
        {
            return Err(Error::InvalidParams("phases must lie in [0, 2π]".into()));
        }
        if (a * a + b * b + c * c - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(
                "amplitudes must satisfy a² + b² + c² = 1".into(),
            ));
        }
        Ok(Self { a, b, c, beta, gamma })
    }
}

/// Bloch vector of the pure state |φ⟩⟨φ|, obtained by reading the
/// components off tr(λⱼ|φ⟩⟨φ|) for the ray
/// a|1⟩ + e^{−iβ}b|2⟩ + e^{−iγ}c|3⟩:
///
/// (2ab cosβ, −2ab sinβ, a²−c², 2ac cosγ, −2ac sinγ,
///  2bc cos(β−γ), 2bc sin(β−γ), √3(1/3 − b²)).
///
/// The signs are fixed by rank-one consistency with
/// [`rho_from_bloch`]: the result must reproduce the projector exactly,
/// which also places it on both membership boundaries.
pub fn pure_state_bloch(p: &PureStateParams) -> BlochVector {
    let PureStateParams { a, b, c, beta, gamma } = *p;
    BlochVector([
        2.0 * a * b * beta.cos(),
        -2.0 * a * b * beta.sin(),
        a * a - c * c,
        2.0 * a * c * gamma.cos(),
        -2.0 * a * c * gamma.sin(),
        2.0 * b * c * (beta - gamma).cos(),
        2.0 * b * c * (beta - gamma).sin(),
        SQRT_3 * (1.0 / 3.0 - b * b),
    ])
}

/// Boundary polyline of the 2-D section of B₈ through the origin along
/// two coordinate axes (1-based indices).  Each of `resolution` rays from
/// the origin is bisected 60 times; B₈ is convex and contains the
/// origin, so every ray crosses the boundary exactly once.
pub fn planar_section(axes: (usize, usize), resolution: usize) -> Result<Vec<[f64; 2]>> {
    let (i, j) = axes;
    if i == j || !(1..=8).contains(&i) || !(1..=8).contains(&j) {
        return Err(Error::InvalidPlane(i, j));
    }
    if resolution < 8 {
        return Err(Error::InvalidParams(format!(
            "resolution must be at least 8, got {resolution}"
        )));
    }
    let (ai, aj) = (i - 1, j - 1);
    let mut out = Vec::with_capacity(resolution);
    for k in 0..resolution {
        let theta = std::f64::consts::TAU * k as f64 / resolution as f64;
        let (dx, dy) = (theta.cos(), theta.sin());
        let probe = |t: f64| {
            let mut x = [0.0; 8];
            x[ai] = t * dx;
            x[aj] = t * dy;
            chi_b(&BlochVector(x))
        };
        // |x| ≤ 2/√3 on B₈, so 1.2 is already outside.
        let (mut lo, mut hi) = (0.0f64, 1.2f64);
        debug_assert!(!probe(hi));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if probe(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push([lo * dx, lo * dy]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su_basis::bloch_from_rho;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn bv(v: [f64; 8]) -> BlochVector {
        BlochVector(v)
    }

    #[test]
    fn ball_examples() {
        assert!(ball_condition(&BlochVector::zero()));
        let eq = bv([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / SQRT_3]);
        assert!(ball_condition(&eq));
        assert_relative_eq!(eq.norm_sq(), 4.0 / 3.0, epsilon = 1e-15);
        assert!(!ball_condition(&bv([2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])));
    }

    #[test]
    fn cubic_examples() {
        assert_relative_eq!(cubic_condition_value(&BlochVector::zero()), 8.0);
        // Inside the ball but not positive semidefinite.
        let x = bv([0.0, 0.0, 2.0 / SQRT_3, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(ball_condition(&x));
        assert_relative_eq!(cubic_condition_value(&x), -16.0, epsilon = 1e-12);
        assert!(!chi_b(&x));
        assert!(!chi_eigen_oracle(&x, 1e-9));
        // Pure state on the boundary.
        let p = bv([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / SQRT_3]);
        assert!(cubic_condition_value(&p).abs() < 1e-12);
    }

    #[test]
    fn cubic_is_scaled_determinant() {
        // The membership polynomial must equal 216·det ρ(x) identically.
        let samples = [
            [0.1, 0.2, -0.1, 0.15, 0.05, -0.2, 0.12, 0.08],
            [0.3, -0.1, 0.2, -0.25, 0.18, 0.07, -0.15, -0.12],
            [0.05, 0.3, 0.1, 0.2, -0.3, 0.25, 0.1, 0.2],
            [-0.4, 0.33, 0.21, 0.12, 0.44, -0.17, -0.28, -0.31],
        ];
        for v in samples {
            let x = bv(v);
            let det = rho_from_bloch(&x).matrix().determinant();
            assert_relative_eq!(cubic_condition_value(&x), 216.0 * det.re, epsilon = 1e-12);
            assert!(det.im.abs() < 1e-15);
        }
    }

    #[test]
    fn chi_examples() {
        assert!(chi_b(&BlochVector::zero()));
        assert!(chi_eigen_oracle(&BlochVector::zero(), 0.0));
        let xhat = bv([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0 / SQRT_3]);
        assert!(chi_b(&xhat));
    }

    #[test]
    fn box_is_exact() {
        let b = bounding_box();
        for j in 0..7 {
            assert_eq!(b.lower[j], -1.0);
            assert_eq!(b.upper[j], 1.0);
        }
        assert_relative_eq!(b.lower[7], -2.0 / SQRT_3, epsilon = 1e-15);
        assert_relative_eq!(b.upper[7], 1.0 / SQRT_3, epsilon = 1e-15);
        assert_relative_eq!(b.volume(), 128.0 * SQRT_3, epsilon = 1e-12);
    }

    #[test]
    fn pure_state_examples() {
        let p = PureStateParams::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let x = pure_state_bloch(&p);
        let want = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0 / SQRT_3];
        for j in 0..8 {
            assert_relative_eq!(x.0[j], want[j], epsilon = 1e-15);
        }
        // |2> maps to the box corner -2/√3, inside C₈.
        let p = PureStateParams::new(0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let x = pure_state_bloch(&p);
        assert_relative_eq!(x.0[7], -2.0 / SQRT_3, epsilon = 1e-15);
        assert!(bounding_box().contains(&x));
        // The x1 = 1 box face is attained.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = PureStateParams::new(s, s, 0.0, 0.0, 0.0).unwrap();
        let x = pure_state_bloch(&p);
        assert_relative_eq!(x.0[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(x.norm_sq(), 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_state_matches_projector() {
        // Oracle: build |φ><φ| directly and read the Bloch vector off it.
        let cases = [
            (0.6, 0.48, 0.64, 1.1, 5.2),
            (0.2, 0.5, (1.0f64 - 0.04 - 0.25).sqrt(), 0.0, 2.0),
            (0.8, 0.6, 0.0, 3.0, 0.4),
        ];
        for (a, b, c0, beta, gamma) in cases {
            let c0 = if (a * a + b * b + c0 * c0 - 1.0).abs() > 1e-12 {
                (1.0f64 - a * a - b * b).sqrt()
            } else {
                c0
            };
            let p = PureStateParams::new(a, b, c0, beta, gamma).unwrap();
            let amp = [
                Complex64::new(a, 0.0),
                Complex64::from_polar(b, -beta),
                Complex64::from_polar(c0, -gamma),
            ];
            let mut proj = Matrix3::zeros();
            for r in 0..3 {
                for s in 0..3 {
                    proj[(r, s)] = amp[r] * amp[s].conj();
                }
            }
            let want = bloch_from_rho(&proj).unwrap();
            let got = pure_state_bloch(&p);
            for j in 0..8 {
                assert_relative_eq!(got.0[j], want.0[j], epsilon = 1e-12);
            }
            assert_relative_eq!(got.norm_sq(), 4.0 / 3.0, epsilon = 1e-9);
            assert!(cubic_condition_value(&got).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_pure_params_rejected() {
        assert!(PureStateParams::new(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(PureStateParams::new(-1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn section_x3_x8_is_the_simplex_triangle() {
        let pts = planar_section((3, 8), 96).unwrap();
        // Every boundary point of the diagonal section must have one
        // vanishing diagonal entry and the others nonnegative.
        for [x3, x8] in &pts {
            let p1 = 1.0 / 3.0 + 0.5 * (x3 + x8 / SQRT_3);
            let p2 = 1.0 / 3.0 - x8 / SQRT_3;
            let p3 = 1.0 / 3.0 + 0.5 * (-x3 + x8 / SQRT_3);
            let min = p1.min(p2).min(p3);
            assert!(min.abs() < 1e-9, "({x3}, {x8}) min diag {min}");
            assert!(p1 > -1e-9 && p2 > -1e-9 && p3 > -1e-9);
        }
        // The three vertices are reached along their ray directions.
        for (vx, vy) in [(1.0, 1.0 / SQRT_3), (0.0, -2.0 / SQRT_3), (-1.0, 1.0 / SQRT_3)] {
            let best = pts
                .iter()
                .map(|[x, y]| ((x - vx).powi(2) + (y - vy).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 0.1, "vertex ({vx}, {vy}) missed by {best}");
        }
    }

    #[test]
    fn section_x1_x2_on_cubic_boundary() {
        let pts = planar_section((1, 2), 64).unwrap();
        for [x1, x2] in &pts {
            let x = bv([*x1, *x2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
            assert!(cubic_condition_value(&x).abs() < 1e-6);
        }
    }

    #[test]
    fn section_x3_x4_contains_origin_within_box() {
        let pts = planar_section((3, 4), 32).unwrap();
        for [a, b] in &pts {
            assert!(a.abs() <= 1.0 + 1e-9 && b.abs() <= 1.0 + 1e-9);
            assert!((a * a + b * b).sqrt() > 0.1);
        }
    }

    #[test]
    fn section_invalid_plane() {
        assert!(planar_section((3, 3), 64).is_err());
        assert!(planar_section((0, 8), 64).is_err());
        assert!(planar_section((3, 9), 64).is_err());
        assert!(planar_section((3, 8), 4).is_err());
    }

    proptest! {
        #[test]
        fn membership_implies_box(v in proptest::array::uniform8(-1.2f64..1.2)) {
            let x = bv(v);
            if chi_b(&x) {
                prop_assert!(bounding_box().contains(&x));
            }
        }

        #[test]
        fn convexity_of_membership(
            a in proptest::array::uniform8(-0.7f64..0.7),
            b in proptest::array::uniform8(-0.7f64..0.7),
            t in 0.0f64..1.0,
        ) {
            let (xa, xb) = (bv(a), bv(b));
            if chi_b(&xa) && chi_b(&xb) {
                let mut m = [0.0; 8];
                for j in 0..8 {
                    m[j] = t * a[j] + (1.0 - t) * b[j];
                }
                // Strict interior margin absorbs rounding on the boundary.
                prop_assert!(cubic_condition_value(&bv(m)) >= -1e-9);
                prop_assert!(bv(m).norm_sq() <= 4.0 / 3.0 + 1e-12);
            }
        }

        #[test]
        fn pure_states_are_extreme(
            u in 0.0f64..1.0,
            w in 0.0f64..1.0,
            beta in 0.0f64..std::f64::consts::TAU,
            gamma in 0.0f64..std::f64::consts::TAU,
        ) {
            // Uniform-ish sweep of the simplex of squared amplitudes.
            let (q1, q2) = if u + w > 1.0 { (1.0 - u, 1.0 - w) } else { (u, w) };
            let q3 = 1.0 - q1 - q2;
            let p = PureStateParams::new(q1.sqrt(), q2.sqrt(), q3.sqrt(), beta, gamma).unwrap();
            let x = pure_state_bloch(&p);
            prop_assert!((x.norm_sq() - 4.0 / 3.0).abs() < 1e-9);
            prop_assert!(cubic_condition_value(&x).abs() < 1e-9);
            prop_assert!(chi_eigen_oracle(&x, 1e-9));
            prop_assert!(bounding_box().contains(&x));
        }
    }
}
