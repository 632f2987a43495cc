//! Brute-force validators: sampled polar membership, sampled shadows of
//! ambient ellipsoids, and direct quadrature of the Wigner integral. They
//! share no code path with the closed forms they check.

use num_complex::Complex;
use rayon::prelude::*;

use crate::ellipsoid::AmbientEllipsoid;
use crate::error::{Error, Result};
use crate::lagrangian::{Side, TransversePair};
use crate::matops::SpdMatrix;
use crate::matrix::{dot, norm, Mat};
use crate::quantum::GaussianState;
use crate::rng::Stream;
use crate::scalar::Real;
use crate::symplectic::PhaseVector;

/// Slack on `max p·x ≤ 1` for sampled polar membership.
pub const POLAR_SLACK: f64 = 1e-3;
/// Boundary samples drawn by [`mc_projection_support`].
pub const SHADOW_SAMPLES: usize = 100_000;
/// Local refinement steps per direction in [`mc_projection_support`].
pub const SHADOW_REFINE_STEPS: usize = 4_000;

/// Deterministic point sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Points on the unit sphere: `±1` on the line, equally spaced on the
    /// circle, a Fibonacci lattice on `S²`, Gaussian directions above that.
    Sphere,
    /// Sphere points mapped onto the boundary of an ellipsoid by
    /// `x(u) = u/√(u·Au)`.
    EllipsoidBoundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud<T> {
    dim: usize,
    points: Vec<Vec<T>>,
    seed: u64,
    generator: Generator,
}

impl<T: Real> SampleCloud<T> {
    /// `count` points on the unit sphere of `ℝ^dim`. Lattice generators
    /// ignore `seed` except for a rotation offset on the circle.
    pub fn sphere(seed: u64, dim: usize, count: usize) -> Self {
        let points = match dim {
            0 => Vec::new(),
            1 => (0..count)
                .map(|k| vec![if k % 2 == 0 { T::one() } else { -T::one() }])
                .collect(),
            2 => {
                let offset = Stream::new(seed, 0).uniform::<T>(0.0, 1.0);
                (0..count)
                    .map(|k| {
                        let t = T::TAU() * (T::lit(k as f64) + offset) / T::lit(count as f64);
                        vec![t.cos(), t.sin()]
                    })
                    .collect()
            }
            3 => fibonacci_sphere(count),
            _ => {
                let mut rng = Stream::new(seed, 0);
                (0..count)
                    .map(|_| loop {
                        let v: Vec<T> = (0..dim).map(|_| rng.normal()).collect();
                        let r = norm(&v);
                        if r > T::lit(1e-6) {
                            break v.into_iter().map(|x| x / r).collect();
                        }
                    })
                    .collect()
            }
        };
        Self {
            dim,
            points,
            seed,
            generator: Generator::Sphere,
        }
    }

    /// `count` points on `∂{x : Ax·x ≤ 1}`.
    pub fn ellipsoid_boundary(seed: u64, form: &SpdMatrix<T>, count: usize) -> Self {
        let sphere = Self::sphere(seed, form.dim(), count);
        let points = sphere
            .points
            .into_iter()
            .map(|u| boundary_point(form.matrix(), &u))
            .collect();
        Self {
            dim: form.dim(),
            points,
            seed,
            generator: Generator::EllipsoidBoundary,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }
}

fn boundary_point<T: Real>(form: &Mat<T>, u: &[T]) -> Vec<T> {
    let r = form.quad_form(u).sqrt();
    u.iter().map(|&x| x / r).collect()
}

fn fibonacci_sphere<T: Real>(count: usize) -> Vec<Vec<T>> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let m = T::lit(count as f64);
    (0..count)
        .map(|k| {
            let z = T::one() - (T::lit(k as f64) + T::lit(0.5)) * T::lit(2.0) / m;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let t = golden * T::lit(k as f64);
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarMembership<T> {
    pub accept: bool,
    /// `max p·x` over the cloud.
    pub max_inner: T,
}

/// Sampled test of `p ∈ X°`: accept iff `max_x p·x ≤ 1 + 10⁻³` over the
/// boundary cloud. Rejection is exact; acceptance is approximate.
pub fn mc_polar_membership<T: Real>(
    boundary: &SampleCloud<T>,
    candidate: &[T],
) -> Result<PolarMembership<T>> {
    if boundary.points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if candidate.len() != boundary.dim {
        return Err(Error::BadShape(format!(
            "candidate must have length {}",
            boundary.dim
        )));
    }
    let max_inner = boundary
        .points
        .iter()
        .map(|x| dot(x, candidate))
        .fold(T::neg_infinity(), T::max);
    Ok(PolarMembership {
        accept: max_inner <= T::one() + T::lit(POLAR_SLACK),
        max_inner,
    })
}

/// Sampled support function of the projection of `Ω` onto one plane of the
/// pair along the other, for directions given in the target plane's
/// orthonormal chart. Each estimate is the best of [`SHADOW_SAMPLES`]
/// projected boundary points, refined by a seeded random local search over
/// boundary points; estimates never exceed the true value beyond rounding.
pub fn mc_projection_support<T: Real>(
    omega: &AmbientEllipsoid<T>,
    pair: &TransversePair<T>,
    onto: Side,
    directions: &SampleCloud<T>,
    seed: u64,
) -> Result<Vec<T>> {
    let n = pair.dof();
    if omega.dof() != n || directions.dim != n {
        return Err(Error::BadShape(
            "ellipsoid, pair and directions disagree on dimension".into(),
        ));
    }
    // Projector along the complementary plane: Π = S diag(I, 0) S⁻¹ (or
    // diag(0, I)), read in the target plane's orthonormal coordinates.
    let s = pair.frame().matrix();
    let keep = match onto {
        Side::First => Mat::from_fn(2 * n, 2 * n, |i, j| {
            if i == j && i < n {
                T::one()
            } else {
                T::zero()
            }
        }),
        Side::Second => Mat::from_fn(2 * n, 2 * n, |i, j| {
            if i == j && i >= n {
                T::one()
            } else {
                T::zero()
            }
        }),
    };
    let projector = &(s * &keep) * pair.frame().inverse().matrix();
    let chart = &pair.plane(onto).basis().transpose() * &projector;

    let form = omega.form().matrix();
    let sphere = SampleCloud::<T>::sphere(seed, 2 * n, SHADOW_SAMPLES);
    let shadows: Vec<Vec<T>> = sphere
        .points
        .par_iter()
        .map(|u| chart.matvec(&boundary_point(form, u)))
        .collect();

    directions
        .points
        .par_iter()
        .enumerate()
        .map(|(k, u)| {
            let (best, _) = shadows
                .iter()
                .enumerate()
                .map(|(i, x)| (i, dot(u, x)))
                .fold((0, T::neg_infinity()), |acc, cur| {
                    if cur.1 > acc.1 {
                        cur
                    } else {
                        acc
                    }
                });
            Ok(refine(
                form,
                &chart,
                u,
                &sphere.points[best],
                &mut Stream::new(seed, 1 + k as u64),
            ))
        })
        .collect()
}

/// Random local search for `max u·C x(v)` over boundary points `x(v)`,
/// growing the step after a success and shrinking it after a failure.
fn refine<T: Real>(form: &Mat<T>, chart: &Mat<T>, u: &[T], start: &[T], rng: &mut Stream) -> T {
    let value = |v: &[T]| dot(u, &chart.matvec(&boundary_point(form, v)));
    let mut v = start.to_vec();
    let mut best = value(&v);
    let mut step = T::lit(0.05);
    for _ in 0..SHADOW_REFINE_STEPS {
        let trial: Vec<T> = v.iter().map(|&x| x + step * rng.normal::<T>()).collect();
        let r = norm(&trial);
        if r == T::zero() {
            continue;
        }
        let trial: Vec<T> = trial.into_iter().map(|x| x / r).collect();
        let f = value(&trial);
        if f > best {
            best = f;
            v = trial;
            step = step * T::lit(1.5);
        } else {
            step = (step * T::lit(0.9)).max(T::lit(1e-12));
        }
    }
    best
}

/// Trapezoid grid for [`wigner_quadrature`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid<T> {
    pub half_width: T,
    pub points: usize,
}

/// `Wψ(x, p) = (2π)⁻¹ ∫ e^{−ipy} ψ(x + y/2) ψ̄(x − y/2) dy` by the trapezoid
/// rule on `[−h, h]`, for one degree of freedom. The grid must cover at
/// least `6/√λ_min(A)`.
pub fn wigner_quadrature<T: Real>(
    psi: &GaussianState<T>,
    z: &PhaseVector<T>,
    grid: QuadratureGrid<T>,
) -> Result<T> {
    if psi.dof() != 1 || z.dof() != 1 {
        return Err(Error::BadShape(
            "Wigner quadrature supports one degree of freedom".into(),
        ));
    }
    let required = T::lit(6.0) / psi.a().min_eig().sqrt();
    if grid.half_width < required {
        return Err(Error::GridTooSmall {
            half_width: grid.half_width.as_f64(),
            required: required.as_f64(),
        });
    }
    if grid.points < 2 {
        return Err(Error::BadShape(
            "quadrature grid needs at least two points".into(),
        ));
    }
    let (x, p) = (z.x[0], z.p[0]);
    let h = grid.half_width * T::lit(2.0) / T::lit((grid.points - 1) as f64);
    let half = T::lit(0.5);
    let total = (0..grid.points)
        .map(|k| {
            let y = -grid.half_width + h * T::lit(k as f64);
            let weight = if k == 0 || k + 1 == grid.points {
                half
            } else {
                T::one()
            };
            let phase = Complex::new(T::zero(), -p * y).exp();
            let value = phase * psi.eval(&[x + y * half]) * psi.eval(&[x - y * half]).conj();
            value * weight
        })
        .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v);
    Ok((total * h).re / T::TAU())
}

/// Random SPD matrix `Q diag(d) Qᵀ` with Haar-like orthogonal `Q` and
/// eigenvalues log-uniform in `[1/cap, cap]`.
pub fn random_spd<T: Real>(seed: u64, n: usize, cap: f64) -> SpdMatrix<T> {
    random_spd_from(&mut Stream::new(seed, 0), n, cap)
}

pub fn random_spd_from<T: Real>(rng: &mut Stream, n: usize, cap: f64) -> SpdMatrix<T> {
    assert!(cap >= 1.0, "condition cap must be at least one");
    let q = rng.orthogonal::<T>(n);
    let log_cap = cap.ln();
    let d: Vec<T> = (0..n)
        .map(|_| {
            if log_cap > 0.0 {
                rng.uniform::<T>(-log_cap, log_cap).exp()
            } else {
                T::one()
            }
        })
        .collect();
    SpdMatrix::from_eigen(&q, &d)
}
