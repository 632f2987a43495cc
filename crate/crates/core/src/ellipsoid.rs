//! Centered ellipsoids in `ℝ²ⁿ` and inside Lagrangian planes.
//!
//! A plane ellipsoid stores its form in the coordinates of the plane's
//! orthonormal basis `Q`. Operations that involve a transverse pair move
//! forms into the pair's frame coordinates (where the pair is
//! `(ℓ_X, ℓ_P)`), compute there, and move the result back.

use crate::error::{Error, Result};
use crate::lagrangian::{plane_from_basis, LagrangianPlane, Side, TransversePair};
use crate::matops::{schur_complement, BlockSplit, Eliminate, SpdMatrix};
use crate::matrix::{norm, Mat};
use crate::scalar::Real;
use crate::symplectic::{symplectic_eigenvalues, SymplecticMatrix};

/// Centered ellipsoid `{z : Mz·z ≤ 1}` in `ℝ²ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientEllipsoid<T> {
    form: SpdMatrix<T>,
}

impl<T: Real> AmbientEllipsoid<T> {
    pub fn new(form: SpdMatrix<T>) -> Result<Self> {
        if form.dim() % 2 != 0 {
            return Err(Error::BadShape(format!(
                "ambient form must be 2n x 2n, got {0}x{0}",
                form.dim()
            )));
        }
        Ok(Self { form })
    }

    pub fn from_matrix(m: Mat<T>) -> Result<Self> {
        Self::new(SpdMatrix::from_matrix(m)?)
    }

    /// Round ball `B²ⁿ(R)`, form `R⁻²I`.
    pub fn ball(n: usize, radius: T) -> Self {
        Self {
            form: SpdMatrix::identity(2 * n).scale((radius * radius).recip()),
        }
    }

    pub fn dof(&self) -> usize {
        self.form.dim() / 2
    }

    pub fn form(&self) -> &SpdMatrix<T> {
        &self.form
    }

    /// `√(Mz·z)`; the ellipsoid is the unit sublevel set.
    pub fn gauge(&self, z: &[T]) -> T {
        self.form.matrix().quad_form(z).max(T::zero()).sqrt()
    }

    /// `S⁻¹(Ω)`, form `SᵀMS`.
    pub fn pull_back(&self, s: &SymplecticMatrix<T>) -> Result<Self> {
        Self::new(self.form.congruence(s.matrix())?)
    }

    /// `S(Ω)`, form `S⁻ᵀMS⁻¹`.
    pub fn push_forward(&self, s: &SymplecticMatrix<T>) -> Result<Self> {
        self.pull_back(&s.inverse())
    }
}

/// Centered ellipsoid inside a Lagrangian plane, with its form expressed in
/// the coordinates of the plane's stored orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneEllipsoid<T> {
    plane: LagrangianPlane<T>,
    form: SpdMatrix<T>,
}

impl<T: Real> PlaneEllipsoid<T> {
    pub fn new(plane: LagrangianPlane<T>, form: SpdMatrix<T>) -> Result<Self> {
        if plane.dof() != form.dim() {
            return Err(Error::BadShape(format!(
                "form is {0}x{0} but the plane has dimension {1}",
                form.dim(),
                plane.dof()
            )));
        }
        Ok(Self { plane, form })
    }

    /// `{x : Ax·x ≤ 1} ⊂ ℓ_X`.
    pub fn on_x(form: SpdMatrix<T>) -> Self {
        Self {
            plane: LagrangianPlane::coordinate_x(form.dim()),
            form,
        }
    }

    /// `{p : Bp·p ≤ 1} ⊂ ℓ_P`.
    pub fn on_p(form: SpdMatrix<T>) -> Self {
        Self {
            plane: LagrangianPlane::coordinate_p(form.dim()),
            form,
        }
    }

    /// Ellipsoid `{Bc : form·c·c ≤ 1}` given through an arbitrary basis `B`
    /// of a Lagrangian plane.
    pub fn from_basis_form(basis: &Mat<T>, form: &SpdMatrix<T>) -> Result<Self> {
        let plane = plane_from_basis(basis)?;
        let chart = &plane.basis().transpose() * basis;
        let form = push_chart(form, &chart)?;
        Self::new(plane, form)
    }

    /// Form with respect to another basis `B` of the same plane.
    pub fn form_in_basis(&self, basis: &Mat<T>) -> Result<SpdMatrix<T>> {
        if !plane_from_basis(basis)?.same_as(&self.plane) {
            return Err(Error::PlaneMismatch);
        }
        self.form
            .congruence(&(&self.plane.basis().transpose() * basis))
    }

    pub fn dof(&self) -> usize {
        self.form.dim()
    }

    pub fn plane(&self) -> &LagrangianPlane<T> {
        &self.plane
    }

    pub fn form(&self) -> &SpdMatrix<T> {
        &self.form
    }

    /// Gauge of an ambient point lying in the plane.
    pub fn gauge(&self, z: &[T]) -> Result<T> {
        if self.plane.membership_residual(z) > T::tol(1e-9) {
            return Err(Error::PlaneMismatch);
        }
        Ok(self
            .form
            .matrix()
            .quad_form(&self.plane.coordinates(z))
            .max(T::zero())
            .sqrt())
    }

    /// Same plane and forms equal within `tol` relative to the larger form.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let scale = self
            .form
            .matrix()
            .max_abs()
            .max(other.form.matrix().max_abs());
        self.plane.same_as(&other.plane)
            && self.form.matrix().max_abs_diff(other.form.matrix()) <= tol * scale
    }
}

/// Push a form through a chart: coordinates `u = R c` turn `Ac·c` into
/// `R⁻ᵀAR⁻¹u·u`.
fn push_chart<T: Real>(form: &SpdMatrix<T>, chart: &Mat<T>) -> Result<SpdMatrix<T>> {
    form.congruence(&chart.inverse()?)
}

/// Form of `x` in the frame coordinates of one side of the pair.
pub(crate) fn frame_form<T: Real>(
    x: &PlaneEllipsoid<T>,
    pair: &TransversePair<T>,
    side: Side,
) -> Result<SpdMatrix<T>> {
    if x.dof() != pair.dof() || !x.plane.same_as(pair.plane(side)) {
        return Err(Error::PlaneMismatch);
    }
    x.form.congruence(&pair.chart(side))
}

/// Plane ellipsoid on one side of the pair, from its frame-coordinate form.
pub(crate) fn from_frame_form<T: Real>(
    pair: &TransversePair<T>,
    side: Side,
    form: &SpdMatrix<T>,
) -> Result<PlaneEllipsoid<T>> {
    PlaneEllipsoid::new(
        pair.plane(side).clone(),
        push_chart(form, &pair.chart(side))?,
    )
}

/// `S(Ω_A)` where `Ω_A = {Ax·x + A⁻¹p·p ≤ 1}` in frame coordinates.
pub(crate) fn dual_product_ball<T: Real>(
    pair: &TransversePair<T>,
    a: &SpdMatrix<T>,
) -> Result<AmbientEllipsoid<T>> {
    let block = SpdMatrix::from_matrix(Mat::block_diag(a.matrix(), a.inverse().matrix()))?;
    AmbientEllipsoid::new(block)?.push_forward(pair.frame())
}

/// Euclidean polar dual. On `ℓ_X` the result lives on `ℓ_P` (and
/// conversely), pairing `x·p`; on any other plane the polar is taken inside
/// the plane itself. In every case the form becomes `A⁻¹`.
pub fn polar_dual<T: Real>(x: &PlaneEllipsoid<T>) -> PlaneEllipsoid<T> {
    let n = x.dof();
    let plane = if x.plane.same_as(&LagrangianPlane::coordinate_x(n)) {
        LagrangianPlane::coordinate_p(n)
    } else if x.plane.same_as(&LagrangianPlane::coordinate_p(n)) {
        LagrangianPlane::coordinate_x(n)
    } else {
        x.plane.clone()
    };
    PlaneEllipsoid {
        plane,
        form: x.form.inverse(),
    }
}

/// `L X`, with `L` acting on the plane's chart coordinates.
pub fn linear_image<T: Real>(l: &Mat<T>, x: &PlaneEllipsoid<T>) -> Result<PlaneEllipsoid<T>> {
    if !l.is_square() || l.rows() != x.dof() {
        return Err(Error::BadShape(format!(
            "linear map must be {0}x{0}",
            x.dof()
        )));
    }
    Ok(PlaneEllipsoid {
        plane: x.plane.clone(),
        form: push_chart(&x.form, l)?,
    })
}

/// Coordinate plane targeted by an orthogonal projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinate {
    X,
    P,
}

/// Orthogonal projection onto `ℓ_X` (form `M/M_PP`) or `ℓ_P` (form `M/M_XX`).
pub fn orthogonal_projection<T: Real>(
    omega: &AmbientEllipsoid<T>,
    onto: Coordinate,
) -> Result<PlaneEllipsoid<T>> {
    let blocks = BlockSplit::new(omega.form.sym())?;
    match onto {
        Coordinate::X => Ok(PlaneEllipsoid::on_x(SpdMatrix::new(schur_complement(
            &blocks,
            Eliminate::Pp,
        )?)?)),
        Coordinate::P => Ok(PlaneEllipsoid::on_p(SpdMatrix::new(schur_complement(
            &blocks,
            Eliminate::Xx,
        )?)?)),
    }
}

/// Projection of `Ω` onto one plane of the pair along the other.
pub fn lagrangian_projection<T: Real>(
    omega: &AmbientEllipsoid<T>,
    pair: &TransversePair<T>,
    onto: Side,
) -> Result<PlaneEllipsoid<T>> {
    if omega.dof() != pair.dof() {
        return Err(Error::BadShape(
            "ellipsoid and pair disagree on dimension".into(),
        ));
    }
    let pulled = omega.pull_back(pair.frame())?;
    let coordinate = match onto {
        Side::First => Coordinate::X,
        Side::Second => Coordinate::P,
    };
    let projected = orthogonal_projection(&pulled, coordinate)?;
    from_frame_form(pair, onto, projected.form())
}

/// Symplectic capacity `π / λ_max^ω(M)`.
pub fn capacity<T: Real>(omega: &AmbientEllipsoid<T>) -> Result<T> {
    let lambdas = symplectic_eigenvalues(&omega.form)?;
    Ok(T::PI() / lambdas[0])
}

/// Support function `h(u) = max_{z ∈ K} u·z`.
pub trait SupportFunction<T> {
    fn support(&self, u: &[T]) -> Result<T>;
}

impl<T: Real> SupportFunction<T> for AmbientEllipsoid<T> {
    /// `√(u·M⁻¹u)`.
    fn support(&self, u: &[T]) -> Result<T> {
        if u.len() != self.form.dim() {
            return Err(Error::BadShape(format!(
                "direction must have length {}",
                self.form.dim()
            )));
        }
        if norm(u) == T::zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(self
            .form
            .inverse()
            .matrix()
            .quad_form(u)
            .max(T::zero())
            .sqrt())
    }
}

impl<T: Real> SupportFunction<T> for PlaneEllipsoid<T> {
    /// Ambient direction `u ∈ ℝ²ⁿ`; only its component along the plane
    /// matters.
    fn support(&self, u: &[T]) -> Result<T> {
        if u.len() != 2 * self.dof() {
            return Err(Error::BadShape(format!(
                "direction must have length {}",
                2 * self.dof()
            )));
        }
        if norm(u) == T::zero() {
            return Err(Error::ZeroDirection);
        }
        let v = self.plane.coordinates(u);
        Ok(self
            .form
            .inverse()
            .matrix()
            .quad_form(&v)
            .max(T::zero())
            .sqrt())
    }
}

/// John ellipsoid of `X_ℓ × X°_ℓ′`: the symplectic ball `S(Ω_A)` with
/// `Ω_A = {Ax·x + A⁻¹p·p ≤ 1}` in frame coordinates.
pub fn john_of_dual_product<T: Real>(
    x: &PlaneEllipsoid<T>,
    pair: &TransversePair<T>,
) -> Result<AmbientEllipsoid<T>> {
    dual_product_ball(pair, &frame_form(x, pair, Side::First)?)
}

/// `ln κ_n`, the log-volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_log_volume<T: Real>(n: usize) -> T {
    let mut log = if n % 2 == 0 { T::zero() } else { T::LN_2() };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        log = log + (T::TAU() / T::lit(k as f64)).ln();
        k += 2;
    }
    log
}

/// `ln Vol(X) = ln κ_n − ½ ln det A`.
pub fn log_volume<T: Real>(x: &PlaneEllipsoid<T>) -> T {
    unit_ball_log_volume::<T>(x.dof()) - x.form.log_det() / T::lit(2.0)
}

/// `Vol(X)·Vol(X°)`, accumulated in log space.
pub fn mahler_volume<T: Real>(x: &PlaneEllipsoid<T>) -> T {
    (log_volume(x) + log_volume(&polar_dual(x))).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::plane_from_basis;
    use crate::symplectic::random_symplectic;

    fn mat(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn spd(rows: &[&[f64]]) -> SpdMatrix<f64> {
        SpdMatrix::from_matrix(mat(rows)).unwrap()
    }

    #[test]
    fn dual_of_balls_and_diagonals() {
        let r = 3.0;
        let x = PlaneEllipsoid::on_x(SpdMatrix::identity(2).scale(1.0 / (r * r)));
        let d = polar_dual(&x);
        assert!(d.plane().same_as(&LagrangianPlane::coordinate_p(2)));
        assert!(
            d.form()
                .matrix()
                .max_abs_diff(&Mat::identity(2).scale(r * r))
                < 1e-12
        );
        let d = polar_dual(&PlaneEllipsoid::on_x(spd(&[&[4.0, 0.0], &[0.0, 1.0]])));
        assert!(
            d.form()
                .matrix()
                .max_abs_diff(&mat(&[&[0.25, 0.0], &[0.0, 1.0]]))
                < 1e-15
        );
        let unit = PlaneEllipsoid::on_x(SpdMatrix::<f64>::identity(3));
        assert_eq!(polar_dual(&unit).form().matrix(), &Mat::identity(3));
    }

    #[test]
    fn biduality() {
        let x = PlaneEllipsoid::on_x(spd(&[&[3.0, 1.0], &[1.0, 2.0]]));
        let back = polar_dual(&polar_dual(&x));
        assert!(back.approx_eq(&x, 1e-12));
    }

    #[test]
    fn scaling_the_unit_ball() {
        let x = PlaneEllipsoid::on_x(SpdMatrix::<f64>::identity(2));
        assert_eq!(linear_image(&Mat::identity(2), &x).unwrap(), x);
        let y = linear_image(&Mat::identity(2).scale(2.0), &x).unwrap();
        assert!(
            y.form()
                .matrix()
                .max_abs_diff(&Mat::identity(2).scale(0.25))
                < 1e-15
        );
        assert!(matches!(
            linear_image(&Mat::zeros(2, 2), &x),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn projections_of_the_sheared_ellipse() {
        let omega = AmbientEllipsoid::from_matrix(mat(&[&[2.0, 1.0], &[1.0, 1.0]])).unwrap();
        let px = orthogonal_projection(&omega, Coordinate::X).unwrap();
        assert!((px.form().matrix()[(0, 0)] - 1.0).abs() < 1e-15);
        let pp = orthogonal_projection(&omega, Coordinate::P).unwrap();
        assert!((pp.form().matrix()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!(pp.plane().same_as(&LagrangianPlane::coordinate_p(1)));
        // The support function of the shadow is the ambient one on the axis.
        assert!(
            (px.support(&[1.0, 0.0]).unwrap() - omega.support(&[1.0, 0.0]).unwrap()).abs() < 1e-15
        );
        assert!((pp.support(&[0.0, 1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decoupled_projection() {
        let m = Mat::block_diag(
            &mat(&[&[2.0, 0.5], &[0.5, 1.0]]),
            &Mat::identity(2).scale(3.0),
        );
        let px = orthogonal_projection(&AmbientEllipsoid::from_matrix(m).unwrap(), Coordinate::X)
            .unwrap();
        assert!(
            px.form()
                .matrix()
                .max_abs_diff(&mat(&[&[2.0, 0.5], &[0.5, 1.0]]))
                < 1e-15
        );
    }

    #[test]
    fn lagrangian_projection_on_coordinate_pairs() {
        let omega = AmbientEllipsoid::from_matrix(mat(&[&[2.0, 1.0], &[1.0, 1.0]])).unwrap();
        let pair = TransversePair::coordinate(1);
        assert_eq!(
            lagrangian_projection(&omega, &pair, Side::First).unwrap(),
            orthogonal_projection(&omega, Coordinate::X).unwrap()
        );
        let swapped = TransversePair::new(
            LagrangianPlane::coordinate_p(1),
            LagrangianPlane::coordinate_x(1),
        )
        .unwrap();
        let diag = AmbientEllipsoid::from_matrix(Mat::<f64>::from_diag(&[5.0, 7.0])).unwrap();
        let onto_p = lagrangian_projection(&diag, &swapped, Side::First).unwrap();
        assert!(onto_p.plane().same_as(&LagrangianPlane::coordinate_p(1)));
        assert!((onto_p.form().matrix()[(0, 0)] - 7.0).abs() < 1e-14);
    }

    #[test]
    fn capacities() {
        for n in 1..=3 {
            for r in [0.5, 1.0, 3.0] {
                let c = capacity(&AmbientEllipsoid::ball(n, r)).unwrap();
                assert!((c - std::f64::consts::PI * r * r).abs() < 1e-12 * c.max(1.0));
            }
        }
        let c =
            capacity(&AmbientEllipsoid::from_matrix(Mat::from_diag(&[4.0, 1.0])).unwrap()).unwrap();
        assert!((c - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        let a = mat(&[&[3.0, 1.0], &[1.0, 2.0]]);
        let m = Mat::block_diag(&a, &a.inverse().unwrap());
        let c = capacity(&AmbientEllipsoid::from_matrix(m).unwrap()).unwrap();
        assert!((c - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn capacity_is_symplectically_invariant() {
        let omega = AmbientEllipsoid::from_matrix(Mat::from_diag(&[4.0, 2.0, 1.0, 0.5])).unwrap();
        let s = random_symplectic::<f64>(11, 2, 0.5);
        let moved = omega.pull_back(&s).unwrap();
        assert!((capacity(&moved).unwrap() - capacity(&omega).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn support_functions() {
        let ball = AmbientEllipsoid::<f64>::ball(2, 1.0);
        let u = [0.6, 0.0, 0.0, 0.8];
        assert!((ball.support(&u).unwrap() - 1.0).abs() < 1e-15);
        let seg = PlaneEllipsoid::on_x(spd(&[&[0.25]]));
        assert!((seg.support(&[1.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((seg.support(&[2.0, 0.0]).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(seg.support(&[0.0, 0.0]), Err(Error::ZeroDirection));
    }

    #[test]
    fn john_ellipsoids() {
        let pair = TransversePair::coordinate(2);
        let unit =
            john_of_dual_product(&PlaneEllipsoid::on_x(SpdMatrix::<f64>::identity(2)), &pair)
                .unwrap();
        assert!(unit.form().matrix().max_abs_diff(&Mat::identity(4)) < 1e-15);
        let quarter = john_of_dual_product(
            &PlaneEllipsoid::on_x(spd(&[&[0.25]])),
            &TransversePair::coordinate(1),
        );
        assert_eq!(
            quarter.unwrap().form().matrix(),
            &Mat::from_diag(&[0.25, 4.0])
        );
        let x = PlaneEllipsoid::on_p(SpdMatrix::<f64>::identity(2));
        assert_eq!(john_of_dual_product(&x, &pair), Err(Error::PlaneMismatch));
    }

    #[test]
    fn basis_forms_round_trip() {
        let b = mat(&[&[2.0], &[2.0]]);
        let x = PlaneEllipsoid::from_basis_form(&b, &spd(&[&[1.0]])).unwrap();
        // {2c(1,1) : c² ≤ 1} has half-length 2√2 along the unit direction.
        assert!((x.form().matrix()[(0, 0)] - 0.125).abs() < 1e-15);
        assert!(
            x.form_in_basis(&b)
                .unwrap()
                .matrix()
                .max_abs_diff(&Mat::identity(1))
                < 1e-15
        );
        let other = plane_from_basis(&mat(&[&[1.0], &[-1.0]])).unwrap();
        assert_eq!(x.form_in_basis(other.basis()), Err(Error::PlaneMismatch));
        assert!((x.gauge(&[2.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mahler_volumes() {
        use std::f64::consts::PI;
        for a in [0.1, 1.0, 7.0] {
            assert!((mahler_volume(&PlaneEllipsoid::on_x(spd(&[&[a]]))) - 4.0).abs() < 1e-13);
        }
        assert!(
            (mahler_volume(&PlaneEllipsoid::on_x(SpdMatrix::<f64>::identity(2))) - PI * PI).abs()
                < 1e-12
        );
        let x = PlaneEllipsoid::on_x(spd(&[&[4.0, 0.0], &[0.0, 1.0]]));
        assert!((mahler_volume(&x) - PI * PI).abs() < 1e-12);
        assert!((unit_ball_log_volume::<f64>(3).exp() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(unit_ball_log_volume::<f64>(0), 0.0);
    }
}
