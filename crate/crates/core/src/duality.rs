//! Lagrangian polar duality, dual-pair verdicts, the projection inclusion for
//! ellipsoids containing a symplectic unit ball, reconstruction of the
//! symplectic ball from one projection, and dual-product capacities.

use rayon::prelude::*;

use crate::ellipsoid::{
    dual_product_ball, frame_form, from_frame_form, lagrangian_projection, AmbientEllipsoid,
    PlaneEllipsoid,
};
use crate::error::{Error, Result};
use crate::lagrangian::{Side, TransversePair};
use crate::matops::{psd_margin, spd_roots, sym_eig, BlockSplit, SpdMatrix, SymMatrix};
use crate::matrix::Mat;
use crate::rng::Stream;
use crate::scalar::Real;
use crate::symplectic::{random_symplectic_from, symplectic_eigenvalues};

/// Half-width of the band around zero in which a normalized PSD margin is
/// treated as a boundary case.
pub const VERDICT_TOL: f64 = 1e-9;
/// `‖AB − I‖_max` below which a boundary case is an exact dual pair.
pub const EXACT_TOL: f64 = 1e-8;
/// Slack on `λ_max^ω(M) ≤ 1` when certifying that `Ω` contains a
/// symplectic unit ball.
pub const HYPOTHESIS_TOL: f64 = 1e-9;

/// Lagrangian polar dual of `x ⊂ ℓ` inside `ℓ′`: in frame coordinates the
/// form `A` on `ℓ_X` becomes `A⁻¹` on `ℓ_P`.
pub fn lagrangian_polar_dual<T: Real>(
    x: &PlaneEllipsoid<T>,
    pair: &TransversePair<T>,
) -> Result<PlaneEllipsoid<T>> {
    let a = frame_form(x, pair, Side::First)?;
    from_frame_form(pair, Side::Second, &a.inverse())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualStatus {
    NotDual,
    Dual,
    ExactDual,
}

impl DualStatus {
    pub fn is_dual(self) -> bool {
        self != DualStatus::NotDual
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualPairVerdict<T> {
    pub status: DualStatus,
    /// Smallest eigenvalue of `B⁻¹ − A` in frame coordinates.
    pub margin: T,
    /// `margin` after rescaling the forms so that `trace(A) = n`.
    pub normalized_margin: T,
    /// `‖AB − I‖_max`.
    pub exactness_residual: T,
}

/// Decides whether `(X, Y)` is a dual pair, i.e. whether the Lagrangian
/// polar of `X` lies inside `Y`; for forms `A`, `B` in frame coordinates
/// this reads `A ⪯ B⁻¹`, with equality exactly when `AB = I`.
pub fn dual_pair_verdict<T: Real>(
    x: &PlaneEllipsoid<T>,
    y: &PlaneEllipsoid<T>,
    pair: &TransversePair<T>,
) -> Result<DualPairVerdict<T>> {
    let a = frame_form(x, pair, Side::First)?;
    let b = frame_form(y, pair, Side::Second)?;
    Ok(form_pair_verdict(&a, &b))
}

/// Verdict on bare forms, `X = {Ax·x ≤ 1}` against `P = {Bp·p ≤ 1}`.
pub fn form_pair_verdict<T: Real>(a: &SpdMatrix<T>, b: &SpdMatrix<T>) -> DualPairVerdict<T> {
    let n = a.dim();
    let gap = SymMatrix::from_computed(b.inverse().matrix() - a.matrix());
    let margin = psd_margin(&gap).expect("eigendecomposition of a symmetric difference");
    // Scaling A by c and B by 1/c leaves AB unchanged and scales B⁻¹ − A by c.
    let c = T::lit(n as f64) / a.matrix().trace();
    let normalized_margin = margin * c;
    let exactness_residual = (a.matrix() * b.matrix()).max_abs_diff(&Mat::identity(n));
    let band = T::tol(VERDICT_TOL);
    let status = if normalized_margin < -band {
        DualStatus::NotDual
    } else if normalized_margin > band {
        DualStatus::Dual
    } else if exactness_residual <= T::tol(EXACT_TOL) {
        DualStatus::ExactDual
    } else {
        DualStatus::Dual
    };
    DualPairVerdict {
        status,
        margin,
        normalized_margin,
        exactness_residual,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm1Report<T> {
    /// Inclusion of the polar of the first projection in the second.
    pub verdict: bool,
    /// Smallest eigenvalue of `A⁻¹ − C`, where `A` and `C` are the frame
    /// forms of the projections onto the first and second plane.
    pub inclusion_margin: T,
    /// `‖A⁻¹ − C‖_max`; zero when the polar and the projection coincide.
    pub equality_residual: T,
    /// `λ_max^ω(M)`, at most one under the hypothesis.
    pub max_symplectic_eig: T,
}

/// For `Ω` containing a symplectic unit ball (certified as all symplectic
/// eigenvalues of `M` at most one), checks that the Lagrangian polar of the
/// projection of `Ω` onto the first plane lies inside its projection onto
/// the second.
pub fn thm1_check<T: Real>(
    omega: &AmbientEllipsoid<T>,
    pair: &TransversePair<T>,
) -> Result<Thm1Report<T>> {
    let max_symplectic_eig = symplectic_eigenvalues(omega.form())?[0];
    if max_symplectic_eig > T::one() + T::tol(HYPOTHESIS_TOL) {
        return Err(Error::HypothesisNotMet {
            max_symplectic_eig: max_symplectic_eig.as_f64(),
        });
    }
    let first = frame_form(
        &lagrangian_projection(omega, pair, Side::First)?,
        pair,
        Side::First,
    )?;
    let second = frame_form(
        &lagrangian_projection(omega, pair, Side::Second)?,
        pair,
        Side::Second,
    )?;
    let gap = first.inverse().matrix() - second.matrix();
    let inclusion_margin = psd_margin(&SymMatrix::from_computed(gap.clone()))?;
    Ok(Thm1Report {
        verdict: inclusion_margin >= -T::tol(VERDICT_TOL),
        inclusion_margin,
        equality_residual: gap.max_abs(),
        max_symplectic_eig,
    })
}

/// The unique symplectic ball whose projection onto the first plane is `x`
/// and whose projection onto the second is the Lagrangian polar of `x`.
pub fn reconstruct_ball<T: Real>(
    x: &PlaneEllipsoid<T>,
    pair: &TransversePair<T>,
) -> Result<AmbientEllipsoid<T>> {
    dual_product_ball(pair, &frame_form(x, pair, Side::First)?)
}

/// `4 sup{λ > 0 : λX° ⊆ P}` for `X = {Ax·x ≤ 1}`, `P = {Bp·p ≤ 1}`, in
/// closed form `4 λ_max(A^{1/2} B A^{1/2})^{−1/2}`.
pub fn product_capacity<T: Real>(a: &SpdMatrix<T>, b: &SpdMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::BadShape(format!(
            "forms of different size: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let (root, _) = spd_roots(a)?;
    let eig = sym_eig(&b.sym().congruence(root.matrix()))?;
    let top = *eig.values.last().expect("nonempty spectrum");
    Ok(T::lit(4.0) / top.sqrt())
}

/// One randomized instance of the projection inclusion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm1Trial<T> {
    pub index: u64,
    pub dof: usize,
    pub report: Thm1Report<T>,
    /// `‖M_XP‖_max` of `Ω` pulled back to the pair's frame coordinates.
    pub coupling: T,
}

/// Random symplectic unit ball `S(B²ⁿ(1))`, form `S⁻ᵀS⁻¹`.
pub fn random_symplectic_ball<T: Real>(
    rng: &mut Stream,
    n: usize,
    spread: f64,
) -> AmbientEllipsoid<T> {
    let s = random_symplectic_from::<T>(rng, n, spread);
    AmbientEllipsoid::ball(n, T::one())
        .push_forward(&s)
        .expect("image of the unit ball is an ellipsoid")
}

/// Runs `trials` independent instances of [`thm1_check`] in parallel. Trial
/// `i` draws from the stream `(seed, i)`, so results do not depend on
/// scheduling. With `omega` given, only the pair is random; otherwise each
/// trial also draws `n ∈ 1..=max_dof` and a random symplectic unit ball.
pub fn thm1_trials<T: Real>(
    seed: u64,
    trials: u64,
    spread: f64,
    omega: Option<&AmbientEllipsoid<T>>,
    max_dof: usize,
) -> Result<Vec<Thm1Trial<T>>> {
    (0..trials)
        .into_par_iter()
        .map(|index| {
            let mut rng = Stream::new(seed, index);
            let ball;
            let omega = match omega {
                Some(o) => o,
                None => {
                    let n = 1 + rng.index(max_dof.max(1));
                    ball = random_symplectic_ball(&mut rng, n, spread);
                    &ball
                }
            };
            let pair = TransversePair::random(&mut rng, omega.dof(), spread)?;
            let report = thm1_check(omega, &pair)?;
            let coupling = BlockSplit::new(omega.pull_back(pair.frame())?.form().sym())?
                .xp
                .max_abs();
            Ok(Thm1Trial {
                index,
                dof: omega.dof(),
                report,
                coupling,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::{frame_from_bases, plane_from_basis, LagrangianPlane};

    fn mat(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn spd(rows: &[&[f64]]) -> SpdMatrix<f64> {
        SpdMatrix::from_matrix(mat(rows)).unwrap()
    }

    fn diag(d: &[f64]) -> SpdMatrix<f64> {
        SpdMatrix::from_matrix(Mat::from_diag(d)).unwrap()
    }

    #[test]
    fn coordinate_polar_dual() {
        let pair = TransversePair::coordinate(2);
        let x = PlaneEllipsoid::on_x(spd(&[&[3.0, 1.0], &[1.0, 2.0]]));
        let d = lagrangian_polar_dual(&x, &pair).unwrap();
        assert!(d.plane().same_as(&LagrangianPlane::coordinate_p(2)));
        assert!(d.form().matrix().max_abs_diff(x.form().inverse().matrix()) < 1e-14);
    }

    #[test]
    fn swapped_pair_polar_dual() {
        let pair = TransversePair::new(
            LagrangianPlane::coordinate_p(2),
            LagrangianPlane::coordinate_x(2),
        )
        .unwrap();
        let a = spd(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let d = lagrangian_polar_dual(&PlaneEllipsoid::on_p(a.clone()), &pair).unwrap();
        assert!(d.plane().same_as(&LagrangianPlane::coordinate_x(2)));
        assert!(d.form().matrix().max_abs_diff(a.inverse().matrix()) < 1e-14);
    }

    #[test]
    fn polar_dual_on_diagonal_lines() {
        // X = {c(1,1)/√2 : |c| ≤ 1}, a segment with ω-length one against the
        // unit direction of span(1, −1).
        let l = plane_from_basis(&mat(&[&[1.0], &[1.0]])).unwrap();
        let lp = plane_from_basis(&mat(&[&[1.0], &[-1.0]])).unwrap();
        let pair = TransversePair::new(l.clone(), lp).unwrap();
        let x = PlaneEllipsoid::new(l, SpdMatrix::identity(1)).unwrap();
        let d = lagrangian_polar_dual(&x, &pair).unwrap();
        // ω((1,1)/√2, (1,−1)/√2) = 1, so the dual is the unit segment too.
        assert!((d.form().matrix()[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_choice_does_not_change_the_dual() {
        let e = mat(&[&[1.0], &[1.0]]);
        let f = mat(&[&[3.0], &[-1.0]]);
        let l = plane_from_basis(&e).unwrap();
        let lp = plane_from_basis(&f).unwrap();
        let standard = TransversePair::new(l.clone(), lp.clone()).unwrap();
        let other =
            TransversePair::with_frame(l.clone(), lp, frame_from_bases(&e.scale(2.5), &f).unwrap())
                .unwrap();
        let x = PlaneEllipsoid::new(l, spd(&[&[0.7]])).unwrap();
        let a = lagrangian_polar_dual(&x, &standard).unwrap();
        let b = lagrangian_polar_dual(&x, &other).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn verdicts() {
        let v = form_pair_verdict(&diag(&[1.0, 4.0]), &diag(&[1.0, 0.25]));
        assert_eq!(v.status, DualStatus::ExactDual);
        let v = form_pair_verdict(
            &SpdMatrix::<f64>::identity(2).scale(0.5),
            &SpdMatrix::identity(2),
        );
        assert_eq!(v.status, DualStatus::Dual);
        assert!((v.margin - 0.5).abs() < 1e-15);
        let v = form_pair_verdict(
            &SpdMatrix::<f64>::identity(2).scale(2.0),
            &SpdMatrix::identity(2),
        );
        assert_eq!(v.status, DualStatus::NotDual);
        assert!((v.margin + 1.0).abs() < 1e-15);
        // Touching but not equal: X° meets the boundary of P in one direction.
        let v = form_pair_verdict(&diag(&[1.0, 0.5]), &SpdMatrix::identity(2));
        assert_eq!(v.status, DualStatus::Dual);
    }

    #[test]
    fn verdict_through_a_pair() {
        let pair = TransversePair::coordinate(2);
        let x = PlaneEllipsoid::on_x(diag(&[1.0, 4.0]));
        let y = PlaneEllipsoid::on_p(diag(&[1.0, 0.25]));
        assert_eq!(
            dual_pair_verdict(&x, &y, &pair).unwrap().status,
            DualStatus::ExactDual
        );
        assert_eq!(dual_pair_verdict(&y, &x, &pair), Err(Error::PlaneMismatch));
    }

    #[test]
    fn thm1_on_simple_balls() {
        let pair = TransversePair::coordinate(2);
        let r = thm1_check(&AmbientEllipsoid::ball(2, 1.0), &pair).unwrap();
        assert!(r.verdict);
        assert!(r.equality_residual < 1e-15);
        let sheared = AmbientEllipsoid::from_matrix(mat(&[&[2.0, 1.0], &[1.0, 1.0]])).unwrap();
        let r = thm1_check(&sheared, &TransversePair::coordinate(1)).unwrap();
        assert!(r.verdict);
        assert!((r.inclusion_margin - 0.5).abs() < 1e-14);
        let small = AmbientEllipsoid::from_matrix(Mat::from_diag(&[4.0, 1.0])).unwrap();
        assert!(matches!(
            thm1_check(&small, &TransversePair::coordinate(1)),
            Err(Error::HypothesisNotMet { .. })
        ));
    }

    #[test]
    fn thm1_harness_is_deterministic() {
        let a = thm1_trials::<f64>(7, 40, 0.5, None, 3).unwrap();
        let b = thm1_trials::<f64>(7, 40, 0.5, None, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.report.inclusion_margin >= -1e-9));
    }

    #[test]
    fn reconstruction() {
        let pair = TransversePair::coordinate(1);
        let ball = reconstruct_ball(&PlaneEllipsoid::on_x(spd(&[&[0.25]])), &pair).unwrap();
        assert_eq!(ball.form().matrix(), &Mat::from_diag(&[0.25, 4.0]));
        let unit = reconstruct_ball(
            &PlaneEllipsoid::on_x(SpdMatrix::<f64>::identity(2)),
            &TransversePair::coordinate(2),
        );
        assert!(
            unit.unwrap()
                .form()
                .matrix()
                .max_abs_diff(&Mat::identity(4))
                < 1e-15
        );
    }

    #[test]
    fn product_capacities() {
        let a = spd(&[&[3.0, 1.0], &[1.0, 2.0]]);
        assert!((product_capacity(&a, &a.inverse()).unwrap() - 4.0).abs() < 1e-12);
        let c = product_capacity(
            &SpdMatrix::<f64>::identity(2).scale(0.25),
            &SpdMatrix::identity(2),
        )
        .unwrap();
        assert!((c - 8.0).abs() < 1e-14);
        let c = product_capacity(
            &SpdMatrix::<f64>::identity(2).scale(4.0),
            &SpdMatrix::identity(2),
        )
        .unwrap();
        assert!((c - 2.0).abs() < 1e-14);
    }
}
