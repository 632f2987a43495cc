//! Lagrangian planes of `(ℝ²ⁿ, ω)` and symplectic frames of transverse pairs.

use crate::error::{Error, Result};
use crate::matops::{sym_eig, SymMatrix};
use crate::matrix::{dot, norm, Mat};
use crate::rng::Stream;
use crate::scalar::Real;
use crate::symplectic::{random_symplectic_from, standard_j, SymplecticMatrix};

/// Isotropy residual allowed, relative to `‖B‖²_max`.
pub const ISOTROPY_TOL: f64 = 1e-10;
/// Smallest singular value allowed, relative to the largest.
pub const RANK_TOL: f64 = 1e-10;
/// Parametrization constraints of [`plane_from_ab`].
pub const AB_TOL: f64 = 1e-9;
/// `|det [B₁ | B₂]|` below which two planes are not transverse.
pub const TRANSVERSE_TOL: f64 = 1e-10;
/// Largest principal angle (as its sine) for two planes to count as equal.
pub const PLANE_ANGLE_TOL: f64 = 1e-8;

/// Modified Gram–Schmidt on the columns of `b`. `None` when a column is
/// numerically dependent on its predecessors.
pub(crate) fn orthonormalize_columns<T: Real>(b: &Mat<T>) -> Option<Mat<T>> {
    let scale = (0..b.cols())
        .map(|j| norm(&b.column(j)))
        .fold(T::zero(), T::max);
    if !(scale > T::zero()) {
        return None;
    }
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let mut v = b.column(j);
        // Two passes keep the basis orthonormal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, &qi)| *x = *x - c * qi);
            }
        }
        let nv = norm(&v);
        if nv <= T::tol(RANK_TOL) * scale {
            return None;
        }
        v.iter_mut().for_each(|x| *x = *x / nv);
        cols.push(v);
    }
    let mut q = Mat::zeros(b.rows(), b.cols());
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    Some(q)
}

/// Lagrangian plane stored through an orthonormal `2n×n` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianPlane<T> {
    basis: Mat<T>,
}

impl<T: Real> LagrangianPlane<T> {
    /// `ℓ_X = ℝⁿ × 0`.
    pub fn coordinate_x(n: usize) -> Self {
        Self {
            basis: Mat::identity(2 * n).columns(0, n),
        }
    }

    /// `ℓ_P = 0 × ℝⁿ`.
    pub fn coordinate_p(n: usize) -> Self {
        Self {
            basis: Mat::identity(2 * n).columns(n, n),
        }
    }

    pub fn dof(&self) -> usize {
        self.basis.cols()
    }

    /// Orthonormal basis, one vector per column.
    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    /// Sine of the largest principal angle between the two planes.
    pub fn distance(&self, other: &Self) -> T {
        let q1 = &self.basis;
        let q2 = &other.basis;
        let residual = q2 - &(q1 * &(&q1.transpose() * q2));
        let gram = SymMatrix::from_computed(&residual.transpose() * &residual);
        let top = sym_eig(&gram)
            .map(|e| *e.values.last().expect("nonempty"))
            .unwrap_or(T::infinity());
        top.max(T::zero()).sqrt()
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.dof() == other.dof() && self.distance(other) <= T::tol(PLANE_ANGLE_TOL)
    }

    /// Distance from `v` to the plane, relative to `|v|`.
    pub fn membership_residual(&self, v: &[T]) -> T {
        let coords = self.basis.transpose().matvec(v);
        let proj = self.basis.matvec(&coords);
        let diff: Vec<T> = v.iter().zip(&proj).map(|(&a, &b)| a - b).collect();
        norm(&diff) / norm(v).max(T::min_positive_value())
    }

    /// Matrices `(A, B)` with `ℓ = {Ax + Bp = 0}`, `AᵀB = BᵀA` and
    /// `AᵀA + BᵀB = I`, read off the orthonormal basis `[Q_x; Q_p]` as
    /// `A = −Q_pᵀ`, `B = Q_xᵀ`. Unique up to a left orthogonal factor.
    pub fn ab_parameters(&self) -> (Mat<T>, Mat<T>) {
        let n = self.dof();
        let qx = self.basis.block(0, 0, n, n);
        let qp = self.basis.block(n, 0, n, n);
        (-&qp.transpose(), qx.transpose())
    }

    /// Coordinates of `v` in the stored orthonormal basis.
    pub fn coordinates(&self, v: &[T]) -> Vec<T> {
        self.basis.transpose().matvec(v)
    }

    /// Image `S(ℓ)` under a symplectic map.
    pub fn image(&self, s: &SymplecticMatrix<T>) -> Result<Self> {
        plane_from_basis(&(s.matrix() * &self.basis))
    }
}

/// Validates a `2n×n` basis and stores an orthonormalized copy.
pub fn plane_from_basis<T: Real>(b: &Mat<T>) -> Result<LagrangianPlane<T>> {
    if b.rows() != 2 * b.cols() || b.cols() == 0 {
        return Err(Error::BadShape(format!(
            "Lagrangian basis must be 2n x n, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = b.cols();
    let gram = SymMatrix::from_computed(&b.transpose() * b);
    let eig = sym_eig(&gram)?;
    let top = *eig.values.last().expect("nonempty");
    let ratio = (eig.values[0].max(T::zero()) / top).sqrt();
    if !(top > T::zero()) || ratio <= T::tol(RANK_TOL) {
        return Err(Error::RankDeficient {
            ratio: ratio.as_f64(),
        });
    }
    let residual = (&(&b.transpose() * &standard_j(n)) * b).max_abs();
    let scale = b.max_abs();
    if residual > T::tol(ISOTROPY_TOL) * scale * scale {
        return Err(Error::NotIsotropic {
            residual: residual.as_f64(),
        });
    }
    let basis = orthonormalize_columns(b).ok_or(Error::RankDeficient {
        ratio: ratio.as_f64(),
    })?;
    Ok(LagrangianPlane { basis })
}

/// Plane `{(x, p) : Ax + Bp = 0}`, parametrized as `x = Bᵀu`, `p = −Aᵀu`.
pub fn plane_from_ab<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Result<LagrangianPlane<T>> {
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return Err(Error::BadShape(
            "A and B must be square of equal size".into(),
        ));
    }
    let tol = T::tol(AB_TOL);
    let sym_res = (&a.transpose() * b).max_abs_diff(&(&b.transpose() * a));
    if sym_res > tol {
        return Err(Error::ConstraintViolated(format!(
            "AᵀB − BᵀA has size {:e}",
            sym_res.as_f64()
        )));
    }
    let unit_res = (&(&a.transpose() * a) + &(&b.transpose() * b)).max_abs_diff(&Mat::identity(n));
    if unit_res > tol {
        return Err(Error::ConstraintViolated(format!(
            "AᵀA + BᵀB − I has size {:e}",
            unit_res.as_f64()
        )));
    }
    plane_from_basis(&Mat::vstack(&b.transpose(), &-&a.transpose())?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseCheck<T> {
    pub verdict: bool,
    /// `|det [B₁ | B₂]|` with orthonormal bases.
    pub margin: T,
}

pub fn is_transverse<T: Real>(
    l1: &LagrangianPlane<T>,
    l2: &LagrangianPlane<T>,
) -> Result<TransverseCheck<T>> {
    if l1.dof() != l2.dof() {
        return Err(Error::BadShape(format!(
            "planes of different dimension: {} vs {}",
            l1.dof(),
            l2.dof()
        )));
    }
    let margin = Mat::hstack(&l1.basis, &l2.basis)?.determinant().abs();
    Ok(TransverseCheck {
        verdict: margin > T::tol(TRANSVERSE_TOL),
        margin,
    })
}

/// Symplectic frame `S = [E | F′]` built from bases of two transverse
/// planes: `F′ = F G⁻¹` with `G = EᵀJF`, so that `SᵀJS = J`.
pub fn frame_from_bases<T: Real>(e: &Mat<T>, f: &Mat<T>) -> Result<SymplecticMatrix<T>> {
    let n = e.cols();
    if e.rows() != 2 * n || f.rows() != 2 * n || f.cols() != n {
        return Err(Error::BadShape("frame bases must both be 2n x n".into()));
    }
    let g = &(&e.transpose() * &standard_j(n)) * f;
    let g_inv = g
        .inverse()
        .map_err(|_| Error::NotTransverse { margin: 0.0 })?;
    let s = Mat::hstack(e, &(f * &g_inv))?;
    SymplecticMatrix::new(s)
}

/// `S ∈ Sp(n)` with `S(ℓ_X) = l1` and `S(ℓ_P) = l2`, from the stored bases.
pub fn frame_symplectic<T: Real>(
    l1: &LagrangianPlane<T>,
    l2: &LagrangianPlane<T>,
) -> Result<SymplecticMatrix<T>> {
    let check = is_transverse(l1, l2)?;
    if !check.verdict {
        return Err(Error::NotTransverse {
            margin: check.margin.as_f64(),
        });
    }
    frame_from_bases(&l1.basis, &l2.basis)
}

/// Ordered pair of transverse Lagrangian planes with its symplectic frame.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversePair<T> {
    first: LagrangianPlane<T>,
    second: LagrangianPlane<T>,
    frame: SymplecticMatrix<T>,
}

impl<T: Real> TransversePair<T> {
    pub fn new(first: LagrangianPlane<T>, second: LagrangianPlane<T>) -> Result<Self> {
        let frame = frame_symplectic(&first, &second)?;
        Ok(Self {
            first,
            second,
            frame,
        })
    }

    /// `(ℓ_X, ℓ_P)` with frame `I`.
    pub fn coordinate(n: usize) -> Self {
        Self {
            first: LagrangianPlane::coordinate_x(n),
            second: LagrangianPlane::coordinate_p(n),
            frame: SymplecticMatrix::identity(n),
        }
    }

    /// `(S(ℓ_X), S(ℓ_P))`. The stored frame is recomputed from the
    /// orthonormalized bases, so it spans the same planes as `S` but is in
    /// general a different matrix.
    pub fn from_symplectic(s: &SymplecticMatrix<T>) -> Result<Self> {
        let n = s.dof();
        let m = s.matrix();
        Self::new(
            plane_from_basis(&m.columns(0, n))?,
            plane_from_basis(&m.columns(n, n))?,
        )
    }

    /// `(S(ℓ_X), S(ℓ_P))` for a random symplectic `S` drawn from `rng`.
    pub fn random(rng: &mut Stream, n: usize, spread: f64) -> Result<Self> {
        Self::from_symplectic(&random_symplectic_from(rng, n, spread))
    }

    /// Uses a caller-supplied frame, which must map `ℓ_X` onto `first` and
    /// `ℓ_P` onto `second`.
    pub fn with_frame(
        first: LagrangianPlane<T>,
        second: LagrangianPlane<T>,
        frame: SymplecticMatrix<T>,
    ) -> Result<Self> {
        let n = first.dof();
        if frame.dof() != n || second.dof() != n {
            return Err(Error::BadShape(
                "frame and planes disagree on dimension".into(),
            ));
        }
        let m = frame.matrix();
        if !plane_from_basis(&m.columns(0, n))?.same_as(&first)
            || !plane_from_basis(&m.columns(n, n))?.same_as(&second)
        {
            return Err(Error::PlaneMismatch);
        }
        Ok(Self {
            first,
            second,
            frame,
        })
    }

    pub fn dof(&self) -> usize {
        self.first.dof()
    }

    pub fn first(&self) -> &LagrangianPlane<T> {
        &self.first
    }

    pub fn second(&self) -> &LagrangianPlane<T> {
        &self.second
    }

    pub fn frame(&self) -> &SymplecticMatrix<T> {
        &self.frame
    }

    /// Chart matrix `R = Qᵀ E` taking frame coordinates on a side to the
    /// coordinates of that plane's stored orthonormal basis `Q`; `E` are the
    /// matching `n` columns of the frame.
    pub(crate) fn chart(&self, side: Side) -> Mat<T> {
        let n = self.dof();
        let (plane, cols) = match side {
            Side::First => (&self.first, self.frame.matrix().columns(0, n)),
            Side::Second => (&self.second, self.frame.matrix().columns(n, n)),
        };
        &plane.basis.transpose() * &cols
    }

    pub fn plane(&self, side: Side) -> &LagrangianPlane<T> {
        match side {
            Side::First => &self.first,
            Side::Second => &self.second,
        }
    }
}

/// Member of a transverse pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::symplectic_residual;

    fn m(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn coordinate_basis_is_l_x() {
        let l = plane_from_basis(&Mat::<f64>::identity(4).columns(0, 2)).unwrap();
        assert_eq!(l, LagrangianPlane::coordinate_x(2));
    }

    #[test]
    fn every_line_is_lagrangian() {
        let l = plane_from_basis(&m(&[&[1.0], &[1.0]])).unwrap();
        let h = 0.5f64.sqrt();
        assert!(l.basis().max_abs_diff(&m(&[&[h], &[h]])) < 1e-15);
    }

    #[test]
    fn mixed_basis_in_four_dimensions() {
        // Columns e1 + f1 and e2 in (x1, x2, p1, p2) ordering.
        let b = m(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[0.0, 0.0]]);
        assert!(plane_from_basis(&b).is_ok());
        let bad = m(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            plane_from_basis(&bad),
            Err(Error::NotIsotropic { .. })
        ));
        let dependent = m(&[&[1.0, 2.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            plane_from_basis(&dependent),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn ab_parametrization() {
        let id = Mat::<f64>::identity(2);
        let zero = Mat::<f64>::zeros(2, 2);
        assert!(plane_from_ab(&id, &zero)
            .unwrap()
            .same_as(&LagrangianPlane::coordinate_p(2)));
        assert!(plane_from_ab(&zero, &id)
            .unwrap()
            .same_as(&LagrangianPlane::coordinate_x(2)));
        let h = id.scale(0.5f64.sqrt());
        let anti = plane_from_ab(&h, &h).unwrap();
        // p = −x
        let expected = plane_from_basis(&Mat::vstack(&id, &-&id).unwrap()).unwrap();
        assert!(anti.same_as(&expected));
        assert!(matches!(
            plane_from_ab(&id, &id),
            Err(Error::ConstraintViolated(_))
        ));
        let (a, b) = anti.ab_parameters();
        assert!(plane_from_ab(&a, &b).unwrap().same_as(&anti));
    }

    #[test]
    fn transversality() {
        let lx = LagrangianPlane::<f64>::coordinate_x(2);
        let lp = LagrangianPlane::<f64>::coordinate_p(2);
        assert!(is_transverse(&lx, &lp).unwrap().verdict);
        assert!(!is_transverse(&lx, &lx).unwrap().verdict);
        let a = plane_from_basis(&m(&[&[1.0], &[1.0]])).unwrap();
        let b = plane_from_basis(&m(&[&[1.0], &[-1.0]])).unwrap();
        let t = is_transverse(&a, &b).unwrap();
        assert!(t.verdict);
        // det [[1, 1], [1, −1]] = −2 before normalizing the columns.
        assert!((t.margin - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frames_of_coordinate_pairs() {
        let lx = LagrangianPlane::<f64>::coordinate_x(2);
        let lp = LagrangianPlane::<f64>::coordinate_p(2);
        assert_eq!(
            frame_symplectic(&lx, &lp).unwrap().matrix(),
            &Mat::identity(4)
        );
        let swapped = frame_symplectic(&lp, &lx).unwrap();
        // Maps ℓ_X onto ℓ_P and back; this construction yields −J = Jᵀ.
        assert_eq!(swapped.matrix(), &standard_j::<f64>(2).transpose());
    }

    #[test]
    fn frame_from_raw_line_bases() {
        let s = frame_from_bases(&m(&[&[1.0], &[1.0]]), &m(&[&[1.0], &[-1.0]])).unwrap();
        assert!(s.matrix().max_abs_diff(&m(&[&[1.0, -0.5], &[1.0, 0.5]])) < 1e-15);
        assert!((s.matrix().determinant() - 1.0).abs() < 1e-15);
        assert!(symplectic_residual(s.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn non_transverse_pair_is_rejected() {
        let lx = LagrangianPlane::<f64>::coordinate_x(1);
        assert!(matches!(
            TransversePair::new(lx.clone(), lx),
            Err(Error::NotTransverse { .. })
        ));
    }
}
