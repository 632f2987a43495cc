//! Dense symmetric kernels: eigendecomposition, SPD roots, Schur complements
//! and PSD margins.
//!
//! Tolerances are relative to the scale of the operand so that every verdict
//! is invariant under `M ↦ cM`.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Real;

/// Relative asymmetry accepted at construction.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue of an SPD matrix, relative to its largest.
pub const SPD_TOL: f64 = 1e-10;
/// Default tolerance for PSD verdicts.
pub const PSD_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Square symmetric matrix. Construction tolerates floating point asymmetry
/// up to `1e-12 · max(1, ‖M‖_max)` and symmetrizes the input.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    m: Mat<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn new(m: Mat<T>) -> Result<Self> {
        Self::with_tol(m, SYMMETRY_TOL)
    }

    pub fn with_tol(m: Mat<T>, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::BadShape(format!(
                "{}x{} matrix is not square",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(Error::BadShape("empty matrix".into()));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let asymmetry = m.max_abs_diff(&m.transpose());
        let allowed = T::tol(tol) * T::one().max(m.max_abs());
        if asymmetry > allowed {
            return Err(Error::NotSymmetric {
                asymmetry: asymmetry.as_f64(),
                allowed: allowed.as_f64(),
            });
        }
        Ok(Self { m: m.symmetrized() })
    }

    /// Symmetrizes a matrix that is symmetric by construction up to rounding.
    pub(crate) fn from_computed(m: Mat<T>) -> Self {
        debug_assert!(m.is_square());
        Self { m: m.symmetrized() }
    }

    pub fn from_diag(d: &[T]) -> Self {
        Self {
            m: Mat::from_diag(d),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Mat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Mat<T> {
        self.m
    }

    /// `Pᵀ M P`.
    pub fn congruence(&self, p: &Mat<T>) -> Self {
        Self::from_computed(&(&p.transpose() * &self.m) * p)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { m: self.m.scale(s) }
    }
}

/// Symmetric positive definite matrix with cached extreme eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct SpdMatrix<T> {
    base: SymMatrix<T>,
    min_eig: T,
    max_eig: T,
}

impl<T: Real> SpdMatrix<T> {
    pub fn new(base: SymMatrix<T>) -> Result<Self> {
        Self::with_tol(base, SPD_TOL)
    }

    /// Accepts `base` when its smallest eigenvalue exceeds `tol` times the
    /// largest.
    pub fn with_tol(base: SymMatrix<T>, tol: f64) -> Result<Self> {
        let eig = sym_eig(&base)?;
        let min_eig = eig.values[0];
        let max_eig = *eig.values.last().expect("nonempty spectrum");
        if !(max_eig > T::zero()) || min_eig <= T::tol(tol) * max_eig {
            return Err(Error::NotPositiveDefinite {
                min_eig: min_eig.as_f64(),
            });
        }
        Ok(Self {
            base,
            min_eig,
            max_eig,
        })
    }

    pub fn from_matrix(m: Mat<T>) -> Result<Self> {
        Self::new(SymMatrix::new(m)?)
    }

    /// Builds `V diag(d) Vᵀ` for orthonormal `V` and positive `d`.
    pub(crate) fn from_eigen(vectors: &Mat<T>, d: &[T]) -> Self {
        let scaled = Mat::from_fn(vectors.rows(), vectors.cols(), |i, j| {
            vectors[(i, j)] * d[j]
        });
        let m = SymMatrix::from_computed(&scaled * &vectors.transpose());
        let min_eig = d.iter().copied().fold(T::infinity(), T::min);
        let max_eig = d.iter().copied().fold(T::neg_infinity(), T::max);
        Self {
            base: m,
            min_eig,
            max_eig,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            base: SymMatrix::identity(n),
            min_eig: T::one(),
            max_eig: T::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn sym(&self) -> &SymMatrix<T> {
        &self.base
    }

    pub fn matrix(&self) -> &Mat<T> {
        self.base.matrix()
    }

    pub fn min_eig(&self) -> T {
        self.min_eig
    }

    pub fn max_eig(&self) -> T {
        self.max_eig
    }

    pub fn condition_number(&self) -> T {
        self.max_eig / self.min_eig
    }

    pub fn inverse(&self) -> Self {
        let eig = sym_eig(&self.base).expect("eigendecomposition of a validated SPD matrix");
        let inv: Vec<T> = eig.values.iter().map(|&v| v.recip()).collect();
        Self::from_eigen(&eig.vectors, &inv)
    }

    pub fn log_det(&self) -> T {
        let eig = sym_eig(&self.base).expect("eigendecomposition of a validated SPD matrix");
        eig.values.iter().map(|v| v.ln()).sum()
    }

    /// `Pᵀ M P` for invertible `P`.
    pub fn congruence(&self, p: &Mat<T>) -> Result<Self> {
        Self::new(self.base.congruence(p))
    }

    pub fn scale(&self, s: T) -> Self {
        assert!(s > T::zero(), "SPD matrices only scale by positive factors");
        Self {
            base: self.base.scale(s),
            min_eig: self.min_eig * s,
            max_eig: self.max_eig * s,
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEig<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors, one per column, matching `values`.
    pub vectors: Mat<T>,
}

/// Cyclic Jacobi eigendecomposition.
pub fn sym_eig<T: Real>(m: &SymMatrix<T>) -> Result<SymEig<T>> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = Mat::identity(n);
    let hundred = T::lit(100.0);
    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].abs())
            .sum();
        if off == T::zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = hundred * apq.abs();
                // Past the first sweeps, drop elements below the diagonal's resolution.
                if sweep > 3
                    && a[(p, p)].abs() + g == a[(p, p)].abs()
                    && a[(q, q)].abs() + g == a[(q, q)].abs()
                {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                if apq == T::zero() {
                    continue;
                }
                let h = a[(q, q)] - a[(p, p)];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = T::lit(0.5) * h / apq;
                    let t = (theta.abs() + (T::one() + theta * theta).sqrt()).recip();
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                let tau = s / (T::one() + c);
                let app = a[(p, p)] - t * apq;
                let aqq = a[(q, q)] + t * apq;
                a[(p, p)] = app;
                a[(q, q)] = aqq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        let new_rp = arp - s * (arq + tau * arp);
                        let new_rq = arq + s * (arp - tau * arq);
                        a[(r, p)] = new_rp;
                        a[(p, r)] = new_rp;
                        a[(r, q)] = new_rq;
                        a[(q, r)] = new_rq;
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEig { values, vectors })
}

/// Square root and inverse square root of an SPD matrix.
pub fn spd_roots<T: Real>(m: &SpdMatrix<T>) -> Result<(SpdMatrix<T>, SpdMatrix<T>)> {
    let eig = sym_eig(m.sym())?;
    if eig.values[0] <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            min_eig: eig.values[0].as_f64(),
        });
    }
    let sqrt: Vec<T> = eig.values.iter().map(|v| v.sqrt()).collect();
    let inv_sqrt: Vec<T> = sqrt.iter().map(|v| v.recip()).collect();
    Ok((
        SpdMatrix::from_eigen(&eig.vectors, &sqrt),
        SpdMatrix::from_eigen(&eig.vectors, &inv_sqrt),
    ))
}

/// Smallest eigenvalue. Callers classify PSD iff the margin is `≥ −tol`.
pub fn psd_margin<T: Real>(m: &SymMatrix<T>) -> Result<T> {
    Ok(sym_eig(m)?.values[0])
}

/// `n×n` blocks of a symmetric `2n×2n` matrix in `(x, p)` ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSplit<T> {
    pub xx: Mat<T>,
    pub xp: Mat<T>,
    pub px: Mat<T>,
    pub pp: Mat<T>,
}

impl<T: Real> BlockSplit<T> {
    pub fn new(m: &SymMatrix<T>) -> Result<Self> {
        let d = m.dim();
        if d % 2 != 0 {
            return Err(Error::BadShape(format!(
                "block split needs even dimension, got {d}"
            )));
        }
        let n = d / 2;
        let a = m.matrix();
        let xp = a.block(0, n, n, n);
        Ok(Self {
            xx: a.block(0, 0, n, n),
            px: xp.transpose(),
            xp,
            pp: a.block(n, n, n, n),
        })
    }

    pub fn half_dim(&self) -> usize {
        self.xx.rows()
    }
}

/// Which block a Schur complement eliminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eliminate {
    /// `M/M_PP = M_XX − M_XP M_PP⁻¹ M_PX`
    Pp,
    /// `M/M_XX = M_PP − M_PX M_XX⁻¹ M_XP`
    Xx,
}

pub fn schur_complement<T: Real>(m: &BlockSplit<T>, eliminate: Eliminate) -> Result<SymMatrix<T>> {
    let (keep, left, right, drop) = match eliminate {
        Eliminate::Pp => (&m.xx, &m.xp, &m.px, &m.pp),
        Eliminate::Xx => (&m.pp, &m.px, &m.xp, &m.xx),
    };
    let drop = SpdMatrix::new(SymMatrix::from_computed(drop.clone()))?;
    let correction = &(left * drop.inverse().matrix()) * right;
    Ok(SymMatrix::from_computed(keep - &correction))
}
