//! Uncertainty certification for covariance matrices and Gaussian states,
//! in units with `ħ = 1`.

use num_complex::Complex;

use crate::ellipsoid::AmbientEllipsoid;
use crate::error::{Error, Result};
use crate::matops::{spd_roots, sym_eig, BlockSplit, SpdMatrix, SymMatrix};
use crate::matrix::Mat;
use crate::scalar::Real;
use crate::symplectic::{standard_j, symplectic_eigenvalues, PhaseVector};

/// Slack on every admissibility threshold.
pub const ADMISSIBLE_TOL: f64 = 1e-9;
/// Width of the band around the threshold inside which the two
/// admissibility routes may legitimately disagree.
pub const ROUTE_BAND: f64 = 1e-7;

/// Covariance matrix `Σ` of a phase-space distribution, with named blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix<T> {
    sigma: SpdMatrix<T>,
    blocks: BlockSplit<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn new(sigma: SpdMatrix<T>) -> Result<Self> {
        let blocks = BlockSplit::new(sigma.sym())?;
        Ok(Self { sigma, blocks })
    }

    pub fn from_matrix(m: Mat<T>) -> Result<Self> {
        Self::new(SpdMatrix::from_matrix(m)?)
    }

    pub fn dof(&self) -> usize {
        self.blocks.half_dim()
    }

    pub fn sigma(&self) -> &SpdMatrix<T> {
        &self.sigma
    }

    pub fn blocks(&self) -> &BlockSplit<T> {
        &self.blocks
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificationReport<T> {
    /// `σ_xjxj σ_pjpj − σ_xjpj² − 1/4` for each degree of freedom.
    pub rs_margins: Vec<T>,
    /// Smallest eigenvalue of the Hermitian matrix `Σ + (i/2)J`.
    pub min_hermitian_eig: T,
    /// `λ_min^ω(Σ)`.
    pub min_symplectic_eig: T,
    pub admissible: bool,
}

/// Tests the quantum condition `Σ + (i/2)J ⪰ 0` and cross-checks it against
/// `λ_min^ω(Σ) ≥ 1/2`.
pub fn certify<T: Real>(sigma: &CovarianceMatrix<T>) -> Result<CertificationReport<T>> {
    let n = sigma.dof();
    let b = &sigma.blocks;
    let quarter = T::lit(0.25);
    let rs_margins = (0..n)
        .map(|j| b.xx[(j, j)] * b.pp[(j, j)] - b.xp[(j, j)] * b.xp[(j, j)] - quarter)
        .collect();

    // Σ + iY with antisymmetric Y embeds as [[Σ, −Y], [Y, Σ]]; each
    // eigenvalue of the Hermitian matrix appears twice.
    let half_j = standard_j::<T>(n).scale(T::lit(0.5));
    let s = sigma.sigma.matrix();
    let embedded = Mat::from_blocks(s, &-&half_j, &half_j, s)?;
    let min_hermitian_eig = sym_eig(&SymMatrix::from_computed(embedded))?.values[0];
    let min_symplectic_eig = *symplectic_eigenvalues(&sigma.sigma)?
        .last()
        .expect("nonempty spectrum");

    let tol = T::tol(ADMISSIBLE_TOL);
    let hermitian_ok = min_hermitian_eig >= -tol;
    let symplectic_ok = min_symplectic_eig >= T::lit(0.5) - tol;
    let band = T::tol(ROUTE_BAND);
    let outside_band =
        min_hermitian_eig.abs() > band && (min_symplectic_eig - T::lit(0.5)).abs() > band;
    if hermitian_ok != symplectic_ok && outside_band {
        return Err(Error::InternalInconsistency(format!(
            "Hermitian margin {:e} and symplectic eigenvalue {:e} disagree",
            min_hermitian_eig.as_f64(),
            min_symplectic_eig.as_f64()
        )));
    }
    Ok(CertificationReport {
        rs_margins,
        min_hermitian_eig,
        min_symplectic_eig,
        admissible: hermitian_ok,
    })
}

/// `Ω = {½Σ⁻¹z·z ≤ 1}`; its capacity is at least `π` exactly when `Σ` is
/// admissible.
pub fn uncertainty_ellipsoid<T: Real>(sigma: &CovarianceMatrix<T>) -> Result<AmbientEllipsoid<T>> {
    AmbientEllipsoid::new(sigma.sigma.inverse().scale(T::lit(0.5)))
}

/// Gaussian density `(2π)⁻ⁿ (det Σ)^{−1/2} exp(−½Σ⁻¹(z−z̄)·(z−z̄))`.
pub fn gaussian_wigner_eval<T: Real>(
    sigma: &CovarianceMatrix<T>,
    zbar: &PhaseVector<T>,
    z: &PhaseVector<T>,
) -> Result<T> {
    let n = sigma.dof();
    if zbar.dof() != n || z.dof() != n {
        return Err(Error::BadShape(format!(
            "phase vectors must have {n} degrees of freedom"
        )));
    }
    let d: Vec<T> = z
        .stacked()
        .iter()
        .zip(zbar.stacked())
        .map(|(&a, b)| a - b)
        .collect();
    let q = sigma.sigma.inverse().matrix().quad_form(&d);
    let log_norm = -T::lit(n as f64) * T::TAU().ln() - sigma.sigma.log_det() / T::lit(2.0);
    Ok((log_norm - q / T::lit(2.0)).exp())
}

/// Pure Gaussian state `ψ(x) = π^{−n/4} (det A)^{1/4} e^{−½(A+iB)x·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState<T> {
    a: SpdMatrix<T>,
    b: SymMatrix<T>,
}

impl<T: Real> GaussianState<T> {
    pub fn new(a: SpdMatrix<T>, b: SymMatrix<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::BadShape(format!(
                "A is {0}x{0} but B is {1}x{1}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(Self { a, b })
    }

    /// Real Gaussian `e^{−½Ax·x}`.
    pub fn real(a: SpdMatrix<T>) -> Self {
        let n = a.dim();
        Self {
            a,
            b: SymMatrix::from_diag(&vec![T::zero(); n]),
        }
    }

    /// The real Gaussian whose Wigner distribution has covariance
    /// `diag(Σ_XX, ¼Σ_XX⁻¹)`: `A = ½Σ_XX⁻¹`.
    pub fn from_position_covariance(sigma_xx: &SpdMatrix<T>) -> Self {
        Self::real(sigma_xx.inverse().scale(T::lit(0.5)))
    }

    pub fn dof(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &SpdMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &SymMatrix<T> {
        &self.b
    }

    /// `ψ(x)`.
    pub fn eval(&self, x: &[T]) -> Complex<T> {
        let n = T::lit(self.dof() as f64);
        let log_norm = self.a.log_det() / T::lit(4.0) - n * T::PI().ln() / T::lit(4.0);
        let re = self.a.matrix().quad_form(x);
        let im = self.b.matrix().quad_form(x);
        Complex::new(log_norm - re / T::lit(2.0), -im / T::lit(2.0)).exp()
    }

    /// `|ψ(x)|²`.
    pub fn density(&self, x: &[T]) -> T {
        self.eval(x).norm_sqr()
    }

    /// Covariance `½G⁻¹` of the Wigner distribution.
    pub fn covariance(&self) -> Result<CovarianceMatrix<T>> {
        CovarianceMatrix::new(
            gaussian_state_wigner_form(self)?
                .form()
                .inverse()
                .scale(T::lit(0.5)),
        )
    }
}

/// Form `G` with `Wψ(z) = π⁻ⁿ e^{−Gz·z}`:
/// `G = [[A + BA⁻¹B, BA⁻¹], [A⁻¹B, A⁻¹]]`.
pub fn gaussian_state_wigner_form<T: Real>(psi: &GaussianState<T>) -> Result<AmbientEllipsoid<T>> {
    let a_inv = psi.a.inverse();
    let b = psi.b.matrix();
    let ba = b * a_inv.matrix();
    let xx = psi.a.matrix() + &(&ba * b);
    let g = Mat::from_blocks(&xx, &ba, &ba.transpose(), a_inv.matrix())?;
    AmbientEllipsoid::new(SpdMatrix::new(SymMatrix::from_computed(g))?)
}

/// `Wψ(z) = π⁻ⁿ e^{−Gz·z}`.
pub fn gaussian_state_wigner<T: Real>(psi: &GaussianState<T>, z: &PhaseVector<T>) -> Result<T> {
    let g = gaussian_state_wigner_form(psi)?;
    if z.dof() != psi.dof() {
        return Err(Error::BadShape(format!(
            "phase vector must have {} degrees of freedom",
            psi.dof()
        )));
    }
    let n = T::lit(psi.dof() as f64);
    Ok((-g.form().matrix().quad_form(&z.stacked()) - n * T::PI().ln()).exp())
}

/// Outcome shared by the Hardy test and the sub-Gaussian Wigner test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UncertaintyVerdict {
    /// No nonzero state satisfies the bounds.
    Inadmissible,
    /// Bounds are compatible with nonzero states.
    Admissible,
    /// Only a Gaussian satisfies the bounds.
    GaussianForced,
}

impl UncertaintyVerdict {
    pub fn is_admissible(self) -> bool {
        self != UncertaintyVerdict::Inadmissible
    }

    /// All values `≤ 1` admit states; all equal to one force a Gaussian.
    fn classify<T: Real>(values: &[T]) -> Self {
        let tol = T::tol(ADMISSIBLE_TOL);
        if values.iter().any(|&v| v > T::one() + tol) {
            UncertaintyVerdict::Inadmissible
        } else if values.iter().all(|&v| (v - T::one()).abs() <= tol) {
            UncertaintyVerdict::GaussianForced
        } else {
            UncertaintyVerdict::Admissible
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardyReport<T> {
    pub verdict: UncertaintyVerdict,
    /// Eigenvalues of `AB`, ascending.
    pub eigenvalues: Vec<T>,
}

/// Matrix Hardy test: bounds `|ψ(x)| ≤ Ce^{−½Ax·x}` and
/// `|Fψ(p)| ≤ Ce^{−½Bp·p}` allow a nonzero `ψ` iff every eigenvalue of `AB`
/// is at most one, and force a Gaussian when all equal one.
pub fn hardy_verdict<T: Real>(a: &SpdMatrix<T>, b: &SpdMatrix<T>) -> Result<HardyReport<T>> {
    if a.dim() != b.dim() {
        return Err(Error::BadShape(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    let (root, _) = spd_roots(a)?;
    let eigenvalues = sym_eig(&b.sym().congruence(root.matrix()))?.values;
    Ok(HardyReport {
        verdict: UncertaintyVerdict::classify(&eigenvalues),
        eigenvalues,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointDiagonalization<T> {
    /// Invertible `L` with `LᵀAL = Λ` and `L⁻¹BL⁻ᵀ = Λ`.
    pub l: Mat<T>,
    /// Eigenvalues `λ` of `AB`, descending; `Λ = diag(√λ)`.
    pub lambdas: Vec<T>,
}

impl<T: Real> JointDiagonalization<T> {
    /// `diag(√λ)`.
    pub fn lambda_matrix(&self) -> Mat<T> {
        Mat::from_diag(&self.lambdas.iter().map(|v| v.sqrt()).collect::<Vec<_>>())
    }
}

/// `L = A^{−1/2} U D^{1/4}` where `A^{1/2}BA^{1/2} = UDUᵀ`.
pub fn joint_diagonalize<T: Real>(
    a: &SpdMatrix<T>,
    b: &SpdMatrix<T>,
) -> Result<JointDiagonalization<T>> {
    if a.dim() != b.dim() {
        return Err(Error::BadShape(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.dim();
    let (root, inv_root) = spd_roots(a)?;
    let eig = sym_eig(&b.sym().congruence(root.matrix()))?;
    let order: Vec<usize> = (0..n).rev().collect();
    let lambdas: Vec<T> = order.iter().map(|&j| eig.values[j]).collect();
    let u = Mat::from_fn(n, n, |i, k| eig.vectors[(i, order[k])]);
    let quarter = Mat::from_diag(&lambdas.iter().map(|v| v.sqrt().sqrt()).collect::<Vec<_>>());
    let l = &(inv_root.matrix() * &u) * &quarter;
    Ok(JointDiagonalization { l, lambdas })
}

/// A nonzero `ψ` with `Wψ(z) ≤ Ce^{−Mz·z}` exists iff every symplectic
/// eigenvalue of `M` is at most one, and must be a Gaussian when all equal
/// one.
pub fn wigner_subgaussian_check<T: Real>(m: &SpdMatrix<T>) -> Result<UncertaintyVerdict> {
    Ok(UncertaintyVerdict::classify(&symplectic_eigenvalues(m)?))
}
