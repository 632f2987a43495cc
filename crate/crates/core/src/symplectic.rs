//! Standard symplectic structure on `ℝ²ⁿ`, the group `Sp(n)`, symplectic
//! spectra and the Williamson normal form.
//!
//! Convention, fixed once for the whole crate: `z = (x, p)`,
//! `J = [[0, I], [−I, 0]]` and `ω(z, w) = (Jz)·w`. All bodies handled here
//! are centrally symmetric, so polar duality does not depend on the sign of
//! `ω`.

use crate::error::{Error, Result};
use crate::matops::{spd_roots, sym_eig, SpdMatrix, SymMatrix};
use crate::matrix::{dot, norm, Mat};
use crate::rng::Stream;
use crate::scalar::Real;

/// Residual accepted by [`SymplecticMatrix::new`].
pub const SYMPLECTIC_TOL: f64 = 1e-9;
/// Relative reconstruction residual guaranteed by [`williamson`].
pub const WILLIAMSON_TOL: f64 = 1e-8;
/// Condition number above which [`williamson`] refuses to run.
pub const WILLIAMSON_MAX_CONDITION: f64 = 1e12;

/// Phase-space point `z = (x, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector<T> {
    pub x: Vec<T>,
    pub p: Vec<T>,
}

impl<T: Real> PhaseVector<T> {
    pub fn new(x: Vec<T>, p: Vec<T>) -> Result<Self> {
        if x.len() != p.len() || x.is_empty() {
            return Err(Error::BadShape(format!(
                "x has {} entries, p has {}",
                x.len(),
                p.len()
            )));
        }
        if x.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { x, p })
    }

    /// Splits a stacked `2n` vector.
    pub fn from_stacked(z: &[T]) -> Result<Self> {
        if z.len() % 2 != 0 {
            return Err(Error::BadShape(format!(
                "phase vector needs even length, got {}",
                z.len()
            )));
        }
        let n = z.len() / 2;
        Self::new(z[..n].to_vec(), z[n..].to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            x: vec![T::zero(); n],
            p: vec![T::zero(); n],
        }
    }

    pub fn dof(&self) -> usize {
        self.x.len()
    }

    pub fn stacked(&self) -> Vec<T> {
        self.x.iter().chain(&self.p).copied().collect()
    }
}

/// `J = [[0, I], [−I, 0]]`.
pub fn standard_j<T: Real>(n: usize) -> Mat<T> {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = T::one();
        j[(n + i, i)] = -T::one();
    }
    j
}

/// `ω(z, w) = (Jz)·w = p_z·x_w − x_z·p_w`.
pub fn symp_product<T: Real>(z: &PhaseVector<T>, w: &PhaseVector<T>) -> Result<T> {
    if z.dof() != w.dof() {
        return Err(Error::BadShape(format!(
            "dimension mismatch: {} vs {}",
            z.dof(),
            w.dof()
        )));
    }
    Ok(omega(&z.stacked(), &w.stacked()))
}

/// `ω` on stacked vectors `(x, p)`.
pub fn omega<T: Real>(z: &[T], w: &[T]) -> T {
    let n = z.len() / 2;
    dot(&z[n..], &w[..n]) - dot(&z[..n], &w[n..])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticCheck<T> {
    pub verdict: bool,
    /// `‖SᵀJS − J‖_max`
    pub residual: T,
}

pub fn symplectic_residual<T: Real>(s: &Mat<T>) -> Result<T> {
    if !s.is_square() || s.rows() % 2 != 0 || s.rows() == 0 {
        return Err(Error::BadShape(format!(
            "expected a square matrix of even size, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let j = standard_j(s.rows() / 2);
    Ok((&(&s.transpose() * &j) * s).max_abs_diff(&j))
}

pub fn is_symplectic<T: Real>(s: &Mat<T>, tol: T) -> Result<SymplecticCheck<T>> {
    let residual = symplectic_residual(s)?;
    Ok(SymplecticCheck {
        verdict: residual <= tol,
        residual,
    })
}

/// Element of `Sp(n)`: `SᵀJS = J` within [`SYMPLECTIC_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix<T> {
    m: Mat<T>,
    residual: T,
}

impl<T: Real> SymplecticMatrix<T> {
    pub fn new(m: Mat<T>) -> Result<Self> {
        let residual = symplectic_residual(&m)?;
        if residual > T::tol(SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic {
                residual: residual.as_f64(),
            });
        }
        Ok(Self { m, residual })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Mat::identity(2 * n),
            residual: T::zero(),
        }
    }

    pub fn standard_j(n: usize) -> Self {
        Self {
            m: standard_j(n),
            residual: T::zero(),
        }
    }

    pub fn dof(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.m
    }

    pub fn residual(&self) -> T {
        self.residual
    }

    /// `S⁻¹ = −J Sᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = standard_j(self.dof());
        let inv = -&(&(&j * &self.m.transpose()) * &j);
        Self {
            residual: symplectic_residual(&inv).expect("square even matrix"),
            m: inv,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(&self.m * &other.m)
    }

    /// Block generator `diag(L, (Lᵀ)⁻¹)`.
    pub fn from_linear(l: &Mat<T>) -> Result<Self> {
        let lit = l.inverse()?.transpose();
        Self::new(Mat::block_diag(l, &lit))
    }

    /// Block generator `[[I, 0], [C, I]]` for symmetric `C`.
    pub fn shear(c: &SymMatrix<T>) -> Result<Self> {
        let n = c.dim();
        let id = Mat::identity(n);
        Self::new(Mat::from_blocks(&id, &Mat::zeros(n, n), c.matrix(), &id)?)
    }
}

/// Symplectic eigenvalues of an SPD `2n×2n` matrix, descending.
///
/// They are the moduli of the eigenvalues `±iλ_j` of the antisymmetric
/// matrix `K = M^{1/2} J M^{1/2}`, read off as the singular values of `K`
/// through the symmetric embedding `[[0, K], [Kᵀ, 0]]`.
pub fn symplectic_eigenvalues<T: Real>(m: &SpdMatrix<T>) -> Result<Vec<T>> {
    let k = root_j_root(m)?;
    let d = k.rows();
    let n = d / 2;
    let zero = Mat::zeros(d, d);
    let embed = Mat::from_blocks(&zero, &k, &k.transpose(), &zero)?;
    let eig = sym_eig(&SymMatrix::from_computed(embed))?;
    // Positive half of the spectrum, descending: λ1, λ1, λ2, λ2, ...
    let positive: Vec<T> = eig.values.iter().rev().take(d).copied().collect();
    Ok((0..n)
        .map(|j| (positive[2 * j] + positive[2 * j + 1]) * T::lit(0.5))
        .collect())
}

fn root_j_root<T: Real>(m: &SpdMatrix<T>) -> Result<Mat<T>> {
    let d = m.dim();
    if d % 2 != 0 {
        return Err(Error::BadShape(format!(
            "symplectic spectrum needs even dimension, got {d}"
        )));
    }
    let (root, _) = spd_roots(m)?;
    Ok(&(root.matrix() * &standard_j(d / 2)) * root.matrix())
}

/// Williamson normal form `M = Sᵀ diag(Λ, Λ) S`.
#[derive(Clone, Debug)]
pub struct WilliamsonForm<T> {
    pub s: SymplecticMatrix<T>,
    /// Symplectic eigenvalues, descending.
    pub lambdas: Vec<T>,
    /// `‖Sᵀ D S − M‖_max / ‖M‖_max`
    pub residual: T,
}

impl<T: Real> WilliamsonForm<T> {
    /// `diag(Λ, Λ)`.
    pub fn diagonal(&self) -> Mat<T> {
        let d: Vec<T> = self.lambdas.iter().chain(&self.lambdas).copied().collect();
        Mat::from_diag(&d)
    }

    pub fn reconstruct(&self) -> Mat<T> {
        let s = self.s.matrix();
        &(&s.transpose() * &self.diagonal()) * s
    }
}

/// Williamson diagonalization of an SPD `2n×2n` matrix.
///
/// With `K = M^{1/2} J M^{1/2}` and an orthogonal `O` bringing `K` to the
/// real canonical form `[[0, Λ], [−Λ, 0]]`, the factor is
/// `S = diag(Λ, Λ)^{−1/2} Oᵀ M^{1/2}`. `O` is built one invariant plane at a
/// time: the top eigenvector `u` of `KᵀK` restricted to the remaining
/// invariant subspace, paired with `v = −Ku / |Ku|`. Degenerate spectra are
/// handled because every step works inside the orthogonal complement of the
/// planes already chosen. A final symplectic Gram–Schmidt pass cleans the
/// columns of `S`.
pub fn williamson<T: Real>(m: &SpdMatrix<T>) -> Result<WilliamsonForm<T>> {
    let d = m.dim();
    if d % 2 != 0 {
        return Err(Error::BadShape(format!(
            "Williamson form needs even dimension, got {d}"
        )));
    }
    if m.condition_number() > T::lit(WILLIAMSON_MAX_CONDITION) {
        return Err(Error::NumericalFailure(format!(
            "condition number {:e} exceeds {WILLIAMSON_MAX_CONDITION:e}",
            m.condition_number().as_f64()
        )));
    }
    let n = d / 2;
    let (root, _) = spd_roots(m)?;
    let k = &(root.matrix() * &standard_j(n)) * root.matrix();

    let mut remaining = Mat::identity(d);
    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(n);
    for _ in 0..n {
        let r = remaining.cols();
        let restricted = &(&remaining.transpose() * &k) * &remaining;
        let gram = SymMatrix::from_computed(&restricted.transpose() * &restricted);
        let eig = sym_eig(&gram)?;
        // First index attaining the maximum keeps S = I for M = I.
        let top = (0..r).fold(0, |best, i| {
            if eig.values[i] > eig.values[best] {
                i
            } else {
                best
            }
        });
        let w = eig.vectors.column(top);
        let mut u = remaining.matvec(&w);
        let un = norm(&u);
        u.iter_mut().for_each(|x| *x = *x / un);
        let ku = k.matvec(&u);
        let lambda = norm(&ku);
        if !(lambda > T::zero()) {
            return Err(Error::NumericalFailure(
                "vanishing symplectic eigenvalue".into(),
            ));
        }
        let v: Vec<T> = ku.iter().map(|&x| -x / lambda).collect();

        if r > 2 {
            // Orthonormal complement of span(u, v) inside the remaining subspace.
            let pw = w;
            let pv = remaining.transpose().matvec(&v);
            let proj = Mat::from_fn(r, r, |i, j| {
                let id = if i == j { T::one() } else { T::zero() };
                id - pw[i] * pw[j] - pv[i] * pv[j]
            });
            let ceig = sym_eig(&SymMatrix::from_computed(proj))?;
            remaining = &remaining * &ceig.vectors.columns(2, r - 2);
        }
        us.push(u);
        vs.push(v);
        lambdas.push(lambda);
    }

    let mut o = Mat::zeros(d, d);
    for j in 0..n {
        o.set_column(j, &us[j]);
        o.set_column(n + j, &vs[j]);
    }
    let inv_root_d: Vec<T> = lambdas
        .iter()
        .chain(&lambdas)
        .map(|l| l.sqrt().recip())
        .collect();
    let s = &(&Mat::from_diag(&inv_root_d) * &o.transpose()) * root.matrix();
    let s = symplectic_gram_schmidt(&s);

    let s = SymplecticMatrix::new(s)
        .map_err(|e| Error::NumericalFailure(format!("Williamson factor: {e}")))?;
    let mut form = WilliamsonForm {
        s,
        lambdas,
        residual: T::zero(),
    };
    let scale = m.matrix().max_abs();
    form.residual = form.reconstruct().max_abs_diff(m.matrix()) / scale;
    if form.residual > T::tol(WILLIAMSON_TOL) {
        return Err(Error::NumericalFailure(format!(
            "Williamson reconstruction residual {:e}",
            form.residual.as_f64()
        )));
    }
    Ok(form)
}

/// One symplectic Gram–Schmidt pass over the columns `(e_1..e_n, f_1..f_n)`
/// of `s`, enforcing `e_iᵀJf_j = δ_ij` and `e_iᵀJe_j = f_iᵀJf_j = 0`.
pub(crate) fn symplectic_gram_schmidt<T: Real>(s: &Mat<T>) -> Mat<T> {
    let d = s.rows();
    let n = d / 2;
    let j = standard_j::<T>(n);
    let form = |a: &[T], b: &[T]| dot(a, &j.matvec(b));
    let mut es: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut fs: Vec<Vec<T>> = Vec::with_capacity(n);
    let project = |z: &mut Vec<T>, es: &[Vec<T>], fs: &[Vec<T>]| {
        // z = Σ a_i e_i + b_i f_i + rest with a_i = −f_iᵀJz, b_i = e_iᵀJz.
        let coeffs: Vec<(T, T)> = es
            .iter()
            .zip(fs)
            .map(|(e, f)| (-form(f, z), form(e, z)))
            .collect();
        for ((e, f), (a, b)) in es.iter().zip(fs).zip(coeffs) {
            for r in 0..z.len() {
                z[r] = z[r] - a * e[r] - b * f[r];
            }
        }
    };
    for k in 0..n {
        let mut e = s.column(k);
        let mut f = s.column(n + k);
        project(&mut e, &es, &fs);
        project(&mut f, &es, &fs);
        let c = form(&e, &f);
        f.iter_mut().for_each(|x| *x = *x / c);
        es.push(e);
        fs.push(f);
    }
    let mut out = Mat::zeros(d, d);
    for k in 0..n {
        out.set_column(k, &es[k]);
        out.set_column(n + k, &fs[k]);
    }
    out
}

/// Deterministic random element of `Sp(n)`.
///
/// Alternating product `G₁ H₁ J G₂ H₂` of generators `G = diag(L, (Lᵀ)⁻¹)`
/// with `L = I + E` and `H = [[I, 0], [C, I]]` with symmetric `C`, where
/// the entries of `E` and `C` are uniform in `(−spread, spread)`. Draws of
/// `L` with `|det L| < 0.1` are rejected and redrawn from the same stream.
pub fn random_symplectic<T: Real>(seed: u64, n: usize, spread: f64) -> SymplecticMatrix<T> {
    random_symplectic_from(&mut Stream::new(seed, 0), n, spread)
}

pub fn random_symplectic_from<T: Real>(
    rng: &mut Stream,
    n: usize,
    spread: f64,
) -> SymplecticMatrix<T> {
    assert!(spread > 0.0, "spread must be positive");
    let linear = |rng: &mut Stream| loop {
        let l: Mat<T> = &Mat::identity(n) + &rng.uniform_matrix(n, n, spread);
        if l.determinant().abs() >= T::lit(0.1) {
            return l;
        }
    };
    let shear = |rng: &mut Stream| SymMatrix::from_computed(rng.uniform_matrix(n, n, spread));
    let g1 = SymplecticMatrix::from_linear(&linear(rng)).expect("invertible generator");
    let h1 = SymplecticMatrix::shear(&shear(rng)).expect("symmetric shear");
    let g2 = SymplecticMatrix::from_linear(&linear(rng)).expect("invertible generator");
    let h2 = SymplecticMatrix::shear(&shear(rng)).expect("symmetric shear");
    let j = standard_j::<T>(n);
    let m = &(&(&(g1.matrix() * h1.matrix()) * &j) * g2.matrix()) * h2.matrix();
    let residual = symplectic_residual(&m).expect("square even matrix");
    SymplecticMatrix { m, residual }
}
