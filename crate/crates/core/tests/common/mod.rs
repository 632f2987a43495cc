#![allow(dead_code)]

use proptest::prelude::*;
use sympolar::duality::random_symplectic_ball;
use sympolar::oracle::random_spd_from;
use sympolar::{
    AmbientEllipsoid, Mat, PlaneEllipsoid, SpdMatrix, Stream, SymMatrix, SymplecticMatrix,
    TransversePair,
};

pub fn mat(rows: &[&[f64]]) -> Mat {
    Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn spd(rows: &[&[f64]]) -> SpdMatrix {
    SpdMatrix::from_matrix(mat(rows)).unwrap()
}

/// Random symmetric matrix with entries in `(−1, 1)`.
pub fn random_sym(rng: &mut Stream, n: usize) -> SymMatrix {
    let g: Mat = rng.uniform_matrix(n, n, 1.0);
    SymMatrix::new((&g + &g.transpose()).scale(0.5)).unwrap()
}

pub fn random_spd(rng: &mut Stream, n: usize, cap: f64) -> SpdMatrix {
    random_spd_from(rng, n, cap)
}

pub fn random_symplectic(rng: &mut Stream, n: usize) -> SymplecticMatrix {
    sympolar::symplectic::random_symplectic_from(rng, n, 0.5)
}

pub fn random_pair(rng: &mut Stream, n: usize) -> TransversePair {
    TransversePair::random(rng, n, 0.5).unwrap()
}

pub fn random_ball(rng: &mut Stream, n: usize) -> AmbientEllipsoid {
    random_symplectic_ball(rng, n, 0.5)
}

/// Random ellipsoid on the first plane of `pair`.
pub fn random_plane_ellipsoid(rng: &mut Stream, pair: &TransversePair, cap: f64) -> PlaneEllipsoid {
    PlaneEllipsoid::new(pair.first().clone(), random_spd(rng, pair.dof(), cap)).unwrap()
}

/// `(seed, n)` with `n ∈ 1..=max_n`; tests build their random objects from
/// `Stream::new(seed, 0)` so failures shrink to a reproducible seed.
pub fn seed_and_dim(max_n: usize) -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1..=max_n)
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}
