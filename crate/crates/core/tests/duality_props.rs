mod common;

use common::{
    config, mat, random_ball, random_pair, random_plane_ellipsoid, random_spd, random_symplectic,
    seed_and_dim, spd,
};
use proptest::prelude::*;
use sympolar::lagrangian::LagrangianPlane;
use sympolar::matops::BlockSplit;
use sympolar::oracle::SampleCloud;
use sympolar::{
    capacity, dual_pair_verdict, form_pair_verdict, frame_from_bases, john_of_dual_product,
    lagrangian_polar_dual, lagrangian_projection, omega, plane_from_basis, product_capacity,
    reconstruct_ball, schur_complement, symplectic_eigenvalues, thm1_check, thm1_trials,
    AmbientEllipsoid, DualStatus, Eliminate, Mat, PlaneEllipsoid, Side, SpdMatrix, Stream,
    TransversePair,
};

/// Sampled Lagrangian polar test: `max ω(z, z′)` over boundary points `z` of
/// `x`, for a candidate `z′` on the other plane.
fn max_omega(x: &PlaneEllipsoid, candidate: &[f64], count: usize) -> f64 {
    let q = x.plane().basis();
    SampleCloud::ellipsoid_boundary(0, x.form(), count)
        .points()
        .iter()
        .map(|c| omega(&q.matvec(c), candidate))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks the computed dual against the sampling oracle: boundary points of
/// the dual sit at `max ω ≈ 1`, slightly scaled points fall on either side.
fn assert_dual_by_sampling(x: &PlaneEllipsoid, dual: &PlaneEllipsoid) {
    let q = dual.plane().basis();
    for c in SampleCloud::ellipsoid_boundary(5, dual.form(), 16).points() {
        let z = q.matvec(c);
        let m = max_omega(x, &z, 10_000);
        assert!(m <= 1.0 + 1e-9 && m >= 1.0 - 1e-3, "boundary point: {m}");
        let outside: Vec<f64> = z.iter().map(|v| v * 1.01).collect();
        assert!(max_omega(x, &outside, 10_000) > 1.0 + 1e-3);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn inclusion_for_symplectic_balls((seed, n) in seed_and_dim(3)) {
        let mut rng = Stream::new(seed, 0);
        let omega = random_ball(&mut rng, n);
        let pair = random_pair(&mut rng, n);
        let r = thm1_check(&omega, &pair).unwrap();
        prop_assert!(r.verdict && r.inclusion_margin >= -1e-9);
    }

    #[test]
    fn schur_identities_on_symplectic_forms((seed, n) in seed_and_dim(3)) {
        let s = random_symplectic(&mut Stream::new(seed, 0), n);
        let m = SpdMatrix::from_matrix(&s.matrix().transpose() * s.matrix()).unwrap();
        let b = BlockSplit::new(m.sym()).unwrap();
        let scale = m.matrix().max_abs();
        let pp_inv = SpdMatrix::from_matrix(b.pp.clone()).unwrap().inverse();
        let xx_inv = SpdMatrix::from_matrix(b.xx.clone()).unwrap().inverse();
        let sx = schur_complement(&b, Eliminate::Pp).unwrap();
        let sp = schur_complement(&b, Eliminate::Xx).unwrap();
        prop_assert!(sx.matrix().max_abs_diff(pp_inv.matrix()) <= 1e-9 * scale);
        prop_assert!(sp.matrix().max_abs_diff(xx_inv.matrix()) <= 1e-9 * scale);
    }

    #[test]
    fn reconstruction_round_trip((seed, n) in seed_and_dim(3)) {
        let mut rng = Stream::new(seed, 0);
        let pair = random_pair(&mut rng, n);
        let x = random_plane_ellipsoid(&mut rng, &pair, 10.0);
        let ball = reconstruct_ball(&x, &pair).unwrap();
        let first = lagrangian_projection(&ball, &pair, Side::First).unwrap();
        let second = lagrangian_projection(&ball, &pair, Side::Second).unwrap();
        prop_assert!(first.approx_eq(&x, 1e-9));
        prop_assert!(second.approx_eq(&lagrangian_polar_dual(&x, &pair).unwrap(), 1e-9));
        prop_assert!((capacity(&ball).unwrap() - std::f64::consts::PI).abs() <= 1e-9);
    }

    #[test]
    fn john_ellipsoid_has_unit_spectrum((seed, n) in seed_and_dim(3)) {
        let mut rng = Stream::new(seed, 0);
        let pair = random_pair(&mut rng, n);
        let x = random_plane_ellipsoid(&mut rng, &pair, 10.0);
        let john = john_of_dual_product(&x, &pair).unwrap();
        for l in symplectic_eigenvalues(john.form()).unwrap() {
            prop_assert!((l - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn enlarging_a_dual_pair_keeps_it_dual((seed, n) in seed_and_dim(4)) {
        let mut rng = Stream::new(seed, 0);
        let a = random_spd(&mut rng, n, 5.0);
        let b = random_spd(&mut rng, n, 5.0);
        let v = form_pair_verdict(&a, &b);
        if v.status.is_dual() {
            let eps = rng.uniform::<f64>(0.0, 0.5) * a.min_eig().min(b.min_eig());
            let shrink = |m: &SpdMatrix| SpdMatrix::from_matrix(m.matrix() - &Mat::identity(n).scale(eps)).unwrap();
            prop_assert!(form_pair_verdict(&shrink(&a), &shrink(&b)).status.is_dual());
        }
    }

    #[test]
    fn product_capacity_detects_dual_pairs((seed, n) in seed_and_dim(4)) {
        let mut rng = Stream::new(seed, 0);
        let a = random_spd(&mut rng, n, 3.0);
        let b = random_spd(&mut rng, n, 3.0);
        let c = product_capacity(&a, &b).unwrap();
        if (c - 4.0).abs() > 1e-9 {
            prop_assert_eq!(c >= 4.0, form_pair_verdict(&a, &b).status.is_dual());
        }
    }

    #[test]
    fn polar_dual_does_not_depend_on_the_frame((seed, n) in seed_and_dim(3)) {
        let mut rng = Stream::new(seed, 0);
        let pair = random_pair(&mut rng, n);
        let l = &Mat::identity(n) + &rng.uniform_matrix(n, n, 0.5);
        prop_assume!(l.determinant().abs() > 0.1);
        let e = &pair.first().basis().clone() * &l;
        let frame = frame_from_bases(&e, pair.second().basis()).unwrap();
        let other = TransversePair::with_frame(pair.first().clone(), pair.second().clone(), frame).unwrap();
        let x = random_plane_ellipsoid(&mut rng, &pair, 10.0);
        let a = lagrangian_polar_dual(&x, &pair).unwrap();
        let b = lagrangian_polar_dual(&x, &other).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-8));
    }
}

#[test]
fn coupled_and_decoupled_equality_cases() {
    let pair = TransversePair::coordinate(2);
    let p = spd(&[&[2.0, 0.3], &[0.3, 0.5]]);
    let decoupled =
        AmbientEllipsoid::from_matrix(Mat::block_diag(p.matrix(), p.inverse().matrix())).unwrap();
    assert!(thm1_check(&decoupled, &pair).unwrap().equality_residual <= 1e-9);
    let shear = sympolar::SymplecticMatrix::shear(
        &sympolar::SymMatrix::new(mat(&[&[0.4, 0.1], &[0.1, -0.2]])).unwrap(),
    )
    .unwrap();
    let coupled = decoupled.pull_back(&shear).unwrap();
    assert!(BlockSplit::new(coupled.form().sym()).unwrap().xp.max_abs() >= 0.1);
    let r = thm1_check(&coupled, &pair).unwrap();
    assert!(r.verdict && r.equality_residual >= 1e-3);
}

#[test]
fn harness_over_many_trials() {
    let trials = thm1_trials::<f64>(2024, 300, 0.5, None, 3).unwrap();
    assert_eq!(trials.len(), 300);
    assert!(trials.iter().all(|t| t.report.inclusion_margin >= -1e-9));
    assert!((1..=3).all(|n| trials.iter().any(|t| t.dof == n)));
}

#[test]
fn dual_on_the_coordinate_pair_by_sampling() {
    let pair = TransversePair::coordinate(2);
    let x = PlaneEllipsoid::on_x(spd(&[&[3.0, 1.0], &[1.0, 2.0]]));
    assert_dual_by_sampling(&x, &lagrangian_polar_dual(&x, &pair).unwrap());
}

#[test]
fn dual_on_the_swapped_pair_by_sampling() {
    let pair = TransversePair::new(
        LagrangianPlane::coordinate_p(2),
        LagrangianPlane::coordinate_x(2),
    )
    .unwrap();
    let a = spd(&[&[2.0, 0.5], &[0.5, 1.0]]);
    let x = PlaneEllipsoid::on_p(a.clone());
    let dual = lagrangian_polar_dual(&x, &pair).unwrap();
    assert!(dual.plane().same_as(&LagrangianPlane::coordinate_x(2)));
    assert!(dual.form().matrix().max_abs_diff(a.inverse().matrix()) < 1e-14);
    assert_dual_by_sampling(&x, &dual);
}

#[test]
fn dual_on_diagonal_lines_by_sampling() {
    let l = plane_from_basis(&mat(&[&[1.0], &[1.0]])).unwrap();
    let lp = plane_from_basis(&mat(&[&[1.0], &[-1.0]])).unwrap();
    let pair = TransversePair::new(l.clone(), lp).unwrap();
    let x = PlaneEllipsoid::new(l, SpdMatrix::identity(1)).unwrap();
    assert_dual_by_sampling(&x, &lagrangian_polar_dual(&x, &pair).unwrap());
}

#[test]
fn verdicts_through_random_pairs() {
    let mut rng = Stream::new(12, 0);
    for n in 1..=3 {
        let pair = random_pair(&mut rng, n);
        let x = random_plane_ellipsoid(&mut rng, &pair, 5.0);
        let exact = lagrangian_polar_dual(&x, &pair).unwrap();
        assert_eq!(
            dual_pair_verdict(&x, &exact, &pair).unwrap().status,
            DualStatus::ExactDual
        );
        let bigger = PlaneEllipsoid::new(exact.plane().clone(), exact.form().scale(0.5)).unwrap();
        assert_eq!(
            dual_pair_verdict(&x, &bigger, &pair).unwrap().status,
            DualStatus::Dual
        );
        let smaller = PlaneEllipsoid::new(exact.plane().clone(), exact.form().scale(2.0)).unwrap();
        assert_eq!(
            dual_pair_verdict(&x, &smaller, &pair).unwrap().status,
            DualStatus::NotDual
        );
    }
}
