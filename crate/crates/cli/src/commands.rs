//! One function per subcommand. Each validates its inputs through the
//! [`Context`], calls the library, and returns the report body.

use serde_json::{Map, Value};
use sympolar::duality::thm1_trials;
use sympolar::oracle::SampleCloud;
use sympolar::quantum::gaussian_state_wigner;
use sympolar::{
    capacity, certify, dual_pair_verdict, frame_symplectic, gaussian_state_wigner_form,
    gaussian_wigner_eval, hardy_verdict, is_symplectic, is_transverse, john_of_dual_product,
    joint_diagonalize, lagrangian_polar_dual, lagrangian_projection, linear_image, mahler_volume,
    mc_polar_membership, mc_projection_support, orthogonal_projection, plane_from_ab, polar_dual,
    product_capacity, psd_margin, random_spd, random_symplectic, reconstruct_ball,
    schur_complement, spd_roots, standard_j, sym_eig, symp_product, symplectic_eigenvalues,
    uncertainty_ellipsoid, wigner_quadrature, wigner_subgaussian_check, williamson,
    AmbientEllipsoid, BlockSplit, Coordinate, CovarianceMatrix, DualStatus, Eliminate,
    GaussianState, Mat, PhaseVector, PlaneEllipsoid, QuadratureGrid, Side, SpdMatrix,
    SupportFunction, SymMatrix, UncertaintyVerdict,
};

use crate::args::{Command, Onto, OracleCommand, PairArgs, PlaneSide};
use crate::context::{pair_spec, Context, Failure, PairSpec, Shape};
use crate::json::{mat, num, nums};

/// Report body of a successful computation.
pub struct Outcome {
    pub result: Value,
    /// `Some(false)` for a computed negative verdict.
    pub verdict: Option<bool>,
    pub seed: Option<u64>,
}

impl Outcome {
    fn plain(result: Fields) -> Self {
        Self {
            result: result.into(),
            verdict: None,
            seed: None,
        }
    }

    fn verdict(result: Fields, verdict: bool) -> Self {
        Self {
            result: result.into(),
            verdict: Some(verdict),
            seed: None,
        }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Result object under construction.
#[derive(Default)]
struct Fields(Map<String, Value>);

impl Fields {
    fn new() -> Self {
        Self::default()
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    fn num(self, key: &str, v: f64) -> Self {
        self.with(key, num(v))
    }

    fn nums(self, key: &str, v: &[f64]) -> Self {
        self.with(key, nums(v))
    }

    fn mat(self, key: &str, m: &Mat) -> Self {
        self.with(key, mat(m))
    }
}

impl From<Fields> for Value {
    fn from(f: Fields) -> Self {
        Value::Object(f.0)
    }
}

type Run = Result<Outcome, Failure>;

fn need<T>(v: Option<T>) -> T {
    v.expect("inputs were validated")
}

pub fn execute(command: &Command, ctx: &mut Context) -> Run {
    match command {
        Command::Spectrum { input } => spectrum(ctx, input),
        Command::Williamson { input } => williamson_form(ctx, input),
        Command::Capacity { input, direction } => capacity_of(ctx, input, direction.as_deref()),
        Command::Dual { input, map } => dual(ctx, input, map.as_deref()),
        Command::Lagdual { input, pair } => lagdual(ctx, input, pair),
        Command::Project { input, onto, pair } => project(ctx, input, *onto, pair),
        Command::John { input, pair } => john(ctx, input, pair),
        Command::Thm1 {
            omega,
            trials,
            seed,
            max_dof,
            spread,
        } => thm1(ctx, omega.as_deref(), *trials, seed.seed, *max_dof, *spread),
        Command::Reconstruct { input, pair } => reconstruct(ctx, input, pair),
        Command::Pairtest { x, y, pair } => pairtest(ctx, x, y, pair),
        Command::ProductCapacity { a, b } => product(ctx, a, b),
        Command::Certify { input } => certify_sigma(ctx, input),
        Command::Hardy { a, b, m } => hardy(ctx, a.as_deref(), b.as_deref(), m.as_deref()),
        Command::Jointdiag { a, b } => jointdiag(ctx, a, b),
        Command::Wigner {
            a,
            b,
            sigma,
            z,
            zbar,
        } => wigner(
            ctx,
            a.as_deref(),
            b.as_deref(),
            sigma.as_deref(),
            z.as_deref(),
            zbar.as_deref(),
        ),
        Command::Roots { input } => roots(ctx, input),
        Command::Symcheck { input, z, w } => symcheck(ctx, input, z.as_deref(), w.as_deref()),
        Command::Plane { basis, a, b, other } => plane(
            ctx,
            basis.as_deref(),
            a.as_deref(),
            b.as_deref(),
            other.as_deref(),
        ),
        Command::Oracle(o) => oracle(ctx, o),
    }
}

fn spectrum(ctx: &mut Context, input: &str) -> Run {
    let m = ctx.spd("--in", input, Shape::Full);
    ctx.finish()?;
    let m = need(m);
    let lambdas = symplectic_eigenvalues(&m)?;
    Ok(Outcome::plain(
        Fields::new()
            .with("n", m.dim() / 2)
            .nums("lambdas", &lambdas),
    ))
}

fn williamson_form(ctx: &mut Context, input: &str) -> Run {
    let m = ctx.spd("--in", input, Shape::Full);
    ctx.finish()?;
    let w = williamson(&need(m))?;
    Ok(Outcome::plain(
        Fields::new()
            .nums("lambdas", &w.lambdas)
            .mat("s", w.s.matrix())
            .num("residual", w.residual),
    ))
}

fn capacity_of(ctx: &mut Context, input: &str, direction: Option<&[f64]>) -> Run {
    let m = ctx.spd("--in", input, Shape::Full);
    if let (Some(m), Some(u)) = (&m, direction) {
        ctx.vector("--direction", u, m.dim());
    }
    ctx.finish()?;
    let omega = AmbientEllipsoid::new(need(m))?;
    let mut out = Fields::new().num("capacity", capacity(&omega)?);
    if let Some(u) = direction {
        out = out.num("support", omega.support(u)?);
    }
    Ok(Outcome::plain(out))
}

fn dual(ctx: &mut Context, input: &str, map: Option<&str>) -> Run {
    let a = ctx.spd("--in", input, Shape::Half);
    let l = map.and_then(|p| ctx.linear("--map", p, Shape::Half));
    ctx.finish()?;
    let x = PlaneEllipsoid::on_x(need(a));
    let polar = polar_dual(&x);
    let mut out = Fields::new()
        .mat("polar_form", polar.form().matrix())
        .num("mahler_volume", mahler_volume(&x));
    if let Some(l) = l {
        // (LX)° = L⁻ᵀ X°.
        let image = linear_image(&l, &x)?;
        let image_polar = polar_dual(&image);
        let via_polar = linear_image(&l.inverse()?.transpose(), &polar)?;
        out = out
            .mat("image_form", image.form().matrix())
            .mat("image_polar_form", image_polar.form().matrix())
            .num(
                "image_duality_residual",
                image_polar
                    .form()
                    .matrix()
                    .max_abs_diff(via_polar.form().matrix()),
            );
    }
    Ok(Outcome::plain(out))
}

/// Plane ellipsoid read in the coordinates of a user basis.
fn on_basis(basis: &Mat, form: &SpdMatrix) -> Result<PlaneEllipsoid, Failure> {
    Ok(PlaneEllipsoid::from_basis_form(basis, form)?)
}

fn half_form_and_pair(
    ctx: &mut Context,
    input: &str,
    pair: &PairArgs,
) -> Result<(SpdMatrix, PairSpec), Failure> {
    let a = ctx.spd("--in", input, Shape::Half);
    let bases = ctx.pair_bases(pair);
    ctx.finish()?;
    let a = need(a);
    let spec = pair_spec(bases, a.dim())?;
    Ok((a, spec))
}

fn lagdual(ctx: &mut Context, input: &str, pair: &PairArgs) -> Run {
    let (a, spec) = half_form_and_pair(ctx, input, pair)?;
    let x = on_basis(&spec.first_basis, &a)?;
    let dual = lagrangian_polar_dual(&x, &spec.pair)?;
    Ok(Outcome::plain(Fields::new().mat(
        "dual_form",
        dual.form_in_basis(&spec.second_basis)?.matrix(),
    )))
}

fn project(ctx: &mut Context, input: &str, onto: Onto, pair: &PairArgs) -> Run {
    let m = ctx.spd("--in", input, Shape::Full);
    let bases = ctx.pair_bases(pair);
    ctx.finish()?;
    let omega = AmbientEllipsoid::new(need(m))?;
    let n = omega.dof();
    let coordinate = |c: Coordinate, eliminate: Eliminate| -> Run {
        if bases.0.is_some() || bases.1.is_some() {
            return Err(Failure::Usage(
                "--plane-l/--plane-lp only apply to --onto first|second".into(),
            ));
        }
        let form = orthogonal_projection(&omega, c)?;
        let schur = schur_complement(&BlockSplit::new(omega.form().sym())?, eliminate)?;
        Ok(Outcome::plain(
            Fields::new()
                .mat("form", form.form().matrix())
                .mat("schur_complement", schur.matrix()),
        ))
    };
    match onto {
        Onto::X => coordinate(Coordinate::X, Eliminate::Pp),
        Onto::P => coordinate(Coordinate::P, Eliminate::Xx),
        Onto::First | Onto::Second => {
            let spec = pair_spec(bases.clone(), n)?;
            let (side, basis) = match onto {
                Onto::First => (Side::First, &spec.first_basis),
                _ => (Side::Second, &spec.second_basis),
            };
            let form = lagrangian_projection(&omega, &spec.pair, side)?.form_in_basis(basis)?;
            Ok(Outcome::plain(Fields::new().mat("form", form.matrix())))
        }
    }
}

fn ball_report(ball: &AmbientEllipsoid) -> Result<Fields, Failure> {
    Ok(Fields::new()
        .mat("form", ball.form().matrix())
        .nums(
            "symplectic_eigenvalues",
            &symplectic_eigenvalues(ball.form())?,
        )
        .num("capacity", capacity(ball)?))
}

fn john(ctx: &mut Context, input: &str, pair: &PairArgs) -> Run {
    let (a, spec) = half_form_and_pair(ctx, input, pair)?;
    let ball = john_of_dual_product(&on_basis(&spec.first_basis, &a)?, &spec.pair)?;
    Ok(Outcome::plain(ball_report(&ball)?))
}

fn reconstruct(ctx: &mut Context, input: &str, pair: &PairArgs) -> Run {
    let (a, spec) = half_form_and_pair(ctx, input, pair)?;
    let ball = reconstruct_ball(&on_basis(&spec.first_basis, &a)?, &spec.pair)?;
    let first =
        lagrangian_projection(&ball, &spec.pair, Side::First)?.form_in_basis(&spec.first_basis)?;
    let second = lagrangian_projection(&ball, &spec.pair, Side::Second)?
        .form_in_basis(&spec.second_basis)?;
    Ok(Outcome::plain(
        ball_report(&ball)?
            .mat("first_projection", first.matrix())
            .mat("second_projection", second.matrix()),
    ))
}

fn thm1(
    ctx: &mut Context,
    omega: Option<&str>,
    trials: u64,
    seed: u64,
    max_dof: usize,
    spread: f64,
) -> Run {
    let m = omega.and_then(|p| ctx.spd("--omega", p, Shape::Full));
    if max_dof == 0 {
        ctx.problem("--max-dof", "must be at least 1");
    }
    if !(spread.is_finite() && spread >= 0.0) {
        ctx.problem("--spread", "must be finite and nonnegative");
    }
    ctx.finish()?;
    let omega = m.map(AmbientEllipsoid::new).transpose()?;
    let results = thm1_trials::<f64>(seed, trials, spread, omega.as_ref(), max_dof)?;
    let all_included = results.iter().all(|t| t.report.verdict);
    let min_margin = results
        .iter()
        .map(|t| t.report.inclusion_margin)
        .fold(f64::INFINITY, f64::min);
    let detail: Vec<Value> = results
        .iter()
        .map(|t| {
            Fields::new()
                .with("index", t.index)
                .with("dof", t.dof)
                .with("included", t.report.verdict)
                .num("inclusion_margin", t.report.inclusion_margin)
                .num("equality_residual", t.report.equality_residual)
                .num("max_symplectic_eig", t.report.max_symplectic_eig)
                .num("coupling", t.coupling)
                .into()
        })
        .collect();
    let out = Fields::new()
        .with("trials", trials)
        .with("all_included", all_included)
        .num("min_margin", min_margin)
        .with("results", detail);
    Ok(Outcome::verdict(out, all_included).seeded(seed))
}

fn pairtest(ctx: &mut Context, x: &str, y: &str, pair: &PairArgs) -> Run {
    let a = ctx.spd("--x", x, Shape::Half);
    let b = ctx.spd("--y", y, Shape::Half);
    let bases = ctx.pair_bases(pair);
    if let (Some(a), Some(b)) = (&a, &b) {
        if a.dim() != b.dim() {
            ctx.problem("--y", format!("expected n = {}", a.dim()));
        }
    }
    ctx.finish()?;
    let (a, b) = (need(a), need(b));
    let spec = pair_spec(bases, a.dim())?;
    let v = dual_pair_verdict(
        &on_basis(&spec.first_basis, &a)?,
        &on_basis(&spec.second_basis, &b)?,
        &spec.pair,
    )?;
    let status = match v.status {
        DualStatus::NotDual => "not_dual",
        DualStatus::Dual => "dual",
        DualStatus::ExactDual => "exact_dual",
    };
    let out = Fields::new()
        .with("status", status)
        .num("margin", v.margin)
        .num("normalized_margin", v.normalized_margin)
        .num("exactness_residual", v.exactness_residual);
    Ok(Outcome::verdict(out, v.status.is_dual()))
}

fn form_pair(ctx: &mut Context, a: &str, b: &str) -> Result<(SpdMatrix, SpdMatrix), Failure> {
    let fa = ctx.spd("--a", a, Shape::Half);
    let fb = ctx.spd("--b", b, Shape::Half);
    if let (Some(fa), Some(fb)) = (&fa, &fb) {
        if fa.dim() != fb.dim() {
            ctx.problem("--b", format!("expected n = {}", fa.dim()));
        }
    }
    ctx.finish()?;
    Ok((need(fa), need(fb)))
}

fn product(ctx: &mut Context, a: &str, b: &str) -> Run {
    let (a, b) = form_pair(ctx, a, b)?;
    Ok(Outcome::plain(
        Fields::new().num("capacity", product_capacity(&a, &b)?),
    ))
}

fn certify_sigma(ctx: &mut Context, input: &str) -> Run {
    let m = ctx.spd("--in", input, Shape::Full);
    ctx.finish()?;
    let sigma = CovarianceMatrix::new(need(m))?;
    let r = certify(&sigma)?;
    let omega = uncertainty_ellipsoid(&sigma)?;
    let out = Fields::new()
        .nums("rs_margins", &r.rs_margins)
        .num("min_hermitian_eig", r.min_hermitian_eig)
        .num("min_symplectic_eig", r.min_symplectic_eig)
        .with("admissible", r.admissible)
        .mat("uncertainty_form", omega.form().matrix())
        .num("uncertainty_capacity", capacity(&omega)?);
    Ok(Outcome::verdict(out, r.admissible))
}

fn verdict_name(v: UncertaintyVerdict) -> &'static str {
    match v {
        UncertaintyVerdict::Inadmissible => "inadmissible",
        UncertaintyVerdict::Admissible => "admissible",
        UncertaintyVerdict::GaussianForced => "gaussian_forced",
    }
}

fn hardy(ctx: &mut Context, a: Option<&str>, b: Option<&str>, m: Option<&str>) -> Run {
    match (a, b, m) {
        (Some(a), Some(b), None) => {
            let (a, b) = form_pair(ctx, a, b)?;
            let h = hardy_verdict(&a, &b)?;
            let out = Fields::new()
                .with("verdict", verdict_name(h.verdict))
                .nums("eigenvalues", &h.eigenvalues);
            Ok(Outcome::verdict(out, h.verdict.is_admissible()))
        }
        (None, None, Some(m)) => {
            let m = ctx.spd("--m", m, Shape::Full);
            ctx.finish()?;
            let v = wigner_subgaussian_check(&need(m))?;
            Ok(Outcome::verdict(
                Fields::new().with("verdict", verdict_name(v)),
                v.is_admissible(),
            ))
        }
        _ => Err(Failure::Usage(
            "hardy takes either --a and --b, or --m".into(),
        )),
    }
}

fn jointdiag(ctx: &mut Context, a: &str, b: &str) -> Run {
    let (a, b) = form_pair(ctx, a, b)?;
    let j = joint_diagonalize(&a, &b)?;
    let lam = j.lambda_matrix();
    let l_inv = j.l.inverse()?;
    let scale = lam.max_abs();
    let residual_a = (&(&j.l.transpose() * a.matrix()) * &j.l).max_abs_diff(&lam) / scale;
    let residual_b = (&(&l_inv * b.matrix()) * &l_inv.transpose()).max_abs_diff(&lam) / scale;
    let out = Fields::new()
        .mat("l", &j.l)
        .nums("lambdas", &j.lambdas)
        .num("residual_a", residual_a)
        .num("residual_b", residual_b);
    Ok(Outcome::plain(out))
}

fn phase_vector(z: &[f64]) -> Result<PhaseVector, Failure> {
    Ok(PhaseVector::from_stacked(z)?)
}

fn wigner(
    ctx: &mut Context,
    a: Option<&str>,
    b: Option<&str>,
    sigma: Option<&str>,
    z: Option<&[f64]>,
    zbar: Option<&[f64]>,
) -> Run {
    match (a, sigma) {
        (Some(a), None) => {
            let fa = ctx.spd("--a", a, Shape::Half);
            let fb = b.and_then(|b| ctx.sym("--b", b, Shape::Half));
            if let Some(fa) = &fa {
                if let Some(fb) = &fb {
                    if fb.dim() != fa.dim() {
                        ctx.problem("--b", format!("expected n = {}", fa.dim()));
                    }
                }
                if let Some(z) = z {
                    ctx.vector("--z", z, 2 * fa.dim());
                }
            }
            ctx.finish()?;
            let fa = need(fa);
            let n = fa.dim();
            let psi = GaussianState::new(
                fa,
                fb.unwrap_or_else(|| SymMatrix::from_diag(&vec![0.0; n])),
            )?;
            let g = gaussian_state_wigner_form(&psi)?;
            let mut out = Fields::new()
                .mat("form", g.form().matrix())
                .nums("symplectic_eigenvalues", &symplectic_eigenvalues(g.form())?);
            if let Some(z) = z {
                out = out.num("value", gaussian_state_wigner(&psi, &phase_vector(z)?)?);
            }
            Ok(Outcome::plain(out))
        }
        (None, Some(s)) => {
            let m = ctx.spd("--sigma", s, Shape::Full);
            let z = z.unwrap_or_default();
            if let Some(m) = &m {
                ctx.vector("--z", z, m.dim());
                if let Some(zbar) = zbar {
                    ctx.vector("--zbar", zbar, m.dim());
                }
            }
            ctx.finish()?;
            let sigma = CovarianceMatrix::new(need(m))?;
            let zbar = match zbar {
                Some(v) => phase_vector(v)?,
                None => PhaseVector::zeros(sigma.dof()),
            };
            let value = gaussian_wigner_eval(&sigma, &zbar, &phase_vector(z)?)?;
            Ok(Outcome::plain(Fields::new().num("value", value)))
        }
        _ => Err(Failure::Usage(
            "wigner takes either --a [--b] or --sigma".into(),
        )),
    }
}

fn roots(ctx: &mut Context, input: &str) -> Run {
    let doc = ctx.document("--in", input);
    let s = match doc.map(|d| d.payload) {
        Some(crate::document::Payload::Sym(s)) => Some(s),
        Some(crate::document::Payload::Spd(s)) => Some(s.sym().clone()),
        Some(_) => {
            ctx.problem("--in", "expected kind sym or spd");
            None
        }
        None => None,
    };
    ctx.finish()?;
    let s = need(s);
    let eig = sym_eig(&s)?;
    let mut out = Fields::new()
        .nums("eigenvalues", &eig.values)
        .mat("eigenvectors", &eig.vectors)
        .num("psd_margin", psd_margin(&s)?);
    if let Ok(spd) = SpdMatrix::new(s) {
        let (root, inv_root) = spd_roots(&spd)?;
        out = out
            .mat("sqrt", root.matrix())
            .mat("inv_sqrt", inv_root.matrix());
    }
    Ok(Outcome::plain(out))
}

fn symcheck(ctx: &mut Context, input: &str, z: Option<&[f64]>, w: Option<&[f64]>) -> Run {
    let m = ctx.linear("--in", input, Shape::Full);
    if let Some(m) = &m {
        for (flag, v) in [("--z", z), ("--w", w)] {
            if let Some(v) = v {
                ctx.vector(flag, v, m.rows());
            }
        }
    }
    ctx.finish()?;
    let m = need(m);
    let check = is_symplectic(&m, sympolar::symplectic::SYMPLECTIC_TOL)?;
    let mut out = Fields::new()
        .with("symplectic", check.verdict)
        .num("residual", check.residual)
        .mat("j", &standard_j(m.rows() / 2));
    if let (Some(z), Some(w)) = (z, w) {
        out = out.num("omega", symp_product(&phase_vector(z)?, &phase_vector(w)?)?);
    }
    Ok(Outcome::verdict(out, check.verdict))
}

fn plane(
    ctx: &mut Context,
    basis: Option<&str>,
    a: Option<&str>,
    b: Option<&str>,
    other: Option<&str>,
) -> Run {
    let from_basis = basis.and_then(|p| ctx.basis("--basis", p));
    let ab = match (a, b) {
        (Some(a), Some(b)) => Some((
            ctx.linear("--a", a, Shape::Half),
            ctx.linear("--b", b, Shape::Half),
        )),
        _ => None,
    };
    let other = other.and_then(|p| ctx.basis("--other", p));
    ctx.finish()?;
    let plane = match (from_basis, ab) {
        (Some((_, plane)), _) => plane,
        (None, Some((Some(a), Some(b)))) => plane_from_ab(&a, &b)?,
        _ => {
            return Err(Failure::Usage(
                "plane takes either --basis, or --a and --b".into(),
            ))
        }
    };
    let (pa, pb) = plane.ab_parameters();
    let mut out = Fields::new()
        .mat("basis", plane.basis())
        .mat("a", &pa)
        .mat("b", &pb);
    let mut verdict = None;
    if let Some((_, other)) = other {
        let check = is_transverse(&plane, &other)?;
        out = out
            .with("transverse", check.verdict)
            .num("margin", check.margin);
        if check.verdict {
            out = out.mat("frame", frame_symplectic(&plane, &other)?.matrix());
        }
        verdict = Some(check.verdict);
    }
    Ok(Outcome {
        result: out.into(),
        verdict,
        seed: None,
    })
}

fn oracle(ctx: &mut Context, command: &OracleCommand) -> Run {
    match command {
        OracleCommand::Polar {
            input,
            candidate,
            count,
            seed,
        } => {
            let a = ctx.spd("--in", input, Shape::Half);
            if let Some(a) = &a {
                ctx.vector("--candidate", candidate, a.dim());
            }
            if *count == 0 {
                ctx.problem("--count", "must be positive");
            }
            ctx.finish()?;
            let a = need(a);
            let cloud = SampleCloud::ellipsoid_boundary(seed.seed, &a, *count);
            let sampled = mc_polar_membership(&cloud, candidate)?;
            // p ∈ X° iff the support function of X at p is at most one.
            let support = a.inverse().matrix().quad_form(candidate).sqrt();
            let out = Fields::new()
                .with("accept", sampled.accept)
                .num("max_inner", sampled.max_inner)
                .num("support", support)
                .with("exact_member", support <= 1.0);
            Ok(Outcome::verdict(out, sampled.accept).seeded(seed.seed))
        }
        OracleCommand::Shadow {
            omega,
            onto,
            directions,
            pair,
            seed,
        } => {
            let m = ctx.spd("--omega", omega, Shape::Full);
            let bases = ctx.pair_bases(pair);
            if *directions == 0 {
                ctx.problem("--directions", "must be positive");
            }
            ctx.finish()?;
            let omega = AmbientEllipsoid::new(need(m))?;
            let spec = pair_spec(bases, omega.dof())?;
            let side = match onto {
                PlaneSide::First => Side::First,
                PlaneSide::Second => Side::Second,
            };
            let dirs = SampleCloud::sphere(seed.seed, omega.dof(), *directions);
            let estimates = mc_projection_support(&omega, &spec.pair, side, &dirs, seed.seed)?;
            let shadow = lagrangian_projection(&omega, &spec.pair, side)?;
            let chart = spec.pair.plane(side).basis();
            let exact = dirs
                .points()
                .iter()
                .map(|u| shadow.support(&chart.matvec(u)))
                .collect::<Result<Vec<_>, _>>()?;
            let max_gap = exact
                .iter()
                .zip(&estimates)
                .map(|(e, s)| (e - s).abs())
                .fold(0.0, f64::max);
            let points: Vec<Value> = dirs.points().iter().map(|u| nums(u)).collect();
            let out = Fields::new()
                .with("directions", points)
                .nums("estimates", &estimates)
                .nums("exact", &exact)
                .num("max_gap", max_gap);
            Ok(Outcome::plain(out).seeded(seed.seed))
        }
        OracleCommand::Quadrature {
            a,
            b,
            z,
            half_width,
            points,
        } => {
            let fa = ctx.spd("--a", a, Shape::Half);
            let fb = b.as_deref().and_then(|b| ctx.sym("--b", b, Shape::Half));
            if let Some(fa) = &fa {
                if fa.dim() != 1 {
                    ctx.problem("--a", "quadrature needs n = 1");
                }
            }
            if let Some(fb) = &fb {
                if fb.dim() != 1 {
                    ctx.problem("--b", "quadrature needs n = 1");
                }
            }
            ctx.vector("--z", z, 2);
            if *points < 2 {
                ctx.problem("--points", "needs at least 2 points");
            }
            ctx.finish()?;
            let psi =
                GaussianState::new(need(fa), fb.unwrap_or_else(|| SymMatrix::from_diag(&[0.0])))?;
            let half_width = half_width.unwrap_or(12.0 / psi.a().min_eig().sqrt());
            let z = phase_vector(z)?;
            let value = wigner_quadrature(
                &psi,
                &z,
                QuadratureGrid {
                    half_width,
                    points: *points,
                },
            )?;
            let exact = gaussian_state_wigner(&psi, &z)?;
            let out = Fields::new()
                .num("value", value)
                .num("exact", exact)
                .num("relative_error", (value - exact).abs() / exact)
                .num("half_width", half_width)
                .with("points", *points);
            Ok(Outcome::plain(out))
        }
        OracleCommand::Spd { n, cap, seed } => {
            if *n == 0 || !(cap.is_finite() && *cap >= 1.0) {
                return Err(Failure::Usage(
                    "oracle spd needs n >= 1 and a finite cap >= 1".into(),
                ));
            }
            let m = random_spd::<f64>(seed.seed, *n, *cap);
            let out = Fields::new()
                .mat("matrix", m.matrix())
                .num("condition_number", m.condition_number());
            Ok(Outcome::plain(out).seeded(seed.seed))
        }
        OracleCommand::Symplectic { n, spread, seed } => {
            if *n == 0 || !(spread.is_finite() && *spread >= 0.0) {
                return Err(Failure::Usage(
                    "oracle symplectic needs n >= 1 and a finite spread >= 0".into(),
                ));
            }
            let s = random_symplectic::<f64>(seed.seed, *n, *spread);
            Ok(Outcome::plain(
                Fields::new()
                    .mat("matrix", s.matrix())
                    .num("residual", s.residual()),
            )
            .seeded(seed.seed))
        }
    }
}
