//! Numerical layer: equilibrium finding by damped Newton with random
//! multistart, linear-stability spectra, natural-parameter continuation of
//! the equilibrium branch over the input parameter, and bisection location
//! of points where the homeostasis minor determinant crosses zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{CrnError, Result};
use crate::homeostasis::io_permutation;
use crate::massaction::{self, VectorField};
use crate::model::ReactionNetwork;
use crate::poly::PolyMatrix;

/// Newton iteration limits and tolerances.
const MAX_NEWTON_ITERS: usize = 200;
const MAX_DAMPING_HALVINGS: usize = 40;
/// residual contract: converged when the sup-norm of f is below this scale
fn residual_tolerance(k: &[f64]) -> f64 {
    let kmax = k.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    1e-10 * (1.0 + kmax)
}

/// eigenvalue real parts must stay below this for linear stability
pub const STABILITY_TOLERANCE: f64 = -1e-9;
/// |det B| at or below this value counts as a homeostasis zero
pub const DETB_ZERO_TOLERANCE: f64 = 1e-9;
const MAX_BISECTION_ITERS: usize = 80;

/// A located equilibrium with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub x: Vec<f64>,
    pub zeta: f64,
    pub residual: f64,
    pub eigenvalues: Vec<Complex64>,
    pub stable: bool,
}

impl Serialize for Equilibrium {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let eigs: Vec<[f64; 2]> = self.eigenvalues.iter().map(|e| [e.re, e.im]).collect();
        let mut s = serializer.serialize_struct("Equilibrium", 5)?;
        s.serialize_field("x", &self.x)?;
        s.serialize_field("zeta", &self.zeta)?;
        s.serialize_field("residual", &self.residual)?;
        s.serialize_field("eigenvalues", &eigs)?;
        s.serialize_field("stable", &self.stable)?;
        s.end()
    }
}

/// One continuation sample: the equilibrium plus the determinant data and
/// the input-output derivative dx_out/dzeta.
#[derive(Debug, Clone, Serialize)]
pub struct BranchSample {
    pub grid_index: usize,
    pub zeta: f64,
    pub equilibrium: Equilibrium,
    pub det_b: f64,
    pub det_j: f64,
    pub io_derivative: f64,
}

/// A grid point where the branch could not be continued.
#[derive(Debug, Clone, Serialize)]
pub struct BranchGap {
    pub grid_index: usize,
    pub zeta: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub samples: Vec<BranchSample>,
    pub gaps: Vec<BranchGap>,
    /// stability losses along the branch (samples are still recorded)
    pub breaks: Vec<BranchGap>,
}

/// Where the input-output derivative vanishes.
#[derive(Debug, Clone, Serialize)]
pub struct HomeostasisPoint {
    pub zeta_star: f64,
    pub x_star: Vec<f64>,
    pub stable: bool,
    pub kind: PointKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PointKind {
    #[serde(rename = "infinitesimal")]
    Infinitesimal,
    /// det B vanished over the whole sampled range [zeta_lo, zeta_hi]
    #[serde(rename = "perfect-interval")]
    PerfectInterval { zeta_hi: f64 },
}

/// Evaluation context shared by the numeric operations.
pub struct NumericContext {
    field: VectorField,
    jacobian: PolyMatrix,
    permutation: Vec<usize>,
    per_reaction: Vec<f64>,
    n: usize,
}

impl NumericContext {
    /// Bind rates once; `overrides` and `default` as in
    /// [`ReactionNetwork::bind_rates`].
    pub fn new(
        net: &ReactionNetwork,
        overrides: &[(String, f64)],
        default: Option<f64>,
    ) -> Result<Self> {
        let field = massaction::build_rhs(net, true);
        let jacobian = massaction::jacobian_of(&field.components);
        let mut overrides = overrides.to_vec();
        if let massaction::InputForm::ReactionRate { reaction } = field.input_form {
            // the input slot is overwritten by zeta at every evaluation
            overrides.push((net.reactions()[reaction].rate.name.clone(), 1.0));
        }
        let per_reaction = net.bind_rates(&overrides, default)?;
        Ok(NumericContext {
            field,
            jacobian,
            permutation: io_permutation(net),
            per_reaction,
            n: net.n_species(),
        })
    }

    pub fn slots(&self, zeta: f64) -> Vec<f64> {
        self.field.rate_slots(&self.per_reaction, zeta)
    }

    pub fn residual(&self, x: &[f64], zeta: f64) -> Vec<f64> {
        self.field.evaluate(x, &self.slots(zeta))
    }

    pub fn jacobian_at(&self, x: &[f64], zeta: f64) -> DMatrix<f64> {
        self.jacobian.evaluate(x, &self.slots(zeta))
    }

    /// det of the minor obtained by deleting the input row and output column
    /// (after the input-first/output-last permutation).
    pub fn det_b(&self, x: &[f64], zeta: f64) -> f64 {
        let j = self.jacobian_at(x, zeta);
        let n = self.n;
        let b = DMatrix::from_fn(n - 1, n - 1, |i, jj| {
            j[(self.permutation[i + 1], self.permutation[jj])]
        });
        b.lu().determinant()
    }

    pub fn det_j(&self, x: &[f64], zeta: f64) -> f64 {
        self.jacobian_at(x, zeta).lu().determinant()
    }

    fn sup_norm(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    /// Damped Newton from `start`; keeps iterates strictly positive.
    pub fn newton(&self, start: &[f64], zeta: f64) -> Option<Vec<f64>> {
        let tol = residual_tolerance(&self.slots(zeta));
        let mut x = start.to_vec();
        if x.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return None;
        }
        let mut fx = self.residual(&x, zeta);
        for _ in 0..MAX_NEWTON_ITERS {
            let norm = Self::sup_norm(&fx);
            if norm <= tol {
                // polish with two undamped steps to clear the residual
                for _ in 0..2 {
                    if let Some(next) = self.newton_step(&x, zeta) {
                        if next.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                            break;
                        }
                        let fn_next = self.residual(&next, zeta);
                        if Self::sup_norm(&fn_next) <= Self::sup_norm(&fx) {
                            x = next;
                            fx = fn_next;
                        }
                    }
                }
                return Some(x);
            }
            let Some(full) = self.newton_step(&x, zeta) else {
                return None;
            };
            // halve the step until the residual decreases and positivity holds
            let mut accepted = false;
            let mut scale = 1.0f64;
            for _ in 0..=MAX_DAMPING_HALVINGS {
                let candidate: Vec<f64> = x
                    .iter()
                    .zip(&full)
                    .map(|(&xi, &fi)| xi + scale * (fi - xi))
                    .collect();
                if candidate.iter().all(|&v| v > 0.0 && v.is_finite()) {
                    let fc = self.residual(&candidate, zeta);
                    if Self::sup_norm(&fc) < norm {
                        x = candidate;
                        fx = fc;
                        accepted = true;
                        break;
                    }
                }
                scale *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        None
    }

    fn newton_step(&self, x: &[f64], zeta: f64) -> Option<Vec<f64>> {
        let j = self.jacobian_at(x, zeta);
        let f = DVector::from_vec(self.residual(x, zeta));
        let delta = j.lu().solve(&(-f))?;
        Some(x.iter().zip(delta.iter()).map(|(&xi, &d)| xi + d).collect())
    }

    /// Spectrum of the Jacobian at a point with the stability flag.
    pub fn spectrum(&self, x: &[f64], zeta: f64) -> (Vec<Complex64>, bool) {
        let j = self.jacobian_at(x, zeta);
        let eigs = j.complex_eigenvalues();
        let mut eigenvalues: Vec<Complex64> = eigs.iter().copied().collect();
        eigenvalues.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let stable = eigenvalues.iter().all(|e| e.re < STABILITY_TOLERANCE);
        (eigenvalues, stable)
    }

    fn equilibrium_at(&self, x: Vec<f64>, zeta: f64) -> Equilibrium {
        let residual = Self::sup_norm(&self.residual(&x, zeta));
        let (eigenvalues, stable) = self.spectrum(&x, zeta);
        Equilibrium {
            x,
            zeta,
            residual,
            eigenvalues,
            stable,
        }
    }

    fn sample_at(&self, grid_index: usize, x: Vec<f64>, zeta: f64) -> BranchSample {
        let det_b = self.det_b(&x, zeta);
        let det_j = self.det_j(&x, zeta);
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        let io_derivative = sign * det_b / det_j;
        BranchSample {
            grid_index,
            zeta,
            equilibrium: self.equilibrium_at(x, zeta),
            det_b,
            det_j,
            io_derivative,
        }
    }
}

/// coordinates at or below this are boundary limits, not positive equilibria
const POSITIVITY_FLOOR: f64 = 1e-9;

/// Damped-Newton multistart from log-uniform random points in
/// [1e-3, 1e3]^n; solutions deduplicated at relative distance 1e-6 and
/// sorted lexicographically. Newton runs that collapse onto the boundary
/// of the positive orthant are discarded.
pub fn find_equilibria(
    net: &ReactionNetwork,
    overrides: &[(String, f64)],
    default: Option<f64>,
    zeta: f64,
    attempts: usize,
    seed: u64,
) -> Result<Vec<Equilibrium>> {
    if !(zeta >= 0.0) {
        return Err(CrnError::Domain(format!(
            "the input parameter must be nonnegative, got {zeta}"
        )));
    }
    let ctx = NumericContext::new(net, overrides, default)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut solutions: Vec<Vec<f64>> = Vec::new();
    for _ in 0..attempts {
        let start: Vec<f64> = (0..ctx.n)
            .map(|_| 10f64.powf(rng.random_range(-3.0..3.0)))
            .collect();
        let Some(x) = ctx.newton(&start, zeta) else {
            continue;
        };
        if x.iter().any(|&v| v <= POSITIVITY_FLOOR) {
            continue;
        }
        let duplicate = solutions.iter().any(|s| {
            s.iter()
                .zip(&x)
                .all(|(&a, &b)| (a - b).abs() <= 1e-6 * (1.0 + a.abs().max(b.abs())))
        });
        if !duplicate {
            solutions.push(x);
        }
    }
    solutions.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(solutions
        .into_iter()
        .map(|x| ctx.equilibrium_at(x, zeta))
        .collect())
}

/// Eigenvalues of the Jacobian at an arbitrary positive point.
pub fn stability_spectrum(
    net: &ReactionNetwork,
    overrides: &[(String, f64)],
    default: Option<f64>,
    x: &[f64],
    zeta: f64,
) -> Result<(Vec<Complex64>, bool)> {
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(CrnError::Domain("point must be strictly positive".into()));
    }
    let ctx = NumericContext::new(net, overrides, default)?;
    Ok(ctx.spectrum(x, zeta))
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub attempts: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            attempts: 64,
            seed: 1,
        }
    }
}

/// Natural continuation over an inclusive zeta grid: Newton at each grid
/// point warm-started from the previous sample. Newton failures are
/// recorded as gaps, stability losses as breaks.
pub fn branch_sweep(
    net: &ReactionNetwork,
    overrides: &[(String, f64)],
    default: Option<f64>,
    zeta_lo: f64,
    zeta_hi: f64,
    steps: usize,
    opts: SweepOptions,
) -> Result<SweepResult> {
    if !(zeta_lo > 0.0) || !(zeta_hi > zeta_lo) {
        return Err(CrnError::Domain(format!(
            "need 0 < lo < hi, got [{zeta_lo}, {zeta_hi}]"
        )));
    }
    if steps < 2 {
        return Err(CrnError::Domain("need at least 2 sweep steps".into()));
    }
    let ctx = NumericContext::new(net, overrides, default)?;
    let grid: Vec<f64> = (0..steps)
        .map(|i| zeta_lo + (zeta_hi - zeta_lo) * i as f64 / (steps - 1) as f64)
        .collect();

    // first point by multistart
    let first = find_equilibria(net, overrides, default, grid[0], opts.attempts, opts.seed)?;
    let start = first
        .iter()
        .find(|e| e.stable)
        .or_else(|| first.first())
        .ok_or_else(|| {
            CrnError::Numeric(format!(
                "no equilibrium found at the first sweep point zeta = {}",
                grid[0]
            ))
        })?;

    let mut samples = Vec::with_capacity(steps);
    let mut gaps = Vec::new();
    let mut breaks = Vec::new();
    let mut warm = start.x.clone();
    for (i, &zeta) in grid.iter().enumerate() {
        match ctx.newton(&warm, zeta) {
            Some(x) if x.iter().all(|&v| v > POSITIVITY_FLOOR) => {
                warm = x.clone();
                let sample = ctx.sample_at(i, x, zeta);
                if !sample.equilibrium.stable {
                    breaks.push(BranchGap {
                        grid_index: i,
                        zeta,
                        reason: "stability lost".into(),
                    });
                }
                samples.push(sample);
            }
            outcome => {
                if i == 0 {
                    return Err(CrnError::Numeric(format!(
                        "continuation failed at the first sweep point zeta = {zeta}"
                    )));
                }
                let reason = if outcome.is_some() {
                    "branch collapsed onto the boundary of the positive orthant"
                } else {
                    "newton did not converge"
                };
                gaps.push(BranchGap {
                    grid_index: i,
                    zeta,
                    reason: reason.into(),
                });
            }
        }
    }
    Ok(SweepResult {
        samples,
        gaps,
        breaks,
    })
}

/// Locate zeros of det B on a sweep: flat branches (every sample at or
/// below the zero tolerance) are reported as one perfect-interval point;
/// otherwise every sign change between adjacent stable samples is refined
/// by bisection, re-solving the equilibrium at each midpoint. Returns the
/// points plus diagnostics for lost brackets.
pub fn locate_homeostasis_points(
    net: &ReactionNetwork,
    overrides: &[(String, f64)],
    default: Option<f64>,
    sweep: &SweepResult,
) -> Result<(Vec<HomeostasisPoint>, Vec<String>)> {
    let ctx = NumericContext::new(net, overrides, default)?;
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    let samples = &sweep.samples;
    if samples.is_empty() {
        return Ok((points, diagnostics));
    }

    if samples.iter().all(|s| s.det_b.abs() <= DETB_ZERO_TOLERANCE) {
        let first = &samples[0];
        let last = samples.last().unwrap();
        points.push(HomeostasisPoint {
            zeta_star: first.zeta,
            x_star: first.equilibrium.x.clone(),
            stable: samples.iter().all(|s| s.equilibrium.stable),
            kind: PointKind::PerfectInterval { zeta_hi: last.zeta },
        });
        return Ok((points, diagnostics));
    }

    // samples sitting exactly on a zero are homeostasis points themselves
    for s in samples {
        if s.det_b.abs() <= DETB_ZERO_TOLERANCE {
            points.push(HomeostasisPoint {
                zeta_star: s.zeta,
                x_star: s.equilibrium.x.clone(),
                stable: s.equilibrium.stable,
                kind: PointKind::Infinitesimal,
            });
        }
    }

    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.grid_index != a.grid_index + 1 {
            continue; // a gap lies between them
        }
        if !(a.equilibrium.stable && b.equilibrium.stable) {
            continue;
        }
        if a.det_b.abs() <= DETB_ZERO_TOLERANCE || b.det_b.abs() <= DETB_ZERO_TOLERANCE {
            continue; // handled as exact zeros above
        }
        if a.det_b.signum() == b.det_b.signum() {
            continue;
        }
        match bisect_bracket(&ctx, a, b) {
            Ok(Some(p)) => points.push(p),
            Ok(None) => diagnostics.push(format!(
                "bracket [{}, {}] exhausted {} bisection iterations",
                a.zeta, b.zeta, MAX_BISECTION_ITERS
            )),
            Err(msg) => diagnostics.push(msg),
        }
    }

    points.sort_by(|p, q| {
        p.zeta_star
            .partial_cmp(&q.zeta_star)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    points.dedup_by(|p, q| (p.zeta_star - q.zeta_star).abs() <= 1e-12 * (1.0 + q.zeta_star.abs()));
    Ok((points, diagnostics))
}

fn bisect_bracket(
    ctx: &NumericContext,
    a: &BranchSample,
    b: &BranchSample,
) -> std::result::Result<Option<HomeostasisPoint>, String> {
    let mut lo = a.zeta;
    let mut hi = b.zeta;
    let mut f_lo = a.det_b;
    let mut x_lo = a.equilibrium.x.clone();
    let mut x_hi = b.equilibrium.x.clone();
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        let warm: Vec<f64> = x_lo
            .iter()
            .zip(&x_hi)
            .map(|(&p, &q)| 0.5 * (p + q))
            .collect();
        let solved = ctx
            .newton(&warm, mid)
            .filter(|x| x.iter().all(|&v| v > POSITIVITY_FLOOR));
        let Some(x) = solved else {
            return Err(format!(
                "bisection bracket lost near zeta = {mid}: equilibrium did not re-solve \
                 (possible fold point)"
            ));
        };
        let f_mid = ctx.det_b(&x, mid);
        if f_mid.abs() <= DETB_ZERO_TOLERANCE {
            let (_, stable) = ctx.spectrum(&x, mid);
            return Ok(Some(HomeostasisPoint {
                zeta_star: mid,
                x_star: x,
                stable,
                kind: PointKind::Infinitesimal,
            }));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
            x_lo = x;
        } else {
            hi = mid;
            x_hi = x;
        }
    }
    Ok(None)
}
