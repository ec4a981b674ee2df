//! Batch verification runs. Every suite returns its reports in a fixed order
//! that depends only on the options, never on scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cv::{gaussian_graph_state, lc_commutation_deviation, nullifier_variances, verify_eq2, verify_eq4_identity};
use crate::error::Result;
use crate::graph::{
    all_unweighted, leaf_pairs, random_leaf_graph, random_real_weighted, random_unit_incident_graph, WeightedGraph,
};
use crate::par::Exec;
use crate::protocol::{
    basis_redefinition_residual, branch_determinism_residual, branch_outcomes, bus_sigma, run_deferred, run_wire,
    verify_fig4_lu_equivalence, EntangleMode, TwoMemoryEngine, WireOutcomes,
};
use crate::qudit::{gates, verify_eq1, verify_eq3_identity, verify_qudit_swap, FourierVariant, QuditState, QuditSwapReport};
use crate::report::Report;

pub const STATE_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-12;
/// Exact comparisons pass only at zero difference.
pub const EXACT_TOL: f64 = f64::MIN_POSITIVE;
pub const DEFAULT_ZETAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Swap,
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    Qudit,
    Protocol,
    Fig4,
    CvSqueeze,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Swap,
        Suite::Eq1,
        Suite::Eq2,
        Suite::Eq3,
        Suite::Eq4,
        Suite::Qudit,
        Suite::Protocol,
        Suite::Fig4,
        Suite::CvSqueeze,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Swap => "swap",
            Suite::Eq1 => "eq1",
            Suite::Eq2 => "eq2",
            Suite::Eq3 => "eq3",
            Suite::Eq4 => "eq4",
            Suite::Qudit => "qudit",
            Suite::Protocol => "protocol",
            Suite::Fig4 => "fig4",
            Suite::CvSqueeze => "cv-squeeze",
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}`, expected one of: {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Largest size enumerated exhaustively.
    pub max_n: usize,
    /// Number of seeded random instances.
    pub random: usize,
    pub seed: u64,
    /// Qudit dimensions; empty means 2, 3 and 5.
    pub dims: Vec<usize>,
    pub zetas: Vec<f64>,
    pub exec: Exec,
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            max_n: 6,
            random: 100,
            seed: 0,
            dims: Vec::new(),
            zetas: DEFAULT_ZETAS.to_vec(),
            exec: Exec::default(),
            timing: false,
        }
    }
}

impl SuiteOptions {
    /// Generator for random instance `index` of `suite`, independent of every
    /// other instance.
    fn rng(&self, suite: Suite, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(suite.stream() << 32 | index as u64);
        rng
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<Report> {
    match suite {
        Suite::Swap => swap_suite(opts),
        Suite::Eq1 => eq1_suite(opts),
        Suite::Eq2 => eq2_suite(opts),
        Suite::Eq3 => vec![timed(opts, || {
            let r = verify_eq3_identity();
            Report::new("eq3", r.max_residual(), IDENTITY_TOL, json!(r))
        })],
        Suite::Eq4 => vec![timed(opts, || {
            let r = verify_eq4_identity();
            Report::new("eq4", r.max_residual(), IDENTITY_TOL, json!(r))
        })],
        Suite::Qudit => qudit_suite(opts),
        Suite::Protocol => protocol_suite(opts),
        Suite::Fig4 => fig4_suite(opts),
        Suite::CvSqueeze => cv_squeeze_suite(opts),
    }
}

fn timed(opts: &SuiteOptions, f: impl FnOnce() -> Report) -> Report {
    let start = Instant::now();
    let mut r = f();
    if opts.timing {
        r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    r
}

fn fold_max(rs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    rs.into_iter().try_fold(0.0, |acc: f64, r| Ok(acc.max(r?)))
}

fn weight_diff(a: &WeightedGraph, b: &WeightedGraph) -> f64 {
    if a.n() != b.n() || a.modulus() != b.modulus() {
        return f64::INFINITY;
    }
    a.to_f64().iter().zip(b.to_f64()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Every `(graph, m, r)` on `n` vertices with `r` a leaf of `m`.
fn leaf_instances(n: usize, modulus: Option<u32>) -> Vec<(WeightedGraph, usize, usize)> {
    all_unweighted(n, modulus)
        .flat_map(|g| leaf_pairs(&g).into_iter().map(move |(m, r)| (g.clone(), m, r)))
        .collect()
}

fn random_sizes(opts: &SuiteOptions) -> (usize, usize) {
    (opts.max_n + 1, opts.max_n + 2)
}

/// One report per exhaustive size, then one per random instance on
/// `max_n + 1 ..= max_n + 2` vertices.
fn leaf_suite(
    opts: &SuiteOptions,
    suite: Suite,
    modulus: Option<u32>,
    tol: f64,
    check: impl Fn(&WeightedGraph, usize, usize) -> Result<f64> + Sync,
) -> Vec<Report> {
    let name = suite.name();
    let mut out = Vec::new();
    for n in 2..=opts.max_n {
        out.push(timed(opts, || {
            let cases = leaf_instances(n, modulus);
            let count = cases.len();
            let res = fold_max(opts.exec.map(cases, |(g, m, r)| check(&g, m, r)));
            Report::from_result(name, res, tol, json!({"mode": "exhaustive", "n": n, "cases": count}))
        }));
    }
    let (lo, hi) = random_sizes(opts);
    out.extend(opts.exec.map((0..opts.random).collect(), |i| {
        timed(opts, || {
            let mut rng = opts.rng(suite, i);
            let n = rng.random_range(lo..=hi);
            let (g, m, r) = random_leaf_graph(n, modulus, &mut rng);
            let edges: Vec<(usize, usize)> = g.edges().map(|(j, k, _)| (j, k)).collect();
            Report::from_result(
                name,
                check(&g, m, r),
                tol,
                json!({"mode": "random", "index": i, "n": n, "m": m, "r": r, "edges": edges}),
            )
        })
    }));
    out
}

fn swap_suite(opts: &SuiteOptions) -> Vec<Report> {
    leaf_suite(opts, Suite::Swap, Some(2), EXACT_TOL, |g, m, r| {
        Ok(weight_diff(&g.swap_by_lc(m, r)?, &g.transpose_vertices(m, r)?))
    })
}

fn eq1_suite(opts: &SuiteOptions) -> Vec<Report> {
    leaf_suite(opts, Suite::Eq1, Some(2), STATE_TOL, |g, m, r| Ok(verify_eq1(g, m, r)?.max_residual()))
}

fn eq2_suite(opts: &SuiteOptions) -> Vec<Report> {
    leaf_suite(opts, Suite::Eq2, None, STATE_TOL, |g, m, r| Ok(verify_eq2(g, m, r)?.max_residual()))
}

/// Per dimension: the dagger placements that pass on every qualifying graph
/// with at most four vertices, and the worst residual of the first of them.
pub fn qudit_dimension_report(d: usize, max_n: usize, exec: Exec) -> Report {
    let cases: Vec<_> = (2..=max_n.min(4)).flat_map(|n| leaf_instances(n, Some(d as u32))).collect();
    let count = cases.len();
    let reports: Result<Vec<QuditSwapReport>> =
        exec.map(cases, |(g, m, r)| verify_qudit_swap(&g, m, r, d)).into_iter().collect();
    let params = |consistent: &[FourierVariant]| {
        let labels: Vec<_> = consistent.iter().map(|v| v.label()).collect();
        json!({"d": d, "cases": count, "consistent_variants": labels, "variant": labels.first()})
    };
    match reports {
        Err(e) => Report::error("qudit", STATE_TOL, json!({"d": d}), e),
        Ok(reports) => {
            let consistent: Vec<FourierVariant> = FourierVariant::ALL
                .into_iter()
                .filter(|v| reports.iter().all(|r| r.passing.contains(v)))
                .collect();
            let residual_of = |v: FourierVariant| {
                reports
                    .iter()
                    .map(|r| r.residuals.iter().find(|(x, _)| *x == v).map_or(f64::INFINITY, |(_, res)| *res))
                    .fold(0.0, f64::max)
            };
            let residual = match consistent.first() {
                Some(&v) => residual_of(v),
                None => FourierVariant::ALL.into_iter().map(residual_of).fold(f64::INFINITY, f64::min),
            };
            Report::new("qudit", residual, STATE_TOL, params(&consistent))
        }
    }
}

fn qudit_suite(opts: &SuiteOptions) -> Vec<Report> {
    let dims = if opts.dims.is_empty() { vec![2, 3, 5] } else { opts.dims.clone() };
    dims.into_iter().map(|d| timed(opts, || qudit_dimension_report(d, opts.max_n, opts.exec))).collect()
}

fn random_schedule<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Vec<f64> {
    let k = rng.random_range(0..=max_len);
    (0..k).map(|_| rng.random_range(-PI..PI)).collect()
}

/// Sequential wire against the deferred star, branch by branch: logical
/// state, frame and sequence probability.
pub fn deferred_residual(input: &QuditState, thetas: &[f64]) -> Result<f64> {
    let k = thetas.len();
    fold_max((0..1usize << k).map(|i| {
        let outs = branch_outcomes(i, k);
        let d = run_deferred(input, thetas, &outs)?;
        let (logical, trace) = run_wire(input, thetas, &WireOutcomes::Forced(outs))?;
        if trace.frame() != d.frame {
            return Ok(f64::INFINITY);
        }
        let p: f64 = trace.cycles.iter().map(|c| c.prob).product();
        Ok(logical.phase_residual(&d.logical).max((p - d.prob).abs()))
    }))
}

/// Longest random schedule in the protocol suite.
pub const MAX_SCHEDULE: usize = 6;

fn protocol_suite(opts: &SuiteOptions) -> Vec<Report> {
    let idx: Vec<usize> = (0..opts.random).collect();
    let wire = opts.exec.map(idx.clone(), |i| {
        timed(opts, || {
            let mut rng = opts.rng(Suite::Protocol, i);
            let psi = QuditState::random(1, 2, &mut rng).expect("one qubit");
            let thetas = random_schedule(&mut rng, MAX_SCHEDULE);
            let res = branch_determinism_residual(&psi, &thetas, Exec::Serial)
                .and_then(|a| Ok(a.max(deferred_residual(&psi, &thetas)?)));
            Report::from_result("protocol.wire", res, STATE_TOL, json!({"index": i, "angles": thetas}))
        })
    });
    let basis = opts.exec.map(idx, |i| {
        timed(opts, || {
            let mut rng = opts.rng(Suite::Protocol, opts.random + i);
            let psi = QuditState::random(1, 2, &mut rng).expect("one qubit");
            let thetas = random_schedule(&mut rng, 3);
            let res = basis_redefinition_residual(&psi, &thetas).map(|(dp, ds)| dp.max(ds));
            Report::from_result("protocol.basis", res, IDENTITY_TOL, json!({"index": i, "angles": thetas}))
        })
    });
    wire.into_iter().chain(basis).collect()
}

/// Bus entangling on `input`: each branch against `(S^σ ⊗ S^σ) CZ`, and
/// after undoing the corrections against the direct gate.
pub fn bus_residual(input: &QuditState) -> Result<f64> {
    let mut direct = TwoMemoryEngine::new(input.clone(), 0)?;
    direct.entangle(EntangleMode::Direct, None)?;
    fold_max((0..2u8).map(|s| {
        let mut bus = TwoMemoryEngine::new(input.clone(), 0)?;
        bus.entangle(EntangleMode::Bus, Some(s))?;
        let sp = gates::phase_s_pow(bus_sigma(s));
        let want = direct.stored_state().apply_matrix(0, &sp)?.apply_matrix(1, &sp)?;
        let raw = bus.stored_state().phase_residual(&want);
        Ok(raw.max(bus.corrected_state()?.phase_residual(direct.stored_state())))
    }))
}

fn fig4_suite(opts: &SuiteOptions) -> Vec<Report> {
    let mut out = vec![timed(opts, || match verify_fig4_lu_equivalence() {
        Ok(r) => Report::new("fig4.lu", r.max_residual(), STATE_TOL, json!(r)),
        Err(e) => Report::error("fig4.lu", STATE_TOL, json!({}), e),
    })];
    out.extend(opts.exec.map((0..opts.random).collect(), |i| {
        timed(opts, || {
            let mut rng = opts.rng(Suite::Fig4, i);
            let psi = QuditState::random(2, 2, &mut rng).expect("two qubits");
            Report::from_result("fig4.bus", bus_residual(&psi), STATE_TOL, json!({"index": i}))
        })
    }));
    out
}

/// Worst deviation of the nullifier variances from `e^{−2ζ}/2` over `zetas`,
/// and whether every variance strictly decreases as `ζ` grows.
pub fn squeeze_check(g: &WeightedGraph, zetas: &[f64]) -> Result<(f64, bool)> {
    let mut zs = zetas.to_vec();
    zs.sort_by(f64::total_cmp);
    let mut worst: f64 = 0.0;
    let mut prev: Option<Vec<f64>> = None;
    let mut monotone = true;
    for &z in &zs {
        let vars = nullifier_variances(&gaussian_graph_state(g, z)?, g)?;
        let want = (-2.0 * z).exp() / 2.0;
        worst = vars.iter().map(|v| (v - want).abs()).fold(worst, f64::max);
        if let Some(p) = &prev {
            monotone &= p.iter().zip(&vars).all(|(a, b)| b < a);
        }
        prev = Some(vars);
    }
    Ok((worst, monotone))
}

fn cv_squeeze_suite(opts: &SuiteOptions) -> Vec<Report> {
    opts.exec.map((0..opts.random).collect(), |i| {
        timed(opts, || {
            let mut rng = opts.rng(Suite::CvSqueeze, i);
            let n = rng.random_range(1..=opts.max_n.max(1));
            let g = random_real_weighted(n, &mut rng);
            match squeeze_check(&g, &opts.zetas) {
                Ok((dev, monotone)) => {
                    let residual = if monotone { dev } else { dev.max(1.0) };
                    Report::new(
                        "cv-squeeze",
                        residual,
                        STATE_TOL,
                        json!({"index": i, "n": n, "zetas": opts.zetas, "monotone": monotone}),
                    )
                }
                Err(e) => Report::error("cv-squeeze", STATE_TOL, json!({"index": i}), e),
            }
        })
    })
}

/// Gaussian LC against the graph rule on `count` seeded graphs of up to
/// `max_n` modes, each with a unit-weight neighbourhood at the chosen vertex.
pub fn cv_lc_reports(count: usize, max_n: usize, seed: u64, exec: Exec) -> Vec<Report> {
    exec.map((0..count).collect(), |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX - i as u64);
        let n = rng.random_range(2..=max_n.max(2));
        let (g, j) = random_unit_incident_graph(n, &mut rng);
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        Report::from_result(
            "cv-lc",
            lc_commutation_deviation(&g, j, sign),
            STATE_TOL,
            json!({"index": i, "n": n, "j": j, "sign": sign}),
        )
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[Report]) -> Self {
        use crate::report::Status;
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions { max_n: 4, random: 5, ..SuiteOptions::default() }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in Suite::ALL {
            let reports = run_suite(s, &small());
            assert!(!reports.is_empty(), "{s}");
            for r in &reports {
                assert!(r.passed(), "{s}: {}", r.to_json_line());
            }
        }
    }

    #[test]
    fn output_is_independent_of_scheduling() {
        let a = SuiteOptions { exec: Exec::Serial, ..small() };
        let b = SuiteOptions { exec: Exec::Parallel, ..small() };
        for s in [Suite::Swap, Suite::Protocol, Suite::CvSqueeze] {
            let la: Vec<String> = run_suite(s, &a).iter().map(Report::to_json_line).collect();
            let lb: Vec<String> = run_suite(s, &b).iter().map(Report::to_json_line).collect();
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn seeds_change_random_instances() {
        let a = run_suite(Suite::Protocol, &small());
        let b = run_suite(Suite::Protocol, &SuiteOptions { seed: 9, ..small() });
        assert_eq!(a.len(), b.len());
        assert_ne!(
            a.iter().map(Report::to_json_line).collect::<Vec<_>>(),
            b.iter().map(Report::to_json_line).collect::<Vec<_>>()
        );
    }

    #[test]
    fn cv_lc_reports_pass() {
        assert!(cv_lc_reports(10, 6, 0, Exec::Serial).iter().all(Report::passed));
    }
}
