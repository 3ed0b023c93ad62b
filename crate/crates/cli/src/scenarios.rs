use std::path::Path;
use std::sync::Arc;

use nclorentz_core::amplification::{disjointify, domination_ratio};
use nclorentz_core::diagnostics::{
    build_lq_spikes, distortion_of, perturbation_envelope, unit_spikes, DisjointSpan,
    DistortionReport, EnvelopeReport,
};
use nclorentz_core::lorentz::{estimate_constant, lorentz_norm, InequalityKind};
use nclorentz_core::operator::{mu_op, operator_norm, schatten_lorentz_norm, supports};
use nclorentz_core::rademacher::{cotype2_ratio, khintchine_ratio, AverageSpec};
use nclorentz_core::sampling::{self, RNG_NAME};
use nclorentz_core::{Error, LorentzIndex, OperatorMatrix, StepFunction, TracialAlgebra};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::{Check, ExperimentReport};

pub const SCENARIOS: [&str; 8] = [
    "norm",
    "mu",
    "estimates",
    "khintchine",
    "disjointify",
    "lq-spikes",
    "embed-evidence",
    "envelope",
];

/// Checks and an optional payload produced by one scenario.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub result: Option<Value>,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ExperimentReport, CliError> {
    let start = std::time::Instant::now();
    let outcome = match cfg.scenario.as_str() {
        "norm" => norm(cfg)?,
        "mu" => mu(cfg)?,
        "estimates" => estimates(cfg)?,
        "khintchine" => khintchine(cfg)?,
        "disjointify" => disjointify_scenario(cfg)?,
        "lq-spikes" => lq_spikes(cfg)?,
        "embed-evidence" => embed_evidence(cfg)?,
        "envelope" => envelope(cfg)?,
        other => return Err(CliError::UnknownScenario(other.to_string())),
    };
    Ok(ExperimentReport {
        scenario: cfg.clone(),
        rng: RNG_NAME.to_string(),
        seed: cfg.seed,
        checks: outcome.checks,
        result: outcome.result,
        wall_clock_ms: start.elapsed().as_millis() as u64,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Input accepted by `norm` and `mu`.
#[derive(Debug, Clone)]
pub enum InputObject {
    Step(StepFunction),
    Operator(OperatorMatrix),
}

pub fn load_input(path: Option<&Path>) -> Result<InputObject, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("this scenario needs --input".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| match e {
        CliError::MalformedInput(m) => CliError::MalformedInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_input(text: &str) -> Result<InputObject, CliError> {
    let bad = |e: serde_json::Error| CliError::MalformedInput(e.to_string());
    let value: Value = serde_json::from_str(text).map_err(bad)?;
    if value.get("pieces").is_some() {
        Ok(InputObject::Step(serde_json::from_value(value).map_err(bad)?))
    } else if value.get("algebra").is_some() {
        Ok(InputObject::Operator(serde_json::from_value(value).map_err(bad)?))
    } else {
        Err(CliError::MalformedInput(
            "expected a step function (`pieces`) or an operator (`algebra`, `blocks`)".into(),
        ))
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn norm(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    let mut checks = Vec::new();
    let value = match load_input(cfg.input.as_deref())? {
        InputObject::Step(f) => {
            let value = lorentz_norm(&f, idx);
            // the same function as a diagonal operator in a commutative algebra
            let widths: Vec<f64> = f.pieces().iter().map(|&(_, w)| w).collect();
            if !widths.is_empty() {
                let alg = Arc::new(TracialAlgebra::commutative(&widths)?);
                let diag: Vec<Complex64> =
                    f.pieces().iter().map(|&(v, _)| Complex64::new(v, 0.0)).collect();
                let x = OperatorMatrix::diagonal(alg, &diag)?;
                let via_op = schatten_lorentz_norm(&x, idx)?;
                checks.push(Check::at_most("operator_realization_gap", relative_gap(value, via_op), 1e-12));
            }
            value
        }
        InputObject::Operator(x) => {
            let value = schatten_lorentz_norm(&x, idx)?;
            let adj = schatten_lorentz_norm(&x.adjoint(), idx)?;
            checks.push(Check::at_most("adjoint_gap", relative_gap(value, adj), 1e-10));
            value
        }
    };
    checks.insert(0, Check::finite("norm", value));
    Ok(Outcome {
        checks,
        result: Some(json!({ "norm": value })),
    })
}

fn mu(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let x = match load_input(cfg.input.as_deref())? {
        InputObject::Operator(x) => x,
        InputObject::Step(_) => {
            return Err(CliError::MalformedInput("mu expects an operator".into()));
        }
    };
    let m = mu_op(&x)?;
    let trace_abs = m.l1_norm();
    let direct = nclorentz_core::operator::abs_op(&x)?.trace().re;
    Ok(Outcome {
        checks: vec![
            Check::at_most("l1_vs_trace_of_modulus", relative_gap(trace_abs, direct), 1e-10),
            Check::finite("measure_distance_to_zero", m.measure_distance()),
        ],
        result: Some(to_value(&m)),
    })
}

/// Largest ratios seen for the lattice estimates, over `count` random
/// disjoint families and `count` random shared-grid families.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateSweep {
    pub q_convexity: Option<f64>,
    pub lower_p_estimate: Option<f64>,
    pub upper_r_estimate: f64,
    pub lower_s_estimate: f64,
    pub families: usize,
}

pub fn estimate_sweep(idx: LorentzIndex, count: usize, max_n: usize, seed: u64) -> Result<EstimateSweep, Error> {
    let mut rng = sampling::rng_from_seed(seed);
    let disjoint: Vec<_> = (0..count)
        .map(|_| sampling::random_disjoint_family(&mut rng, max_n, 4))
        .collect();
    let grid: Vec<_> = (0..count)
        .map(|_| sampling::random_grid_family(&mut rng, max_n, 6))
        .collect();
    let (p, q) = (idx.p(), idx.q());
    let (r, s) = (p.min(q), p.max(q));
    let ratio = |kind, e, fams: &Vec<_>, disj| -> Result<f64, Error> {
        Ok(estimate_constant(kind, e, idx, fams.clone(), disj)?.ratio_max)
    };
    let (q_convexity, lower_p_estimate) = if q < p {
        (
            Some(ratio(InequalityKind::Convexity, q, &grid, false)?),
            Some(ratio(InequalityKind::LowerEstimate, p, &disjoint, true)?),
        )
    } else {
        (None, None)
    };
    Ok(EstimateSweep {
        q_convexity,
        lower_p_estimate,
        upper_r_estimate: ratio(InequalityKind::UpperEstimate, r, &disjoint, true)?,
        lower_s_estimate: ratio(InequalityKind::LowerEstimate, s, &disjoint, true)?,
        families: count,
    })
}

fn estimates(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    let sweep = estimate_sweep(idx, cfg.samples.max(1), cfg.n.max(1), cfg.seed)?;
    let mut checks = Vec::new();
    if let Some(v) = sweep.q_convexity {
        checks.push(Check::at_most("q_convexity_constant", v, 1.0 + 1e-9));
    }
    if let Some(v) = sweep.lower_p_estimate {
        checks.push(Check::at_most("lower_p_estimate_constant", v, 1.0 + 1e-9));
    }
    checks.push(Check::finite("upper_r_estimate_constant", sweep.upper_r_estimate));
    checks.push(Check::finite("lower_s_estimate_constant", sweep.lower_s_estimate));
    Ok(Outcome {
        checks,
        result: Some(to_value(&sweep)),
    })
}

/// Largest Khintchine ratio over random families in small algebras.
#[derive(Debug, Clone, Serialize)]
pub struct KhintchineSweep {
    pub c_emp: f64,
    pub witness_family: usize,
    pub families: usize,
}

pub fn khintchine_sweep(idx: LorentzIndex, count: usize, max_n: usize, seed: u64) -> Result<KhintchineSweep, Error> {
    let mut rng = sampling::rng_from_seed(seed);
    let mut best = (f64::NEG_INFINITY, 0);
    for i in 0..count {
        let (xs, a) = random_sequence(&mut rng, max_n);
        let r = khintchine_ratio(&xs, &a, idx, &AverageSpec::exact())?;
        if r > best.0 {
            best = (r, i);
        }
    }
    Ok(KhintchineSweep {
        c_emp: best.0,
        witness_family: best.1,
        families: count,
    })
}

fn random_sequence<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> (Vec<OperatorMatrix>, Vec<Complex64>) {
    let n = rng.random_range(1..=max_n.max(1));
    let alg = Arc::new(sampling::random_algebra(rng, 2, 3));
    let xs = (0..n).map(|_| sampling::random_operator(rng, &alg)).collect();
    (xs, sampling::random_coefficients(rng, n))
}

/// `khintchine_ratio` at `p = q = 2` for a Hilbert–Schmidt orthogonal
/// family of `n` members.
pub fn hilbert_schmidt_ratio(n: usize, seed: u64) -> Result<f64, Error> {
    let mut rng = sampling::rng_from_seed(seed);
    let dim = (1..).find(|d| d * d >= n).unwrap_or(1);
    let xs = sampling::random_hs_orthogonal_family(&mut rng, dim, 1.0, n)?;
    let a = sampling::random_coefficients(&mut rng, n);
    khintchine_ratio(&xs, &a, LorentzIndex::lp(2.0)?, &AverageSpec::exact())
}

fn khintchine(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    let max_n = cfg.n.clamp(1, nclorentz_core::rademacher::EXACT_DEFAULT_LIMIT);
    let sweep = khintchine_sweep(idx, cfg.samples.max(1), max_n, cfg.seed)?;
    let hs = hilbert_schmidt_ratio(max_n, cfg.seed)?;
    let mut rng = sampling::rng_from_seed(cfg.seed);
    let (xs, a) = random_sequence(&mut rng, max_n);
    let cotype = cotype2_ratio(&xs, &a, &AverageSpec::exact())?;
    Ok(Outcome {
        checks: vec![
            Check::finite("c_emp", sweep.c_emp).with_witness(json!({ "family": sweep.witness_family })),
            Check::at_most("hilbert_schmidt_ratio_gap", (hs - 1.0).abs(), 1e-8),
            Check::finite("cotype2_ratio", cotype),
        ],
        result: Some(to_value(&sweep)),
    })
}

/// Worst deviations seen along the disjointification pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct DisjointifySweep {
    /// Largest operator norm of a product of supports of distinct terms.
    pub support_product: f64,
    /// Largest gap between `μ(s_k)` and `μ(x_k)`.
    pub mu_gap: f64,
    pub k_emp: f64,
    pub witness_sequence: usize,
    pub sequences: usize,
}

fn step_gap(f: &StepFunction, g: &StepFunction) -> f64 {
    if f.pieces().len() != g.pieces().len() {
        return f64::INFINITY;
    }
    let top = f.sup().max(g.sup()).max(f64::MIN_POSITIVE);
    f.pieces()
        .iter()
        .zip(g.pieces())
        .map(|(&(v, w), &(u, z))| ((v - u).abs() / top).max((w - z).abs()))
        .fold(0.0, f64::max)
}

pub fn disjointify_sweep(
    idx: LorentzIndex,
    count: usize,
    max_n: usize,
    samples: usize,
    seed: u64,
) -> Result<DisjointifySweep, Error> {
    let mut rng = sampling::rng_from_seed(seed);
    let mut out = DisjointifySweep {
        support_product: 0.0,
        mu_gap: 0.0,
        k_emp: f64::NEG_INFINITY,
        witness_sequence: 0,
        sequences: count,
    };
    for i in 0..count {
        let (xs, a) = random_sequence(&mut rng, max_n);
        let d = disjointify(&xs)?;
        let sup = d.terms.iter().map(supports).collect::<Result<Vec<_>, _>>()?;
        for k in 0..sup.len() {
            for l in 0..k {
                for side in [(&sup[k].0, &sup[l].0), (&sup[k].1, &sup[l].1)] {
                    let prod = side.0.as_operator().checked_mul(side.1.as_operator())?;
                    out.support_product = out.support_product.max(operator_norm(&prod)?);
                }
            }
        }
        for (s, x) in d.terms.iter().zip(&xs) {
            out.mu_gap = out.mu_gap.max(step_gap(&mu_op(s)?, &mu_op(x)?));
        }
        let spec = AverageSpec::auto(xs.len(), samples, seed);
        let k = domination_ratio(&xs, &a, idx, &spec)?;
        if k > out.k_emp {
            out.k_emp = k;
            out.witness_sequence = i;
        }
    }
    Ok(out)
}

fn disjointify_scenario(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    let sweep = disjointify_sweep(idx, cfg.samples.max(1), cfg.n.clamp(1, 4), cfg.samples, cfg.seed)?;
    Ok(Outcome {
        checks: vec![
            Check::at_most("support_product", sweep.support_product, 1e-10),
            Check::at_most("mu_gap", sweep.mu_gap, 1e-10),
            Check::finite("k_emp", sweep.k_emp).with_witness(json!({ "sequence": sweep.witness_sequence })),
        ],
        result: Some(to_value(&sweep)),
    })
}

/// Distortion of the lacunary spike family against `ℓ_q`.
pub fn lq_spike_distortion(idx: LorentzIndex, n: usize, lacunarity: f64) -> Result<DistortionReport, Error> {
    let parts = build_lq_spikes(idx, n, lacunarity)?;
    distortion_of(&DisjointSpan { parts: &parts, idx }, idx.q(), &[])
}

fn lq_spikes(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    if !idx.q().is_finite() {
        return Err(CliError::Usage("lq-spikes needs a finite q".into()));
    }
    let n = cfg.n.max(1);
    let parts = build_lq_spikes(idx, n, cfg.lacunarity)?;
    let unit_gap = parts
        .iter()
        .map(|f| (lorentz_norm(f, idx) - 1.0).abs())
        .fold(0.0, f64::max);
    let ladder: Vec<f64> = [100.0, 10.0, 1.0]
        .iter()
        .map(|m| cfg.lacunarity * m)
        .filter(|l| *l < 1.0)
        .collect();
    let reports = ladder
        .iter()
        .map(|&l| lq_spike_distortion(idx, n, l))
        .collect::<Result<Vec<_>, _>>()?;
    let rise = reports
        .windows(2)
        .map(|w| w[1].distortion() - w[0].distortion())
        .fold(0.0, f64::max);
    let last = reports.last().expect("the configured lacunarity is always on the ladder");
    Ok(Outcome {
        checks: vec![
            Check::at_most("unit_norm_gap", unit_gap, 1e-10),
            Check::finite("distortion", last.distortion()).with_witness(&last.worst_vectors),
            Check::at_most("ladder_increase", rise, 1e-12),
        ],
        result: Some(json!({
            "ladder": ladder.iter().zip(&reports).map(|(l, r)| json!({
                "lacunarity": l,
                "lower": r.lower,
                "upper": r.upper,
            })).collect::<Vec<_>>(),
        })),
    })
}

/// One row of the unit spike distortion table.
#[derive(Debug, Clone, Serialize)]
pub struct SpikeRow {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
}

impl SpikeRow {
    pub fn distortion(&self) -> f64 {
        self.upper / self.lower
    }
}

/// Distortion of `n` equal disjoint unit spikes against `ℓ_target`, for
/// `n = 2, 4, …` up to `max_n`.
pub fn spike_table(idx: LorentzIndex, target: f64, max_n: usize) -> Result<Vec<SpikeRow>, Error> {
    std::iter::successors(Some(2usize), |n| n.checked_mul(2))
        .take_while(|&n| n <= max_n)
        .map(|n| {
            let parts = unit_spikes(n);
            let r = distortion_of(&DisjointSpan { parts: &parts, idx }, target, &[])?;
            Ok(SpikeRow {
                n,
                lower: r.lower,
                upper: r.upper,
            })
        })
        .collect()
}

fn embed_evidence(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let idx = LorentzIndex::new(cfg.p, cfg.q)?;
    if cfg.n < 2 {
        return Err(CliError::Usage("embed-evidence needs n >= 2".into()));
    }
    let rows = spike_table(idx, cfg.p, cfg.n)?;
    let mut checks = Vec::new();
    for r in &rows {
        checks.push(Check::finite(format!("lower@{}", r.n), r.lower));
        checks.push(Check::finite(format!("upper@{}", r.n), r.upper));
    }
    let distortions: Vec<f64> = rows.iter().map(SpikeRow::distortion).collect();
    if cfg.p == cfg.q {
        let gap = distortions.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most("isometry_gap", gap, 1e-10));
    } else {
        let step = distortions
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if step.is_finite() {
            checks.push(Check::above("smallest_increase", step, 0.0));
        }
    }
    Ok(Outcome {
        checks,
        result: Some(to_value(&rows)),
    })
}

/// `(ys, ds, eps)` as taken by `perturbation_envelope`.
pub type EnvelopeFamily = (Vec<OperatorMatrix>, Vec<OperatorMatrix>, Vec<f64>);

/// A normalized bi-disjoint family `ds` in `L_p` together with
/// perturbations `ys` at half the allowed relative distance. When
/// `violate` names an index, that perturbation is made four times too
/// large.
pub fn envelope_family(
    p: f64,
    n: usize,
    seed: u64,
    violate: Option<usize>,
) -> Result<EnvelopeFamily, Error> {
    let lp = LorentzIndex::lp(p)?;
    let mut rng = sampling::rng_from_seed(seed);
    let raw = sampling::random_bidisjoint_family(&mut rng, n.max(2), 1.0, n)?;
    let ds = raw
        .iter()
        .map(|d| Ok(d.scale(Complex64::new(1.0 / schatten_lorentz_norm(d, lp)?, 0.0))))
        .collect::<Result<Vec<_>, Error>>()?;
    let eps: Vec<f64> = (0..n).map(|k| 2f64.powi(-(k as i32))).collect();
    let ys = ds
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let e = sampling::random_operator(&mut rng, d.algebra());
            let factor = if violate == Some(k) { 4.0 } else { 0.5 };
            let size = factor * eps[k] * 2f64.powi(-(k as i32 + 1));
            let e = e.scale(Complex64::new(size / schatten_lorentz_norm(&e, lp)?, 0.0));
            d.checked_add(&e)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((ys, ds, eps))
}

pub fn envelope_trial(p: f64, n: usize, samples: usize, seed: u64) -> Result<EnvelopeReport, Error> {
    let (ys, ds, eps) = envelope_family(p, n, seed, None)?;
    let mut rng = sampling::rng_from_seed(seed.wrapping_add(1));
    let vectors: Vec<_> = (0..samples)
        .map(|_| sampling::random_coefficients(&mut rng, n))
        .collect();
    perturbation_envelope(&ys, &ds, p, &eps, &vectors)
}

/// Index reported when the precondition is broken at `bad`, or `None`
/// if the envelope was accepted.
pub fn envelope_violation(p: f64, n: usize, seed: u64, bad: usize) -> Result<Option<usize>, Error> {
    let (ys, ds, eps) = envelope_family(p, n, seed, Some(bad))?;
    match perturbation_envelope(&ys, &ds, p, &eps, &[]) {
        Err(Error::PerturbationTooLarge { index, .. }) => Ok(Some(index)),
        Err(e) => Err(e),
        Ok(_) => Ok(None),
    }
}

fn envelope(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let n = cfg.n.max(1);
    let report = envelope_trial(cfg.p, n, cfg.samples, cfg.seed)?;
    let bad = n / 2;
    let found = envelope_violation(cfg.p, n, cfg.seed, bad)?;
    let mut holds = Check::above("worst_margin", report.worst_margin, -nclorentz_core::diagnostics::ENVELOPE_SLACK);
    holds.pass = report.holds;
    if let Some(v) = &report.first_violation {
        holds = holds.with_witness(v);
    }
    let mut flagged = Check::at_most(
        "violation_index_gap",
        found.map_or(f64::INFINITY, |i| i.abs_diff(bad) as f64),
        0.0,
    );
    flagged = flagged.with_witness(json!({ "injected": bad, "reported": found }));
    Ok(Outcome {
        checks: vec![holds, flagged],
        result: Some(json!({ "samples": report.samples, "worst_margin": report.worst_margin })),
    })
}
