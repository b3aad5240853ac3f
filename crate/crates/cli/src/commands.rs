//! One function per subcommand. Each turns a configuration into the
//! artifacts of a run without touching the file system.

use std::time::Instant;

use cqsum::channels::SourcePair;
use cqsum::coding::{build_mac_sum_code, build_ptp_code, KmCode, MacSumParams, MacSumSpec, NestedCosetCode};
use cqsum::pmf::JointPmf;
use cqsum::rates::{
    example1_analysis, find_example1_witness, function_reconstructibility_check, message_sum_rate,
    optimize_message_sum_rate, unstructured_condition, EmbeddingChoice, Example1Params, Example1Report, RateReport,
    ReconstructibilityReport, UnstructuredReport, WitnessGrid, WitnessSearch,
};
use cqsum::rng::{tag, GENERATOR};
use cqsum::sim::{
    coset_coverage_probability, end_to_end_function_error, exact_mac_sum_error, exact_ptp_error,
    km_error_monte_carlo, pinching_check, EvalMode, PinchingReport, SimResult,
};
use cqsum::{Limits, Tolerances};
use serde::Serialize;

use crate::config::{
    joint, CoverageParams, EmbeddingsConfig, EndToEndParams, EvalConfig, Example1Config, ExperimentConfig, KmParams,
    MacSumConfig, OptimizeParams, PinchingParams, PtpParams, RatesParams, SearchConfig, StateSpec,
};
use crate::output::{now_unix, records_csv, sweep_csv, to_json, Artifacts, Report, SweepRow, REPORT_SCHEMA};
use crate::CliError;

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub limits: Limits,
    pub seed: u64,
    pub timestamps: bool,
}

impl Context {
    fn tol(&self) -> &Tolerances {
        &self.limits.tol
    }

    /// Runs `f`, recording its wall time on the result when timestamps are
    /// enabled.
    fn timed(&self, f: impl FnOnce() -> cqsum::Result<SimResult>) -> Result<SimResult, CliError> {
        let start = Instant::now();
        let mut result = f()?;
        if self.timestamps {
            result.wall_time_s = Some(start.elapsed().as_secs_f64());
        }
        Ok(result)
    }

    fn report<T: Serialize>(&self, command: &str, result: &T, start: Instant) -> Result<String, CliError> {
        to_json(&Report {
            schema: REPORT_SCHEMA,
            command,
            generator: GENERATOR,
            seed: self.seed,
            limits: self.limits,
            timestamp_unix: self.timestamps.then(now_unix),
            wall_time_s: self.timestamps.then(|| start.elapsed().as_secs_f64()),
            result,
        })
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn sweep_row(r: &SimResult, k: Option<usize>, l: Option<usize>) -> SweepRow {
    SweepRow { n: r.n, k, l, rate: r.rate, error: r.error, stderr: r.std_error, seed: r.seed }
}

fn need_draws(draws: usize) -> Result<(), CliError> {
    if draws == 0 {
        return Err(CliError::Config("\"draws\" must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct RatesResult {
    pub rate: Option<RateReport>,
    pub structured: Option<ReconstructibilityReport>,
    pub unstructured: Option<UnstructuredReport>,
}

pub fn rates(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: RatesParams = config.params()?;
    let mac = config.channel()?.mac(ctx.tol())?;
    let rate = match (params.q, &params.p_v1x1, &params.p_v2x2) {
        (Some(q), Some(a), Some(b)) => Some(message_sum_rate(&mac, q, &joint(a)?, &joint(b)?)?),
        (None, None, None) => None,
        _ => return Err(CliError::Config("\"q\", \"p_v1x1\" and \"p_v2x2\" must be given together".into())),
    };
    let (structured, unstructured) = match &config.source {
        Some(_) => {
            let source = config.source()?;
            let f = params
                .function
                .as_ref()
                .ok_or_else(|| CliError::Config("verdicts need a \"function\" table".into()))?;
            let choice = match params.embeddings.clone().unwrap_or(EmbeddingsConfig::Search { max_q: 3 }) {
                EmbeddingsConfig::Given(specs) => EmbeddingChoice::Given(specs),
                EmbeddingsConfig::Search { max_q } => EmbeddingChoice::Search { max_q },
            };
            let s = function_reconstructibility_check(&source, f, &mac, &choice, params.grid, &ctx.limits)?;
            let u = unstructured_condition(&source, &mac, params.grid, &ctx.limits)?;
            (Some(s), Some(u))
        }
        None => (None, None),
    };
    if rate.is_none() && structured.is_none() {
        return Err(CliError::Config("give embeddings for a rate, or a source and function for verdicts".into()));
    }
    let result = RatesResult { rate, structured, unstructured };
    Ok(Artifacts { report: ctx.report("rates", &result, start)?, ..Default::default() })
}

pub fn optimize(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: OptimizeParams = config.params()?;
    let mac = config.channel()?.mac(ctx.tol())?;
    let result = optimize_message_sum_rate(&mac, params.q, params.grid, &ctx.limits)?;
    Ok(Artifacts { report: ctx.report("optimize", &result, start)?, ..Default::default() })
}

#[derive(Debug, Serialize)]
struct WitnessRow {
    p: f64,
    q_noise: f64,
    overlap: f64,
    theta_star: f64,
    structured_margin: f64,
    unstructured_margin: f64,
}

const WITNESS_HEADER: [&str; 6] = ["p", "q_noise", "overlap", "theta_star", "structured_margin", "unstructured_margin"];

pub fn example1(config: &ExperimentConfig, ctx: &Context, search: bool) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: Example1Config = config.params()?;
    if search {
        let s = params.search.unwrap_or_default();
        let SearchConfig { p, q_noise, overlap, step, theta_points, model } = s;
        let grid = WitnessGrid::stepped((p[0], p[1]), (q_noise[0], q_noise[1]), (overlap[0], overlap[1]), step, theta_points, model)?;
        let result: WitnessSearch = find_example1_witness(&grid, &ctx.limits)?;
        let rows: Vec<WitnessRow> = result
            .witness
            .iter()
            .map(|w| WitnessRow {
                p: w.p,
                q_noise: w.q_noise,
                overlap: w.overlap,
                theta_star: w.report.theta_star,
                structured_margin: w.report.structured_margin,
                unstructured_margin: w.report.unstructured_margin,
            })
            .collect();
        return Ok(Artifacts {
            report: ctx.report("example1", &result, start)?,
            sweep: Some(records_csv(&WITNESS_HEADER, &rows)?),
            code: None,
        });
    }
    let missing = |name: &str| CliError::Config(format!("example1 needs \"{name}\" (or pass --search)"));
    let sigma1 = match (&params.sigma1, params.overlap) {
        (Some(s), None) => s.build(ctx.tol())?,
        (None, Some(c)) => StateSpec::Overlap(c).build(ctx.tol())?,
        _ => return Err(CliError::Config("give exactly one of \"sigma1\" and \"overlap\"".into())),
    };
    let sigma0 = match &params.sigma0 {
        Some(s) => s.build(ctx.tol())?,
        None => StateSpec::Diagonal(vec![1.0, 0.0]).build(ctx.tol())?,
    };
    let analysis = Example1Params {
        p: params.p.ok_or_else(|| missing("p"))?,
        q_noise: params.q_noise.ok_or_else(|| missing("q_noise"))?,
        sigma0,
        sigma1,
        theta_points: params.theta_points,
        refine: params.refine,
        model: params.model,
        mode: params.mode,
        unstructured_grid: params.unstructured_grid,
    };
    let result: Example1Report = example1_analysis(&analysis, &ctx.limits)?;
    Ok(Artifacts { report: ctx.report("example1", &result, start)?, ..Default::default() })
}

/// Results of every code draw at one `(n, k, l)`.
#[derive(Debug, Serialize)]
pub struct PointResult {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub rate: Option<f64>,
    pub median_error: f64,
    pub draws: Vec<SimResult>,
}

fn point_result(n: usize, k: usize, l: usize, draws: Vec<SimResult>) -> PointResult {
    let errors: Vec<f64> = draws.iter().map(|r| r.error).collect();
    PointResult { n, k, l, rate: draws.first().and_then(|r| r.rate), median_error: median(&errors), draws }
}

fn point_rows(points: &[PointResult]) -> Vec<SweepRow> {
    points.iter().flat_map(|p| p.draws.iter().map(move |r| sweep_row(r, Some(p.k), Some(p.l)))).collect()
}

/// Code draw `d` uses seed `seed + d`.
fn draw_seed(ctx: &Context, d: usize) -> u64 {
    ctx.seed.wrapping_add(d as u64)
}

pub fn simulate_ptp(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: PtpParams = config.params()?;
    need_draws(params.draws)?;
    let ptp = config.channel()?.ptp(ctx.tol())?;
    let q = u32::try_from(ptp.inputs()).map_err(|_| CliError::Config("too many channel inputs".into()))?;
    let p_v = params.p_v.clone().unwrap_or_else(|| vec![1.0 / q as f64; q as usize]);
    let mut points = Vec::with_capacity(params.points.len());
    for pt in &params.points {
        let mut draws = Vec::with_capacity(params.draws);
        for d in 0..params.draws {
            let seed = draw_seed(ctx, d);
            let mut r = ctx.timed(|| {
                let ncc = NestedCosetCode::from_seed(seed, q, pt.n, pt.k, pt.l)?;
                let (book, povm) = build_ptp_code(&ncc, &ptp, &p_v, params.delta, &ctx.limits)?;
                exact_ptp_error(&book, &povm, &ptp, &ctx.limits)
            })?;
            r.seed = Some(seed);
            draws.push(r);
        }
        points.push(point_result(pt.n, pt.k, pt.l, draws));
    }
    Ok(Artifacts {
        report: ctx.report("simulate-ptp", &points, start)?,
        sweep: Some(sweep_csv(&point_rows(&points))?),
        code: None,
    })
}

fn uniform_or(p: &Option<Vec<f64>>, len: usize) -> Vec<f64> {
    p.clone().unwrap_or_else(|| vec![1.0 / len as f64; len])
}

pub fn simulate_mac_sum(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: MacSumConfig = config.params()?;
    need_draws(params.draws)?;
    let mac = config.channel()?.mac(ctx.tol())?;
    let (e1, e2) = (joint(&params.p_v1x1)?, joint(&params.p_v2x2)?);
    let mut points = Vec::with_capacity(params.points.len());
    let mut specs: Vec<MacSumSpec> = Vec::new();
    for pt in &params.points {
        let mut draws = Vec::with_capacity(params.draws);
        for d in 0..params.draws {
            let seed = draw_seed(ctx, d);
            let code_params = MacSumParams { n: pt.n, k: pt.k, l: pt.l, delta: params.delta, seed };
            let mut spec = None;
            let mut r = ctx.timed(|| {
                let code = build_mac_sum_code(&mac, params.q, &e1, &e2, code_params, &ctx.limits)?;
                let messages = code.spec().message_count();
                let (p1, p2) = (uniform_or(&params.p_m1, messages), uniform_or(&params.p_m2, messages));
                let r = exact_mac_sum_error(&code, &p1, &p2, &mac, &ctx.limits);
                spec = Some(code.spec().clone());
                r
            })?;
            r.seed = Some(seed);
            draws.push(r);
            if params.save_code {
                specs.extend(spec);
            }
        }
        points.push(point_result(pt.n, pt.k, pt.l, draws));
    }
    Ok(Artifacts {
        report: ctx.report("simulate-mac-sum", &points, start)?,
        sweep: Some(sweep_csv(&point_rows(&points))?),
        code: if params.save_code { Some(to_json(&specs)?) } else { None },
    })
}

#[derive(Debug, Serialize)]
struct PipelineCode<'a> {
    parity: &'a KmCode,
    channel_code: &'a MacSumSpec,
}

pub fn simulate_end_to_end(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: EndToEndParams = config.params()?;
    let mac = config.channel()?.mac(ctx.tol())?;
    let source: SourcePair = config.source()?;
    let p_z = source.sum_pmf(params.q)?;
    let km = KmCode::random(params.q, params.source_n, params.l, p_z, ctx.seed, &[tag::PARITY])?;
    let (e1, e2): (JointPmf, JointPmf) = (joint(&params.p_v1x1)?, joint(&params.p_v2x2)?);
    let code_params = MacSumParams { n: params.n, k: params.k, l: params.l, delta: params.delta, seed: ctx.seed };
    let code = build_mac_sum_code(&mac, params.q, &e1, &e2, code_params, &ctx.limits)?;
    let mode = match params.eval {
        EvalConfig::Exact => EvalMode::Exact,
        EvalConfig::MonteCarlo { trials } => EvalMode::MonteCarlo { trials, seed: ctx.seed },
    };
    let mut result = ctx.timed(|| end_to_end_function_error(&km, &km, &code, &mac, &source, mode, &ctx.limits))?;
    result.seed = Some(ctx.seed);
    let code_json = if params.save_code {
        Some(to_json(&PipelineCode { parity: &km, channel_code: code.spec() })?)
    } else {
        None
    };
    Ok(Artifacts {
        report: ctx.report("simulate-end-to-end", &result, start)?,
        sweep: Some(sweep_csv(&[sweep_row(&result, Some(params.k), Some(params.l))])?),
        code: code_json,
    })
}

#[derive(Debug, Serialize)]
pub struct PinchingResult {
    pub reports: Vec<PinchingReport>,
    /// Whether the minimum trace never decreases along the listed `n`.
    pub nondecreasing: bool,
}

#[derive(Debug, Serialize)]
struct PinchingRow {
    n: usize,
    delta: f64,
    min_trace: Option<f64>,
    types_evaluated: usize,
}

pub fn verify_pinching(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: PinchingParams = config.params()?;
    let p_ab = joint(&params.joint)?;
    let states = params.states.iter().map(|s| s.build(ctx.tol())).collect::<Result<Vec<_>, _>>()?;
    let reports = params
        .n
        .iter()
        .map(|&n| pinching_check(&p_ab, &states, n, params.delta, &ctx.limits))
        .collect::<cqsum::Result<Vec<_>>>()?;
    let traces: Vec<Option<f64>> = reports.iter().map(|r| r.min_trace).collect();
    let nondecreasing = traces.iter().all(Option::is_some)
        && traces.windows(2).all(|w| w[1].unwrap() >= w[0].unwrap() - ctx.limits.tol.trace);
    let rows: Vec<PinchingRow> = reports
        .iter()
        .map(|r| PinchingRow { n: r.n, delta: r.delta, min_trace: r.min_trace, types_evaluated: r.types_evaluated })
        .collect();
    let result = PinchingResult { reports, nondecreasing };
    Ok(Artifacts {
        report: ctx.report("verify-pinching", &result, start)?,
        sweep: Some(records_csv(&["n", "delta", "min_trace", "types_evaluated"], &rows)?),
        code: None,
    })
}

pub fn verify_coverage(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: CoverageParams = config.params()?;
    let results = params
        .points
        .iter()
        .map(|pt| {
            ctx.timed(|| {
                coset_coverage_probability(
                    pt.n,
                    pt.k,
                    params.q,
                    &params.p_v,
                    params.delta,
                    params.trials,
                    ctx.seed,
                    &ctx.limits,
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<SweepRow> = params.points.iter().zip(&results).map(|(pt, r)| sweep_row(r, Some(pt.k), None)).collect();
    Ok(Artifacts {
        report: ctx.report("verify-coverage", &results, start)?,
        sweep: Some(sweep_csv(&rows)?),
        code: None,
    })
}

pub fn km(config: &ExperimentConfig, ctx: &Context) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let params: KmParams = config.params()?;
    let source = config.source()?;
    let results = params
        .l
        .iter()
        .map(|&l| {
            ctx.timed(|| {
                km_error_monte_carlo(&source, params.q, params.n, l, params.trials, ctx.seed, params.policy, &ctx.limits)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<SweepRow> = params.l.iter().zip(&results).map(|(&l, r)| sweep_row(r, None, Some(l))).collect();
    Ok(Artifacts {
        report: ctx.report("km", &results, start)?,
        sweep: Some(sweep_csv(&rows)?),
        code: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd_lengths() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
