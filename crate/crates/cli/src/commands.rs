use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use survcomp::datasets::{self, EmbeddedId};
use survcomp::distributions::{
    calibrate_uniform_theta, censoring_fraction, default_bracket, find_crossings, DistributionSpec,
};
use survcomp::montecarlo::builtin;
use survcomp::montecarlo::report::Report;
use survcomp::montecarlo::{
    derive_seed, parse_scenario_file, rejection_rates_in, size_study, worker_pool, AcceptanceInterval, StudyResult,
};
use survcomp::{km_fit, run_method, Method, TestOutcome, TwoSampleDataset};

use crate::failure::Failure;
use crate::{Command, DatasetsAction, Format, Input, Pair, RunOptions, Study};

type Result<T> = std::result::Result<T, Failure>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Test {
            input,
            methods,
            format,
            out,
        } => test(&input, &methods, format, out.as_deref()),
        Command::Datasets { action } => datasets_cmd(action),
        Command::Km { input, out_dir } => km(&input, &out_dir),
        Command::Simulate { study } => simulate(study),
        Command::Calibrate { event, target, theta } => calibrate(&event, target, theta),
        Command::Crossings { pair, tol } => crossings(&pair, tol),
        Command::Curves {
            pair,
            points,
            until,
            out,
        } => curves(&pair, points, until, out.as_deref()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(input: &Input) -> Result<(String, TwoSampleDataset)> {
    match (&input.dataset, &input.file) {
        (Some(id), _) => Ok((id.name().to_string(), datasets::embedded(*id)?)),
        (None, Some(path)) => {
            let name = path
                .file_stem()
                .map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, datasets::read_csv(path)?))
        }
        (None, None) => Err(Failure::Usage("one of --dataset or --file is required".into())),
    }
}

// ------------------------------------------------------------------ test

#[derive(Serialize)]
struct TestRow {
    method: Method,
    statistic: Option<f64>,
    null_expectation: Option<f64>,
    null_variance: Option<f64>,
    standardized: Option<f64>,
    p_value: Option<f64>,
    small_sample: Option<bool>,
    error: Option<String>,
}

impl TestRow {
    fn new(method: Method, result: survcomp::Result<TestOutcome>) -> Self {
        match result {
            Ok(o) => Self {
                method,
                statistic: Some(o.statistic),
                null_expectation: Some(o.null_expectation),
                null_variance: Some(o.null_variance),
                standardized: Some(o.standardized),
                p_value: Some(o.p_value),
                small_sample: Some(o.small_sample),
                error: None,
            },
            Err(e) => Self {
                method,
                statistic: None,
                null_expectation: None,
                null_variance: None,
                standardized: None,
                p_value: None,
                small_sample: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Serialize)]
struct DatasetInfo {
    name: String,
    n1: usize,
    n2: usize,
}

#[derive(Serialize)]
struct TestReport {
    schema_version: u32,
    kind: &'static str,
    dataset: DatasetInfo,
    results: Vec<TestRow>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "NA".to_string(), T::to_string)
}

fn test(input: &Input, methods: &[Method], format: Format, out: Option<&Path>) -> Result<()> {
    let (name, ds) = load(input)?;
    let results: Vec<TestRow> = methods.iter().map(|&m| TestRow::new(m, run_method(m, &ds))).collect();
    let text = match format {
        Format::Tsv => {
            let mut s = String::from(
                "method\tstatistic\tnull_expectation\tnull_variance\tz_or_chi2\tp_value\tsmall_sample\terror\n",
            );
            for r in &results {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.method,
                    opt(&r.statistic),
                    opt(&r.null_expectation),
                    opt(&r.null_variance),
                    opt(&r.standardized),
                    opt(&r.p_value),
                    opt(&r.small_sample),
                    r.error.as_deref().unwrap_or("")
                );
            }
            s
        }
        Format::Json => {
            let report = TestReport {
                schema_version: 1,
                kind: "test",
                dataset: DatasetInfo {
                    name,
                    n1: ds.n1(),
                    n2: ds.n2(),
                },
                results,
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    emit(&text, out)
}

// -------------------------------------------------------------- datasets

fn datasets_cmd(action: DatasetsAction) -> Result<()> {
    match action {
        DatasetsAction::List => {
            let mut s = String::from("name\tn1\tn2\tevents\tcensored\tdescription\n");
            for id in EmbeddedId::ALL {
                let ds = datasets::embedded(id)?;
                let events = ds.event_count();
                let _ = writeln!(
                    s,
                    "{id}\t{}\t{}\t{events}\t{}\t{}",
                    ds.n1(),
                    ds.n2(),
                    ds.len() - events,
                    id.description()
                );
            }
            emit(&s, None)
        }
        DatasetsAction::Show { name } => {
            let ds = datasets::embedded(name)?;
            let mut s = format!("{name}: {}\n", name.description());
            for (k, (label, obs)) in name.group_labels().iter().zip([ds.group1(), ds.group2()]).enumerate() {
                let times: Vec<String> = obs
                    .iter()
                    .map(|o| format!("{}{}", o.time(), if o.is_censored() { "+" } else { "" }))
                    .collect();
                let _ = writeln!(s, "group {} ({label}, n={}): {}", k + 1, obs.len(), times.join(" "));
            }
            emit(&s, None)
        }
        DatasetsAction::Export { name, out } => emit(&datasets::to_csv(&datasets::embedded(name)?), out.as_deref()),
    }
}

// -------------------------------------------------------------------- km

fn km(input: &Input, out_dir: &Path) -> Result<()> {
    let (name, ds) = load(input)?;
    for (g, obs) in [(1, ds.group1()), (2, ds.group2())] {
        let curve = km_fit(obs)?;
        let mut s = String::from("time,at_risk,events,survival\n");
        let _ = writeln!(s, "0,{},0,1", obs.len());
        for step in &curve.steps {
            let _ = writeln!(s, "{},{},{},{}", step.time, step.at_risk, step.events, step.survival);
        }
        let path: PathBuf = out_dir.join(format!("{name}_group{g}.csv"));
        fs::write(&path, s).map_err(|e| Failure::io(&path, e))?;
        println!("{}", path.display());
    }
    Ok(())
}

// -------------------------------------------------------------- simulate

fn write_report(
    kind: &str,
    run: &RunOptions,
    results: &[StudyResult],
    interval: Option<AcceptanceInterval>,
) -> Result<()> {
    let report = Report::new(kind, run.seed, results, interval);
    let text = match run.format {
        Format::Tsv => report.to_tsv(),
        Format::Json => report.to_json(),
    };
    emit(&text, run.out.as_deref())
}

fn simulate(study: Study) -> Result<()> {
    match study {
        Study::Size { reps, run } => {
            if reps == 0 {
                return Err(Failure::Usage("--reps must be at least 1".into()));
            }
            let rows = size_study(&builtin::size_grid(reps, run.seed), run.workers)?;
            let interval = AcceptanceInterval::new(builtin::catalog().size.alpha, reps);
            eprintln!(
                "acceptance interval at alpha {} and {reps} replications: ({:.4}, {:.4})",
                builtin::catalog().size.alpha,
                interval.lower,
                interval.upper
            );
            let results: Vec<StudyResult> = rows.into_iter().map(|r| r.result).collect();
            write_report("size", &run, &results, Some(interval))
        }
        Study::Power {
            case,
            n,
            censoring,
            reps,
            run,
        } => {
            if reps == 0 {
                return Err(Failure::Usage("--reps must be at least 1".into()));
            }
            let sizes = n.map_or_else(|| builtin::catalog().power.sample_sizes.clone(), |n| vec![n]);
            let levels = censoring.map_or_else(|| case.levels(), |c| vec![c]);
            let pool = worker_pool(run.workers)?;
            let mut results = Vec::new();
            for &n in &sizes {
                for &level in &levels {
                    let cfg = builtin::power_scenario(case, n, level, reps, run.seed)?;
                    results.push(rejection_rates_in(&cfg, &pool)?);
                }
            }
            write_report("power", &run, &results, None)
        }
        Study::Custom { config, reps, run } => {
            let text = fs::read_to_string(&config).map_err(|e| Failure::io(&config, e))?;
            let mut scenarios = parse_scenario_file(&text)?;
            let pool = worker_pool(run.workers)?;
            let mut results = Vec::new();
            for (k, cfg) in scenarios.iter_mut().enumerate() {
                cfg.master_seed = derive_seed(run.seed, k as u64);
                if let Some(r) = reps {
                    cfg.replications = r;
                }
                results.push(rejection_rates_in(cfg, &pool)?);
            }
            write_report("custom", &run, &results, None)
        }
    }
}

// ------------------------------------------------- distribution helpers

fn calibrate(event: &DistributionSpec, target: Option<f64>, theta: Option<f64>) -> Result<()> {
    let theta = match (target, theta) {
        (Some(p), _) => calibrate_uniform_theta(event, p)?,
        (None, Some(t)) => t,
        (None, None) => return Err(Failure::Usage("one of --target or --theta is required".into())),
    };
    let cens = DistributionSpec::uniform(theta)?;
    println!("event\ttheta\tcensoring_fraction");
    println!("{event}\t{theta}\t{}", censoring_fraction(event, &cens));
    Ok(())
}

fn resolve_pair(pair: &Pair) -> Result<(DistributionSpec, DistributionSpec)> {
    match (pair.case, pair.first, pair.second) {
        (Some(case), _, _) => Ok(case.events()),
        (None, Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Failure::Usage("give --case or both --first and --second".into())),
    }
}

fn crossings(pair: &Pair, tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let (a, b) = resolve_pair(pair)?;
    let report = find_crossings(&a, &b, default_bracket(&a, &b), tol);
    println!("# {a} vs {b}, scanned [{}, {}]", report.bracket.0, report.bracket.1);
    println!("crossing\ttime");
    for (k, t) in report.times.iter().enumerate() {
        println!("{}\t{t}", k + 1);
    }
    Ok(())
}

fn curves(pair: &Pair, points: usize, until: Option<f64>, out: Option<&Path>) -> Result<()> {
    let (a, b) = resolve_pair(pair)?;
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let end = match until {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Failure::Usage(format!("--until must be positive, got {t}"))),
        None => default_bracket(&a, &b).1,
    };
    let mut s = String::from("time,survival1,survival2\n");
    for i in 0..points {
        let t = end * i as f64 / (points - 1) as f64;
        let _ = writeln!(s, "{t},{},{}", a.survival(t), b.survival(t));
    }
    emit(&s, out)
}
