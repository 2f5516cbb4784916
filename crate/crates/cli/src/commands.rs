use std::path::Path;

use padic_diaphony::exec::with_workers;
use padic_diaphony::{
    float_to_digits, default_depth, halton_prefix, halton_stream, theorem1_bound, worst_case_error, Engine,
    Error, KernelMode, Point, PrimeBases,
};

use crate::config::{
    BoundArgs, DiaphonyArgs, HaltonArgs, LemmaArgs, MethodArg, ModeArg, RunConfig, Step, SweepArgs,
};
use crate::output::{Cell, Table};
use crate::CliError;

/// Maps a library error onto a CLI error, naming `flag` for validation failures.
fn lib_err(flag: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::BoxTooLarge { .. } => CliError::TooLarge(format!("{flag}: {e}")),
        _ => CliError::Usage(format!("{flag}: {e}")),
    }
}

fn run<R: Send>(workers: Option<u64>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(w) => with_workers(w as usize, f),
        None => f(),
    }
}

fn nonzero_count(count: u64) -> Result<usize, CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count: at least one point is required".into()));
    }
    usize::try_from(count).map_err(|_| CliError::Usage(format!("--count: {count} is too large")))
}

pub fn halton(args: HaltonArgs) -> Result<(), CliError> {
    let (mut config, bases) = RunConfig::new("halton", &args.common)?;
    config.count = Some(args.count);
    config.start = args.start;
    let stream = halton_stream(args.count, &bases, args.start).map_err(lib_err("--count"))?;

    let mut header = vec!["n"];
    for i in 1..=bases.dim() {
        header.push(leak(format!("x{i}")));
        header.push(leak(format!("x{i}_dec")));
    }
    let mut table = Table::new(header);
    for (n, point) in (args.start..).zip(stream) {
        let mut row = vec![Cell::Int(n)];
        for c in point.coords() {
            row.push(Cell::Text(c.to_string()));
            row.push(Cell::Float(c.to_f64()));
        }
        table.push(row);
    }
    table.write(&config)
}

/// Column names are built once per run, so leaking them is harmless.
fn leak(s: String) -> &'static str {
    Box::leak(s.into_boxed_str())
}

fn read_points(path: &Path, bases: &PrimeBases, depth: Option<usize>) -> Result<Vec<Point>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("--points {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io(format!("--points: {e}")))?;
        let bad = |msg: String| CliError::Usage(format!("--points: row {}: {msg}", line + 1));
        if record.len() != bases.dim() {
            return Err(bad(format!("expected {} values, found {}", bases.dim(), record.len())));
        }
        let coords = record
            .iter()
            .zip(bases.as_slice())
            .map(|(field, &p)| {
                let x: f64 = field.parse().map_err(|_| bad(format!("`{field}` is not a number")))?;
                float_to_digits(x, p, depth.unwrap_or_else(|| default_depth(p))).map_err(|e| bad(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(Point::new(coords).map_err(|e| bad(e.to_string()))?);
    }
    if points.is_empty() {
        return Err(CliError::Usage("--points: file contains no points".into()));
    }
    Ok(points)
}

pub fn diaphony(args: DiaphonyArgs) -> Result<(), CliError> {
    let (mut config, bases) = RunConfig::new("diaphony", &args.common)?;
    config.method = Some(args.method);
    config.mode = Some(args.mode);
    config.truncation = args.g.clone();
    config.start = args.start;
    config.points_file = args.points.clone();
    if args.depth == Some(0) {
        return Err(CliError::Usage("--depth must be positive".into()));
    }

    let points = match &args.points {
        Some(path) => {
            let mut pts = read_points(path, &bases, args.depth)?;
            if let Some(c) = args.count {
                pts.truncate(nonzero_count(c)?);
            }
            pts
        }
        None => {
            let count = args
                .count
                .ok_or_else(|| CliError::Usage("--count is required unless --points is given".into()))?;
            nonzero_count(count)?;
            halton_stream(count, &bases, args.start).map_err(lib_err("--count"))?.collect()
        }
    };
    config.count = Some(points.len() as u64);

    let engine = Engine::new();
    let report = match args.method {
        MethodArg::Kernel => {
            if args.g.is_some() {
                return Err(CliError::Usage("--g only applies to --method spectral".into()));
            }
            run(config.workers, || engine.kernel(&points, &bases, KernelMode::from(args.mode)))
                .map_err(lib_err("--points"))?
        }
        MethodArg::Spectral => {
            if args.mode == ModeArg::Exact {
                return Err(CliError::Usage("--mode exact only applies to --method kernel".into()));
            }
            let g = config.truncation_box(&bases)?;
            run(config.workers, || engine.spectral(&points, &bases, &g)).map_err(lib_err("--g"))?
        }
    };

    let (lower, upper) = match report.enclosure {
        Some((lo, hi)) => (Cell::Float(lo), Cell::Float(hi)),
        None => (Cell::Empty, Cell::Empty),
    };
    let mut table = Table::new(vec!["N", "F", "F2", "e", "lower_F2", "upper_F2"]);
    table.push(vec![
        Cell::Int(report.n_points as u64),
        Cell::Float(report.f),
        Cell::Float(report.f_squared),
        Cell::Float(worst_case_error(&report, &bases)),
        lower,
        upper,
    ]);
    table.write(&config)
}

pub fn bound(args: BoundArgs) -> Result<(), CliError> {
    let (mut config, bases) = RunConfig::new("bound", &args.common)?;
    config.count = Some(args.count);
    let report = theorem1_bound(&bases, args.count).map_err(lib_err("--count"))?;
    let mut table = Table::new(vec!["N", "c", "d", "bound_F2", "bound_F"]);
    table.push(vec![
        Cell::Int(report.n_points),
        Cell::Float(report.c),
        Cell::Float(report.d),
        Cell::Float(report.bound_f_squared),
        Cell::Float(report.bound_f()),
    ]);
    table.write(&config)
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let (mut config, bases) = RunConfig::new("sweep", &args.common)?;
    let step: Step = args.step.parse()?;
    if args.from == 0 || args.to < args.from {
        return Err(CliError::Usage(format!(
            "--from/--to: need 1 <= from <= to, got {}..{}",
            args.from, args.to
        )));
    }
    config.count = Some(args.to);
    config.range = Some((args.from, args.to, args.step.clone()));
    let ns = step.values(args.from, args.to);
    if ns.is_empty() {
        return Err(CliError::Usage("--step: no values of N fall in the range".into()));
    }
    let last = nonzero_count(*ns.last().expect("nonempty"))?;

    let points = halton_prefix(last, &bases);
    let engine = Engine::new();
    let prefix = run(config.workers, || engine.kernel_prefix(&points, &bases)).map_err(lib_err("--to"))?;

    let mut table = Table::new(vec!["N", "F", "F2", "bound_F2", "ratio"]);
    for n in ns {
        let f2 = prefix[n as usize - 1];
        let b = theorem1_bound(&bases, n).map_err(lib_err("--bases"))?;
        table.push(vec![
            Cell::Int(n),
            Cell::Float(f2.sqrt()),
            Cell::Float(f2),
            Cell::Float(b.bound_f_squared),
            Cell::Float(f2 / b.bound_f_squared),
        ]);
    }
    table.write(&config)
}

pub fn verify_lemma(args: LemmaArgs) -> Result<(), CliError> {
    let (mut config, bases) = RunConfig::new("verify-lemma", &args.common)?;
    config.count = Some(args.count);
    config.truncation = Some(args.g.clone());
    let n = nonzero_count(args.count)?;
    let g = config.truncation_box(&bases)?;
    let engine = Engine::new();
    let report = run(config.workers, || engine.verify_lemma(n, &bases, &g)).map_err(lib_err("--g"))?;

    let mut table = Table::new(vec!["N", "g", "worst_ratio", "worst_index", "violations", "checked"]);
    table.push(vec![
        Cell::Int(report.n_points as u64),
        Cell::Text(report.truncation.to_string()),
        Cell::Float(report.worst_ratio),
        Cell::Text(report.worst_index.to_string()),
        Cell::Int(report.violations),
        Cell::Int(report.checked),
    ]);
    table.write(&config)?;
    if report.violations > 0 {
        return Err(CliError::Violations(report.violations));
    }
    Ok(())
}
