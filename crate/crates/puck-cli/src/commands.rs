//! Handlers behind each subcommand.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use puck_core::{
    classify_regime, empirical_potential, scan_windows, select_model, simulate,
    stability_boundaries, NoiseModel, PotentialModel, SimulationConfig, TickSeries,
};

use crate::cli::{
    Cli, ClassifyArgs, Command, FitArgs, FitFlags, FormatArg, InputArgs, MakeDemoArgs, NoiseArg,
    PotentialArgs, ScanArgs, SimulateArgs, StabilityArgs,
};
use crate::config::RunConfig;
use crate::demo::{glued_scenario, DemoSpec};
use crate::ingest::{ingest, price_csv, IngestSpec, InputFormat};
use crate::report::{
    potential_curve, increment_curve, render_records, InputSummary, ReportRecord,
    SelectionSummary,
};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Potential(args) => cmd_potential(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Stability(args) => cmd_stability(args),
        Command::MakeDemo(args) => cmd_make_demo(args),
    }
}

fn read_series(args: &InputArgs) -> Result<(TickSeries, InputSummary)> {
    let spec = IngestSpec {
        path: args.input.clone(),
        format: match args.format {
            FormatArg::Auto => InputFormat::Auto,
            FormatArg::TimePrice => InputFormat::TimePrice,
            FormatArg::PriceOnly => InputFormat::PriceOnly,
        },
        delimiter: u8::try_from(args.delimiter).context("delimiter must be an ASCII character")?,
        skip_header: args.skip_header,
    };
    let (series, stats) = ingest(&spec)?;
    let summary = InputSummary {
        path: args.input.display().to_string(),
        label: series.label().to_string(),
        stats,
    };
    Ok((series, summary))
}

/// Flags override config-file values, which override built-in defaults.
fn effective_config(flags: &FitFlags) -> Result<RunConfig> {
    let mut cfg = match &flags.grid_spec {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(criterion) = flags.criterion {
        cfg.criterion = criterion.into();
    }
    if let Some(noise) = flags.noise_override() {
        cfg.noise = noise;
    }
    if flags.refine {
        cfg.grid.refine = true;
    }
    if let Some(epsilon) = flags.epsilon {
        cfg.epsilon = epsilon;
    }
    if let Some(delta) = flags.delta_threshold {
        cfg.delta_threshold = delta;
    }
    Ok(cfg)
}

/// Report streams go to `--out` when given, stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let model = PotentialModel::new(args.b_quad, args.gamma, args.b_nl, args.m, args.sigma)?;
    let noise = match args.noise {
        NoiseArg::Gaussian => NoiseModel::Gaussian { sigma: args.sigma },
        NoiseArg::StudentT => {
            NoiseModel::StudentT { sigma: args.sigma, dof: args.dof.unwrap_or(4.0) }
        }
    };
    let config = SimulationConfig {
        initial_prices: vec![args.init_price; args.m],
        model,
        noise,
        n_steps: args.n,
        rng_seed: args.seed,
    };
    let series = simulate(&config)?;
    write_file(&args.out, &price_csv(&series))?;
    let record = ReportRecord::Series {
        path: args.out.display().to_string(),
        rows: series.len(),
        sim: Some(config),
        demo: None,
        cubic_start: None,
        crash_start: None,
    };
    emit(None, &render_records(&[record]))
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let (series, input) = read_series(&args.input)?;
    let cfg = effective_config(&args.fit)?;
    let selection = select_model(&series, &cfg.grid, cfg.criterion, cfg.noise)?;
    let records = vec![
        ReportRecord::Header { command: "fit".into(), config: Some(cfg), input: Some(input) },
        ReportRecord::Fit { selection: SelectionSummary::from_selection(&selection), regime: None },
    ];
    emit(args.out.as_deref(), &render_records(&records))
}

fn cmd_classify(args: ClassifyArgs) -> Result<()> {
    let (series, input) = read_series(&args.input)?;
    let cfg = effective_config(&args.fit)?;
    let selection = select_model(&series, &cfg.grid, cfg.criterion, cfg.noise)?;
    let boundaries = stability_boundaries(selection.best().model.m.max(2))?;
    let regime = classify_regime(&selection, boundaries, cfg.epsilon, cfg.delta_threshold)?;
    let records = vec![
        ReportRecord::Header { command: "classify".into(), config: Some(cfg), input: Some(input) },
        ReportRecord::Fit {
            selection: SelectionSummary::from_selection(&selection),
            regime: Some(regime),
        },
    ];
    emit(args.out.as_deref(), &render_records(&records))
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let (series, input) = read_series(&args.input)?;
    let mut cfg = effective_config(&args.fit)?;
    if let Some(window) = args.window {
        cfg.window = window;
    }
    if let Some(step) = args.step {
        cfg.step = step;
    }
    let records = scan_windows(&series, &cfg.grid, &cfg.scan_options())?;
    let mut out = Vec::with_capacity(records.len() + 1);
    out.push(ReportRecord::Header {
        command: "scan".into(),
        config: Some(cfg),
        input: Some(input),
    });
    out.extend(records.iter().map(ReportRecord::window));
    emit(args.out.as_deref(), &render_records(&out))
}

fn cmd_potential(args: PotentialArgs) -> Result<()> {
    let (series, input) = read_series(&args.input)?;
    let bins = args.bins.unwrap_or_else(|| RunConfig::default().bins);
    let potential = empirical_potential(&series, args.m, bins)?;
    write_file(&args.out, &potential_curve(&potential))?;
    if let Some(path) = &args.increments_out {
        write_file(path, &increment_curve(&potential))?;
    }
    let records = vec![
        ReportRecord::Header { command: "potential".into(), config: None, input: Some(input) },
        ReportRecord::Potential {
            m: args.m,
            bins_requested: bins,
            bins_kept: potential.bin_centers.len(),
        },
    ];
    emit(None, &render_records(&records))
}

fn cmd_stability(args: StabilityArgs) -> Result<()> {
    let (b_low, b_high) = stability_boundaries(args.m)?;
    let record = ReportRecord::Stability { m: args.m, b_low, b_high };
    emit(args.out.as_deref(), &render_records(&[record]))
}

fn cmd_make_demo(args: MakeDemoArgs) -> Result<()> {
    let spec = DemoSpec {
        m: args.m,
        sigma: args.sigma,
        quad_len: args.n_quad,
        cubic_len: args.n_cubic,
        crash_len: args.n_crash,
        start_price: 100.0,
        seed: args.seed,
    };
    let scenario = glued_scenario(&spec)?;
    write_file(&args.out, &price_csv(&scenario.series))?;
    let record = ReportRecord::Series {
        path: args.out.display().to_string(),
        rows: scenario.series.len(),
        sim: None,
        demo: Some(spec),
        cubic_start: Some(scenario.cubic_start),
        crash_start: Some(scenario.crash_start),
    };
    emit(None, &render_records(&[record]))
}
