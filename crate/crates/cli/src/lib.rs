//! `figdata` command line: restructure a corpus, extract data from its
//! figures, generate synthetic figures, and score extractions.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use figdata_core::pipeline::{
    make_project, run_project_with_jobs, CorpusProject, ExtractionStatus, PipelineConfig, DEFAULT_FIGURE_FILTER,
};
use figdata_core::synth::{
    evaluate_project, table_csv, write_synthetic_figure, AxisStyle, SyntheticSpec, DEFAULT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE_OR_IO: i32 = 1;
pub const EXIT_FIGURE_FAILURES: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "figdata", version, about = "Recover data points from SVG scatter figures")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Move raw files into the tree layout
    MakeProject(MakeProjectArgs),
    /// Extract data from every matched figure
    Extract(ExtractArgs),
    /// Write synthetic figures with truth files
    Generate(GenerateArgs),
    /// Score extracted CSVs against truth files
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
struct MakeProjectArgs {
    #[arg(long)]
    project: PathBuf,
    /// Regular expression matched against each file's full path
    #[arg(long = "fileFilter")]
    file_filter: String,
    /// Destination template, `(\1)/fulltext.pdf` style
    #[arg(long = "makeProject")]
    make_project: String,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    project: PathBuf,
    /// Figure filter; the first capture group is the figure index
    #[arg(long = "fileFilter", default_value = DEFAULT_FIGURE_FILTER)]
    file_filter: String,
    /// Output root (defaults to the project root)
    #[arg(long = "outputDir")]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parallel figure workers
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Only `scatter2csv` runs here
    #[arg(long, default_value = "scatter2csv")]
    transform: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Standard,
    ReversedX,
    ReversedY,
    LogX,
    RasterBody,
}

impl From<StyleArg> for AxisStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Standard => AxisStyle::Standard,
            StyleArg::ReversedX => AxisStyle::ReversedX,
            StyleArg::ReversedY => AxisStyle::ReversedY,
            StyleArg::LogX => AxisStyle::LogX,
            StyleArg::RasterBody => AxisStyle::RasterBody,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Project root to write figures into
    #[arg(long = "outputDir")]
    output_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON spec file; overrides the seed-drawn spec except for the seed
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    count: u32,
    #[arg(long, value_enum, default_value = "standard")]
    style: StyleArg,
    #[arg(long, default_value = "synthetic")]
    tree: String,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    project: PathBuf,
    #[arg(long = "fileFilter", default_value = DEFAULT_FIGURE_FILTER)]
    file_filter: String,
    /// Where the extracted CSVs were written (defaults to the project root)
    #[arg(long = "outputDir")]
    output_dir: Option<PathBuf>,
    /// Allowed error as a fraction of the axis span
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type CmdResult = Result<i32, String>;

/// Runs the command line given in `argv` (program name first) and returns
/// the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_USAGE_OR_IO
            };
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::MakeProject(a) => cmd_make_project(a, &mut io),
        Command::Extract(a) => cmd_extract(a, &mut io),
        Command::Generate(a) => cmd_generate(a, &mut io),
        Command::Evaluate(a) => cmd_evaluate(a, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_USAGE_OR_IO
        }
    }
}

fn cmd_make_project(a: MakeProjectArgs, io: &mut Io) -> CmdResult {
    let project = make_project(&a.project, &a.file_filter, &a.make_project).map_err(|e| e.to_string())?;
    for tree in &project.trees {
        let fulltext = if tree.fulltext.is_some() { "fulltext.pdf" } else { "no fulltext" };
        let _ = writeln!(io.out, "{}: {fulltext}, {} figure(s)", tree.id, tree.figures.len());
    }
    Ok(EXIT_OK)
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig, String> {
    match path {
        Some(p) => PipelineConfig::load(p).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(PipelineConfig::default()),
    }
}

fn cmd_extract(a: ExtractArgs, io: &mut Io) -> CmdResult {
    match a.transform.as_str() {
        "scatter2csv" => {}
        "pdf2svg" => {
            return Err("transform pdf2svg is delegated to an external converter; supply per-figure SVGs".into())
        }
        other => return Err(format!("unknown transform `{other}` (only scatter2csv is available)")),
    }
    let config = load_config(a.config.as_deref())?;
    let project = CorpusProject::scan(&a.project).map_err(|e| e.to_string())?;
    let output = a.output_dir.unwrap_or_else(|| a.project.clone());
    let reports = run_project_with_jobs(&project, &a.file_filter, &config, &output, usize::from(a.jobs))
        .map_err(|e| e.to_string())?;
    for r in &reports {
        let name = format!("{}/figure{}", r.tree_id, r.figure_index);
        let _ = writeln!(io.out, "{name}: {} ({} points)", r.status, r.n_points);
        if let Some(m) = &r.message {
            let _ = writeln!(io.err, "{name}: {m}");
        }
        for w in &r.warnings {
            let _ = writeln!(io.err, "{name}: warning: {w}");
        }
    }
    Ok(if reports.iter().all(|r| r.status == ExtractionStatus::Ok) {
        EXIT_OK
    } else {
        EXIT_FIGURE_FAILURES
    })
}

fn cmd_generate(a: GenerateArgs, io: &mut Io) -> CmdResult {
    let template: Option<SyntheticSpec> = match &a.spec {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Some(serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?)
        }
        None => None,
    };
    for i in 0..a.count {
        let seed = a.seed + u64::from(i);
        let spec = match &template {
            Some(t) => SyntheticSpec { seed, ..t.clone() },
            None => SyntheticSpec::random_with_style(seed, a.style.into()),
        };
        let index = i + 1;
        write_synthetic_figure(&a.output_dir, &a.tree, index, &spec).map_err(|e| e.to_string())?;
        let _ = writeln!(io.out, "{}/figure{index}: seed {seed} ({} points)", a.tree, spec.n_points);
    }
    Ok(EXIT_OK)
}

fn cmd_evaluate(a: EvaluateArgs, io: &mut Io) -> CmdResult {
    if !(a.tolerance > 0.0 && a.tolerance.is_finite()) {
        return Err("--tolerance must be a positive number".into());
    }
    let project = CorpusProject::scan(&a.project).map_err(|e| e.to_string())?;
    let output = a.output_dir.unwrap_or_else(|| a.project.clone());
    let eval = evaluate_project(&project, &a.file_filter, &output, a.tolerance).map_err(|e| e.to_string())?;
    let table = table_csv(&eval.records);
    let _ = write!(io.out, "{table}");
    fs::create_dir_all(&output).map_err(|e| format!("{}: {e}", output.display()))?;
    let csv_path = output.join("evaluation.csv");
    fs::write(&csv_path, &table).map_err(|e| format!("{}: {e}", csv_path.display()))?;
    let json_path = output.join("evaluation.json");
    let mut json = serde_json::to_vec_pretty(&eval).expect("evaluation serializes");
    json.push(b'\n');
    fs::write(&json_path, json).map_err(|e| format!("{}: {e}", json_path.display()))?;
    let g = eval.aggregate;
    let _ = writeln!(
        io.err,
        "{} figure(s): {} with data, {} both axes correct ({:.1}%)",
        g.total,
        g.extracted,
        g.both_correct,
        100.0 * g.both_correct_fraction
    );
    Ok(EXIT_OK)
}
