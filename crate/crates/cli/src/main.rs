use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cloudcost_core::assess::{self, AssessmentItem, ImportantItems, RadarData};
use cloudcost_core::engine::{
    compare_providers, compare_scenarios, simulate, CostReport, ProviderMap, PurchasePlan, Scenario, ScenarioComparison,
    SimulationError, SimulationWindow, SummaryRow,
};
use cloudcost_core::model::{parse_model, validate, DeploymentModel};
use cloudcost_core::pricing::{load_catalog, PriceCatalog};
use cloudcost_core::report::{render_comparison, to_cents, to_csv, to_html, HtmlOptions};
use cloudcost_core::{Diagnostic, Money, YearMonth};

#[derive(Parser)]
#[command(name = "cloudcost", version, about = "Estimate and compare IaaS deployment costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file; prints diagnostics and exits 1 on errors.
    Validate { model: PathBuf },
    /// Simulate one model and write report.csv, report.html and summary.json.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Rating sheet whose radar is added to the HTML report.
        #[arg(long)]
        ratings: Option<PathBuf>,
        #[arg(long)]
        items: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the cost lines of one simulation as CSV.
    ExportCsv {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare several models side by side.
    Compare {
        #[arg(long, value_delimiter = ',', required = true)]
        models: Vec<PathBuf>,
        /// Row labels; the model names when omitted.
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        /// Purchase plans, one per model; use `-` for on demand.
        #[arg(long, value_delimiter = ',')]
        plans: Vec<String>,
        #[command(flatten)]
        pricing: PricingArgs,
        /// Also write the table as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-place a model at each provider of a mapping file and compare.
    CompareProviders {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a rating sheet: radar.json and important.json in DIR.
    Assess {
        /// Items file; the bundled benefit/risk items when omitted.
        #[arg(long)]
        items: Option<PathBuf>,
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long, default_value_t = assess::DEFAULT_THRESHOLD)]
        threshold: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PricingArgs {
    #[arg(long, env = "CLOUDCOST_CATALOG")]
    catalog: PathBuf,
    /// First simulated month, YYYY-MM.
    #[arg(long)]
    start: YearMonth,
    /// Last simulated month, YYYY-MM.
    #[arg(long)]
    end: YearMonth,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    pricing: PricingArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SimulationError> for Failure {
    fn from(err: SimulationError) -> Self {
        let code = match err {
            SimulationError::MissingRate { .. } => 3,
            SimulationError::InvalidWindow { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { model } => cmd_validate(&model),
        Command::Simulate {
            run,
            plan,
            ratings,
            items,
            out,
        } => cmd_simulate(&run, plan.as_deref(), ratings.as_deref(), items.as_deref(), &out),
        Command::ExportCsv { run, plan, out } => cmd_export_csv(&run, plan.as_deref(), out.as_deref()),
        Command::Compare {
            models,
            labels,
            plans,
            pricing,
            out,
        } => cmd_compare(&models, &labels, &plans, &pricing, out.as_deref()),
        Command::CompareProviders { run, map, plan, out } => cmd_compare_providers(&run, &map, plan.as_deref(), out.as_deref()),
        Command::Assess {
            items,
            ratings,
            threshold,
            out,
        } => cmd_assess(items.as_deref(), &ratings, threshold, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn print_diagnostics(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

fn load_model(path: &Path) -> Result<DeploymentModel, Failure> {
    let text = read(path)?;
    let model = parse_model(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let diagnostics = validate(&model);
    print_diagnostics(&diagnostics);
    if cloudcost_core::diagnostics::has_errors(&diagnostics) {
        return Err(Failure::invalid(format!("{}: model is invalid", path.display())));
    }
    Ok(model)
}

fn load_price_catalog(path: &Path) -> Result<PriceCatalog, Failure> {
    load_catalog(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_plan(path: Option<&Path>) -> Result<PurchasePlan, Failure> {
    match path {
        None => Ok(PurchasePlan::new()),
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
    }
}

fn window(pricing: &PricingArgs) -> Result<SimulationWindow, Failure> {
    Ok(SimulationWindow::new(pricing.start, pricing.end)?)
}

fn load_items(path: Option<&Path>) -> Result<Vec<AssessmentItem>, Failure> {
    match path {
        None => Ok(assess::seed_items()),
        Some(p) => assess::load_items(&read(p)?).map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
    }
}

/// Replaces `path` in one step so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::invalid(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn cmd_validate(path: &Path) -> Outcome {
    load_model(path).map(|_| ())
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    model: &'a str,
    currency: &'a str,
    window: SimulationWindow,
    #[serde(flatten)]
    summary: SummaryRow,
    by_group: Vec<(String, Money)>,
    by_dimension: Vec<(String, Money)>,
    warnings: &'a [String],
}

fn run(run: &RunArgs, plan: Option<&Path>) -> Result<(DeploymentModel, CostReport), Failure> {
    let model = load_model(&run.model)?;
    let catalog = load_price_catalog(&run.pricing.catalog)?;
    let plan = load_plan(plan)?;
    let report = simulate(&model, &catalog, window(&run.pricing)?, &plan)?;
    Ok((model, to_cents(&report)))
}

fn cmd_simulate(args: &RunArgs, plan: Option<&Path>, ratings: Option<&Path>, items: Option<&Path>, out: &Path) -> Outcome {
    let (model, report) = run(args, plan)?;
    let radar = match ratings {
        Some(r) => {
            let items = load_items(items)?;
            let sheet = assess::parse_ratings(&read(r)?).map_err(|e| Failure::invalid(format!("{}: {e}", r.display())))?;
            Some(assess::radar(&sheet, &items))
        }
        None => None,
    };
    fs::create_dir_all(out).map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out.display())))?;

    let summary = report.summary(&model.name);
    let html = to_html(
        &report,
        &HtmlOptions {
            title: &model.name,
            summaries: std::slice::from_ref(&summary),
            radar: radar.as_ref(),
            model: Some(&model),
        },
    );
    let summary_file = SummaryFile {
        model: &model.name,
        currency: &report.currency,
        window: report.window,
        summary: summary.clone(),
        by_group: report.rollup(cloudcost_core::engine::RollupBy::Group),
        by_dimension: report.rollup(cloudcost_core::engine::RollupBy::Dimension),
        warnings: &report.warnings,
    };
    write_atomic(&out.join("report.csv"), &to_csv(&report))?;
    write_atomic(&out.join("report.html"), &html)?;
    write_atomic(&out.join("summary.json"), &to_json(&summary_file))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{}: first month {}, monthly avg. {}, total {} {} over {} months",
        model.name,
        summary.first_month.to_grouped_string(),
        summary.monthly_avg.to_grouped_string(),
        summary.total.to_grouped_string(),
        report.currency,
        summary.months
    );
    Ok(())
}

fn cmd_export_csv(args: &RunArgs, plan: Option<&Path>, out: Option<&Path>) -> Outcome {
    let (_, report) = run(args, plan)?;
    let csv = to_csv(&report);
    match out {
        Some(path) => write_atomic(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn print_comparison(cmp: &ScenarioComparison, out: Option<&Path>) -> Outcome {
    let currency = cmp.reports.first().map_or("", |r| r.1.currency.as_str());
    print!("{}", render_comparison(&cmp.table, currency));
    if let Some(path) = out {
        write_atomic(path, &to_json(&cmp.table))?;
    }
    Ok(())
}

fn cmd_compare(models: &[PathBuf], labels: &[String], plans: &[String], pricing: &PricingArgs, out: Option<&Path>) -> Outcome {
    if !labels.is_empty() && labels.len() != models.len() {
        return Err(Failure::usage("--labels must name every model"));
    }
    if !plans.is_empty() && plans.len() != models.len() {
        return Err(Failure::usage("--plans must give one plan per model"));
    }
    let catalog = load_price_catalog(&pricing.catalog)?;
    let mut scenarios = Vec::with_capacity(models.len());
    for (i, path) in models.iter().enumerate() {
        let model = load_model(path)?;
        let plan = match plans.get(i).map(String::as_str) {
            None | Some("-") => PurchasePlan::new(),
            Some(p) => load_plan(Some(Path::new(p)))?,
        };
        let label = labels.get(i).cloned().unwrap_or_else(|| model.name.clone());
        scenarios.push(Scenario { label, model, plan });
    }
    let cmp = compare_scenarios(&scenarios, &catalog, window(pricing)?)?;
    print_comparison(&cmp, out)
}

fn cmd_compare_providers(args: &RunArgs, map: &Path, plan: Option<&Path>, out: Option<&Path>) -> Outcome {
    let model = load_model(&args.model)?;
    let catalog = load_price_catalog(&args.pricing.catalog)?;
    let map: ProviderMap =
        serde_json::from_str(&read(map)?).map_err(|e| Failure::invalid(format!("{}: {e}", map.display())))?;
    let plan = load_plan(plan)?;
    let cmp = compare_providers(&model, &catalog, window(&args.pricing)?, &plan, &map)?;
    print_comparison(&cmp, out)
}

#[derive(Serialize)]
struct ImportantFile<'a> {
    respondent: &'a str,
    view: &'a str,
    threshold: i64,
    #[serde(flatten)]
    items: ImportantItems,
}

fn cmd_assess(items: Option<&Path>, ratings: &Path, threshold: i64, out: &Path) -> Outcome {
    let items = load_items(items)?;
    let sheet =
        assess::parse_ratings(&read(ratings)?).map_err(|e| Failure::invalid(format!("{}: {e}", ratings.display())))?;
    let diagnostics = assess::validate_sheet(&sheet, &items);
    print_diagnostics(&diagnostics);
    if cloudcost_core::diagnostics::has_errors(&diagnostics) {
        return Err(Failure::invalid(format!("{}: rating sheet is invalid", ratings.display())));
    }
    let radar: RadarData = assess::radar(&sheet, &items);
    let important = assess::important_items(&sheet, &items, threshold);
    fs::create_dir_all(out).map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out.display())))?;
    write_atomic(&out.join("radar.json"), &to_json(&radar))?;
    write_atomic(
        &out.join("important.json"),
        &to_json(&ImportantFile {
            respondent: &sheet.respondent,
            view: &sheet.role_view,
            threshold,
            items: important.clone(),
        }),
    )?;
    for entry in &radar.entries {
        println!("{:<8} {:<15} {:.2} ({} rated)", entry.kind, entry.category, entry.average, entry.item_count);
    }
    println!(
        "important: {} benefits [{}], {} risks [{}]",
        important.benefits.len(),
        important.benefits.join(", "),
        important.risks.len(),
        important.risks.join(", ")
    );
    Ok(())
}
