//! The fit, bench, and validate workflows.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use binfit::bench::{run_benchmark, write_metrics, write_scatter, Estimator};
use binfit::binned::{read_samples, ColumnMap};
use binfit::power::PowerFamily;
use binfit::{
    best_of_breed, fit_dagum, fit_egg, fit_gb2, fit_power, midpoint_estimate, BinnedSample,
    EligibilityRule, FitConfig, FitResult,
};

use crate::config::{default_family, FileConfig};
use crate::output::{Row, HEADER};
use crate::{DataArgs, EXIT_OK, EXIT_PARTIAL};

fn column_map(data: &DataArgs) -> ColumnMap {
    ColumnMap {
        id: data.id.clone(),
        min: data.min.clone(),
        max: data.max.clone(),
        n: data.n.clone(),
    }
}

fn load_units(data: &DataArgs) -> Result<Vec<BinnedSample>, String> {
    read_samples(&data.data, &column_map(data))
        .map_err(|e| format!("{}: {e}", data.data.display()))
}

fn unit_config(base: &FitConfig, seed: u64, index: usize) -> FitConfig {
    base.with_seed(seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Fits `model` to each unit of `sample`, already validated.
fn fit_one(model: &str, sample: &BinnedSample, config: &FitConfig, top_bin_factor: f64) -> Result<Row, String> {
    let row = match model {
        "egg" => Row::from_fit(&sample.id, &fit_egg(sample, config).map_err(stringify)?),
        "pn" => Row::from_fit(
            &sample.id,
            &fit_power(sample, PowerFamily::Normal, config).map_err(stringify)?,
        ),
        "pl" => Row::from_fit(
            &sample.id,
            &fit_power(sample, PowerFamily::Logistic, config).map_err(stringify)?,
        ),
        "dagum" => Row::from_fit(&sample.id, &fit_dagum(sample, config).map_err(stringify)?),
        "gb2" => Row::from_fit(&sample.id, &fit_gb2(sample, config).map_err(stringify)?),
        "midpoint" => Row::from_midpoint(&sample.id, &midpoint_estimate(sample, top_bin_factor)),
        "best" => {
            let egg = fit_egg(sample, config);
            let pn = fit_power(sample, PowerFamily::Normal, config);
            let pl = fit_power(sample, PowerFamily::Logistic, config);
            // Eligibility failures abort the unit rather than silently
            // entering selection with all candidates missing.
            if let Err(e @ binfit::FitError::IneligibleSample(_)) = &pn {
                return Err(stringify(e.clone()));
            }
            let chosen: FitResult =
                best_of_breed(egg.ok(), pn.ok(), pl.ok()).map_err(|e| e.to_string())?.chosen;
            Row::from_fit(&sample.id, &chosen)
        }
        other => return Err(format!("unknown model '{other}'")),
    };
    Ok(row)
}

fn stringify(e: binfit::FitError) -> String {
    match e {
        binfit::FitError::IneligibleSample(_) => "IneligibleSample".to_string(),
        binfit::FitError::AllGridPointsFailed => "AllGridPointsFailed".to_string(),
        binfit::FitError::NoFeasibleStart => "NoFeasibleStart".to_string(),
    }
}

pub fn cmd_fit(
    data: &DataArgs,
    model: &str,
    out: Option<&Path>,
    print: &str,
    seed: u64,
    config_path: Option<&Path>,
) -> Result<u8, String> {
    let model = model.to_ascii_lowercase();
    const MODELS: [&str; 7] = ["egg", "pn", "pl", "best", "dagum", "gb2", "midpoint"];
    if !MODELS.contains(&model.as_str()) {
        return Err(format!("unknown model '{model}' (expected one of {MODELS:?})"));
    }
    let file_config = match config_path {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let base = file_config.apply(&FitConfig::default());
    let top_bin_factor = file_config.top_bin_factor.unwrap_or(1.5);
    let units = load_units(data)?;

    let mut rows = Vec::with_capacity(units.len());
    let mut partial = false;
    for (index, unit) in units.into_iter().enumerate() {
        let config = unit_config(&base, seed, index);
        let row = match unit.validate() {
            Ok(sample) => fit_one(&model, &sample, &config, top_bin_factor)
                .unwrap_or_else(|message| {
                    partial = true;
                    Row::error(&sample.id, message)
                }),
            Err(e) => {
                partial = true;
                Row::error("", e.to_string())
            }
        };
        rows.push(row);
    }

    let mut text = String::from(HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    if print.eq_ignore_ascii_case("y") {
        print!("{text}");
    }
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if partial { EXIT_PARTIAL } else { EXIT_OK })
}

pub struct BenchArgs {
    pub config: Option<PathBuf>,
    pub family: Option<String>,
    pub units: u32,
    pub size_min: u32,
    pub size_max: u32,
    pub rounding: bool,
    pub models: String,
    pub seed: u64,
    pub metrics_out: PathBuf,
    pub scatter_out: PathBuf,
}

pub fn cmd_bench(args: BenchArgs) -> Result<u8, String> {
    let file_config = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let fit_config = file_config.apply(&FitConfig::default()).with_seed(args.seed);
    let top_bin_factor = file_config.top_bin_factor.unwrap_or(1.5);

    let spec = match (&file_config.generator, &args.family) {
        (Some(g), _) => g.to_spec(args.seed)?,
        (None, Some(name)) => {
            let mut spec = binfit::bench::GeneratorSpec::new(
                default_family(name)?,
                args.units,
                (args.size_min, args.size_max),
                args.seed,
            );
            spec.apply_census_rounding = args.rounding;
            spec
        }
        (None, None) => {
            return Err("bench needs --family or a config file with a [generator] table".into())
        }
    };

    let estimators: Vec<Estimator> = args
        .models
        .split(',')
        .map(|m| m.trim().parse::<Estimator>())
        .collect::<Result<_, _>>()?;

    let outcome = run_benchmark(&spec, &estimators, &fit_config, top_bin_factor)
        .map_err(|e| e.to_string())?;
    write_metrics(&args.metrics_out, &outcome).map_err(|e| e.to_string())?;
    write_scatter(&args.scatter_out, &outcome).map_err(|e| e.to_string())?;

    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(
        stdout,
        "generated {} units ({} ineligible skipped); wrote {} and {}",
        spec.n_units,
        outcome.skipped_ineligible,
        args.metrics_out.display(),
        args.scatter_out.display()
    );
    for (estimator, report) in &outcome.reports {
        let _ = writeln!(
            stdout,
            "  {estimator}: bias {} rmsre {} undefined-mean {:.1}% undefined-var {:.1}%",
            report
                .relative_bias
                .map(|b| format!("{:+.2}%", 100.0 * b))
                .unwrap_or_else(|| "NA".into()),
            report
                .rmsre
                .map(|r| format!("{:.2}%", 100.0 * r))
                .unwrap_or_else(|| "NA".into()),
            100.0 * report.undefined_mean_share,
            100.0 * report.undefined_variance_share,
        );
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate(data: &DataArgs) -> Result<u8, String> {
    let units = load_units(data)?;
    let rule = EligibilityRule::default();
    let mut all_ok = true;
    println!("id,valid,eligible,total,nonzero_bins,detail");
    for unit in units {
        let id = unit.id.clone();
        match unit.validate() {
            Ok(sample) => {
                let eligible = rule.is_eligible(&sample);
                all_ok &= eligible;
                let detail = if eligible {
                    String::new()
                } else {
                    format!(
                        "needs total >= {} and >= {} nonzero bins",
                        rule.min_total, rule.min_nonzero_bins
                    )
                };
                println!(
                    "{id},yes,{},{},{},{detail}",
                    if eligible { "yes" } else { "no" },
                    sample.total,
                    sample.nonzero_bins(),
                );
            }
            Err(e) => {
                all_ok = false;
                println!("{id},no,no,,,{e}");
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_PARTIAL })
}
