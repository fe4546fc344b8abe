use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use rpm_cli::config::{default_precision, ConfigLayer, Mode, OutputFormat, RunConfig};
use rpm_cli::output::write_records;
use rpm_cli::run::{overall_exit_code, run_jobs};
use rpm_core::{DecimalValue, RpmError};

const EXIT_CONFIG: u8 = 3;

/// Riccati-Padé eigenvalues: perturbed Coulomb shifts and resonances, or any Laurent-polynomial potential.
#[derive(Parser, Debug)]
#[command(name = "rpm", version)]
struct Cli {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,

    /// shift | resonance | solve | scan | validate
    #[arg(long)]
    mode: Option<Mode>,

    /// Coupling values, comma separated or repeated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<String>,

    /// Exponent lattice step of the potential (1 or 2)
    #[arg(long)]
    potential_beta: Option<u32>,

    /// Energy coupling: Q = mu (E - V)
    #[arg(long, allow_hyphen_values = true)]
    potential_mu: Option<String>,

    /// Potential coefficients v_0, v_1, ... of x^(beta j - 2)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    potential_v: Vec<String>,

    #[arg(long = "D-min", visible_alias = "d-min")]
    d_min: Option<usize>,

    #[arg(long = "D-max", visible_alias = "d-max")]
    d_max: Option<usize>,

    /// Hankel displacements, comma separated
    #[arg(long, value_delimiter = ',')]
    d_values: Vec<usize>,

    /// Starting precision in bits [env: RPM_PRECISION_BITS, default 512]
    #[arg(long)]
    precision_bits: Option<u32>,

    #[arg(long)]
    precision_max: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    seed_re: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    seed_im: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    scan_re_lo: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    scan_re_hi: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    scan_im_lo: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    scan_im_hi: Option<String>,

    #[arg(long)]
    scan_points: Option<usize>,

    /// table | csv | json-lines
    #[arg(long)]
    output_format: Option<OutputFormat>,

    #[arg(long)]
    output_path: Option<PathBuf>,

    /// Print the effective configuration as JSON and exit
    #[arg(long)]
    dump_config: bool,
}

fn flag_decimal(name: &str, text: &Option<String>) -> Result<Option<DecimalValue>, RpmError> {
    text.as_deref()
        .map(|t| DecimalValue::parse(t).map_err(|e| RpmError::Config(format!("--{name}: {e}"))))
        .transpose()
}

fn flag_list(name: &str, items: &[String]) -> Result<Option<Vec<DecimalValue>>, RpmError> {
    if items.is_empty() {
        return Ok(None);
    }
    items
        .iter()
        .map(|t| DecimalValue::parse(t).map_err(|e| RpmError::Config(format!("--{name}: {e}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

impl Cli {
    fn layer(&self) -> Result<ConfigLayer, RpmError> {
        Ok(ConfigLayer {
            mode: self.mode,
            lambda: flag_list("lambda", &self.lambda)?,
            beta: self.potential_beta,
            mu: flag_decimal("potential-mu", &self.potential_mu)?,
            v: flag_list("potential-v", &self.potential_v)?,
            d_min: self.d_min,
            d_max: self.d_max,
            d_values: (!self.d_values.is_empty()).then(|| self.d_values.clone()),
            precision_bits: self.precision_bits,
            precision_max: self.precision_max,
            seed_re: flag_decimal("seed-re", &self.seed_re)?,
            seed_im: flag_decimal("seed-im", &self.seed_im)?,
            scan_re_lo: flag_decimal("scan-re-lo", &self.scan_re_lo)?,
            scan_re_hi: flag_decimal("scan-re-hi", &self.scan_re_hi)?,
            scan_im_lo: flag_decimal("scan-im-lo", &self.scan_im_lo)?,
            scan_im_hi: flag_decimal("scan-im-hi", &self.scan_im_hi)?,
            scan_points: self.scan_points,
            output_format: self.output_format,
            output_path: self.output_path.clone(),
        })
    }

    fn config(&self) -> Result<RunConfig, RpmError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| RpmError::Config(format!("cannot read {}: {e}", path.display())))?;
                ConfigLayer::from_json(&text)?
            }
            None => ConfigLayer::default(),
        };
        file.overlay(self.layer()?).finish(default_precision()?)
    }
}

fn emit(cfg: &RunConfig, text: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    match &cfg.output_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            text(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            text(&mut w)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = match cli.config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("rpm: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if cli.dump_config {
        println!("{}", cfg.to_json());
        return ExitCode::SUCCESS;
    }

    let outputs = run_jobs(&cfg);
    for o in &outputs {
        if let Some(err) = &o.failure {
            eprintln!("rpm: {}: {err}", o.label);
        }
    }
    let records: Vec<_> = outputs.iter().flat_map(|o| o.records.iter().cloned()).collect();
    if let Err(e) = emit(&cfg, |w| write_records(&records, cfg.output_format, w)) {
        eprintln!("rpm: writing output: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    ExitCode::from(overall_exit_code(&outputs) as u8)
}
