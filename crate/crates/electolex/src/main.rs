use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{FixedOffset, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use electolex::pipeline::OUTPUT_FILES;
use electolex::{run_pipeline, validate_config, RunConfig};
use electolex_core::kernelreg::DEFAULT_SEED;
use electolex_core::normalize::stem;
use electolex_core::LogBase;

#[derive(Parser)]
#[command(name = "electolex", version, about = "Linguistic similarity and Twitter metrics of election candidates")]
struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and write the report and CSV tables.
    Run(RunArgs),
    /// Check the configuration without running anything.
    Validate(RunArgs),
    /// Print the stem of each word.
    Stem {
        #[arg(required = true)]
        words: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Log {
    Ln,
    Log10,
}

#[derive(Args)]
struct RunArgs {
    /// Candidates CSV.
    #[arg(long, value_name = "PATH")]
    candidates: PathBuf,
    /// Tweets, one JSON object per line.
    #[arg(long, value_name = "PATH")]
    tweets: PathBuf,
    /// Stop words, one per line [default: bundled Spanish list].
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// First day of the campaign window (YYYY-MM-DD, inclusive).
    #[arg(long, value_name = "DATE")]
    window_start: NaiveDate,
    /// Last day of the campaign window (YYYY-MM-DD, inclusive).
    #[arg(long, value_name = "DATE")]
    window_end: NaiveDate,
    /// UTC offset used to date tweets, e.g. -05:00.
    #[arg(long, value_name = "OFFSET", default_value = "+00:00", allow_hyphen_values = true)]
    tz_offset: FixedOffset,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Rows in the stem frequency table.
    #[arg(long, default_value_t = 30)]
    top_n: usize,
    /// Scale every document vector to unit length before measuring distances.
    #[arg(long)]
    l2_normalize: bool,
    /// Logarithm for the inverse document frequency.
    #[arg(long, value_enum, default_value = "ln")]
    log_base: Log,
    /// Seed for bandwidth search starts and permutations.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    kernel_seed: u64,
    /// Permutations per predictor relevance test.
    #[arg(long, default_value_t = 999)]
    n_perm: usize,
    /// Skip the predictor relevance tests.
    #[arg(long)]
    no_relevance: bool,
    /// Fail on tweets from candidates missing in the candidates file.
    #[arg(long)]
    strict: bool,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> RunConfig {
        let mut c = RunConfig::new(self.candidates, self.tweets, self.window_start, self.window_end, self.out);
        c.stopwords = self.stopwords;
        c.utc_offset = self.tz_offset;
        c.top_n = self.top_n;
        c.l2_normalize = self.l2_normalize;
        c.log_base = match self.log_base {
            Log::Ln => LogBase::Natural,
            Log::Log10 => LogBase::Ten,
        };
        c.kernel_seed = self.kernel_seed;
        c.n_perm = self.n_perm;
        c.relevance = !self.no_relevance;
        c.strict = self.strict;
        c.threads = self.threads;
        c
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match cli.command {
        Command::Stem { words } => {
            for w in words {
                println!("{w}\t{}", stem(&w.to_lowercase()));
            }
            ExitCode::SUCCESS
        }
        Command::Validate(args) => {
            let errors = validate_config(&args.into_config());
            if errors.is_empty() {
                println!("configuration ok");
                return ExitCode::SUCCESS;
            }
            for e in &errors {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
        Command::Run(args) => {
            let config = args.into_config();
            match run_pipeline(&config) {
                Ok(report) => {
                    let anova = &report.anova_over_pair_classes;
                    println!(
                        "{} candidates, {} tweets, {} stems",
                        report.corpus.candidates_retained, report.corpus.tweets_in_window, report.corpus.vocabulary_size
                    );
                    println!("pair-class anova: F = {:.4}, p = {:.4}", anova.statistic, anova.p_value);
                    println!("kernel regression: R2 = {:.4}", report.kernel_fit.r_squared);
                    println!("wrote {} files to {}", OUTPUT_FILES.len(), config.out_dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
