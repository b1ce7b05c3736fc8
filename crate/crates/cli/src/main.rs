use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use derived_skein::skein::{resolve_dual, resolve_laurent, Diagram};
use derived_skein::suite::{self, CaseRecord, RunConfig, Suite, SuiteError, SuiteOutcome};
use derived_skein::transport::{frozen_kappa, prepared_residual, KappaError, PreparedHandle};
use derived_skein::{GroupWord, Representation, TransportReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CALIBRATION: u8 = 3;

#[derive(Parser)]
#[command(name = "dskein", version, about = "Derived skein module workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    Laurent,
    Dual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelflinkGroup {
    QIdentities,
    Hessian,
    TraceIdentity,
}

impl SelflinkGroup {
    fn cases(self) -> &'static [&'static str] {
        match self {
            SelflinkGroup::QIdentities => &["q_killing", "q_identities", "kauffman_scalar", "star"],
            SelflinkGroup::Hessian => &["hessian_fd", "hessian_symmetry", "first_derivative_fd"],
            SelflinkGroup::TraceIdentity => {
                &["trace_identity_hessian", "trace_identity_zero", "trace_identity", "killing_invariance"]
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a diagram file and print its normal form.
    Bracket {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "laurent")]
        ring: Ring,
    },
    /// Check the transport identity for one handle slide at random representations.
    Transport {
        #[arg(long)]
        word: String,
        #[arg(long)]
        gen: usize,
        /// 1-based occurrence of the generator where the band attaches.
        #[arg(long, default_value_t = 1)]
        occ: usize,
        /// Defaults to the largest generator used.
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Self-linking identities against their oracles.
    Selflink {
        #[arg(long, value_enum)]
        suite: SelflinkGroup,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Replaces the built-in tolerance of every sampled check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run property suites.
    Suite {
        /// rings, qtorus, skein, transport, selflink or all
        which: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Bracket { file, ring } => bracket(&file, ring),
        Command::Transport {
            word,
            gen,
            occ,
            genus,
            samples,
            seed,
            tol,
            format,
        } => transport(&word, gen, occ, genus, samples, seed, tol, format),
        Command::Selflink {
            suite,
            samples,
            seed,
            tol,
            format,
        } => selflink(suite, RunConfig { seed, samples }, tol, format),
        Command::Suite {
            which,
            seed,
            samples,
            format,
        } => run_suite(which, RunConfig { seed, samples }, format),
    };
    ExitCode::from(code)
}

fn bracket(file: &PathBuf, ring: Ring) -> u8 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", file.display(), e);
            return EXIT_INPUT;
        }
    };
    let diagram = match Diagram::from_json(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {}", file.display(), e);
            return EXIT_INPUT;
        }
    };
    let printed = match ring {
        Ring::Laurent => resolve_laurent(&diagram).map(|s| s.to_string()),
        Ring::Dual => resolve_dual(&diagram).map(|s| s.to_string()),
    };
    match printed {
        Ok(s) => {
            println!("{}", s);
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_INPUT
        }
    }
}

fn kappa_or_exit() -> Result<f64, u8> {
    frozen_kappa().map_err(|e| match e {
        KappaError::Calibration(c) => {
            eprintln!("calibration failure: {}", c);
            EXIT_CALIBRATION
        }
        KappaError::Skein(s) => {
            eprintln!("error: {}", s);
            EXIT_FAIL
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn transport(
    word: &str,
    gen: usize,
    occ: usize,
    genus: Option<usize>,
    samples: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> u8 {
    let w: GroupWord = match word.parse() {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: word '{}': {}", word, e);
            return EXIT_INPUT;
        }
    };
    let genus = genus.unwrap_or_else(|| w.max_generator().max(gen));
    if gen == 0 || gen > genus || w.max_generator() > genus {
        eprintln!("error: generators of '{}' and --gen {} must lie in 1..={}", word, gen, genus);
        return EXIT_INPUT;
    }
    let count = w.occurrences(gen).len();
    if count == 0 {
        println!("no occurrence of generator {} in {}: vacuous PASS", gen, w);
        return 0;
    }
    if occ == 0 || occ > count {
        eprintln!("error: --occ {} out of range, {} has {} occurrences", occ, w, count);
        return EXIT_INPUT;
    }
    let kappa = match kappa_or_exit() {
        Ok(k) => k,
        Err(code) => return code,
    };
    let prepared = match PreparedHandle::new(&w, gen, occ - 1) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_INPUT;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<TransportReport> = Vec::with_capacity(samples);
    for sample in 0..samples {
        let rho = Representation::random(&mut rng, genus);
        match prepared_residual(&prepared, &rho, kappa, sample) {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("error: {}", e);
                return EXIT_FAIL;
            }
        }
    }
    let pass = reports.iter().all(|r| r.passes(tol));
    match format {
        Format::Json => {
            for r in &reports {
                println!("{}", serde_json::to_string(r).expect("report serialises"));
            }
        }
        Format::Text => {
            println!(
                "word {}  gen {}  occ {}  genus {}  crossings {}  kappa {}",
                w, gen, occ, genus, prepared.crossings, kappa
            );
            println!("{:>6}  {:>26}  {:>26}  {:>26}  {:>10}", "sample", "f", "f'", "div", "rel.res");
            for r in &reports {
                println!(
                    "{:>6}  {:>26.6e}  {:>26.6e}  {:>26.6e}  {:>10.2e}",
                    r.sample,
                    r.f_value,
                    r.f_prime,
                    r.divergence,
                    r.relative_residual()
                );
            }
            let worst = reports.iter().map(|r| r.relative_residual()).fold(0.0, f64::max);
            println!(
                "{}: {} samples, worst relative residual {:.2e}, tol {:e}",
                if pass { "PASS" } else { "FAIL" },
                reports.len(),
                worst,
                tol
            );
        }
    }
    if pass {
        0
    } else {
        EXIT_FAIL
    }
}

fn suite_error(e: SuiteError) -> u8 {
    eprintln!("{}", e);
    match e {
        SuiteError::Calibration(_) => EXIT_CALIBRATION,
        SuiteError::Internal(_) => EXIT_FAIL,
    }
}

fn print_outcomes(outcomes: &[SuiteOutcome], format: Format) -> bool {
    let mut pass = true;
    for o in outcomes {
        for w in &o.warnings {
            eprintln!("warning: {}", w);
        }
        pass &= o.passed();
        match format {
            Format::Json => print!("{}", o.json_lines()),
            Format::Text => {
                println!("[{}]", o.suite);
                for (case, n, failed, worst) in o.summary() {
                    println!("  {:<40} {:>6} cases  {:>4} failed  worst {:.2e}", case, n, failed, worst);
                }
                for f in o.failures().take(5) {
                    println!("  failed: {}", serde_json::to_string(f).expect("record serialises"));
                }
            }
        }
    }
    if format == Format::Text {
        let total: usize = outcomes.iter().map(|o| o.records.len()).sum();
        println!("{}: {} cases", if pass { "PASS" } else { "FAIL" }, total);
    }
    pass
}

fn run_suite(which: Suite, cfg: RunConfig, format: Format) -> u8 {
    match suite::run(which, &cfg) {
        Ok(outcomes) => {
            if print_outcomes(&outcomes, format) {
                0
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => suite_error(e),
    }
}

fn selflink(group: SelflinkGroup, cfg: RunConfig, tol: Option<f64>, format: Format) -> u8 {
    let mut outcomes = match suite::run(Suite::Selflink, &cfg) {
        Ok(o) => o,
        Err(e) => return suite_error(e),
    };
    let keep = group.cases();
    for o in &mut outcomes {
        o.records.retain(|r| keep.iter().any(|k| r.case == format!("selflink.{}", k)));
        o.warnings.retain(|w| keep.iter().any(|k| w.starts_with(&format!("selflink.{}:", k))));
        if let Some(tol) = tol {
            o.records.iter_mut().for_each(|r: &mut CaseRecord| r.pass = r.residual < tol);
        }
    }
    if print_outcomes(&outcomes, format) {
        0
    } else {
        EXIT_FAIL
    }
}
