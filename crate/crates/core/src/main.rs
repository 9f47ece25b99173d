use clap::{Args, Parser, Subcommand};
use hypercode::css::CodeBundle;
use hypercode::descriptor::Descriptor;
use hypercode::pipeline::{build_code, BuildOptions, CodeBuild};
use hypercode::sim::{run_single_shot, write_csv, write_json, DecoderKind, SimConfig};
use hypercode::{Error, Result};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

/// Workbench for quantum LDPC codes built from finite quotients of regular
/// hyperbolic tessellations.
#[derive(Parser)]
#[command(name = "hypercode", version, about)]
struct Cli {
    /// Size of the worker thread pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CodeArgs {
    /// Schlafli symbol of the tessellation, e.g. 5,3,3,5 or 4,4.
    #[arg(long)]
    symbol: String,
    /// Quotient construction, e.g. ideal:2, rotation-ideal:2,
    /// word:bedcba*6, or covering[word:...;H=...].
    #[arg(long)]
    method: String,
    /// Allow enumerations beyond the default 2.2M-element budget.
    #[arg(long)]
    large: bool,
    /// Directory for cached group tables.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl CodeArgs {
    fn build(&self) -> Result<CodeBuild> {
        let descriptor: Descriptor = format!("{}|{}", self.symbol, self.method).parse()?;
        let mut opts = if self.large { BuildOptions::large() } else { BuildOptions::default() };
        opts.cache_dir = self.cache_dir.clone();
        build_code(&descriptor, &opts)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a code, report its parameters, optionally store a bundle.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        /// Write the code bundle (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the single-shot decoding protocol and report failure rates.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Decoder: ca (cellular automaton) or bp (belief propagation).
        #[arg(long, default_value = "bp")]
        decoder: String,
        /// Per-round, per-qubit error probability.
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        /// Per-round syndrome bit flip probability.
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        /// Total correction rounds; syndromes are noisy except in the last
        /// round, so T=1 is the noiseless-measurement setting.
        #[arg(long = "T", default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Decoder iteration cap per decode call.
        #[arg(long, default_value_t = 60)]
        max_iters: usize,
        /// Output file; .json gets a JSON report, anything else CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive and check everything a stored bundle claims.
    Verify {
        /// Bundle file written by `build --out`.
        file: PathBuf,
    },
    /// Randomized information-set search for low-weight logical operators.
    Search {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write the parity-check matrices to files.
    Export {
        #[command(flatten)]
        code: CodeArgs,
        /// Matrix format: pchk or alist.
        #[arg(long, default_value = "pchk")]
        format: String,
        /// Output prefix; writes <prefix>.hx.<format> and <prefix>.hz.<format>.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Build { code, out } => {
            let build = code.build()?;
            print!("{}", build.report());
            if let Some(path) = out {
                let mut w = BufWriter::new(File::create(&path)?);
                build.bundle().to_writer(&mut w)?;
                w.flush()?;
                println!("bundle written to {}", path.display());
            }
            Ok(())
        }
        Cmd::Simulate { code, decoder, p, q, rounds, trials, seed, max_iters, out } => {
            let decoder: DecoderKind = decoder.parse()?;
            let build = code.build()?;
            let cfg = SimConfig {
                code: build.descriptor.to_string(),
                decoder,
                rounds,
                p,
                q,
                trials,
                seed,
                max_decoder_iters: max_iters,
            };
            let result = run_single_shot(&build.code, &cfg)?;
            eprintln!(
                "[[{}, {}]] {} T={} p={} q={}: {}/{} failures, rate {:.6} (95% CI [{:.6}, {:.6}])",
                result.n, result.k, decoder, rounds, p, q,
                result.failures, trials, result.failure_rate, result.ci_lo, result.ci_hi
            );
            let results = [result];
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    if path.extension().is_some_and(|e| e == "json") {
                        write_json(&mut w, &results)?;
                    } else {
                        write_csv(&mut w, &results)?;
                    }
                    w.flush()?;
                }
                None => write_csv(&mut std::io::stdout().lock(), &results)?,
            }
            Ok(())
        }
        Cmd::Verify { file } => {
            let mut r = BufReader::new(File::open(&file)?);
            let bundle = CodeBundle::from_reader(&mut r)?;
            let code = bundle.verify()?;
            println!(
                "bundle verified: {} -> [[{}, {}]], {} + {} checks, chi = {}",
                bundle.descriptor,
                code.n,
                code.k,
                bundle.hx.len(),
                bundle.hz.len(),
                bundle.euler_characteristic
            );
            Ok(())
        }
        Cmd::Search { code, restarts, seed } => {
            let build = code.build()?;
            if build.code.k == 0 {
                println!("k = 0: the code has no logical operators");
                return Ok(());
            }
            let found = build
                .code
                .min_logical_weight_search(restarts, seed)
                .expect("k > 0 guarantees a logical representative");
            println!(
                "minimum logical weight found: {} (restart {})",
                found.weight, found.found_at_restart
            );
            let support = hypercode::css::unpack_support(build.code.n, &found.vector);
            println!("support: {:?}", support);
            Ok(())
        }
        Cmd::Export { code, format, out } => {
            let build = code.build()?;
            let stem = out.display();
            for (name, m) in [("hx", &build.code.hx), ("hz", &build.code.hz)] {
                let path = PathBuf::from(format!("{stem}.{name}.{format}"));
                let mut w = BufWriter::new(File::create(&path)?);
                match format.as_str() {
                    "pchk" => m.write_pchk(&mut w)?,
                    "alist" => m.write_alist(&mut w)?,
                    other => {
                        return Err(Error::Parse(format!(
                            "unknown export format {other:?} (expected pchk or alist)"
                        )))
                    }
                }
                w.flush()?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
