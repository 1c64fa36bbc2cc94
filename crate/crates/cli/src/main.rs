use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use sunweave::bulls::bull_sun_design;
use sunweave::certificate::{u_min, verify_embedding, EmbeddingCertificate};
use sunweave::design::{verify_decomposition, Design};
use sunweave::embed::{embed, route};
use sunweave::notation::BlockFile;
use sunweave::sts::{
    bose, fixed_sts13, is_sts_order, kts_small, skolem, standard_sts, Sts13Class, TripleSystem,
};
use sunweave::suns::{SunFactory, DEFAULT_SEED};

/// Minimum embeddings of Steiner triple systems into 3-sun systems.
#[derive(Parser, Debug)]
#[command(name = "sunweave", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed an STS(n) into a 3SS(n + u_min(n)) and write the certificate.
    Construct {
        /// Order of a generated input system (Bose or Skolem).
        #[arg(long, conflicts_with = "sts", required_unless_present = "sts")]
        n: Option<u32>,
        /// Input STS as JSON or bracket notation.
        #[arg(long)]
        sts: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Certificate path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate or a design file.
    Verify { file: PathBuf },
    /// Print u_min(n).
    Umin {
        #[arg(long)]
        n: u32,
    },
    /// Emit a fixture.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Order of an STS or KTS.
        #[arg(long)]
        n: Option<u32>,
        /// Order of a 3SS.
        #[arg(long)]
        m: Option<u32>,
        /// Bull-design parameters, order 12k + h.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        h: Option<u32>,
        /// STS(13) class or STS construction.
        #[arg(long, value_enum)]
        variant: Option<StsVariant>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shorthand for `gen --kind sts`.
    GenSts {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        variant: Option<StsVariant>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shorthand for `gen --kind sun`.
    GenSun {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed and verify every admissible order up to a bound.
    Sweep {
        #[arg(long, default_value_t = 99)]
        max_n: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Sts,
    Kts,
    Sun,
    BullDesign,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StsVariant {
    Bose,
    Skolem,
    Cyclic13,
    Noncyclic13,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Verification(Vec<String>),
    Usage(anyhow::Error),
    Search(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Search(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        use sunweave::Error as E;
        match e.downcast_ref::<E>() {
            Some(E::SearchExhausted(_)) | Some(E::Verification(_)) => Failure::Search(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<sunweave::Error> for Failure {
    fn from(e: sunweave::Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification(v) => {
                    for line in v {
                        println!("{line}");
                    }
                }
                Failure::Usage(e) | Failure::Search(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Construct { n, sts, seed, out } => {
            construct(n, sts.as_deref(), seed, out.as_deref())
        }
        Command::Verify { file } => verify(&file),
        Command::Umin { n } => {
            println!("{}", u_min(n)?);
            Ok(())
        }
        Command::Gen {
            kind,
            n,
            m,
            k,
            h,
            variant,
            seed,
            out,
        } => {
            let need = |v: Option<u32>, flag: &str| {
                v.ok_or_else(|| Failure::Usage(anyhow!("--kind {kind:?} needs --{flag}")))
            };
            let json = match kind {
                GenKind::Sts => generate_sts(need(n, "n")?, variant)?.to_design_json()?,
                GenKind::Kts => kts_small(need(n, "n")?)?.to_design_json()?,
                GenKind::Sun => SunFactory::uncached(seed)
                    .sun_system(need(m, "m")?)?
                    .to_json()?,
                GenKind::BullDesign => bull_sun_design(need(k, "k")?, need(h, "h")?)?.to_json()?,
            };
            emit(&with_seed(&json, seed)?, out.as_deref())
        }
        Command::GenSts {
            n,
            variant,
            seed,
            out,
        } => emit(
            &with_seed(&generate_sts(n, variant)?.to_design_json()?, seed)?,
            out.as_deref(),
        ),
        Command::GenSun { m, seed, out } => emit(
            &with_seed(&SunFactory::uncached(seed).sun_system(m)?.to_json()?, seed)?,
            out.as_deref(),
        ),
        Command::Sweep { max_n, seed } => sweep(max_n, seed),
    }
}

fn generate_sts(n: u32, variant: Option<StsVariant>) -> Result<TripleSystem> {
    Ok(match variant {
        None => standard_sts(n)?,
        Some(StsVariant::Bose) => bose(n)?,
        Some(StsVariant::Skolem) => skolem(n)?,
        Some(v @ (StsVariant::Cyclic13 | StsVariant::Noncyclic13)) => {
            if n != 13 {
                bail!("{v:?} needs --n 13");
            }
            fixed_sts13(match v {
                StsVariant::Cyclic13 => Sts13Class::Cyclic,
                _ => Sts13Class::Noncyclic,
            })
        }
    })
}

/// Adds a top-level `"seed"` field to a JSON object.
fn with_seed(json: &str, seed: u64) -> Result<String> {
    let mut v: Value = serde_json::from_str(json)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| anyhow!("expected a JSON object"))?;
    obj.insert("seed".into(), seed.into());
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_sts(path: &Path) -> Result<TripleSystem> {
    let text = read(path)?;
    let sts = if text.trim_start().starts_with('{') {
        TripleSystem::from_json(&text)
    } else {
        TripleSystem::from_text(&text)
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    sts.validate()
        .with_context(|| format!("{} is not a Steiner triple system", path.display()))?;
    Ok(sts)
}

fn construct(
    n: Option<u32>,
    sts_file: Option<&Path>,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let sts = match (n, sts_file) {
        (_, Some(p)) => read_sts(p)?,
        (Some(n), None) => {
            if !is_sts_order(n) {
                return Err(Failure::Usage(anyhow!(
                    "no STS({n}) exists: n must be 1 or 3 (mod 6)"
                )));
            }
            standard_sts(n)?
        }
        (None, None) => return Err(Failure::Usage(anyhow!("give --n or --sts"))),
    };
    let factory = SunFactory::new(sunweave::suns::default_cache_dir(), seed);
    let cert = embed(&sts, &factory, seed).map_err(|e| {
        let e = anyhow::Error::new(e).context(format!("embedding STS({})", sts.order));
        Failure::from(e)
    })?;
    let summary = format!(
        "order {} suns {} verified",
        cert.order(),
        cert.design.blocks.len()
    );
    match out {
        Some(p) => {
            emit(&(cert.to_json()? + "\n"), Some(p))?;
            println!("{summary}");
        }
        None => {
            println!("{}", cert.to_json()?);
            eprintln!("{summary}");
        }
    }
    Ok(())
}

/// A certificate is recognized by its `map` field; other JSON is a design;
/// anything else is bracket notation.
fn verify(path: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    let violations = if text.trim_start().starts_with('{') {
        let v: Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if v.get("map").is_some() {
            let cert: EmbeddingCertificate = serde_json::from_value(v)
                .with_context(|| format!("parsing certificate {}", path.display()))?;
            verify_embedding(&cert).violations
        } else {
            let d: Design = serde_json::from_value(v)
                .with_context(|| format!("parsing design {}", path.display()))?;
            verify_decomposition(&d).violations()
        }
    } else {
        let d = BlockFile::parse(&text)
            .and_then(|f| f.into_design())
            .with_context(|| format!("parsing {}", path.display()))?;
        verify_decomposition(&d).violations()
    };
    if violations.is_empty() {
        println!("ok");
        Ok(())
    } else {
        Err(Failure::Verification(violations))
    }
}

fn sweep(max_n: u32, seed: u64) -> Result<(), Failure> {
    let factory = SunFactory::new(sunweave::suns::default_cache_dir(), seed);
    let mut inputs: Vec<(String, TripleSystem)> = Vec::new();
    for n in (1..=max_n).filter(|&n| is_sts_order(n)) {
        if n == 13 {
            inputs.push(("cyclic".into(), fixed_sts13(Sts13Class::Cyclic)));
            inputs.push(("noncyclic".into(), fixed_sts13(Sts13Class::Noncyclic)));
        } else {
            let name = if n % 6 == 3 { "bose" } else { "skolem" };
            inputs.push((name.into(), standard_sts(n)?));
        }
    }
    println!(
        "{:>4} {:>10} {:>4} {:>5} {:>5} {:>15}  ok",
        "n", "input", "u", "order", "suns", "route"
    );
    let mut failed = Vec::new();
    for (name, sts) in inputs {
        let n = sts.order;
        let result = embed(&sts, &factory, seed);
        let (u, order, suns, ok) = match &result {
            Ok(c) => (c.u, c.order(), c.design.blocks.len(), true),
            Err(_) => (0, 0, 0, false),
        };
        println!(
            "{n:>4} {name:>10} {u:>4} {order:>5} {suns:>5} {:>15}  {}",
            route(n)?.name(),
            if ok { "ok" } else { "FAIL" }
        );
        if let Err(e) = result {
            failed.push(format!("n = {n} ({name}): {e}"));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed))
    }
}
