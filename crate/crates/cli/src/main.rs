use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lzdg_core::automorphism::aut_summary;
use lzdg_core::domination::{
    composite_dominating_set, exact_domination, matrix_instance, m1_dominating_set, quaternion_instance,
    verify_dominating_set,
};
use lzdg_core::verify::{run_verify, Fixtures, RunConfig, EXPORT_FORMATS};
use lzdg_core::zdg::export::{to_dot, to_json_value, GraphStats};
use lzdg_core::zdg::{build_graph, compress, twin_partition, ZdGraph};
use lzdg_core::{Error, FiniteRing, MatRing, QuatRing};

#[derive(Parser)]
#[command(name = "lzdg", version, about = "Zero-divisor graphs of Z_n[i,j,k] and M_2(Z_n)")]
struct Cli {
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, env = "LZDG_OUT")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingKind {
    Quat,
    Mat,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_enum, default_value = "quat")]
    ring: RingKind,
    /// Modulus for the quaternion ring.
    #[arg(long)]
    n: Option<u64>,
    /// Prime for the matrix ring.
    #[arg(long)]
    p: Option<u64>,
    /// Exponent for the matrix ring.
    #[arg(long)]
    s: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a zero-divisor graph and write exports and stats.
    Build {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_delimiter = ',')]
        export: Vec<String>,
    },
    /// Domination number, exact or from the explicit construction.
    Domination {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, conflicts_with = "construct")]
        exact: bool,
        #[arg(long)]
        construct: bool,
    },
    /// Automorphism group of the compressed graph of Z_{2^s}[i,j,k].
    Aut {
        #[arg(long)]
        s: u32,
    },
    /// Run the check suite.
    Verify {
        /// TOML file with run settings; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// JSON file replacing the built-in expected values.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        max_s: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the full report as JSON instead of one line per check.
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

enum Ring {
    Quat(QuatRing),
    Mat(MatRing, u64, u32),
}

impl RingArgs {
    fn open(&self) -> CliResult<Ring> {
        match self.ring {
            RingKind::Quat => {
                if self.p.is_some() || self.s.is_some() {
                    return Err(usage("--ring quat takes --n, not --p/--s"));
                }
                let n = self.n.ok_or_else(|| usage("--ring quat needs --n"))?;
                Ok(Ring::Quat(QuatRing::new(n)?))
            }
            RingKind::Mat => {
                if self.n.is_some() {
                    return Err(usage("--ring mat takes --p and --s, not --n"));
                }
                let (Some(p), Some(s)) = (self.p, self.s) else {
                    return Err(usage("--ring mat needs --p and --s"));
                };
                Ok(Ring::Mat(MatRing::new(p, s)?, p, s))
            }
        }
    }
}

struct Output {
    dir: Option<PathBuf>,
    files: Vec<String>,
}

impl Output {
    fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        if let Some(dir) = &self.dir {
            fs::create_dir_all(dir).map_err(Error::from)?;
            fs::write(dir.join(name), contents).map_err(Error::from)?;
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn finish(mut self, command: &str, params: Value) -> CliResult<()> {
        if self.dir.is_some() {
            let files = std::mem::take(&mut self.files);
            let manifest = json!({
                "tool": "lzdg",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "params": params,
                "files": files,
            });
            self.write("manifest.json", &pretty(&manifest))?;
        }
        Ok(())
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn export_graph<R: FiniteRing>(
    ring: &R,
    g: &ZdGraph<R::Elem>,
    stem: &str,
    formats: &[String],
    out: &mut Output,
) -> CliResult<Value> {
    let t = twin_partition(g);
    let stats = GraphStats {
        ring: ring.name(),
        ring_size: ring.size(),
        vertices: g.len(),
        directed_edges: g.directed_edge_count(),
        undirected_edges: g.undirected_edge_count(),
        reversible: g.is_symmetric(),
        twin_classes: t.len(),
    };
    for f in formats {
        match f.as_str() {
            "dot" => out.write(&format!("{stem}.dot"), &to_dot(g, stem))?,
            "json" => out.write(&format!("{stem}.json"), &pretty(&to_json_value(ring, g)))?,
            "csv" => out.write(&format!("{stem}.classes.csv"), &compress(g, &t).to_csv())?,
            _ => unreachable!(),
        }
    }
    let stats = serde_json::to_value(&stats).expect("serialisable");
    out.write(&format!("{stem}.stats.json"), &pretty(&stats))?;
    Ok(stats)
}

fn cmd_build(ring: &RingArgs, export: &[String], out: &mut Output) -> CliResult<Value> {
    if let Some(f) = export.iter().find(|f| !EXPORT_FORMATS.contains(&f.as_str())) {
        return Err(usage(format!("unknown export format {f:?}; expected dot, json or csv")));
    }
    if !export.is_empty() && out.dir.is_none() {
        out.dir = Some(PathBuf::from("lzdg-out"));
    }
    let limits = RunConfig::default().graph_limits();
    match ring.open()? {
        Ring::Quat(r) => {
            let g = build_graph(&r, &limits)?;
            export_graph(&r, &g, &format!("quat_n{}", r.n()), export, out)
        }
        Ring::Mat(r, p, s) => {
            let g = build_graph(&r, &limits)?;
            export_graph(&r, &g, &format!("mat_p{p}_s{s}"), export, out)
        }
    }
}

fn cmd_domination(ring: &RingArgs, construct: bool) -> CliResult<Value> {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let opened = ring.open()?;
    let (n, name) = match &opened {
        Ring::Quat(r) => (r.n(), r.name()),
        Ring::Mat(r, ..) => (r.n(), r.name()),
    };
    let mut v = if construct {
        let witness: Vec<Value> = match &opened {
            Ring::Quat(r) => {
                let d = composite_dominating_set(r.n())?;
                if !verify_dominating_set(r, &d) {
                    return Err(usage("construction does not dominate"));
                }
                d.iter().map(|x| json!([x.to_string(), 1])).collect()
            }
            Ring::Mat(r, p, s) => {
                let d = m1_dominating_set(*p, *s)?;
                if !verify_dominating_set(r, &d) {
                    return Err(usage("construction does not dominate"));
                }
                d.iter().map(|x| json!([x.to_string(), 1])).collect()
            }
        };
        json!({ "method": "construct", "gamma": witness.len(), "witness": witness, "optimal": false })
    } else {
        let inst = match &opened {
            Ring::Quat(r) => quaternion_instance(r.n(), &cfg.graph_limits())?,
            Ring::Mat(_, p, s) => matrix_instance(*p, *s, &cfg.graph_limits())?,
        };
        let r = exact_domination(&inst, &cfg.solver_limits())?;
        let witness: Vec<Value> = r.witness.iter().map(|&(c, k)| json!([inst.label(c), k])).collect();
        json!({
            "method": "exact",
            "gamma": r.gamma,
            "witness": witness,
            "optimal": r.optimal,
            "classes": inst.len(),
            "certificate": r.certificate,
        })
    };
    v["n"] = json!(n);
    v["ring"] = json!(name);
    v["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    Ok(v)
}

fn load_config(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok(RunConfig::from_toml_str(&text)?)
        }
        None => Ok(RunConfig::default()),
    }
}

fn set_threads(n: usize) -> CliResult<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<u8> {
    let mut out = Output {
        dir: cli.out.clone(),
        files: Vec::new(),
    };
    match &cli.cmd {
        Command::Build { ring, export } => {
            set_threads(cli.threads.unwrap_or(0))?;
            let stats = cmd_build(ring, export, &mut out)?;
            println!("{}", pretty(&stats).trim_end());
            out.finish("build", json!({ "export": export }))?;
            Ok(0)
        }
        Command::Domination { ring, construct, .. } => {
            set_threads(cli.threads.unwrap_or(0))?;
            let v = cmd_domination(ring, *construct)?;
            out.write("domination.json", &pretty(&v))?;
            println!("{}", pretty(&v).trim_end());
            out.finish("domination", json!({ "construct": construct }))?;
            Ok(0)
        }
        Command::Aut { s } => {
            set_threads(cli.threads.unwrap_or(0))?;
            let summary = aut_summary(*s)?;
            out.write("aut.json", &pretty(&summary))?;
            println!("{}", pretty(&summary).trim_end());
            out.finish("aut", json!({ "s": s }))?;
            Ok(0)
        }
        Command::Verify {
            config,
            fixtures,
            max_s,
            seed,
            json: as_json,
        } => {
            let mut cfg = load_config(config.as_deref())?;
            if let Some(m) = max_s {
                cfg.max_s = *m;
            }
            if let Some(sd) = seed {
                cfg.seed = *sd;
            }
            if let Some(t) = cli.threads {
                cfg.threads = t;
            }
            if out.dir.is_none() {
                out.dir = cfg.out_dir.as_ref().map(PathBuf::from);
            }
            cfg.validate()?;
            set_threads(cfg.threads)?;
            let fx = match fixtures {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    Fixtures::from_json_str(&text)?
                }
                None => Fixtures::builtin(),
            };
            let report = run_verify(&cfg, &fx, |c| {
                if !as_json {
                    eprintln!("{:>8} ms  {}", c.elapsed_ms, c.id);
                }
            })?;
            if *as_json {
                println!("{}", pretty(&report).trim_end());
            } else {
                for line in report.lines() {
                    println!("{line}");
                }
                println!(
                    "{} passed, {} failed, {} skipped",
                    report.count(lzdg_core::verify::Status::Pass),
                    report.count(lzdg_core::verify::Status::Fail),
                    report.count(lzdg_core::verify::Status::Skipped)
                );
            }
            out.write("verify.json", &pretty(&report))?;
            out.finish("verify", serde_json::to_value(&cfg).expect("serialisable"))?;
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
