use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use revival_core::graphs::{build_complete, build_stellar, cartesian_product};
use revival_core::states::{subset_state, support_graph};
use revival_core::stellar::{
    analyze, check_family_prime, diophantine_check, generate_family, generate_polygamy_triple, FamilyRecipe,
};
use revival_core::transfer::{default_time_grid, detect_subset_transfer, polygamy_witness, SubsetTransferReport};
use revival_core::{
    certify_fr, decompose, stellar_decompose, verify_fr_at, Graph, SpectralDecomposition, StateMatrix, WalkTime,
    DEFAULT_GROUPING_TOL,
};

#[derive(Parser, Debug)]
#[command(name = "revival-lab", version, about = "Fractional revival and state transfer certifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Oracle tolerance for amplitude checks.
    #[arg(long, global = true, env = "REVIVAL_LAB_TOL", default_value_t = 1e-8)]
    tol: f64,

    /// Output format; `export` with a state defaults to dot, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for batch commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args, Debug, Clone)]
struct GraphSource {
    /// Graph file: JSON `{"n":..,"edges":[[u,v],..]}` or a graph6 line.
    #[arg(long, conflicts_with = "stellar")]
    graph: Option<PathBuf>,

    /// Stellar fusion graph X(a,k,c), given as `a,k,c`.
    #[arg(long, value_parser = parse_triple)]
    stellar: Option<(u64, u64, u64)>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify fractional revival on a vertex pair.
    Analyze {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0, 1])]
        pair: Vec<usize>,
        /// Extra time at which to evaluate U(t), e.g. `pi/sqrt(2)`.
        #[arg(long)]
        time: Option<WalkTime>,
    },
    /// Closed-form analysis of X(a,k,c), or a scan of all triples up to --max.
    Stellar {
        #[arg(long, value_parser = parse_triple, required_unless_present = "max")]
        stellar: Option<(u64, u64, u64)>,
        #[arg(long, conflicts_with = "stellar")]
        max: Option<u64>,
        /// Report triples without revival too.
        #[arg(long)]
        all: bool,
    },
    /// Stream triples from the prime-based family constructions as JSON lines.
    Family {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        delta: u64,
        /// Range of α, e.g. `1..5`.
        #[arg(long, value_parser = parse_range, default_value = "1..5")]
        alpha: (u64, u64),
        /// β = m·α.
        #[arg(long, default_value_t = 2, conflicts_with = "beta_max")]
        beta_multiple: u64,
        /// Search every α < β ≤ this bound instead of using a multiple.
        #[arg(long)]
        beta_max: Option<u64>,
        /// Use the polygamy construction with r over the --alpha range.
        #[arg(long)]
        polygamy: bool,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Cartesian products: polygamy witness on K₂ □ X(a,k,c), or the product of two graph files.
    Product {
        #[arg(long, value_parser = parse_triple, conflicts_with_all = ["left", "right"])]
        stellar: Option<(u64, u64, u64)>,
        /// The witness time is π/(2ℓ+1).
        #[arg(long, requires = "stellar")]
        ell: Option<u64>,
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
    },
    /// Subset state transfer from S to T.
    Subset {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<usize>,
        /// Transfer time; scans a default grid when absent.
        #[arg(long)]
        time: Option<WalkTime>,
    },
    /// Emit a graph, or the eigenvalue support graph of a state.
    Export {
        #[command(flatten)]
        source: GraphSource,
        /// `identity`, `vertex:V`, `subset:A,B,..` or `pure:x1,x2,..`.
        #[arg(long)]
        state: Option<String>,
        /// Colour the support classes of this pair's certificate.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<usize>>,
    },
}

fn parse_triple(s: &str) -> std::result::Result<(u64, u64, u64), String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [a, k, c] if a > 0 && k > 0 && c > 0 => Ok((a, k, c)),
        _ => Err(format!("expected three positive integers a,k,c, got {s:?}")),
    }
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("bad range {s:?}"));
    }
    Ok((lo, hi))
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let trimmed = text.trim();
    let g = if trimmed.starts_with('{') {
        Graph::from_json(trimmed)?
    } else {
        let line = trimmed.lines().next().ok_or_else(|| anyhow!("{} is empty", path.display()))?;
        Graph::from_graph6(line)?
    };
    Ok(g)
}

/// Graph plus its spectral decomposition; stellar inputs use the exact path.
fn load(source: &GraphSource) -> Result<(Graph, SpectralDecomposition)> {
    match (&source.graph, source.stellar) {
        (Some(path), None) => {
            let g = read_graph(path)?;
            let d = decompose(&g, DEFAULT_GROUPING_TOL)?;
            Ok((g, d))
        }
        (None, Some((a, k, c))) => {
            let (a, k, c) = (a as usize, k as usize, c as usize);
            Ok((build_stellar(a, k, c)?, stellar_decompose(a, k, c)?))
        }
        _ => bail!("give exactly one of --graph or --stellar"),
    }
}

fn pair_of(v: &[usize]) -> (usize, usize) {
    (v[0], v[1])
}

fn parse_state(spec: &str, n: usize) -> Result<StateMatrix> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let list = |s: &str| -> Result<Vec<usize>> {
        s.split(',').map(|p| p.trim().parse::<usize>().with_context(|| format!("vertex {p:?}"))).collect()
    };
    Ok(match kind {
        "identity" => StateMatrix::identity(n),
        "vertex" | "subset" => subset_state(&list(rest)?, n)?,
        "pure" => {
            let x: Vec<f64> = rest
                .split(',')
                .map(|p| p.trim().parse::<f64>().with_context(|| format!("amplitude {p:?}")))
                .collect::<Result<_>>()?;
            if x.len() != n {
                bail!("pure state has {} amplitudes, graph has {n} vertices", x.len());
            }
            StateMatrix::pure(&x)?
        }
        other => bail!("unknown state kind {other:?}"),
    })
}

fn emit(out: &mut impl Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn run_analyze(cli: &Cli, source: &GraphSource, pair: (usize, usize), time: Option<WalkTime>) -> Result<ExitCode> {
    let (_, d) = load(source)?;
    let cert = certify_fr(&d, pair.0, pair.1)?;
    let extra = match time {
        Some(t) => Some((t, verify_fr_at(&d, pair.0, pair.1, t.to_f64())?)),
        None => None,
    };
    let mut out = io::stdout().lock();
    match cli.format() {
        Format::Json => {
            let mut v = json!({ "certificate": cert.to_json(), "decomposition": d.report(pair) });
            if let Some((t, obs)) = &extra {
                v["observation"] = json!({
                    "time": t.to_string(),
                    "fr": obs.is_fr(cli.tol),
                    "proper": obs.is_proper(cli.tol),
                    "detail": obs.to_json(),
                });
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Csv => {
            writeln!(out, "a,b,verdict,gamma,Delta,g,tau_min,tau_min_exact,off_block_norm,cross_amplitude")?;
            let o = cert.oracle.as_ref();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                pair.0,
                pair.1,
                cert.verdict.as_str(),
                opt(cert.gamma),
                opt(cert.delta),
                opt(cert.g),
                opt(cert.tau_min),
                opt(cert.tau_exact),
                opt(o.map(|o| o.off_block_norm)),
                opt(o.map(|o| o.cross_amplitude)),
            )?;
        }
        Format::Text => {
            writeln!(out, "pair {} {}: {}", pair.0, pair.1, cert.verdict.as_str())?;
            writeln!(out, "  parallel {}  commutative {}  cospectral {}", cert.parallel, cert.commutative, cert.cospectral)?;
            if let Some(g) = cert.gamma {
                writeln!(out, "  gamma {g}")?;
            }
            writeln!(out, "  C+ {:?}  C- {:?}", cert.c_plus_values, cert.c_minus_values)?;
            if let Some(t) = cert.tau_exact {
                writeln!(out, "  tau_min {t} ({:.12})", t.to_f64())?;
            }
            if let Some(o) = &cert.oracle {
                writeln!(out, "  oracle off-block {:.3e}, cross amplitude {:.6}", o.off_block_norm, o.cross_amplitude)?;
            }
            if let Some((t, obs)) = &extra {
                writeln!(out, "  at {t}: off-block {:.3e}, cross amplitude {:.6}", obs.off_block_norm, obs.cross_amplitude)?;
            }
        }
        Format::Dot => {
            let rho = subset_state(&[pair.0, pair.1], d.n())?;
            let sg = support_graph(&d, &rho, None)?;
            let classes = cert.verdict.is_proper().then_some((cert.c_plus.as_slice(), cert.c_minus.as_slice()));
            write!(out, "{}", sg.to_dot(classes))?;
        }
    }
    Ok(if cert.verdict.is_proper() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_stellar(cli: &Cli, single: Option<(u64, u64, u64)>, max: Option<u64>, all: bool) -> Result<ExitCode> {
    let triples: Vec<(u64, u64, u64)> = match (single, max) {
        (Some(t), _) => vec![t],
        (None, Some(m)) => (1..=m)
            .flat_map(|a| (1..=m).flat_map(move |k| (1..=m).map(move |c| (a, k, c))))
            .collect(),
        (None, None) => bail!("give --stellar or --max"),
    };
    let results = triples
        .par_iter()
        .map(|&(a, k, c)| analyze(a, k, c))
        .collect::<revival_core::Result<Vec<_>>>()?;
    let keep: Vec<_> = results
        .into_iter()
        .filter(|r| all || single.is_some() || r.delta.is_some())
        .collect();
    let mut out = BufWriter::new(io::stdout().lock());
    match cli.format() {
        Format::Csv => {
            writeln!(out, "a,k,c,mu,sigma,verdict,Delta,alpha,beta,tau_min,min_period")?;
            for r in &keep {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.a,
                    r.k,
                    r.c,
                    r.mu,
                    r.sigma,
                    r.verdict.as_str(),
                    opt(r.delta),
                    opt(r.alpha),
                    opt(r.beta),
                    opt(r.tau_min),
                    opt(r.min_period)
                )?;
            }
        }
        Format::Text => {
            for r in &keep {
                writeln!(out, "X({},{},{}): {} tau_min {}", r.a, r.k, r.c, r.verdict.as_str(), opt(r.tau_min))?;
            }
        }
        Format::Json => {
            for r in &keep {
                emit(&mut out, &r.to_json())?;
            }
        }
        Format::Dot => bail!("dot output is not available for stellar"),
    }
    out.flush()?;
    let proper = keep.iter().any(|r| r.verdict == revival_core::stellar::StellarVerdict::ProperFr);
    Ok(if single.is_none() || proper { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn run_family(
    cli: &Cli,
    p: u64,
    delta: u64,
    alpha: (u64, u64),
    beta_multiple: u64,
    beta_max: Option<u64>,
    polygamy: bool,
    count: Option<usize>,
) -> Result<ExitCode> {
    check_family_prime(p)?;
    let lines: Vec<Value> = if polygamy {
        (alpha.0..=alpha.1)
            .into_par_iter()
            .map(|r| -> Result<Value> {
                let (a, k, c) = generate_polygamy_triple(p, r)?;
                let x = analyze(a, k, c)?;
                Ok(json!({
                    "triple": [a, k, c],
                    "r": r,
                    "diophantine": diophantine_check(a, k, c, 1, p * r, p * (r + 1)),
                    "analysis": x.to_json(),
                }))
            })
            .collect::<Result<_>>()?
    } else {
        let recipes: Vec<FamilyRecipe> = match beta_max {
            Some(bmax) => (alpha.0..=alpha.1)
                .flat_map(|al| (al + 1..=bmax).map(move |be| (al, be)))
                .filter_map(|(al, be)| FamilyRecipe::new(p, delta, al, be).ok())
                .filter(|r| r.ratio_ok())
                .collect(),
            None => (alpha.0..=alpha.1)
                .map(|al| FamilyRecipe::new(p, delta, al, beta_multiple * al))
                .collect::<revival_core::Result<_>>()?,
        };
        recipes
            .par_iter()
            .map(|r| Ok(generate_family(r)?.to_json()))
            .collect::<Result<_>>()?
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for line in lines.iter().take(count.unwrap_or(usize::MAX)) {
        match cli.format() {
            Format::Json => emit(&mut out, line)?,
            Format::Text => writeln!(out, "{}", line["triple"])?,
            Format::Csv => {
                let t = &line["triple"];
                writeln!(out, "{},{},{}", t[0], t[1], t[2])?;
            }
            Format::Dot => bail!("dot output is not available for family"),
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn run_product(
    cli: &Cli,
    stellar: Option<(u64, u64, u64)>,
    ell: Option<u64>,
    left: Option<&PathBuf>,
    right: Option<&PathBuf>,
) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    if let Some((a, k, c)) = stellar {
        let ell = match ell {
            Some(l) => l,
            None => {
                // read ℓ off τ_min = π/(2ℓ+1)
                let tau = analyze(a, k, c)?.tau_min.ok_or_else(|| anyhow!("X({a},{k},{c}) has no revival"))?;
                let den = *tau.coefficient().denom();
                if tau.radicand() != 1 || *tau.coefficient().numer() != 1 || den % 2 == 0 {
                    bail!("X({a},{k},{c}) revives at {tau}, not at π over an odd integer");
                }
                (den as u64 - 1) / 2
            }
        };
        let w = polygamy_witness(a, k, c, ell)?;
        match cli.format() {
            Format::Text => {
                for (name, (pair, t, obs)) in [("across", &w.across), ("within", &w.within)] {
                    writeln!(
                        out,
                        "{name} {:?} at {t}: off-block {:.3e}, cross amplitude {:.6}",
                        pair, obs.off_block_norm, obs.cross_amplitude
                    )?;
                }
            }
            _ => writeln!(out, "{}", serde_json::to_string_pretty(&w.to_json(cli.tol))?)?,
        }
        return Ok(if w.holds(cli.tol) { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let (Some(l), Some(r)) = (left, right) else {
        bail!("give --stellar, or both --left and --right");
    };
    let left = if l.as_os_str() == "k2" { build_complete(2)? } else { read_graph(l)? };
    let z = cartesian_product(&left, &read_graph(r)?)?;
    match cli.format() {
        Format::Dot => write!(out, "{}", z.to_dot())?,
        _ => writeln!(out, "{}", z.to_json())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn run_subset(cli: &Cli, source: &GraphSource, from: &[usize], to: &[usize], time: Option<WalkTime>) -> Result<ExitCode> {
    let (g, d) = load(source)?;
    let report: Option<SubsetTransferReport> = match time {
        Some(t) => Some(detect_subset_transfer(&g, &d, from, to, t.to_f64(), cli.tol)?),
        None => {
            let grid = default_time_grid(&d);
            let hits = grid
                .par_iter()
                .map(|&t| detect_subset_transfer(&g, &d, from, to, t, cli.tol))
                .collect::<revival_core::Result<Vec<_>>>()?;
            hits.into_iter().find(|r| r.transfers)
        }
    };
    let mut out = io::stdout().lock();
    let found = report.as_ref().is_some_and(|r| r.transfers);
    match (&report, cli.format()) {
        (Some(r), Format::Text) => writeln!(
            out,
            "transfer {:?} -> {:?} at t = {:.12}: {} (residual {:.3e})",
            r.s, r.t_set, r.time, r.transfers, r.residual
        )?,
        (Some(r), _) => writeln!(out, "{}", serde_json::to_string_pretty(&r.to_json())?)?,
        (None, Format::Text) => writeln!(out, "no transfer found on the default grid")?,
        (None, _) => writeln!(out, "{}", json!({"transfers": false, "scanned": "default-grid"}))?,
    }
    Ok(if found { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_export(cli: &Cli, source: &GraphSource, state: Option<&str>, pair: Option<(usize, usize)>) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    let Some(spec) = state else {
        let g = match (&source.graph, source.stellar) {
            (Some(p), None) => read_graph(p)?,
            (None, Some((a, k, c))) => build_stellar(a as usize, k as usize, c as usize)?,
            _ => bail!("give exactly one of --graph or --stellar"),
        };
        match cli.format() {
            Format::Dot => write!(out, "{}", g.to_dot())?,
            Format::Text => writeln!(out, "{}", g.to_graph6())?,
            _ => writeln!(out, "{}", g.to_json())?,
        }
        return Ok(ExitCode::SUCCESS);
    };
    let (_, d) = load(source)?;
    let rho = parse_state(spec, d.n())?;
    let sg = support_graph(&d, &rho, None)?;
    let cert = match pair {
        Some((a, b)) => Some(certify_fr(&d, a, b)?),
        None => None,
    };
    let classes = cert
        .as_ref()
        .filter(|c| c.verdict.is_proper())
        .map(|c| (c.c_plus.as_slice(), c.c_minus.as_slice()));
    match cli.format.unwrap_or(Format::Dot) {
        Format::Json => {
            let v = json!({
                "eigenvalues": sg.eigenvalues,
                "loops": sg.loops,
                "edges": sg.edges,
                "components": sg.components(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        _ => write!(out, "{}", sg.to_dot(classes))?,
    }
    Ok(ExitCode::SUCCESS)
}

impl Cli {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        bail!("--tol must be positive");
    }
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global()?;
    }
    match &cli.command {
        Command::Analyze { source, pair, time } => run_analyze(cli, source, pair_of(pair), *time),
        Command::Stellar { stellar, max, all } => run_stellar(cli, *stellar, *max, *all),
        Command::Family { p, delta, alpha, beta_multiple, beta_max, polygamy, count } => {
            run_family(cli, *p, *delta, *alpha, *beta_multiple, *beta_max, *polygamy, *count)
        }
        Command::Product { stellar, ell, left, right } => run_product(cli, *stellar, *ell, left.as_ref(), right.as_ref()),
        Command::Subset { source, from, to, time } => run_subset(cli, source, from, to, *time),
        Command::Export { source, state, pair } => {
            run_export(cli, source, state.as_deref(), pair.as_deref().map(pair_of))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
