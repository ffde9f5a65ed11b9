use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use omega_cli::cache::{Cache, CHECKSUM_MISMATCH};
use omega_cli::report::{self, certified_vertices};
use omega_cli::{check_range, expected, write_matrix, Format, MatroidJson, UsageError};
use omega_core::descriptor::descriptor_to_lattice;
use omega_core::expansion::schubert_expansion_oracle;
use omega_core::polytope::{affine_dimension, linear_dimension, verify_certificate, vertex_decisions, PointSet};
use omega_core::rank3::enumerate_rank3_column_states;
use serde::Serialize;

/// Schubert expansions of rank 2 and 3 matroids and the polytope of all matroids.
///
/// Without a subcommand, builds `O_{r,n}` exactly like `omega omega`.
#[derive(Parser)]
#[command(name = "omega", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    matrix: MatrixArgs,

    /// Worker threads for parallel stages (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Neither read nor write the matrix cache
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build O_{r,n} and write it with its descriptor sidecar
    Omega(MatrixArgs),
    /// Schubert expansion of a matroid given as JSON cyclic flats
    Expand {
        /// JSON file, or `-` for stdin
        #[arg(long)]
        matroid: PathBuf,
        /// Print the expansion as JSON instead of `label coefficient` lines
        #[arg(long)]
        json: bool,
    },
    /// Matroids at the vertices of the polytope, as JSON lines
    Extremal(RankN),
    /// Count vertices by exact LP, optionally writing every certificate
    Vertices {
        #[command(flatten)]
        rn: RankN,
        /// Write all decisions with their certificates to this JSON file
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Affine dimension and linear span of the polytope
    Dimension(RankN),
    /// Recompute summary rows and compare them with the reference values
    Table {
        #[arg(long)]
        rank: usize,
        /// First n (default: first reference row)
        #[arg(long)]
        from: Option<usize>,
        /// Last n (default: last reference row with a vertex count)
        #[arg(long)]
        to: Option<usize>,
        /// Skip the vertex LPs
        #[arg(long)]
        no_vertices: bool,
    },
    /// Oracle, brute-force and indicator cross-checks
    Verify {
        #[command(flatten)]
        rn: RankN,
        /// Random rational points per matroid for the indicator check
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Clone, Copy)]
struct RankN {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Clone)]
struct MatrixArgs {
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Sort columns by their dense vectors, descending
    #[arg(long)]
    sorted: bool,
    #[arg(long, value_enum, default_value_t = Format::Triples)]
    format: Format,
    /// Output file; the sidecar goes to `<out>.sidecar.json`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rank 3 only: emit the loopless states as JSON lines without assembling the matrix
    #[arg(long)]
    states_only: bool,
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn cmd_omega(cache: &Cache, a: &MatrixArgs) -> Result<bool> {
    let (Some(rank), Some(n)) = (a.rank, a.n) else {
        return Err(UsageError("both --rank and --n are required".into()).into());
    };
    check_range(rank, n)?;
    if a.states_only {
        if rank != 3 {
            return Err(UsageError("--states-only applies to rank 3".into()).into());
        }
        #[derive(Serialize)]
        struct Line<'a> {
            descriptor: &'a omega_core::rank3::Rank3Descriptor,
            expansion: &'a omega_core::types::ExpansionVector,
        }
        let mut w = stdout();
        for s in enumerate_rank3_column_states(n)? {
            serde_json::to_writer(&mut w, &Line { descriptor: &s.descriptor, expansion: s.state.coeffs() })?;
            writeln!(w)?;
        }
        w.flush()?;
        return Ok(true);
    }
    let mut m = cache.matrix(rank, n)?;
    if a.sorted {
        m = m.sorted();
    }
    match &a.out {
        None => {
            let mut w = stdout();
            write_matrix(&m, a.format, &mut w)?;
            w.flush()?;
        }
        Some(path) => {
            let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = BufWriter::new(f);
            write_matrix(&m, a.format, &mut w)?;
            w.flush()?;
            let mut side = path.clone().into_os_string();
            side.push(".sidecar.json");
            let f = File::create(&side).with_context(|| format!("cannot write {}", side.to_string_lossy()))?;
            serde_json::to_writer_pretty(BufWriter::new(f), &m.sidecar())?;
        }
    }
    Ok(true)
}

fn cmd_expand(path: &PathBuf, json: bool) -> Result<bool> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    }
    let input: MatroidJson = serde_json::from_str(&text).context("malformed matroid JSON")?;
    let z = input.lattice()?;
    let ev = schubert_expansion_oracle(&z)?;
    let mut w = stdout();
    if json {
        serde_json::to_writer(&mut w, &ev)?;
        writeln!(w)?;
    } else {
        for (label, c) in ev.iter_canonical() {
            writeln!(w, "{label} {c}")?;
        }
    }
    w.flush()?;
    Ok(true)
}

fn cmd_extremal(cache: &Cache, rn: RankN) -> Result<bool> {
    let m = cache.matrix(rn.rank, rn.n)?;
    let ps = PointSet::from_matrix(&m);
    let mut w = stdout();
    for d in vertex_decisions(&ps, true)?.into_iter().filter(|d| d.is_vertex) {
        let c = &m.columns()[d.index];
        let z = descriptor_to_lattice(&c.descriptor)?;
        #[derive(Serialize)]
        struct Line<'a> {
            column: usize,
            descriptor: &'a omega_core::descriptor::MatroidDescriptor,
            matroid: MatroidJson,
            expansion: &'a omega_core::types::ExpansionVector,
        }
        let line = Line {
            column: d.index + 1,
            descriptor: &c.descriptor,
            matroid: MatroidJson::from_lattice(&z),
            expansion: &c.expansion,
        };
        serde_json::to_writer(&mut w, &line)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(true)
}

fn cmd_vertices(cache: &Cache, rn: RankN, certificates: Option<&PathBuf>) -> Result<bool> {
    let m = cache.matrix(rn.rank, rn.n)?;
    match certificates {
        None => {
            let (v, non, bad) = certified_vertices(&m)?;
            println!("{v} vertices among {} points ({non} non-vertices)", v + non);
            for b in &bad {
                eprintln!("uncertified decision: {b}");
            }
            Ok(bad.is_empty())
        }
        Some(path) => {
            let ps = PointSet::from_matrix(&m);
            let ds = vertex_decisions(&ps, true)?;
            let mut ok = true;
            for d in &ds {
                if let Err(e) = verify_certificate(&ps, d) {
                    eprintln!("uncertified decision at point {}: {e}", d.index);
                    ok = false;
                }
            }
            let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            serde_json::to_writer(BufWriter::new(f), &ds)?;
            let v = ds.iter().filter(|d| d.is_vertex).count();
            println!("{v} vertices among {} points; certificates in {}", ds.len(), path.display());
            Ok(ok)
        }
    }
}

fn cmd_dimension(cache: &Cache, rn: RankN) -> Result<bool> {
    let m = cache.matrix(rn.rank, rn.n)?;
    let ps = PointSet::from_matrix(&m);
    println!("affine dimension {}", affine_dimension(&ps)?);
    println!("linear span {}", linear_dimension(&ps));
    Ok(true)
}

fn cmd_table(cache: &Cache, rank: usize, from: Option<usize>, to: Option<usize>, no_vertices: bool) -> Result<bool> {
    let rows = expected::rows(rank);
    if rows.is_empty() {
        return Err(UsageError(format!("rank must be 2 or 3, got {rank}")).into());
    }
    let from = from.unwrap_or(rows[0].n);
    let to = to.unwrap_or_else(|| rows.iter().filter(|r| r.vertices.is_some()).map(|r| r.n).max().unwrap_or(from));
    if from > to {
        return Err(UsageError(format!("empty range {from}..={to}")).into());
    }
    let mut ok = true;
    for n in from..=to {
        let (lines, good) = report::table(cache, rank, [n], !no_vertices)?;
        for l in lines {
            println!("{l}");
        }
        ok &= good;
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring threads")?;
    }
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::from_env() };
    match &cli.command {
        None => cmd_omega(&cache, &cli.matrix),
        Some(Command::Omega(a)) => cmd_omega(&cache, a),
        Some(Command::Expand { matroid, json }) => cmd_expand(matroid, *json),
        Some(Command::Extremal(rn)) => cmd_extremal(&cache, *rn),
        Some(Command::Vertices { rn, certificates }) => cmd_vertices(&cache, *rn, certificates.as_ref()),
        Some(Command::Dimension(rn)) => cmd_dimension(&cache, *rn),
        Some(Command::Table { rank, from, to, no_vertices }) => cmd_table(&cache, *rank, *from, *to, *no_vertices),
        Some(Command::Verify { rn, samples, seed }) => {
            let r = report::verify(&cache, rn.rank, rn.n, *samples, *seed)?;
            println!("{r}");
            Ok(r.ok())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                if e.to_string().contains(CHECKSUM_MISMATCH) {
                    eprintln!("remove the cache entry or rerun with --no-cache");
                }
                ExitCode::from(1)
            }
        }
    }
}
