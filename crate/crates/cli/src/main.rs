mod cache;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spf_core::combinatorics::Partition;
use spf_core::derived::{bott_check, decalage_check, derived_functors, iterate_check, Comparison, DerivedRequest, DEFAULT_BUDGET};
use spf_core::functor::FunctorExpr;
use spf_core::ringel::{frobenius_check, plethysm_check, theta, verify_main_theorem};
use spf_core::schur_algebra::{blocks, build_algebra, ext_groups, module_of};
use spf_core::{Error, Ring};

use cache::{Cache, Entry};
use report::View;

const EXIT_ERROR: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "spf", version, about = "Derived functors and Ringel duals of strict polynomial functors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// How torsion is listed.
    #[arg(long, global = true, value_enum, default_value_t = View::Invariant)]
    view: View,
    /// Cap on enumerated labels in the simplicial engine.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = positive)]
    budget: u128,
    /// Ignore SPF_CACHE_DIR for this invocation.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L_*F(k^m; n) by the simplicial pipeline.
    Derive {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long, value_parser = ring)]
        ring: Ring,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        height: usize,
    },
    /// H^*(ΘⁿF)(k^m) by injective coresolutions.
    Theta {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long)]
        iterations: usize,
        #[arg(long, value_parser = ranks)]
        ranks: Ranks,
        #[arg(long, value_parser = ring, default_value = "Z")]
        ring: Ring,
    },
    /// Ext^i(F, G) over the Schur algebra S(d,d) of a prime field.
    Ext {
        #[arg(long, value_parser = functor)]
        source: FunctorExpr,
        #[arg(long, value_parser = functor)]
        target: FunctorExpr,
        #[arg(long, value_parser = ring)]
        ring: Ring,
        #[arg(long)]
        max_degree: usize,
    },
    /// Partitions of d grouped by p-core.
    Blocks {
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        prime: u64,
    },
    /// Cross-checks between the two pipelines; exit 4 on a mismatch.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// L_{nd-i}F(k^m; n) against H^i(ΘⁿF)(k^m).
    MainTheorem {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long)]
        height: usize,
        #[arg(long, value_parser = ring)]
        ring: Ring,
        #[arg(long, value_parser = ranks)]
        ranks: Ranks,
    },
    /// L_i W_{λ'}(k^m; n) against L_{i+d} S_λ(k^m; n+1).
    Decalage {
        #[arg(long, value_parser = partition)]
        partition: Partition,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = ring)]
        ring: Ring,
    },
    /// L_*S_λ(Q^m; n) against the rational Bott pattern.
    Bott {
        #[arg(long, value_parser = partition)]
        partition: Partition,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        rank: usize,
    },
    /// Θⁿ(F∘G) against Θ^{nd}F evaluated at H⁰ΘⁿG.
    Plethysm {
        #[arg(long, value_parser = functor)]
        outer: FunctorExpr,
        #[arg(long, value_parser = functor)]
        inner: FunctorExpr,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[arg(long, value_parser = ranks)]
        ranks: Ranks,
        #[arg(long, value_parser = ring, default_value = "Z")]
        ring: Ring,
    },
    /// Θⁿ(F∘I^(r)) against a shift of ΘⁿF.
    Frobenius {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long, default_value_t = 1)]
        twist: u32,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[arg(long, value_parser = ranks)]
        ranks: Ranks,
        #[arg(long, value_parser = ring)]
        ring: Ring,
    },
    /// L_*F(k^m; n) against L_*G(k^m; n).
    Compare {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long, value_parser = functor)]
        against: FunctorExpr,
        #[arg(long, value_parser = ring)]
        ring: Ring,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        height: usize,
    },
    /// L(L(F; n1); n2) against L(F; n1+n2).
    Iterate {
        #[arg(long, value_parser = functor)]
        functor: FunctorExpr,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = ranks, default_value = "1,1")]
        heights: Ranks,
        #[arg(long, value_parser = ring, default_value = "Z")]
        ring: Ring,
    },
}

#[derive(Clone, Debug)]
struct Ranks(Vec<usize>);

impl std::fmt::Display for Ranks {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

fn functor(s: &str) -> Result<FunctorExpr, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn ring(s: &str) -> Result<Ring, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn partition(s: &str) -> Result<Partition, String> {
    s.trim_matches(|c| c == '(' || c == ')').parse().map_err(|e: Error| e.to_string())
}

fn ranks(s: &str) -> Result<Ranks, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad rank list {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty rank list".into());
    }
    Ok(Ranks(v))
}

fn positive(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

impl Command {
    /// Canonical form of the request; hashed for the cache key.
    fn canonical(&self, o: &Options) -> String {
        let body = match self {
            Command::Derive { functor, ring, rank, height } => {
                format!("derive functor={functor} ring={ring} rank={rank} height={height}")
            }
            Command::Theta { functor, iterations, ranks, ring } => {
                format!("theta functor={functor} iterations={iterations} ranks={ranks} ring={ring}")
            }
            Command::Ext { source, target, ring, max_degree } => {
                format!("ext source={source} target={target} ring={ring} max-degree={max_degree}")
            }
            Command::Blocks { weight, prime } => format!("blocks weight={weight} prime={prime}"),
            Command::Verify { check } => match check {
                Check::MainTheorem { functor, height, ring, ranks } => {
                    format!("verify main-theorem functor={functor} height={height} ring={ring} ranks={ranks}")
                }
                Check::Decalage { partition, height, rank, ring } => {
                    format!("verify decalage partition={partition} height={height} rank={rank} ring={ring}")
                }
                Check::Bott { partition, height, rank } => {
                    format!("verify bott partition={partition} height={height} rank={rank}")
                }
                Check::Plethysm { outer, inner, iterations, ranks, ring } => {
                    format!("verify plethysm outer={outer} inner={inner} iterations={iterations} ranks={ranks} ring={ring}")
                }
                Check::Frobenius { functor, twist, iterations, ranks, ring } => {
                    format!("verify frobenius functor={functor} twist={twist} iterations={iterations} ranks={ranks} ring={ring}")
                }
                Check::Compare { functor, against, ring, rank, height } => {
                    format!("verify compare functor={functor} against={against} ring={ring} rank={rank} height={height}")
                }
                Check::Iterate { functor, rank, heights, ring } => {
                    format!("verify iterate functor={functor} rank={rank} heights={heights} ring={ring}")
                }
            },
        };
        format!("spf/1 {body} budget={} view={:?} format={:?}", o.budget, o.view, o.format)
    }
}

fn render(value: Value, text: String, o: &Options) -> String {
    match o.format {
        Format::Json => format!("{value}\n"),
        Format::Text => text,
    }
}

fn verify_report(name: &str, cs: &[Comparison], o: &Options) -> Entry {
    let all = cs.iter().all(Comparison::matches);
    let value = json!({
        "check": name,
        "match": all,
        "comparisons": cs.iter().map(|c| report::comparison(c, o.view)).collect::<Vec<_>>(),
    });
    let text: String = cs.iter().map(|c| c.to_string()).collect();
    Entry { exit: if all { 0 } else { EXIT_MISMATCH }, stdout: render(value, text, o) }
}

fn run(cmd: &Command, o: &Options) -> spf_core::Result<Entry> {
    let ok = |stdout| Entry { exit: 0, stdout };
    Ok(match cmd {
        Command::Derive { functor, ring, rank, height } => {
            let req = DerivedRequest::new(functor.clone(), *ring, *rank, *height).with_budget(o.budget);
            let g = derived_functors(&req)?;
            ok(render(report::module(&g, o.view), report::text_module(&g, o.view), o))
        }
        Command::Theta { functor, iterations, ranks, ring } => {
            let out = theta(functor, *iterations, &ranks.0, *ring)?;
            let mut by_rank = serde_json::Map::new();
            let mut text = String::new();
            for (m, g) in &out {
                by_rank.insert(m.to_string(), report::module(g, o.view));
                text.push_str(&format!("m = {m}\n{}", report::text_module(g, o.view)));
            }
            ok(render(json!({ "ranks": by_rank }), text, o))
        }
        Command::Ext { source, target, ring, max_degree } => {
            let d = source.degree(*ring)?;
            if target.degree(*ring)? != d {
                return Err(Error::InvalidArguments(format!("{source} and {target} have different degrees")));
            }
            let alg = build_algebra(d.max(1), d, *ring)?;
            let g = ext_groups(&module_of(&alg, source)?, &module_of(&alg, target)?, *max_degree)?;
            ok(render(report::module(&g, o.view), report::text_module(&g, o.view), o))
        }
        Command::Blocks { weight, prime } => {
            let bs = blocks(*weight, *prime)?;
            let list: Vec<Value> = bs
                .iter()
                .map(|(core, ps)| json!({"core": core.to_string(), "partitions": ps.iter().map(|p| p.to_string()).collect::<Vec<_>>()}))
                .collect();
            let text: String = bs
                .iter()
                .map(|(core, ps)| {
                    let ps: Vec<String> = ps.iter().map(|p| format!("({p})")).collect();
                    format!("core ({core}): {}\n", ps.join(" "))
                })
                .collect();
            ok(render(json!({"weight": weight, "prime": prime, "blocks": list}), text, o))
        }
        Command::Verify { check } => match check {
            Check::MainTheorem { functor, height, ring, ranks } => {
                verify_report("main-theorem", &verify_main_theorem(functor, *height, &ranks.0, *ring)?, o)
            }
            Check::Decalage { partition, height, rank, ring } => {
                verify_report("decalage", &[decalage_check(partition, *height, *rank, *ring)?], o)
            }
            Check::Bott { partition, height, rank } => verify_report("bott", &[bott_check(partition, *height, *rank)?], o),
            Check::Plethysm { outer, inner, iterations, ranks, ring } => {
                verify_report("plethysm", &plethysm_check(outer, inner, *iterations, &ranks.0, *ring)?, o)
            }
            Check::Frobenius { functor, twist, iterations, ranks, ring } => {
                verify_report("frobenius", &frobenius_check(functor, *twist, *iterations, &ranks.0, *ring)?, o)
            }
            Check::Compare { functor, against, ring, rank, height } => {
                let side = |f: &FunctorExpr| derived_functors(&DerivedRequest::new(f.clone(), *ring, *rank, *height).with_budget(o.budget));
                let c = Comparison::new(
                    format!("L_*{functor} against L_*{against} at k^{rank}, height {height}, over {ring}"),
                    format!("L_*{functor}"),
                    side(functor)?,
                    format!("L_*{against}"),
                    side(against)?,
                );
                verify_report("compare", &[c], o)
            }
            Check::Iterate { functor, rank, heights, ring } => {
                let [n1, n2] = heights.0[..] else {
                    return Err(Error::InvalidArguments("--heights takes two values n1,n2".into()));
                };
                verify_report("iterate", &[iterate_check(functor, *rank, n1, n2, *ring)?], o)
            }
        },
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = if cli.opts.no_cache { None } else { Cache::from_env() };
    let key = cli.command.canonical(&cli.opts);
    let cached = cache.as_ref().and_then(|c| match c.load(&key) {
        Ok(e) => Some(e),
        Err(err) => {
            if c.path(&key).exists() {
                eprintln!("spf: ignoring cache entry: {err:#}");
            }
            None
        }
    });
    let entry = match cached {
        Some(e) => e,
        None => match run(&cli.command, &cli.opts) {
            Ok(e) => {
                if let Some(c) = &cache {
                    if let Err(err) = c.store(&key, &e) {
                        eprintln!("spf: could not write cache entry: {err:#}");
                    }
                }
                e
            }
            Err(e) => {
                eprintln!("spf: {e}");
                return ExitCode::from(exit_code(&e));
            }
        },
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(entry.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(EXIT_ERROR);
    }
    if entry.exit == EXIT_MISMATCH {
        eprintln!("spf: verification mismatch");
    }
    ExitCode::from(entry.exit)
}
