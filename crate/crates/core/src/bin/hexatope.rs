use std::error::Error;
use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hexatope::brouwer::{approx_fixed_point, CubeMap};
use hexatope::dinterval::{
    kaiser_transversal, lower_bound_family, multipoint_search, nu, nu_star_tau_star, tau, DIntervalFamily,
    EqualizeOptions,
};
use hexatope::grprops::{
    builtin, illies_family, kss_group_data, monotone_sweep, orbit_congruence_check, prime_power,
    scorpion_complexity_probe, yao_fixed_complex, PropertyKind,
};
use hexatope::hexboard::{
    triangulation_check, winner_2d, winner_by_connectivity, winner_ddim, Coloring2D, DColoring, HexBoard2D,
    Player,
};
use hexatope::hexsolve::{pairing_exhaustive, pairing_playouts, solve_with, Position, SolveOptions};
use hexatope::scomplex::catalog::{dunce_hat, rp2_6};
use hexatope::scomplex::{is_collapsible, is_nonevasive, rational_betti, SimplicialComplex};
use hexatope::service::{serve, SessionStore, DATA_DIR_ENV};
use hexatope::setfam::{divisibility_certificate, euler_count, optimal_tree, parse_family};

type Res = Result<Value, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "hexatope", version, about = "HEX, fixed points, evasiveness and d-interval workbench")]
struct Cli {
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds for searches that accept one.
    #[arg(long, global = true)]
    budget: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

struct Ctx {
    seed: u64,
    budget: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// HEX boards and the solver.
    #[command(subcommand)]
    Hex(HexCmd),
    /// Approximate fixed points of cube maps.
    #[command(subcommand)]
    Brouwer(BrouwerCmd),
    /// d-interval packing and piercing.
    #[command(subcommand)]
    Dint(DintCmd),
    /// Graph, digraph and bipartite properties.
    #[command(subcommand)]
    Props(PropsCmd),
    /// Simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Set families and argument complexity.
    #[command(subcommand)]
    Setfam(SetfamCmd),
    /// Run the HTTP game service.
    Serve(ServeArgs),
}

#[derive(Subcommand)]
enum HexCmd {
    /// Winner of a full coloring ("hex r c" or "dhex n d" text; "-" reads stdin).
    Winner { file: String },
    /// Exact value of a position, or of the empty board.
    Solve {
        file: Option<String>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
    },
    /// Every full coloring of a small board.
    Exhaustive {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Pairing strategy on an (n+1)×n board.
    Pairing {
        #[arg(long)]
        n: usize,
        /// Random playouts instead of the exhaustive check.
        #[arg(long)]
        playouts: Option<u64>,
    },
    /// Checks that H(n,d) triangulates its cube.
    Triangulation {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum BrouwerCmd {
    /// Approximate fixed point of a builtin map.
    Fixed {
        #[arg(long, default_value = "rotation")]
        map: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum DintCmd {
    /// ν, τ, ν*, τ* of a family file.
    Stats { file: String },
    /// Transversal from an equalized trap.
    Kaiser { file: String },
    /// One point per line piercing every member.
    Multipoint { file: String },
    /// A seeded random family.
    Random {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 8)]
        q: i64,
    },
    /// Pairwise intersecting homogeneous family with large τ.
    LowerBound {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The canonical 2-interval family F₂ in k copies.
    F2 {
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args)]
struct KindArgs {
    #[arg(long, value_parser = ["graph", "digraph", "bipartite"], default_value = "graph")]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Size of V for bipartite graphs.
    #[arg(long)]
    m: Option<usize>,
}

impl KindArgs {
    fn kind(&self) -> Result<PropertyKind, Box<dyn Error>> {
        Ok(match self.kind.as_str() {
            "graph" => PropertyKind::Graph { n: self.n },
            "digraph" => PropertyKind::Digraph { n: self.n },
            _ => PropertyKind::Bipartite {
                m: self.m.ok_or("--m is required for bipartite")?,
                n: self.n,
            },
        })
    }
}

#[derive(Subcommand)]
enum PropsCmd {
    /// Builds a named property and computes its complexity.
    Build {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        name: String,
        #[arg(long)]
        param: Option<usize>,
    },
    /// Orbit congruence for a property over a prime-power ground set.
    Congruence {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        name: String,
        #[arg(long)]
        param: Option<usize>,
    },
    /// All monotone graph properties on n ≤ 4 vertices.
    Sweep {
        #[arg(long)]
        n: usize,
    },
    /// Illies' cyclic family on twelve points.
    Illies,
    /// Fixed complex of the bipartite argument.
    Yao {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Defaults to every 0 ≤ r < m.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Affine group of GF(q) acting on pairs.
    Kss {
        #[arg(long)]
        q: usize,
    },
    /// Exact complexity of "being a scorpion graph".
    Scorpion {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Invariants of a complex file ("m=<n> complex" header).
    Info { file: String },
    /// A catalog complex: rp2 or dunce.
    Catalog { name: String },
}

#[derive(Subcommand)]
enum SetfamCmd {
    /// Argument complexity, optimal tree and the divisibility certificate.
    Complexity { file: String },
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Session directory; defaults to $HEXATOPE_DATA_DIR.
    #[arg(long, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
}

fn read_input(path: &str) -> Result<String, Box<dyn Error>> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn hex(cmd: HexCmd, cli: &Ctx) -> Res {
    match cmd {
        HexCmd::Winner { file } => {
            let text = read_input(&file)?;
            if text.trim_start().starts_with("dhex") {
                let c = DColoring::parse(&text)?;
                let w = winner_ddim(&c)?;
                Ok(json!({"color": w.color, "path": w.path, "simplices": w.chain.len()}))
            } else {
                let c = Coloring2D::parse(&text)?;
                let w = winner_2d(&c)?;
                Ok(json!({"winner": w.winner, "path": w.path}))
            }
        }
        HexCmd::Solve { file, rows, cols } => {
            let pos = match (file, rows, cols) {
                (Some(f), _, _) => Position::infer(Coloring2D::parse(&read_input(&f)?)?)?,
                (None, Some(r), Some(c)) => Position::empty(HexBoard2D::new(r, c)?),
                _ => return Err("give a position file or --rows and --cols".into()),
            };
            let mut opts = match cli.budget {
                Some(b) => SolveOptions::large(Duration::from_secs_f64(b)),
                None => SolveOptions::default(),
            };
            if cli.seed != 0 {
                opts.order_seed = Some(cli.seed);
            }
            let r = solve_with(&pos, &opts)?;
            Ok(json!({"toMove": pos.to_move, "winner": r.winner, "move": r.best_move, "nodes": r.nodes}))
        }
        HexCmd::Exhaustive { rows, cols } => {
            let b = HexBoard2D::new(rows, cols)?;
            if b.tiles() > 20 {
                return Err("exhaustive check limited to 20 tiles".into());
            }
            let (mut white, mut black, mut disagreements) = (0u64, 0u64, 0u64);
            for mask in 0..1u64 << b.tiles() {
                let c = Coloring2D::from_mask(b, mask);
                let w = winner_2d(&c)?;
                let by_conn = [Player::White, Player::Black].map(|p| winner_by_connectivity(&c, p).is_some());
                let expect = match w.winner {
                    Player::White => [true, false],
                    Player::Black => [false, true],
                };
                if by_conn != expect {
                    disagreements += 1;
                }
                match w.winner {
                    Player::White => white += 1,
                    Player::Black => black += 1,
                }
            }
            Ok(json!({"colorings": white + black, "white": white, "black": black, "disagreements": disagreements}))
        }
        HexCmd::Pairing { n, playouts } => {
            let b = HexBoard2D::new(n + 1, n)?;
            let r = match playouts {
                Some(g) => pairing_playouts(b, g, cli.seed)?,
                None => pairing_exhaustive(b, b.tiles() <= 12)?,
            };
            Ok(serde_json::to_value(r)?)
        }
        HexCmd::Triangulation { n, d, samples } => Ok(serde_json::to_value(triangulation_check(n, d, samples, cli.seed)?)?),
    }
}

fn brouwer(cmd: BrouwerCmd) -> Res {
    match cmd {
        BrouwerCmd::Fixed { map, dim, eps } => {
            let f = CubeMap::builtin(&map, dim)?;
            Ok(serde_json::to_value(approx_fixed_point(&f, eps)?)?)
        }
    }
}

fn family(file: &str) -> Result<DIntervalFamily, Box<dyn Error>> {
    Ok(DIntervalFamily::parse(&read_input(file)?)?)
}

fn dint(cmd: DintCmd, cli: &Ctx) -> Res {
    let opts = EqualizeOptions {
        seed: cli.seed,
        ..EqualizeOptions::default()
    };
    match cmd {
        DintCmd::Stats { file } => {
            let f = family(&file)?;
            let frac = nu_star_tau_star(&f)?;
            Ok(json!({
                "nu": nu(&f)?.size,
                "tau": tau(&f)?.size,
                "nuStar": frac.value.to_string(),
                "tauStar": frac.value.to_string(),
            }))
        }
        DintCmd::Kaiser { file } => Ok(serde_json::to_value(kaiser_transversal(&family(&file)?, &opts)?)?),
        DintCmd::Multipoint { file } => Ok(serde_json::to_value(multipoint_search(&family(&file)?, &opts)?)?),
        DintCmd::Random { d, size, q } => Ok(Value::String(DIntervalFamily::random(d, size, q, cli.seed).to_text())),
        DintCmd::LowerBound { d, k } => {
            let lb = lower_bound_family(d, k)?;
            Ok(json!({
                "b": lb.b, "n": lb.n, "members": lb.family.len(),
                "pairwiseIntersecting": lb.pairwise_intersecting,
                "nu": lb.nu, "tau": lb.tau,
                "family": lb.family.to_text(),
            }))
        }
        DintCmd::F2 { k } => Ok(Value::String(DIntervalFamily::canonical_f2().copies(k).to_text())),
    }
}

fn props(cmd: PropsCmd) -> Res {
    match cmd {
        PropsCmd::Build { kind, name, param } => {
            let p = builtin(&name, kind.kind()?, param)?;
            let c = hexatope::setfam::argument_complexity(&p.family)?;
            Ok(json!({
                "c": c, "m": p.m(), "evasive": c == p.m(),
                "members": p.family.len(), "counts": p.family.size_counts(),
                "euler": euler_count(&p.family),
            }))
        }
        PropsCmd::Congruence { kind, name, param } => {
            let p = builtin(&name, kind.kind()?, param)?;
            let (pr, t) = prime_power(p.m()).ok_or_else(|| format!("|E| = {} is not a prime power", p.m()))?;
            Ok(serde_json::to_value(orbit_congruence_check(&p, pr, t)?)?)
        }
        PropsCmd::Sweep { n } => Ok(serde_json::to_value(monotone_sweep(n)?)?),
        PropsCmd::Illies => {
            let (p, r) = illies_family()?;
            let mut v = serde_json::to_value(r)?;
            v["m"] = json!(p.m());
            v["evasive"] = json!(v["c"] == json!(p.m()));
            Ok(v)
        }
        PropsCmd::Yao { m, n, r } => {
            let rs: Vec<usize> = match r {
                Some(r) => vec![r],
                None => (0..m).collect(),
            };
            let out: Result<Vec<_>, _> = rs.into_iter().map(|r| yao_fixed_complex(m, n, r)).collect();
            Ok(serde_json::to_value(out?)?)
        }
        PropsCmd::Kss { q } => Ok(serde_json::to_value(kss_group_data(q)?)?),
        PropsCmd::Scorpion { n } => Ok(serde_json::to_value(scorpion_complexity_probe(n)?)?),
    }
}

fn complex_info(k: &SimplicialComplex) -> Res {
    let nonevasive = is_nonevasive(k).ok();
    Ok(json!({
        "vertices": k.num_vertices(),
        "fVector": k.f_vector(),
        "euler": k.euler_characteristic(),
        "betti": rational_betti(k),
        "cone": k.is_cone(),
        "simplex": k.is_simplex(),
        "nonevasive": nonevasive,
        "collapsible": is_collapsible(k).is_collapsible(),
    }))
}

fn complex(cmd: ComplexCmd) -> Res {
    match cmd {
        ComplexCmd::Info { file } => complex_info(&SimplicialComplex::parse(&read_input(&file)?)?),
        ComplexCmd::Catalog { name } => match name.as_str() {
            "rp2" => complex_info(&rp2_6()),
            "dunce" => complex_info(&dunce_hat()),
            other => Err(format!("unknown complex {other:?}; try rp2 or dunce").into()),
        },
    }
}

fn setfam(cmd: SetfamCmd) -> Res {
    match cmd {
        SetfamCmd::Complexity { file } => {
            let (f, _) = parse_family(&read_input(&file)?)?;
            let cert = divisibility_certificate(&f)?;
            Ok(json!({
                "m": f.m(), "members": f.len(), "c": cert.complexity,
                "evasive": cert.complexity == f.m(),
                "polynomial": cert.polynomial, "quotient": cert.quotient,
                "tree": optimal_tree(&f)?.to_string(),
            }))
        }
    }
}

fn run_server(args: ServeArgs) -> Res {
    let store = match args.data_dir {
        Some(d) => SessionStore::open(d)?,
        None => SessionStore::from_env()?,
    };
    eprintln!("serving on http://{} (sessions in {})", args.addr, store.dir().display());
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(serve(args.addr, Arc::new(store)))?;
    Ok(Value::Null)
}

fn render(v: &Value, format: Format) -> String {
    let mut out = String::new();
    match (format, v) {
        (_, Value::Null) => {}
        (_, Value::String(s)) => out.push_str(s),
        (Format::Json, _) => {
            out = serde_json::to_string_pretty(v).expect("json");
            out.push('\n');
        }
        (Format::Text, Value::Object(map)) => {
            for (k, x) in map {
                match x {
                    Value::String(s) if s.contains('\n') => out.push_str(&format!("{k}:\n{s}\n")),
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    _ => out.push_str(&format!("{k}: {x}\n")),
                }
            }
        }
        (Format::Text, Value::Array(items)) => {
            for x in items {
                out.push_str(&format!("{x}\n"));
            }
        }
        (Format::Text, _) => out.push_str(&format!("{v}\n")),
    }
    out
}

fn main() {
    let Cli {
        seed,
        budget,
        format,
        cmd,
    } = Cli::parse();
    let ctx = Ctx { seed, budget };
    let out = match cmd {
        Cmd::Hex(c) => hex(c, &ctx),
        Cmd::Brouwer(c) => brouwer(c),
        Cmd::Dint(c) => dint(c, &ctx),
        Cmd::Props(c) => props(c),
        Cmd::Complex(c) => complex(c),
        Cmd::Setfam(c) => setfam(c),
        Cmd::Serve(a) => run_server(a),
    };
    match out {
        Ok(v) => {
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = std::io::stdout().write_all(render(&v, format).as_bytes());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
