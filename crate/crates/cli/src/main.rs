use bm_core::diagrams::{build_d0, build_ti, format_arrow_word, parse_arrow_word};
use bm_core::emit::{
    canonical_json, derivation_dot, farey_svg, hooper_dot, round_sig, surface_svg, transition_dot,
};
use bm_core::error::Error;
use bm_core::farey::{direction_from_itinerary, FareyMap};
use bm_core::hooper::build_augmented;
use bm_core::linalg::Vec2;
use bm_core::renorm::{generate, substitution, DualPair};
use bm_core::surface::{build_surface, SurfaceParams};
use bm_core::tracer::{trace, trace_seeded};
use bm_core::verify::{run_all, VerifyConfig, SMALL_SET};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "bmcut",
    version,
    about = "Symbolic coding of linear flow on Bouw-Moller surfaces"
)]
struct Cli {
    #[arg(short, global = true, default_value_t = 4)]
    m: usize,
    #[arg(short, global = true, default_value_t = 3)]
    n: usize,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polygon presentation of M(m, n).
    Surface {
        #[arg(long)]
        svg: bool,
    },
    /// Cutting sequence of a trajectory.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Start point as `poly:x,y`; random (from the seed) when omitted.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 20)]
        crossings: usize,
    },
    /// Normalize and derive a word, `depth` times, alternating between M(m, n) and M(n, m).
    Derive {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Treat the word as a finite window instead of a cyclic word.
        #[arg(long)]
        window: bool,
    },
    /// Word on M(m, n) generated from a word on M(n, m) in sector `i`.
    Generate {
        #[arg(short)]
        i: usize,
        #[arg(long)]
        word: String,
    },
    /// Substitution `sigma_{i,j}` on arrow words.
    Subst {
        #[arg(short)]
        i: usize,
        #[arg(short)]
        j: usize,
        #[arg(long)]
        table: bool,
        /// Arrow word such as `l1 v3 r2`.
        #[arg(long)]
        word: Option<String>,
    },
    /// Branch table or graph of the Farey map.
    Farey {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Direction from an itinerary `b0,a1,b1,a2,b2,...` or from a traced word.
    Recognize {
        #[arg(long)]
        itinerary: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 25)]
        depth: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Transition diagram `T_i`, derivation diagram and augmented Hooper diagram as DOT.
    Diagrams {
        #[arg(short, default_value_t = 0)]
        i: usize,
    },
    /// Acceptance checks.
    Verify {
        #[arg(long)]
        all_small: bool,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::DomainError(_)
            | Error::NonPositiveShape
            | Error::StartOutside { .. } => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, name: &str, ext: &str, content: &str) -> Outcome {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                let path = dir.join(format!("{name}.{ext}"));
                std::fs::write(&path, content)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            None => {
                let _ = std::io::stdout().lock().write_all(content.as_bytes());
            }
        }
        Ok(())
    }
}

fn parse_labels(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Failure::Usage(format!("bad label '{t}'")))
        })
        .collect()
}

fn parse_start(s: &str) -> Result<(usize, Vec2), Failure> {
    let bad = || Failure::Usage(format!("start must look like poly:x,y, got '{s}'"));
    let (p, xy) = s.split_once(':').ok_or_else(bad)?;
    let (x, y) = xy.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let x = x.trim().parse().map_err(|_| bad())?;
    let y = y.trim().parse().map_err(|_| bad())?;
    Ok((p, Vec2::new(x, y)))
}

/// Sectors `b0, a1, b1, ...` of successive derivatives, stopping before the first derivative
/// that is shorter than two letters or admissible in more than one sector.
fn unambiguous_sectors(pair: &DualPair, w: &[u32], max: usize) -> Result<Vec<usize>, Failure> {
    let mut word = w.to_vec();
    let mut sectors = Vec::new();
    for step in 0..max {
        let side = pair.side(step % 2 == 1);
        if word.len() < 2 || side.admissible_sectors(&word).len() != 1 {
            break;
        }
        let (s, normalized) = side.normalize(&word)?;
        sectors.push(s);
        word = side.derive(&normalized)?;
    }
    Ok(sectors)
}

fn join(w: &[u32]) -> String {
    w.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    Ok(canonical_json(v)?)
}

fn run(cli: Cli) -> Outcome {
    let (m, n) = (cli.m, cli.n);
    let sink = Sink {
        out: cli.out.clone(),
    };
    let tag = format!("{m}_{n}");
    match cli.command {
        Command::Surface { svg } => {
            let s = build_surface(SurfaceParams::new(m, n)?)?;
            let want_svg = svg || cli.format == Format::Svg;
            if sink.out.is_some() || !want_svg {
                sink.emit(&format!("surface_{tag}"), "json", &json(&s)?)?;
            }
            if want_svg {
                sink.emit(&format!("surface_{tag}"), "svg", &surface_svg(&s, &[]))?;
            }
        }
        Command::Trace {
            theta,
            start,
            crossings,
        } => {
            let s = build_surface(SurfaceParams::new(m, n)?)?;
            let w = match start {
                Some(st) => {
                    let (p, v) = parse_start(&st)?;
                    trace(&s, p, v, theta, crossings)?
                }
                None => trace_seeded(&s, theta, crossings, cli.seed)?,
            };
            match cli.format {
                Format::Json => sink.emit(&format!("trace_{tag}"), "json", &json(&w)?)?,
                Format::Svg => sink.emit(&format!("trace_{tag}"), "svg", &surface_svg(&s, &[w]))?,
                _ => sink.emit(
                    &format!("trace_{tag}"),
                    "txt",
                    &format!("{}\n", join(&w.labels)),
                )?,
            }
        }
        Command::Derive {
            word,
            depth,
            window,
        } => {
            let pair = DualPair::new(m, n)?;
            let mut w = parse_labels(&word)?;
            let mut sectors = Vec::new();
            let mut words = vec![w.clone()];
            for step in 0..depth {
                let side = pair.side(step % 2 == 1);
                let (s, normalized) = side.normalize(&w)?;
                sectors.push(s);
                w = if window {
                    side.derive(&normalized)?
                } else {
                    side.derive_cyclic(&normalized)?
                };
                words.push(w.clone());
            }
            match cli.format {
                Format::Json => sink.emit(
                    &format!("derive_{tag}"),
                    "json",
                    &json(&json!({"sectors": sectors, "words": words}))?,
                )?,
                _ => sink.emit(&format!("derive_{tag}"), "txt", &format!("{}\n", join(&w)))?,
            }
        }
        Command::Generate { i, word } => {
            let w = generate(m, n, i, &parse_labels(&word)?)?;
            match cli.format {
                Format::Json => sink.emit(
                    &format!("generate_{tag}"),
                    "json",
                    &json(&json!({"sector": i, "word": w}))?,
                )?,
                _ => sink.emit(
                    &format!("generate_{tag}"),
                    "txt",
                    &format!("{}\n", join(&w)),
                )?,
            }
        }
        Command::Subst { i, j, table, word } => {
            let sigma = substitution(m, n, i, j)?;
            let name = format!("subst_{tag}_{i}{j}");
            if let Some(word) = word {
                let w = parse_arrow_word(&word.replace(',', " "))?;
                sink.emit(
                    &name,
                    "txt",
                    &format!("{}\n", format_arrow_word(&sigma.apply(&w))),
                )?;
            } else if table || cli.format == Format::Json {
                let map: std::collections::BTreeMap<String, String> = sigma
                    .images
                    .iter()
                    .map(|(a, img)| (a.to_string(), format_arrow_word(img)))
                    .collect();
                if cli.format == Format::Json {
                    sink.emit(&name, "json", &json(&map)?)?;
                } else {
                    let mut keys: Vec<_> = sigma.images.keys().collect();
                    keys.sort();
                    let text: String = keys
                        .iter()
                        .map(|a| format!("{a} -> {}\n", format_arrow_word(&sigma.images[*a])))
                        .collect();
                    sink.emit(&name, "txt", &text)?;
                }
            } else {
                return Err(Failure::Usage("subst needs --table or --word".into()));
            }
        }
        Command::Farey { samples } => {
            let map = FareyMap::new(m, n)?;
            match cli.format {
                Format::Svg => {
                    sink.emit(&format!("farey_{tag}"), "svg", &farey_svg(&map, samples))?
                }
                _ => sink.emit(&format!("farey_{tag}"), "json", &json(&map)?)?,
            }
        }
        Command::Recognize {
            itinerary,
            word,
            depth,
            tol,
        } => {
            let (b0, pairs) = match (itinerary, word) {
                (Some(it), None) => {
                    let v = parse_labels(&it)?;
                    if v.len() < 3 || v.len() % 2 == 0 {
                        return Err(Failure::Usage(
                            "itinerary must be b0 followed by pairs a,b".into(),
                        ));
                    }
                    let pairs: Vec<(usize, usize)> = v[1..]
                        .chunks_exact(2)
                        .map(|c| (c[0] as usize, c[1] as usize))
                        .collect();
                    (v[0] as usize, pairs)
                }
                (None, Some(w)) => {
                    let pair = DualPair::new(m, n)?;
                    let sectors = unambiguous_sectors(&pair, &parse_labels(&w)?, 2 * depth + 1)?;
                    if sectors.len() < 3 {
                        return Err(Failure::Check(
                            "word too short to fix a single itinerary pair".into(),
                        ));
                    }
                    let pairs: Vec<(usize, usize)> =
                        sectors[1..].chunks_exact(2).map(|c| (c[0], c[1])).collect();
                    (sectors[0], pairs)
                }
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --itinerary or --word".into(),
                    ))
                }
            };
            let theta = direction_from_itinerary(m, n, b0, &pairs, 2.0 * tol)?;
            let text = match cli.format {
                Format::Json => json(&json!({"b0": b0, "pairs": pairs, "theta": theta}))?,
                _ => format!("{}\n", round_sig(theta)),
            };
            sink.emit(
                &format!("recognize_{tag}"),
                if cli.format == Format::Json {
                    "json"
                } else {
                    "txt"
                },
                &text,
            )?;
        }
        Command::Diagrams { i } => {
            SurfaceParams::renormalizable(m, n)?;
            if i >= n {
                return Err(Failure::Usage(format!("sector {i} out of range 0..{n}")));
            }
            sink.emit(
                &format!("t{i}_{tag}"),
                "dot",
                &transition_dot(&build_ti(m, n, i)),
            )?;
            sink.emit(
                &format!("d0_{tag}"),
                "dot",
                &derivation_dot(&build_d0(m, n)),
            )?;
            sink.emit(
                &format!("hooper_{tag}"),
                "dot",
                &hooper_dot(&build_augmented(m, n)?),
            )?;
        }
        Command::Verify {
            all_small,
            trials,
            tol,
        } => {
            let mut cfg = VerifyConfig {
                seed: cli.seed,
                ..VerifyConfig::default()
            };
            cfg.surfaces = if all_small {
                SMALL_SET.to_vec()
            } else {
                vec![(m, n)]
            };
            SurfaceParams::renormalizable(m, n)?;
            if let Some(t) = trials {
                if t == 0 {
                    return Err(Failure::Usage("trials must be at least 1".into()));
                }
                cfg.trials = t;
            }
            if let Some(t) = tol {
                if t.is_nan() || t <= 0.0 {
                    return Err(Failure::Usage("tolerance must be positive".into()));
                }
                cfg.recognition_tol = t;
            }
            let report = run_all(&cfg)?;
            for c in &report.checks {
                eprintln!("{}", c.line());
            }
            sink.emit("report", "json", &json(&report)?)?;
            if !report.passed {
                return Err(Failure::Check("some checks failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
