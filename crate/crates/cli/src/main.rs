use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use asymcol_core::colouring::{
    distinguishing_number, exact_asymmetric_colouring, random_motion_colouring, Colouring,
};
use asymcol_core::graph::{automorphism_group_with, graph_distinguishing_number, parse_graph};
use asymcol_core::infinite::{
    interleave_construct, verify_truncation, BallTruncation, CosetBudget, Family,
    VerificationRoute, VertexName, WindowColouring,
};
use asymcol_core::{parse_generators, Error, DEFAULT_ENUMERATION_CAP};

/// Asymmetric 2-colourings of permutation groups: motion, distinguishing
/// numbers, automorphism groups, and coloured windows into infinite
/// families.
#[derive(Parser)]
#[command(name = "asymcol", version, max_term_width = 100)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on enumerated group elements and search results.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Motion (minimal degree) of a permutation group: the least support
    /// size over non-identity elements.
    Motion {
        /// Generator file: first line `degree k`, then k lines of images.
        #[arg(long)]
        group: PathBuf,
    },
    /// Least number of colours admitting a colouring preserved by no
    /// non-identity element.
    Distinguish {
        #[command(flatten)]
        source: GroupOrGraph,
    },
    /// Automorphism group of a graph.
    Aut {
        /// Graph file: first line `n m`, then m edge lines.
        #[arg(long)]
        graph: PathBuf,
        /// Largest vertex count the search accepts.
        #[arg(long, default_value_t = asymcol_core::graph::DEFAULT_VERTEX_LIMIT)]
        vertex_limit: usize,
    },
    /// Find an asymmetric colouring of a permutation group.
    ColourGroup {
        /// Generator file, as for `motion`.
        #[arg(long)]
        group: PathBuf,
        /// Number of colours for the exact search.
        #[arg(long, default_value_t = 2, conflicts_with = "random")]
        k: usize,
        /// Draw seeded uniform 2-colourings instead of searching exactly.
        #[arg(long)]
        random: bool,
        /// Give up after this many random draws.
        #[arg(long, default_value_t = 64, requires = "random")]
        tries: u32,
    },
    /// Coloured windows into the built-in infinite families.
    #[command(subcommand)]
    Infinite(InfiniteCommand),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupOrGraph {
    /// Generator file for a permutation group.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Graph file; its automorphism group is used.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum InfiniteCommand {
    /// Build an asymmetric 2-colouring of a radius-R window.
    Colour {
        /// Family: `path`, `tree:<d>` (3 <= d <= 9), or `grid:2`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        radius: usize,
        /// Extendability margin: symmetries must extend this many layers
        /// beyond the window, and verification reaches radius - margin.
        #[arg(long, default_value_t = 2)]
        margin: usize,
        /// Base vertices, semicolon-separated canonical names
        /// (default: the family root).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// `auto` services targets greedily; an integer demands exactly
        /// that many.
        #[arg(long, default_value = "auto")]
        budget: String,
        /// Where to write the colouring file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a colouring file against its window.
    Verify {
        /// Family override; defaults to the file's.
        #[arg(long)]
        family: Option<String>,
        /// Radius override; defaults to the file's.
        #[arg(long)]
        radius: Option<usize>,
        /// Margin override; defaults to the file's.
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        colouring: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = !matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if usage { ExitCode::from(3) } else { OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_exhaustion() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

const OK: ExitCode = ExitCode::SUCCESS;

/// Verification failed or no colouring exists.
fn unsat() -> ExitCode {
    ExitCode::from(1)
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        detail: format!("cannot read {}: {e}", path.display()),
    })
}

fn colour_list(c: &Colouring) -> Vec<u32> {
    c.colours().iter().map(|c| c.unwrap()).collect()
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("{text}");
    }
}

fn parse_base(t: &BallTruncation, spec: &Option<String>) -> Result<BTreeSet<usize>, Error> {
    let Some(spec) = spec else {
        return Ok(BTreeSet::from([0usize]));
    };
    let mut base = BTreeSet::new();
    for name in spec.split(';') {
        let v = VertexName::parse(t.family(), name.trim())?;
        let idx = t.index_of(&v).ok_or_else(|| Error::InvalidBase {
            detail: format!("vertex {name:?} lies outside the window"),
        })?;
        base.insert(idx);
    }
    Ok(base)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Motion { group } => {
            let g = parse_generators(&read(group)?)?;
            let g = asymcol_core::PermGroup::with_cap(g.degree(), g.generators().to_vec(), cli.cap)?;
            let motion = g.motion()?;
            let text = match motion {
                Some(m) => m.to_string(),
                None => "infinite".into(),
            };
            emit(
                cli.json,
                json!({
                    "command": "motion",
                    "degree": g.degree(),
                    "order": g.order()?,
                    "motion": motion,
                }),
                text,
            );
            Ok(OK)
        }
        Command::Distinguish { source } => {
            let (d, label) = match (&source.group, &source.graph) {
                (Some(path), None) => {
                    let g = parse_generators(&read(path)?)?;
                    (distinguishing_number(&g)?, "group")
                }
                (None, Some(path)) => {
                    let g = parse_graph(&read(path)?)?;
                    (graph_distinguishing_number(&g)?, "graph")
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            emit(
                cli.json,
                json!({
                    "command": "distinguish",
                    "source": label,
                    "distinguishing_number": d,
                }),
                d.to_string(),
            );
            Ok(OK)
        }
        Command::Aut {
            graph,
            vertex_limit,
        } => {
            let g = parse_graph(&read(graph)?)?;
            let aut = automorphism_group_with(&g, *vertex_limit, cli.cap)?;
            let order = aut.group.order()?;
            emit(
                cli.json,
                json!({
                    "command": "aut",
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "order": order,
                    "nodes_explored": aut.node_count_explored,
                }),
                format!("order {order}"),
            );
            Ok(OK)
        }
        Command::ColourGroup {
            group,
            k,
            random,
            tries,
        } => {
            let g = parse_generators(&read(group)?)?;
            let g = asymcol_core::PermGroup::with_cap(g.degree(), g.generators().to_vec(), cli.cap)?;
            if *random {
                match random_motion_colouring(&g, cli.seed, *tries)? {
                    Some((c, t)) => {
                        let colours = colour_list(&c);
                        let text = colours
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        emit(
                            cli.json,
                            json!({
                                "command": "colour-group",
                                "mode": "random",
                                "seed": cli.seed,
                                "try": t,
                                "colours": colours,
                            }),
                            text,
                        );
                        Ok(OK)
                    }
                    None => {
                        eprintln!("no asymmetric colouring found in {tries} draws");
                        Ok(unsat())
                    }
                }
            } else {
                match exact_asymmetric_colouring(&g, *k)? {
                    Some(c) => {
                        let colours = colour_list(&c);
                        let text = colours
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        emit(
                            cli.json,
                            json!({
                                "command": "colour-group",
                                "mode": "exact",
                                "k": k,
                                "colours": colours,
                            }),
                            text,
                        );
                        Ok(OK)
                    }
                    None => {
                        eprintln!("no asymmetric {k}-colouring exists");
                        Ok(unsat())
                    }
                }
            }
        }
        Command::Infinite(InfiniteCommand::Colour {
            family,
            radius,
            margin,
            base,
            budget,
            out,
        }) => {
            let family = Family::parse(family)?;
            let t = BallTruncation::build(family, *radius, *margin)?;
            let base = parse_base(&t, base)?;
            let budget = match budget.as_str() {
                "auto" => CosetBudget::Auto,
                n => CosetBudget::Exactly(n.parse().map_err(|_| Error::BadArgument {
                    detail: format!("budget must be `auto` or an integer, got {n:?}"),
                })?),
            };
            let outcome = interleave_construct(&t, &base, budget, cli.cap)?;
            let body = serde_json::to_string_pretty(&outcome.window).unwrap();
            fs::write(out, body + "\n").map_err(|e| Error::Io {
                detail: format!("cannot write {}: {e}", out.display()),
            })?;
            emit(
                cli.json,
                json!({
                    "command": "infinite colour",
                    "family": family.spec_string(),
                    "radius": radius,
                    "margin": margin,
                    "window_size": t.len(),
                    "serviced": outcome.serviced,
                    "stopped": outcome.stopped,
                    "out": out.display().to_string(),
                }),
                format!(
                    "serviced {} coset targets over {} vertices{}",
                    outcome.serviced,
                    t.len(),
                    match &outcome.stopped {
                        Some(reason) => format!(" (stopped: {reason})"),
                        None => String::new(),
                    }
                ),
            );
            Ok(OK)
        }
        Command::Infinite(InfiniteCommand::Verify {
            family,
            radius,
            margin,
            colouring,
        }) => {
            let wc: WindowColouring =
                serde_json::from_str(&read(colouring)?).map_err(|e| Error::BadColouringFile {
                    detail: format!("cannot parse {}: {e}", colouring.display()),
                })?;
            let family = match family {
                Some(spec) => Family::parse(spec)?,
                None => Family::parse(&wc.family)?,
            };
            let t = BallTruncation::build(
                family,
                radius.unwrap_or(wc.radius),
                margin.unwrap_or(wc.margin),
            )?;
            let verdict = verify_truncation(&t, &wc, cli.cap)?;
            let ok = verdict.asymmetric() && verdict.plan_sound();
            let route = match verdict.route {
                VerificationRoute::Exhaustive => "exhaustive",
                VerificationRoute::Structural => "structural",
                VerificationRoute::Both => "both",
            };
            let violator = verdict.violator.as_ref().map(|g| g.to_string());
            let witness = verdict
                .structural_witness
                .as_ref()
                .map(|w| json!({"parent": w.parent, "child_a": w.child_a, "child_b": w.child_b}));
            let failed_cosets: Vec<usize> = verdict
                .coset_checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| c.k)
                .collect();
            emit(
                cli.json,
                json!({
                    "command": "infinite verify",
                    "asymmetric": verdict.asymmetric(),
                    "plan_sound": verdict.plan_sound(),
                    "route": route,
                    "checked_elements": verdict.checked_elements,
                    "exempt_elements": verdict.exempt_elements,
                    "coset_checks": verdict.coset_checks.len(),
                    "failed_cosets": failed_cosets,
                    "plan_issues": verdict.plan_issues,
                    "violator": violator,
                    "structural_witness": witness,
                }),
                if ok {
                    format!(
                        "asymmetric: {} elements checked ({} exempt), {} coset records audited, route {route}",
                        verdict.checked_elements,
                        verdict.exempt_elements,
                        verdict.coset_checks.len(),
                    )
                } else if let Some(g) = &verdict.violator {
                    format!("NOT asymmetric: colour-preserving symmetry {g}")
                } else if !verdict.plan_sound() {
                    format!(
                        "plan audit failed: {} issues, {} bad coset records",
                        verdict.plan_issues.len(),
                        verdict.coset_checks.iter().filter(|c| !c.ok).count(),
                    )
                } else {
                    "NOT asymmetric: structural witness found".into()
                },
            );
            Ok(if ok { OK } else { unsat() })
        }
    }
}
