//! `fatflow` command-line front end.
//!
//! Output is assembled in memory and written only when the command succeeds,
//! so a failing command never leaves partial results on stdout.

mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fatflow::dsl::{self, FlowExpr, SelectorTable};
use fatflow::enumerate::enumerate_upto;
use fatflow::order::{self, commuting_steps, saddle_poset};
use fatflow::render::{self, DiagramDoc};
use fatflow::{identify, BasicHandleKind, FatHandle, FlowModel, OrbitIndex, Polarity};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "fatflow",
    version,
    about = "Fat round handle calculus for NMS flows on S³",
    after_help = "Enumeration is bounded at 6 saddles; set FATFLOW_MAX_SADDLES to change the bound."
)]
struct Cli {
    /// Output format; each command accepts a subset.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `bare => explicit` selector entries, read after the built-in table.
    #[arg(long, global = true)]
    selectors: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramArg {
    Hasse,
    Filtration,
    Schematic,
}

#[derive(Subcommand)]
enum Command {
    /// Build a flow from an expression and print its link and construction.
    Build { expr: String },
    /// Build every expression in a file, one per line (`#` starts a comment).
    Batch { file: PathBuf },
    /// Remove one component and report the class of the fat handle left.
    Classify {
        expr: String,
        /// Component selector such as `d2.1` or `h1.0`.
        component: String,
    },
    /// Glue an attractive and a repulsive fat handle.
    ///
    /// A handle is a basic kind (`hdu`, `ddu0`, `ddu2`, `hu`, `du`) taking
    /// the polarity of its position, or `EXPR@COMPONENT`.
    Identify { attractive: String, repulsive: String },
    /// Saddle order of a flow: chains, covers, totality and commuting steps.
    Order { expr: String },
    /// Census of flows up to a saddle count.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Identify each flow with its dual.
        #[arg(long)]
        dualize: bool,
        /// List every flow of the last level instead of the summary table.
        #[arg(long)]
        list: bool,
    },
    /// Draw a Hasse diagram, filtration chain or schematic.
    Render {
        expr: String,
        #[arg(long, value_enum)]
        kind: DiagramArg,
    },
    /// Run a built-in check suite and report each assertion.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

enum Failure {
    /// Bad input to a well-formed command line.
    Usage(String),
    /// A domain error, reported by name.
    Domain { name: &'static str, message: String },
}

macro_rules! domain {
    ($e:expr) => {
        $e.map_err(|e| Failure::Domain {
            name: e.name(),
            message: e.to_string(),
        })
    };
}

type Outcome = Result<String, Failure>;

struct Ctx {
    table: SelectorTable,
    format: Option<Format>,
}

impl Ctx {
    fn format(&self, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(allowed[0]);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Usage(
                "this command does not support the requested --format".into(),
            ))
        }
    }

    fn parse(&self, text: &str) -> Result<FlowExpr, Failure> {
        domain!(self.table.parse(text))
    }

    fn flow(&self, text: &str) -> Result<(FlowExpr, FlowModel), Failure> {
        let e = self.parse(text)?;
        let resolved = domain!(dsl::resolve(&e))?;
        let f = domain!(dsl::elaborate(&resolved))?;
        Ok((resolved, f))
    }
}

fn json_text(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

fn describe(expr: Option<&FlowExpr>, f: &FlowModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "link: {}", f.link_of().shape());
    let _ = writeln!(out, "indexed: {}", fatflow::link::canonicalize(&f.link_of()));
    if let Some(e) = expr {
        let _ = writeln!(out, "expr: {e}");
    }
    let _ = writeln!(out, "canonical: {}", f.canonical());
    let _ = writeln!(out, "construction:");
    for (i, s) in f.construction_log().iter().enumerate() {
        let _ = write!(
            out,
            "  {}. replace o{} by {} -> {} (removed {}, attached {})",
            i + 1,
            s.replaced_orbit.0,
            s.attached.name(),
            f.label(s.new_saddle),
            s.derived_handle_class,
            s.attached_class
        );
        if let Some((a, b)) = s.produced_heteroclinic {
            let _ = write!(out, "; heteroclinic {} -> {}", f.label(a), f.label(b));
        }
        out.push('\n');
    }
    out
}

fn build(ctx: &Ctx, text: &str) -> Outcome {
    let (e, f) = ctx.flow(text)?;
    Ok(match ctx.format(&[Format::Text, Format::Json])? {
        Format::Json => json_text(&f.to_document()),
        _ => describe(Some(&e), &f),
    })
}

fn batch(ctx: &Ctx, file: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let json = ctx.format(&[Format::Text, Format::Json])? == Format::Json;
    let mut out = String::new();
    let mut docs = Vec::new();
    for (line, parsed) in dsl::parse_batch(&text) {
        let e = parsed.and_then(|e| dsl::elaborate(&e));
        let flow = e.map_err(|err| Failure::Domain {
            name: err.name(),
            message: format!("line {line}: {err}"),
        })?;
        if json {
            docs.push(flow.to_document());
        } else {
            let _ = writeln!(out, "{}\t{}", flow.link_of().shape(), flow.canonical());
        }
    }
    Ok(if json { json_text(&docs) } else { out })
}

fn parse_component(text: &str) -> Result<dsl::Component, Failure> {
    domain!(text.parse::<dsl::Component>())
}

fn classify_cmd(ctx: &Ctx, text: &str, comp: &str) -> Outcome {
    let (_, f) = ctx.flow(text)?;
    let k = domain!(dsl::select(&f, parse_component(comp)?))?;
    let h = domain!(f.remove_orbit(k))?;
    Ok(match ctx.format(&[Format::Text, Format::Json])? {
        Format::Json => json_text(&json!({
            "class": h.handle_class().roman(),
            "polarity": h.polarity().to_string(),
            "family": h.name(),
            "saddles": h.saddle_count(),
        })),
        _ => format!(
            "class: {}\npolarity: {}\nfamily: {}\n",
            h.handle_class(),
            h.polarity(),
            h.name()
        ),
    })
}

fn handle(ctx: &Ctx, spec: &str, slot: Polarity) -> Result<FatHandle, Failure> {
    if let Some((expr, comp)) = spec.rsplit_once('@') {
        let (_, f) = ctx.flow(expr)?;
        let k = domain!(dsl::select(&f, parse_component(comp)?))?;
        return domain!(f.remove_orbit(k));
    }
    let kind = match spec.trim() {
        "hdu" => BasicHandleKind::Hdu,
        "ddu0" => BasicHandleKind::Ddu {
            d: OrbitIndex::Repulsive,
        },
        "ddu2" | "ddu" => BasicHandleKind::Ddu {
            d: OrbitIndex::Attractive,
        },
        "hu" => BasicHandleKind::Hu,
        "du" => BasicHandleKind::Du,
        other => return Err(Failure::Usage(format!("unknown handle `{other}`"))),
    };
    Ok(FatHandle::basic(kind, slot))
}

fn identify_cmd(ctx: &Ctx, a: &str, r: &str) -> Outcome {
    let ha = handle(ctx, a, Polarity::Attractive)?;
    let hr = handle(ctx, r, Polarity::Repulsive)?;
    let fmt = ctx.format(&[Format::Text, Format::Json])?;
    let f = domain!(identify(&ha, &hr))?;
    Ok(match fmt {
        Format::Json => json_text(&f.to_document()),
        _ => describe(None, &f),
    })
}

fn order_cmd(ctx: &Ctx, text: &str) -> Outcome {
    let (_, f) = ctx.flow(text)?;
    let p = domain!(saddle_poset(&f))?;
    let commuting = domain!(commuting_steps(&f))?;
    Ok(match ctx.format(&[Format::Text, Format::Json, Format::Dot])? {
        Format::Json => json_text(&json!({
            "poset": p.to_document(),
            "commuting_steps": commuting.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        })),
        Format::Dot => render::hasse_dot(&p).body,
        _ => {
            let mut out = String::new();
            let chains = p.chains_text();
            if chains.is_empty() {
                out.push_str("chains: none\n");
            }
            let sigma = sigma_names(&chains, &p);
            for c in &chains {
                let renamed: Vec<&str> = c.split('<').map(|x| sigma[x].as_str()).collect();
                let _ = writeln!(out, "{c}  ({})", renamed.join("<"));
            }
            let _ = writeln!(out, "total: {} over {} saddles", p.is_total(), p.elements().len());
            let pairs: Vec<String> = commuting.iter().map(|&(i, j)| format!("{},{}", i + 1, j + 1)).collect();
            let _ = writeln!(
                out,
                "commuting steps: {}",
                if pairs.is_empty() {
                    "none".into()
                } else {
                    pairs.join(" ")
                }
            );
            if order::is_f3(&f) {
                let q = domain!(order::f3_poset(&f))?;
                let chain: Vec<&str> = domain!(order::f3_chain(&f))?.into_iter().map(|x| q.label(x)).collect();
                let _ = writeln!(out, "f3 chain: {}", chain.join("<"));
            }
            out
        }
    })
}

/// Saddles renumbered σ1, σ2, … chain by chain, bottom to top, so that
/// printed chains read bottom-up, one chain at a time.
fn sigma_names(chains: &[String], p: &order::SaddlePoset) -> std::collections::HashMap<String, String> {
    let mut names = std::collections::HashMap::new();
    let labels = chains
        .iter()
        .flat_map(|c| c.split('<').map(str::to_string).collect::<Vec<_>>())
        .chain(p.elements().iter().map(|&x| p.label(x).to_string()));
    for l in labels {
        let next = names.len() + 1;
        names.entry(l).or_insert_with(|| format!("σ{next}"));
    }
    names
}

fn enumerate_cmd(ctx: &Ctx, n: usize, dualize: bool, list: bool) -> Outcome {
    let fmt = ctx.format(&[Format::Text, Format::Json])?;
    let levels = domain!(enumerate_upto(n, dualize))?;
    if list {
        let last = levels.last().expect("n ≥ 1");
        return Ok(match fmt {
            Format::Json => json_text(
                &last
                    .flows
                    .iter()
                    .map(|e| {
                        json!({
                            "link": e.link.to_string(),
                            "canonical": e.canonical.to_string(),
                            "classes": {"I": e.removals.class_i, "II": e.removals.class_ii, "III": e.removals.class_iii},
                        })
                    })
                    .collect::<Vec<_>>(),
            ),
            _ => last.to_lines(),
        });
    }
    Ok(match fmt {
        Format::Json => json_text(
            &levels
                .iter()
                .map(|c| {
                    json!({
                        "n": c.n,
                        "dualize": c.dualize,
                        "flows": c.len(),
                        "links": c.links.len(),
                        "collisions": c.collisions.len(),
                        "classes": {"I": c.class_table.class_i, "II": c.class_table.class_ii, "III": c.class_table.class_iii},
                    })
                })
                .collect::<Vec<_>>(),
        ),
        _ => {
            let mut out = format!("{:>2} {:>8} {:>6} {:>10}  handles\n", "n", "flows", "links", "collisions");
            for c in &levels {
                let _ = writeln!(
                    out,
                    "{:>2} {:>8} {:>6} {:>10}  {}",
                    c.n,
                    c.len(),
                    c.links.len(),
                    c.collisions.len(),
                    c.class_table
                );
            }
            out
        }
    })
}

fn render_cmd(ctx: &Ctx, text: &str, kind: DiagramArg) -> Outcome {
    let (_, f) = ctx.flow(text)?;
    let doc: DiagramDoc = match kind {
        DiagramArg::Hasse => render::hasse_dot(&domain!(saddle_poset(&f))?),
        DiagramArg::Filtration => domain!(render::filtration_dot(&f))?,
        DiagramArg::Schematic => domain!(render::schematic_svg(&f))?,
    };
    let native = match doc.kind.extension() {
        "svg" => Format::Svg,
        _ => Format::Dot,
    };
    Ok(match ctx.format(&[native, Format::Json])? {
        Format::Json => json_text(&doc),
        _ => doc.body,
    })
}

fn run(cli: &Cli) -> Outcome {
    let mut table = SelectorTable::builtin();
    if let Some(path) = &cli.selectors {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        domain!(table.extend_from_text(&text))?;
    }
    let ctx = Ctx {
        table,
        format: cli.format,
    };
    match &cli.command {
        Command::Build { expr } => build(&ctx, expr),
        Command::Batch { file } => batch(&ctx, file),
        Command::Classify { expr, component } => classify_cmd(&ctx, expr, component),
        Command::Identify { attractive, repulsive } => identify_cmd(&ctx, attractive, repulsive),
        Command::Order { expr } => order_cmd(&ctx, expr),
        Command::Enumerate { n, dualize, list } => enumerate_cmd(&ctx, *n, *dualize, *list),
        Command::Render { expr, kind } => render_cmd(&ctx, expr, *kind),
        Command::Verify { suite, n } => {
            ctx.format(&[Format::Text])?;
            let report = verify::run(*suite, *n);
            if report.passed() {
                Ok(report.text)
            } else {
                // the report is the diagnosis; it goes to stderr with the failure
                Err(Failure::Domain {
                    name: "Verify",
                    message: report.text.trim_end().to_string(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map(|_| String::new())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => Ok(text),
    });
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain { name, message }) => {
            eprintln!("error[{name}]: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}
