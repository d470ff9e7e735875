//! The `rado` command line.
//!
//! Exit codes: 0 success, 1 a negative answer (not similar, not a front,
//! verification failed, nothing found), 2 bad input, 3 budget exceeded.
//! JSON documents carry `schema_version` and list nodes as bitstrings.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::degrees::{big_ramsey_degree, devlin_count, enumerate_diagonal_types, realize_witness};
use crate::error::{Error, Result};
use crate::node::{max_depth, Node, MAX_DEPTH};
use crate::rado::{build_sr, check_extension_property, decode_graph, graph6, AdjacencyOracle, FiniteGraph};
use crate::ramsey::family::{family_ops, is_front, one_step_front, rank, symbolic_rank, FrontOutcome, NWFamily};
use crate::ramsey::{search_with, verify_certificate, Certificate, Coloring, ExtensionContext, SearchOptions};
use crate::similarity::{are_strongly_similar, canonical_form, is_strongly_diagonal, MarkedSet, SimKind};
use crate::tree::{CodingTree, FiniteApprox};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "rado", version, about = "Coding trees, similarity types and big Ramsey degrees of the Rado graph")]
pub struct Cli {
    #[command(flatten)]
    pub cfg: RunConfig,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Adjacency oracle: bit, seed:<u64>, g6:<graph6> or file:<path>.
    #[arg(long, global = true, default_value = "bit")]
    pub oracle: String,
    /// Cap on node length (defaults to RADO_MAX_DEPTH or 64).
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Full,
    #[value(alias = "order")]
    OrderOnly,
}

impl From<KindArg> for SimKind {
    fn from(k: KindArg) -> SimKind {
        match k {
            KindArg::Full => SimKind::Full,
            KindArg::OrderOnly => SimKind::OrderOnly,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ContextArg {
    /// Extension context JSON.
    #[arg(long, conflicts_with = "worked")]
    pub context: Option<String>,
    /// Use the context A = {⟨⟩}, B = A⁺, k = 1 in the oracle's tree.
    #[arg(long)]
    pub worked: bool,
    /// Ambient depth for --worked.
    #[arg(long, default_value_t = 16)]
    pub ambient_depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// r_k of the oracle's coding tree.
    BuildTree {
        #[arg(long)]
        depth: usize,
    },
    /// Graph coded by a tree (JSON from build-tree, file or stdin).
    Decode {
        #[arg(long, default_value = "-")]
        tree: String,
    },
    /// Canonical form of a meet-closed set.
    Canon {
        /// Comma-separated bitstrings; `e` is the empty node.
        #[arg(long)]
        nodes: String,
        #[arg(long, default_value = "")]
        coding: String,
        #[arg(long, visible_alias = "mode", value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
    },
    /// Strong similarity of two meet-closed sets.
    Similar {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        a_coding: String,
        #[arg(long, default_value = "")]
        b_coding: String,
        #[arg(long, visible_alias = "mode", value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
    },
    /// Whether an antichain is strongly diagonal.
    Diagonal {
        #[arg(long)]
        nodes: String,
    },
    /// Diagonal similarity types of antichains of size n.
    Types {
        #[arg(long)]
        n: usize,
        #[arg(long, visible_alias = "mode", value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
        #[arg(long, visible_alias = "witness")]
        witnesses: bool,
    },
    /// Big Ramsey degree of a finite graph.
    Degrees {
        /// name:K3, g6:<graph6>, file:<path> or bare graph6.
        #[arg(long)]
        graph: String,
        /// Break the count down by ordered copies.
        #[arg(long)]
        ordered: bool,
    },
    /// Number of order-only diagonal types of size n.
    Devlin {
        #[arg(long)]
        n: usize,
    },
    /// A realization of an antichain's type among the oracle's coding nodes.
    Witness {
        #[arg(long)]
        nodes: String,
        #[arg(long, visible_alias = "mode", value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Search all of 2^{<depth} instead of the coding nodes.
        #[arg(long)]
        free: bool,
    },
    /// Front test of a family on [B,T]* (the one-step front when no family is given).
    Fronts {
        #[command(flatten)]
        ctx: ContextArg,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Order type of a family under ≺, or of r_{k+n}[B,𝕊].
    Rank {
        #[arg(long, required_unless_present = "symbolic")]
        family: Option<String>,
        #[arg(long)]
        symbolic: Option<u32>,
        /// Also report ℱ_B and ℱ̃ for this node set.
        #[arg(long)]
        b: Option<String>,
    },
    /// Search for a monochromatic chain.
    HlSearch {
        #[command(flatten)]
        ctx: ContextArg,
        #[arg(long)]
        coloring: String,
        #[arg(long, default_value_t = 2)]
        targets: usize,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Count only levels that carry extensions.
        #[arg(long)]
        active_levels: bool,
        #[arg(long, default_value_t = SearchOptions::default().visit_cap)]
        visit_cap: u64,
    },
    /// Recheck a certificate against a coloring.
    Verify {
        #[arg(long)]
        certificate: String,
        #[arg(long)]
        coloring: String,
    },
}

/// Primary output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => 3,
        _ => 2,
    }
}

/// Parses arguments and runs; errors become exit codes with a message on stderr.
pub fn main_with(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => match write_output(&cli.cfg, &out.body) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_output(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => Ok(std::fs::write(path, body)?),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Runs a parsed command inside a pool of `--workers` threads.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    if cli.cfg.workers == 0 {
        return Err(Error::Parse("--workers must be at least 1".into()));
    }
    if let Some(d) = cli.cfg.max_depth {
        if d > max_depth() {
            return Err(Error::Depth(format!("--max-depth {d} exceeds {}", max_depth())));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.cfg.workers)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| dispatch(&cli.cfg, &cli.cmd))
}

struct Doc {
    json: Value,
    text: String,
    dot: Option<String>,
    code: i32,
}

impl Doc {
    fn ok(json: Value, text: String) -> Doc {
        Doc {
            json,
            text,
            dot: None,
            code: 0,
        }
    }

    fn code(mut self, code: i32) -> Doc {
        self.code = code;
        self
    }
}

fn dispatch(cfg: &RunConfig, cmd: &Command) -> Result<Outcome> {
    let doc = run(cfg, cmd)?;
    let body = match cfg.format {
        Format::Json => {
            let mut v = json!({ "schema_version": SCHEMA_VERSION });
            if let (Value::Object(head), Value::Object(rest)) = (&mut v, doc.json) {
                head.extend(rest);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => doc.text,
        Format::Dot => doc
            .dot
            .ok_or_else(|| Error::Parse("this command has no DOT output".into()))?,
    };
    Ok(Outcome { body, code: doc.code })
}

fn depth_cap(cfg: &RunConfig) -> usize {
    cfg.max_depth.unwrap_or_else(max_depth).min(MAX_DEPTH)
}

fn oracle(cfg: &RunConfig) -> Result<AdjacencyOracle> {
    AdjacencyOracle::parse_spec(&cfg.oracle)
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

/// Comma-separated bitstrings; `e`, `<>` or an empty item is the empty node.
pub fn parse_nodes(s: &str) -> Result<Vec<Node>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim() {
            "e" | "<>" | "⟨⟩" => Ok(Node::EMPTY),
            t => t.parse(),
        })
        .collect()
}

/// `name:K3`, `g6:<graph6>`, `file:<path>` or bare graph6.
pub fn parse_graph(spec: &str) -> Result<FiniteGraph> {
    if let Some(n) = spec.strip_prefix("name:") {
        FiniteGraph::named(n)
    } else if let Some(g) = spec.strip_prefix("g6:") {
        graph6::decode(g)
    } else if let Some(path) = spec.strip_prefix("file:") {
        graph6::decode(read_input(path)?.trim())
    } else {
        graph6::decode(spec)
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// Accepts a bare document or one wrapped under `key` (as our own outputs are).
fn unwrap_key<T: serde::de::DeserializeOwned>(v: Value, key: &str) -> Result<T> {
    let inner = match v {
        Value::Object(mut m) if m.contains_key(key) => m.remove(key).expect("checked"),
        v => v,
    };
    Ok(serde_json::from_value(inner)?)
}

fn load_context(cfg: &RunConfig, c: &ContextArg) -> Result<ExtensionContext> {
    if c.worked {
        return ExtensionContext::worked(oracle(cfg)?, c.ambient_depth.min(depth_cap(cfg)));
    }
    let path = c
        .context
        .as_deref()
        .ok_or_else(|| Error::Parse("give --context <file> or --worked".into()))?;
    let ctx: ExtensionContext = unwrap_key(read_json(path)?, "context")?;
    ctx.validate()?;
    Ok(ctx)
}

fn marked(nodes: &str, coding: &str) -> Result<MarkedSet> {
    Ok(MarkedSet::new(parse_nodes(nodes)?).with_coding(parse_nodes(coding)?))
}

fn run(cfg: &RunConfig, cmd: &Command) -> Result<Doc> {
    match cmd {
        Command::BuildTree { depth } => {
            let depth = *depth;
            if depth > depth_cap(cfg) {
                return Err(Error::Depth(format!("depth {depth} exceeds the maximum {}", depth_cap(cfg))));
            }
            let o = oracle(cfg)?;
            if matches!(o, AdjacencyOracle::SeededRandom(_)) && depth > 0 {
                // a seeded oracle only stands in for the Rado graph if its
                // small extension instances are witnessed below `depth`
                let size = if depth >= 24 { 2 } else { 1 };
                let audit = check_extension_property(&o, depth, depth.min(6), size)?;
                if !audit.holds() {
                    return Err(Error::Structure(format!(
                        "oracle {o} fails {} extension instances below depth {depth}",
                        audit.failure_count
                    )));
                }
            }
            let tree = build_sr(&o, depth)?;
            let mut text = String::new();
            for &l in tree.levels() {
                let row: Vec<String> = tree
                    .level_nodes(l)
                    .map(|t| {
                        let s = if t.is_empty() { "e".to_string() } else { t.to_string() };
                        if tree.is_coding(t) {
                            format!("[{s}]")
                        } else {
                            s
                        }
                    })
                    .collect();
                let _ = writeln!(text, "{l}: {}", row.join(" "));
            }
            let mut doc = Doc::ok(json!({ "oracle": o.to_string(), "depth": depth, "tree": to_value(&tree)? }), text);
            doc.dot = Some(tree.to_dot());
            Ok(doc)
        }
        Command::Decode { tree } => {
            let t: CodingTree = unwrap_key(read_json(tree)?, "tree")?;
            let g = decode_graph(&t);
            let g6 = graph6::encode(&g);
            Ok(Doc::ok(
                json!({ "n": g.n(), "graph6": g6, "edges": g.edges() }),
                format!("{g6}\n"),
            ))
        }
        Command::Canon { nodes, coding, kind } => {
            let set = marked(nodes, coding)?;
            let form = canonical_form(&set, (*kind).into())?;
            let digest = form.digest().to_string();
            Ok(Doc::ok(json!({ "digest": digest, "form": to_value(&form)? }), format!("{digest}\n")))
        }
        Command::Similar {
            a,
            b,
            a_coding,
            b_coding,
            kind,
        } => {
            let kind: SimKind = (*kind).into();
            let (sa, sb) = (marked(a, a_coding)?, marked(b, b_coding)?);
            let similar = are_strongly_similar(&sa, &sb, kind)?;
            let da = canonical_form(&sa, kind)?.digest().to_string();
            let db = canonical_form(&sb, kind)?.digest().to_string();
            Ok(Doc::ok(json!({ "similar": similar, "digests": [da, db] }), format!("{similar}\n")).code(i32::from(!similar)))
        }
        Command::Diagonal { nodes } => {
            let set: BTreeSet<Node> = parse_nodes(nodes)?.into_iter().collect();
            let diagonal = is_strongly_diagonal(&set)?;
            Ok(Doc::ok(json!({ "diagonal": diagonal }), format!("{diagonal}\n")).code(i32::from(!diagonal)))
        }
        Command::Types { n, kind, witnesses } => {
            let cat = enumerate_diagonal_types(*n, (*kind).into())?;
            let digests: Vec<String> = cat.entries.keys().map(ToString::to_string).collect();
            let mut v = json!({ "n": n, "kind": to_value(&SimKind::from(*kind))?, "count": cat.len(), "digests": digests });
            if *witnesses {
                let w: serde_json::Map<String, Value> = cat
                    .entries
                    .iter()
                    .map(|(d, e)| Ok((d.to_string(), to_value(&e.witness)?)))
                    .collect::<Result<_>>()?;
                v["witnesses"] = Value::Object(w);
            }
            Ok(Doc::ok(v, format!("{}\n", cat.len())))
        }
        Command::Degrees { graph, ordered } => {
            let g = parse_graph(graph)?;
            let r = big_ramsey_degree(&g)?;
            let mut v = json!({ "graph6": graph6::encode(&g), "count": r.count });
            if *ordered {
                v["ordered"] = to_value(&r.ordered)?;
            }
            Ok(Doc::ok(v, format!("{}\n", r.count)))
        }
        Command::Devlin { n } => {
            let c = devlin_count(*n)?;
            Ok(Doc::ok(json!({ "n": n, "count": c }), format!("{c}\n")))
        }
        Command::Witness { nodes, kind, depth, free } => {
            let set: BTreeSet<Node> = parse_nodes(nodes)?.into_iter().collect();
            if !is_strongly_diagonal(&set)? {
                return Err(Error::Structure("witness needs a strongly diagonal antichain".into()));
            }
            let form = canonical_form(&MarkedSet::antichain(&set), (*kind).into())?;
            let depth = (*depth).min(depth_cap(cfg));
            let o = oracle(cfg)?;
            let w = realize_witness(&form, if *free { None } else { Some(&o) }, depth)?;
            let text = match &w {
                Some(v) => format!("{}\n", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
                None => "none\n".into(),
            };
            let found = w.is_some();
            Ok(Doc::ok(json!({ "digest": form.digest().to_string(), "witness": to_value(&w)? }), text).code(i32::from(!found)))
        }
        Command::Fronts { ctx, family, depth } => {
            let c = load_context(cfg, ctx)?;
            let depth = (*depth).min(depth_cap(cfg));
            let fam = match family {
                Some(p) => unwrap_key::<NWFamily>(read_json(p)?, "family")?,
                None => one_step_front(&c, depth)?,
            };
            let out = is_front(&fam, &c, depth)?;
            let code = match out {
                FrontOutcome::Front => 0,
                FrontOutcome::NotFront(_) => 1,
                FrontOutcome::Undecided(_) => 3,
            };
            let label = match &out {
                FrontOutcome::Front => "front".to_string(),
                FrontOutcome::NotFront(r) => format!("not a front: {r}"),
                FrontOutcome::Undecided(r) => format!("undecided: {r}"),
            };
            let mut v = json!({ "depth": depth, "members": fam.len(), "outcome": to_value(&out)? });
            if family.is_none() {
                v["family"] = to_value(&fam)?;
            }
            Ok(Doc::ok(v, format!("{label}\n")).code(code))
        }
        Command::Rank { family, symbolic, b } => {
            if let Some(n) = symbolic {
                let r = symbolic_rank(&FiniteApprox::assume(CodingTree::empty()), *n);
                return Ok(Doc::ok(json!({ "rank": r.to_string(), "cnf": to_value(&r)? }), format!("{r}\n")));
            }
            let path = family.as_deref().expect("clap requires --family without --symbolic");
            let fam: NWFamily = unwrap_key(read_json(path)?, "family")?;
            let r = rank(&fam);
            let mut v = json!({ "members": fam.len(), "rank": r.to_string(), "cnf": to_value(&r)? });
            let mut text = format!("{r}\n");
            if let Some(b) = b {
                let nodes: BTreeSet<Node> = parse_nodes(b)?.into_iter().collect();
                let o = oracle(cfg)?;
                let space = crate::ramsey::Space::rado(o, depth_cap(cfg))?;
                let ops = family_ops(&fam, &nodes, &space)?;
                let rb = rank(&NWFamily::new(ops.over_b.clone())?);
                v["over_b"] = json!({ "members": ops.over_b.len(), "rank": rb.to_string() });
                v["closure_size"] = json!(ops.closure.len());
                let _ = writeln!(text, "over B: {rb}");
            }
            Ok(Doc::ok(v, text))
        }
        Command::HlSearch {
            ctx,
            coloring,
            targets,
            budget,
            active_levels,
            visit_cap,
        } => {
            let c = load_context(cfg, ctx)?;
            let h = Coloring::parse_spec(coloring)?;
            let opts = SearchOptions {
                visit_cap: *visit_cap,
                active_only: *active_levels,
            };
            let out = search_with(&c, &h, *targets, (*budget).min(depth_cap(cfg)), &opts)?;
            let (code, text) = match &out.certificate {
                Some(cert) => (0, format!("color {} levels {:?}\n", cert.color, cert.last().levels())),
                None if out.exhausted => (3, "none (visit cap reached)\n".to_string()),
                None => (1, "none\n".to_string()),
            };
            Ok(Doc::ok(
                json!({
                    "coloring": h.to_string(),
                    "visits": out.visits,
                    "exhausted": out.exhausted,
                    "certificate": to_value(&out.certificate)?,
                }),
                text,
            )
            .code(code))
        }
        Command::Verify { certificate, coloring } => {
            let cert: Certificate = unwrap_key(read_json(certificate)?, "certificate")?;
            let h = Coloring::parse_spec(coloring)?;
            let v = verify_certificate(&cert, &h);
            let text = if v.valid {
                "valid\n".to_string()
            } else {
                format!("invalid\n{}\n", v.diagnosis.join("\n"))
            };
            Ok(Doc::ok(to_value(&v)?, text).code(i32::from(!v.valid)))
        }
    }
}
