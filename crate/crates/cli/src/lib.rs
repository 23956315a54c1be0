//! The `superyang` command line: root systems, groupoid orbits, classical and
//! Yangian reflection checks, certificate replay.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use superyang::groupoid::{orbit, shortest_path, DEFAULT_ORBIT_BOUND};
use superyang::liesuper::{self, RelationStatus, Report};
use superyang::presentations::{map_from_id, quantum_reflection, resolve_signs, GeneratorMap, MapStatus};
use superyang::rewrite::{substitute_with, Bounds, Certificate, Verifier, DEFAULT_STEP_CEILING};
use superyang::rootspace::{build_system, cartan_matrix, dynkin, roots_json, DiagramFormat, SimpleRootSystem};

use config::{max_degree_from_env, parse_config, OutputFormat, Partial, RunConfig};
use report::emit_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "superyang", version, about = "Root systems, Weyl groupoids and reflection checks for super Yangians of type A")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simple roots, Cartan matrix and Dynkin diagram.
    Roots(Common),
    /// Orbit graph of the Weyl groupoid, or a shortest reflection word.
    Groupoid {
        #[command(flatten)]
        common: Common,
        /// Emit the whole orbit (default when --to is absent).
        #[arg(long)]
        orbit: bool,
        /// Target parity word for a shortest path.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BOUND)]
        bound: usize,
    },
    /// Chevalley-Serre relations on the matrix realization, or the reflection at --node.
    VerifyClassical {
        #[command(flatten)]
        common: Common,
        /// Flip one resolved sign parameter before checking.
        #[arg(long)]
        flip: Option<usize>,
    },
    /// Images of the minimalistic relations under the reflection map at --node.
    VerifyYangian {
        #[command(flatten)]
        common: Common,
        /// Include the derivation d (affine only).
        #[arg(long)]
        with_d: bool,
        /// Flip one resolved sign parameter before checking.
        #[arg(long)]
        flip: Option<usize>,
    },
    /// Re-run the reductions recorded in a certificate file.
    Replay {
        #[arg(long, value_name = "FILE")]
        replay: PathBuf,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub affine: bool,
    #[arg(long)]
    pub node: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long)]
    pub loop_window: Option<i64>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `key = value` file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Outcome {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("usage error: {}\n", msg.into()) }
    }

    fn error(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_FAILED, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text, EXIT_OK)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

fn resolve_config(c: &Common) -> Result<RunConfig, String> {
    let file = match &c.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e))?;
            parse_config(&text).map_err(|e| format!("{}: {}", p.display(), e))?
        }
        None => Partial::default(),
    };
    let out = c.out.as_deref().map(str::parse).transpose().map_err(|e: config::ConfigError| e.0)?;
    let flags = Partial {
        word: c.word.clone(),
        affine: c.affine.then_some(true),
        node: c.node,
        degree: c.degree,
        level: c.level,
        loop_window: c.loop_window,
        out,
        seed: c.seed,
    };
    let cap = max_degree_from_env().map_err(|e| e.0)?;
    RunConfig::resolve(flags.over(file), cap).map_err(|e| e.0)
}

fn system(cfg: &RunConfig) -> Result<SimpleRootSystem, Outcome> {
    let sys = build_system(&cfg.word, cfg.affine).map_err(|e| Outcome::usage(e.to_string()))?;
    if let Some(k) = cfg.node {
        sys.check_node(k).map_err(|e| Outcome::usage(e.to_string()))?;
    }
    Ok(sys)
}

pub fn run(cmd: Command) -> Outcome {
    let res = match cmd {
        Command::Roots(c) => with_config(&c, roots),
        Command::Groupoid { common, orbit, to, bound } => with_config(&common, |cfg| groupoid(cfg, orbit, to.as_deref(), bound)),
        Command::VerifyClassical { common, flip } => with_config(&common, |cfg| verify_classical(cfg, flip)),
        Command::VerifyYangian { common, with_d, flip } => with_config(&common, |cfg| verify_yangian(cfg, with_d, flip)),
        Command::Replay { replay: path, out } => {
            let fmt = match out.as_deref().map(str::parse::<OutputFormat>).transpose() {
                Ok(f) => f.unwrap_or(OutputFormat::Text),
                Err(e) => return Outcome::usage(e.0),
            };
            Ok(replay(&path, fmt))
        }
    };
    res.unwrap_or_else(|o| o)
}

fn with_config(c: &Common, f: impl FnOnce(&RunConfig) -> Result<Outcome, Outcome>) -> Result<Outcome, Outcome> {
    let cfg = resolve_config(c).map_err(Outcome::usage)?;
    f(&cfg)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn roots(cfg: &RunConfig) -> Result<Outcome, Outcome> {
    let sys = system(cfg)?;
    let text = match cfg.out {
        OutputFormat::Json => pretty(&roots_json(&sys)),
        OutputFormat::Dot => dynkin(&sys, DiagramFormat::Dot),
        OutputFormat::Text => {
            let mut s = String::new();
            for k in sys.nodes() {
                s.push_str(&format!("alpha_{} = {}  ({})\n", k, sys.simple_root(k), if sys.node_parity(k).is_odd() { "odd" } else { "even" }));
            }
            s.push('\n');
            s.push_str(&cartan_matrix(&sys).to_string());
            s.push('\n');
            s.push_str(&dynkin(&sys, DiagramFormat::Ascii));
            s
        }
    };
    Ok(Outcome::ok(text, EXIT_OK))
}

fn groupoid(cfg: &RunConfig, _orbit: bool, to: Option<&str>, bound: usize) -> Result<Outcome, Outcome> {
    let sys = system(cfg)?;
    if let Some(w) = to {
        let target = build_system(w, cfg.affine).map_err(|e| Outcome::usage(e.to_string()))?;
        if (target.m, target.n) != (sys.m, sys.n) {
            return Err(Outcome::usage(format!("--to {} is not in the orbit of {}", w, sys.parity_word())));
        }
        let path = shortest_path(&sys, &target).map_err(|e| Outcome::error(e.to_string()))?;
        let text = match cfg.out {
            OutputFormat::Json => pretty(&json!({
                "from": sys.parity_word(),
                "to": target.parity_word(),
                "nodes": path.nodes(),
                "parities": path.parities,
            })),
            OutputFormat::Text => {
                let nodes: Vec<String> = path.nodes().iter().map(|k| k.to_string()).collect();
                format!("{} -> {}: [{}]\n", sys.parity_word(), target.parity_word(), nodes.join(" "))
            }
            OutputFormat::Dot => return Err(Outcome::usage("paths have no dot rendering")),
        };
        return Ok(Outcome::ok(text, EXIT_OK));
    }
    let g = orbit(&sys, bound).map_err(|e| Outcome::error(e.to_string()))?;
    let text = match cfg.out {
        OutputFormat::Json => pretty(&g.to_json()),
        OutputFormat::Dot => g.to_dot(),
        OutputFormat::Text => {
            let mut s = format!("{} vertices, {} edges\n", g.vertices.len(), g.edges.len());
            for v in &g.vertices {
                s.push_str(v);
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(text, EXIT_OK))
}

fn classical_exit(r: &Report) -> i32 {
    if r.relations.iter().any(|x| x.status == RelationStatus::Fails) || r.inverse_is_identity == Some(false) {
        EXIT_FAILED
    } else if r.relations.iter().any(|x| x.status == RelationStatus::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn verify_classical(cfg: &RunConfig, flip: Option<usize>) -> Result<Outcome, Outcome> {
    let sys = system(cfg)?;
    let report = match cfg.node {
        None => {
            if flip.is_some() {
                return Err(Outcome::usage("--flip needs --node"));
            }
            liesuper::check_relations_classical(&liesuper::generators(&sys, cfg.loop_window))
        }
        Some(k) => {
            let (assignment, report) =
                liesuper::reflect_and_verify(&sys, k, cfg.loop_window).map_err(|e| Outcome::error(e.to_string()))?;
            match flip {
                None => report,
                Some(p) if p < assignment.signs.len() => {
                    let gens = liesuper::generators(&sys, cfg.loop_window);
                    liesuper::verify_assignment(&assignment.with_flipped(p), &gens)
                }
                Some(p) => return Err(Outcome::usage(format!("sign parameter {} out of range ({})", p, assignment.signs.len()))),
            }
        }
    };
    let code = classical_exit(&report);
    let text = match cfg.out {
        OutputFormat::Json => {
            let j = report.to_json();
            let rows = j["relations"].as_array().cloned().unwrap_or_default();
            let mut v: Value = serde_json::from_str(&emit_report(&rows, OutputFormat::Json).expect("json")).expect("json");
            v["resolved_signs"] = j["resolved_signs"].clone();
            if let Some(b) = report.inverse_is_identity {
                v["inverse_is_identity"] = json!(b);
            }
            pretty(&v)
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &report.relations {
                s.push_str(&format!("{:<13} {}\n", r.status.tag(), r.id));
            }
            let held = report.relations.iter().filter(|r| r.status == RelationStatus::Holds).count();
            s.push_str(&format!("{}/{} relations hold", held, report.relations.len()));
            if let Some(b) = report.inverse_is_identity {
                s.push_str(&format!("; inverse is identity: {}", b));
            }
            s.push('\n');
            s
        }
        OutputFormat::Dot => return Err(Outcome::usage("reports have no dot rendering")),
    };
    Ok(Outcome::ok(text, code))
}

/// Reduces `cert`'s image again under a seeded random choice of matches.
fn random_strategy_agrees(v: &mut Verifier, map: &GeneratorMap, cert: &Certificate, rng: &mut StdRng) -> bool {
    let Some(rel) = v.source.find(&cert.relation_id) else { return false };
    let Ok(img) = substitute_with(&map.expanded(), &rel.element) else { return false };
    let nodes: std::collections::BTreeSet<usize> = img
        .symbols()
        .filter(|s| s.kind != superyang::presentations::SymbolKind::D)
        .map(|s| s.node())
        .collect();
    let with_d = img.symbols().any(|s| s.kind == superyang::presentations::SymbolKind::D);
    let nodes = v.neighbourhood(&nodes);
    let rs = v.system_for(&nodes, with_d, cert.bounds.degree);
    let mut choose = |k: usize| rng.gen_range(0..k);
    let nf = rs.reduce_with(&img, DEFAULT_STEP_CEILING, Some(&mut choose));
    nf.residual == cert.residual_element
}

fn verify_yangian(cfg: &RunConfig, with_d: bool, flip: Option<usize>) -> Result<Outcome, Outcome> {
    let sys = system(cfg)?;
    if sys.m == sys.n || sys.m.min(sys.n) < 2 {
        return Err(Outcome::usage(format!("verify-yangian needs m != n and m, n >= 2 (got m={}, n={})", sys.m, sys.n)));
    }
    let node = cfg.node.ok_or_else(|| Outcome::usage("verify-yangian needs --node"))?;
    if with_d && !sys.affine {
        return Err(Outcome::usage("--with-d needs --affine"));
    }
    if cfg.out == OutputFormat::Dot {
        return Err(Outcome::usage("reports have no dot rendering"));
    }
    let map = quantum_reflection(&sys, node, with_d).map_err(|e| Outcome::error(e.to_string()))?;
    let bounds = Bounds { degree: cfg.degree, level: cfg.level };
    let mut v = Verifier::new(&map, bounds).map_err(|e| Outcome::error(e.to_string()))?;
    let mut map = resolve_signs(&map, &mut v);
    if let Some(p) = flip {
        if p >= map.signs.len() {
            return Err(Outcome::usage(format!("sign parameter {} out of range ({})", p, map.signs.len())));
        }
        map = map.with_flipped(p);
    }
    let ids: Vec<String> = v.source.relations.iter().map(|r| r.id.clone()).collect();
    let mut rng = cfg.seed.ne(&0).then(|| StdRng::seed_from_u64(cfg.seed));
    let mut results = Vec::new();
    let mut inconclusive = map.status != MapStatus::Resolved;
    for id in &ids {
        let cert = v.verify(&map, id).map_err(|e| Outcome::error(e.to_string()))?;
        if let Some(r) = rng.as_mut() {
            if !random_strategy_agrees(&mut v, &map, &cert, r) {
                return Err(Outcome::error(format!("{}: normal form depends on the rewriting strategy", id)));
            }
        }
        inconclusive |= !cert.verified();
        results.push(serde_json::to_value(&cert).expect("json"));
    }
    let code = if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    let text = match cfg.out {
        OutputFormat::Json => {
            let mut s = emit_report(&results, OutputFormat::Json).expect("json");
            s.push('\n');
            s
        }
        _ => {
            let mut s = format!("map {} ({}), target {}\n", map.id(), map.status.tag(), map.target.parity_word());
            s.push_str(&emit_report(&results, OutputFormat::Text).expect("text"));
            let ok = results.iter().filter(|r| r["status"] == "verified").count();
            s.push_str(&format!("{}/{} relation images verified at degree {}, level {}\n", ok, results.len(), cfg.degree, cfg.level));
            s
        }
    };
    Ok(Outcome::ok(text, code))
}

fn certificates(v: &Value) -> Result<Vec<Certificate>, String> {
    let items: Vec<Value> = match v {
        Value::Array(a) => a.clone(),
        Value::Object(o) if o.contains_key("results") => o["results"].as_array().cloned().ok_or("results must be an array")?,
        Value::Object(_) => vec![v.clone()],
        _ => return Err("expected a certificate, an array or a report".into()),
    };
    items
        .into_iter()
        .map(|x| serde_json::from_value(x).map_err(|e| e.to_string()))
        .collect()
}

/// Parses certificate JSON (single, array, or report) into certificates.
pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    certificates(&v)
}

fn replay_map(cert: &Certificate) -> Result<(GeneratorMap, Verifier), String> {
    let mut map = map_from_id(&cert.map_id).map_err(|e| e.to_string())?;
    let mut v = Verifier::new(&map, cert.bounds).map_err(|e| e.to_string())?;
    if cert.signs.len() == map.signs.len() && cert.signs.iter().all(|s| *s == 1 || *s == -1) {
        map.signs = cert.signs.clone();
        map.status = MapStatus::Resolved;
    } else {
        map = resolve_signs(&map, &mut v);
    }
    Ok((map, v))
}

fn replay(path: &std::path::Path, fmt: OutputFormat) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {}", path.display(), e)),
    };
    let certs = match parse_certificates(&text) {
        Ok(c) => c,
        Err(e) => return Outcome::error(format!("{}: {}", path.display(), e)),
    };
    let mut current: Option<(String, Vec<i64>, Bounds, GeneratorMap, Verifier)> = None;
    let mut rows = Vec::new();
    for (k, cert) in certs.iter().enumerate() {
        let fresh = !matches!(&current, Some((id, s, b, _, _)) if *id == cert.map_id && *s == cert.signs && *b == cert.bounds);
        if fresh {
            match replay_map(cert) {
                Ok((m, v)) => current = Some((cert.map_id.clone(), cert.signs.clone(), cert.bounds, m, v)),
                Err(e) => return Outcome::error(format!("certificate {} ({}): {}", k, cert.relation_id, e)),
            }
        }
        let (_, _, _, map, v) = current.as_mut().expect("set");
        let again = match v.verify_at(map, &cert.relation_id, cert.bounds.degree) {
            Ok(c) => c,
            Err(e) => return Outcome::error(format!("certificate {} ({}): {}", k, cert.relation_id, e)),
        };
        if let Some(d) = cert.divergence(&again) {
            return Outcome::error(format!("certificate {} ({}) diverges at {}", k, cert.relation_id, d));
        }
        rows.push(json!({"relation_id": cert.relation_id, "status": "replayed"}));
    }
    let out = match fmt {
        OutputFormat::Json => emit_report(&rows, OutputFormat::Json).map(|mut s| {
            s.push('\n');
            s
        }),
        OutputFormat::Text => Ok(format!("{} certificates replayed, no divergence\n", rows.len())),
        OutputFormat::Dot => Err("reports have no dot rendering".to_string()),
    };
    match out {
        Ok(s) => Outcome::ok(s, EXIT_OK),
        Err(e) => Outcome::usage(e),
    }
}
