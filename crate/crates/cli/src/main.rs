use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use massey_core::fpcore::{Field, FqElem};
use massey_core::groupengine::{closure, CyclicGroup, Group, GroupStore, HomLimits, Limits};
use massey_core::localfield::{self, ClassVec, LaurentSeries, Local};
use massey_core::massey::{self, CharacterTuple, GroupFile, Target};
use massey_core::unipotent::UnipotentGroup;
use massey_core::{suite, variety, wreath, Error};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "massey", version, about = "Unipotent groups, Massey products and their splitting varieties over F_p")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    #[arg(long, global = true, env = "MASSEY_P")]
    p: Option<u32>,
    #[arg(long, global = true, env = "MASSEY_Q")]
    q: Option<u64>,
    /// memory ceiling for closures, e.g. 4G, 512M or a byte count
    #[arg(long, global = true, env = "MASSEY_MAX_MEM", value_parser = parse_bytes)]
    max_mem: Option<u64>,
    #[arg(long, global = true, env = "MASSEY_MAX_ELEMENTS")]
    max_elements: Option<u64>,
    #[arg(long, global = true, env = "MASSEY_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, env = "MASSEY_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Build(Build),
    #[command(subcommand)]
    Massey(MasseyCmd),
    #[command(subcommand)]
    Local(LocalCmd),
    #[command(subcommand)]
    Variety(VarietyCmd),
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand)]
enum Verify {
    /// S_5 action of U_3 × U_3 against conjugation by the section
    SAction,
    /// cocycle identities for φ and ψ on U_3
    Cocycles,
    /// cup product against the section cocycle, and the extension it defines
    CupExtension {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// structure of tilde U_5(F_p) in both realizations
    TildeU5 {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// lower central series of tilde U_5(F_p) from its explicit generators
    Lcs,
}

#[derive(Subcommand)]
enum Build {
    TildeU5 {
        /// write the four generator matrices as a group file instead of a report
        #[arg(long)]
        emit_generators: bool,
    },
}

#[derive(Subcommand)]
enum MasseyCmd {
    /// whether a character tuple vanishes in the sense of a target group
    Check {
        #[arg(long)]
        group: PathBuf,
        /// values on the generators, e.g. "1,0;0,1"
        #[arg(long)]
        chars: String,
        #[arg(long, value_enum)]
        target: TargetArg,
    },
    /// the lifting criterion over every subgroup of tilde G(F_p)
    LiftingSweep {
        /// only one subgroup per conjugacy class
        #[arg(long)]
        conjugacy_reps: bool,
        /// skip the independent coboundary oracles
        #[arg(long)]
        no_oracles: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    U5,
    TildeU5,
    U3,
    U3w1,
    U3w2,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Target {
        match t {
            TargetArg::U5 => Target::U5,
            TargetArg::TildeU5 => Target::TildeU5,
            TargetArg::U3 => Target::U3,
            TargetArg::U3w1 => Target::U3w1,
            TargetArg::U3w2 => Target::U3w2,
        }
    }
}

#[derive(Subcommand)]
enum LocalCmd {
    /// tame symbol of two elements of F_q((t))
    Symbol { a: String, b: String },
    /// classes B, C for the tuple (a, b, c, d)
    FindBc {
        a: String,
        b: String,
        c: String,
        d: String,
        /// also run the exhaustive search
        #[arg(long)]
        brute: bool,
    },
}

#[derive(Subcommand)]
enum VarietyCmd {
    /// an F_q-point for a, b, c, d given as F_q indices
    Solve { a: u64, b: u64, c: u64, d: u64 },
    /// check a point file against the equations
    Check {
        a: u64,
        b: u64,
        c: u64,
        d: u64,
        #[arg(long)]
        point: PathBuf,
    },
    /// solvability over F_q((t)) for a, b, c, d given as series
    DecideLocal { a: String, b: String, c: String, d: String },
}

#[derive(Subcommand)]
enum SuiteCmd {
    Run {
        #[arg(long, value_enum, default_value = "required")]
        tier: Tier,
        /// criteria to run, all by default
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tier {
    Required,
    Heavy,
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        Some('T') => (&s[..s.len() - 1], 1 << 40),
        _ => (s, 1),
    };
    let n: f64 = num.parse().map_err(|_| format!("bad size '{s}'"))?;
    Ok((n * mult as f64) as u64)
}

/// What a command hands back: parameters, named verdicts and witnesses.
struct Outcome {
    parameters: Value,
    verdicts: Map<String, Value>,
    witnesses: Value,
    /// wall-clock and memory figures, kept apart from the deterministic fields
    timings: Map<String, Value>,
}

impl Outcome {
    fn new(parameters: Value, witnesses: Value) -> Self {
        Outcome { parameters, verdicts: Map::new(), witnesses, timings: Map::new() }
    }

    fn verdict(mut self, name: &str, ok: bool) -> Self {
        self.verdicts.insert(name.into(), Value::Bool(ok));
        self
    }

    fn passed(&self) -> bool {
        self.verdicts.values().all(|v| v.as_bool() == Some(true))
    }
}

type Res<T> = std::result::Result<T, Error>;

fn need<T>(v: Option<T>, flag: &str) -> Res<T> {
    v.ok_or_else(|| Error::Parse(format!("--{flag} is required")))
}

fn limits(g: &Global) -> Limits {
    let d = Limits::default();
    Limits { max_elements: g.max_elements.unwrap_or(d.max_elements), max_bytes: g.max_mem.unwrap_or(d.max_bytes) }
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A series of F_q((t)): a monomial expression such as `u^2*t^-1`, or `@FILE` naming JSON
/// `{"val": v, "coeffs": [..]}` with coefficients as F_q indices.
fn series(local: &Local, s: &str) -> Res<LaurentSeries<FqElem>> {
    match s.strip_prefix('@') {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(&PathBuf::from(path))?).map_err(|e| Error::Parse(e.to_string()))?;
            let val = v["val"].as_i64().ok_or_else(|| Error::Parse(format!("{path}: missing integer val")))?;
            let coeffs = v["coeffs"]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{path}: missing coeffs")))?
                .iter()
                .map(|c| c.as_u64().filter(|&c| c < local.q).ok_or_else(|| Error::Parse(format!("{path}: bad coefficient {c}"))))
                .collect::<Res<Vec<u64>>>()?;
            let f = local.base.residue();
            local.base.series(val, coeffs.into_iter().map(|c| f.from_index(c)).collect())
        }
        None => localfield::parse_monomial(local, s),
    }
}

fn class(local: &Local, s: &str) -> Res<ClassVec> {
    local.base.class_of(&series(local, s)?)
}

fn local_field(g: &Global) -> Res<Local> {
    Local::new(need(g.q, "q")?, need(g.p, "p")?)
}

fn run(cmd: &Command, g: &Global) -> Res<(String, Outcome)> {
    let seed = g.seed;
    Ok(match cmd {
        Command::Verify(v) => {
            let p = need(g.p, "p")?;
            match v {
                Verify::SAction => {
                    let (checked, bad) = suite::s_action_agreement(p)?;
                    let o = Outcome::new(json!({"p": p}), json!({"checked": checked, "mismatches": bad}));
                    ("verify s-action".into(), o.verdict("agrees_with_conjugation", bad == 0))
                }
                Verify::Cocycles => {
                    let c = suite::cocycle_identities(p)?;
                    let o = Outcome::new(json!({"p": p}), json!(c))
                        .verdict("phi_cocycle", c.phi_failures == 0)
                        .verdict("psi_cocycle", c.psi_failures == 0)
                        .verdict("twisted_psi_cocycle", c.twisted_failures == 0)
                        .verdict("psi_inverse", c.inverse_failures == 0);
                    ("verify cocycles".into(), o)
                }
                Verify::CupExtension { samples } => {
                    let (pairs, bad, _, _) = suite::cup_against_section(p)?;
                    let e = suite::extension_check(p, *samples, seed)?;
                    let o = Outcome::new(
                        json!({"p": p, "samples": samples, "seed": seed}),
                        json!({"cup_pairs": pairs, "cup_mismatches": bad, "extension": e}),
                    )
                    .verdict("cup_equals_section_cocycle", bad == 0)
                    .verdict("order", e.order_ok)
                    .verdict("injective", e.images_distinct == e.order)
                    .verdict("homomorphism", e.hom_failures == 0);
                    ("verify cup-extension".into(), o)
                }
                Verify::TildeU5 { samples } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let r = wreath::verify_structure(p, limits(g), *samples, &mut rng)?;
                    let mut o = Outcome::new(json!({"p": p, "samples": samples, "seed": seed}), json!(r))
                        .verdict("structure", r.passed());
                    if let Some(eq) = r.equals_u5 {
                        o = o.verdict("equals_u5", eq);
                    }
                    ("verify tilde-u5".into(), o)
                }
                Verify::Lcs => {
                    let r = wreath::explicit_lcs(p, limits(g))?;
                    if let Some(why) = &r.stopped {
                        return Err(Error::Resource { what: format!("lower central series ({why})"), partial: r.terms.len() as u64 });
                    }
                    let orders = r.orders();
                    let reference: Option<Vec<u64>> = match p {
                        2 => Some(vec![1024, 64, 8, 2, 1]),
                        3 => Some(suite::LCS_P3.to_vec()),
                        _ => None,
                    };
                    let mut o = Outcome::new(json!({"p": p}), json!({"orders": orders, "report": r}))
                        .verdict("complete", r.complete);
                    if let Some(reference) = reference {
                        o = o.verdict("orders_match_reference", orders == reference);
                    }
                    ("verify lcs".into(), o)
                }
            }
        }
        Command::Build(Build::TildeU5 { emit_generators }) => {
            let p = need(g.p, "p")?;
            let gens = wreath::explicit_generators(p)?;
            if *emit_generators {
                let file = GroupFile::Unipotent { p, n: 2 * p as usize + 1, generators: gens.to_vec() };
                print!("{}", file.to_text());
                std::process::exit(0);
            }
            let tu = wreath::build_tilde_un(p, 2)?;
            let rows: Vec<_> = gens.iter().map(|m| m.rows()).collect();
            let o = Outcome::new(json!({"p": p}), json!({"order_log": tu.order_log(), "generators": rows}))
                .verdict("order", tu.order_log() == p * p + 2 * p + 2);
            ("build tilde-u5".into(), o)
        }
        Command::Massey(MasseyCmd::Check { group, chars, target }) => {
            let file = GroupFile::parse(&read(group)?)?;
            let values = massey::parse_chars(chars)?;
            let target: Target = (*target).into();
            let params = json!({"group": group.display().to_string(), "chars": values, "target": target.name()});
            let v = match &file {
                GroupFile::Unipotent { p, n, generators } => {
                    let u = UnipotentGroup::new(*p, *n)?;
                    check_tuple(Arc::new(closure(&u, generators, limits(g))?), *p, &values, target)?
                }
                GroupFile::Cyclic { p, order } => {
                    let c = CyclicGroup { order: *order };
                    check_tuple(Arc::new(closure(&c, &[1 % *order], limits(g))?), *p, &values, target)?
                }
            };
            let mut o = Outcome::new(params, v.clone());
            if let Some(q) = v["quotient_compatible"].as_bool() {
                o = o.verdict("quotient_compatible", q);
            }
            ("massey check".into(), o)
        }
        Command::Massey(MasseyCmd::LiftingSweep { conjugacy_reps, no_oracles }) => {
            let p = need(g.p, "p")?;
            let r = massey::lifting_sweep(p, !no_oracles, *conjugacy_reps)?;
            let o = Outcome::new(json!({"p": p, "conjugacy_reps": conjugacy_reps, "oracles": !no_oracles}), json!(r))
                .verdict("all_agree", r.all_agree);
            ("massey lifting-sweep".into(), o)
        }
        Command::Local(LocalCmd::Symbol { a, b }) => {
            let l = local_field(g)?;
            let (x, y) = (series(&l, a)?, series(&l, b)?);
            let sym = l.base.tame_symbol(&x, &y)?;
            let (cx, cy) = (l.base.class_of(&x)?, l.base.class_of(&y)?);
            let o = Outcome::new(
                json!({"q": l.q, "p": l.p, "a": a, "b": b}),
                json!({"symbol": sym, "a_class": cx.data, "b_class": cy.data}),
            )
            .verdict("symbol_factors_through_classes", l.symbol(&cx, &cy) == sym);
            ("local symbol".into(), o)
        }
        Command::Local(LocalCmd::FindBc { a, b, c, d, brute }) => {
            let l = local_field(g)?;
            let (ca, cb, cc, cd) = (class(&l, a)?, class(&l, b)?, class(&l, c)?, class(&l, d)?);
            let r = localfield::find_bc(&l, &ca, &cb, &cc, &cd)?;
            let mut w = json!({"classes": [ca.data, cb.data, cc.data, cd.data], "result": r});
            let mut o = Outcome::new(json!({"q": l.q, "p": l.p, "a": a, "b": b, "c": c, "d": d}), Value::Null);
            if let localfield::BcResult::Found { pairings_zero, .. } = &r {
                o = o.verdict("witness_pairings_zero", *pairings_zero);
            }
            if *brute {
                let bf = localfield::find_bc_brute(&l, &ca, &cb, &cc, &cd)?;
                w["brute_force"] = json!(bf.as_ref().map(|(x, y)| (x.data.clone(), y.data.clone())));
                if matches!(r, localfield::BcResult::Found { .. } | localfield::BcResult::Impossible { .. }) {
                    o = o.verdict("agrees_with_search", r.found() == bf.is_some());
                }
            }
            o.witnesses = w;
            ("local find-bc".into(), o)
        }
        Command::Variety(VarietyCmd::Solve { a, b, c, d }) => {
            let (q, p) = (need(g.q, "q")?, need(g.p, "p")?);
            let r = variety::solve_finite_field(q, p, [*a, *b, *c, *d])?;
            let o = Outcome::new(json!({"q": q, "p": p, "abcd": [a, b, c, d]}), json!(r))
                .verdict("point_satisfies_equations", r.check.holds())
                .verdict("components_hold", r.components_hold);
            ("variety solve".into(), o)
        }
        Command::Variety(VarietyCmd::Check { a, b, c, d, point }) => {
            let (q, p) = (need(g.q, "q")?, need(g.p, "p")?);
            let pt: variety::VarietyPoint = serde_json::from_str(&read(point)?).map_err(|e| Error::Parse(e.to_string()))?;
            let v = variety::Variety::new(q, p, [*a, *b, *c, *d])?;
            let check = v.check_point(&pt)?;
            let mut o = Outcome::new(
                json!({"q": q, "p": p, "abcd": [a, b, c, d], "point": point.display().to_string()}),
                json!(check),
            )
            .verdict("f_nonzero", check.f_nonzero);
            for e in &check.equations {
                o = o.verdict(&e.name, e.holds);
            }
            ("variety check".into(), o)
        }
        Command::Variety(VarietyCmd::DecideLocal { a, b, c, d }) => {
            let l = local_field(g)?;
            let (ca, cb, cc, cd) = (class(&l, a)?, class(&l, b)?, class(&l, c)?, class(&l, d)?);
            let r = variety::decide_local(&l, &ca, &cb, &cc, &cd)?;
            let mut o = Outcome::new(json!({"q": l.q, "p": l.p, "a": a, "b": b, "c": c, "d": d}), json!(r));
            if let Some(pairs) = r.pairings.as_ref().filter(|_| r.solvable) {
                o = o.verdict("witness_pairings_zero", pairs.iter().flatten().all(|&x| x == 0));
            }
            ("variety decide-local".into(), o)
        }
        Command::Suite(SuiteCmd::Run { tier, only }) => {
            let ids: Vec<u32> = if only.is_empty() { (1..=12).collect() } else { only.clone() };
            let mut o = Outcome::new(json!({"tier": tier_name(*tier), "criteria": ids}), Value::Null);
            let mut reports = Vec::new();
            let mut times = Vec::new();
            let mut record = |o: Outcome, name: String, r: suite::CriterionReport| {
                eprintln!("{name}: {}", if r.passed { "pass" } else { "fail" });
                let mut v = json!(r);
                let m = v.as_object_mut().expect("object");
                let seconds = m.remove("seconds");
                let rss = m.remove("peak_rss_mb");
                times.push(json!({"id": r.id, "seconds": seconds, "peak_rss_mb": rss}));
                reports.push(v);
                o.verdict(&name, r.passed)
            };
            for id in &ids {
                o = record(o, format!("criterion_{id:02}"), suite::run(*id)?);
            }
            if *tier == Tier::Heavy {
                let mut next = 0u64;
                let r = suite::heavy_enumeration(|n| {
                    if n >= next {
                        eprintln!("enumerated {n}");
                        next = n + 10_000_000;
                    }
                })?;
                o = record(o, "heavy_enumeration".into(), r);
            }
            o.witnesses = Value::Array(reports);
            o.timings.insert("criteria".into(), Value::Array(times));
            ("suite run".into(), o)
        }
    })
}

fn tier_name(t: Tier) -> &'static str {
    match t {
        Tier::Required => "required",
        Tier::Heavy => "heavy",
    }
}

fn check_tuple<G: Group + 'static>(store: Arc<GroupStore<G>>, p: u32, values: &[Vec<u32>], target: Target) -> Res<Value> {
    eprintln!("group of order {}", store.order());
    let order = store.order();
    let ct = CharacterTuple::from_generator_values(store, p, values)?;
    let v = massey::vanishes_in_sense_of(&ct, target, HomLimits::default())?;
    let mut out = json!(v);
    out["group_order"] = json!(order);
    Ok(out)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Contract(_) => "contract",
        Error::Resource { .. } => "resource",
        Error::Precision(_) => "precision",
        Error::Unsupported(_) => "unsupported",
        Error::Parse(_) => "parse",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            println!("{}", json!({"error": {"kind": "usage", "message": msg.trim()}}));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            println!("{}", json!({"error": {"kind": "usage", "message": e.to_string()}}));
            return ExitCode::from(2);
        }
    }
    suite::reset_peak_rss();
    let t = Instant::now();
    match run(&cli.command, &cli.global) {
        Ok((command, mut o)) => {
            let passed = o.passed();
            o.timings.insert("seconds".into(), json!(t.elapsed().as_secs_f64()));
            o.timings.insert("peak_rss_mb".into(), json!(suite::peak_rss_mb()));
            let report = json!({
                "command": command,
                "parameters": o.parameters,
                "passed": passed,
                "verdicts": o.verdicts,
                "witnesses": o.witnesses,
                "timings": o.timings,
                "resources": {
                    "threads": rayon::current_num_threads(),
                    "max_elements": limits(&cli.global).max_elements,
                    "max_bytes": limits(&cli.global).max_bytes,
                },
                "version": env!("CARGO_PKG_VERSION"),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}));
            ExitCode::from(2)
        }
    }
}
