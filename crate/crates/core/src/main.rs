//! Command-line front end. Results go to stdout as JSON; `--verbose` adds a
//! human summary on stderr. Exit codes: 0 success, 1 negative answer or
//! failed verification, 2 usage or input error, 3 budget exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::process::ExitCode;
use triform::classify::{fixtures, is_old, thmold_regular, thmold_witnesses, Oldness, ThmOld, DEFAULT_OLD_BOUND};
use triform::enumerate::{build_u, build_z, discover_drops, PipelineConfig};
use triform::localrep::{represents_locally, xi};
use triform::rivers::{build_river, export_graph, ExportFormat, DEFAULT_RIVER_BOUND, DEFAULT_RIVER_CAP};
use triform::triforms::{
    locally_represents, psi, represented_set, t_shift, PsiResult, DEFAULT_PSI_BOUND, DEFAULT_TABLE_BOUND,
};
use triform::watson::{is_p_stable, lambda_preimage, stabilize, unstable_primes, watson_step, PreimageOptions};
use triform::{Error, Form, OddPrime};

#[derive(Parser)]
#[command(name = "triform", version, about = "Triangular forms: representation, Watson transformations, classification tables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Search bound for ψ, regularity and universality scans.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Largest coefficient admitted in preimages and rivers.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Comma-separated odd primes for preimage searches.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Largest family parameter r instantiated from the quaternary table.
    #[arg(long, global = true, default_value_t = 3)]
    max_r: u32,
    /// Refuse sieves with more than this many cells.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Worker threads for the pipelines.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Is n represented by T(a), globally or locally?
    Repr {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        local: bool,
        /// With --local, test t(n,a) at this prime only.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Smallest locally represented integer that is not represented.
    Psi {
        #[arg(long)]
        form: Form,
    },
    /// Divisibility threshold for redundant coefficients.
    Xi {
        #[arg(long)]
        form: Form,
    },
    /// One λ_p step, or the full stabilizing chain without --p.
    Watson {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        p: Option<u64>,
    },
    /// λ_p preimages with coefficients up to --cap.
    Preimage {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        unstable_only: bool,
        #[arg(long)]
        include_fixed: bool,
    },
    /// p-stability at one prime, or the unstable primes.
    Stable {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Old/new status of a primitive form.
    Old {
        #[arg(long)]
        form: Form,
    },
    /// Regularity by regular ternary or quaternary sections.
    Thmold {
        #[arg(long)]
        form: Form,
    },
    /// The river above a stable new regular mouth.
    River {
        #[arg(long)]
        mouth: Form,
        #[arg(long, value_enum, default_value_t = Fmt::Json)]
        format: Fmt,
    },
    /// Regenerate and compare the classification tables.
    Tables {
        #[command(subcommand)]
        action: TablesAction,
    },
}

#[derive(Subcommand)]
enum TablesAction {
    Verify {
        #[arg(value_enum)]
        table: Table,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Table1,
    Table2,
    Table3,
    Table5,
    Drops,
}

struct Outcome {
    payload: Value,
    negative: bool,
    summary: String,
}

fn ok(payload: Value, summary: impl Into<String>) -> Outcome {
    Outcome { payload, negative: false, summary: summary.into() }
}

fn verdict(payload: Value, positive: bool, summary: impl Into<String>) -> Outcome {
    Outcome { payload, negative: !positive, summary: summary.into() }
}

fn prime(p: u64) -> triform::Result<OddPrime> {
    OddPrime::new(p)
}

fn check_budget(g: &Global, bound: u64, a: &Form) -> triform::Result<()> {
    if let Some(limit) = g.budget {
        if (bound as u128 + 1) * a.rank() as u128 > limit {
            return Err(Error::BudgetExceeded { what: "sieve", limit });
        }
    }
    Ok(())
}

fn psi_json(r: PsiResult) -> Value {
    match r {
        PsiResult::Finite(n) => json!(n),
        PsiResult::NoCounterexampleBelow(_) => Value::Null,
    }
}

fn run(cli: Cli) -> triform::Result<Outcome> {
    let g = cli.global;
    let bound = |d: u64| g.bound.unwrap_or(d);
    let cap = |d: u64| g.cap.unwrap_or(d);
    match cli.cmd {
        Command::Repr { form, n, local, prime: None } if !local => {
            check_budget(&g, n, &form)?;
            let r = represented_set(&form, n)?.get(n as usize);
            Ok(verdict(json!({ "form": form, "n": n, "represented": r }), r, format!("{form} at {n}: {r}")))
        }
        Command::Repr { form, n, prime: None, .. } => {
            let r = locally_represents(&form, n);
            Ok(verdict(
                json!({ "form": form, "n": n, "local": true, "represented": r }),
                r,
                format!("{form} locally at {n}: {r}"),
            ))
        }
        Command::Repr { form, n, prime: Some(p), .. } => {
            let p = prime(p)?;
            let t = t_shift(n, &form);
            let m = represents_locally(&form, t as i128, p)?;
            Ok(verdict(
                json!({ "form": form, "n": n, "p": p.get(), "t": t.to_string(), "represented": m.represented, "trace": m.trace }),
                m.represented,
                format!("t = {t} at p = {p}: {}", m.represented),
            ))
        }
        Command::Psi { form } => {
            let b = bound(DEFAULT_PSI_BOUND);
            check_budget(&g, b, &form)?;
            let r = psi(&form, b)?;
            Ok(ok(json!({ "form": form, "bound": b, "psi": psi_json(r) }), format!("psi{form} = {r:?}")))
        }
        Command::Xi { form } => {
            let x = xi(&form)?;
            Ok(ok(json!({ "form": form, "xi": x }), format!("xi{form} = {x}")))
        }
        Command::Watson { form, p: Some(p) } => {
            let st = watson_step(&form, prime(p)?)?;
            Ok(ok(
                json!({ "form": form, "p": p, "s_vector": st.s_vector, "s": st.s, "lambda": st.lambda_image }),
                format!("lambda_{p}{form} = {}", st.lambda_image),
            ))
        }
        Command::Watson { form, p: None } => {
            let chain = stabilize(&form)?;
            let steps: Vec<Value> = chain
                .steps
                .iter()
                .map(|s| json!({ "p": s.step.p.get(), "lambda": s.step.lambda_image.sorted(), "unstable": s.unstable, "anomalies": s.anomalies }))
                .collect();
            Ok(ok(json!({ "form": form, "steps": steps, "terminal": chain.terminal }), format!("stable form {}", chain.terminal)))
        }
        Command::Preimage { form, p, unstable_only, include_fixed } => {
            let c = cap(400);
            let primes: Vec<u64> = match (p, &g.primes) {
                (Some(p), _) => vec![p],
                (None, Some(ps)) => ps.clone(),
                (None, None) => vec![3, 5, 7],
            };
            let opts = PreimageOptions { exclude_fixed_points: !include_fixed, unstable_only };
            let mut blocks = Vec::new();
            for q in primes {
                let set = lambda_preimage(&form, prime(q)?, c, opts)?;
                blocks.push(json!({ "p": q, "preimages": set }));
            }
            Ok(ok(json!({ "form": form, "cap": c, "blocks": blocks }), format!("{} blocks", blocks.len())))
        }
        Command::Stable { form, p: Some(p) } => {
            let s = is_p_stable(&form, prime(p)?)?;
            Ok(verdict(json!({ "form": form, "p": p, "stable": s }), s, format!("{form} {p}-stable: {s}")))
        }
        Command::Stable { form, p: None } => {
            let u = unstable_primes(&form)?;
            let s = u.is_empty();
            Ok(verdict(json!({ "form": form, "stable": s, "unstable_primes": u }), s, format!("{form} stable: {s}")))
        }
        Command::Old { form } => {
            let b = bound(DEFAULT_OLD_BOUND);
            check_budget(&g, b, &form)?;
            let o = is_old(&form, b)?;
            let (status, index, psi) = match o {
                Oldness::Old(i) => ("old", Some(i), None),
                Oldness::New => ("new", None, None),
                Oldness::NotRegular(n) => ("not_regular", None, Some(n)),
            };
            let payload = json!({ "form": form, "bound": b, "status": status, "index": index, "psi": psi });
            Ok(verdict(payload, !matches!(o, Oldness::NotRegular(_)), format!("{form}: {status}")))
        }
        Command::Thmold { form } => {
            let w = thmold_witnesses(&form)?;
            let t = thmold_regular(&form)?;
            let (regular, reason) = match &t {
                ThmOld::Regular(_) => (true, None),
                ThmOld::Irregular(why) => (false, Some(why.clone())),
            };
            Ok(verdict(
                json!({ "form": form, "regular": regular, "witnesses": w, "reason": reason }),
                regular,
                format!("{form}: {t:?}"),
            ))
        }
        Command::River { mouth, format } => {
            let c = cap(DEFAULT_RIVER_CAP);
            let b = bound(DEFAULT_RIVER_BOUND);
            let graph = build_river(&mouth, c, b)?;
            let text = export_graph(&graph, match format {
                Fmt::Dot => ExportFormat::Dot,
                Fmt::Json => ExportFormat::Json,
            });
            let summary = format!("{} nodes, {} drop edges", graph.nodes.len(), graph.drop_edges().count());
            Ok(ok(Value::String(text), summary))
        }
        Command::Tables { action: TablesAction::Verify { table } } => verify(table, &g),
    }
}

fn diff(got: &BTreeSet<Form>, want: &BTreeSet<Form>) -> Value {
    json!({
        "missing": want.difference(got).collect::<Vec<_>>(),
        "extra": got.difference(want).collect::<Vec<_>>(),
    })
}

fn verify(table: Table, g: &Global) -> triform::Result<Outcome> {
    let fx = fixtures();
    let (name, pass, detail) = match table {
        Table::Table1 => {
            let b = g.bound.unwrap_or(DEFAULT_TABLE_BOUND);
            let mut bad = Vec::new();
            let mut stable = 0;
            for e in &fx.table1 {
                let reg = triform::triforms::regular_up_to(&e.triple, b)?.passes();
                let st = unstable_primes(&e.triple)?.is_empty();
                stable += st as usize;
                if !reg || st != e.stable {
                    bad.push(json!({ "triple": e.triple, "regular": reg, "stable": st }));
                }
            }
            let pass = bad.is_empty() && stable == 17;
            ("table1", pass, json!({ "bound": b, "entries": fx.table1.len(), "stable": stable, "mismatches": bad }))
        }
        Table::Table2 => {
            let b = g.bound.unwrap_or(5000);
            let inst = fx.table2_instances(g.max_r);
            let mut bad = Vec::new();
            for f in &inst {
                let o = is_old(f, b)?;
                if o != Oldness::New {
                    bad.push(json!({ "form": f, "status": format!("{o:?}") }));
                }
            }
            ("table2", bad.is_empty(), json!({ "bound": b, "max_r": g.max_r, "instances": inst.len(), "failures": bad }))
        }
        Table::Table3 => {
            let b = g.bound.unwrap_or(5000);
            let mut bad = Vec::new();
            for d in &fx.table3 {
                let img = triform::watson::small_lambda(&d.top, d.p)?.sorted();
                let good = img == d.image
                    && is_old(&d.top, b)? == Oldness::New
                    && matches!(is_old(&d.image, b)?, Oldness::Old(i) if d.image.delete_at(i)? == d.bottom);
                if !good {
                    bad.push(json!({ "index": d.index, "top": d.top }));
                }
            }
            ("table3", bad.is_empty(), json!({ "bound": b, "records": fx.table3.len(), "failures": bad }))
        }
        Table::Table5 => {
            let cfg = pipeline(g);
            let (u, report) = build_u(&cfg)?;
            let want = fx.table5_set();
            ("table5", u == want, json!({ "size": u.len(), "expected": want.len(), "diff": diff(&u, &want), "report": report }))
        }
        Table::Drops => {
            let cfg = pipeline(g);
            let z = build_z(&cfg)?;
            let drops = discover_drops(&z.z, cfg.regular_bound)?;
            let key = |t: &Form, p: OddPrime, i: &Form, b: &Form| format!("{t}|{p}|{i}|{b}");
            let got: BTreeSet<String> = drops.iter().map(|d| key(&d.top, d.p, &d.image, &d.bottom)).collect();
            let want: BTreeSet<String> = fx.table3.iter().map(|d| key(&d.top, d.p, &d.image, &d.bottom)).collect();
            let pass = z.z.len() == 78 && got == want;
            let detail = json!({
                "z": z.z.len(), "records": drops.len(),
                "missing": want.difference(&got).collect::<Vec<_>>(),
                "extra": got.difference(&want).collect::<Vec<_>>(),
                "report": z.report,
            });
            ("drops", pass, detail)
        }
    };
    let status = if pass { "PASS" } else { "FAIL" };
    Ok(verdict(json!({ "table": name, "status": status, "detail": detail }), pass, format!("{name}: {status}")))
}

fn pipeline(g: &Global) -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    if let Some(b) = g.bound {
        cfg.psi_bound = b;
    }
    if let Some(c) = g.cap {
        cfg.preimage_cap = c;
    }
    cfg
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.global.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let verbose = cli.global.verbose;
    match run(cli) {
        Ok(out) => {
            match &out.payload {
                Value::String(text) => print!("{text}"),
                v => println!("{}", serde_json::to_string(v).expect("json values serialize")),
            }
            if verbose {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(out.negative as u8)
        }
        Err(e) => {
            println!("{}", json!({ "error": e.to_string() }));
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 })
        }
    }
}
