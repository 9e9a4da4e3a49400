use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seatcheck::bisim::{shared_probes, BisimReport, Clause, EquivReport};
use seatcheck::classify::{
    self, CheckMode, ClassProperty, Flag, SchemeOptions, SchemeReport, Status,
};
use seatcheck::gallery;
use seatcheck::io::{model_to_json, read_model, relation_from_json, relation_to_json, ModelFile};
use seatcheck::{
    check_bisim, disjoint_union, evaluate, largest_bisim, modal_equiv_test, parse, Error, Limits,
    Model, Relation, StateSet,
};

#[derive(Parser)]
#[command(
    name = "seatcheck",
    version,
    about = "Model checker for semiring-annotated topological spaces"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scheme and bisimulation checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula: its extent, or its truth at one state.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Report strength, boundedness, uniformity and cost-seat membership.
    Classify {
        #[arg(long)]
        model: PathBuf,
    },
    /// Check an axiom suite on the seat of a model.
    Axioms {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Proposition names for the two formula variables, e.g. "p,q".
        #[arg(long, default_value = "p,q")]
        vars: String,
        /// Extra resource literals to probe, comma separated.
        #[arg(long)]
        lits: Option<String>,
        /// Instance budget in exhaustive mode.
        #[arg(long, default_value_t = 1 << 22)]
        budget: usize,
        /// Exit 1 on a counterexample and 3 unless every scheme is valid.
        #[arg(long)]
        expect_valid: bool,
    },
    /// Check a relation, or compute the largest bisimulation.
    Bisim {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
        /// Compute a global bisimulation (ignored when checking a given relation).
        #[arg(long)]
        global: bool,
        /// Also compare related states on all formulas up to this depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Resource literals for the formula comparison, comma separated.
        #[arg(long)]
        lits: Option<String>,
        /// Where to write a computed relation.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disjoint union of models.
    Union {
        #[arg(required = true, num_args = 2..)]
        models: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write gallery models (and the fixture relations z12, z13) as JSON.
    Gallery {
        #[arg(required = true)]
        names: Vec<String>,
        /// A file for one name, otherwise a directory receiving NAME.json.
        #[arg(short, long)]
        output: PathBuf,
        /// Parameters for rbac, graph, agents or borel, as JSON.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Word length for streams.
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Cost of obtaining an open at a state.
    Cost {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated state names; empty for the empty set.
        #[arg(long)]
        open: String,
        #[arg(long)]
        state: String,
    },
    /// Check the seat conditions on the annotation as written.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

const GALLERY: [&str; 5] = ["streams", "rbac", "graph", "agents", "borel"];

/// Outcome of a command that ran to completion.
struct Done {
    code: u8,
    text: String,
    json: Value,
}

impl Done {
    fn ok(text: String, json: Value) -> Done {
        Done {
            code: 0,
            text,
            json,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(&cli.command) {
        Ok(done) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&done.json).expect("json")
                );
            } else if !done.text.is_empty() {
                println!("{}", done.text.trim_end());
            }
            ExitCode::from(done.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("seatcheck: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command) -> Result<Done, Error> {
    let limits = Limits::from_env();
    match cmd {
        Command::Check {
            model,
            formula,
            state,
        } => {
            let m = read_model(model, &limits)?;
            let f = parse(formula)?;
            let ext = evaluate(&m, &f)?;
            let t = m.topology();
            match state {
                None => Ok(Done::ok(
                    t.format_set(ext),
                    json!({ "formula": f.to_string(), "extent": t.names_of(ext) }),
                )),
                Some(x) => {
                    let holds = ext.contains(t.require_state(x)?);
                    Ok(Done {
                        code: u8::from(!holds),
                        text: holds.to_string(),
                        json: json!({ "formula": f.to_string(), "state": x, "holds": holds }),
                    })
                }
            }
        }
        Command::Classify { model } => {
            let m = read_model(model, &limits)?;
            Ok(classify_output(&m))
        }
        Command::Axioms {
            model,
            suite,
            mode,
            samples,
            seed,
            vars,
            lits,
            budget,
            expect_valid,
        } => {
            let m = read_model(model, &limits)?;
            let list = classify::suite(suite)?;
            let vars = split(vars);
            let vars: [String; 2] = match vars.as_slice() {
                [a, b] if a != b => [a.clone(), b.clone()],
                _ => return Err(structural("--vars takes two distinct names, e.g. \"p,q\"")),
            };
            let extra = lits
                .as_deref()
                .map(split)
                .unwrap_or_default()
                .iter()
                .map(|l| m.semiring().parse_element(l))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = SchemeOptions {
                mode: match mode {
                    Mode::Exhaustive => CheckMode::Exhaustive,
                    Mode::Random => CheckMode::Random { samples: *samples },
                },
                budget: *budget,
                seed: *seed,
                lits: extra,
                vars,
            };
            let reports = classify::check_suite(&m.seat, &list, &opts)?;
            Ok(axioms_output(&m, &reports, *expect_valid))
        }
        Command::Bisim {
            left,
            right,
            relation,
            global,
            depth,
            lits,
            output,
        } => {
            let m1 = read_model(left, &limits)?;
            let m2 = read_model(right, &limits)?;
            let (z, computed) = match relation {
                Some(path) => (relation_from_json(&read(path)?, &m1, &m2)?, false),
                None => (largest_bisim(&m1, &m2, *global, &[])?, true),
            };
            if let (Some(path), true) = (output, computed) {
                write(path, &relation_to_json(&z, &m1, &m2))?;
            }
            let report = check_bisim(&m1, &m2, &z, &[])?;
            let equiv = match depth {
                Some(d) => {
                    let lits = match lits {
                        Some(l) => split(l),
                        None => default_lits(&m1, &m2),
                    };
                    Some(modal_equiv_test(&m1, &m2, &z, *d, &lits, z.global)?)
                }
                None => None,
            };
            Ok(bisim_output(
                &m1,
                &m2,
                &z,
                computed,
                &report,
                equiv.as_ref(),
            ))
        }
        Command::Union { models, output } => {
            let ms = models
                .iter()
                .map(|p| read_model(p, &limits))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Model> = ms.iter().collect();
            let u = disjoint_union(&refs)?;
            write(output, &model_to_json(&u))?;
            Ok(Done::ok(
                format!("wrote {} states to {}", u.len(), output.display()),
                json!({ "output": output, "states": u.topology().states() }),
            ))
        }
        Command::Gallery {
            names,
            output,
            params,
            depth,
        } => gallery_output(names, output, params.as_deref(), *depth),
        Command::Cost { model, open, state } => {
            let m = read_model(model, &limits)?;
            let t = m.topology();
            let u = t.set_from_names(&split(open))?;
            let x = t.require_state(state)?;
            let j = m.seat.cost(u, x)?;
            let value = m.semiring().name(j.value);
            let text = if j.attained {
                value.clone()
            } else {
                format!("{value} (not attained)")
            };
            Ok(Done::ok(
                text,
                json!({ "open": t.names_of(u), "state": state, "cost": value, "attained": j.attained }),
            ))
        }
        Command::Validate { model } => {
            let f: ModelFile = serde_json::from_str(&read(model)?)
                .map_err(|e| structural(&format!("invalid JSON: {e}")))?;
            let violations = f.violations(&limits)?;
            let m = f.build(&limits)?;
            let t = m.topology();
            let rows: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({
                        "condition": v.condition,
                        "state": t.states()[v.state],
                        "opens": v.opens.iter().map(|&o| t.names_of(o)).collect::<Vec<_>>(),
                        "detail": v.detail,
                    })
                })
                .collect();
            let text = if violations.is_empty() {
                "valid".to_string()
            } else {
                violations
                    .iter()
                    .map(|v| format!("condition ({}): {}", v.condition, v.detail))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Done {
                code: if violations.is_empty() { 0 } else { 2 },
                text,
                json: json!({ "valid": violations.is_empty(), "violations": rows }),
            })
        }
    }
}

fn structural(msg: &str) -> Error {
    Error::Structural(msg.to_string())
}

fn split(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| structural(&format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, format!("{text}\n"))
        .map_err(|e| structural(&format!("cannot write {}: {e}", path.display())))
}

fn default_lits(m1: &Model, m2: &Model) -> Vec<String> {
    let s = m1.semiring();
    match s.elements() {
        Some(all) => all.into_iter().map(|e| s.name(e)).collect(),
        None => shared_probes(m1, m2, &[])
            .into_iter()
            .map(|e| s.name(e))
            .collect(),
    }
}

fn flag_text(m: &Model, f: &Flag) -> (String, Value) {
    let t = m.topology();
    let s = m.semiring();
    match f {
        Flag::Holds => ("yes".into(), json!(true)),
        Flag::Unknown(why) => (format!("unknown ({why})"), json!(null)),
        Flag::Fails(w) => {
            let opens: Vec<String> = w.opens.iter().map(|&o| t.format_set(o)).collect();
            let states: Vec<&str> = w.states.iter().map(|&x| t.states()[x].as_str()).collect();
            let elements: Vec<String> = w.elements.iter().map(|&e| s.name(e)).collect();
            let mut parts = Vec::new();
            if !opens.is_empty() {
                parts.push(format!("opens {}", opens.join(" ")));
            }
            if !states.is_empty() {
                parts.push(format!("states {}", states.join(" ")));
            }
            if !elements.is_empty() {
                parts.push(format!("elements {}", elements.join(" ")));
            }
            (
                format!("no ({})", parts.join("; ")),
                json!({ "opens": w.opens.iter().map(|&o| t.names_of(o)).collect::<Vec<_>>(),
                        "states": states, "elements": elements }),
            )
        }
    }
}

fn classify_output(m: &Model) -> Done {
    let rep = classify::classify(&m.seat);
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    for p in ClassProperty::ALL {
        let (t, j) = flag_text(m, rep.get(p));
        text.push_str(&format!("{:<13} {t}\n", p.name()));
        obj.insert(p.name().to_string(), j);
    }
    Done::ok(text, Value::Object(obj))
}

fn axioms_output(m: &Model, reports: &[SchemeReport], expect_valid: bool) -> Done {
    let t = m.topology();
    let s = m.semiring();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut overall = Status::Valid;
    for r in reports {
        overall = overall.merge(r.status);
        text.push_str(&format!(
            "{:<18} {:<14} {} instances\n",
            r.scheme,
            r.status.name(),
            r.instances
        ));
        let mut row = json!({
            "scheme": r.scheme,
            "class": r.class.tag(),
            "status": r.status.name(),
            "instances": r.instances,
        });
        if let Some(cx) = &r.counterexample {
            let val: Vec<String> = cx
                .valuation
                .iter()
                .map(|(p, v)| format!("{p}={}", t.format_set(*v)))
                .collect();
            text.push_str(&format!(
                "  fails at {} with {}: {}\n",
                t.states()[cx.state],
                val.join(", "),
                cx.instance
            ));
            row["counterexample"] = json!({
                "state": t.states()[cx.state],
                "a": cx.a.map(|e| s.name(e)),
                "b": cx.b.map(|e| s.name(e)),
                "valuation": cx.valuation.iter().map(|(p, v)| (p.clone(), t.names_of(*v))).collect::<std::collections::BTreeMap<_, _>>(),
                "instance": cx.instance,
            });
        }
        rows.push(row);
    }
    let code = match overall {
        Status::Counterexample if expect_valid => 1,
        Status::Inconclusive => 3,
        Status::NotRefuted if expect_valid => 3,
        _ => 0,
    };
    Done {
        code,
        text,
        json: json!({ "status": overall.name(), "schemes": rows }),
    }
}

fn bisim_output(
    m1: &Model,
    m2: &Model,
    z: &Relation,
    computed: bool,
    report: &BisimReport,
    equiv: Option<&EquivReport>,
) -> Done {
    let (t1, t2) = (m1.topology(), m2.topology());
    let pairs = z.names(m1, m2);
    let mut text = String::new();
    if computed {
        let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        text.push_str(&format!(
            "largest{} bisimulation: {{{}}}\n",
            if z.global { " global" } else { "" },
            shown.join(", ")
        ));
    }
    let mut code = 0;
    let mut j = json!({
        "relation": { "global": z.global, "pairs": pairs },
        "computed": computed,
        "ok": report.ok(),
    });
    match &report.violation {
        None => text.push_str("ok\n"),
        Some(v) => {
            code = 1;
            text.push_str(&format!("clause {} fails: {}\n", v.clause, v.detail));
            j["violation"] = json!({
                "clause": v.clause.roman(),
                "pair": v.pair.map(|(a, b)| (t1.states()[a].clone(), t2.states()[b].clone())),
                "open": v.open.map(|o: StateSet| match v.clause {
                    Clause::Back | Clause::EvidenceBack => t2.names_of(o),
                    _ => t1.names_of(o),
                }),
                "element": v.element.map(|e| m1.semiring().name(e)),
                "detail": v.detail,
            });
        }
    }
    if let Some(e) = equiv {
        let fragment = if e.global_fragment {
            "with A"
        } else {
            "without A"
        };
        text.push_str(&format!(
            "{} related pairs compared up to depth {} ({fragment}): {} disagreements\n",
            e.pairs_checked,
            e.depth,
            e.disagreements.len()
        ));
        if !e.complete {
            text.push_str("formula corpus truncated at the class cap\n");
            code = code.max(3);
        }
        for d in &e.disagreements {
            text.push_str(&format!(
                "  ({}, {}) separated by {}\n",
                t1.states()[d.pair.0],
                t2.states()[d.pair.1],
                d.formula
            ));
        }
        if !e.disagreements.is_empty() {
            code = 1;
        }
        j["equivalence"] = json!({
            "depth": e.depth,
            "complete": e.complete,
            "global_fragment": e.global_fragment,
            "disagreements": e.disagreements.iter().map(|d| json!({
                "pair": (t1.states()[d.pair.0].clone(), t2.states()[d.pair.1].clone()),
                "formula": d.formula.to_string(),
            })).collect::<Vec<_>>(),
        });
    }
    Done {
        code,
        text,
        json: j,
    }
}

fn params<T: serde::de::DeserializeOwned>(path: Option<&Path>, default: T) -> Result<T, Error> {
    match path {
        None => Ok(default),
        Some(p) => serde_json::from_str(&read(p)?)
            .map_err(|e| structural(&format!("invalid parameters in {}: {e}", p.display()))),
    }
}

fn gallery_item(name: &str, params_file: Option<&Path>, depth: usize) -> Result<String, Error> {
    let model = match name {
        "streams" => gallery::streams(depth, None)?,
        "rbac" => gallery::rbac(&params(params_file, gallery::RbacParams::example())?)?,
        "graph" => {
            gallery::graph_exploration(&params(params_file, gallery::GraphParams::example())?)?
        }
        "agents" => gallery::agents(&params(params_file, gallery::AgentsParams::example())?)?,
        "borel" => gallery::borel_cost(&params(params_file, gallery::BorelParams::example())?)?,
        "z12" => {
            return Ok(relation_to_json(
                &gallery::z12(),
                &gallery::a12_m1(),
                &gallery::a12_m2(),
            ))
        }
        "z13" => {
            return Ok(relation_to_json(
                &gallery::z13(),
                &gallery::a13_m1(),
                &gallery::a13_m2(),
            ))
        }
        other => gallery::fixture(other).ok_or_else(|| {
            structural(&format!(
                "unknown gallery name {other:?}; known: {}, {}, z12, z13",
                GALLERY.join(", "),
                gallery::FIXTURES.join(", ")
            ))
        })?,
    };
    Ok(model_to_json(&model))
}

fn gallery_output(
    names: &[String],
    output: &Path,
    params_file: Option<&Path>,
    depth: usize,
) -> Result<Done, Error> {
    if params_file.is_some() && names.len() > 1 {
        return Err(structural("--params applies to a single gallery name"));
    }
    let into_dir = names.len() > 1 || output.is_dir();
    if into_dir {
        fs::create_dir_all(output)
            .map_err(|e| structural(&format!("cannot create {}: {e}", output.display())))?;
    }
    let mut written = Vec::new();
    for name in names {
        let text = gallery_item(name, params_file, depth)?;
        let path = if into_dir {
            output.join(format!("{name}.json"))
        } else {
            output.to_path_buf()
        };
        write(&path, &text)?;
        written.push(path);
    }
    let text = written
        .iter()
        .map(|p| format!("wrote {}", p.display()))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Done::ok(text, json!({ "written": written })))
}
