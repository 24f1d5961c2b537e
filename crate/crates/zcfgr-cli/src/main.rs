//! `zcfgr`: decide reachability, coverability and inclusion for commutative
//! grammars with integer counters and resets; emit solver scripts; transform
//! instances; generate hardness benchmarks.
//!
//! Exit codes: 0 = yes, 1 = no, 2 = unknown, 3 = error or usage problem.
//! Verdict-free commands (simulate, classify, emit-smt, oracle, transforms)
//! exit 0 on success.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use zcfgr::config::{Configuration, Valuation};
use zcfgr::decide::{
    decide_cover, decide_inclusion, decide_reach, decide_zvas_inclusion, Answer, SolverSession,
    Verdict, Witness,
};
use zcfgr::explore::{reach_set_bounded, DEFAULT_NODE_BUDGET};
use zcfgr::grammar::{classify, Grammar};
use zcfgr::hardness::{
    brute_force_pi2ss, brute_force_simss, parse_inclusion_instance, pi2ss_to_simss,
    simss_to_inclusion, to_unary_instance, write_inclusion_instance, write_pi2ss_instance,
    write_simss_instance, LinearInclusionInstance, Pi2SsInstance, DEFAULT_ELEMENT_BOUND,
    DEFAULT_EXPONENT_BOUND,
};
use zcfgr::parikh::{build_reach_formula, build_reach_set_formula, VariableLayout};
use zcfgr::parse::{parse_configuration, parse_grammar, write_grammar};
use zcfgr::presburger::{emit_smt_with_logic, prenex, substitute, Assignment, Formula, Logic};
use zcfgr::reductions::{cover_to_reach, reach_to_cover, CoverQuery, ReachQuery};
use zcfgr::semantics::simulate;

#[derive(Parser)]
#[command(name = "zcfgr", version, about = "Reachability, coverability and inclusion for commutative grammars with integer counters and resets")]
struct Cli {
    /// Print results as a JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Solver timeout in seconds
    #[arg(long, global = true, default_value_t = 60)]
    timeout: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GrammarArg {
    /// Grammar file
    #[arg(short = 'g', long = "grammar")]
    grammar: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reachability between two configurations
    Reach {
        #[command(flatten)]
        grammar: GrammarArg,
        /// Start configuration literal, e.g. "S ; c=100"
        #[arg(long)]
        from: String,
        /// Target configuration literal
        #[arg(long)]
        to: String,
    },
    /// Decide coverability of a threshold configuration
    Cover {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        /// Threshold configuration literal (word exact, counters lower bounds)
        #[arg(long)]
        to: String,
    },
    /// Decide inclusion of reachability sets of two grammars
    Include {
        /// Left grammar file
        #[arg(short = 'g', long = "grammar")]
        lhs: PathBuf,
        /// Right grammar file
        #[arg(short = 'H', long = "rhs-grammar")]
        rhs: PathBuf,
        /// Left initial counters, e.g. "c1=0 c2=3" (missing counters are 0)
        #[arg(long, default_value = "")]
        lhs_init: String,
        /// Right initial counters
        #[arg(long, default_value = "")]
        rhs_init: String,
    },
    /// Print the SMT-LIB2 script for a query without solving it
    EmitSmt {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        /// Query kind: "reach-set" (needs --from) or "reach" (needs --to)
        #[arg(long, default_value = "reach-set")]
        query: String,
        #[arg(long)]
        to: Option<String>,
    },
    /// Replay a run of production ids from a configuration
    Simulate {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        /// Whitespace-separated production ids
        #[arg(long)]
        run: String,
    },
    /// Report the structural subclass of a grammar
    Classify {
        #[command(flatten)]
        grammar: GrammarArg,
    },
    /// Transform a coverability query into a reachability query
    Cover2reach {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Transform a reachability query into a coverability query
    Reach2cover {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Generate hardness instances and optionally run the reduction chain
    #[command(subcommand)]
    Gen(GenCommand),
    /// Rewrite an inclusion instance so all entries lie in [-2, 2]
    ToUnary {
        /// Inclusion instance file (`d r s` header, then A, B, v)
        #[arg(short = 'i', long = "instance")]
        instance: PathBuf,
        /// Override the bit width of the expansion
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Enumerate configurations reachable within a bounded number of steps
    Oracle {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        from: String,
        /// Maximum run length
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Node budget for the breadth-first closure
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Universally-quantified subset sum: --U and --V comma-separated
    Pi2ss {
        #[arg(long = "U", value_name = "LIST", default_value = "")]
        u: String,
        #[arg(long = "V", value_name = "LIST", default_value = "")]
        v: String,
        #[arg(long)]
        t: u64,
        /// Run the full reduction chain and print each verdict
        #[arg(long)]
        chain: bool,
        /// Worker threads for the chain's checks
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Simultaneous subset sum: one target per index below 2^m
    Simss {
        #[arg(long = "W", value_name = "LIST", default_value = "")]
        w: String,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        chain: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decide an inclusion instance file directly
    Incl {
        #[arg(short = 'i', long = "instance")]
        instance: PathBuf,
    },
}

struct Report {
    command: &'static str,
    verdict: Option<Answer>,
    witness: Option<Witness>,
    formula_size: Option<usize>,
    solver_time: Option<Duration>,
    lines: Vec<String>,
    data: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            verdict: None,
            witness: None,
            formula_size: None,
            solver_time: None,
            lines: Vec::new(),
            data: serde_json::Map::new(),
        }
    }

    fn with_verdict(mut self, verdict: &Verdict) -> Self {
        self.verdict = Some(verdict.answer);
        self.witness = verdict.witness.clone();
        self.formula_size = Some(verdict.formula_size);
        self.solver_time = Some(verdict.solver_time);
        self
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn datum(&mut self, key: &str, value: serde_json::Value) {
        self.data.insert(key.to_string(), value);
    }

    fn witness_json(&self) -> serde_json::Value {
        match &self.witness {
            None => serde_json::Value::Null,
            Some(Witness::Reach(w)) => serde_json::json!({ "run": w.run }),
            Some(Witness::InclusionCounterexample(z)) => serde_json::Value::Object(
                z.iter().map(|(c, v)| (c.to_string(), serde_json::json!(v))).collect(),
            ),
            Some(Witness::ZvasCounterexample(x)) => serde_json::json!({ "x": x }),
        }
    }

    fn print(&self, json: bool) {
        if json {
            let mut object = serde_json::Map::new();
            object.insert("command".into(), serde_json::json!(self.command));
            object.insert(
                "verdict".into(),
                match self.verdict {
                    Some(answer) => serde_json::json!(answer.to_string()),
                    None => serde_json::Value::Null,
                },
            );
            object.insert("witness".into(), self.witness_json());
            object.insert(
                "formula_size".into(),
                self.formula_size.map_or(serde_json::Value::Null, |s| serde_json::json!(s)),
            );
            object.insert(
                "solver_time_ms".into(),
                self.solver_time
                    .map_or(serde_json::Value::Null, |d| serde_json::json!(d.as_millis() as u64)),
            );
            for (key, value) in &self.data {
                object.insert(key.clone(), value.clone());
            }
            println!("{}", serde_json::Value::Object(object));
        } else {
            for line in &self.lines {
                println!("{line}");
            }
            if let Some(answer) = self.verdict {
                println!("verdict: {answer}");
            }
            match &self.witness {
                Some(Witness::Reach(w)) if !w.run.is_empty() => {
                    println!("witness: {}", w.run.join(" "));
                }
                Some(Witness::Reach(_)) => println!("witness: (empty run)"),
                Some(Witness::InclusionCounterexample(z)) => {
                    let parts: Vec<String> = z.iter().map(|(c, v)| format!("{c}={v}")).collect();
                    println!("counterexample: {}", parts.join(" "));
                }
                Some(Witness::ZvasCounterexample(x)) => {
                    let parts: Vec<String> = x.iter().map(i64::to_string).collect();
                    println!("counterexample x: {}", parts.join(" "));
                }
                None => {}
            }
        }
    }

    fn exit_code(&self) -> u8 {
        match self.verdict {
            Some(Answer::Yes) | None => 0,
            Some(Answer::No) => 1,
            Some(Answer::Unknown) => 2,
        }
    }
}

fn load_grammar(path: &PathBuf) -> Result<Grammar> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read grammar file {}", path.display()))?;
    parse_grammar(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_config(text: &str, g: &Grammar) -> Result<Configuration> {
    parse_configuration(text, g).map_err(|e| anyhow!("bad configuration literal `{text}`: {e}"))
}

fn parse_counters(text: &str, g: &Grammar) -> Result<Valuation> {
    let literal = format!("{} ; {}", g.axiom(), text);
    Ok(load_config(&literal, g)?.counters)
}

fn parse_list(text: &str) -> Result<Vec<u64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| anyhow!("bad number `{s}` in list")))
        .collect()
}

fn session(timeout: u64, logic: Logic) -> Result<SolverSession> {
    Ok(SolverSession::from_env(Duration::from_secs(timeout), logic)?)
}

fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Reach { grammar, from, to } => {
            let g = load_grammar(&grammar.grammar)?;
            let q = ReachQuery {
                from: load_config(&from, &g)?,
                to: load_config(&to, &g)?,
                grammar: g,
            };
            let verdict = decide_reach(&q, &session(cli.timeout, Logic::QfLia)?)?;
            Ok(Report::new("reach").with_verdict(&verdict))
        }
        Command::Cover { grammar, from, to } => {
            let g = load_grammar(&grammar.grammar)?;
            let q = CoverQuery {
                from: load_config(&from, &g)?,
                to: load_config(&to, &g)?,
                grammar: g,
            };
            let verdict = decide_cover(&q, &session(cli.timeout, Logic::QfLia)?)?;
            Ok(Report::new("cover").with_verdict(&verdict))
        }
        Command::Include { lhs, rhs, lhs_init, rhs_init } => {
            let g = load_grammar(&lhs)?;
            let h = load_grammar(&rhs)?;
            let u = parse_counters(&lhs_init, &g)?;
            let v = parse_counters(&rhs_init, &h)?;
            let verdict = decide_inclusion(&g, &u, &h, &v, &session(cli.timeout, Logic::Lia)?)?;
            Ok(Report::new("include").with_verdict(&verdict))
        }
        Command::EmitSmt { grammar, from, query, to } => {
            let g = load_grammar(&grammar.grammar)?;
            let from = load_config(&from, &g)?;
            let formula = match query.as_str() {
                "reach-set" => build_reach_set_formula(&g, &from)?,
                "reach" => {
                    let to =
                        to.ok_or_else(|| anyhow!("--query reach needs a --to configuration"))?;
                    let to = load_config(&to, &g)?;
                    let layout = VariableLayout::new(&g);
                    let mut binding = Assignment::default();
                    for a in g.nonterminals() {
                        binding.set(layout.s(a).name, from.word.count(a) as i64);
                        binding.set(layout.t(a).name, to.word.count(a) as i64);
                    }
                    for c in g.counters() {
                        binding.set(layout.u(c).name, from.counters.get(c));
                        binding.set(layout.v(c).name, to.counters.get(c));
                    }
                    substitute(&build_reach_formula(&g)?, &binding)
                        .expect("endpoints are free in the reach formula")
                }
                other => bail!("unknown query kind `{other}` (expected reach-set or reach)"),
            };
            // emit exactly what the decision procedure would send
            let mut opened = prenex(&formula);
            while let Formula::Exists(_, body) = opened {
                opened = *body;
            }
            let logic =
                if opened.is_quantifier_free() { Logic::QfLia } else { Logic::Lia };
            let script = emit_smt_with_logic(&opened, logic)?;
            let mut report = Report::new("emit-smt");
            report.line(script.trim_end().to_string());
            report.datum("formula_size", serde_json::json!(formula.size()));
            Ok(report)
        }
        Command::Simulate { grammar, from, run } => {
            let g = load_grammar(&grammar.grammar)?;
            let c0 = load_config(&from, &g)?;
            let ids: Vec<&str> = run.split_whitespace().collect();
            let end = simulate(&g, &c0, &ids)?;
            let mut report = Report::new("simulate");
            report.line(end.display_with(&g));
            report.datum("end", serde_json::json!(end.display_with(&g)));
            Ok(report)
        }
        Command::Classify { grammar } => {
            let g = load_grammar(&grammar.grammar)?;
            let class = classify(&g);
            let mut report = Report::new("classify");
            report.line(class.to_string());
            report.datum("class", serde_json::json!(class.to_string()));
            Ok(report)
        }
        Command::Cover2reach { grammar, from, to } => {
            let g = load_grammar(&grammar.grammar)?;
            let q = CoverQuery {
                from: load_config(&from, &g)?,
                to: load_config(&to, &g)?,
                grammar: g,
            };
            let reach = cover_to_reach(&q)?;
            let mut report = Report::new("cover2reach");
            let text = write_grammar(&reach.grammar);
            report.line(text.trim_end().to_string());
            report.line(format!("# from: {}", reach.from.display_with(&reach.grammar)));
            report.line(format!("# to: {}", reach.to.display_with(&reach.grammar)));
            report.datum("grammar", serde_json::json!(text));
            report.datum("from", serde_json::json!(reach.from.display_with(&reach.grammar)));
            report.datum("to", serde_json::json!(reach.to.display_with(&reach.grammar)));
            Ok(report)
        }
        Command::Reach2cover { grammar, from, to } => {
            let g = load_grammar(&grammar.grammar)?;
            let q = ReachQuery {
                from: load_config(&from, &g)?,
                to: load_config(&to, &g)?,
                grammar: g,
            };
            let cover = reach_to_cover(&q)?;
            let mut report = Report::new("reach2cover");
            let text = write_grammar(&cover.grammar);
            report.line(text.trim_end().to_string());
            report.line(format!("# from: {}", cover.from.display_with(&cover.grammar)));
            report.line(format!("# to: {}", cover.to.display_with(&cover.grammar)));
            report.datum("grammar", serde_json::json!(text));
            report.datum("from", serde_json::json!(cover.from.display_with(&cover.grammar)));
            report.datum("to", serde_json::json!(cover.to.display_with(&cover.grammar)));
            Ok(report)
        }
        Command::Gen(gen) => run_gen(gen, cli.timeout),
        Command::ToUnary { instance, bits } => {
            let text = std::fs::read_to_string(&instance)
                .with_context(|| format!("cannot read instance {}", instance.display()))?;
            let inst = parse_inclusion_instance(&text)?;
            let unary = to_unary_instance(&inst, bits)?;
            let mut report = Report::new("to-unary");
            let rendered = write_inclusion_instance(&unary);
            report.line(rendered.trim_end().to_string());
            report.datum("instance", serde_json::json!(rendered));
            Ok(report)
        }
        Command::Oracle { grammar, from, bound, budget } => {
            let g = load_grammar(&grammar.grammar)?;
            let c0 = load_config(&from, &g)?;
            let set = reach_set_bounded(&g, &c0, bound, budget)?;
            let mut report = Report::new("oracle");
            for c in &set {
                report.line(c.display_with(&g));
            }
            report.line(format!("# {} configurations within {} steps", set.len(), bound));
            report.datum(
                "configurations",
                serde_json::json!(set.iter().map(|c| c.display_with(&g)).collect::<Vec<_>>()),
            );
            report.datum("count", serde_json::json!(set.len()));
            Ok(report)
        }
    }
}

/// Runs the three chain checks, optionally on worker threads.
fn chain_verdicts(
    p: Option<&Pi2SsInstance>,
    inst: &LinearInclusionInstance,
    timeout: u64,
    jobs: usize,
) -> Result<(Option<bool>, Answer)> {
    let brute = p.map(|p| brute_force_pi2ss(p, DEFAULT_ELEMENT_BOUND)).transpose()?;
    let solver = session(timeout, Logic::Lia)?;
    if jobs > 1 {
        let handle = {
            let solver = solver.clone();
            let inst = inst.clone();
            std::thread::spawn(move || decide_zvas_inclusion(&inst, &solver))
        };
        let verdict = handle.join().map_err(|_| anyhow!("solver worker panicked"))??;
        Ok((brute, verdict.answer))
    } else {
        let verdict = decide_zvas_inclusion(inst, &solver)?;
        Ok((brute, verdict.answer))
    }
}

fn run_gen(gen: GenCommand, timeout: u64) -> Result<Report> {
    match gen {
        GenCommand::Pi2ss { u, v, t, chain, jobs } => {
            let p = Pi2SsInstance::new(parse_list(&u)?, parse_list(&v)?, t);
            let mut report = Report::new("gen-pi2ss");
            report.line(write_pi2ss_instance(&p).trim_end().to_string());
            if chain {
                let s = pi2ss_to_simss(&p)?;
                report.line(write_simss_instance(&s).trim_end().to_string());
                let inst = simss_to_inclusion(&s)?;
                report.line(write_inclusion_instance(&inst).trim_end().to_string());
                let brute_simss = brute_force_simss(&s, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND)?;
                let (brute, answer) = chain_verdicts(Some(&p), &inst, timeout, jobs)?;
                let brute = brute.expect("pi2ss oracle ran");
                if brute != brute_simss || Answer::Unknown != answer && (answer == Answer::Yes) != brute
                {
                    bail!(
                        "chain disagrees: pi2ss {brute}, simss {brute_simss}, solver {answer}"
                    );
                }
                report.verdict = Some(answer);
                report.datum("pi2ss_brute", serde_json::json!(brute));
                report.datum("simss_brute", serde_json::json!(brute_simss));
            }
            Ok(report)
        }
        GenCommand::Simss { w, h, m, t, chain, jobs } => {
            let s = zcfgr::hardness::SimSsInstance::new(parse_list(&w)?.into_iter(), h, m, t)?;
            let mut report = Report::new("gen-simss");
            report.line(write_simss_instance(&s).trim_end().to_string());
            if chain {
                let inst = simss_to_inclusion(&s)?;
                report.line(write_inclusion_instance(&inst).trim_end().to_string());
                let brute = brute_force_simss(&s, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND)?;
                let (_, answer) = chain_verdicts(None, &inst, timeout, jobs)?;
                if answer != Answer::Unknown && (answer == Answer::Yes) != brute {
                    bail!("chain disagrees: simss {brute}, solver {answer}");
                }
                report.verdict = Some(answer);
                report.datum("simss_brute", serde_json::json!(brute));
            }
            Ok(report)
        }
        GenCommand::Incl { instance } => {
            let text = std::fs::read_to_string(&instance)
                .with_context(|| format!("cannot read instance {}", instance.display()))?;
            let inst = parse_inclusion_instance(&text)?;
            let verdict = decide_zvas_inclusion(&inst, &session(timeout, Logic::Lia)?)?;
            Ok(Report::new("gen-incl").with_verdict(&verdict))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(3);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            report.print(json);
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
