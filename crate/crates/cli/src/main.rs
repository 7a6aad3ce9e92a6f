use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use relmodal::bench::{
    corpus_macros, gen_random_3cnf, load_corpus, parse_corpus, render_records, render_summary, render_table,
    run_bench, CorpusEntry, RandomCnfSpec,
};
use relmodal::cdp::{decide, ltl_decide, to_kripke, Budget, LtlOutcome, Schedule, VerdictKind};
use relmodal::fol::{flatten, tptp_line, Role, Term};
use relmodal::formula::{parse_modal, print_modal, ModalFormula};
use relmodal::model::{ground, ModelSearch, ModelSearchResult};
use relmodal::prover::{Saturation, SaturationLimits, SaturationOutcome};
use relmodal::translate::{
    assemble, assemble_split, ltl_assemble, translate, translate_temporal, ModalSystem, SchemaSet,
};

/// Modal and next-time temporal logic by relational translation, resolution
/// and finite model search.
#[derive(Parser)]
#[command(name = "relmodal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first-order translation of a formula.
    Translate(TranslateArgs),
    /// Run the resolution prover alone on the validity question.
    Prove(ProveArgs),
    /// Search for a smallest countermodel alone.
    FindModel(FindModelArgs),
    /// Decide validity by racing the prover against the model finder.
    Decide(DecideArgs),
    /// Decide satisfiability of a next-time formula over lasso words.
    LtlSat(LtlArgs),
    /// Run the formula corpus, or random formulas, and print a table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// Modal system by name, such as K, KT, S4, S5 or KD45.
    #[arg(long, default_value = "K", conflicts_with = "schemas")]
    system: String,
    /// Modal system as a schema string over D, T, B, 4 and 5, such as D45.
    #[arg(long)]
    schemas: Option<String>,
    /// Give one agent index its own system, as INDEX=SYSTEM. Repeatable.
    #[arg(long = "agent", value_name = "INDEX=SYSTEM")]
    agents: Vec<String>,
}

impl SystemArgs {
    fn system(&self) -> Result<ModalSystem> {
        let mut s = match &self.schemas {
            Some(text) => ModalSystem::from_schemas(text.parse::<SchemaSet>().map_err(|e| anyhow!("{e}"))?),
            None => ModalSystem::named(&self.system)?,
        };
        for a in &self.agents {
            let (index, name) = a.split_once('=').ok_or_else(|| anyhow!("--agent expects INDEX=SYSTEM, got {a}"))?;
            s = s.with_override(index.trim(), ModalSystem::named(name)?.schemas());
        }
        Ok(s)
    }
}

#[derive(Args)]
struct FormulaArg {
    /// Formula in ASCII syntax: ~ & | -> <-> box dia X [i] <i>.
    formula: String,
    /// Expand the corpus abbreviations (F, M, Pt, H, L, Dum and friends).
    #[arg(long)]
    macros: bool,
}

impl FormulaArg {
    fn parse(&self) -> Result<ModalFormula> {
        let f = if self.macros { corpus_macros().expand(&self.formula) } else { parse_modal(&self.formula) };
        f.with_context(|| format!("cannot parse formula {:?}", self.formula))
    }
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Wall-clock seconds per question (per direction of a biconditional).
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Largest countermodel size tried.
    #[arg(long, default_value_t = relmodal::model::DEFAULT_N_MAX)]
    nmax: usize,
    /// Plain binary resolution instead of negative literal selection.
    #[arg(long)]
    plain: bool,
    /// Run prover and model finder on two threads instead of interleaving.
    #[arg(long)]
    threads: bool,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget> {
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            bail!("--budget must be a nonnegative number of seconds");
        }
        if self.nmax == 0 {
            bail!("--nmax must be at least 1");
        }
        let mut b = Budget::default().with_time(Duration::from_secs_f64(self.budget));
        b.n_max = self.nmax;
        b.options.negative_selection = !self.plain;
        if self.threads {
            b.schedule = Schedule::Threads;
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Readable first-order formulas and clauses.
    Fol,
    /// The validity question as TPTP `fof` annotated formulas.
    Tptp,
    /// Ground countermodel clauses at `--size` in DIMACS CNF.
    Dimacs,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    system: SystemArgs,
    /// Translate at this world constant only, without frame axioms.
    #[arg(long, value_name = "CONST")]
    at: Option<String>,
    #[arg(long, value_enum, default_value_t = Emit::Fol)]
    emit: Emit,
    /// Domain size for DIMACS output.
    #[arg(long, default_value_t = 2)]
    size: usize,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Print the proofs.
    #[arg(long)]
    proof: bool,
}

#[derive(Args)]
struct FindModelArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Print the full report with timings and evidence.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct LtlArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    budget: BudgetArgs,
    /// Corpus file in stanza format instead of the built-in corpus.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Only entries whose id contains this text. Repeatable.
    #[arg(long)]
    only: Vec<String>,
    /// Entries decided in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print one `key=value` line per result after the table.
    #[arg(long)]
    records: bool,
    /// Decide this many random 3CNF formulas instead of the corpus.
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    /// Seed of the first random formula; later ones use the next seeds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep complementary literals out of random clauses.
    #[arg(long)]
    filtered: bool,
    #[arg(long, default_value_t = 3)]
    atoms: usize,
    #[arg(long, default_value_t = 5)]
    clauses: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// System for random formulas.
    #[arg(long, default_value = "K")]
    system: String,
}

const MISMATCH: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            e.print().ok();
            return ExitCode::from(if usage { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let out = &mut std::io::stdout().lock();
    match cli.command {
        Command::Translate(a) => cmd_translate(a, out),
        Command::Prove(a) => cmd_prove(a, out),
        Command::FindModel(a) => cmd_find_model(a, out),
        Command::Decide(a) => cmd_decide(a, out),
        Command::LtlSat(a) => cmd_ltl(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

fn cmd_translate(a: TranslateArgs, out: &mut impl Write) -> Result<u8> {
    let phi = a.formula.parse()?;
    if let Some(at) = &a.at {
        let w = Term::constant(at.as_str());
        let tr = if phi.has_next() { translate_temporal(&phi, &w)? } else { translate(&phi, &w)? };
        match a.emit {
            Emit::Fol => writeln!(out, "{tr}")?,
            Emit::Tptp => writeln!(out, "{}", tptp_line("tr", Role::Hypothesis, &tr))?,
            Emit::Dimacs => bail!("--emit dimacs needs a whole problem, drop --at"),
        }
        return Ok(0);
    }
    if phi.has_next() {
        let p = ltl_assemble(&phi)?;
        match a.emit {
            Emit::Fol => {
                writeln!(out, "formula: {}", p.formula)?;
                writeln!(out, "clauses:")?;
                for c in &p.clauses {
                    writeln!(out, "  {c}")?;
                }
            }
            Emit::Tptp => writeln!(out, "{}", tptp_line("satisfiable", Role::Axiom, &p.formula))?,
            Emit::Dimacs => write!(out, "{}", ground(&flatten(&p.clauses), a.size)?.to_dimacs())?,
        }
        return Ok(0);
    }
    let p = assemble(&phi, &a.system.system()?)?;
    match a.emit {
        Emit::Fol => {
            writeln!(out, "system: {}", p.system)?;
            for ax in &p.axioms {
                writeln!(out, "axiom: {ax}")?;
            }
            writeln!(out, "validity: {}", p.validity_formula)?;
            writeln!(out, "refutation clauses:")?;
            for c in &p.refutation_clauses {
                writeln!(out, "  {c}")?;
            }
            writeln!(out, "countermodel clauses:")?;
            for c in &p.countermodel_clauses {
                writeln!(out, "  {c}")?;
            }
        }
        Emit::Tptp => write!(out, "{}", p.to_tptp())?,
        Emit::Dimacs => write!(out, "{}", ground(&flatten(&p.countermodel_clauses), a.size)?.to_dimacs())?,
    }
    Ok(0)
}

fn cmd_prove(a: ProveArgs, out: &mut impl Write) -> Result<u8> {
    let phi = a.formula.parse()?;
    let budget = a.budget.budget()?;
    let limits = SaturationLimits { max_time: Some(budget.time), ..budget.limits };
    let mut code = 0;
    let mut proved = 0;
    let problems = assemble_split(&phi, &a.system.system()?)?;
    let total = problems.len();
    for (d, p) in problems {
        let mut sat = Saturation::new(&p.refutation_clauses, limits, budget.options);
        let outcome = sat.run(None);
        let s = sat.stats();
        let secs = s.elapsed.as_secs_f64();
        match outcome {
            SaturationOutcome::Refutation(proof) => {
                proved += 1;
                writeln!(out, "{d} {}: proved in {secs:.3}s ({} steps, {} given)", print_modal(&p.goal), proof.len(), s.given)?;
                if a.proof {
                    write!(out, "{proof}")?;
                }
            }
            SaturationOutcome::Saturated => {
                writeln!(out, "{d} {}: not valid, saturated in {secs:.3}s ({} kept)", print_modal(&p.goal), s.kept)?;
            }
            SaturationOutcome::ResourceOut(r) => {
                code = UNKNOWN;
                writeln!(out, "{d} {}: unknown, out of {:?} after {secs:.3}s", print_modal(&p.goal), r.reason)?;
            }
        }
    }
    let headline = match (proved == total, code) {
        (true, _) => "Valid",
        (false, UNKNOWN) => "Unknown",
        _ => "Invalid",
    };
    writeln!(out, "{headline}")?;
    Ok(code)
}

fn cmd_find_model(a: FindModelArgs, out: &mut impl Write) -> Result<u8> {
    let phi = a.formula.parse()?;
    let budget = a.budget.budget()?;
    let system = a.system.system()?;
    for (d, p) in assemble_split(&phi, &system)? {
        let mut search = ModelSearch::new(&p.countermodel_clauses, budget.n_max);
        let deadline = std::time::Instant::now() + budget.time;
        let result = loop {
            if let Some(r) = search.step(budget.quantum) {
                break Some(r);
            }
            if std::time::Instant::now() >= deadline {
                break None;
            }
        };
        match result {
            Some(ModelSearchResult::Model { structure, size }) => {
                let model = to_kripke(&structure, &phi.modalities(), &phi.atoms());
                writeln!(out, "Invalid ({size} world{}), direction {d}", if size == 1 { "" } else { "s" })?;
                write!(out, "{model}")?;
                return Ok(0);
            }
            Some(ModelSearchResult::NoModelUpTo(n)) => {
                writeln!(out, "{d} {}: no countermodel up to size {n}", print_modal(&p.goal))?;
            }
            Some(ModelSearchResult::Cancelled(_)) | None => {
                writeln!(out, "{d} {}: time budget exhausted at size {n}", print_modal(&p.goal), n = search.size())?;
            }
        }
    }
    writeln!(out, "Unknown (no countermodel found)")?;
    Ok(UNKNOWN)
}

fn cmd_decide(a: DecideArgs, out: &mut impl Write) -> Result<u8> {
    let phi = a.formula.parse()?;
    let v = decide(&phi, &a.system.system()?, &a.budget.budget()?)?;
    if a.verbose {
        write!(out, "{}", v.report())?;
    } else {
        writeln!(out, "{}", v.headline())?;
        if let relmodal::cdp::Outcome::Invalid { model, direction, .. } = &v.outcome {
            if v.directions.len() > 1 {
                writeln!(out, "falsified direction: {direction}")?;
            }
            write!(out, "{model}")?;
        }
    }
    Ok(if v.kind() == VerdictKind::Unknown { UNKNOWN } else { 0 })
}

fn cmd_ltl(a: LtlArgs, out: &mut impl Write) -> Result<u8> {
    let phi = a.formula.parse()?;
    let v = ltl_decide(&phi, &a.budget.budget()?)?;
    if a.verbose {
        write!(out, "{}", v.report())?;
    } else {
        writeln!(out, "{}", v.headline())?;
        if let LtlOutcome::Satisfiable { lasso, .. } = &v.outcome {
            writeln!(out, "lasso: {lasso}")?;
        }
    }
    Ok(if matches!(v.outcome, LtlOutcome::Unknown(_)) { UNKNOWN } else { 0 })
}

fn cmd_bench(a: BenchArgs, out: &mut impl Write) -> Result<u8> {
    let budget = a.budget.budget()?;
    if let Some(count) = a.random {
        return random_bench(&a, count, &budget, out);
    }
    let mut corpus: Vec<CorpusEntry> = match &a.corpus {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_corpus(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => load_corpus(),
    };
    if !a.only.is_empty() {
        corpus.retain(|e| a.only.iter().any(|o| e.id.contains(o.as_str())));
        if corpus.is_empty() {
            bail!("no corpus entry matches --only");
        }
    }
    let rows = run_bench(&corpus, &budget, a.jobs);
    write!(out, "{}", render_table(&rows))?;
    write!(out, "{}", render_summary(&rows))?;
    if a.records {
        write!(out, "{}", render_records(&rows))?;
    }
    Ok(if rows.iter().all(|r| r.passed()) {
        0
    } else if rows.iter().any(|r| !r.passed() && r.kind() != VerdictKind::Unknown) {
        MISMATCH
    } else {
        UNKNOWN
    })
}

fn random_bench(a: &BenchArgs, count: usize, budget: &Budget, out: &mut impl Write) -> Result<u8> {
    if a.atoms == 0 || a.clauses == 0 {
        bail!("--atoms and --clauses must be positive");
    }
    let system = ModalSystem::named(&a.system)?;
    let mut unknown = false;
    for k in 0..count as u64 {
        let seed = a.seed + k;
        let spec =
            RandomCnfSpec { atoms: a.atoms, clauses: a.clauses, depth: a.depth, seed, filtered: a.filtered };
        let phi = gen_random_3cnf(spec);
        // A random conjunction is rarely valid; its satisfiability is the
        // invalidity of its negation.
        let v = decide(&phi.clone().not(), &system, budget)?;
        let answer = match v.kind() {
            VerdictKind::Valid => "unsatisfiable".to_string(),
            VerdictKind::Invalid => format!("satisfiable (model size {})", v.model_size().unwrap_or(0)),
            VerdictKind::Unknown => {
                unknown = true;
                "unknown".to_string()
            }
        };
        writeln!(out, "seed {seed}: {answer} in {:.3}s: {}", v.elapsed.as_secs_f64(), print_modal(&phi))?;
    }
    Ok(if unknown { UNKNOWN } else { 0 })
}
