//! `teamlogic`: batch front end for evaluation, atom inference, validity
//! search, the ESO translation and branching quantifiers.
//!
//! Exit status is 0 for a positive verdict (satisfied, entailed, valid,
//! readings agree), 1 for a negative one and 2 for errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use teamlogic::atoms::{
    armstrong_derives, counterexample_armstrong, counterexample_independence, independence_derives,
    parse_atom_set, rule_closure, semantic_entails, AtomStatement, Derivation, SemanticConfig, Universe,
    DEFAULT_MAX_STEPS,
};
use teamlogic::branching::check_lemma14;
use teamlogic::eso::{check_translation, eval_eso_with, translate, EsoLimits};
use teamlogic::syntax::desugar;
use teamlogic::teamsem::{Evaluator, Validity, ValiditySearch, DEFAULT_BUDGET};
use teamlogic::{parse, Assignment, EvalOptions, Formula, Semantics, Structure, Team, Var, VarTuple};

#[derive(Parser)]
#[command(name = "teamlogic", version, about = "Dependence and independence logic under team semantics")]
struct Cli {
    /// Worker threads for parallel searches (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lax,
    Strict,
}

impl From<Mode> for Semantics {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Lax => Semantics::Lax,
            Mode::Strict => Semantics::Strict,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EntailMode {
    Syntactic,
    Semantic,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Armstrong for dependence atoms, the independence axioms for
    /// unconditional pairs, rule closure otherwise.
    Auto,
    Armstrong,
    Independence,
    Closure,
}

#[derive(Args)]
struct Model {
    /// Structure file.
    #[arg(long, conflicts_with = "size")]
    structure: Option<PathBuf>,
    /// Use the bare structure {0, …, n-1} instead of a file.
    #[arg(long)]
    size: Option<usize>,
}

impl Model {
    fn load(&self) -> Result<Structure> {
        match (&self.structure, self.size) {
            (Some(p), _) => {
                let text = read(p)?;
                Structure::parse(&text).with_context(|| format!("in {}", p.display()))
            }
            (None, Some(0)) => bail!("--size must be positive"),
            (None, Some(n)) => Ok(Structure::of_size(n)),
            (None, None) => bail!("pass --structure FILE or --size N"),
        }
    }
}

#[derive(Args)]
struct Bounds {
    /// Domain sizes searched for countermodels (default: 2 and |vars|+2).
    #[arg(long, value_delimiter = ',')]
    domain_sizes: Vec<usize>,
    /// Only consider teams with at most this many rows.
    #[arg(long)]
    max_rows: Option<usize>,
    /// Enumerate every team when there are at most this many.
    #[arg(long, default_value_t = 1 << 16)]
    exhaustive_limit: u64,
    /// Random teams per domain size when enumeration is too large.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a team.
    Eval {
        /// Formula text, or a file containing it.
        formula: String,
        #[command(flatten)]
        model: Model,
        /// Team file; defaults to the team with one empty assignment.
        #[arg(long)]
        team: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lax")]
        semantics: Mode,
        /// Cap on candidate splits and witnesses.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Decide whether a set of atoms entails a goal atom.
    Entail {
        /// Atom file, one atom per line.
        atoms: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, value_enum, default_value = "both")]
        mode: EntailMode,
        #[arg(long, value_enum, default_value = "auto")]
        engine: Engine,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Print the closure of an atom set under the inference rules.
    Closure {
        atoms: PathBuf,
        /// Extra variables for the universe.
        #[arg(long, num_args = 1..)]
        vars: Vec<String>,
        /// Print a derivation of this atom, if it is in the closure.
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Build a team satisfying the atoms and falsifying the goal.
    Counterexample {
        atoms: PathBuf,
        #[arg(long)]
        goal: String,
    },
    /// Search for a finite countermodel of a sentence.
    Validity {
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "lax")]
        semantics: Mode,
        /// Structures examined per domain size.
        #[arg(long, default_value_t = 1 << 16)]
        structure_cap: u64,
    },
    /// Print the existential second-order translation.
    Translate {
        formula: String,
        /// Team variables (default: the free variables).
        #[arg(long, num_args = 0..)]
        scope: Option<Vec<String>>,
    },
    /// Compare team semantics with the translated sentence on one team.
    EsoCheck {
        formula: String,
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        team: Option<PathBuf>,
        /// Largest relation, as log2 of |M|^arity.
        #[arg(long, default_value_t = 22)]
        max_relation_bits: u32,
        #[arg(long, default_value_t = 1 << 24)]
        max_ground_nodes: usize,
    },
    /// Compare Skolem semantics of a branching formula with its
    /// independence-atom form.
    Branch {
        formula: String,
        #[command(flatten)]
        model: Model,
        /// Values of free variables, as `var=element`.
        #[arg(long = "assign", num_args = 1..)]
        assign: Vec<String>,
        #[arg(long, value_enum, default_value = "lax")]
        semantics: Mode,
    },
    /// Rewrite slashed and branching quantifiers.
    Desugar { formula: String },
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn formula(arg: &str) -> Result<Formula> {
    let p = Path::new(arg);
    let text = if p.is_file() { read(p)? } else { arg.to_string() };
    parse(&text).map_err(|e| anyhow::anyhow!("formula: {e}"))
}

fn team_for(path: &Option<PathBuf>, m: &Structure, f: &Formula) -> Result<Team> {
    match path {
        Some(p) => Team::parse(&read(p)?, m).with_context(|| format!("in {}", p.display())),
        None => {
            let free = f.free_vars();
            if !free.is_empty() {
                bail!("formula has free variables {free:?}; pass --team");
            }
            Ok(Team::unit())
        }
    }
}

fn verdict(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

fn print_team(team: &Team, m: &Structure) {
    for line in team.to_text(m).lines() {
        println!("  {line}");
    }
}

fn atoms(p: &Path) -> Result<Vec<AtomStatement>> {
    parse_atom_set(&read(p)?).with_context(|| format!("in {}", p.display()))
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Eval {
            formula: text,
            model,
            team,
            semantics,
            budget,
        } => {
            let f = formula(&text)?;
            let m = model.load()?;
            let t = team_for(&team, &m, &f)?;
            let mode: Semantics = semantics.into();
            let opts = EvalOptions { budget, ..EvalOptions::new(mode) };
            let f = desugar(&f)?;
            let sat = Evaluator::new(&m, opts).evaluate(&t, &f)?;
            println!("{} ({mode})", verdict(sat, "SAT", "UNSAT"));
            Ok(sat)
        }
        Command::Entail {
            atoms: path,
            goal,
            mode,
            engine,
            bounds,
            max_steps,
        } => {
            let t = atoms(&path)?;
            let goal = AtomStatement::parse(&goal)?;
            let mut ok = true;
            if mode != EntailMode::Semantic {
                let (name, d) = syntactic(&t, &goal, engine, max_steps)?;
                println!("{} ({name})", verdict(d.derivable, "DERIVED", "NOT DERIVED"));
                if let Some(trace) = &d.trace {
                    print!("{trace}");
                }
                ok &= d.derivable;
            }
            if mode != EntailMode::Syntactic {
                let cfg = SemanticConfig {
                    domain_sizes: (!bounds.domain_sizes.is_empty()).then_some(bounds.domain_sizes),
                    max_rows: bounds.max_rows,
                    exhaustive_limit: bounds.exhaustive_limit,
                    samples: bounds.samples,
                    seed: cli.seed,
                };
                let v = semantic_entails(&t, &goal, &cfg)?;
                let b = &v.bound;
                let mut searched = format!("domain sizes {:?}, {} teams checked", b.domain_sizes, b.teams_checked);
                if !b.sampled.is_empty() {
                    searched.push_str(&format!(", sampled at {:?}", b.sampled));
                }
                if v.entailed {
                    let scope = if v.exact { "exact" } else { "up to the bound" };
                    println!("ENTAILED ({scope}; {searched})");
                } else {
                    println!("NOT ENTAILED ({searched})");
                    if let Some(teamlogic::atoms::Witness::Countermodel { team, domain_size }) = &v.witness {
                        println!("countermodel over {domain_size} elements:");
                        print_team(team, &Structure::of_size(*domain_size));
                    }
                }
                ok &= v.entailed;
            }
            Ok(ok)
        }
        Command::Closure {
            atoms: path,
            vars,
            goal,
            max_steps,
        } => {
            let t = atoms(&path)?;
            let mut names: Vec<Var> = teamlogic::atoms::vars_of(&t);
            for v in vars {
                let v = Var::new(&v);
                if !names.contains(&v) {
                    names.push(v);
                }
            }
            let goal = goal.map(|g| AtomStatement::parse(&g)).transpose()?;
            if let Some(g) = &goal {
                for v in g.vars() {
                    if !names.contains(&v) {
                        names.push(v);
                    }
                }
            }
            let c = rule_closure(&t, &Universe::new(names)?, max_steps)?;
            let mut lines: Vec<String> = c.atoms().map(|a| a.to_string()).collect();
            lines.sort();
            for l in &lines {
                println!("{l}");
            }
            println!(
                "{} atoms{}",
                lines.len(),
                if c.is_truncated() { " (TRUNCATED)" } else { "" }
            );
            match goal {
                None => Ok(!c.is_truncated()),
                Some(g) => match c.derivation(&g) {
                    Some(trace) => {
                        println!("DERIVED {g}");
                        print!("{trace}");
                        Ok(true)
                    }
                    None => {
                        println!("NOT DERIVED {g}");
                        Ok(false)
                    }
                },
            }
        }
        Command::Counterexample { atoms: path, goal } => {
            let t = atoms(&path)?;
            let goal = AtomStatement::parse(&goal)?;
            if goal.is_dep() && t.iter().all(AtomStatement::is_dep) {
                match counterexample_armstrong(&t, &goal)? {
                    Some(team) => {
                        println!("COUNTERMODEL");
                        print_team(&team, &Structure::of_size(2));
                        Ok(false)
                    }
                    None => {
                        println!("NONE (derivable)");
                        Ok(true)
                    }
                }
            } else {
                match counterexample_independence(&t, &goal)? {
                    Some((m, team)) => {
                        println!("COUNTERMODEL");
                        print!("{}", m.to_text());
                        print_team(&team, &m);
                        Ok(false)
                    }
                    None => {
                        println!("NONE (derivable)");
                        Ok(true)
                    }
                }
            }
        }
        Command::Validity {
            formula: text,
            max_size,
            semantics,
            structure_cap,
        } => {
            let f = formula(&text)?;
            let search = ValiditySearch {
                structure_cap,
                ..ValiditySearch::new(max_size, semantics.into())
            };
            match search.run(&f)? {
                Validity::ValidUpTo {
                    max_size,
                    structures_checked,
                } => {
                    println!("VALID-UP-TO-{max_size} ({structures_checked} structures checked)");
                    Ok(true)
                }
                Validity::Countermodel(m) => {
                    println!("COUNTERMODEL size {}", m.size());
                    print!("{}", m.to_text());
                    Ok(false)
                }
            }
        }
        Command::Translate { formula: text, scope } => {
            let f = formula(&text)?;
            let scope = match scope {
                Some(names) => VarTuple::new(names.iter().map(|n| Var::new(n)).collect()),
                None => VarTuple::new(f.free_vars()),
            };
            println!("{}", translate(&f, &scope)?);
            Ok(true)
        }
        Command::EsoCheck {
            formula: text,
            model,
            team,
            max_relation_bits,
            max_ground_nodes,
        } => {
            let f = formula(&text)?;
            let m = model.load()?;
            let t = team_for(&team, &m, &f)?;
            let limits = EsoLimits {
                max_relation_bits,
                max_ground_nodes,
            };
            let check = if limits == EsoLimits::default() {
                check_translation(&m, &t, &f)?
            } else {
                let s = translate(&f, &VarTuple::new(t.scope().to_vec()))?;
                let eso = eval_eso_with(&m, &t, &s, limits)?;
                let team_semantics = teamlogic::evaluate(&m, &t, &desugar(&f)?, Semantics::Lax)?;
                teamlogic::eso::TranslationCheck { team_semantics, eso }
            };
            println!("team semantics (lax): {}", verdict(check.team_semantics, "SAT", "UNSAT"));
            println!("ESO sentence: {}", verdict(check.eso, "SAT", "UNSAT"));
            println!("{}", verdict(check.agree(), "AGREE", "DISAGREE"));
            Ok(check.agree())
        }
        Command::Branch {
            formula: text,
            model,
            assign,
            semantics,
        } => {
            let f = formula(&text)?;
            let m = model.load()?;
            let mut s = Assignment::empty();
            for a in &assign {
                let (v, e) = a
                    .split_once('=')
                    .with_context(|| format!("expected var=element, got `{a}`"))?;
                let e = m
                    .element(e.trim())
                    .with_context(|| format!("unknown element `{}`", e.trim()))?;
                s = s.extend(&Var::new(v.trim()), e);
            }
            let mode: Semantics = semantics.into();
            let r = check_lemma14(&m, &s, &f, mode)?;
            println!("Skolem functions: {}", verdict(r.skolem, "TRUE", "FALSE"));
            println!("independence form ({mode}): {}", verdict(r.team, "TRUE", "FALSE"));
            println!("{}", verdict(r.agree(), "AGREE", "DISAGREE"));
            Ok(r.agree())
        }
        Command::Desugar { formula: text } => {
            println!("{}", desugar(&formula(&text)?)?);
            Ok(true)
        }
    }
}

fn syntactic(
    t: &[AtomStatement],
    goal: &AtomStatement,
    engine: Engine,
    max_steps: usize,
) -> Result<(&'static str, Derivation)> {
    let dep_only = goal.is_dep() && t.iter().all(AtomStatement::is_dep);
    let pairs = goal.as_unconditional_pair().is_some() && t.iter().all(|a| a.as_unconditional_pair().is_some());
    let engine = match engine {
        Engine::Auto if dep_only => Engine::Armstrong,
        Engine::Auto if pairs => Engine::Independence,
        Engine::Auto => Engine::Closure,
        e => e,
    };
    Ok(match engine {
        Engine::Armstrong => ("armstrong", armstrong_derives(t, goal)?),
        Engine::Independence => ("independence axioms", independence_derives(t, goal)?),
        _ => {
            let mut vars = teamlogic::atoms::vars_of(t);
            for v in goal.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let c = rule_closure(t, &Universe::new(vars)?, max_steps)?;
            if c.is_truncated() {
                bail!("rule closure stopped after {max_steps} steps; raise --max-steps");
            }
            let trace = c.derivation(goal);
            (
                "rule closure",
                Derivation {
                    derivable: trace.is_some(),
                    trace,
                },
            )
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
