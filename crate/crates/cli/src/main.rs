//! `exder`: loads a corpus, runs one command over named instances and
//! writes a tab-separated report, one record per line.
//!
//! Exit codes: 0 when every record holds, 1 when some check fails, 2 on
//! input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use exder::coherent::CoherentDiagram;
use exder::corpus::{Corpus, CorpusError};
use exder::homotopy::{
    cap_sensitivity_records, cocontinuity_records, free_cocompletion_map, homotopy_records, tilde, universality_records,
    HomotopyError, Pools, TildeOdot,
};
use exder::kan::{
    asymmetry_records, colimit_over, distributivity_records, fast_left_agrees, fast_right_agrees, kan_records, left_kan,
    limit_over, pi0_records, right_kan, verify_derivator_axioms,
};
use exder::setoid::{Setoid, DEFAULT_CAP};
use exder::text::{dump_corpus, parse_corpus, TextError};
use exder::truncation::{check_equiv_records, counit_records, equiv_instances, Theory};
use exder::verdict::Record;

#[derive(Parser, Debug)]
#[command(name = "exder", version, about = "Checks for coherent diagrams of setoids over finite categories")]
struct Cli {
    /// Corpus file in the text format; the bundled corpus when absent.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Truncation theory: sex, reg, set, pos, prop or contr.
    #[arg(long, global = true)]
    theory: Option<String>,
    /// Name of the functor to the discrete index (check-equiv).
    #[arg(long, global = true)]
    over: Option<String>,
    /// Free-word enumeration cap.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Keep only records for these instances.
    #[arg(long, global = true)]
    only: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Left or right Kan extension of a diagram along a functor.
    Kan {
        #[arg(long, conflicts_with = "right")]
        left: bool,
        #[arg(long)]
        right: bool,
        functor: String,
        diagram: String,
    },
    /// Limit of a diagram.
    Limit { diagram: String },
    /// Colimit of a diagram.
    Colimit { diagram: String },
    /// Classes of a setoid, or of each object of a diagram.
    Quotient { name: String },
    /// Sizes of the fibers of the strictification.
    Tilde { diagram: String },
    /// The action of the strictification on a coefficient over the point;
    /// with --theory, its reflection with the unit and distributive laws.
    Odot { diagram: String, coefficient: String },
    /// Derivator axioms, Kan fast paths, colimits of the point, distributivity.
    CheckAxioms,
    /// Equivalence verdicts over a discrete index.
    CheckEquiv { functors: Vec<String> },
    /// Path spaces, right homotopies, the comparison map and the self-action.
    CheckHomotopy,
    /// Cocontinuity of the action; --compare-cap reruns cap-dependent instances.
    CheckCocontinuity {
        #[arg(long)]
        compare_cap: Option<usize>,
    },
    /// Universality of the reflected point and invertible counits.
    CheckUniversality,
    /// Set-reflection against limits and colimits.
    CheckAsymmetry,
    /// Print the corpus in the text format.
    Dump,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Text(#[from] TextError),
    #[error("{0}")]
    Corpus(#[from] CorpusError),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Usage(String),
}

impl From<HomotopyError> for CliError {
    fn from(e: HomotopyError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<exder::coherent::CoherentError> for CliError {
    fn from(e: exder::coherent::CoherentError) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn load(cli: &Cli) -> Result<Corpus, CliError> {
    match &cli.corpus {
        None => Ok(Corpus::default_corpus()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| CliError::Read { path: p.display().to_string(), source })?;
            Ok(parse_corpus(&text)?)
        }
    }
}

fn theory(cli: &Cli) -> Result<Option<Theory>, CliError> {
    cli.theory
        .as_deref()
        .map(|t| t.parse::<Theory>().map_err(|e| CliError::Usage(e.to_string())))
        .transpose()
}

fn reject(cli: &Cli, flag: &str, given: bool) -> Result<(), CliError> {
    if given {
        let debug = format!("{:?}", cli.command);
        let mut name = String::new();
        for (i, ch) in debug.chars().take_while(|ch| ch.is_alphanumeric()).enumerate() {
            if ch.is_uppercase() && i > 0 {
                name.push('-');
            }
            name.push(ch.to_ascii_lowercase());
        }
        return Err(CliError::Usage(format!("--{} does not apply to {}", flag, name)));
    }
    Ok(())
}

fn classes(d: &CoherentDiagram, a: usize) -> String {
    format!("|X0| = {}, classes {}", d.objs[a].size0(), d.objs[a].quotient().size)
}

fn per_object(check: &str, inst: &str, d: &CoherentDiagram) -> Vec<Record> {
    (0..d.shape.n_objects())
        .map(|a| Record::from_bool(check, format!("{}@{}", inst, d.shape.object_label(a)), true, classes(d, a)))
        .collect()
}

fn blocks(x: &Setoid) -> String {
    format!("{:?}", x.quotient().blocks())
}

/// The command line that reruns one instance.
fn repro(cli: &Cli, words: &[String], instance: &str) -> String {
    let mut parts = vec!["exder".to_string()];
    if let Some(p) = &cli.corpus {
        parts.push(format!("--corpus {}", p.display()));
    }
    if cli.cap != DEFAULT_CAP {
        parts.push(format!("--cap {}", cli.cap));
    }
    if let Some(t) = &cli.theory {
        parts.push(format!("--theory {}", t));
    }
    if let Some(o) = &cli.over {
        parts.push(format!("--over {}", o));
    }
    parts.extend(words.iter().cloned());
    parts.push(format!("--only '{}'", instance));
    parts.join(" ")
}

fn run(cli: &Cli) -> Result<(Vec<Record>, Vec<String>), CliError> {
    let c = load(cli)?;
    let th = theory(cli)?;
    let uses_theory = matches!(cli.command, Command::CheckEquiv { .. } | Command::CheckUniversality | Command::Odot { .. });
    reject(cli, "theory", th.is_some() && !uses_theory)?;
    reject(cli, "over", cli.over.is_some() && !matches!(cli.command, Command::CheckEquiv { .. }))?;
    let cap = cli.cap;
    let (records, words) = match &cli.command {
        Command::Kan { left, right, functor, diagram } => {
            if left == right {
                return Err(CliError::Usage("kan needs exactly one of --left and --right".into()));
            }
            let u = c.functor(functor)?;
            let x = c.diagram(diagram)?;
            if *u.dom != *x.shape {
                return Err(CliError::Usage(format!("{} is not over the domain of {}", diagram, functor)));
            }
            let inst = format!("{}:{}", functor, diagram);
            let mut out;
            if *left {
                let l = left_kan(u, x)?;
                out = per_object("kan-left", &inst, &l.value);
                if u.cod.is_discrete() {
                    out.push(Record::new("kan-left-fast", inst.clone(), &fast_left_agrees(u, x)?));
                }
            } else {
                let r = right_kan(u, x)?;
                out = per_object("kan-right", &inst, &r.value);
                if u.cod.is_discrete() {
                    out.push(Record::new("kan-right-fast", inst.clone(), &fast_right_agrees(u, x)?));
                }
            }
            let flag = if *left { "--left" } else { "--right" };
            (out, vec!["kan".into(), flag.into(), functor.clone(), diagram.clone()])
        }
        Command::Limit { diagram } => {
            let l = limit_over(c.diagram(diagram)?);
            let d = format!("|L0| = {}, classes {}", l.setoid.size0(), blocks(&l.setoid));
            (vec![Record::from_bool("limit", diagram.as_str(), true, d)], vec!["limit".into(), diagram.clone()])
        }
        Command::Colimit { diagram } => {
            let l = colimit_over(c.diagram(diagram)?);
            let d = format!("|C0| = {}, classes {}", l.setoid.size0(), blocks(&l.setoid));
            (vec![Record::from_bool("colimit", diagram.as_str(), true, d)], vec!["colimit".into(), diagram.clone()])
        }
        Command::Quotient { name } => {
            let out = if let Ok(x) = c.setoid(name) {
                vec![Record::from_bool("quotient", name.as_str(), true, blocks(x))]
            } else {
                let d = c.diagram(name)?;
                (0..d.shape.n_objects())
                    .map(|a| Record::from_bool("quotient", format!("{}@{}", name, d.shape.object_label(a)), true, blocks(&d.objs[a])))
                    .collect()
            };
            (out, vec!["quotient".into(), name.clone()])
        }
        Command::Tilde { diagram } => {
            let x = c.diagram(diagram)?;
            let t = if cap == DEFAULT_CAP { tilde(x)? } else { exder::homotopy::tilde_with(x, &Pools::new(x, cap))? };
            let out = (0..x.shape.n_objects())
                .map(|a| {
                    let f = &t.diagram.fibers[a];
                    let tuples = t.objects[a].iter().filter(|o| o.is_tuple()).count();
                    Record::from_bool(
                        "tilde",
                        format!("{}@{}", diagram, x.shape.object_label(a)),
                        true,
                        format!("objects {}, arrows {}, tuples {}", f.n_objects(), f.n_arrows(), tuples),
                    )
                })
                .collect();
            (out, vec!["tilde".into(), diagram.clone()])
        }
        Command::Odot { diagram, coefficient } => {
            let x = c.diagram(diagram)?;
            let m = c.diagram(coefficient)?;
            let inst = format!("{}:{}", diagram, coefficient);
            let out = match th {
                None => {
                    let xm = TildeOdot::new(x, m, &Pools::new(x, cap))?;
                    per_object("odot", &inst, &xm.value)
                }
                Some(t) => {
                    if !Theory::REFLECTIVE.contains(&t) {
                        return Err(CliError::Usage(format!("{} has no reflection", t)));
                    }
                    let fc = free_cocompletion_map(t, m, x, cap)?;
                    vec![
                        Record::from_bool(format!("odot-{}", t), inst.clone(), true, format!("{:?}", fc.value.summary())),
                        Record::new(format!("odot-unit-{}", t), inst.clone(), &fc.unit_law),
                        Record::new(format!("odot-distributive-{}", t), inst.clone(), &fc.distributive),
                    ]
                }
            };
            (out, vec!["odot".into(), diagram.clone(), coefficient.clone()])
        }
        Command::CheckAxioms => {
            let mut out = verify_derivator_axioms(&c);
            out.extend(kan_records(&c));
            out.extend(pi0_records(&c));
            out.extend(distributivity_records(&c));
            (out, vec!["check-axioms".into()])
        }
        Command::CheckEquiv { functors } => {
            for f in functors {
                c.functor(f)?;
            }
            if let Some(o) = &cli.over {
                if o != "ONE" && o != "id" {
                    c.functor(o)?;
                }
            }
            let inst: Vec<_> = equiv_instances(&c)
                .into_iter()
                .filter(|(n, _)| {
                    let (u, v) = n.split_once('/').unwrap_or((n, ""));
                    (functors.is_empty() || functors.iter().any(|f| f == u)) && cli.over.as_deref().is_none_or(|o| o == v)
                })
                .collect();
            if inst.is_empty() {
                return Err(CliError::Usage("no instance matches the given functors and --over".into()));
            }
            let ts: Vec<Theory> = th.map(|t| vec![t]).unwrap_or_else(|| Theory::ALL.to_vec());
            let out = ts.into_iter().flat_map(|t| check_equiv_records(&c, t, &inst)).collect();
            let mut words = vec!["check-equiv".to_string()];
            words.extend(functors.iter().cloned());
            (out, words)
        }
        Command::CheckHomotopy => (homotopy_records(&c, cap), vec!["check-homotopy".into()]),
        Command::CheckCocontinuity { compare_cap } => {
            let mut out = cocontinuity_records(&c, cap);
            let mut words = vec!["check-cocontinuity".to_string()];
            if let Some(hi) = compare_cap {
                out.extend(cap_sensitivity_records(&c, cap, *hi));
                words.push(format!("--compare-cap {}", hi));
            }
            (out, words)
        }
        Command::CheckUniversality => {
            let ts: Vec<Theory> = match th {
                Some(t) if !Theory::REFLECTIVE.contains(&t) => {
                    return Err(CliError::Usage(format!("{} has no reflection", t)));
                }
                Some(t) => vec![t],
                None => Theory::REFLECTIVE.to_vec(),
            };
            let mut out = universality_records(&c, &ts, cap);
            let tags: Vec<String> = ts.iter().map(|t| format!("counit-{}", t)).collect();
            out.extend(counit_records(&c).into_iter().filter(|r| tags.contains(&r.check)));
            (out, vec!["check-universality".into()])
        }
        Command::CheckAsymmetry => (asymmetry_records(&c), vec!["check-asymmetry".into()]),
        Command::Dump => unreachable!("handled before"),
    };
    Ok((records, words))
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.report {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.display().to_string(), source }),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    if let Command::Dump = cli.command {
        return match load(&cli).and_then(|c| Ok(dump_corpus(&c)?)).and_then(|t| emit(&cli, &t)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(2)
            }
        };
    }
    let (mut records, words) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    if !cli.only.is_empty() {
        records.retain(|r| cli.only.contains(&r.instance));
    }
    records.sort();
    records.dedup();
    let mut text = String::new();
    let mut failed = 0;
    for r in &mut records {
        if !r.holds {
            failed += 1;
            r.detail = format!("{}; repro: {}", r.detail, repro(&cli, &words, &r.instance));
        }
        text.push_str(&r.tsv());
        text.push('\n');
    }
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {}", e);
        return ExitCode::from(2);
    }
    eprintln!("{} records, {} failed, {:.2}s", records.len(), failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
