use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mgcat::cmg::{cmg_derive, CmgError};
use mgcat::lexicon::{parse_term_file, Grammar, LexiconError};
use mgcat::mg::{mg_derive, MgError};
use mgcat::semantics::{analyze, internalize, reduction_graph, render_boxes, Analysis, SemError};
use mgcat::translate::check_equivalence;
use serde_json::json;

const NO_PARSE: u8 = 2;
const DIFFERENT: u8 = 3;

#[derive(Parser)]
#[command(name = "mgcat", version, about = "Minimalist and categorial minimalist grammars with λμ-DRS semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Boxes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Mg,
    Cmg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Mg,
    Cmg,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print its derivations, λμ-DRSs and readings.
    Analyze {
        lexicon: PathBuf,
        sentence: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Bound on search steps and on reduction-graph size.
        #[arg(long, env = "MGCAT_MAX_STEPS", default_value_t = 10_000)]
        max_steps: usize,
        /// Engine used for parsing; readings always come from the categorial proofs.
        #[arg(long, value_enum, default_value = "cmg")]
        engine: Engine,
    },
    /// Print the lexicon translated into the other formalism.
    Translate {
        lexicon: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Compare the strings generated by the [mg] and [cmg] lexicons.
    CheckEquiv {
        lexicon: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_words: usize,
        #[arg(long, env = "MGCAT_MAX_STEPS", default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Parse a sentence and print its derivations only.
    Derive {
        lexicon: PathBuf,
        sentence: String,
        #[arg(long, value_enum, default_value = "cmg")]
        engine: Engine,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, env = "MGCAT_MAX_STEPS", default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Internalize a term file and list its reduction graph and normal forms.
    Reduce {
        term: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, env = "MGCAT_MAX_STEPS", default_value_t = 10_000)]
        max_steps: usize,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok(String),
    NoParse(String),
    Different(String),
}

fn load(path: &PathBuf) -> Result<Grammar> {
    Grammar::load(path).map_err(|e| match e {
        LexiconError::Io { .. } => anyhow!("{e}"),
        _ => anyhow!("{}: {e}", path.display()),
    })
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn render_analyses(analyses: &[Analysis], format: Format) -> String {
    let mut out = String::new();
    for (i, a) in analyses.iter().enumerate() {
        if format == Format::Text {
            out.push_str(&format!("derivation {} of {}\n{}", i + 1, analyses.len(), a.derivation.pretty()));
            out.push_str(&format!("raw: {}\ninternalized: {}\n", a.raw, a.internalized));
        }
        for (j, r) in a.readings.iter().enumerate() {
            match format {
                Format::Boxes => out.push_str(&format!("derivation {} reading {}\n{}\n", i + 1, j + 1, render_boxes(&r.drs))),
                _ => out.push_str(&format!("reading {}: {}\n", j + 1, r.fol)),
            }
        }
    }
    out
}

fn run_analyze(lexicon: &PathBuf, sentence: &str, format: Format, bound: usize, engine: Engine) -> Result<Outcome> {
    let g = load(lexicon)?;
    let sem = g.sem.as_ref().ok_or_else(|| anyhow!("{}: no [semantics] section", lexicon.display()))?;
    let cmg = g.cmg().map_err(|e| anyhow!(e))?;
    let ws = words(sentence);
    let mut mg_json = None;
    let mut mg_text = String::new();
    if engine == Engine::Mg {
        let mg = g.mg().map_err(|e| anyhow!(e))?;
        let ds = match mg_derive(&mg, &ws, bound) {
            Err(MgError::UnknownWord(w)) => return Ok(Outcome::NoParse(format!("no parse: unknown word `{w}`"))),
            r => r?,
        };
        if ds.is_empty() {
            return Ok(Outcome::NoParse("no parse".into()));
        }
        for d in &ds {
            mg_text.push_str(&format!("mg derivation: {}\n", d.root));
        }
        mg_json = Some(serde_json::to_value(&ds)?);
    }
    let analyses = match analyze(&cmg, sem, &ws, bound) {
        Err(SemError::NoParse(_)) => return Ok(Outcome::NoParse("no parse".into())),
        Err(SemError::Syntax(CmgError::UnknownWord(w))) => {
            return Ok(Outcome::NoParse(format!("no parse: unknown word `{w}`")))
        }
        r => r?,
    };
    Ok(Outcome::Ok(match format {
        Format::Json => {
            let mut v = json!({ "sentence": ws, "analyses": analyses.iter().map(Analysis::to_json).collect::<Vec<_>>() });
            if let Some(m) = mg_json {
                v["mg_derivations"] = m;
            }
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        f => mg_text + &render_analyses(&analyses, f),
    }))
}

fn run_translate(lexicon: &PathBuf, to: Target) -> Result<Outcome> {
    let mut g = load(lexicon)?;
    let (source, target) = match to {
        Target::Mg => (g.cmg_rows.is_some(), g.mg_rows.take().is_some()),
        Target::Cmg => (g.mg_rows.is_some(), g.cmg_rows.take().is_some()),
    };
    if !source && target {
        let name = if to == Target::Mg { "[cmg]" } else { "[mg]" };
        return Err(anyhow!("{}: no {name} section to translate", lexicon.display()));
    }
    let text = match to {
        Target::Mg => g.render_mg(),
        Target::Cmg => g.render_cmg(),
    };
    Ok(Outcome::Ok(text.map_err(|e| anyhow!(e))?))
}

fn run_check_equiv(lexicon: &PathBuf, max_words: usize, bound: usize) -> Result<Outcome> {
    let g = load(lexicon)?;
    let mg = g.mg().map_err(|e| anyhow!(e))?;
    let cmg = g.cmg().map_err(|e| anyhow!(e))?;
    let r = check_equivalence(&mg, &cmg, max_words, bound);
    Ok(if r.is_equivalent() { Outcome::Ok(r.render()) } else { Outcome::Different(r.render()) })
}

fn run_derive(lexicon: &PathBuf, sentence: &str, engine: Engine, format: Format, bound: usize) -> Result<Outcome> {
    let g = load(lexicon)?;
    let ws = words(sentence);
    let (count, text, value) = match engine {
        Engine::Mg => {
            let ds = match mg_derive(&g.mg().map_err(|e| anyhow!(e))?, &ws, bound) {
                Err(MgError::UnknownWord(w)) => return Ok(Outcome::NoParse(format!("no parse: unknown word `{w}`"))),
                r => r?,
            };
            let text = ds.iter().map(|d| format!("{}\n", d.root)).collect::<String>();
            (ds.len(), text, serde_json::to_value(&ds)?)
        }
        Engine::Cmg => {
            let ds = match cmg_derive(&g.cmg().map_err(|e| anyhow!(e))?, &ws, bound) {
                Err(CmgError::UnknownWord(w)) => return Ok(Outcome::NoParse(format!("no parse: unknown word `{w}`"))),
                r => r?,
            };
            let text = ds.iter().map(|d| d.pretty()).collect::<Vec<_>>().join("\n");
            (ds.len(), text, json!(ds.iter().map(|d| d.to_json()).collect::<Vec<_>>()))
        }
    };
    if count == 0 {
        return Ok(Outcome::NoParse("no parse".into()));
    }
    Ok(Outcome::Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value)?),
        _ => text,
    }))
}

fn run_reduce(path: &PathBuf, format: Format, bound: usize) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let term = parse_term_file(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let term = internalize(&term)?;
    let g = reduction_graph(&term, bound)?;
    let normal: Vec<String> = g.normal.iter().map(|i| g.nodes[*i].to_string()).collect();
    Ok(Outcome::Ok(match format {
        Format::Json => {
            let v = json!({
                "nodes": g.nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                "edges": g.edges.iter().map(|(a, r, b)| json!([a, r.to_string(), b])).collect::<Vec<_>>(),
                "normal_forms": normal,
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Boxes => g.normal.iter().map(|i| format!("{}\n", render_boxes(&g.nodes[*i]))).collect(),
        Format::Text => {
            let mut s = g.render();
            for (i, n) in normal.iter().enumerate() {
                s.push_str(&format!("normal form {}: {n}\n", i + 1));
            }
            s
        }
    }))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Analyze { lexicon, sentence, format, max_steps, engine } => {
            run_analyze(&lexicon, &sentence, format, max_steps, engine)
        }
        Command::Translate { lexicon, to } => run_translate(&lexicon, to),
        Command::CheckEquiv { lexicon, max_words, max_steps } => run_check_equiv(&lexicon, max_words, max_steps),
        Command::Derive { lexicon, sentence, engine, format, max_steps } => {
            run_derive(&lexicon, &sentence, engine, format, max_steps)
        }
        Command::Reduce { term, format, max_steps } => run_reduce(&term, format, max_steps),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::NoParse(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(NO_PARSE)
        }
        Ok(Outcome::Different(report)) => {
            print!("{report}");
            ExitCode::from(DIFFERENT)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
