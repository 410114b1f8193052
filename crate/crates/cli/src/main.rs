use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use kzq::config;
use kzq::corpus::Corpus;
use kzq::datagen::Collector;
use kzq::report::{self, AmalgamReport, Common, InvariantsReport, Vc1ReportJson};
use kzq_core::catalog::{catalog, resolve_spec};
use kzq_core::fp::hom_from_embedding;
use kzq_core::ktheory::{image_from_one_skeleton_with, vc1_k0q, AmalgamSpec, GroupK, Reduction};
use kzq_core::rational::SchurProvider;
use kzq_core::Error;

#[derive(Parser)]
#[command(name = "kzq", version, about = "Lower K-theory of integral group rings")]
struct Cli {
    /// Extra Schur index data file (repeatable)
    #[arg(long = "schur-data", global = true)]
    schur_data: Vec<PathBuf>,
    /// Seed for the randomized parts of the character table computation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// r_Q, r_Qp, r_Fp, Schur data, K_-1 and SC(G) of a finite group
    Invariants { spec: String },
    /// Image of reduced K_0 ZG in K_0 QG for G = K1 *_H K2
    Amalgam {
        #[arg(long)]
        h: String,
        #[arg(long)]
        k1: String,
        #[arg(long, default_value = "")]
        embed1: String,
        #[arg(long)]
        k2: String,
        #[arg(long, default_value = "")]
        embed2: String,
    },
    /// K_0 QG for G = H x|_t Z
    Vc1 {
        #[arg(long)]
        h: String,
        #[arg(long, default_value = "")]
        aut: String,
    },
    /// Run the acceptance corpus
    Corpus {
        #[arg(long)]
        json: bool,
    },
    /// Print Schur index data lines for catalog groups
    SchurRule { names: Vec<String> },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::UnknownName(_)) => 2,
        Some(Error::UnknownSchurIndex { .. }) => 3,
        Some(Error::DataConflict(_)) => 4,
        Some(Error::NotIndexTwo { .. }) => 5,
        Some(Error::NonCommutingLadder(_)) => 6,
        Some(Error::NotAutomorphism(_)) => 7,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn common(cli: &Cli, command: &str, provider: &SchurProvider, input: &[(&str, &str)]) -> Common {
    Common {
        schema: report::SCHEMA,
        command: command.to_string(),
        input: input.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
        seed: cli.seed,
        provenance: provider.provenance().to_vec(),
    }
}

fn emit(cli: &Cli, json: String, text: String) {
    match cli.format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let provider = || config::provider(&config::data_dir(), &cli.schur_data);
    match &cli.command {
        Command::Invariants { spec } => {
            let p = provider()?;
            let g = Arc::new(resolve_spec(spec)?);
            let k = GroupK::with_options(g, &p, cli.seed, Reduction::Augmentation)?;
            let r = InvariantsReport::new(common(cli, "invariants", &p, &[("spec", spec)]), spec, &k.report());
            emit(cli, report::to_json(&r), r.text());
        }
        Command::Amalgam { h, k1, embed1, k2, embed2 } => {
            let p = provider()?;
            let hg = Arc::new(resolve_spec(h)?);
            let g1 = Arc::new(resolve_spec(k1)?);
            let g2 = if k2 == k1 { g1.clone() } else { Arc::new(resolve_spec(k2)?) };
            let e1 = hom_from_embedding(embed1, hg.clone(), g1).context("embedding 1")?;
            let e2 = hom_from_embedding(embed2, hg, g2).context("embedding 2")?;
            let spec = AmalgamSpec::new(e1, e2)?;
            let im = image_from_one_skeleton_with(&spec.skeleton(), &p, cli.seed, Reduction::Augmentation)?;
            let input = [("h", h.as_str()), ("k1", k1), ("embed1", embed1), ("k2", k2), ("embed2", embed2)];
            let bare = |s: &str| s.strip_prefix("name:").unwrap_or(s).to_string();
            let name = format!("{} *_{} {}", bare(k1), bare(h), bare(k2));
            let r = AmalgamReport::new(common(cli, "amalgam", &p, &input), name, embed1.clone(), embed2.clone(), &im);
            emit(cli, report::to_json(&r), r.text());
        }
        Command::Vc1 { h, aut } => {
            let p = provider()?;
            let g = Arc::new(resolve_spec(h)?);
            let t = hom_from_embedding(aut, g.clone(), g)?;
            let v = vc1_k0q(&t, &p)?;
            let input = [("h", h.as_str()), ("aut", aut)];
            let r = Vc1ReportJson::new(common(cli, "vc1", &p, &input), h.clone(), aut.clone(), &v);
            emit(cli, report::to_json(&r), r.text());
        }
        Command::Corpus { json } => {
            let p = provider()?;
            let mut corpus = Corpus::new(p, cli.seed)?;
            let result = corpus.run();
            if *json || cli.format == Format::Json {
                println!("{}", report::to_json(&result));
            } else {
                for o in &result.results {
                    println!("{o}");
                }
                println!("{}", result.summary);
            }
            if result.failed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::SchurRule { names } => {
            let mut c = Collector::default();
            for n in names {
                c.add(n, Arc::new(catalog(n)?))?;
            }
            print!("{}", c.finish());
        }
    }
    Ok(ExitCode::SUCCESS)
}
