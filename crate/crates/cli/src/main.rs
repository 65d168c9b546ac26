mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use stablemaps_core::basis::{
    class_expression, emit_relations, enumerate_basis, BasisClass, ClassExpression,
};
use stablemaps_core::poincare::{betti_numbers, poincare_direct, PoincareQuery, Recursion};
use stablemaps_core::qpoly::QPoly;
use stablemaps_core::trees::{
    enumerate_basis_trees, enumerate_stable_trees, BStructure, RootedMTree,
};
use stablemaps_core::Error;

/// Betti numbers, Chow bases and ring presentations of the spaces of
/// genus-zero stable maps to projective space.
#[derive(Parser, Debug)]
#[command(name = "stablemaps", version)]
struct Cli {
    /// Do not read or write the recursion cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache file; overrides STABLEMAPS_CACHE and the default location.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poincaré polynomial and Betti numbers.
    Betti {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Rooted trees indexing the basis, or all stable trees with --all.
    Trees {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// List every stable tree, including those with symmetries.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Basis classes of codimension k.
    Basis {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Write the symmetrization out term by term.
        #[arg(long)]
        expand_sym: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generators-and-relations presentation of the Chow ring.
    Relations {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Recursive,
    Both,
}

enum Failure {
    Input(String),
    Mismatch(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_)
            | Error::NoStableTrees { .. }
            | Error::Intractable(_)
            | Error::InvalidPartition(_)
            | Error::NotGood(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Betti {
            n,
            d,
            m,
            method,
            json,
        } => betti(cli, PoincareQuery::new(n, d, m)?, method, json),
        Command::Trees { m, d, all, json } => trees(m, d, all, json),
        Command::Basis {
            n,
            d,
            m,
            k,
            expand_sym,
            json,
        } => basis(n, d, m, k, expand_sym, json),
        Command::Relations { n, d, m, json } => relations(n, d, m, json),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn int_json(x: &BigInt) -> Value {
    match u64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

fn recursive(cli: &Cli, query: &PoincareQuery) -> Result<QPoly, Failure> {
    let rec = Recursion::new(query.n)?;
    let path = if cli.no_cache {
        None
    } else {
        cli.cache.clone().or_else(cache::default_path)
    };
    if let Some(p) = &path {
        cache::seed(&rec, p);
    }
    let poly = rec.poincare(query)?;
    if let Some(p) = &path {
        if let Err(e) = cache::save(&rec, p) {
            eprintln!("warning: could not write cache {}: {e}", p.display());
        }
    }
    Ok(poly)
}

fn betti(cli: &Cli, query: PoincareQuery, method: Method, json: bool) -> Result<String, Failure> {
    let poly = match method {
        Method::Direct => poincare_direct(&query)?,
        Method::Recursive => recursive(cli, &query)?,
        Method::Both => {
            let direct = poincare_direct(&query)?;
            let rec = recursive(cli, &query)?;
            if direct != rec {
                return Err(Failure::Mismatch(format!(
                    "methods disagree for {query}: direct {direct}, recursive {rec}"
                )));
            }
            direct
        }
    };
    let betti = betti_numbers(&poly, &query)?;
    if json {
        let method = match method {
            Method::Direct => "direct",
            Method::Recursive => "recursive",
            Method::Both => "both",
        };
        return to_json(&serde_json::json!({
            "n": query.n,
            "d": query.d,
            "m": query.m,
            "dimension": query.dimension(),
            "method": method,
            "poincare": betti.iter().map(int_json).collect::<Vec<_>>(),
            "display": poly.to_string(),
        }));
    }
    let mut out = format!("{poly}\n");
    let cells: Vec<String> = betti.iter().map(BigInt::to_string).collect();
    writeln!(out, "[{}]", cells.join(", ")).unwrap();
    Ok(out)
}

fn trees(m: u32, d: u32, all: bool, json: bool) -> Result<String, Failure> {
    if m == 0 {
        return Err(Failure::Input("m must be at least 1".into()));
    }
    let list: Vec<RootedMTree> = if all {
        enumerate_stable_trees(m, d)?
    } else {
        enumerate_basis_trees(m, d)?
    };
    if json {
        return to_json(&list);
    }
    Ok(list.iter().map(|t| format!("{t}\n")).collect())
}

#[derive(Serialize)]
struct BasisEntry<'a> {
    tree: &'a RootedMTree,
    b: &'a BStructure,
    k: u32,
    h_power: u32,
    psi_power: u32,
    class: ClassExpression,
}

fn basis(n: u32, d: u32, m: u32, k: u32, expand_sym: bool, json: bool) -> Result<String, Failure> {
    let classes = enumerate_basis(n, d, m, k)?;
    let exprs = classes
        .iter()
        .map(|c| class_expression(c, expand_sym))
        .collect::<Result<Vec<_>, _>>()?;
    if json {
        let entries: Vec<BasisEntry> = classes
            .iter()
            .zip(exprs)
            .map(|(c, class): (&BasisClass, _)| BasisEntry {
                tree: &c.tree,
                b: &c.b,
                k: c.k,
                h_power: c.h_power,
                psi_power: c.psi_power,
                class,
            })
            .collect();
        return to_json(&entries);
    }
    let mut out = String::new();
    for (c, e) in classes.iter().zip(&exprs) {
        let b: Vec<String> = c.b.b.iter().map(u32::to_string).collect();
        writeln!(out, "{}  b=[{}]  {e}", c.tree, b.join(",")).unwrap();
    }
    Ok(out)
}

fn relations(n: u32, d: u32, m: u32, json: bool) -> Result<String, Failure> {
    let rels = emit_relations(n, d, m)?;
    if json {
        return to_json(&rels);
    }
    let mut out = String::new();
    for r in &rels {
        let tag = format!("({})", r.family.tag());
        if r.label.is_empty() {
            writeln!(out, "{tag:<5} {}", r.expr).unwrap();
        } else {
            writeln!(out, "{tag:<5} {}  [{}]", r.expr, r.label).unwrap();
        }
    }
    Ok(out)
}
