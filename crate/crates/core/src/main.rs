// Copyright 2026 The ivecdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `ivecdb`: ingest relational databases into vector stores and query
//! them, their federation and its metadata.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ivecdb::algebra::{parse_statement, Statement};
use ivecdb::federation::{CatalogSource, Federation, Pattern, CALL};
use ivecdb::relation::{ColumnSpec, Relation, Schema};
use ivecdb::result::{Format, ResultDocument};
use ivecdb::rewrite::{answer, apply_update, rewrite, type_of};
use ivecdb::schemalog::{compile_rules, parse_program};
use ivecdb::store::{
    ingest, load_database, load_federation_config, open_federation, resolve_home, save_database,
    CatalogDocument, HOME_ENV,
};
use ivecdb::value::Value;
use ivecdb::vector::{check_canonical, matter, view, ViewType};
use ivecdb::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ivecdb",
    version,
    about = "Intensional vector-relational database"
)]
struct Cli {
    /// Directory holding one sub-directory per database.
    #[arg(long, global = true, env = HOME_ENV)]
    home: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse CSV data files into vector stores under the home.
    Ingest {
        #[arg(long)]
        catalog: PathBuf,
        /// Holds `<db>/<relation>.csv` or `<relation>.csv`.
        #[arg(long)]
        data: PathBuf,
    },
    /// Rebuild a user relation from its database's store.
    Matter {
        #[arg(long)]
        db: String,
        relation: String,
    },
    /// Rebuild a view of `relation:column` pairs, one row per t-index.
    View {
        #[arg(long)]
        db: String,
        #[arg(required = true)]
        columns: Vec<String>,
    },
    /// Run an algebra query or update statement against one database.
    Query {
        #[arg(long)]
        db: String,
        statement: String,
        /// Print the rewritten term on stderr.
        #[arg(long)]
        explain: bool,
    },
    /// Print the term a query is rewritten to over the vector relation.
    Rewrite {
        #[arg(long)]
        db: String,
        term: String,
        /// Also print the column provenance of the answer.
        #[arg(long)]
        explain: bool,
    },
    /// Metadata operators over the federation.
    Meta {
        #[command(flatten)]
        fed: FedArgs,
        #[command(subcommand)]
        op: MetaOp,
    },
    /// Relations holding a value.
    FindToken {
        #[command(flatten)]
        fed: FedArgs,
        value: String,
        /// Search for the text even when it reads as a number.
        #[arg(long)]
        text: bool,
    },
    /// Natural join of two relations whose attributes are read from the
    /// catalog relations.
    Njoin {
        #[command(flatten)]
        fed: FedArgs,
        #[arg(long)]
        db: String,
        left: String,
        right: String,
    },
    /// SchemaLog programs.
    Slog {
        #[command(subcommand)]
        op: SlogOp,
    },
    /// Federation maintenance.
    Fed {
        #[command(subcommand)]
        op: FedOp,
    },
}

#[derive(clap::Args)]
struct FedArgs {
    /// Federation config; defaults to every database in the home.
    #[arg(long)]
    fed: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MetaOp {
    Delta,
    Rho {
        /// `call_1`, or a CSV file of database names.
        #[arg(long, default_value = "call_1")]
        s: String,
    },
    Alpha {
        /// `call_2`, or a CSV file of (database, relation) pairs.
        #[arg(long, default_value = "call_2")]
        s: String,
    },
    Gamma {
        /// Comma-separated `attr->value` items; `_` is a wildcard.
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value = "call_2")]
        s: String,
    },
}

#[derive(Subcommand)]
enum SlogOp {
    Run {
        program: PathBuf,
        #[arg(long)]
        query: String,
        #[command(flatten)]
        fed: FedArgs,
        /// Print the compiled term on stderr.
        #[arg(long)]
        explain: bool,
    },
}

#[derive(Subcommand)]
enum FedOp {
    /// Check that every member store is the canonical parse of its
    /// materialized relations.
    Check {
        #[command(flatten)]
        fed: FedArgs,
    },
}

/// Writes to stdout; a closed pipe (as in `| head`) ends the process
/// quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            std::process::exit(1);
        }
        std::process::exit(0);
    }
}

struct Ctx {
    home: PathBuf,
    format: Format,
}

impl Ctx {
    fn federation(&self, args: &FedArgs) -> Result<Federation> {
        match &args.fed {
            Some(path) => load_federation_config(path, &self.home),
            None => open_federation(&self.home, None, CatalogSource::Derived),
        }
    }

    fn print(&self, r: &Relation) {
        emit(&ResultDocument::from(r).render(self.format));
    }
}

/// A parameter relation: a catalog level by name, or a CSV file whose
/// header names the columns.
fn param_relation(fed: &Federation, s: &str) -> Result<Relation> {
    if let Some(level) = CALL.iter().position(|c| *c == s) {
        return fed.call_level(level + 1).cloned();
    }
    let path = Path::new(s);
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{s}: {e}")))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<ColumnSpec> = rdr
        .headers()
        .map_err(|e| Error::InvalidArgument(format!("{s}: {e}")))?
        .iter()
        .map(ColumnSpec::named)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::InvalidArgument(format!("{s}: {e}")))?;
        rows.push(rec.iter().map(Value::text).collect());
    }
    Relation::from_rows(header, rows)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Ctx {
        home: resolve_home(cli.home.as_deref()),
        format: match cli.format {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        },
    };
    match cli.command {
        Command::Ingest { catalog, data } => {
            let doc = CatalogDocument::load(&catalog)?;
            let dbs = ingest(&doc, &data)?;
            let mut rows = Vec::new();
            for (schema, store) in &dbs {
                save_database(&ctx.home, schema, store)?;
                log::info!("wrote {}", ctx.home.join(&schema.name).display());
                rows.push(vec![
                    Value::text(&schema.name),
                    Value::int(schema.relations().len() as i64),
                    Value::int(store.len() as i64),
                ]);
            }
            let header = ["database", "relations", "quadruples"]
                .map(ColumnSpec::named)
                .to_vec();
            ctx.print(&Relation::from_rows(header, rows)?);
        }
        Command::Matter { db, relation } => {
            let (schema, store) = load_database(&ctx.home, &db)?;
            ctx.print(&matter(schema.require(&relation)?, &store));
        }
        Command::View { db, columns } => {
            let (schema, store) = load_database(&ctx.home, &db)?;
            let pairs = columns
                .iter()
                .map(|c| {
                    c.split_once(':')
                        .map(|(r, a)| (r.to_string(), a.to_string()))
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!("`{c}` is not relation:column"))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            let vt = ViewType(pairs);
            vt.check(&schema)?;
            ctx.print(&view(&vt, &store.to_relation())?);
        }
        Command::Query {
            db,
            statement,
            explain,
        } => {
            let (schema, store) = load_database(&ctx.home, &db)?;
            match parse_statement(&statement)? {
                Statement::Query(term) => {
                    if explain {
                        eprintln!("{}", rewrite(&term, &schema)?);
                    }
                    ctx.print(&answer(&term, &store, &schema)?);
                }
                Statement::Update(u) => {
                    let next = apply_update(&u, &store, &schema)?;
                    save_database(&ctx.home, &schema, &next)?;
                    ctx.print(&matter(schema.require(u.relation())?, &next));
                }
            }
        }
        Command::Rewrite { db, term, explain } => {
            let schema: Schema = load_database(&ctx.home, &db)?.0;
            let Statement::Query(term) = parse_statement(&term)? else {
                return Err(Error::InvalidArgument(
                    "rewrite takes a query, not an update".into(),
                ));
            };
            if explain {
                let vt = type_of(&term, &schema)?;
                let cols: Vec<String> = vt.0.iter().map(|(r, c)| format!("{r}:{c}")).collect();
                emit(&format!("-- provenance: {}\n", cols.join(", ")));
            }
            emit(&format!("{}\n", rewrite(&term, &schema)?));
        }
        Command::Meta { fed, op } => {
            let fed = ctx.federation(&fed)?;
            let out = match op {
                MetaOp::Delta => fed.era_delta()?,
                MetaOp::Rho { s } => fed.era_rho(&param_relation(&fed, &s)?)?,
                MetaOp::Alpha { s } => fed.era_alpha(&param_relation(&fed, &s)?)?,
                MetaOp::Gamma { pattern, s } => {
                    fed.era_gamma(&Pattern::parse(&pattern)?, &param_relation(&fed, &s)?)?
                }
            };
            ctx.print(&out);
        }
        Command::FindToken { fed, value, text } => {
            let fed = ctx.federation(&fed)?;
            let v = if text {
                Value::text(value)
            } else {
                Value::infer(&value)
            };
            ctx.print(&fed.find_token(&v)?);
        }
        Command::Njoin {
            fed,
            db,
            left,
            right,
        } => {
            let fed = ctx.federation(&fed)?;
            ctx.print(&fed.natural_join_unknown(&db, &left, &right)?);
        }
        Command::Slog {
            op:
                SlogOp::Run {
                    program,
                    query,
                    fed,
                    explain,
                },
        } => {
            let fed = ctx.federation(&fed)?;
            let text = fs::read_to_string(&program)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", program.display())))?;
            let terms = compile_rules(&parse_program(&text)?, &fed)?;
            let term = terms.get(&query).ok_or_else(|| {
                Error::InvalidArgument(format!("program defines no predicate `{query}`"))
            })?;
            if explain {
                eprintln!("{term}");
            }
            ctx.print(&fed.eval(term, None)?);
        }
        Command::Fed {
            op: FedOp::Check { fed },
        } => {
            let fed = ctx.federation(&fed)?;
            let mut rows = Vec::new();
            let mut all_ok = true;
            for m in fed.members() {
                let instance = m
                    .schema
                    .relations()
                    .iter()
                    .map(|s| (s.name.clone(), matter(s, &m.store)))
                    .collect();
                let ok = check_canonical(&m.schema, &m.store, &instance);
                all_ok &= ok;
                rows.push(vec![
                    Value::text(m.name()),
                    Value::text(if ok { "ok" } else { "not canonical" }),
                ]);
            }
            ctx.print(&Relation::from_rows(
                ["database", "status"].map(ColumnSpec::named).to_vec(),
                rows,
            )?);
            if !all_ok {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 3 } else { 2 })
        }
    }
}
