use clap::{Args, Parser, Subcommand};
use sparql_anything::bench::{self, ScaleConfig};
use sparql_anything::dataset::assemble;
use sparql_anything::output::{self, OutputFormat};
use sparql_anything::query::{execute_query, parse_query, ExecutionContext, DEFAULT_FETCH_BUDGET};
use sparql_anything::service_uri::ServiceSpec;
use sparql_anything::triplify::TriplifierRegistry;
use sparql_anything::Error;
use spargebra::Query;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sparql-anything", version, about = "Query non-RDF files with SPARQL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the RDF a resource triplifies to.
    Triplify(TriplifyArgs),
    /// Run a SPARQL query.
    Query(QueryArgs),
    /// Token counts and scaling measurements.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct TriplifyArgs {
    location: String,
    #[arg(long = "csv.headers", num_args = 0..=1, default_missing_value = "true")]
    csv_headers: Option<bool>,
    #[arg(long = "mime-type")]
    mime_type: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    metadata: Option<bool>,
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    namespace: Option<String>,
    #[arg(long)]
    charset: Option<String>,
    #[arg(long = "txt.regex")]
    txt_regex: Option<String>,
    /// ntriples, turtle or trig; trig by default when a metadata graph is present.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, short)]
    query: PathBuf,
    #[arg(long, short, value_parser = parse_format)]
    output: Option<OutputFormat>,
    /// Reject SERVICE clauses that are not facade IRIs.
    #[arg(long)]
    no_federation: bool,
    /// Directory relative locations resolve against.
    #[arg(long)]
    base_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_FETCH_BUDGET)]
    fetch_budget: usize,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Token totals and distinct tokens per query file.
    Tokens {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Time a query over JSON arrays of growing size; prints CSV.
    Scale {
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SCALE_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        /// JSON object copied into every array member.
        #[arg(long)]
        template: Option<PathBuf>,
        /// Query reading the array as `data.json`.
        #[arg(long)]
        query: Option<PathBuf>,
        #[arg(long, default_value_t = bench::DEFAULT_BYTE_BUDGET)]
        byte_budget: usize,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Run(Box<dyn std::error::Error>),
}

impl<E: std::error::Error + 'static> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(Box::new(e))
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Run(format!("cannot read {}: {e}", path.display()).into()))
}

fn triplify(args: TriplifyArgs) -> Result<(), Failure> {
    let mut spec = ServiceSpec::new(args.location);
    spec.media_type_override = args.mime_type;
    spec.charset = args.charset;
    spec.namespace = args.namespace;
    spec.root_iri = args.root;
    spec.metadata = args.metadata.unwrap_or(false);
    spec.triplifier_options.csv_headers = args.csv_headers.unwrap_or(false);
    if let Some(re) = args.txt_regex {
        spec.triplifier_options.text_tokenizer_pattern = re;
    }
    spec.effective_options().validate()?;
    if let Some(f) = args.format.filter(|f| !f.is_graph_format()) {
        return Err(Failure::Usage(format!("{f} is not an RDF format")));
    }

    let dataset = assemble(&spec, &std::env::current_dir()?, &TriplifierRegistry::shared())?;
    let stdout = io::stdout().lock();
    if dataset.has_metadata() {
        let format = args.format.unwrap_or(OutputFormat::TriG);
        if format != OutputFormat::TriG {
            return Err(Failure::Usage(format!(
                "{format} cannot hold the metadata graph; use trig"
            )));
        }
        output::write_dataset(dataset.as_dataset(), format, stdout)?;
    } else {
        let format = args.format.unwrap_or(OutputFormat::DEFAULT_GRAPH);
        output::write_graph(&dataset.data_graph(), format, stdout)?;
    }
    Ok(())
}

fn query(args: QueryArgs) -> Result<(), Failure> {
    let text = read(&args.query)?;
    let graph_form = matches!(
        parse_query(&text)?,
        Query::Construct { .. } | Query::Describe { .. }
    );
    let format = match args.output {
        Some(f) if f.is_graph_format() != graph_form => {
            return Err(Failure::Usage(format!(
                "{f} does not fit a {} query",
                if graph_form { "graph" } else { "SELECT or ASK" }
            )))
        }
        Some(f) => f,
        None if graph_form => OutputFormat::DEFAULT_GRAPH,
        None => OutputFormat::DEFAULT_RESULTS,
    };
    let base = match args.base_dir {
        Some(dir) => dir,
        None => std::env::current_dir()?,
    };
    let ctx = ExecutionContext::new(base)
        .with_fetch_budget(args.fetch_budget)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .with_federation(!args.no_federation);
    let result = execute_query(&text, &ctx)?;
    output::write_result(&result, format, io::stdout().lock())?;
    Ok(())
}

fn bench(cmd: BenchCommand) -> Result<(), Failure> {
    match cmd {
        BenchCommand::Tokens { files } => {
            let texts = files
                .iter()
                .map(|p| Ok((p.display().to_string(), read(p)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let stats = bench::token_stats(&texts)?;
            bench::write_token_stats(&stats, io::stdout().lock())?;
        }
        BenchCommand::Scale {
            sizes,
            runs,
            template,
            query,
            byte_budget,
        } => {
            let mut config = ScaleConfig {
                sizes,
                runs,
                byte_budget,
                ..Default::default()
            };
            if let Some(path) = template {
                match serde_json::from_str(&read(&path)?)? {
                    serde_json::Value::Object(map) => config.template = map,
                    _ => return Err(Failure::Usage("the template must be a JSON object".into())),
                }
            }
            if let Some(path) = query {
                config.query = read(&path)?;
            }
            let rows = bench::scale_harness(&config)?;
            bench::write_scale_csv(&rows, io::stdout().lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Triplify(args) => triplify(args),
        Command::Query(args) => query(args),
        Command::Bench(cmd) => bench(cmd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            let _ = io::stdout().flush();
            eprint!("error: {e}");
            let mut source = e.source();
            while let Some(s) = source {
                eprint!(": {s}");
                source = s.source();
            }
            eprintln!();
            ExitCode::from(1)
        }
    }
}
