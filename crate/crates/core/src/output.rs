//! Serializing graphs, datasets and query results.

use crate::error::{Error, Result};
use crate::model::{DEFAULT_DATA_NAMESPACE, FX_NAMESPACE, RDF_NAMESPACE};
use crate::query::QueryResult;
use oxrdf::{Dataset, Graph, GraphNameRef};
use oxttl::{NTriplesSerializer, TriGSerializer, TurtleSerializer};
use sparesults::{QueryResultsFormat, QueryResultsSerializer};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    NTriples,
    Turtle,
    TriG,
    SparqlResultsJson,
    SparqlResultsCsv,
    SparqlResultsTsv,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 6] = [
        OutputFormat::NTriples,
        OutputFormat::Turtle,
        OutputFormat::TriG,
        OutputFormat::SparqlResultsJson,
        OutputFormat::SparqlResultsCsv,
        OutputFormat::SparqlResultsTsv,
    ];

    pub const DEFAULT_GRAPH: OutputFormat = OutputFormat::Turtle;
    pub const DEFAULT_RESULTS: OutputFormat = OutputFormat::SparqlResultsJson;

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::NTriples => "ntriples",
            OutputFormat::Turtle => "turtle",
            OutputFormat::TriG => "trig",
            OutputFormat::SparqlResultsJson => "sparql-results-json",
            OutputFormat::SparqlResultsCsv => "sparql-results-csv",
            OutputFormat::SparqlResultsTsv => "sparql-results-tsv",
        }
    }

    pub fn is_graph_format(self) -> bool {
        matches!(
            self,
            OutputFormat::NTriples | OutputFormat::Turtle | OutputFormat::TriG
        )
    }

    fn results_format(self) -> Option<QueryResultsFormat> {
        match self {
            OutputFormat::SparqlResultsJson => Some(QueryResultsFormat::Json),
            OutputFormat::SparqlResultsCsv => Some(QueryResultsFormat::Csv),
            OutputFormat::SparqlResultsTsv => Some(QueryResultsFormat::Tsv),
            _ => None,
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ntriples" | "nt" | "n-triples" => OutputFormat::NTriples,
            "turtle" | "ttl" => OutputFormat::Turtle,
            "trig" => OutputFormat::TriG,
            "sparql-results-json" | "json" => OutputFormat::SparqlResultsJson,
            "sparql-results-csv" | "csv" => OutputFormat::SparqlResultsCsv,
            "sparql-results-tsv" | "tsv" => OutputFormat::SparqlResultsTsv,
            _ => {
                return Err(Error::Config(format!(
                    "unknown output format {s:?}; expected one of {}",
                    OutputFormat::ALL.map(OutputFormat::name).join(", ")
                )))
            }
        })
    }
}

const PREFIXES: [(&str, &str); 3] = [
    ("fx", FX_NAMESPACE),
    ("rdf", RDF_NAMESPACE),
    ("xyz", DEFAULT_DATA_NAMESPACE),
];

fn io(e: std::io::Error) -> Error {
    Error::Serialization(e.to_string())
}

fn mismatch(format: OutputFormat, what: &str) -> Error {
    Error::Serialization(format!("{format} cannot serialize {what}"))
}

pub fn write_graph(graph: &Graph, format: OutputFormat, writer: impl Write) -> Result<()> {
    match format {
        OutputFormat::NTriples => {
            let mut s = NTriplesSerializer::new().for_writer(writer);
            for t in graph {
                s.serialize_triple(t).map_err(io)?;
            }
            s.finish().flush().map_err(io)
        }
        OutputFormat::Turtle => {
            let mut serializer = TurtleSerializer::new();
            for (p, iri) in PREFIXES {
                serializer = serializer.with_prefix(p, iri).expect("valid prefix IRI");
            }
            let mut s = serializer.for_writer(writer);
            for t in graph {
                s.serialize_triple(t).map_err(io)?;
            }
            s.finish().map_err(io)?.flush().map_err(io)
        }
        OutputFormat::TriG => {
            let mut s = trig(writer);
            for t in graph {
                s.serialize_quad(t.in_graph(GraphNameRef::DefaultGraph))
                    .map_err(io)?;
            }
            s.finish().map_err(io)?.flush().map_err(io)
        }
        _ => Err(mismatch(format, "a graph")),
    }
}

fn trig<W: Write>(writer: W) -> oxttl::trig::WriterTriGSerializer<W> {
    let mut serializer = TriGSerializer::new();
    for (p, iri) in PREFIXES {
        serializer = serializer.with_prefix(p, iri).expect("valid prefix IRI");
    }
    serializer.for_writer(writer)
}

/// Writes every graph of `dataset`; only TriG can carry named graphs.
pub fn write_dataset(dataset: &Dataset, format: OutputFormat, writer: impl Write) -> Result<()> {
    if format != OutputFormat::TriG {
        return Err(mismatch(format, "named graphs"));
    }
    let mut s = trig(writer);
    for q in dataset {
        s.serialize_quad(q).map_err(io)?;
    }
    s.finish().map_err(io)?.flush().map_err(io)
}

pub fn write_result(result: &QueryResult, format: OutputFormat, mut writer: impl Write) -> Result<()> {
    match result {
        QueryResult::Graph(g) => write_graph(g, format, writer),
        QueryResult::Boolean(b) => {
            let f = format
                .results_format()
                .ok_or_else(|| mismatch(format, "a boolean result"))?;
            QueryResultsSerializer::from_format(f)
                .serialize_boolean_to_writer(&mut writer, *b)
                .map_err(io)?;
            writer.flush().map_err(io)
        }
        QueryResult::Solutions {
            variables,
            solutions,
        } => {
            let f = format
                .results_format()
                .ok_or_else(|| mismatch(format, "solutions"))?;
            let mut s = QueryResultsSerializer::from_format(f)
                .serialize_solutions_to_writer(&mut writer, variables.clone())
                .map_err(io)?;
            for solution in solutions {
                s.serialize(solution).map_err(io)?;
            }
            s.finish().map_err(io)?;
            writer.flush().map_err(io)
        }
    }
}

/// Default format for a result: Turtle for graphs, results JSON otherwise.
pub fn default_format(result: &QueryResult) -> OutputFormat {
    match result {
        QueryResult::Graph(_) => OutputFormat::DEFAULT_GRAPH,
        _ => OutputFormat::DEFAULT_RESULTS,
    }
}
