//! SPARQL 1.1 evaluation with `SERVICE <x-sparql-anything:…>` resolved
//! against facade datasets.

use crate::dataset::{assemble, http_agent, DatasetCache};
use crate::error::{Error, Result};
use crate::service_uri::{is_facade_iri, parse_service_uri};
use crate::triplify::TriplifierRegistry;
use oxiri::Iri;
use oxrdf::{BlankNode, Dataset, Graph, GraphName, NamedNode, Term, Variable};
use sparesults::{QueryResultsFormat, QueryResultsParser, QuerySolution, ReaderQueryResultsParserOutput};
use spareval::{DefaultServiceHandler, QueryEvaluationError, QueryEvaluator, QueryResults, QuerySolutionIter};
use spargebra::algebra::{Expression, GraphPattern};
use spargebra::term::NamedNodePattern;
use spargebra::{Query, SparqlParser};
use std::collections::HashMap;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

pub const DEFAULT_FETCH_BUDGET: usize = 1000;

/// Settings and per-execution state for [`execute_query`]. One context
/// serves one execution at a time; the dataset cache is emptied when an
/// execution ends.
#[derive(Debug)]
pub struct ExecutionContext {
    base_directory: PathBuf,
    fetch_budget: usize,
    federation: bool,
    registry: Arc<TriplifierRegistry>,
    cache: Arc<DatasetCache>,
}

impl ExecutionContext {
    pub fn new(base_directory: impl Into<PathBuf>) -> Self {
        ExecutionContext {
            base_directory: base_directory.into(),
            fetch_budget: DEFAULT_FETCH_BUDGET,
            federation: true,
            registry: TriplifierRegistry::shared(),
            cache: Arc::new(DatasetCache::new(DEFAULT_FETCH_BUDGET)),
        }
    }

    /// A context rooted at the process working directory.
    pub fn current_dir() -> Result<Self> {
        Ok(Self::new(std::env::current_dir()?))
    }

    pub fn with_fetch_budget(mut self, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::Config("the fetch budget must be at least 1".into()));
        }
        self.fetch_budget = budget;
        self.cache = Arc::new(DatasetCache::new(budget));
        Ok(self)
    }

    pub fn with_federation(mut self, enabled: bool) -> Self {
        self.federation = enabled;
        self
    }

    pub fn with_registry(mut self, registry: TriplifierRegistry) -> Self {
        self.registry = Arc::new(registry);
        self
    }

    pub fn base_directory(&self) -> &Path {
        &self.base_directory
    }

    pub fn fetch_budget(&self) -> usize {
        self.fetch_budget
    }

    pub fn federation(&self) -> bool {
        self.federation
    }

    /// Resources assembled by the most recent execution.
    pub fn fetch_count(&self) -> usize {
        self.cache.assemblies()
    }
}

#[derive(Debug, PartialEq)]
pub enum QueryResult {
    Solutions {
        variables: Vec<Variable>,
        solutions: Vec<QuerySolution>,
    },
    Graph(Graph),
    Boolean(bool),
}

impl QueryResult {
    /// Rows as variable-name to term maps, unbound variables left out.
    pub fn rows(&self) -> Vec<HashMap<String, Term>> {
        match self {
            QueryResult::Solutions { solutions, .. } => solutions
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|(v, t)| (v.as_str().to_owned(), t.clone()))
                        .collect()
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Parses `query_text` with a standard SPARQL 1.1 parser and evaluates it,
/// resolving facade SERVICE clauses through `ctx`.
pub fn execute_query(query_text: &str, ctx: &ExecutionContext) -> Result<QueryResult> {
    let query = parse_query(query_text)?;
    ctx.cache.clear();
    let result = evaluate(query, ctx);
    ctx.cache.release();
    result
}

/// Parses standard SPARQL 1.1 only: the LATERAL extension the evaluator
/// understands is refused.
pub fn parse_query(query_text: &str) -> Result<Query> {
    let query = SparqlParser::new()
        .parse_query(query_text)
        .map_err(|e| Error::Syntax(e.to_string()))?;
    if contains_lateral(pattern(&query)) {
        return Err(Error::Syntax(
            "LATERAL is not part of SPARQL 1.1".into(),
        ));
    }
    Ok(query)
}

fn pattern(query: &Query) -> &GraphPattern {
    match query {
        Query::Select { pattern, .. }
        | Query::Construct { pattern, .. }
        | Query::Describe { pattern, .. }
        | Query::Ask { pattern, .. } => pattern,
    }
}

fn pattern_mut(query: &mut Query) -> &mut GraphPattern {
    match query {
        Query::Select { pattern, .. }
        | Query::Construct { pattern, .. }
        | Query::Describe { pattern, .. }
        | Query::Ask { pattern, .. } => pattern,
    }
}

fn evaluate(mut query: Query, ctx: &ExecutionContext) -> Result<QueryResult> {
    let p = pattern_mut(&mut query);
    *p = lateralize(std::mem::replace(p, GraphPattern::Bgp { patterns: Vec::new() }));

    let handler = FacadeHandler {
        shared: Arc::new(Shared {
            base_directory: ctx.base_directory.clone(),
            registry: Arc::clone(&ctx.registry),
            cache: Arc::clone(&ctx.cache),
            federation: ctx.federation,
            memo: Mutex::new(HashMap::new()),
        }),
    };
    let evaluator = QueryEvaluator::new().with_default_service_handler(handler);
    let empty = Dataset::new();
    let results = evaluator
        .prepare(&query)
        .execute(&empty)
        .map_err(from_evaluation)?;
    collect(results)
}

fn collect(results: QueryResults<'_>) -> Result<QueryResult> {
    Ok(match results {
        QueryResults::Solutions(iter) => {
            let variables = iter.variables().to_vec();
            let solutions = iter
                .collect::<Result<Vec<_>, _>>()
                .map_err(from_evaluation)?;
            QueryResult::Solutions {
                variables,
                solutions,
            }
        }
        QueryResults::Boolean(b) => QueryResult::Boolean(b),
        QueryResults::Graph(iter) => QueryResult::Graph(
            iter.collect::<Result<Graph, _>>()
                .map_err(from_evaluation)?,
        ),
    })
}

/// Unwraps errors raised by the service handler back into [`Error`].
fn from_evaluation(e: QueryEvaluationError) -> Error {
    match e {
        QueryEvaluationError::Service(inner) => match inner.downcast::<Error>() {
            Ok(e) => *e,
            Err(other) => Error::Evaluation(QueryEvaluationError::Service(other)),
        },
        e => Error::Evaluation(e),
    }
}

fn is_variable_service(p: &GraphPattern) -> bool {
    matches!(
        p,
        GraphPattern::Service {
            name: NamedNodePattern::Variable(_),
            ..
        }
    )
}

/// Turns joins whose right side is `SERVICE ?var` into lateral joins so the
/// endpoint variable is bound, row by row, by the patterns before it.
pub(crate) fn lateralize(p: GraphPattern) -> GraphPattern {
    use GraphPattern as P;
    let b = |p: Box<P>| Box::new(lateralize(*p));
    match p {
        P::Join { left, right } => {
            let (left, right) = (b(left), b(right));
            if is_variable_service(&right) {
                P::Lateral { left, right }
            } else {
                P::Join { left, right }
            }
        }
        P::LeftJoin {
            left,
            right,
            expression,
        } => {
            let (left, right) = (b(left), b(right));
            if is_variable_service(&right) {
                P::Lateral {
                    left,
                    right: Box::new(P::LeftJoin {
                        left: Box::new(P::Bgp { patterns: Vec::new() }),
                        right,
                        expression,
                    }),
                }
            } else {
                P::LeftJoin {
                    left,
                    right,
                    expression,
                }
            }
        }
        P::Lateral { left, right } => P::Lateral {
            left: b(left),
            right: b(right),
        },
        P::Filter { expr, inner } => P::Filter { expr, inner: b(inner) },
        P::Union { left, right } => P::Union {
            left: b(left),
            right: b(right),
        },
        P::Graph { name, inner } => P::Graph { name, inner: b(inner) },
        P::Extend {
            inner,
            variable,
            expression,
        } => P::Extend {
            inner: b(inner),
            variable,
            expression,
        },
        P::Minus { left, right } => P::Minus {
            left: b(left),
            right: b(right),
        },
        P::OrderBy { inner, expression } => P::OrderBy {
            inner: b(inner),
            expression,
        },
        P::Project { inner, variables } => P::Project {
            inner: b(inner),
            variables,
        },
        P::Distinct { inner } => P::Distinct { inner: b(inner) },
        P::Reduced { inner } => P::Reduced { inner: b(inner) },
        P::Slice {
            inner,
            start,
            length,
        } => P::Slice {
            inner: b(inner),
            start,
            length,
        },
        P::Group {
            inner,
            variables,
            aggregates,
        } => P::Group {
            inner: b(inner),
            variables,
            aggregates,
        },
        P::Service { name, inner, silent } => P::Service {
            name,
            inner: b(inner),
            silent,
        },
        leaf @ (P::Bgp { .. } | P::Path { .. } | P::Values { .. }) => leaf,
    }
}

fn contains_lateral(p: &GraphPattern) -> bool {
    use GraphPattern as P;
    match p {
        P::Lateral { .. } => true,
        P::Bgp { .. } | P::Path { .. } | P::Values { .. } => false,
        P::Join { left, right } | P::Union { left, right } | P::Minus { left, right } => {
            contains_lateral(left) || contains_lateral(right)
        }
        P::LeftJoin {
            left,
            right,
            expression,
        } => {
            contains_lateral(left)
                || contains_lateral(right)
                || expression.as_ref().is_some_and(expression_has_lateral)
        }
        P::Filter { expr, inner } => expression_has_lateral(expr) || contains_lateral(inner),
        P::Extend {
            inner, expression, ..
        } => expression_has_lateral(expression) || contains_lateral(inner),
        P::OrderBy { inner, expression } => {
            contains_lateral(inner)
                || expression.iter().any(|o| match o {
                    spargebra::algebra::OrderExpression::Asc(e)
                    | spargebra::algebra::OrderExpression::Desc(e) => expression_has_lateral(e),
                })
        }
        P::Group {
            inner, aggregates, ..
        } => {
            contains_lateral(inner)
                || aggregates.iter().any(|(_, a)| match a {
                    spargebra::algebra::AggregateExpression::FunctionCall { expr, .. } => {
                        expression_has_lateral(expr)
                    }
                    _ => false,
                })
        }
        P::Graph { inner, .. }
        | P::Project { inner, .. }
        | P::Distinct { inner }
        | P::Reduced { inner }
        | P::Slice { inner, .. }
        | P::Service { inner, .. } => contains_lateral(inner),
    }
}

fn expression_has_lateral(e: &Expression) -> bool {
    use Expression as E;
    match e {
        E::Exists(p) => contains_lateral(p),
        E::NamedNode(_) | E::Literal(_) | E::Variable(_) | E::Bound(_) => false,
        E::Or(a, b)
        | E::And(a, b)
        | E::Equal(a, b)
        | E::SameTerm(a, b)
        | E::Greater(a, b)
        | E::GreaterOrEqual(a, b)
        | E::Less(a, b)
        | E::LessOrEqual(a, b)
        | E::Add(a, b)
        | E::Subtract(a, b)
        | E::Multiply(a, b)
        | E::Divide(a, b) => expression_has_lateral(a) || expression_has_lateral(b),
        E::UnaryPlus(a) | E::UnaryMinus(a) | E::Not(a) => expression_has_lateral(a),
        E::In(a, list) => expression_has_lateral(a) || list.iter().any(expression_has_lateral),
        E::If(a, b, c) => {
            expression_has_lateral(a) || expression_has_lateral(b) || expression_has_lateral(c)
        }
        E::Coalesce(list) | E::FunctionCall(_, list) => list.iter().any(expression_has_lateral),
    }
}

#[derive(Debug)]
struct Shared {
    base_directory: PathBuf,
    registry: Arc<TriplifierRegistry>,
    cache: Arc<DatasetCache>,
    federation: bool,
    /// Inner results per (service IRI, pattern), reused when a variable
    /// endpoint repeats a value across rows.
    memo: Mutex<HashMap<(String, String), Arc<Table>>>,
}

#[derive(Debug)]
struct Table {
    variables: Arc<[Variable]>,
    rows: Vec<Vec<Option<Term>>>,
}

#[derive(Debug, Clone)]
struct FacadeHandler {
    shared: Arc<Shared>,
}

impl FacadeHandler {
    fn facade(
        &self,
        iri: &str,
        pattern: &GraphPattern,
        base_iri: Option<&Iri<String>>,
    ) -> Result<Arc<Table>> {
        let key = (iri.to_owned(), pattern.to_string());
        if let Some(table) = self.shared.memo.lock().unwrap().get(&key) {
            return Ok(Arc::clone(table));
        }
        let spec = parse_service_uri(iri)?;
        let s = &self.shared;
        let dataset = s
            .cache
            .get_or_assemble(&spec, || assemble(&spec, &s.base_directory, &s.registry))?;

        let query = Query::Select {
            dataset: None,
            pattern: pattern.clone(),
            base_iri: base_iri.cloned(),
        };
        let evaluator = QueryEvaluator::new().with_default_service_handler(self.clone());
        let mut prepared = evaluator.prepare(&query);
        prepared.dataset_mut().set_default_graph(vec![GraphName::NamedNode(
            dataset.data_graph_name().into_owned(),
        )]);
        let QueryResults::Solutions(iter) = prepared
            .execute(dataset.as_dataset())
            .map_err(from_evaluation)?
        else {
            unreachable!("SELECT yields solutions")
        };
        let variables: Arc<[Variable]> = iter.variables().into();
        let rows = iter
            .map(|s| s.map(|s| s.values().to_vec()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(from_evaluation)?;
        let table = Arc::new(Table { variables, rows });
        s.memo.lock().unwrap().insert(key, Arc::clone(&table));
        Ok(table)
    }

    fn federated(
        &self,
        iri: &str,
        pattern: &GraphPattern,
        base_iri: Option<&Iri<String>>,
    ) -> Result<QuerySolutionIter<'static>> {
        if !self.shared.federation {
            return Err(Error::FederationDisabled(iri.to_owned()));
        }
        let query = Query::Select {
            dataset: None,
            pattern: pattern.clone(),
            base_iri: base_iri.cloned(),
        }
        .to_string();
        let fetch_error = |cause: String| Error::Fetch {
            location: iri.to_owned(),
            cause,
        };
        let mut response = http_agent()
            .post(iri)
            .header("Accept", "application/sparql-results+json")
            .content_type("application/sparql-query")
            .send(query)
            .map_err(|e| fetch_error(e.to_string()))?;
        let status = response.status().as_u16();
        if status >= 400 {
            return Err(Error::HttpStatus {
                location: iri.to_owned(),
                status,
            });
        }
        let mut body = Vec::new();
        response
            .body_mut()
            .as_reader()
            .read_to_end(&mut body)
            .map_err(|e| fetch_error(e.to_string()))?;
        match QueryResultsParser::from_format(QueryResultsFormat::Json)
            .for_reader(Cursor::new(body))
            .map_err(|e| fetch_error(e.to_string()))?
        {
            ReaderQueryResultsParserOutput::Solutions(solutions) => Ok(solutions.into()),
            ReaderQueryResultsParserOutput::Boolean(_) => {
                Err(fetch_error("endpoint answered with a boolean".into()))
            }
        }
    }
}

impl DefaultServiceHandler for FacadeHandler {
    type Error = Error;

    fn handle(
        &self,
        service_name: &NamedNode,
        pattern: &GraphPattern,
        base_iri: Option<&Iri<String>>,
    ) -> Result<QuerySolutionIter<'static>> {
        let iri = service_name.as_str();
        if !is_facade_iri(iri) {
            return self.federated(iri, pattern, base_iri);
        }
        let table = self
            .facade(iri, pattern, base_iri)
            .map_err(|e| Error::Service {
                iri: iri.to_owned(),
                source: Box::new(e),
            })?;
        // blank nodes are scoped to this evaluation of the clause
        let mut fresh: HashMap<BlankNode, BlankNode> = HashMap::new();
        let rows: Vec<_> = table
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| match t {
                        Some(Term::BlankNode(b)) => Some(Term::BlankNode(
                            fresh.entry(b.clone()).or_default().clone(),
                        )),
                        other => other.clone(),
                    })
                    .collect()
            })
            .collect();
        Ok(QuerySolutionIter::from_tuples(
            Arc::clone(&table.variables),
            rows.into_iter().map(Ok),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use oxrdf::Literal;
    use std::io::Write;

    fn dir_with(files: &[(&str, &[u8])]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, content) in files {
            let path = dir.path().join(name);
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::File::create(path).unwrap().write_all(content).unwrap();
        }
        dir
    }

    fn literal(row: &HashMap<String, Term>, var: &str) -> String {
        match &row[var] {
            Term::Literal(l) => l.value().to_owned(),
            t => panic!("{t}"),
        }
    }

    #[test]
    fn text_first_token() {
        let dir = dir_with(&[("f.txt", b"hello world")]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
             SELECT ?v { SERVICE <x-sparql-anything:location=f.txt> { [] rdf:_1 ?v } }",
            &ctx,
        )
        .unwrap();
        let rows = r.rows();
        assert_eq!(rows.len(), 1);
        assert_eq!(literal(&rows[0], "v"), "hello");
    }

    #[test]
    fn ask_root_on_empty_text() {
        let dir = dir_with(&[("empty.txt", b"")]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "ASK { SERVICE <x-sparql-anything:location=empty.txt> { [] a <http://sparql.xyz/facade-x/ns/Root> } }",
            &ctx,
        )
        .unwrap();
        assert_eq!(r, QueryResult::Boolean(true));
    }

    #[test]
    fn csv_rows_and_identical_services_share_one_fetch() {
        let dir = dir_with(&[("a.csv", b"id,artist\n1,A\n2,B\n3,C\n")]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "PREFIX xyz: <http://sparql.xyz/facade-x/data/>
             SELECT ?id ?artist {
               SERVICE <x-sparql-anything:csv.headers=true,location=a.csv> { ?r xyz:id ?id }
               SERVICE <x-sparql-anything:csv.headers=true,location=a.csv> { ?s xyz:id ?id ; xyz:artist ?artist }
             }",
            &ctx,
        )
        .unwrap();
        assert_eq!(r.rows().len(), 3);
        assert_eq!(ctx.fetch_count(), 1);

        execute_query(
            "SELECT * {
               SERVICE <x-sparql-anything:csv.headers=true,location=a.csv> { ?a ?b ?c }
               SERVICE <x-sparql-anything:location=a.csv> { ?d ?e ?f }
             }",
            &ctx,
        )
        .unwrap();
        assert_eq!(ctx.fetch_count(), 2);
    }

    #[test]
    fn blank_nodes_do_not_cross_services() {
        let dir = dir_with(&[("a.txt", b"x y")]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "SELECT * {
               SERVICE <x-sparql-anything:location=a.txt> { ?root a <http://sparql.xyz/facade-x/ns/Root> }
               SERVICE <x-sparql-anything:location=a.txt> { ?root a <http://sparql.xyz/facade-x/ns/Root> }
             }",
            &ctx,
        )
        .unwrap();
        assert!(r.rows().is_empty());
    }

    #[test]
    fn variable_endpoint_fetches_each_value_once() {
        let dir = dir_with(&[
            ("list.csv", b"file\na.txt\nb.txt\na.txt\nc.txt\n"),
            ("a.txt", b"alpha"),
            ("b.txt", b"beta"),
            ("c.txt", b"gamma"),
        ]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "PREFIX xyz: <http://sparql.xyz/facade-x/data/>
             PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
             SELECT ?file ?word {
               SERVICE <x-sparql-anything:csv.headers=true,location=list.csv> { ?r xyz:file ?file }
               BIND (IRI(CONCAT(\"x-sparql-anything:location=\", ?file)) AS ?src)
               SERVICE ?src { [] rdf:_1 ?word }
             }",
            &ctx,
        )
        .unwrap();
        let mut got: Vec<_> = r
            .rows()
            .iter()
            .map(|row| (literal(row, "file"), literal(row, "word")))
            .collect();
        got.sort();
        assert_eq!(
            got,
            [
                ("a.txt".into(), "alpha".into()),
                ("a.txt".into(), "alpha".into()),
                ("b.txt".into(), "beta".into()),
                ("c.txt".into(), "gamma".into())
            ]
        );
        assert_eq!(ctx.fetch_count(), 4);
    }

    #[test]
    fn optional_variable_endpoint() {
        let dir = dir_with(&[("list.csv", b"file\na.txt\n"), ("a.txt", b"alpha")]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "PREFIX xyz: <http://sparql.xyz/facade-x/data/>
             PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
             SELECT ?word {
               SERVICE <x-sparql-anything:csv.headers=true,location=list.csv> { ?r xyz:file ?file }
               BIND (IRI(CONCAT(\"x-sparql-anything:location=\", ?file)) AS ?src)
               OPTIONAL { SERVICE ?src { [] rdf:_2 ?word } }
             }",
            &ctx,
        )
        .unwrap();
        let rows = r.rows();
        assert_eq!(rows.len(), 1);
        assert!(!rows[0].contains_key("word"));
    }

    #[test]
    fn unbound_endpoint_is_an_error() {
        let ctx = ExecutionContext::new(".");
        let e = execute_query("SELECT * { SERVICE ?s { ?a ?b ?c } }", &ctx).unwrap_err();
        assert!(matches!(e, Error::Evaluation(_)), "{e}");
    }

    #[test]
    fn failures_name_the_service() {
        let ctx = ExecutionContext::new(".");
        let e = execute_query(
            "SELECT * { SERVICE <x-sparql-anything:location=does-not-exist.csv> { ?a ?b ?c } }",
            &ctx,
        )
        .unwrap_err();
        match &e {
            Error::Service { iri, source } => {
                assert_eq!(iri, "x-sparql-anything:location=does-not-exist.csv");
                assert!(matches!(**source, Error::Fetch { .. }));
            }
            e => panic!("{e}"),
        }
        let r = execute_query(
            "SELECT * { SERVICE SILENT <x-sparql-anything:location=does-not-exist.csv> { ?a ?b ?c } }",
            &ctx,
        )
        .unwrap();
        assert_eq!(r.rows().len(), 1);
    }

    #[test]
    fn federation_can_be_disabled() {
        let ctx = ExecutionContext::new(".").with_federation(false);
        let e = execute_query("SELECT * { SERVICE <http://example.org/sparql> { ?a ?b ?c } }", &ctx)
            .unwrap_err();
        assert!(matches!(e, Error::FederationDisabled(_)), "{e}");
    }

    #[test]
    fn fetch_budget_is_enforced() {
        let dir = dir_with(&[("a.txt", b"a"), ("b.txt", b"b")]);
        let ctx = ExecutionContext::new(dir.path()).with_fetch_budget(1).unwrap();
        let e = execute_query(
            "SELECT * { SERVICE <x-sparql-anything:location=a.txt> { ?a ?b ?c } SERVICE <x-sparql-anything:location=b.txt> { ?d ?e ?f } }",
            &ctx,
        )
        .unwrap_err();
        assert!(matches!(e.root_cause(), Error::ResourceLimit(_)), "{e}");
        assert!(ExecutionContext::new(".").with_fetch_budget(0).is_err());
    }

    #[test]
    fn syntax_extensions_are_rejected() {
        for q in [
            "GENERATE { } WHERE { }",
            "SELECT * { ?a ?b ?c LATERAL { SELECT * { ?c ?d ?e } } }",
            "SELECT * { FILTER EXISTS { ?a ?b ?c LATERAL { ?c ?d ?e } } }",
        ] {
            assert!(matches!(parse_query(q), Err(Error::Syntax(_))), "{q}");
        }
        let e = parse_query("SELECT ?x WHERE { ?x ").unwrap_err();
        assert!(e.to_string().contains("1:"), "{e}");
    }

    #[test]
    fn construct_and_default_graph() {
        let dir = dir_with(&[("d.json", br#"{"name":"Ada"}"#)]);
        let ctx = ExecutionContext::new(dir.path());
        let r = execute_query(
            "PREFIX xyz: <http://sparql.xyz/facade-x/data/>
             CONSTRUCT { ?s <http://schema.org/name> ?n } WHERE {
               SERVICE <x-sparql-anything:location=d.json> { ?s xyz:name ?n }
             }",
            &ctx,
        )
        .unwrap();
        let QueryResult::Graph(g) = r else { panic!() };
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.object, Literal::new_simple_literal("Ada").as_ref().into());
    }

    #[test]
    fn lateral_rewrite_is_targeted() {
        let q = SparqlParser::new()
            .parse_query("SELECT * { BIND(<x-sparql-anything:a.txt> AS ?s) SERVICE ?s { ?a ?b ?c } SERVICE <x-sparql-anything:b.txt> { ?d ?e ?f } }")
            .unwrap();
        let rewritten = lateralize(pattern(&q).clone());
        assert!(contains_lateral(&rewritten));
        let text = format!("{rewritten}");
        assert_eq!(text.matches("LATERAL").count(), 1, "{text}");
    }
}
