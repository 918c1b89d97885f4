//! The artwork scenario: a CSV of artworks joined with per-artwork JSON
//! subject files and embedded JPEG thumbnails, all in one SPARQL query.
//!
//! ```text
//! cargo run --example guide_query             # SELECT, results as CSV
//! cargo run --example guide_query -- construct
//! ```

use sparql_anything::output::{write_result, OutputFormat};
use sparql_anything::query::{execute_query, ExecutionContext};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/guide");
    let construct = std::env::args().nth(1).as_deref() == Some("construct");
    let file = if construct { "guide-construct.rq" } else { "guide.rq" };
    let query = std::fs::read_to_string(dir.join(file))?;

    let ctx = ExecutionContext::new(&dir);
    let started = std::time::Instant::now();
    let result = execute_query(&query, &ctx)?;
    eprintln!("{} sources assembled in {:.1?}", ctx.fetch_count(), started.elapsed());
    let format = if construct {
        OutputFormat::Turtle
    } else {
        OutputFormat::SparqlResultsCsv
    };
    write_result(&result, format, std::io::stdout())?;
    Ok(())
}
