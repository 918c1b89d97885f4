//! Any file without a structured triplifier is embedded whole as a base64
//! literal in slot 1.

use base64::Engine as _;
use oxrdf::Term;
use sparql_anything::query::{execute_query, ExecutionContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let bytes: Vec<u8> = (0..=255).collect();
    std::fs::write(dir.path().join("all-bytes.bin"), &bytes)?;

    let result = execute_query(
        "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
         SELECT ?b WHERE { SERVICE <x-sparql-anything:location=all-bytes.bin> { [] rdf:_1 ?b } }",
        &ExecutionContext::new(dir.path()),
    )?;
    let Some(Term::Literal(lit)) = result.rows().pop().and_then(|mut r| r.remove("b")) else {
        return Err("no literal bound".into());
    };
    let decoded = base64::engine::general_purpose::STANDARD.decode(lit.value())?;
    println!("{} ({} chars)", lit.datatype(), lit.value().len());
    println!("round trip exact: {}", decoded == bytes);
    Ok(())
}
