//! Plain text split into numbered tokens. Through SERVICE the default
//! separator is a single space; a custom regular expression can be given
//! with `txt.regex` or, as here, through the library options.

use sparql_anything::model::SlotContent;
use sparql_anything::query::{execute_query, ExecutionContext};
use sparql_anything::triplify::{triplify_text, TriplifierOptions};

const POEM: &str = "so much depends\nupon\na red wheel\nbarrow";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("poem.txt"), POEM)?;
    let result = execute_query(
        "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
         SELECT ?token WHERE {
           SERVICE <x-sparql-anything:location=poem.txt> { [] rdf:_2 ?token }
         }",
        &ExecutionContext::new(dir.path()),
    )?;
    println!("second space-separated token: {}", result.rows()[0]["token"]);

    let options = TriplifierOptions {
        text_tokenizer_pattern: r"\s+".into(),
        ..Default::default()
    };
    let tree = triplify_text(POEM.as_bytes(), &options)?;
    let words: Vec<&str> = tree
        .root
        .slots()
        .iter()
        .filter_map(|(_, content)| match content {
            SlotContent::Value(v) => Some(v.lexical()),
            SlotContent::Container(_) => None,
        })
        .collect();
    println!("split on whitespace: {words:?}");
    Ok(())
}
