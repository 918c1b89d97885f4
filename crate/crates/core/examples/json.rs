//! Nested JSON: objects become containers keyed by name, arrays become
//! containers keyed by position. A custom namespace and root IRI replace
//! the defaults.

use sparql_anything::model::{tree_to_graph, MintingConfig};
use sparql_anything::output::{write_graph, OutputFormat};
use sparql_anything::triplify::triplify_json;

const ARTIST: &str = r#"{
  "fc": "Kazimir Malevich",
  "id": 1561,
  "places": [
    { "name": "Ukrayina", "type": "nation" },
    { "name": "Moskva, Rossiya", "type": "inhabited_place" }
  ],
  "url": "http://www.tate.org.uk/art/artists/kazimir-malevich-1561"
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = triplify_json(ARTIST.as_bytes(), &Default::default())?;
    let config = MintingConfig::new(
        Some("http://example.org/tate/"),
        Some("http://example.org/tate/malevich"),
    )?;
    let graph = tree_to_graph(&tree, &config)?;
    write_graph(&graph, OutputFormat::Turtle, std::io::stdout())?;
    Ok(())
}
