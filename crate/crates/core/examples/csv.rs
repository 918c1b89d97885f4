//! A CSV file with a header row, triplified and printed as Turtle.

use sparql_anything::model::{tree_to_graph, MintingConfig};
use sparql_anything::output::{write_graph, OutputFormat};
use sparql_anything::triplify::{triplify_csv, TriplifierOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let csv = "id,artist,year\n1034,\"Blake, Robert\",1793\n16216,\"Williams, Terrick\",1908\n";
    let options = TriplifierOptions {
        csv_headers: true,
        ..Default::default()
    };
    let tree = triplify_csv(csv.as_bytes(), &options)?;
    let graph = tree_to_graph(&tree, &MintingConfig::default())?;
    write_graph(&graph, OutputFormat::Turtle, std::io::stdout())?;
    Ok(())
}
