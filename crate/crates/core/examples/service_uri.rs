//! Parsing and rendering `x-sparql-anything:` IRIs.

use sparql_anything::service_uri::{parse_service_uri, render_service_uri};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for iri in [
        "x-sparql-anything:csv.headers=true,location=file:./artwork_data.csv",
        "x-sparql-anything:mime-type=application/json; charset=UTF-8,location=f.x",
        "x-sparql-anything:file:./artworks/A00001",
        "x-sparql-anything:location=notes.txt,txt.regex=\\n,metadata=false",
    ] {
        let spec = parse_service_uri(iri)?;
        println!("{iri}");
        println!("  location  {}", spec.location);
        if let Some(m) = &spec.media_type_override {
            println!("  mime-type {m}");
        }
        if let Some(c) = &spec.charset {
            println!("  charset   {c}");
        }
        println!("  headers   {}", spec.triplifier_options.csv_headers);
        println!("  canonical {}", render_service_uri(&spec));
    }

    if let Err(e) = parse_service_uri("x-sparql-anything:csv.headers=yes,location=a.csv") {
        println!("rejected: {e}");
    }
    Ok(())
}
