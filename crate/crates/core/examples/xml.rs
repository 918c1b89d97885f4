//! XML elements become containers typed by their name in the `fx:`
//! namespace. Attributes are string-keyed slots and children fill numbered
//! slots in document order.

use sparql_anything::output::{write_result, OutputFormat};
use sparql_anything::query::{execute_query, ExecutionContext};

const CATALOG: &str = r#"<?xml version="1.0"?>
<catalog>
  <book id="b1" lang="en"><title>Flatland</title><year>1884</year></book>
  <book id="b2" lang="fr"><title>Candide</title><year>1759</year></book>
</catalog>"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("catalog.xml"), CATALOG)?;
    let query = r#"
        PREFIX fx: <http://sparql.xyz/facade-x/ns/>
        PREFIX xyz: <http://sparql.xyz/facade-x/data/>
        PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
        SELECT ?id ?title WHERE {
          SERVICE <x-sparql-anything:location=catalog.xml> {
            ?book a fx:book ; xyz:id ?id ; ?slot ?t .
            ?t a fx:title ; rdf:_1 ?title .
          }
        } ORDER BY ?id"#;
    let result = execute_query(query, &ExecutionContext::new(dir.path()))?;
    write_result(&result, OutputFormat::SparqlResultsCsv, std::io::stdout())?;
    Ok(())
}
