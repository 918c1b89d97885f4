//! Plugging a new format into the registry. Here a key=value properties
//! format; any closure or function of the right shape is a triplifier.

use sparql_anything::model::{FacadeContainer, FacadeTree, FacadeValue};
use sparql_anything::query::{execute_query, ExecutionContext};
use sparql_anything::triplify::{TriplifierOptions, TriplifierRegistry};
use sparql_anything::Error;

fn properties(bytes: &[u8], _: &TriplifierOptions) -> sparql_anything::Result<FacadeTree> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Decode {
        charset: "UTF-8".into(),
    })?;
    let mut root = FacadeContainer::new();
    for line in text.lines().map(str::trim) {
        if line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            root.push(k.trim(), FacadeValue::string(v.trim()));
        }
    }
    Ok(FacadeTree::new(root))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("app.properties"), "# settings\nhost = example.org\nport = 8080\n")?;

    let mut registry = TriplifierRegistry::standard();
    registry.register(&["text/x-java-properties"], &["properties"], properties);
    let ctx = ExecutionContext::new(dir.path()).with_registry(registry);

    let result = execute_query(
        "PREFIX xyz: <http://sparql.xyz/facade-x/data/>
         SELECT ?host ?port WHERE {
           SERVICE <x-sparql-anything:location=app.properties> { [] xyz:host ?host ; xyz:port ?port }
         }",
        &ctx,
    )?;
    for row in result.rows() {
        println!("{} {}", row["host"], row["port"]);
    }
    Ok(())
}
