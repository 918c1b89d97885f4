//! Token counts for query files, a rough measure of how much a user has to
//! write. Pass `.rq` paths, or run without arguments to measure the bundled
//! guide queries.

use sparql_anything::bench::{token_stats, write_token_stats};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let guide = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/guide");
        paths = vec![guide.join("guide.rq"), guide.join("guide-construct.rq")];
    }
    let mut files = Vec::new();
    for p in &paths {
        let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
        files.push((name, std::fs::read_to_string(p)?));
    }
    write_token_stats(&token_stats(&files)?, std::io::stdout())?;
    Ok(())
}
