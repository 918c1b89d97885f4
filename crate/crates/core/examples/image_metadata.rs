//! With `metadata=true` an image also gets a metadata graph holding its
//! dimensions, media type and EXIF tags. Pass a JPEG or PNG path, or run
//! without arguments to use a generated 4x3 JPEG.

use image::codecs::jpeg::JpegEncoder;
use sparql_anything::dataset::assemble;
use sparql_anything::output::{write_dataset, OutputFormat};
use sparql_anything::service_uri::parse_service_uri;
use sparql_anything::triplify::TriplifierRegistry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let path = match std::env::args().nth(1) {
        Some(p) => std::fs::canonicalize(p)?,
        None => {
            let mut jpeg = Vec::new();
            JpegEncoder::new(&mut jpeg).encode(&[200; 4 * 3 * 3], 4, 3, image::ExtendedColorType::Rgb8)?;
            let path = dir.path().join("generated.jpg");
            std::fs::write(&path, jpeg)?;
            path
        }
    };
    let spec = parse_service_uri(&format!("x-sparql-anything:metadata=true,location={}", path.display()))?;
    let dataset = assemble(&spec, &std::env::current_dir()?, &TriplifierRegistry::shared())?;
    let metadata = dataset.metadata_graph().map_or(0, |g| g.len());
    eprintln!("{} data triples, {metadata} metadata triples", dataset.data_graph().len());
    write_dataset(dataset.as_dataset(), OutputFormat::TriG, std::io::stdout())?;
    Ok(())
}
