use crate::error::{Error, Result};
use crate::model::{FacadeContainer, FacadeKey, FacadeTree, FacadeValue};
use exif::{In, Value};
use image::{ImageFormat, ImageReader};
use std::io::Cursor;

/// Reads basic image properties (`ImageWidth`, `ImageLength`, `MediaType`)
/// and, for JPEG, the primary-image EXIF tags by canonical name.
pub fn extract_image_metadata(bytes: &[u8]) -> Result<FacadeTree> {
    let reader = ImageReader::new(Cursor::new(bytes))
        .with_guessed_format()
        .map_err(|e| Error::Metadata(e.to_string()))?;
    let media_type = match reader.format() {
        Some(ImageFormat::Jpeg) => "image/jpeg",
        Some(ImageFormat::Png) => "image/png",
        Some(other) => return Err(Error::Metadata(format!("unsupported image format {other:?}"))),
        None => return Err(Error::Metadata("not a recognised image".into())),
    };
    let (width, height) = reader
        .into_dimensions()
        .map_err(|e| Error::Metadata(e.to_string()))?;

    let mut root = FacadeContainer::new()
        .with("ImageWidth", FacadeValue::string(width.to_string()))
        .with("ImageLength", FacadeValue::string(height.to_string()))
        .with("MediaType", FacadeValue::string(media_type));

    if media_type == "image/jpeg" {
        match exif::Reader::new().read_from_container(&mut Cursor::new(bytes)) {
            Ok(data) => {
                for field in data.fields().filter(|f| f.ifd_num == In::PRIMARY) {
                    if field.tag.description().is_none() {
                        continue;
                    }
                    let key = FacadeKey::String(field.tag.to_string());
                    if root.get(&key).is_some() {
                        continue;
                    }
                    root.push(key, FacadeValue::string(render(&field.value, field)));
                }
            }
            Err(exif::Error::NotFound(_)) => {}
            Err(e) => log::warn!("ignoring unreadable EXIF block: {e}"),
        }
    }
    Ok(FacadeTree::new(root))
}

fn render(value: &Value, field: &exif::Field) -> String {
    match value {
        Value::Ascii(parts) => parts
            .iter()
            .map(|p| String::from_utf8_lossy(p).trim_end_matches('\0').to_owned())
            .collect::<Vec<_>>()
            .join(", "),
        _ => field.display_value().to_string(),
    }
}
