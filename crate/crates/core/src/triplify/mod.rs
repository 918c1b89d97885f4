//! Format-specific transformers from raw bytes to Facade-X trees.

mod binary;
mod csv;
mod json;
mod metadata;
mod text;
mod xml;

pub use self::binary::{triplify_binary, BinaryTriplifier};
pub use self::csv::{triplify_csv, CsvTriplifier};
pub use self::json::{triplify_json, JsonTriplifier};
pub use self::metadata::extract_image_metadata;
pub use self::text::{triplify_text, TextTriplifier};
pub use self::xml::{triplify_xml, XmlTriplifier};

use crate::error::{Error, Result};
use crate::model::FacadeTree;
use encoding_rs::Encoding;
use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

pub const DEFAULT_CHARSET: &str = "UTF-8";
pub const DEFAULT_TOKENIZER_PATTERN: &str = " ";
pub const OCTET_STREAM: &str = "application/octet-stream";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplifierOptions {
    pub charset: String,
    /// Use the first CSV row as slot keys instead of column indexes.
    pub csv_headers: bool,
    /// Regular expression splitting plain text into tokens.
    pub text_tokenizer_pattern: String,
    /// Options understood by no built-in triplifier, kept for extensions.
    pub format_extras: BTreeMap<String, String>,
}

impl Default for TriplifierOptions {
    fn default() -> Self {
        TriplifierOptions {
            charset: DEFAULT_CHARSET.to_owned(),
            csv_headers: false,
            text_tokenizer_pattern: DEFAULT_TOKENIZER_PATTERN.to_owned(),
            format_extras: BTreeMap::new(),
        }
    }
}

impl TriplifierOptions {
    pub fn validate(&self) -> Result<()> {
        encoding(&self.charset)?;
        regex::Regex::new(&self.text_tokenizer_pattern)
            .map_err(|e| Error::Config(format!("bad tokenizer pattern: {e}")))?;
        Ok(())
    }
}

fn encoding(charset: &str) -> Result<&'static Encoding> {
    Encoding::for_label(charset.trim().as_bytes())
        .ok_or_else(|| Error::Config(format!("unsupported charset {charset:?}")))
}

/// Decodes `bytes` under `charset`, dropping a byte order mark of that
/// encoding. Malformed input is an error, never replaced.
pub(crate) fn decode<'a>(bytes: &'a [u8], charset: &str) -> Result<Cow<'a, str>> {
    let enc = encoding(charset)?;
    let bytes = match Encoding::for_bom(bytes) {
        Some((bom_enc, len)) if bom_enc == enc => &bytes[len..],
        _ => bytes,
    };
    enc.decode_without_bom_handling_and_without_replacement(bytes)
        .ok_or_else(|| Error::Decode {
            charset: enc.name().to_owned(),
        })
}

pub trait Triplifier: Send + Sync {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree>;
}

impl<F> Triplifier for F
where
    F: Fn(&[u8], &TriplifierOptions) -> Result<FacadeTree> + Send + Sync,
{
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        self(bytes, options)
    }
}

/// Lowercased media type without parameters.
pub fn essence(media_type: &str) -> String {
    media_type
        .split(';')
        .next()
        .unwrap_or_default()
        .trim()
        .to_ascii_lowercase()
}

/// Triplifiers keyed by media type, plus the file extensions that imply each
/// media type.
#[derive(Clone, Default)]
pub struct TriplifierRegistry {
    by_media_type: HashMap<String, Arc<dyn Triplifier>>,
    by_extension: HashMap<String, String>,
}

impl fmt::Debug for TriplifierRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriplifierRegistry")
            .field("media_types", &self.by_media_type.keys().collect::<Vec<_>>())
            .field("extensions", &self.by_extension)
            .finish()
    }
}

impl TriplifierRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(&["text/csv"], &["csv"], CsvTriplifier);
        r.register(&["application/json"], &["json"], JsonTriplifier);
        r.register(&["application/xml", "text/xml"], &["xml"], XmlTriplifier);
        r.register(&["text/plain"], &["txt"], TextTriplifier);
        r.register(&["image/jpeg"], &["jpg", "jpeg"], BinaryTriplifier);
        r.register(&["image/png"], &["png"], BinaryTriplifier);
        r.register(&[OCTET_STREAM], &[], BinaryTriplifier);
        r
    }

    /// The process-wide standard registry.
    pub fn shared() -> Arc<TriplifierRegistry> {
        static SHARED: OnceLock<Arc<TriplifierRegistry>> = OnceLock::new();
        Arc::clone(SHARED.get_or_init(|| Arc::new(Self::standard())))
    }

    /// Registers `triplifier` for the media types; the first media type is
    /// the one the extensions resolve to.
    pub fn register(
        &mut self,
        media_types: &[&str],
        extensions: &[&str],
        triplifier: impl Triplifier + 'static,
    ) {
        assert!(!media_types.is_empty(), "a triplifier needs a media type");
        let triplifier: Arc<dyn Triplifier> = Arc::new(triplifier);
        for mt in media_types {
            self.by_media_type.insert(essence(mt), Arc::clone(&triplifier));
        }
        for ext in extensions {
            self.by_extension
                .insert(ext.to_ascii_lowercase(), essence(media_types[0]));
        }
    }

    pub fn for_media_type(&self, media_type: &str) -> Option<Arc<dyn Triplifier>> {
        self.by_media_type.get(&essence(media_type)).cloned()
    }

    pub fn media_type_for_extension(&self, extension: &str) -> Option<&str> {
        self.by_extension
            .get(&extension.to_ascii_lowercase())
            .map(String::as_str)
    }

    pub fn media_types(&self) -> impl Iterator<Item = &str> {
        self.by_media_type.keys().map(String::as_str)
    }

    pub fn guess_media_type(&self, location: &str, override_type: Option<&str>) -> String {
        if let Some(mt) = override_type {
            return essence(mt);
        }
        extension(location)
            .and_then(|ext| self.media_type_for_extension(ext))
            .unwrap_or(OCTET_STREAM)
            .to_owned()
    }
}

/// Extension of the last path segment, ignoring any query or fragment.
fn extension(location: &str) -> Option<&str> {
    let path = location.split(['?', '#']).next().unwrap_or(location);
    let segment = path.rsplit(['/', '\\', ':']).next().unwrap_or(path);
    let (stem, ext) = segment.rsplit_once('.')?;
    (!stem.is_empty() && !ext.is_empty()).then_some(ext)
}

/// Media type of `location` according to the standard registry; `override_type`
/// wins when given, parameters stripped.
pub fn guess_media_type(location: &str, override_type: Option<&str>) -> String {
    TriplifierRegistry::shared().guess_media_type(location, override_type)
}
