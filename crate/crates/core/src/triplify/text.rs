use super::{decode, Triplifier, TriplifierOptions};
use crate::error::{Error, Result};
use crate::model::{FacadeContainer, FacadeTree, FacadeValue};
use regex::Regex;

/// Splits the decoded text on `options.text_tokenizer_pattern`, one
/// number-keyed slot per non-empty piece.
pub fn triplify_text(bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
    let pattern = Regex::new(&options.text_tokenizer_pattern)
        .map_err(|e| Error::Config(format!("bad tokenizer pattern: {e}")))?;
    let text = decode(bytes, &options.charset)?;
    let mut root = FacadeContainer::new();
    for (i, piece) in pattern.split(&text).filter(|p| !p.is_empty()).enumerate() {
        root.push(i as u64 + 1, FacadeValue::string(piece));
    }
    Ok(FacadeTree::new(root))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TextTriplifier;

impl Triplifier for TextTriplifier {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        triplify_text(bytes, options)
    }
}
