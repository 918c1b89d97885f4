use super::{Triplifier, TriplifierOptions};
use crate::error::Result;
use crate::model::{FacadeContainer, FacadeTree, FacadeValue};

/// Embeds the whole input as one `xsd:base64Binary` value in slot 1.
pub fn triplify_binary(bytes: &[u8], _options: &TriplifierOptions) -> Result<FacadeTree> {
    Ok(FacadeTree::new(
        FacadeContainer::new().with(1, FacadeValue::base64(bytes)),
    ))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BinaryTriplifier;

impl Triplifier for BinaryTriplifier {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        triplify_binary(bytes, options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Datatype, FacadeKey, SlotContent};

    fn embedded(bytes: &[u8]) -> FacadeValue {
        let tree = triplify_binary(bytes, &Default::default()).unwrap();
        assert_eq!(tree.root.len(), 1);
        match tree.root.get(&FacadeKey::Number(1)) {
            Some(SlotContent::Value(v)) => v.clone(),
            other => panic!("{other:?}"),
        }
    }

    /// RFC 4648 alphabet, written out independently of the codec crate.
    fn reference_base64(bytes: &[u8]) -> String {
        const ALPHABET: &[u8; 64] =
            b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
        let mut out = String::new();
        for chunk in bytes.chunks(3) {
            let b = [chunk[0], *chunk.get(1).unwrap_or(&0), *chunk.get(2).unwrap_or(&0)];
            let n = (b[0] as u32) << 16 | (b[1] as u32) << 8 | b[2] as u32;
            for i in 0..4 {
                if i <= chunk.len() {
                    out.push(ALPHABET[(n >> (18 - 6 * i) & 63) as usize] as char);
                } else {
                    out.push('=');
                }
            }
        }
        out
    }

    #[test]
    fn known_vectors() {
        assert_eq!(embedded(&[0x4D, 0x61, 0x6E]).lexical(), "TWFu");
        assert_eq!(embedded(b"").lexical(), "");
        assert_eq!(embedded(b"Ma").lexical(), "TWE=");
        assert_eq!(embedded(b"M").datatype(), Datatype::Base64Binary);
    }

    proptest::proptest! {
        #[test]
        fn matches_reference_and_round_trips(bytes in proptest::collection::vec(proptest::num::u8::ANY, 0..4096)) {
            use base64::Engine;
            let v = embedded(&bytes);
            proptest::prop_assert_eq!(v.lexical(), reference_base64(&bytes));
            let back = base64::engine::general_purpose::STANDARD.decode(v.lexical()).unwrap();
            proptest::prop_assert_eq!(back, bytes);
        }
    }
}
