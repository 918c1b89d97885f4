use super::{decode, Triplifier, TriplifierOptions};
use crate::error::{Error, Result};
use crate::model::{FacadeContainer, FacadeKey, FacadeTree, FacadeValue, SlotContent};
use serde::de::{DeserializeSeed, Deserializer, MapAccess, SeqAccess, Visitor};
use std::collections::HashMap;
use std::fmt;

/// Objects become string-keyed containers, arrays number-keyed containers.
/// Numbers map to `xsd:integer` when they fit an `i64`/`u64`, `xsd:double`
/// otherwise; `null` members are dropped. A duplicate object key keeps the
/// last value at the position of the first.
pub fn triplify_json(bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
    let text = decode(bytes, &options.charset)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let content = ContentSeed
        .deserialize(&mut de)
        .and_then(|c| de.end().map(|_| c))
        .map_err(|e| Error::Json {
            offset: byte_offset(&text, e.line(), e.column()),
            message: e.to_string(),
        })?;
    let root = match content {
        None => FacadeContainer::new(),
        Some(SlotContent::Container(c)) => c,
        Some(value @ SlotContent::Value(_)) => FacadeContainer::new().with(1, value),
    };
    Ok(FacadeTree::new(root))
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

struct ContentSeed;

impl<'de> DeserializeSeed<'de> for ContentSeed {
    type Value = Option<SlotContent>;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_any(ContentVisitor)
    }
}

struct ContentVisitor;

impl<'de> Visitor<'de> for ContentVisitor {
    type Value = Option<SlotContent>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a JSON value")
    }

    fn visit_bool<E>(self, v: bool) -> Result<Self::Value, E> {
        Ok(Some(FacadeValue::boolean(v).into()))
    }

    fn visit_i64<E>(self, v: i64) -> Result<Self::Value, E> {
        Ok(Some(FacadeValue::integer(v).into()))
    }

    fn visit_u64<E>(self, v: u64) -> Result<Self::Value, E> {
        Ok(Some(
            FacadeValue::new_unchecked(v.to_string(), crate::model::Datatype::Integer).into(),
        ))
    }

    fn visit_f64<E>(self, v: f64) -> Result<Self::Value, E> {
        Ok(Some(FacadeValue::double(v).into()))
    }

    fn visit_str<E>(self, v: &str) -> Result<Self::Value, E> {
        Ok(Some(FacadeValue::string(v).into()))
    }

    fn visit_string<E>(self, v: String) -> Result<Self::Value, E> {
        Ok(Some(FacadeValue::string(v).into()))
    }

    fn visit_unit<E>(self) -> Result<Self::Value, E> {
        Ok(None)
    }

    fn visit_none<E>(self) -> Result<Self::Value, E> {
        Ok(None)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut container = FacadeContainer::new();
        let mut index = 0u64;
        while let Some(item) = seq.next_element_seed(ContentSeed)? {
            // nulls still occupy their array position
            index += 1;
            if let Some(item) = item {
                container.push(index, item);
            }
        }
        Ok(Some(container.into()))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
        let mut container = FacadeContainer::new();
        let mut positions: HashMap<String, usize> = HashMap::new();
        while let Some(key) = map.next_key::<String>()? {
            let value = map.next_value_seed(ContentSeed)?;
            if let Some(&pos) = positions.get(&key) {
                log::warn!("duplicate JSON key {key:?}: keeping the last value");
                match value {
                    Some(v) => container.slots_mut()[pos].1 = v,
                    None => {
                        container.slots_mut().remove(pos);
                        positions.remove(&key);
                        for p in positions.values_mut() {
                            if *p > pos {
                                *p -= 1;
                            }
                        }
                    }
                }
                continue;
            }
            if let Some(value) = value {
                positions.insert(key.clone(), container.len());
                container.push(FacadeKey::String(key), value);
            }
        }
        Ok(Some(container.into()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct JsonTriplifier;

impl Triplifier for JsonTriplifier {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        triplify_json(bytes, options)
    }
}
