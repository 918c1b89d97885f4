use super::{decode, Triplifier, TriplifierOptions};
use crate::error::{Error, Result};
use crate::model::{FacadeContainer, FacadeTree, FacadeValue};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

/// Elements become containers typed with their qualified name. Attributes
/// are string-keyed values; child elements and non-blank text runs share
/// one number-keyed sequence in document order.
pub fn triplify_xml(bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
    let text = decode(bytes, &options.charset)?;
    let mut reader = Reader::from_str(&text);
    reader.config_mut().check_end_names = true;

    let mut stack: Vec<Open> = Vec::new();
    let mut root: Option<FacadeContainer> = None;

    let err = |reader: &Reader<&[u8]>, message: String| Error::Xml {
        position: reader.buffer_position(),
        message,
    };

    loop {
        let event = reader.read_event().map_err(|e| Error::Xml {
            position: reader.error_position(),
            message: e.to_string(),
        })?;
        match event {
            Event::Start(start) => {
                if stack.is_empty() && root.is_some() {
                    return Err(err(&reader, "more than one document element".into()));
                }
                if let Some(parent) = stack.last_mut() {
                    parent.flush_text();
                }
                stack.push(Open::new(element(&start, &reader)?));
            }
            Event::Empty(start) => {
                if stack.is_empty() && root.is_some() {
                    return Err(err(&reader, "more than one document element".into()));
                }
                let child = element(&start, &reader)?;
                match stack.last_mut() {
                    Some(parent) => parent.push_child(child),
                    None => root = Some(child),
                }
            }
            Event::End(_) => {
                let mut done = stack.pop().expect("end names are checked");
                done.flush_text();
                match stack.last_mut() {
                    Some(parent) => parent.push_child(done.container),
                    None => root = Some(done.container),
                }
            }
            Event::Text(t) => {
                let s = t
                    .xml10_content()
                    .map_err(|e| err(&reader, e.to_string()))?;
                text_event(&mut stack, &s, &reader)?;
            }
            Event::CData(c) => {
                let s = c.decode().map_err(|e| err(&reader, e.to_string()))?;
                text_event(&mut stack, &s, &reader)?;
            }
            Event::GeneralRef(r) => {
                let resolved = if r.is_char_ref() {
                    r.resolve_char_ref()
                        .map_err(|e| err(&reader, e.to_string()))?
                        .map(String::from)
                } else {
                    let name = r.decode().map_err(|e| err(&reader, e.to_string()))?;
                    quick_xml::escape::resolve_predefined_entity(&name).map(str::to_owned)
                };
                let resolved = resolved.ok_or_else(|| {
                    err(&reader, format!("unknown entity &{};", String::from_utf8_lossy(&r)))
                })?;
                text_event(&mut stack, &resolved, &reader)?;
            }
            Event::Eof => break,
            Event::Comment(_) | Event::PI(_) | Event::Decl(_) | Event::DocType(_) => {}
        }
    }
    if !stack.is_empty() {
        return Err(err(&reader, "unexpected end of document".into()));
    }
    let root = root.ok_or_else(|| err(&reader, "no document element".into()))?;
    Ok(FacadeTree::new(root))
}

fn text_event(stack: &mut [Open], s: &str, reader: &Reader<&[u8]>) -> Result<()> {
    match stack.last_mut() {
        Some(open) => open.text.push_str(s),
        None if s.trim().is_empty() => {}
        None => {
            return Err(Error::Xml {
                position: reader.buffer_position(),
                message: "text outside the document element".into(),
            })
        }
    }
    Ok(())
}

fn element(start: &BytesStart<'_>, reader: &Reader<&[u8]>) -> Result<FacadeContainer> {
    let err = |message: String| Error::Xml {
        position: reader.buffer_position(),
        message,
    };
    let name = reader
        .decoder()
        .decode(start.name().as_ref())
        .map_err(|e| err(e.to_string()))?
        .into_owned();
    let mut container = FacadeContainer::typed(name);
    for attr in start.attributes().with_checks(true) {
        let attr = attr.map_err(|e| err(e.to_string()))?;
        let key = reader
            .decoder()
            .decode(attr.key.as_ref())
            .map_err(|e| err(e.to_string()))?
            .into_owned();
        let value = attr
            .decode_and_unescape_value(reader.decoder())
            .map_err(|e| err(e.to_string()))?;
        container.push(key, FacadeValue::string(value));
    }
    Ok(container)
}

struct Open {
    container: FacadeContainer,
    next_index: u64,
    text: String,
}

impl Open {
    fn new(container: FacadeContainer) -> Self {
        Open {
            container,
            next_index: 1,
            text: String::new(),
        }
    }

    fn flush_text(&mut self) {
        let text = std::mem::take(&mut self.text);
        if !text.trim().is_empty() {
            self.container.push(self.next_index, FacadeValue::string(text));
            self.next_index += 1;
        }
    }

    fn push_child(&mut self, child: FacadeContainer) {
        self.flush_text();
        self.container.push(self.next_index, child);
        self.next_index += 1;
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct XmlTriplifier;

impl Triplifier for XmlTriplifier {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        triplify_xml(bytes, options)
    }
}
