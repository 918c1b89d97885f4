//! The `x-sparql-anything:` IRI scheme: a location plus comma-separated
//! `key=value` options.

use crate::error::{Error, Result};
use crate::triplify::{essence, TriplifierOptions, DEFAULT_TOKENIZER_PATTERN};
use std::fmt;

pub const SCHEME: &str = "x-sparql-anything:";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceSpec {
    pub location: String,
    pub media_type_override: Option<String>,
    pub charset: Option<String>,
    pub namespace: Option<String>,
    pub root_iri: Option<String>,
    pub metadata: bool,
    pub triplifier_options: TriplifierOptions,
}

impl ServiceSpec {
    pub fn new(location: impl Into<String>) -> Self {
        ServiceSpec {
            location: location.into(),
            media_type_override: None,
            charset: None,
            namespace: None,
            root_iri: None,
            metadata: false,
            triplifier_options: TriplifierOptions::default(),
        }
    }

    /// Triplifier options with the spec's charset applied.
    pub fn effective_options(&self) -> TriplifierOptions {
        let mut options = self.triplifier_options.clone();
        if let Some(charset) = &self.charset {
            options.charset = charset.clone();
        }
        options
    }

    fn check(&self) -> Result<()> {
        if self.location.is_empty() {
            return Err(Error::ServiceUri("missing location".into()));
        }
        for (name, iri) in [("namespace", &self.namespace), ("root", &self.root_iri)] {
            if let Some(iri) = iri {
                oxiri::Iri::parse(iri.as_str())
                    .map_err(|e| Error::ServiceUri(format!("{name} {iri:?} is not an absolute IRI: {e}")))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ServiceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_service_uri(self))
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::ServiceUri(format!(
            "{key} must be true or false, not {value:?}"
        ))),
    }
}

/// Whether `segment` starts with `key=` rather than a bare location such as
/// `file:./x` or `http://h/a=b`.
fn is_keyed(segment: &str) -> bool {
    match segment.find(['=', ':', '/']) {
        Some(i) => segment.as_bytes()[i] == b'=',
        None => false,
    }
}

pub fn parse_service_uri(iri: &str) -> Result<ServiceSpec> {
    let rest = iri
        .strip_prefix(SCHEME)
        .ok_or_else(|| Error::ServiceUri(format!("{iri:?} does not use the {SCHEME} scheme")))?;
    if rest.is_empty() {
        return Err(Error::ServiceUri("empty service IRI".into()));
    }
    let first = rest.split(',').next().unwrap_or_default();
    if !is_keyed(first) {
        let spec = ServiceSpec::new(rest);
        spec.check()?;
        return Ok(spec);
    }

    let mut spec = ServiceSpec::new("");
    let mut explicit_charset = None;
    for segment in rest.split(',') {
        let (key, value) = segment
            .split_once('=')
            .ok_or_else(|| Error::ServiceUri(format!("option {segment:?} lacks '='")))?;
        match key {
            "location" | "locator" => spec.location = value.to_owned(),
            "mime-type" => {
                spec.media_type_override = Some(essence(value));
                if spec.charset.is_none() {
                    spec.charset = media_type_charset(value);
                }
            }
            "charset" => explicit_charset = Some(value.to_owned()),
            "namespace" => spec.namespace = Some(value.to_owned()),
            "root" => spec.root_iri = Some(value.to_owned()),
            "metadata" => spec.metadata = parse_bool(key, value)?,
            "csv.headers" => spec.triplifier_options.csv_headers = parse_bool(key, value)?,
            "txt.regex" => spec.triplifier_options.text_tokenizer_pattern = value.to_owned(),
            "" => return Err(Error::ServiceUri(format!("empty option name in {segment:?}"))),
            _ => {
                spec.triplifier_options
                    .format_extras
                    .insert(key.to_owned(), value.to_owned());
            }
        }
    }
    if explicit_charset.is_some() {
        spec.charset = explicit_charset;
    }
    spec.check()?;
    Ok(spec)
}

fn media_type_charset(media_type: &str) -> Option<String> {
    media_type.split(';').skip(1).find_map(|param| {
        let (name, value) = param.split_once('=')?;
        name.trim()
            .eq_ignore_ascii_case("charset")
            .then(|| value.trim().trim_matches('"').to_owned())
    })
}

/// Canonical IRI for `spec`: options in alphabetical key order, defaults
/// omitted, `location` last. A location containing a comma can only be
/// written in the bare form, so options are then dropped.
pub fn render_service_uri(spec: &ServiceSpec) -> String {
    let opts = &spec.triplifier_options;
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    if let Some(c) = &spec.charset {
        pairs.push(("charset", c));
    }
    if opts.csv_headers {
        pairs.push(("csv.headers", "true"));
    }
    if spec.metadata {
        pairs.push(("metadata", "true"));
    }
    if let Some(m) = &spec.media_type_override {
        pairs.push(("mime-type", m));
    }
    if let Some(n) = &spec.namespace {
        pairs.push(("namespace", n));
    }
    if let Some(r) = &spec.root_iri {
        pairs.push(("root", r));
    }
    if opts.text_tokenizer_pattern != DEFAULT_TOKENIZER_PATTERN {
        pairs.push(("txt.regex", &opts.text_tokenizer_pattern));
    }
    for (k, v) in &opts.format_extras {
        pairs.push((k, v));
    }
    pairs.sort_by_key(|(k, _)| *k);

    if spec.location.contains(',') && !is_keyed(&spec.location) {
        return format!("{SCHEME}{}", spec.location);
    }
    let mut out = String::from(SCHEME);
    for (k, v) in pairs {
        out.push_str(k);
        out.push('=');
        out.push_str(v);
        out.push(',');
    }
    out.push_str("location=");
    out.push_str(&spec.location);
    out
}

/// Whether `iri` uses the facade scheme.
pub fn is_facade_iri(iri: &str) -> bool {
    iri.starts_with(SCHEME)
}
