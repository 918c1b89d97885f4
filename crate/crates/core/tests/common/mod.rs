#![allow(dead_code)]

use base64::Engine as _;
use exif::experimental::Writer;
use exif::Field;
use image::codecs::jpeg::JpegEncoder;
use image::ExtendedColorType;
use oxrdf::{Dataset, Graph, GraphName, NamedNode, Term};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{Map, Value};
use spareval::{QueryEvaluator, QueryResults};
use spargebra::SparqlParser;
use sparql_anything::model::{tree_to_graph, MintingConfig};
use sparql_anything::triplify::{triplify_csv, triplify_json, TriplifierOptions};
use std::collections::{BTreeMap, HashMap};
use std::io::Cursor;
use std::path::PathBuf;

pub const PREFIXES: &str = "PREFIX fx: <http://sparql.xyz/facade-x/ns/>\n\
PREFIX xyz: <http://sparql.xyz/facade-x/data/>\n\
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n";

pub fn guide_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/guide")
}

pub fn guide_query() -> String {
    std::fs::read_to_string(guide_dir().join("guide.rq")).unwrap()
}

pub fn jpeg(width: u32, height: u32) -> Vec<u8> {
    let mut out = Vec::new();
    let pixels = vec![90u8; (width * height * 3) as usize];
    JpegEncoder::new(&mut out)
        .encode(&pixels, width, height, ExtendedColorType::Rgb8)
        .unwrap();
    out
}

/// Splices an APP1 EXIF segment holding `fields` right after the SOI marker.
pub fn with_exif(jpeg: &[u8], fields: &[Field]) -> Vec<u8> {
    let mut writer = Writer::new();
    for f in fields {
        writer.push_field(f);
    }
    let mut tiff = Cursor::new(Vec::new());
    writer.write(&mut tiff, false).unwrap();
    let tiff = tiff.into_inner();
    let mut out = jpeg[..2].to_vec();
    out.extend_from_slice(&[0xFF, 0xE1]);
    out.extend_from_slice(&((tiff.len() + 8) as u16).to_be_bytes());
    out.extend_from_slice(b"Exif\0\0");
    out.extend_from_slice(&tiff);
    out.extend_from_slice(&jpeg[2..]);
    out
}

pub fn artist_field(name: &str) -> Field {
    Field {
        tag: exif::Tag::Artist,
        ifd_num: exif::In::PRIMARY,
        value: exif::Value::Ascii(vec![name.as_bytes().to_vec()]),
    }
}

pub type Row = BTreeMap<String, String>;

/// Order-insensitive multiset of rows; blank nodes collapse to `_:` since
/// their labels are not comparable across evaluations.
pub fn multiset(rows: impl IntoIterator<Item = HashMap<String, Term>>) -> Vec<Row> {
    let mut out: Vec<Row> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(k, t)| {
                    let v = match t {
                        Term::BlankNode(_) => "_:".to_owned(),
                        other => other.to_string(),
                    };
                    (k, v)
                })
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// `SELECT * { pattern }` evaluated by the plain engine with `graph` as the
/// default graph.
pub fn stock_select(graph: &Graph, pattern: &str) -> Vec<HashMap<String, Term>> {
    let name = NamedNode::new_unchecked("urn:oracle:data");
    let mut dataset = Dataset::new();
    for t in graph {
        dataset.insert(t.in_graph(name.as_ref()));
    }
    let query = SparqlParser::new()
        .parse_query(&format!("{PREFIXES}SELECT * WHERE {{ {pattern} }}"))
        .unwrap();
    let evaluator = QueryEvaluator::new();
    let mut prepared = evaluator.prepare(&query);
    prepared
        .dataset_mut()
        .set_default_graph(vec![GraphName::NamedNode(name)]);
    let QueryResults::Solutions(iter) = prepared.execute(&dataset).unwrap() else {
        panic!("SELECT yields solutions")
    };
    iter.map(|s| {
        s.unwrap()
            .iter()
            .map(|(v, t)| (v.as_str().to_owned(), t.clone()))
            .collect()
    })
    .collect()
}

fn lexical(t: &Term) -> String {
    match t {
        Term::Literal(l) => l.value().to_owned(),
        other => other.to_string(),
    }
}

/// Expected guide-query rows, built without SERVICE: each fixture is
/// triplified on its own, queried by the plain engine and joined here.
/// Each row holds id, artistId, title, subjectName, imageInBase64.
pub fn guide_oracle() -> Vec<[String; 5]> {
    let dir = guide_dir();
    let config = MintingConfig::default();
    let options = TriplifierOptions {
        csv_headers: true,
        ..Default::default()
    };
    let csv = std::fs::read(dir.join("artwork_data.csv")).unwrap();
    let csv_graph = tree_to_graph(&triplify_csv(&csv, &options).unwrap(), &config).unwrap();
    let artworks = stock_select(
        &csv_graph,
        "[] xyz:id ?id ; xyz:accessionId ?accId ; xyz:artistId ?artistId ; \
         xyz:title ?title ; xyz:thumbnailUrl ?thumbnail .",
    );
    let mut out = Vec::new();
    for a in artworks {
        let thumb = lexical(&a["thumbnail"]);
        let path = dir.join(thumb.strip_prefix("file:").unwrap());
        let image = base64::engine::general_purpose::STANDARD.encode(std::fs::read(path).unwrap());

        let json = std::fs::read(dir.join(format!("artworks/{}.json", lexical(&a["accId"])))).unwrap();
        let json_graph =
            tree_to_graph(&triplify_json(&json, &Default::default()).unwrap(), &config).unwrap();
        for s in stock_select(&json_graph, "[ xyz:id ?subjectId ; xyz:name ?subjectName ]") {
            out.push([
                lexical(&a["id"]),
                lexical(&a["artistId"]),
                lexical(&a["title"]),
                lexical(&s["subjectName"]),
                image.clone(),
            ]);
        }
    }
    out.sort();
    out
}

const KEY_POOL: &[&str] = &[
    "a", "name", "id", "x y", "ü", "1", "key-with-dash", "with/slash", "café", "_", "#hash", "A",
];

pub fn random_text<R: Rng>(rng: &mut R, max: usize) -> String {
    const ALPHABET: &[char] = &[
        'a', 'b', 'Z', '0', '9', ' ', ',', '"', '\'', '<', '>', '&', ';', 'é', 'ß', '中', '😀', '\\', '\n',
    ];
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn random_scalar<R: Rng>(rng: &mut R) -> Value {
    match rng.gen_range(0..6) {
        0 => Value::String(random_text(rng, 12)),
        1 => Value::from(rng.gen_range(-1_000_000i64..1_000_000)),
        2 => Value::from(rng.gen_range(-1e6..1e6f64)),
        3 => Value::Bool(rng.gen()),
        4 => Value::Null,
        _ => Value::from(rng.gen::<u64>()),
    }
}

/// Random JSON with nesting depth at most `depth` and at most `*budget` nodes.
pub fn random_json<R: Rng>(rng: &mut R, depth: usize, budget: &mut usize) -> Value {
    *budget = budget.saturating_sub(1);
    if depth == 0 || *budget == 0 || rng.gen_bool(0.35) {
        return random_scalar(rng);
    }
    let n = rng.gen_range(0..=5);
    if rng.gen() {
        let mut items = Vec::new();
        while items.len() < n && *budget > 0 {
            items.push(random_json(rng, depth - 1, budget));
        }
        Value::Array(items)
    } else {
        let mut map = Map::new();
        for _ in 0..n {
            if *budget == 0 {
                break;
            }
            let key = KEY_POOL.choose(rng).unwrap().to_string();
            map.insert(key, random_json(rng, depth - 1, budget));
        }
        Value::Object(map)
    }
}

pub fn count_nodes(v: &Value) -> usize {
    1 + match v {
        Value::Array(a) => a.iter().map(count_nodes).sum(),
        Value::Object(m) => m.values().map(count_nodes).sum(),
        _ => 0,
    }
}

/// Flat object with `n` distinct keys and non-null scalar values.
pub fn random_flat_object<R: Rng>(rng: &mut R, n: usize) -> Value {
    let mut map = Map::new();
    for i in 0..n {
        let v = loop {
            let v = random_scalar(rng);
            if !v.is_null() {
                break v;
            }
        };
        map.insert(format!("k{i}{}", random_text(rng, 3)), v);
    }
    Value::Object(map)
}

/// CSV text for a `rows` by `cols` table; cells are never empty when
/// `non_empty`. With `header`, a row of distinct names comes first.
pub fn random_csv<R: Rng>(rng: &mut R, rows: usize, cols: usize, header: bool, non_empty: bool) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if header {
        w.write_record((0..cols).map(|c| format!("col {c}{}", random_text(rng, 2))))
            .unwrap();
    }
    for _ in 0..rows {
        let record: Vec<String> = (0..cols)
            .map(|_| {
                let mut cell = random_text(rng, 8);
                if non_empty && cell.is_empty() {
                    cell.push('x');
                }
                cell
            })
            .collect();
        w.write_record(&record).unwrap();
    }
    w.into_inner().unwrap()
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn random_element<R: Rng>(rng: &mut R, depth: usize, out: &mut String) {
    const NAMES: &[&str] = &["item", "a", "book", "ns:tag", "title", "x-y", "_z"];
    let name = NAMES.choose(rng).unwrap();
    out.push('<');
    out.push_str(name);
    let mut attrs = ["id", "lang", "href", "n"];
    attrs.shuffle(rng);
    for a in &attrs[..rng.gen_range(0..=3)] {
        out.push_str(&format!(" {a}=\"{}\"", escape_xml(&random_text(rng, 6))));
    }
    out.push('>');
    for _ in 0..rng.gen_range(0..=4) {
        match rng.gen_range(0..4) {
            0 if depth > 0 => random_element(rng, depth - 1, out),
            1 => out.push_str(&format!("<![CDATA[{}]]>", random_text(rng, 6).replace("]]>", ""))),
            _ => out.push_str(&escape_xml(&random_text(rng, 10))),
        }
    }
    out.push_str(&format!("</{name}>"));
}

pub fn random_xml<R: Rng>(rng: &mut R) -> Vec<u8> {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    random_element(rng, 3, &mut out);
    out.into_bytes()
}
