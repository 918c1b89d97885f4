//! Fetching resources and assembling the named graphs a facade SERVICE
//! clause is evaluated against.

use crate::error::{Error, Result};
use crate::model::{emit_triples, MintingConfig, METADATA_GRAPH};
use crate::service_uri::{render_service_uri, ServiceSpec};
use crate::triplify::{essence, extract_image_metadata, TriplifierRegistry};
use oxrdf::{Dataset, GraphName, GraphNameRef, NamedNode, NamedNodeRef};
use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use std::collections::HashMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime};

pub const HTTP_TIMEOUT_ENV: &str = "SA_HTTP_TIMEOUT_MS";
pub const DEFAULT_HTTP_TIMEOUT_MS: u64 = 30_000;
const MAX_REDIRECTS: u32 = 5;
const MAX_HTTP_BODY: u64 = 1 << 30;

const PATH_SET: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'#')
    .add(b'%')
    .add(b'<')
    .add(b'>')
    .add(b'?')
    .add(b'[')
    .add(b']')
    .add(b'\\')
    .add(b'^')
    .add(b'`')
    .add(b'{')
    .add(b'|')
    .add(b'}');

#[derive(Debug, Clone)]
pub struct FetchedResource {
    pub bytes: Vec<u8>,
    pub effective_location: String,
    /// Content-Type reported by the transport, parameters included.
    pub declared_media_type: Option<String>,
    pub fetch_time: SystemTime,
}

/// Where a location points after resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Http(String),
}

fn scheme(location: &str) -> Option<&str> {
    let (scheme, _) = location.split_once(':')?;
    let mut chars = scheme.chars();
    let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
    // a single letter is a Windows drive, not a scheme
    (valid && scheme.len() > 1).then_some(scheme)
}

/// Resolves `location` to a file path or an HTTP URL. Relative file
/// locations, with or without the `file:` scheme, resolve against
/// `base_dir`.
pub fn resolve_location(location: &str, base_dir: &Path) -> Result<Source> {
    let unsupported = |cause: String| Error::Fetch {
        location: location.to_owned(),
        cause,
    };
    match scheme(location).map(str::to_ascii_lowercase).as_deref() {
        Some("http") | Some("https") => Ok(Source::Http(location.to_owned())),
        Some("file") => {
            let rest = &location[5..];
            let path = match rest.strip_prefix("//") {
                Some(after) => {
                    let slash = after.find('/').unwrap_or(after.len());
                    let host = &after[..slash];
                    if !host.is_empty() && !host.eq_ignore_ascii_case("localhost") {
                        return Err(unsupported(format!("remote file host {host:?}")));
                    }
                    &after[slash..]
                }
                None => rest,
            };
            let path = path.split(['?', '#']).next().unwrap_or_default();
            let decoded = percent_decode_str(path)
                .decode_utf8()
                .map_err(|e| unsupported(e.to_string()))?;
            Ok(Source::File(base_dir.join(decoded.as_ref())))
        }
        Some(other) => Err(unsupported(format!("unsupported scheme {other:?}"))),
        None => Ok(Source::File(base_dir.join(location))),
    }
}

fn file_iri(path: &Path) -> String {
    let path = path.to_string_lossy().replace('\\', "/");
    let path = if path.starts_with('/') {
        path
    } else {
        format!("/{path}")
    };
    format!("file://{}", utf8_percent_encode(&path, PATH_SET))
}

fn http_timeout() -> Duration {
    let ms = std::env::var(HTTP_TIMEOUT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_HTTP_TIMEOUT_MS);
    Duration::from_millis(ms)
}

pub(crate) fn http_agent() -> ureq::Agent {
    ureq::Agent::config_builder()
        .max_redirects(MAX_REDIRECTS)
        .http_status_as_error(false)
        .timeout_global(Some(http_timeout()))
        .build()
        .into()
}

pub fn fetch(location: &str, base_dir: &Path) -> Result<FetchedResource> {
    let fetch_error = |cause: String| Error::Fetch {
        location: location.to_owned(),
        cause,
    };
    match resolve_location(location, base_dir)? {
        Source::File(path) => {
            let bytes = std::fs::read(&path).map_err(|e| fetch_error(e.to_string()))?;
            let absolute = std::path::absolute(&path).unwrap_or(path);
            Ok(FetchedResource {
                bytes,
                effective_location: file_iri(&absolute),
                declared_media_type: None,
                fetch_time: SystemTime::now(),
            })
        }
        Source::Http(url) => {
            use ureq::ResponseExt;
            let mut response = http_agent()
                .get(&url)
                .call()
                .map_err(|e| fetch_error(e.to_string()))?;
            let status = response.status().as_u16();
            if status >= 400 {
                return Err(Error::HttpStatus {
                    location: location.to_owned(),
                    status,
                });
            }
            let effective_location = response.get_uri().to_string();
            let declared_media_type = response
                .headers()
                .get("content-type")
                .and_then(|v| v.to_str().ok())
                .map(str::to_owned);
            let mut bytes = Vec::new();
            response
                .body_mut()
                .with_config()
                .limit(MAX_HTTP_BODY)
                .reader()
                .read_to_end(&mut bytes)
                .map_err(|e| fetch_error(e.to_string()))?;
            Ok(FetchedResource {
                bytes,
                effective_location,
                declared_media_type,
                fetch_time: SystemTime::now(),
            })
        }
    }
}

/// The graphs produced for one resource: a data graph named after the
/// resource and, on request for images, the metadata graph.
#[derive(Debug, Clone)]
pub struct FacadeDataset {
    data_graph_name: NamedNode,
    metadata_graph_name: Option<NamedNode>,
    media_type: String,
    quads: Dataset,
}

impl FacadeDataset {
    pub fn data_graph_name(&self) -> NamedNodeRef<'_> {
        self.data_graph_name.as_ref()
    }

    pub fn metadata_graph_name(&self) -> Option<NamedNodeRef<'_>> {
        self.metadata_graph_name.as_ref().map(NamedNode::as_ref)
    }

    pub fn has_metadata(&self) -> bool {
        self.metadata_graph_name.is_some()
    }

    /// Media type the data graph was triplified as.
    pub fn media_type(&self) -> &str {
        &self.media_type
    }

    /// All graphs as named graphs; the default graph is empty.
    pub fn as_dataset(&self) -> &Dataset {
        &self.quads
    }

    pub fn into_dataset(self) -> Dataset {
        self.quads
    }

    pub fn data_graph(&self) -> oxrdf::Graph {
        self.graph(self.data_graph_name.as_ref())
    }

    pub fn metadata_graph(&self) -> Option<oxrdf::Graph> {
        self.metadata_graph_name
            .as_ref()
            .map(|name| self.graph(name.as_ref()))
    }

    fn graph(&self, name: NamedNodeRef<'_>) -> oxrdf::Graph {
        self.quads
            .quads_for_graph_name(GraphNameRef::NamedNode(name))
            .map(|q| oxrdf::Triple::from(q.into_owned()))
            .collect()
    }
}

/// Name of the data graph: the location when it is already an absolute
/// IRI, otherwise the resolved location.
fn data_graph_name(location: &str, resource: &FetchedResource) -> Result<NamedNode> {
    NamedNode::new(location)
        .or_else(|_| NamedNode::new(&resource.effective_location))
        .map_err(|e| Error::Fetch {
            location: location.to_owned(),
            cause: format!("cannot name the data graph: {e}"),
        })
}

/// Triplifies an already fetched resource according to `spec`.
pub fn assemble_resource(
    spec: &ServiceSpec,
    resource: &FetchedResource,
    registry: &TriplifierRegistry,
) -> Result<FacadeDataset> {
    let mut options = spec.effective_options();
    let declared = resource
        .declared_media_type
        .as_deref()
        .filter(|mt| registry.for_media_type(mt).is_some());
    let media_type = match (&spec.media_type_override, declared) {
        (Some(mt), _) => essence(mt),
        (None, Some(mt)) => {
            if spec.charset.is_none() {
                if let Some(cs) = declared_charset(mt) {
                    options.charset = cs;
                }
            }
            essence(mt)
        }
        (None, None) => registry.guess_media_type(&spec.location, None),
    };
    let triplifier = registry
        .for_media_type(&media_type)
        .ok_or_else(|| Error::UnsupportedMediaType(media_type.clone()))?;

    let minting = MintingConfig::new(spec.namespace.as_deref(), spec.root_iri.as_deref())?;
    let name = data_graph_name(&spec.location, resource)?;
    let tree = triplifier
        .triplify(&resource.bytes, &options)?
        .with_source_name(name.as_str());

    let mut quads = Dataset::new();
    let graph = GraphName::NamedNode(name.clone());
    emit_triples(&tree, &minting, |t| {
        quads.insert(&t.in_graph(graph.clone()));
    })?;

    let mut metadata_graph_name = None;
    if spec.metadata {
        if media_type.starts_with("image/") {
            match extract_image_metadata(&resource.bytes) {
                Ok(meta) => {
                    let meta_minting = MintingConfig::new(spec.namespace.as_deref(), None)?;
                    let meta_name = NamedNode::new_unchecked(METADATA_GRAPH);
                    let graph = GraphName::NamedNode(meta_name.clone());
                    emit_triples(&meta, &meta_minting, |t| {
                        quads.insert(&t.in_graph(graph.clone()));
                    })?;
                    metadata_graph_name = Some(meta_name);
                }
                Err(e) => log::warn!("no metadata graph for {}: {e}", spec.location),
            }
        } else {
            log::info!(
                "metadata requested for {} but {media_type} is not an image",
                spec.location
            );
        }
    }

    Ok(FacadeDataset {
        data_graph_name: name,
        metadata_graph_name,
        media_type,
        quads,
    })
}

fn declared_charset(media_type: &str) -> Option<String> {
    media_type.split(';').skip(1).find_map(|p| {
        let (k, v) = p.split_once('=')?;
        k.trim()
            .eq_ignore_ascii_case("charset")
            .then(|| v.trim().trim_matches('"').to_owned())
    })
}

/// Fetches and triplifies the resource `spec` describes.
pub fn assemble(
    spec: &ServiceSpec,
    base_dir: &Path,
    registry: &TriplifierRegistry,
) -> Result<FacadeDataset> {
    let resource = fetch(&spec.location, base_dir)?;
    assemble_resource(spec, &resource, registry)
}

type Slot = Arc<Mutex<Option<Arc<FacadeDataset>>>>;

/// Per-execution dataset cache keyed by canonical service IRI. Concurrent
/// requests for one key wait for a single assembly; failures are not
/// cached.
#[derive(Debug)]
pub struct DatasetCache {
    slots: Mutex<HashMap<String, Slot>>,
    assemblies: AtomicUsize,
    budget: usize,
}

impl Default for DatasetCache {
    fn default() -> Self {
        Self::new(usize::MAX)
    }
}

impl DatasetCache {
    pub fn new(budget: usize) -> Self {
        DatasetCache {
            slots: Mutex::new(HashMap::new()),
            assemblies: AtomicUsize::new(0),
            budget,
        }
    }

    pub fn key(spec: &ServiceSpec) -> String {
        render_service_uri(spec)
    }

    pub fn lookup(&self, spec: &ServiceSpec) -> Option<Arc<FacadeDataset>> {
        let slot = self.slots.lock().unwrap().get(&Self::key(spec)).cloned()?;
        let ready = slot.lock().unwrap().clone();
        ready
    }

    pub fn store(&self, spec: &ServiceSpec, dataset: Arc<FacadeDataset>) {
        let slot = Arc::clone(
            self.slots
                .lock()
                .unwrap()
                .entry(Self::key(spec))
                .or_default(),
        );
        *slot.lock().unwrap() = Some(dataset);
    }

    pub fn get_or_assemble(
        &self,
        spec: &ServiceSpec,
        assemble: impl FnOnce() -> Result<FacadeDataset>,
    ) -> Result<Arc<FacadeDataset>> {
        let slot = Arc::clone(
            self.slots
                .lock()
                .unwrap()
                .entry(Self::key(spec))
                .or_default(),
        );
        let mut guard = slot.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(ready) = guard.as_ref() {
            return Ok(Arc::clone(ready));
        }
        let done = self.assemblies.fetch_add(1, Ordering::SeqCst);
        if done >= self.budget {
            self.assemblies.fetch_sub(1, Ordering::SeqCst);
            return Err(Error::ResourceLimit(format!(
                "a query may load at most {} resources",
                self.budget
            )));
        }
        let dataset = Arc::new(assemble()?);
        *guard = Some(Arc::clone(&dataset));
        Ok(dataset)
    }

    /// Number of assemblies started, successful or not.
    pub fn assemblies(&self) -> usize {
        self.assemblies.load(Ordering::SeqCst)
    }

    pub fn len(&self) -> usize {
        self.slots
            .lock()
            .unwrap()
            .values()
            .filter(|s| s.lock().map(|s| s.is_some()).unwrap_or(false))
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops cached datasets but keeps the assembly count.
    pub fn release(&self) {
        self.slots.lock().unwrap().clear();
    }

    pub fn clear(&self) {
        self.slots.lock().unwrap().clear();
        self.assemblies.store(0, Ordering::SeqCst);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FX_ROOT, RDF_NAMESPACE};
    use std::io::Write;

    fn registry() -> TriplifierRegistry {
        TriplifierRegistry::standard()
    }

    fn write(dir: &Path, name: &str, content: &[u8]) {
        std::fs::File::create(dir.join(name))
            .unwrap()
            .write_all(content)
            .unwrap();
    }

    #[test]
    fn locations_resolve() {
        let base = Path::new("/base");
        assert_eq!(
            resolve_location("file:./a.csv", base).unwrap(),
            Source::File("/base/./a.csv".into())
        );
        assert_eq!(
            resolve_location("file:///x/a%20b.txt", base).unwrap(),
            Source::File("/x/a b.txt".into())
        );
        assert_eq!(
            resolve_location("file://localhost/x", base).unwrap(),
            Source::File("/x".into())
        );
        assert_eq!(
            resolve_location("rel/a.json", base).unwrap(),
            Source::File("/base/rel/a.json".into())
        );
        assert_eq!(
            resolve_location("https://h/x", base).unwrap(),
            Source::Http("https://h/x".into())
        );
        assert!(resolve_location("ftp://h/x", base).is_err());
        assert!(resolve_location("file://remote/x", base).is_err());
    }

    #[test]
    fn fetch_local_file() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "three.bin", b"abc");
        let r = fetch("file:./three.bin", dir.path()).unwrap();
        assert_eq!(r.bytes, b"abc");
        assert!(r.declared_media_type.is_none());
        assert!(r.effective_location.starts_with("file:///"));
        assert!(matches!(
            fetch("file:./missing.bin", dir.path()),
            Err(Error::Fetch { .. })
        ));
    }

    #[test]
    fn csv_dataset_shape() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.csv", b"id,artist\n1034,Blake Robert\n");
        let mut spec = ServiceSpec::new("file:./a.csv");
        spec.triplifier_options.csv_headers = true;
        let ds = assemble(&spec, dir.path(), &registry()).unwrap();
        assert_eq!(ds.data_graph_name().as_str(), "file:./a.csv");
        assert_eq!(ds.media_type(), "text/csv");
        assert!(!ds.has_metadata());
        let g = ds.data_graph();
        assert_eq!(g.len(), 4);
        let roots: Vec<_> = g
            .subjects_for_predicate_object(
                NamedNodeRef::new_unchecked(&format!("{RDF_NAMESPACE}type")),
                NamedNodeRef::new_unchecked(FX_ROOT),
            )
            .collect();
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn relative_location_named_by_absolute_iri() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "e.txt", b"");
        let ds = assemble(&ServiceSpec::new("e.txt"), dir.path(), &registry()).unwrap();
        assert!(ds.data_graph_name().as_str().starts_with("file:///"));
        assert!(ds.data_graph_name().as_str().ends_with("/e.txt"));
        assert_eq!(ds.data_graph().len(), 1);
    }

    #[test]
    fn media_type_precedence() {
        let resource = FetchedResource {
            bytes: b"[1,2]".to_vec(),
            effective_location: "http://h/x.txt".into(),
            declared_media_type: Some("application/json".into()),
            fetch_time: SystemTime::now(),
        };
        let spec = ServiceSpec::new("http://h/x.txt");
        let ds = assemble_resource(&spec, &resource, &registry()).unwrap();
        assert_eq!(ds.media_type(), "application/json");

        let mut spec = ServiceSpec::new("http://h/x.txt");
        spec.media_type_override = Some("text/plain".into());
        let ds = assemble_resource(&spec, &resource, &registry()).unwrap();
        assert_eq!(ds.media_type(), "text/plain");

        let resource = FetchedResource {
            declared_media_type: Some("application/x-unknown".into()),
            ..resource
        };
        let ds = assemble_resource(&ServiceSpec::new("http://h/x.txt"), &resource, &registry())
            .unwrap();
        assert_eq!(ds.media_type(), "text/plain");

        let mut spec = ServiceSpec::new("http://h/x.txt");
        spec.media_type_override = Some("application/x-unknown".into());
        assert!(matches!(
            assemble_resource(&spec, &resource, &registry()),
            Err(Error::UnsupportedMediaType(_))
        ));
    }

    #[test]
    fn metadata_failure_downgrades() {
        let resource = FetchedResource {
            bytes: b"not a jpeg".to_vec(),
            effective_location: "file:///x.jpg".into(),
            declared_media_type: None,
            fetch_time: SystemTime::now(),
        };
        let mut spec = ServiceSpec::new("file:///x.jpg");
        spec.metadata = true;
        let ds = assemble_resource(&spec, &resource, &registry()).unwrap();
        assert!(!ds.has_metadata());
        assert_eq!(ds.data_graph().len(), 2);
    }

    fn dummy(name: &str) -> FacadeDataset {
        let resource = FetchedResource {
            bytes: Vec::new(),
            effective_location: name.into(),
            declared_media_type: None,
            fetch_time: SystemTime::now(),
        };
        assemble_resource(&ServiceSpec::new(name), &resource, &registry()).unwrap()
    }

    #[test]
    fn cache_single_assembly_per_key() {
        let cache = DatasetCache::default();
        let a = ServiceSpec::new("file:///a.txt");
        assert!(cache.lookup(&a).is_none());
        let mut calls = 0;
        for _ in 0..3 {
            cache
                .get_or_assemble(&a, || {
                    calls += 1;
                    Ok(dummy("file:///a.txt"))
                })
                .unwrap();
        }
        assert_eq!(calls, 1);
        let mut b = a.clone();
        b.triplifier_options.csv_headers = true;
        cache.get_or_assemble(&b, || Ok(dummy("file:///a.txt"))).unwrap();
        assert_eq!(cache.assemblies(), 2);
        assert_eq!(cache.len(), 2);
        cache.clear();
        assert!(cache.is_empty());
    }

    #[test]
    fn cache_does_not_keep_failures() {
        let cache = DatasetCache::default();
        let a = ServiceSpec::new("file:///a.txt");
        assert!(cache
            .get_or_assemble(&a, || Err(Error::Config("boom".into())))
            .is_err());
        assert!(cache.get_or_assemble(&a, || Ok(dummy("file:///a.txt"))).is_ok());
    }

    #[test]
    fn cache_budget() {
        let cache = DatasetCache::new(1);
        cache
            .get_or_assemble(&ServiceSpec::new("file:///a"), || Ok(dummy("file:///a")))
            .unwrap();
        assert!(matches!(
            cache.get_or_assemble(&ServiceSpec::new("file:///b"), || Ok(dummy("file:///b"))),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn cache_single_flight_across_threads() {
        let cache = Arc::new(DatasetCache::default());
        let calls = Arc::new(AtomicUsize::new(0));
        let spec = ServiceSpec::new("file:///shared.txt");
        std::thread::scope(|s| {
            for _ in 0..8 {
                let cache = Arc::clone(&cache);
                let calls = Arc::clone(&calls);
                let spec = spec.clone();
                s.spawn(move || {
                    cache
                        .get_or_assemble(&spec, || {
                            calls.fetch_add(1, Ordering::SeqCst);
                            std::thread::sleep(Duration::from_millis(20));
                            Ok(dummy("file:///shared.txt"))
                        })
                        .unwrap();
                });
            }
        });
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }
}
