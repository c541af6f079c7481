//! Known SNAP datasets and a content-addressed local cache.
//!
//! Cached files live at `<root>/objects/<sha256>/<file>`; `<root>/index.json`
//! maps dataset names to digests. A digest is pinned in the manifest when
//! known, otherwise the first stored copy defines it and later reads are
//! checked against it.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::EdgeSemantics;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublishedCounts {
    pub nodes_before: usize,
    pub edges_before: usize,
    pub nodes_after: usize,
    pub edges_after: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetSpec {
    pub name: &'static str,
    pub file: &'static str,
    pub url: &'static str,
    pub semantics: EdgeSemantics,
    pub sha256: Option<&'static str>,
    /// Node/edge counts reported for the experiments this tool reproduces.
    pub published: PublishedCounts,
}

pub const MANIFEST: &[DatasetSpec] = &[
    DatasetSpec {
        name: "facebook",
        file: "facebook_combined.txt.gz",
        url: "https://snap.stanford.edu/data/facebook_combined.txt.gz",
        semantics: EdgeSemantics::Undirected,
        sha256: None,
        published: PublishedCounts {
            nodes_before: 4039,
            edges_before: 88234,
            nodes_after: 4039,
            edges_after: 88234,
        },
    },
    DatasetSpec {
        name: "hepth",
        file: "ca-HepTh.txt.gz",
        url: "https://snap.stanford.edu/data/ca-HepTh.txt.gz",
        semantics: EdgeSemantics::Directed,
        sha256: None,
        published: PublishedCounts {
            nodes_before: 9877,
            edges_before: 25998,
            nodes_after: 9877,
            edges_after: 25998,
        },
    },
    DatasetSpec {
        name: "brightkite",
        file: "loc-brightkite_edges.txt.gz",
        url: "https://snap.stanford.edu/data/loc-brightkite_edges.txt.gz",
        semantics: EdgeSemantics::Directed,
        sha256: None,
        published: PublishedCounts {
            nodes_before: 58228,
            edges_before: 428156,
            nodes_after: 55723,
            edges_after: 214078,
        },
    },
];

pub fn lookup(name: &str) -> Option<&'static DatasetSpec> {
    MANIFEST.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub path: PathBuf,
    pub sha256: String,
    pub cache_hit: bool,
}

/// Where bytes come from on a cache miss.
pub trait Source {
    fn get(&self, url: &str) -> Result<Vec<u8>>;
}

/// Plain HTTPS download.
pub struct Http;

impl Source for Http {
    fn get(&self, url: &str) -> Result<Vec<u8>> {
        let net = |message: String| Error::Network {
            url: url.to_string(),
            message,
        };
        let resp = ureq::get(url).call().map_err(|e| net(e.to_string()))?;
        let mut bytes = Vec::new();
        std::io::Read::read_to_end(&mut resp.into_reader(), &mut bytes)
            .map_err(|e| net(e.to_string()))?;
        Ok(bytes)
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// `$LINKPRED_CACHE`, else `$HOME/.cache/linkpred`, else `./.linkpred-cache`.
    pub fn default_root() -> PathBuf {
        if let Some(p) = std::env::var_os("LINKPRED_CACHE") {
            return PathBuf::from(p);
        }
        match std::env::var_os("HOME") {
            Some(home) => Path::new(&home).join(".cache").join("linkpred"),
            None => PathBuf::from(".linkpred-cache"),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn index_path(&self) -> PathBuf {
        self.root.join("index.json")
    }

    fn read_index(&self) -> Result<BTreeMap<String, String>> {
        match fs::read_to_string(self.index_path()) {
            Ok(s) => Ok(serde_json::from_str(&s)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(BTreeMap::new()),
            Err(e) => Err(Error::io("reading cache index", e)),
        }
    }

    fn write_index(&self, index: &BTreeMap<String, String>) -> Result<()> {
        fs::create_dir_all(&self.root).map_err(|e| Error::io("creating cache", e))?;
        fs::write(self.index_path(), serde_json::to_string_pretty(index)?)
            .map_err(|e| Error::io("writing cache index", e))
    }

    fn object_path(&self, spec: &DatasetSpec, digest: &str) -> PathBuf {
        self.root.join("objects").join(digest).join(spec.file)
    }

    /// Path of a verified cached copy, if one exists. A cached copy whose
    /// content no longer matches its digest is an error.
    pub fn cached(&self, spec: &DatasetSpec) -> Result<Option<Fetched>> {
        let Some(digest) = self.read_index()?.get(spec.name).cloned() else {
            return Ok(None);
        };
        let path = self.object_path(spec, &digest);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(format!("reading {}", path.display()), e)),
        };
        let found = sha256_hex(&bytes);
        if found != digest {
            return Err(Error::Checksum {
                path,
                expected: digest,
                found,
            });
        }
        Ok(Some(Fetched {
            path,
            sha256: digest,
            cache_hit: true,
        }))
    }

    /// Stores `bytes` as the copy of `spec`, checking a pinned digest.
    pub fn store(&self, spec: &DatasetSpec, bytes: &[u8]) -> Result<Fetched> {
        let digest = sha256_hex(bytes);
        if let Some(pinned) = spec.sha256 {
            if pinned != digest {
                return Err(Error::Checksum {
                    path: PathBuf::from(spec.file),
                    expected: pinned.to_string(),
                    found: digest,
                });
            }
        }
        let path = self.object_path(spec, &digest);
        fs::create_dir_all(path.parent().unwrap()).map_err(|e| Error::io("creating cache", e))?;
        fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        let mut index = self.read_index()?;
        index.insert(spec.name.to_string(), digest.clone());
        self.write_index(&index)?;
        Ok(Fetched {
            path,
            sha256: digest,
            cache_hit: false,
        })
    }

    /// Cached copy if present, otherwise a download through `source`.
    pub fn fetch(&self, spec: &DatasetSpec, offline: bool, source: &dyn Source) -> Result<Fetched> {
        if let Some(hit) = self.cached(spec)? {
            return Ok(hit);
        }
        if offline {
            return Err(Error::Network {
                url: spec.url.to_string(),
                message: "not cached and --offline forbids downloading".into(),
            });
        }
        let bytes = source.get(spec.url)?;
        self.store(spec, &bytes)
    }

    /// Places a manually obtained file into the cache.
    pub fn import(&self, spec: &DatasetSpec, file: &Path) -> Result<Fetched> {
        let bytes =
            fs::read(file).map_err(|e| Error::io(format!("reading {}", file.display()), e))?;
        self.store(spec, &bytes)
    }
}
