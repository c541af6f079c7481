//! Run configuration: a flat, versioned TOML document.
//!
//! ```toml
//! schema_version = 1
//! dataset = "facebook"          # manifest name or edge-list path
//! k_values = [1000]
//! selectors = ["first", "second", "third", "fourth", "total"]
//! baselines = ["sam"]
//! seed = 7
//! output_dir = "out"
//! ```
//!
//! Every other key has a default; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::BaselineRegistry;
use crate::error::{Error, Result};
use crate::eval::ExperimentConfig;
use crate::globalsim::TieBreak;
use crate::graph::EdgeSemantics;
use crate::indices::DensityConvention;
use crate::sampling::{CandidatePolicy, Selector};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemanticsChoice {
    /// From the manifest for named datasets, otherwise detected from the file.
    #[default]
    Auto,
    Directed,
    Undirected,
}

impl SemanticsChoice {
    pub fn fixed(self) -> Option<EdgeSemantics> {
        match self {
            SemanticsChoice::Auto => None,
            SemanticsChoice::Directed => Some(EdgeSemantics::Directed),
            SemanticsChoice::Undirected => Some(EdgeSemantics::Undirected),
        }
    }
}

fn default_selectors() -> Vec<String> {
    Selector::INDEX_SETS
        .iter()
        .map(Selector::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub dataset: String,
    #[serde(default)]
    pub semantics: SemanticsChoice,
    pub k_values: Vec<usize>,
    #[serde(default = "default_selectors")]
    pub selectors: Vec<String>,
    #[serde(default)]
    pub baselines: Vec<String>,
    #[serde(default = "d::positive_fraction")]
    pub positive_fraction: f64,
    #[serde(default = "d::negative_ratio")]
    pub negative_ratio: f64,
    #[serde(default)]
    pub candidate_policy: CandidatePolicy,
    #[serde(default = "d::rounds")]
    pub rounds: usize,
    #[serde(default = "d::max_depth")]
    pub max_depth: usize,
    #[serde(default = "d::folds")]
    pub folds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub density_convention: DensityConvention,
    #[serde(default)]
    pub tie_break: TieBreak,
    #[serde(default = "d::max_hops")]
    pub max_hops: u32,
    #[serde(default = "d::output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub export_arff: bool,
    #[serde(default)]
    pub export_features_csv: bool,
    #[serde(default)]
    pub save_models: bool,
}

mod d {
    use std::path::PathBuf;

    pub fn positive_fraction() -> f64 {
        0.1
    }
    pub fn negative_ratio() -> f64 {
        1.0
    }
    pub fn rounds() -> usize {
        50
    }
    pub fn max_depth() -> usize {
        2
    }
    pub fn folds() -> usize {
        10
    }
    pub fn max_hops() -> u32 {
        6
    }
    pub fn output_dir() -> PathBuf {
        PathBuf::from("linkpred-out")
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads a config file; relative `dataset` and `output_dir` paths are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if crate::datasets::lookup(&cfg.dataset).is_none() && Path::new(&cfg.dataset).is_relative()
        {
            cfg.dataset = base.join(&cfg.dataset).to_string_lossy().into_owned();
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    /// Selector list of the run: index sets first, then baselines.
    pub fn all_selectors(&self) -> Result<Vec<Selector>> {
        let mut out = Vec::new();
        for name in &self.selectors {
            let s: Selector = name.parse()?;
            if matches!(s, Selector::Baseline(_)) {
                return Err(Error::Config(format!(
                    "{name:?} is not an index set (first, second, third, fourth, total); \
                     list baselines under `baselines`"
                )));
            }
            out.push(s);
        }
        for name in &self.baselines {
            out.push(Selector::Baseline(name.clone()));
        }
        Ok(out)
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        Ok(ExperimentConfig {
            k_values: self.k_values.clone(),
            selectors: self.all_selectors()?,
            positive_fraction: self.positive_fraction,
            negative_ratio: self.negative_ratio,
            candidate_policy: self.candidate_policy,
            rounds: self.rounds,
            max_depth: self.max_depth,
            folds: self.folds,
            seed: self.seed,
            density_convention: self.density_convention,
            tie_break: self.tie_break,
            max_hops: self.max_hops,
        })
    }

    /// Checks everything that can be checked without reading the dataset.
    pub fn validate(&self, registry: &BaselineRegistry) -> Result<()> {
        if self.schema_version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {CONFIG_VERSION})",
                self.schema_version
            )));
        }
        if self.dataset.trim().is_empty() {
            return Err(Error::Config("dataset must not be empty".into()));
        }
        for name in &self.baselines {
            if registry.get(name).is_none() {
                let known: Vec<&str> = registry.names().collect();
                return Err(Error::Config(format!(
                    "unknown baseline {name:?} (registered: {})",
                    known.join(", ")
                )));
            }
        }
        self.experiment()?.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
dataset = "fixtures/social.txt"
k_values = [12]
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.rounds, 50);
        assert_eq!(c.max_depth, 2);
        assert_eq!(c.folds, 10);
        assert_eq!(c.max_hops, 6);
        assert_eq!(c.candidate_policy, CandidatePolicy::DistanceTwo);
        assert_eq!(c.all_selectors().unwrap().len(), 5);
        c.validate(&BaselineRegistry::with_defaults()).unwrap();
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{MINIMAL}\nroundz = 3\n");
        assert!(matches!(
            RunConfig::from_toml_str(&text),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn enum_spellings() {
        let text = format!(
            "{MINIMAL}\ncandidate_policy = \"uniform-nonedge\"\ntie_break = \"first-found\"\n\
             density_convention = \"literal\"\nsemantics = \"directed\"\n"
        );
        let c = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(c.candidate_policy, CandidatePolicy::UniformNonedge);
        assert_eq!(c.tie_break, TieBreak::FirstFound);
        assert_eq!(c.density_convention, DensityConvention::Literal);
        assert_eq!(c.semantics, SemanticsChoice::Directed);
        let bad = format!("{MINIMAL}\ncandidate_policy = \"far\"\n");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn validation_failures() {
        let reg = BaselineRegistry::with_defaults();
        let with =
            |extra: &str| RunConfig::from_toml_str(&format!("{MINIMAL}\n{extra}\n")).unwrap();
        assert!(with("baselines = [\"cn2d\"]").validate(&reg).is_err());
        assert!(with("selectors = [\"sam\"]").validate(&reg).is_err());
        assert!(with("folds = 1").validate(&reg).is_err());
        assert!(with("positive_fraction = 0.0").validate(&reg).is_err());
        let mut c = with("");
        c.schema_version = 2;
        assert!(c.validate(&reg).is_err());
        assert!(with("baselines = [\"sam\"]").validate(&reg).is_ok());
    }
}
