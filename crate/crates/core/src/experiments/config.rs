use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::SyntheticParams;
use crate::linalg::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Gcs,
    Igcs,
    Random,
    Aopt,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Gcs => "gcs",
            SamplerKind::Igcs => "igcs",
            SamplerKind::Random => "random",
            SamplerKind::Aopt => "aopt",
        }
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gcs" => Ok(SamplerKind::Gcs),
            "igcs" => Ok(SamplerKind::Igcs),
            "random" => Ok(SamplerKind::Random),
            "aopt" => Ok(SamplerKind::Aopt),
            other => Err(Error::Config(format!("unknown sampler `{other}`"))),
        }
    }
}

/// Shared sampler and model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub zeta: usize,
    /// Local pool size for the A-optimal sampler.
    pub pool_size: usize,
    pub k1: usize,
    pub k2: usize,
    pub warm_start: bool,
}

impl Default for SamplerParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 0.1,
            q: 0.5,
            zeta: 1,
            pool_size: 32,
            k1: 3,
            k2: 3,
            warm_start: true,
        }
    }
}

/// One method entry: a bare sampler name or a table with overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MethodEntry {
    Name(SamplerKind),
    Spec(MethodSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub kind: SamplerKind,
    /// Name used in metric rows; defaults to the sampler name.
    pub label: Option<String>,
    pub q: Option<f64>,
    pub zeta: Option<usize>,
    pub pool_size: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub warm_start: Option<bool>,
}

impl MethodEntry {
    pub fn spec(&self) -> MethodSpec {
        match self {
            MethodEntry::Name(kind) => MethodSpec {
                kind: *kind,
                label: None,
                q: None,
                zeta: None,
                pool_size: None,
                k1: None,
                k2: None,
                warm_start: None,
            },
            MethodEntry::Spec(s) => s.clone(),
        }
    }
}

impl MethodSpec {
    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.kind.name().to_string())
    }

    /// Shared parameters with this entry's overrides applied.
    pub fn resolve(&self, base: &SamplerParams) -> SamplerParams {
        SamplerParams {
            q: self.q.unwrap_or(base.q),
            zeta: self.zeta.unwrap_or(base.zeta),
            pool_size: self.pool_size.unwrap_or(base.pool_size),
            k1: self.k1.unwrap_or(base.k1),
            k2: self.k2.unwrap_or(base.k2),
            warm_start: self.warm_start.unwrap_or(base.warm_start),
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatasetSpec {
    /// Generated per seed; the generator seed is the experiment seed.
    Synthetic(SyntheticParams),
    Ratings {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GraphSource {
    /// Graphs from the synthetic generator or from edge-list files.
    Provided {
        row_graph: Option<PathBuf>,
        col_graph: Option<PathBuf>,
    },
    /// Content graphs built from the initial observed set.
    G2Content {
        d_s: Option<f64>,
        gamma: Option<f64>,
    },
    /// kNN graphs on per-node feature files.
    G1Features {
        row_features: PathBuf,
        col_features: PathBuf,
        neighbors: Option<usize>,
    },
}

impl Default for GraphSource {
    fn default() -> Self {
        GraphSource::Provided {
            row_graph: None,
            col_graph: None,
        }
    }
}

/// Fractions of the known entries used as the initial observed set, the
/// sampling pool and the held-out evaluation set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFractions {
    pub initial: f64,
    pub pool: f64,
    pub eval: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        Self {
            initial: 0.0,
            pool: 1.0,
            eval: 0.0,
        }
    }
}

impl SplitFractions {
    pub fn new(initial: f64, pool: f64, eval: f64) -> Result<Self> {
        let s = Self {
            initial,
            pool,
            eval,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, f) in [
            ("initial", self.initial),
            ("pool", self.pool),
            ("eval", self.eval),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!(
                    "split fraction `{name}` = {f} is outside [0, 1]"
                )));
            }
        }
        if self.initial + self.pool + self.eval > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "split fractions sum to {} > 1",
                self.initial + self.pool + self.eval
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub cg_tol: f64,
    /// Defaults to `10·mn` when absent.
    pub cg_max_iter: Option<usize>,
    pub sampler_tol: f64,
    pub sampler_max_iter: usize,
    pub eig_tol: f64,
    pub eig_max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let s = SolverOptions::sampler_default();
        Self {
            cg_tol: 1e-8,
            cg_max_iter: None,
            sampler_tol: s.tol,
            sampler_max_iter: s.max_iter,
            eig_tol: 1e-6,
            eig_max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub graphs: GraphSource,
    #[serde(default)]
    pub split: SplitFractions,
    pub methods: Vec<MethodEntry>,
    #[serde(default)]
    pub sampler: SamplerParams,
    /// Budgets as fractions of `mn`.
    #[serde(default)]
    pub budget_fractions: Vec<f64>,
    /// Absolute budgets; used instead of `budget_fractions` when nonempty.
    #[serde(default)]
    pub budgets: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Metric and sample files go here when set.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML file; relative paths inside resolve against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let Some(base) = path.parent() {
            cfg.rebase(base);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let DatasetSpec::Ratings { path } = &mut self.dataset {
            fix(path);
        }
        match &mut self.graphs {
            GraphSource::Provided {
                row_graph,
                col_graph,
            } => {
                row_graph.iter_mut().for_each(fix);
                col_graph.iter_mut().for_each(fix);
            }
            GraphSource::G1Features {
                row_features,
                col_features,
                ..
            } => {
                fix(row_features);
                fix(col_features);
            }
            GraphSource::G2Content { .. } => {}
        }
        if let Some(out) = &mut self.output_dir {
            fix(out);
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.split.validate()?;
        if self.methods.is_empty() {
            return Err(Error::Config("no methods listed".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("no seeds listed".into()));
        }
        if self.budgets.is_empty() && self.budget_fractions.is_empty() {
            return Err(Error::Config("no budgets listed".into()));
        }
        if let Some(f) = self
            .budget_fractions
            .iter()
            .find(|f| !(0.0..=1.0).contains(*f))
        {
            return Err(Error::Config(format!(
                "budget fraction {f} is outside [0, 1]"
            )));
        }
        let mut labels: Vec<String> = self.methods.iter().map(|m| m.spec().label()).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("method labels must be unique".into()));
        }
        Ok(())
    }

    /// Budgets in entries for an `m × n` problem. Absolute budgets win over
    /// fractions.
    pub fn resolve_budgets(&self, mn: usize) -> Vec<usize> {
        if !self.budgets.is_empty() {
            self.budgets.clone()
        } else {
            self.budget_fractions
                .iter()
                .map(|f| (f * mn as f64).round() as usize)
                .collect()
        }
    }
}
