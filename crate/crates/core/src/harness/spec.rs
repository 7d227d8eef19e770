use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Logistic,
    Multitask,
    #[serde(rename = "blackbox")]
    BlackboxComposite,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Logistic => "logistic",
            ExperimentKind::Multitask => "multitask",
            ExperimentKind::BlackboxComposite => "blackbox",
        }
    }
}

/// Radius of the decision set relative to the norm of the true parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusMode {
    Known,
    Half,
    Double,
}

impl RadiusMode {
    pub fn factor(&self) -> f64 {
        match self {
            RadiusMode::Known => 1.0,
            RadiusMode::Half => 0.5,
            RadiusMode::Double => 2.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadiusMode::Known => "known",
            RadiusMode::Half => "half",
            RadiusMode::Double => "double",
        }
    }
}

/// Registered learners. Online experiments use the first five, the black-box
/// experiment the accelerated ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    ExpMd,
    ExpFtrl,
    AdaGrad,
    AdaFtrl,
    EgPm,
    AccExpMd,
    AccExpFtrl,
    AccAdaGrad,
    AccAdaFtrl,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::ExpMd,
        Algorithm::ExpFtrl,
        Algorithm::AdaGrad,
        Algorithm::AdaFtrl,
        Algorithm::EgPm,
        Algorithm::AccExpMd,
        Algorithm::AccExpFtrl,
        Algorithm::AccAdaGrad,
        Algorithm::AccAdaFtrl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::ExpMd => "exp-md",
            Algorithm::ExpFtrl => "exp-ftrl",
            Algorithm::AdaGrad => "adagrad",
            Algorithm::AdaFtrl => "adaftrl",
            Algorithm::EgPm => "eg-pm",
            Algorithm::AccExpMd => "acc-exp-md",
            Algorithm::AccExpFtrl => "acc-exp-ftrl",
            Algorithm::AccAdaGrad => "acc-adagrad",
            Algorithm::AccAdaFtrl => "acc-adaftrl",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn supports(&self, kind: ExperimentKind) -> bool {
        let accelerated = matches!(
            self,
            Algorithm::AccExpMd
                | Algorithm::AccExpFtrl
                | Algorithm::AccAdaGrad
                | Algorithm::AccAdaFtrl
        );
        match kind {
            ExperimentKind::Logistic => !accelerated,
            ExperimentKind::Multitask => !accelerated && *self != Algorithm::EgPm,
            ExperimentKind::BlackboxComposite => accelerated,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_one() -> usize {
    1
}

fn default_gamma() -> f64 {
    0.5
}

/// Full description of one experiment; the JSON config maps onto it
/// field-for-field and rejects unknown keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub dim: usize,
    #[serde(default = "default_one")]
    pub tasks: usize,
    #[serde(default)]
    pub rank: usize,
    pub horizon: usize,
    pub trials: usize,
    #[serde(default)]
    pub sparsity: f64,
    pub radius_mode: RadiusMode,
    pub algorithms: Vec<String>,
    pub seed: u64,
    /// Estimator batch size of the black-box experiment.
    #[serde(default = "default_one")]
    pub batch: usize,
    #[serde(default = "default_gamma")]
    pub gamma1: f64,
    #[serde(default = "default_gamma")]
    pub gamma2: f64,
}

impl ExperimentSpec {
    /// Desk-scale logistic regression: `d = 500`, `T = 2000`, 99% sparsity.
    pub fn logistic() -> Self {
        Self {
            kind: ExperimentKind::Logistic,
            dim: 500,
            tasks: 1,
            rank: 0,
            horizon: 2000,
            trials: 20,
            sparsity: 0.99,
            radius_mode: RadiusMode::Known,
            algorithms: ["exp-md", "exp-ftrl", "adagrad", "adaftrl", "eg-pm"]
                .map(String::from)
                .to_vec(),
            seed: 1,
            batch: 1,
            gamma1: 0.5,
            gamma2: 0.5,
        }
    }

    /// Desk-scale multitask problem: `d = 20`, `k = 5`, `r = 2`, `T = 1000`.
    pub fn multitask() -> Self {
        Self {
            kind: ExperimentKind::Multitask,
            dim: 20,
            tasks: 5,
            rank: 2,
            horizon: 1000,
            trials: 20,
            sparsity: 0.0,
            radius_mode: RadiusMode::Known,
            algorithms: ["exp-md", "exp-ftrl", "adagrad", "adaftrl"]
                .map(String::from)
                .to_vec(),
            seed: 1,
            batch: 1,
            gamma1: 0.5,
            gamma2: 0.5,
        }
    }

    /// Synthetic black-box composite problem solved with accelerated learners
    /// fed by two-point estimates.
    pub fn blackbox() -> Self {
        Self {
            kind: ExperimentKind::BlackboxComposite,
            dim: 50,
            tasks: 1,
            rank: 0,
            horizon: 500,
            trials: 5,
            sparsity: 0.0,
            radius_mode: RadiusMode::Known,
            algorithms: ["acc-exp-md", "acc-exp-ftrl", "acc-adagrad", "acc-adaftrl"]
                .map(String::from)
                .to_vec(),
            seed: 1,
            batch: 1,
            gamma1: 0.5,
            gamma2: 0.5,
        }
    }

    pub fn default_for(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::Logistic => Self::logistic(),
            ExperimentKind::Multitask => Self::multitask(),
            ExperimentKind::BlackboxComposite => Self::blackbox(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Label written in the `experiment` CSV column.
    pub fn label(&self) -> String {
        match self.kind {
            ExperimentKind::BlackboxComposite => format!("{}-b{}", self.kind.name(), self.batch),
            _ => format!("{}-{}", self.kind.name(), self.radius_mode.name()),
        }
    }

    pub fn parsed_algorithms(&self) -> Result<Vec<Algorithm>> {
        self.algorithms
            .iter()
            .map(|name| {
                let a = Algorithm::parse(name)?;
                if a.supports(self.kind) {
                    Ok(a)
                } else {
                    Err(Error::UnknownAlgorithm(format!(
                        "{name} (not available for {})",
                        self.kind.name()
                    )))
                }
            })
            .collect()
    }

    /// Checks the invariants. A zero horizon is accepted and produces no records.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.dim == 0 {
            return bad("dim must be positive".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return bad(format!(
                "sparsity must lie in [0, 1], got {}",
                self.sparsity
            ));
        }
        if self.kind == ExperimentKind::Multitask {
            if self.tasks == 0 {
                return bad("tasks must be positive".into());
            }
            if self.rank > self.dim.min(self.tasks) {
                return bad(format!("rank {} exceeds min(dim, tasks)", self.rank));
            }
        }
        if self.batch == 0 {
            return bad("batch must be at least 1".into());
        }
        if !(self.gamma1 >= 0.0 && self.gamma2 >= 0.0) {
            return bad("regulariser weights must be non-negative".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed".into());
        }
        self.parsed_algorithms().map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for kind in [
            ExperimentKind::Logistic,
            ExperimentKind::Multitask,
            ExperimentKind::BlackboxComposite,
        ] {
            ExperimentSpec::default_for(kind).validate().unwrap();
        }
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let spec = ExperimentSpec::multitask();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(ExperimentSpec::from_json(&text).unwrap(), spec);
        let typo = text.replacen("\"horizon\"", "\"horizn\"", 1);
        assert!(ExperimentSpec::from_json(&typo).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(ExperimentSpec::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn invariants() {
        let mut s = ExperimentSpec::multitask();
        s.rank = 6;
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::logistic();
        s.sparsity = 1.5;
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::logistic();
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::logistic();
        s.algorithms.push("hu".into());
        assert!(matches!(s.validate(), Err(Error::UnknownAlgorithm(_))));
        let mut s = ExperimentSpec::logistic();
        s.algorithms = vec!["acc-exp-md".into()];
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::logistic();
        s.horizon = 0;
        assert!(s.validate().is_ok());
    }
}
