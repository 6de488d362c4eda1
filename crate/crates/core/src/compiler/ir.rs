use serde::{Deserialize, Serialize};

use super::synth::{AttenuationStage, PhaseStage};
use super::waveplate::WaveplateTriple;
use super::ExpansionMode;
use crate::error::{Error, Result};
use crate::spectral::Classification;

/// Paths are numbered from 1 in JSON and from 0 in memory.
pub(crate) mod one_based {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(path: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*path as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let p = u64::deserialize(d)?;
        if p == 0 {
            return Err(D::Error::custom("paths are numbered from 1"));
        }
        Ok(p as usize - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plate {
    #[serde(rename = "HWP")]
    Half,
    #[serde(rename = "QWP")]
    Quarter,
}

/// One optical stage acting on the modes `(1H, 1V, 2H, 2V)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stage {
    /// Beam-displacer rearrangement: output mode `i` carries input mode `perm[i]`.
    Routing {
        perm: Vec<usize>,
    },
    Waveplate {
        #[serde(with = "one_based")]
        path: usize,
        plate: Plate,
        angle: f64,
    },
    /// A QWP-HWP-QWP triple on each path. Each path also picks up the
    /// phase `e^{−i·global_phase}` of its triple.
    BlockUnitary {
        paths: [WaveplateTriple; 2],
    },
    Attenuator(AttenuationStage),
    Phase(PhaseStage),
    /// Discards the photons in the listed modes.
    Blocker {
        modes: Vec<usize>,
    },
}

impl Stage {
    pub fn kind(&self) -> &'static str {
        match self {
            Stage::Routing { .. } => "routing",
            Stage::Waveplate { .. } => "waveplate",
            Stage::BlockUnitary { .. } => "block_unitary",
            Stage::Attenuator(_) => "attenuator",
            Stage::Phase(_) => "phase",
            Stage::Blocker { .. } => "blocker",
        }
    }

    /// Whether the stage can change the amplitudes of either mode of `path`.
    pub(crate) fn touches_path(&self, path: usize) -> bool {
        let modes = [2 * path, 2 * path + 1];
        match self {
            Stage::Routing { perm } => modes.iter().any(|&m| perm.get(m) != Some(&m)),
            Stage::Waveplate { path: p, .. } => *p == path,
            Stage::Attenuator(a) => modes
                .iter()
                .any(|&m| a.angles.get(m).is_some_and(|t| (2.0 * t).sin() != 1.0)),
            Stage::Blocker { modes: blocked } => blocked.iter().any(|m| modes.contains(m)),
            Stage::BlockUnitary { .. } | Stage::Phase(_) => true,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidCircuit(format!("non-finite {what}")))
            }
        };
        match self {
            Stage::Routing { perm } => {
                let mut seen = [false; 4];
                if perm.len() != 4
                    || perm
                        .iter()
                        .any(|&p| p >= 4 || std::mem::replace(&mut seen[p], true))
                {
                    return Err(Error::InvalidCircuit(format!(
                        "{perm:?} is not a permutation of 4 modes"
                    )));
                }
            }
            Stage::Waveplate { path, angle, .. } => {
                if *path > 1 {
                    return Err(Error::InvalidCircuit(format!(
                        "path {} does not exist",
                        path + 1
                    )));
                }
                finite(*angle, "plate angle")?;
            }
            Stage::BlockUnitary { paths } => {
                for t in paths {
                    for x in [t.alpha, t.beta, t.gamma, t.global_phase] {
                        finite(x, "plate angle")?;
                    }
                }
            }
            Stage::Attenuator(a) => {
                if a.angles.len() != 4 {
                    return Err(Error::InvalidCircuit("attenuator needs 4 angles".into()));
                }
                for &t in &a.angles {
                    finite(t, "attenuator angle")?;
                }
                finite(a.lambda_scale, "attenuator scale")?;
            }
            Stage::Phase(p) => {
                if p.coeffs.len() != 4 {
                    return Err(Error::InvalidCircuit(
                        "phase stage needs 4 coefficients".into(),
                    ));
                }
                for &c in p.coeffs.iter().chain([&p.offset]) {
                    finite(c, "phase coefficient")?;
                }
            }
            Stage::Blocker { modes } => {
                if modes.iter().any(|&m| m >= 4) {
                    return Err(Error::InvalidCircuit(format!(
                        "blocker modes {modes:?} out of range"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A stage plus the name of the factor it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageEntry {
    #[serde(flatten)]
    pub stage: Stage,
    pub block: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `"reference"` for the hand-chosen fixture eigenbases, otherwise
    /// `"eigendecompose"`.
    pub decomposition: String,
    pub classification: Classification,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionMode>,
}

/// An ordered optical program. Stages apply left to right; the simulated
/// transfer matrix times `total_scale` reproduces the target evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitIR {
    pub dim: usize,
    pub total_scale: f64,
    /// Number of graph vertices encoded.
    pub vertices: usize,
    /// Mode read by the detector of each vertex. Vertex `k` also enters at
    /// that mode.
    pub detectors: Vec<usize>,
    pub stages: Vec<StageEntry>,
    pub provenance: Provenance,
}

impl CircuitIR {
    /// A circuit with no stages on `vertices` modes.
    pub fn identity(vertices: usize) -> Result<Self> {
        if vertices == 0 || vertices > 4 {
            return Err(Error::UnsupportedDimension(vertices));
        }
        Ok(Self {
            dim: 4,
            total_scale: 1.0,
            vertices,
            detectors: (0..vertices).collect(),
            stages: Vec::new(),
            provenance: Provenance {
                decomposition: "identity".into(),
                classification: Classification::Hermitian,
                lambda: vec![0.0; vertices],
                expansion: None,
            },
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 4 {
            return Err(Error::InvalidCircuit(format!(
                "dimension {} is not 4",
                self.dim
            )));
        }
        if !(self.total_scale > 0.0 && self.total_scale.is_finite()) {
            return Err(Error::InvalidCircuit("total_scale must be positive".into()));
        }
        if self.detectors.len() != self.vertices || self.detectors.iter().any(|&d| d >= 4) {
            return Err(Error::InvalidCircuit(
                "detector map does not fit the modes".into(),
            ));
        }
        for (i, entry) in self.stages.iter().enumerate() {
            entry
                .stage
                .validate()
                .map_err(|e| Error::InvalidCircuit(format!("stage {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    /// Block labels in stage order with consecutive repeats collapsed.
    pub fn block_order(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.stages {
            if out.last() != Some(&e.block.as_str()) {
                out.push(&e.block);
            }
        }
        out
    }

    pub fn phase_stage(&self) -> Option<&PhaseStage> {
        self.stages.iter().find_map(|e| match &e.stage {
            Stage::Phase(p) => Some(p),
            _ => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ir: Self = serde_json::from_str(text)?;
        ir.validate()?;
        Ok(ir)
    }
}
