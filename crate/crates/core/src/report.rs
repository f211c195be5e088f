//! Verdicts, checks and self-contained certificates.

use serde::{Deserialize, Serialize};

use crate::exactla::Mat;
use crate::modrep::{Bimodule, LeftModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Vacuous,
    Inconsistent,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Vacuous => "vacuous",
            Verdict::Inconsistent => "inconsistent",
        }
    }
}

/// Nested row-major matrix as it appears in JSON.
pub type MatrixJson = Vec<Vec<u32>>;

pub fn mat_to_json(m: &Mat) -> MatrixJson {
    m.to_rows()
}

/// A module presented by the matrices any map must intertwine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSet {
    pub dim: usize,
    pub actions: Vec<MatrixJson>,
}

impl ActionSet {
    pub fn of_module(m: &LeftModule) -> ActionSet {
        ActionSet {
            dim: m.dim(),
            actions: m.action().iter().map(mat_to_json).collect(),
        }
    }

    /// Left actions followed by right actions.
    pub fn of_bimodule(m: &Bimodule) -> ActionSet {
        ActionSet {
            dim: m.dim(),
            actions: m
                .left_action()
                .iter()
                .chain(m.right_action())
                .map(mat_to_json)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividesData {
    pub p: u32,
    pub source: ActionSet,
    pub target: ActionSet,
    pub copies: usize,
    pub phi: MatrixJson,
    pub psi: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitData {
    pub p: u32,
    pub module: ActionSet,
    pub regular: ActionSet,
    pub copies: usize,
    pub pi: MatrixJson,
    pub sigma: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoData {
    pub p: u32,
    pub source: ActionSet,
    pub target: ActionSet,
    pub map: MatrixJson,
}

/// `second ∘ first = id`, both maps intertwining the given actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeData {
    pub p: u32,
    pub source: ActionSet,
    pub middle: ActionSet,
    pub first: MatrixJson,
    pub second: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandData {
    pub module: ActionSet,
    pub inj: MatrixJson,
    pub proj: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionData {
    pub p: u32,
    pub module: ActionSet,
    pub summands: Vec<SummandData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Divides(DividesData),
    Similarity {
        forward: DividesData,
        backward: DividesData,
    },
    Split(SplitData),
    Iso(IsoData),
    Composite(CompositeData),
    Decomposition(DecompositionData),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Check {
    pub fn new(name: &str, anchor: &str, verdict: Verdict) -> Check {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            verdict,
            certificate: None,
            reason: None,
        }
    }

    pub fn with_certificate(mut self, c: Option<Certificate>) -> Check {
        self.certificate = c;
        self
    }

    pub fn with_reason(mut self, r: impl Into<String>) -> Check {
        self.reason = Some(r.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(verdict: Verdict, checks: Vec<Check>) -> Report {
        Report { verdict, checks }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends another report's checks with a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn certificates(&self) -> impl Iterator<Item = (&Check, &Certificate)> {
        self.checks
            .iter()
            .filter_map(|c| c.certificate.as_ref().map(|cert| (c, cert)))
    }
}

