use parafuse::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Labels,
    Weights,
    Qdim,
    Smatrix,
    Fusion,
    Characters,
    VerifyReport,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Labels => "labels",
            Kind::Weights => "weights",
            Kind::Qdim => "qdim",
            Kind::Smatrix => "smatrix",
            Kind::Fusion => "fusion",
            Kind::Characters => "characters",
            Kind::VerifyReport => "verify-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRecord {
    pub unitarity: f64,
    pub kappa: f64,
    pub rounding: f64,
}

impl From<Tolerances> for ToleranceRecord {
    fn from(t: Tolerances) -> Self {
        ToleranceRecord {
            unitarity: t.unitarity,
            kappa: t.kappa,
            rounding: t.rounding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub tolerances: ToleranceRecord,
}

impl Provenance {
    pub fn current(tol: Tolerances) -> Self {
        Provenance {
            tool: "parafuse".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            tolerances: tol.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub level: u32,
    pub kind: Kind,
    pub payload: Value,
    pub provenance: Provenance,
}

impl OutputDocument {
    pub fn new(level: u32, kind: Kind, payload: Value, tol: Tolerances) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION.into(),
            level,
            kind,
            payload,
            provenance: Provenance::current(tol),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}
