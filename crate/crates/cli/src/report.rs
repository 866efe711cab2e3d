//! Machine-readable reports. Identical jobs must yield byte-identical
//! reports, so everything here serializes with a fixed field order, the
//! randomized batteries run under the seed echoed in the provenance block,
//! and wall-clock time is deliberately kept out (the binary prints it to
//! stderr instead).

use hil_core::{Leg, LegStatus, ProbeOptions, Truncation, Verdict};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct LegJson {
    pub status: &'static str,
    pub evidence: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn status_str(status: LegStatus) -> &'static str {
    match status {
        LegStatus::Holds => "holds",
        LegStatus::Fails => "fails",
        LegStatus::Inconclusive => "inconclusive",
    }
}

impl From<&Leg> for LegJson {
    fn from(leg: &Leg) -> Self {
        LegJson {
            status: status_str(leg.status),
            evidence: leg.evidence.clone(),
            witness: leg.witness.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct TruncationJson {
    pub order: usize,
    pub radii: Vec<f64>,
    pub angles: usize,
    pub tolerances: Vec<(String, f64)>,
}

impl From<&Truncation> for TruncationJson {
    fn from(t: &Truncation) -> Self {
        TruncationJson {
            order: t.order,
            radii: t.radii.clone(),
            angles: t.angles,
            tolerances: t.tolerances.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub claim: String,
    pub criterion: LegJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<LegJson>,
    pub truncation: TruncationJson,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        VerdictJson {
            claim: v.claim.clone(),
            criterion: (&v.criterion).into(),
            direct: v.direct.as_ref().map(LegJson::from),
            truncation: (&v.truncation).into(),
        }
    }
}

#[derive(Serialize)]
pub struct Provenance {
    pub order: usize,
    pub grid_radii: Vec<f64>,
    pub grid_angles: usize,
    pub battery_degree: usize,
    pub tol_eq: f64,
    pub tol_sup: f64,
    pub seed: u64,
}

impl Provenance {
    pub fn from_options(opts: &ProbeOptions) -> Self {
        Provenance {
            order: opts.order,
            grid_radii: opts.grid.radii().to_vec(),
            grid_angles: opts.grid.angles(),
            battery_degree: opts.battery_degree,
            tol_eq: opts.tol_eq,
            tol_sup: opts.tol_sup,
            seed: opts.seed,
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub job: Value,
    pub verdicts: Vec<VerdictJson>,
    /// Optional plottable sequence (orbit gaps, operator-norm ratios, …).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Sequence>,
    pub provenance: Provenance,
}

#[derive(Serialize)]
pub struct Sequence {
    /// What the value column holds.
    pub value: &'static str,
    pub rows: Vec<(usize, f64)>,
}

impl Report {
    pub fn new(job: Value, verdicts: Vec<VerdictJson>, opts: &ProbeOptions) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            job,
            verdicts,
            sequence: None,
            provenance: Provenance::from_options(opts),
        }
    }

    pub fn with_sequence(mut self, value: &'static str, rows: Vec<(usize, f64)>) -> Self {
        self.sequence = Some(Sequence { value, rows });
        self
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }

    /// CSV view of the sequence (columns: n, value).
    pub fn render_csv(&self) -> Option<String> {
        let seq = self.sequence.as_ref()?;
        let mut out = String::from("n,value\n");
        for (n, v) in &seq.rows {
            out.push_str(&format!("{n},{v}\n"));
        }
        Some(out)
    }

    /// Process exit code: 0 when every verdict is conclusive (holds or
    /// fails both count as "computed"), 3 when any leg stayed inconclusive.
    pub fn exit_code(&self) -> u8 {
        let undecided = self
            .verdicts
            .iter()
            .any(|v| v.criterion.status == "inconclusive");
        if undecided {
            3
        } else {
            0
        }
    }
}
