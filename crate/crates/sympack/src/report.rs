//! Machine-readable verification reports.
//!
//! Reports are versioned (`schema: 1`), serialize floating-point values with
//! 17 significant digits (so that parsing recovers the exact `f64`), and
//! round-trip through JSON bit-identically.  Wall-clock measurements live in
//! a dedicated `timing` field so that two runs with the same seed agree byte
//! for byte everywhere else.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Serialize an `f64` as a JSON number with 17 significant digits.
pub(crate) fn json_number(v: f64) -> serde_json::Number {
    // 17 significant digits round-trip any finite f64 exactly.
    serde_json::Number::from_string_unchecked(format!("{v:.16e}"))
}

/// `serde(with = …)` adapter: one `f64`, 17 significant digits.
pub mod f64_17 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            super::json_number(*v).serialize(s)
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }
}

/// `serde(with = …)` adapter: a vector of `f64`, 17 significant digits each.
pub mod vec_f64_17 {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            if x.is_finite() {
                seq.serialize_element(&super::json_number(*x))?;
            } else {
                seq.serialize_element(x)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<f64>::deserialize(d)
    }
}

/// `serde(with = …)` adapter: optional vector of `f64`, 17 digits each.
pub mod opt_vec_f64_17 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    struct Wrap<'a>(&'a [f64]);
    impl Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::vec_f64_17::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(inner) => s.serialize_some(&Wrap(inner)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        Option::<Vec<f64>>::deserialize(d)
    }
}

/// Outcome of a single verification check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One gate of a verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    /// The quantity compared against the tolerance (defect, |error|, count…).
    #[serde(with = "f64_17")]
    pub measured: f64,
    #[serde(with = "f64_17")]
    pub tolerance: f64,
    pub samples: u64,
    pub seed: u64,
    /// Worst-offending sample (domain or ambient coordinates); always present
    /// on failed gates.
    #[serde(with = "opt_vec_f64_17", default, skip_serializing_if = "Option::is_none")]
    pub argmax_sample: Option<Vec<f64>>,
    /// Free-form context (e.g. which ball, which sub-quantity).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            status: if measured <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            tolerance,
            samples: 0,
            seed: 0,
            argmax_sample: None,
            detail: None,
        }
    }

    pub fn with_samples(mut self, samples: u64, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn with_argmax(mut self, sample: Vec<f64>) -> Self {
        self.argmax_sample = Some(sample);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status: CheckStatus::Skipped,
            measured: 0.0,
            tolerance: 0.0,
            samples: 0,
            seed: 0,
            argmax_sample: None,
            detail: Some(why.into()),
        }
    }
}

/// Wall-clock data, quarantined from the deterministic payload.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportTiming {
    /// Unix timestamp (milliseconds) at report creation.
    pub generated_unix_ms: u64,
    /// Per-check wall time in seconds, parallel to `checks`.
    #[serde(with = "vec_f64_17")]
    pub check_wall_s: Vec<f64>,
}

/// Full result of a verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub artifact_version: String,
    pub packing: String,
    pub seed: u64,
    pub construction_flags: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub timing: ReportTiming,
}

impl VerificationReport {
    pub fn new(packing: impl Into<String>, seed: u64, construction_flags: Vec<String>) -> Self {
        VerificationReport {
            schema: 1,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            packing: packing.into(),
            seed,
            construction_flags,
            checks: Vec::new(),
            timing: ReportTiming {
                generated_unix_ms: std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_millis() as u64)
                    .unwrap_or(0),
                check_wall_s: Vec::new(),
            },
        }
    }

    /// Record a check together with its wall time.
    pub fn push(&mut self, record: CheckRecord, wall_s: f64) {
        debug_assert!(
            record.status != CheckStatus::Fail || record.argmax_sample.is_some(),
            "failed gate '{}' must carry its argmax sample",
            record.name
        );
        self.checks.push(record);
        self.timing.check_wall_s.push(wall_s);
    }

    /// Run `f`, time it, and record the returned check.
    pub fn run(&mut self, f: impl FnOnce() -> CheckRecord) {
        let t0 = std::time::Instant::now();
        let rec = f();
        self.push(rec, t0.elapsed().as_secs_f64());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: VerificationReport = serde_json::from_str(s)?;
        if r.schema != 1 {
            return Err(Error::Parameter(format!(
                "unsupported report schema {}",
                r.schema
            )));
        }
        Ok(r)
    }

    /// The serialization used for determinism comparisons: identical command
    /// and seed must reproduce these bytes exactly, so all wall-clock data is
    /// replaced by its default.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut clone = self.clone();
        clone.timing = ReportTiming::default();
        clone.to_json()
    }
}
