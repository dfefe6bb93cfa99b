use expsum::charsum::{LReport, SumBoundReport};
use expsum::dwork::{BRange, TraceReport};
use expsum::ideals::CIReport;
use expsum::koszul::{PageTable, RegularSequence, Vanishing};
use expsum::CycInt;
use serde::Serialize;
use serde_json::Value;

use crate::config::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not decided, e.g. because a hypothesis was not verified.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleError {
    pub module: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub library_version: &'static str,
    pub command: &'static str,
    pub config: Settings,
    /// No randomness is used anywhere; kept for schema stability.
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub a: usize,
    pub q: u64,
    /// Low to high, leading coefficient included; absent for prime fields.
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyInfo {
    pub text: String,
    pub n: usize,
    pub delta: u64,
    pub delta_prime: Option<u64>,
    pub top: String,
    pub second: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorSection {
    /// `dim F_q[x]/(df)`, `null` when infinite.
    pub m_f: Option<u64>,
    pub isolated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingAttempt {
    pub e: usize,
    pub result: Vanishing,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SpectralSection {
    pub r_bound: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular_sequence: Option<RegularSequence>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pages: Vec<PageTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vanishing: Vec<VanishingAttempt>,
    /// Smallest scanned page vanishing off the top degree.
    pub degeneration_page: Option<usize>,
    /// `sum_r dim E_e^{r, n-r}` for `r <= r_bound` on that page.
    pub top_total: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumRow {
    pub i: usize,
    /// `q^{n i}`, as a decimal string.
    pub points: String,
    pub value: CycInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumsSection {
    pub rows: Vec<SumRow>,
    /// First `i` not computed because of the budget.
    pub budget_stop: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<SumBoundReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BRangeSection {
    pub range: BRange,
    pub nonempty: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolyInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milnor: Option<MilnorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sums: Option<SumsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lfunction: Option<LReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<CIReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dwork: Option<TraceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_range: Option<BRangeSection>,
    pub flags: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub errors: Vec<ModuleError>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, settings: &Settings) -> Self {
        Report {
            provenance: Provenance {
                tool: "expsum",
                version: env!("CARGO_PKG_VERSION"),
                library_version: expsum::VERSION,
                command,
                config: settings.clone(),
                seeds: Vec::new(),
            },
            field: None,
            polynomial: None,
            milnor: None,
            spectral: None,
            sums: None,
            lfunction: None,
            ci: None,
            dwork: None,
            b_range: None,
            flags: Vec::new(),
            verdicts: Vec::new(),
            errors: Vec::new(),
            pass: true,
        }
    }

    pub fn verdict(&mut self, check: &str, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.to_string(), status, detail: detail.into() });
    }

    pub fn error(&mut self, module: &'static str, e: impl std::fmt::Display) {
        self.errors.push(ModuleError { module, message: e.to_string() });
    }

    /// Sets `pass` from the verdicts and errors.
    pub fn finish(mut self) -> Self {
        self.pass = self.errors.is_empty() && self.verdicts.iter().all(|v| v.status != Status::Fail);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{prefix} = {s}\n"));
        return;
    }
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
