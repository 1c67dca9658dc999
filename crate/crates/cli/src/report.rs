//! JSON run reports. Exact integers that can exceed 64 bits are decimal
//! strings; the layout is described by `schema/run_report.schema.json`.

use fbooth::params::{BruteBounds, DeltaBounds, ParamRow};
use fbooth::verify::Verdict;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub scheme: Option<SchemeInfo>,
    pub pass: bool,
    pub elapsed_ms: f64,
    pub seeds: Vec<u64>,
    pub result: Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeInfo {
    pub n: u32,
    pub k: u32,
    pub c_star: String,
    pub c: String,
    /// Whether `c` lies in the faithful range.
    pub validated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: u32,
    pub k_star: u32,
    pub c_star_min: String,
    pub c_star_max: String,
    pub cmin: String,
    pub cmax: String,
    pub delta_lo: String,
    pub delta_hi: String,
}

impl From<&ParamRow> for Row {
    fn from(r: &ParamRow) -> Self {
        Row {
            n: r.n,
            k_star: r.k_star,
            c_star_min: r.c_star_min.to_string(),
            c_star_max: r.c_star_max.to_string(),
            cmin: (r.c_star_min.clone() << r.k_star).to_string(),
            cmax: (r.c_star_max.clone() << r.k_star).to_string(),
            delta_lo: r.delta_lo.to_string(),
            delta_hi: r.delta_hi.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Brute {
    pub lo: String,
    pub hi: String,
    pub argmin: (u64, u64),
    pub argmax: (u64, u64),
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmittedFile {
    pub path: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Params {
        row: Row,
    },
    Bounds {
        k: u32,
        lo: String,
        hi: String,
        brute: Option<Brute>,
    },
    Verify {
        mode: String,
        faithful: Verdict,
        commutativity: Verdict,
    },
    Emit {
        style: String,
        module: String,
        testbench: String,
        files: Vec<EmittedFile>,
    },
    Sweep {
        rows: Vec<Row>,
    },
}

pub fn bounds_body(closed: &DeltaBounds, brute: Option<&BruteBounds>) -> Body {
    Body::Bounds {
        k: closed.k,
        lo: closed.lo.to_string(),
        hi: closed.hi.to_string(),
        brute: brute.map(|b| Brute {
            lo: b.lo.to_string(),
            hi: b.hi.to_string(),
            argmin: b.argmin,
            argmax: b.argmax,
            agree: closed.lo.to_string() == b.lo.to_string() && closed.hi.to_string() == b.hi.to_string(),
        }),
    }
}
