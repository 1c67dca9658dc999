use serde::{Deserialize, Serialize};

use super::reduce::Style;
use super::verilog::{TOOL, VERSION};
use crate::booth::TruncScheme;
use crate::error::EmitError;
use crate::params::{c_range, delta_bounds};

/// Machine-readable description of an emitted scheme. Exact integers are
/// decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    pub module: String,
    pub style: String,
    pub n: u32,
    pub k: u32,
    pub c: String,
    pub cstar: String,
    pub delta_lo: String,
    pub delta_hi: String,
    pub cmin: String,
    pub cmax: String,
    pub cstar_min: String,
    pub cstar_max: String,
}

pub fn certificate(scheme: &TruncScheme, style: Style, module: &str) -> Result<Certificate, EmitError> {
    let bounds = delta_bounds(scheme.k())?;
    let range = c_range(scheme.n(), scheme.k())?;
    Ok(Certificate {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        module: module.to_string(),
        style: style.to_string(),
        n: scheme.n(),
        k: scheme.k(),
        c: scheme.c().to_string(),
        cstar: scheme.c_star().to_string(),
        delta_lo: bounds.lo.to_string(),
        delta_hi: bounds.hi.to_string(),
        cmin: range.cmin.to_string(),
        cmax: range.cmax.to_string(),
        cstar_min: range.cstar_min.to_string(),
        cstar_max: range.cstar_max.to_string(),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn certificate_json(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate serializes");
    s.push('\n');
    s
}
