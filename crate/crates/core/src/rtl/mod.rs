//! Gate-level reduction of partial-product arrays, Verilog emission and
//! self-checking testbenches.

mod certificate;
mod netlist;
mod reduce;
mod testbench;
mod verilog;

pub use certificate::{certificate, certificate_json, Certificate};
pub use netlist::{netlist_evaluate, netlist_output, Cell, CellKind, Netlist, SignalId, Stage};
pub use reduce::{dadda_limits, reduce_to_netlist, Style};
pub use testbench::{emit_testbench, testbench_vectors, Vectors, EXHAUSTIVE_TB_MAX_N};
pub use verilog::{emit_hdl, is_identifier, netlist_to_verilog, parse_verilog, scheme_header, TOOL, VERSION};
