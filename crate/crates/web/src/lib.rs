use magiclim::scenario::{demo_paper_block, emit_report, fixture, run_scenario, run_scenario_text, Format, RunOptions};
use wasm_bindgen::prelude::*;

const MAX_M: usize = 6;

/// JSON report for the block grid of `m` rank-one projections at truncation `k`.
pub fn paper_block_report(m: usize, k: usize, gadgets: bool) -> Result<String, String> {
    if m == 0 || m > MAX_M {
        return Err(format!("m must lie in 1..={MAX_M}"));
    }
    let report = run_scenario(&demo_paper_block(m, k, gadgets), false, &RunOptions::default()).map_err(|e| e.to_string())?;
    Ok(emit_report(&report, Format::Json))
}

/// JSON report for the classical tower `C(S_1) ← … ← C(S_depth)`.
pub fn classical_tower_report(depth: usize) -> Result<String, String> {
    let s = fixture(&format!("classical-tower:{depth}")).map_err(|e| e.to_string())?;
    let report = run_scenario(&s, false, &RunOptions::default()).map_err(|e| e.to_string())?;
    Ok(emit_report(&report, Format::Json))
}

/// JSON report for a scenario given as JSON text.
pub fn scenario_report(text: &str) -> Result<String, String> {
    let report = run_scenario_text(text, &RunOptions::default()).map_err(|e| e.to_string())?;
    Ok(emit_report(&report, Format::Json))
}

#[wasm_bindgen]
pub fn paper_block_demo(m: usize, k: usize, gadgets: bool) -> Result<String, JsError> {
    paper_block_report(m, k, gadgets).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classical_tower(depth: usize) -> Result<String, JsError> {
    classical_tower_report(depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn magic_check(scenario: &str) -> Result<String, JsError> {
    scenario_report(scenario).map_err(|e| JsError::new(&e))
}
