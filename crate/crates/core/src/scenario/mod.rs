mod fixtures;
mod literal;
mod report;
mod run;
mod spec;

pub use fixtures::{demo_paper_block, fixture, FIXTURE_NAMES};
pub use literal::ScenarioScalar;
pub use report::{emit_report, Check, Format, Report, Status, Summary};
pub use run::{resolve_mode, run_scenario, run_scenario_text, RunOptions};
pub use spec::{
    parse_scenario, ActionSection, AlgebraSpec, CoproductSpec, Expectation, GadgetSpec, HopfSection, KindSpec, MagicSection,
    MapSpec, Mode, Scenario, SystemSection,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input at {path}: {message}")]
    Input { path: String, message: String },
}
