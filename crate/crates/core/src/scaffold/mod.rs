//! Fillable report skeletons and generated checklists.

mod checklist;
mod report;

pub use checklist::{export_checklist, parse_expanded_checklist, ChecklistFormat, Detail};
pub(crate) use report::descriptor_scaffold;
pub use report::{scaffold_document, scaffold_report};
