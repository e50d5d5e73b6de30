//! Compliance tooling for the STREAM v1 reporting standard.
//!
//! The rubric is data ([`rubric`]); reports are structured documents ([`report`]).
//! [`grading`] combines presence checks with grader judgments into per-criterion
//! grades, [`agreement`] measures how consistently graders agree, and [`render`]
//! draws the resulting scorecards.

pub mod agreement;
pub mod error;
pub mod grading;
pub mod metadata;
pub mod report;
pub mod rubric;
pub mod render;
pub mod scaffold;

pub use rubric::Rubric;
