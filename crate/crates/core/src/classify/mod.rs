//! Classification of q²-subsets of AG(3,q) by their undetermined lines.

pub mod combinadic;
mod fit;
mod hierarchy;
mod survey;
mod verdict;

pub use fit::{fit_quadric3, QuadricFit};
pub use hierarchy::{hierarchy_check, HierarchyReport, HierarchyViolation};
pub use survey::{survey_exhaustive, SurveyConfig, SurveyTally, Violation};
pub use verdict::{classify_3d, is_cylinder, Classifier3D, Verdict3D, VerdictTag, Witness};
