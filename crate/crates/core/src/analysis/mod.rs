//! Entity coverage of danmaku versus ordinary comments and the paired
//! signed-rank test comparing them.

pub mod coverage;
pub mod wilcoxon;

pub use coverage::{coverage_study, entity_coverage, CoveragePair, CoverageStudy, StudyCorpus, StudyError, StudyFile};
pub use wilcoxon::{wilcoxon_signed_rank, TestMethod, WilcoxonError, WilcoxonResult, EXACT_MAX_N};
