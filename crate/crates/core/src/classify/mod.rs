//! Knowledge-danmaku classification: taxonomy types, the rule-based
//! baseline, corpus-level orchestration and evaluation metrics.

pub mod backend;
pub mod metrics;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use backend::{classify_corpus, ClassifiedCorpus, ClassifierBackend, ClassifyError, ClassifyItem, ClassifyOptions};
pub use rules::{lexicon_classify, lexicon_stance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theme {
    Interpretation,
    Inquiry,
    ExperienceSharing,
    ConceptNoting,
    SupplementaryKnowledge,
}

impl Theme {
    /// Taxonomy table order.
    pub const ALL: [Theme; 5] = [
        Theme::Interpretation,
        Theme::Inquiry,
        Theme::ExperienceSharing,
        Theme::ConceptNoting,
        Theme::SupplementaryKnowledge,
    ];

    pub fn display_name(self) -> &'static str {
        match self {
            Theme::Interpretation => "Interpretation",
            Theme::Inquiry => "Inquiry",
            Theme::ExperienceSharing => "Experience sharing",
            Theme::ConceptNoting => "Concept noting",
            Theme::SupplementaryKnowledge => "Supplementary knowledge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Positive,
    Neutral,
    Negative,
}

/// The seven user-facing categories of knowledge danmaku, in legend order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisplayCategory {
    InterpretationPositive,
    InterpretationNeutral,
    InterpretationNegative,
    Inquiry,
    ExperienceSharing,
    ConceptNoting,
    SupplementaryKnowledge,
}

impl DisplayCategory {
    pub const ALL: [DisplayCategory; 7] = [
        DisplayCategory::InterpretationPositive,
        DisplayCategory::InterpretationNeutral,
        DisplayCategory::InterpretationNegative,
        DisplayCategory::Inquiry,
        DisplayCategory::ExperienceSharing,
        DisplayCategory::ConceptNoting,
        DisplayCategory::SupplementaryKnowledge,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            DisplayCategory::InterpretationPositive => "interpretation-positive",
            DisplayCategory::InterpretationNeutral => "interpretation-neutral",
            DisplayCategory::InterpretationNegative => "interpretation-negative",
            DisplayCategory::Inquiry => "inquiry",
            DisplayCategory::ExperienceSharing => "experience-sharing",
            DisplayCategory::ConceptNoting => "concept-noting",
            DisplayCategory::SupplementaryKnowledge => "supplementary-knowledge",
        }
    }

    pub fn legend_index(self) -> usize {
        self as usize
    }

    pub fn theme(self) -> Theme {
        match self {
            DisplayCategory::InterpretationPositive
            | DisplayCategory::InterpretationNeutral
            | DisplayCategory::InterpretationNegative => Theme::Interpretation,
            DisplayCategory::Inquiry => Theme::Inquiry,
            DisplayCategory::ExperienceSharing => Theme::ExperienceSharing,
            DisplayCategory::ConceptNoting => Theme::ConceptNoting,
            DisplayCategory::SupplementaryKnowledge => Theme::SupplementaryKnowledge,
        }
    }

    pub fn stance(self) -> Option<Stance> {
        match self {
            DisplayCategory::InterpretationPositive => Some(Stance::Positive),
            DisplayCategory::InterpretationNeutral => Some(Stance::Neutral),
            DisplayCategory::InterpretationNegative => Some(Stance::Negative),
            _ => None,
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            DisplayCategory::InterpretationPositive => "Interpretation (positive)",
            DisplayCategory::InterpretationNeutral => "Interpretation (neutral)",
            DisplayCategory::InterpretationNegative => "Interpretation (negative)",
            other => other.theme().display_name(),
        }
    }
}

impl fmt::Display for DisplayCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown display category `{0}`")]
pub struct UnknownCategory(pub String);

impl FromStr for DisplayCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DisplayCategory::ALL.into_iter().find(|c| c.slug() == s).ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

/// A set of display categories, stored as a 7-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CategorySet(u8);

impl CategorySet {
    pub const fn all() -> Self {
        CategorySet(0x7f)
    }

    pub const fn empty() -> Self {
        CategorySet(0)
    }

    pub fn contains(self, c: DisplayCategory) -> bool {
        self.0 & (1 << c.legend_index()) != 0
    }

    pub fn insert(&mut self, c: DisplayCategory) {
        self.0 |= 1 << c.legend_index();
    }

    pub fn iter(self) -> impl Iterator<Item = DisplayCategory> {
        DisplayCategory::ALL.into_iter().filter(move |&c| self.contains(c))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Parse a comma list of slugs; an empty string means every category.
    pub fn parse_list(s: &str) -> Result<Self, UnknownCategory> {
        if s.trim().is_empty() {
            return Ok(Self::all());
        }
        let mut set = Self::empty();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            set.insert(part.parse()?);
        }
        Ok(set)
    }
}

impl FromIterator<DisplayCategory> for CategorySet {
    fn from_iter<I: IntoIterator<Item = DisplayCategory>>(iter: I) -> Self {
        let mut s = CategorySet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

/// Outcome of classifying one comment: not knowledge, or one of the seven
/// display categories (theme plus stance for interpretation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LabelRepr", into = "LabelRepr")]
pub struct KnowledgeLabel {
    category: Option<DisplayCategory>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("a stance is required for interpretation and forbidden otherwise")]
    StanceMismatch,
    #[error("theme given for a non-knowledge label")]
    ThemeWithoutKnowledge,
    #[error("knowledge label without a theme")]
    MissingTheme,
}

impl KnowledgeLabel {
    pub const NOT_KNOWLEDGE: KnowledgeLabel = KnowledgeLabel { category: None };

    pub fn knowledge(theme: Theme, stance: Option<Stance>) -> Result<Self, LabelError> {
        let category = match (theme, stance) {
            (Theme::Interpretation, Some(Stance::Positive)) => DisplayCategory::InterpretationPositive,
            (Theme::Interpretation, Some(Stance::Neutral)) => DisplayCategory::InterpretationNeutral,
            (Theme::Interpretation, Some(Stance::Negative)) => DisplayCategory::InterpretationNegative,
            (Theme::Interpretation, None) | (_, Some(_)) => return Err(LabelError::StanceMismatch),
            (Theme::Inquiry, None) => DisplayCategory::Inquiry,
            (Theme::ExperienceSharing, None) => DisplayCategory::ExperienceSharing,
            (Theme::ConceptNoting, None) => DisplayCategory::ConceptNoting,
            (Theme::SupplementaryKnowledge, None) => DisplayCategory::SupplementaryKnowledge,
        };
        Ok(Self::from_category(category))
    }

    pub const fn from_category(category: DisplayCategory) -> Self {
        KnowledgeLabel { category: Some(category) }
    }

    pub fn is_knowledge(self) -> bool {
        self.category.is_some()
    }

    pub fn category(self) -> Option<DisplayCategory> {
        self.category
    }

    pub fn theme(self) -> Option<Theme> {
        self.category.map(DisplayCategory::theme)
    }

    pub fn stance(self) -> Option<Stance> {
        self.category.and_then(DisplayCategory::stance)
    }

    /// Wire form used by remote classifiers: a display slug or `none`.
    pub fn slug(self) -> &'static str {
        self.category.map_or("none", DisplayCategory::slug)
    }

    pub fn from_slug(s: &str) -> Result<Self, UnknownCategory> {
        if s == "none" {
            Ok(Self::NOT_KNOWLEDGE)
        } else {
            s.parse().map(Self::from_category)
        }
    }

    /// All eight label states.
    pub fn all_states() -> impl Iterator<Item = KnowledgeLabel> {
        std::iter::once(Self::NOT_KNOWLEDGE).chain(DisplayCategory::ALL.into_iter().map(Self::from_category))
    }
}

#[derive(Serialize, Deserialize)]
struct LabelRepr {
    is_knowledge: bool,
    #[serde(default)]
    theme: Option<Theme>,
    #[serde(default)]
    stance: Option<Stance>,
}

impl From<KnowledgeLabel> for LabelRepr {
    fn from(l: KnowledgeLabel) -> Self {
        LabelRepr { is_knowledge: l.is_knowledge(), theme: l.theme(), stance: l.stance() }
    }
}

impl TryFrom<LabelRepr> for KnowledgeLabel {
    type Error = LabelError;

    fn try_from(r: LabelRepr) -> Result<Self, Self::Error> {
        match (r.is_knowledge, r.theme) {
            (false, None) if r.stance.is_none() => Ok(Self::NOT_KNOWLEDGE),
            (false, _) => Err(LabelError::ThemeWithoutKnowledge),
            (true, None) => Err(LabelError::MissingTheme),
            (true, Some(theme)) => Self::knowledge(theme, r.stance),
        }
    }
}
