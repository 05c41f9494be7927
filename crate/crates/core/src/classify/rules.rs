//! Ordered rule list of the lexicon baseline. First matching rule wins:
//!
//! 1. too short, repeated-character, emoticon-only or noise token: not knowledge
//! 2. question mark or interrogative cue: inquiry
//! 3. first-person pronoun together with an experience cue: experience sharing
//! 4. at most six tokens, no verb cue, a dictionary or term-like token: concept noting
//! 5. supplement cue, or a dictionary term absent from the transcript context: supplementary knowledge
//! 6. opinion, positive or negative cue: interpretation, stance from the lexicon
//! 7. otherwise not knowledge

use std::collections::HashSet;

use super::{KnowledgeLabel, Stance, Theme};
use crate::lexicon::{Analyzed, Lexicon};
use crate::text::{self, is_cjk, TokenKind};

const MAX_CONCEPT_TOKENS: usize = 6;

pub fn lexicon_classify(lex: &Lexicon, text: &str, context: &str) -> KnowledgeLabel {
    let trimmed = text.trim();
    let a = Analyzed::new(trimmed);
    if is_noise(lex, trimmed, &a) {
        return KnowledgeLabel::NOT_KNOWLEDGE;
    }
    let knowledge = |theme| KnowledgeLabel::knowledge(theme, None).expect("non-interpretation theme");

    if trimmed.contains(['?', '\u{ff1f}']) || lex.any("inquiry", &a) {
        return knowledge(Theme::Inquiry);
    }
    if lex.any("first_person", &a) && lex.any("experience", &a) {
        return knowledge(Theme::ExperienceSharing);
    }
    let tokens = text::tokenize(trimmed);
    if !tokens.is_empty()
        && tokens.len() <= MAX_CONCEPT_TOKENS
        && !lex.any("verb", &a)
        && (lex.any("term", &a) || has_term_like_token(trimmed, &tokens))
    {
        return knowledge(Theme::ConceptNoting);
    }
    if lex.any("supplement", &a) || has_term_missing_from(lex, &a, context) {
        return knowledge(Theme::SupplementaryKnowledge);
    }
    if lex.any("opinion", &a) || lex.any("positive", &a) || lex.any("negative", &a) {
        return KnowledgeLabel::knowledge(Theme::Interpretation, Some(lexicon_stance(lex, trimmed)))
            .expect("interpretation with stance");
    }
    KnowledgeLabel::NOT_KNOWLEDGE
}

/// Sign of positive minus negative cue hits.
pub fn lexicon_stance(lex: &Lexicon, text: &str) -> Stance {
    let a = Analyzed::new(text);
    let pos = lex.count("positive", &a) as i64;
    let neg = lex.count("negative", &a) as i64;
    match (pos - neg).signum() {
        1 => Stance::Positive,
        -1 => Stance::Negative,
        _ => Stance::Neutral,
    }
}

fn is_noise(lex: &Lexicon, trimmed: &str, a: &Analyzed) -> bool {
    if trimmed.chars().count() < 2 {
        return true;
    }
    let content: Vec<char> = trimmed.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect();
    if content.is_empty() {
        // punctuation or emoticons only
        return true;
    }
    let distinct: HashSet<char> = content.iter().copied().collect();
    if content.len() >= 3 && distinct.len() <= 2 {
        return true;
    }
    let squashed: String = content.iter().collect();
    let noise = lex.word_set("noise");
    if noise.contains(&squashed) {
        return true;
    }
    !a.words.is_empty() && !content.iter().any(|&c| is_cjk(c)) && a.words.iter().all(|w| noise.contains(w))
}

fn has_term_like_token(src: &str, tokens: &[text::Token]) -> bool {
    tokens.iter().enumerate().any(|(i, t)| {
        if t.kind != TokenKind::Word {
            return false;
        }
        let orig = &src[t.start..t.end];
        let letters: Vec<char> = orig.chars().filter(|c| c.is_alphabetic()).collect();
        let has_digit = orig.chars().any(|c| c.is_ascii_digit());
        let upper = letters.iter().filter(|c| c.is_uppercase()).count();
        let first_upper = orig.chars().next().is_some_and(char::is_uppercase);
        let all_caps = letters.len() >= 2 && upper == letters.len();
        let inner_upper = orig.chars().skip(1).any(char::is_uppercase);
        all_caps || (has_digit && !letters.is_empty()) || (inner_upper && !all_caps) || (first_upper && i > 0)
    })
}

fn has_term_missing_from(lex: &Lexicon, a: &Analyzed, context: &str) -> bool {
    !context.trim().is_empty() && lex.any_absent_from("term", a, &Analyzed::new(context))
}
