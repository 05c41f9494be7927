//! Tokenization and normalization shared by every text-facing stage.
//!
//! Latin-script text is split into lowercase word tokens (internal
//! apostrophes kept, so `D'Alembert's` stays one token). CJK runs carry no
//! word boundaries, so each run is emitted as overlapping character bigrams
//! (a single-character run is emitted as itself).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Cjk,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Normalized (lowercased, curly apostrophes folded) token text.
    pub text: String,
    /// Byte offsets into the source string.
    pub start: usize,
    pub end: usize,
    pub kind: TokenKind,
}

pub fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x3040..=0x30FF
        | 0x3400..=0x4DBF
        | 0x4E00..=0x9FFF
        | 0xAC00..=0xD7AF
        | 0xF900..=0xFAFF
        | 0x20000..=0x2A6DF)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() && !is_cjk(c)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Lowercase, fold curly apostrophes, collapse whitespace runs, trim.
pub fn normalize(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for c in s.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        if c == '\u{2019}' {
            out.push('\'');
        } else {
            out.extend(c.to_lowercase());
        }
    }
    out
}

fn normalize_token(s: &str) -> String {
    s.chars()
        .flat_map(|c| {
            let c = if c == '\u{2019}' { '\'' } else { c };
            c.to_lowercase()
        })
        .collect()
}

pub fn tokenize(s: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let byte_end = |i: usize| chars.get(i).map_or(s.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if is_word_char(c) {
            let start = i;
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if is_word_char(cj) {
                    j += 1;
                } else if is_apostrophe(cj) && chars.get(j + 1).is_some_and(|&(_, n)| is_word_char(n)) {
                    j += 2;
                } else {
                    break;
                }
            }
            let (b0, b1) = (chars[start].0, byte_end(j));
            tokens.push(Token {
                text: normalize_token(&s[b0..b1]),
                start: b0,
                end: b1,
                kind: TokenKind::Word,
            });
            i = j;
        } else if is_cjk(c) {
            let start = i;
            let mut j = i + 1;
            while j < chars.len() && is_cjk(chars[j].1) {
                j += 1;
            }
            if j - start == 1 {
                tokens.push(Token {
                    text: c.to_string(),
                    start: chars[start].0,
                    end: byte_end(j),
                    kind: TokenKind::Cjk,
                });
            } else {
                for k in start..j - 1 {
                    let (b0, b1) = (chars[k].0, byte_end(k + 2));
                    tokens.push(Token {
                        text: s[b0..b1].to_string(),
                        start: b0,
                        end: b1,
                        kind: TokenKind::Cjk,
                    });
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    tokens
}

/// Word-level tokens only (no CJK bigrams), used for phrase cue matching.
pub fn words(s: &str) -> Vec<String> {
    tokenize(s)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.text)
        .collect()
}

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Truncate to at most `max` chars, replacing the tail with an ellipsis
/// when anything was cut.
pub fn truncate_with_ellipsis(s: &str, max: usize) -> String {
    if char_len(s) <= max {
        return s.to_string();
    }
    let mut out: String = s.chars().take(max.saturating_sub(1)).collect();
    out.push('\u{2026}');
    out
}
