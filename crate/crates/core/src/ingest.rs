//! Parsing of raw danmaku exports, transcripts and video metadata.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::Event;
use quick_xml::Reader;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Comments may trail the nominal duration by this much (player tail posts).
pub const FORWARD_SLACK_SECS: f64 = 5.0;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed input at byte {offset}: {message}")]
    Parse { offset: u64, message: String },
    #[error("input contains no usable records")]
    EmptyInput,
    #[error("unknown transcript format `{0}` (expected `srt` or `lines-json`)")]
    UnknownFormat(String),
    #[error("line {line}: cannot parse timestamp `{value}`")]
    Timestamp { line: usize, value: String },
    #[error("transcript entry {index}: {message}")]
    Validation { index: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("video id mismatch: metadata says `{meta}` but danmaku file says `{danmaku}`")]
    VideoIdMismatch { meta: String, danmaku: String },
    #[error("invalid metadata: {0}")]
    Meta(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DanmakuComment {
    pub id: String,
    pub video_id: String,
    /// Video time in seconds.
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posted_at: Option<i64>,
    pub text: String,
    pub display_mode: u8,
    pub color: u32,
    pub user_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptLine {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoMeta {
    pub video_id: String,
    pub title: String,
    pub duration: f64,
    pub domain_tag: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DanmakuParse {
    pub comments: Vec<DanmakuComment>,
    /// `<d>` elements rejected for bad attributes, negative time, empty text
    /// or a duplicate row id.
    pub skipped: usize,
    /// Video id announced by the export (`<chatid>`), if any.
    pub video_id: Option<String>,
}

pub fn parse_danmaku_xml(bytes: &[u8]) -> Result<DanmakuParse, IngestError> {
    let src = std::str::from_utf8(bytes).map_err(|e| IngestError::Parse {
        offset: e.valid_up_to() as u64,
        message: "invalid UTF-8".into(),
    })?;
    let mut reader = Reader::from_str(src);
    reader.config_mut().check_end_names = true;

    let parse_err = |reader: &Reader<&[u8]>, e: &dyn std::fmt::Display| IngestError::Parse {
        offset: reader.error_position(),
        message: e.to_string(),
    };

    let mut depth = 0usize;
    let mut saw_element = false;
    let mut in_chatid = false;
    let mut video_id = None;
    // (p attribute, accumulated text) of the <d> being read
    let mut current: Option<(Option<String>, String)> = None;
    let mut raw: Vec<(Option<String>, String)> = Vec::new();

    loop {
        match reader.read_event() {
            Err(e) => return Err(parse_err(&reader, &e)),
            Ok(Event::Eof) => break,
            Ok(Event::Start(e)) => {
                depth += 1;
                saw_element = true;
                match e.name().as_ref() {
                    b"d" => {
                        let p = e
                            .try_get_attribute("p")
                            .map_err(|err| parse_err(&reader, &err))?
                            .map(|a| a.unescape_value().map(|v| v.into_owned()))
                            .transpose()
                            .map_err(|err| parse_err(&reader, &err))?;
                        current = Some((p, String::new()));
                    }
                    b"chatid" => in_chatid = true,
                    _ => {}
                }
            }
            Ok(Event::Empty(e)) => {
                saw_element = true;
                if e.name().as_ref() == b"d" {
                    raw.push((None, String::new()));
                }
            }
            Ok(Event::End(e)) => {
                depth = depth.saturating_sub(1);
                match e.name().as_ref() {
                    b"d" => {
                        if let Some(d) = current.take() {
                            raw.push(d);
                        }
                    }
                    b"chatid" => in_chatid = false,
                    _ => {}
                }
            }
            Ok(Event::Text(t)) => {
                let s = t.decode().map_err(|err| parse_err(&reader, &err))?;
                if let Some((_, buf)) = current.as_mut() {
                    buf.push_str(&s);
                } else if in_chatid {
                    let id = s.trim();
                    if !id.is_empty() {
                        video_id = Some(id.to_string());
                    }
                }
            }
            Ok(Event::CData(t)) => {
                if let Some((_, buf)) = current.as_mut() {
                    buf.push_str(&t.decode().map_err(|err| parse_err(&reader, &err))?);
                }
            }
            Ok(Event::GeneralRef(r)) => {
                let resolved = match r.resolve_char_ref().map_err(|err| parse_err(&reader, &err))? {
                    Some(c) => c.to_string(),
                    None => {
                        let name = r.decode().map_err(|err| parse_err(&reader, &err))?;
                        resolve_predefined_entity(&name)
                            .ok_or_else(|| parse_err(&reader, &format!("unknown entity &{name};")))?
                            .to_string()
                    }
                };
                if let Some((_, buf)) = current.as_mut() {
                    buf.push_str(&resolved);
                }
            }
            Ok(_) => {}
        }
    }
    if !saw_element {
        return Err(IngestError::Parse { offset: 0, message: "no XML element found".into() });
    }
    if depth != 0 {
        return Err(IngestError::Parse {
            offset: src.len() as u64,
            message: "unexpected end of document (unclosed element)".into(),
        });
    }

    let mut comments = Vec::with_capacity(raw.len());
    let mut seen = std::collections::HashSet::new();
    let mut skipped = 0;
    for (p, text) in raw {
        match p.as_deref().and_then(|p| comment_from_attrs(p, &text)) {
            Some(c) if seen.insert(c.id.clone()) => comments.push(c),
            _ => skipped += 1,
        }
    }
    if comments.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    if let Some(id) = &video_id {
        for c in &mut comments {
            c.video_id = id.clone();
        }
    }
    // stable: equal timestamps keep document order
    comments.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(DanmakuParse { comments, skipped, video_id })
}

/// `p="t,mode,fontsize,color,posted,pool,userhash,rowid"`
fn comment_from_attrs(p: &str, text: &str) -> Option<DanmakuComment> {
    let fields: Vec<&str> = p.split(',').map(str::trim).collect();
    if fields.len() < 8 {
        return None;
    }
    let t: f64 = fields[0].parse().ok()?;
    if !t.is_finite() || t < 0.0 {
        return None;
    }
    let display_mode: u8 = fields[1].parse().ok()?;
    let color: u32 = fields[3].parse().ok()?;
    if color > 0xFF_FFFF {
        return None;
    }
    let posted_at = fields[4].parse::<i64>().ok().filter(|&v| v > 0);
    let text = text.trim();
    let id = fields[7];
    if text.is_empty() || id.is_empty() {
        return None;
    }
    Some(DanmakuComment {
        id: id.to_string(),
        video_id: String::new(),
        t,
        posted_at,
        text: text.to_string(),
        display_mode,
        color,
        user_hash: fields[6].to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranscriptFormat {
    Srt,
    LinesJson,
}

impl FromStr for TranscriptFormat {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "srt" => Ok(Self::Srt),
            "lines-json" | "json" => Ok(Self::LinesJson),
            other => Err(IngestError::UnknownFormat(other.to_string())),
        }
    }
}

impl TranscriptFormat {
    pub fn from_path(path: &Path) -> Result<Self, IngestError> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
        ext.parse()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptParse {
    pub lines: Vec<TranscriptLine>,
    /// Human-readable notes about overlapping cues.
    pub warnings: Vec<String>,
}

pub fn parse_transcript(bytes: &[u8], format: TranscriptFormat) -> Result<TranscriptParse, IngestError> {
    let src = std::str::from_utf8(bytes).map_err(|e| IngestError::Parse {
        offset: e.valid_up_to() as u64,
        message: "invalid UTF-8".into(),
    })?;
    let src = src.strip_prefix('\u{feff}').unwrap_or(src);
    if src.trim().is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut raw = match format {
        TranscriptFormat::Srt => parse_srt(src)?,
        TranscriptFormat::LinesJson => parse_lines_json(src)?,
    };
    if raw.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    for (label, line) in &raw {
        if !(line.start.is_finite() && line.end.is_finite()) || line.start < 0.0 {
            return Err(IngestError::Validation { index: *label, message: "invalid time range".into() });
        }
        if line.end <= line.start {
            return Err(IngestError::Validation {
                index: *label,
                message: format!("end {} is not after start {}", line.end, line.start),
            });
        }
        if line.text.trim().is_empty() {
            return Err(IngestError::Validation { index: *label, message: "empty text".into() });
        }
    }
    raw.sort_by(|a, b| a.1.start.total_cmp(&b.1.start));

    let mut warnings = Vec::new();
    let mut max_end = f64::NEG_INFINITY;
    let mut prev_label = 0;
    let mut lines = Vec::with_capacity(raw.len());
    for (i, (label, mut line)) in raw.into_iter().enumerate() {
        if line.start < max_end {
            warnings.push(format!("entry {label} overlaps entry {prev_label}"));
        }
        if line.end > max_end {
            max_end = line.end;
            prev_label = label;
        }
        line.index = i;
        lines.push(line);
    }
    Ok(TranscriptParse { lines, warnings })
}

fn parse_srt_time(s: &str) -> Option<f64> {
    let (hms, ms) = s.trim().split_once(',')?;
    let mut parts = hms.split(':');
    let h: u64 = parts.next()?.parse().ok()?;
    let m: u64 = parts.next()?.parse().ok()?;
    let sec: u64 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || m >= 60 || sec >= 60 || ms.len() != 3 {
        return None;
    }
    let ms: u64 = ms.parse().ok()?;
    Some((h * 3600 + m * 60 + sec) as f64 + ms as f64 / 1000.0)
}

/// Returns `(sequence number, line)` pairs in file order.
fn parse_srt(src: &str) -> Result<Vec<(usize, TranscriptLine)>, IngestError> {
    let lines: Vec<&str> = src.lines().map(|l| l.trim_end_matches('\r')).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() {
            i += 1;
            continue;
        }
        let seq_line = i + 1;
        let seq: usize = lines[i].trim().parse().map_err(|_| IngestError::Parse {
            offset: byte_offset_of_line(src, i),
            message: format!("line {seq_line}: expected cue number, found `{}`", lines[i].trim()),
        })?;
        i += 1;
        let timing = lines.get(i).copied().unwrap_or("");
        let (a, b) = timing
            .split_once("-->")
            .ok_or_else(|| IngestError::Timestamp { line: i + 1, value: timing.to_string() })?;
        // anything after the end stamp (positioning hints) is ignored
        let b = b.split_whitespace().next().unwrap_or("");
        let start = parse_srt_time(a).ok_or_else(|| IngestError::Timestamp { line: i + 1, value: a.trim().to_string() })?;
        let end = parse_srt_time(b).ok_or_else(|| IngestError::Timestamp { line: i + 1, value: b.to_string() })?;
        i += 1;
        let mut text = Vec::new();
        while i < lines.len() && !lines[i].trim().is_empty() {
            text.push(lines[i].trim());
            i += 1;
        }
        out.push((seq, TranscriptLine { index: 0, start, end, text: text.join("\n") }));
    }
    Ok(out)
}

fn byte_offset_of_line(src: &str, line: usize) -> u64 {
    src.split_inclusive('\n').take(line).map(str::len).sum::<usize>() as u64
}

#[derive(Deserialize)]
struct JsonLine {
    start: f64,
    end: f64,
    text: String,
}

fn parse_lines_json(src: &str) -> Result<Vec<(usize, TranscriptLine)>, IngestError> {
    let parsed: Vec<JsonLine> = serde_json::from_str(src).map_err(|e| IngestError::Parse {
        offset: byte_offset_of_line(src, e.line().saturating_sub(1)) + e.column().saturating_sub(1) as u64,
        message: e.to_string(),
    })?;
    Ok(parsed
        .into_iter()
        .enumerate()
        .map(|(i, l)| (i, TranscriptLine { index: 0, start: l.start, end: l.end, text: l.text.trim().to_string() }))
        .collect())
}

pub fn parse_meta(bytes: &[u8]) -> Result<VideoMeta, IngestError> {
    let meta: VideoMeta = serde_json::from_slice(bytes).map_err(|e| IngestError::Parse {
        offset: 0,
        message: format!("metadata line {}: {e}", e.line()),
    })?;
    if !(meta.duration.is_finite() && meta.duration > 0.0) {
        return Err(IngestError::Meta(format!("duration must be > 0, got {}", meta.duration)));
    }
    if meta.video_id.trim().is_empty() {
        return Err(IngestError::Meta("empty video_id".into()));
    }
    Ok(meta)
}

/// Cross-validated inputs for one video.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub meta: VideoMeta,
    pub lines: Vec<TranscriptLine>,
    pub comments: Vec<DanmakuComment>,
    pub warnings: Vec<String>,
    /// SHA-256 over the raw input files, hex encoded.
    pub input_hash: String,
}

impl Corpus {
    /// Build a corpus from already-read file contents.
    pub fn from_bytes(
        danmaku: &[u8],
        transcript: &[u8],
        format: TranscriptFormat,
        meta: &[u8],
    ) -> Result<Self, IngestError> {
        let meta_parsed = parse_meta(meta)?;
        let parsed = parse_danmaku_xml(danmaku)?;
        let transcript_parsed = parse_transcript(transcript, format)?;

        if let Some(id) = &parsed.video_id {
            if *id != meta_parsed.video_id {
                return Err(IngestError::VideoIdMismatch { meta: meta_parsed.video_id, danmaku: id.clone() });
            }
        }
        let mut warnings = transcript_parsed.warnings;
        if parsed.skipped > 0 {
            warnings.push(format!("{} malformed danmaku element(s) skipped", parsed.skipped));
        }
        let limit = meta_parsed.duration + FORWARD_SLACK_SECS;
        let mut comments = Vec::with_capacity(parsed.comments.len());
        for mut c in parsed.comments {
            if c.t > limit {
                warnings.push(format!("comment {} at t={} exceeds duration {} (+{FORWARD_SLACK_SECS}s); dropped", c.id, c.t, meta_parsed.duration));
                continue;
            }
            c.video_id = meta_parsed.video_id.clone();
            comments.push(c);
        }

        let mut hasher = Sha256::new();
        for part in [danmaku, transcript, meta] {
            hasher.update((part.len() as u64).to_le_bytes());
            hasher.update(part);
        }
        Ok(Corpus {
            meta: meta_parsed,
            lines: transcript_parsed.lines,
            comments,
            warnings,
            input_hash: hex::encode(hasher.finalize()),
        })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, IngestError> {
    fs::read(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })
}

/// Load and cross-validate the three input files of one video. The
/// transcript format is taken from the file extension.
pub fn load_corpus(danmaku_path: &Path, transcript_path: &Path, meta_path: &Path) -> Result<Corpus, IngestError> {
    let format = TranscriptFormat::from_path(transcript_path)?;
    let danmaku = read(danmaku_path)?;
    let transcript = read(transcript_path)?;
    let meta = read(meta_path)?;
    Corpus::from_bytes(&danmaku, &transcript, format, &meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xml(body: &str) -> String {
        format!("<?xml version=\"1.0\" encoding=\"UTF-8\"?><i><chatid>vid1</chatid>{body}</i>")
    }

    #[test]
    fn parses_declared_attribute_layout() {
        let doc = xml(r#"<d p="12.5,1,25,16777215,1609459200,0,ab12,1">好耳熟</d>"#);
        let out = parse_danmaku_xml(doc.as_bytes()).unwrap();
        assert_eq!(out.skipped, 0);
        let c = &out.comments[0];
        assert_eq!(c.t, 12.5);
        assert_eq!(c.color, 0xFFFFFF);
        assert_eq!(c.text, "好耳熟");
        assert_eq!(c.id, "1");
        assert_eq!(c.user_hash, "ab12");
        assert_eq!(c.posted_at, Some(1609459200));
        assert_eq!(c.video_id, "vid1");
    }

    #[test]
    fn negative_time_is_skipped() {
        let doc = xml(concat!(
            r#"<d p="-3,1,25,0,0,0,u,1">bad</d>"#,
            r#"<d p="3,1,25,0,0,0,u,2">good</d>"#
        ));
        let out = parse_danmaku_xml(doc.as_bytes()).unwrap();
        assert_eq!(out.skipped, 1);
        assert_eq!(out.comments.len(), 1);
    }

    #[test]
    fn output_sorted_by_time_and_stable() {
        let doc = xml(concat!(
            r#"<d p="30.0,1,25,0,0,0,u,1">late</d>"#,
            r#"<d p="5.0,1,25,0,0,0,u,2">early</d>"#,
            r#"<d p="30.0,1,25,0,0,0,u,3">late too</d>"#
        ));
        let out = parse_danmaku_xml(doc.as_bytes()).unwrap();
        let order: Vec<_> = out.comments.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(order, ["2", "1", "3"]);
    }

    #[test]
    fn entities_are_decoded() {
        let doc = xml(r#"<d p="1,1,25,0,0,0,u,1">a &lt; b &amp;&#x41;</d>"#);
        let out = parse_danmaku_xml(doc.as_bytes()).unwrap();
        assert_eq!(out.comments[0].text, "a < b &A");
    }

    #[test]
    fn not_xml_reports_offset() {
        match parse_danmaku_xml(b"<i><d p=\"1\">x</i>") {
            Err(IngestError::Parse { offset, .. }) => assert!(offset > 0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_danmaku_xml(b"just text"), Err(IngestError::Parse { .. })));
        assert!(matches!(parse_danmaku_xml(b"<i><d>"), Err(IngestError::Parse { .. })));
        assert!(matches!(parse_danmaku_xml(&[0x3c, 0xff, 0xfe]), Err(IngestError::Parse { offset: 1, .. })));
    }

    #[test]
    fn zero_valid_elements_is_empty_input() {
        let doc = xml(r#"<d p="x,1,25,0,0,0,u,1">bad</d>"#);
        assert!(matches!(parse_danmaku_xml(doc.as_bytes()), Err(IngestError::EmptyInput)));
        assert!(matches!(parse_danmaku_xml(b"<i></i>"), Err(IngestError::EmptyInput)));
    }

    #[test]
    fn duplicate_row_ids_are_skipped() {
        let doc = xml(concat!(r#"<d p="1,1,25,0,0,0,u,7">a</d>"#, r#"<d p="2,1,25,0,0,0,u,7">b</d>"#));
        let out = parse_danmaku_xml(doc.as_bytes()).unwrap();
        assert_eq!(out.comments.len(), 1);
        assert_eq!(out.skipped, 1);
    }

    #[test]
    fn srt_block() {
        let out = parse_transcript(b"1\n00:00:01,000 --> 00:00:03,500\nhello\n", TranscriptFormat::Srt).unwrap();
        assert_eq!(out.lines, vec![TranscriptLine { index: 0, start: 1.0, end: 3.5, text: "hello".into() }]);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn srt_crlf_bom_and_multiline() {
        let src = "\u{feff}1\r\n00:01:00,250 --> 00:01:02,000\r\nline one\r\nline two\r\n\r\n";
        let out = parse_transcript(src.as_bytes(), TranscriptFormat::Srt).unwrap();
        assert_eq!(out.lines[0].start, 60.25);
        assert_eq!(out.lines[0].text, "line one\nline two");
    }

    #[test]
    fn empty_transcript_is_empty_input() {
        assert!(matches!(parse_transcript(b"", TranscriptFormat::Srt), Err(IngestError::EmptyInput)));
        assert!(matches!(parse_transcript(b"[]", TranscriptFormat::LinesJson), Err(IngestError::EmptyInput)));
    }

    #[test]
    fn end_before_start_names_index() {
        let src = "1\n00:00:01,000 --> 00:00:02,000\nok\n\n7\n00:00:05,000 --> 00:00:04,000\nbad\n";
        match parse_transcript(src.as_bytes(), TranscriptFormat::Srt) {
            Err(IngestError::Validation { index, .. }) => assert_eq!(index, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_timestamp_reports_line_number() {
        let src = "1\n00:00:01,000 --> 00:00:02,000\nok\n\n2\n00:00:xx,000 --> 00:00:04,000\nbad\n";
        match parse_transcript(src.as_bytes(), TranscriptFormat::Srt) {
            Err(IngestError::Timestamp { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overlap_is_a_warning() {
        let src = r#"[{"start": 5, "end": 9, "text": "b"}, {"start": 0, "end": 6, "text": "a"}]"#;
        let out = parse_transcript(src.as_bytes(), TranscriptFormat::LinesJson).unwrap();
        assert_eq!(out.lines[0].text, "a");
        assert_eq!(out.lines[1].index, 1);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn unknown_format_tag() {
        assert!(matches!("vtt".parse::<TranscriptFormat>(), Err(IngestError::UnknownFormat(_))));
    }

    fn meta_json(id: &str, duration: f64) -> String {
        format!(r#"{{"video_id": "{id}", "title": "t", "duration": {duration}, "domain_tag": "biology"}}"#)
    }

    const SRT: &str = "1\n00:00:00,000 --> 00:00:10,000\nhello there\n";

    #[test]
    fn comments_past_slack_are_dropped() {
        let danmaku = "<i><chatid>a</chatid><d p=\"10,1,25,0,0,0,u,1\">ok</d><d p=\"720,1,25,0,0,0,u,2\">late</d></i>";
        let corpus = Corpus::from_bytes(danmaku.as_bytes(), SRT.as_bytes(), TranscriptFormat::Srt, meta_json("a", 600.0).as_bytes()).unwrap();
        assert_eq!(corpus.comments.len(), 1);
        assert_eq!(corpus.warnings.len(), 1);
        // within slack is kept
        let danmaku = "<i><d p=\"604,1,25,0,0,0,u,1\">ok</d></i>";
        let corpus = Corpus::from_bytes(danmaku.as_bytes(), SRT.as_bytes(), TranscriptFormat::Srt, meta_json("a", 600.0).as_bytes()).unwrap();
        assert_eq!(corpus.comments.len(), 1);
        assert!(corpus.warnings.is_empty());
        assert_eq!(corpus.comments[0].video_id, "a");
    }

    #[test]
    fn video_id_mismatch() {
        let danmaku = "<i><chatid>b</chatid><d p=\"10,1,25,0,0,0,u,1\">ok</d></i>";
        let err = Corpus::from_bytes(danmaku.as_bytes(), SRT.as_bytes(), TranscriptFormat::Srt, meta_json("a", 600.0).as_bytes());
        assert!(matches!(err, Err(IngestError::VideoIdMismatch { .. })));
    }

    #[test]
    fn load_corpus_reports_missing_file() {
        let err = load_corpus(Path::new("/nonexistent/d.xml"), Path::new("/nonexistent/t.srt"), Path::new("/nonexistent/m.json"));
        assert!(matches!(err, Err(IngestError::Io { .. })));
    }
}
