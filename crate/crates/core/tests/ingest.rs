use ck_core::ingest::{parse_danmaku_xml, parse_meta, parse_transcript, DanmakuComment, TranscriptFormat};
use proptest::prelude::*;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn comment_strategy() -> impl Strategy<Value = (u32, u8, u32, i64, String, String)> {
    (0u32..7_200_000, prop::sample::select(vec![1u8, 4, 5, 7]), 0u32..16_777_216, 1_500_000_000i64..1_800_000_000, "[0-9a-f]{8}", "[a-zA-Z0-9 ?!&<>'\"\u{4e00}-\u{4e20}]{1,30}")
}

proptest! {
    #[test]
    fn danmaku_parser_is_total(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_danmaku_xml(&bytes);
    }

    #[test]
    fn transcript_parsers_are_total(src in "[0-9:,\\->\n a-z{}\"\\[\\]]{0,300}") {
        let _ = parse_transcript(src.as_bytes(), TranscriptFormat::Srt);
        let _ = parse_transcript(src.as_bytes(), TranscriptFormat::LinesJson);
        let _ = parse_meta(src.as_bytes());
    }

    #[test]
    fn xml_round_trip_and_stable_order(rows in prop::collection::vec(comment_strategy(), 1..40)) {
        let mut xml = String::from("<?xml version=\"1.0\"?><i>");
        let mut expected: Vec<DanmakuComment> = Vec::new();
        for (row, (ms, mode, color, posted, user, text)) in rows.iter().enumerate() {
            // few distinct times so ties are common
            let t = (ms % 50) as f64 / 10.0;
            xml.push_str(&format!("<d p=\"{t},{mode},25,{color},{posted},0,{user},{row}\">{}</d>", escape(text)));
            if !text.trim().is_empty() {
                expected.push(DanmakuComment {
                    id: row.to_string(),
                    video_id: String::new(),
                    t,
                    posted_at: Some(*posted),
                    text: text.trim().to_string(),
                    display_mode: *mode,
                    color: *color,
                    user_hash: user.clone(),
                });
            }
        }
        xml.push_str("</i>");
        expected.sort_by(|a, b| a.t.total_cmp(&b.t));
        match parse_danmaku_xml(xml.as_bytes()) {
            Ok(parsed) => {
                prop_assert_eq!(&parsed.comments, &expected);
                let json = serde_json::to_string(&parsed.comments).unwrap();
                let back: Vec<DanmakuComment> = serde_json::from_str(&json).unwrap();
                prop_assert_eq!(back, parsed.comments);
            }
            Err(e) => prop_assert!(expected.is_empty(), "{}", e),
        }
    }
}
