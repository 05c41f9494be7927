//! End-to-end acceptance checks. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion; exits non-zero on any FAIL.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use ck_core::analysis::{coverage_study, wilcoxon_signed_rank, StudyFile, TestMethod, WilcoxonError};
use ck_core::bundle::{load_bundle, KnowledgeBundle};
use ck_core::classify::metrics::{cohens_kappa, distribution_report, f1_report, ConfusionMatrix};
use ck_core::classify::{lexicon_classify, CategorySet, DisplayCategory, KnowledgeLabel, Theme};
use ck_core::config::PipelineConfig;
use ck_core::ingest::{Corpus, TranscriptFormat};
use ck_core::lexicon::Lexicon;
use ck_core::pipeline::run_pipeline;
use ck_core::presentation::{layout_wordstream, scroll_spec, KeywordWeight, LayoutParams, StreamBucket};
use ck_core::semantics::{dbscan, DbscanLabel};
use ck_core::structure::graph::danmaku_node_id;
use common::{canonical_partition, dbscan_oracle, kappa_oracle, random_video, wilcoxon_p_enumerated};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_video() -> PathBuf {
    workspace().join("fixtures/video")
}

fn c1_wilcoxon_study() -> Outcome {
    let raw = std::fs::read(workspace().join("fixtures/study.json")).map_err(|e| e.to_string())?;
    let file: StudyFile = serde_json::from_slice(&raw).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let study = coverage_study(&file.corpora).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(file.corpora.len() == 7, || format!("{} corpora", file.corpora.len()))?;
    ensure(study.pairs.iter().all(|p| p.danmaku_rate > p.comment_rate), || "danmaku coverage not strictly higher".into())?;
    let t = study.test.as_ref().ok_or("no test result")?;
    ensure(t.method == TestMethod::Exact, || format!("{:?}", t.method))?;
    ensure(t.p_two_sided == 0.015625, || format!("p = {}", t.p_two_sided))?;
    ensure(format!("{:.3}", t.p_two_sided) == "0.016", || "p does not print as 0.016".into())?;
    ensure(t.effect_size == 1.0, || format!("effect {}", t.effect_size))?;
    ensure(elapsed < Duration::from_secs(1), || format!("{elapsed:?}"))?;
    Ok(format!("p = {} ({:.3}), effect = {}, Z (normal, reported) = {:.3}, {elapsed:?}", t.p_two_sided, t.p_two_sided, t.effect_size, t.z))
}

fn c2_wilcoxon_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut done, mut decisions_agree) = (0, 0);
    while done < 200 {
        let n = rng.random_range(3..=12);
        let tied = rng.random_bool(0.5);
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| if tied { (rng.random_range(-8..8) as f64 / 2.0, rng.random_range(-8..8) as f64 / 2.0) } else { (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)) })
            .collect();
        let r = match wilcoxon_signed_rank(&pairs) {
            Ok(r) => r,
            Err(WilcoxonError::Degenerate(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        done += 1;
        let oracle = wilcoxon_p_enumerated(&pairs).ok_or("oracle undefined")?;
        let exact = r.p_exact.ok_or_else(|| format!("no exact p for n={n}"))?;
        ensure((exact - oracle).abs() <= 1e-12, || format!("{pairs:?}: exact {exact} vs oracle {oracle}"))?;
        let exact_dir = (r.w_plus - r.w_minus).signum();
        let normal_dir = if r.z == 0.0 { exact_dir } else { r.z.signum() };
        ensure(r.w_plus == r.w_minus || exact_dir == normal_dir, || format!("{pairs:?}: direction differs"))?;
        if (exact < 0.05) == (r.p_normal < 0.05) {
            decisions_agree += 1;
        }
    }
    Ok(format!("200 instances, exact == enumeration to 1e-12, directions agree; alpha 0.05 decisions agree on {decisions_agree}/200 (reported)"))
}

fn c3_dbscan_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut clusters = 0;
    for i in 0..100 {
        let dim = rng.random_range(2..=4);
        let centers: Vec<Vec<f64>> = (0..rng.random_range(1..=5)).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let spread = rng.random_range(0.05..0.6);
        let points: Vec<Vec<f64>> = (0..rng.random_range(1..=64))
            .map(|_| centers[rng.random_range(0..centers.len())].iter().map(|x| x + rng.random_range(-spread..spread)).collect())
            .collect();
        let eps = rng.random_range(0.1..=0.6);
        let min_pts = [2, 3, 4][rng.random_range(0..3)];
        let got = canonical_partition(&dbscan(&points, eps, min_pts).into_iter().map(DbscanLabel::cluster).collect::<Vec<_>>());
        let want = canonical_partition(&dbscan_oracle(&points, eps, min_pts));
        ensure(got == want, || format!("instance {i} (eps {eps}, min_pts {min_pts}) differs"))?;
        clusters += got.iter().flatten().max().map_or(0, |m| m + 1);
    }
    Ok(format!("100 instances equal the oracle partition ({clusters} clusters total)"))
}

fn c4_kappa() -> Outcome {
    ensure(cohens_kappa(&["x", "x", "y", "y"], &["y", "y", "x", "x"]) == Ok(-1.0), || "reversed table".into())?;
    ensure(cohens_kappa(&["x", "x", "x", "y"], &["x", "x", "y", "y"]) == Ok(0.5), || "one-disagreement table".into())?;
    let m = ConfusionMatrix::new(vec!["a".into(), "b".into()], vec![vec![8, 2], vec![4, 6]]).map_err(|e| e.to_string())?;
    let f1 = f1_report(&m).map_err(|e| e.to_string())?.per_class[0].f1;
    ensure((f1 - 16.0 / 22.0).abs() < 1e-12 && format!("{f1:.4}") == "0.7273", || format!("f1 {f1}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let len = rng.random_range(1..60);
        let k = rng.random_range(1..=6u8);
        let a: Vec<u8> = (0..len).map(|_| rng.random_range(0..k)).collect();
        let b: Vec<u8> = (0..len).map(|_| rng.random_range(0..k)).collect();
        let (ab, ba) = (cohens_kappa(&a, &b), cohens_kappa(&b, &a));
        ensure(ab == ba, || format!("case {i}: asymmetric {ab:?} vs {ba:?}"))?;
        match (&ab, kappa_oracle(&a, &b)) {
            (Ok(x), Some(o)) => ensure((x - o).abs() < 1e-12, || format!("case {i}: {x} vs oracle {o}"))?,
            (Err(_), None) => {}
            _ => return Err(format!("case {i}: {ab:?} vs oracle")),
        }
        let mut p = a.clone();
        p.shuffle(&mut rng);
        let distinct = p.iter().collect::<std::collections::BTreeSet<_>>().len();
        if distinct >= 2 {
            ensure(cohens_kappa(&p, &p) == Ok(1.0), || format!("case {i}: self-agreement"))?;
        }
    }
    Ok("hand tables -1, 0.5 and F1 0.7273 exact; 1000 vectors symmetric, oracle-equal, self-agreement 1".into())
}

fn c5_taxonomy() -> Outcome {
    let lex = Lexicon::builtin();
    let examples = [
        ("Russia invests heavily in scientists; bringing over one Euler would recoup all the expenses.", Theme::Interpretation),
        ("Why is the probability of irrational numbers equal to 1?", Theme::Inquiry),
        ("My mother passed away from this disease, which was discovered to be liver metastasis. I hope that one day the world can eradicate cancer.", Theme::ExperienceSharing),
        ("D'Alembert's criterion.", Theme::ConceptNoting),
        ("\"Han\" refers to a geographical location; its original meaning pertains to the Han River, which later extended to denote the regions through which the Han River flows, and subsequently acquired additional meanings.", Theme::SupplementaryKnowledge),
    ];
    for (text, theme) in examples {
        let got = lexicon_classify(&lex, text, "").theme();
        ensure(got == Some(theme), || format!("{text:?}: {got:?}, expected {theme:?}"))?;
    }
    let raw = std::fs::read_to_string(workspace().join("fixtures/taxonomy.tsv")).map_err(|e| e.to_string())?;
    let rows: Vec<(KnowledgeLabel, &str)> = raw
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (label, text) = l.split_once('\t').ok_or("malformed row")?;
            Ok((KnowledgeLabel::from_slug(label).map_err(|e| e.to_string())?, text))
        })
        .collect::<Result<_, String>>()?;
    ensure(rows.len() == 100, || format!("{} rows", rows.len()))?;
    for (text, _) in examples.iter() {
        ensure(rows.iter().any(|(_, t)| t == text), || format!("{text:?} missing from fixture"))?;
    }
    let predicted: Vec<KnowledgeLabel> = rows.iter().map(|(_, t)| lexicon_classify(&lex, t, "")).collect();
    let report = distribution_report(&predicted);
    let knowledge = rows.iter().filter(|r| r.0.is_knowledge()).count();
    ensure(report.knowledge_comments == knowledge, || format!("{} knowledge vs {knowledge}", report.knowledge_comments))?;
    for row in &report.categories {
        let n = rows.iter().filter(|r| r.0.slug() == row.slug).count();
        ensure(row.count == n && row.percent == n as f64 * 100.0 / knowledge as f64, || format!("{}: {} ({}%) vs hand {n}", row.slug, row.count, row.percent))?;
    }
    let split: Vec<String> = report.themes.iter().map(|r| format!("{}", r.percent)).collect();
    Ok(format!("5 examples in their categories; 100-row fixture percentages exact ({})", split.join("/")))
}

fn ck() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ck"));
    c.env_remove("RUST_LOG");
    c
}

fn ck_process(out: &Path) -> Result<Duration, String> {
    let v = fixture_video();
    let start = Instant::now();
    let o = ck()
        .arg("process")
        .arg("--config")
        .arg(v.join("config.toml"))
        .arg("--danmaku")
        .arg(v.join("danmaku.xml"))
        .arg("--transcript")
        .arg(v.join("transcript.srt"))
        .arg("--meta")
        .arg(v.join("meta.json"))
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    Ok(elapsed)
}

fn c6_determinism(dir: &Path) -> Outcome {
    let (a, b) = (dir.join("fixture.json"), dir.join("second").join("fixture.json"));
    std::fs::create_dir_all(b.parent().unwrap()).map_err(|e| e.to_string())?;
    let t1 = ck_process(&a)?;
    let t2 = ck_process(&b)?;
    let (x, y) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
    ensure(x == y, || "bundles differ between runs".into())?;
    ensure(t1 < Duration::from_secs(10) && t2 < Duration::from_secs(10), || format!("{t1:?} / {t2:?}"))?;
    let bundle = load_bundle(&a).map_err(|e| e.to_string())?;
    ensure(bundle.comments.len() >= 300, || format!("{} comments", bundle.comments.len()))?;
    let transcript_end = bundle.transcript.last().map_or(0.0, |l| l.end);
    ensure(transcript_end >= 600.0, || format!("transcript ends at {transcript_end}"))?;
    Ok(format!("{} comments, {transcript_end} s transcript, {} bytes identical, runs {t1:.2?} and {t2:.2?}", bundle.comments.len(), x.len()))
}

fn random_buckets(rng: &mut ChaCha8Rng) -> Vec<StreamBucket> {
    let tokens = ["nodule", "氮", "enzyme", "rhizobia", "soil", "nitrogenase"];
    (0..rng.random_range(1..24))
        .map(|i| {
            let mut counts = BTreeMap::new();
            let mut keywords = BTreeMap::new();
            for c in DisplayCategory::ALL {
                let count = rng.random_range(0..12usize);
                if count == 0 {
                    continue;
                }
                counts.insert(c, count);
                let mut list: Vec<KeywordWeight> = Vec::new();
                for _ in 0..rng.random_range(0..4) {
                    let token = tokens[rng.random_range(0..tokens.len())].to_string();
                    if !list.iter().any(|k| k.token == token) {
                        list.push(KeywordWeight { token, weight: rng.random_range(1..9) });
                    }
                }
                list.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.token.cmp(&b.token)));
                keywords.insert(c, list);
            }
            StreamBucket { t_start: i as f64 * 15.0, width: 15.0, counts, keywords }
        })
        .collect()
}

fn c7_presentation() -> Outcome {
    const TOL: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut boxes = 0;
    for case in 0..1000 {
        let buckets = random_buckets(&mut rng);
        let filter: CategorySet = DisplayCategory::ALL.into_iter().filter(|_| rng.random_bool(0.6)).collect();
        let p = LayoutParams { width: rng.random_range(300.0..1600.0), height: rng.random_range(80.0..400.0), k: rng.random_range(1..4), font_min: 10.0, font_max: 28.0 };
        let l = layout_wordstream(&buckets, filter, &p).map_err(|e| e.to_string())?;
        let max_total = buckets.iter().map(|b| filter.iter().map(|c| b.count(c)).sum::<usize>()).max().unwrap_or(0).max(1);
        for (i, b) in buckets.iter().enumerate() {
            let mut floor = 0.0;
            for band in &l.bands {
                ensure((band.bottom[i] - floor).abs() < TOL && band.top[i] >= band.bottom[i], || format!("case {case}: band gap at bucket {i}"))?;
                floor = band.top[i];
            }
            let total: usize = filter.iter().map(|c| b.count(c)).sum();
            ensure((floor - total as f64 * p.height / max_total as f64).abs() < TOL, || format!("case {case}: stack height at bucket {i}"))?;
        }
        for (i, a) in l.keywords.iter().enumerate() {
            ensure(a.x >= -TOL && a.x + a.width <= l.width + TOL && a.y >= -TOL && a.y + a.height <= l.height + TOL, || format!("case {case}: box outside viewport"))?;
            for b in &l.keywords[i + 1..] {
                let apart = a.x + a.width <= b.x + TOL || b.x + b.width <= a.x + TOL || a.y + a.height <= b.y + TOL || b.y + b.height <= a.y + TOL;
                ensure(apart, || format!("case {case}: {a:?} overlaps {b:?}"))?;
            }
        }
        boxes += l.keywords.len();

        let (len, count) = (rng.random_range(0..400usize), rng.random_range(0..5000usize));
        let s = scroll_spec(len, count);
        ensure((4.0..=12.0).contains(&s.duration) && (1.0..=1.6).contains(&s.font_scale), || format!("case {case}: clamp {s:?}"))?;
        let longer = scroll_spec(len + rng.random_range(0..50), count);
        let bigger = scroll_spec(len, count + rng.random_range(0..500));
        ensure(longer.duration >= s.duration && bigger.duration >= s.duration && bigger.font_scale >= s.font_scale, || format!("case {case}: scroll not monotone"))?;
    }
    Ok(format!("1000 cases, 0 violations ({boxes} keyword boxes checked)"))
}

fn tiles(spans: &[(f64, f64)], duration: f64) -> bool {
    spans.first().is_some_and(|s| s.0 == 0.0) && spans.last().is_some_and(|s| s.1 == duration) && spans.windows(2).all(|w| w[0].1 == w[1].0) && spans.iter().all(|s| s.1 > s.0)
}

fn c8_tiling() -> Outcome {
    let mut clusters = 0;
    for seed in 0..100 {
        let (xml, srt, meta, _) = random_video(seed);
        let corpus = Corpus::from_bytes(xml.as_bytes(), srt.as_bytes(), TranscriptFormat::Srt, meta.as_bytes()).map_err(|e| e.to_string())?;
        let b = run_pipeline(&corpus, &PipelineConfig::default()).map_err(|e| e.to_string())?;
        let d = b.meta.duration;
        let sections: Vec<(f64, f64)> = b.sections.iter().map(|s| (s.start, s.end)).collect();
        let windows: Vec<(f64, f64)> = b.windows.iter().map(|w| (w.start, w.end)).collect();
        ensure(tiles(&sections, d), || format!("seed {seed}: sections do not tile [0, {d}]"))?;
        ensure(tiles(&windows, d), || format!("seed {seed}: windows do not tile [0, {d}]"))?;
        ensure(windows[..windows.len() - 1].iter().all(|w| w.1 - w.0 == 20.0), || format!("seed {seed}: window width"))?;
        for c in &b.clusters {
            let id = danmaku_node_id(c.cluster_id);
            let n = b.graphs.iter().filter(|g| g.danmaku.iter().any(|x| x.id == id)).count();
            ensure(n == 1, || format!("seed {seed}: cluster {} in {n} graphs", c.cluster_id))?;
        }
        clusters += b.clusters.len();
    }
    Ok(format!("100 durations tile; {clusters} clusters each in exactly one window graph"))
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

/// Plain HTTP/1.1 GET; returns (status, body).
fn http_get(addr: &str, path: &str) -> Option<(u16, String)> {
    let mut s = TcpStream::connect(addr).ok()?;
    write!(s, "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").ok()?;
    let mut raw = String::new();
    s.read_to_string(&mut raw).ok()?;
    let (head, body) = raw.split_once("\r\n\r\n")?;
    let status = head.split_whitespace().nth(1)?.parse().ok()?;
    Some((status, body.to_string()))
}

fn c9_api(dir: &Path) -> Outcome {
    let bundle_path = dir.join("fixture.json");
    if !bundle_path.exists() {
        ck_process(&bundle_path)?;
    }
    let b: KnowledgeBundle = load_bundle(&bundle_path).map_err(|e| e.to_string())?;
    let addr = format!("127.0.0.1:{}", TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?.local_addr().map_err(|e| e.to_string())?.port());
    let serve_dir = dir.join("served");
    std::fs::create_dir_all(&serve_dir).map_err(|e| e.to_string())?;
    std::fs::copy(&bundle_path, serve_dir.join("fixture.json")).map_err(|e| e.to_string())?;
    let _server = Server(ck().args(["serve", "--addr", &addr, "--dir"]).arg(&serve_dir).stderr(Stdio::null()).spawn().map_err(|e| e.to_string())?);
    let deadline = Instant::now() + Duration::from_secs(10);
    while http_get(&addr, "/api/videos").is_none() {
        ensure(Instant::now() < deadline, || "server did not start".into())?;
        std::thread::sleep(Duration::from_millis(50));
    }

    let video = &b.meta.video_id;
    let rep = &b.clusters.iter().find(|c| c.size >= 3).ok_or("no cluster of size 3")?.representative_id;
    let endpoints = [
        ("videos", "/api/videos".to_string()),
        ("video", format!("/api/videos/{video}")),
        ("sections", format!("/api/videos/{video}/sections")),
        ("wordstream_zoom", format!("/api/videos/{video}/wordstream?from=120&to=240&categories=inquiry,concept-noting")),
        ("danmaku", format!("/api/videos/{video}/danmaku?from=10&to=40&categories=inquiry")),
        ("danmaku_all", format!("/api/videos/{video}/danmaku")),
        ("graph", format!("/api/videos/{video}/graph?t=37")),
        ("related", format!("/api/videos/{video}/danmaku/{rep}/related")),
        ("explanation", format!("/api/videos/{video}/danmaku/{rep}/explanation")),
        ("transcript", format!("/api/videos/{video}/transcript?from=30&to=60")),
    ];
    let golden_dir = workspace().join("crates/server/tests/golden");
    for (name, uri) in &endpoints {
        let (status, body) = http_get(&addr, uri).ok_or_else(|| format!("{uri}: no response"))?;
        ensure(status == 200, || format!("{uri}: status {status}"))?;
        let want = std::fs::read_to_string(golden_dir.join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        ensure(body == want, || format!("{uri}: differs from golden {name}.json"))?;
    }

    let uris: Vec<String> = endpoints.iter().map(|(_, u)| u.clone()).collect();
    let handles: Vec<_> = (0..32)
        .map(|i| {
            let (addr, uris) = (addr.clone(), uris.clone());
            std::thread::spawn(move || uris.iter().cycle().skip(i).take(uris.len()).map(|u| (u.clone(), http_get(&addr, u))).collect::<Vec<_>>())
        })
        .collect();
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    let mut requests = 0;
    for h in handles {
        for (uri, resp) in h.join().map_err(|_| "client thread panicked")? {
            let (status, body) = resp.ok_or_else(|| format!("{uri}: no response under load"))?;
            ensure(status == 200, || format!("{uri}: status {status} under load"))?;
            let first = seen.entry(uri.clone()).or_insert_with(|| body.clone());
            ensure(*first == body, || format!("{uri}: bytes differ between clients"))?;
            requests += 1;
        }
    }
    Ok(format!("{} endpoints match goldens; 32 clients, {requests} requests, identical bytes", endpoints.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Check)> = vec![
        ("wilcoxon reproduction", Box::new(c1_wilcoxon_study)),
        ("wilcoxon oracle equivalence", Box::new(c2_wilcoxon_oracle)),
        ("dbscan oracle equivalence", Box::new(c3_dbscan_oracle)),
        ("kappa", Box::new(c4_kappa)),
        ("taxonomy fixture", Box::new(c5_taxonomy)),
        ("pipeline determinism", Box::new(|| c6_determinism(dir.path()))),
        ("presentation invariants", Box::new(c7_presentation)),
        ("structural tiling", Box::new(c8_tiling)),
        ("api conformance", Box::new(|| c9_api(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    std::io::stdout().flush().ok();
    if failed > 0 {
        std::process::exit(1);
    }
}
