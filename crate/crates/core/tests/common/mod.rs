//! Independent brute-force oracles shared by the integration tests and the
//! acceptance suite. Nothing here calls into the library under test.

#![allow(dead_code)]

use std::collections::HashMap;
use std::hash::Hash;

/// Two-sided signed-rank p by visiting all 2^n sign vectors.
///
/// Ranks are handled as doubled integers (`2 * #smaller + #equal + 1`) so
/// the statistic `|sum of signed doubled ranks|` is exact.
pub fn wilcoxon_p_enumerated(pairs: &[(f64, f64)]) -> Option<f64> {
    let d: Vec<f64> = pairs.iter().map(|(a, b)| a - b).filter(|x| *x != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return None;
    }
    let abs: Vec<f64> = d.iter().map(|x| x.abs()).collect();
    let r2: Vec<i64> = abs
        .iter()
        .map(|&x| {
            let smaller = abs.iter().filter(|&&y| y < x).count() as i64;
            let equal = abs.iter().filter(|&&y| y == x).count() as i64;
            2 * smaller + equal + 1
        })
        .collect();
    let observed: i64 = d.iter().zip(&r2).map(|(x, r)| if *x > 0.0 { *r } else { -*r }).sum::<i64>().abs();
    let mut hits = 0u64;
    for signs in 0u64..(1 << n) {
        let s: i64 = (0..n).map(|i| if signs >> i & 1 == 1 { r2[i] } else { -r2[i] }).sum();
        if s.abs() >= observed {
            hits += 1;
        }
    }
    Some(hits as f64 / (1u64 << n) as f64)
}

fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    1.0 - a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb)
}

/// DBSCAN labels from the definition: core points are those with at least
/// `min_pts` points within `eps` (self included); clusters are the
/// connected components of the core-reachability relation, computed by
/// transitive closure; a border point takes the component of its
/// neighbouring core with the smallest component number, components being
/// numbered by their lowest-index core. `None` is noise.
pub fn dbscan_oracle(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let near: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || cosine_distance(&points[i], &points[j]) <= eps).collect()).collect();
    let core: Vec<bool> = near.iter().map(|row| row.iter().filter(|&&b| b).count() >= min_pts).collect();
    // reach[i][j]: cores i and j are density-connected
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| core[i] && core[j] && near[i][j]).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut component = vec![None; n];
    let mut next = 0;
    for i in 0..n {
        if core[i] && component[i].is_none() {
            for j in 0..n {
                if reach[i][j] {
                    component[j] = Some(next);
                }
            }
            next += 1;
        }
    }
    (0..n)
        .map(|i| {
            if core[i] {
                component[i]
            } else {
                (0..n).filter(|&j| core[j] && near[i][j]).filter_map(|j| component[j]).min()
            }
        })
        .collect()
}

/// Relabel clusters by order of first appearance so two partitions can be
/// compared exactly.
pub fn canonical_partition(labels: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            l.map(|c| {
                let next = map.len();
                *map.entry(c).or_insert(next)
            })
        })
        .collect()
}

/// Cohen's kappa from an explicit contingency table.
pub fn kappa_oracle<T: Eq + Hash + Clone>(a: &[T], b: &[T]) -> Option<f64> {
    let mut classes: Vec<T> = Vec::new();
    for x in a.iter().chain(b) {
        if !classes.contains(x) {
            classes.push(x.clone());
        }
    }
    let k = classes.len();
    let idx = |x: &T| classes.iter().position(|c| c == x).unwrap();
    let mut table = vec![vec![0usize; k]; k];
    for (x, y) in a.iter().zip(b) {
        table[idx(x)][idx(y)] += 1;
    }
    let n = a.len() as f64;
    let po = (0..k).map(|i| table[i][i]).sum::<usize>() as f64 / n;
    let pe: f64 = (0..k)
        .map(|i| {
            let row: usize = table[i].iter().sum();
            let col: usize = table.iter().map(|r| r[i]).sum();
            row as f64 / n * (col as f64 / n)
        })
        .sum();
    if pe == 1.0 {
        None
    } else {
        Some((po - pe) / (1.0 - pe))
    }
}

/// Index `g` (1..len) of the single boundary that minimises the cosine
/// similarity between the bag-of-words of lines `[..g]` and `[g..]`.
pub fn best_single_boundary(lines: &[&str]) -> usize {
    let bag = |ls: &[&str]| {
        let mut m: HashMap<String, f64> = HashMap::new();
        for l in ls {
            for w in l.split_whitespace() {
                *m.entry(w.to_lowercase()).or_default() += 1.0;
            }
        }
        m
    };
    let cos = |a: &HashMap<String, f64>, b: &HashMap<String, f64>| {
        let dot: f64 = a.iter().map(|(k, v)| v * b.get(k).copied().unwrap_or(0.0)).sum();
        let na = a.values().map(|v| v * v).sum::<f64>().sqrt();
        let nb = b.values().map(|v| v * v).sum::<f64>().sqrt();
        dot / (na * nb)
    };
    (1..lines.len())
        .min_by(|&g, &h| cos(&bag(&lines[..g]), &bag(&lines[g..])).total_cmp(&cos(&bag(&lines[..h]), &bag(&lines[h..]))))
        .unwrap()
}

/// A throwaway HTTP server on 127.0.0.1 answering every POST with
/// `respond(body) -> (status, body)`. Returns the base URL.
pub fn stub_server<F>(respond: F) -> String
where
    F: Fn(&str) -> (u16, String) + Send + Sync + 'static,
{
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;
    use std::sync::Arc;

    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    let respond = Arc::new(respond);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let respond = respond.clone();
            std::thread::spawn(move || {
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0usize;
                loop {
                    let mut line = String::new();
                    if reader.read_line(&mut line).unwrap_or(0) == 0 {
                        return;
                    }
                    if line == "\r\n" {
                        break;
                    }
                    if let Some((k, v)) = line.split_once(':') {
                        if k.eq_ignore_ascii_case("content-length") {
                            len = v.trim().parse().unwrap_or(0);
                        }
                    }
                }
                let mut body = vec![0; len];
                if reader.read_exact(&mut body).is_err() {
                    return;
                }
                let (status, out) = respond(&String::from_utf8_lossy(&body));
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{out}",
                    out.len()
                );
            });
        }
    });
    url
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/video")
}

/// Raw inputs of a random video: `(danmaku xml, srt, meta json, duration)`.
/// Lines drift between a few vocabularies so segmentation has something to
/// find; comments mix knowledge cues with noise.
pub fn random_video(seed: u64) -> (String, String, String, f64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let vocab = [
        ["nitrogen", "rhizobia", "nodule", "legume", "root"],
        ["ammonia", "pressure", "haber", "hydrogen", "factory"],
        ["algae", "river", "runoff", "oxygen", "fish"],
        ["wheat", "clover", "rotation", "soil", "farmer"],
    ];
    let cues = ["why does the {} matter?", "so the {} is basically key", "actually the {} was found in 1888", "I remember the {} at my farm", "{}", "the {} part is amazing", "233333", "lol"];
    let duration = (rng.random_range(5.0..1500.0f64) * 1000.0).round() / 1000.0;
    let mut srt = String::new();
    let mut t = 0.0;
    let mut i = 0;
    let mut topic = 0;
    while t < duration {
        let end = (t + rng.random_range(2.0..8.0f64)).min(duration);
        if rng.random_bool(0.1) {
            topic = rng.random_range(0..vocab.len());
        }
        let words: Vec<&str> = (0..rng.random_range(4..10)).map(|_| vocab[topic][rng.random_range(0..5)]).collect();
        let ts = |x: f64| {
            let ms = (x * 1000.0).round() as u64;
            format!("{:02}:{:02}:{:02},{:03}", ms / 3_600_000, ms / 60_000 % 60, ms / 1000 % 60, ms % 1000)
        };
        i += 1;
        srt.push_str(&format!("{i}\n{} --> {}\nThe {}.\n\n", ts(t), ts(end), words.join(" ")));
        t = end;
    }
    let mut xml = String::from("<i>\n");
    for row in 0..rng.random_range(0..150) {
        let topic = rng.random_range(0..vocab.len());
        let text = cues[rng.random_range(0..cues.len())].replace("{}", vocab[topic][rng.random_range(0..5)]);
        xml.push_str(&format!("<d p=\"{:.3},1,25,16777215,0,0,u,{row}\">{text}</d>\n", rng.random_range(0.0..duration)));
    }
    xml.push_str("</i>\n");
    let meta = format!("{{\"video_id\":\"r{seed}\",\"title\":\"random\",\"duration\":{duration},\"domain_tag\":\"biology\"}}");
    (xml, srt, meta, duration)
}
