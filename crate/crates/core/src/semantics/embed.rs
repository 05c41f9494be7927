//! Hashed character n-gram embeddings.
//!
//! Character 2-grams and 3-grams of the normalized text are hashed with
//! 64-bit FNV-1a into 256 buckets, counted, and L2-normalized. Text shorter
//! than two characters contributes its single character as a gram.

use crate::text::normalize;

pub const EMBEDDING_DIM: usize = 256;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(Vec<f64>);

impl Embedding {
    pub fn zero() -> Self {
        Embedding(vec![0.0; EMBEDDING_DIM])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    /// Cosine similarity; 0 when either side is the zero vector.
    pub fn cosine(&self, other: &Embedding) -> f64 {
        cosine(&self.0, &other.0)
    }
}

impl AsRef<[f64]> for Embedding {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn embed(text: &str) -> Embedding {
    let norm = normalize(text);
    let chars: Vec<char> = norm.chars().collect();
    let mut v = vec![0.0f64; EMBEDDING_DIM];
    if chars.is_empty() {
        return Embedding(v);
    }
    let mut buf = String::new();
    let mut add = |gram: &[char]| {
        buf.clear();
        buf.extend(gram);
        v[(fnv1a64(buf.as_bytes()) % EMBEDDING_DIM as u64) as usize] += 1.0;
    };
    if chars.len() < 2 {
        add(&chars);
    } else {
        for n in [2, 3] {
            for gram in chars.windows(n) {
                add(gram);
            }
        }
    }
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= len;
    }
    Embedding(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn empty_text_is_zero() {
        assert!(embed("").is_zero());
        assert!(embed("   \t").is_zero());
    }

    #[test]
    fn nonempty_text_is_unit() {
        for t in ["a", "ab", "原来是根瘤菌", "rhizobia fix nitrogen"] {
            assert!((embed(t).norm() - 1.0).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn deterministic_and_whitespace_insensitive() {
        assert_eq!(embed("Hello  World "), embed("hello world"));
        let v = embed("ab");
        // "ab" is a single 2-gram, so exactly one bucket is set
        assert_eq!(v.values().iter().filter(|&&x| x > 0.0).count(), 1);
        assert_eq!(v.values()[(fnv1a64(b"ab") % 256) as usize], 1.0);
    }
}
