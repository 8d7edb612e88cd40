//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use rand::Rng;
use simbias::rnamap::{Nucleotide, NucleotideSequence};

/// LZ76 phrase count straight from the definition: each phrase is the
/// shortest extension that cannot be copied from the text before its last
/// symbol; a phrase cut off by the end of the string still counts.
pub fn lz76_brute_force(s: &[u8]) -> usize {
    let n = s.len();
    let mut start = 0;
    let mut phrases = 0;
    while start < n {
        let mut len = 1;
        while start + len <= n && occurs_in(&s[start..start + len], &s[..start + len - 1]) {
            len += 1;
        }
        phrases += 1;
        start += len;
    }
    phrases
}

fn occurs_in(needle: &[u8], hay: &[u8]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Every binary string of length `n`, as bit vectors.
pub fn all_bit_strings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..(1 << n)).map(move |v| (0..n).map(|k| ((v >> (n - 1 - k)) & 1) as u8).collect())
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..2u8)).collect()
}

pub fn random_rna<R: Rng>(rng: &mut R, n: usize) -> NucleotideSequence {
    let letters = (0..n).map(|_| Nucleotide::ALL[rng.gen_range(0..4)]).collect();
    NucleotideSequence::new(letters).unwrap()
}

fn can_pair(a: Nucleotide, b: Nucleotide) -> bool {
    let s: String = [a.as_char(), b.as_char()].iter().collect();
    matches!(s.as_str(), "AU" | "UA" | "GC" | "CG" | "GU" | "UG")
}

/// Every valid secondary structure of `seq` as a list of pairs, built by
/// explicit enumeration (no memoization, no scoring).
pub fn enumerate_structures(seq: &NucleotideSequence, min_loop: usize) -> Vec<Vec<(usize, usize)>> {
    let letters = seq.letters();
    fn rec(l: &[Nucleotide], i: usize, j: usize, min_loop: usize) -> Vec<Vec<(usize, usize)>> {
        if i > j {
            return vec![Vec::new()];
        }
        let mut out = rec(l, i + 1, j, min_loop);
        for k in (i + min_loop + 1)..=j {
            if !can_pair(l[i], l[k]) {
                continue;
            }
            let inner = if k > i + 1 { rec(l, i + 1, k - 1, min_loop) } else { vec![Vec::new()] };
            let outer = if k < j { rec(l, k + 1, j, min_loop) } else { vec![Vec::new()] };
            for a in &inner {
                for b in &outer {
                    let mut s = vec![(i, k)];
                    s.extend_from_slice(a);
                    s.extend_from_slice(b);
                    out.push(s);
                }
            }
        }
        out
    }
    rec(letters, 0, letters.len() - 1, min_loop)
}

/// Checks that `db` is balanced, that every pair is a legal base pair of
/// `seq` and that every hairpin encloses at least `min_loop` positions.
pub fn check_structure(seq: &NucleotideSequence, db: &str, min_loop: usize) -> Result<usize, String> {
    let letters = seq.letters();
    if db.len() != letters.len() {
        return Err(format!("length {} vs {}", db.len(), letters.len()));
    }
    let mut stack = Vec::new();
    let mut pairs = 0;
    for (k, c) in db.chars().enumerate() {
        match c {
            '.' => {}
            '(' => stack.push(k),
            ')' => {
                let i = stack.pop().ok_or_else(|| format!("unmatched ')' at {k}"))?;
                if k - i - 1 < min_loop {
                    return Err(format!("loop too short at ({i}, {k})"));
                }
                if !can_pair(letters[i], letters[k]) {
                    return Err(format!("illegal pair at ({i}, {k})"));
                }
                pairs += 1;
            }
            other => return Err(format!("bad symbol {other}")),
        }
    }
    if stack.is_empty() {
        Ok(pairs)
    } else {
        Err("unmatched '('".into())
    }
}

/// A random pair tree used to generate dot-bracket families.
#[derive(Debug, Clone)]
pub struct Tree {
    pub children: Vec<Tree>,
}

pub fn random_forest<R: Rng>(rng: &mut R, depth: usize) -> Vec<Tree> {
    let k = if depth == 0 { 0 } else { rng.gen_range(0..=3) };
    (0..k).map(|_| Tree { children: random_forest(rng, depth - 1) }).collect()
}

/// Level-5 shape of a forest computed on the tree itself: a node with a
/// single child contributes nothing of its own.
pub fn expected_shape(forest: &[Tree]) -> String {
    fn node(t: &Tree) -> String {
        if t.children.len() == 1 {
            node(&t.children[0])
        } else {
            let mut s = String::from("[");
            for c in &t.children {
                s.push_str(&node(c));
            }
            s.push(']');
            s
        }
    }
    if forest.is_empty() {
        return "_".into();
    }
    forest.iter().map(node).collect()
}

/// Renders a forest with the given stem lengths and unpaired padding drawn
/// from `rng`; larger `noise` gives longer stems and more bulges.
pub fn render_tree<R: Rng>(rng: &mut R, forest: &[Tree], noise: usize) -> String {
    let mut out = String::new();
    out.push_str(&".".repeat(rng.gen_range(0..=noise)));
    for t in forest {
        let stem = 1 + rng.gen_range(0..=noise);
        for _ in 0..stem {
            out.push('(');
            out.push_str(&".".repeat(rng.gen_range(0..=noise)));
        }
        if t.children.is_empty() {
            out.push_str("...");
        } else {
            out.push_str(&render_tree(rng, &t.children, noise));
        }
        for _ in 0..stem {
            out.push_str(&".".repeat(rng.gen_range(0..=noise)));
            out.push(')');
        }
        out.push_str(&".".repeat(rng.gen_range(0..=noise)));
    }
    out
}

/// `log det` and `A^-1` by Gauss–Jordan elimination with partial pivoting.
pub fn dense_inverse(a: &[Vec<f64>]) -> (f64, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut log_det = 0.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        log_det += p.abs().ln();
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                for j in 0..n {
                    m[r][j] -= f * m[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    (log_det, inv)
}

/// Dense log marginal likelihood: `-½ Σ_c y_cᵀ K⁻¹ y_c - (C/2) log|K| - (nC/2) log 2π`.
pub fn dense_lml(x: &[Vec<f64>], y: &[Vec<f64>], mean: &[f64], length_scale: f64, noise: f64) -> f64 {
    let n = x.len();
    let c = mean.len();
    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d2: f64 = x[i].iter().zip(&x[j]).map(|(a, b)| (a - b).powi(2)).sum();
                    (-d2 / (2.0 * length_scale * length_scale)).exp() + if i == j { noise } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let (log_det, inv) = dense_inverse(&k);
    let mut quad = 0.0;
    for col in 0..c {
        for i in 0..n {
            for j in 0..n {
                quad += (y[i][col] - mean[col]) * inv[i][j] * (y[j][col] - mean[col]);
            }
        }
    }
    -0.5 * quad - 0.5 * c as f64 * log_det - 0.5 * (n * c) as f64 * (2.0 * std::f64::consts::PI).ln()
}
