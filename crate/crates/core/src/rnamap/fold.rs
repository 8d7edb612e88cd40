use super::shape::DotBracketStructure;
use super::NucleotideSequence;

/// Minimum number of unpaired bases enclosed by a hairpin.
pub const DEFAULT_MIN_LOOP: usize = 3;

/// Nussinov table: `best(i, j)` is the maximum number of pairs within `i..=j`.
struct PairTable {
    n: usize,
    cells: Vec<u16>,
}

impl PairTable {
    fn best(&self, i: usize, j: usize) -> u16 {
        if i >= j || j >= self.n {
            0
        } else {
            self.cells[i * self.n + j]
        }
    }

    /// `best(i, j)` where `j` may be `i - 1` (an empty interval).
    fn best_or_empty(&self, i: usize, j: isize) -> u16 {
        if j < i as isize {
            0
        } else {
            self.best(i, j as usize)
        }
    }

    fn fill(seq: &NucleotideSequence, min_loop: usize) -> Self {
        let s = seq.letters();
        let n = s.len();
        let mut table = Self {
            n,
            cells: vec![0; n * n],
        };
        for span in (min_loop + 1)..n {
            for i in 0..(n - span) {
                let j = i + span;
                let mut best = table.best(i + 1, j);
                for k in (i + min_loop + 1)..=j {
                    if s[i].pairs_with(s[k]) {
                        let inside = table.best_or_empty(i + 1, k as isize - 1);
                        let outside = if k < j { table.best(k + 1, j) } else { 0 };
                        best = best.max(1 + inside + outside);
                    }
                }
                table.cells[i * n + j] = best;
            }
        }
        table
    }
}

/// Maximum number of base pairs over all valid secondary structures.
pub fn max_pairs(seq: &NucleotideSequence, min_loop: usize) -> usize {
    let n = seq.len();
    PairTable::fill(seq, min_loop).best(0, n.saturating_sub(1)) as usize
}

/// Deterministic maximum-base-pairing fold.
///
/// Traceback prefers pairing `i` with `j`, then leaving `i` unpaired, then
/// pairing `i` with the smallest admissible `k`.
pub fn fold_surrogate(seq: &NucleotideSequence, min_loop: usize) -> DotBracketStructure {
    let s = seq.letters();
    let n = s.len();
    let table = PairTable::fill(seq, min_loop);
    let mut symbols = vec![b'.'; n];
    let mut stack = vec![(0usize, n - 1)];
    while let Some((i, j)) = stack.pop() {
        if i >= j || j - i <= min_loop {
            continue;
        }
        let target = table.best(i, j);
        if target == 0 {
            continue;
        }
        let pair_value = |k: usize| -> u16 {
            let inside = table.best_or_empty(i + 1, k as isize - 1);
            let outside = if k < j { table.best(k + 1, j) } else { 0 };
            1 + inside + outside
        };
        if s[i].pairs_with(s[j]) && pair_value(j) == target {
            symbols[i] = b'(';
            symbols[j] = b')';
            stack.push((i + 1, j - 1));
            continue;
        }
        if table.best(i + 1, j) == target {
            stack.push((i + 1, j));
            continue;
        }
        let k = ((i + min_loop + 1)..j)
            .find(|&k| s[i].pairs_with(s[k]) && pair_value(k) == target)
            .expect("traceback must find an optimal split");
        symbols[i] = b'(';
        symbols[k] = b')';
        stack.push((k + 1, j));
        stack.push((i + 1, k - 1));
    }
    DotBracketStructure::from_validated(String::from_utf8(symbols).expect("ascii"))
}
