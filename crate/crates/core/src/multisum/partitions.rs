//! Non-increasing integer sequences with parts in [-n, n]: the summation
//! index of the multisum representations. Parts may be negative.

/// A finite non-increasing sequence of signed integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionSeq {
    parts: Vec<i64>,
}

impl PartitionSeq {
    pub fn new(parts: Vec<i64>) -> Self {
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be non-increasing");
        PartitionSeq { parts }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`: the (possibly negative) sum of the parts.
    pub fn weight(&self) -> i64 {
        self.parts.iter().sum()
    }
}

/// All non-increasing length-`len` sequences with parts in [-n, n] whose
/// weight is ≡ -residue (mod 3) when `residue` is given; lexicographic
/// order, each exactly once.
pub fn enumerate_partitions(len: usize, n: i64, residue: Option<u8>) -> Vec<PartitionSeq> {
    assert!(len >= 1);
    assert!(n >= 0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(out: &mut Vec<PartitionSeq>, cur: &mut Vec<i64>, len: usize, lo: i64, hi: i64, residue: Option<u8>) {
        if cur.len() == len {
            if let Some(r) = residue {
                let w: i64 = cur.iter().sum();
                if (w + r as i64).rem_euclid(3) != 0 {
                    return;
                }
            }
            out.push(PartitionSeq { parts: cur.clone() });
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            rec(out, cur, len, lo, v, residue);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, len, -n, n, residue);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_part_residues() {
        // L=1, n=1: parts in {-1, 0, 1}
        let p0 = enumerate_partitions(1, 1, Some(0));
        assert_eq!(p0, vec![PartitionSeq::new(vec![0])]);
        let p1 = enumerate_partitions(1, 1, Some(1));
        assert_eq!(p1, vec![PartitionSeq::new(vec![-1])]);
        let p2 = enumerate_partitions(1, 1, Some(2));
        assert_eq!(p2, vec![PartitionSeq::new(vec![1])]);
    }

    #[test]
    fn counts_match_stars_and_bars() {
        // L=5 over 13 values: C(17,5) = 6188 over all residues
        let total: usize = (0..3u8).map(|r| enumerate_partitions(5, 6, Some(r)).len()).sum();
        assert_eq!(total, 6188);
        assert_eq!(enumerate_partitions(5, 6, None).len(), 6188);
    }

    #[test]
    fn sorted_unique_nonincreasing() {
        let all = enumerate_partitions(3, 2, None);
        for p in &all {
            assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
            assert!(p.parts().iter().all(|&v| (-2..=2).contains(&v)));
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert_eq!(sorted, all);
    }

    #[test]
    fn admissibility() {
        for r in 0..3u8 {
            for p in enumerate_partitions(4, 3, Some(r)) {
                assert_eq!((p.weight() + r as i64).rem_euclid(3), 0);
            }
        }
    }
}
