//! Small helpers for subsets of at most 64 elements stored as `u64` masks.

/// Mask with only bit `i` set.
#[inline]
pub fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits, in increasing order.
pub fn indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

/// Mask built from a list of indices.
pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> u64 {
    idx.into_iter().fold(0, |m, i| m | bit(i))
}

/// Whether `a` is a subset of `b`.
#[inline]
pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Number of elements.
#[inline]
pub fn count(mask: u64) -> usize {
    mask.count_ones() as usize
}

/// Iterator over all submasks of `mask`, including `0` and `mask` itself.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// All `k`-element subsets of `{0, …, n-1}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_enumerates_power_set() {
        let all: Vec<u64> = submasks(0b1011).collect();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&0));
        assert!(all.contains(&0b1011));
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(6, 4).len(), 15);
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn index_round_trip() {
        let m = from_indices([0, 3, 5]);
        assert_eq!(indices(m), vec![0, 3, 5]);
        assert!(is_subset(bit(3), m));
        assert_eq!(count(m), 3);
        assert_eq!(full(3), 0b111);
    }
}
