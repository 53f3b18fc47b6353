//! Isomorphism search for small labeled graphs.
//!
//! Graphs are given as square label matrices (the diagonal may carry node
//! labels). Nodes are refined by the multiset of labels in their row, then a
//! backtracking search extends partial maps that agree on every assigned pair.

use super::CoxeterSystem;

/// Every bijection `p` with `a[i][j] == b[p[i]][p[j]]` for all `i, j`, up to
/// `limit` results.
pub fn matrix_isomorphisms<L: Ord + Clone>(a: &[Vec<L>], b: &[Vec<L>], limit: usize) -> Vec<Vec<usize>> {
    let n = a.len();
    if b.len() != n || limit == 0 {
        return Vec::new();
    }
    let signature = |m: &[Vec<L>], i: usize| {
        let mut row: Vec<L> = m[i].iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| l.clone()).collect();
        row.sort();
        (m[i][i].clone(), row)
    };
    let sig_a: Vec<_> = (0..n).map(|i| signature(a, i)).collect();
    let sig_b: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Vec::new();
    }
    // Assign nodes with the rarest signature first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (sig_b.iter().filter(|s| **s == sig_a[i]).count(), i));
    let candidates: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| sig_b[j] == sig_a[i]).collect()).collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    extend(a, b, &order, &candidates, 0, &mut map, &mut used, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend<L: Ord + Clone>(
    a: &[Vec<L>],
    b: &[Vec<L>],
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if depth == order.len() {
        out.push(map.clone());
        return;
    }
    let i = order[depth];
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&k| a[i][k] == b[j][map[k]] && a[k][i] == b[map[k]][j]);
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        extend(a, b, order, candidates, depth + 1, map, used, out, limit);
        used[j] = false;
        map[i] = usize::MAX;
        if out.len() >= limit {
            return;
        }
    }
}

/// A label-preserving bijection from the generators of `a` to those of `b`:
/// generator `i` of `a` corresponds to generator `p[i]` of `b`.
pub fn find_isomorphism(a: &CoxeterSystem, b: &CoxeterSystem) -> Option<Vec<usize>> {
    matrix_isomorphisms(a.orders(), b.orders(), 1).pop()
}

/// All label-preserving bijections between two systems.
pub fn all_isomorphisms(a: &CoxeterSystem, b: &CoxeterSystem) -> Vec<Vec<usize>> {
    matrix_isomorphisms(a.orders(), b.orders(), usize::MAX)
}

/// Whether two systems have isomorphic labeled diagrams.
pub fn are_isomorphic(a: &CoxeterSystem, b: &CoxeterSystem) -> bool {
    find_isomorphism(a, b).is_some()
}
