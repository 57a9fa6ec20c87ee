//! Koszul signs, permutations and unshuffles.
//!
//! A permutation is a list `perm` with `perm[p]` the original position of
//! the element placed at position `p`.  The Koszul sign of `perm` is the
//! sign `e` with `v_1 ⊙ ... ⊙ v_n = e · v_perm[0] ⊙ ... ⊙ v_perm[n-1]` in
//! the free graded-commutative algebra.

use crate::error::{Error, Result};

pub fn parities(degrees: &[i64]) -> Vec<bool> {
    degrees.iter().map(|d| d.rem_euclid(2) == 1).collect()
}

/// `true` when the Koszul sign is negative.
pub fn koszul_odd(perm: &[usize], odd: &[bool]) -> bool {
    let mut s = false;
    for p in 0..perm.len() {
        if !odd[perm[p]] {
            continue;
        }
        for q in p + 1..perm.len() {
            if perm[p] > perm[q] && odd[perm[q]] {
                s = !s;
            }
        }
    }
    s
}

/// Koszul sign as `±1`; validates that `perm` is a permutation.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i32> {
    if perm.len() != degrees.len() {
        return Err(Error::Invalid("permutation and degree list differ in length".into()));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(if koszul_odd(perm, &parities(degrees)) { -1 } else { 1 })
}

/// Sign of moving the (increasing) positions `chosen` to the front while
/// keeping both blocks in order.
pub fn front_sign(odd: &[bool], chosen: &[usize]) -> bool {
    let mut s = false;
    let mut odd_left_behind = 0usize;
    let mut c = 0;
    for (p, &o) in odd.iter().enumerate() {
        if c < chosen.len() && chosen[c] == p {
            if o && odd_left_behind % 2 == 1 {
                s = !s;
            }
            c += 1;
        } else if o {
            odd_left_behind += 1;
        }
    }
    s
}

/// All `k`-subsets of `0..n`, each increasing, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Complement of an increasing subset of `0..n`.
pub fn complement(n: usize, chosen: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - chosen.len());
    let mut c = 0;
    for p in 0..n {
        if c < chosen.len() && chosen[c] == p {
            c += 1;
        } else {
            out.push(p);
        }
    }
    out
}

/// `(k, n-k)`-unshuffles as full permutations, lexicographic in the first block.
pub fn unshuffles(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
        .into_iter()
        .map(|c| {
            let rest = complement(n, &c);
            c.into_iter().chain(rest).collect()
        })
        .collect()
}

/// `(j_1, ..., j_k)`-unshuffles: ordered partitions of `0..n` into blocks of
/// the given sizes, each block increasing.  Returned as the blocks.
pub fn multi_unshuffles(sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fill_blocks(&(0..n).collect::<Vec<_>>(), sizes, &mut acc, &mut out);
    out
}

fn fill_blocks(
    remaining: &[usize],
    sizes: &[usize],
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if sizes.is_empty() {
        out.push(acc.clone());
        return;
    }
    for c in combinations(remaining.len(), sizes[0]) {
        let block: Vec<usize> = c.iter().map(|&i| remaining[i]).collect();
        let rest: Vec<usize> = complement(remaining.len(), &c).iter().map(|&i| remaining[i]).collect();
        acc.push(block);
        fill_blocks(&rest, &sizes[1..], acc, out);
        acc.pop();
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Ordered compositions of `n` into `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if n < k {
        return out;
    }
    // Choose k-1 cut points among the n-1 gaps.
    for cuts in combinations(n - 1, k - 1) {
        let mut parts = Vec::with_capacity(k);
        let mut last = 0;
        for c in cuts {
            parts.push(c + 1 - last);
            last = c + 1;
        }
        parts.push(n - last);
        out.push(parts);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_of_odds_is_negative() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]).unwrap(), 1);
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(unshuffles(5, 2).len(), 10);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(multi_unshuffles(&[1, 2, 1]).len(), 12);
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn unshuffle_order_is_lexicographic() {
        let u = unshuffles(3, 1);
        assert_eq!(u, vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]);
    }

    #[test]
    fn front_sign_matches_koszul() {
        let odd = [true, false, true, true];
        for k in 0..=4 {
            for c in combinations(4, k) {
                let perm: Vec<usize> = c.iter().copied().chain(complement(4, &c)).collect();
                assert_eq!(front_sign(&odd, &c), koszul_odd(&perm, &odd));
            }
        }
    }
}
