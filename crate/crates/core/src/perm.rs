//! Small permutation toolkit: lexicographic successor, Lehmer ranking, and
//! validation. Everything here works on `0..n` index permutations.

/// `n!` as a `u128`. Panics on overflow (n > 34).
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).expect("factorial overflow")
}

/// Rearranges `perm` into its lexicographic successor. Returns `false` (and
/// leaves the slice sorted ascending) when `perm` was the last permutation.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Lexicographic rank of a permutation of `0..n` (Lehmer code).
pub fn rank(perm: &[usize]) -> u128 {
    let n = perm.len();
    let mut used = vec![false; n];
    let mut r = 0u128;
    for (pos, &v) in perm.iter().enumerate() {
        let smaller_unused = used[..v].iter().filter(|u| !**u).count() as u128;
        r += smaller_unused * factorial(n - 1 - pos);
        used[v] = true;
    }
    r
}

/// Inverse of [`rank`]: the permutation of `0..n` at lexicographic position `r`.
pub fn unrank(mut r: u128, n: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for pos in 0..n {
        let f = factorial(n - 1 - pos);
        let idx = (r / f) as usize;
        r %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Inverse permutation: `inv[perm[i]] = i`.
pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub fn is_permutation(seq: &[usize]) -> bool {
    let mut seen = vec![false; seq.len()];
    seq.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}
