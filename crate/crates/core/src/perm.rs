//! Permutation enumeration with signs, shared by Leibniz determinant
//! expansions and column determinants of operator matrices.

/// Calls `f(perm, sign)` for every permutation of `0..n`.
/// `perm[c]` is the row index paired with column `c`.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], i64)) {
    let mut used = vec![false; n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    rec(n, &mut used, &mut stack, 1, &mut f);

    fn rec(
        n: usize,
        used: &mut Vec<bool>,
        stack: &mut Vec<usize>,
        sign: i64,
        f: &mut impl FnMut(&[usize], i64),
    ) {
        if stack.len() == n {
            f(stack, sign);
            return;
        }
        let unused: Vec<usize> = (0..n).filter(|&r| !used[r]).collect();
        for (offset, &r) in unused.iter().enumerate() {
            // Choosing the `offset`-th smallest unused row adds `offset`
            // inversions (each smaller unused row appears later).
            let new_sign = if offset % 2 == 0 { sign } else { -sign };
            used[r] = true;
            stack.push(r);
            rec(n, used, stack, new_sign, f);
            stack.pop();
            used[r] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_signs() {
        let mut count = 0;
        let mut sign_sum = 0i64;
        for_each_permutation(4, |_, s| {
            count += 1;
            sign_sum += s;
        });
        assert_eq!(count, 24);
        assert_eq!(sign_sum, 0);
    }

    #[test]
    fn identity_is_even_and_swap_is_odd() {
        let mut seen = Vec::new();
        for_each_permutation(2, |p, s| seen.push((p.to_vec(), s)));
        assert_eq!(seen, vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
    }
}
