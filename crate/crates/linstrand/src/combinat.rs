//! Small combinatorial helpers shared across modules: binomials, subset
//! enumeration in lexicographic order, and monomial bases in graded-lex
//! order with x_0 > x_1 > ... > x_n.

/// Binomial coefficient as usize; saturates are not needed at our sizes but
/// we guard against overflow anyway.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.try_into().expect("binomial overflow")
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a sorted k-subset in the lexicographic enumeration.
pub fn subset_index(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut idx = 0;
    let mut prev: isize = -1;
    for (i, &s) in subset.iter().enumerate() {
        for v in (prev + 1) as usize..s {
            idx += binomial(n - v - 1, k - i - 1);
        }
        prev = s as isize;
    }
    idx
}

/// Exponent vectors of all degree-d monomials in `nvars` variables, in
/// graded-lex order (all the same degree, so lex with x_0 largest).
pub fn monomial_exponents(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        // larger exponent on the earlier variable comes first
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        return out;
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn subsets_lex_order_and_index() {
        let s = subsets(4, 2);
        assert_eq!(
            s,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        for (i, sub) in s.iter().enumerate() {
            assert_eq!(subset_index(4, sub), i);
        }
    }

    #[test]
    fn degree_two_monomials_in_three_vars() {
        let m = monomial_exponents(3, 2);
        assert_eq!(
            m,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
    }

    #[test]
    fn monomial_count_matches_binomial() {
        for n in 1..6usize {
            for d in 0..5u32 {
                assert_eq!(
                    monomial_exponents(n, d).len(),
                    binomial(n + d as usize - 1, d as usize)
                );
            }
        }
    }
}
