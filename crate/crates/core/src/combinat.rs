//! Enumeration helpers shared by the tree generator and the recursions.

/// All set partitions of `items`, each block listed in input order and blocks
/// ordered by their first element.
pub(crate) fn set_partitions(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                block.push(x);
            } else {
                remaining.push(x);
            }
        }
        for mut tail in set_partitions(&remaining) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// Integer partitions of `n` into positive parts, parts non-increasing.
pub(crate) fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Groups a sorted slice into `(value, multiplicity)` runs.
pub(crate) fn runs<T: PartialEq + Clone>(sorted: &[T]) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for x in sorted {
        match out.last_mut() {
            Some((last, count)) if last == x => *count += 1,
            _ => out.push((x.clone(), 1)),
        }
    }
    out
}

/// Non-decreasing index tuples of length `k` over `0..n`: the size-`k`
/// multisets of an `n`-element set.
pub(crate) fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(n, k, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Size-`k` subsets of `items`, preserving order.
pub(crate) fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    fn rec(items: &[u32], k: usize, start: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..items.len() {
            prefix.push(items[i]);
            rec(items, k, i + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All permutations of `1..=k` in lexicographic order.
pub(crate) fn permutations(k: u32) -> Vec<Vec<u32>> {
    fn rec(left: &mut Vec<u32>, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            rec(left, prefix, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..=k).collect(), &mut Vec::new(), &mut out);
    out
}

/// Cartesian product of option lists.
pub(crate) fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}
