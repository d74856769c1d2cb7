//! Perfect matchings in square bipartite graphs.

/// The lexicographically least perfect matching of rows to columns using only
/// allowed cells, as `result[row] = column`.
pub fn least_perfect_matching(allowed: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    for row in 0..n {
        let col = (0..n).find(|&c| {
            allowed[row][c] && !fixed.contains(&c) && completes(allowed, &[fixed.as_slice(), &[c]].concat())
        })?;
        fixed.push(col);
    }
    Some(fixed)
}

/// `true` iff the rows after `prefix` can be matched to the unused columns.
fn completes(allowed: &[Vec<bool>], prefix: &[usize]) -> bool {
    let n = allowed.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (r, &c) in prefix.iter().enumerate() {
        owner[c] = Some(r);
    }
    let locked = prefix.len();
    (locked..n).all(|row| {
        let mut seen = vec![false; n];
        augment(allowed, row, locked, &mut owner, &mut seen)
    })
}

/// Kuhn's augmenting-path step; columns owned by the fixed prefix stay put.
fn augment(allowed: &[Vec<bool>], row: usize, locked: usize, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for c in 0..allowed.len() {
        if !allowed[row][c] || seen[c] {
            continue;
        }
        seen[c] = true;
        let free = match owner[c] {
            None => true,
            Some(r) if r >= locked => augment(allowed, r, locked, owner, seen),
            Some(_) => false,
        };
        if free {
            owner[c] = Some(row);
            return true;
        }
    }
    false
}
