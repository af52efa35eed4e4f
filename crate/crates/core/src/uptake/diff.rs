//! Token-level minimal-edit alignment and diff regions.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Match(usize, usize),
    Sub(usize, usize),
    Del(usize),
    Ins(usize),
}

/// Levenshtein alignment of `a` onto `b`. Among minimal-cost alignments the one with
/// the most matches wins; remaining ties prefer diagonal, then deletion.
pub fn align<K: PartialEq>(a: &[K], b: &[K]) -> Vec<Op> {
    let (n, m) = (a.len(), b.len());
    // (cost, -matches), compared lexicographically
    let mut dp = vec![vec![(0usize, 0isize); m + 1]; n + 1];
    for i in 1..=n {
        dp[i][0] = (i, 0);
    }
    for j in 1..=m {
        dp[0][j] = (j, 0);
    }
    for i in 1..=n {
        for j in 1..=m {
            let same = a[i - 1] == b[j - 1];
            let (c, k) = dp[i - 1][j - 1];
            let diag = if same { (c, k - 1) } else { (c + 1, k) };
            let del = (dp[i - 1][j].0 + 1, dp[i - 1][j].1);
            let ins = (dp[i][j - 1].0 + 1, dp[i][j - 1].1);
            dp[i][j] = diag.min(del).min(ins);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = a[i - 1] == b[j - 1];
            let (c, k) = dp[i - 1][j - 1];
            let diag = if same { (c, k - 1) } else { (c + 1, k) };
            if diag == dp[i][j] {
                ops.push(if same { Op::Match(i - 1, j - 1) } else { Op::Sub(i - 1, j - 1) });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && (dp[i - 1][j].0 + 1, dp[i - 1][j].1) == dp[i][j] {
            ops.push(Op::Del(i - 1));
            i -= 1;
        } else {
            ops.push(Op::Ins(j - 1));
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

/// One contiguous run of edits. `a`/`b` hold the edited token indices on each side;
/// `at` is the alignment cursor where the run starts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub at: (usize, usize),
    pub end: (usize, usize),
}

impl Region {
    /// Half-open token range covered on side `a` (an insertion point when empty).
    pub fn a_range(&self) -> (usize, usize) {
        (self.at.0, self.end.0)
    }

    pub fn b_range(&self) -> (usize, usize) {
        (self.at.1, self.end.1)
    }
}

/// Maximal runs of non-match operations.
pub fn regions(ops: &[Op]) -> Vec<Region> {
    let mut out = Vec::new();
    let mut cur: Option<Region> = None;
    let (mut i, mut j) = (0, 0);
    for op in ops {
        match *op {
            Op::Match(..) => {
                if let Some(mut r) = cur.take() {
                    r.end = (i, j);
                    out.push(r);
                }
                i += 1;
                j += 1;
            }
            other => {
                let r = cur.get_or_insert_with(|| Region { at: (i, j), ..Region::default() });
                match other {
                    Op::Sub(x, y) => {
                        r.a.push(x);
                        r.b.push(y);
                        i += 1;
                        j += 1;
                    }
                    Op::Del(x) => {
                        r.a.push(x);
                        i += 1;
                    }
                    Op::Ins(y) => {
                        r.b.push(y);
                        j += 1;
                    }
                    Op::Match(..) => unreachable!(),
                }
            }
        }
    }
    if let Some(mut r) = cur {
        r.end = (i, j);
        out.push(r);
    }
    out
}

/// Joins regions separated by at most `gap` matched tokens. The matched tokens in
/// between are not added to the edited index lists.
pub fn merge_close(regions: Vec<Region>, gap: usize) -> Vec<Region> {
    let mut out: Vec<Region> = Vec::new();
    for r in regions {
        match out.last_mut() {
            Some(prev) if r.at.0 - prev.end.0 <= gap => {
                prev.a.extend(r.a);
                prev.b.extend(r.b);
                prev.end = r.end;
            }
            _ => out.push(r),
        }
    }
    out
}
