//! Brute-force reference implementations for finite causal sites.
//!
//! Everything here works on plain boolean tables and quantifies literally,
//! without the bitset shortcuts or the reachability characterization used by
//! the library.

use std::collections::BTreeSet;

use kinorder_core::causal::{Axiom, RegionId, Site, Violation};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Tables {
    pub n: usize,
    pub e: usize,
    pub sub: Vec<Vec<bool>>,
    pub prec: Vec<Vec<bool>>,
}

impl Tables {
    pub fn of(site: &Site) -> Self {
        let n = site.len();
        let sub = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| site.subset(RegionId(a), RegionId(b)))
                    .collect()
            })
            .collect();
        let prec = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| site.prec(RegionId(a), RegionId(b)))
                    .collect()
            })
            .collect();
        Self {
            n,
            e: site.empty().0,
            sub,
            prec,
        }
    }

    pub fn nonempty(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| x != self.e).collect()
    }

    pub fn upper_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&u| self.sub[a][u] && self.sub[b][u])
            .collect()
    }

    /// First least upper bound by index.
    pub fn lub(&self, a: usize, b: usize) -> Option<usize> {
        let ub = self.upper_bounds(a, b);
        ub.iter()
            .copied()
            .find(|&u| ub.iter().all(|&v| self.sub[u][v]))
    }

    pub fn cut_candidates(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&d| self.prec[d][a] && self.sub[d][b])
            .collect()
    }

    pub fn cutting(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.cut_candidates(a, b);
        c.iter()
            .copied()
            .find(|&d| c.iter().all(|&x| self.sub[x][d]))
    }

    /// Whether ≺ restricted to nonempty regions has no cycle, self-loops
    /// included.
    pub fn acyclic(&self) -> bool {
        let ne = self.nonempty();
        let mut indeg: Vec<usize> = vec![0; self.n];
        for &a in &ne {
            for &b in &ne {
                if self.prec[a][b] {
                    indeg[b] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = ne.iter().copied().filter(|&x| indeg[x] == 0).collect();
        let mut seen = 0;
        while let Some(a) = stack.pop() {
            seen += 1;
            for &b in &ne {
                if self.prec[a][b] {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        seen == ne.len()
    }

    /// All causal paths from `a` to `c`. Needs an acyclic ≺.
    pub fn paths(&self, a: usize, c: usize) -> Vec<Vec<usize>> {
        fn go(t: &Tables, path: &mut Vec<usize>, c: usize, out: &mut Vec<Vec<usize>>) {
            let last = *path.last().unwrap();
            if last == c {
                out.push(path.clone());
            }
            for y in t.nonempty() {
                if t.prec[last][y] {
                    path.push(y);
                    go(t, path, c, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        if a != self.e && c != self.e {
            go(self, &mut vec![a], c, &mut out);
        }
        out
    }

    /// Every path from a to c has a supersequence path from a to c with a
    /// member inside b. Needs an acyclic ≺.
    pub fn complete(&self, b: usize, a: usize, c: usize) -> bool {
        let paths = self.paths(a, c);
        let good: Vec<&Vec<usize>> = paths
            .iter()
            .filter(|q| q.iter().any(|&x| self.sub[x][b]))
            .collect();
        paths
            .iter()
            .all(|p| good.iter().any(|q| is_subsequence(p, q)))
    }

    /// Axiom 7 premise pairs without a complete region.
    pub fn axiom7_failures(&self) -> Vec<(usize, usize)> {
        let ne = self.nonempty();
        let mut out = Vec::new();
        for &a in &ne {
            for &c in &ne {
                if !self.prec[a][c] || !ne.iter().any(|&d| self.prec[a][d] && self.prec[d][c]) {
                    continue;
                }
                if !ne
                    .iter()
                    .any(|&b| self.prec[a][b] && self.prec[b][c] && self.complete(b, a, c))
                {
                    out.push((a, c));
                }
            }
        }
        out
    }

    /// Violated axioms, found by literal quantification. Axiom 7 is only
    /// decided for acyclic ≺; `None` in the second slot otherwise.
    pub fn violated(&self) -> (BTreeSet<Axiom>, Option<bool>) {
        let n = self.n;
        let ne = self.nonempty();
        let mut v = BTreeSet::new();
        let all = 0..n;
        for a in all.clone() {
            if !self.sub[a][a] {
                v.insert(Axiom::A1b);
            }
            if !self.sub[self.e][a] {
                v.insert(Axiom::A2);
            }
            for b in all.clone() {
                if a != b && self.sub[a][b] && self.sub[b][a] {
                    v.insert(Axiom::A1c);
                }
                if self.upper_bounds(a, b).is_empty() {
                    v.insert(Axiom::A3a);
                } else if self.lub(a, b).is_none() {
                    v.insert(Axiom::A3b);
                }
                if self.cut_candidates(a, b).is_empty() {
                    v.insert(Axiom::A6a);
                } else if self.cutting(a, b).is_none() {
                    v.insert(Axiom::A6b);
                }
                for c in all.clone() {
                    if self.sub[a][b] && self.sub[b][c] && !self.sub[a][c] {
                        v.insert(Axiom::A1a);
                    }
                    if self.sub[a][b] && self.prec[b][c] && !self.prec[a][c] {
                        v.insert(Axiom::A5a);
                    }
                    if self.sub[a][b] && self.prec[c][b] && !self.prec[c][a] {
                        v.insert(Axiom::A5b);
                    }
                    if self.prec[a][c] && self.prec[b][c] {
                        if let Some(u) = self.lub(a, b) {
                            if !self.prec[u][c] {
                                v.insert(Axiom::A5c);
                            }
                        }
                    }
                }
            }
        }
        for &a in &ne {
            if self.prec[a][a] {
                v.insert(Axiom::A4b);
            }
            for &b in &ne {
                for &c in &ne {
                    if self.prec[a][b] && self.prec[b][c] && !self.prec[a][c] {
                        v.insert(Axiom::A4a);
                    }
                }
            }
        }
        let seven = if self.acyclic() {
            let fails = !self.axiom7_failures().is_empty();
            if fails {
                v.insert(Axiom::A7);
            }
            Some(fails)
        } else {
            None
        };
        (v, seven)
    }

    /// Whether a reported witness really violates its axiom.
    pub fn witness_valid(&self, violation: &Violation) -> bool {
        let w: Vec<usize> = violation.witness.iter().map(|r| r.0).collect();
        let ne = |x: usize| x != self.e;
        match (violation.axiom, w.as_slice()) {
            (Axiom::A1a, &[a, b, c]) => self.sub[a][b] && self.sub[b][c] && !self.sub[a][c],
            (Axiom::A1b, &[a]) => !self.sub[a][a],
            (Axiom::A1c, &[a, b]) => a != b && self.sub[a][b] && self.sub[b][a],
            (Axiom::A2, &[x]) => !self.sub[self.e][x],
            (Axiom::A3a, &[a, b]) => self.upper_bounds(a, b).is_empty(),
            (Axiom::A3b, &[a, b]) => {
                !self.upper_bounds(a, b).is_empty() && self.lub(a, b).is_none()
            }
            (Axiom::A4a, &[a, b, c]) => {
                ne(a) && ne(b) && ne(c) && self.prec[a][b] && self.prec[b][c] && !self.prec[a][c]
            }
            (Axiom::A4b, &[a]) => ne(a) && self.prec[a][a],
            (Axiom::A5a, &[a, b, c]) => self.sub[a][b] && self.prec[b][c] && !self.prec[a][c],
            (Axiom::A5b, &[a, b, c]) => self.sub[a][b] && self.prec[c][b] && !self.prec[c][a],
            (Axiom::A5c, &[a, b, c, u]) => {
                self.prec[a][c] && self.prec[b][c] && self.lub(a, b) == Some(u) && !self.prec[u][c]
            }
            (Axiom::A6a, &[a, b]) => self.cut_candidates(a, b).is_empty(),
            (Axiom::A6b, &[a, b]) => {
                !self.cut_candidates(a, b).is_empty() && self.cutting(a, b).is_none()
            }
            (Axiom::A7, &[a, c]) => {
                let premise = ne(a)
                    && ne(c)
                    && self.prec[a][c]
                    && self
                        .nonempty()
                        .iter()
                        .any(|&d| self.prec[a][d] && self.prec[d][c]);
                premise && (!self.acyclic() || self.axiom7_failures().contains(&(a, c)))
            }
            _ => false,
        }
    }
}

pub fn is_subsequence(p: &[usize], q: &[usize]) -> bool {
    let mut it = q.iter();
    p.iter().all(|x| it.any(|y| y == x))
}

/// All ≺-chains of nonempty regions up to `max_len`, by filtering every
/// sequence.
pub fn all_chains(t: &Tables, max_len: usize) -> BTreeSet<Vec<usize>> {
    let ne = t.nonempty();
    let mut out = BTreeSet::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for &x in &ne {
                let mut s = seq.clone();
                s.push(x);
                next.push(s);
            }
        }
        for s in &next {
            if s.windows(2).all(|w| t.prec[w[0]][w[1]]) {
                out.insert(s.clone());
            }
        }
        layer = next;
    }
    out
}

fn build(names: &[String], sub: &[Vec<bool>], prec: &[Vec<bool>]) -> Site {
    let mut sp = Vec::new();
    let mut pp = Vec::new();
    for (a, na) in names.iter().enumerate() {
        for (b, nb) in names.iter().enumerate() {
            if sub[a][b] {
                sp.push((na.clone(), nb.clone()));
            }
            if prec[a][b] {
                pp.push((na.clone(), nb.clone()));
            }
        }
    }
    Site::new(names, &names[0], &sp, &pp).unwrap()
}

/// All runs of `leaves` ordered leaves, A ≺ B when A ends more than `gap`
/// leaves before B starts.
pub fn interval_site(leaves: usize, gap: usize) -> Site {
    let mut runs = vec![None];
    for i in 0..leaves {
        for j in i..leaves {
            runs.push(Some((i, j)));
        }
    }
    let names: Vec<String> = runs
        .iter()
        .map(|r| r.map_or("e".to_owned(), |(i, j)| format!("[{i},{j}]")))
        .collect();
    let n = runs.len();
    let mut sub = vec![vec![false; n]; n];
    let mut prec = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            sub[a][b] = match (runs[a], runs[b]) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some((a0, a1)), Some((b0, b1))) => b0 <= a0 && a1 <= b1,
            };
            if let (Some((_, a1)), Some((b0, _))) = (runs[a], runs[b]) {
                prec[a][b] = a1 + gap < b0;
            }
        }
    }
    build(&names, &sub, &prec)
}

/// Power set of `k` points under a random strict order on the points; sets
/// precede each other when every point of one precedes every point of the
/// other.
pub fn strict_order_site<R: Rng>(k: usize, density: f64, rng: &mut R) -> Site {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut lt = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            if rng.random_bool(density) {
                lt[perm[i]][perm[j]] = true;
            }
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if lt[i][m] && lt[m][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let n = 1 << k;
    let names: Vec<String> = (0..n)
        .map(|s: usize| {
            if s == 0 {
                "e".to_owned()
            } else {
                format!("s{s:0k$b}")
            }
        })
        .collect();
    let points = |s: usize| (0..k).filter(move |&i| s >> i & 1 == 1);
    let sub: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a & !b == 0).collect())
        .collect();
    let prec: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| a != 0 && b != 0 && points(a).all(|i| points(b).all(|j| lt[i][j])))
                .collect()
        })
        .collect();
    build(&names, &sub, &prec)
}

/// Arbitrary relations on `n` regions; ≺ is kept acyclic when asked.
pub fn random_site<R: Rng>(n: usize, p_sub: f64, p_prec: f64, acyclic: bool, rng: &mut R) -> Site {
    let names: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 {
                "e".to_owned()
            } else {
                format!("r{i}")
            }
        })
        .collect();
    let mut sub = vec![vec![false; n]; n];
    let mut prec = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            sub[a][b] = a == b || a == 0 || rng.random_bool(p_sub);
            prec[a][b] = (!acyclic || a < b) && rng.random_bool(p_prec);
        }
    }
    build(&names, &sub, &prec)
}

/// Transitively closed acyclic ≺ with sparse extra containments, a family
/// where completeness often fails.
pub fn random_dag_site<R: Rng>(n: usize, p_prec: f64, p_sub: f64, rng: &mut R) -> Site {
    let names: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 {
                "e".to_owned()
            } else {
                format!("r{i}")
            }
        })
        .collect();
    let mut sub = vec![vec![false; n]; n];
    let mut prec = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            sub[a][b] = a == b || a == 0 || (a < b && rng.random_bool(p_sub));
            prec[a][b] = a != 0 && a < b && rng.random_bool(p_prec);
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if prec[a][m] && prec[m][b] {
                    prec[a][b] = true;
                }
            }
        }
    }
    build(&names, &sub, &prec)
}
