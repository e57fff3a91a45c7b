//! Causal paths and completeness.
//!
//! A causal path is a non-empty sequence of nonempty regions, each
//! preceding the next. A refinement of a path from A to C is another path
//! from A to C that contains the original as a subsequence. B is complete
//! for A ≺ C when every path from A to C has a refinement with a member
//! contained in B.
//!
//! A path P has such a refinement exactly when one of its members lies in B,
//! or some region Y ⊆ B can be spliced in: X ≺⁺ Y ≺⁺ X′ for consecutive
//! members X, X′ (or X ≺⁺ Y ≺⁺ X for a single member, which only happens
//! when ≺ has cycles). So B fails to be complete iff A reaches C through
//! members and steps that admit no such splice, which is a reachability
//! question instead of a search over all paths.

use super::bits::{self, BitMatrix};
use super::{RegionId, Site};
use crate::error::{domain, Result};

pub fn is_causal_path(site: &Site, sequence: &[RegionId]) -> bool {
    !sequence.is_empty()
        && sequence.iter().all(|&r| !site.is_empty_region(r))
        && sequence.windows(2).all(|w| site.prec(w[0], w[1]))
}

/// Every causal path with at most `max_len` members, in depth-first order.
pub fn causal_paths(site: &Site, max_len: usize) -> Vec<Vec<RegionId>> {
    fn extend(site: &Site, path: &mut Vec<RegionId>, max_len: usize, out: &mut Vec<Vec<RegionId>>) {
        out.push(path.clone());
        if path.len() == max_len {
            return;
        }
        let last = *path.last().expect("paths are non-empty");
        for next in site.nonempty_regions() {
            if site.prec(last, next) {
                path.push(next);
                extend(site, path, max_len, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    for start in site.nonempty_regions() {
        extend(site, &mut vec![start], max_len, &mut out);
    }
    out
}

/// ≺ restricted to nonempty regions.
pub(crate) fn nonempty_prec(site: &Site) -> BitMatrix {
    let mut m = site.prec_matrix().clone();
    let e = site.empty().0;
    for x in 0..site.len() {
        m.set(e, x, false);
        m.set(x, e, false);
    }
    m
}

/// Precomputed reachability for completeness queries on one site.
pub(crate) struct Completeness<'a> {
    site: &'a Site,
    prec: BitMatrix,
    reach: BitMatrix,
    reach_t: BitMatrix,
    contained: BitMatrix,
}

impl<'a> Completeness<'a> {
    pub fn new(site: &'a Site) -> Self {
        let prec = nonempty_prec(site);
        let reach = prec.closure();
        let reach_t = reach.transpose();
        let contained = site.subset_matrix().transpose();
        Self {
            site,
            prec,
            reach,
            reach_t,
            contained,
        }
    }

    /// Closure of the "unrescuable" graph for candidate `b`: entry (x, y) is
    /// set iff some path from x to y has no member in b and admits no splice.
    /// Also returns which regions are usable as members of such a path.
    pub fn blocked_reach(&self, b: usize) -> (BitMatrix, Vec<bool>) {
        let n = self.site.len();
        let e = self.site.empty().0;
        let mut inside = self.contained.row(b).to_vec();
        inside[e / 64] &= !(1 << (e % 64));

        let usable: Vec<bool> = (0..n)
            .map(|x| {
                x != e
                    && !self.site.subset_matrix().get(x, b)
                    && !bits::intersects3(self.reach.row(x), &inside, self.reach_t.row(x))
            })
            .collect();
        let mut graph = BitMatrix::new(n);
        for x in (0..n).filter(|&x| usable[x]) {
            for y in bits::ones(self.prec.row(x)).filter(|&y| usable[y]) {
                if !bits::intersects3(self.reach.row(x), &inside, self.reach_t.row(y)) {
                    graph.set(x, y, true);
                }
            }
        }
        (graph.closure(), usable)
    }

    pub fn complete_with(blocked: &(BitMatrix, Vec<bool>), a: usize, c: usize) -> bool {
        let (reach, usable) = blocked;
        if !usable[a] || !usable[c] {
            return true;
        }
        !(a == c || reach.get(a, c))
    }
}

/// Whether `b` is complete with respect to the causal pair `a ≺ c`.
pub fn is_complete(site: &Site, b: RegionId, a: RegionId, c: RegionId) -> Result<bool> {
    if !(site.prec(a, b) && site.prec(b, c)) {
        return domain(format!(
            "completeness needs {} ≺ {} ≺ {}",
            site.name(a),
            site.name(b),
            site.name(c)
        ));
    }
    if site.is_empty_region(a) || site.is_empty_region(c) {
        return Ok(true);
    }
    let comp = Completeness::new(site);
    let blocked = comp.blocked_reach(b.0);
    Ok(Completeness::complete_with(&blocked, a.0, c.0))
}
