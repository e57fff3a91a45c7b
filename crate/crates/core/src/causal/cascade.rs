//! Cascade sites generated by repeated p-fold branching.
//!
//! Regions are the contiguous runs of leaves of the complete p-ary tree,
//! ordered left to right. Tree nodes are the aligned runs; the remaining runs
//! are the unions that sibling precedence forces into the site. Containment
//! is inclusion of runs, and A ≺ B when A ends before B starts.

use super::Site;
use crate::error::{domain, Result};

fn path_name(p: usize, path: &[usize]) -> String {
    let sep = if p > 10 { "." } else { "" };
    let digits: Vec<String> = path.iter().map(|d| d.to_string()).collect();
    format!(
        "U0{}{}",
        if path.is_empty() { "" } else { sep },
        digits.join(sep)
    )
}

fn leaf_path(p: usize, levels: usize, mut leaf: usize) -> Vec<usize> {
    let mut path = vec![0; levels];
    for slot in path.iter_mut().rev() {
        *slot = leaf % p;
        leaf /= p;
    }
    path
}

/// Cascade of `depth` levels: depth 1 is the root alone.
pub fn cascade_site(p: usize, depth: usize) -> Result<Site> {
    if p < 2 {
        return domain(format!("branching p = {p} must be at least 2"));
    }
    if depth < 1 {
        return domain("depth must be at least 1");
    }
    let levels = depth - 1;
    let leaves = u32::try_from(levels)
        .ok()
        .and_then(|l| p.checked_pow(l))
        .filter(|&l| l <= 4096)
        .ok_or_else(|| {
            crate::Error::Domain(format!("cascade p = {p}, depth = {depth} is too large"))
        })?;

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for level in 0..=levels {
        let width = p.pow((levels - level) as u32);
        for k in 0..leaves / width {
            let start = k * width;
            runs.push((start, start + width - 1));
            names.push(path_name(p, &leaf_path(p, levels, start)[..level]));
        }
    }
    let mut others: Vec<(usize, usize)> = (0..leaves)
        .flat_map(|i| (i..leaves).map(move |j| (i, j)))
        .filter(|r| !runs.contains(r))
        .collect();
    others.sort_unstable();
    for &(i, j) in &others {
        names.push(format!(
            "{}..{}",
            path_name(p, &leaf_path(p, levels, i)),
            path_name(p, &leaf_path(p, levels, j))
        ));
        runs.push((i, j));
    }

    let mut regions = vec!["empty".to_owned()];
    regions.extend(names);
    let mut subset = Vec::new();
    let mut prec = Vec::new();
    for (x, &(a0, a1)) in runs.iter().enumerate() {
        subset.push((0, x + 1));
        for (y, &(b0, b1)) in runs.iter().enumerate() {
            if b0 <= a0 && a1 <= b1 {
                subset.push((x + 1, y + 1));
            }
            if a1 < b0 {
                prec.push((x + 1, y + 1));
            }
        }
    }
    subset.push((0, 0));
    let named = |pairs: Vec<(usize, usize)>| -> Vec<(String, String)> {
        pairs
            .into_iter()
            .map(|(a, b)| (regions[a].clone(), regions[b].clone()))
            .collect()
    };
    Site::new(&regions, "empty", &named(subset), &named(prec))
}
