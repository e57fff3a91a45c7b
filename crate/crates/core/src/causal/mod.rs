//! Finite causal sites: regions with a containment order ⊆ and a precedence
//! order ≺.
//!
//! Relations are stored as dense boolean matrices so every axiom reduces to
//! an exhaustive check. The distinguished empty region both precedes and is
//! preceded by every region; these pairs are implied and cannot be unset.

mod axioms;
mod bits;
mod cascade;
mod padic;
mod paths;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use bits::BitMatrix;

pub use axioms::{check_axioms, Axiom, AxiomReport, Violation};
pub use cascade::cascade_site;
pub use padic::{padic_compare, PAdicInt};
pub use paths::{causal_paths, is_causal_path, is_complete};

/// Index of a region within its site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    names: Vec<String>,
    index: HashMap<String, usize>,
    empty: usize,
    subset: BitMatrix,
    prec: BitMatrix,
}

/// Exchange format of a site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteFile {
    pub regions: Vec<String>,
    pub empty: String,
    pub subset: Vec<(String, String)>,
    pub prec: Vec<(String, String)>,
}

impl Site {
    /// Builds a site from named regions and relation pairs `(a, b)` meaning
    /// a ⊆ b and a ≺ b respectively.
    pub fn new<S: AsRef<str>>(
        regions: &[S],
        empty: &str,
        subset: &[(S, S)],
        prec: &[(S, S)],
    ) -> Result<Self> {
        let names: Vec<String> = regions.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Structural(format!("duplicate region {name:?}")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Structural(format!("unknown region {name:?}")))
        };
        let empty = lookup(empty)?;
        let n = names.len();
        let mut site = Self {
            names: names.clone(),
            index: index.clone(),
            empty,
            subset: BitMatrix::new(n),
            prec: BitMatrix::new(n),
        };
        for (a, b) in subset {
            site.subset
                .set(lookup(a.as_ref())?, lookup(b.as_ref())?, true);
        }
        for (a, b) in prec {
            site.prec
                .set(lookup(a.as_ref())?, lookup(b.as_ref())?, true);
        }
        site.normalize_empty();
        Ok(site)
    }

    fn normalize_empty(&mut self) {
        for x in 0..self.names.len() {
            self.prec.set(self.empty, x, true);
            self.prec.set(x, self.empty, true);
        }
    }

    pub fn from_file(file: &SiteFile) -> Result<Self> {
        Self::new(&file.regions, &file.empty, &file.subset, &file.prec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SiteFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("site file: {e}")))?;
        Self::from_file(&file)
    }

    /// Exchange form; ≺ pairs involving the empty region are left implicit.
    pub fn to_file(&self) -> SiteFile {
        let mut subset = Vec::new();
        let mut prec = Vec::new();
        for a in self.regions() {
            for b in self.regions() {
                if self.subset(a, b) {
                    subset.push((self.name(a).to_owned(), self.name(b).to_owned()));
                }
                if self.prec(a, b) && !self.is_empty_region(a) && !self.is_empty_region(b) {
                    prec.push((self.name(a).to_owned(), self.name(b).to_owned()));
                }
            }
        }
        SiteFile {
            regions: self.names.clone(),
            empty: self.names[self.empty].clone(),
            subset,
            prec,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("site serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn regions(&self) -> impl Iterator<Item = RegionId> + Clone {
        (0..self.names.len()).map(RegionId)
    }

    pub fn nonempty_regions(&self) -> impl Iterator<Item = RegionId> + Clone + '_ {
        self.regions().filter(move |&r| !self.is_empty_region(r))
    }

    pub fn empty(&self) -> RegionId {
        RegionId(self.empty)
    }

    pub fn is_empty_region(&self, r: RegionId) -> bool {
        r.0 == self.empty
    }

    pub fn name(&self, r: RegionId) -> &str {
        &self.names[r.0]
    }

    pub fn id(&self, name: &str) -> Option<RegionId> {
        self.index.get(name).copied().map(RegionId)
    }

    /// a ⊆ b.
    pub fn subset(&self, a: RegionId, b: RegionId) -> bool {
        self.subset.get(a.0, b.0)
    }

    /// a ≺ b.
    pub fn prec(&self, a: RegionId, b: RegionId) -> bool {
        self.prec.get(a.0, b.0)
    }

    pub fn set_subset(&mut self, a: RegionId, b: RegionId, value: bool) {
        self.subset.set(a.0, b.0, value);
    }

    /// Sets a ≺ b. Pairs involving the empty region are fixed; returns
    /// whether the relation changed.
    pub fn set_prec(&mut self, a: RegionId, b: RegionId, value: bool) -> bool {
        if a.0 == self.empty || b.0 == self.empty || self.prec(a, b) == value {
            return false;
        }
        self.prec.set(a.0, b.0, value);
        true
    }

    /// Least upper bound of `a` and `b` under ⊆.
    pub fn union(&self, a: RegionId, b: RegionId) -> Result<RegionId> {
        lub(&self.subset, a.0, b.0).map(RegionId).ok_or_else(|| {
            Error::Structural(format!(
                "regions {} and {} have no union",
                self.name(a),
                self.name(b)
            ))
        })
    }

    /// The cutting B_A of `a` by `b`: the ⊆-largest D with D ≺ a and D ⊆ b.
    pub fn cutting(&self, a: RegionId, b: RegionId) -> Result<RegionId> {
        let prec_t = self.prec.transpose();
        let subset_t = self.subset.transpose();
        maximum_below(&subset_t, prec_t.row(a.0), subset_t.row(b.0))
            .map(RegionId)
            .ok_or_else(|| {
                Error::Structural(format!(
                "no cutting of {} by {}: the regions preceding {} inside {} have no largest member",
                self.name(a),
                self.name(b),
                self.name(a),
                self.name(b)
            ))
            })
    }

    pub(crate) fn subset_matrix(&self) -> &BitMatrix {
        &self.subset
    }

    pub(crate) fn prec_matrix(&self) -> &BitMatrix {
        &self.prec
    }
}

/// Least upper bound of a and b given the ⊆ matrix (row x = supersets of x).
pub(crate) fn lub(subset: &BitMatrix, a: usize, b: usize) -> Option<usize> {
    let ra = subset.row(a);
    let rb = subset.row(b);
    let common: Vec<u64> = ra.iter().zip(rb).map(|(x, y)| x & y).collect();
    let found = bits::ones(&common).find(|&u| bits::is_within(&common, subset.row(u)));
    found
}

/// A member of `a_set ∩ b_set` containing every other member, if any.
/// `contained` has row d = regions contained in d.
pub(crate) fn maximum_below(contained: &BitMatrix, a_set: &[u64], b_set: &[u64]) -> Option<usize> {
    let candidates: Vec<u64> = a_set.iter().zip(b_set).map(|(x, y)| x & y).collect();
    let found = bits::ones(&candidates).find(|&d| bits::is_within(&candidates, contained.row(d)));
    found
}
