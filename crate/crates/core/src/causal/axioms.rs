//! Exhaustive axiom checking.
//!
//! Every violated premise instance is reported once with the first witness
//! found in region order. Instances of axioms 4 and 7 range over nonempty
//! regions only.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::bits::{self, BitMatrix};
use super::paths::{nonempty_prec, Completeness};
use super::{lub, maximum_below, RegionId, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "1a")]
    A1a,
    #[serde(rename = "1b")]
    A1b,
    #[serde(rename = "1c")]
    A1c,
    #[serde(rename = "2")]
    A2,
    #[serde(rename = "3a")]
    A3a,
    #[serde(rename = "3b")]
    A3b,
    #[serde(rename = "4a")]
    A4a,
    #[serde(rename = "4b")]
    A4b,
    #[serde(rename = "5a")]
    A5a,
    #[serde(rename = "5b")]
    A5b,
    #[serde(rename = "5c")]
    A5c,
    #[serde(rename = "6a")]
    A6a,
    #[serde(rename = "6b")]
    A6b,
    #[serde(rename = "7")]
    A7,
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::A1a,
        Axiom::A1b,
        Axiom::A1c,
        Axiom::A2,
        Axiom::A3a,
        Axiom::A3b,
        Axiom::A4a,
        Axiom::A4b,
        Axiom::A5a,
        Axiom::A5b,
        Axiom::A5c,
        Axiom::A6a,
        Axiom::A6b,
        Axiom::A7,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::A1a => "1a",
            Axiom::A1b => "1b",
            Axiom::A1c => "1c",
            Axiom::A2 => "2",
            Axiom::A3a => "3a",
            Axiom::A3b => "3b",
            Axiom::A4a => "4a",
            Axiom::A4b => "4b",
            Axiom::A5a => "5a",
            Axiom::A5b => "5b",
            Axiom::A5c => "5c",
            Axiom::A6a => "6a",
            Axiom::A6b => "6b",
            Axiom::A7 => "7",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One failed instance. Witness layouts:
///
/// | axiom | witness |
/// |---|---|
/// | 1a | A ⊆ B ⊆ C, A ⊄ C |
/// | 1b | A |
/// | 1c | A, B mutually contained, distinct |
/// | 2 | X not containing the empty region |
/// | 3a | A, B without an upper bound |
/// | 3b | A, B whose upper bounds have no least member |
/// | 4a | A ≺ B ≺ C, A ⊀ C |
/// | 4b | A ≺ A |
/// | 5a | A ⊆ B ≺ C, A ⊀ C |
/// | 5b | A ⊆ B, C ≺ B, C ⊀ A |
/// | 5c | A ≺ C, B ≺ C, U = A ∪ B, U ⊀ C |
/// | 6a | A, B with nothing preceding A inside B |
/// | 6b | A, B with no largest such region |
/// | 7 | A ≺ C with no complete region |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<RegionId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    pub passed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct NamedViolation {
    axiom: Axiom,
    witness: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NamedReport {
    passed: bool,
    violations: Vec<NamedViolation>,
}

impl AxiomReport {
    pub fn of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    /// JSON form with region names in place of indices.
    pub fn to_json(&self, site: &Site) -> serde_json::Value {
        let named = NamedReport {
            passed: self.passed,
            violations: self
                .violations
                .iter()
                .map(|v| NamedViolation {
                    axiom: v.axiom,
                    witness: v.witness.iter().map(|&r| site.name(r).to_owned()).collect(),
                })
                .collect(),
        };
        serde_json::to_value(named).expect("report serializes")
    }
}

struct Checker<'a> {
    site: &'a Site,
    n: usize,
    e: usize,
    sub: &'a BitMatrix,
    sub_t: BitMatrix,
    prec: &'a BitMatrix,
    prec_t: BitMatrix,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn report(&mut self, axiom: Axiom, witness: &[usize]) {
        self.out.push(Violation {
            axiom,
            witness: witness.iter().map(|&i| RegionId(i)).collect(),
        });
    }

    fn partial_order(&mut self) {
        for a in 0..self.n {
            for b in bits::ones(self.sub.row(a)) {
                if let Some(c) =
                    bits::first_and_not(self.sub.row(b), self.sub.row(b), self.sub.row(a))
                {
                    self.report(Axiom::A1a, &[a, b, c]);
                }
            }
        }
        for a in 0..self.n {
            if !self.sub.get(a, a) {
                self.report(Axiom::A1b, &[a]);
            }
        }
        for a in 0..self.n {
            for b in bits::ones(self.sub.row(a)).filter(|&b| b > a) {
                if self.sub.get(b, a) {
                    self.report(Axiom::A1c, &[a, b]);
                }
            }
        }
    }

    fn minimum(&mut self) {
        for x in 0..self.n {
            if !self.sub.get(self.e, x) {
                self.report(Axiom::A2, &[x]);
            }
        }
    }

    /// Union table, `usize::MAX` where none exists.
    fn unions(&mut self) -> Vec<usize> {
        let n = self.n;
        let mut table = vec![usize::MAX; n * n];
        for a in 0..n {
            for b in a..n {
                let has_bound = self
                    .sub
                    .row(a)
                    .iter()
                    .zip(self.sub.row(b))
                    .any(|(x, y)| x & y != 0);
                match lub(self.sub, a, b) {
                    Some(u) => {
                        table[a * n + b] = u;
                        table[b * n + a] = u;
                    }
                    None if has_bound => self.report(Axiom::A3b, &[a, b]),
                    None => self.report(Axiom::A3a, &[a, b]),
                }
            }
        }
        table
    }

    fn strict_order(&mut self, strict: &BitMatrix) {
        for a in 0..self.n {
            for b in bits::ones(strict.row(a)) {
                if let Some(c) = bits::first_and_not(strict.row(b), strict.row(b), strict.row(a)) {
                    self.report(Axiom::A4a, &[a, b, c]);
                }
            }
        }
        for a in 0..self.n {
            if strict.get(a, a) {
                self.report(Axiom::A4b, &[a]);
            }
        }
    }

    fn mixed(&mut self, unions: &[usize]) {
        let n = self.n;
        for a in 0..n {
            for b in bits::ones(self.sub.row(a)) {
                if let Some(c) =
                    bits::first_and_not(self.prec.row(b), self.prec.row(b), self.prec.row(a))
                {
                    self.report(Axiom::A5a, &[a, b, c]);
                }
            }
        }
        for a in 0..n {
            for b in bits::ones(self.sub.row(a)) {
                if let Some(c) =
                    bits::first_and_not(self.prec_t.row(b), self.prec_t.row(b), self.prec_t.row(a))
                {
                    self.report(Axiom::A5b, &[a, b, c]);
                }
            }
        }
        let mut found = Vec::new();
        for c in 0..n {
            let before: Vec<usize> = bits::ones(self.prec_t.row(c)).collect();
            for (i, &a) in before.iter().enumerate() {
                for &b in &before[i..] {
                    let u = unions[a * n + b];
                    if u != usize::MAX && !self.prec.get(u, c) {
                        found.push([a, b, c, u]);
                    }
                }
            }
        }
        found.sort_unstable();
        for w in found {
            self.report(Axiom::A5c, &w);
        }
    }

    fn cuttings(&mut self) {
        for a in 0..self.n {
            for b in 0..self.n {
                let (before, inside) = (self.prec_t.row(a), self.sub_t.row(b));
                if !before.iter().zip(inside).any(|(x, y)| x & y != 0) {
                    self.report(Axiom::A6a, &[a, b]);
                } else if maximum_below(&self.sub_t, before, inside).is_none() {
                    self.report(Axiom::A6b, &[a, b]);
                }
            }
        }
    }

    fn completeness(&mut self, strict: &BitMatrix) {
        let n = self.n;
        let strict_t = strict.transpose();
        let mut needed = BitMatrix::new(n);
        for a in 0..n {
            for c in bits::ones(strict.row(a)) {
                if strict
                    .row(a)
                    .iter()
                    .zip(strict_t.row(c))
                    .any(|(x, y)| x & y != 0)
                {
                    needed.set(a, c, true);
                }
            }
        }
        let comp = Completeness::new(self.site);
        let mut covered = BitMatrix::new(n);
        for b in (0..n).filter(|&b| b != self.e) {
            let mut pairs = Vec::new();
            for a in bits::ones(strict_t.row(b)) {
                for c in bits::ones(strict.row(b)) {
                    if strict.get(a, c) && !covered.get(a, c) {
                        pairs.push((a, c));
                    }
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let blocked = comp.blocked_reach(b);
            for (a, c) in pairs {
                if Completeness::complete_with(&blocked, a, c) {
                    covered.set(a, c, true);
                }
            }
        }
        for a in 0..n {
            for c in bits::ones(needed.row(a)).filter(|&c| !covered.get(a, c)) {
                self.report(Axiom::A7, &[a, c]);
            }
        }
    }
}

/// Checks every axiom exhaustively.
pub fn check_axioms(site: &Site) -> AxiomReport {
    let mut checker = Checker {
        site,
        n: site.len(),
        e: site.empty().0,
        sub: site.subset_matrix(),
        sub_t: site.subset_matrix().transpose(),
        prec: site.prec_matrix(),
        prec_t: site.prec_matrix().transpose(),
        out: Vec::new(),
    };
    let strict = nonempty_prec(site);
    checker.partial_order();
    checker.minimum();
    let unions = checker.unions();
    checker.strict_order(&strict);
    checker.mixed(&unions);
    checker.cuttings();
    checker.completeness(&strict);
    let violations = checker.out;
    AxiomReport {
        passed: violations.is_empty(),
        violations,
    }
}
