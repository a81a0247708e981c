//! Exhaustive check of the combinatorial lemma about disjoint surfaces on the
//! sphere.
//!
//! `m` disjoint circles on `S²` are encoded by their nesting forest. The
//! `m + 1` complementary regions are region `0` (outside every root) and
//! region `c + 1` (inside circle `c`, outside its children). Every circle
//! separates a surface region from a gap region, so a configuration is a
//! forest, one of its two alternating colorings, and an essential/inessential
//! label per circle.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_CIRCLES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("circle count {0} is out of range 1..={MAX_CIRCLES}")]
    OutOfRange(usize),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
}

/// Containment forest of disjoint circles: `parent[c]` is the innermost circle
/// enclosing circle `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingForest {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    canonical_code: String,
}

impl NestingForest {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self, SphereError> {
        let m = parent.len();
        let mut children = vec![Vec::new(); m];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= m || p == c {
                    return Err(SphereError::InvalidForest(format!(
                        "circle {c} has invalid parent {p}"
                    )));
                }
                children[p].push(c);
            }
        }
        for start in 0..m {
            let mut c = start;
            let mut steps = 0;
            while let Some(p) = parent[c] {
                c = p;
                steps += 1;
                if steps > m {
                    return Err(SphereError::InvalidForest(format!(
                        "containment cycle through circle {start}"
                    )));
                }
            }
        }
        let mut forest = NestingForest {
            parent,
            children,
            canonical_code: String::new(),
        };
        forest.canonical_code = forest.compute_code();
        Ok(forest)
    }

    /// Parses a canonical code such as `(())()`; circles are numbered in
    /// preorder.
    pub fn from_code(code: &str) -> Result<Self, SphereError> {
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for ch in code.chars() {
            match ch {
                '(' => {
                    parent.push(stack.last().copied());
                    stack.push(parent.len() - 1);
                }
                ')' => {
                    stack.pop().ok_or_else(|| {
                        SphereError::InvalidForest(format!("unbalanced code {code}"))
                    })?;
                }
                _ => {
                    return Err(SphereError::InvalidForest(format!(
                        "unexpected character {ch:?} in code"
                    )))
                }
            }
        }
        if !stack.is_empty() {
            return Err(SphereError::InvalidForest(format!(
                "unbalanced code {code}"
            )));
        }
        Self::from_parents(parent)
    }

    fn subtree_code(&self, c: usize) -> String {
        let mut codes: Vec<String> = self.children[c]
            .iter()
            .map(|&d| self.subtree_code(d))
            .collect();
        codes.sort();
        format!("({})", codes.concat())
    }

    fn compute_code(&self) -> String {
        let mut codes: Vec<String> = self.roots().map(|c| self.subtree_code(c)).collect();
        codes.sort();
        codes.concat()
    }

    pub fn circle_count(&self) -> usize {
        self.parent.len()
    }

    pub fn region_count(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn parent(&self, c: usize) -> Option<usize> {
        self.parent[c]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, c: usize) -> &[usize] {
        &self.children[c]
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&c| self.parent[c].is_none())
    }

    pub fn canonical_code(&self) -> &str {
        &self.canonical_code
    }

    /// Number of circles enclosing `c` (roots have depth 0).
    pub fn depth(&self, c: usize) -> usize {
        let mut d = 0;
        let mut cur = c;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Region just inside circle `c`.
    pub fn inner_region(c: usize) -> usize {
        c + 1
    }

    /// Region just outside circle `c`.
    pub fn outer_region(&self, c: usize) -> usize {
        self.parent[c].map_or(0, |p| p + 1)
    }

    /// Circles bounding a region.
    pub fn region_boundary(&self, region: usize) -> Vec<usize> {
        if region == 0 {
            self.roots().collect()
        } else {
            let c = region - 1;
            let mut b = vec![c];
            b.extend_from_slice(&self.children[c]);
            b
        }
    }

    /// Bitmask of the regions inside circle `c`.
    fn inside_mask(&self, c: usize) -> u32 {
        let mut mask = 1u32 << (c + 1);
        for &d in &self.children[c] {
            mask |= self.inside_mask(d);
        }
        mask
    }
}

/// All isomorphism classes of unordered rooted forests on `m` nodes.
pub fn enumerate_forests(m: usize) -> Result<Vec<NestingForest>, SphereError> {
    if !(1..=MAX_CIRCLES).contains(&m) {
        return Err(SphereError::OutOfRange(m));
    }
    // trees[n]: canonical codes of rooted trees with n nodes
    let mut trees: Vec<Vec<String>> = vec![Vec::new(); m + 1];
    let mut forests: Vec<Vec<String>> = vec![Vec::new(); m + 1];
    forests[0].push(String::new());
    for n in 1..=m {
        trees[n] = forests[n - 1].iter().map(|f| format!("({f})")).collect();
        let mut codes = BTreeSet::new();
        let mut chosen = Vec::new();
        multisets(&trees, n, (n, usize::MAX), &mut chosen, &mut codes);
        forests[n] = codes.into_iter().collect();
    }
    forests[m]
        .iter()
        .map(|code| NestingForest::from_code(code))
        .collect()
}

// Multisets of trees with total size `remaining`, listed in non-increasing
// (size, index) order to avoid permutations of the same multiset.
fn multisets(
    trees: &[Vec<String>],
    remaining: usize,
    bound: (usize, usize),
    chosen: &mut Vec<String>,
    out: &mut BTreeSet<String>,
) {
    if remaining == 0 {
        let mut parts = chosen.clone();
        parts.sort();
        out.insert(parts.concat());
        return;
    }
    for size in (1..=remaining.min(bound.0)).rev() {
        let limit = if size == bound.0 { bound.1 } else { usize::MAX };
        for (idx, code) in trees[size].iter().enumerate() {
            if idx > limit {
                break;
            }
            chosen.push(code.clone());
            multisets(trees, remaining - size, (size, idx), chosen, out);
            chosen.pop();
        }
    }
}

/// A forest with a surface/gap coloring of its regions and an essential flag
/// per circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereConfiguration {
    forest: NestingForest,
    surface: Vec<bool>,
    essential: Vec<bool>,
}

impl SphereConfiguration {
    pub fn new(
        forest: NestingForest,
        surface: Vec<bool>,
        essential: Vec<bool>,
    ) -> Result<Self, SphereError> {
        let m = forest.circle_count();
        if surface.len() != m + 1 || essential.len() != m {
            return Err(SphereError::InvalidConfiguration(format!(
                "expected {} region colors and {m} circle labels",
                m + 1
            )));
        }
        for c in 0..m {
            if surface[NestingForest::inner_region(c)] == surface[forest.outer_region(c)] {
                return Err(SphereError::InvalidConfiguration(format!(
                    "circle {c} does not separate a surface from a gap"
                )));
            }
        }
        Ok(SphereConfiguration {
            forest,
            surface,
            essential,
        })
    }

    /// Configuration number `coloring` (0 or 1) with essential circles given by
    /// the bits of `mask`.
    pub fn from_labels(
        forest: &NestingForest,
        coloring: usize,
        mask: u32,
    ) -> Result<Self, SphereError> {
        let surface = colorings(forest)
            .into_iter()
            .nth(coloring)
            .ok_or_else(|| SphereError::InvalidConfiguration(format!("no coloring {coloring}")))?;
        let essential = (0..forest.circle_count())
            .map(|c| mask >> c & 1 == 1)
            .collect();
        Self::new(forest.clone(), surface, essential)
    }

    pub fn forest(&self) -> &NestingForest {
        &self.forest
    }

    pub fn is_surface(&self, region: usize) -> bool {
        self.surface[region]
    }

    pub fn is_essential(&self, c: usize) -> bool {
        self.essential[c]
    }

    pub fn surface_regions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.surface.len()).filter(|&r| self.surface[r])
    }

    pub fn gap_regions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.surface.len()).filter(|&r| !self.surface[r])
    }

    /// Number of essential boundary circles of a region.
    pub fn essential_count(&self, region: usize) -> usize {
        self.forest
            .region_boundary(region)
            .into_iter()
            .filter(|&c| self.essential[c])
            .count()
    }

    /// Regions on the side of circle `c` away from `region`, which must be
    /// one of the two regions adjacent to `c`.
    pub fn far_side(&self, c: usize, region: usize) -> Vec<usize> {
        let mask = self.far_mask(c, region);
        (0..self.surface.len())
            .filter(|&r| mask >> r & 1 == 1)
            .collect()
    }

    fn far_mask(&self, c: usize, region: usize) -> u32 {
        let all = (1u32 << self.surface.len()) - 1;
        let inside = self.forest.inside_mask(c);
        if region == NestingForest::inner_region(c) {
            all & !inside
        } else {
            inside
        }
    }

    /// Pairs `(surface region, essential boundary circle)` whose far side holds
    /// no other surface with an essential boundary.
    pub fn far_side_violations(&self) -> Vec<(usize, usize)> {
        let eligible: u32 = self
            .surface_regions()
            .filter(|&r| self.essential_count(r) > 0)
            .fold(0, |acc, r| acc | 1 << r);
        let mut violations = Vec::new();
        for j in self.surface_regions() {
            for c in self.forest.region_boundary(j) {
                if self.essential[c] && self.far_mask(c, j) & eligible & !(1 << j) == 0 {
                    violations.push((j, c));
                }
            }
        }
        violations
    }

    /// Both hypotheses of the lemma: the far-side condition for every essential
    /// boundary, and at least one surface with an essential boundary.
    pub fn hypothesis_holds(&self) -> bool {
        self.surface_regions().any(|r| self.essential_count(r) > 0)
            && self.far_side_violations().is_empty()
    }

    /// Sum of `2 - n_j` over surfaces with an odd number `n_j` of essential
    /// boundaries.
    pub fn conclusion_value(&self) -> i64 {
        self.surface_regions()
            .map(|r| self.essential_count(r))
            .filter(|n| n % 2 == 1)
            .map(|n| 2 - n as i64)
            .sum()
    }

    pub fn region_euler(&self, region: usize) -> i64 {
        region_euler(&self.forest, region)
    }

    /// Euler characteristics of all regions add up to that of the sphere.
    pub fn euler_sum_check(&self) -> bool {
        (0..self.surface.len())
            .map(|r| self.region_euler(r))
            .sum::<i64>()
            == 2
    }
}

/// Euler characteristic of a planar region: two minus its boundary count.
pub fn region_euler(forest: &NestingForest, region: usize) -> i64 {
    2 - forest.region_boundary(region).len() as i64
}

/// The two alternating surface/gap colorings; coloring 0 makes region 0 a surface.
pub fn colorings(forest: &NestingForest) -> [Vec<bool>; 2] {
    let m = forest.circle_count();
    let mut first = vec![true; m + 1];
    for c in 0..m {
        // region inside c sits at depth(c) + 1 in the region tree
        first[NestingForest::inner_region(c)] = forest.depth(c) % 2 == 1;
    }
    let second = first.iter().map(|s| !s).collect();
    [first, second]
}

/// A configuration identified by forest code, coloring index and essential mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationId {
    pub code: String,
    pub coloring: usize,
    pub mask: u32,
}

/// Which branch of the lemma's case analysis a configuration falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofCase {
    AllEssential,
    MixedEverySurfaceTouched,
    SurfaceWithoutEssential,
}

impl SphereConfiguration {
    pub fn proof_case(&self) -> ProofCase {
        if self.essential.iter().all(|&e| e) {
            ProofCase::AllEssential
        } else if self.surface_regions().all(|r| self.essential_count(r) > 0) {
            ProofCase::MixedEverySurfaceTouched
        } else {
            ProofCase::SurfaceWithoutEssential
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub max_circles: usize,
    pub forests_checked: u64,
    pub configurations_checked: u64,
    pub hypothesis_passing: u64,
    /// Hypothesis-passing configurations with a non-positive conclusion value.
    pub counterexamples: Vec<ConfigurationId>,
    pub euler_failures: Vec<ConfigurationId>,
    /// Hypothesis-passing counts per proof case, in [`ProofCase`] order.
    pub case_counts: [u64; 3],
    /// Case-2 configurations (all surfaces touched, some circle inessential)
    /// whose conclusion value is below 2.
    pub case2_violations: Vec<ConfigurationId>,
    /// All-essential configurations with a gap bounded by fewer than 2 circles.
    pub case1_gap_violations: Vec<ConfigurationId>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
            && self.euler_failures.is_empty()
            && self.case2_violations.is_empty()
            && self.case1_gap_violations.is_empty()
    }

    fn merge(mut self, other: LemmaReport) -> LemmaReport {
        self.forests_checked += other.forests_checked;
        self.configurations_checked += other.configurations_checked;
        self.hypothesis_passing += other.hypothesis_passing;
        self.counterexamples.extend(other.counterexamples);
        self.euler_failures.extend(other.euler_failures);
        for k in 0..3 {
            self.case_counts[k] += other.case_counts[k];
        }
        self.case2_violations.extend(other.case2_violations);
        self.case1_gap_violations.extend(other.case1_gap_violations);
        self
    }
}

fn check_forest(forest: &NestingForest) -> LemmaReport {
    let m = forest.circle_count();
    let mut report = LemmaReport {
        forests_checked: 1,
        ..Default::default()
    };
    for coloring in 0..2 {
        for mask in 0..(1u32 << m) {
            let config = SphereConfiguration::from_labels(forest, coloring, mask)
                .expect("enumerated configurations are valid");
            let id = || ConfigurationId {
                code: forest.canonical_code().to_string(),
                coloring,
                mask,
            };
            report.configurations_checked += 1;
            if !config.euler_sum_check() {
                report.euler_failures.push(id());
            }
            if !config.hypothesis_holds() {
                continue;
            }
            report.hypothesis_passing += 1;
            let value = config.conclusion_value();
            if value <= 0 {
                report.counterexamples.push(id());
            }
            match config.proof_case() {
                ProofCase::AllEssential => {
                    report.case_counts[0] += 1;
                    if config
                        .gap_regions()
                        .any(|g| forest.region_boundary(g).len() < 2)
                    {
                        report.case1_gap_violations.push(id());
                    }
                }
                ProofCase::MixedEverySurfaceTouched => {
                    report.case_counts[1] += 1;
                    if value < 2 {
                        report.case2_violations.push(id());
                    }
                }
                ProofCase::SurfaceWithoutEssential => report.case_counts[2] += 1,
            }
        }
    }
    report
}

/// Checks every configuration with at most `max_m` circles.
pub fn exhaustive_check(max_m: usize) -> Result<LemmaReport, SphereError> {
    if !(1..=MAX_CIRCLES).contains(&max_m) {
        return Err(SphereError::OutOfRange(max_m));
    }
    let mut total = LemmaReport {
        max_circles: max_m,
        ..Default::default()
    };
    for m in 1..=max_m {
        let forests = enumerate_forests(m)?;
        let reports: Vec<LemmaReport> = forests.par_iter().map(check_forest).collect();
        for r in reports {
            total = total.merge(r);
        }
    }
    Ok(total)
}
