use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use trunkweave::spherelemma::{
    colorings, enumerate_forests, exhaustive_check, NestingForest, SphereConfiguration,
};

// Rooted unlabeled forests on m nodes.
const FOREST_COUNTS: [usize; 13] = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766, 12486];

// Canonical code straight from a parent array.
fn code_of(parent: &[Option<usize>]) -> String {
    fn tree(c: usize, parent: &[Option<usize>]) -> String {
        let mut kids: Vec<String> = (0..parent.len())
            .filter(|&d| parent[d] == Some(c))
            .map(|d| tree(d, parent))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    let mut roots: Vec<String> = (0..parent.len())
        .filter(|&c| parent[c].is_none())
        .map(|c| tree(c, parent))
        .collect();
    roots.sort();
    roots.concat()
}

fn acyclic(parent: &[Option<usize>]) -> bool {
    (0..parent.len()).all(|start| {
        let mut c = start;
        for _ in 0..=parent.len() {
            match parent[c] {
                None => return true,
                Some(p) => c = p,
            }
        }
        false
    })
}

// Every labeled forest on m nodes, as parent arrays.
fn labeled_forests(m: usize) -> Vec<Vec<Option<usize>>> {
    let choices = m + 1;
    let mut out = Vec::new();
    for mut n in 0..choices.pow(m as u32) {
        let parent: Vec<Option<usize>> = (0..m)
            .map(|_| {
                let d = n % choices;
                n /= choices;
                (d < m).then_some(d)
            })
            .collect();
        if (0..m).all(|c| parent[c] != Some(c)) && acyclic(&parent) {
            out.push(parent);
        }
    }
    out
}

#[test]
fn forest_enumeration_counts() {
    for m in 1..=12 {
        let forests = enumerate_forests(m).unwrap();
        assert_eq!(forests.len(), FOREST_COUNTS[m], "m = {m}");
        let codes: BTreeSet<&str> = forests.iter().map(|f| f.canonical_code()).collect();
        assert_eq!(codes.len(), forests.len());
    }
}

#[test]
fn enumeration_agrees_with_labeled_forests() {
    for m in 1..=5 {
        let labeled = labeled_forests(m);
        // Cayley: (m + 1)^(m - 1) labeled rooted forests
        assert_eq!(labeled.len(), (m + 1).pow(m as u32 - 1));
        let naive: BTreeSet<String> = labeled.iter().map(|p| code_of(p)).collect();
        let ours: BTreeSet<String> = enumerate_forests(m)
            .unwrap()
            .iter()
            .map(|f| f.canonical_code().to_string())
            .collect();
        assert_eq!(naive, ours, "m = {m}");
    }
}

#[test]
fn exhaustive_check_visits_every_configuration() {
    let report = exhaustive_check(7).unwrap();
    let expected: u64 = (1..=7)
        .map(|m| FOREST_COUNTS[m] as u64 * 2 * (1u64 << m))
        .sum();
    assert_eq!(report.configurations_checked, expected);
    assert_eq!(
        report.forests_checked,
        (1..=7).map(|m| FOREST_COUNTS[m] as u64).sum::<u64>()
    );
    assert!(report.passed());
    assert_eq!(
        report.case_counts.iter().sum::<u64>(),
        report.hypothesis_passing
    );
}

#[test]
fn out_of_range_is_rejected() {
    assert!(exhaustive_check(0).is_err());
    assert!(exhaustive_check(13).is_err());
}

// Region graph: regions are nodes, circle c joins its two sides.
struct RegionGraph {
    ends: Vec<(usize, usize)>,
}

impl RegionGraph {
    fn new(parent: &[Option<usize>]) -> Self {
        let ends = (0..parent.len())
            .map(|c| (c + 1, parent[c].map_or(0, |p| p + 1)))
            .collect();
        RegionGraph { ends }
    }

    fn regions(&self) -> usize {
        self.ends.len() + 1
    }

    fn boundary(&self, r: usize) -> Vec<usize> {
        (0..self.ends.len())
            .filter(|&c| self.ends[c].0 == r || self.ends[c].1 == r)
            .collect()
    }

    // Regions reachable from `from` without crossing circle `cut`.
    fn side(&self, from: usize, cut: usize) -> Vec<bool> {
        let mut seen = vec![false; self.regions()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(r) = queue.pop_front() {
            for (c, &(a, b)) in self.ends.iter().enumerate() {
                if c == cut {
                    continue;
                }
                let next = if a == r {
                    b
                } else if b == r {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }
}

// Lemma hypothesis and conclusion from the region graph alone.
fn oracle(parent: &[Option<usize>], surface: &[bool], essential: &[bool]) -> (bool, i64) {
    let g = RegionGraph::new(parent);
    let n_ess = |r: usize| g.boundary(r).iter().filter(|&&c| essential[c]).count();
    let touched: Vec<bool> = (0..g.regions())
        .map(|r| surface[r] && n_ess(r) > 0)
        .collect();
    let mut hypothesis = touched.iter().any(|&t| t);
    for j in (0..g.regions()).filter(|&r| surface[r]) {
        for c in g.boundary(j).into_iter().filter(|&c| essential[c]) {
            let (a, b) = g.ends[c];
            let far = g.side(if a == j { b } else { a }, c);
            if !(0..g.regions()).any(|r| far[r] && r != j && touched[r]) {
                hypothesis = false;
            }
        }
    }
    let value = (0..g.regions())
        .filter(|&r| surface[r])
        .map(n_ess)
        .filter(|n| n % 2 == 1)
        .map(|n| 2 - n as i64)
        .sum();
    (hypothesis, value)
}

#[test]
fn configurations_agree_with_region_graph_oracle() {
    for m in 1..=6 {
        for forest in enumerate_forests(m).unwrap() {
            for (coloring, surface) in colorings(&forest).iter().enumerate() {
                for mask in 0..1u32 << m {
                    let config = SphereConfiguration::from_labels(&forest, coloring, mask).unwrap();
                    let essential: Vec<bool> = (0..m).map(|c| mask >> c & 1 == 1).collect();
                    let (h, v) = oracle(forest.parents(), surface, &essential);
                    assert_eq!(
                        config.hypothesis_holds(),
                        h,
                        "{} {coloring} {mask}",
                        forest.canonical_code()
                    );
                    assert_eq!(config.conclusion_value(), v);
                    if h {
                        assert!(
                            v > 0,
                            "counterexample {} {coloring} {mask}",
                            forest.canonical_code()
                        );
                    }
                }
            }
        }
    }
}

fn parent_strategy() -> impl Strategy<Value = Vec<Option<usize>>> {
    // parent of circle c is an earlier circle or none, so always acyclic
    (1usize..=12).prop_flat_map(|m| {
        (0..m)
            .map(|c| (0..=c).prop_map(move |p| (p < c).then_some(p)))
            .collect::<Vec<_>>()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn code_round_trips(parent in parent_strategy()) {
        let forest = NestingForest::from_parents(parent.clone()).unwrap();
        prop_assert_eq!(forest.canonical_code(), code_of(&parent));
        let back = NestingForest::from_code(forest.canonical_code()).unwrap();
        prop_assert_eq!(back.canonical_code(), forest.canonical_code());
    }

    #[test]
    fn colorings_alternate_and_euler_sums_to_two(parent in parent_strategy(), mask in any::<u32>()) {
        let forest = NestingForest::from_parents(parent).unwrap();
        let m = forest.circle_count();
        let [a, b] = colorings(&forest);
        for c in 0..m {
            let (inner, outer) = (NestingForest::inner_region(c), forest.outer_region(c));
            prop_assert_ne!(a[inner], a[outer]);
            prop_assert_ne!(b[inner], b[outer]);
        }
        let config = SphereConfiguration::from_labels(&forest, 0, mask & ((1 << m) - 1)).unwrap();
        prop_assert!(config.euler_sum_check());
    }

    #[test]
    fn hypothesis_implies_positive_conclusion(parent in parent_strategy(), coloring in 0usize..2, mask in any::<u32>()) {
        let forest = NestingForest::from_parents(parent).unwrap();
        let m = forest.circle_count();
        let config = SphereConfiguration::from_labels(&forest, coloring, mask & ((1 << m) - 1)).unwrap();
        if config.hypothesis_holds() {
            prop_assert!(config.conclusion_value() > 0);
        }
    }
}
