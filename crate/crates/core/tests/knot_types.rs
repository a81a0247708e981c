//! Knot types of the fixtures and constructions, identified by the
//! determinant of a projection.

mod common;

use trunkweave::cli::catalog;
use trunkweave::geometry::{
    connected_sum_presentation, embed_pattern, trunk_embedding, SolidTorusEmbedding,
};
use trunkweave::pattern::{cable_pattern, core_pattern, whitehead_pattern};

use common::{bareiss_determinant, knot_determinant};

#[test]
fn bareiss_matches_small_determinants() {
    assert_eq!(bareiss_determinant(vec![vec![2, 1], vec![1, 3]]), 5);
    assert_eq!(
        bareiss_determinant(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 4]]),
        -4
    );
    assert_eq!(bareiss_determinant(vec![vec![1, 2], vec![2, 4]]), 0);
}

#[test]
fn catalog_knot_types() {
    assert_eq!(knot_determinant(&catalog::unknot()), 1);
    assert_eq!(knot_determinant(&catalog::trefoil()), 3);
    assert_eq!(knot_determinant(&catalog::figure_eight()), 5);
}

#[test]
fn nontrivial_fixtures_have_trunk_four() {
    // determinant != 1 rules out the unknot, whose presentations are the only
    // ones that can have a level count of 2 everywhere; hence trunk >= 4, and
    // the shipped presentations realise 4
    for knot in [catalog::trefoil(), catalog::figure_eight()] {
        assert_ne!(knot_determinant(&knot), 1);
        assert_eq!(trunk_embedding(&knot).unwrap(), 4);
    }
}

#[test]
fn connected_sums_multiply_determinants() {
    let knots = [
        catalog::unknot(),
        catalog::trefoil(),
        catalog::figure_eight(),
    ];
    for a in &knots {
        for b in &knots {
            let sum = connected_sum_presentation(a, b).unwrap();
            assert_eq!(
                knot_determinant(&sum),
                knot_determinant(a) * knot_determinant(b)
            );
        }
    }
}

#[test]
fn satellites_of_the_planar_unknot() {
    // the tilted unknot is planar, so the transported frame is its Seifert
    // framing and the satellites are the textbook ones
    let torus = SolidTorusEmbedding::new(catalog::unknot(), None, 0).unwrap();
    let det = |p: &trunkweave::pattern::PatternCurve| {
        knot_determinant(&embed_pattern(&torus, p, 4).unwrap())
    };
    assert_eq!(det(&core_pattern()), 1);
    assert_eq!(det(&cable_pattern(2, 3).unwrap()), 3);
    assert_eq!(det(&cable_pattern(3, 2).unwrap()), 3);
    assert_eq!(det(&cable_pattern(2, 5).unwrap()), 5);
    assert_eq!(det(&whitehead_pattern()), 1);
}

#[test]
fn framing_twists_change_the_double() {
    // one full twist turns the untwisted double of the unknot into a twist
    // knot with determinant 3 or 5, depending on the clasp
    let torus = SolidTorusEmbedding::new(catalog::unknot(), None, 1).unwrap();
    let det = knot_determinant(&embed_pattern(&torus, &whitehead_pattern(), 4).unwrap());
    assert!(det == 3 || det == 5, "determinant {det}");
}

#[test]
fn satellite_of_the_trefoil_is_a_different_knot() {
    let torus = SolidTorusEmbedding::new(catalog::trefoil(), None, 0).unwrap();
    let k = embed_pattern(&torus, &cable_pattern(2, 3).unwrap(), 4).unwrap();
    // a 2-strand cable has odd determinant |q| for its twisting q, never 1 or 0 here
    let det = knot_determinant(&k);
    assert_eq!(det % 2, 1);
    assert_eq!(trunk_embedding(&k).unwrap(), 8);
}
