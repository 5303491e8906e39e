use bm_core::diagrams::admissible_in;
use bm_core::error::Error;
use bm_core::linalg::Vec2;
use bm_core::surface::{build_surface, SurfaceParams};
use bm_core::tracer::{realize_periodic, realize_word, trace, trace_seeded};
use std::f64::consts::PI;

#[test]
fn example_word_is_traced_near_thirteen_degrees() {
    let s = build_surface(SurfaceParams::new(4, 3).unwrap()).unwrap();
    let word = [1, 6, 7, 8, 7, 8, 5, 4, 5, 2];
    assert_eq!(admissible_in(4, 3, &word), vec![0]);
    let hit = (0..=100)
        .map(|k| (12.0 + k as f64 * 0.02).to_radians())
        .find_map(|theta| realize_word(&s, theta, &word).unwrap().map(|w| (theta, w)));
    let (theta, w) = hit.expect("no direction near 13 degrees realizes the word");
    assert_eq!(w.labels[..word.len()], word);
    let again = trace(&s, w.start_poly, w.start, theta, word.len()).unwrap();
    assert_eq!(again.labels, word);
}

#[test]
fn traced_words_stay_in_their_sector() {
    for (m, n) in [(4, 3), (3, 4), (5, 3)] {
        let s = build_surface(SurfaceParams::new(m, n).unwrap()).unwrap();
        for k in 0..n {
            let theta = (k as f64 + 0.41) * PI / n as f64;
            let w = trace_seeded(&s, theta, 300, 11).unwrap();
            assert!(
                admissible_in(m, n, &w.labels).contains(&k),
                "M({m},{n}) sector {k}"
            );
        }
    }
}

#[test]
fn seeded_traces_are_deterministic() {
    let s = build_surface(SurfaceParams::new(3, 5).unwrap()).unwrap();
    assert_eq!(
        trace_seeded(&s, 0.2, 200, 5).unwrap(),
        trace_seeded(&s, 0.2, 200, 5).unwrap()
    );
}

#[test]
fn reversed_direction_reverses_word() {
    let s = build_surface(SurfaceParams::new(4, 3).unwrap()).unwrap();
    let theta = 0.31;
    let w = trace_seeded(&s, theta, 60, 2).unwrap();
    let last = w.crossings.last().unwrap();
    let into = s.sides[s.pairing[last.side]].poly;
    let p = last.point + s.gluing_translation(last.side) + 1e-6 * Vec2::from_angle(theta);
    let back = trace(&s, into, p, theta + PI, 60).unwrap();
    let mut rev = w.labels.clone();
    rev.reverse();
    assert_eq!(back.labels, rev);
}

#[test]
fn periodic_words_for_row_pairs() {
    let s = build_surface(SurfaceParams::new(3, 4).unwrap()).unwrap();
    let w = realize_periodic(&s, 1, 2, 3).unwrap();
    assert_eq!(w.labels, [1, 2, 1, 2, 1, 2]);
    assert!(matches!(
        realize_periodic(&s, 1, 5, 3),
        Err(Error::NotCoAdjacent(1, 5))
    ));
}
