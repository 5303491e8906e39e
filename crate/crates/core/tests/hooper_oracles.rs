use bm_core::diagrams::{build_d0, build_t0};
use bm_core::hooper::{
    build_augmented, enumerate_hats, moduli, modulus_formula, orthogonal_direction,
    orthogonal_presentation, EdgeKind, EdgeLabel,
};
use bm_core::surface::{build_surface, SurfaceParams};
use bm_core::tracer::cylinders;
use std::collections::BTreeSet;
use std::f64::consts::PI;

const SURFACES: [(usize, usize); 6] = [(3, 4), (4, 3), (3, 5), (5, 3), (4, 5), (5, 4)];

fn split_reds(word: &[EdgeLabel]) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mut reds = Vec::new();
    let mut gaps = Vec::new();
    let mut greens = Vec::new();
    for l in word {
        match *l {
            EdgeLabel::Red(r) => {
                if !reds.is_empty() {
                    gaps.push(std::mem::take(&mut greens));
                }
                greens.clear();
                reds.push(r);
            }
            EdgeLabel::Green(g) => greens.push(g),
        }
    }
    (reds, gaps)
}

#[test]
fn orthogonal_traces_reproduce_t0_and_d0() {
    for (m, n) in SURFACES {
        let o = orthogonal_presentation(m, n).unwrap();
        let t0 = build_t0(m, n);
        let d0 = build_d0(m, n);
        let open: Vec<usize> = (0..o.rects.len())
            .filter(|&r| o.rects[r].width > 0.0 && o.rects[r].height > 0.0)
            .collect();
        let mut traced = 0;
        for k in 1..40 {
            let theta = k as f64 / 40.0 * PI / n as f64;
            let r = open[(k * 7) % open.len()];
            let rect = &o.rects[r];
            let Ok(word) = o.trace(
                r,
                (rect.width * 0.37, rect.height * 0.61),
                orthogonal_direction(n, theta),
                200,
            ) else {
                continue;
            };
            traced += 1;
            let (reds, gaps) = split_reds(&word);
            assert!(
                t0.is_admissible(&reds),
                "M({m},{n}) theta={theta}: {reds:?}"
            );
            for (pair, greens) in reds.windows(2).zip(&gaps) {
                let expect: Vec<u32> = d0.label(pair[0], pair[1]).into_iter().collect();
                assert_eq!(&expect, greens, "M({m},{n}) arrow {pair:?}");
            }
        }
        assert!(traced >= 30, "M({m},{n}): only {traced} traces");
    }
}

#[test]
fn labels_of_augmented_diagram_are_complete() {
    for (m, n) in SURFACES {
        let d = build_augmented(m, n).unwrap();
        let reds: BTreeSet<u32> = d
            .edges
            .iter()
            .filter_map(|e| match e.label {
                Some(EdgeLabel::Red(r)) => Some(r),
                _ => None,
            })
            .collect();
        let greens: BTreeSet<u32> = d
            .edges
            .iter()
            .filter_map(|e| match e.label {
                Some(EdgeLabel::Green(g)) => Some(g),
                _ => None,
            })
            .collect();
        assert_eq!(reds, (1..=(n * (m - 1)) as u32).collect());
        assert_eq!(greens, (1..=(m * (n - 1)) as u32).collect());
    }
}

#[test]
fn every_horizontal_edge_has_a_hat() {
    for (m, n) in SURFACES {
        let d = build_augmented(m, n).unwrap();
        let hats = enumerate_hats(&d).unwrap();
        let expected = d
            .edges
            .iter()
            .filter(|e| e.white.1 == e.black.1 && e.kind != EdgeKind::CompletelyDegenerate)
            .count();
        assert_eq!(hats.len(), expected, "M({m},{n})");
        assert!(hats.iter().all(|h| (1..=4).contains(&h.case)));
    }
}

#[test]
fn polygon_cylinders_match_hooper_moduli() {
    for (m, n) in SURFACES {
        let s = build_surface(SurfaceParams::new(m, n).unwrap()).unwrap();
        let f = modulus_formula(m, n);
        for theta in [0.0, PI / n as f64] {
            let cyl = cylinders(&s, theta).unwrap();
            assert!(!cyl.is_empty());
            for c in &cyl {
                assert!(
                    (c.modulus - f).abs() < 1e-9,
                    "M({m},{n}) theta={theta}: {} vs {f}",
                    c.modulus
                );
            }
        }
        for (node, x) in moduli(m, n).unwrap() {
            assert!((x - f).abs() < 1e-9, "M({m},{n}) node {node:?}");
        }
    }
}

#[test]
fn modulus_closed_form_for_m43() {
    let expected = 2.0 / (PI / 3.0).tan() + 2.0 * (PI / 4.0).cos() / (PI / 3.0).sin();
    assert!((modulus_formula(4, 3) - expected).abs() < 1e-12);
}
