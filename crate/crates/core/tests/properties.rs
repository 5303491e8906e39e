use bm_core::diagrams::{build_t0, build_ti, sector_permutation};
use bm_core::farey::{itinerary, itinerary_interval, reflection, FareyMap};
use bm_core::renorm::{derive, generate, normalize, Generator};
use bm_core::surface::{build_surface, SurfaceParams};
use bm_core::tracer::{sector_of, trace_seeded};
use bm_core::verify::random_admissible_word;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const SURFACES: [(usize, usize); 6] = [(3, 4), (4, 3), (3, 5), (5, 3), (4, 5), (5, 4)];

fn surface_index() -> impl Strategy<Value = (usize, usize)> {
    (0..SURFACES.len()).prop_map(|k| SURFACES[k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sector_permutations_are_row_preserving_involutions((m, n) in surface_index(), i in 0usize..5) {
        let i = i % n;
        let p = sector_permutation(m, n, i);
        prop_assert!(p.compose(&p).is_identity());
        let t0 = build_t0(m, n);
        let ti = build_ti(m, n, i);
        for (r0, ri) in t0.grid.iter().zip(&ti.grid) {
            let mut a: Vec<u32> = r0.iter().map(|&l| p.apply(l)).collect();
            let mut b = ri.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn generation_round_trips((m, n) in surface_index(), seed in any::<u64>(), len in 4usize..40) {
        let g = Generator::new(m, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_admissible_word(g.pair.dual.t0(), len, &mut rng);
        for i in 1..m {
            let up = generate(m, n, i, &w).unwrap();
            prop_assert_eq!(&up, &g.to_primal(i, &w).unwrap());
            let back = normalize(n, m, &derive(m, n, &up).unwrap()).unwrap();
            prop_assert_eq!(back, (i, w.clone()));
        }
    }

    #[test]
    fn derivation_commutes_with_shifts((m, n) in surface_index(), seed in any::<u64>(), cut in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_admissible_word(&build_t0(m, n), 60, &mut rng);
        let whole = derive(m, n, &w).unwrap();
        let tail = derive(m, n, &w[cut..]).unwrap();
        prop_assert!(whole.ends_with(&tail));
    }

    #[test]
    fn traces_are_deterministic((m, n) in surface_index(), theta in 0.01f64..3.13, seed in any::<u64>()) {
        let s = build_surface(SurfaceParams::new(m, n).unwrap()).unwrap();
        let a = trace_seeded(&s, theta, 50, seed);
        let b = trace_seeded(&s, theta, 50, seed);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn itinerary_interval_contains_direction((m, n) in surface_index(), theta in 0.001f64..(PI - 0.001)) {
        if let Ok(it) = itinerary(m, n, theta, 6) {
            let (lo, hi) = itinerary_interval(m, n, &it.pairs).unwrap();
            let t = reflection(m, n, it.b0).act_angle(theta);
            prop_assert!(lo - 1e-12 <= t && t <= hi + 1e-12, "{} not in [{}, {}]", t, lo, hi);
            prop_assert_eq!(it.b0, sector_of(theta, n).0);
        }
    }

    #[test]
    fn farey_branches_map_onto_standard_sector((m, n) in surface_index(), u in 0.001f64..0.999) {
        let map = FareyMap::new(m, n).unwrap();
        let theta = u * PI / n as f64;
        if let Ok((image, a, b)) = map.apply(theta) {
            prop_assert!((0.0..=PI / n as f64 + 1e-12).contains(&image));
            let br = map.branch(a, b).unwrap();
            prop_assert!(br.domain.0 - 1e-12 <= theta && theta <= br.domain.1 + 1e-12);
        }
    }
}
