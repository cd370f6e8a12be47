use imgtorque::edgemap::{Bin, OrientedEdgeMap};
use imgtorque::extrema::find_extrema;
use imgtorque::raster::FloatMap;
use imgtorque::torque::{
    default_scales_for, patch_torque_naive, reduce_volume, torque_map_fast, torque_map_naive,
    torque_volume, Patch, SummedAreaTable, TorquePrecompute,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_edges(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> OrientedEdgeMap {
    let mut e = OrientedEdgeMap::empty(w, h);
    for y in 0..h {
        for x in 0..w {
            if rng.gen_bool(density) {
                e.set(x, y, Bin::new(rng.gen_range(0..8)));
            }
        }
    }
    e
}

#[test]
fn fast_map_matches_direct_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..6 {
        let density = rng.gen_range(0.02..0.4);
        let e = random_edges(&mut rng, 64, 64, density);
        let pre = TorquePrecompute::build(&e);
        for side in [3, 9, 21, 45] {
            for alpha in [1.0, 2.0] {
                let fast = torque_map_fast(&pre, side, alpha).unwrap();
                let naive = torque_map_naive(&e, side, alpha).unwrap();
                for (a, b) in fast.data().iter().zip(naive.data()) {
                    assert!((a - b).abs() <= 1e-6, "side {side} alpha {alpha}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn non_square_maps_match_at_the_borders() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = random_edges(&mut rng, 37, 23, 0.2);
    let pre = TorquePrecompute::build(&e);
    let fast = torque_map_fast(&pre, 23, 1.5).unwrap();
    for (x, y) in [(0, 0), (36, 22), (0, 22), (18, 11), (36, 0)] {
        let naive = patch_torque_naive(&e, Patch::new(x as i64, y as i64, 23).unwrap(), 1.5).unwrap();
        assert!((fast.get(x, y) as f64 - naive).abs() < 1e-6);
    }
}

#[test]
fn reversed_orientations_negate_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let e = random_edges(&mut rng, 50, 40, 0.15);
    let a = torque_map_fast(&TorquePrecompute::build(&e), 15, 2.0).unwrap();
    let b = torque_map_fast(&TorquePrecompute::build(&e.flipped()), 15, 2.0).unwrap();
    assert!(a.data().iter().zip(b.data()).all(|(x, y)| *x == -*y));
}

#[test]
fn shifting_the_edges_shifts_the_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut e = OrientedEdgeMap::empty(60, 60);
    let mut shifted = OrientedEdgeMap::empty(60, 60);
    for y in 15..40 {
        for x in 15..40 {
            if rng.gen_bool(0.3) {
                let bin = Bin::new(rng.gen_range(0..8));
                e.set(x, y, bin);
                shifted.set(x + 7, y + 4, bin);
            }
        }
    }
    let a = torque_map_fast(&TorquePrecompute::build(&e), 11, 2.0).unwrap();
    let b = torque_map_fast(&TorquePrecompute::build(&shifted), 11, 2.0).unwrap();
    for y in 6..48 {
        for x in 6..45 {
            assert!((a.get(x, y) - b.get(x + 7, y + 4)).abs() < 1e-5);
        }
    }
}

#[test]
fn single_scale_volume_is_the_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let e = random_edges(&mut rng, 48, 48, 0.1);
    let vol = torque_volume(&e, &[13], 2.0).unwrap();
    let map = torque_map_fast(&TorquePrecompute::build(&e), 13, 2.0).unwrap();
    assert_eq!(vol.slice(0), &map);
    let reduced = reduce_volume(&vol);
    assert_eq!(reduced.value, map);
}

#[test]
fn large_image_uses_all_default_scales() {
    let scales = default_scales_for(161, 241);
    assert_eq!(scales.len(), 23);
    let cover: f64 = (91.0 * 91.0) / (161.0 * 241.0);
    assert!((cover - 0.21).abs() < 0.005);
    let vol = torque_volume(&OrientedEdgeMap::empty(161, 241), &scales, 2.0).unwrap();
    assert_eq!(vol.len(), 23);
}

#[test]
fn inverted_volume_swaps_extrema() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let e = random_edges(&mut rng, 48, 48, 0.1);
    let scales = [5, 9, 13, 17];
    let (max_a, min_a) = find_extrema(&torque_volume(&e, &scales, 2.0).unwrap(), 25).unwrap();
    let (max_b, min_b) = find_extrema(&torque_volume(&e.flipped(), &scales, 2.0).unwrap(), 25).unwrap();
    assert!(!max_a.is_empty() && !min_a.is_empty());
    for (a, b) in max_a.iter().zip(&min_b).chain(min_a.iter().zip(&max_b)) {
        assert_eq!((a.x, a.y, a.scale), (b.x, b.y, b.scale));
        assert_eq!(a.value, -b.value);
    }
    assert_eq!((max_a.len(), min_a.len()), (min_b.len(), max_b.len()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn table_rectangles_match_loops(
        seed in any::<u64>(),
        w in 1usize..20,
        h in 1usize..20,
        corners in (0usize..20, 0usize..20, 0usize..20, 0usize..20),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..w * h).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sat = SummedAreaTable::from_values(w, h, &values);
        let (a, b, c, d) = corners;
        let (x0, x1) = ((a % w).min(c % w), (a % w).max(c % w));
        let (y0, y1) = ((b % h).min(d % h), (b % h).max(d % h));
        let mut expected = 0.0;
        for y in y0..=y1 {
            for x in x0..=x1 {
                expected += values[y * w + x];
            }
        }
        prop_assert!((sat.rect_sum(x0, y0, x1, y1) - expected).abs() < 1e-9);
    }

    #[test]
    fn fast_window_matches_naive_anywhere(
        seed in any::<u64>(),
        cx in -10i64..40,
        cy in -10i64..40,
        half in 1usize..12,
        alpha in 0.5f64..3.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_edges(&mut rng, 30, 30, 0.2);
        let pre = TorquePrecompute::build(&e);
        let side = 2 * half + 1;
        let fast = pre.window_torque(cx, cy, side, alpha);
        match patch_torque_naive(&e, Patch::new(cx, cy, side).unwrap(), alpha) {
            Ok(naive) => prop_assert!((fast - naive).abs() < 1e-9),
            Err(_) => prop_assert_eq!(fast, 0.0),
        }
    }
}

#[test]
fn empty_edges_give_zero_map() {
    let e = OrientedEdgeMap::empty(20, 20);
    let map = torque_map_fast(&TorquePrecompute::build(&e), 7, 2.0).unwrap();
    assert_eq!(map, FloatMap::zeros(20, 20));
}
