use imgtorque::apps::{
    blend_saliency, edge_contribution, equally_spaced_thresholds, pr_counts, pr_curve,
    saliency_from_extrema, strengthened_edges, BinaryMask, GaussianWeighting, SaliencyMap,
    StrengthenConfig,
};
use imgtorque::edgemap::{edges_from_image, gradient, DEFAULT_EDGE_THRESHOLD};
use imgtorque::extrema::find_extrema;
use imgtorque::raster::FloatMap;
use imgtorque::synth::{filled_disk, filled_square};
use imgtorque::torque::{default_scales_for, torque_volume};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_map(rng: &mut ChaCha8Rng, w: usize, h: usize) -> FloatMap {
    FloatMap::from_fn(w, h, |_, _| rng.gen_range(0.0..1.0))
}

#[test]
fn square_scene_end_to_end() {
    let img = filled_square(80, 80, 40, 40, 27, 0.1, 0.9);
    let e = edges_from_image(&img, DEFAULT_EDGE_THRESHOLD).unwrap();
    let vol = torque_volume(&e, &default_scales_for(80, 80), 2.0).unwrap();

    let contribution = edge_contribution(&e, &vol, 200).unwrap();
    let rescaled = edge_contribution(&e, &vol.scaled(3.5), 200).unwrap();
    assert_eq!(contribution, rescaled);
    let (lo, hi) = contribution.min_max();
    assert_eq!((lo, hi), (0.0, 1.0));
    for y in 0..80 {
        for x in 0..80 {
            if e.get(x, y).is_none() {
                assert_eq!(contribution.get(x, y), 0.0);
            }
        }
    }

    let (maxima, minima) = find_extrema(&vol, 25).unwrap();
    let all: Vec<_> = maxima.iter().chain(&minima).copied().collect();
    let sal = saliency_from_extrema(&all, 25.0, (80, 80), GaussianWeighting::ByValue).unwrap();
    let (lo, hi) = sal.map.min_max();
    assert!(lo >= 0.0 && hi == 1.0);

    let d_o = gradient(&img).unwrap().magnitude_map().normalized();
    let strong = strengthened_edges(&e, &d_o, &vol, &StrengthenConfig::default()).unwrap();
    assert!(strong.data().iter().all(|v| (0.0..1.0).contains(v)));
    let ring: Vec<f32> = e.iter().map(|(x, y, _)| strong.get(x, y)).collect();
    assert!(ring.iter().all(|&v| v > 0.0));
}

#[test]
fn dark_disk_saliency_peaks_near_center() {
    let img = filled_disk(100, 100, 50.0, 50.0, 14.0, 0.0, 1.0);
    let e = edges_from_image(&img, DEFAULT_EDGE_THRESHOLD).unwrap();
    let vol = torque_volume(&e, &default_scales_for(100, 100), 2.0).unwrap();
    let (_, minima) = find_extrema(&vol, 1).unwrap();
    let sal = saliency_from_extrema(&minima, 25.0, (100, 100), GaussianWeighting::ByValue).unwrap();
    let m = minima[0];
    assert!((m.x as f64 - 50.0).hypot(m.y as f64 - 50.0) <= 2.0);
    assert_eq!(sal.map.get(m.x, m.y), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn blend_is_monotone_in_each_input(seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = SaliencyMap { map: random_map(&mut rng, 12, 9), sigma: 25.0 };
        let ext = random_map(&mut rng, 12, 9);
        let bumped = ext.map(|v| (v + 0.1).min(1.0));
        let raw = |e: &FloatMap| -> Vec<f64> {
            t.map.data().iter().zip(e.data()).map(|(a, b)| w * *a as f64 + (1.0 - w) * *b as f64).collect()
        };
        for (a, b) in raw(&ext).iter().zip(raw(&bumped)) {
            prop_assert!(b >= *a);
        }
        let out = blend_saliency(&t, &ext, w).unwrap();
        let (lo, hi) = out.map.min_max();
        prop_assert!(lo >= 0.0 && hi <= 1.0);
    }

    #[test]
    fn raising_threshold_never_adds_positives(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pred = random_map(&mut rng, 16, 16);
        let truth = BinaryMask::from_fn(16, 16, |_, _| rng.gen_bool(0.3));
        let curve = pr_curve(&pred, &truth, &equally_spaced_thresholds(n).unwrap()).unwrap();
        for pair in curve.windows(2) {
            prop_assert!(pair[1].counts.tp <= pair[0].counts.tp);
            prop_assert!(pair[1].counts.fp <= pair[0].counts.fp);
            prop_assert_eq!(pair[0].counts.tp + pair[0].counts.fn_, truth.count() as u64);
        }
    }
}

#[test]
fn counting_examples() {
    let truth = BinaryMask::from_fn(20, 10, |x, _| x < 10);
    let same = pr_counts(&truth, &truth).unwrap();
    assert_eq!((same.precision(), same.recall(), same.f_measure()), (1.0, 1.0, 1.0));
    let disjoint = pr_counts(&BinaryMask::from_fn(20, 10, |x, _| x >= 10), &truth).unwrap();
    assert_eq!((disjoint.precision(), disjoint.recall()), (0.0, 0.0));
    let half = pr_counts(&BinaryMask::from_fn(20, 10, |x, _| (5..15).contains(&x)), &truth).unwrap();
    assert_eq!((half.tp, half.fp, half.fn_), (50, 50, 50));
    assert_eq!((half.precision(), half.recall()), (0.5, 0.5));
}
