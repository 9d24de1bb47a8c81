use proptest::prelude::*;

use linhyp::cli::MatrixFile;
use linhyp::flow::{expm, flow_map, portrait, PortraitOptions};
use linhyp::robustness::ensemble::{gaussian_matrix, random_similarity, rng};
use linhyp::robustness::{generate, margin, perturb_campaign};
use linhyp::spectral::{char_poly, poly_from_roots};
use linhyp::verify::well_scaled;
use linhyp::{classify, conjugacy_class, eigenvalues, inertia_of, same_class, Complex, ConjugacyClass, MatrixR};

fn matrix(seed: u64, d: usize) -> MatrixR {
    well_scaled(&mut rng(seed), d)
}

fn class_strategy(max_d: usize) -> impl Strategy<Value = ConjugacyClass> {
    (1..=max_d).prop_flat_map(|d| (0..=d).prop_map(move |s| ConjugacyClass::new(s, d - s, d).unwrap()))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(seed in any::<u64>(), d in 1usize..=6) {
        let mut r = rng(seed);
        let a = well_scaled(&mut r, d);
        let b = well_scaled(&mut r, d);
        prop_assert!(rel_close((&a * &b).det(), a.det() * b.det(), 1e-8));
    }

    #[test]
    fn shifted_det_is_char_poly(seed in any::<u64>(), d in 1usize..=7, eps in -2.0f64..2.0) {
        let a = matrix(seed, d);
        let p = char_poly(&a).eval(Complex::new(-eps, 0.0));
        prop_assert!(rel_close(a.shift(eps).det(), p.re, 1e-8));
    }

    #[test]
    fn spectral_norm_is_homogeneous(seed in any::<u64>(), d in 1usize..=6, c in -5.0f64..5.0) {
        let a = matrix(seed, d);
        prop_assert!(rel_close(a.scale(c).op_norm2(), c.abs() * a.op_norm2(), 1e-12));
    }

    #[test]
    fn shifts_compose(seed in any::<u64>(), d in 1usize..=6, e1 in -1.0f64..1.0, e2 in -1.0f64..1.0) {
        let a = matrix(seed, d);
        let lhs = a.shift(e1).shift(e2);
        prop_assert!((&lhs - &a.shift(e1 + e2)).max_abs() <= 1e-15 * 4.0);
    }

    #[test]
    fn char_poly_factors_over_eigenvalues(seed in any::<u64>(), d in 1usize..=7) {
        let a = matrix(seed, d);
        let spec = eigenvalues(&a).unwrap();
        let rebuilt = poly_from_roots(&spec).unwrap();
        let direct = char_poly(&a);
        let scale = direct.coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for (x, y) in rebuilt.coeffs.iter().zip(&direct.coeffs) {
            prop_assert!((x - y).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn eigenvalues_come_in_conjugate_pairs(seed in any::<u64>(), d in 1usize..=8) {
        let spec = eigenvalues(&matrix(seed, d)).unwrap();
        let mut im: Vec<f64> = spec.values.iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        for (x, y) in im.iter().zip(im.iter().rev()) {
            prop_assert!((x + y).abs() <= 1e-10);
        }
    }

    #[test]
    fn inertia_partitions_dimension(seed in any::<u64>(), d in 1usize..=8, tau in 0.0f64..0.5) {
        let spec = eigenvalues(&matrix(seed, d)).unwrap();
        let i = inertia_of(&spec, tau);
        prop_assert_eq!(i.s + i.u + i.c, d);
    }

    #[test]
    fn central_count_grows_with_band(seed in any::<u64>(), d in 1usize..=8, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5) {
        let spec = eigenvalues(&matrix(seed, d)).unwrap();
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assert!(inertia_of(&spec, lo).c <= inertia_of(&spec, hi).c);
    }

    #[test]
    fn class_survives_similarity(class in class_strategy(6), seed in any::<u64>(), cond in 1.0f64..1e3) {
        let h = generate(class, 10.0, seed).unwrap();
        let (t, t_inv) = random_similarity(&mut rng(seed ^ 1), class.d, cond);
        let g = &(&t * &h) * &t_inv;
        prop_assert_eq!(conjugacy_class(&g, 1e-6).unwrap(), class);
    }

    #[test]
    fn negation_swaps_stable_and_unstable(class in class_strategy(6), seed in any::<u64>()) {
        let h = generate(class, 10.0, seed).unwrap();
        let neg = conjugacy_class(&h.scale(-1.0), 1e-6).unwrap();
        prop_assert_eq!((neg.s, neg.u), (class.u, class.s));
    }

    #[test]
    fn same_class_is_transitive(c1 in class_strategy(4), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = generate(c1, 10.0, s1).unwrap();
        let b = generate(c1, 10.0, s2).unwrap();
        let c = generate(c1, 10.0, s3).unwrap();
        prop_assert!(same_class(&a, &b, 1e-6).unwrap() && same_class(&b, &c, 1e-6).unwrap());
        prop_assert!(same_class(&a, &c, 1e-6).unwrap());
    }

    #[test]
    fn margin_bounds_are_ordered(class in class_strategy(5), seed in any::<u64>()) {
        let h = generate(class, 10.0, seed).unwrap();
        let r = margin(&h, 1e-9, 1e-6).unwrap();
        let nearest = eigenvalues(&h).unwrap().values.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
        prop_assert!(r.hyperbolic);
        prop_assert!(r.lower <= r.upper);
        prop_assert!(r.upper <= nearest + 1e-10);
    }

    #[test]
    fn campaign_is_bounded_and_reproducible(class in class_strategy(4), seed in any::<u64>(), radius in 0.01f64..2.0) {
        let h = generate(class, 10.0, seed).unwrap();
        let a = perturb_campaign(&h, 30, radius, seed, 1e-9).unwrap();
        let b = perturb_campaign(&h, 30, radius, seed, 1e-9).unwrap();
        prop_assert!(a.flips <= a.samples);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn flow_group_law(seed in any::<u64>(), d in 1usize..=5, s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let h = matrix(seed, d);
        let lhs = expm(&h.scale(s + t));
        let (es, et) = (expm(&h.scale(s)), expm(&h.scale(t)));
        let bound = es.op_norm2() * et.op_norm2();
        prop_assert!((&lhs - &(&es * &et)).op_norm2() <= 1e-12 * bound);
    }

    #[test]
    fn flow_det_is_exp_trace(seed in any::<u64>(), d in 1usize..=6, t in -2.0f64..2.0) {
        let h = matrix(seed, d);
        prop_assert!(rel_close(expm(&h.scale(t)).det(), (t * h.trace()).exp(), 1e-10));
    }

    #[test]
    fn flow_map_is_linear(seed in any::<u64>(), d in 1usize..=5, t in -2.0f64..2.0, c in -3.0f64..3.0) {
        let mut r = rng(seed);
        let h = gaussian_matrix(&mut r, d).scale(0.5);
        let x: Vec<f64> = (0..d).map(|i| (i as f64 + 1.0) * 0.3).collect();
        let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
        let (fx, fcx) = (flow_map(&h, t, &x).unwrap(), flow_map(&h, t, &cx).unwrap());
        let scale = fx.iter().fold(1.0f64, |m, v| m.max(v.abs())) * c.abs().max(1.0);
        for (a, b) in fx.iter().zip(&fcx) {
            prop_assert!((c * a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn portraits_of_one_class_agree(class in class_strategy(2).prop_filter("planar", |c| c.d == 2), s1 in any::<u64>(), s2 in any::<u64>()) {
        let opts = PortraitOptions { t_range: (0.0, 1.0), steps: 10, tau: 1e-9 };
        let seeds = [[1.0, 0.0], [0.0, 1.0]];
        let tag = |svg: String| svg.lines().find(|l| l.contains("linhyp-portrait")).unwrap().split(" d=").next().unwrap().to_string();
        let a = portrait(&generate(class, 10.0, s1).unwrap(), &seeds, &opts).unwrap();
        let b = portrait(&generate(class, 10.0, s2).unwrap(), &seeds, &opts).unwrap();
        prop_assert_eq!(tag(a), tag(b));
    }

    #[test]
    fn matrix_file_round_trips(seed in any::<u64>(), d in 1usize..=6) {
        let a = gaussian_matrix(&mut rng(seed), d).scale(1e3);
        let text = MatrixFile::from_matrix(&a).to_json();
        prop_assert_eq!(MatrixFile::parse(&text).unwrap(), a);
    }

    #[test]
    fn classify_is_deterministic(seed in any::<u64>(), d in 1usize..=6) {
        let a = matrix(seed, d);
        prop_assert_eq!(classify(&a, 1e-9).unwrap(), classify(&a, 1e-9).unwrap());
    }
}
