//! Frozen outputs of the seeded generators and of the experiments built on them.
//! Each value is recomputed here by a direct loop before being compared.

use gowers::apcount::{hypothesis_ratio, relsz_experiment, ExperimentConfig, DEFAULT_DEVIATION_THRESHOLD};
use gowers::genmeasure::{generate, generate_set, GeneratorKind, GeneratorSpec};
use gowers::{Budget, Measure};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SET_97_42: [usize; 47] = [
    2, 4, 5, 6, 9, 15, 17, 18, 19, 20, 21, 23, 24, 25, 31, 32, 33, 36, 37, 42, 46, 50, 52, 53, 54, 55, 59, 60, 63, 64,
    66, 67, 68, 69, 70, 71, 74, 79, 80, 81, 83, 85, 86, 87, 90, 91, 94,
];

fn raw_set(n: usize, p: f64, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).filter(|_| ((rng.next_u64() >> 11) as f64) / 9007199254740992.0 < p).collect()
}

/// `(E_h (E_x f(x) f(x+h))^2)^{1/4}`
fn u2_by_autocorrelation(f: &[f64]) -> f64 {
    let n = f.len();
    let mut total = 0.0;
    for h in 0..n {
        let c: f64 = (0..n).map(|x| f[x] * f[(x + h) % n]).sum::<f64>() / n as f64;
        total += c * c;
    }
    (total / n as f64).powf(0.25)
}

fn lambda3(nu: &Measure) -> f64 {
    let v = nu.func().values();
    let n = v.len();
    let mut total = 0.0;
    for x in 0..n {
        for d in 0..n {
            total += v[x] * v[(x + d) % n] * v[(x + 2 * d) % n];
        }
    }
    total / (n * n) as f64
}

#[test]
fn random_set_stream() {
    let spec = GeneratorSpec::new(GeneratorKind::Random, 97, 0.5, 42);
    assert_eq!(raw_set(97, 0.5, 42), SET_97_42);
    assert_eq!(generate_set(&spec).unwrap(), SET_97_42);
}

#[test]
fn hypothesis_ratio_n4096() {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 4096, 0.5, 7)).unwrap();
    assert_eq!(raw_set(4096, 0.5, 7).len(), 2066);
    let h = hypothesis_ratio(&nu, 2).unwrap();
    let oracle = u2_by_autocorrelation(nu.centered().values());
    assert!((h.norm - oracle).abs() < 1e-12, "{} vs {}", h.norm, oracle);
    assert!((h.norm - 0.14871212036883566).abs() < 1e-12);
    assert_eq!(h.p, 0.50439453125);
    assert!((h.ratio - oracle / h.p.powi(2)).abs() < 1e-12);
    assert!((h.ratio - 0.5845284145104006).abs() < 1e-12);
    assert!((h.half_ratio - 0.2948329356392792).abs() < 1e-12);
}

#[test]
fn experiment_n101() {
    let spec = GeneratorSpec::new(GeneratorKind::Random, 101, 0.3, 1);
    let cfg = ExperimentConfig { r: 2, spec, threshold: DEFAULT_DEVIATION_THRESHOLD };
    let out = relsz_experiment(&cfg, Budget::default()).unwrap();
    let nu = generate(&spec).unwrap();
    let lambda = lambda3(&nu);
    assert!((out.ap.density - lambda).abs() < 1e-12);
    assert!((out.ap.density - 1.0258229679717281).abs() < 1e-12);
    assert_eq!((out.ap.trivial_count, out.ap.nontrivial_count), (33, 332));
    assert!((out.deviation - 0.025822967971728117).abs() < 1e-12);
    assert!(out.pseudorandom);
    assert!((out.hypothesis.norm - u2_by_autocorrelation(nu.centered().values())).abs() < 1e-12);
    assert!((out.hypothesis.norm - 0.5384787400532859).abs() < 1e-12);
    assert!((out.hypothesis.ratio - 5.044096994750752).abs() < 1e-12);
    assert!(out.report.passed());
}

#[test]
fn interval_experiment_n101() {
    let spec = GeneratorSpec::new(GeneratorKind::Interval, 101, 0.3, 0);
    let cfg = ExperimentConfig { r: 2, spec, threshold: DEFAULT_DEVIATION_THRESHOLD };
    let out = relsz_experiment(&cfg, Budget::default()).unwrap();
    let lambda = lambda3(&generate(&spec).unwrap());
    assert!((out.ap.density - lambda).abs() < 1e-12);
    assert!((lambda - 1.6307).abs() < 5e-5, "{lambda}");
    assert!(!out.pseudorandom);
}
