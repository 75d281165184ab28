//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use gowers::apcount::{ap_density, hypothesis_ratio, lambda_telescoping};
use gowers::cli::verify_suite;
use gowers::genmeasure::{below, generate, random_edge_fn, seeded_rng, uniform_f64, GeneratorKind, GeneratorSpec};
use gowers::gowersnorm::{box_norm_brute, gcs_verify, u_norm_brute, u_norm_fast};
use gowers::hypersystem::{ap_values, represent};
use gowers::linform::{
    binomial_expansion_identity, chain_verify, cube_centered_expectation, cube_expectation, lf2_expectation, lf2_term,
    nu_prime, nu_prime_l2_dev, slf_lhs, Cap, CubePattern, Lf2Exponents, SlfInstance,
};
use gowers::{Budget, CyclicFn, EdgeFn, Error, Measure, WeightedHypergraph};
use rand_chacha::ChaCha8Rng;

const U: Budget = Budget::UNLIMITED;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T>(r: gowers::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

/// Set measure of density about 1/2 or a random weight in `[0, 2)`, alternating by seed.
fn seeded_measure(n: usize, seed: u64) -> Measure {
    if seed.is_multiple_of(2) {
        let mut s = seed;
        loop {
            match generate(&GeneratorSpec::new(GeneratorKind::Random, n, 0.5, s)) {
                Ok(m) => return m,
                Err(Error::EmptySetGenerated) => s += 1 << 32,
                Err(err) => panic!("{err}"),
            }
        }
    }
    let mut rng = seeded_rng(seed);
    let values = (0..n).map(|_| uniform_f64(&mut rng, 0.0, 2.0)).collect();
    Measure::new(CyclicFn::with_modulus(n, values).unwrap()).unwrap()
}

fn random_fn(n: usize, rng: &mut ChaCha8Rng) -> CyclicFn {
    CyclicFn::with_modulus(n, (0..n).map(|_| uniform_f64(rng, -1.0, 1.0)).collect()).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(1);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 8 + below(&mut rng, 57) as usize;
        let k = 1 + i % 3;
        let f = random_fn(n, &mut rng);
        let brute = e(u_norm_brute(&f, k, U))?;
        let fast = e(u_norm_fast(&f, k))?;
        let rel = (fast - brute).abs() / brute.abs().max(1.0);
        worst = worst.max(rel);
        ensure(rel <= 1e-9, || format!("N={n} k={k}: brute {brute} fast {fast}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("200 functions, worst relative gap {worst:.1e}, {elapsed:.2?}"))
}

fn gowers_cauchy_schwarz() -> Outcome {
    let mut rng = seeded_rng(2);
    for t in 0..1000 {
        let arity = 1 + t % 3;
        let dims: Vec<usize> = (0..arity).map(|_| 1 + below(&mut rng, 7) as usize).collect();
        let edge: Vec<usize> = (0..arity).collect();
        let gs = (0..1 << arity)
            .map(|_| random_edge_fn(edge.clone(), dims.clone(), -1.0, 1.0, &mut rng))
            .collect::<gowers::Result<Vec<_>>>();
        let rep = e(gcs_verify(&e(gs)?, U))?;
        ensure(rep.passed(), || format!("tuple {t} on dims {dims:?}: {:?}", rep.checks))?;
    }
    let mut worst = 0.0f64;
    for arity in 1..=3 {
        let g = e(random_edge_fn((0..arity).collect(), vec![5; arity], -1.0, 1.0, &mut rng))?;
        let rep = e(gcs_verify(&vec![g; 1 << arity], U))?;
        let c = &rep.checks[0];
        ensure(c.margin.abs() <= 1e-9 * c.rhs, || format!("equality case margin {} vs rhs {}", c.margin, c.rhs))?;
        worst = worst.max(c.margin.abs() / c.rhs);
    }
    Ok(format!("1000 tuples pass; equality case relative margin {worst:.1e}"))
}

fn norm_preservation() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = [5, 7, 11, 13][seed as usize % 4];
        let r = 2 + (seed as usize / 4) % 2;
        let nu = seeded_measure(n, seed);
        let w = e(represent(&nu, r))?;
        let target = e(u_norm_brute(&nu.centered(), r, U))?;
        for j in 0..=r {
            let b = e(box_norm_brute(&w.centered(j), U))?;
            worst = worst.max((b - target).abs());
            ensure((b - target).abs() <= 1e-9, || format!("N={n} r={r} j={j}: {b} vs {target}"))?;
        }
    }
    Ok(format!("50 measures, worst gap {worst:.1e}"))
}

fn progression_correspondence() -> Outcome {
    let mut points = 0;
    for n in [5usize, 7] {
        for r in [2usize, 3] {
            // distinct values, so each weight identifies the residue it reads
            let nu = e(Measure::new(e(CyclicFn::from_fn(n, |x| x as f64 + 1.0))?))?;
            let w = e(represent(&nu, r))?;
            let mut x = vec![0usize; r + 1];
            loop {
                let d = x.iter().sum::<usize>() % n;
                let psi: Vec<usize> = (0..=r)
                    .map(|j| {
                        (0..=r).filter(|&i| i != j).map(|i| (j + n - i) % n * x[i]).sum::<usize>() % n
                    })
                    .collect();
                for j in 0..r {
                    ensure((psi[j + 1] + n - psi[j]) % n == d, || format!("N={n} r={r} x={x:?}"))?;
                }
                for (j, &y) in psi.iter().enumerate() {
                    let coords: Vec<usize> = (0..=r).filter(|&i| i != j).map(|i| x[i]).collect();
                    ensure(w.weight(j).at(&coords) == (y + 1) as f64, || format!("form {j} at {x:?}"))?;
                }
                let ap = e(ap_values(&x, &w))?;
                ensure(ap.y == psi && ap.d == d, || format!("ap_values at {x:?}"))?;
                points += 1;
                let mut i = r + 1;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    x[i] += 1;
                    if x[i] < n {
                        break;
                    }
                    x[i] = 0;
                }
                if x.iter().all(|&v| v == 0) {
                    break;
                }
            }
        }
    }
    Ok(format!("{points} points checked"))
}

fn strong_linear_forms_chain() -> Outcome {
    let start = Instant::now();
    let mut steps = 0;
    let mut worst_endpoint = 0.0f64;
    for seed in 0..100u64 {
        let (r, n) = match seed % 4 {
            0 => (2, 5),
            1 => (2, 7),
            2 => (2, 11),
            _ => (3, 5),
        };
        let nu = seeded_measure(n, seed);
        let w = e(represent(&nu, r))?;
        let mut rng = seeded_rng(seed + 1000);
        let caps = (0..r)
            .map(|_| {
                let mut c = || if below(&mut rng, 2) == 0 { Cap::One } else { Cap::Nu };
                [c(), c()]
            })
            .collect();
        let inst = e(SlfInstance::seeded(w, caps, seed))?;
        let rep = e(chain_verify(&inst, U))?;
        ensure(rep.passed(), || format!("seed {seed}: {:?}", rep.failures().collect::<Vec<_>>()))?;
        let full = rep.check("q_full=box_norm_power").unwrap();
        worst_endpoint = worst_endpoint.max((full.lhs - full.rhs).abs() / full.rhs.abs().max(1.0));
        let cs = rep.checks.iter().filter(|c| c.label.starts_with("cauchy-schwarz")).count();
        let pw = rep.checks.iter().filter(|c| c.label.starts_with("pointwise")).count();
        let expected = if r == 2 { 4 } else { 12 };
        ensure(cs == expected && pw == expected, || format!("seed {seed}: {cs} steps"))?;
        steps += cs;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("100 instances, {steps} steps, endpoint gap {worst_endpoint:.1e}, {elapsed:.2?}"))
}

/// `E[prod_omega g(x^{(omega)})^{n_omega}]` on a 2-edge by four nested loops.
fn cube_oracle(g: &EdgeFn, pattern: &[u8], shift: f64) -> f64 {
    let (a, b) = (g.dims()[0], g.dims()[1]);
    let mut total = 0.0;
    for x0 in 0..a {
        for x1 in 0..a {
            for y0 in 0..b {
                for y1 in 0..b {
                    // mask bit 0 picks the copy of the first vertex
                    let pts = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
                    let mut prod = 1.0;
                    for (w, &(x, y)) in pts.iter().enumerate() {
                        if pattern[w] == 1 {
                            prod *= g.at(&[x, y]) - shift;
                        }
                    }
                    total += prod;
                }
            }
        }
    }
    total / (a * a * b * b) as f64
}

fn expansion_identity() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let nu = seeded_measure(5, seed);
        let w = e(represent(&nu, 2))?;
        let g = w.weight(0);
        for pat in CubePattern::all(g.edge().to_vec()) {
            let bits: Vec<u8> = (0..4).map(|m| pat.exponent(gowers::CubeVertex(m))).collect();
            let raw = e(cube_expectation(g, &pat, U))?;
            let oracle = cube_oracle(g, &bits, 0.0);
            ensure((raw - oracle).abs() <= 1e-9, || format!("seed {seed} {pat}: {raw} vs oracle {oracle}"))?;
            let mut sum = 1.0;
            for sub in 1u64..16 {
                if (0..4).all(|m| (sub >> m) & 1 == 0 || bits[m] == 1) {
                    let p = CubePattern::from_support(g.edge().to_vec(), sub);
                    sum += e(cube_centered_expectation(g, &p, U))?;
                }
            }
            worst = worst.max((raw - sum).abs());
            ensure((raw - sum).abs() <= 1e-9, || format!("seed {seed} {pat}: {raw} vs {sum}"))?;
            ensure(e(binomial_expansion_identity(g, &pat, U))?.passed(), || format!("report for {pat}"))?;
        }
    }
    Ok(format!("20 measures x 16 patterns, worst gap {worst:.1e}"))
}

fn nu_prime_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let n = [5, 7, 11][seed as usize % 3];
        let w = e(represent(&seeded_measure(n, seed), 2))?;
        let np = e(nu_prime(&w, U))?;
        // independent double loop for r = 2
        for x1 in 0..n {
            for x2 in 0..n {
                let v: f64 = (0..n).map(|x0| w.weight(1).at(&[x0, x2]) * w.weight(2).at(&[x0, x1])).sum::<f64>() / n as f64;
                ensure((np.at(&[x1, x2]) - v).abs() <= 1e-12 * v.max(1.0), || format!("nu' at ({x1},{x2})"))?;
            }
        }
        let m = |f: &dyn Fn(f64) -> f64| np.values().iter().map(|&v| f(v)).sum::<f64>() / np.len() as f64;
        let dev = e(nu_prime_l2_dev(&w, U))?;
        let expanded = m(&|v| v * v) - 2.0 * m(&|v| v) + 1.0;
        let doubled = e(lf2_expectation(&w, &Lf2Exponents::ones(2), U))?;
        let gap = (dev - expanded).abs().max((m(&|v| v * v) - doubled).abs());
        worst = worst.max(gap);
        ensure(gap <= 1e-9, || format!("seed {seed}: dev {dev} expanded {expanded} doubled {doubled}"))?;
    }
    Ok(format!("20 hypergraphs, worst gap {worst:.1e}"))
}

fn degenerate_exactness() -> Outcome {
    for (r, n) in [(2usize, 5usize), (2, 7), (3, 5)] {
        let one = e(Measure::uniform(n))?;
        let w: WeightedHypergraph = e(represent(&one, r))?;
        let inst = e(SlfInstance::seeded(w.clone(), vec![[Cap::Nu, Cap::One]; r], 3))?;
        let g0 = w.weight(0);
        let mut zeros = vec![e(slf_lhs(&inst, U))?, e(nu_prime_l2_dev(&w, U))?];
        let mut ones = vec![e(ap_density(&vec![one.func(); r + 1], U))?];
        for exps in Lf2Exponents::all(r) {
            ones.push(e(lf2_expectation(&w, &exps, U))?);
            for j in 1..=r {
                zeros.push(e(lf2_term(&w, j, &exps, U))?);
            }
        }
        for pat in CubePattern::all(g0.edge().to_vec()).take(64) {
            ones.push(e(cube_expectation(g0, &pat, U))?);
            if !pat.is_zero() {
                zeros.push(e(cube_centered_expectation(g0, &pat, U))?);
            }
        }
        ensure(zeros.iter().all(|&z| z == 0.0), || format!("r={r} N={n}: nonzero centered value"))?;
        ensure(ones.iter().all(|&o| o == 1.0), || format!("r={r} N={n}: product value not 1"))?;
    }
    Ok("centered engines give 0, product engines give 1".into())
}

fn telescoping_count() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [5usize, 7, 11, 13] {
        for seed in 0..5u64 {
            let nu = seeded_measure(n, seed);
            let mut lambda = 0.0;
            for a in 0..n {
                for d in 0..n {
                    lambda += nu.values()[a] * nu.values()[(a + d) % n] * nu.values()[(a + 2 * d) % n];
                }
            }
            lambda /= (n * n) as f64;
            let rep = e(lambda_telescoping(&nu, 2, lambda, U))?;
            let c = rep.check("telescoping").unwrap();
            worst = worst.max((c.lhs - c.rhs).abs());
            ensure((c.lhs - c.rhs).abs() <= 1e-9, || format!("N={n} seed {seed}: {} vs {}", c.lhs, c.rhs))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} measures, worst gap {worst:.1e}"))
}

fn empirical_separation() -> Outcome {
    let interval = e(hypothesis_ratio(&e(generate(&GeneratorSpec::new(GeneratorKind::Interval, 1009, 0.2, 0)))?, 2))?.ratio;
    let mut max_random = 0.0f64;
    for seed in 0..10 {
        let nu = e(generate(&GeneratorSpec::new(GeneratorKind::Random, 1009, 0.2, seed)))?;
        let ratio = e(hypothesis_ratio(&nu, 2))?.ratio;
        max_random = max_random.max(ratio);
        ensure(ratio < interval, || format!("seed {seed}: random {ratio} vs interval {interval}"))?;
    }
    let mut means = Vec::new();
    for n in [257usize, 1009, 4093] {
        let mut total = 0.0;
        for seed in 0..10 {
            let nu = e(generate(&GeneratorSpec::new(GeneratorKind::Random, n, 0.2, seed)))?;
            total += e(u_norm_fast(&nu.centered(), 2))?;
        }
        means.push(total / 10.0);
    }
    ensure(means.windows(2).all(|p| p[1] < p[0]), || format!("means {means:?} not decreasing"))?;
    Ok(format!("random ratio <= {max_random:.3} < interval {interval:.3}; U2 means {means:.4?}"))
}

fn performance() -> Outcome {
    let mut rng = seeded_rng(11);
    let f = random_fn(2048, &mut rng);
    let start = Instant::now();
    e(u_norm_fast(&f, 3))?;
    let fast = start.elapsed();
    ensure(fast < Duration::from_secs(10), || format!("U^3 at N=2048 took {fast:?}"))?;
    let start = Instant::now();
    let rep = e(verify_suite(2, 7, 10))?;
    let suite = start.elapsed();
    ensure(rep.passed(), || format!("verify suite failed: {:?}", rep.failures().next()))?;
    ensure(suite < Duration::from_secs(120), || format!("verify took {suite:?}"))?;
    Ok(format!("U^3 at N=2048 in {fast:.2?}; verify r=2 N=7 in {suite:.2?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence of fast and brute-force U^k", oracle_equivalence),
        ("Gowers-Cauchy-Schwarz on random tuples and equality case", gowers_cauchy_schwarz),
        ("norm preservation under representation", norm_preservation),
        ("progression correspondence of the linear forms", progression_correspondence),
        ("strong linear forms Cauchy-Schwarz chain", strong_linear_forms_chain),
        ("cube expansion identity", expansion_identity),
        ("nu' second moment consistency", nu_prime_consistency),
        ("degenerate exactness for nu = 1", degenerate_exactness),
        ("telescoped progression count", telescoping_count),
        ("empirical separation of random and interval sets", empirical_separation),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
