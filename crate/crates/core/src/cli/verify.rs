//! The property suite behind `gowers verify`.

use crate::apcount::{ap_density, lambda_telescoping, telescoping_cost};
use crate::budget::{pow, Budget};
use crate::cyclic::Measure;
use crate::error::{Error, Result};
use crate::genmeasure::{below, generate, random_edge_fn, seeded_rng, GeneratorKind, GeneratorSpec};
use crate::gowersnorm::{box_norm_brute, cube_cost, gcs_cost, gcs_verify, u_brute_cost, u_norm_brute, u_norm_fast};
use crate::hypersystem::{ap_values, is_prime, represent, HypergraphSystem, WeightedHypergraph};
use crate::linform::{
    binomial_expansion_identity, chain_cost, chain_verify, cube_centered_bound, cube_centered_expectation, cube_expectation,
    lf2_chain_cost, lf2_chain_verify, lf2_cost, lf2_expectation, lf2_telescoping, lf2_term, nu_prime, nu_prime_cost,
    nu_prime_l2_dev, slf_lhs, slf_single_chain_cost, slf_single_chain_verify, Cap, CubePattern, Lf2Exponents, SlfInstance,
    SlfSingleInstance,
};
use crate::report::{Check, VerificationReport};

const U: Budget = Budget::UNLIMITED;

/// Random set measure of density about 1/2, skipping empty draws.
fn random_measure(n: usize, seed: u64) -> Result<Measure> {
    let mut sub = seed;
    loop {
        match generate(&GeneratorSpec::new(GeneratorKind::Random, n, 0.5, sub)) {
            Err(Error::EmptySetGenerated) => sub = sub.wrapping_add(1 << 32),
            other => return other,
        }
    }
}

/// Elementary products [`verify_suite`] performs, estimated on the all-ones hypergraph.
pub fn verify_cost(r: usize, n: usize, seeds: u64) -> u128 {
    let Ok(w) = HypergraphSystem::cyclic(r, n).and_then(|s| WeightedHypergraph::constant(s, 1.0)) else {
        return u128::MAX;
    };
    let ones = Lf2Exponents::ones(r);
    let slf = SlfInstance::at_caps(w.clone(), vec![[Cap::Nu; 2]; r]).map(|i| chain_cost(&i)).unwrap_or(u128::MAX);
    let single = SlfSingleInstance::at_caps(w.clone(), vec![Cap::Nu; r]).map(|i| slf_single_chain_cost(&i)).unwrap_or(u128::MAX);
    let lf2 = lf2_chain_cost(&w, 1, &ones).unwrap_or(u128::MAX);
    let per_seed = [
        slf,
        single,
        lf2,
        lf2_cost(&w).saturating_mul(2 * r as u128 + 2),
        nu_prime_cost(&w),
        gcs_cost(&vec![n; r]),
        cube_cost(&[n, n]).saturating_mul(16 * 17),
        cube_cost(&vec![n; r]).saturating_mul(r as u128 + 1),
        telescoping_cost(n, r),
        (1..=r).map(|k| u_brute_cost(n, k)).fold(0u128, u128::saturating_add),
    ]
    .into_iter()
    .fold(0u128, u128::saturating_add);
    per_seed.saturating_mul(seeds as u128 + 1).saturating_add(pow(n, r + 1).saturating_mul(r as u128 + 1))
}

fn absorb(into: &mut VerificationReport, mut rep: VerificationReport, prefix: &str) {
    rep.name = format!("{prefix}/{}", rep.name);
    into.absorb(rep);
}

/// Every checked property at uniformity `r` and prime modulus `n`, over
/// `seeds` seeded random set measures of density about 1/2.
pub fn verify_suite(r: usize, n: usize, seeds: u64) -> Result<VerificationReport> {
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if !is_prime(n) {
        return Err(Error::CompositeModulus(n));
    }
    if n <= r {
        return Err(Error::ModulusTooSmall { n, r });
    }
    let mut report = VerificationReport::new("verify");
    report.measure("r", r as f64).measure("n", n as f64).measure("seeds", seeds as f64);

    let one = Measure::uniform(n)?;
    let w1 = represent(&one, r)?;
    degenerate(&mut report, &one, &w1)?;
    progression_correspondence(&mut report, &w1)?;

    for seed in 0..seeds {
        let tag = format!("seed{seed}");
        let nu = random_measure(n, seed)?;
        let w = represent(&nu, r)?;
        let mut rng = seeded_rng(seed ^ 0x5eed);

        let centered = nu.centered();
        for k in 1..=r {
            let brute = u_norm_brute(&centered, k, U)?;
            let fast = u_norm_fast(&centered, k)?;
            report.push(Check::eq(format!("{tag}/oracle[k={k}]"), fast, brute, 1e-9));
        }

        let cyclic = u_norm_fast(&centered, r)?;
        for j in 0..=r {
            let b = box_norm_brute(&w.centered(j), U)?;
            report.push(Check::eq(format!("{tag}/norm-preservation[{j}]"), b, cyclic, 1e-9));
        }

        let edge: Vec<usize> = (0..r).collect();
        let gs = (0..1 << r)
            .map(|_| random_edge_fn(edge.clone(), vec![n; r], -1.0, 1.0, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        absorb(&mut report, gcs_verify(&gs, U)?, &tag);

        let w2 = represent(&nu, 2)?;
        let g2 = w2.weight(0);
        for pat in CubePattern::all(g2.edge().to_vec()) {
            let rep = binomial_expansion_identity(g2, &pat, U)?;
            report.push(rep.checks[0].clone().relabel(format!("{tag}/binomial-expansion[{pat}]")));
            if !pat.is_zero() {
                let rep = cube_centered_bound(g2, &pat, U)?;
                report.push(rep.checks[0].clone().relabel(format!("{tag}/centered-gcs[{pat}]")));
            }
        }

        let caps: Vec<[Cap; 2]> = (0..r).map(|_| [random_cap(&mut rng), random_cap(&mut rng)]).collect();
        let inst = SlfInstance::seeded(w.clone(), caps, seed)?;
        absorb(&mut report, chain_verify(&inst, U)?, &tag);
        let caps: Vec<Cap> = (0..r).map(|_| random_cap(&mut rng)).collect();
        let single = SlfSingleInstance::seeded(w.clone(), caps, seed)?;
        absorb(&mut report, slf_single_chain_verify(&single, U)?, &tag);

        let dev = nu_prime_l2_dev(&w, U)?;
        let np = nu_prime(&w, U)?;
        let second = crate::sum::mean(&np.values().iter().map(|v| v * v).collect::<Vec<_>>());
        let doubled = lf2_expectation(&w, &Lf2Exponents::ones(r), U)?;
        report.push(Check::eq(format!("{tag}/nu-prime-second-moment"), second, doubled, 1e-9));
        report.measure(format!("{tag}/nu_prime_l2_dev"), dev);

        let exps = Lf2Exponents::from_bits(r, below(&mut rng, 1 << (2 * r)));
        absorb(&mut report, lf2_telescoping(&w, &exps, U)?, &tag);
        let j = 1 + (seed as usize % r);
        absorb(&mut report, lf2_chain_verify(&w, j, &exps, U)?, &tag);

        let lambda = ap_density(&vec![nu.func(); r + 1], U)?;
        absorb(&mut report, lambda_telescoping(&nu, r, lambda, U)?, &tag);
    }
    Ok(report)
}

fn random_cap(rng: &mut impl rand_chacha::rand_core::RngCore) -> Cap {
    if below(rng, 2) == 0 {
        Cap::One
    } else {
        Cap::Nu
    }
}

fn exact(report: &mut VerificationReport, label: &str, value: f64, want: f64) {
    report.push(Check::eq(format!("degenerate/{label}"), value, want, 0.0));
}

/// `nu = 1` must give exactly 0 from centered engines and exactly 1 from product engines.
fn degenerate(report: &mut VerificationReport, one: &Measure, w: &WeightedHypergraph) -> Result<()> {
    let r = w.r();
    let inst = SlfInstance::seeded(w.clone(), vec![[Cap::Nu; 2]; r], 0)?;
    exact(report, "slf", slf_lhs(&inst, U)?, 0.0);
    let ones = Lf2Exponents::ones(r);
    exact(report, "doubled-term", lf2_term(w, 1, &ones, U)?, 0.0);
    exact(report, "doubled", lf2_expectation(w, &ones, U)?, 1.0);
    exact(report, "nu-prime-deviation", nu_prime_l2_dev(w, U)?, 0.0);
    let full = CubePattern::full(w.weight(0).edge().to_vec());
    exact(report, "cube-centered", cube_centered_expectation(w.weight(0), &full, U)?, 0.0);
    exact(report, "cube", cube_expectation(w.weight(0), &full, U)?, 1.0);
    exact(report, "progressions", ap_density(&vec![one.func(); r + 1], U)?, 1.0);
    Ok(())
}

/// The linear forms at every point of `Z_N^{r+1}` form a progression.
fn progression_correspondence(report: &mut VerificationReport, w: &WeightedHypergraph) -> Result<()> {
    let r = w.r();
    let n = w.system().dims()[0];
    let mut x = vec![0usize; r + 1];
    let mut bad = 0usize;
    for _ in 0..pow(n, r + 1) {
        match ap_values(&x, w) {
            Ok(_) => {}
            Err(Error::NumericalInconsistency { .. }) => bad += 1,
            Err(e) => return Err(e),
        }
        crate::gowersnorm::advance(&mut x, &vec![n; r + 1]);
    }
    report.push(Check::eq("progression-correspondence", bad as f64, 0.0, 0.0));
    Ok(())
}
