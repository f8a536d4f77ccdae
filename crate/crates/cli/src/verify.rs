//! Invariant suites run by `ffr verify`: exhaustive for `p ≤ 13`, sampled
//! up to `p = 23`.

use std::sync::atomic::{AtomicBool, Ordering};

use ffr_core::dft::{DftPlan, Direction, Kernel};
use ffr_core::ensembles::{
    embed, hamming_variety, is_sidon, random_set, sidon_greedy, sidon_parabola, surface_measure,
    SetDescriptor,
};
use ffr_core::field::{CharacterTable, PointIndex, PrimeField, VectorSpace};
use ffr_core::restriction::{
    converse_witness, extension_norm_lower_bound_with, main_threshold, mocktao_threshold,
    salem_threshold, threshold_report, witness_ratio, ExtensionConfig,
};
use ffr_core::salem::{
    check_universal_salem_transform, hamming_exact_transform, profile_transform,
    ClosedFormPrediction,
};
use ffr_core::spectral::{convolve, fourier_direct, parseval_with, transform_with};
use ffr_core::{Complex, Exact, ExactScalar, Exponent, GridFunction, Threshold};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Default)]
struct Suite {
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records an error from the library as a failed check.
    fn ok<T>(&mut self, r: ffr_core::Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", ctx()));
                None
            }
        }
    }
}

const SMALL_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
const SAMPLED_PRIMES: [u64; 4] = [17, 19, 23, 2];

fn random_function(space: VectorSpace, rng: &mut ChaCha8Rng) -> GridFunction<f64> {
    let values = (0..space.size())
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GridFunction::new(space, values).expect("length matches")
}

pub fn run_suites(names: &[String], inject_fault: bool, seed: u64, interrupt: &AtomicBool) -> Result<(), CliError> {
    let mut failed = 0;
    for name in names {
        if interrupt.load(Ordering::SeqCst) {
            return Err(CliError::Interrupted);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Suite::default();
        match name.as_str() {
            "field" => field(&mut s),
            "fourier" => fourier(&mut s, &mut rng, inject_fault),
            "dft" => dft(&mut s, &mut rng),
            "hamming" => hamming(&mut s),
            "salem" => salem(&mut s, seed),
            "universal" => universal(&mut s, seed),
            "thresholds" => thresholds(&mut s, &mut rng),
            "sidon" => sidon(&mut s, seed),
            "extension" => extension(&mut s, &mut rng),
            other => return Err(CliError::Config(vec![format!("unknown suite `{other}`")])),
        }
        if s.failures.is_empty() {
            println!("[PASS] {name} ({} checks)", s.checks);
        } else {
            failed += 1;
            println!("[FAIL] {name}: {} of {} checks failed", s.failures.len(), s.checks);
            for f in s.failures.iter().take(5) {
                println!("    {f}");
            }
        }
    }
    if failed > 0 {
        Err(CliError::VerifyFailed(failed))
    } else {
        Ok(())
    }
}

fn field(s: &mut Suite) {
    for p in SMALL_PRIMES.into_iter().chain(SAMPLED_PRIMES) {
        let f = PrimeField::new(p).unwrap();
        for a in 1..p as u32 {
            let inv = f.inv(a);
            s.check(inv.is_ok_and(|i| f.mul(a, i) == 1), || format!("inverse of {a} mod {p}"));
        }
        let g = f.primitive_root();
        let order = (1..p).find(|&e| f.pow(g, e) == 1).unwrap_or(0);
        s.check(order == p - 1, || format!("primitive root {g} mod {p} has order {order}"));
    }
    for p in [4u64, 9, 15, 21, 1] {
        s.check(PrimeField::new(p).is_err(), || format!("{p} accepted as prime"));
    }
    for p in SMALL_PRIMES {
        for d in 1..=if p <= 7 { 3 } else { 2 } {
            let space = VectorSpace::of(p, d).unwrap();
            for i in 0..space.size() {
                let x = space.decode(PointIndex(i)).unwrap();
                s.check(space.encode(&x) == Ok(PointIndex(i)), || format!("codec p={p} d={d} index {i}"));
                let neg = space.neg_index(i);
                s.check(space.add_indices(i, neg) == 0, || format!("x + (−x) ≠ 0 at p={p} d={d} index {i}"));
            }
        }
    }
}

fn fourier(s: &mut Suite, rng: &mut ChaCha8Rng, inject_fault: bool) {
    for p in SMALL_PRIMES {
        let field = PrimeField::new(p).unwrap();
        let mut table = CharacterTable::<f64>::new(field);
        if inject_fault {
            table = table.with_conjugated_entry(1);
        }
        let plan = DftPlan::from_table(&table);
        for d in 1..=2 {
            let space = VectorSpace::of(p, d).unwrap();
            let n = space.size() as f64;
            for _ in 0..5 {
                let f = random_function(space, rng);
                let g = random_function(space, rng);
                let fh = transform_with(&plan, &f, Direction::Forward).unwrap();
                let gh = transform_with(&plan, &g, Direction::Forward).unwrap();
                let scale = n * f.norm_l2() * g.norm_l2();

                let back = transform_with(&plan, &fh, Direction::Inverse)
                    .unwrap()
                    .scale(Complex::new(1.0 / n, 0.0));
                let err = back.max_abs_diff(&f).unwrap();
                s.check(err <= 1e-9 * f.norm_sup(), || format!("inversion p={p} d={d}: {err:e}"));

                let energy = fh.norm_l2().powi(2);
                let rhs = n * f.norm_l2().powi(2);
                s.check((energy - rhs).abs() <= 1e-9 * rhs, || format!("Plancherel p={p} d={d}"));

                let (l, r) = parseval_with(&plan, &f, &g).unwrap();
                let err = (l - r).norm() / scale;
                s.check(err <= 1e-9, || format!("Parseval p={p} d={d}: relative error {err:e}"));

                let conv = convolve(&f, &g).unwrap();
                let ch = transform_with(&plan, &conv, Direction::Forward).unwrap();
                let prod = fh.zip_with(&gh, |a, b| a * b).unwrap();
                let err = ch.max_abs_diff(&prod).unwrap();
                s.check(err <= 1e-9 * (prod.norm_sup() + 1.0), || format!("convolution p={p} d={d}: {err:e}"));
            }
        }
    }
}

fn dft(s: &mut Suite, rng: &mut ChaCha8Rng) {
    for p in SMALL_PRIMES.into_iter().chain(SAMPLED_PRIMES) {
        for d in 1..=2 {
            let space = VectorSpace::of(p, d).unwrap();
            let f = random_function(space, rng);
            for dir in [Direction::Forward, Direction::Inverse] {
                let fast = transform_with(&DftPlan::new(space.field()), &f, dir).unwrap();
                let slow = fourier_direct(&f, dir);
                let err = fast.max_abs_diff(&slow).unwrap();
                s.check(err <= 1e-9 * f.norm_l1(), || format!("plan vs direct sum p={p} d={d}: {err:e}"));
            }
        }
    }
    for p in [67u64, 101, 127, 257] {
        let field = PrimeField::new(p).unwrap();
        let line: Vec<Complex<f64>> = (0..p)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut naive = line.clone();
        let mut rader = line;
        DftPlan::<f64>::with_kernel(field, Kernel::Naive).transform_line(&mut naive, Direction::Forward);
        DftPlan::<f64>::with_kernel(field, Kernel::Rader).transform_line(&mut rader, Direction::Forward);
        let err = naive.iter().zip(&rader).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        s.check(err <= 1e-9 * p as f64, || format!("Rader vs naive p={p}: {err:e}"));
    }
}

fn hamming(s: &mut Suite) {
    for p in [3u64, 5, 7, 11] {
        for d in 2..=3 {
            let space = VectorSpace::of(p, d).unwrap();
            for j in [1u32, 2].into_iter().filter(|&j| (j as u64) < p) {
                let Some(set) = s.ok(hamming_variety(space, j), || format!("H_{j} at p={p} d={d}")) else {
                    continue;
                };
                let want = (p as usize - 1).pow(d as u32 - 1);
                s.check(set.cardinality() == want, || format!("|H_{j}| = {} at p={p} d={d}", set.cardinality()));
                let mhat = surface_measure::<f64>(&set).unwrap().transform();
                for (i, m) in space.points().enumerate() {
                    let Some(v) = s.ok(hamming_exact_transform::<f64>(&space, j, &m), || format!("m={m}")) else {
                        continue;
                    };
                    let err = (v.value - mhat.values()[i]).norm();
                    if v.closed_form {
                        s.check(err <= 1e-12, || format!("p={p} d={d} j={j} m={m}: error {err:e}"));
                    } else {
                        let c = v.decay_constant.unwrap_or(f64::INFINITY);
                        s.check(c <= 4.0, || format!("p={p} d={d} j={j} m={m}: decay constant {c:.4}"));
                    }
                }
            }
        }
    }
}

fn exponent_grid() -> Vec<Exponent<f64>> {
    [1.0, 2.0, 3.0, 4.0, 8.0, f64::INFINITY]
        .into_iter()
        .map(Exponent::from_f64)
        .collect()
}

fn salem(s: &mut Suite, seed: u64) {
    let grid = exponent_grid();
    for p in [5u64, 7, 11, 13, 17, 23] {
        for d in 1..=2 {
            let space = VectorSpace::of(p, d).unwrap();
            for k in 0..5u64 {
                let density = 0.15 + 0.15 * k as f64;
                let set = random_set(space, density, seed.wrapping_add(k)).unwrap();
                let mhat = surface_measure::<f64>(&set).unwrap().transform();
                let Some(prof) = s.ok(profile_transform(&mhat, set.cardinality(), &grid), || format!("profile p={p}")) else {
                    continue;
                };
                for w in prof.entries.windows(2) {
                    s.check(w[0].norm <= w[1].norm * (1.0 + 1e-12) + 1e-15, || {
                        format!("norms not monotone at p={p} d={d}: {} > {}", w[0].norm, w[1].norm)
                    });
                }
                let l2 = prof.norm_at(&Exponent::Finite(2.0)).unwrap_or(f64::NAN);
                let want = 1.0 / set.cardinality() as f64 - 1.0 / space.size() as f64;
                let err = (l2 * l2 - want).abs();
                s.check(err <= 1e-12, || format!("L2 identity p={p} d={d}: error {err:e}"));
            }
        }
    }
}

fn universal(s: &mut Suite, seed: u64) {
    let grid = [Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinity];
    for p in [5u64, 7, 11] {
        for d in 1..=2 {
            let space = VectorSpace::of(p, d).unwrap();
            for k in 0..10u64 {
                let density = 0.1 + 0.08 * k as f64;
                let set = random_set(space, density, seed.wrapping_add(k)).unwrap();
                let mhat = surface_measure::<f64>(&set).unwrap().transform();
                for p_exp in &grid {
                    if let Some(r) = s.ok(check_universal_salem_transform(&mhat, set.cardinality(), p_exp), || {
                        format!("p={p} d={d}")
                    }) {
                        s.check(r.passed, || format!("p={p} d={d} p_exp={p_exp}: ratio {}", r.ratio));
                    }
                }
            }
        }
    }
}

fn thresholds(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let r = |n: i64, d: i64| Exact::ratio(n, d);
    let cases = [
        (ClosedFormPrediction::Hamming { d: 4 }, r(6, 1), r(11, 3), Some(r(4, 1))),
        (ClosedFormPrediction::SphereProduct { k: 2, m: 2 }, r(4, 1), r(8, 1), Some(r(10, 1))),
        (ClosedFormPrediction::ZeroSphereProduct, r(4, 1), r(8, 1), Some(r(10, 1))),
        (ClosedFormPrediction::CutoffCylinder { n: 2, m: 1, k: 3 }, r(6, 1), r(11, 3), Some(r(4, 1))),
        (ClosedFormPrediction::Sidon { d: 2 }, r(4, 1), r(8, 1), None),
    ];
    for (pred, p, q, mt) in cases {
        let Some(rep) = s.ok(threshold_report::<Exact>(&pred), || format!("{pred:?}")) else {
            continue;
        };
        s.check(rep.optimal_p == Exponent::Finite(p.clone()), || format!("{pred:?}: p = {}", rep.optimal_p));
        s.check(rep.q_main == Threshold::Admissible(q.clone()), || format!("{pred:?}: q_main {:?}", rep.q_main));
        s.check(rep.q_of_lambda == q, || format!("{pred:?}: q(λ) = {}", rep.q_of_lambda));
        s.check(rep.q_mocktao == mt, || format!("{pred:?}: MT {:?}", rep.q_mocktao));
    }
    let rep = threshold_report::<Exact>(&ClosedFormPrediction::SphereProduct { k: 3, m: 1 });
    s.check(
        rep.is_ok_and(|rep| rep.q_main.value() == rep.q_mocktao.as_ref() && !rep.improvement),
        || "sphere k=3: q_main should equal MT".into(),
    );
    for _ in 0..200 {
        let d = rng.gen_range(1..=12usize);
        let den = rng.gen_range(1..=1000i64);
        let alpha = r(rng.gen_range(1..d as i64 * den), den);
        let den = rng.gen_range(1..=1000i64);
        let beta = r(rng.gen_range(1..d as i64 * den), den);
        let main = main_threshold(d, &alpha, &Exponent::Infinity, &beta);
        let mt = mocktao_threshold(d, &alpha, &beta);
        s.check(
            matches!((&main, &mt), (Ok(Threshold::Admissible(a)), Ok(b)) if a == b),
            || format!("p=∞ reduction d={d} α={alpha} β={beta}"),
        );
        let s_val = beta.clone() / (Exact::from_int(2) * alpha.clone());
        if s_val <= Exact::from_int(1) {
            let p = Exponent::Finite(r(rng.gen_range(8..64), rng.gen_range(1..4)));
            let cor = salem_threshold(d, &alpha, &p, &s_val);
            let main = main_threshold(d, &alpha, &p, &beta);
            s.check(
                matches!((&cor, &main), (Ok(a), Ok(b)) if a == b),
                || format!("salem threshold vs main d={d} α={alpha} β={beta} p={p}"),
            );
        }
    }
}

fn sidon(s: &mut Suite, seed: u64) {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        let space = VectorSpace::of(p, 2).unwrap();
        let parabola = sidon_parabola(space).unwrap();
        s.check(parabola.cardinality() == p as usize, || format!("parabola size at p={p}"));
        s.check(is_sidon(&parabola).unwrap_or(false), || format!("parabola at p={p} is not Sidon"));
        if let Some(e) = s.ok(embed(&parabola), || format!("embed at p={p}")) {
            s.check(is_sidon(&e).unwrap_or(false), || format!("embedded parabola at p={p} is not Sidon"));
        }
        let greedy = sidon_greedy(space, p as usize, seed).unwrap();
        s.check(is_sidon(&greedy).unwrap_or(false), || format!("greedy set at p={p} is not Sidon"));
    }
    // a line contains a + b = c + d with distinct pairs
    let space = VectorSpace::of(7, 2).unwrap();
    let line = ffr_core::PointSet::from_predicate(space, |x| x[1] == 0);
    s.check(!is_sidon(&line).unwrap_or(true), || "a line passed the Sidon check".into());
}

fn extension(s: &mut Suite, rng: &mut ChaCha8Rng) {
    let cfg = ExtensionConfig {
        seeds: vec![0, 1],
        max_iter: 200,
        ..Default::default()
    };
    for p in [5u64, 7, 11] {
        let full = SetDescriptor::FullSpace { d: 1 }.build(p).unwrap();
        let mu = surface_measure::<f64>(&full).unwrap();
        for q in [2.0, 4.0] {
            if let Some(est) = s.ok(extension_norm_lower_bound_with(&mu, q, &cfg, &[]), || format!("full space p={p}")) {
                s.check((est.lower_bound - 1.0).abs() <= 1e-9, || format!("full space p={p} q={q}: {}", est.lower_bound));
            }
        }

        let ham = hamming_variety(VectorSpace::of(p, 2).unwrap(), 1).unwrap();
        let mu = surface_measure::<f64>(&ham).unwrap();
        for p_exp in [2.0, 4.0] {
            if let Some(c) = s.ok(converse_witness(&mu, &Exponent::Finite(p_exp)), || format!("witness p={p}")) {
                let want = (1.0 + c.scaled_average.powf(p_exp)).powf(1.0 / p_exp);
                s.check((c.extension_norm - want).abs() <= 1e-10 * want, || {
                    format!("set-minus-origin identity p={p} p_exp={p_exp}")
                });
            }
        }
        let f = random_function(*mu.space(), rng);
        let two = Exponent::Finite(2.0);
        for q in [3.0, 6.0] {
            let ratio = witness_ratio(&f, &mu, &Exponent::Finite(q), &two);
            let est = extension_norm_lower_bound_with(&mu, q, &cfg, std::slice::from_ref(&f));
            s.check(
                matches!((&ratio, &est), (Ok(r), Ok(e)) if *r <= e.lower_bound + 1e-9 && e.max_decrease <= cfg.tol * e.lower_bound),
                || format!("multistart below a supplied witness at p={p} q={q}"),
            );
        }
    }
}
