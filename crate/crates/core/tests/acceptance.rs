//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use qmarkov::chain::unitary_vector_average;
use qmarkov::hermitian::{pure_state, spectral_decompose};
use qmarkov::hidden::{bell_check, feynman_state, five_state_example};
use qmarkov::measurement::KrausMeasurement;
use qmarkov::oom::{hmm_to_oom, step_distribution, RANK_TOL};
use qmarkov::random::{self, seeded};
use qmarkov::walk::{limiting_node_distribution, node_povm, shift_unitary, walk};
use qmarkov::words::{all_words, DEFAULT_ENUM_CAP};
use qmarkov::{
    ComplexMatrix, DirectedGraph, Error, MarkovChain, MarkovDensity, MarkovOperator,
    ObservableOperatorModel, Rational, RealMatrix, Scale, StochasticMatrix,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn scale(k: usize) -> Scale {
    Scale::new(["a", "b", "c"].into_iter().take(k)).unwrap()
}

fn bell_violation() -> Outcome {
    let start = Instant::now();
    let ex = five_state_example::<Rational>();
    let r = bell_check(&ex.x, &ex.y, &ex.z, &ex.q, Rational::from_integer(0))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let f = |x: Rational| *x.numer() as f64 / *x.denom() as f64;
    for (name, got, want) in [
        ("E(XY)", r.e_xy, 1.0),
        ("E(YZ)", r.e_yz, -1.0 / 3.0),
        ("E(XZ)", r.e_xz, 1.0),
    ] {
        ensure((f(got) - want).abs() <= 1e-12, || format!("{name} = {got}"))?;
    }
    ensure(
        r.pairwise_observable && !r.jointly_observable && !r.satisfied,
        || format!("{r:?}"),
    )?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("lhs {} rhs {} in {elapsed:?}", r.lhs, r.rhs))
}

fn feynman_point() -> Outcome {
    let q = feynman_state(0.5f64, 0.5, 0.5).map_err(|e| e.to_string())?;
    let want = [5.0 / 8.0, 1.0 / 8.0, 3.0 / 8.0, -1.0 / 8.0];
    for (g, w) in q.components().iter().zip(want) {
        ensure((g - w).abs() <= 1e-12, || {
            format!("components {:?}", q.components())
        })?;
    }
    match feynman_state(0.3f64, 0.1, 0.5) {
        Err(Error::NotNormalized { sum }) => {
            ensure((sum - 1.2).abs() <= 1e-12, || format!("reported sum {sum}"))?;
            Ok(format!(
                "(5/8, 1/8, 3/8, -1/8); bad point reports sum {sum}"
            ))
        }
        other => Err(format!("expected a normalization error, got {other:?}")),
    }
}

fn bell_for_nonnegative_states() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(3);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=8);
        let space = qmarkov::HiddenStateSpace::numbered(n).unwrap();
        let rows = random::sign_table(n, 3, &mut rng);
        let f = |r: &[i8]| qmarkov::InformationFunction::from_signs(space.clone(), r).unwrap();
        let q = qmarkov::MarkovState::new(random::nonnegative_state(n, &mut rng)).unwrap();
        let r = bell_check(&f(&rows[0]), &f(&rows[1]), &f(&rows[2]), &q, 1e-12)
            .map_err(|e| e.to_string())?;
        ensure(r.satisfied, || format!("trial {trial} violates: {r:?}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("1000 trials in {elapsed:?}"))
}

fn cesaro_channels() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(4);
    let mut worst_residual = 0.0f64;
    let mut worst_gap = 0.0f64;
    for trial in 0..100 {
        let n = rng.gen_range(1..=6);
        let mu = MarkovOperator::from_kraus(&random::kraus_family::<f64, _>(
            n,
            rng.gen_range(1..=3),
            &mut rng,
        ))
        .map_err(|e| e.to_string())?;
        let p = random::quantum_density::<f64, _>(n, &mut rng);
        let x = random::hermitian::<f64, _>(n, &mut rng);
        let chain = MarkovChain::new(mu.clone(), p.clone()).unwrap();
        let r = chain
            .cesaro_average(1e-8, 40)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(r.residual <= 1e-8, || {
            format!("trial {trial}: residual {}", r.residual)
        })?;
        let lowest = spectral_decompose(r.average.matrix())
            .unwrap()
            .min_eigenvalue();
        ensure(lowest >= -1e-9, || {
            format!("trial {trial}: min eigenvalue {lowest}")
        })?;
        let limit = x.inner(r.average.matrix()).unwrap();
        let mut coords = p.matrix().coords();
        let xc = x.coords();
        let mut acc = 0.0;
        for _ in 0..10_000 {
            coords = mu.matrix().matvec(&coords).unwrap();
            acc += coords.iter().zip(&xc).map(|(a, b)| a * b).sum::<f64>();
        }
        let gap = (acc / 10_000.0 - limit).abs();
        ensure(gap <= 1e-3, || {
            format!("trial {trial}: running mean off by {gap}")
        })?;
        worst_residual = worst_residual.max(r.residual);
        worst_gap = worst_gap.max(gap);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "max residual {worst_residual:.1e}, max gap {worst_gap:.1e} in {elapsed:?}"
    ))
}

fn wave_function_contrast() -> Outcome {
    let theta = std::f64::consts::PI / 2f64.sqrt();
    let u = ComplexMatrix::from_diagonal(&[
        Complex64::from_polar(1.0, theta),
        Complex64::from_polar(1.0, 1.0),
    ]);
    let s = 0.5f64.sqrt();
    let v = [Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
    let avg = unitary_vector_average(&u, &v, 10_000).map_err(|e| e.to_string())?;
    ensure(avg.norm <= 1e-3, || {
        format!("vector average norm {}", avg.norm)
    })?;
    let chain = MarkovChain::new(
        MarkovOperator::from_unitary(&u).unwrap(),
        pure_state(&v).unwrap(),
    )
    .unwrap();
    let r = chain.cesaro_average(1e-8, 40).map_err(|e| e.to_string())?;
    ensure(r.residual <= 1e-8, || {
        format!("density residual {}", r.residual)
    })?;
    let back = MarkovDensity::new(r.average.matrix().clone()).map_err(|e| e.to_string())?;
    ensure((back.matrix().trace() - 1.0).abs() <= 1e-10, || {
        "average is not trace 1".into()
    })?;
    Ok(format!(
        "vector average {:.1e}, density residual {:.1e}",
        avg.norm, r.residual
    ))
}

fn three_cycle_walk() -> Outcome {
    let g = DirectedGraph::cycle(3);
    let mu = MarkovOperator::from_unitary(&shift_unitary::<f64>(&g).unwrap()).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let p0 = pure_state(&[Complex64::new(1.0, 0.0), zero, zero]).unwrap();
    let trace = walk(&g, &mu, &p0, 100).map_err(|e| e.to_string())?;
    for (t, s) in trace.steps.iter().enumerate() {
        for (v, &p) in s.node_probs.iter().enumerate() {
            let want = if v == t % 3 { 1.0 } else { 0.0 };
            ensure((p - want).abs() <= 1e-12, || format!("t {t} node {v}: {p}"))?;
        }
    }
    let lim = limiting_node_distribution(&g, &mu, &p0, 1e-8, 40).map_err(|e| e.to_string())?;
    ensure(lim.iter().all(|p| (p - 1.0 / 3.0).abs() <= 1e-8), || {
        format!("limit {lim:?}")
    })?;
    Ok(format!("limit {lim:.10?}"))
}

fn oom_lift() -> Outcome {
    let mut rng = seeded(7);
    let mut worst = 0.0f64;
    let mut worst_step = 0.0f64;
    for trial in 0..100 {
        let m = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=3);
        let o = random::signed_oom::<f64, _>(scale(k), m, 0.5, &mut rng);
        let lift = o.lift_hidden_states();
        for len in 0..=5 {
            for w in all_words(k, len) {
                let d =
                    (o.word_probability(&w).unwrap() - lift.word_probability(&w).unwrap()).abs();
                ensure(d <= 1e-10, || format!("trial {trial}, word {w:?}: {d}"))?;
                worst = worst.max(d);
            }
        }
        for t in 1..=4 {
            let dist = step_distribution(&lift, t).unwrap();
            for a in 0..k {
                let want: f64 = all_words(k, t - 1)
                    .into_iter()
                    .map(|mut w| {
                        w.push(a);
                        o.word_probability(&w).unwrap()
                    })
                    .sum();
                let d = (dist.values[a] - want).abs();
                ensure(d <= 1e-12, || format!("trial {trial}, step {t}: {d}"))?;
                worst_step = worst_step.max(d);
            }
        }
    }
    Ok(format!(
        "max word gap {worst:.1e}, max marginal gap {worst_step:.1e}"
    ))
}

fn hidden_paths(t: &RealMatrix<f64>, o: &RealMatrix<f64>, init: &[f64], w: &[usize]) -> f64 {
    // forward recursion over hidden paths, written independently of the OOM
    if w.is_empty() {
        return 1.0;
    }
    let m = init.len();
    let mut alpha: Vec<f64> = (0..m).map(|j| init[j] * o[(w[0], j)]).collect();
    for &a in &w[1..] {
        alpha = (0..m)
            .map(|i| (0..m).map(|j| alpha[j] * t[(i, j)]).sum::<f64>() * o[(a, i)])
            .collect();
    }
    alpha.iter().sum()
}

fn hmm_oracle() -> Outcome {
    let mut rng = seeded(8);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let m = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=3);
        let (t, e, init) = random::hmm::<f64, _>(m, k, &mut rng);
        let o = hmm_to_oom(scale(k), &t, &e, init.clone()).map_err(|e| e.to_string())?;
        for len in 0..=4 {
            for w in all_words(k, len) {
                let d = (o.word_probability(&w).unwrap() - hidden_paths(t.matrix(), &e, &init, &w))
                    .abs();
                ensure(d <= 1e-12, || format!("trial {trial}, word {w:?}: {d}"))?;
                worst = worst.max(d);
            }
        }
        let (_, rank) = o
            .prediction_matrix(3, RANK_TOL, DEFAULT_ENUM_CAP)
            .map_err(|e| e.to_string())?;
        ensure(rank <= m, || format!("trial {trial}: rank {rank} > {m}"))?;
    }
    Ok(format!("max gap {worst:.1e}"))
}

type Model2 = ([[f64; 2]; 2], [[f64; 2]; 2], [f64; 2]);

/// Two-symbol models whose first negative word appears at depth `t*`.
fn threshold_models() -> Vec<(usize, Model2)> {
    vec![
        (
            3,
            (
                [[-0.25, 0.5], [1.5, 0.25]],
                [[1.0, -0.5], [-1.25, 0.75]],
                [0.25, 0.75],
            ),
        ),
        (
            4,
            (
                [[1.0, 0.25], [-0.25, 0.25]],
                [[0.5, -0.25], [-0.25, 0.75]],
                [-0.25, 1.25],
            ),
        ),
        (
            5,
            (
                [[0.5, -0.5], [0.0, 0.25]],
                [[0.75, 0.0], [-0.25, 1.25]],
                [0.75, 0.25],
            ),
        ),
        (
            6,
            (
                [[0.25, 0.0], [0.25, 0.25]],
                [[0.5, -0.25], [0.0, 1.0]],
                [0.5, 0.5],
            ),
        ),
    ]
}

/// Minimum word value at depth `t` by direct 2×2 products.
fn min_by_enumeration(ops: &[[[f64; 2]; 2]; 2], pi: [f64; 2], t: usize) -> f64 {
    let mut best = f64::INFINITY;
    for code in 0..(1usize << t) {
        let mut s = pi;
        for k in 0..t {
            let m = ops[(code >> k) & 1];
            s = [
                m[0][0] * s[0] + m[0][1] * s[1],
                m[1][0] * s[0] + m[1][1] * s[1],
            ];
        }
        best = best.min(s[0] + s[1]);
    }
    best
}

fn observability_threshold() -> Outcome {
    let mut found = Vec::new();
    for (t_star, (a, b, pi)) in threshold_models() {
        let rows =
            |m: [[f64; 2]; 2]| RealMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]).unwrap();
        let o = ObservableOperatorModel::new(scale(2), vec![rows(a), rows(b)], pi.to_vec())
            .map_err(|e| e.to_string())?;
        let x = o.to_markov_measurement();
        let q = o.pi_density();
        let oracle_first = (1..=6).find(|&t| min_by_enumeration(&[a, b], pi, t) < -1e-12);
        ensure(oracle_first == Some(t_star), || {
            format!("model t* = {t_star}: oracle says {oracle_first:?}")
        })?;
        for t in 1..=6 {
            let observable = x
                .is_t_observable(&q, t, 1e-12, DEFAULT_ENUM_CAP)
                .map_err(|e| e.to_string())?;
            if t < t_star {
                ensure(observable, || {
                    format!("t* = {t_star}: not observable at {t}")
                })?;
            } else if t == t_star {
                ensure(!observable, || format!("t* = {t_star}: still observable"))?;
            }
        }
        found.push(t_star);
    }
    Ok(format!("t* in {found:?}"))
}

fn linear_algebra_floor() -> Outcome {
    let mut rng = seeded(10);
    let mut worst_rec = 0.0f64;
    let mut worst_orth = 0.0f64;
    for trial in 0..1000 {
        let n = rng.gen_range(1..=32);
        let h = random::hermitian::<f64, _>(n, &mut rng);
        let s = spectral_decompose(&h).map_err(|e| format!("trial {trial}: {e}"))?;
        let rec = (&s.reconstruct() - h.as_complex()).frobenius_norm();
        let v = &s.eigenvectors;
        let orth = (&v.adjoint().matmul(v).unwrap() - &ComplexMatrix::identity(n)).frobenius_norm();
        ensure(rec <= 1e-10 && orth <= 1e-10, || {
            format!("trial {trial}, n {n}: {rec:.1e}, {orth:.1e}")
        })?;
        worst_rec = worst_rec.max(rec);
        worst_orth = worst_orth.max(orth);
    }
    let mut built = 0;
    for trial in 0..50 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=4);
        let kraus =
            MarkovOperator::from_kraus(&random::kraus_family::<f64, _>(n, 3, &mut rng)).unwrap();
        let unitary =
            MarkovOperator::from_unitary(&random::unitary::<f64, _>(n, &mut rng)).unwrap();
        let stochastic = MarkovOperator::from_stochastic(
            &StochasticMatrix::new(random::stochastic(m, &mut rng)).unwrap(),
        );
        let pinch = KrausMeasurement::<f64>::computational(n).sum_operator();
        let bridge = random::signed_oom::<f64, _>(scale(2), m, 0.5, &mut rng)
            .to_markov_measurement()
            .sum_operator();
        let composed = kraus.compose(&unitary).unwrap().power(5);
        let g = DirectedGraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let walk_op = node_povm::<f64>(&g)
            .unwrap()
            .as_measurement()
            .sum_operator();
        for (name, op) in [
            ("kraus", &kraus),
            ("unitary", &unitary),
            ("stochastic", &stochastic),
            ("pinching", &pinch),
            ("oom bridge", &bridge),
            ("composition", &composed),
            ("walk povm", &walk_op),
        ] {
            ensure(op.is_trace_preserving(1e-10), || {
                format!("trial {trial}: {name} not trace preserving")
            })?;
            built += 1;
        }
    }
    Ok(format!(
        "max reconstruction {worst_rec:.1e}, max orthonormality {worst_orth:.1e}, {built} operators checked"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("five-state Bell violation", bell_violation),
        ("Feynman point and normalization error", feynman_point),
        (
            "Bell inequality for nonnegative states",
            bell_for_nonnegative_states,
        ),
        ("Cesaro averages of Kraus channels", cesaro_channels),
        (
            "wave-function versus density averages",
            wave_function_contrast,
        ),
        ("shift walk on the 3-cycle", three_cycle_walk),
        ("OOM hidden-state lift", oom_lift),
        ("HMM path-enumeration oracle", hmm_oracle),
        ("t-observability threshold", observability_threshold),
        ("linear-algebra floor", linear_algebra_floor),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
