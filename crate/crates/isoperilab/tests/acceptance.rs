//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;

use isoperilab::campaign::{
    lindelof_trials, spectral_campaign, theorem1_campaign, theorem2_campaign, SpectralConfig, Theorem1Config,
    Theorem2Config,
};
use isoperilab::CampaignReport;
use isoperilab_core::constructions::{
    central_symmetrize, cross_polytope, cube, extremal_vertex_polytope, l1_sum, simplex_regular, Construction,
    L1SumSpec,
};
use isoperilab_core::numkit::GenMatrix;
use isoperilab_core::polytope::{Polytope, VPolytope};
use isoperilab_core::positions::{bl_transform, petty_minimize, schatten_bound_check, slab_polytope, PettyOptions};
use isoperilab_core::rng::stream_rng;
use isoperilab_core::spectral::{box_lambda_reference, rayleigh_bound, scaling_law_check, TestFunction};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn hpoly(c: &Construction) -> Result<Polytope, String> {
    Polytope::from_hrep(c.hrep.as_ref().ok_or("missing H-representation")?).map_err(err)
}

fn closed_form_anchors() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut check = |what: String, got: f64, want: f64| -> Result<(), String> {
        let r = rel(got, want);
        worst = worst.max(r);
        ensure(r <= 1e-9, || format!("{what}: {got} vs {want}"))
    };
    for n in 2..=5 {
        let t = Instant::now();
        let nf = n as f64;
        let c = hpoly(&cube(n, 1.0).map_err(err)?)?;
        check(format!("iq([-1,1]^{n})"), c.iq(), 2.0 * nf)?;
        let x = cross_polytope(n, 1.0).map_err(err)?;
        let xp = hpoly(&x)?;
        check(format!("iq(B_l1^{n})"), xp.iq(), 2.0 * nf.powf(1.5) / factorial(n).powf(1.0 / nf))?;
        check(format!("vol(B_l1^{n})"), xp.volume(), 2f64.powi(n as i32) / factorial(n))?;
        check(format!("inradius(B_l1^{n})"), x.hrep.as_ref().unwrap().inradius_origin(), 1.0 / nf.sqrt())?;
        if n <= 4 {
            let s = hpoly(&simplex_regular(n).map_err(err)?)?;
            let want = nf.powf(1.5) * (nf + 1.0).powf(0.5 + 1.0 / (2.0 * nf)) / factorial(n).powf(1.0 / nf);
            check(format!("iq(simplex_{n})"), s.iq(), want)?;
        }
        ensure(t.elapsed() < Duration::from_secs(1), || format!("n={n} anchors took {:.2?}", t.elapsed()))?;
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

/// Non-increasing sequences over `parts` with sum at most `cap`.
fn partitions(parts: &[usize], cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !prefix.is_empty() {
        out.push(prefix.clone());
    }
    for &p in parts {
        if p <= cap && prefix.last().is_none_or(|&l| p <= l) {
            prefix.push(p);
            partitions(parts, cap - p, prefix, out);
            prefix.pop();
        }
    }
}

fn l1_sum_formulas() -> Outcome {
    let mut shapes = Vec::new();
    partitions(&[3, 2, 1], 5, &mut Vec::new(), &mut shapes);
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for dims in &shapes {
        // unit cubes, and cubes scaled to the unit ball's inradius pattern
        for scaled in [false, true] {
            let summands = dims
                .iter()
                .map(|&b| cube(b, if scaled { 1.0 / (b as f64).sqrt() } else { 1.0 }))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let c = l1_sum(&L1SumSpec::new(summands)).map_err(err)?;
            let p = c.polytope().map_err(err)?;
            let (rv, rs) = (rel(p.volume(), c.closed.volume), rel(p.surface_area(), c.closed.surface_area));
            worst = worst.max(rv).max(rs);
            ensure(rv <= 1e-9 && rs <= 1e-9, || format!("{dims:?} scaled={scaled}: vol rel {rv:e}, surface rel {rs:e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} sums, worst relative error {worst:.1e}"))
}

fn lindelof_inequality() -> Outcome {
    let mut total = 0;
    let mut min_gap = f64::INFINITY;
    for n in 2..=4usize {
        for i in 0..100u64 {
            let phi = n + 1 + (i as usize) % (3 * n);
            let s = lindelof_trials(n, phi, 1, 1000 * n as u64 + i).map_err(err)?;
            ensure(s.violations.is_empty(), || format!("n={n} φ={phi}: {:?}", s.violations))?;
            min_gap = min_gap.min(s.min_gap);
            total += 1;
        }
    }
    Ok(format!("{total} bodies, 0 violations, min iq(K) - iq(K0) = {min_gap:.2e}"))
}

fn petty(k: &Polytope, runs: &mut usize) -> Result<isoperilab_core::positions::PositionResult, String> {
    let r = petty_minimize(k, &PettyOptions::default()).map_err(err)?;
    ensure(r.certified, || format!("solver did not converge (residual {:e})", r.isotropy_residual))?;
    let s = schatten_bound_check(k, &r).map_err(err)?;
    ensure(s.lhs <= s.rhs + 1e-8, || format!("Schatten chain: {} > {}", s.lhs, s.rhs))?;
    *runs += 1;
    Ok(r)
}

fn petty_solver() -> Outcome {
    let mut runs = 0;
    let stretches: [&[f64]; 3] = [&[4.0, 0.25], &[3.0, 1.0 / 3.0], &[2.0, 3.0, 1.0 / 6.0]];
    for d in stretches {
        let n = d.len();
        let k = hpoly(&cube(n, 1.0).map_err(err)?)?.apply_map(&GenMatrix::diag(d)).map_err(err)?;
        let r = petty(&k, &mut runs)?;
        ensure((r.iq_after - 2.0 * n as f64).abs() <= 1e-6, || format!("(a) stretch {d:?}: iq_after {}", r.iq_after))?;
    }
    for n in 2..=4 {
        let s = simplex_regular(n).map_err(err)?;
        let r = petty(&hpoly(&s)?, &mut runs)?;
        ensure(r.isotropy_residual < 1e-8, || format!("(b) simplex {n}: residual {:e}", r.isotropy_residual))?;
        ensure((r.iq_after - s.closed.iq).abs() <= 1e-6, || format!("(b) simplex {n}: iq_after {}", r.iq_after))?;
    }
    let mut fixtures = 0;
    for n in 2..=5usize {
        for beta in [2 * n as u64, 4 * n as u64, 1 << n] {
            let e = extremal_vertex_polytope(n, beta).map_err(err)?;
            petty(&e.construction.polytope().map_err(err)?, &mut runs)?;
            if let Some(closed) = e.base.closed.minimal_iq {
                let r = petty(&e.base.polytope().map_err(err)?, &mut runs)?;
                ensure((r.iq_after - closed).abs() <= 1e-6, || {
                    format!("(c) n={n} β={beta}: solver {} vs closed form {closed}", r.iq_after)
                })?;
                fixtures += 1;
            }
        }
    }
    Ok(format!("{runs} solver runs, {fixtures} closed-form fixtures, Schatten chain held on all"))
}

fn spectral_anchors() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=2 {
        let (dec, bk) = bl_transform(cube(n, 1.0).map_err(err)?.hrep.as_ref().unwrap()).map_err(err)?;
        let r = rayleigh_bound(&bk, &TestFunction::from_decomposition(&dec), 0, 0).map_err(err)?;
        let want = 2.5 * n as f64;
        ensure(r.exact && rel(r.lambda_bound, want) <= 1e-12, || format!("n={n}: {} vs {want}", r.lambda_bound))?;
        let truth = box_lambda_reference(&vec![2.0; n]).map_err(err)?;
        ensure(r.lambda_bound >= truth, || format!("n={n}: bound {} below eigenvalue {truth}", r.lambda_bound))?;
        ensure(r.lambda_bound <= 5.0 * n as f64, || format!("n={n}: bound above 5m"))?;
        out.push(format!("{}", r.lambda_bound));
    }
    ensure((box_lambda_reference(&[2.0]).unwrap() - PI * PI / 4.0).abs() < 1e-15, || "π²/4 reference".into())?;
    Ok(format!("λ_bound = {} (π²/4 = {:.4}, π²/2 = {:.4})", out.join(", "), PI * PI / 4.0, PI * PI / 2.0))
}

fn spectral_report() -> CampaignReport {
    spectral_campaign(&SpectralConfig { n: vec![2, 3], m: None, trials: 50, samples: 1_000_000, seed: 2024 })
}

fn spectral_certificates(report: &CampaignReport, elapsed: Duration) -> Outcome {
    let failures: Vec<String> =
        report.cells.iter().filter(|c| !c.passed).map(|c| format!("cell {}: {:?}", c.index, c.failures)).collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:.2?}"))?;
    let worst = report
        .cells
        .iter()
        .map(|c| (c.metrics["lambda_bound"] + c.metrics["halfwidth"]) / c.metrics["five_m"])
        .fold(0.0, f64::max);
    Ok(format!("{} certificates passed, max (λ+4σ)/5m = {worst:.3}", report.cells.len()))
}

fn identity_decomposition(report: &CampaignReport) -> Outcome {
    let mut worst_res: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut runs = 0;
    let mut observe = |n: usize, res: f64, sum: f64| -> Result<(), String> {
        ensure(res <= 1e-9, || format!("n={n}: identity residual {res:e}"))?;
        ensure((sum - n as f64).abs() <= 1e-10, || format!("n={n}: Σc = {sum}"))?;
        worst_res = worst_res.max(res);
        worst_sum = worst_sum.max((sum - n as f64).abs());
        runs += 1;
        Ok(())
    };
    for c in &report.cells {
        observe(c.n, c.metrics["identity_residual"], c.metrics["weight_sum"])?;
    }
    let mut rng = stream_rng(77, 0);
    for n in 2..=6usize {
        for m in [n, n + 2, 2 * n + 3] {
            let ys: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
                .collect();
            let (dec, _) = bl_transform(&slab_polytope(&ys).map_err(err)?).map_err(err)?;
            observe(n, dec.identity_residual, dec.weights.iter().sum())?;
        }
    }
    Ok(format!("{runs} transforms, max residual {worst_res:.1e}, max |Σc - n| {worst_sum:.1e}"))
}

fn scaling_law() -> Outcome {
    let hex = slab_polytope(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).map_err(err)?;
    let bodies = [cube(1, 1.0).map_err(err)?.hrep.unwrap(), cube(2, 1.0).map_err(err)?.hrep.unwrap(), hex];
    let mut worst: f64 = 0.0;
    for h in &bodies {
        let (dec, bk) = bl_transform(h).map_err(err)?;
        let tf = TestFunction::from_decomposition(&dec);
        for s in [0.5, 2.0, 3.0] {
            let r = scaling_law_check(&bk, &tf, s, 0, 0).map_err(err)?;
            let e = rel(r.scaled_bound * s * s, r.bound);
            worst = worst.max(e);
            ensure(r.exact && e <= 1e-12, || format!("n={} s={s}: ratio {} vs {}", h.dim(), r.ratio, s * s))?;
        }
    }
    Ok(format!("9 checks on the quadrature path, worst relative error {worst:.1e}"))
}

fn random_body<R: Rng>(rng: &mut R, n: usize, simplex: bool) -> Result<VPolytope, String> {
    let count = if simplex { n + 1 } else { n + 4 + rng.random_range(0..6) };
    let shift: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let pts: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..n).map(|k| rng.sample::<f64, _>(StandardNormal) + shift[k]).collect())
        .collect();
    Ok(Polytope::from_points(n, pts).map_err(err)?.vrep())
}

fn symmetrization() -> Outcome {
    let mut rng = stream_rng(99, 0);
    let mut worst: f64 = f64::INFINITY;
    let mut triangle_dev: f64 = 0.0;
    for i in 0..200usize {
        let n = 2 + i % 3;
        let simplex = i < 100;
        let k = random_body(&mut rng, n, simplex)?;
        let s = central_symmetrize(&k).map_err(err)?;
        let root = s.volume_ratio.powf(1.0 / n as f64);
        worst = worst.min(root);
        ensure(root >= 0.5, || format!("body {i} (n={n}): vol ratio^(1/n) = {root}"))?;
        if simplex && n == 2 {
            triangle_dev = triangle_dev.max((s.volume_ratio - 2.0 / 3.0).abs());
        }
    }
    ensure(triangle_dev <= 1e-9, || format!("triangle ratio deviates from 2/3 by {triangle_dev:e}"))?;
    Ok(format!("200 bodies, min vol ratio^(1/n) = {worst:.4}, triangle |ratio - 2/3| ≤ {triangle_dev:.1e}"))
}

fn bands(report_a: &CampaignReport, report_b: &CampaignReport, key: &str) -> Result<Vec<(usize, u64, f64)>, String> {
    let mut out = Vec::new();
    for (a, b) in report_a.cells.iter().zip(&report_b.cells) {
        if let (Some(x), Some(y)) = (a.metrics.get(key), b.metrics.get(key)) {
            ensure(rel(*y, *x) <= 0.1, || format!("{} n={} p={}: {x} vs {y}", a.kind, a.n, a.param))?;
            out.push((a.n, a.param, *x));
        }
    }
    Ok(out)
}

fn asymptotic_bands() -> Outcome {
    let t1 = |seed| theorem1_campaign(&Theorem1Config { n: vec![2, 3, 4, 5], phi: None, trials: 5, seed });
    let t2 = |seed| theorem2_campaign(&Theorem2Config { n: vec![2, 3, 4, 5], beta: None, seed });
    let f = bands(&t1(1), &t1(2), "band")?;
    let v = bands(&t2(1), &t2(2), "band")?;
    let range = |b: &[(usize, u64, f64)]| {
        let lo = b.iter().map(|x| x.2).fold(f64::INFINITY, f64::min);
        let hi = b.iter().map(|x| x.2).fold(0.0, f64::max);
        format!("[{lo:.3}, {hi:.3}]")
    };
    Ok(format!("facet band {} over {} cells, vertex band {} over {} cells", range(&f), f.len(), range(&v), v.len()))
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("pool").install(f)
}

fn determinism() -> Outcome {
    let spectral = || {
        spectral_campaign(&SpectralConfig { n: vec![2, 3], m: Some(vec![3, 5]), trials: 3, samples: 100_000, seed: 5 })
            .to_json()
    };
    let t1 = || theorem1_campaign(&Theorem1Config { n: vec![2, 3], phi: None, trials: 3, seed: 5 }).to_json();
    let t2 = || theorem2_campaign(&Theorem2Config { n: vec![2, 3, 4], beta: None, seed: 5 }).to_json();
    for (name, run) in [("spectral", &spectral as &(dyn Fn() -> String + Sync)), ("theorem1", &t1), ("theorem2", &t2)] {
        let one = in_pool(1, run);
        let four = in_pool(4, run);
        ensure(one == four, || format!("{name}: reports differ between 1 and 4 workers"))?;
        ensure(one == in_pool(1, run), || format!("{name}: rerun differs"))?;
    }
    let dir = tempfile::tempdir().map_err(err)?;
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_isoperilab"))
            .args(["--workers", workers, "verify", "--theorem", "spectral", "--n-range", "3", "--m-range", "4..5"])
            .args(["--trials", "2", "--samples", "50000", "--seed", "8", "--format", "csv", "--out"])
            .arg(&out)
            .output()
            .map_err(err)?
            .status;
        ensure(status.success(), || format!("CLI run with {workers} workers exited with {status}"))?;
        outputs.push(std::fs::read(&out).map_err(err)?);
    }
    ensure(outputs[0] == outputs[1], || "CLI output differs between worker counts".into())?;
    Ok("library reports and CLI output byte-identical across reruns and worker counts".into())
}

fn main() {
    let mut failed = 0;
    let mut report = |id: &str, name: &str, t: Instant, outcome: Outcome| {
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  {id:>2}  {name} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {id:>2}  {name} ({secs:.2}s): {msg}");
            }
        }
    };
    let t = Instant::now();
    report("1", "closed-form anchors", t, closed_form_anchors());
    let t = Instant::now();
    let out = l1_sum_formulas().and_then(|m| {
        ensure(t.elapsed() < Duration::from_secs(10), || format!("took {:.2?}", t.elapsed()))?;
        Ok(m)
    });
    report("2", "l1-sum volume and surface formulas", t, out);
    let t = Instant::now();
    let out = lindelof_inequality().and_then(|m| {
        ensure(t.elapsed() < Duration::from_secs(60), || format!("took {:.2?}", t.elapsed()))?;
        Ok(m)
    });
    report("3", "Lindelof inequality", t, out);
    let t = Instant::now();
    report("4", "minimal surface area solver", t, petty_solver());
    let t = Instant::now();
    report("5", "spectral exact anchors", t, spectral_anchors());
    let t = Instant::now();
    let spectral = spectral_report();
    let elapsed = t.elapsed();
    report("6", "spectral campaign", t, spectral_certificates(&spectral, elapsed));
    let t = Instant::now();
    report("7", "identity decomposition", t, identity_decomposition(&spectral));
    let t = Instant::now();
    report("8", "scaling law", t, scaling_law());
    let t = Instant::now();
    report("9", "central symmetrization", t, symmetrization());
    let t = Instant::now();
    report("10", "asymptotic bands (seed stability)", t, asymptotic_bands());
    let t = Instant::now();
    report("11", "determinism", t, determinism());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria passed");
}
