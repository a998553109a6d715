//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use metrics_lab::bounds::{self, jstar_threshold, RadiusWindow};
use metrics_lab::experiments::{
    self, bound_pair, compare_bound_methods, example_boundcomp, inequality_fuzz, sample_unit_ball,
    sample_unit_disk, sup_distortion_estimate, trial_rng, FuzzConfig,
};
use metrics_lab::geometry::{Domain, Point};
use metrics_lab::metrics::{self, MetricKind};
use metrics_lab::moebius::{ball_automorphism, disk_image_radii, hyperbolic_midpoint, make_ta, sector_power_map, MoebiusMap};
use metrics_lab::schwarz::{self, c_of_k, elliptic_k, mu, phi_k2, v_constant, Dilatation};
use metrics_lab::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{name} = {got}, expected {want} ± {tol:e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example", worked_example),
        ("Monte Carlo comparison", monte_carlo),
        ("inequality suite", inequality_suite),
        ("sharpness probes", sharpness_probes),
        ("special functions", special_functions),
        ("oracle equivalence", oracle_equivalence),
        ("Moebius and midpoint", moebius_midpoint),
        ("Schwarz bounds for conformal maps", schwarz_fuzz),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1} s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1} s] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let ex = example_boundcomp().map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    within("quotient", ex.quotient, 1.162104, 5e-6)?;
    within("annulus lower", ex.annulus_bounds.lower, 0.6399585, 1e-6)?;
    within("annulus upper", ex.annulus_bounds.upper, 1.818284, 1e-6)?;
    within("midpoint lower", ex.midpoint_bounds.lower, 0.6964436, 1e-6)?;
    within("midpoint upper", ex.midpoint_bounds.upper, 1.356354, 1e-6)?;
    ensure(secs < 1.0, || format!("took {secs} s"))?;
    Ok(format!(
        "quotient {:.7}, annulus ({:.7}, {:.6}), midpoint ({:.7}, {:.6})",
        ex.quotient, ex.annulus_bounds.lower, ex.annulus_bounds.upper, ex.midpoint_bounds.lower, ex.midpoint_bounds.upper
    ))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let s = compare_bound_methods(1_000_000, 42).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let f = s.fraction();
    ensure((0.940..=0.950).contains(&f), || format!("fraction {f}"))?;
    ensure(secs < 60.0, || format!("took {secs} s"))?;
    let other = compare_bound_methods(1_000_000, 4242).map_err(|e| e.to_string())?.fraction();
    ensure((f - other).abs() < 0.002, || format!("seeds disagree: {f} vs {other}"))?;
    let p = bound_pair(c(0.7, 0.0), c(0.1, 0.3), c(0.3, 0.5)).map_err(|e| e.to_string())?;
    ensure(p.midpoint.lower > p.annulus.lower && p.midpoint.upper < p.annulus.upper, || {
        "worked example not counted as both better".into()
    })?;
    Ok(format!("both better {}/{} = {f} in {secs:.2} s (seed 4242: {other})", s.both_better, s.total))
}

fn inequality_suite() -> Outcome {
    let domains = [
        Domain::unit_ball(2).unwrap(),
        Domain::half_space(2).unwrap(),
        Domain::unit_ball(3).unwrap(),
        Domain::sector(FRAC_PI_2).unwrap(),
    ];
    let mut parts = Vec::new();
    for (i, d) in domains.iter().enumerate() {
        let r = inequality_fuzz(d, &FuzzConfig::new(100_000, 1000 + i as u64)).map_err(|e| e.to_string())?;
        ensure(r.violation_count == 0, || {
            format!("{}: {} violations, first {:?}", r.domain, r.violation_count, r.violations.first())
        })?;
        if let Some(gap) = r.max_halfspace_gap {
            ensure(gap < 1e-10, || format!("{}: max |s - th(rho/2)| = {gap:e}", r.domain))?;
        }
        parts.push(format!("{} {} checks", r.domain, r.checks));
    }
    Ok(format!("0 violations ({})", parts.join(", ")))
}

fn ratio(kind: MetricKind, x: Complex64, y: Complex64) -> f64 {
    let ball = Domain::unit_ball(2).unwrap();
    metrics::evaluate(kind, &ball, &pt(x), &pt(y)).unwrap() / metrics::tanh_half_rho(&ball, &pt(x), &pt(y)).unwrap()
}

/// Extremal point configurations, one per window endpoint.
fn sharpness_probes() -> Outcome {
    let dir = Complex64::from_polar(1.0, 0.4);
    let eps = 1e-7;
    let mut worst = 0.0f64;
    let mut probes = 0;
    let mut check = |label: &str, got: f64, want: f64| -> Result<(), String> {
        probes += 1;
        worst = worst.max((got - want).abs());
        within(label, got, want, 1e-3)
    };
    for (r_l, r_u) in [(0.0, 0.5), (0.1, 0.6), (0.25, 0.8), (0.4, 0.9), (0.7, 0.95)] {
        let w = RadiusWindow::new(r_l, r_u).unwrap();
        let at = |r: f64| dir * r;
        let b = |k| bounds::ratio_bounds_vs_half_rho(k, w).unwrap();
        // t: upper at x → y⁻, |y| = r_u; lower at x = 0.
        check("t upper", ratio(MetricKind::T, at(r_u * (1.0 - eps)), at(r_u)), b(MetricKind::T).upper)?;
        if r_l == 0.0 {
            check("t lower", ratio(MetricKind::T, at(0.0), at(r_u)), b(MetricKind::T).lower)?;
        }
        // j*: upper as x → y; lower at x = −y (below the threshold) or on the
        // circle |x| = |y| = r_l with chord (1−r_l)(1+r_l)²/2.
        check("j* upper", ratio(MetricKind::JStar, at(r_u * (1.0 - eps)), at(r_u)), b(MetricKind::JStar).upper)?;
        let rl = r_l.max(1e-4);
        let jl = if rl < jstar_threshold() {
            ratio(MetricKind::JStar, -at(rl), at(rl))
        } else {
            let chord = (1.0 - rl) * (1.0 + rl).powi(2) / 2.0;
            let half = (chord / (2.0 * rl)).asin();
            ratio(MetricKind::JStar, dir * Complex64::from_polar(rl, -half), dir * Complex64::from_polar(rl, half))
        };
        check("j* lower", jl, bounds::ratio_bounds_vs_half_rho(MetricKind::JStar, RadiusWindow::new(rl, r_u).unwrap()).unwrap().lower)?;
        // p: lower for nearby radial points at r_l; upper at x = −y, |y| = r_u.
        let pw = RadiusWindow::new(rl, r_u).unwrap();
        let pb = bounds::ratio_bounds_vs_half_rho(MetricKind::P, pw).unwrap();
        check("p lower", ratio(MetricKind::P, at(rl), at(rl * (1.0 + eps))), pb.lower)?;
        check("p upper", ratio(MetricKind::P, -at(r_u), at(r_u)), pb.upper)?;
        // Barrlund p = 2: lower at x = −y, |y| = r_l; upper as x → y, |y| = r_u.
        let bb = bounds::ratio_bounds_vs_half_rho(MetricKind::Barrlund(2.0), pw).unwrap();
        check("b lower", ratio(MetricKind::Barrlund(2.0), -at(rl), at(rl)), bb.lower)?;
        check("b upper", ratio(MetricKind::Barrlund(2.0), at(r_u * (1.0 - eps)), at(r_u)), bb.upper)?;
    }

    let kinds = [
        MetricKind::T,
        MetricKind::JStar,
        MetricKind::W,
        MetricKind::S,
        MetricKind::P,
        MetricKind::Barrlund(2.0),
    ];
    let mut above = Vec::new();
    let mut min_excess = f64::INFINITY;
    for m in [0.3, 0.7, 0.95] {
        let a = Complex64::from_polar(m, 1.1);
        for kind in kinds {
            let est = sup_distortion_estimate(a, kind, 2_000, 77).map_err(|e| e.to_string())?;
            min_excess = min_excess.min(est.estimate - (1.0 + m));
            ensure(est.estimate >= 1.0 + m - 1e-3, || format!("{kind}, |a| = {m}: estimate {}", est.estimate))?;
            if est.estimate > 1.0 + m + 1e-3 {
                above.push(format!("{kind}@{m}: {}", est.estimate));
            }
        }
    }
    let conjecture = if above.is_empty() {
        "no estimate above 1+|a|+1e-3".to_string()
    } else {
        format!("estimates above 1+|a|+1e-3: {}", above.join("; "))
    };
    Ok(format!(
        "{probes} endpoint probes, worst gap {worst:.1e}; sup estimates >= 1+|a|{min_excess:+.1e}; {conjecture}"
    ))
}

fn special_functions() -> Outcome {
    let mut dk = 0.0f64;
    for i in 0..100 {
        let r = i as f64 / 100.0;
        dk = dk.max((elliptic_k(r).unwrap() - elliptic_k_quadrature(r)).abs());
    }
    ensure(dk < 1e-12, || format!("max |K_agm - K_quad| = {dk:e}"))?;
    let mut dmu = 0.0f64;
    for i in 1..100 {
        let r = i as f64 / 100.0;
        let rc = (1.0 - r * r).sqrt();
        dmu = dmu.max((mu(r).unwrap() * mu(rc).unwrap() - PI * PI / 4.0).abs());
    }
    ensure(dmu <= 1e-10, || format!("mu product off by {dmu:e}"))?;
    let mut did = 0.0f64;
    let mut d22 = 0.0f64;
    let mut ddouble = 0.0f64;
    for i in 1..100 {
        let t = i as f64 / 100.0;
        did = did.max((phi_k2(1.0, t).unwrap() - t).abs());
        d22 = d22.max((phi_k2(2.0, t * t).unwrap() - 2.0 * t / (1.0 + t * t)).abs());
        for k in [1.0, 1.25, 1.5, 2.0, 3.0, 5.0] {
            let lhs = phi_k2(2.0 * k, t * t).unwrap();
            let rhs = phi_k2(k, 2.0 * t / (1.0 + t * t)).unwrap();
            ddouble = ddouble.max((lhs - rhs).abs());
        }
    }
    ensure(did <= 1e-12, || format!("phi_1 off identity by {did:e}"))?;
    ensure(d22 <= 1e-10, || format!("phi_2(t^2) off by {d22:e}"))?;
    ensure(ddouble <= 1e-10, || format!("phi_2K(t^2) vs phi_K(2t/(1+t^2)) off by {ddouble:e}"))?;
    let c1 = c_of_k(1.0).unwrap().exact;
    within("c(1)", c1, 1.0, 1e-12)?;
    for k in [1.0, 1.1, 1.5, 2.0, 3.0, 4.0, 8.0] {
        let cc = c_of_k(k).unwrap();
        ensure(cc.exact <= v_constant() * (k - 1.0) + k + 1e-12, || format!("c({k}) = {} above bound", cc.exact))?;
    }
    Ok(format!(
        "|dK| {dk:.1e}, mu product {dmu:.1e}, phi_1 {did:.1e}, phi_2 {d22:.1e}, doubling {ddouble:.1e}, c(1) = {c1}"
    ))
}

fn oracle_equivalence() -> Outcome {
    let ball = Domain::unit_ball(2).unwrap();
    let (mut ds, mut db) = (0.0f64, 0.0f64);
    for i in 0..1000u64 {
        let mut rng = trial_rng(606, i);
        let (x, y) = (sample_unit_disk(&mut rng), sample_unit_disk(&mut rng));
        let s = metrics::s_metric(&ball, &pt(x), &pt(y)).map_err(|e| e.to_string())?;
        ds = ds.max((s - s_disk_scan(x, y, SCAN_POINTS)).abs());
        let p = if i % 2 == 0 { 2.0 } else { 3.0 };
        let b = metrics::barrlund_by_search(&ball, p, &pt(x), &pt(y)).map_err(|e| e.to_string())?;
        db = db.max((b - barrlund_disk_scan(x, y, p, SCAN_POINTS)).abs());
    }
    ensure(ds < 1e-6, || format!("s vs scan {ds:e}"))?;
    ensure(db < 1e-6, || format!("Barrlund vs scan {db:e}"))?;
    let mut dh = 0.0f64;
    for n in [2usize, 3] {
        let h = Domain::half_space(n).unwrap();
        for i in 0..1000u64 {
            let mut rng = trial_rng(707 + n as u64, i);
            let mut draw = || {
                let mut v: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
                v.push(10f64.powf(rng.random_range(-3.0..1.0)));
                v
            };
            let (x, y) = (draw(), draw());
            let th = th_half_rho_halfspace(&x, &y);
            let (px, py) = (Point::new(x).unwrap(), Point::new(y).unwrap());
            for kind in [MetricKind::W, MetricKind::S, MetricKind::P] {
                let v = metrics::evaluate(kind, &h, &px, &py).map_err(|e| e.to_string())?;
                dh = dh.max((v - th).abs());
            }
        }
    }
    ensure(dh <= 1e-12, || format!("half-space closed forms off by {dh:e}"))?;
    Ok(format!("s {ds:.1e}, Barrlund {db:.1e} vs 1e6-point scans; half-space w = s = p = th(rho/2) within {dh:.1e}"))
}

fn moebius_midpoint() -> Outcome {
    let ball = Domain::unit_ball(2).unwrap();
    let rho = |x: Complex64, y: Complex64| metrics::rho(&ball, &pt(x), &pt(y)).unwrap();
    let mut dinv = 0.0f64;
    for i in 0..1000u64 {
        let mut rng = trial_rng(808, i);
        let a = sample_unit_disk(&mut rng);
        let (x, y) = (sample_unit_disk(&mut rng), sample_unit_disk(&mut rng));
        let m = make_ta(a).map_err(|e| e.to_string())?;
        let (fx, fy) = (m.apply(x).map_err(|e| e.to_string())?, m.apply(y).map_err(|e| e.to_string())?);
        dinv = dinv.max((rho(fx, fy) - rho(x, y)).abs());
    }
    ensure(dinv <= 1e-10, || format!("rho invariance off by {dinv:e}"))?;
    let mut dmid = 0.0f64;
    for i in 0..10_000u64 {
        let mut rng = trial_rng(909, i);
        let (x, y) = (sample_unit_disk(&mut rng), sample_unit_disk(&mut rng));
        let q = hyperbolic_midpoint(&pt(x), &pt(y)).unwrap().to_complex().unwrap();
        let half = rho(x, y) / 2.0;
        dmid = dmid.max((rho(x, q) - half).abs()).max((rho(q, y) - half).abs());
    }
    ensure(dmid <= 1e-10, || format!("midpoint off by {dmid:e}"))?;
    let mut drad = 0.0f64;
    for i in 0..40u64 {
        let mut rng = trial_rng(1010, i);
        let a = sample_unit_disk(&mut rng);
        let r = rng.random_range(0.01..0.99);
        let (lo, hi) = disk_image_radii(a, r).map_err(|e| e.to_string())?;
        let (slo, shi) = image_radii_scan(a, r, SCAN_POINTS);
        drad = drad.max((lo - slo).abs()).max((hi - shi).abs());
    }
    ensure(drad <= 1e-9, || format!("image radii off by {drad:e}"))?;
    Ok(format!("rho invariance {dinv:.1e}, midpoint {dmid:.1e}, image radii {drad:.1e}"))
}

/// Conformal (K = 1) maps against every quasiregular Schwarz-lemma bound.
fn schwarz_fuzz() -> Outcome {
    const SLACK: f64 = 1e-9;
    let b2 = Domain::unit_ball(2).unwrap();
    let b3 = Domain::unit_ball(3).unwrap();
    let d2 = Dilatation::new(1.0, 2).unwrap();
    let d3 = Dilatation::new(1.0, 3).unwrap();
    let le = |label: &str, v: f64, bound: f64| -> Result<(), String> {
        ensure(v <= bound + SLACK, || format!("{label}: {v} > {bound}"))
    };
    let kinds = [MetricKind::JStar, MetricKind::W, MetricKind::S, MetricKind::P];
    let mut checks = 0u64;
    for i in 0..10_000u64 {
        let mut rng = trial_rng(1111, i);
        // Planar: rotation ∘ T_a.
        let a = sample_unit_disk(&mut rng);
        let map = MoebiusMap::rotation(rng.random_range(0.0..2.0 * PI)).compose(&make_ta(a).unwrap()).unwrap();
        let (x, y) = (sample_unit_disk(&mut rng), sample_unit_disk(&mut rng));
        let (fx, fy) = (map.apply(x).unwrap(), map.apply(y).unwrap());
        let (px, py, pfx, pfy) = (pt(x), pt(y), pt(fx), pt(fy));
        let rho = metrics::rho(&b2, &px, &py).unwrap();
        let rho_f = metrics::rho(&b2, &pfx, &pfy).unwrap();
        let sb = schwarz::schwarz_rho_bounds(&d2, rho).unwrap();
        le("rho phi bound", rho_f, sb.b1_phi.unwrap())?;
        le("th power bound", (rho_f / 2.0).tanh(), sb.b1_power)?;
        le("rho + log 4", rho_f, sb.b2)?;
        le("c(K) bound", rho_f, sb.b3.unwrap())?;
        checks += 4;
        for kind in kinds {
            let m = metrics::evaluate(kind, &b2, &px, &py).unwrap();
            let mf = metrics::evaluate(kind, &b2, &pfx, &pfy).unwrap();
            let db = schwarz::metric_distortion_bounds(&d2, m).unwrap();
            le("phi bound", mf, db.phi_bound.unwrap())?;
            le("power bound", mf, db.power_bound)?;
            le("sharp phi", mf, db.sharp_phi.unwrap())?;
            le("sharp power", mf, db.sharp_power.unwrap())?;
            checks += 4;
        }
        let jb = schwarz::jstar_image_bounds(&d2, &px, &py, Some((&pfx, &pfy))).unwrap();
        le("j* phi form", jb.lhs.unwrap(), jb.phi_bound.unwrap())?;
        le("j* power form", jb.lhs.unwrap(), jb.power_bound)?;
        checks += 2;

        // Spatial: Möbius self-map of the 3-ball.
        let a3 = sample_unit_ball(&mut rng, 3);
        let (x3, y3) = (sample_unit_ball(&mut rng, 3), sample_unit_ball(&mut rng, 3));
        let (fx3, fy3) = (ball_automorphism(&a3, &x3).unwrap(), ball_automorphism(&a3, &y3).unwrap());
        let rho = metrics::rho(&b3, &x3, &y3).unwrap();
        let rho_f = metrics::rho(&b3, &fx3, &fy3).unwrap();
        let sb = schwarz::schwarz_rho_bounds(&d3, rho).unwrap();
        le("3D th power bound", (rho_f / 2.0).tanh(), sb.b1_power)?;
        le("3D rho + log 4", rho_f, sb.b2)?;
        checks += 2;
        for kind in kinds {
            let m = metrics::evaluate(kind, &b3, &x3, &y3).unwrap();
            let mf = metrics::evaluate(kind, &b3, &fx3, &fy3).unwrap();
            le("3D power bound", mf, schwarz::metric_distortion_bounds(&d3, m).unwrap().power_bound)?;
            checks += 1;
        }
        let jb = schwarz::jstar_image_bounds(&d3, &x3, &y3, Some((&fx3, &fy3))).unwrap();
        le("3D j* power form", jb.lhs.unwrap(), jb.power_bound)?;
        checks += 1;

        // Sector power maps z^{β/α}: S_α → S_β.
        let alpha = rng.random_range(0.05..PI);
        let beta = rng.random_range(0.05..PI);
        let mut sector_point = || {
            let r = 10f64.powf(rng.random_range(-2.0..0.5));
            Complex64::from_polar(r, alpha * rng.random_range(0.001..0.999))
        };
        let (x, y) = (sector_point(), sector_point());
        let (sa, sb_) = (Domain::sector(alpha).unwrap(), Domain::sector(beta).unwrap());
        let (fx, fy) = (sector_power_map(alpha, beta, x).unwrap(), sector_power_map(alpha, beta, y).unwrap());
        let w = metrics::w_quasi(&sa, &pt(x), &pt(y)).unwrap();
        let wf = metrics::w_quasi(&sb_, &pt(fx), &pt(fy)).unwrap();
        let i = schwarz::sector_qc_bounds(1.0, alpha, beta, w).unwrap();
        ensure(i.contains(wf, SLACK), || format!("sector alpha {alpha} beta {beta}: {wf} not in {i:?}"))?;
        checks += 1;
    }
    Ok(format!("{checks} bound checks over 10^4 trials, 0 violations"))
}

fn determinism() -> Outcome {
    let run = || -> String {
        let mc = compare_bound_methods(100_000, 31).unwrap();
        let sup = sup_distortion_estimate(c(0.5, 0.2), MetricKind::S, 500, 32).unwrap();
        let fz = inequality_fuzz(&Domain::unit_ball(2).unwrap(), &FuzzConfig::new(1000, 33)).unwrap();
        let grid = experiments::grid_lu(11).unwrap();
        serde_json::to_string(&(mc, sup, fz, grid)).unwrap()
    };
    let outputs: Vec<String> = [1usize, 2, 4]
        .iter()
        .map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(run))
        .collect();
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "outputs differ across thread counts".into())?;
    ensure(run() == outputs[0], || "re-run differs".into())?;
    Ok(format!("bit-identical across 1, 2, 4 threads and a re-run ({} bytes)", outputs[0].len()))
}
