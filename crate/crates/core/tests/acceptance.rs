//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are printed even when every criterion passes.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{parse, polynomial_pairs, THEOREM_ALPHAS, THEOREM_CORPUS};
use fraclim::fracderiv::{
    caputo_closed, caputo_quadrature, rl_caputo_bridge, rl_caputo_bridge_with, rl_power,
    BoundaryCoefficient,
};
use fraclim::leibniz::{leibniz_defect, symmetrized_report, symmetrized_series};
use fraclim::lfd::{lfd_estimate, verify_case, DEFAULT_EXPONENT_TOL};
use fraclim::specfun::gamma;
use fraclim::{Classification, DerivKind, FracOrder, FuncExpr, QuadratureConfig, ScanConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn theorem_corpus() -> Outcome {
    let start = Instant::now();
    let cfg = ScanConfig {
        count: 30,
        ..ScanConfig::default()
    };
    let cases: Vec<(FuncExpr, f64, f64)> = THEOREM_CORPUS
        .iter()
        .flat_map(|&(s, a)| THEOREM_ALPHAS.iter().map(move |&al| (parse(s), a, al)))
        .collect();
    let rows: Vec<_> = cases
        .par_iter()
        .map(|(f, a, al)| verify_case(f, ord(*al), *a, &cfg, DEFAULT_EXPONENT_TOL))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "{} @ {} alpha={} -> {:?}",
                r.function, r.a, r.alpha, r.classification
            )
        })
        .collect();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("runtime {:.1}s exceeds 60s", elapsed.as_secs_f64()));
    }
    if !failed.is_empty() {
        return Err(format!(
            "{} of {} rows failed: {}",
            failed.len(),
            rows.len(),
            failed.join("; ")
        ));
    }
    Ok(format!(
        "{} rows in {:.1}s",
        rows.len(),
        elapsed.as_secs_f64()
    ))
}

fn sin_scaling() -> Outcome {
    let f = FuncExpr::sin(1.0, 1.0, 0.0);
    let r = lfd_estimate(
        &f,
        ord(0.5),
        0.0,
        &ScanConfig::default(),
        DEFAULT_EXPONENT_TOL,
    )
    .map_err(|e| e.to_string())?;
    let slope = r.fitted_exponent.ok_or("no fitted exponent")?;
    let pre = r.fitted_prefactor.ok_or("no fitted prefactor")?;
    let want = 2.0 / std::f64::consts::PI.sqrt();
    let msg = format!(
        "exponent {slope:.5}, prefactor {pre:.6} (rel {:.2e})",
        rel(pre, want)
    );
    if (slope - 0.5).abs() <= 0.05
        && rel(pre, want) <= 0.02
        && r.classification == Classification::Zero
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn power_rule_oracles() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let cfg = QuadratureConfig::with_nodes(4096).unwrap();
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let degree = rng.gen_range(0..=5);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(0.5..2.0)).collect();
        let a = rng.gen_range(-1.0..1.0);
        let x = a + rng.gen_range(0.25..2.0);
        let mut al: f64 = rng.gen_range(0.05..3.0);
        if (al - al.round()).abs() < 0.05 {
            al += 0.1;
        }
        let f = FuncExpr::polynomial(a, &coeffs);
        let closed = caputo_closed(&f, ord(al), a, x)
            .map_err(|e| e.to_string())?
            .value;
        let quad = caputo_quadrature(&f, ord(al), a, x, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let err = if closed == 0.0 {
            quad.abs()
        } else {
            rel(quad, closed)
        };
        if err > 1e-6 {
            return Err(format!(
                "case {case}: {f} alpha={al} x={x}: closed {closed}, quadrature {quad}"
            ));
        }
        worst = worst.max(err);
    }
    let mut ratios = Vec::new();
    for (coeffs, al) in [
        (vec![0.0, 0.0, 0.0, 0.0, 1.0], 0.5),
        (vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.3),
        (vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.5),
        (vec![0.0, 1.0, 0.0, 2.0, 0.0, 1.0], 2.7),
    ] {
        let f = FuncExpr::polynomial(0.0, &coeffs);
        let closed = caputo_closed(&f, ord(al), 0.0, 1.0).unwrap().value;
        let error = |n: usize| {
            let cfg = QuadratureConfig::with_nodes(n).unwrap();
            (caputo_quadrature(&f, ord(al), 0.0, 1.0, &cfg)
                .unwrap()
                .value
                - closed)
                .abs()
        };
        for n in [64, 128, 256] {
            ratios.push(error(n) / error(2 * n));
        }
    }
    let msg = format!(
        "worst rel {worst:.2e}; ratios {}",
        ratios
            .iter()
            .map(|r| format!("{r:.3}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    if ratios.iter().all(|r| (3.0..=5.0).contains(r)) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn annihilation() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for al in [0.1, 0.3, 0.5, 0.9, 1.0, 1.2, 1.7, 2.0, 2.4, 3.0, 3.6] {
        let alpha = ord(al);
        for a in [0.0, -0.7, 1.5] {
            for x in [a + 0.3, a + 1.0, a + 4.0] {
                let c = FuncExpr::constant(7.0);
                let v = caputo_closed(&c, alpha, a, x)
                    .map_err(|e| e.to_string())?
                    .value;
                if v != 0.0 {
                    return Err(format!("constant, alpha={al}: closed {v}"));
                }
                for k in 0..alpha.n() {
                    let t = FuncExpr::monomial(1.0, a, k);
                    let v = caputo_closed(&t, alpha, a, x)
                        .map_err(|e| e.to_string())?
                        .value;
                    if v != 0.0 {
                        return Err(format!("(x-{a})^{k}, alpha={al}: closed {v}"));
                    }
                    // Same polynomial written about another center takes the quadrature path.
                    let shifted = FuncExpr::monomial(1.0, a + 0.25, k) + FuncExpr::constant(2.0);
                    let q = caputo_quadrature(&shifted, alpha, a, x, &cfg)
                        .map_err(|e| e.to_string())?
                        .value;
                    worst = worst.max(q.abs());
                }
                let q = caputo_quadrature(&c, alpha, a, x, &cfg)
                    .map_err(|e| e.to_string())?
                    .value;
                worst = worst.max(q.abs());
            }
        }
    }
    if worst <= 1e-10 {
        Ok(format!(
            "closed forms exactly 0; worst quadrature {worst:.1e}"
        ))
    } else {
        Err(format!("worst quadrature {worst:.3e}"))
    }
}

fn leibniz_dichotomy() -> Outcome {
    let cfg = QuadratureConfig::default();
    let points = [0.25, 0.5, 1.0, 1.5];
    let mut pairs = polynomial_pairs();
    pairs.push((FuncExpr::sin(1.0, 1.0, 0.0), FuncExpr::exp(1.0, 1.0)));
    pairs.push((
        FuncExpr::cos(1.0, 2.0, 0.3),
        FuncExpr::monomial(1.0, 0.0, 2),
    ));
    let mut worst: f64 = 0.0;
    for (f, g) in &pairs {
        for op in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
            let r = leibniz_defect(f, g, ord(1.0), 0.0, &points, &cfg, op)
                .map_err(|e| e.to_string())?;
            worst = worst.max(r.max_abs_defect);
        }
    }
    let x = FuncExpr::monomial(1.0, 0.0, 1);
    let r = leibniz_defect(&x, &x, ord(0.5), 0.0, &[1.0], &cfg, DerivKind::Caputo)
        .map_err(|e| e.to_string())?;
    let want =
        gamma(3.0).unwrap() / gamma(2.5).unwrap() - 2.0 * gamma(2.0).unwrap() / gamma(1.5).unwrap();
    let msg = format!(
        "alpha=1 worst {worst:.1e}; x*x at 0.5: {:.8} (want {want:.8})",
        r.defect[0]
    );
    if worst <= 1e-10 && (r.defect[0] - want).abs() <= 1e-4 && (r.defect[0] + 0.75225).abs() <= 1e-4
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn symmetrized() -> Outcome {
    let cfg = QuadratureConfig::default();
    let x = FuncExpr::monomial(1.0, 0.0, 1);
    let s = symmetrized_series(&x, &x, ord(0.5), 0.0, 1.0, 1, &cfg).map_err(|e| e.to_string())?;
    let want = 2.0 / gamma(2.5).unwrap();
    if (s.value - want).abs() > 1e-9 || (s.value - 1.5045055561).abs() > 1e-9 {
        return Err(format!("K=1 partial sum {} (want {want})", s.value));
    }
    let mut worst: f64 = 0.0;
    for (f, g) in polynomial_pairs() {
        for al in [0.3, 0.5, 1.5, 2.25] {
            let r = symmetrized_report(&f, &g, ord(al), 0.0, &[0.5, 1.0, 2.0], None, &cfg)
                .map_err(|e| e.to_string())?;
            worst = worst.max(r.max_abs_defect);
        }
    }
    let msg = format!(
        "K=1 sum {:.10}; worst terminated-series defect {worst:.1e}",
        s.value
    );
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn bridge() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let degree = rng.gen_range(0..=4);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let a = rng.gen_range(-1.0..1.0);
        let x = a + rng.gen_range(0.2..2.5);
        let al = ord(rng.gen_range(0.1..3.4));
        let f = FuncExpr::polynomial(a, &coeffs);
        let mut want = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            want += c * rl_power(k as f64, al, a, x)
                .map_err(|e| e.to_string())?
                .value;
        }
        let got = rl_caputo_bridge(&f, al, a, x, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let err = (got - want).abs() / want.abs().max(1.0);
        if err > 1e-8 {
            return Err(format!(
                "case {case}: {f} alpha={al}: bridge {got}, power rule {want}"
            ));
        }
        worst = worst.max(err);
    }
    let f = FuncExpr::polynomial(0.0, &[1.0, 1.0]);
    let printed =
        rl_caputo_bridge_with(&f, ord(0.5), 0.0, 1.0, &cfg, BoundaryCoefficient::Factorial)
            .map_err(|e| e.to_string())?
            .value;
    let want = rl_power(0.0, ord(0.5), 0.0, 1.0).unwrap().value
        + rl_power(1.0, ord(0.5), 0.0, 1.0).unwrap().value;
    let msg = format!("worst {worst:.1e}; 1/k! form gives {printed:.6} vs {want:.6}");
    if (printed - want).abs() > 1e-3 {
        Ok(msg)
    } else {
        Err(format!("1/k! form unexpectedly agrees: {msg}"))
    }
}

fn divergent() -> Outcome {
    let f = FuncExpr::power(1.0, 0.0, 0.3).unwrap();
    let r = lfd_estimate(
        &f,
        ord(0.7),
        0.0,
        &ScanConfig::default(),
        DEFAULT_EXPONENT_TOL,
    )
    .map_err(|e| e.to_string())?;
    let slope = r.fitted_exponent.ok_or("no fitted exponent")?;
    let msg = format!("{:?}, exponent {slope:.5}", r.classification);
    if r.classification == Classification::Divergent && (slope + 0.4).abs() <= 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 zero-or-integer-derivative theorem over corpus",
            theorem_corpus,
        ),
        ("2 sin x scaling law at alpha=0.5", sin_scaling),
        (
            "3 quadrature vs power-rule oracle, convergence order",
            power_rule_oracles,
        ),
        ("4 constant and Taylor-term annihilation", annihilation),
        ("5 Leibniz defect dichotomy", leibniz_dichotomy),
        ("6 symmetrized Leibniz series", symmetrized),
        ("7 RL-Caputo bridge consistency", bridge),
        ("8 divergent detection for x^0.3 at alpha=0.7", divergent),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
