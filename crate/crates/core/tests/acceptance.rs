//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Two stated sub-claims cannot be met (see the ledger kept with the project notes):
//! the Parseval series of the uniform law converges too slowly to agree with quadrature
//! to 1e−5, and P″(π/6) for the counterexample is 3/2, not 3/4. Their lines print FAIL and
//! the claims themselves are asserted in the ignored tests at the bottom of this file.

use std::f64::consts::PI;
use std::io::Write as _;
use std::time::Instant;

use renyi_lab::density::{
    convolve, discretize, entropy, normalized_sum_density, pointwise_density_bound_check, wasserstein2,
};
use renyi_lab::divergence::{infinite_order, kl, relative_fisher, renyi_tsallis, tv_hellinger};
use renyi_lab::edgeworth::expansion_constants;
use renyi_lab::experiment::{rate_experiment, Distance, ExperimentConfig, Format};
use renyi_lab::hermite::{chi2_from_normal_moments, hermite_eval, normal_moments_model, NormalMomentVector};
use renyi_lab::special::{factorial, gauss_hermite_prob, std_normal_pdf};
use renyi_lab::subgauss::{
    bernoulli_subgauss_constant, dinf_clt_check, esscher, numeric_subgauss_constant, profile, quartic_classify,
};
use renyi_lab::trig::TrigPoly;
use renyi_lab::zoo::{bernoulli_gauss_construct, bernoulli_gauss_touch_point, counterexample_poly, ModelKind};
use renyi_lab::{make_model, AnalyticModel, GridConfig, GridDensity, ModelSpec, Verdict};

struct Line {
    id: usize,
    pass: bool,
    /// Verdict on the attainable part of the criterion.
    core: bool,
    detail: String,
}

fn report(id: usize, pass: bool, detail: String) -> Line {
    // written past libtest's capture so the verdicts show up in plain `cargo test` output
    let _ = writeln!(
        std::io::stdout(),
        "criterion {id}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    Line {
        id,
        pass,
        core: pass,
        detail,
    }
}

fn model(s: &str) -> AnalyticModel {
    make_model(&ModelSpec::parse(s).unwrap()).unwrap()
}

fn uniform_chi2_rate() -> Line {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        model: ModelSpec::named("uniform"),
        distance: Distance::Chi2,
        n_values: vec![16, 32, 64],
        grid: GridConfig::new(12.0, 1 << 14).unwrap(),
        output: None,
        format: Format::Csv,
    };
    let r = rate_experiment(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let fit = r.rows[2].fitted_constant.unwrap();
    let rel = (fit - 0.06).abs() / 0.06;
    report(
        1,
        rel < 0.10 && secs < 30.0,
        format!("Richardson n²χ² = {fit:.6} vs 0.06 (rel {rel:.2e}), {secs:.1} s"),
    )
}

fn skewed_kl_rate() -> Line {
    let m = model("bernoulli_gauss:p=0.2,weight=0.5").standardized();
    let g = m.cumulants().unwrap().standardized();
    let target = expansion_constants(&g).unwrap().entropy_c1;
    let cfg = GridConfig::default();
    let pn = normalized_sum_density(&m, 64, &cfg).unwrap();
    let d = kl(&pn, &GridDensity::standard_normal(&cfg)).unwrap().value.value();
    let rel = (64.0 * d - target).abs() / target;
    report(
        2,
        rel < 0.15,
        format!(
            "γ₃ = {:.6}, 64·D = {:.6} vs γ₃²/12 = {target:.6} (rel {rel:.2e})",
            g.gamma(3),
            64.0 * d
        ),
    )
}

/// (grid χ², series result) for a model as given.
fn parseval(m: &AnalyticModel, k: usize) -> (f64, Result<f64, String>) {
    let cfg = GridConfig::default();
    let p = discretize(m, &cfg).unwrap();
    let grid = renyi_tsallis(&p, &GridDensity::standard_normal(&cfg), 2.0)
        .unwrap()
        .t
        .value();
    let c = normal_moments_model(m, k).unwrap();
    (
        grid,
        chi2_from_normal_moments(&c, 1.0)
            .map(|s| s.value)
            .map_err(|e| e.to_string()),
    )
}

fn parseval_equivalence() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [1, 2, 3] {
        let (g, s) = parseval(&model(&format!("power_density:d={d}")), 40);
        let s = s.unwrap();
        ok &= (g - s).abs() < 1e-5;
        parts.push(format!("power d={d}: {g:.8} vs {s:.8}"));
    }
    let exact = chi2_from_normal_moments(&NormalMomentVector::new(vec![1.0, 0.0, 2.0, 0.0, 0.0, 0.0]), 1.0).unwrap();
    ok &= exact.value == 2.0;
    parts.push(format!("x²φ series = {}", exact.value));
    let core = ok;
    let (g, s) = parseval(&model("uniform"), 40);
    match s {
        Ok(s) => {
            ok &= (g - s).abs() < 1e-5;
            parts.push(format!("uniform: {g:.8} vs {s:.8}"));
        }
        Err(e) => {
            ok = false;
            parts.push(format!("uniform: grid {g:.8}, series: {e}"));
        }
    }
    Line {
        core,
        ..report(3, ok, parts.join("; "))
    }
}

fn centered_bernoulli_k(p: f64) -> impl Fn(f64) -> f64 {
    let q = 1.0 - p;
    move |t: f64| {
        let (a, b) = (p.ln() + q * t, q.ln() - p * t);
        a.max(b) + (-(a - b).abs()).exp().ln_1p()
    }
}

fn bernoulli_constant() -> Line {
    let mut worst: f64 = 0.0;
    for p in [0.05, 0.1, 0.3, 0.5] {
        let closed = bernoulli_subgauss_constant(p).unwrap();
        let numeric = numeric_subgauss_constant(centered_bernoulli_k(p), 60.0, 120_000);
        worst = worst.max((closed - numeric).abs());
    }
    report(4, worst < 1e-6, format!("max |closed − numeric| = {worst:.2e}"))
}

fn equality_point() -> Line {
    let (p, beta) = (0.2, 1.2);
    let m = bernoulli_gauss_construct(p, beta).unwrap();
    let k = m.laplace().unwrap().k.clone();
    let t0 = -2.0 * (p.ln() - (1.0 - p).ln());
    let ts = bernoulli_gauss_touch_point(p, beta).unwrap();
    let gap = (k(ts) - 0.5 * beta * ts * ts).abs();
    // 1000 points on [−3t*, 3t*] avoiding t = 0 and t = t* themselves
    let (mut below, mut worst) = (true, f64::NEG_INFINITY);
    for i in 0..1000 {
        let t = -3.0 * ts + 6.0 * ts * (i as f64 + 0.5) / 1000.0;
        if (t - ts).abs() < 1e-12 {
            continue;
        }
        let d = k(t) - 0.5 * beta * t * t;
        worst = worst.max(d);
        below &= d < 0.0;
    }
    report(
        5,
        gap < 1e-9 && below,
        format!(
            "t₀ = {t0:.6} (Bernoulli part), model touches at t₀/a = {ts:.6} with gap {gap:.1e}; max K − βt²/2 elsewhere = {worst:.2e}"
        ),
    )
}

fn dinf_dichotomy() -> Line {
    let sin4 = dinf_clt_check(&profile(&model("sin_power:m=4"), (0.0, 50.0), 20_000).unwrap());
    let ce = dinf_clt_check(&profile(&model("counterexample"), (0.0, 50.0), 20_000).unwrap());
    let witness = ce
        .witnesses
        .iter()
        .find(|w| w.margin < 0.0 && (w.t - PI / 6.0).abs() < 1e-8);
    let t0 = PI / 6.0;
    let q = TrigPoly::sin_power(2).add(&TrigPoly::sin_power(4).scale(-4.0));
    let q1 = q.derivative(1).eval(t0);
    let p2 = counterexample_poly().derivative(2).eval(t0);
    let core = sin4.verdict == Verdict::Holds
        && ce.verdict == Verdict::Fails
        && witness.is_some()
        && (q1 + 3f64.sqrt() / 2.0).abs() < 1e-12
        && (q1 * q1 - 0.75).abs() < 1e-12
        && p2.abs() > 1e-6;
    let line = report(
        6,
        core && (p2 - 0.75).abs() < 1e-9,
        format!(
            "sin⁴: {:?}; counterexample: {:?}, witness {:?}; Q′(t₀) = {q1:.12}, Q′² = {:.12}, P″(t₀) = {p2:.12} (stated 3/4; P = Q² gives 2Q′²)",
            sin4.verdict,
            ce.verdict,
            witness.map(|w| w.t),
            q1 * q1
        ),
    );
    Line { core, ..line }
}

fn quartic() -> Line {
    let c = quartic_classify((2.0f64 / 3.0).sqrt(), 1.0 / 3.0);
    let first_quadrant: Vec<f64> = c.angles.iter().copied().filter(|a| *a > 0.0 && *a < PI / 2.0).collect();
    let ok = c.is_strictly_subgaussian
        && !first_quadrant.is_empty()
        && first_quadrant.iter().all(|a| (a - PI / 8.0).abs() <= 1e-12)
        && c.angles.iter().all(|a| {
            let r = a.rem_euclid(PI / 2.0);
            (r - PI / 8.0).abs() <= 1e-12 || (r - 3.0 * PI / 8.0).abs() <= 1e-12
        });
    report(
        7,
        ok,
        format!(
            "strictly subgaussian = {}, angles = {:?}",
            c.is_strictly_subgaussian, c.angles
        ),
    )
}

/// max |a − b| over the union of two grids with a common step (missing nodes count as 0).
fn aligned_max_diff(a: &GridDensity, b: &GridDensity) -> f64 {
    let off = ((b.origin - a.origin) / a.step).round() as i64;
    let lo = 0.min(off);
    let hi = (a.len() as i64).max(off + b.len() as i64);
    (lo..hi)
        .map(|i| {
            let va = usize::try_from(i)
                .ok()
                .and_then(|i| a.values.get(i))
                .copied()
                .unwrap_or(0.0);
            let vb = usize::try_from(i - off)
                .ok()
                .and_then(|j| b.values.get(j))
                .copied()
                .unwrap_or(0.0);
            (va - vb).abs()
        })
        .fold(0.0, f64::max)
}

fn density_models() -> Vec<AnalyticModel> {
    ModelKind::ALL
        .iter()
        .map(|k| make_model(&ModelSpec::named(k.name())).unwrap().standardized())
        .filter(|m| m.has_density())
        .collect()
}

fn property_suites() -> Line {
    let cfg = GridConfig::default();
    let phi = GridDensity::standard_normal(&cfg);
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    // inequalities on every zoo member with a density
    for m in density_models() {
        let p = discretize(&m, &cfg).unwrap();
        let d = kl(&p, &phi).unwrap().value.value();
        let (tv, _) = tv_hellinger(&p, &phi).unwrap();
        check(d >= 0.5 * tv * tv - 1e-12, format!("Pinsker {}", m.name));
        for a in [0.25, 0.5, 0.75] {
            let da = renyi_tsallis(&p, &phi, a).unwrap().d.value();
            check(
                0.5 * a * tv * tv <= da + 1e-12 && da <= tv / (1.0 - a) + 1e-12,
                format!("Gilardoni α={a} {}", m.name),
            );
        }
        let w2 = wasserstein2(&p, &phi);
        check(d >= 0.5 * w2 * w2 - 1e-9, format!("Talagrand {}", m.name));
        if let Ok(i) = relative_fisher(&p, &phi) {
            check(d <= 0.5 * i + 1e-9, format!("log-Sobolev {}", m.name));
        }
        let mut prev = f64::NEG_INFINITY;
        for a in [0.25, 0.5, 0.75, 1.5, 2.0, 3.0] {
            let v = renyi_tsallis(&p, &phi, a).unwrap().d.value();
            check(v >= prev - 1e-9, format!("α-monotonicity {} at α={a}", m.name));
            prev = v;
        }
    }
    // Hermite orthogonality
    let (x, w) = gauss_hermite_prob(40);
    for j in 0..=12 {
        for k in 0..=12 {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(x, w)| w * hermite_eval(j, *x) * hermite_eval(k, *x))
                .sum();
            let want = if j == k { factorial(k) } else { 0.0 };
            check(
                (s - want).abs() < 1e-9 * (factorial(j) * factorial(k)).sqrt(),
                format!("orthogonality {j},{k}"),
            );
        }
    }
    // Esscher semigroup and multiplicativity over convolution
    let u = discretize(&model("uniform"), &cfg).unwrap();
    let lhs = esscher(&esscher(&u, 0.4).unwrap(), 0.3).unwrap();
    let rhs = esscher(&u, 0.7).unwrap();
    let semi = aligned_max_diff(&lhs, &rhs);
    check(semi < 1e-8, format!("Esscher semigroup {semi:e}"));
    let v = discretize(&model("power_density:d=1").standardized(), &cfg).unwrap();
    let a = esscher(&convolve(&u, &v).unwrap(), 0.5).unwrap();
    let b = convolve(&esscher(&u, 0.5).unwrap(), &esscher(&v, 0.5).unwrap()).unwrap();
    let mult = aligned_max_diff(&a, &b);
    check(mult < 1e-8, format!("Esscher multiplicativity {mult:e}"));
    // entropy monotonicity along n and the entropy power inequality
    let um = model("uniform");
    let mut prev = f64::NEG_INFINITY;
    for n in [1, 2, 4, 8, 16] {
        let h = entropy(&normalized_sum_density(&um, n, &cfg).unwrap());
        check(h >= prev - 1e-9, format!("entropy monotonicity at n={n}"));
        prev = h;
    }
    let hu = entropy(&u);
    let h2 = entropy(&convolve(&u, &u).unwrap());
    check((2.0 * h2).exp() >= 2.0 * (2.0 * hu).exp(), "EPI".into());
    // pointwise bound for p_n
    for n in [2, 4, 8, 16] {
        let r = pointwise_density_bound_check(&um, n, 1.0, 1.0 / (2.0 * 3f64.sqrt()), &cfg).unwrap();
        check(r.holds(), format!("pointwise bound n={n}"));
    }
    // trends for rate statements without constants
    let (ok, desc) = trends();
    check(ok, desc.clone());
    let detail = if failures.is_empty() {
        format!("all invariants hold; trends: {desc}")
    } else {
        failures.join(", ")
    };
    report(8, failures.is_empty(), detail)
}

/// Bounded ratio sequences over n ∈ {8, 16, 32, 64} for the uniform law: nonincreasing,
/// or never exceeding the first value by more than 5%.
fn trends() -> (bool, String) {
    let cfg = GridConfig::default();
    let phi = GridDensity::standard_normal(&cfg);
    let um = model("uniform");
    let ns = [8usize, 16, 32, 64];
    let (mut r10, mut r18, mut r27) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &ns {
        let pn = normalized_sum_density(&um, n, &cfg).unwrap();
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for i in 0..pn.len() {
            let x = pn.x(i);
            if x.abs() > 7.0 {
                continue;
            }
            // α = 2, α* = 2
            let wgt = (x * x / 4.0).exp();
            a = a.max(pn.values[i] * wgt);
            b = b.max((pn.values[i] - std_normal_pdf(x)).abs() * wgt);
        }
        r10.push(a);
        r18.push(n as f64 * b);
        let t = infinite_order(&pn, &phi).unwrap().t_inf.value();
        r27.push(t * n as f64 / (n as f64).ln().powi(3));
    }
    let bounded = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)) || v.iter().all(|x| *x <= 1.05 * v[0]);
    let ok = bounded(&r10) && bounded(&r18) && bounded(&r27);
    let f = |v: &[f64]| v.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join(" ");
    (
        ok,
        format!(
            "sup p_n e^(x²/4): [{}]; n·sup|p_n − φ|e^(x²/4): [{}]; n T∞/(ln n)³: [{}]",
            f(&r10),
            f(&r18),
            f(&r27)
        ),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut lines = vec![
        uniform_chi2_rate(),
        skewed_kl_rate(),
        parseval_equivalence(),
        bernoulli_constant(),
        equality_point(),
        dinf_dichotomy(),
        quartic(),
        property_suites(),
    ];
    let secs = start.elapsed().as_secs_f64();
    lines.push(report(9, secs < 300.0, format!("suite ran in {secs:.1} s")));
    let passed = lines.iter().filter(|l| l.pass).count();
    let _ = writeln!(std::io::stdout(), "{passed}/{} criteria pass in full", lines.len());
    // criteria 3 and 6 carry the unattainable sub-claims, asserted in the ignored tests below
    for l in &lines {
        assert!(l.core, "criterion {} failed: {}", l.id, l.detail);
    }
}

#[test]
#[ignore = "unattainable: the uniform Parseval series converges like K^(-1/2)"]
fn uniform_parseval_series_matches_quadrature() {
    let (g, s) = parseval(&model("uniform"), 40);
    let s = s.unwrap();
    assert!((g - s).abs() < 1e-5, "{g} vs {s}");
}

#[test]
#[ignore = "unattainable: P = Q² gives P″(π/6) = 2Q′(π/6)² = 3/2"]
fn counterexample_second_derivative_is_three_quarters() {
    let p2 = counterexample_poly().derivative(2).eval(PI / 6.0);
    assert!((p2 - 0.75).abs() < 1e-9, "P″(π/6) = {p2}");
}
