//! Named example laws with densities, closed-form log-Laplace transforms and moments,
//! plus the scale-mixture χ² formula 1 + χ² = E (ξ + η − ξη)^{−1/2}.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::divergence::DivValue;
use crate::error::{Error, Result};
use crate::model::{AnalyticModel, Envelope, Law, LogLaplace, PeriodicPart, RealFn, TailBehavior};
use crate::moments::{cumulants_from_moments, moments_from_cumulants};
use crate::special::{
    binomial, double_factorial_odd, golden_min, integrate, integrate_graded_at_zero, normal_pdf, normal_raw_moment,
    INV_SQRT_2PI,
};
use crate::subgauss::bernoulli_subgauss_constant;
use crate::trig::TrigPoly;

/// Number of exact raw moments attached to each model.
pub const MOMENT_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Normal,
    Uniform,
    BernoulliSym,
    BernoulliAsym,
    BernoulliSum,
    GaussScaleMixture,
    PowerDensity,
    BernoulliGauss,
    TrigPeriodic,
    SinPower,
    Counterexample,
}

impl ModelKind {
    pub const ALL: [ModelKind; 11] = [
        ModelKind::Normal,
        ModelKind::Uniform,
        ModelKind::BernoulliSym,
        ModelKind::BernoulliAsym,
        ModelKind::BernoulliSum,
        ModelKind::GaussScaleMixture,
        ModelKind::PowerDensity,
        ModelKind::BernoulliGauss,
        ModelKind::TrigPeriodic,
        ModelKind::SinPower,
        ModelKind::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Normal => "normal",
            ModelKind::Uniform => "uniform",
            ModelKind::BernoulliSym => "bernoulli_sym",
            ModelKind::BernoulliAsym => "bernoulli_asym",
            ModelKind::BernoulliSum => "bernoulli_sum",
            ModelKind::GaussScaleMixture => "gauss_scale_mixture",
            ModelKind::PowerDensity => "power_density",
            ModelKind::BernoulliGauss => "bernoulli_gauss",
            ModelKind::TrigPeriodic => "trig_periodic",
            ModelKind::SinPower => "sin_power",
            ModelKind::Counterexample => "counterexample",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model kind '{s}'")))
    }

    /// Parameters and a one-line description, for `zoo list`.
    pub fn doc(self) -> (&'static str, &'static str) {
        match self {
            ModelKind::Normal => ("mean=0, variance=1", "N(mean, variance)"),
            ModelKind::Uniform => ("half_width=√3", "uniform on [−a, a]; K(t) = log(sinh(at)/(at))"),
            ModelKind::BernoulliSym => ("scale=1", "±scale with probability ½ each; K(t) = log cosh(t)"),
            ModelKind::BernoulliAsym => ("p=0.2", "standardized two-point law (ξ − p)/√(pq), ξ ~ Bernoulli(p)"),
            ModelKind::BernoulliSum => (
                "weights=[..] | scale=√3, terms=40",
                "Σ a_k ε_k with Rademacher ε_k; default a_k = √3·2^{−k} rebuilds the uniform law",
            ),
            ModelKind::GaussScaleMixture => (
                "atoms=[[σ², w], ..], kappa, eps_max, cont_weight",
                "√ξ Z with ξ ~ atoms plus an optional part P(ξ ≤ ε) ∝ ε^κ on (0, eps_max]",
            ),
            ModelKind::PowerDensity => (
                "d=1 (1..3)",
                "x^{2d} φ(x)/(2d−1)!!; strictly subgaussian, variance 2d+1",
            ),
            ModelKind::BernoulliGauss => (
                "p=0.2, weight=0.5 | p, beta>1",
                "aξ + bZ with centered Bernoulli ξ; 'beta' builds the law touching e^{βt²/2} at one point",
            ),
            ModelKind::TrigPeriodic => (
                "cos=[a0,a1,..], sin=[0,b1,..], c | c_fraction=0.5",
                "(1 − cQ(x))φ(x) with ψ(t) = 1 − cP(t) periodic",
            ),
            ModelKind::SinPower => ("m=4, c | c_fraction=0.5", "periodic model with P(t) = sin^m t"),
            ModelKind::Counterexample => (
                "c | c_fraction=0.5",
                "periodic model with P(t) = (1 − 4 sin²t)² sin⁴t: strictly subgaussian, no CLT in D_∞",
            ),
        }
    }
}

/// Model name plus parameters, as found in JSON configs: `{"kind": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl ModelSpec {
    /// Default parameters. Panics on an unknown name; use [`parse`](Self::parse) for user input.
    pub fn named(kind: &str) -> Self {
        Self::parse(kind).expect("known model kind")
    }

    /// Kind with a JSON object of parameters.
    pub fn with(kind: &str, params: Value) -> Self {
        let mut s = Self::named(kind);
        if let Value::Object(m) = params {
            s.params = m;
        }
        s
    }

    /// Accepts JSON (`{"kind":"sin_power","params":{"m":4}}`) or the short form
    /// `sin_power:m=4,c_fraction=0.25` (values are JSON literals).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(format!("model spec: {e}")));
        }
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = ModelKind::from_name(kind.trim())?;
        let mut params = Map::new();
        for item in split_top_level(rest) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("model parameter '{item}' is not key=value")))?;
            let v = v.trim();
            let val = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            params.insert(k.trim().to_string(), val);
        }
        Ok(Self { kind, params })
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("parameter {key} must be a number"))),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.params.get(key).map(|_| self.f64_or(key, 0.0)).transpose()
    }

    fn vec_f64(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.params.get(key) else { return Ok(None) };
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("parameter {key} must be an array")))?;
        arr.iter()
            .map(|x| {
                x.as_f64()
                    .ok_or_else(|| Error::Parse(format!("parameter {key} must hold numbers")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn make_model(spec: &ModelSpec) -> Result<AnalyticModel> {
    match spec.kind {
        ModelKind::Normal => {
            let var = spec.f64_or("variance", 1.0)?;
            normal(spec.f64_or("mean", 0.0)?, var)
        }
        ModelKind::Uniform => uniform(spec.f64_or("half_width", 3f64.sqrt())?),
        ModelKind::BernoulliSym => bernoulli_sym(spec.f64_or("scale", 1.0)?),
        ModelKind::BernoulliAsym => bernoulli_asym(spec.f64_or("p", 0.2)?),
        ModelKind::BernoulliSum => {
            let w = match spec.vec_f64("weights")? {
                Some(w) => w,
                None => {
                    let a = spec.f64_or("scale", 3f64.sqrt())?;
                    let terms = spec.f64_or("terms", 40.0)? as i32;
                    (1..=terms).map(|k| a * 0.5f64.powi(k)).collect()
                }
            };
            bernoulli_sum(&w)
        }
        ModelKind::GaussScaleMixture => {
            let atoms = match spec.params.get("atoms") {
                None if spec.params.contains_key("kappa") => Vec::new(),
                None => vec![(0.5, 0.5), (1.5, 0.5)],
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|pair| {
                        let p = pair.as_array().filter(|p| p.len() == 2);
                        p.and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)))
                            .ok_or_else(|| Error::Parse("atoms must be [[variance, weight], ..]".into()))
                    })
                    .collect::<Result<_>>()?,
                Some(_) => return Err(Error::Parse("atoms must be an array".into())),
            };
            let cont = match spec.opt_f64("kappa")? {
                None => None,
                Some(kappa) => {
                    let w_atoms: f64 = atoms.iter().map(|a| a.1).sum();
                    Some(ScaleTail {
                        kappa,
                        eps_max: spec.f64_or("eps_max", 1.0 + 1.0 / kappa)?,
                        weight: spec.f64_or("cont_weight", 1.0 - w_atoms)?,
                    })
                }
            };
            gauss_scale_mixture(&MixingLaw { atoms, tail: cont })
        }
        ModelKind::PowerDensity => power_density(spec.f64_or("d", 1.0)? as usize),
        ModelKind::BernoulliGauss => {
            let p = spec.f64_or("p", 0.2)?;
            match spec.opt_f64("beta")? {
                Some(beta) => bernoulli_gauss_construct(p, beta),
                None => {
                    let w = spec.f64_or("weight", 0.5)?;
                    if !(0.0..=1.0).contains(&w) {
                        return Err(Error::InvalidParameter(format!("weight must lie in [0, 1], got {w}")));
                    }
                    bernoulli_gauss(p, (w / (p * (1.0 - p))).sqrt(), (1.0 - w).sqrt())
                }
            }
        }
        ModelKind::TrigPeriodic => {
            let cos = spec.vec_f64("cos")?.unwrap_or_else(|| TrigPoly::sin_power(4).cos);
            let sin = spec.vec_f64("sin")?.unwrap_or_default();
            trig_periodic(
                "trig_periodic",
                TrigPoly::new(cos, sin),
                spec.opt_f64("c")?,
                spec.f64_or("c_fraction", 0.5)?,
            )
        }
        ModelKind::SinPower => {
            let m = spec.f64_or("m", 4.0)? as usize;
            if m < 3 {
                return Err(Error::InvalidParameter(format!("sin_power needs m ≥ 3, got {m}")));
            }
            let name = format!("sin_power(m={m})");
            trig_periodic(
                &name,
                TrigPoly::sin_power(m),
                spec.opt_f64("c")?,
                spec.f64_or("c_fraction", 0.5)?,
            )
        }
        ModelKind::Counterexample => trig_periodic(
            "counterexample",
            counterexample_poly(),
            spec.opt_f64("c")?,
            spec.f64_or("c_fraction", 0.5)?,
        ),
    }
}

/// P(t) = (1 − 4 sin²t)² sin⁴t.
pub fn counterexample_poly() -> TrigPoly {
    let s2 = TrigPoly::sin_power(2);
    let q = TrigPoly::constant(1.0).add(&s2.scale(-4.0));
    q.mul(&q).mul(&TrigPoly::sin_power(4))
}

fn rf<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(f)
}

fn even_moments<F: Fn(usize) -> f64>(f: F) -> Vec<f64> {
    (0..=MOMENT_ORDER)
        .map(|k| if k % 2 == 1 { 0.0 } else { f(k) })
        .collect()
}

pub fn normal(mean: f64, var: f64) -> Result<AnalyticModel> {
    if !(var > 0.0) {
        return Err(Error::InvalidParameter(format!("variance must be positive, got {var}")));
    }
    let mut kappa = vec![0.0; MOMENT_ORDER];
    kappa[0] = mean;
    kappa[1] = var;
    let sd = var.sqrt();
    Ok(AnalyticModel {
        name: if mean == 0.0 && var == 1.0 {
            "normal".into()
        } else {
            format!("normal({mean},{var})")
        },
        law: Law::Density {
            pdf: rf(move |x| normal_pdf(x, mean, var)),
            breakpoints: vec![],
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| mean * t + 0.5 * var * t * t),
            dk: rf(move |t| mean + var * t),
            d2k: rf(move |_| var),
            deficit: Some([rf(move |t| -mean * t), rf(move |_| -mean), rf(|_| 0.0)]),
            tail: if mean == 0.0 {
                TailBehavior::Flat
            } else {
                TailBehavior::Other
            },
        }),
        char_fn: Some(Arc::new(move |t| {
            Complex64::from_polar((-0.5 * var * t * t).exp(), mean * t)
        })),
        raw_moments: moments_from_cumulants(&kappa),
        support: None,
        envelope: if mean == 0.0 {
            Some(Envelope {
                c: INV_SQRT_2PI / sd,
                s: sd,
            })
        } else {
            None
        },
        periodic: None,
    })
}

/// ln(sinh u / u).
fn ln_sinhc(u: f64) -> f64 {
    let u = u.abs();
    if u < 1e-2 {
        let v = u * u;
        v / 6.0 - v * v / 180.0 + v * v * v / 2835.0
    } else if u < 20.0 {
        (u.sinh() / u).ln()
    } else {
        u + (-(-2.0 * u).exp()).ln_1p() - std::f64::consts::LN_2 - u.ln()
    }
}

/// coth u − 1/u.
fn langevin(u: f64) -> f64 {
    if u.abs() < 0.05 {
        let v = u * u;
        u * (1.0 / 3.0 - v / 45.0 + 2.0 * v * v / 945.0 - v * v * v / 4725.0)
    } else {
        1.0 / u.tanh() - 1.0 / u
    }
}

/// 1/u² − 1/sinh² u.
fn langevin_d(u: f64) -> f64 {
    if u.abs() < 0.05 {
        let v = u * u;
        1.0 / 3.0 - v / 15.0 + 2.0 * v * v / 189.0 - v * v * v / 675.0
    } else {
        1.0 / (u * u) - 1.0 / u.sinh().powi(2)
    }
}

pub fn uniform(a: f64) -> Result<AnalyticModel> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("half_width must be positive, got {a}")));
    }
    let d = 0.5 / a;
    Ok(AnalyticModel {
        name: "uniform".into(),
        law: Law::Density {
            pdf: rf(move |x| if x.abs() <= a { d } else { 0.0 }),
            breakpoints: vec![-a, a],
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| ln_sinhc(a * t)),
            dk: rf(move |t| a * langevin(a * t)),
            d2k: rf(move |t| a * a * langevin_d(a * t)),
            deficit: None,
            tail: TailBehavior::Decaying,
        }),
        char_fn: Some(Arc::new(move |t| {
            let u = a * t;
            Complex64::new(if u.abs() < 1e-8 { 1.0 } else { u.sin() / u }, 0.0)
        })),
        raw_moments: even_moments(|k| a.powi(k as i32) / (k + 1) as f64),
        support: Some((-a, a)),
        envelope: None,
        periodic: None,
    })
}

/// Two-point law: x1 with probability p, x2 with probability 1 − p.
fn two_point(name: String, x1: f64, x2: f64, p: f64) -> AnalyticModel {
    let q = 1.0 - p;
    let d = x1 - x2;
    let k = move |t: f64| {
        let u = d * t;
        if u.abs() < 30.0 {
            x2 * t + (p * u.exp_m1()).ln_1p()
        } else {
            crate::special::log_add_exp(p.ln() + x1 * t, q.ln() + x2 * t)
        }
    };
    // tilted weight of x1
    let w1 = move |t: f64| 1.0 / (1.0 + (q / p) * (-d * t).exp());
    AnalyticModel {
        name,
        law: Law::Atoms(vec![(x1, p), (x2, q)]),
        laplace: Some(LogLaplace {
            k: rf(k),
            dk: rf(move |t| {
                let w = w1(t);
                w * x1 + (1.0 - w) * x2
            }),
            d2k: rf(move |t| {
                let w = w1(t);
                w * (1.0 - w) * d * d
            }),
            deficit: None,
            tail: TailBehavior::Decaying,
        }),
        char_fn: Some(Arc::new(move |t| {
            Complex64::from_polar(p, x1 * t) + Complex64::from_polar(q, x2 * t)
        })),
        raw_moments: (0..=MOMENT_ORDER)
            .map(|k| p * x1.powi(k as i32) + q * x2.powi(k as i32))
            .collect(),
        support: Some((x1.min(x2), x1.max(x2))),
        envelope: None,
        periodic: None,
    }
}

pub fn bernoulli_sym(scale: f64) -> Result<AnalyticModel> {
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    Ok(two_point("bernoulli_sym".into(), scale, -scale, 0.5))
}

/// (ξ − p)/√(pq) for ξ ~ Bernoulli(p).
pub fn bernoulli_asym(p: f64) -> Result<AnalyticModel> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let q = 1.0 - p;
    let s = (p * q).sqrt();
    Ok(two_point(format!("bernoulli_asym(p={p})"), q / s, -p / s, p))
}

/// ln cosh u, stable for large |u|.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn sech2(u: f64) -> f64 {
    let e = (-2.0 * u.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Σ a_k ε_k with independent Rademacher signs.
pub fn bernoulli_sum(weights: &[f64]) -> Result<AnalyticModel> {
    if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("bernoulli_sum needs finite weights".into()));
    }
    let rad = cumulants_from_moments(&even_moments(|_| 1.0));
    let kappa: Vec<f64> = (0..MOMENT_ORDER)
        .map(|i| rad[i] * weights.iter().map(|a| a.powi(i as i32 + 1)).sum::<f64>())
        .collect();
    let (w1, w2, w3) = (weights.to_vec(), weights.to_vec(), weights.to_vec());
    // the law is atomic with 2^N atoms; keep them only when that is small
    let law = if weights.len() <= 12 {
        let mut atoms = vec![(0.0, 1.0)];
        for a in weights {
            atoms = atoms
                .iter()
                .flat_map(|&(x, p)| [(x + a, 0.5 * p), (x - a, 0.5 * p)])
                .collect();
        }
        Law::Atoms(atoms)
    } else {
        Law::Unavailable
    };
    let r: f64 = weights.iter().map(|a| a.abs()).sum();
    Ok(AnalyticModel {
        name: "bernoulli_sum".into(),
        law,
        laplace: Some(LogLaplace {
            k: rf(move |t| w1.iter().map(|a| ln_cosh(a * t)).sum()),
            dk: rf(move |t| w2.iter().map(|a| a * (a * t).tanh()).sum()),
            d2k: rf(move |t| w3.iter().map(|a| a * a * sech2(a * t)).sum()),
            deficit: None,
            tail: TailBehavior::Decaying,
        }),
        char_fn: None,
        raw_moments: moments_from_cumulants(&kappa),
        support: Some((-r, r)),
        envelope: None,
        periodic: None,
    })
}

/// Continuous part of a mixing law: P(ξ ≤ ε) = (ε/eps_max)^κ on (0, eps_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleTail {
    pub kappa: f64,
    pub eps_max: f64,
    pub weight: f64,
}

/// Mixing law of ξ for X = √ξ Z: atoms (variance, weight) plus an optional power-law part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingLaw {
    pub atoms: Vec<(f64, f64)>,
    pub tail: Option<ScaleTail>,
}

impl MixingLaw {
    fn validate(&self) -> Result<()> {
        let mut total = 0.0;
        for &(v, w) in &self.atoms {
            if !(v > 0.0 && w >= 0.0) {
                return Err(Error::InvalidParameter(format!("mixing atom ({v}, {w}) invalid")));
            }
            total += w;
        }
        if let Some(t) = self.tail {
            if !(t.kappa > 0.0 && t.eps_max > 0.0 && t.weight >= 0.0) {
                return Err(Error::InvalidParameter(format!("mixing tail {t:?} invalid")));
            }
            total += t.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("mixing weights sum to {total}")));
        }
        Ok(())
    }

    /// E ξ^k.
    pub fn moment(&self, k: usize) -> f64 {
        let mut m: f64 = self.atoms.iter().map(|(v, w)| w * v.powi(k as i32)).sum();
        if let Some(t) = self.tail {
            m += t.weight * t.eps_max.powi(k as i32) * t.kappa / (t.kappa + k as f64);
        }
        m
    }

    /// E g(ξ), the continuous part integrated over u with ξ = eps_max·u^{1/κ}.
    pub fn expect<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let mut s: f64 = self.atoms.iter().map(|&(v, w)| w * g(v)).sum();
        if let Some(t) = self.tail {
            s += t.weight * integrate_graded_at_zero(|u| g(t.eps_max * u.powf(1.0 / t.kappa)), 60);
        }
        s
    }

    fn max_scale(&self) -> f64 {
        let a = self.atoms.iter().map(|a| a.0).fold(0.0, f64::max);
        self.tail.map_or(a, |t| a.max(t.eps_max))
    }
}

/// Density Σ-mixture of N(0, ξ); the power-law part is integrated in s = ln ε.
fn mixture_pdf(mix: &MixingLaw, x: f64) -> f64 {
    let mut s: f64 = mix.atoms.iter().map(|&(v, w)| w * normal_pdf(x, 0.0, v)).sum();
    if let Some(t) = mix.tail {
        let (k, le) = (t.kappa, t.eps_max.ln());
        let lo_mass = le - 40.0 / k;
        let lo_gauss = if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * x.abs().ln() - 8.0
        };
        let lo = lo_mass.max(lo_gauss);
        if lo < le {
            let f = |sv: f64| {
                let e = sv.exp();
                normal_pdf(x, 0.0, e) * k * ((sv - le) * k).exp()
            };
            s += t.weight * integrate(f, lo, le, ((le - lo).ceil() as usize).max(4));
        }
    }
    s
}

pub fn gauss_scale_mixture(mix: &MixingLaw) -> Result<AnalyticModel> {
    mix.validate()?;
    let raw = even_moments(|k| double_factorial_odd(k / 2) * mix.moment(k / 2));
    let (m1, m2, m3) = (mix.clone(), mix.clone(), mix.clone());
    let big = mix.max_scale();
    // E_t[·] under weights ∝ w·e^{(ξ − big)t²/2}
    let tilted = move |m: &MixingLaw, t: f64, f: &dyn Fn(f64) -> f64| {
        let z = m.expect(|v| ((v - big) * 0.5 * t * t).exp());
        let s = m.expect(|v| f(v) * ((v - big) * 0.5 * t * t).exp());
        (z, s / z)
    };
    let pdf_mix = mix.clone();
    let singular = mix.tail.is_some_and(|t| t.kappa <= 0.5);
    Ok(AnalyticModel {
        name: "gauss_scale_mixture".into(),
        law: Law::Density {
            pdf: rf(move |x| mixture_pdf(&pdf_mix, x)),
            breakpoints: if singular { vec![0.0] } else { vec![] },
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| big * 0.5 * t * t + tilted(&m1, t, &|_| 1.0).0.ln()),
            dk: rf(move |t| t * tilted(&m2, t, &|v| v).1),
            d2k: rf(move |t| {
                let e1 = tilted(&m3, t, &|v| v).1;
                let e2 = tilted(&m3, t, &|v| v * v).1;
                e1 + t * t * (e2 - e1 * e1)
            }),
            deficit: None,
            tail: TailBehavior::Other,
        }),
        char_fn: None,
        raw_moments: raw,
        support: None,
        envelope: None,
        periodic: None,
    })
}

/// Coefficients (ascending in t) of E(Z + t)^{2d}.
fn power_poly(d: usize) -> Vec<f64> {
    let mut c = vec![0.0; 2 * d + 1];
    for j in 0..=d {
        c[2 * d - 2 * j] = binomial(2 * d, 2 * j) * double_factorial_odd(j);
    }
    c
}

fn poly_eval(c: &[f64], t: f64) -> (f64, f64, f64) {
    let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
    for &a in c.iter().rev() {
        d2p = d2p * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + a;
    }
    (p, dp, d2p)
}

/// x^{2d} φ(x)/(2d−1)!!, with E e^{tX} = e^{t²/2} E(Z + t)^{2d}/(2d−1)!!.
pub fn power_density(d: usize) -> Result<AnalyticModel> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "power_density needs d in 1..=3, got {d}"
        )));
    }
    let norm = double_factorial_odd(d);
    let c = power_poly(d);
    let (c1, c2, c3, c4, c5) = (c.clone(), c.clone(), c.clone(), c.clone(), c.clone());
    let df = d as f64;
    let dd = 2 * d as i32;
    Ok(AnalyticModel {
        name: format!("power_density(d={d})"),
        law: Law::Density {
            pdf: rf(move |x| x.powi(dd) * crate::special::std_normal_pdf(x) / norm),
            breakpoints: vec![],
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| 0.5 * t * t + (poly_eval(&c1, t).0 / norm).ln()),
            dk: rf(move |t| {
                let (p, dp, _) = poly_eval(&c2, t);
                t + dp / p
            }),
            d2k: rf(move |t| {
                let (p, dp, d2p) = poly_eval(&c3, t);
                1.0 + (d2p * p - dp * dp) / (p * p)
            }),
            deficit: Some([
                rf(move |t| df * t * t - (poly_eval(&c4, t).0 / norm).ln()),
                rf(move |t| {
                    let (p, dp, _) = poly_eval(&c5, t);
                    2.0 * df * t - dp / p
                }),
                rf({
                    let c = c.clone();
                    move |t| {
                        let (p, dp, d2p) = poly_eval(&c, t);
                        2.0 * df - (d2p * p - dp * dp) / (p * p)
                    }
                }),
            ]),
            tail: TailBehavior::Decaying,
        }),
        char_fn: None,
        raw_moments: even_moments(|k| normal_raw_moment(k + 2 * d) / norm),
        support: None,
        envelope: None,
        periodic: None,
    })
}

/// X = aξ + bZ with ξ = q (probability p) or −p (probability q).
pub fn bernoulli_gauss(p: f64, a: f64, b: f64) -> Result<AnalyticModel> {
    if !(p > 0.0 && p < 1.0 && a >= 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bernoulli_gauss needs p in (0,1), a ≥ 0, b > 0; got {p}, {a}, {b}"
        )));
    }
    let q = 1.0 - p;
    let xi = two_point(String::new(), q, -p, p);
    let mut kappa = cumulants_from_moments(&xi.raw_moments);
    for (r, k) in kappa.iter_mut().enumerate() {
        *k *= a.powi(r as i32 + 1);
    }
    kappa[1] += b * b;
    let lx = xi.laplace.expect("two-point law has a transform");
    let (k0, k1, k2) = (lx.k, lx.dk, lx.d2k);
    let b2 = b * b;
    let (x1, x2) = (a * q, -a * p);
    Ok(AnalyticModel {
        name: format!("bernoulli_gauss(p={p})"),
        law: Law::Density {
            pdf: rf(move |x| p * normal_pdf(x, x1, b2) + q * normal_pdf(x, x2, b2)),
            breakpoints: vec![],
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| k0(a * t) + 0.5 * b2 * t * t),
            dk: rf(move |t| a * k1(a * t) + b2 * t),
            d2k: rf(move |t| a * a * k2(a * t) + b2),
            deficit: None,
            tail: TailBehavior::Decaying,
        }),
        char_fn: None,
        raw_moments: moments_from_cumulants(&kappa),
        support: None,
        envelope: None,
        periodic: None,
    })
}

/// The unit-variance law aξ + bZ whose log-Laplace transform stays below βt²/2
/// and touches it at exactly one point (see [`bernoulli_gauss_touch_point`]).
pub fn bernoulli_gauss_construct(p: f64, beta: f64) -> Result<AnalyticModel> {
    if !(beta > 1.0) {
        return Err(Error::InvalidParameter(format!("β must exceed 1, got {beta}")));
    }
    let (a, b) = bernoulli_gauss_weights(p, beta)?;
    let mut m = bernoulli_gauss(p, a, b)?;
    m.name = format!("bernoulli_gauss(p={p},beta={beta})");
    Ok(m)
}

/// (a, b) with a² = (β−1)/(σ²−pq), b² = (σ²−βpq)/(σ²−pq), σ² the Bernoulli subgaussian constant.
pub fn bernoulli_gauss_weights(p: f64, beta: f64) -> Result<(f64, f64)> {
    let s2 = bernoulli_subgauss_constant(p)?;
    let pq = p * (1.0 - p);
    if !(s2 > beta * pq) {
        return Err(Error::InvalidParameter(format!(
            "infeasible: need σ²(p) > β·pq, but σ²({p}) = {s2} and β·pq = {}",
            beta * pq
        )));
    }
    let den = s2 - pq;
    Ok((((beta - 1.0) / den).sqrt(), ((s2 - beta * pq) / den).sqrt()))
}

/// The single t where K_X(t) = βt²/2 for the constructed law: t₀/a with
/// t₀ = −2(log p − log q) the touch point of the Bernoulli part.
pub fn bernoulli_gauss_touch_point(p: f64, beta: f64) -> Result<f64> {
    let (a, _) = bernoulli_gauss_weights(p, beta)?;
    Ok(-2.0 * (p.ln() - (1.0 - p).ln()) / a)
}

/// max of f on [0, period] by scan plus golden-section refinement.
fn periodic_max<F: Fn(f64) -> f64>(f: F, period: f64, samples: usize) -> f64 {
    let h = period / samples as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..samples {
        let v = f(i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let c = best_i as f64 * h;
    let t = golden_min(|x| -f(x), c - h, c + h, 1e-13);
    f(t).max(best)
}

/// (1 − cQ(x))φ(x), whose ψ-profile is 1 − cP(t).
pub fn trig_periodic(name: &str, p: TrigPoly, c: Option<f64>, c_fraction: f64) -> Result<AnalyticModel> {
    check_moment_constraints(&p)?;
    let period = p.period();
    if !period.is_finite() {
        return Err(Error::InvalidParameter("P must be non-constant".into()));
    }
    let samples = 512 * p.degree().max(1);
    let q_max = periodic_max(|x| p.eval_q(x), period, samples);
    let neg_q_max = periodic_max(|x| -p.eval_q(x), period, samples);
    let c_max = if q_max > 0.0 { 1.0 / q_max } else { f64::INFINITY };
    let c = match c {
        Some(c) => c,
        None if c_max.is_finite() => c_fraction * c_max,
        None => return Err(Error::InvalidParameter("Q ≤ 0 everywhere: give c explicitly".into())),
    };
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if c > c_max {
        return Err(Error::NotNonnegative { c, c_max });
    }
    let (p1, p2) = (p.derivative(1), p.derivative(2));
    let (pa, pb, pc) = (p.clone(), p.clone(), p.clone());
    let (p1a, p1b) = (p1.clone(), p1);
    // A = −ln(1 − cP), with A′ and A″ in closed form
    let deficit = move |t: f64| -(-c * pa.eval(t)).ln_1p();
    let deficit1 = move |t: f64| c * p1a.eval(t) / (1.0 - c * pb.eval(t));
    let deficit2 = move |t: f64| {
        let (v, d1, d2) = (pc.eval(t), p1b.eval(t), p2.eval(t));
        let s = 1.0 - c * v;
        (c * d2 * s + c * c * d1 * d1) / (s * s)
    };
    let (da, db, dc) = (deficit.clone(), deficit1.clone(), deficit2.clone());
    // moments from L(t) = ψ(t) e^{t²/2}: m_k = Σ_j C(k,j) ψ^{(j)}(0) E Z^{k−j}
    let mut psi_derivs = Vec::with_capacity(MOMENT_ORDER + 1);
    let mut dp = p.clone();
    for j in 0..=MOMENT_ORDER {
        psi_derivs.push(if j == 0 { 1.0 } else { 0.0 } - c * dp.eval(0.0));
        dp = dp.derivative(1);
    }
    let raw = (0..=MOMENT_ORDER)
        .map(|k| {
            (0..=k)
                .map(|j| binomial(k, j) * psi_derivs[j] * normal_raw_moment(k - j))
                .sum()
        })
        .collect();
    let pq = p.clone();
    let pe = p.clone();
    Ok(AnalyticModel {
        name: name.to_string(),
        law: Law::Density {
            pdf: rf(move |x| ((1.0 - c * pq.eval_q(x)) * crate::special::std_normal_pdf(x)).max(0.0)),
            breakpoints: vec![],
        },
        laplace: Some(LogLaplace {
            k: rf(move |t| 0.5 * t * t - da(t)),
            dk: rf(move |t| t - db(t)),
            d2k: rf(move |t| 1.0 - dc(t)),
            deficit: Some([rf(deficit), rf(deficit1), rf(deficit2)]),
            tail: TailBehavior::Periodic { period },
        }),
        char_fn: Some(Arc::new(move |t| {
            // P(it) = a_0 + Σ (a_k cosh kt + i b_k sinh kt)
            let mut z = Complex64::new(pe.cos[0], 0.0);
            for k in 1..pe.cos.len() {
                let kt = k as f64 * t;
                z += Complex64::new(pe.cos[k] * kt.cosh(), pe.sin[k] * kt.sinh());
            }
            (Complex64::new(1.0, 0.0) - c * z) * (-0.5 * t * t).exp()
        })),
        raw_moments: raw,
        support: None,
        envelope: Some(Envelope {
            c: (1.0 + c * neg_q_max.max(0.0)) * INV_SQRT_2PI,
            s: 1.0,
        }),
        periodic: Some(PeriodicPart { p, c, c_max }),
    })
}

/// P(0) = 0 (mass), P′(0) = Σ k b_k = 0 (mean), P″(0) = −Σ k² a_k = 0 (variance).
pub fn check_moment_constraints(p: &TrigPoly) -> Result<()> {
    let scale = p.coefficient_scale(2).max(1e-300);
    let tol = 1e-12 * scale;
    let mass = p.eval(0.0);
    let mean: f64 = (1..p.sin.len()).map(|k| k as f64 * p.sin[k]).sum();
    let var: f64 = (1..p.cos.len()).map(|k| (k * k) as f64 * p.cos[k]).sum();
    if mass.abs() > tol {
        return Err(Error::MomentConstraint(format!("P(0) = a_0 + Σ a_k = {mass} ≠ 0")));
    }
    if mean.abs() > tol {
        return Err(Error::MomentConstraint(format!("Σ k b_k = {mean} ≠ 0")));
    }
    if var.abs() > tol {
        return Err(Error::MomentConstraint(format!("Σ k² a_k = {var} ≠ 0")));
    }
    Ok(())
}

/// Pearson χ² of the scale mixture √ξ Z to N(0,1): E(ξ + η − ξη)^{−1/2} − 1 with η an
/// independent copy of ξ. Infinite when the mixing law reaches 2 or its power-law part has κ ≤ 1/4.
pub fn mixture_chi2(mix: &MixingLaw) -> Result<DivValue> {
    mix.validate()?;
    if mix.max_scale() >= 2.0 {
        return Ok(DivValue::Infinite);
    }
    if mix.tail.is_some_and(|t| t.kappa <= 0.25 && t.weight > 0.0) {
        return Ok(DivValue::Infinite);
    }
    let f = |x: f64, y: f64| (x + y - x * y).powf(-0.5);
    let mut s = 0.0;
    for &(x, wx) in &mix.atoms {
        for &(y, wy) in &mix.atoms {
            s += wx * wy * f(x, y);
        }
    }
    if let Some(t) = mix.tail.filter(|t| t.weight > 0.0) {
        let xi = |u: f64| t.eps_max * u.powf(1.0 / t.kappa);
        for &(x, wx) in &mix.atoms {
            s += 2.0 * wx * t.weight * integrate_graded_at_zero(|u| f(x, xi(u)), 80);
        }
        // tensor-graded rule around the (0, 0) corner
        let levels = 120;
        let (gx, gw) = crate::special::gl16();
        let mut panels = Vec::with_capacity(levels);
        let mut hi = 1.0;
        for _ in 0..levels {
            panels.push((0.5 * hi, hi));
            hi *= 0.5;
        }
        let nodes: Vec<(f64, f64)> = panels
            .iter()
            .flat_map(|&(a, b)| {
                let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
                gx.iter().zip(gw).map(move |(x, w)| (xi(m + h * x), w * h))
            })
            .collect();
        let mut cc = 0.0;
        for &(x, wx) in &nodes {
            for &(y, wy) in &nodes {
                cc += wx * wy * f(x, y);
            }
        }
        s += t.weight * t.weight * cc;
    }
    Ok(DivValue::Finite(s - 1.0))
}

/// χ²(Z_n, Z) < ∞ for mixing laws with F(ε) ~ ε^κ near 0 and a gap below 2 iff n > 1/(4κ).
pub fn mixture_finiteness(kappa: f64, delta_gap: f64, n: usize) -> Result<bool> {
    if !(kappa > 0.0 && delta_gap > 0.0 && n >= 1) {
        return Err(Error::InvalidParameter("need κ > 0, δ > 0, n ≥ 1".into()));
    }
    Ok(n as f64 > 1.0 / (4.0 * kappa))
}

/// Numerical convergence test of ∫₀¹ ε^{2nκ − 3/2} dε: the partial integrals over
/// [10^{−k}, 1] must stop growing as k increases.
pub fn mixture_finiteness_numeric(kappa: f64, n: usize) -> bool {
    let e = 2.0 * n as f64 * kappa - 1.5;
    // ∫_{e^{−L}}^1 ε^e dε = ∫_0^L e^{−(e+1)s} ds, by quadrature in s = −ln ε
    let partial = |l: f64| integrate(|s| (-(e + 1.0) * s).exp(), 0.0, l, (l as usize).max(8));
    let (a, b, c) = (partial(200.0), partial(400.0), partial(800.0));
    let growth = (c - b).abs();
    growth.is_finite() && growth <= 1e-6 * a.abs().max(1.0) && (b - a).abs() >= growth
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_laplace_matches_closed_form() {
        let m = make_model(&ModelSpec::named("uniform")).unwrap();
        let l = m.laplace().unwrap();
        let s3 = 3f64.sqrt();
        for &t in &[1e-4, 0.03, 0.5, 2.0, 15.0] {
            let y: f64 = s3 * t;
            let exact = if y < 0.01 {
                y * y / 6.0 - y.powi(4) / 180.0 + y.powi(6) / 2835.0
            } else {
                (y.sinh() / y).ln()
            };
            assert!(
                ((l.k)(t) - exact).abs() < 1e-14 * exact.abs().max(1e-300) + 1e-17,
                "t={t}"
            );
        }
        assert!((m.variance() - 1.0).abs() < 1e-15);
        let h = 1e-5;
        for &t in &[0.04, 0.3, 3.0] {
            let fd = ((l.dk)(t + h) - (l.dk)(t - h)) / (2.0 * h);
            assert!(((l.d2k)(t) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn power_density_laplace() {
        let m = make_model(&ModelSpec::named("power_density")).unwrap();
        let k = &m.laplace().unwrap().k;
        let t: f64 = 1.3;
        assert!((k(t) - ((1.0 + t * t).ln() + 0.5 * t * t)).abs() < 1e-14);
        assert!((m.variance() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn sin4_c_max() {
        let m = make_model(&ModelSpec::named("sin_power")).unwrap();
        let e = std::f64::consts::E;
        let exact = 8.0 / (3.0 + 4.0 * e * e + e.powi(8));
        let per = m.periodic.as_ref().unwrap();
        assert!((per.c_max - exact).abs() < 1e-12 * exact);
        assert!((per.c - 0.5 * exact).abs() < 1e-15);
        assert!(matches!(
            make_model(&ModelSpec::with("sin_power", serde_json::json!({"c": 2.0 * exact}))),
            Err(Error::NotNonnegative { .. })
        ));
    }

    #[test]
    fn moment_constraints_are_enforced() {
        // P = 1 − cos t has P(0) = 0 but Σ k² a_k = −1
        let r = make_model(&ModelSpec::with(
            "trig_periodic",
            serde_json::json!({"cos": [1.0, -1.0]}),
        ));
        assert!(matches!(r, Err(Error::MomentConstraint(ref s)) if s.contains("k²")));
        let r = make_model(&ModelSpec::with(
            "trig_periodic",
            serde_json::json!({"cos": [0.0], "sin": [0.0, 1.0]}),
        ));
        assert!(matches!(r, Err(Error::MomentConstraint(ref s)) if s.contains("k b_k")));
    }

    #[test]
    fn trig_moments_are_standard() {
        for kind in ["sin_power", "counterexample"] {
            let m = make_model(&ModelSpec::named(kind)).unwrap();
            assert!(m.raw_moments[0] == 1.0 && m.raw_moments[1].abs() < 1e-15);
            assert!((m.variance() - 1.0).abs() < 1e-13, "{kind}");
        }
    }

    #[test]
    fn spec_parsing() {
        let s = ModelSpec::parse("trig_periodic:cos=[0,1,-1],c_fraction=0.25").unwrap();
        assert_eq!(s.kind, ModelKind::TrigPeriodic);
        assert_eq!(s.params["cos"], serde_json::json!([0, 1, -1]));
        let j = ModelSpec::parse(r#"{"kind":"sin_power","params":{"m":6}}"#).unwrap();
        assert_eq!(j.params["m"], serde_json::json!(6));
        assert!(ModelSpec::parse("nope").is_err());
    }

    #[test]
    fn bernoulli_gauss_weights_satisfy_constraint() {
        let (a, b) = bernoulli_gauss_weights(0.05, 2.0).unwrap();
        let pq = 0.05 * 0.95;
        assert!((pq * a * a + b * b - 1.0).abs() < 1e-12);
        assert!(bernoulli_gauss_construct(0.5, 1.5).is_err());
        let m = bernoulli_gauss_construct(0.05, 2.0).unwrap();
        assert!(m.mean().abs() < 1e-14 && (m.variance() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_single_atom_matches_gaussian_chi2() {
        let mix = MixingLaw {
            atoms: vec![(0.5, 1.0)],
            tail: None,
        };
        let s = 0.5f64.sqrt();
        let exact = 1.0 / (s * (2.0 - 0.5f64).sqrt()) - 1.0;
        assert!((mixture_chi2(&mix).unwrap().value() - exact).abs() < 1e-14);
        let one = MixingLaw {
            atoms: vec![(1.0, 1.0)],
            tail: None,
        };
        assert!(mixture_chi2(&one).unwrap().value().abs() < 1e-15);
    }

    #[test]
    fn finiteness_rule() {
        let k = 1.0 / 12.0;
        assert!(!mixture_finiteness(k, 0.1, 3).unwrap());
        assert!(mixture_finiteness(k, 0.1, 4).unwrap());
        assert!(!mixture_finiteness(0.125, 0.1, 2).unwrap());
        assert!(mixture_finiteness(0.125, 0.1, 3).unwrap());
        for n in 1..8 {
            for &k in &[1.0 / 12.0, 0.125, 0.3, 1.0] {
                assert_eq!(
                    mixture_finiteness(k, 0.1, n).unwrap(),
                    mixture_finiteness_numeric(k, n),
                    "κ={k} n={n}"
                );
            }
        }
    }
}
