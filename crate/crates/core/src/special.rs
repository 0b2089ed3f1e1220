//! Special functions and fixed quadrature rules shared by the other modules.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let z = x - mean;
    (-0.5 * z * z / var).exp() / (2.0 * PI * var).sqrt()
}

/// Φ(x), accurate in both tails.
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// 1 − Φ(x) without cancellation.
#[inline]
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

pub fn ln_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = vec![0.0; 171];
        for i in 1..171 {
            v[i] = v[i - 1] + (i as f64).ln();
        }
        v
    });
    if k < t.len() {
        t[k]
    } else {
        libm::lgamma(k as f64 + 1.0)
    }
}

pub fn factorial(k: usize) -> f64 {
    // exact products while they fit, so identities like c_k²/k! carry no log-exp noise
    if k <= 20 {
        (1..=k as u64).product::<u64>() as f64
    } else {
        ln_factorial(k).exp()
    }
}

/// (2k−1)!! = E Z^{2k}.
pub fn double_factorial_odd(k: usize) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// Raw moment E Z^k of the standard normal.
pub fn normal_raw_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        double_factorial_odd(k / 2)
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton on the three-term recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// 16-point Gauss–Legendre rule, cached.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16))
}

/// ∫_a^b f by composite 16-point Gauss–Legendre on `panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gl16();
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
    }
    s * 0.5 * h
}

/// ∫_0^1 f with panels graded geometrically towards 0; handles integrable endpoint singularities.
pub fn integrate_graded_at_zero<F: Fn(f64) -> f64>(f: F, levels: usize) -> f64 {
    let mut s = 0.0;
    let mut hi = 1.0;
    for _ in 0..levels {
        let lo = hi * 0.5;
        s += integrate(&f, lo, hi, 1);
        hi = lo;
    }
    s
}

/// Probabilists' Gauss–Hermite rule: Σ w_i f(x_i) ≈ E f(Z), Z ~ N(0,1).
pub fn gauss_hermite_prob(n: usize) -> (Vec<f64>, Vec<f64>) {
    // physicists' rule by Newton on orthonormal Hermite functions, then rescale
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let xs = x.iter().map(|v| v * SQRT_2).collect();
    let ws = w.iter().map(|v| v / PI.sqrt()).collect();
    (xs, ws)
}

/// ln(e^a + e^b) without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + (-(a - b).abs()).exp().ln_1p()
}

/// Minimise a unimodal f on [a, b] by golden-section search.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of f on [a, b] by bisection; requires a sign change (or a zero endpoint).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || m == a || m == b {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
