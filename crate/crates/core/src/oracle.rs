//! Reference quadrature independent of the integrators: Gauss-Legendre rules
//! from Newton iteration on the three-term recurrence of the classical
//! (unnormalized) Legendre polynomials, and composite versions thereof.

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(m, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_and_derivative(m: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// `m`-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let (x, w) = gauss_legendre(m);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * x.iter().zip(&w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>()
}

/// Composite Gauss-Legendre rule over `panels` equal subintervals.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, m: usize) -> f64 {
    let (x, w) = gauss_legendre(m);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let (c, h) = (lo + 0.5 * width, 0.5 * width);
        total += h * x.iter().zip(&w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>();
    }
    total
}

/// Composite Gauss-Legendre integral with a list of breakpoints in `(a, b)`
/// where the integrand is not smooth.
pub fn piecewise_gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], panels: usize, m: usize) -> f64 {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&t| t > a && t < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| composite_gauss(&f, w[0], w[1], panels, m)).sum()
}

/// Composite Gauss-Legendre rule after the substitution `x = a + (b - a) t^k`,
/// which smooths algebraic singularities at `a`.
pub fn graded_gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, grade: u32, panels: usize, m: usize) -> f64 {
    let k = f64::from(grade);
    let len = b - a;
    composite_gauss(
        |t: f64| {
            let x = a + len * t.powf(k);
            f(x) * len * k * t.powf(k - 1.0)
        },
        0.0,
        1.0,
        panels,
        m,
    )
}
