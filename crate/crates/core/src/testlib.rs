//! Test corpus: the six Lyness-Kaganove parametric families, the 25-function
//! battery, the `|x - λ|^α` divergence family and the `⌊e^x⌋` staircase
//! family, each with exact or high-precision reference values.
//!
//! Random parameters come from ChaCha8 seeded with the run seed, with one
//! stream per (family, realization) pair so any realization can be
//! regenerated on its own.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::integrand::Integrand;

/// Stream identifiers for draws that are not Lyness-Kaganove families.
pub const DIVERGENCE_STREAM: u64 = 7;
pub const WALDVOGEL_STREAM: u64 = 8;

/// Generator for realization `idx` of stream `family`.
pub fn stream_rng(seed: u64, family: u64, idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((family << 32) | (idx & 0xffff_ffff));
    rng
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// One of the six Lyness-Kaganove families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LkFamily {
    /// `|x - λ|^α` on `[0, 1]`.
    Singular,
    /// `(x > λ) e^{αx}` on `[0, 1]`.
    Discontinuous,
    /// `exp(-α|x - λ|)` on `[0, 1]`.
    Kink,
    /// `10^α / ((x - λ)^2 + 10^α)` on `[1, 2]`.
    Peak,
    /// Sum of four peaks on `[1, 2]`.
    FourPeaks,
    /// `2β(x - λ) cos(β(x - λ)^2)` on `[0, 1]`.
    Oscillating,
}

impl LkFamily {
    pub const ALL: [LkFamily; 6] = [
        LkFamily::Singular,
        LkFamily::Discontinuous,
        LkFamily::Kink,
        LkFamily::Peak,
        LkFamily::FourPeaks,
        LkFamily::Oscillating,
    ];

    /// Family number, 1 through 6.
    pub fn id(self) -> u64 {
        self as u64 + 1
    }

    pub fn from_id(id: u64) -> Option<Self> {
        Self::ALL.get(usize::try_from(id).ok()?.checked_sub(1)?).copied()
    }

    /// Label used in reports: the family's equation number in the classic
    /// Lyness-Kaganove listing (16 through 21).
    pub fn label(self) -> String {
        format!("eq{}", 15 + self.id())
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            LkFamily::Peak | LkFamily::FourPeaks => (1.0, 2.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn lambda_range(self) -> (f64, f64) {
        self.domain()
    }

    pub fn alpha_range(self) -> (f64, f64) {
        match self {
            LkFamily::Singular => (-0.5, 0.0),
            LkFamily::Discontinuous => (0.0, 1.0),
            LkFamily::Kink => (0.0, 4.0),
            LkFamily::Peak => (-6.0, -3.0),
            LkFamily::FourPeaks => (-5.0, -3.0),
            LkFamily::Oscillating => (1.8, 2.0),
        }
    }

    /// Realization with explicit parameters; only [`LkFamily::FourPeaks`]
    /// uses more than the first λ.
    pub fn with_params(self, lambda: [f64; 4], alpha: f64) -> LkProblem {
        LkProblem {
            family: self,
            lambda,
            alpha,
        }
    }
}

/// A realization of a Lyness-Kaganove family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LkProblem {
    pub family: LkFamily,
    pub lambda: [f64; 4],
    pub alpha: f64,
}

fn peak_antiderivative(s: f64, lambda: f64, a: f64, b: f64) -> f64 {
    s * (((b - lambda) / s).atan() - ((a - lambda) / s).atan())
}

impl LkProblem {
    pub fn domain(&self) -> (f64, f64) {
        self.family.domain()
    }

    fn beta(&self) -> f64 {
        let l = self.lambda[0];
        10f64.powf(self.alpha) / (l * l).max((1.0 - l) * (1.0 - l))
    }

    /// Closed-form integral over the family's domain.
    pub fn exact(&self) -> f64 {
        let (l, a) = (self.lambda[0], self.alpha);
        match self.family {
            LkFamily::Singular => (l.powf(a + 1.0) + (1.0 - l).powf(a + 1.0)) / (a + 1.0),
            LkFamily::Discontinuous => {
                if a == 0.0 {
                    1.0 - l
                } else {
                    (a.exp() - (a * l).exp()) / a
                }
            }
            LkFamily::Kink => {
                if a == 0.0 {
                    1.0
                } else {
                    (2.0 - (-a * l).exp() - (-a * (1.0 - l)).exp()) / a
                }
            }
            LkFamily::Peak => peak_antiderivative(10f64.powf(0.5 * a), l, 1.0, 2.0),
            LkFamily::FourPeaks => {
                let s = 10f64.powf(0.5 * a);
                self.lambda.iter().map(|&li| peak_antiderivative(s, li, 1.0, 2.0)).sum()
            }
            LkFamily::Oscillating => {
                let beta = self.beta();
                (beta * (1.0 - l) * (1.0 - l)).sin() - (beta * l * l).sin()
            }
        }
    }

    /// Points in the domain where the integrand is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.family {
            LkFamily::Singular | LkFamily::Discontinuous | LkFamily::Kink | LkFamily::Peak => vec![self.lambda[0]],
            LkFamily::FourPeaks => self.lambda.to_vec(),
            LkFamily::Oscillating => vec![self.lambda[0]],
        }
    }
}

impl Integrand for LkProblem {
    fn eval(&self, x: f64) -> f64 {
        let (l, a) = (self.lambda[0], self.alpha);
        match self.family {
            LkFamily::Singular => (x - l).abs().powf(a),
            LkFamily::Discontinuous => {
                if x > l {
                    (a * x).exp()
                } else {
                    0.0
                }
            }
            LkFamily::Kink => (-a * (x - l).abs()).exp(),
            LkFamily::Peak => {
                let s2 = 10f64.powf(a);
                s2 / ((x - l) * (x - l) + s2)
            }
            LkFamily::FourPeaks => {
                let s2 = 10f64.powf(a);
                self.lambda.iter().map(|&li| s2 / ((x - li) * (x - li) + s2)).sum()
            }
            LkFamily::Oscillating => {
                let beta = self.beta();
                let d = x - l;
                2.0 * beta * d * (beta * d * d).cos()
            }
        }
    }
}

/// Draws realization `idx` of `family` for the run seeded with `seed`.
pub fn lk_draw(family: LkFamily, seed: u64, idx: u64) -> LkProblem {
    let mut rng = stream_rng(seed, family.id(), idx);
    let mut lambda = [0.0; 4];
    let count = if family == LkFamily::FourPeaks { 4 } else { 1 };
    for l in lambda.iter_mut().take(count) {
        *l = uniform(&mut rng, family.lambda_range());
    }
    let alpha = uniform(&mut rng, family.alpha_range());
    family.with_params(lambda, alpha)
}

/// `|x - λ|^α` on `[0, 1]` with fixed `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceProblem {
    pub lambda: f64,
    pub alpha: f64,
}

impl DivergenceProblem {
    /// Exact integral, or `None` when it diverges (`α ≤ -1`).
    pub fn exact(&self) -> Option<f64> {
        (self.alpha > -1.0).then(|| {
            LkFamily::Singular
                .with_params([self.lambda, 0.0, 0.0, 0.0], self.alpha)
                .exact()
        })
    }
}

impl Integrand for DivergenceProblem {
    fn eval(&self, x: f64) -> f64 {
        (x - self.lambda).abs().powf(self.alpha)
    }
}

/// Realization `idx` of the divergence family. The same `λ` is used for
/// every `α` so that columns differ only in the exponent.
pub fn divergence_draw(alpha: f64, seed: u64, idx: u64) -> DivergenceProblem {
    let mut rng = stream_rng(seed, DIVERGENCE_STREAM, idx);
    DivergenceProblem {
        lambda: uniform(&mut rng, (0.0, 1.0)),
        alpha,
    }
}

/// `⌊e^x⌋` on `[0, λ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Staircase {
    pub lambda: f64,
}

impl Staircase {
    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.lambda)
    }

    /// Sum over the unit steps: step `k` covers `[ln k, min(λ, ln(k+1))]`.
    pub fn exact(&self) -> f64 {
        let mut total = 0.0;
        let mut k = 1u32;
        loop {
            let lo = f64::from(k).ln();
            if lo >= self.lambda {
                return total;
            }
            let hi = f64::from(k + 1).ln().min(self.lambda);
            total += f64::from(k) * (hi - lo);
            k += 1;
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (2..)
            .map(|k: u32| f64::from(k).ln())
            .take_while(|&t| t < self.lambda)
            .collect()
    }
}

impl Integrand for Staircase {
    fn eval(&self, x: f64) -> f64 {
        x.exp().floor()
    }
}

/// Realization `idx` of the staircase family with `λ ∈ [2.5, 3.5]`.
pub fn waldvogel_family_draw(seed: u64, idx: u64) -> Staircase {
    let mut rng = stream_rng(seed, WALDVOGEL_STREAM, idx);
    Staircase {
        lambda: uniform(&mut rng, (2.5, 3.5)),
    }
}

/// A battery integrand with its domain and reference integral.
#[derive(Debug, Clone, Copy)]
pub struct BatteryFunction {
    pub id: u32,
    pub a: f64,
    pub b: f64,
    pub f: fn(f64) -> f64,
    pub reference: f64,
    /// Points where the integrand is not smooth, for reference checks.
    pub breaks: &'static [f64],
}

impl BatteryFunction {
    pub fn label(&self) -> String {
        format!("f{}", self.id)
    }
}

impl Integrand for BatteryFunction {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

use std::f64::consts::{E, LN_2, PI};

fn f1(x: f64) -> f64 {
    x.exp()
}
fn f2(x: f64) -> f64 {
    f64::from(u8::from(x > 0.3))
}
fn f3(x: f64) -> f64 {
    x.sqrt()
}
fn f4(x: f64) -> f64 {
    23.0 / 25.0 * x.cosh() - x.cos()
}
fn f5(x: f64) -> f64 {
    1.0 / (x.powi(4) + x * x + 0.9)
}
fn f6(x: f64) -> f64 {
    x.powf(1.5)
}
fn f7(x: f64) -> f64 {
    x.powf(-0.5)
}
fn f8(x: f64) -> f64 {
    1.0 / (1.0 + x.powi(4))
}
fn f9(x: f64) -> f64 {
    2.0 / (2.0 + (10.0 * PI * x).sin())
}
fn f10(x: f64) -> f64 {
    1.0 / (1.0 + x)
}
fn f11(x: f64) -> f64 {
    1.0 / (1.0 + x.exp())
}
fn f12(x: f64) -> f64 {
    x / (x.exp() - 1.0)
}
fn f13(x: f64) -> f64 {
    (100.0 * PI * x).sin() / (PI * x)
}
fn f14(x: f64) -> f64 {
    50f64.sqrt() * (-50.0 * PI * x * x).exp()
}
fn f15(x: f64) -> f64 {
    25.0 * (-25.0 * x).exp()
}
fn f16(x: f64) -> f64 {
    50.0 / (PI * (2500.0 * x * x + 1.0))
}
fn f17(x: f64) -> f64 {
    let s = (50.0 * PI * x).sin() / (50.0 * PI * x);
    50.0 * s * s
}
fn f18(x: f64) -> f64 {
    (x.cos() + 3.0 * x.sin() + 2.0 * (2.0 * x).cos() + 3.0 * (3.0 * x).cos()).cos()
}
fn f19(x: f64) -> f64 {
    x.ln()
}
fn f20(x: f64) -> f64 {
    1.0 / (1.005 + x * x)
}
fn f21(x: f64) -> f64 {
    (1..=3)
        .map(|i| 1.0 / (20f64.powi(i) * (x - 0.2 * f64::from(i))).cosh())
        .sum()
}
fn f22(x: f64) -> f64 {
    4.0 * PI * PI * x * (20.0 * PI * x).sin() * (2.0 * PI * x).cos()
}
fn f23(x: f64) -> f64 {
    let t = 230.0 * x - 30.0;
    1.0 / (1.0 + t * t)
}
fn f24(x: f64) -> f64 {
    x.exp().floor()
}
fn f25(x: f64) -> f64 {
    let step = |c: bool| f64::from(u8::from(c));
    (x + 1.0) * step(x < 1.0) + (3.0 - x) * step((1.0..=3.0).contains(&x)) + 2.0 * step(x > 3.0)
}

fn f21_reference() -> f64 {
    (1..=3)
        .map(|i| {
            let k = 20f64.powi(i);
            let c = 0.2 * f64::from(i);
            2.0 / k * ((k * (1.0 - c)).exp().atan() - (-k * c).exp().atan())
        })
        .sum()
}

fn f24_reference() -> f64 {
    Staircase { lambda: 3.0 }.exact()
}

const F2_BREAKS: [f64; 1] = [0.3];
const F23_BREAKS: [f64; 1] = [30.0 / 230.0];
const F25_BREAKS: [f64; 2] = [1.0, 3.0];
const F21_BREAKS: [f64; 3] = [0.2, 0.4, 0.6];
// ln k for k = 2..=20
const F24_BREAKS: [f64; 19] = [
    std::f64::consts::LN_2,
    1.098_612_288_668_109_8,
    1.386_294_361_119_890_6,
    1.609_437_912_434_100_3,
    1.791_759_469_228_055,
    1.945_910_149_055_313_3,
    2.079_441_541_679_835_8,
    2.197_224_577_336_219_6,
    std::f64::consts::LN_10,
    2.397_895_272_798_371,
    2.484_906_649_788_000_4,
    2.564_949_357_461_536_7,
    2.639_057_329_615_258_6,
    2.708_050_201_102_210_3,
    2.772_588_722_239_781,
    2.833_213_344_056_216,
    2.890_371_757_896_165,
    2.944_438_979_166_440_3,
    2.995_732_273_553_991,
];

/// Battery function `id` (1 through 25).
pub fn battery_get(id: u32) -> Option<BatteryFunction> {
    let sqrt2 = std::f64::consts::SQRT_2;
    let (a, b, f, reference, breaks): (f64, f64, fn(f64) -> f64, f64, &'static [f64]) = match id {
        1 => (0.0, 1.0, f1, E - 1.0, &[]),
        2 => (0.0, 1.0, f2, 0.7, &F2_BREAKS),
        3 => (0.0, 1.0, f3, 2.0 / 3.0, &[]),
        4 => (-1.0, 1.0, f4, 46.0 / 25.0 * 1f64.sinh() - 2.0 * 1f64.sin(), &[]),
        5 => (-1.0, 1.0, f5, 1.582_232_963_729_673, &[]),
        6 => (0.0, 1.0, f6, 0.4, &[]),
        7 => (0.0, 1.0, f7, 2.0, &[]),
        8 => (0.0, 1.0, f8, (PI + 2.0 * (1.0 + sqrt2).ln()) / (4.0 * sqrt2), &[]),
        9 => (0.0, 1.0, f9, 2.0 / 3f64.sqrt(), &[]),
        10 => (0.0, 1.0, f10, LN_2, &[]),
        11 => (0.0, 1.0, f11, 1.0 + LN_2 - (1.0 + E).ln(), &[]),
        12 => (0.0, 1.0, f12, 0.777_504_634_112_248_3, &[]),
        13 => (0.0, 1.0, f13, 0.498_986_808_693_045_5, &[]),
        14 => (0.0, 10.0, f14, 0.5, &[]),
        15 => (0.0, 10.0, f15, 1.0 - (-250f64).exp(), &[]),
        16 => (0.0, 10.0, f16, 500f64.atan() / PI, &[]),
        17 => (0.0, 1.0, f17, 0.498_986_808_693_045_5, &[]),
        18 => (0.0, PI, f18, 0.291_018_782_860_052_7, &[]),
        19 => (0.0, 1.0, f19, -1.0, &[]),
        20 => (-1.0, 1.0, f20, 2.0 / 1.005f64.sqrt() * (1.0 / 1.005f64.sqrt()).atan(), &[]),
        21 => (0.0, 1.0, f21, f21_reference(), &F21_BREAKS),
        22 => (0.0, 1.0, f22, -2.0 * PI * (1.0 / 22.0 + 1.0 / 18.0), &[]),
        23 => (0.0, 1.0, f23, (200f64.atan() + 30f64.atan()) / 230.0, &F23_BREAKS),
        24 => (0.0, 3.0, f24, f24_reference(), &F24_BREAKS),
        25 => (0.0, 5.0, f25, 7.5, &F25_BREAKS),
        _ => return None,
    };
    Some(BatteryFunction {
        id,
        a,
        b,
        f,
        reference,
        breaks,
    })
}

/// All 25 battery functions in order.
pub fn battery() -> Vec<BatteryFunction> {
    (1..=25).filter_map(battery_get).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_family_example() {
        let p = LkFamily::Singular.with_params([0.5, 0.0, 0.0, 0.0], -0.5);
        assert!((p.exact() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn discontinuous_family_at_right_end_is_zero() {
        for a in [0.0, 0.3, 1.0] {
            assert_eq!(LkFamily::Discontinuous.with_params([1.0, 0.0, 0.0, 0.0], a).exact(), 0.0);
        }
    }

    #[test]
    fn draws_are_reproducible_and_in_range() {
        for fam in LkFamily::ALL {
            for idx in 0..50 {
                let p = lk_draw(fam, 42, idx);
                assert_eq!(p, lk_draw(fam, 42, idx));
                let (lo, hi) = fam.alpha_range();
                assert!(p.alpha >= lo && p.alpha <= hi);
                let (lo, hi) = fam.lambda_range();
                assert!(p.lambda[0] >= lo && p.lambda[0] <= hi);
            }
        }
        assert_ne!(lk_draw(LkFamily::Kink, 1, 0), lk_draw(LkFamily::Kink, 1, 1));
        assert_ne!(lk_draw(LkFamily::Kink, 1, 0), lk_draw(LkFamily::Kink, 2, 0));
    }

    #[test]
    fn family_ids_round_trip() {
        for fam in LkFamily::ALL {
            assert_eq!(LkFamily::from_id(fam.id()), Some(fam));
        }
        assert_eq!(LkFamily::from_id(0), None);
        assert_eq!(LkFamily::from_id(7), None);
        assert_eq!(LkFamily::Singular.label(), "eq16");
    }

    #[test]
    fn staircase_identities() {
        assert_eq!(Staircase { lambda: 3.0 }.exact(), battery_get(24).unwrap().reference);
        assert!((Staircase { lambda: LN_2 }.exact() - LN_2).abs() < 1e-15);
        let mut ls: Vec<Staircase> = (0..100).map(|i| waldvogel_family_draw(7, i)).collect();
        assert!(ls.iter().all(|s| (2.5..=3.5).contains(&s.lambda)));
        ls.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        assert!(ls.windows(2).all(|w| w[0].exact() <= w[1].exact()));
    }

    #[test]
    fn log_breaks_match() {
        for (k, t) in F24_BREAKS.iter().enumerate() {
            assert!((t - ((k + 2) as f64).ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn battery_is_total_and_evaluable() {
        let all = battery();
        assert_eq!(all.len(), 25);
        assert!(battery_get(0).is_none() && battery_get(26).is_none());
        for bf in &all {
            for i in 0..=100 {
                let x = bf.a + (bf.b - bf.a) * f64::from(i) / 100.0;
                let _ = bf.eval(x);
            }
        }
        assert!(battery_get(12).unwrap().eval(0.0).is_nan());
        assert!(battery_get(13).unwrap().eval(0.0).is_nan());
        assert!(battery_get(17).unwrap().eval(0.0).is_nan());
        assert_eq!(battery_get(19).unwrap().eval(0.0), f64::NEG_INFINITY);
    }
}
