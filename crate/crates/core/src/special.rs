//! The two hypergeometric kernels of the entropy formula,
//! `2F2(1,1;3/2,2;-x^2)` and `1F1(k;1/2;-x^2)`, plus `ln n!`.
//!
//! Both kernels are power series summed with a term-ratio recurrence and a
//! last-term stopping rule. The series are generic over [`Scalar`], so the
//! same code runs in `f64` or in double-double ([`Precision`]).
//!
//! * `1F1(a;b;-z)` is evaluated through Kummer's transformation
//!   `e^{-z} 1F1(b-a;b;z)`: beyond the first `a - b` terms the transformed
//!   series has terms of one sign, so there is no unbounded cancellation.
//! * `z 2F2(1,1;3/2,2;-z)` has no such transformation. The alternating series
//!   loses about `z / ln 10` digits; it is used while that loss fits in the
//!   working precision, and the large-`z` expansion
//!   `(ln(4z) + gamma)/2 - sum_k (2k-1)!! / (2^{k+1} k z^k)` beyond.

use std::str::FromStr;
use std::sync::OnceLock;

use crate::dd::{CompensatedSum, DoubleDouble, Scalar};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const EULER_GAMMA_DD: DoubleDouble = DoubleDouble {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

pub(crate) const HALF_LN_PI_DD: DoubleDouble = DoubleDouble {
    hi: 0.572_364_942_924_700_1,
    lo: 5.132_975_581_353_913e-18,
};

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Largest `|x|` the kernels guarantee (covers Hermite roots up to degree ~300).
pub const KERNEL_RANGE: f64 = 25.0;

/// Absolute error budget of the public kernel entry points.
pub const KERNEL_ERROR_BUDGET: f64 = 1e-12;

/// Accumulation mode for the series kernels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Precision {
    /// Plain `f64`.
    Double,
    /// Double-double (about 32 significant digits).
    #[default]
    Extended,
}

impl Precision {
    pub const ENV_VAR: &'static str = "OSCENT_PRECISION";

    /// Reads [`Precision::ENV_VAR`]; unset means the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(v) => v.parse(),
            Err(std::env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(Error::InvalidArgument(format!("{}: {e}", Self::ENV_VAR))),
        }
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::InvalidArgument(format!(
                "unknown precision {other:?} (expected \"double\" or \"extended\")"
            ))),
        }
    }
}

/// A kernel value with its truncation-plus-rounding error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

/// Internal series value, still in working precision.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Series<S> {
    pub value: S,
    pub error: f64,
    pub terms: usize,
}

impl<S: Scalar> Series<S> {
    fn finish(self) -> SeriesResult {
        let value = self.value.to_f64();
        SeriesResult {
            value,
            abs_error_estimate: self.error + f64::EPSILON / 2.0 * value.abs(),
            terms_used: self.terms,
        }
    }
}

fn check_range(function: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > KERNEL_RANGE {
        return Err(Error::OutOfRange {
            function,
            x,
            limit: KERNEL_RANGE,
        });
    }
    Ok(())
}

fn check_budget(function: &'static str, r: SeriesResult) -> Result<SeriesResult> {
    if r.abs_error_estimate.is_nan() || r.abs_error_estimate > KERNEL_ERROR_BUDGET {
        return Err(Error::ErrorBudget {
            function,
            estimate: r.abs_error_estimate,
            budget: KERNEL_ERROR_BUDGET,
        });
    }
    Ok(r)
}

/// Crossover for the `2F2` kernel: the alternating series' rounding grows like
/// `e^z u` while the expansion's truncation floor is `e^{-z}`.
fn f22_crossover<S: Scalar>() -> f64 {
    -0.45 * S::UNIT_ROUNDOFF.ln()
}

/// `z 2F2(1,1;3/2,2;-z)` for `z = x^2`.
pub(crate) fn z_f22<S: Scalar>(x: f64) -> Result<Series<S>> {
    let z = S::square_of(x);
    let zf = z.to_f64();
    if zf == 0.0 {
        return Ok(Series {
            value: S::from_f64(0.0),
            error: 0.0,
            terms: 1,
        });
    }
    if zf <= f22_crossover::<S>() {
        let s = f22_series(z)?;
        Ok(Series {
            value: z * s.value,
            error: zf * s.error,
            terms: s.terms,
        })
    } else {
        f22_large(z)
    }
}

/// Alternating Taylor series of `2F2(1,1;3/2,2;-z)`.
fn f22_series<S: Scalar>(z: S) -> Result<Series<S>> {
    let zf = z.to_f64();
    let mut term = S::from_f64(1.0);
    let mut sum = S::from_f64(1.0);
    let mut weighted_abs = 1.0;
    for m in 0..MAX_SERIES_TERMS {
        let mf = m as f64;
        let ratio_mag = zf * (mf + 1.0) / ((mf + 1.5) * (mf + 2.0));
        term = -(term * z) * S::from_f64(mf + 1.0) / S::from_f64((mf + 1.5) * (mf + 2.0));
        let t = term.abs_f64();
        if ratio_mag < 1.0 && t <= S::UNIT_ROUNDOFF * sum.abs_f64() {
            // alternating with decreasing magnitudes from here on
            let rounding = 3.0 * S::UNIT_ROUNDOFF * weighted_abs;
            return Ok(Series {
                value: sum,
                error: t + rounding,
                terms: m + 1,
            });
        }
        sum += term;
        weighted_abs += (mf + 2.0) * t;
    }
    Err(Error::TermCap {
        function: "f22_kernel",
        cap: MAX_SERIES_TERMS,
    })
}

/// Large-`z` expansion of `z 2F2(1,1;3/2,2;-z)`.
fn f22_large<S: Scalar>(z: S) -> Result<Series<S>> {
    let zf = z.to_f64();
    let gamma = S::from_f64(EULER_GAMMA_DD.hi) + S::from_f64(EULER_GAMMA_DD.lo);
    let lead = (S::ln(z * S::from_f64(4.0)) + gamma) * S::from_f64(0.5);
    let lead_mag = lead.abs_f64();
    // a_k / z^k with a_1 = 1/4 and a_{k+1} = a_k (2k+1) k / (2 (k+1))
    let mut term = S::from_f64(0.25) / z;
    let mut correction = S::from_f64(0.0);
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        let ratio = (2.0 * kf + 1.0) * kf / (2.0 * (kf + 1.0) * zf);
        let t = term.abs_f64();
        if t <= S::UNIT_ROUNDOFF * lead_mag || ratio >= 0.5 {
            // remaining terms shrink at least geometrically by 1/2 until the
            // expansion's minimum; the next term doubled bounds the rest
            let error = 2.0 * t + 4.0 * S::UNIT_ROUNDOFF * lead_mag;
            return Ok(Series {
                value: lead - correction,
                error,
                terms: k,
            });
        }
        correction += term;
        term = term * S::from_f64((2.0 * kf + 1.0) * kf) / (S::from_f64(2.0 * (kf + 1.0)) * z);
    }
    Err(Error::TermCap {
        function: "f22_kernel",
        cap: MAX_SERIES_TERMS,
    })
}

/// `1F1(a;b;-z)` for `a, b > 0`, via `e^{-z} 1F1(b-a;b;z)`.
pub(crate) fn kummer_neg<S: Scalar>(a: f64, b: f64, z: S) -> Result<Series<S>> {
    debug_assert!(a > 0.0 && b > 0.0);
    let zf = z.to_f64();
    if zf == 0.0 {
        return Ok(Series {
            value: S::from_f64(1.0),
            error: 0.0,
            terms: 1,
        });
    }
    let c = b - a;
    let mut term = S::from_f64(1.0);
    let mut sum = S::from_f64(1.0);
    let mut weighted_abs = 1.0;
    let mut done = None;
    for m in 0..MAX_SERIES_TERMS {
        let mf = m as f64;
        let num = c + mf;
        if num == 0.0 {
            done = Some((0.0, m + 1));
            break;
        }
        term = term * S::from_f64(num) * z / S::from_f64((b + mf) * (mf + 1.0));
        let t = term.abs_f64();
        sum += term;
        weighted_abs += 3.0 * (mf + 2.0) * t;
        let j = mf + 1.0;
        // for i >= j the ratio t_{i+1}/t_i lies in [0, z/(i+1)]
        if j >= a - b {
            let q = zf / (j + 1.0);
            if q < 1.0 {
                let tail = t * q / (1.0 - q);
                if tail <= S::UNIT_ROUNDOFF * sum.abs_f64() {
                    done = Some((tail, m + 2));
                    break;
                }
            }
        }
    }
    let (tail, terms) = done.ok_or(Error::TermCap {
        function: "f11_kernel",
        cap: MAX_SERIES_TERMS,
    })?;
    let damp = (-z).exp();
    let damp_f = damp.to_f64();
    let value = sum * damp;
    let error = damp_f * (tail + S::UNIT_ROUNDOFF * weighted_abs)
        + 2.0 * S::UNIT_ROUNDOFF * value.abs_f64();
    Ok(Series {
        value,
        error,
        terms,
    })
}

/// `2F2(1,1;3/2,2;-x^2)` in extended precision.
pub fn f22_kernel(x: f64) -> Result<SeriesResult> {
    f22_kernel_with(x, Precision::Extended)
}

pub fn f22_kernel_with(x: f64, precision: Precision) -> Result<SeriesResult> {
    check_range("f22_kernel", x)?;
    if x == 0.0 {
        return Ok(SeriesResult {
            value: 1.0,
            abs_error_estimate: 0.0,
            terms_used: 1,
        });
    }
    let r = match precision {
        Precision::Double => f22_value::<f64>(x)?,
        Precision::Extended => f22_value::<DoubleDouble>(x)?,
    };
    check_budget("f22_kernel", r)
}

fn f22_value<S: Scalar>(x: f64) -> Result<SeriesResult> {
    let z = S::square_of(x);
    if z.to_f64() <= f22_crossover::<S>() {
        Ok(f22_series(z)?.finish())
    } else {
        let s = f22_large(z)?;
        let scaled = Series {
            value: s.value / z,
            error: s.error / z.to_f64(),
            terms: s.terms,
        };
        Ok(scaled.finish())
    }
}

/// `1F1(k;1/2;-x^2)` in extended precision.
pub fn f11_kernel(k: u32, x: f64) -> Result<SeriesResult> {
    f11_kernel_with(k, x, Precision::Extended)
}

pub fn f11_kernel_with(k: u32, x: f64, precision: Precision) -> Result<SeriesResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("f11_kernel requires k >= 1".into()));
    }
    check_range("f11_kernel", x)?;
    let r = match precision {
        Precision::Double => kummer_neg::<f64>(f64::from(k), 0.5, x * x)?.finish(),
        Precision::Extended => {
            kummer_neg::<DoubleDouble>(f64::from(k), 0.5, DoubleDouble::square_of(x))?.finish()
        }
    };
    check_budget("f11_kernel", r)
}

const LN_FACTORIAL_TABLE_LEN: usize = 1025;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = CompensatedSum::new();
        let mut out = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        out.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE_LEN {
            acc.add((k as f64).ln());
            out.push(acc.value());
        }
        out
    })
}

/// `ln n!`: a compensated cumulative table up to 1024, Stirling's series beyond.
pub fn ln_factorial(n: u32) -> f64 {
    let table = ln_factorial_table();
    if let Some(&v) = table.get(n as usize) {
        return v;
    }
    // ln Gamma(x) with x = n + 1 > 1025; the omitted term is below 1e-22
    let x = f64::from(n) + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}
