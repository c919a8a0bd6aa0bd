//! Parametric nonnegative distributions for work and repair times.
//!
//! Five families are supported: `exp(rate)`, `weibull(shape,scale)`,
//! `gamma(shape,rate)`, `uniform(lo,hi)` and `det(value)`. Each evaluates its
//! CDF, the left-limit CDF (needed because ties between a failure and a
//! repair completion count as system failure, so survival indicators are
//! strict), draws seed-deterministic samples, and reports its transform
//! `E e^{-sX}` in closed form where one exists.

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::{gamma, gamma_lr, ln_gamma};

use crate::error::Error;
use crate::rng::SplitMix64;

/// Tail mass left beyond the truncation point handed to the quadrature.
pub(crate) const TAIL_EPS: f64 = 1e-14;

/// Parametric description of a nonnegative random variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Gamma { shape: f64, rate: f64 },
    Uniform { lo: f64, hi: f64 },
    Deterministic { value: f64 },
}

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self, Error> {
        let d = Self::Exponential { rate };
        d.validate().map(|_| d)
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self, Error> {
        let d = Self::Weibull { shape, scale };
        d.validate().map(|_| d)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self, Error> {
        let d = Self::Gamma { shape, rate };
        d.validate().map(|_| d)
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self, Error> {
        let d = Self::Uniform { lo, hi };
        d.validate().map(|_| d)
    }

    pub fn deterministic(value: f64) -> Result<Self, Error> {
        let d = Self::Deterministic { value };
        d.validate().map(|_| d)
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match *self {
            Self::Exponential { rate } => {
                if !rate.is_finite() || rate <= 0.0 {
                    return bad(format!("exp requires rate > 0, got rate={rate}"));
                }
            }
            Self::Weibull { shape, scale } => {
                if !shape.is_finite() || shape <= 0.0 || !scale.is_finite() || scale <= 0.0 {
                    return bad(format!(
                        "weibull requires shape > 0 and scale > 0, got shape={shape}, scale={scale}"
                    ));
                }
            }
            Self::Gamma { shape, rate } => {
                if !shape.is_finite() || shape <= 0.0 || !rate.is_finite() || rate <= 0.0 {
                    return bad(format!(
                        "gamma requires shape > 0 and rate > 0, got shape={shape}, rate={rate}"
                    ));
                }
            }
            Self::Uniform { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi <= lo {
                    return bad(format!(
                        "uniform requires 0 <= lo < hi, got lo={lo}, hi={hi}"
                    ));
                }
            }
            Self::Deterministic { value } => {
                if !value.is_finite() || value < 0.0 {
                    return bad(format!("det requires value >= 0, got value={value}"));
                }
            }
        }
        Ok(())
    }

    /// `P(X <= x)`, right-continuous; 0 for negative arguments.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => -(-rate * x).exp_m1(),
            Self::Weibull { shape, scale } => -(-(x / scale).powf(shape)).exp_m1(),
            Self::Gamma { shape, rate } => {
                if x == 0.0 {
                    0.0
                } else {
                    gamma_lr(shape, rate * x)
                }
            }
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Deterministic { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(X < x)`, the left limit of the CDF. Differs from [`Self::cdf`]
    /// only at atoms.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match *self {
            Self::Deterministic { value } => {
                if x > value {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.cdf(x),
        }
    }

    /// Density of the continuous families; 0 everywhere for `det`, whose
    /// whole mass is the atom reported by [`Self::atom`].
    pub(crate) fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => rate * (-rate * x).exp(),
            Self::Weibull { shape, scale } => {
                if x == 0.0 {
                    return match shape.partial_cmp(&1.0).unwrap() {
                        std::cmp::Ordering::Less => f64::INFINITY,
                        std::cmp::Ordering::Equal => 1.0 / scale,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                }
                let z = x / scale;
                (shape / scale) * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Self::Gamma { shape, rate } => {
                if x == 0.0 {
                    return match shape.partial_cmp(&1.0).unwrap() {
                        std::cmp::Ordering::Less => f64::INFINITY,
                        std::cmp::Ordering::Equal => rate,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                }
                (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)).exp()
            }
            Self::Uniform { lo, hi } => {
                if (lo..=hi).contains(&x) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Self::Deterministic { .. } => 0.0,
        }
    }

    /// The single atom `(location, mass)` if the family has one.
    pub(crate) fn atom(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Deterministic { value } => Some((value, 1.0)),
            _ => None,
        }
    }

    /// Upper truncation point for quadrature and the tail mass beyond it.
    /// Bounded-support families truncate exactly; unbounded ones at the
    /// `1 - TAIL_EPS` quantile.
    pub(crate) fn truncation(&self) -> (f64, f64) {
        let log_tail = -TAIL_EPS.ln(); // -ln(1e-14) ~ 32.24
        match *self {
            Self::Exponential { rate } => (log_tail / rate, TAIL_EPS),
            Self::Weibull { shape, scale } => (scale * log_tail.powf(1.0 / shape), TAIL_EPS),
            Self::Gamma { .. } => (self.upper_quantile_numeric(1.0 - TAIL_EPS), TAIL_EPS),
            Self::Uniform { hi, .. } => (hi, 0.0),
            Self::Deterministic { value } => (value, 0.0),
        }
    }

    /// Bisection solve of `cdf(q) = p` for families without a closed inverse.
    fn upper_quantile_numeric(&self, p: f64) -> f64 {
        let mut hi = self.mean() + 1.0;
        while self.cdf(hi) < p {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Expected value.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Weibull { shape, scale } => scale * gamma(1.0 + 1.0 / shape),
            Self::Gamma { shape, rate } => shape / rate,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Deterministic { value } => value,
        }
    }

    /// One seed-deterministic draw. Inverse-CDF for the invertible families,
    /// Marsaglia–Tsang rejection for gamma.
    pub fn sample(&self, rng: &mut SplitMix64) -> f64 {
        match *self {
            Self::Exponential { rate } => -(-rng.next_f64()).ln_1p() / rate,
            Self::Weibull { shape, scale } => {
                scale * (-(-rng.next_f64()).ln_1p()).powf(1.0 / shape)
            }
            Self::Gamma { shape, rate } => sample_gamma(shape, rate, rng),
            Self::Uniform { lo, hi } => lo + rng.next_f64() * (hi - lo),
            Self::Deterministic { value } => value,
        }
    }

    /// `E e^{-sX}` in closed form, or `None` for Weibull (no elementary
    /// form; the transform module integrates it numerically).
    pub fn closed_lst(&self, s: f64) -> Option<f64> {
        debug_assert!(s >= 0.0);
        match *self {
            Self::Exponential { rate } => Some(rate / (rate + s)),
            Self::Weibull { .. } => None,
            Self::Gamma { shape, rate } => Some((rate / (rate + s)).powf(shape)),
            Self::Uniform { lo, hi } => {
                if s == 0.0 {
                    Some(1.0)
                } else {
                    let w = hi - lo;
                    Some((-s * lo).exp() * (-(-s * w).exp_m1()) / (s * w))
                }
            }
            Self::Deterministic { value } => Some((-s * value).exp()),
        }
    }
}

fn sample_gamma(shape: f64, rate: f64, rng: &mut SplitMix64) -> f64 {
    if shape < 1.0 {
        // Boost: gamma(a) = gamma(a+1) * U^(1/a). The boost uniform is drawn
        // first so the consumption order is fixed.
        let boost = rng.next_f64().powf(1.0 / shape);
        return sample_gamma(shape + 1.0, rate, rng) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.next_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.next_f64();
        if u < 1.0 - 0.0331 * (x * x) * (x * x) {
            return d * v / rate;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v / rate;
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Exponential { rate } => write!(f, "exp({rate})"),
            Self::Weibull { shape, scale } => write!(f, "weibull({shape},{scale})"),
            Self::Gamma { shape, rate } => write!(f, "gamma({shape},{rate})"),
            Self::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            Self::Deterministic { value } => write!(f, "det({value})"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses the literal syntax shared by config files and the CLI:
    /// `exp(rate)`, `weibull(shape,scale)`, `gamma(shape,rate)`,
    /// `uniform(lo,hi)`, `det(value)`.
    fn from_str(text: &str) -> Result<Self, Error> {
        let bad = |msg: String| Error::InvalidDistribution(msg);
        let t = text.trim();
        let open = t
            .find('(')
            .ok_or_else(|| bad(format!("expected name(args) in {t:?}")))?;
        if !t.ends_with(')') {
            return Err(bad(format!("missing closing parenthesis in {t:?}")));
        }
        let name = t[..open].trim();
        let args: Vec<f64> = t[open + 1..t.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("bad numeric parameter {:?} in {t:?}", a.trim())))
            })
            .collect::<Result<_, _>>()?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!(
                    "{name} takes {n} parameter(s), got {} in {t:?}",
                    args.len()
                )))
            }
        };
        match name {
            "exp" => arity(1).and_then(|_| Self::exponential(args[0])),
            "weibull" => arity(2).and_then(|_| Self::weibull(args[0], args[1])),
            "gamma" => arity(2).and_then(|_| Self::gamma(args[0], args[1])),
            "uniform" => arity(2).and_then(|_| Self::uniform(args[0], args[1])),
            "det" => arity(1).and_then(|_| Self::deterministic(args[0])),
            other => Err(bad(format!("unknown distribution {other:?}"))),
        }
    }
}
