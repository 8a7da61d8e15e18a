//! Truncated power-series representations of the nonlinear factor in the
//! variable x = u^2/(2*i0), with an independent generalized-binomial oracle.
//!
//! Three sources produce coefficient tables:
//!
//! * `binomial_coeffs` - the generalized binomial series of (1-x)^(-6/25),
//!   c_k = prod_{j<k} (6/25 + j)/(j+1). This is ground truth.
//! * `explog_coeffs` - formal composition of exp with the logarithm series,
//!   theta = (6/25)(x + x^2/2 + x^3/3 + ...), truncated term by term. Must
//!   reproduce the binomial values; the arithmetic is exact rational up to
//!   order 16 and f64 beyond.
//! * `paper_literal_coeffs` - the printed three-term expansion, whose x^2
//!   coefficient 0.24 differs from the oracle's 93/625 = 0.1488. Retained
//!   for discrepancy reporting only.

pub use num::bigint::BigInt;
pub use num::rational::BigRational;

use num::{FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::flow::{self, FlowParams};

/// Highest order accepted by the coefficient constructors.
pub const MAX_ORDER: usize = 32;

/// Highest order at which the exp/log composition runs over exact rationals.
pub const EXACT_ORDER: usize = 16;

/// Which construction produced a coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesSource {
    BinomialOracle,
    ExpLogComposition,
    PaperLiteral,
}

impl SeriesSource {
    pub fn label(self) -> &'static str {
        match self {
            SeriesSource::BinomialOracle => "binomial-oracle",
            SeriesSource::ExpLogComposition => "explog-composition",
            SeriesSource::PaperLiteral => "paper-literal",
        }
    }
}

impl std::fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Coefficients c_0..c_N of powers of x = u^2/(2*i0).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoeffs {
    coeffs: Vec<f64>,
    source: SeriesSource,
}

impl SeriesCoeffs {
    fn new(coeffs: Vec<f64>, source: SeriesSource) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert_eq!(coeffs[0], 1.0);
        SeriesCoeffs { coeffs, source }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation order N; the table has N + 1 entries.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn source(&self) -> SeriesSource {
        self.source
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

fn alpha_rational() -> BigRational {
    let a = flow::SERIES_EXPONENT;
    BigRational::new(BigInt::from(*a.numer()), BigInt::from(*a.denom()))
}

/// Exact generalized binomial coefficients of (1-x)^(-6/25):
/// c_k = prod_{j=0}^{k-1} (6/25 + j)/(j+1). All terms are positive.
pub fn binomial_coeffs_exact(order: usize) -> Result<Vec<BigRational>> {
    check_order(order)?;
    let alpha = alpha_rational();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(BigRational::one());
    for k in 0..order {
        let next = coeffs[k].clone() * (alpha.clone() + BigRational::from(BigInt::from(k)))
            / BigRational::from(BigInt::from(k as i64 + 1));
        coeffs.push(next);
    }
    Ok(coeffs)
}

/// f64 view of the binomial oracle.
pub fn binomial_coeffs(order: usize) -> Result<SeriesCoeffs> {
    let exact = binomial_coeffs_exact(order)?;
    Ok(SeriesCoeffs::new(
        exact.iter().map(|c| c.to_f64().unwrap()).collect(),
        SeriesSource::BinomialOracle,
    ))
}

/// Multiply two truncated series, dropping terms beyond `order`.
fn mul_truncated<T>(a: &[T], b: &[T], order: usize) -> Vec<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    let len = (order + 1).min(a.len() + b.len() - 1);
    let mut out = vec![T::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if i > order {
            break;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// exp of a series with zero constant term, truncated at `order`:
/// sum_{m=0}^{order} theta^m / m!.
fn exp_truncated<T>(theta: &[T], order: usize) -> Vec<T>
where
    T: Clone
        + Zero
        + One
        + FromPrimitive
        + std::ops::Mul<Output = T>
        + std::ops::Add<Output = T>
        + std::ops::Div<Output = T>,
{
    debug_assert!(theta.first().map(|c| c.is_zero()).unwrap_or(true));
    let mut result = vec![T::zero(); order + 1];
    result[0] = T::one();

    // power = theta^m / m!, built incrementally; theta^m starts at order m.
    let mut power = vec![T::zero(); order + 1];
    power[0] = T::one();
    for m in 1..=order {
        power = mul_truncated(&power, theta, order);
        let m_val = T::from_usize(m).expect("small integer");
        for coeff in power.iter_mut() {
            *coeff = coeff.clone() / m_val.clone();
        }
        for (r, p) in result.iter_mut().zip(power.iter()) {
            *r = r.clone() + p.clone();
        }
    }
    result
}

/// theta = alpha * (x + x^2/2 + ... + x^order/order), the negated logarithm
/// series scaled by the exponent.
fn log_series_exact(order: usize) -> Vec<BigRational> {
    let alpha = alpha_rational();
    let mut theta = vec![BigRational::zero(); order + 1];
    for (k, coeff) in theta.iter_mut().enumerate().skip(1) {
        *coeff = alpha.clone() / BigRational::from(BigInt::from(k));
    }
    theta
}

/// Exact exp/log composition, available up to [`EXACT_ORDER`].
pub fn explog_coeffs_exact(order: usize) -> Result<Vec<BigRational>> {
    check_order(order)?;
    assert!(
        order <= EXACT_ORDER,
        "exact composition capped at order {EXACT_ORDER}"
    );
    Ok(exp_truncated(&log_series_exact(order), order))
}

/// Composition exp((6/25) * (x + x^2/2 + ...)) truncated at `order`.
/// Exact rational arithmetic up to order 16, f64 beyond.
pub fn explog_coeffs(order: usize) -> Result<SeriesCoeffs> {
    check_order(order)?;
    let coeffs = if order <= EXACT_ORDER {
        explog_coeffs_exact(order)?
            .iter()
            .map(|c| c.to_f64().unwrap())
            .collect()
    } else {
        let alpha = flow::ratio_to_f64(flow::SERIES_EXPONENT);
        let mut theta = vec![0.0_f64; order + 1];
        for (k, coeff) in theta.iter_mut().enumerate().skip(1) {
            *coeff = alpha / k as f64;
        }
        exp_truncated(&theta, order)
    };
    Ok(SeriesCoeffs::new(coeffs, SeriesSource::ExpLogComposition))
}

/// The three printed coefficients [1, 6/25, 6/25], order 2.
///
/// The x^2 entry sums the printed u^4 terms, (6/25)/2 + (1/2)(6/25) = 0.24;
/// the composition executed exactly gives 93/625 = 0.1488 instead. Both are
/// kept so reports can quantify the difference.
pub fn paper_literal_coeffs() -> SeriesCoeffs {
    let c1 = flow::ratio_to_f64(flow::SERIES_EXPONENT);
    let c2 = c1 / 2.0 + c1 / 2.0;
    SeriesCoeffs::new(vec![1.0, c1, c2], SeriesSource::PaperLiteral)
}

/// Exact rational form of the literal table.
pub fn paper_literal_coeffs_exact() -> Vec<BigRational> {
    let alpha = alpha_rational();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    vec![
        BigRational::one(),
        alpha.clone(),
        half.clone() * alpha.clone() + half * alpha,
    ]
}

/// Difference between the printed x^2 coefficient and the oracle's,
/// (1/2)(6/25 - (6/25)^2) = 57/625. A frozen regression fixture.
pub fn literal_discrepancy_exact() -> BigRational {
    let literal = paper_literal_coeffs_exact()[2].clone();
    let oracle = binomial_coeffs_exact(2).expect("order 2 in range")[2].clone();
    literal - oracle
}

/// Evaluate the series at velocity `u` by Horner's scheme in x = u^2/(2*i0).
pub fn eval_series(coeffs: &SeriesCoeffs, speed: f64, params: &FlowParams) -> Result<f64> {
    let x = flow::speed_fraction(speed, params)?;
    Ok(horner(coeffs.coeffs(), x))
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Exact truncation tail sum_{k=N+1}^{deep} c_k x^k of the binomial series,
/// used as a high-precision oracle for truncation-error assertions. `deep`
/// may exceed the public order cap; with x <= 1/2 the remainder beyond it
/// is negligible.
pub fn binomial_tail_exact(order: usize, x: &BigRational, deep: usize) -> BigRational {
    let alpha = alpha_rational();
    let mut coeff = BigRational::one();
    let mut power = BigRational::one();
    let mut tail = BigRational::zero();
    for k in 0..=deep {
        if k > order {
            tail += coeff.clone() * power.clone();
        }
        coeff = coeff * (alpha.clone() + BigRational::from(BigInt::from(k)))
            / BigRational::from(BigInt::from(k as i64 + 1));
        power *= x.clone();
    }
    tail
}
