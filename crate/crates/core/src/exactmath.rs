//! Exact integer and rational arithmetic for the counting formulas.
//!
//! Every closed form here is evaluated as an integer product followed by a
//! division whose remainder is asserted to be zero. Nothing is rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::MathError;

/// Arbitrary-precision signed integer used for every count.
pub type ExactInt = BigInt;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type ExactRat = BigRational;

/// Divides `num` by `den`, panicking if the division leaves a remainder.
///
/// Only used where the quotient is an integer by a known identity; a nonzero
/// remainder means the identity was evaluated wrongly.
pub fn exact_div(num: &ExactInt, den: &ExactInt) -> ExactInt {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division {num} / {den}");
    q
}

/// Binomial coefficient `C(n, j)`, zero outside `0 <= j <= n`.
pub fn binomial(n: u64, j: i64) -> ExactInt {
    if j < 0 || j as u64 > n {
        return ExactInt::zero();
    }
    let j = (j as u64).min(n - j as u64);
    let mut acc = ExactInt::one();
    // acc = C(n - j + i, i) after step i, so every division is exact.
    for i in 1..=j {
        acc *= n - j + i;
        acc = exact_div(&acc, &ExactInt::from(i));
    }
    acc
}

fn check_arity(k: u32) -> Result<(), MathError> {
    if k < 2 {
        return Err(MathError::InvalidParameter(format!("arity k must be >= 2, got {k}")));
    }
    Ok(())
}

fn check_tuple_size(r: u32) -> Result<(), MathError> {
    if r < 1 {
        return Err(MathError::InvalidParameter(format!("tuple size r must be >= 1, got {r}")));
    }
    Ok(())
}

/// Fuss-Catalan number `C(kn, n) / ((k-1)n + 1)`: k-ary trees with `n` internal nodes.
pub fn fuss_catalan(k: u32, n: u64) -> Result<ExactInt, MathError> {
    check_arity(k)?;
    let k = u64::from(k);
    let num = binomial(k * n, n as i64);
    Ok(exact_div(&num, &ExactInt::from((k - 1) * n + 1)))
}

/// Catalan number, the binary case of [`fuss_catalan`].
pub fn catalan(n: u64) -> ExactInt {
    fuss_catalan(2, n).expect("k = 2 is a valid arity")
}

/// Raney number `R_n^{(k,r)}`: ordered r-tuples of k-ary trees with `n` internal nodes in total.
///
/// Both closed forms, `r/(kn+r) C(kn+r, n)` and `r/((k-1)n+r) C(kn+r-1, n)`, are
/// evaluated and required to agree.
pub fn raney(k: u32, r: u32, n: u64) -> Result<ExactInt, MathError> {
    check_arity(k)?;
    check_tuple_size(r)?;
    let (k, r) = (u64::from(k), u64::from(r));
    let first = exact_div(
        &(binomial(k * n + r, n as i64) * r),
        &ExactInt::from(k * n + r),
    );
    let second = exact_div(
        &(binomial(k * n + r - 1, n as i64) * r),
        &ExactInt::from((k - 1) * n + r),
    );
    assert_eq!(first, second, "Raney closed forms disagree at k={k} r={r} n={n}");
    Ok(first)
}

/// Raney number as the r-fold convolution of Fuss-Catalan numbers over `i_1 + ... + i_r = n`.
pub fn raney_convolution(k: u32, r: u32, n: u64) -> Result<ExactInt, MathError> {
    check_arity(k)?;
    check_tuple_size(r)?;
    let base = (0..=n)
        .map(|m| fuss_catalan(k, m))
        .collect::<Result<Vec<_>, _>>()?;
    let power = convolution_power(&base, r as usize, n as usize);
    Ok(power[n as usize].clone())
}

/// Coefficients `0..=len` of the `times`-fold self-convolution of `series`.
///
/// `times = 0` gives the unit series.
pub(crate) fn convolution_power(series: &[ExactInt], times: usize, len: usize) -> Vec<ExactInt> {
    let mut acc = vec![ExactInt::zero(); len + 1];
    acc[0] = ExactInt::one();
    for _ in 0..times {
        let mut next = vec![ExactInt::zero(); len + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in series.iter().enumerate().take(len + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Memoized table of Fuss-Catalan numbers built from the k-fold convolution recurrence.
///
/// `C_0 = 1` and `C_n` is the sum over `j_1 + ... + j_k = n - 1` of `C_{j_1} ... C_{j_k}`.
/// The table grows on demand up to `cap` entries.
#[derive(Clone, Debug)]
pub struct FussCatalanTable {
    k: u32,
    cap: u64,
    values: Vec<ExactInt>,
}

impl FussCatalanTable {
    /// Default largest index a table will extend to.
    pub const DEFAULT_CAP: u64 = 256;

    pub fn new(k: u32) -> Result<Self, MathError> {
        Self::with_cap(k, Self::DEFAULT_CAP)
    }

    pub fn with_cap(k: u32, cap: u64) -> Result<Self, MathError> {
        check_arity(k)?;
        Ok(Self { k, cap, values: vec![ExactInt::one()] })
    }

    pub fn arity(&self) -> u32 {
        self.k
    }

    pub fn get(&mut self, n: u64) -> Result<&ExactInt, MathError> {
        if n > self.cap {
            return Err(MathError::CapExceeded { requested: n, cap: self.cap });
        }
        while (self.values.len() as u64) <= n {
            let m = self.values.len();
            // Coefficient m-1 of the k-th convolution power of C_0..C_{m-1}.
            let power = convolution_power(&self.values, self.k as usize, m - 1);
            self.values.push(power[m - 1].clone());
        }
        Ok(&self.values[n as usize])
    }
}

/// Fuss-Catalan number via the convolution recurrence, with a per-call memo table.
pub fn fuss_catalan_rec(k: u32, n: u64) -> Result<ExactInt, MathError> {
    let mut table = FussCatalanTable::with_cap(k, n.max(FussCatalanTable::DEFAULT_CAP))?;
    table.get(n).cloned()
}

/// Motzkin number `sum_j C(n, 2j) Catalan(j)`.
pub fn motzkin(n: u64) -> ExactInt {
    (0..=n / 2)
        .map(|j| binomial(n, 2 * j as i64) * catalan(j))
        .sum()
}

/// `a / b` as a reduced rational.
pub fn ratio(a: impl Into<ExactInt>, b: impl Into<ExactInt>) -> ExactRat {
    ExactRat::new(a.into(), b.into())
}
