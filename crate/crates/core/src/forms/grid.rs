use num_rational::BigRational;

use crate::error::{Error, Result};

/// Samples `f(base), f(base + 1), ...` of a function on the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    base: i64,
    values: Vec<BigRational>,
}

impl GridFunction {
    pub fn new(base: i64, values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("grid function needs at least one sample".into()));
        }
        Ok(Self { base, values })
    }

    /// Samples `f(t)` for `t` in `base..base + len`.
    pub fn from_fn(base: i64, len: usize, f: impl Fn(i64) -> BigRational) -> Self {
        assert!(len > 0, "grid function needs at least one sample");
        Self { base, values: (0..len as i64).map(|i| f(base + i)).collect() }
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    /// One past the last sampled point.
    pub fn end(&self) -> i64 {
        self.base + self.values.len() as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, t: i64) -> Result<&BigRational> {
        if t < self.base || t >= self.end() {
            return Err(Error::OutOfWindow(t));
        }
        Ok(&self.values[(t - self.base) as usize])
    }

    /// `f(t + k)` as a new grid function.
    pub fn shifted(&self, k: i64) -> Self {
        Self { base: self.base - k, values: self.values.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { base: self.base, values: self.values.iter().map(|v| v * c).collect() }
    }
}
