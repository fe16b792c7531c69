use crate::error::{Error, Result};

/// Size caps for the enumerations and dense operators in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which all of `S_n` is enumerated.
    pub max_n: usize,
    /// Largest `n` for which a constraint system is assembled.
    pub max_system_n: usize,
    /// Largest Hilbert-space dimension `d^n` for dense operators.
    pub max_dim: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits { max_n: 8, max_system_n: 7, max_dim: 4096 };

    pub fn with_max_dim(self, max_dim: usize) -> Self {
        Limits { max_dim, ..self }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if n > self.max_n {
            return Err(Error::size(format!("n = {n} exceeds maximum {}", self.max_n)));
        }
        Ok(())
    }

    pub(crate) fn check_system_n(&self, n: usize) -> Result<()> {
        self.check_n(n)?;
        if n > self.max_system_n {
            return Err(Error::size(format!("constraint system for n = {n} exceeds maximum {}", self.max_system_n)));
        }
        Ok(())
    }

    /// Returns `d^n` if it is within `max_dim`.
    pub(crate) fn check_dim(&self, d: usize, n: usize) -> Result<usize> {
        if d == 0 || n == 0 {
            return Err(Error::invalid("d and n must be at least 1"));
        }
        let dim = checked_pow(d, n).filter(|&dim| dim <= self.max_dim);
        dim.ok_or_else(|| Error::size(format!("dimension {d}^{n} exceeds maximum {}", self.max_dim)))
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}
