use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no sign change on [{lo}, {hi}] (values {f_lo:e}, {f_hi:e})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("consistency check failed: {what} ({lhs} vs {rhs})")]
    Consistency {
        what: &'static str,
        lhs: f64,
        rhs: f64,
    },
    #[error("{0} is not supported on this code path")]
    Unsupported(&'static str),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Accuracy { estimate: f64, tol: f64 },
    #[error("sampler rejected after {attempts} draws: target L^p moment {target} unreachable")]
    Rejected { attempts: usize, target: f64 },
    #[error("step function length {0} is not a power of two")]
    Size(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
