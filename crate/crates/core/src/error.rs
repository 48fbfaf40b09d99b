use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expression `{field}`: {source}")]
    Expr {
        field: &'static str,
        #[source]
        source: ExprError,
    },
    #[error("torsal ruling: |delta| = {delta:e} at u = {u}")]
    Torsal { u: f64, delta: f64 },
    #[error("invalid frame at u = {u}: {reason}")]
    InvalidFrame { u: f64, reason: String },
    #[error("{0}")]
    InvalidInput(String),
    #[error("parameter u = {u} is outside the integrated range [{lo}, {hi}]")]
    OutOfRange { u: f64, lo: f64, hi: f64 },
    #[error("support function vanishes at (u, v) = ({u}, {v})")]
    ZeroSupport { u: f64, v: f64 },
    #[error("conical curvature vanishes at u = {u}; the image surface requires a non-conoidal surface")]
    Conoidal { u: f64 },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("independent checks disagree: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait ExprContext<T> {
    fn field(self, name: &'static str) -> Result<T>;
}

impl<T> ExprContext<T> for std::result::Result<T, ExprError> {
    fn field(self, name: &'static str) -> Result<T> {
        self.map_err(|source| Error::Expr { field: name, source })
    }
}
