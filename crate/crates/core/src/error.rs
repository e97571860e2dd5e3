use thiserror::Error;

/// A computation was asked to exceed its configured size bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: size {actual} exceeds the configured bound {bound}")]
pub struct BoundExceeded {
    pub what: &'static str,
    pub actual: usize,
    pub bound: usize,
}

impl BoundExceeded {
    pub(crate) fn check(what: &'static str, actual: usize, bound: usize) -> Result<(), Self> {
        if actual > bound {
            Err(BoundExceeded { what, actual, bound })
        } else {
            Ok(())
        }
    }
}
