use alloc::vec::Vec;
use core::fmt;

use crate::analytic::Violation;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid network configuration: {}", ViolationList(.0))]
    InvalidConfig(Vec<Violation>),
    #[error("network has no stations (m + n must be at least 1)")]
    EmptyNetwork,
    #[error("queue capacity must be at least 1")]
    ZeroCapacity,
    #[error("at least one measured slot is required")]
    NoMeasuredSlots,
    #[error("estimate over zero slots")]
    ZeroTotal,
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
