//! Shift-invariant operators represented by their indicator series, and
//! validated systems of delta operators.

mod indicator;
mod op;
pub mod presets;
mod system;

pub use indicator::{Indicator, OrderBound};
pub use op::{ShiftInvariantOp, DEFAULT_PROBE_ORDER};
pub use presets::{make_preset, make_system, CustomL, ExplicitSeries, OperatorSpec};
pub use system::{validate_system, DeltaSystem, SeparableSystem, Strictness};
