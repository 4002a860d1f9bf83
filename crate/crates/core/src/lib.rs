//! Thue equations `|F(x, y)| = m` and inequalities `|F(x, y)| <= m` for
//! integer binary forms, solved through p-adic congruence lattices.

pub mod arith;
pub mod bounds;
pub mod census;
pub mod error;
pub mod forms;
pub mod enumeration;
pub mod interval;
pub mod lattices;
pub mod padic;

pub use error::{Result, ThueError};
pub use forms::BinaryForm;
