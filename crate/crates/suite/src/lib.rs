//! Holds the acceptance criteria as the `acceptance` test target.
//!
//! Kept in its own package so that `cargo test --workspace` runs every other
//! test target first; the acceptance binary exits nonzero if any criterion
//! fails, and cargo stops at the first failing target.
