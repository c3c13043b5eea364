//! Holds the `acceptance` test target (`tests/acceptance.rs`), which checks
//! the workspace end to end. Kept in its own package so that it runs after
//! the unit and integration tests of `qcolor-core` and `qcolor-cli`.
