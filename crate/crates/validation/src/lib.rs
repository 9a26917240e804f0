//! End-to-end acceptance suite for `localsum-core`; see `tests/acceptance.rs`.
