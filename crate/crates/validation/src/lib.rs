//! Test-only package; the acceptance criteria live in tests/acceptance.rs.
