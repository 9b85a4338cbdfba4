//! Benchmark-only crate; see benches/distances.rs.
