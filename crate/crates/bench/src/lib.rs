//! Criterion benchmarks for `mukai-core`; see `benches/oracle.rs`.
