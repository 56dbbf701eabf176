//! Benchmark-only package; see `benches/measures.rs`.
