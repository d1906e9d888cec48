//! Criterion benchmarks for jtype-core; see `benches/`.
