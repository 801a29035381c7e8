//! Criterion benchmarks for clonelab; see `benches/`.
