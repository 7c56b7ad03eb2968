//! Criterion benchmarks for `ctsearch-core` live in `benches/`.
