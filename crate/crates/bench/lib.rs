//! Criterion benchmarks for rankforge-core live under `benches/`.
