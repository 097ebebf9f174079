//! Benchmarks for the search kernels live in `benches/`.
