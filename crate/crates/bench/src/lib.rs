//! Criterion benchmarks for the seqwit engine; see `benches/`.
