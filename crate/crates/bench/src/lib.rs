//! Benchmarks for the proof checker; see `benches/`.
