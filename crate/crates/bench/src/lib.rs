//! Criterion benchmarks for the integrators live under `benches/`; run them with
//! `cargo bench -p pathlight-bench`.
