//! Criterion benchmarks live in `benches/`; run them with `cargo bench -p parafuse-bench`.

/// Levels swept by the matrix benchmarks.
pub const LEVELS: [i64; 3] = [5, 10, 20];
