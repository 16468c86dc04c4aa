//! Benchmark-only package; see the `expand` bench target.
