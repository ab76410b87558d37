//! Verification sweeps (placeholder).
