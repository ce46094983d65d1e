"""HTTP service exposing the pass-feasibility toolkit."""
