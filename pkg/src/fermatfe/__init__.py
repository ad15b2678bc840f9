"""Fermat-type functional equations: solution families, residual checks and growth."""
