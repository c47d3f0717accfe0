"""Binary classification metrics."""
