"""Closed-form summation of C-finite sequences."""
