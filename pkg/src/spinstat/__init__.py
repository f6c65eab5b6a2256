"""Computable checks for the spin-statistics connection of nonrelativistic
anyons, bosons and fermions in two and three dimensions."""

__version__ = "0.1.0"
