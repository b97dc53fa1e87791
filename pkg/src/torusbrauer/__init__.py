"""Exact computation of transcendental Brauer groups of quasi-trivial tori
and second-page twisting differentials for split extensions Z^r x| pi."""

__version__ = "0.1.0"
