"""Rational and twisted Cherednik algebras over p-adically valued cyclotomic fields."""

__version__ = "0.1.0"
