"""Gender-bias audit pipeline for occupation classification over biographies."""

__version__ = "0.1.0"
