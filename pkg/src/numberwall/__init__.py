"""Number walls over prime fields, continued fractions of Laurent series and escape of mass."""

__version__ = "0.1.0"
