"""Exact verification toolkit for the q-deformed holomorphic discrete series
of U_q(sl(2,R)) and its classical SL(2,R) counterpart."""

__version__ = "0.1.0"
