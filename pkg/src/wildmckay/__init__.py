"""Exact toolkit for stringy motives, wild McKay integrals and disk covers."""
