"""Condensed detachment, proof transformation and double-negation elimination
for implication/negation propositional logics."""

__version__ = "0.1.0"
