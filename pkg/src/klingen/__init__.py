"""Klingen-level fixed-vector dimensions for depth-zero supercuspidal
representations of GSp(4) over a p-adic field with residue field F_q.

The package computes dim pi^{Kl(n)} two independent ways — a weighted sum
over an explicit support enumeration, and a closed formula — and insists
they agree.  Supporting oracles (finite-field arithmetic, finite matrix
groups, a Dixon character-table solver, truncated p-adic sampling) let the
stored combinatorial and character data be re-derived from scratch in small
cases.
"""

from __future__ import annotations

__version__ = "0.1.0"
