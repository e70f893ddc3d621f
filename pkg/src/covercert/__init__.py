"""Exact, deterministic certificates for a family of arithmetic group facts:

quaternion algebra ramification, 2-adic splitting and congruence images of unit
groups, intersection indices of commensurable subgroups, dihedral Mobius
invariant fields, and non-discreteness witnesses for real embeddings.
All arithmetic is exact (integers, fractions, residue rings, quadratic fields);
no floating point enters any verdict.
"""

__version__ = "0.1.0"
