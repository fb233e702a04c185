"""Loci of triangle centers over Poncelet families.

Construct conic pairs that admit closed triangle families, sweep them,
trace loci of triangle centers and envelopes, classify the resulting
curves, and detect conserved metric quantities.
"""

__version__ = "0.1.0"
