"""Exact certificates for integral closures of biradical extensions.

Classifies the integral closure of a rank-p^2 double p-th-root extension of
a p-local polynomial base ring, constructs explicit generating sets, free
resolutions and birational maximal Cohen-Macaulay module certificates, and
verifies every claim by exact computation over ZZ[X1..Xn].
"""

__version__ = "0.1.0"
