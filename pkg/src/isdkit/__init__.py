"""Syndrome decoding toolkit for random binary linear codes.

Modules: f2la (bit-packed GF(2) linear algebra), instance (problem
generation and serialization), isd_core (depth-2 tree decoder), oracle
(brute-force ground truth), preprocessing (offline/online split), doom
(one-out-of-many decoding), estimator (closed-form bit-security costs),
cli (command-line front end).
"""

__version__ = "0.1.0"
