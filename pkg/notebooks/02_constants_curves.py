"""
Sharp Khinchin constants for Steinhaus sums
===========================================

``A_p`` and ``B_p`` are the best constants in
``A_p ||S||_2 <= ||S||_p <= B_p ||S||_2``.  For small exponents the
extremal sum has two equal terms, for larger ones it is the Gaussian
limit; the switch happens at ``p*``.  This script tabulates both curves
(the same data ``steinhaus sweep --what constants`` writes as CSV) and the
negative-moment constant ``C_p`` with its factorization
``C_p = kappa_p Psi_p(2)``.
"""

import numpy as np

from steinhaus.constants import c_p, find_pstar, gaussian_norm, kappa_p, khinchin_constants, pair_norm, psi_2

pstar = find_pstar(1e-13)
print(f"p* = {pstar:.12f}")

###############################################################################
# On either side of p* the two candidate norms swap order.

for p in (0.2, pstar, 0.8):
    print(f"p = {p:.4f}: two-term {pair_norm(p):.10f}   Gaussian {gaussian_norm(p):.10f}")

###############################################################################
# The curves on a coarse grid.

print(f"{'p':>6} {'A_p':>12} {'B_p':>12}")
for p in np.round(np.arange(-0.9, 4.01, 0.5), 2):
    k = khinchin_constants(p)
    print(f"{p:6.2f} {k.A_p:12.9f} {k.B_p:12.9f}")

###############################################################################
# Negative moments: C_p = E|(xi_1 + xi_2)/sqrt 2|^{-p}.

p = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
print(np.column_stack([p, c_p(p), kappa_p(p) * psi_2(p)]))
