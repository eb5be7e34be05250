"""Closed-form endpoint amplitudes against the direct spectral sum.

Each family's |f_rs(T)| collapses to a hypergeometric double sum; this
walks the five series families through hand-checkable points and
reports the residual against the brute-force sum over the spectrum.
"""

import math
from fractions import Fraction

from qchain import RationalQ, closedform

q3 = RationalQ(3, 1)
q13 = RationalQ(1, 3)

print("affine, N=1, pq = 1/2 (the two-site maximum):")
got = closedform.f_T_affine(Fraction(1, 6), q3, 1, 1, 0)
print(f"  value = {got.value:.15f}  residual = {got.residual_vs_direct:.2e}")

print("quantum, N=1, q=3, p=1 (2*sqrt(2)/3):")
got = closedform.f_T_quantum(Fraction(1), q3, 1, 1, 0)
print(f"  value = {got.value:.15f}  vs {2 * math.sqrt(2) / 3:.15f}")

print("dual q-Krawtchouk, N=1, c=-4 (2*sqrt(-c)/(1-c) = 4/5):")
got = closedform.f_T_dual_qk(Fraction(-4), q13, 1, 1, 0)
print(f"  value = {got.value:.15f}")

print("q-Racah, N=1, (alpha, beta, gamma) = (1, 2, 4), q=1/3:")
got = closedform.f_T_qracah(Fraction(1), Fraction(2), Fraction(4), q13, 1, 1, 0)
print(f"  value = {got.value:.15f}  |target| = {2 * math.sqrt(10) / 7:.15f}")

print("q-Hahn, N=1, (alpha, beta) = (1, 2), q=1/3:")
value = closedform.f_T_qhahn_N0(Fraction(1), Fraction(2), q13, 1)
print(f"  value = {value:.15f}  vs {2 * math.sqrt(6) / 7:.15f}")

print("interior entry, q-Krawtchouk N=3 at the transfer point:")
p = Fraction(125, 27)
for r, s in ((2, 1), (3, 0), (1, 1)):
    got = closedform.f_T_qkrawtchouk(p, RationalQ(3, 5), 3, r, s)
    print(
        f"  f_{r}{s} = {got.value:+.15f}  [{got.method.value}]"
        f"  residual = {got.residual_vs_direct:.2e}"
    )
