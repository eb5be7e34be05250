"""Sweep the other families: close to transfer, never reaching it.

Only the q-Krawtchouk family admits a parameter where the endpoint
magnitude hits 1.  Sweeping the affine parameter and the dual
q-Krawtchouk parameter shows the magnitudes saturating strictly
below 1 for N >= 2.
"""

from fractions import Fraction

from qchain import RationalQ, families, transfer_report

q3 = RationalQ(3, 1)
q13 = RationalQ(1, 3)
N = 3

print("affine-q-krawtchouk, q=3, N=3, p in (0, q**-N):")
top = Fraction(3) ** -N
best = 0.0
for k in range(1, 20):
    p = top * Fraction(k, 20)
    magnitude = transfer_report(families.affine_q_krawtchouk(N, q3, p)).endpoint_magnitude
    best = max(best, magnitude)
    if k % 4 == 0:
        print(f"  p = {str(p):>8s}  |f_N0(T)| = {magnitude:.9f}")
print(f"  max over sweep: {best:.9f}")

print("dual-q-krawtchouk, q=1/3, N=3, c in (-30, 0):")
best = 0.0
for k in range(1, 20):
    c = Fraction(-3 * k, 2)
    magnitude = transfer_report(families.dual_q_krawtchouk(N, q13, c)).endpoint_magnitude
    best = max(best, magnitude)
    if k % 4 == 0:
        print(f"  c = {str(c):>8s}  |f_N0(T)| = {magnitude:.9f}")
print(f"  max over sweep: {best:.9f}")

print("q-krawtchouk for contrast, q=3/5, N=3, at p = q**-N:")
report = transfer_report(families.pst_spec(RationalQ(3, 5), N))
print(f"  |f_N0(T)| = {report.endpoint_magnitude:.15f}  verdict: {report.verdict.value}")
