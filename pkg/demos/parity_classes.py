"""Which q admit a transfer time at all.

The phases at t = Q**N * pi are integers whose parity must alternate
with the eigenvalue index k.  Writing 1/q = P/Q in lowest terms, the
alternation survives exactly when P and Q are both odd; a factor of 2
on either side freezes the parity and no time works.
"""

from qchain import RationalQ, bracket_integer, classify_q

for num, den in ((3, 1), (3, 5), (1, 2), (4, 3), (5, 8)):
    q = RationalQ(num, den)
    info = classify_q(q)
    print(f"q = {q.as_fraction}: {info.parity_class.value}, transfer possible: {info.pst_possible}")
    print(f"  {info.explanation}")

print()
print("phase integers for q = 3, N = 6:")
q = RationalQ(3, 1)
values = [bracket_integer(q, 6, k) for k in range(7)]
print("  k:      ", "  ".join(f"{k:5d}" for k in range(7)))
print("  bracket:", "  ".join(f"{v:5d}" for v in values))
print("  parity: ", "  ".join(f"{v % 2:5d}" for v in values))

print()
print("phase integers for q = 1/2, N = 6 (parity stuck at 1):")
q = RationalQ(1, 2)
values = [bracket_integer(q, 6, k) for k in range(1, 7)]
print("  k:      ", "  ".join(f"{k:5d}" for k in range(1, 7)))
print("  parity: ", "  ".join(f"{v % 2:5d}" for v in values))
