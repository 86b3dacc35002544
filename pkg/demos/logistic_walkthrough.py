"""Walk through the whole pipeline on the time-varying logistic system.

Run with ``python3 demos/logistic_walkthrough.py``.
"""

import mpmath

from liyorke import certify, logistic_example, pairwise_report, summary, synthesize, validate

sys = logistic_example()                 # r_n = 9/2, V_1 = [3/5, 1], V_2 = [0, 1/3]
A = validate([[1, 1], [1, 1]])

cert = certify(sys, A, route="T42", j0=2)
print(f"certified via {cert.route}: lambda = {cert.lam}, delta = {cert.delta}, k0 = {cert.k0}")
for m in cert.margins:
    print(f"  {m.name:<28} margin {m.margin}")

points = synthesize(cert, sys, count=8, tol=1e-10)
print("\nwitnesses (choice bits, value, pull-back depth):")
for p in points:
    print(f"  {p.choice_bits:<6} {mpmath.nstr(p.value, 25):<28} {p.depth}")

# The first two witnesses share a long prefix of choices; watch their distance.
a, b = points[0], points[1]
oa, ob = a.orbit(sys), b.orbit(sys)
print(f"\n|x_n - y_n| for {a.choice_bits} vs {b.choice_bits}:")
for n in range(0, min(a.depth, b.depth) - 10, 6):
    print(f"  n={n:<3} {mpmath.nstr(abs(oa[n] - ob[n]), 6)}")

s = summary(pairwise_report(sys, points, cert=cert))
print(f"\n{s['consistent']} of {s['pairs']} pairs consistent: {s['label']}")
