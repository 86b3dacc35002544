"""Where do two witnesses come close?

Two witnesses share the run of j0 symbols that opens every segment.  Their
distance is smallest when the run begins, since every later step of the run
expands the gap again.  The script prints the distance at the start and at
the end of each run next to the certified bound lambda^-(n-1) * d.
"""

import mpmath

from liyorke import certify, logistic_example, predicted_times, synthesize, validate
from liyorke.scramble import close_bounds

sys = logistic_example()
cert = certify(sys, validate([[1, 1], [1, 1]]), "T42", 2)
a, b = synthesize(cert, sys, 2, 1e-10, ["0", "1"])
oa, ob = a.orbit(sys), b.orbit(sys)
starts, _ = predicted_times(a, b)
ends, _ = predicted_times(a, b, anchor="end")
bounds = close_bounds(cert, a.itinerary, a.depth - a.guard)

print(f"{'run':<4} {'start':>5} {'dist':>12} {'end':>5} {'dist':>12} {'bound':>12}")
for n, (s, e, bound) in enumerate(zip(starts, ends, bounds), start=1):
    print(f"{n:<4} {s:>5} {mpmath.nstr(abs(oa[s] - ob[s]), 5):>12} {e:>5} "
          f"{mpmath.nstr(abs(oa[e] - ob[e]), 5):>12} {float(bound):>12.5g}")
