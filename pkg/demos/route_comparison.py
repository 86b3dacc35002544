"""Which criteria accept which logistic systems?

Each route makes different demands on the derivative: T42 only needs
expansion on the set with the self-loop, C1 needs it everywhere.  This
script sweeps the parameter and prints the verdict of each route.
"""

from fractions import Fraction

from liyorke import certify, logistic_example, validate
from liyorke.certify import ROUTES
from liyorke.errors import CertificationError

A = validate([[1, 1], [1, 1]])
print("r      " + "  ".join(f"{r:<15}" for r in ROUTES))
for tenths in range(40, 61, 2):
    r = Fraction(tenths, 10)
    row = []
    for route in ROUTES:
        try:
            c = certify(logistic_example(r=r), A, route)
            row.append(f"ok lam={c.lam}")
        except CertificationError as exc:
            row.append(type(exc).__name__)
    print(f"{float(r):<6} " + "  ".join(f"{v:<15}" for v in row))
