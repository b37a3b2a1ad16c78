"""Volume growth conditions on flat and hyperbolic space.

On R^5 the quantity I(R)/R^3 is constant, so the growth condition holds
with sigma = 3. On hyperbolic space I(R) grows exponentially and no
positive sigma works.
"""
from fharmonic import audit, manifold

v = audit.check_f2(manifold.euclidean(5), None, 3.0)
print("R^5, sigma = 3:", v.status, "C =", v.value)

for s in (0.5, 1.0, 4.0):
    v = audit.check_f2(manifold.hyperbolic(3), None, s)
    print(f"H^3, sigma = {s}:", v.status, v.details.get("note", ""))
