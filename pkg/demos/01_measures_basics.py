"""
Entanglement measures on familiar two-qubit states
===================================================

Concurrence, negativity, entanglement of formation and logarithmic
negativity for a handful of states whose values are known by heart:
Bell pairs give 1 across the board, product states give 0, and the
Werner mixture interpolates with weight p.
"""

import numpy as np

from kerrdeco.measures import report
from kerrdeco.states import bell_psi, separable, to_density, werner

print("state                concurrence  negativity     eof  log-negativity")

for label, rho in [
    ("bell psi+", to_density(bell_psi(+1))),
    ("product |01>", to_density(separable(1, 0, 0, 1))),
    ("werner psi p=1.0", werner("psi", +1, 1.0)),
    ("werner psi p=0.8", werner("psi", +1, 0.8)),
    ("werner psi p=0.5", werner("psi", +1, 0.5)),
    ("werner psi p=1/3", werner("psi", +1, 1.0 / 3.0)),
]:
    r = report(rho)
    print(f"{label:<20} {r.concurrence:11.6f} {r.negativity:11.6f} "
          f"{r.eof:7.4f} {r.log_negativity:15.6f}")

# the Werner family is entangled exactly when p > 1/3, value (3p - 1)/2
p = np.linspace(0, 1, 6)
print("\nwerner initial concurrence vs (3p-1)/2, clamped at zero:")
for pi in p:
    r = report(werner("psi", +1, float(pi)))
    print(f"  p = {pi:.1f}: {r.concurrence:.6f}  (formula {max(0.0, (3 * pi - 1) / 2):.6f})")
