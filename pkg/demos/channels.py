"""Single-qubit channels: affine form, tetrahedron test and Choi check."""
import numpy as np

from geoqubit.channels import (
    AffineMap1Q,
    KrausChannel,
    affine_form,
    amplitude_damping,
    check_normal,
    check_unital,
    check_unital_quaternion,
    cp_check_choi,
    diagonalize_channel,
    phase_damping,
    tetrahedron_check,
)
from geoqubit.gates import rotation

for p in (0.0, 0.3, 1.0):
    ch = phase_damping(p)
    lam = np.diag(affine_form(ch).S)
    print(f"phase damping p={p}: lambda={lam}, inside={tetrahedron_check(lam).inside}")

ad = amplitude_damping(0.4)
print("amplitude damping: normal", check_normal(ad), "unital", check_unital(ad),
      "(quaternion route:", check_unital_quaternion(ad), ") t =", affine_form(ad).t + 0.0)

# a random mixture of two rotations, brought to diagonal form
ops = (np.sqrt(0.7) * rotation(1, [1 / 3, 2 / 3, 2 / 3], 0.8), np.sqrt(0.3) * rotation(1, "y", 2.1))
mix = KrausChannel(1, ops)
_, lam = diagonalize_channel(mix)
r = tetrahedron_check(lam)
print("mixture of rotations: lambda", np.round(lam, 6), "barycentric", np.round(r.barycentric, 6))

# the transpose keeps the Bloch ball but is not completely positive
for lam in ([1, -1, 1], [1, 1, -1], [0.5, 0.5, 0.5]):
    ok, m = cp_check_choi(AffineMap1Q.diagonal(lam))
    print(f"lambda={lam}: tetrahedron {tetrahedron_check(lam).inside}, Choi min eig {m:+.3f}, CP {ok}")
