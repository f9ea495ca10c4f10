"""Net transmissions of the binary-division delay network and the router tree.

Shows the bit-pattern structure of the per-window transmissions (each set bit
of the required delay costs one reflection), the binomially distributed arm
transmissions of the spatial tree, and the assembled matrix.
"""

import numpy as np

from photonmux import (
    LossParameters,
    MultiplexerLayout,
    build_matrix,
    spatial_arm_transmissions,
    time_window_transmission,
)

params = LossParameters(v_r=0.996, v_t=0.97, v_p=0.95, v_p0_s=0.99, v_d=0.9, v_b=1.0)
N = 8

print(f"time-multiplexer window transmissions, N = {N}:")
print("  n  delay  bits   V_n")
for n in range(1, N + 1):
    delay = N - n
    print(f"  {n}  {delay:5d}  {delay:03b}   {time_window_transmission(params, n, N):.6f}")
print("  (reflections beat transmissions here, so long delays with many set")
print("   bits keep more light than the straight-through path)")

M = 8
arms = spatial_arm_transmissions(params, M)
print(f"\nspatial-arm transmissions, M = {M} (descending priority order):")
print("  " + "  ".join(f"{a:.6f}" for a in arms))

layout = MultiplexerLayout(4, 4)
tm = build_matrix(params, layout)
print(f"\nassembled 4x4 transmission matrix (rows = arm rank, columns = window):")
for row in tm.values:
    print("  " + "  ".join(f"{v:.6f}" for v in row))
print(f"arm relabeling from canonical enumeration: {tm.arm_order}")
print(f"entry range: [{tm.values.min():.6f}, {tm.values.max():.6f}]")

lossless = LossParameters(v_r=1, v_t=1, v_p=1, v_p0_s=1, v_d=1, v_b=1)
print(f"\nlossless system: all entries equal "
      f"{np.unique(build_matrix(lossless, layout).values)}")
