"""Reference displacements for the two half-space benchmark sources.

Each rectangle is split into two triangles and evaluated with cutde's
half-space triangular dislocations (pip install cutde). The printed values
are pasted into test_analytic.cpp.
"""
import numpy as np
import cutde.halfspace as hs

NU = 0.25  # lambda = mu


def rectangle(w2):
    strike = np.radians(15.0)
    dip = np.radians(30.0)
    s = np.array([np.sin(strike), np.cos(strike), 0.0])
    left = np.array([-s[1], s[0], 0.0])
    up = np.cos(dip) * left + np.array([0.0, 0.0, np.sin(dip)])
    ref = np.array([0.0, 0.0, -0.5])
    half = 0.5 / np.sqrt(3.0)
    corners = [(-half, -0.5), (half, -0.5), (half, w2), (-half, w2)]
    v = [ref + a * s + b * up for a, b in corners]
    return np.array([[v[0], v[1], v[2]], [v[0], v[2], v[3]]])


OBS = np.array([[0.3, -0.2, 0.0], [-0.5, 0.4, -0.3], [0.2, 0.6, -0.8], [0.0, 0.0, -0.2], [0.7, 0.7, -0.05]])

for name, w2, dip_slip in (("buried", 0.5, 0.1), ("rupturing", 1.0, -0.1)):
    tris = rectangle(w2)
    tris[np.abs(tris) < 1e-15] = 0.0
    slips = np.array([[0.2, dip_slip, 0.0]] * 2)
    u = np.einsum("ijkl,kl->ij", hs.disp_matrix(OBS, tris, NU), slips)
    print(name)
    for x, ux in zip(OBS, u):
        print("  {%.2f, %.2f, %.2f} -> {%.12e, %.12e, %.12e}" % (*x, *ux))
