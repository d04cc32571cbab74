"""Independent reference solutions used by the tests."""

import math

import numpy as np

from circsim import filters as fl


def lti_reference(top, f):
    """Direct single-frequency MNA with ABCD filter stamps and plain resistors."""
    n = top.n_nodes
    nf = len(top.filters)
    a = np.zeros((n + 2 * nf, n + 2 * nf), complex)
    rhs = np.zeros((n + 2 * nf, top.n_ports), complex)
    for node, z in list(zip(top.port_nodes, top.z0_ohm)) + list(top.loads):
        a[node, node] += 1 / z
    for br in top.switches:
        g = 1 / br.switch.ron_ohm
        i, j = br.node_a, br.node_b
        a[i, i] += g
        a[j, j] += g
        a[i, j] -= g
        a[j, i] -= g
    for k, fb in enumerate(top.filters):
        s = fl.evaluate(fb.model, f)
        z0 = fb.model.ref_ohm
        s11, s12, s21, s22 = s[0, 0], s[0, 1], s[1, 0], s[1, 1]
        A = ((1 + s11) * (1 - s22) + s12 * s21) / (2 * s21)
        B = z0 * ((1 + s11) * (1 + s22) - s12 * s21) / (2 * s21)
        C = ((1 - s11) * (1 - s22) - s12 * s21) / (2 * s21 * z0)
        D = ((1 - s11) * (1 + s22) + s12 * s21) / (2 * s21)
        i1, i2 = n + 2 * k, n + 2 * k + 1  # i1 into left port, i2 out of right port
        L, R = fb.node_left, fb.node_right
        a[L, i1] += 1
        a[R, i2] -= 1
        a[i1, L] = 1
        a[i1, R] = -A
        a[i1, i2] = -B
        a[i2, i1] = 1
        a[i2, R] = -C
        a[i2, i2] = -D
    for k, (node, z) in enumerate(zip(top.port_nodes, top.z0_ohm)):
        rhs[node, k] = 2 / math.sqrt(z)
    v = np.linalg.solve(a, rhs)
    s = np.array([v[node] / math.sqrt(z) for node, z in zip(top.port_nodes, top.z0_ohm)])
    return s - np.eye(top.n_ports)
