"""Compiled inner loops for the explicit integrator.

Plain nested loops over the CSR neighbor rows, always ascending in
particle index and neighbor position, so results are reproducible
bit-for-bit between runs.  The deformation gradient accumulates pairwise
differences (u_j - u_i), which makes the rest state and uniform
translations exact.  Degenerate particles (singular correction or no
neighbors) keep F = I, carry zero stress, and exchange no internal force.
"""
import numpy as np
from numba import njit

OK = 0
INVERTED = 1
NONFINITE = 2


@njit(cache=True)
def compute_forces(
    u,
    v,
    indptr,
    indices,
    gown,
    gnbr,
    gtot,
    degenerate,
    fixed,
    f_ext,
    mass,
    lam,
    mu,
    eta,
    literal_inv,
    F_out,
    S_out,
    P_out,
    a_out,
):
    n = u.shape[0]
    for i in range(n):
        F = np.zeros((3, 3))
        F[0, 0] = 1.0
        F[1, 1] = 1.0
        F[2, 2] = 1.0
        Fd = np.zeros((3, 3))
        if not degenerate[i]:
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                for a in range(3):
                    du = u[j, a] - u[i, a]
                    dv = v[j, a] - v[i, a]
                    for b in range(3):
                        F[a, b] += du * gown[k, b]
                        Fd[a, b] += dv * gown[k, b]

        J = (
            F[0, 0] * (F[1, 1] * F[2, 2] - F[1, 2] * F[2, 1])
            - F[0, 1] * (F[1, 0] * F[2, 2] - F[1, 2] * F[2, 0])
            + F[0, 2] * (F[1, 0] * F[2, 1] - F[1, 1] * F[2, 0])
        )
        if J <= 0.0:
            return INVERTED, i

        # E = (F^T F - I)/2, S = lam tr(E) I + 2 mu E
        E = np.zeros((3, 3))
        for a in range(3):
            for b in range(3):
                s = 0.0
                for c in range(3):
                    s += F[c, a] * F[c, b]
                E[a, b] = 0.5 * s
            E[a, a] -= 0.5
        trE = E[0, 0] + E[1, 1] + E[2, 2]
        S = np.zeros((3, 3))
        for a in range(3):
            for b in range(3):
                S[a, b] = 2.0 * mu * E[a, b]
            S[a, a] += lam * trE

        P = np.zeros((3, 3))
        for a in range(3):
            for b in range(3):
                s = 0.0
                for c in range(3):
                    s += F[a, c] * S[c, b]
                P[a, b] = s

        if eta > 0.0 and not degenerate[i]:
            Finv = np.empty((3, 3))
            Finv[0, 0] = (F[1, 1] * F[2, 2] - F[1, 2] * F[2, 1]) / J
            Finv[0, 1] = (F[0, 2] * F[2, 1] - F[0, 1] * F[2, 2]) / J
            Finv[0, 2] = (F[0, 1] * F[1, 2] - F[0, 2] * F[1, 1]) / J
            Finv[1, 0] = (F[1, 2] * F[2, 0] - F[1, 0] * F[2, 2]) / J
            Finv[1, 1] = (F[0, 0] * F[2, 2] - F[0, 2] * F[2, 0]) / J
            Finv[1, 2] = (F[0, 2] * F[1, 0] - F[0, 0] * F[1, 2]) / J
            Finv[2, 0] = (F[1, 0] * F[2, 1] - F[1, 1] * F[2, 0]) / J
            Finv[2, 1] = (F[0, 1] * F[2, 0] - F[0, 0] * F[2, 1]) / J
            Finv[2, 2] = (F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0]) / J
            # l = Fdot F^-1, d_bar = dev(sym(l))
            l = np.empty((3, 3))
            for a in range(3):
                for b in range(3):
                    s = 0.0
                    for c in range(3):
                        s += Fd[a, c] * Finv[c, b]
                    l[a, b] = s
            d = np.empty((3, 3))
            for a in range(3):
                for b in range(3):
                    d[a, b] = 0.5 * (l[a, b] + l[b, a])
            trd = (d[0, 0] + d[1, 1] + d[2, 2]) / 3.0
            d[0, 0] -= trd
            d[1, 1] -= trd
            d[2, 2] -= trd
            coef = 2.0 * J * eta
            for a in range(3):
                for b in range(3):
                    s = 0.0
                    for c in range(3):
                        if literal_inv:
                            s += d[a, c] * Finv[c, b]
                        else:
                            s += d[a, c] * Finv[b, c]
                    P[a, b] += coef * s

        for a in range(3):
            for b in range(3):
                F_out[i, a, b] = F[a, b]
                S_out[i, a, b] = S[a, b]
                P_out[i, a, b] = P[a, b]

    # internal force assembly and accelerations
    for i in range(n):
        if fixed[i]:
            a_out[i, 0] = 0.0
            a_out[i, 1] = 0.0
            a_out[i, 2] = 0.0
            continue
        fx = 0.0
        fy = 0.0
        fz = 0.0
        if not degenerate[i]:
            for b in range(3):
                fx += P_out[i, 0, b] * gtot[i, b]
                fy += P_out[i, 1, b] * gtot[i, b]
                fz += P_out[i, 2, b] * gtot[i, b]
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                for b in range(3):
                    fx += P_out[j, 0, b] * gnbr[k, b]
                    fy += P_out[j, 1, b] * gnbr[k, b]
                    fz += P_out[j, 2, b] * gnbr[k, b]
        a_out[i, 0] = (fx + f_ext[i, 0]) / mass[i]
        a_out[i, 1] = (fy + f_ext[i, 1]) / mass[i]
        a_out[i, 2] = (fz + f_ext[i, 2]) / mass[i]
    return OK, -1


@njit(cache=True)
def leapfrog_step(
    u,
    v,
    acc,
    dt,
    indptr,
    indices,
    gown,
    gnbr,
    gtot,
    degenerate,
    fixed,
    f_ext,
    mass,
    lam,
    mu,
    eta,
    literal_inv,
    F_out,
    S_out,
    P_out,
):
    n = u.shape[0]
    half = 0.5 * dt
    for i in range(n):
        if fixed[i]:
            for c in range(3):
                u[i, c] = 0.0
                v[i, c] = 0.0
            continue
        for c in range(3):
            vh = v[i, c] + half * acc[i, c]
            v[i, c] = vh
            u[i, c] += dt * vh

    status, bad = compute_forces(
        u, v, indptr, indices, gown, gnbr, gtot, degenerate, fixed, f_ext, mass,
        lam, mu, eta, literal_inv, F_out, S_out, P_out, acc,
    )
    if status != OK:
        return status, bad

    for i in range(n):
        if fixed[i]:
            continue
        for c in range(3):
            v[i, c] += half * acc[i, c]
            if not (np.isfinite(u[i, c]) and np.isfinite(v[i, c])):
                return NONFINITE, i
    return OK, -1
