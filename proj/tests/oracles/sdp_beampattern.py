# SPDX-License-Identifier: Apache-2.0
"""Semidefinite oracle for radar-only beampattern matching.

Solves, over the covariance R = P P^H,

    min_{R >= 0, alpha}  sum_m (alpha t_m - a_m^H R a_m)^2   s.t.  diag(R) = P_t / N_t

(joint scale fit) and the same problem with alpha frozen at the optimum.
The covariance relaxation is exact for an N_t-column precoder, so its value
is the global optimum a local method can be compared against. Writes
sdp_beampattern.json next to this script.
"""

import json
import pathlib

import cvxpy as cp
import numpy as np

N_TX = 8
SPACING = 0.5
P_T = 100.0
GRID = np.arange(-90.0, 91.0, 1.0)
TARGETS = [(-6.0, 6.0), (-56.0, -44.0), (44.0, 56.0)]


def steering(theta_deg):
    i = np.arange(N_TX)
    return np.exp(1j * 2 * np.pi * SPACING * i * np.sin(np.deg2rad(theta_deg)))


def template():
    t = np.zeros(GRID.size)
    for lo, hi in TARGETS:
        t[(GRID >= lo - 1e-9) & (GRID <= hi + 1e-9)] = 1.0
    return t


def solve(t, alpha=None):
    A = np.stack([steering(th) for th in GRID], axis=1)
    R = cp.Variable((N_TX, N_TX), hermitian=True)
    pattern = cp.real(cp.sum(cp.multiply(A.conj(), R @ A), axis=0))
    a = cp.Variable() if alpha is None else alpha
    # Scaled by 1/P_t so the solver sees O(1) numbers.
    residual = (a * t - pattern) / P_T
    prob = cp.Problem(cp.Minimize(cp.sum_squares(residual)),
                      [R >> 0, cp.real(cp.diag(R)) == P_T / N_TX])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    Rv = R.value
    b = np.real(np.einsum("im,ij,jm->m", A.conj(), Rv, A))
    av = float(a.value) if alpha is None else float(alpha)
    mse = float(np.sum((av * t - b) ** 2))
    return av, mse, b


def main():
    t = template()
    alpha, mse_joint, b = solve(t)
    _, mse_fixed, _ = solve(t, alpha)
    inband = t > 0
    out = {
        "n_tx": N_TX,
        "power_budget": P_T,
        "targets": TARGETS,
        "alpha": alpha,
        "mse_joint": mse_joint,
        "rmse_joint": float(np.sqrt(mse_joint)),
        "mse_fixed_template": mse_fixed,
        "rmse_fixed_template": float(np.sqrt(mse_fixed)),
        "inband_mean": float(b[inband].mean()),
        "inband_max": float(b[inband].max()),
    }
    path = pathlib.Path(__file__).with_name("sdp_beampattern.json")
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
