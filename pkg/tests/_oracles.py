"""Independent reference solvers used to cross-check the library's numerics.

Everything in this module is deliberately naive: straightforward iterative
schemes and brute-force enumeration whose correctness is easy to audit by
hand.  They share no code with the package internals, so agreement between
the two is meaningful evidence rather than a tautology.
"""

import itertools

import numpy as np


def box_qp_projected_gradient(Q, upper_bound, stationarity_tol=1e-10,
                              max_iterations=2_000_000):
    """Minimize ``0.5*a'Qa - sum(a)`` over the box ``[0, upper_bound]^n``.

    Plain projected gradient descent with the constant step ``1/lambda_max``,
    run until the projected-gradient stationarity residual

        || a - clip(a - (Qa - 1), 0, c) ||_inf

    drops below ``stationarity_tol``.  Slow but unimpeachable for the small
    positive-definite problems used in tests.
    """
    Q = np.asarray(Q, dtype=np.float64)
    n = Q.shape[0]
    step = 1.0 / float(np.linalg.eigvalsh(Q)[-1])
    alpha = np.zeros(n)
    for _ in range(max_iterations):
        gradient = Q @ alpha - 1.0
        projected = np.clip(alpha - step * gradient, 0.0, upper_bound)
        if np.max(np.abs(alpha - np.clip(alpha - gradient, 0.0, upper_bound))) \
                <= stationarity_tol:
            break
        alpha = projected
    else:
        raise RuntimeError("projected gradient did not reach stationarity")
    return alpha


def box_qp_objective(Q, alpha):
    """Objective value ``0.5*a'Qa - sum(a)`` of the box QP."""
    alpha = np.asarray(alpha, dtype=np.float64)
    return 0.5 * float(alpha @ (np.asarray(Q) @ alpha)) - float(alpha.sum())


def quadratic_conjugate_gradient(hessian, linear, rel_tol=1e-14,
                                 max_restarts=50):
    """Minimize ``0.5*z'Hz + b'z`` by textbook conjugate gradient iterations.

    Equivalent to solving ``Hz = -b`` but implemented as the classic CG
    recurrence (residual, direction, exact step) with periodic restarts, so
    it stays an independent iterative minimizer rather than a call into a
    factorization routine.  Stops when ``||Hz + b||_inf`` falls below
    ``rel_tol * max(1, ||b||_inf)``.
    """
    hessian = np.asarray(hessian, dtype=np.float64)
    linear = np.asarray(linear, dtype=np.float64)
    n = hessian.shape[0]
    target = rel_tol * max(1.0, np.max(np.abs(linear)))
    z = np.zeros(n)
    for _ in range(max_restarts):
        residual = -(hessian @ z + linear)
        if np.max(np.abs(residual)) <= target:
            return z
        direction = residual.copy()
        rho = float(residual @ residual)
        for _ in range(n):
            hd = hessian @ direction
            step = rho / float(direction @ hd)
            z = z + step * direction
            residual = residual - step * hd
            if np.max(np.abs(residual)) <= target:
                return z
            rho_next = float(residual @ residual)
            direction = residual + (rho_next / rho) * direction
            rho = rho_next
    if np.max(np.abs(hessian @ z + linear)) <= 1e3 * target:
        return z
    raise RuntimeError("conjugate gradient did not converge")


def least_squares_plane(own, other, penalty, ridge, sign):
    """Reference minimizer of one regularized least-squares plane problem.

    Plane fit for the class whose augmented rows are ``own``:

        min_z 0.5*||own @ z||^2 + (penalty/2)*||other @ z + sign||^2
              + (penalty*ridge/2)*||z||^2

    solved by :func:`quadratic_conjugate_gradient` on the gradient system.
    ``sign`` is +1 when the opposing planes should sit at signed distance -1
    (first plane) and -1 for the mirrored problem.
    """
    own = np.asarray(own, dtype=np.float64)
    other = np.asarray(other, dtype=np.float64)
    dim = own.shape[1]
    hessian = own.T @ own + penalty * (other.T @ other) \
        + penalty * ridge * np.eye(dim)
    linear = penalty * sign * other.sum(axis=0)
    return quadratic_conjugate_gradient(hessian, linear)


def margin_plane_active_set(own, other, penalty, ridge):
    """Solve one margin-based plane primal by brute-force active sets.

    Variables are ``v = (z, xi)`` with ``z = (w, b)`` acting on the augmented
    rows.  The problem is

        min 0.5*||own @ z||^2 + (ridge/2)*||z||^2 + penalty * sum(xi)
        s.t.  -(other @ z) + xi >= 1,   xi >= 0

    Every subset of the ``2 * n_other`` inequality constraints is tried as the
    active set; each candidate solves the equality-constrained KKT system and
    is kept only if primal feasible with nonnegative multipliers.  Exponential,
    so only usable for a handful of opposing samples, but exact.
    """
    own = np.asarray(own, dtype=np.float64)
    other = np.asarray(other, dtype=np.float64)
    dim = own.shape[1]
    n_other = other.shape[0]
    size = dim + n_other

    quad = np.zeros((size, size))
    quad[:dim, :dim] = own.T @ own + ridge * np.eye(dim)
    lin = np.zeros(size)
    lin[dim:] = penalty

    constraints = np.zeros((2 * n_other, size))
    bounds = np.zeros(2 * n_other)
    for i in range(n_other):
        constraints[i, :dim] = -other[i]
        constraints[i, dim + i] = 1.0
        bounds[i] = 1.0
        constraints[n_other + i, dim + i] = 1.0

    best = None
    best_value = np.inf
    for active in itertools.chain.from_iterable(
            itertools.combinations(range(2 * n_other), r)
            for r in range(2 * n_other + 1)):
        rows = constraints[list(active)]
        k = len(active)
        kkt = np.zeros((size + k, size + k))
        kkt[:size, :size] = quad
        # multiplier block carries a minus sign so the recovered multipliers
        # are the Lagrange multipliers of `f(v) - lambda'(Cv - d)` directly
        kkt[:size, size:] = -rows.T
        kkt[size:, :size] = rows
        rhs = np.concatenate([-lin, bounds[list(active)]])
        solution, residual, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        if np.max(np.abs(kkt @ solution - rhs)) > 1e-8:
            continue
        v, multipliers = solution[:size], solution[size:]
        if np.min(constraints @ v - bounds) < -1e-9:
            continue
        if k and np.min(multipliers) < -1e-9:
            continue
        value = 0.5 * float(v @ (quad @ v)) + float(lin @ v)
        if value < best_value - 1e-12:
            best_value = value
            best = v[:dim]
    if best is None:
        raise RuntimeError("no feasible active set found")
    return best, best_value


def margin_primal_objective(own, other, penalty, ridge, z):
    """Primal objective of the margin-based plane problem at ``z``."""
    own = np.asarray(own, dtype=np.float64)
    other = np.asarray(other, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    slack = np.maximum(0.0, 1.0 + other @ z)
    return 0.5 * float(np.sum((own @ z) ** 2)) \
        + 0.5 * ridge * float(z @ z) + penalty * float(slack.sum())
