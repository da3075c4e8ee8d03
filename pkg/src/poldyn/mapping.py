"""Projector-to-bilinear mapping check.

Molecular eigenstate projectors |a><b| map onto ladder-operator bilinears
c_a^dag c_b. The mapping is faithful iff the bilinears reproduce the
projector algebra

    [c_a^dag c_b, c_g^dag c_d] = delta_{bg} c_a^dag c_d - delta_{da} c_g^dag c_b

independent of the exchange statistics chosen for the c operators. This
module builds explicit dense matrix representations for both statistics and
checks all M^4 identities.
"""

from __future__ import annotations

import numpy as np

from .errors import ResourceLimit

COMMUTATOR_TOL = 1e-12

# dense occupation-number spaces grow fast; these caps keep the check cheap
MAX_FERMION_MODES = 8
MAX_BOSON_MODES = 4


def fermion_lowering_operators(n_modes):
    """Jordan-Wigner representation of n_modes fermionic annihilation
    operators on the 2^n_modes occupation basis."""
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    low = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0>
    eye = np.eye(2)
    ops = []
    for k in range(n_modes):
        factors = [sz] * k + [low] + [eye] * (n_modes - k - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def boson_lowering_operators(n_modes, n_max):
    """Truncated bosonic annihilation operators, n_max quanta per mode."""
    d = n_max + 1
    low = np.diag(np.sqrt(np.arange(1, d)), k=1)
    eye = np.eye(d)
    ops = []
    for k in range(n_modes):
        factors = [eye] * k + [low] + [eye] * (n_modes - k - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def _boson_safe_columns(n_modes, n_max, margin=2):
    """Basis states whose per-mode occupation stays clear of the truncation
    edge, so products of two bilinears act on them exactly."""
    d = n_max + 1
    occs = np.indices((d,) * n_modes).reshape(n_modes, -1)
    return np.flatnonzero((occs <= n_max - margin).all(axis=0))


def verify_mapping_commutators(n_modes, statistics="fermion", n_max=4, tol=COMMUTATOR_TOL):
    """Check the projector commutation algebra on explicit matrices.

    statistics: 'fermion' (canonical anticommutators, Jordan-Wigner matrices)
    or 'boson' (canonical commutators on a Fock space truncated at n_max
    quanta per mode; the identity is then checked on the columns unaffected
    by the truncation).

    Returns True iff all n_modes^4 identities hold to tol.
    """
    if n_modes < 2:
        raise ValueError("need at least 2 modes")
    if statistics == "fermion":
        if n_modes > MAX_FERMION_MODES:
            raise ResourceLimit(
                f"fermion check limited to {MAX_FERMION_MODES} modes, got {n_modes}"
            )
        cs = fermion_lowering_operators(n_modes)
        cols = slice(None)
    elif statistics == "boson":
        if n_modes > MAX_BOSON_MODES:
            raise ResourceLimit(
                f"boson check limited to {MAX_BOSON_MODES} modes, got {n_modes}"
            )
        if n_max < 3:
            raise ValueError("boson truncation must keep at least 3 quanta")
        cs = boson_lowering_operators(n_modes, n_max)
        cols = _boson_safe_columns(n_modes, n_max)
    else:
        raise ValueError(f"unknown statistics {statistics!r}")

    bilinear = [[cs[a].T @ cs[b] for b in range(n_modes)] for a in range(n_modes)]
    # ladder matrices are real, so c^dag is just the transpose
    worst = 0.0
    for a in range(n_modes):
        for b in range(n_modes):
            for g in range(n_modes):
                for d in range(n_modes):
                    lhs = bilinear[a][b] @ bilinear[g][d] - bilinear[g][d] @ bilinear[a][b]
                    rhs = np.zeros_like(lhs)
                    if b == g:
                        rhs = rhs + bilinear[a][d]
                    if d == a:
                        rhs = rhs - bilinear[g][b]
                    dev = np.abs((lhs - rhs)[:, cols]).max()
                    if dev > worst:
                        worst = dev
    return bool(worst <= tol)
