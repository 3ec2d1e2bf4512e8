#!/usr/bin/env python3
# Copyright 2026 The tsteer Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference optima for the temporal steerable-weight SDP.

Builds the canonical assemblages with plain numpy and solves the weight SDP
with cvxpy using two unrelated backends (Clarabel and CVXOPT). The results are
frozen into tests/fixtures/sdp_reference.json and used as oracles for the
in-repo interior-point solver. Nothing here imports the C++ library.

    python3 tools/reference_weight.py > tests/fixtures/sdp_reference.json
"""
import itertools
import json
import math
import sys

import cvxpy as cp
import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {1: SX, 2: SY, 3: SZ}
I2 = np.eye(2, dtype=complex)


def eigenstate(i, a):
    return 0.5 * (I2 + a * PAULI[i])


def depolarize(rho, v):
    return v * rho + (1 - v) * np.trace(rho) * I2 / 2


def strategy_columns(n):
    # Column order as printed in the deterministic-strategy tables:
    # N=2: D1=(+,-) D2=(+,+) D3=(-,-) D4=(-,+)
    # N=3: binary counting with + before -, first basis most significant.
    if n == 2:
        return [(+1, -1), (+1, +1), (-1, -1), (-1, +1)]
    return list(itertools.product([+1, -1], repeat=3))


def assemblage(bases, v):
    return {(i, a): 0.5 * depolarize(eigenstate(i, a), v) for i in bases for a in (+1, -1)}


def solve(asm, bases, solver):
    cols = strategy_columns(len(bases))
    rho = [cp.Variable((2, 2), hermitian=True) for _ in cols]
    cons = [r >> 0 for r in rho]
    for pos, i in enumerate(bases):
        for a in (+1, -1):
            acc = sum(rho[g] for g, col in enumerate(cols) if col[pos] == a)
            cons.append(asm[(i, a)] - acc >> 0)
    prob = cp.Problem(cp.Maximize(cp.real(sum(cp.trace(r) for r in rho))), cons)
    kwargs = {}
    if solver == cp.CLARABEL:
        kwargs = dict(tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11)
    elif solver == cp.CVXOPT:
        kwargs = dict(abstol=1e-9, reltol=1e-9, feastol=1e-9, kktsolver="robust")
    prob.solve(solver=solver, **kwargs)
    return float(prob.value)


def matrix_json(m):
    return [[[float(m[r, c].real), float(m[r, c].imag)] for c in range(2)] for r in range(2)]


CASES = [
    ("identity_n2", [1, 3], 1.0),
    ("identity_n3", [1, 2, 3], 1.0),
    ("depolarizing_0.6_n2", [1, 3], 0.6),
    ("depolarizing_1/sqrt2_n2", [1, 3], 1 / math.sqrt(2)),
    ("depolarizing_0.9_n2", [1, 3], 0.9),
    # Extra points beyond the canonical five.
    ("depolarizing_0.9_n3", [1, 2, 3], 0.9),
    ("depolarizing_2/3_n3", [1, 2, 3], 2.0 / 3.0),
    ("depolarizing_0.72_n2", [1, 3], 0.72),
    ("depolarizing_0.71_n2", [1, 3], 0.71),
]


# Unsteerable assemblages built from an explicit LHS model: 2^N random mixed
# states with Dirichlet weights, combined through the strategy table.
LHS_CASES = [
    ("lhs_random_n2_seed1", [1, 3], 1),
    ("lhs_random_n2_seed2", [1, 3], 2),
    ("lhs_random_n3_seed3", [1, 2, 3], 3),
    ("lhs_random_n3_seed4", [1, 2, 3], 4),
    ("lhs_random_n2_yz_seed5", [2, 3], 5),
]


def random_state(rng):
    g = rng.normal(size=3)
    r = g / np.linalg.norm(g) * rng.uniform() ** (1 / 3)
    return 0.5 * (I2 + r[0] * SX + r[1] * SY + r[2] * SZ)


def lhs_assemblage(bases, seed):
    rng = np.random.default_rng(seed)
    cols = strategy_columns(len(bases))
    w = rng.dirichlet(np.ones(len(cols)))
    states = [w[g] * random_state(rng) for g in range(len(cols))]
    asm = {}
    for pos, i in enumerate(bases):
        for a in (+1, -1):
            asm[(i, a)] = sum(states[g] for g, col in enumerate(cols) if col[pos] == a)
    return asm, states


def fixture(name, bases, asm, extra):
    values = [solve(asm, bases, s) for s in (cp.CLARABEL, cp.CVXOPT)]
    spread = abs(values[0] - values[1])
    if spread > 1e-7:
        sys.exit(f"{name}: backends disagree ({values})")
    p = sum(values) / 2
    out = {"name": name, "N": len(bases), "bases": bases}
    out.update(extra)
    out.update({
        "primal_value": p,
        "w_t": max(0.0, 1 - p),
        "backend_values": values,
        "assemblage": {"N": len(bases), "bases": bases,
                       "members": [{"i": i, "a": a, "matrix": matrix_json(asm[(i, a)])}
                                   for i in bases for a in (+1, -1)]},
    })
    return out


def main():
    out = {"schema_version": 1, "generator": "cvxpy " + cp.__version__, "solvers": ["CLARABEL", "CVXOPT"],
           "fixtures": []}
    for name, bases, v in CASES:
        out["fixtures"].append(fixture(name, bases, assemblage(bases, v), {"family": "depolarizing", "visibility": v}))
    for name, bases, seed in LHS_CASES:
        asm, states = lhs_assemblage(bases, seed)
        out["fixtures"].append(fixture(name, bases, asm, {"family": "lhs", "seed": seed,
                                                          "lhs_states": [matrix_json(m) for m in states]}))
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
