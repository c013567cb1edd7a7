"""Reference optima for cgss_inner: the edge-linearized LP
    max x'y  s.t.  0 <= x <= 1,  z_e >= |x_u - x_v|,  sum w_e z_e <= rho,  sum x <= t
solved directly with HiGHS. Writes tests/unit/cgss_lp_cases.inc."""
import random
from pathlib import Path

import numpy as np
from scipy.optimize import linprog


def random_graph(rng, n, p):
    order = list(range(n))
    rng.shuffle(order)
    edges = {}
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges[tuple(sorted((u, v)))] = rng.choice([1.0, 1.0, 2.0, 0.5])
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < p:
                edges[(u, v)] = rng.choice([1.0, 1.0, 2.0, 0.5])
    return sorted((u, v, w) for (u, v), w in edges.items())


def solve(n, edges, y, t, rho):
    m = len(edges)
    c = np.concatenate([-np.array(y, float), np.zeros(m)])
    rows, rhs = [], []
    for k, (u, v, w) in enumerate(edges):
        for sign in (1, -1):
            r = np.zeros(n + m)
            r[u], r[v], r[n + k] = sign, -sign, -1.0
            rows.append(r)
            rhs.append(0.0)
    r = np.zeros(n + m)
    r[n:] = [w for (_, _, w) in edges]
    rows.append(r)
    rhs.append(rho)
    r = np.zeros(n + m)
    r[:n] = 1.0
    rows.append(r)
    rhs.append(t)
    bounds = [(0, 1)] * n + [(0, None)] * m
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    assert res.status == 0, res.message
    return -res.fun


def main():
    rng = random.Random(20240601)
    out = []
    for case in range(40):
        n = rng.randint(5, 10)
        edges = random_graph(rng, n, 0.25)
        while True:
            y = [1 if rng.random() < 0.4 else 0 for _ in range(n)]
            if 0 < sum(y) < n:
                break
        t = float(rng.randint(1, n))
        rho = round(rng.uniform(0.0, 4.0), 3)
        val = solve(n, edges, y, t, rho)
        e = ", ".join("{%d, %d, %r}" % (u, v, w) for u, v, w in edges)
        ys = ", ".join(str(b) for b in y)
        out.append("    {%d, {%s}, {%s}, %r, %r, %.15g}," % (n, e, ys, t, rho, val))
    path = Path(__file__).resolve().parents[1] / "unit" / "cgss_lp_cases.inc"
    path.write_text("// Generated by tests/oracles/gen_cgss_lp.py; do not edit.\n" + "\n".join(out) + "\n")


if __name__ == "__main__":
    main()
