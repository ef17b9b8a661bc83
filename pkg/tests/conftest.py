import itertools
import math

import numpy as np
import pytest

from mohb.benchio import BenchmarkTable, ConfigRow


def brute_dominates(a, b):
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def brute_front(points):
    return {i for i, p in enumerate(points) if not any(brute_dominates(q, p) for q in points)}


def brute_fronts(points):
    """Front label per point by repeated O(n^2) peeling."""
    left = set(range(len(points)))
    labels = [None] * len(points)
    level = 0
    while left:
        front = {i for i in left if not any(brute_dominates(points[j], points[i]) for j in left)}
        for i in front:
            labels[i] = level
        left -= front
        level += 1
    return labels


def brute_farthest_point(points):
    """Farthest-point order in z-scored space, written with plain loops."""
    n, m = len(points), len(points[0])
    cols = []
    for k in range(m):
        col = [p[k] for p in points]
        mu = sum(col) / n
        sd = math.sqrt(sum((c - mu) ** 2 for c in col) / n)
        cols.append([(c - mu) / sd if sd > 0 else 0.0 for c in col])
    z = [tuple(cols[k][i] for k in range(m)) for i in range(n)]
    first = min(range(n), key=lambda i: (points[i][0], i))
    order = [first]
    while len(order) < n:
        best, best_d = None, -1.0
        for i in range(n):
            if i in order:
                continue
            d = min(math.dist(z[i], z[j]) for j in order)
            if d > best_d:
                best, best_d = i, d
        order.append(best)
    return order, z


def make_table(cells, names=("error", "runtime_s"), fidelities=None, name="t"):
    cells = np.asarray(cells, dtype=float)
    n, nf, _ = cells.shape
    return BenchmarkTable(
        name,
        tuple(names),
        tuple(ConfigRow.make({"x0": i}) for i in range(n)),
        tuple(fidelities or range(1, nf + 1)),
        cells,
    )


@pytest.fixture
def small_table():
    # 2 configs x 2 fidelities x 2 objectives
    return make_table([[[0.5, 10.0], [0.4, 20.0]], [[0.6, 5.0], [0.3, 10.0]]])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
