"""Random-instance generators and brute-force oracles shared by the tests."""

import itertools
import random
from pathlib import Path

from faultloc.slicing import make_graph
from faultloc.spectra import StatementId, make_spectrum

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MIDDLE_SPEC = FIXTURES / "middle.spec"
MIDDLE_DOT = FIXTURES / "middle.dot"
MIDDLE_MANIFEST = FIXTURES / "middle.json"


def sid(line, unit="middle.c"):
    return StatementId(unit, line)


def random_statements(rng: random.Random, max_size=12):
    size = rng.randint(1, max_size)
    units = ["a.c"] if rng.random() < 0.7 else ["a.c", "b.c"]
    pool = [StatementId(u, line) for u in units for line in range(1, 16)]
    return rng.sample(pool, size)


def random_spectrum(rng: random.Random, max_size=12, max_tests=10, need_fail=True):
    statements = random_statements(rng, max_size)
    n_tests = rng.randint(1 if need_fail else 0, max_tests)
    tests = []
    for i in range(n_tests):
        verdict = "FAIL" if rng.random() < 0.35 else "PASS"
        covered = [s for s in statements if rng.random() < 0.5]
        tests.append((f"t{i}", verdict, covered))
    if need_fail and not any(v == "FAIL" for _, v, _ in tests):
        tid, _, covered = tests[0]
        tests[0] = (tid, "FAIL", covered)
    return make_spectrum(statements, tests)


def random_graph(rng: random.Random, nodes, density=None):
    nodes = list(nodes)
    p = rng.uniform(0.05, 0.4) if density is None else density
    edges = []
    for a in nodes:
        for b in nodes:
            if rng.random() < p:
                kind = "data" if a == b else rng.choice(["data", "control"])
                edges.append((a, b, kind))
    return make_graph(nodes, edges)


def floyd_warshall(nodes, edges, allowed=None):
    """All-pairs shortest edge counts, restricted to `allowed` nodes if given."""
    nodes = [n for n in nodes if allowed is None or n in allowed]
    inf = float("inf")
    d = {(a, b): (0 if a == b else inf) for a in nodes for b in nodes}
    for e in edges:
        if (e.src, e.dst) in d and e.src != e.dst:
            d[e.src, e.dst] = min(d[e.src, e.dst], 1)
    for k, i, j in itertools.product(nodes, nodes, nodes):
        if d[i, k] + d[k, j] < d[i, j]:
            d[i, j] = d[i, k] + d[k, j]
    return d


def recount_stats(spectrum, s):
    """(ef, ep, nf, np) from the raw rows, independent of the indexed counts."""
    ef = ep = nf = np_ = 0
    for t in spectrum.tests:
        hit = s in t.covered
        if t.verdict.value == "FAIL":
            ef, nf = ef + hit, nf + (not hit)
        else:
            ep, np_ = ep + hit, np_ + (not hit)
    return ef, ep, nf, np_
