from __future__ import annotations

import os
import random
import subprocess
import sys
from array import array

import pytest

from mptcheck import kernels
from mptcheck.kernels import _pykernels

try:
    from mptcheck.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None

compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_graph(rng, n, density=0.15):
    rows = [sorted({rng.randrange(n) for _ in range(rng.randint(0, max(1, int(density * n))))})
            for _ in range(n)]
    offsets = array("i", [0])
    targets = array("i")
    for r in rows:
        targets.extend(r)
        offsets.append(len(targets))
    return offsets, targets


def scc_reference(n, offsets, targets):
    """Strongly connected classes as mutual reachability, by brute force."""
    reach = []
    for s in range(n):
        seen, todo = {s}, [s]
        while todo:
            v = todo.pop()
            for w in targets[offsets[v]:offsets[v + 1]]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        reach.append(seen)
    return [{t for t in reach[s] if s in reach[t]} for s in range(n)]


@pytest.mark.parametrize("seed", range(5))
def test_scc_matches_mutual_reachability(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 40)
    off, tgt = random_graph(rng, n)
    comp = _pykernels.scc(n, off, tgt)
    ref = scc_reference(n, off, tgt)
    for s in range(n):
        assert {t for t in range(n) if comp[t] == comp[s]} == ref[s]


@pytest.mark.parametrize("seed", range(5))
def test_lasso_search_finds_an_accepting_cycle(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(1, 30)
    off, tgt = random_graph(rng, n)
    init = array("i", [0])
    acc = bytes(rng.random() < 0.2 for _ in range(n))
    found = _pykernels.lasso_search(n, off, tgt, init, acc)
    ref = scc_reference(n, off, tgt)
    seen, todo = {0}, [0]
    while todo:
        v = todo.pop()
        for w in tgt[off[v]:off[v + 1]]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    exists = any(acc[q] and (len(ref[q]) > 1 or q in tgt[off[q]:off[q + 1]]) for q in seen)
    assert (found is not None) == exists
    if found is not None:
        stem, loop = found
        assert stem[0] == 0 and acc[stem[-1]]
        path = stem + loop[1:] + [stem[-1]]
        for a, b in zip(path, path[1:]):
            assert b in tgt[off[a]:off[a + 1]]


@compiled
@pytest.mark.parametrize("seed", range(10))
def test_compiled_and_python_kernels_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 60)
    off, tgt = random_graph(rng, n)
    assert _ckernels.scc(n, off, tgt) == _pykernels.scc(n, off, tgt)
    init = array("i", sorted({rng.randrange(n) for _ in range(2)}))
    acc = bytes(rng.random() < 0.2 for _ in range(n))
    assert _ckernels.lasso_search(n, off, tgt, init, acc) == \
        _pykernels.lasso_search(n, off, tgt, init, acc)
    classes = rng.randint(1, 3)
    rows = [random_graph(rng, n)[1][:3] for _ in range(n * classes)]
    coff = array("i", [0])
    ctgt = array("i")
    for r in rows:
        ctgt.extend(r)
        coff.append(len(ctgt))
    assert bytes(_ckernels.direct_simulation(n, acc, classes, coff, ctgt)) == \
        bytes(_pykernels.direct_simulation(n, acc, classes, coff, ctgt))


@pytest.mark.parametrize("impl", [_pykernels, _ckernels], ids=["python", "compiled"])
def test_empty_graph(impl):
    if impl is None:
        pytest.skip("compiled kernels not built")
    empty = array("i", [0])
    assert impl.scc(0, empty, array("i")) == []
    assert impl.lasso_search(0, empty, array("i"), array("i"), b"") is None


def test_environment_variable_forces_the_fallback():
    env = dict(os.environ, MPTCHECK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "from mptcheck import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, timeout=60)
    assert out.stdout.strip() == "python"


def test_backend_is_reported():
    assert kernels.BACKEND in ("python", "compiled")
    if _ckernels is not None and os.environ.get("MPTCHECK_PURE_PYTHON") is None:
        assert kernels.BACKEND == "compiled"
