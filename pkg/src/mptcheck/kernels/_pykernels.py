"""Pure-Python graph kernels.

Graphs arrive in compressed sparse row form: the successors of node ``v`` are
``targets[offsets[v]:offsets[v + 1]]``.  The compiled module mirrors these
functions exactly (same results, same search order).
"""

from __future__ import annotations

from collections import deque


def scc(n, offsets, targets):
    """Tarjan's algorithm, iterative.  Returns the component id of every node;
    ids are assigned in completion order (sinks first)."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, offsets[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            end = offsets[v + 1]
            if i < end:
                work[-1] = (v, i + 1)
                w = targets[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, offsets[w]))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def _nontrivial(n, offsets, targets, comp):
    size = {}
    for v in range(n):
        size[comp[v]] = size.get(comp[v], 0) + 1
    out = [False] * n
    for v in range(n):
        if size[comp[v]] > 1:
            out[v] = True
        else:
            for i in range(offsets[v], offsets[v + 1]):
                if targets[i] == v:
                    out[v] = True
                    break
    return out


def lasso_search(n, offsets, targets, initial, accepting):
    """Find an accepting lasso: a path from an initial node to an accepting node
    lying on a cycle, and that cycle.

    Returns ``(stem, loop)`` as node lists, ``stem`` ending in the accepting
    node ``p`` and ``loop`` starting at ``p`` (the edge from ``loop[-1]`` back
    to ``p`` closes it), or ``None`` when no accepting lasso exists.
    Breadth-first search in index order makes the result deterministic.
    """
    if n == 0:
        return None
    comp = scc(n, offsets, targets)
    cyclic = _nontrivial(n, offsets, targets, comp)
    parent = [-2] * n
    queue = deque()
    for q in initial:
        if parent[q] == -2:
            parent[q] = -1
            queue.append(q)
    found = -1
    while queue:
        v = queue.popleft()
        if accepting[v] and cyclic[v]:
            found = v
            break
        for i in range(offsets[v], offsets[v + 1]):
            w = targets[i]
            if parent[w] == -2:
                parent[w] = v
                queue.append(w)
    if found < 0:
        return None
    stem = []
    v = found
    while v != -1:
        stem.append(v)
        v = parent[v]
    stem.reverse()
    # shortest cycle through `found` inside its component
    c = comp[found]
    back = {found: -1}
    queue = deque([found])
    last = -1
    while queue and last < 0:
        v = queue.popleft()
        for i in range(offsets[v], offsets[v + 1]):
            w = targets[i]
            if w == found:
                last = v
                break
            if comp[w] == c and w not in back:
                back[w] = v
                queue.append(w)
    loop = []
    v = last
    while v != -1:
        loop.append(v)
        v = back[v]
    loop.reverse()
    return stem, loop


def direct_simulation(n, accepting, nclasses, offsets, targets):
    """Greatest direct simulation.  Successors of state ``q`` on letter class
    ``c`` sit at ``offsets[q * nclasses + c]``.  Returns a flat ``n * n``
    bytearray where ``sim[q * n + p]`` is 1 iff ``p`` simulates ``q``."""
    sim = bytearray(n * n)
    for q in range(n):
        for p in range(n):
            if accepting[q] and not accepting[p]:
                continue
            ok = True
            for c in range(nclasses):
                k = q * nclasses + c
                j = p * nclasses + c
                if offsets[k] < offsets[k + 1] and offsets[j] == offsets[j + 1]:
                    ok = False
                    break
            if ok:
                sim[q * n + p] = 1
    changed = True
    while changed:
        changed = False
        for q in range(n):
            for p in range(n):
                if not sim[q * n + p] or p == q:
                    continue
                for c in range(nclasses):
                    k = q * nclasses + c
                    j = p * nclasses + c
                    good = True
                    for a in range(offsets[k], offsets[k + 1]):
                        qs = targets[a]
                        hit = False
                        for b in range(offsets[j], offsets[j + 1]):
                            if sim[qs * n + targets[b]]:
                                hit = True
                                break
                        if not hit:
                            good = False
                            break
                    if not good:
                        sim[q * n + p] = 0
                        changed = True
                        break
    return sim
