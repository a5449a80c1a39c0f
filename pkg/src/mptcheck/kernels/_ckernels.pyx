# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; results and search order match ``_pykernels``."""

from libc.stdlib cimport free, malloc


cdef int* _alloc(Py_ssize_t n) except NULL:
    cdef int* p = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if p == NULL:
        raise MemoryError()
    return p


cdef void _scc(int n, const int[:] offsets, const int[:] targets, int* comp,
               int* index, int* low, char* on_stack, int* stack, int* work_v, int* work_i):
    cdef int counter = 0, ncomp = 0, sp = 0, wp = 0
    cdef int root, v, i, w, u
    for v in range(n):
        index[v] = -1
        comp[v] = -1
        on_stack[v] = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work_v[0] = root
        work_i[0] = offsets[root]
        wp = 1
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on_stack[root] = 1
        while wp > 0:
            v = work_v[wp - 1]
            i = work_i[wp - 1]
            if i < offsets[v + 1]:
                work_i[wp - 1] = i + 1
                w = targets[i]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on_stack[w] = 1
                    work_v[wp] = w
                    work_i[wp] = offsets[w]
                    wp += 1
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            wp -= 1
            if wp > 0:
                u = work_v[wp - 1]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    w = stack[sp]
                    on_stack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1


def scc(int n, const int[:] offsets, const int[:] targets):
    cdef int* comp = _alloc(n)
    cdef int* index = _alloc(n)
    cdef int* low = _alloc(n)
    cdef int* stack = _alloc(n)
    cdef int* work_v = _alloc(n)
    cdef int* work_i = _alloc(n)
    cdef char* on_stack = <char*> malloc(n if n > 0 else 1)
    try:
        _scc(n, offsets, targets, comp, index, low, on_stack, stack, work_v, work_i)
        return [comp[v] for v in range(n)]
    finally:
        free(comp); free(index); free(low); free(stack); free(work_v); free(work_i)
        free(on_stack)


def lasso_search(int n, const int[:] offsets, const int[:] targets, const int[:] initial,
                 const unsigned char[:] accepting):
    if n == 0:
        return None
    cdef int* comp = _alloc(n)
    cdef int* index = _alloc(n)
    cdef int* low = _alloc(n)
    cdef int* stack = _alloc(n)
    cdef int* work_v = _alloc(n)
    cdef int* work_i = _alloc(n)
    cdef char* on_stack = <char*> malloc(n)
    cdef int* size = _alloc(n)
    cdef int* parent = _alloc(n)
    cdef int* queue = _alloc(n)
    cdef int head = 0, tail = 0, found = -1, last = -1
    cdef int v, w, q, i, c, k
    cdef bint cyclic
    try:
        _scc(n, offsets, targets, comp, index, low, on_stack, stack, work_v, work_i)
        for v in range(n):
            size[v] = 0
            parent[v] = -2
        for v in range(n):
            size[comp[v]] += 1
        for k in range(initial.shape[0]):
            q = initial[k]
            if parent[q] == -2:
                parent[q] = -1
                queue[tail] = q
                tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            if accepting[v]:
                cyclic = size[comp[v]] > 1
                if not cyclic:
                    for i in range(offsets[v], offsets[v + 1]):
                        if targets[i] == v:
                            cyclic = True
                            break
                if cyclic:
                    found = v
                    break
            for i in range(offsets[v], offsets[v + 1]):
                w = targets[i]
                if parent[w] == -2:
                    parent[w] = v
                    queue[tail] = w
                    tail += 1
        if found < 0:
            return None
        stem = []
        v = found
        while v != -1:
            stem.append(v)
            v = parent[v]
        stem.reverse()
        # shortest cycle through `found` inside its component; parent is reused
        for v in range(n):
            parent[v] = -2
        c = comp[found]
        parent[found] = -1
        head = 0
        tail = 1
        queue[0] = found
        while head < tail and last < 0:
            v = queue[head]
            head += 1
            for i in range(offsets[v], offsets[v + 1]):
                w = targets[i]
                if w == found:
                    last = v
                    break
                if comp[w] == c and parent[w] == -2:
                    parent[w] = v
                    queue[tail] = w
                    tail += 1
        loop = []
        v = last
        while v != -1:
            loop.append(v)
            v = parent[v]
        loop.reverse()
        return stem, loop
    finally:
        free(comp); free(index); free(low); free(stack); free(work_v); free(work_i)
        free(on_stack); free(size); free(parent); free(queue)


def direct_simulation(int n, const unsigned char[:] accepting, int nclasses,
                      const int[:] offsets, const int[:] targets):
    sim_obj = bytearray(n * n)
    cdef unsigned char[:] sim = sim_obj
    cdef int q, p, c, k, j, a, b, qs
    cdef bint ok, changed, good, hit
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
    return sim_obj
