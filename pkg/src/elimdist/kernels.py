"""Model-checking kernels: a numba-compiled prenex evaluator and a numpy fallback.

The backend is chosen once at import time from ``ELIMDIST_BACKEND``
("numba" or "numpy"). Without the variable, numba is used when importable.

Both backends take the same compiled program:

* ``adj``    uint8 (n, n) adjacency matrix of the parent graph
* ``verts``  int64 vertices of the current view, ascending
* ``kinds``  int8 per quantifier, 0 = forall, 1 = exists
* ``vals``   int64 slot values; free variables occupy the first slots
* ``ops, oa, ob``  postfix matrix program over slots
"""

from __future__ import annotations

import os

import numpy as np

OP_EQ, OP_ADJ, OP_NOT, OP_AND, OP_OR, OP_IMP, OP_IFF = range(7)
FORALL, EXISTS = 0, 1

# broadcast grids above this many cells are split along the outermost variable
NUMPY_GRID_LIMIT = 1 << 22


def _requested_backend() -> str:
    want = os.environ.get("ELIMDIST_BACKEND", "").strip().lower()
    if want not in ("", "numba", "numpy"):
        raise RuntimeError(f"ELIMDIST_BACKEND must be 'numba' or 'numpy', got {want!r}")
    return want


try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


# ---------------------------------------------------------------------------
# compiled kernels

def _eval_matrix(ops, oa, ob, vals, adj, stack):
    sp = 0
    for i in range(ops.shape[0]):
        op = ops[i]
        if op == OP_EQ:
            stack[sp] = vals[oa[i]] == vals[ob[i]]
            sp += 1
        elif op == OP_ADJ:
            stack[sp] = adj[vals[oa[i]], vals[ob[i]]] != 0
            sp += 1
        elif op == OP_NOT:
            stack[sp - 1] = not stack[sp - 1]
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if op == OP_AND:
                stack[sp - 1] = a and b
            elif op == OP_OR:
                stack[sp - 1] = a or b
            elif op == OP_IMP:
                stack[sp - 1] = (not a) or b
            else:
                stack[sp - 1] = a == b
    return stack[0]


if numba is not None:
    _eval_matrix_nb = njit(cache=True)(_eval_matrix)

    @njit(cache=True)
    def _eval_prefix_nb(adj, verts, kinds, base, vals, ops, oa, ob, idx, stack):
        q = kinds.shape[0]
        m = verts.shape[0]
        if q == 0:
            return _eval_matrix_nb(ops, oa, ob, vals, adj, stack)
        if m == 0:
            return kinds[0] == FORALL
        level = 0
        idx[0] = 0
        while True:
            vals[base + level] = verts[idx[level]]
            if level < q - 1:
                level += 1
                idx[level] = 0
                continue
            res = _eval_matrix_nb(ops, oa, ob, vals, adj, stack)
            while True:
                decided = (kinds[level] == FORALL and not res) or (kinds[level] == EXISTS and res)
                if not decided:
                    idx[level] += 1
                    if idx[level] < m:
                        break
                if level == 0:
                    return res
                level -= 1
            vals[base + level] = verts[idx[level]]

    @njit(cache=True)
    def _first_failing_nb(adj, verts, s, kinds_rest, base, vals, ops, oa, ob, idx, stack, out):
        m = verts.shape[0]
        if m == 0 or s == 0:
            return False
        tup = np.zeros(s, dtype=np.int64)
        while True:
            for j in range(s):
                vals[base + j] = verts[tup[j]]
            if not _eval_prefix_nb(adj, verts, kinds_rest, base + s, vals, ops, oa, ob, idx, stack):
                for j in range(s):
                    out[j] = verts[tup[j]]
                return True
            j = s - 1
            while j >= 0:
                tup[j] += 1
                if tup[j] < m:
                    break
                tup[j] = 0
                j -= 1
            if j < 0:
                return False


# ---------------------------------------------------------------------------
# numpy fallback: broadcast evaluation over the whole assignment grid

def _np_matrix(ops, oa, ob, slot_vals, adj):
    stack = []
    for op, a, b in zip(ops.tolist(), oa.tolist(), ob.tolist()):
        if op == OP_EQ:
            stack.append(slot_vals[a] == slot_vals[b])
        elif op == OP_ADJ:
            stack.append(adj[slot_vals[a], slot_vals[b]] != 0)
        elif op == OP_NOT:
            stack.append(np.logical_not(stack.pop()))
        else:
            y = stack.pop()
            x = stack.pop()
            if op == OP_AND:
                stack.append(x & y)
            elif op == OP_OR:
                stack.append(x | y)
            elif op == OP_IMP:
                stack.append(~x | y)
            else:
                stack.append(x == y)
    return stack[0]


def _np_prefix(adj, verts, kinds, base, vals, ops, oa, ob):
    """Truth table of the prefix ``kinds`` reduced to a scalar."""
    q = len(kinds)
    m = len(verts)
    if q == 0:
        return bool(_np_matrix(ops, oa, ob, [np.int64(v) for v in vals], adj))
    if m == 0:
        return kinds[0] == FORALL
    if m ** q > NUMPY_GRID_LIMIT and q > 1:
        want = kinds[0] == EXISTS
        for v in verts.tolist():
            vals[base] = v
            if _np_prefix(adj, verts, kinds[1:], base + 1, vals, ops, oa, ob) == want:
                return want
        return not want
    slot_vals: list = [np.int64(v) for v in vals[:base]]
    for lvl in range(q):
        shape = [1] * q
        shape[lvl] = m
        slot_vals.append(verts.reshape(shape))
    table = np.broadcast_to(_np_matrix(ops, oa, ob, slot_vals, adj), (m,) * q)
    for lvl in range(q - 1, -1, -1):
        table = table.all(axis=lvl) if kinds[lvl] == FORALL else table.any(axis=lvl)
    return bool(table)


def _np_first_failing(adj, verts, s, kinds_rest, base, vals, ops, oa, ob):
    m = len(verts)
    if m == 0 or s == 0:
        return None
    q = s + len(kinds_rest)
    if m ** q > NUMPY_GRID_LIMIT:
        # scan the universal block in order, evaluating each remainder
        for flat in range(m ** s):
            digits = np.unravel_index(flat, (m,) * s)
            for j in range(s):
                vals[base + j] = verts[digits[j]]
            if not _np_prefix(adj, verts, kinds_rest, base + s, vals, ops, oa, ob):
                return tuple(int(verts[d]) for d in digits)
        return None
    slot_vals: list = [np.int64(v) for v in vals[:base]]
    for lvl in range(q):
        shape = [1] * q
        shape[lvl] = m
        slot_vals.append(verts.reshape(shape))
    table = np.broadcast_to(_np_matrix(ops, oa, ob, slot_vals, adj), (m,) * q)
    for lvl in range(q - 1, s - 1, -1):
        table = table.all(axis=lvl) if kinds_rest[lvl - s] == FORALL else table.any(axis=lvl)
    bad = np.flatnonzero(~table.reshape(-1))
    if bad.size == 0:
        return None
    digits = np.unravel_index(int(bad[0]), (m,) * s)
    return tuple(int(verts[d]) for d in digits)


# ---------------------------------------------------------------------------
# dispatch

class _Backend:
    def __init__(self, name: str):
        if name == "numba" and numba is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        self.name = name

    def check(self, adj, verts, kinds, vals, ops, oa, ob) -> bool:
        base = vals.shape[0] - kinds.shape[0]
        if self.name == "numba":
            idx = np.zeros(max(1, kinds.shape[0]), dtype=np.int64)
            stack = np.zeros(max(1, ops.shape[0]), dtype=np.bool_)
            return bool(_eval_prefix_nb(adj, verts, kinds, base, vals, ops, oa, ob, idx, stack))
        return _np_prefix(adj, verts, kinds, base, vals.copy(), ops, oa, ob)

    def first_failing(self, adj, verts, s, kinds, vals, ops, oa, ob):
        """``kinds`` covers the whole remaining prefix; its first ``s`` entries are forall."""
        base = vals.shape[0] - kinds.shape[0]
        rest = kinds[s:]
        if self.name == "numba":
            idx = np.zeros(max(1, rest.shape[0]), dtype=np.int64)
            stack = np.zeros(max(1, ops.shape[0]), dtype=np.bool_)
            out = np.zeros(s, dtype=np.int64)
            found = _first_failing_nb(adj, verts, s, rest, base, vals, ops, oa, ob, idx, stack, out)
            return tuple(int(v) for v in out) if found else None
        return _np_first_failing(adj, verts, s, rest, base, vals.copy(), ops, oa, ob)


def _default_backend() -> str:
    want = _requested_backend()
    if want:
        return want
    return "numba" if numba is not None else "numpy"


_backend = _Backend(_default_backend())


def backend() -> _Backend:
    return _backend


def set_backend(name: str) -> None:
    """Switch backends at runtime (used by tests and the benchmark)."""
    global _backend
    _backend = _Backend(name)
