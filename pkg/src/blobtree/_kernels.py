"""Compiled inner loops of the solver.

Everything here works on plain arrays and assumes the input already passed
general-position validation, so raw cross-product signs are trusted.

Facing codes: 0 = not a valid chord, 1 = left-facing, 2 = right-facing.
Edge choice codes: 0 bare node, 1 exit triangle (a, b, c), 2 exit through
the right digon (a, b), 3 exit through the left digon (a, b), 4 root blob
closed by its right digon (root, b).
"""

import numpy as np
from numba import njit

INF = np.inf
TIE_TOL = 1e-9

BARE, EXIT_TRIANGLE, EXIT_RIGHT_DIGON, EXIT_LEFT_DIGON, ROOT_DIGON = 0, 1, 2, 3, 4
INVALID, LEFT_FACING, RIGHT_FACING = 0, 1, 2
TASK_EDGE, TASK_WALL, TASK_CHORD = 0, 1, 2


@njit(cache=True)
def _cr(x, y, i, j, k):
    return (x[j] - x[i]) * (y[k] - y[i]) - (y[j] - y[i]) * (x[k] - x[i])


@njit(cache=True)
def _curve_right(x, y, a, b, v):
    # downward ray from a, then the ray a -> b
    below = x[v] > x[a]
    beyond = _cr(x, y, a, b, v) < 0.0
    if x[b] < x[a]:
        return below or beyond
    return below and beyond


@njit(cache=True)
def _crosses(x, y, p, q, r, s):
    d1 = _cr(x, y, p, q, r)
    d2 = _cr(x, y, p, q, s)
    if d1 * d2 >= 0.0:
        return False
    d3 = _cr(x, y, r, s, p)
    d4 = _cr(x, y, r, s, q)
    return d3 * d4 < 0.0


@njit(cache=True)
def wall_tables(x, y, parent, size):
    """Entry/exit counts of every directed wall.

    Returns entry count, summed entry subtree sizes, exit count and the
    child of the first exit edge (-1 if none), all as n x n arrays.
    """
    n = x.shape[0]
    ent_cnt = np.zeros((n, n), np.int64)
    ent_size = np.zeros((n, n), np.int64)
    ex_cnt = np.zeros((n, n), np.int64)
    ex_child = np.full((n, n), -1, np.int64)
    for b in range(n):
        for c in range(b + 1, n):
            for u in range(n):
                p = parent[u]
                if p < 0 or u == b or u == c or p == b or p == c:
                    continue
                if not _crosses(x, y, b, c, u, p):
                    continue
                if _cr(x, y, b, c, u) < 0.0:
                    i, j = b, c  # child right of b -> c: entry for (b, c)
                else:
                    i, j = c, b
                ent_cnt[i, j] += 1
                ent_size[i, j] += size[u]
                ex_cnt[j, i] += 1
                if ex_child[j, i] < 0:
                    ex_child[j, i] = u
    return ent_cnt, ent_size, ex_cnt, ex_child


@njit(cache=True)
def _find_comp(x_node, removed, k, tin, tout, root):
    best = root
    best_tin = -1
    for i in range(k):
        w = removed[i]
        if tin[w] <= tin[x_node] < tout[w] and tin[w] > best_tin:
            best = w
            best_tin = tin[w]
    return best


@njit(cache=True)
def chord_tables(x, y, parent, children, size, tin, tout, root):
    """Validity, facing and backward size of every chord (a, b), y[a] < y[b]."""
    n = x.shape[0]
    facing = np.zeros((n, n), np.int8)
    csize = np.full((n, n), -1, np.int64)
    removed = np.empty(n, np.int64)
    stamp = np.full(n, -1, np.int64)
    label = np.zeros(n, np.int8)  # per component head: 0 none, 1 left, 2 right
    lstamp = np.full(n, -1, np.int64)
    comp_size = np.zeros(n, np.int64)
    deg = children.shape[1]
    tag = 0
    for a in range(n):
        for b in range(n):
            if y[a] >= y[b]:
                continue
            tag += 1
            k = 0
            for u in range(n):
                p = parent[u]
                if p < 0:
                    continue
                hit = u == a or u == b or p == a or p == b
                if not hit:
                    hit = _crosses(x, y, a, b, u, p)
                if hit and stamp[u] != tag:
                    stamp[u] = tag
                    removed[k] = u
                    k += 1
            ok = True
            for i in range(k):
                v = removed[i]
                for e in range(2):
                    w = v if e == 0 else parent[v]
                    if w == a or w == b:
                        continue
                    head = v if e == 0 else _find_comp(w, removed, k, tin, tout, root)
                    side = 2 if _curve_right(x, y, a, b, w) else 1
                    if lstamp[head] != tag:
                        lstamp[head] = tag
                        label[head] = side
                    elif label[head] != side:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            if a == root:
                forward = 2
            else:
                if lstamp[root] != tag:
                    continue
                forward = label[root]
            # component sizes: each head owns its subtree minus cut-off parts
            comp_size[root] = n
            for i in range(k):
                comp_size[removed[i]] = size[removed[i]]
            for i in range(k):
                v = removed[i]
                up = _find_comp(parent[v], removed, k, tin, tout, root)
                comp_size[up] -= size[v]
            back = 0
            heads_root = lstamp[root] == tag and label[root] != forward
            if heads_root:
                back += comp_size[root]
            for i in range(k):
                v = removed[i]
                if lstamp[v] == tag and label[v] != forward:
                    back += comp_size[v]
            facing[a, b] = 1 if forward == 1 else 2
            csize[a, b] = back
    return facing, csize


@njit(cache=True)
def _better(val, best):
    if not val < best:
        return False
    if best == INF:
        return True
    return not (best - val <= TIE_TOL * (1.0 + abs(best)))


@njit(cache=True)
def _dist(x, y, i, j):
    return np.hypot(x[i] - x[j], y[i] - y[j])


@njit(cache=True)
def _edge(edge_val, edge_done, size, v, limit):
    # reads of edge problems must be strictly smaller than ``limit`` (or equal
    # when ``limit`` is negative: chords may read edges of their own size)
    if not edge_done[v]:
        return INF
    if limit >= 0 and size[v] >= limit:
        return INF
    return edge_val[v]


@njit(cache=True)
def _tri_vertex(x, y, children, edge_val, edge_done, size, a, b, c, limit):
    s = 0.0
    for k in range(children.shape[1]):
        v = children[b, k]
        if v < 0:
            break
        if v != a and v != c and _cr(x, y, a, b, v) > 0.0 and _cr(x, y, b, c, v) < 0.0:
            s += _edge(edge_val, edge_done, size, v, limit)
    for k in range(children.shape[1]):
        v = children[c, k]
        if v < 0:
            break
        if v != a and v != b and _cr(x, y, a, c, v) < 0.0 and _cr(x, y, b, c, v) < 0.0:
            s += _edge(edge_val, edge_done, size, v, limit)
    return s


@njit(cache=True)
def _triangle(x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, b, c, limit):
    if not wall_done[b, c]:
        return INF
    return _dist(x, y, b, c) + wall_val[b, c] + _tri_vertex(x, y, children, edge_val, edge_done, size, a, b, c, limit)


@njit(cache=True)
def _digon(x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, b, right, limit):
    if right:
        if not wall_done[a, b]:
            return INF
        s = _dist(x, y, a, b) + wall_val[a, b]
    else:
        if not wall_done[b, a]:
            return INF
        s = _dist(x, y, a, b) + wall_val[b, a]
    for k in range(children.shape[1]):
        v = children[a, k]
        if v < 0:
            break
        if v != b and _curve_right(x, y, a, b, v) == right:
            s += _edge(edge_val, edge_done, size, v, limit)
    for k in range(children.shape[1]):
        v = children[b, k]
        if v < 0:
            break
        if v == a:
            continue
        if (_cr(x, y, a, b, v) < 0.0) == right:
            s += _edge(edge_val, edge_done, size, v, limit)
    return s


@njit(cache=True)
def run_dp(x, y, parent, children, size, elen, root, facing, csize,
           ent_size, ex_cnt, ex_child, exw_ptr, exw_b, exw_c,
           task_type, task_i, task_j):
    n = x.shape[0]
    edge_val = np.full(n, INF)
    edge_done = np.zeros(n, np.bool_)
    edge_kind = np.zeros(n, np.int64)
    edge_w = np.full((n, 3), -1, np.int64)
    wall_val = np.zeros((n, n))
    wall_done = np.ones((n, n), np.bool_)
    chord_val = np.full((n, n), INF)
    chord_step = np.full((n, n), INF)
    chord_choice = np.full((n, n), -2, np.int64)
    step_choice = np.full((n, n), -1, np.int64)
    chord_done = np.zeros((n, n), np.bool_)
    for i in range(n):
        for j in range(n):
            if ent_size[i, j] > 0:
                wall_done[i, j] = False
                wall_val[i, j] = INF

    for t in range(task_type.shape[0]):
        kind = task_type[t]
        if kind == TASK_WALL:
            b, c = task_i[t], task_j[t]
            s = 0.0
            for u in range(n):
                p = parent[u]
                if p < 0 or u == b or u == c or p == b or p == c:
                    continue
                if _cr(x, y, b, c, u) < 0.0 and _crosses(x, y, b, c, u, p):
                    s += _edge(edge_val, edge_done, size, u, -1)
            wall_val[b, c] = s
            wall_done[b, c] = True

        elif kind == TASK_CHORD:
            a, b = task_i[t], task_j[t]
            lim = csize[a, b]
            best = INF
            arg = -1
            if facing[a, b] == LEFT_FACING:
                # the chord sees its backward part on the right: sweep in from the right digon
                if ex_cnt[a, b] == 0:
                    base = _digon(x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, b, True, -1)
                else:
                    base = INF
                for c in range(n):
                    if facing[a, c] != LEFT_FACING or not chord_done[a, c] or csize[a, c] >= lim:
                        continue
                    if _cr(x, y, a, b, c) >= 0.0 or ex_cnt[c, b] != 0:
                        continue
                    v = chord_val[a, c] + _triangle(x, y, children, edge_val, edge_done, size,
                                                    wall_val, wall_done, a, c, b, -1)
                    if _better(v, best):
                        best = v
                        arg = c
            else:
                if ex_cnt[b, a] == 0:
                    base = _digon(x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, b, False, -1)
                else:
                    base = INF
                for c in range(n):
                    if facing[a, c] != RIGHT_FACING or not chord_done[a, c] or csize[a, c] >= lim:
                        continue
                    if _cr(x, y, a, b, c) <= 0.0 or ex_cnt[b, c] != 0:
                        continue
                    v = _triangle(x, y, children, edge_val, edge_done, size,
                                  wall_val, wall_done, a, b, c, -1) + chord_val[a, c]
                    if _better(v, best):
                        best = v
                        arg = c
            chord_step[a, b] = best
            step_choice[a, b] = arg
            if _better(best, base):
                chord_val[a, b] = best
                chord_choice[a, b] = arg
            else:
                chord_val[a, b] = base
                chord_choice[a, b] = -1
            chord_done[a, b] = True

        else:
            u = task_i[t]
            lim = size[u]
            best = 0.0
            for k in range(children.shape[1]):
                v = children[u, k]
                if v < 0:
                    break
                best += _edge(edge_val, edge_done, size, v, lim)
            bk = BARE
            w0, w1, w2 = -1, -1, -1
            if u == root:
                for b in range(n):
                    if facing[u, b] != RIGHT_FACING or not chord_done[u, b] or ex_cnt[u, b] != 0:
                        continue
                    v = chord_step[u, b] + _digon(x, y, children, edge_val, edge_done, size,
                                                  wall_val, wall_done, u, b, True, lim)
                    if _better(v, best):
                        best, bk, w0, w1, w2 = v, ROOT_DIGON, u, b, -1
            else:
                p = parent[u]
                # u is the apex: the exit leaves through one of the two digon sectors
                for b in range(n):
                    if b == p or not chord_done[u, b] or csize[u, b] >= lim:
                        continue
                    if facing[u, b] == RIGHT_FACING and ex_cnt[u, b] == 0 and _curve_right(x, y, u, b, p):
                        v = chord_step[u, b] + _digon(x, y, children, edge_val, edge_done, size,
                                                      wall_val, wall_done, u, b, True, lim)
                        if _better(v, best):
                            best, bk, w0, w1, w2 = v, EXIT_RIGHT_DIGON, u, b, -1
                    elif facing[u, b] == LEFT_FACING and ex_cnt[b, u] == 0 and not _curve_right(x, y, u, b, p):
                        v = chord_step[u, b] + _digon(x, y, children, edge_val, edge_done, size,
                                                      wall_val, wall_done, u, b, False, lim)
                        if _better(v, best):
                            best, bk, w0, w1, w2 = v, EXIT_LEFT_DIGON, u, b, -1
                # u is the far end of a digon
                for a in range(n):
                    if not chord_done[a, u] or csize[a, u] >= lim:
                        continue
                    if facing[a, u] == RIGHT_FACING and ex_cnt[a, u] == 0 and _cr(x, y, a, u, p) < 0.0:
                        v = chord_step[a, u] + _digon(x, y, children, edge_val, edge_done, size,
                                                      wall_val, wall_done, a, u, True, lim)
                        if _better(v, best):
                            best, bk, w0, w1, w2 = v, EXIT_RIGHT_DIGON, a, u, -1
                    elif facing[a, u] == LEFT_FACING and ex_cnt[u, a] == 0 and _cr(x, y, a, u, p) > 0.0:
                        v = chord_step[a, u] + _digon(x, y, children, edge_val, edge_done, size,
                                                      wall_val, wall_done, a, u, False, lim)
                        if _better(v, best):
                            best, bk, w0, w1, w2 = v, EXIT_LEFT_DIGON, a, u, -1
                # uu' crosses a wall outward, and it is that wall's only exit
                for e in range(exw_ptr[u], exw_ptr[u + 1]):
                    s, q = exw_b[e], exw_c[e]
                    if y[s] < y[q]:
                        if facing[s, q] == RIGHT_FACING and chord_done[s, q] and csize[s, q] < lim:
                            v = chord_step[s, q] + _digon(x, y, children, edge_val, edge_done, size,
                                                          wall_val, wall_done, s, q, True, lim)
                            if _better(v, best):
                                best, bk, w0, w1, w2 = v, EXIT_RIGHT_DIGON, s, q, -1
                    else:
                        if facing[q, s] == LEFT_FACING and chord_done[q, s] and csize[q, s] < lim:
                            v = chord_step[q, s] + _digon(x, y, children, edge_val, edge_done, size,
                                                          wall_val, wall_done, q, s, False, lim)
                            if _better(v, best):
                                best, bk, w0, w1, w2 = v, EXIT_LEFT_DIGON, q, s, -1
                for e in range(exw_ptr[u], exw_ptr[u + 1]):
                    s, q = exw_b[e], exw_c[e]
                    for a in range(n):
                        if facing[a, s] != LEFT_FACING or facing[a, q] != RIGHT_FACING:
                            continue
                        if not (chord_done[a, s] and chord_done[a, q]):
                            continue
                        if csize[a, s] >= lim or csize[a, q] >= lim or _cr(x, y, a, s, q) <= 0.0:
                            continue
                        v = chord_val[a, s] + chord_val[a, q] + _triangle(
                            x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, s, q, lim)
                        if _better(v, best):
                            best, bk, w0, w1, w2 = v, EXIT_TRIANGLE, a, s, q
                # u is a side vertex of the exit triangle
                for a in range(n):
                    fau = facing[a, u]
                    if fau == INVALID or not chord_done[a, u] or csize[a, u] >= lim:
                        continue
                    for c in range(n):
                        if c == u or c == a:
                            continue
                        if fau == LEFT_FACING:
                            # triangle (a, u, c)
                            if facing[a, c] != RIGHT_FACING or not chord_done[a, c] or csize[a, c] >= lim:
                                continue
                            if ex_cnt[u, c] != 0 or _cr(x, y, a, u, c) <= 0.0:
                                continue
                            if not (_cr(x, y, a, u, p) > 0.0 and _cr(x, y, u, c, p) < 0.0):
                                continue
                            v = chord_val[a, u] + chord_val[a, c] + _triangle(
                                x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, u, c, lim)
                            if _better(v, best):
                                best, bk, w0, w1, w2 = v, EXIT_TRIANGLE, a, u, c
                        else:
                            # triangle (a, c, u)
                            if facing[a, c] != LEFT_FACING or not chord_done[a, c] or csize[a, c] >= lim:
                                continue
                            if ex_cnt[c, u] != 0 or _cr(x, y, a, c, u) <= 0.0:
                                continue
                            if not (_cr(x, y, a, u, p) < 0.0 and _cr(x, y, c, u, p) < 0.0):
                                continue
                            v = chord_val[a, c] + chord_val[a, u] + _triangle(
                                x, y, children, edge_val, edge_done, size, wall_val, wall_done, a, c, u, lim)
                            if _better(v, best):
                                best, bk, w0, w1, w2 = v, EXIT_TRIANGLE, a, c, u
                best += elen[u]
            edge_val[u] = best
            edge_kind[u] = bk
            edge_w[u, 0] = w0
            edge_w[u, 1] = w1
            edge_w[u, 2] = w2
            edge_done[u] = True

    return (edge_val, edge_kind, edge_w, wall_val, chord_val, chord_step,
            chord_choice, step_choice)
