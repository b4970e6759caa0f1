"""Hot inner loops.

Each kernel has a numba-compiled form and a plain numpy/python form with the
same signature; ``USE_NUMBA`` (see ``_accel``) picks one at import time.  The
pure forms stay importable as ``*_py`` so the benchmark and the tests can run
both side by side.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


# -- canonical relabelling --------------------------------------------------

def _root_code_py(iota, punct, root, labeled, out):
    ncorn = iota.shape[0]
    new = np.full(ncorn, -1, dtype=np.int64)
    order = np.empty(ncorn, dtype=np.int64)
    new[root] = 0
    order[0] = root
    head, nxt = 0, 1
    while head < nxt:
        c = order[head]
        head += 1
        s = 3 * (c // 3) + (c + 1) % 3
        for d in (s, iota[c]):
            if new[d] < 0:
                new[d] = nxt
                order[nxt] = d
                nxt += 1
    if nxt < ncorn:
        return False
    pmap = np.full(punct.max() + 1, -1, dtype=np.int64)
    nlab = 0
    for k in range(ncorn):
        c = order[k]
        s = 3 * (c // 3) + (c + 1) % 3
        out[3 * k] = new[s]
        out[3 * k + 1] = new[iota[c]]
        p = punct[c]
        if labeled:
            out[3 * k + 2] = p
        else:
            if pmap[p] < 0:
                pmap[p] = nlab
                nlab += 1
            out[3 * k + 2] = pmap[p]
    return True


def canonical_code_py(iota, punct, labeled):
    """Lexicographically least relabelled encoding over all root corners."""
    ncorn = iota.shape[0]
    best = None
    cur = np.empty(3 * ncorn, dtype=np.int64)
    for root in range(ncorn):
        if not _root_code_py(iota, punct, root, labeled, cur):
            continue
        if best is None or tuple(cur) < tuple(best):
            best = cur.copy()
    return best


@njit(cache=True)
def _canonical_code_nb(iota, punct, labeled):
    ncorn = iota.shape[0]
    best = np.empty(3 * ncorn, dtype=np.int64)
    cur = np.empty(3 * ncorn, dtype=np.int64)
    have = False
    new = np.empty(ncorn, dtype=np.int64)
    order = np.empty(ncorn, dtype=np.int64)
    pmap = np.empty(punct.max() + 1, dtype=np.int64)
    for root in range(ncorn):
        new[:] = -1
        new[root] = 0
        order[0] = root
        head = 0
        nxt = 1
        while head < nxt:
            c = order[head]
            head += 1
            s = 3 * (c // 3) + (c + 1) % 3
            if new[s] < 0:
                new[s] = nxt
                order[nxt] = s
                nxt += 1
            d = iota[c]
            if new[d] < 0:
                new[d] = nxt
                order[nxt] = d
                nxt += 1
        if nxt < ncorn:
            continue
        pmap[:] = -1
        nlab = 0
        # build and compare on the fly; abandon as soon as we are larger
        state = 0 if have else -1
        for k in range(ncorn):
            c = order[k]
            s = 3 * (c // 3) + (c + 1) % 3
            p = punct[c]
            if labeled:
                lab = p
            else:
                if pmap[p] < 0:
                    pmap[p] = nlab
                    nlab += 1
                lab = pmap[p]
            cur[3 * k] = new[s]
            cur[3 * k + 1] = new[iota[c]]
            cur[3 * k + 2] = lab
            if state == 0:
                for q in range(3 * k, 3 * k + 3):
                    if cur[q] < best[q]:
                        state = -1
                        break
                    if cur[q] > best[q]:
                        state = 1
                        break
                if state == 1:
                    break
        if state == -1:
            best[:] = cur
            have = True
    return best


def canonical_code_array(iota, punct, labeled=True):
    iota = np.ascontiguousarray(iota, dtype=np.int64)
    punct = np.ascontiguousarray(punct, dtype=np.int64)
    if USE_NUMBA:
        return _canonical_code_nb(iota, punct, bool(labeled))
    return canonical_code_py(iota, punct, bool(labeled))


# -- tropical flip transport ------------------------------------------------

def transport_rows_py(rows, quads):
    """Apply the max-plus flip rule to every row of ``rows`` (in place).

    ``quads`` has one line per flip: (flipped edge, a, b, c, d) with (a, c)
    and (b, d) the opposite side pairs of the quadrilateral, as edge ids.
    """
    for e, a, b, c, d in quads:
        rows[:, e] = np.maximum(rows[:, a] + rows[:, c], rows[:, b] + rows[:, d]) - rows[:, e]
    return rows


@njit(cache=True)
def _transport_rows_nb(rows, quads):
    for q in range(quads.shape[0]):
        e = quads[q, 0]
        a = quads[q, 1]
        b = quads[q, 2]
        c = quads[q, 3]
        d = quads[q, 4]
        for i in range(rows.shape[0]):
            x = rows[i, a] + rows[i, c]
            y = rows[i, b] + rows[i, d]
            rows[i, e] = (x if x > y else y) - rows[i, e]
    return rows


def transport_rows(rows, quads):
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    quads = np.ascontiguousarray(quads, dtype=np.int64).reshape(-1, 5)
    if USE_NUMBA:
        return _transport_rows_nb(rows, quads)
    return transport_rows_py(rows, quads)


# -- arc flip transport -----------------------------------------------------
#
# An arc is a row of interior intersection numbers (``-1`` on the edge it
# equals) plus the two corners its ends leave from (``-1`` for an edge arc).
# A move record is (s, r, e, a, b, c, d): the two sides of the flipped edge
# and its quadrilateral as in ``transport_rows``.  Old triangles are
# (A, B, C) at s and (B, A, D) at r; after the flip, corners s, s+1, s+2 sit
# at D, C, A and r, r+1, r+2 at C, D, B (``+`` meaning sigma).

def _flip_arc_py(x, st, mv):
    s, r, e, a, b, c, d = mv
    s1 = 3 * (s // 3) + (s + 1) % 3
    s2 = 3 * (s // 3) + (s + 2) % 3
    r1 = 3 * (r // 3) + (r + 1) % 3
    r2 = 3 * (r // 3) + (r + 2) % 3
    if x[e] == -1:
        x[e] = 1
        # old side s runs A -> B; the A end now leaves from s2, the B end from r2
        st[0], st[1] = s2, r2
        return
    for k in range(x.shape[0]):
        if x[k] < 0:
            return
    k_s = k_s1 = k_s2 = k_r = k_r1 = k_r2 = 0
    for j in range(2):
        q = st[j]
        k_s += int(q == s)
        k_s1 += int(q == s1)
        k_s2 += int(q == s2)
        k_r += int(q == r)
        k_r1 += int(q == r1)
        k_r2 += int(q == r2)
    # side weights minus stubs landing there (stub at corner q lands on side sigma q)
    ys, ys1, ys2 = x[e] - k_s2, x[a] - k_s, x[b] - k_s1
    yr, yr1, yr2 = x[e] - k_r2, x[c] - k_r, x[d] - k_r1
    n_s = (ys + ys2 - ys1) // 2
    n_s2 = (ys2 + ys1 - ys) // 2
    n_r1 = (yr1 + yr - yr2) // 2
    n_r2 = (yr2 + yr1 - yr) // 2
    w = x[e]
    # positions along e counted from A
    a1, c_lo, c_hi = n_s, n_s, n_s + k_s2
    a2, d_lo, d_hi = n_r1, n_r1, n_r1 + k_r2
    cross = max(0, min(a1, w) - max(d_hi, 0)) + max(0, min(w, a2) - max(c_hi, 0))
    if k_s2 and k_r2 and max(c_lo, d_lo) < min(c_hi, d_hi):
        for k in range(x.shape[0]):
            x[k] = 0
        x[e] = -1
        st[0] = st[1] = -1
        return
    x[e] = n_s2 + n_r2 + cross + k_s + k_s1 + k_r + k_r1
    pos_c = c_lo
    pos_d = d_lo
    for j in range(2):
        q = st[j]
        if q == s or q == r1:
            st[j] = s2
        elif q == s1 or q == r:
            st[j] = r2
        elif q == s2:
            st[j] = s1 if pos_c < a2 else r
            pos_c += 1
        elif q == r2:
            st[j] = s if pos_d < a1 else r1
            pos_d += 1


def flip_arcs_py(xs, sts, moves):
    for mv in moves:
        mv = tuple(int(v) for v in mv)
        for i in range(xs.shape[0]):
            _flip_arc_py(xs[i], sts[i], mv)
    return xs, sts


_flip_arc_nb = njit(cache=True)(_flip_arc_py)


@njit(cache=True)
def _flip_arcs_nb(xs, sts, moves):
    for m in range(moves.shape[0]):
        mv = (moves[m, 0], moves[m, 1], moves[m, 2], moves[m, 3],
              moves[m, 4], moves[m, 5], moves[m, 6])
        for i in range(xs.shape[0]):
            _flip_arc_nb(xs[i], sts[i], mv)
    return xs, sts


def flip_arcs(xs, sts, moves):
    """Carry arcs (rows of ``xs`` with end corners ``sts``) through ``moves``."""
    xs = np.array(xs, dtype=np.int64, ndmin=2)
    sts = np.array(sts, dtype=np.int64, ndmin=2)
    moves = np.ascontiguousarray(moves, dtype=np.int64).reshape(-1, 7)
    if USE_NUMBA:
        return _flip_arcs_nb(xs, sts, moves)
    return flip_arcs_py(xs, sts, moves)
