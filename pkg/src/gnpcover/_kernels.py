"""Compiled bitset kernels.

Every adjacency structure handed to these functions is an ``(n, W)`` array of
``uint64`` words, ``W = ceil(n / 64)``, bit ``v & 63`` of word ``v >> 6`` set in
row ``u`` iff ``uv`` is an edge.  Rows never contain their own bit.

Randomness is a keyed hash (splitmix64 finalizer) of the identity of the object
being decided, so results never depend on visiting order or thread count.
"""
import numpy as np
from llvmlite import ir
from numba import config, njit, prange, types
from numba.core import cgutils
from numba.extending import intrinsic

# probe OpenMP before TBB; an outdated TBB only produces a warning
config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

ZERO = np.uint64(0)
ONE = np.uint64(1)
ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0
_NEVER = np.int64(1) << np.int64(62)


@intrinsic
def popcount(typingctx, x):
    if x != types.uint64:
        return None

    def codegen(context, builder, sig, args):
        fnty = ir.FunctionType(ir.IntType(64), [ir.IntType(64)])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.ctpop.i64")
        return builder.call(fn, args)

    return types.int64(types.uint64), codegen


@intrinsic
def ctz(typingctx, x):
    if x != types.uint64:
        return None

    def codegen(context, builder, sig, args):
        fnty = ir.FunctionType(ir.IntType(64), [ir.IntType(64), ir.IntType(1)])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.cttz.i64")
        return builder.call(fn, [args[0], ir.Constant(ir.IntType(1), 0)])

    return types.int64(types.uint64), codegen


# ---------------------------------------------------------------- hashing


@njit(inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(inline="always")
def fold(h, x):
    return mix64((h ^ np.uint64(x)) + GOLDEN)


@njit(inline="always")
def unit(h):
    """Uniform in [0, 1) from the top 53 bits of a hash."""
    return np.float64(h >> _S11) * _INV53


@njit(inline="always")
def geometric(h, log1mq):
    # failures before the first success; P(skip >= s) = (1-q)^s
    u = 1.0 - unit(h)
    g = np.floor(np.log(u) / log1mq)
    if g >= 4.0e18:
        return _NEVER
    return np.int64(g)


@njit(cache=True)
def derive_key(seed, a, b):
    return fold(fold(mix64(np.uint64(seed) + GOLDEN), a), b)


@njit(cache=True)
def pair_uniforms(key, us, vs):
    out = np.empty(us.shape[0], np.float64)
    for t in range(us.shape[0]):
        out[t] = unit(fold(fold(key, us[t]), vs[t]))
    return out


# ---------------------------------------------------------------- bit helpers


@njit(inline="always")
def above(t):
    """Mask of the bits strictly above position ``t`` (0..63) of a word."""
    return (ALL << np.uint64(t)) << ONE


@njit(cache=True)
def edge_index(n, u, v):
    return u * n - (u * (u + 1)) // 2 + (v - u - 1)


@njit(cache=True)
def gnp_adjacency(n, p, key):
    W = (n + 63) >> 6
    adj = np.zeros((n, W), np.uint64)
    for u in range(n):
        hu = fold(key, u)
        for v in range(u + 1, n):
            if unit(fold(hu, v)) < p:
                adj[u, v >> 6] |= ONE << np.uint64(v & 63)
                adj[v, u >> 6] |= ONE << np.uint64(u & 63)
    return adj


@njit(cache=True)
def edges_of(adj):
    """Edges ``u < v`` in canonical order, as two int64 arrays."""
    n, W = adj.shape
    m = 0
    for u in range(n):
        for w in range(W):
            m += popcount(adj[u, w])
    m //= 2
    eu = np.empty(m, np.int64)
    ev = np.empty(m, np.int64)
    k = 0
    for u in range(n):
        w0 = u >> 6
        for w in range(w0, W):
            x = adj[u, w]
            if w == w0:
                x &= above(u & 63)
            while x != ZERO:
                t = ctz(x)
                x &= x - ONE
                eu[k] = u
                ev[k] = w * 64 + t
                k += 1
    return eu, ev


@njit(cache=True)
def adjacency_from_pairs(n, eu, ev):
    W = (n + 63) >> 6
    adj = np.zeros((n, W), np.uint64)
    for t in range(eu.shape[0]):
        u = eu[t]
        v = ev[t]
        adj[u, v >> 6] |= ONE << np.uint64(v & 63)
        adj[v, u >> 6] |= ONE << np.uint64(u & 63)
    return adj


@njit(cache=True)
def mark_clique_edges(n, cliques, mask):
    """Set ``mask[edge_index(u, v)]`` for every pair inside every row."""
    j = cliques.shape[1]
    for r in range(cliques.shape[0]):
        for a in range(j):
            for b in range(a + 1, j):
                mask[edge_index(n, cliques[r, a], cliques[r, b])] = True


# ---------------------------------------------------------------- counting


@njit(inline="always")
def _enough(row, w0, W, need):
    """Whether words ``w0..W-1`` of ``row`` hold at least ``need`` bits."""
    c = 0
    for w in range(w0, W):
        c += popcount(row[w])
        if c >= need:
            return True
    return need <= 0


@njit(cache=True)
def _count(adj, ws, r, cw, cx):
    """Number of r-cliques inside the vertex set ``ws[0]``.

    ``ws`` needs at least ``max(r - 1, 1)`` rows; ``cw``/``cx`` are per-depth
    cursors (word index, remaining bits).
    """
    W = ws.shape[1]
    if r == 0:
        return np.int64(1)
    total = np.int64(0)
    if r == 1:
        for w in range(W):
            total += popcount(ws[0, w])
        return total
    d = 0
    cw[0] = 0
    cx[0] = ws[0, 0]
    while d >= 0:
        while cx[d] == ZERO and cw[d] < W - 1:
            cw[d] += 1
            cx[d] = ws[d, cw[d]]
        if cx[d] == ZERO:
            d -= 1
            continue
        w = cw[d]
        t = ctz(cx[d])
        cx[d] &= cx[d] - ONE
        row = adj[w * 64 + t]
        if d == r - 2:
            total += popcount(ws[d, w] & row[w] & above(t))
            for ww in range(w + 1, W):
                total += popcount(ws[d, ww] & row[ww])
        else:
            ws[d + 1, w] = ws[d, w] & row[w] & above(t)
            for ww in range(w + 1, W):
                ws[d + 1, ww] = ws[d, ww] & row[ww]
            # r - 1 - d more vertices are needed below this one
            if _enough(ws[d + 1], w, W, r - 1 - d):
                d += 1
                cw[d] = w
                cx[d] = ws[d, w]
    return total


@njit(cache=True)
def count_in_common(adj, verts, r):
    """Number of r-cliques in the common neighbourhood of ``verts``."""
    W = adj.shape[1]
    ws = np.empty((r + 2, W), np.uint64)
    cw = np.empty(r + 2, np.int64)
    cx = np.empty(r + 2, np.uint64)
    for w in range(W):
        ws[0, w] = ALL
    for t in range(verts.shape[0]):
        for w in range(W):
            ws[0, w] &= adj[verts[t], w]
    # padding bits past n and the members themselves
    n = adj.shape[0]
    for v in range(n, W * 64):
        ws[0, v >> 6] &= ~(ONE << np.uint64(v & 63))
    for t in range(verts.shape[0]):
        v = verts[t]
        ws[0, v >> 6] &= ~(ONE << np.uint64(v & 63))
    return _count(adj, ws, r, cw, cx)


@njit(parallel=True, cache=True)
def per_edge_counts(adj, eu, ev, r):
    """For each edge, the number of r-cliques in the endpoints' common neighbourhood."""
    W = adj.shape[1]
    E = eu.shape[0]
    out = np.zeros(E, np.int64)
    for e in prange(E):
        ws = np.empty((r + 2, W), np.uint64)
        cw = np.empty(r + 2, np.int64)
        cx = np.empty(r + 2, np.uint64)
        u = eu[e]
        v = ev[e]
        for w in range(W):
            ws[0, w] = adj[u, w] & adj[v, w]
        out[e] = _count(adj, ws, r, cw, cx)
    return out


@njit(parallel=True, cache=True)
def triangle_max(adj, r):
    """Max over triangles of the number of r-cliques in their common neighbourhood.

    Returns -1 when the graph has no triangle.
    """
    n, W = adj.shape
    best = np.full(max(n, 1), -1, np.int64)
    for ai in prange(n):
        a = np.int64(ai)
        ws = np.empty((r + 2, W), np.uint64)
        cw = np.empty(r + 2, np.int64)
        cx = np.empty(r + 2, np.uint64)
        top = np.int64(-1)
        wa = a >> 6
        for wb in range(wa, W):
            xb = adj[a, wb]
            if wb == wa:
                xb &= above(a & 63)
            while xb != ZERO:
                tb = ctz(xb)
                xb &= xb - ONE
                b = wb * 64 + tb
                for wc in range(wb, W):
                    xc = adj[a, wc] & adj[b, wc]
                    if wc == wb:
                        xc &= above(tb)
                    while xc != ZERO:
                        tc = ctz(xc)
                        xc &= xc - ONE
                        c = wc * 64 + tc
                        for w in range(W):
                            ws[0, w] = adj[a, w] & adj[b, w] & adj[c, w]
                        cnt = _count(adj, ws, r, cw, cx)
                        if cnt > top:
                            top = cnt
        best[a] = top
    return best.max()


# ---------------------------------------------------------------- Step A selection


@njit(cache=True)
def _emit(P, w0, h, prefix, log1mq, take_all, out, pos, write):
    # extensions of one (j-1)-clique prefix are the vertices of P
    W = P.shape[0]
    j = prefix.shape[0] + 1
    c = np.int64(0)
    for w in range(w0, W):
        c += popcount(P[w])
    if c == 0:
        return pos
    draws = np.int64(0)
    if take_all:
        target = np.int64(0)
    else:
        target = geometric(fold(h, draws), log1mq)
        draws += 1
    rank = np.int64(0)
    for w in range(w0, W):
        x = P[w]
        while x != ZERO and target < c:
            t = ctz(x)
            x &= x - ONE
            if rank == target:
                if write:
                    for s in range(j - 1):
                        out[pos, s] = prefix[s]
                    out[pos, j - 1] = w * 64 + t
                pos += 1
                if take_all:
                    target += 1
                else:
                    target += 1 + geometric(fold(h, draws), log1mq)
                    draws += 1
            rank += 1
    return pos


@njit(cache=True)
def _select_root(adj, j, a, key, log1mq, take_all, out, start, write):
    """Keep decisions for the j-cliques whose smallest vertex is ``a``."""
    W = adj.shape[1]
    ws = np.empty((j, W), np.uint64)
    verts = np.empty(j - 1, np.int64)
    hs = np.empty(j, np.uint64)
    cw = np.empty(j, np.int64)
    cx = np.empty(j, np.uint64)
    verts[0] = a
    wa = a >> 6
    for w in range(W):
        ws[1, w] = adj[a, w] if w > wa else ZERO
    ws[1, wa] = adj[a, wa] & above(a & 63)
    hs[1] = fold(key, a)
    if j == 2:
        return _emit(ws[1], wa, hs[1], verts, log1mq, take_all, out, start, write) - start
    pos = start
    # at depth d the candidates ws[d] are scanned to choose verts[d]
    d = 1
    cw[1] = wa
    cx[1] = ws[1, wa]
    while d >= 1:
        while cx[d] == ZERO and cw[d] < W - 1:
            cw[d] += 1
            cx[d] = ws[d, cw[d]]
        if cx[d] == ZERO:
            d -= 1
            continue
        w = cw[d]
        t = ctz(cx[d])
        cx[d] &= cx[d] - ONE
        v = w * 64 + t
        verts[d] = v
        hs[d + 1] = fold(hs[d], v)
        ws[d + 1, w] = ws[d, w] & adj[v, w] & above(t)
        for ww in range(w + 1, W):
            ws[d + 1, ww] = ws[d, ww] & adj[v, ww]
        if d + 1 == j - 1:
            pos = _emit(ws[d + 1], w, hs[d + 1], verts, log1mq, take_all, out, pos, write)
        elif _enough(ws[d + 1], w, W, j - 1 - d):
            d += 1
            cw[d] = w
            cx[d] = ws[d, w]
    return pos - start


@njit(parallel=True, cache=True)
def select_cliques(adj, j, q, key):
    """Independently keep each j-clique with probability ``q``.

    The keep decisions for the cliques extending a (j-1)-clique prefix are a
    geometric-skip stream keyed by ``(key, prefix)``, so each clique is kept
    independently with probability exactly ``q``.  Rows come out in
    lexicographic order.
    """
    n = adj.shape[0]
    take_all = q >= 1.0
    log1mq = np.log1p(-q) if not take_all else -np.inf
    counts = np.zeros(n, np.int64)
    dummy = np.empty((0, j), np.int64)
    for ai in prange(n):
        a = np.int64(ai)
        counts[a] = _select_root(adj, j, a, key, log1mq, take_all, dummy, 0, False)
    offsets = np.zeros(n + 1, np.int64)
    for a in range(n):
        offsets[a + 1] = offsets[a] + counts[a]
    out = np.empty((offsets[n], j), np.int64)
    for ai in prange(n):
        a = np.int64(ai)
        if counts[a] > 0:
            _select_root(adj, j, a, key, log1mq, take_all, out, offsets[a], True)
    return out


# ---------------------------------------------------------------- maximum clique


@njit(cache=True)
def _colour(adj, P, U, Q, colv, colk):
    """Greedy sequential colouring of P; returns the number of coloured vertices."""
    W = P.shape[0]
    for w in range(W):
        U[w] = P[w]
    m = 0
    k = 0
    while True:
        left = False
        for w in range(W):
            if U[w] != ZERO:
                left = True
                break
        if not left:
            return m
        k += 1
        for w in range(W):
            Q[w] = U[w]
        for w in range(W):
            while Q[w] != ZERO:
                t = ctz(Q[w])
                bit = ONE << np.uint64(t)
                Q[w] &= ~bit
                U[w] &= ~bit
                v = w * 64 + t
                for ww in range(w, W):
                    Q[ww] &= ~adj[v, ww]
                colv[m] = v
                colk[m] = k
                m += 1


@njit(cache=True)
def max_clique(adj):
    """Branch and bound with a greedy colouring bound; returns a sorted witness."""
    n, W = adj.shape
    if n == 0:
        return np.empty(0, np.int64)
    ws = np.zeros((n + 1, W), np.uint64)
    for v in range(n):
        ws[0, v >> 6] |= ONE << np.uint64(v & 63)
    U = np.empty(W, np.uint64)
    Q = np.empty(W, np.uint64)
    colv = np.empty((n + 1, n), np.int64)
    colk = np.empty((n + 1, n), np.int64)
    idx = np.empty(n + 1, np.int64)
    cur = np.empty(n + 1, np.int64)
    best = np.empty(n + 1, np.int64)
    best_size = 0
    idx[0] = _colour(adj, ws[0], U, Q, colv[0], colk[0]) - 1
    d = 0
    while d >= 0:
        if idx[d] < 0 or d + colk[d, idx[d]] <= best_size:
            d -= 1
            if d >= 0:
                v = colv[d, idx[d]]
                ws[d, v >> 6] &= ~(ONE << np.uint64(v & 63))
                idx[d] -= 1
            continue
        v = colv[d, idx[d]]
        cur[d] = v
        empty = True
        for w in range(W):
            ws[d + 1, w] = ws[d, w] & adj[v, w]
            if ws[d + 1, w] != ZERO:
                empty = False
        if empty:
            if d + 1 > best_size:
                best_size = d + 1
                for s in range(d + 1):
                    best[s] = cur[s]
            ws[d, v >> 6] &= ~(ONE << np.uint64(v & 63))
            idx[d] -= 1
        else:
            d += 1
            idx[d] = _colour(adj, ws[d], U, Q, colv[d], colk[d]) - 1
    return np.sort(best[:best_size])


# ---------------------------------------------------------------- greedy cover


@njit(cache=True)
def greedy_cover(dense, eu, ev):
    """Greedy edge clique cover on a dense 0/1 adjacency matrix.

    Returns ``(flat, offsets)``; clique ``c`` is ``flat[offsets[c]:offsets[c+1]]``.
    """
    n = dense.shape[0]
    unc = dense.copy()
    cand = np.zeros(n, np.uint8)
    score = np.zeros(n, np.int64)
    members = np.empty(n, np.int64)
    flat = np.empty(max(16, 2 * eu.shape[0]), np.int64)
    offsets = np.zeros(eu.shape[0] + 1, np.int64)
    nc = 0
    fill = 0
    for e in range(eu.shape[0]):
        u = eu[e]
        v = ev[e]
        if unc[u, v] == 0:
            continue
        members[0] = u
        members[1] = v
        size = 2
        for x in range(n):
            cand[x] = dense[u, x] & dense[v, x]
            score[x] = unc[u, x] + unc[v, x]
        while True:
            bx = -1
            bs = -1
            for x in range(n):
                if cand[x] != 0 and score[x] > bs:
                    bs = score[x]
                    bx = x
            if bx < 0:
                break
            members[size] = bx
            size += 1
            for x in range(n):
                cand[x] &= dense[bx, x]
                score[x] += unc[bx, x]
            cand[bx] = 0
        for a in range(size):
            for b in range(size):
                unc[members[a], members[b]] = 0
        if fill + size > flat.shape[0]:
            grown = np.empty(2 * flat.shape[0] + size, np.int64)
            grown[:fill] = flat[:fill]
            flat = grown
        flat[fill : fill + size] = np.sort(members[:size])
        fill += size
        nc += 1
        offsets[nc] = fill
    return flat[:fill].copy(), offsets[: nc + 1].copy()
