"""Exact minimum-weight perfect matching on dense weighted graphs.

This is an array-based formulation of the primal-dual blossom method
(Galil's O(n^3) variant of Edmonds' algorithm), compiled with numba so
that the Monte Carlo decoding loop can afford an exact matching per
sample.  The solver works on a full weight matrix; sparse graphs gain
nothing here because decoding always builds complete graphs.

Internals follow the classic stage/substage organisation: vertex duals
start at the maximum edge weight, blossoms carry their own dual
variables, and every stage either augments the matching or proves the
current one optimal.  All duals are premultiplied by two so integer
weights stay integral throughout.

Vertex ids are 0..n-1; nontrivial blossoms occupy ids n..2n-1 and are
recycled through a free list.  Recursive steps of the textbook
formulation (blossom expansion and augmentation through nested
blossoms) are flattened onto explicit work stacks.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["max_weight_mate", "min_weight_perfect_mate"]

_FREE = 0
_S = 1
_T = 2


@njit(cache=True)
def _solve(w):  # noqa: C901 - monolithic by design (single JIT unit)
    n = w.shape[0]
    mate = np.full(n, -1, np.int64)
    if n == 0:
        return mate
    nb = 2 * n

    maxweight = np.int64(0)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] > maxweight:
                maxweight = w[i, j]

    lab = np.zeros(nb, np.int64)
    lef = np.full(nb, -1, np.int64)     # label edge, outside endpoint
    let = np.full(nb, -1, np.int64)     # label edge, endpoint inside the blossom
    inbl = np.arange(n)
    par = np.full(nb, -1, np.int64)
    bbase = np.full(nb, -1, np.int64)
    for v in range(n):
        bbase[v] = v
    dualv = np.full(n, maxweight, np.int64)
    dualb = np.zeros(nb, np.int64)
    inuse = np.zeros(nb, np.bool_)

    cap = n + 2
    ch = np.full((n, cap), -1, np.int64)       # ring of children, row b-n
    chlen = np.zeros(n, np.int64)
    edu = np.full((n, cap), -1, np.int64)      # ring edge k: u in child k
    edv = np.full((n, cap), -1, np.int64)      # ring edge k: v in child k+1
    mbu = np.full((n, cap), -1, np.int64)      # cached least-slack edges
    mbv = np.full((n, cap), -1, np.int64)
    mblen = np.full(n, -1, np.int64)           # -1: no cached list
    beu = np.full(nb, -1, np.int64)            # best (least-slack) edge
    bev = np.full(nb, -1, np.int64)

    unused = np.empty(n, np.int64)
    for i in range(n):
        unused[i] = nb - 1 - i
    nunused = n

    allowed = np.zeros((n, n), np.bool_)

    qcap = 8 * n + 16
    queue = np.empty(qcap, np.int64)
    qstate = np.zeros(1, np.int64)             # queue length

    stack = np.empty(n + 1, np.int64)          # leaf traversal scratch
    spath = np.empty(nb, np.int64)             # scanBlossom breadcrumbs
    tmpc = np.empty(n + 1, np.int64)           # addBlossom collection
    tmpu = np.empty(n + 1, np.int64)
    tmpv = np.empty(n + 1, np.int64)
    betu = np.full(nb, -1, np.int64)           # addBlossom best-edge scratch
    betv = np.full(nb, -1, np.int64)
    btouch = np.empty(nb, np.int64)
    exstack = np.empty(n + 1, np.int64)        # pending expansions
    wlb = np.empty(4 * n + 4, np.int64)        # augment worklist
    wlv = np.empty(4 * n + 4, np.int64)
    chain = np.empty(n + 1, np.int64)
    rot = np.empty(cap, np.int64)              # rotation scratch

    # numba closures cannot rebind outer scalars, so the free-list pointer
    # and the augment worklist length live in one-element arrays.
    nunused_box = np.zeros(1, np.int64)
    nunused_box[0] = nunused
    nwl_box = np.zeros(1, np.int64)

    def slack(u, v):
        return dualv[u] + dualv[v] - 2 * w[u, v]

    def queue_push(v):
        q = qstate[0]
        if q >= qcap:
            raise RuntimeError("matcher queue overflow")
        queue[q] = v
        qstate[0] = q + 1

    def push_leaves(b):
        # Push every vertex of (possibly nested) blossom b onto the queue.
        if b < n:
            queue_push(b)
            return
        sp = 0
        stack[sp] = b
        sp += 1
        while sp > 0:
            sp -= 1
            x = stack[sp]
            if x < n:
                queue_push(x)
            else:
                r = x - n
                for k in range(chlen[r]):
                    stack[sp] = ch[r, k]
                    sp += 1

    def set_inblossom(b, top):
        # Point all leaves of b at top-level blossom `top`.
        if b < n:
            inbl[b] = top
            return
        sp = 0
        stack[sp] = b
        sp += 1
        while sp > 0:
            sp -= 1
            x = stack[sp]
            if x < n:
                inbl[x] = top
            else:
                r = x - n
                for k in range(chlen[r]):
                    stack[sp] = ch[r, k]
                    sp += 1

    def label_one(wv, t, fv):
        b = inbl[wv]
        lab[wv] = t
        lab[b] = t
        if fv >= 0:
            lef[wv] = fv
            let[wv] = wv
            lef[b] = fv
            let[b] = wv
        else:
            lef[wv] = -1
            let[wv] = -1
            lef[b] = -1
            let[b] = -1
        beu[wv] = -1
        bev[wv] = -1
        beu[b] = -1
        bev[b] = -1
        if t == _S:
            push_leaves(b)

    def assign_label(wv, t, fv):
        label_one(wv, t, fv)
        if t == _T:
            # The base of a T-blossom is the only vertex with an outside
            # mate; that mate becomes an S-vertex.
            bs = bbase[inbl[wv]]
            label_one(mate[bs], _S, bs)

    def scan_blossom(v, wv):
        # Trace back from both tree paths; either they meet at a common
        # ancestor (new blossom base) or both end at roots (augmenting path).
        np_ = 0
        found = np.int64(-1)
        pv = v
        pw = wv
        while pv >= 0:
            b = inbl[pv]
            if lab[b] & 4:
                found = bbase[b]
                break
            spath[np_] = b
            np_ += 1
            lab[b] = 5
            if lef[b] == -1:
                pv = -1
            else:
                pv = lef[b]
                b2 = inbl[pv]
                pv = lef[b2]
            if pw >= 0:
                tmp = pv
                pv = pw
                pw = tmp
        for k in range(np_):
            lab[spath[k]] = _S
        return found

    def alloc_blossom():
        k = nunused_box[0]
        if k <= 0:
            raise RuntimeError("matcher blossom pool exhausted")
        b = unused[k - 1]
        nunused_box[0] = k - 1
        inuse[b] = True
        return b

    def free_blossom(b):
        k = nunused_box[0]
        unused[k] = b
        nunused_box[0] = k + 1
        inuse[b] = False

    def add_blossom(bas, v, wv):
        bb = inbl[bas]
        bv = inbl[v]
        bw = inbl[wv]
        b = alloc_blossom()
        r = b - n
        bbase[b] = bas
        par[b] = -1
        par[bb] = b

        # Collect the v-side path back to the base.
        tv = 0
        vv = v
        while bv != bb:
            par[bv] = b
            tmpc[tv] = bv
            tmpu[tv] = lef[bv]
            tmpv[tv] = let[bv]
            tv += 1
            vv = lef[bv]
            bv = inbl[vv]

        # children: [bb] + reversed(v-side); edges: reversed(v-side) + (v,w)
        ch[r, 0] = bb
        for k in range(tv):
            ch[r, 1 + k] = tmpc[tv - 1 - k]
            edu[r, k] = tmpu[tv - 1 - k]
            edv[r, k] = tmpv[tv - 1 - k]
        edu[r, tv] = v
        edv[r, tv] = wv
        cl = tv + 1

        # Append the w-side path, with label edges swapped into ring order.
        ww = wv
        while bw != bb:
            par[bw] = b
            ch[r, cl] = bw
            edu[r, cl] = let[bw]
            edv[r, cl] = lef[bw]
            cl += 1
            ww = lef[bw]
            bw = inbl[ww]
        chlen[r] = cl

        lab[b] = _S
        lef[b] = lef[bb]
        let[b] = let[bb]
        dualb[b] = 0

        # Relabel: T-vertices swallowed by an S-blossom become S-vertices.
        for k in range(cl):
            c = ch[r, k]
            if lab[c] == _T:
                push_leaves(c)
            set_inblossom(c, b)

        # Merge least-slack edge caches of the children.
        ntouch = 0
        for k in range(cl):
            c = ch[r, k]
            if c >= n and mblen[c - n] >= 0:
                rc = c - n
                for q in range(mblen[rc]):
                    i = mbu[rc, q]
                    j = mbv[rc, q]
                    if inbl[j] == b:
                        i, j = j, i
                    bj = inbl[j]
                    if bj != b and lab[bj] == _S:
                        if betu[bj] == -1 or slack(i, j) < slack(betu[bj], betv[bj]):
                            if betu[bj] == -1:
                                btouch[ntouch] = bj
                                ntouch += 1
                            betu[bj] = i
                            betv[bj] = j
                mblen[rc] = -1
            else:
                # No cached list: scan all edges incident to this child.
                nl = 0
                if c < n:
                    tmpc[0] = c
                    nl = 1
                else:
                    sp = 0
                    stack[sp] = c
                    sp += 1
                    while sp > 0:
                        sp -= 1
                        x = stack[sp]
                        if x < n:
                            tmpc[nl] = x
                            nl += 1
                        else:
                            rc2 = x - n
                            for kk in range(chlen[rc2]):
                                stack[sp] = ch[rc2, kk]
                                sp += 1
                for li in range(nl):
                    i = tmpc[li]
                    for j in range(n):
                        if j == i:
                            continue
                        bj = inbl[j]
                        if bj != b and lab[bj] == _S:
                            if betu[bj] == -1 or slack(i, j) < slack(betu[bj], betv[bj]):
                                if betu[bj] == -1:
                                    btouch[ntouch] = bj
                                    ntouch += 1
                                betu[bj] = i
                                betv[bj] = j
            beu[c] = -1
            bev[c] = -1

        mblen[r] = ntouch
        bu = np.int64(-1)
        bv2 = np.int64(-1)
        bs = np.int64(0)
        for q in range(ntouch):
            bj = btouch[q]
            mbu[r, q] = betu[bj]
            mbv[r, q] = betv[bj]
            s = slack(betu[bj], betv[bj])
            if bu == -1 or s < bs:
                bu = betu[bj]
                bv2 = betv[bj]
                bs = s
            betu[bj] = -1
            betv[bj] = -1
        beu[b] = bu
        bev[b] = bv2

    def ring_walk(B, tchild):
        # Augment the internal matching of blossom B so that the child
        # containing the new base (tchild) ends up at ring position 0.
        r = B - n
        cl = chlen[r]
        i = 0
        for k in range(cl):
            if ch[r, k] == tchild:
                i = k
                break
        if i & 1:
            j = i - cl
            jstep = 1
        else:
            j = i
            jstep = -1
        while j != 0:
            j += jstep
            if jstep == 1:
                wv = edu[r, j % cl]
                xv = edv[r, j % cl]
            else:
                xv = edu[r, (j - 1) % cl]
                wv = edv[r, (j - 1) % cl]
            t = ch[r, j % cl]
            if t >= n:
                k2 = nwl_box[0]
                wlb[k2] = t
                wlv[k2] = wv
                nwl_box[0] = k2 + 1
            j += jstep
            t = ch[r, j % cl]
            if t >= n:
                k2 = nwl_box[0]
                wlb[k2] = t
                wlv[k2] = xv
                nwl_box[0] = k2 + 1
            mate[wv] = xv
            mate[xv] = wv
        # rotate children and ring edges so tchild sits at position 0
        if i > 0:
            for k in range(cl):
                rot[k] = ch[r, (i + k) % cl]
            for k in range(cl):
                ch[r, k] = rot[k]
            for k in range(cl):
                rot[k] = edu[r, (i + k) % cl]
            for k in range(cl):
                edu[r, k] = rot[k]
            for k in range(cl):
                rot[k] = edv[r, (i + k) % cl]
            for k in range(cl):
                edv[r, k] = rot[k]
        bbase[B] = bbase[ch[r, 0]]

    def augment_blossom(btop, vstart):
        nwl_box[0] = 0
        k0 = nwl_box[0]
        wlb[k0] = btop
        wlv[k0] = vstart
        nwl_box[0] = k0 + 1
        while nwl_box[0] > 0:
            nwl_box[0] -= 1
            B = wlb[nwl_box[0]]
            V = wlv[nwl_box[0]]
            # containment chain from V up to (excluding) B
            clen = 0
            t = V
            while par[t] != B:
                t = par[t]
                chain[clen] = t
                clen += 1
            # innermost blossoms first, entry child below each level
            entry = V
            for k in range(clen):
                ring_walk(chain[k], entry)
                entry = chain[k]
            ring_walk(B, entry)

    def augment_matching(v, wv):
        for side in range(2):
            if side == 0:
                s = v
                j = wv
            else:
                s = wv
                j = v
            while True:
                bs = inbl[s]
                if bs >= n:
                    augment_blossom(bs, s)
                mate[s] = j
                if lef[bs] == -1:
                    break
                t = lef[bs]
                bt = inbl[t]
                s2 = lef[bt]
                j2 = let[bt]
                if bt >= n:
                    augment_blossom(bt, j2)
                mate[j2] = s2
                s = s2
                j = j2

    def expand_blossom(btop, endstage):
        esp = 0
        exstack[esp] = btop
        esp += 1
        while esp > 0:
            esp -= 1
            b = exstack[esp]
            r = b - n
            cl = chlen[r]
            for k in range(cl):
                s = ch[r, k]
                par[s] = -1
                if s < n:
                    inbl[s] = s
                elif endstage and dualb[s] == 0:
                    exstack[esp] = s
                    esp += 1
                else:
                    set_inblossom(s, s)
            if (not endstage) and lab[b] == _T:
                # Relabel along the ring: alternate T/S sub-blossoms from the
                # entry child round to the base, then sweep the rest.
                entrychild = inbl[let[b]]
                jj = 0
                for k in range(cl):
                    if ch[r, k] == entrychild:
                        jj = k
                        break
                if jj & 1:
                    j = jj - cl
                    jstep = 1
                else:
                    j = jj
                    jstep = -1
                v = lef[b]
                wv = let[b]
                while j != 0:
                    if jstep == 1:
                        p = edu[r, j % cl]
                        q = edv[r, j % cl]
                    else:
                        q = edu[r, (j - 1) % cl]
                        p = edv[r, (j - 1) % cl]
                    lab[wv] = _FREE
                    lab[q] = _FREE
                    assign_label(wv, _T, v)
                    allowed[p, q] = True
                    allowed[q, p] = True
                    j += jstep
                    if jstep == 1:
                        v = edu[r, j % cl]
                        wv = edv[r, j % cl]
                    else:
                        wv = edu[r, (j - 1) % cl]
                        v = edv[r, (j - 1) % cl]
                    allowed[v, wv] = True
                    allowed[wv, v] = True
                    j += jstep
                bwc = ch[r, 0]
                lab[wv] = _T
                lab[bwc] = _T
                lef[wv] = v
                let[wv] = wv
                lef[bwc] = v
                let[bwc] = wv
                beu[bwc] = -1
                bev[bwc] = -1
                j += jstep
                while ch[r, j % cl] != entrychild:
                    bvc = ch[r, j % cl]
                    if lab[bvc] == _S:
                        j += jstep
                        continue
                    v2 = np.int64(-1)
                    if bvc >= n:
                        sp = 0
                        stack[sp] = bvc
                        sp += 1
                        while sp > 0:
                            sp -= 1
                            x = stack[sp]
                            if x < n:
                                if lab[x] != _FREE:
                                    v2 = x
                                    break
                            else:
                                rc = x - n
                                for kk in range(chlen[rc]):
                                    stack[sp] = ch[rc, kk]
                                    sp += 1
                    else:
                        v2 = bvc
                        if lab[v2] == _FREE:
                            v2 = -1
                    if v2 >= 0 and lab[v2] != _FREE:
                        lab[v2] = _FREE
                        lab[mate[bbase[bvc]]] = _FREE
                        assign_label(v2, _T, lef[v2])
                    j += jstep
            lab[b] = _FREE
            lef[b] = -1
            let[b] = -1
            beu[b] = -1
            bev[b] = -1
            par[b] = -1
            bbase[b] = -1
            dualb[b] = 0
            mblen[r] = -1
            chlen[r] = 0
            free_blossom(b)

    # Stages: each augments the matching by one edge or stops.
    for _stage in range(n // 2 + 2):
        for k in range(nb):
            lab[k] = _FREE
            lef[k] = -1
            let[k] = -1
            beu[k] = -1
            bev[k] = -1
        for k in range(n):
            mblen[k] = -1
        for i in range(n):
            for j in range(n):
                allowed[i, j] = False
        qstate[0] = 0

        for v in range(n):
            if mate[v] == -1 and lab[inbl[v]] == _FREE:
                assign_label(v, _S, -1)

        augmented = False
        while True:
            while qstate[0] > 0 and not augmented:
                qstate[0] -= 1
                v = queue[qstate[0]]
                ks = np.int64(0)
                for w2 in range(n):
                    if w2 == v:
                        continue
                    bv = inbl[v]
                    bw = inbl[w2]
                    if bv == bw:
                        continue
                    if not allowed[v, w2]:
                        ks = slack(v, w2)
                        if ks <= 0:
                            allowed[v, w2] = True
                            allowed[w2, v] = True
                    if allowed[v, w2]:
                        if lab[bw] == _FREE:
                            assign_label(w2, _T, v)
                        elif lab[bw] == _S:
                            bas = scan_blossom(v, w2)
                            if bas >= 0:
                                add_blossom(bas, v, w2)
                            else:
                                augment_matching(v, w2)
                                augmented = True
                                break
                        elif lab[w2] == _FREE:
                            lab[w2] = _T
                            lef[w2] = v
                            let[w2] = w2
                    elif lab[bw] == _S:
                        if beu[bv] == -1 or ks < slack(beu[bv], bev[bv]):
                            beu[bv] = v
                            bev[bv] = w2
                    elif lab[w2] == _FREE:
                        if beu[w2] == -1 or ks < slack(beu[w2], bev[w2]):
                            beu[w2] = v
                            bev[w2] = w2

            if augmented:
                break

            # No augmenting path yet: compute the dual adjustment.
            deltatype = 1
            delta = dualv[0]
            for v2 in range(1, n):
                if dualv[v2] < delta:
                    delta = dualv[v2]
            de_u = np.int64(-1)
            de_v = np.int64(-1)
            dblossom = np.int64(-1)

            for v2 in range(n):
                if lab[inbl[v2]] == _FREE and beu[v2] != -1:
                    d = slack(beu[v2], bev[v2])
                    if d < delta:
                        delta = d
                        deltatype = 2
                        de_u = beu[v2]
                        de_v = bev[v2]

            for b in range(nb):
                if b >= n and not inuse[b]:
                    continue
                if par[b] == -1 and lab[b] == _S and beu[b] != -1:
                    kslack = slack(beu[b], bev[b])
                    if kslack % 2 != 0:
                        raise RuntimeError("matcher parity invariant violated")
                    d = kslack // 2
                    if d < delta:
                        delta = d
                        deltatype = 3
                        de_u = beu[b]
                        de_v = bev[b]

            for b in range(n, nb):
                if inuse[b] and par[b] == -1 and lab[b] == _T and dualb[b] < delta:
                    delta = dualb[b]
                    deltatype = 4
                    dblossom = b

            for v2 in range(n):
                l = lab[inbl[v2]]
                if l == _S:
                    dualv[v2] -= delta
                elif l == _T:
                    dualv[v2] += delta
            for b in range(n, nb):
                if inuse[b] and par[b] == -1:
                    if lab[b] == _S:
                        dualb[b] += delta
                    elif lab[b] == _T:
                        dualb[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowed[de_u, de_v] = True
                allowed[de_v, de_u] = True
                queue_push(de_u)
            elif deltatype == 3:
                allowed[de_u, de_v] = True
                allowed[de_v, de_u] = True
                queue_push(de_u)
            else:
                expand_blossom(dblossom, False)

        if not augmented:
            break

        for b in range(n, nb):
            if inuse[b] and par[b] == -1 and lab[b] == _S and dualb[b] == 0:
                expand_blossom(b, True)

    return mate


def max_weight_mate(weights: np.ndarray) -> np.ndarray:
    """Maximum-weight matching of a dense weight matrix.

    Returns the mate array: ``mate[v]`` is the partner of ``v`` or -1 if
    ``v`` is unmatched.  Only entries above the diagonal are read.
    """
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight matrix must be square")
    return _solve(w)


def min_weight_perfect_mate(weights: np.ndarray) -> np.ndarray:
    """Minimum-weight perfect matching of a dense weight matrix.

    The graph is complete on ``n`` vertices (``n`` even) with integer
    weights ``weights[i, j] >= 0``.  Implemented as maximum-weight
    matching of the reflected weights, which is perfect because every
    reflected weight is positive.
    """
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight matrix must be square")
    n = w.shape[0]
    if n % 2:
        raise ValueError("perfect matching needs an even vertex count")
    if n == 0:
        return np.empty(0, np.int64)
    wmax = np.int64(w.max())
    mate = _solve(wmax + 1 - w)
    if np.any(mate < 0):
        raise RuntimeError("failed to find a perfect matching")
    return mate
