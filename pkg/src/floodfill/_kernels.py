"""Compiled inner loops for the flooding algorithms.

Float kernels operate on a working surface where NoData cells hold -inf;
the bucket kernels use range-rebased int32 keys with -1 for NoData. Both
realize "NoData is lower than every data value" without trusting the
sentinel's magnitude. Wrappers in the public modules build those working
arrays and restore NoData afterwards.

The queue logic mirrors the structures in :mod:`floodfill.queues`: an
array-backed binary heap ordered by (priority, insertion serial), a bucket
queue with per-bucket FIFO links, and plain FIFO rings. Every cell enters a
queue exactly once, so all storage is preallocated at grid size.
"""

import numpy as np
from numba import njit

NEG_INF = -np.inf


@njit(cache=True)
def _neighbor_tables():
    # N, E, S, W, NE, SE, SW, NW: cardinals before diagonals, clockwise from N
    dr = np.array([-1, 0, 1, 0, -1, 1, 1, -1], dtype=np.int64)
    dc = np.array([0, 1, 0, -1, 1, 1, -1, -1], dtype=np.int64)
    return dr, dc


@njit(cache=True)
def _edge_order(nrows, ncols, out):
    """Perimeter flat indices in canonical seeding order; returns the count."""
    k = 0
    for c in range(ncols):
        out[k] = c
        k += 1
    if nrows > 1:
        base = (nrows - 1) * ncols
        for c in range(ncols):
            out[k] = base + c
            k += 1
    for r in range(1, nrows - 1):
        out[k] = r * ncols
        k += 1
    if ncols > 1:
        for r in range(1, nrows - 1):
            out[k] = r * ncols + ncols - 1
            k += 1
    return k


@njit(cache=True)
def _hpush(hp, hs, hc, size, p, s, c):
    j = size
    hp[j] = p
    hs[j] = s
    hc[j] = c
    while j > 0:
        up = (j - 1) >> 1
        if hp[up] > hp[j] or (hp[up] == hp[j] and hs[up] > hs[j]):
            hp[up], hp[j] = hp[j], hp[up]
            hs[up], hs[j] = hs[j], hs[up]
            hc[up], hc[j] = hc[j], hc[up]
            j = up
        else:
            break
    return size + 1


@njit(cache=True)
def _hpop(hp, hs, hc, size):
    p = hp[0]
    s = hs[0]
    c = hc[0]
    size -= 1
    if size > 0:
        hp[0] = hp[size]
        hs[0] = hs[size]
        hc[0] = hc[size]
        j = 0
        while True:
            l = 2 * j + 1
            if l >= size:
                break
            m = l
            r = l + 1
            if r < size and (hp[r] < hp[l] or (hp[r] == hp[l] and hs[r] < hs[l])):
                m = r
            if hp[m] < hp[j] or (hp[m] == hp[j] and hs[m] < hs[j]):
                hp[m], hp[j] = hp[j], hp[m]
                hs[m], hs[j] = hs[j], hs[m]
                hc[m], hc[j] = hc[j], hc[m]
                j = m
            else:
                break
    return p, s, c, size


@njit(cache=True)
def _bucket_push(head, tail, nxt, b, i):
    if tail[b] < 0:
        head[b] = i
    else:
        nxt[tail[b]] = i
    tail[b] = i
    nxt[i] = -1


@njit(cache=True)
def _bucket_pop(head, tail, nxt, cursor):
    while head[cursor] < 0:
        cursor += 1
    i = head[cursor]
    head[cursor] = nxt[i]
    if head[cursor] < 0:
        tail[cursor] = -1
    return i, cursor


@njit(cache=True)
def fill_original_heap(zp, nrows, ncols, nneigh):
    """Generalized priority flood: every cell passes through the heap."""
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    w = zp.copy()
    closed = np.zeros(n, dtype=np.uint8)
    hp = np.empty(n, dtype=np.float64)
    hs = np.empty(n, dtype=np.int64)
    hc = np.empty(n, dtype=np.int64)
    hsize = 0
    serial = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        i = edges[k]
        closed[i] = 1
        hsize = _hpush(hp, hs, hc, hsize, w[i], serial, i)
        serial += 1
    while hsize > 0:
        zc, _, i, hsize = _hpop(hp, hs, hc, hsize)
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            if w[ni] < zc:
                w[ni] = zc
            hsize = _hpush(hp, hs, hc, hsize, w[ni], serial, ni)
            serial += 1
    return w


@njit(cache=True)
def fill_original_bucket(keys, nrows, ncols, nneigh, nbuckets):
    """Generalized priority flood on a monotone bucket queue.

    ``keys`` holds range-rebased int32 elevations with -1 for NoData, so the
    whole flood runs on compact integer arrays: value with key k lives in
    bucket k + 1, bucket 0 being the NoData floor.
    """
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    k = keys.copy()
    closed = np.zeros(n, dtype=np.uint8)
    head = np.full(nbuckets, -1, dtype=np.int32)
    tail = np.full(nbuckets, -1, dtype=np.int32)
    nxt = np.empty(n, dtype=np.int32)
    cursor = 0
    size = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for e in range(ne):
        i = edges[e]
        closed[i] = 1
        _bucket_push(head, tail, nxt, k[i] + 1, i)
        size += 1
    while size > 0:
        i, cursor = _bucket_pop(head, tail, nxt, cursor)
        size -= 1
        kc = k[i]
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            if k[ni] < kc:
                k[ni] = kc
            _bucket_push(head, tail, nxt, k[ni] + 1, ni)
            size += 1
    return k


@njit(cache=True)
def fill_improved_heap(zp, nrows, ncols, nneigh):
    """Improved priority flood: depression cells bypass the heap via a FIFO."""
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    w = zp.copy()
    closed = np.zeros(n, dtype=np.uint8)
    hp = np.empty(n, dtype=np.float64)
    hs = np.empty(n, dtype=np.int64)
    hc = np.empty(n, dtype=np.int64)
    hsize = 0
    serial = 0
    pit = np.empty(n, dtype=np.int64)
    ph = 0
    pt = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        i = edges[k]
        closed[i] = 1
        hsize = _hpush(hp, hs, hc, hsize, w[i], serial, i)
        serial += 1
    while hsize > 0 or ph < pt:
        if ph < pt:
            i = pit[ph]
            ph += 1
            zc = w[i]
        else:
            zc, _, i, hsize = _hpop(hp, hs, hc, hsize)
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            if w[ni] <= zc:
                w[ni] = zc
                pit[pt] = ni
                pt += 1
            else:
                hsize = _hpush(hp, hs, hc, hsize, w[ni], serial, ni)
                serial += 1
    return w


@njit(cache=True)
def fill_improved_bucket(keys, nrows, ncols, nneigh, nbuckets):
    """Improved priority flood with the bucket queue as the open queue."""
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    k = keys.copy()
    closed = np.zeros(n, dtype=np.uint8)
    head = np.full(nbuckets, -1, dtype=np.int32)
    tail = np.full(nbuckets, -1, dtype=np.int32)
    nxt = np.empty(n, dtype=np.int32)
    cursor = 0
    size = 0
    pit = np.empty(n, dtype=np.int32)
    ph = 0
    pt = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for e in range(ne):
        i = edges[e]
        closed[i] = 1
        _bucket_push(head, tail, nxt, k[i] + 1, i)
        size += 1
    while size > 0 or ph < pt:
        if ph < pt:
            i = pit[ph]
            ph += 1
        else:
            i, cursor = _bucket_pop(head, tail, nxt, cursor)
            size -= 1
        kc = k[i]
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            if k[ni] <= kc:
                k[ni] = kc
                pit[pt] = ni
                pt += 1
            else:
                _bucket_push(head, tail, nxt, k[ni] + 1, ni)
                size += 1
    return k


@njit(cache=True)
def fill_epsilon(zp, nrows, ncols, nneigh):
    """Gradient-enforcing fill: raised cells step one float64 ulp above their
    downstream neighbor, so every data cell gains a strictly descending path.

    Returns (surface, warning count). A warning is counted each time a raise
    overtops terrain that stood above the depression's entry level (PitTop),
    which happens when relief approaches the ulp at the DEM's magnitude.
    """
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    w = zp.copy()
    closed = np.zeros(n, dtype=np.uint8)
    hp = np.empty(n, dtype=np.float64)
    hs = np.empty(n, dtype=np.int64)
    hc = np.empty(n, dtype=np.int64)
    hsize = 0
    serial = 0
    pit_cell = np.empty(n, dtype=np.int64)
    pit_z = np.empty(n, dtype=np.float64)
    ph = 0
    pt = 0
    pit_top = 0.0
    pit_top_set = False
    warnings = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        i = edges[k]
        closed[i] = 1
        hsize = _hpush(hp, hs, hc, hsize, w[i], serial, i)
        serial += 1
    while hsize > 0 or ph < pt:
        if hsize > 0 and ph < pt and hp[0] == pit_z[ph]:
            # Equal tops: drain the open queue first so that all cells of
            # this elevation are treated alike.
            zc, _, i, hsize = _hpop(hp, hs, hc, hsize)
            pit_top_set = False
        elif ph < pt:
            i = pit_cell[ph]
            zc = pit_z[ph]
            ph += 1
            if not pit_top_set and zc != NEG_INF:
                pit_top = zc
                pit_top_set = True
        else:
            zc, _, i, hsize = _hpop(hp, hs, hc, hsize)
            pit_top_set = False
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            if w[ni] == NEG_INF:
                # NoData sinks straight into the pit queue, value untouched.
                pit_cell[pt] = ni
                pit_z[pt] = NEG_INF
                pt += 1
            elif zc == NEG_INF:
                # Data beside NoData drains into it; elevation kept.
                hsize = _hpush(hp, hs, hc, hsize, w[ni], serial, ni)
                serial += 1
            else:
                zplus = np.nextafter(zc, np.inf)
                if w[ni] <= zplus:
                    if pit_top_set and pit_top < w[ni] and zplus >= w[ni]:
                        warnings += 1
                    w[ni] = zplus
                    pit_cell[pt] = ni
                    pit_z[pt] = zplus
                    pt += 1
                else:
                    hsize = _hpush(hp, hs, hc, hsize, w[ni], serial, ni)
                    serial += 1
    return w, warnings


@njit(cache=True)
def flow_directions(zp, nrows, ncols, nneigh):
    """Depression-carving flow directions; elevations are never modified.

    Codes: 0 drains off the grid edge, 1..8 = N,E,S,W,NE,SE,SW,NW toward the
    claiming cell, -1 NoData. Cardinal neighbors are claimed before diagonals
    because their center-to-center slopes are steeper.
    """
    dr, dc = _neighbor_tables()
    # flow code from neighbor-at-offset-t back toward the popped cell
    back = np.array([3, 4, 1, 2, 7, 8, 5, 6], dtype=np.int8)
    n = nrows * ncols
    dirs = np.full(n, -2, dtype=np.int8)
    closed = np.zeros(n, dtype=np.uint8)
    hp = np.empty(n, dtype=np.float64)
    hs = np.empty(n, dtype=np.int64)
    hc = np.empty(n, dtype=np.int64)
    hsize = 0
    serial = 0
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        i = edges[k]
        closed[i] = 1
        dirs[i] = -1 if zp[i] == NEG_INF else 0
        hsize = _hpush(hp, hs, hc, hsize, zp[i], serial, i)
        serial += 1
    while hsize > 0:
        _, _, i, hsize = _hpop(hp, hs, hc, hsize)
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if closed[ni]:
                continue
            closed[ni] = 1
            dirs[ni] = -1 if zp[ni] == NEG_INF else back[t]
            hsize = _hpush(hp, hs, hc, hsize, zp[ni], serial, ni)
            serial += 1
    return dirs


@njit(cache=True)
def watershed_labels(zp, nrows, ncols, nneigh, also_fill):
    """Label every cell with the edge outlet it drains to.

    Depression cells are carried on the pit queue at their outlet's spill
    elevation, so labels flood across pits without altering terrain. When
    ``also_fill`` is set the spill elevation is also written to the output
    surface, which reproduces the plain fill in the same sweep.

    Labels during the run: 0 = candidate, -1 = queued; a queued data cell
    mints the next positive label when popped. Returns (labels, surface,
    number of labels minted).
    """
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    labels = np.zeros(n, dtype=np.int64)
    w = zp.copy()
    hp = np.empty(n, dtype=np.float64)
    hs = np.empty(n, dtype=np.int64)
    hc = np.empty(n, dtype=np.int64)
    hsize = 0
    serial = 0
    pit_cell = np.empty(n, dtype=np.int64)
    pit_z = np.empty(n, dtype=np.float64)
    ph = 0
    pt = 0
    next_label = 1
    edges = np.empty(n, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        i = edges[k]
        labels[i] = -1
        hsize = _hpush(hp, hs, hc, hsize, zp[i], serial, i)
        serial += 1
    while hsize > 0 or ph < pt:
        if ph < pt:
            i = pit_cell[ph]
            zc = pit_z[ph]
            ph += 1
        else:
            zc, _, i, hsize = _hpop(hp, hs, hc, hsize)
        if labels[i] == -1 and zp[i] != NEG_INF:
            labels[i] = next_label
            next_label += 1
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if labels[ni] != 0:
                continue
            labels[ni] = labels[i]
            zn = zp[ni]
            if zn <= zc:
                pit_cell[pt] = ni
                pit_z[pt] = zc
                pt += 1
                if also_fill and zn != NEG_INF and w[ni] < zc:
                    w[ni] = zc
            else:
                hsize = _hpush(hp, hs, hc, hsize, zn, serial, ni)
                serial += 1
    return labels, w, next_label - 1


@njit(cache=True)
def planchon_darboux(zp, nrows, ncols, nneigh, eps, cycle, max_sweeps):
    """Fixpoint fill by repeated full-grid sweeps in alternating directions.

    Edge cells are fixed at their input elevation; interior cells start at
    +inf and relax under w(c) = max(z(c), min over neighbors of w(n) + eps)
    until a sweep changes nothing. Returns (surface, sweep count); the sweep
    count is -1 if ``max_sweeps`` was hit without convergence.
    """
    dr, dc = _neighbor_tables()
    w = np.full(nrows * ncols, np.inf, dtype=np.float64)
    edges = np.empty(nrows * ncols, dtype=np.int64)
    ne = _edge_order(nrows, ncols, edges)
    for k in range(ne):
        w[edges[k]] = zp[edges[k]]
    if nrows <= 2 or ncols <= 2:
        return w, 0
    sweeps = 0
    ncycle = len(cycle)
    while True:
        changed = False
        mode = cycle[sweeps % ncycle]
        rows_fwd = mode == 0 or mode == 2
        cols_fwd = mode == 0 or mode == 3
        for rr in range(1, nrows - 1):
            r = rr if rows_fwd else nrows - 1 - rr
            base = r * ncols
            for cc in range(1, ncols - 1):
                c = cc if cols_fwd else ncols - 1 - cc
                i = base + c
                m = np.inf
                for t in range(nneigh):
                    v = w[(r + dr[t]) * ncols + (c + dc[t])] + eps
                    if v < m:
                        m = v
                zc = zp[i]
                nw = m if m > zc else zc
                if nw < w[i]:
                    w[i] = nw
                    changed = True
        sweeps += 1
        if not changed:
            break
        if sweeps >= max_sweeps:
            return w, -1
    return w, sweeps


@njit(cache=True)
def drainage_check(w, nodata, nrows, ncols, nneigh, strict):
    """Reverse flood from the drains; returns the first undrainable data
    cell's flat index, or -1 if every data cell has a path out.

    Drains are data cells on the grid edge and data cells beside NoData
    (stepping into NoData always descends, since NoData is lowest). A cell
    drains through a neighbor that already drains and does not ascend
    (``strict``: strictly descends).
    """
    dr, dc = _neighbor_tables()
    n = nrows * ncols
    ok = np.zeros(n, dtype=np.uint8)
    q = np.empty(n, dtype=np.int64)
    qt = 0
    for r in range(nrows):
        for c in range(ncols):
            i = r * ncols + c
            if nodata[i]:
                continue
            seed = r == 0 or r == nrows - 1 or c == 0 or c == ncols - 1
            if not seed:
                for t in range(nneigh):
                    ni = (r + dr[t]) * ncols + (c + dc[t])
                    if nodata[ni]:
                        seed = True
                        break
            if seed:
                ok[i] = 1
                q[qt] = i
                qt += 1
    qh = 0
    while qh < qt:
        i = q[qh]
        qh += 1
        wx = w[i]
        r = i // ncols
        c = i - r * ncols
        for t in range(nneigh):
            nr = r + dr[t]
            nc = c + dc[t]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                continue
            ni = nr * ncols + nc
            if ok[ni] or nodata[ni]:
                continue
            wy = w[ni]
            drains = wy > wx if strict else wy >= wx
            if drains:
                ok[ni] = 1
                q[qt] = ni
                qt += 1
    for i in range(n):
        if not nodata[i] and not ok[i]:
            return i
    return -1


@njit(cache=True)
def flow_paths_check(dirs, nrows, ncols):
    """Verify a flow field is total, acyclic, and terminates off the grid.

    Returns -1 when every data cell's pointer chain reaches a code-0 cell or
    steps into NoData; otherwise the flat index of the first offending cell.
    """
    crow = np.array([0, -1, 0, 1, 0, -1, 1, 1, -1], dtype=np.int64)
    ccol = np.array([0, 0, 1, 0, -1, 1, 1, -1, -1], dtype=np.int64)
    n = nrows * ncols
    status = np.zeros(n, dtype=np.uint8)  # 0 unknown, 1 ok, 2 on current path
    path = np.empty(n, dtype=np.int64)
    for start in range(n):
        if dirs[start] == -1 or status[start] == 1:
            continue
        plen = 0
        i = start
        while True:
            if status[i] == 1:
                break
            if status[i] == 2:
                return i  # cycle
            d = dirs[i]
            if d < 0 or d > 8:
                return i  # missing or invalid code
            status[i] = 2
            path[plen] = i
            plen += 1
            if d == 0:
                break
            r = i // ncols
            c = i - r * ncols
            nr = r + crow[d]
            nc = c + ccol[d]
            if nr < 0 or nr >= nrows or nc < 0 or nc >= ncols:
                return i  # points off grid without the edge code
            ni = nr * ncols + nc
            if dirs[ni] == -1:
                break  # drains into NoData
            i = ni
        for k in range(plen):
            status[path[k]] = 1
    return -1
