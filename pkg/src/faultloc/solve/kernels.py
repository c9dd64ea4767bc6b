"""CDCL search kernels over flat numpy arrays.

Everything the solver touches at conflict rate lives here: unit
propagation over watched literals, 1-UIP conflict analysis, the VSIDS
indexed heap, backtracking, and the top-level search loop. All state is
held in caller-owned numpy arrays so the same functions can be compiled
with numba or run as plain Python; the wrapper in solver.py picks the
mode once at import time (FAULTLOC_DISABLE_NUMBA=1 forces the pure
path) and owns all allocation. Kernels never allocate: when the clause
database or the watcher pool is about to run out, _search returns a
grow request and the wrapper re-enters with bigger arrays. That keeps
search resumable, since every piece of solver state is in the arrays.

Literal encoding: variable v (1-based) and sign s (1 = negated) pack
into the code 2*v + s; code^1 flips the sign. assigns[v] is +1/-1/0.
A clause at offset o in the db is db[o] = k followed by k literal
codes; the first two are the watched ones. Watcher nodes form singly
linked lists per literal code, and a node is relinked, never freed, so
the pool holds exactly two nodes per attached clause.

Search order is deterministic for a fixed clause sequence: VSIDS ties
break on variable index, saved phases start at negative, and the
optional randomization (seed != 0) draws from a self-contained xorshift
stream seeded by the caller.
"""

from __future__ import annotations

import os

JIT_ENABLED = False
if not os.environ.get("FAULTLOC_DISABLE_NUMBA"):
    try:
        from numba import njit as _numba_njit

        def _jit(fn):
            return _numba_njit(cache=True)(fn)

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        pass
if not JIT_ENABLED:
    def _jit(fn):
        return fn

# status codes returned by _search
SAT = 1
UNSAT = 0
BUDGET = 2
GROW_DB = 3
GROW_WATCH = 4

# indices into the int64 state vector
S_QHEAD = 0       # next trail position to propagate
S_TRAIL = 1       # trail length
S_LEVELS = 2      # current decision level == len(trail_lim)
S_HEAP = 3        # heap length
S_WN = 4          # watcher nodes in use
S_DB = 5          # clause db length
S_CONFLICTS = 6
S_PROPS = 7
S_DECISIONS = 8
S_RESTARTS = 9
S_RNG = 10        # xorshift state; 0 disables randomized polarity
S_CORELEN = 11    # length of core_buf after an assumption failure
STATE_LEN = 12

# indices into the float64 state vector
F_VARINC = 0
FSTATE_LEN = 1

_VAR_DECAY_INV = 1.0 / 0.95
_RESCALE_LIMIT = 1e100
_RESTART_BASE = 100


def _lit_value(assigns, c):
    # +1 satisfied, -1 falsified, 0 unassigned
    return assigns[c >> 1] * (1 - 2 * (c & 1))


def _heap_up(heap, heap_pos, activity, i):
    v = heap[i]
    a = activity[v]
    while i > 0:
        p = (i - 1) >> 1
        u = heap[p]
        if activity[u] > a or (activity[u] == a and u < v):
            break
        heap[i] = u
        heap_pos[u] = i
        i = p
    heap[i] = v
    heap_pos[v] = i


def _heap_down(heap, heap_pos, activity, state, i):
    n = state[S_HEAP]
    v = heap[i]
    a = activity[v]
    while True:
        l = 2 * i + 1
        if l >= n:
            break
        r = l + 1
        c = l
        if r < n:
            u_l = heap[l]
            u_r = heap[r]
            if activity[u_r] > activity[u_l] or (
                activity[u_r] == activity[u_l] and u_r < u_l
            ):
                c = r
        u = heap[c]
        if activity[v] > activity[u] or (activity[v] == activity[u] and v < u):
            break
        heap[i] = u
        heap_pos[u] = i
        i = c
    heap[i] = v
    heap_pos[v] = i


def _heap_insert(heap, heap_pos, activity, state, v):
    if heap_pos[v] >= 0:
        return
    i = state[S_HEAP]
    heap[i] = v
    heap_pos[v] = i
    state[S_HEAP] += 1
    _heap_up(heap, heap_pos, activity, i)


def _heap_pop(heap, heap_pos, activity, state):
    v = heap[0]
    heap_pos[v] = -1
    state[S_HEAP] -= 1
    n = state[S_HEAP]
    if n > 0:
        heap[0] = heap[n]
        heap_pos[heap[0]] = 0
        _heap_down(heap, heap_pos, activity, state, 0)
    return v


def _bump(heap, heap_pos, activity, state, fstate, v):
    activity[v] += fstate[F_VARINC]
    if activity[v] > _RESCALE_LIMIT:
        for u in range(len(activity)):
            activity[u] *= 1e-100
        fstate[F_VARINC] *= 1e-100
    if heap_pos[v] >= 0:
        _heap_up(heap, heap_pos, activity, heap_pos[v])


def _enqueue(c, reason_off, assigns, level, reason, trail, state):
    v = c >> 1
    assigns[v] = 1 - 2 * (c & 1)
    level[v] = state[S_LEVELS]
    reason[v] = reason_off
    trail[state[S_TRAIL]] = c
    state[S_TRAIL] += 1


def _attach_watch(c_off, w, blocker, watch_head, wn_next, wn_clause, wn_blocker,
                  state):
    # clause at c_off watches literal w: node goes on the list of w^1, the
    # code whose assignment can falsify w
    i = state[S_WN]
    state[S_WN] += 1
    wn_clause[i] = c_off
    wn_blocker[i] = blocker
    wn_next[i] = watch_head[w ^ 1]
    watch_head[w ^ 1] = i


def _attach_range(db, start, end, watch_head, wn_next, wn_clause, wn_blocker,
                  state):
    o = start
    while o < end:
        k = db[o]
        w0 = db[o + 1]
        w1 = db[o + 2]
        _attach_watch(o, w0, w1, watch_head, wn_next, wn_clause, wn_blocker, state)
        _attach_watch(o, w1, w0, watch_head, wn_next, wn_clause, wn_blocker, state)
        o += k + 1


def _propagate(db, assigns, level, reason, trail, watch_head, wn_next,
               wn_clause, wn_blocker, state):
    # returns the offset of a conflicting clause, or -1
    while state[S_QHEAD] < state[S_TRAIL]:
        p = trail[state[S_QHEAD]]
        state[S_QHEAD] += 1
        state[S_PROPS] += 1
        prev = -1
        i = watch_head[p]
        while i != -1:
            nxt = wn_next[i]
            blocker = wn_blocker[i]
            if _lit_value(assigns, blocker) == 1:
                prev = i
                i = nxt
                continue
            off = wn_clause[i]
            k = db[off]
            false_lit = p ^ 1
            if db[off + 1] == false_lit:
                db[off + 1] = db[off + 2]
                db[off + 2] = false_lit
            first = db[off + 1]
            if first != blocker and _lit_value(assigns, first) == 1:
                wn_blocker[i] = first
                prev = i
                i = nxt
                continue
            moved = False
            for j in range(off + 3, off + 1 + k):
                if _lit_value(assigns, db[j]) != -1:
                    db[off + 2] = db[j]
                    db[j] = false_lit
                    if prev == -1:
                        watch_head[p] = nxt
                    else:
                        wn_next[prev] = nxt
                    wn_blocker[i] = first
                    wn_next[i] = watch_head[db[off + 2] ^ 1]
                    watch_head[db[off + 2] ^ 1] = i
                    moved = True
                    break
            if moved:
                i = nxt
                continue
            prev = i
            if _lit_value(assigns, first) == -1:
                state[S_QHEAD] = state[S_TRAIL]
                return off
            _enqueue(first, off, assigns, level, reason, trail, state)
            i = nxt
    return -1


def _cancel_until(lvl, assigns, level, reason, trail, trail_lim, polarity,
                  heap, heap_pos, activity, state):
    if state[S_LEVELS] <= lvl:
        return
    bound = trail_lim[lvl]
    i = state[S_TRAIL] - 1
    while i >= bound:
        c = trail[i]
        v = c >> 1
        polarity[v] = assigns[v]
        assigns[v] = 0
        reason[v] = -1
        _heap_insert(heap, heap_pos, activity, state, v)
        i -= 1
    state[S_TRAIL] = bound
    state[S_QHEAD] = bound
    state[S_LEVELS] = lvl


def _analyze(confl, db, assigns, level, reason, trail, seen, learnt,
             heap, heap_pos, activity, state, fstate):
    # first-UIP learning; returns (learnt_len, backtrack_level) with the
    # asserting literal in learnt[0] and a max-level literal in learnt[1]
    path_c = 0
    p = -1
    learnt_len = 1
    idx = state[S_TRAIL] - 1
    cur = state[S_LEVELS]
    while True:
        k = db[confl]
        j0 = confl + 1
        if p != -1:
            j0 += 1  # db[confl+1] is the literal this clause implied
        for j in range(j0, confl + 1 + k):
            q = db[j]
            v = q >> 1
            if seen[v] == 0 and level[v] > 0:
                seen[v] = 1
                _bump(heap, heap_pos, activity, state, fstate, v)
                if level[v] >= cur:
                    path_c += 1
                else:
                    learnt[learnt_len] = q
                    learnt_len += 1
        while seen[trail[idx] >> 1] == 0:
            idx -= 1
        p = trail[idx]
        idx -= 1
        seen[p >> 1] = 0
        path_c -= 1
        if path_c <= 0:
            break
        confl = reason[p >> 1]
    learnt[0] = p ^ 1
    if learnt_len == 1:
        bt = 0
    else:
        mi = 1
        for j in range(2, learnt_len):
            if level[learnt[j] >> 1] > level[learnt[mi] >> 1]:
                mi = j
        tmp = learnt[1]
        learnt[1] = learnt[mi]
        learnt[mi] = tmp
        bt = level[learnt[1] >> 1]
    for j in range(1, learnt_len):
        seen[learnt[j] >> 1] = 0
    fstate[F_VARINC] *= _VAR_DECAY_INV
    return learnt_len, bt


def _analyze_final(q, db, assigns, level, reason, trail, trail_lim, seen,
                   core_buf, state):
    # q is the negation of a failed assumption (q is the code on the
    # trail); fills core_buf with the codes of the assumptions that
    # imply the failure, returns its length
    core_buf[0] = q ^ 1
    n = 1
    if state[S_LEVELS] == 0:
        return n
    seen[q >> 1] = 1
    i = state[S_TRAIL] - 1
    while i >= trail_lim[0]:
        c = trail[i]
        v = c >> 1
        if seen[v] != 0:
            off = reason[v]
            if off == -1:
                # a decision below the assumption prefix is an assumption
                core_buf[n] = c
                n += 1
            else:
                k = db[off]
                for j in range(off + 2, off + 1 + k):
                    u = db[j] >> 1
                    if level[u] > 0:
                        seen[u] = 1
            seen[v] = 0
        i -= 1
    seen[q >> 1] = 0
    return n


def _luby(x):
    # Luby restart sequence 1,1,2,1,1,2,4,... (x is 0-based)
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


def _xorshift(state):
    # keep every intermediate inside 63 bits so the compiled int64 path
    # and the plain-python path produce the same stream
    x = int(state[S_RNG])
    x ^= (x << 13) & 0x7FFFFFFFFFFFFFFF
    x ^= x >> 7
    x ^= (x << 17) & 0x7FFFFFFFFFFFFFFF
    if x == 0:
        x = 88172645463325252
    state[S_RNG] = x
    return x


def _refill_heap(assigns, heap, heap_pos, activity, state, num_vars):
    # called once per solve: every unassigned var must be decidable
    for v in range(1, num_vars + 1):
        if assigns[v] == 0 and heap_pos[v] < 0:
            _heap_insert(heap, heap_pos, activity, state, v)


def _search(db, assigns, level, reason, trail, trail_lim, polarity, seen,
            learnt, core_buf, heap, heap_pos, activity, watch_head, wn_next,
            wn_clause, wn_blocker, assumptions, budget, num_vars, state,
            fstate):
    n_assumps = len(assumptions)
    conflicts_here = 0
    restart_limit = _RESTART_BASE * _luby(state[S_RESTARTS])
    conflicts_since_restart = 0
    while True:
        # keep enough slack for one worst-case learned clause
        if state[S_DB] + num_vars + 2 > len(db):
            return GROW_DB
        if state[S_WN] + 2 > len(wn_next):
            return GROW_WATCH
        confl = _propagate(db, assigns, level, reason, trail, watch_head,
                           wn_next, wn_clause, wn_blocker, state)
        if confl != -1:
            state[S_CONFLICTS] += 1
            conflicts_here += 1
            conflicts_since_restart += 1
            if state[S_LEVELS] == 0:
                state[S_CORELEN] = 0
                return UNSAT
            learnt_len, bt = _analyze(confl, db, assigns, level, reason,
                                      trail, seen, learnt, heap, heap_pos,
                                      activity, state, fstate)
            _cancel_until(bt, assigns, level, reason, trail, trail_lim,
                          polarity, heap, heap_pos, activity, state)
            if learnt_len == 1:
                _enqueue(learnt[0], -1, assigns, level, reason, trail, state)
            else:
                off = state[S_DB]
                db[off] = learnt_len
                for j in range(learnt_len):
                    db[off + 1 + j] = learnt[j]
                state[S_DB] = off + learnt_len + 1
                _attach_watch(off, db[off + 1], db[off + 2], watch_head,
                              wn_next, wn_clause, wn_blocker, state)
                _attach_watch(off, db[off + 2], db[off + 1], watch_head,
                              wn_next, wn_clause, wn_blocker, state)
                _enqueue(learnt[0], off, assigns, level, reason, trail, state)
            if budget >= 0 and conflicts_here >= budget:
                _cancel_until(0, assigns, level, reason, trail, trail_lim,
                              polarity, heap, heap_pos, activity, state)
                return BUDGET
            continue
        if conflicts_since_restart >= restart_limit:
            state[S_RESTARTS] += 1
            restart_limit = _RESTART_BASE * _luby(state[S_RESTARTS])
            conflicts_since_restart = 0
            _cancel_until(0, assigns, level, reason, trail, trail_lim,
                          polarity, heap, heap_pos, activity, state)
            continue
        # establish assumptions, then decide
        next_lit = -1
        while next_lit == -1:
            lvl = state[S_LEVELS]
            if lvl < n_assumps:
                p = assumptions[lvl]
                val = _lit_value(assigns, p)
                if val == 1:
                    trail_lim[lvl] = state[S_TRAIL]
                    state[S_LEVELS] = lvl + 1
                    continue
                if val == -1:
                    state[S_CORELEN] = _analyze_final(
                        p ^ 1, db, assigns, level, reason, trail, trail_lim,
                        seen, core_buf, state)
                    _cancel_until(0, assigns, level, reason, trail, trail_lim,
                                  polarity, heap, heap_pos, activity, state)
                    return UNSAT
                next_lit = p
                break
            while state[S_HEAP] > 0:
                v = _heap_pop(heap, heap_pos, activity, state)
                if assigns[v] == 0:
                    pol = polarity[v]
                    if state[S_RNG] != 0 and _xorshift(state) % 64 == 0:
                        pol = 1 if _xorshift(state) % 2 == 0 else -1
                    next_lit = 2 * v + (1 if pol <= 0 else 0)
                    break
            if next_lit == -1:
                return SAT
        state[S_DECISIONS] += 1
        trail_lim[state[S_LEVELS]] = state[S_TRAIL]
        state[S_LEVELS] += 1
        _enqueue(next_lit, -1, assigns, level, reason, trail, state)


_lit_value = _jit(_lit_value)
_heap_up = _jit(_heap_up)
_heap_down = _jit(_heap_down)
_heap_insert = _jit(_heap_insert)
_heap_pop = _jit(_heap_pop)
_bump = _jit(_bump)
_enqueue = _jit(_enqueue)
_attach_watch = _jit(_attach_watch)
_attach_range = _jit(_attach_range)
_propagate = _jit(_propagate)
_cancel_until = _jit(_cancel_until)
_analyze = _jit(_analyze)
_analyze_final = _jit(_analyze_final)
_luby = _jit(_luby)
_xorshift = _jit(_xorshift)
_refill_heap = _jit(_refill_heap)
_search = _jit(_search)
