# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled direct-method SSA kernel.

Twin of ``_ssa_py.run``: identical arithmetic and generator update order,
bit-identical trajectories. Keep the two in lockstep when changing either.
"""

from libc.math cimport log

ctypedef unsigned long long u64

cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL

STOP_QUIESCENT = 0
STOP_MAX_STEPS = 1
STOP_MAX_TIME = 2


cdef inline u64 _mix(u64 z) nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def run(int n_species,
        int[::1] r_off, int[::1] r_idx, int[::1] r_st,
        int[::1] p_off, int[::1] p_idx, int[::1] p_st,
        double[::1] rates,
        long long[::1] counts,
        unsigned long long seed,
        long long max_steps, double max_time):
    """Mirror of the pure-Python kernel; see ``_ssa_py.run``."""
    cdef int nr = rates.shape[0]
    cdef double[::1] props
    import numpy
    props_arr = numpy.zeros(nr, dtype=numpy.float64)
    props = props_arr

    cdef u64 state = seed, z
    cdef double t = 0.0, a0, p, u1, u2, dt, thresh, cum
    cdef long long steps = 0, c, need, m
    cdef int j, k, pick
    times = []
    events = []
    while True:
        a0 = 0.0
        for j in range(nr):
            p = rates[j]
            for k in range(r_off[j], r_off[j + 1]):
                c = counts[r_idx[k]]
                need = r_st[k]
                if c < need:
                    p = 0.0
                    break
                for m in range(need):
                    p *= (c - m)
            props[j] = p
            a0 += p
        if a0 <= 0.0:
            return times, events, t, STOP_QUIESCENT
        if max_steps >= 0 and steps >= max_steps:
            return times, events, t, STOP_MAX_STEPS
        state = state + GOLDEN
        z = _mix(state)
        u1 = (z >> 11) * INV_2_53
        dt = -log(1.0 - u1) / a0
        if t + dt > max_time:
            return times, events, max_time, STOP_MAX_TIME
        t = t + dt
        state = state + GOLDEN
        z = _mix(state)
        u2 = (z >> 11) * INV_2_53
        thresh = u2 * a0
        cum = 0.0
        pick = -1
        for j in range(nr):
            if props[j] > 0.0:
                cum += props[j]
                pick = j
                if thresh < cum:
                    break
        for k in range(r_off[pick], r_off[pick + 1]):
            counts[r_idx[k]] -= r_st[k]
        for k in range(p_off[pick], p_off[pick + 1]):
            counts[p_idx[k]] += p_st[k]
        times.append(t)
        events.append(pick)
        steps += 1
