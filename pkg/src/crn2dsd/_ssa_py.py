"""Pure-Python direct-method SSA kernel.

Fallback twin of the compiled kernel in ``_ssa_core.pyx``: identical
arithmetic, identical generator update order, bit-identical trajectories.
Keep the two in lockstep when changing either.
"""

from math import log

from .rng import GOLDEN, INV_2_53, MASK64

STOP_QUIESCENT = 0
STOP_MAX_STEPS = 1
STOP_MAX_TIME = 2


def run(n_species, r_off, r_idx, r_st, p_off, p_idx, p_st, rates, counts,
        seed, max_steps, max_time):
    """Run the direct method until quiescence, a step bound, or a time bound.

    ``counts`` is mutated in place. Returns (times, events, t_final, stop
    code). ``max_steps < 0`` means unlimited.
    """
    nr = len(rates)
    props = [0.0] * nr
    state = seed & MASK64
    t = 0.0
    steps = 0
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
        state = (state + GOLDEN) & MASK64
        z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= (z >> 31)
        u1 = (z >> 11) * INV_2_53
        dt = -log(1.0 - u1) / a0
        if t + dt > max_time:
            return times, events, max_time, STOP_MAX_TIME
        t = t + dt
        state = (state + GOLDEN) & MASK64
        z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= (z >> 31)
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
