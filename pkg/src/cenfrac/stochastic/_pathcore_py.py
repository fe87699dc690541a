"""NumPy fallback for the compiled path kernels.

Same step semantics as ``_pathcore.pyx`` (censor on would-cross steps, stop
below threshold, -1 lifetime flags runaway), vectorized across the active
paths of a block instead of looping per path.  Random-number consumption
order differs from the compiled core, so the two backends agree
statistically, not bitwise; each is bitwise reproducible on its own.
"""

from __future__ import annotations

import numpy as np

from .stable import stable_block


def lifetimes_block(x, beta, h, threshold, n, generator, max_steps):
    scale = h ** (1.0 / beta)
    pos = np.full(n, float(x))
    steps = np.zeros(n, dtype=np.int64)
    res = np.zeros(n, dtype=np.int64)
    first = np.full(n, np.nan)
    runaway = np.zeros(n, dtype=bool)
    idx = np.nonzero(pos >= threshold)[0]
    while idx.size:
        d = scale * stable_block(generator, idx.size, beta)
        p = pos[idx]
        censor = d >= p
        newly = censor & np.isnan(first[idx])
        first[idx[newly]] = p[newly]
        res[idx[censor]] += 1
        p = p - np.where(censor, 0.0, d)
        pos[idx] = p
        steps[idx] += 1
        alive = p >= threshold
        over = alive & (steps[idx] >= max_steps)
        runaway[idx[over]] = True
        idx = idx[alive & ~over]
    lifetimes = np.where(runaway, -1.0, steps * h)
    return lifetimes, res, first


def paired_lifetimes_block(x, beta, h, threshold, n, generator, max_steps):
    hf = 0.5 * h
    scale = hf ** (1.0 / beta)
    pos_c = np.full(n, float(x))
    pos_f = np.full(n, float(x))
    acc = np.zeros(n)
    parity = np.zeros(n, dtype=np.int8)
    steps_c = np.zeros(n, dtype=np.int64)
    steps_f = np.zeros(n, dtype=np.int64)
    draws = np.zeros(n, dtype=np.int64)
    runaway = np.zeros(n, dtype=bool)
    done_c = pos_c < threshold
    done_f = pos_f < threshold
    guard = 3 * max_steps
    idx = np.nonzero(~(done_c & done_f))[0]
    while idx.size:
        d = scale * stable_block(generator, idx.size, beta)
        draws[idx] += 1

        f_act = ~done_f[idx]
        sub = idx[f_act]
        if sub.size:
            df = d[f_act]
            pf = pos_f[sub]
            pf = pf - np.where(df >= pf, 0.0, df)
            pos_f[sub] = pf
            steps_f[sub] += 1
            done_f[sub] = pf < threshold

        c_act = ~done_c[idx]
        subc = idx[c_act]
        if subc.size:
            acc[subc] += d[c_act]
            parity[subc] += 1
            fire = parity[subc] == 2
            fsub = subc[fire]
            if fsub.size:
                inc = acc[fsub]
                pc = pos_c[fsub]
                pc = pc - np.where(inc >= pc, 0.0, inc)
                pos_c[fsub] = pc
                steps_c[fsub] += 1
                acc[fsub] = 0.0
                parity[fsub] = 0
                done_c[fsub] = pc < threshold

        over = draws[idx] >= guard
        if over.any():
            osub = idx[over]
            runaway[osub] = True
            done_c[osub] = True
            done_f[osub] = True
        idx = np.nonzero(~(done_c & done_f))[0]
    coarse = np.where(runaway, -1.0, steps_c * h)
    fine = np.where(runaway, -1.0, steps_f * hf)
    return coarse, fine


def fk_blocks(x, beta, h, threshold, n, generator, max_steps, g_vec):
    """Feynman-Kac accumulation sum_k g(p_k) over all steps of each path.

    Returns (g_sums, lifetimes); the caller multiplies by h.
    """
    scale = h ** (1.0 / beta)
    pos = np.full(n, float(x))
    steps = np.zeros(n, dtype=np.int64)
    sums = np.zeros(n)
    runaway = np.zeros(n, dtype=bool)
    idx = np.nonzero(pos >= threshold)[0]
    while idx.size:
        p = pos[idx]
        sums[idx] += np.asarray(g_vec(p), dtype=float)
        d = scale * stable_block(generator, idx.size, beta)
        p = p - np.where(d >= p, 0.0, d)
        pos[idx] = p
        steps[idx] += 1
        alive = p >= threshold
        over = alive & (steps[idx] >= max_steps)
        runaway[idx[over]] = True
        idx = idx[alive & ~over]
    lifetimes = np.where(runaway, -1.0, steps * h)
    return sums, lifetimes


def trace_path(x, beta, h, threshold, generator, max_steps, block=4096):
    """Single path with the full position trace (held positions + final).

    Returns (held_positions, final_pos, resurrections, done).
    """
    scale = h ** (1.0 / beta)
    pos = float(x)
    held = []
    res = 0
    done = False
    steps = 0
    while True:
        if pos < threshold:
            done = True
            break
        if steps >= max_steps:
            break
        draws = scale * stable_block(generator, block, beta)
        for d in draws:
            if pos < threshold:
                done = True
                break
            if steps >= max_steps:
                break
            held.append(pos)
            if d >= pos:
                res += 1
            else:
                pos -= d
            steps += 1
        if done or steps >= max_steps:
            done = done or pos < threshold
            break
    return np.array(held), pos, res, done
