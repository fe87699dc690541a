# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for censored-subordinator path simulation.

Per step the position falls by h^(1/beta) * S with S a standard one-sided
stable draw (Kanter's representation); a step that would cross 0 is
censored, keeping the pre-jump position; a path ends when its position
falls below the stop threshold.  Runaway paths (max_steps hit) are flagged
with lifetime -1 and handled by the Python wrappers.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport M_PI, NAN, exp, log, pow, sin

import numpy as np

from numpy.random cimport bitgen_t


cdef inline double _next_double(bitgen_t *rng) noexcept nogil:
    return rng.next_double(rng.state)


cdef inline double _stable(bitgen_t *rng, double beta, double c1, double c2,
                           double c3) noexcept nogil:
    cdef double u = _next_double(rng)
    cdef double e = -log(1.0 - _next_double(rng))
    cdef double la
    if u < 1e-16:
        u = 1e-16
    elif u > 0.9999999999999999:
        u = 0.9999999999999999
    if e < 1e-300:
        e = 1e-300
    la = (c1 * log(sin(beta * M_PI * u))
          + log(sin((1.0 - beta) * M_PI * u))
          - c2 * log(sin(M_PI * u)))
    return exp(c3 * (la - log(e)))


cdef bitgen_t *_bitgen(object generator) except NULL:
    return <bitgen_t *> PyCapsule_GetPointer(
        generator.bit_generator.capsule, "BitGenerator")


def lifetimes_block(double x, double beta, double h, double threshold,
                    Py_ssize_t n, object generator, long long max_steps):
    """n independent paths; returns (lifetimes, resurrections, first_res)."""
    cdef bitgen_t *rng = _bitgen(generator)
    life_arr = np.empty(n, dtype=np.float64)
    res_arr = np.zeros(n, dtype=np.int64)
    fr_arr = np.full(n, np.nan)
    cdef double[::1] life = life_arr
    cdef long long[::1] res = res_arr
    cdef double[::1] fr = fr_arr
    cdef double c1 = beta / (1.0 - beta)
    cdef double c2 = 1.0 / (1.0 - beta)
    cdef double c3 = (1.0 - beta) / beta
    cdef double scale = pow(h, 1.0 / beta)
    cdef double pos, d
    cdef long long steps, nres
    cdef int runaway
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            pos = x
            steps = 0
            nres = 0
            runaway = 0
            while pos >= threshold:
                if steps >= max_steps:
                    runaway = 1
                    break
                d = scale * _stable(rng, beta, c1, c2, c3)
                if d >= pos:
                    nres += 1
                    if nres == 1:
                        fr[i] = pos
                else:
                    pos -= d
                steps += 1
            life[i] = -1.0 if runaway else steps * h
            res[i] = nres
    return life_arr, res_arr, fr_arr


def paired_lifetimes_block(double x, double beta, double h, double threshold,
                           Py_ssize_t n, object generator, long long max_steps):
    """Coupled coarse (step h) and fine (step h/2) paths on one common
    subordinator: coarse increments are pairwise sums of the fine draws.

    Returns (life_coarse, life_fine); -1 flags runaway.
    """
    cdef bitgen_t *rng = _bitgen(generator)
    coarse_arr = np.empty(n, dtype=np.float64)
    fine_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] coarse = coarse_arr
    cdef double[::1] fine = fine_arr
    cdef double c1 = beta / (1.0 - beta)
    cdef double c2 = 1.0 / (1.0 - beta)
    cdef double c3 = (1.0 - beta) / beta
    cdef double hf = 0.5 * h
    cdef double scale = pow(hf, 1.0 / beta)
    cdef double pos_c, pos_f, acc, d
    cdef long long steps_c, steps_f, draws, guard
    cdef int done_c, done_f, parity, runaway
    cdef Py_ssize_t i
    guard = 3 * max_steps
    with nogil:
        for i in range(n):
            pos_c = x
            pos_f = x
            acc = 0.0
            parity = 0
            steps_c = 0
            steps_f = 0
            draws = 0
            runaway = 0
            done_c = 1 if pos_c < threshold else 0
            done_f = 1 if pos_f < threshold else 0
            while not (done_c and done_f):
                if draws >= guard:
                    runaway = 1
                    break
                d = scale * _stable(rng, beta, c1, c2, c3)
                draws += 1
                if not done_f:
                    if d < pos_f:
                        pos_f -= d
                    steps_f += 1
                    if pos_f < threshold:
                        done_f = 1
                if not done_c:
                    acc += d
                    parity += 1
                    if parity == 2:
                        if acc < pos_c:
                            pos_c -= acc
                        steps_c += 1
                        acc = 0.0
                        parity = 0
                        if pos_c < threshold:
                            done_c = 1
            coarse[i] = -1.0 if runaway else steps_c * h
            fine[i] = -1.0 if runaway else steps_f * hf
    return coarse_arr, fine_arr


def path_chunk(double pos, double beta, double h, double threshold,
               object generator, double[::1] out):
    """Advance one path, writing the position held in each step interval.

    Returns (pos, n_written, resurrections, done); call again with the
    returned pos to continue a path longer than the buffer.
    """
    cdef bitgen_t *rng = _bitgen(generator)
    cdef double c1 = beta / (1.0 - beta)
    cdef double c2 = 1.0 / (1.0 - beta)
    cdef double c3 = (1.0 - beta) / beta
    cdef double scale = pow(h, 1.0 / beta)
    cdef Py_ssize_t cap = out.shape[0]
    cdef Py_ssize_t j = 0
    cdef long long res = 0
    cdef int done = 0
    cdef double d
    with nogil:
        while j < cap:
            if pos < threshold:
                done = 1
                break
            out[j] = pos
            d = scale * _stable(rng, beta, c1, c2, c3)
            if d >= pos:
                res += 1
            else:
                pos -= d
            j += 1
        if pos < threshold:
            done = 1
    return pos, j, res, done
