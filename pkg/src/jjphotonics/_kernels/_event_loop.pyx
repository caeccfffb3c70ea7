# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled event-loop kernel; arithmetic twin of _pure.thinning_chunk."""

from libc.math cimport exp, floor


def thinning_chunk(double[::1] waits, double[::1] accepts, state, params,
                   double[::1] drive_scale, double[::1] out_times,
                   double[::1] out_charge):
    cdef double t = state[0]
    cdef double q = state[1]
    cdef int latched = state[2]
    cdef double next_unlatch = state[3]

    cdef double lam_max = params[0]
    cdef double base_rate = params[1]
    cdef double rc = params[2]
    cdef double shift = params[3]
    cdef double detune = params[4]
    cdef double inv2s2 = params[5]
    cdef double duration = params[6]
    cdef double period = params[7]
    cdef double dt_drive = params[8]
    cdef int latch_enabled = params[9]
    cdef double enter_frac = params[10]
    cdef double frus_onset = params[11]
    cdef int exit_on_frustration = params[12]
    cdef int charge_reset = params[13]

    cdef Py_ssize_t n_drive = drive_scale.shape[0]
    cdef Py_ssize_t n_chunk = waits.shape[0]
    cdef Py_ssize_t n = 0
    cdef Py_ssize_t i = 0
    cdef bint done = False
    cdef double t_next, x, frac, s, lam, d, k
    cdef Py_ssize_t j, j1

    while i < n_chunk:
        t_next = t + waits[i] / lam_max
        if t_next > duration:
            t = t_next
            i += 1
            done = True
            break
        q = q * exp(-(t_next - t) / rc)
        t = t_next
        if latched and exit_on_frustration and t >= next_unlatch:
            latched = 0
        if n_drive > 0:
            x = (t % period) / dt_drive
            j = <Py_ssize_t> x
            frac = x - j
            j1 = j + 1 if j + 1 < n_drive else 0
            s = drive_scale[j] * (1.0 - frac) + drive_scale[j1] * frac
        else:
            s = 1.0
        if latched:
            lam = 0.0
        else:
            d = detune - q * shift
            lam = base_rate * s * s * exp(-d * d * inv2s2)
        if accepts[i] * lam_max < lam:
            q = 1.0 if charge_reset else q + 1.0
            out_times[n] = t
            out_charge[n] = q
            n += 1
            if latch_enabled and s >= enter_frac:
                latched = 1
                k = floor((t - frus_onset) / period)
                next_unlatch = (k + 1.0) * period + frus_onset
        i += 1
    return n, i, done, (t, q, latched, next_unlatch)
