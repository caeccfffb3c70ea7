"""Pure-Python twin of the compiled event-loop kernel.

Must stay arithmetic-identical to _event_loop.pyx: same operations in the
same order on C doubles (math.exp is the same libm call the C code makes),
so a given random stream produces bit-identical event records on either
implementation.
"""

from math import exp, floor


def thinning_chunk(waits, accepts, state, params, drive_scale, out_times, out_charge):
    """Consume one chunk of pre-drawn randoms, appending accepted events.

    waits: standard-exponential draws; accepts: uniform(0,1) draws.
    state: (t, q, latched, next_unlatch); params: see simulate_source.
    Returns (n_emitted, consumed, done, state).
    """
    t, q, latched, next_unlatch = state
    (lam_max, base_rate, rc, shift, detune, inv2s2, duration,
     period, dt_drive, latch_enabled, enter_frac, frus_onset,
     exit_on_frustration, charge_reset) = params
    n_drive = len(drive_scale)
    n = 0
    done = False
    i = 0
    n_chunk = len(waits)
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
            j = int(x)
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
