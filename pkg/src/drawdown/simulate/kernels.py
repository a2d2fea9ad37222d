"""Compiled simulation kernels.

Each batch kernel fills rows ``[start, start + count)`` of a preallocated
output array; row ``i`` depends only on the key and on ``i``.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

from drawdown.simulate.philox import (
    STREAM_BES,
    STREAM_BRIDGE,
    STREAM_EXTREMES,
    STREAM_HORIZON,
    STREAM_INCREMENTS,
    STREAM_REJECTION,
    STREAM_REJECTION_BRIDGE,
    new_stream,
    next_normal,
    uniform_pair,
)

# Columns of the per-path table.
PATH_FIELDS = (
    "T",
    "d_plus",
    "d_minus",
    "inf",
    "sup",
    "h_inf",
    "h_sup",
    "x_T",
    "inf_first",
    "d_plus_coarse",
    "d_minus_coarse",
    "pre_fall",
    "mid_fall",
    "end_fall",
    "pre_sup",
    "pre_rise",
    "post_sup",
    "post_rise",
    "post_fall",
    "n_steps",
)
F = {name: i for i, name in enumerate(PATH_FIELDS)}
N_PATH_FIELDS = len(PATH_FIELDS)

HORIZON_FIXED = 0
HORIZON_EXPONENTIAL = 1

HIT_TARGET = 0
HIT_FLOOR = 1
CENSORED = 2
STEP_CAP = 3

HIT_FIELDS = ("status", "d_minus", "d_plus", "hit_time", "attempts")
N_HIT_FIELDS = len(HIT_FIELDS)

# Bridge crossing probabilities below exp(-40) are not worth a uniform.
_BRIDGE_CUTOFF = 20.0


@nb.njit(inline="always", cache=True)
def _num_steps(T, dt):
    n_full = int(math.floor(T / dt))
    last = T - n_full * dt
    if last <= 1e-12 * dt:
        last = 0.0
    return n_full, last


# An interval maximum exceeds the larger endpoint by sqrt(EXCESS h) with
# probability below exp(-2 EXCESS); intervals that could only matter
# beyond that margin are not sampled.
_EXCESS = 16.0


@nb.njit(inline="always", cache=True)
def _interval_extremes(k0, k1, path, i, xp, xq, h, smax, smin, rise, fall, bridge):
    """Maximum and minimum of the path over grid interval ``i``.

    Without ``bridge`` these are the endpoint values.  With it, the
    Brownian-bridge maximum and minimum are sampled (independently, from
    their exact marginal laws) whenever either could change the running
    state ``smax, smin, rise, fall``.  Draws are keyed by ``(path, i)`` so
    a second pass over the same interval sees the same values.
    """
    top = max(xp, xq)
    bot = min(xp, xq)
    if not bridge:
        return top, bot
    cap = math.sqrt(_EXCESS * h)
    need_max = top + cap > smax or top + cap - xq > fall or top + cap - smin > rise
    need_min = bot - cap < smin or smax - bot + cap > fall or xq - bot + cap > rise
    if need_max or need_min:
        u0, u1 = uniform_pair(k0, k1, STREAM_EXTREMES, path, 0, i)
        d2 = (xq - xp) * (xq - xp)
        if need_max:
            top = 0.5 * (xp + xq + math.sqrt(d2 - 2.0 * h * math.log(u0)))
        if need_min:
            bot = 0.5 * (xp + xq - math.sqrt(d2 - 2.0 * h * math.log(u1)))
    return top, bot


@nb.njit(inline="always", cache=True)
def _advance(top, bot, xp, xq, smax, smin, rise, fall):
    # Inside a rising interval the minimum is taken to come before the
    # maximum, inside a falling one after it.
    if xq >= xp:
        rise = max(rise, top - bot)
    else:
        fall = max(fall, top - bot)
    fall = max(fall, smax - bot, top - xq)
    rise = max(rise, xq - min(smin, bot), top - smin)
    return max(smax, top), min(smin, bot), rise, fall


@nb.njit(cache=True)
def _span(xs, k0, k1, path, bridge, n_full, dt, last, a_idx, a_virt, a_val, b_idx, b_virt, b_val):
    """(max, max rise, max fall) of the path between two marked points.

    A mark is either grid point ``idx`` or, with ``virt``, an interior
    point of interval ``idx`` with value ``val``.  The partial intervals
    next to interior marks are taken as straight lines.
    """
    if a_virt:
        if b_virt and b_idx == a_idx:
            d = b_val - a_val
            return max(a_val, b_val), max(d, 0.0), max(-d, 0.0)
        p = xs[a_idx + 1]
        smax = max(a_val, p)
        smin = min(a_val, p)
        rise = max(p - a_val, 0.0)
        fall = max(a_val - p, 0.0)
        i0 = a_idx + 1
    else:
        p = xs[a_idx]
        smax = p
        smin = p
        rise = 0.0
        fall = 0.0
        i0 = a_idx
    for i in range(i0, b_idx):
        q = xs[i + 1]
        h = dt if i < n_full else last
        top, bot = _interval_extremes(k0, k1, path, i, p, q, h, smax, smin, rise, fall, bridge)
        smax, smin, rise, fall = _advance(top, bot, p, q, smax, smin, rise, fall)
        p = q
    if b_virt:
        smax, smin, rise, fall = _advance(max(p, b_val), min(p, b_val), p, b_val, smax, smin, rise, fall)
    return smax, rise, fall


@nb.njit(nogil=True, cache=True)
def path_batch(k0, k1, start, count, kind, horizon, dt, mu, x0, antithetic, bridge, segments, out):
    """Simulate paths ``start .. start + count - 1`` of BM(mu) on a uniform grid.

    ``kind`` selects a fixed horizon (``horizon`` = t) or an exponential one
    (``horizon`` = lambda, T drawn first).  The grid covers [0, T] exactly,
    with a final partial step.  Extremes, their first attainment times and
    the running maximum rise/fall are tracked online; with ``bridge`` the
    extremes between grid points are sampled from the Brownian bridge and
    an extreme inside an interval is dated uniformly within one half of it.  The plain
    grid quantities on the even-indexed sub-grid (step 2 dt) are kept for
    extrapolation in dt.  With ``segments`` the path is stored and the
    rises/falls of its pieces between 0, H_I, H_S and T are computed in a
    second pass.
    """
    sq = math.sqrt(dt)
    for row in range(start, start + count):
        base = row
        sign = 1.0
        if antithetic and (row & 1) == 1:
            base = row - 1
            sign = -1.0
        if kind == HORIZON_FIXED:
            T = horizon
        else:
            u, _ = uniform_pair(k0, k1, STREAM_HORIZON, base, 0, 0)
            T = -math.log(u) / horizon
        n_full, last = _num_steps(T, dt)
        n = n_full + (1 if last > 0.0 else 0)
        if segments:
            xs = np.empty(n + 1)
            xs[0] = 0.0
        else:
            xs = np.empty(0)

        x = 0.0
        t = 0.0
        smax = 0.0
        smin = 0.0
        hs = 0.0
        hi = 0.0
        i_sup = 0
        i_inf = 0
        v_sup = False
        v_inf = False
        rise = 0.0
        fall = 0.0
        cmax = 0.0
        cmin = 0.0
        crise = 0.0
        cfall = 0.0
        g = new_stream(k0, k1, STREAM_INCREMENTS, base, 0)
        for i in range(n):
            z, g = next_normal(g)
            xp = x
            if i < n_full:
                h = dt
                x += mu * h + sign * sq * z
                t = (i + 1) * dt
            else:
                h = last
                x += mu * h + sign * math.sqrt(h) * z
                t = T
            if segments:
                xs[i + 1] = x
            top, bot = _interval_extremes(k0, k1, row, i, xp, x, h, smax, smin, rise, fall, bridge)
            # an interior extreme is dated uniformly in the half of the
            # interval implied by the order used in _advance
            if top > smax:
                v_sup = top > x
                i_sup = i if v_sup else i + 1
                hs = t
                if v_sup:
                    w, _ = uniform_pair(k0, k1, STREAM_EXTREMES, row, 1, i)
                    hs = t - h + 0.5 * h * (w + (1.0 if x >= xp else 0.0))
            if bot < smin:
                v_inf = bot < x
                i_inf = i if v_inf else i + 1
                hi = t
                if v_inf:
                    _, w = uniform_pair(k0, k1, STREAM_EXTREMES, row, 1, i)
                    hi = t - h + 0.5 * h * (w + (0.0 if x >= xp else 1.0))
            smax, smin, rise, fall = _advance(top, bot, xp, x, smax, smin, rise, fall)
            if (i & 1) == 1 or i == n - 1:
                if x > cmax:
                    cmax = x
                if x < cmin:
                    cmin = x
                if x - cmin > crise:
                    crise = x - cmin
                if cmax - x > cfall:
                    cfall = cmax - x

        inf_first = hi < hs or (hi == hs and rise >= fall)
        o = out[row]
        o[0] = T
        o[1] = rise
        o[2] = fall
        o[3] = x0 + smin
        o[4] = x0 + smax
        o[5] = hi
        o[6] = hs
        o[7] = x0 + x
        o[8] = 1.0 if inf_first else 0.0
        o[9] = crise
        o[10] = cfall
        o[19] = n
        if segments:
            psup, prise, pfall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                       0, False, 0.0, i_inf, v_inf, smin)
            o[11] = pfall
            o[14] = psup
            o[15] = prise
            qsup, qrise, qfall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                       i_inf, v_inf, smin, n, False, 0.0)
            o[16] = qsup - x
            o[17] = qrise
            o[18] = qfall
            if inf_first:
                _, _, mfall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                    i_inf, v_inf, smin, i_sup, v_sup, smax)
                _, _, efall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                    i_sup, v_sup, smax, n, False, 0.0)
            else:
                _, _, mfall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                    i_sup, v_sup, smax, i_inf, v_inf, smin)
                _, _, efall = _span(xs, k0, k1, row, bridge, n_full, dt, last,
                                    i_inf, v_inf, smin, n, False, 0.0)
            o[12] = mfall
            o[13] = efall
        else:
            for j in range(11, 19):
                o[j] = np.nan


@nb.njit(inline="always", cache=True)
def _bridge_hit(k0, k1, stream, path, attempt, draw, gap0, gap1, dt, which):
    """Whether a Brownian bridge between two points on one side of a level crosses it."""
    prod = gap0 * gap1
    if prod > _BRIDGE_CUTOFF * dt:
        return False
    u0, u1 = uniform_pair(k0, k1, stream, path, attempt, draw)
    u = u0 if which == 0 else u1
    return u < math.exp(-2.0 * prod / dt)


@nb.njit(nogil=True, cache=True)
def hitting_batch(k0, k1, start, count, mu, beta, alpha, dt, bridge, u_cap, max_steps, out):
    """Run BM(mu) from 0 until it reaches beta or -alpha (``alpha = inf`` for no floor).

    Records the maximum fall and rise accumulated before the stopping time.
    A path whose fall exceeds ``u_cap`` is stopped and marked censored: its
    fall at the hitting time is then only known to exceed ``u_cap``.
    """
    sq = math.sqrt(dt)
    for row in range(start, start + count):
        x = 0.0
        smax = 0.0
        smin = 0.0
        rise = 0.0
        fall = 0.0
        status = STEP_CAP
        steps = 0
        g = new_stream(k0, k1, STREAM_INCREMENTS, row, 0)
        while steps < max_steps:
            z, g = next_normal(g)
            xn = x + mu * dt + sq * z
            steps += 1
            if xn >= beta or (bridge and _bridge_hit(k0, k1, STREAM_BRIDGE, row, 0, steps, beta - x, beta - xn, dt, 0)):
                status = HIT_TARGET
                if beta - smin > rise:
                    rise = beta - smin
                break
            if xn <= -alpha or (bridge and _bridge_hit(k0, k1, STREAM_BRIDGE, row, 0, steps, x + alpha, xn + alpha, dt, 1)):
                status = HIT_FLOOR
                break
            x = xn
            if x > smax:
                smax = x
            if x < smin:
                smin = x
            if x - smin > rise:
                rise = x - smin
            if smax - x > fall:
                fall = smax - x
            if fall > u_cap:
                status = CENSORED
                break
        o = out[row]
        o[0] = status
        o[1] = fall
        o[2] = rise
        o[3] = steps * dt
        o[4] = 1.0


@nb.njit(inline="always", cache=True)
def _bes_drift(mu, x):
    if mu == 0.0:
        return 1.0 / x
    return mu / math.tanh(mu * x)


@nb.njit(nogil=True, cache=True)
def bes3_sde_batch(k0, k1, start, count, mu, beta, eps, dt, max_steps, out):
    """Euler-Maruyama for BES(3, mu) from ``eps`` until it reaches ``beta``.

    Close to 0 (below 2 sqrt(dt)) the step is cut to ``x^2 / 4`` so the
    singular drift cannot throw the path across the origin; a negative
    value is reflected.
    """
    near = 2.0 * math.sqrt(dt)
    for row in range(start, start + count):
        x = eps
        smax = eps
        smin = eps
        fall = 0.0
        t = 0.0
        steps = 0
        status = STEP_CAP
        g = new_stream(k0, k1, STREAM_BES, row, 0)
        while steps < max_steps:
            remaining = dt
            while remaining > 0.0:
                h = remaining
                if x < near:
                    h = min(remaining, 0.25 * x * x)
                z, g = next_normal(g)
                x = x + _bes_drift(mu, x) * h + math.sqrt(h) * z
                if x < 0.0:
                    x = -x
                if x == 0.0:
                    x = eps
                remaining -= h
                t += h
                if x >= beta:
                    break
                if x > smax:
                    smax = x
                if x < smin:
                    smin = x
                if smax - x > fall:
                    fall = smax - x
            steps += 1
            if x >= beta:
                status = HIT_TARGET
                break
        o = out[row]
        o[0] = status
        o[1] = fall
        o[2] = beta - smin
        o[3] = t
        o[4] = 1.0


@nb.njit(nogil=True, cache=True)
def bes3_rejection_batch(k0, k1, start, count, mu, beta, eps, dt, max_attempts, max_steps, out):
    """BM(mu) from ``eps`` conditioned to reach ``beta`` before 0, by rejection.

    Each attempt is an independent path with Brownian-bridge checks for
    both levels; the first attempt that reaches ``beta`` is kept.
    """
    sq = math.sqrt(dt)
    for row in range(start, start + count):
        status = STEP_CAP
        fall = 0.0
        smin = eps
        t = 0.0
        attempt = 0
        while attempt < max_attempts:
            x = eps
            smax = eps
            smin = eps
            fall = 0.0
            steps = 0
            outcome = -1
            g = new_stream(k0, k1, STREAM_REJECTION, row, attempt)
            while steps < max_steps:
                z, g = next_normal(g)
                xn = x + mu * dt + sq * z
                steps += 1
                if xn >= beta or _bridge_hit(k0, k1, STREAM_REJECTION_BRIDGE, row, attempt, steps, beta - x, beta - xn, dt, 0):
                    outcome = HIT_TARGET
                    break
                if xn <= 0.0 or _bridge_hit(k0, k1, STREAM_REJECTION_BRIDGE, row, attempt, steps, x, xn, dt, 1):
                    outcome = HIT_FLOOR
                    break
                x = xn
                if x > smax:
                    smax = x
                if x < smin:
                    smin = x
                if smax - x > fall:
                    fall = smax - x
            attempt += 1
            if outcome == HIT_TARGET:
                status = HIT_TARGET
                t = steps * dt
                break
        o = out[row]
        o[0] = status
        o[1] = fall
        o[2] = beta - smin
        o[3] = t
        o[4] = attempt
