"""Hot numeric kernels: check-loss posteriors, MCMC chains, bootstrap coverage.

Two implementations of every kernel:

* a scalar-loop version compiled with ``numba.njit`` (``nb_*``), used by
  default — the cumulative check loss is evaluated in O(log n) from prefix
  sums of the sorted sample;
* a pure-numpy version (``np_*``) selected by setting ``CALTOL_NUMBA=0``
  (also used automatically when numba is unavailable).

Both paths are deterministic given the integer seed passed to each chain,
but they consume different RNG streams, so cross-path agreement is
statistical, not bitwise.  ``benchmarks/bench_kernels.py`` times one against
the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "slice_chain_1d",
    "mh_chain_1d",
    "slice_chain_2d",
    "mh_chain_2d",
    "coverage_one_sided",
    "coverage_two_sided",
]

_STEPOUT_CAP = 16384
_SHRINK_CAP = 1024
_ADAPT_WINDOW = 25
_QEPS = 1e-9  # guards ceil(n*tau) against float noise in n*tau

_flag = os.environ.get("CALTOL_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "off", "no")

try:
    from numba import njit as _njit

    _have_numba = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    _have_numba = False

    def _njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return wrap


NUMBA_ENABLED = _want_numba and _have_numba


# ---------------------------------------------------------------------------
# scalar helpers shared by the jitted kernels
# ---------------------------------------------------------------------------

@_njit(cache=True, nogil=True)
def _prefix_sums(ys):
    n = ys.shape[0]
    cs = np.empty(n + 1)
    cs[0] = 0.0
    for i in range(n):
        cs[i + 1] = cs[i] + ys[i]
    return cs


@_njit(cache=True, nogil=True)
def _loss_sorted(ys, cs, q, tau):
    # sum of rho_tau(y_i - q) via prefix sums; ys ascending
    n = ys.shape[0]
    k = np.searchsorted(ys, q, side="right")
    below = (1.0 - tau) * (k * q - cs[k])
    above = tau * ((cs[n] - cs[k]) - (n - k) * q)
    return below + above


@_njit(cache=True, nogil=True)
def _log_prior(pk, p1, p2, q):
    if pk == 1:  # normal(mean=p1, sd=p2)
        z = (q - p1) / p2
        return -0.5 * z * z
    if pk == 2:  # uniform(a=p1, b=p2)
        if q < p1 or q > p2:
            return -np.inf
        return 0.0
    return 0.0  # flat


@_njit(cache=True, nogil=True)
def _logpost_1d(ys, cs, q, tau, eta, pk, p1, p2):
    lp = _log_prior(pk, p1, p2, q)
    if lp == -np.inf:
        return -np.inf
    return -eta * _loss_sorted(ys, cs, q, tau) + lp


@_njit(cache=True, nogil=True)
def _logpost_2d(ys, cs, t1, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2):
    if t2 > 700.0:  # exp overflow guard; density vanishes out there anyway
        return -np.inf
    lp = _log_prior(pkl, pl1, pl2, t1)
    if lp == -np.inf:
        return -np.inf
    qu = t1 + math.exp(t2)
    lpu = _log_prior(pku, pu1, pu2, qu)
    if lpu == -np.inf:
        return -np.inf
    loss = _loss_sorted(ys, cs, t1, tau_l) + _loss_sorted(ys, cs, qu, tau_u)
    return -eta * loss + t2 + lp + lpu


@_njit(cache=True, nogil=True)
def _type1_sorted(ys, tau):
    n = ys.shape[0]
    k = int(math.ceil(n * tau - _QEPS))
    if k < 1:
        k = 1
    elif k > n:
        k = n
    return ys[k - 1]


@_njit(cache=True, nogil=True)
def _type1_any(x, tau):
    n = x.shape[0]
    k = int(math.ceil(n * tau - _QEPS))
    if k < 1:
        k = 1
    elif k > n:
        k = n
    return np.partition(x, k - 1)[k - 1]


@_njit(cache=True, nogil=True)
def _sample_scale(ys):
    # IQR, falling back to range, falling back to 1.0 for degenerate samples
    s = _type1_sorted(ys, 0.75) - _type1_sorted(ys, 0.25)
    if s <= 0.0:
        s = ys[ys.shape[0] - 1] - ys[0]
    if s <= 0.0:
        s = 1.0
    return s


@_njit(cache=True, nogil=True)
def _sd_guess(scale, eta, n, tmin):
    # Laplace-approximation scale of the posterior, using f ~ O(tmin/scale)
    return math.sqrt(scale / (eta * n * tmin))


# ---------------------------------------------------------------------------
# numba chains
# ---------------------------------------------------------------------------

@_njit(cache=True, nogil=True)
def _nb_slice_chain_1d(ys, tau, eta, pk, p1, p2, x0, w, n_keep, burn, thin, seed):
    np.random.seed(seed)
    cs = _prefix_sums(ys)
    out = np.empty(n_keep)
    x = x0
    lp = _logpost_1d(ys, cs, x, tau, eta, pk, p1, p2)
    total = burn + n_keep * thin
    for it in range(total):
        level = lp - np.random.exponential()
        u = np.random.random()
        left = x - w * u
        right = left + w
        j = 0
        while j < _STEPOUT_CAP and _logpost_1d(ys, cs, left, tau, eta, pk, p1, p2) > level:
            left -= w
            j += 1
        j = 0
        while j < _STEPOUT_CAP and _logpost_1d(ys, cs, right, tau, eta, pk, p1, p2) > level:
            right += w
            j += 1
        for _ in range(_SHRINK_CAP):
            x1 = left + np.random.random() * (right - left)
            lp1 = _logpost_1d(ys, cs, x1, tau, eta, pk, p1, p2)
            if lp1 > level:
                x = x1
                lp = lp1
                break
            if x1 < x:
                left = x1
            else:
                right = x1
        if it >= burn and (it - burn) % thin == 0:
            out[(it - burn) // thin] = x
    return out


@_njit(cache=True, nogil=True)
def _nb_mh_chain_1d(ys, tau, eta, pk, p1, p2, x0, step0, n_keep, burn, thin, seed):
    np.random.seed(seed)
    cs = _prefix_sums(ys)
    out = np.empty(n_keep)
    x = x0
    lp = _logpost_1d(ys, cs, x, tau, eta, pk, p1, p2)
    step = step0
    total = burn + n_keep * thin
    acc_win = 0
    acc_post = 0
    for it in range(total):
        x1 = x + step * np.random.normal()
        lp1 = _logpost_1d(ys, cs, x1, tau, eta, pk, p1, p2)
        if math.log(np.random.random()) < lp1 - lp:
            x = x1
            lp = lp1
            acc_win += 1
            if it >= burn:
                acc_post += 1
        if it < burn and (it + 1) % _ADAPT_WINDOW == 0:
            rate = acc_win / _ADAPT_WINDOW
            if rate > 0.4:
                step *= 2.0 if rate > 0.8 else 1.4
            elif rate < 0.2:
                step /= 2.0 if rate < 0.05 else 1.4
            acc_win = 0
        if it >= burn and (it - burn) % thin == 0:
            out[(it - burn) // thin] = x
    n_post = n_keep * thin
    return out, acc_post / n_post


@_njit(cache=True, nogil=True)
def _nb_mh_chain_2d(ys, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2,
                    t10, t20, s10, s20, n_keep, burn, thin, seed):
    np.random.seed(seed)
    cs = _prefix_sums(ys)
    out1 = np.empty(n_keep)
    out2 = np.empty(n_keep)
    t1 = t10
    t2 = t20
    lp = _logpost_2d(ys, cs, t1, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
    s1 = s10
    s2 = s20
    total = burn + n_keep * thin
    acc_win = 0
    acc_post = 0
    for it in range(total):
        c1 = t1 + s1 * np.random.normal()
        c2 = t2 + s2 * np.random.normal()
        lp1 = _logpost_2d(ys, cs, c1, c2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
        if math.log(np.random.random()) < lp1 - lp:
            t1 = c1
            t2 = c2
            lp = lp1
            acc_win += 1
            if it >= burn:
                acc_post += 1
        if it < burn and (it + 1) % _ADAPT_WINDOW == 0:
            rate = acc_win / _ADAPT_WINDOW
            if rate > 0.4:
                f = 2.0 if rate > 0.8 else 1.4
                s1 *= f
                s2 *= f
            elif rate < 0.2:
                f = 2.0 if rate < 0.05 else 1.4
                s1 /= f
                s2 /= f
            acc_win = 0
        if it >= burn and (it - burn) % thin == 0:
            out1[(it - burn) // thin] = t1
            out2[(it - burn) // thin] = t2
    n_post = n_keep * thin
    return out1, out2, acc_post / n_post


@_njit(cache=True, nogil=True)
def _nb_slice_update(ys, cs, t1, t2, which, level, w,
                     tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2):
    # one univariate slice move along coordinate `which` of the 2d target
    x = t1 if which == 0 else t2
    u = np.random.random()
    left = x - w * u
    right = left + w

    def val(z):
        if which == 0:
            return _logpost_2d(ys, cs, z, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
        return _logpost_2d(ys, cs, t1, z, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)

    j = 0
    while j < _STEPOUT_CAP and val(left) > level:
        left -= w
        j += 1
    j = 0
    while j < _STEPOUT_CAP and val(right) > level:
        right += w
        j += 1
    for _ in range(_SHRINK_CAP):
        x1 = left + np.random.random() * (right - left)
        lp1 = val(x1)
        if lp1 > level:
            return x1, lp1
        if x1 < x:
            left = x1
        else:
            right = x1
    return x, val(x)


@_njit(cache=True, nogil=True)
def _nb_slice_chain_2d(ys, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2,
                       t10, t20, w1, w2, n_keep, burn, thin, seed):
    np.random.seed(seed)
    cs = _prefix_sums(ys)
    out1 = np.empty(n_keep)
    out2 = np.empty(n_keep)
    t1 = t10
    t2 = t20
    lp = _logpost_2d(ys, cs, t1, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
    total = burn + n_keep * thin
    for it in range(total):
        level = lp - np.random.exponential()
        t1, lp = _nb_slice_update(ys, cs, t1, t2, 0, level, w1,
                                  tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
        level = lp - np.random.exponential()
        t2, lp = _nb_slice_update(ys, cs, t1, t2, 1, level, w2,
                                  tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
        if it >= burn and (it - burn) % thin == 0:
            out1[(it - burn) // thin] = t1
            out2[(it - burn) // thin] = t2
    return out1, out2


# ---------------------------------------------------------------------------
# numba batched bootstrap coverage
# ---------------------------------------------------------------------------

@_njit(cache=True, nogil=True)
def _nb_coverage_one_sided(boot, tau, eta, pk, p1, p2, alpha, upper, target,
                           sampler, n_keep, burn, thin, init_scale, seeds):
    nboot = boot.shape[0]
    n = boot.shape[1]
    tmin = min(tau, 1.0 - tau)
    succ = 0
    for b in range(nboot):
        ys = np.sort(boot[b])
        x0 = _type1_sorted(ys, tau)
        scale = _sample_scale(ys)
        if sampler == 0:
            w = max(scale, 2.0 * _sd_guess(scale, eta, n, tmin)) * init_scale
            draws = _nb_slice_chain_1d(ys, tau, eta, pk, p1, p2, x0, w,
                                       n_keep, burn, thin, seeds[b])
        else:
            step0 = _sd_guess(scale, eta, n, tmin) * init_scale
            draws, _ = _nb_mh_chain_1d(ys, tau, eta, pk, p1, p2, x0, step0,
                                       n_keep, burn, thin, seeds[b])
        if upper == 1:
            bound = _type1_any(draws, 1.0 - alpha)
            if bound >= target:
                succ += 1
        else:
            bound = _type1_any(draws, alpha)
            if bound <= target:
                succ += 1
    return succ


@_njit(cache=True, nogil=True)
def _nb_coverage_two_sided(boot, tau_l, tau_u, eta,
                           pkl, pl1, pl2, pku, pu1, pu2, alpha,
                           mode, tgt_l, tgt_u, orig_sorted, content,
                           sampler, n_keep, burn, thin, init_scale, seeds):
    nboot = boot.shape[0]
    n = boot.shape[1]
    n_orig = orig_sorted.shape[0]
    tmin = min(tau_l, 1.0 - tau_u)
    need = int(math.ceil(content * n_orig - _QEPS))
    succ = 0
    for b in range(nboot):
        ys = np.sort(boot[b])
        scale = _sample_scale(ys)
        t10 = _type1_sorted(ys, tau_l)
        gap = _type1_sorted(ys, tau_u) - t10
        t20 = math.log(max(gap, max(0.1 * scale, 1e-8)))
        sd = _sd_guess(scale, eta, n, tmin)
        if sampler == 1:
            s10 = sd * init_scale
            s20 = min(2.0, max(0.05, 1.414 * sd / math.exp(t20))) * init_scale
            th1, th2, _ = _nb_mh_chain_2d(ys, tau_l, tau_u, eta,
                                          pkl, pl1, pl2, pku, pu1, pu2,
                                          t10, t20, s10, s20,
                                          n_keep, burn, thin, seeds[b])
        else:
            w1 = max(scale, 2.0 * sd) * init_scale
            w2 = 2.0 * init_scale
            th1, th2 = _nb_slice_chain_2d(ys, tau_l, tau_u, eta,
                                          pkl, pl1, pl2, pku, pu1, pu2,
                                          t10, t20, w1, w2,
                                          n_keep, burn, thin, seeds[b])
        m = th1.shape[0]
        q_l = th1
        q_u = np.empty(m)
        mid = 0.0
        for i in range(m):
            q_u[i] = th1[i] + math.exp(th2[i])
            mid += 0.5 * (q_l[i] + q_u[i])
        mid /= m
        ustar = np.empty(m)
        for i in range(m):
            refl = 2.0 * mid - q_l[i]
            ustar[i] = q_u[i] if q_u[i] > refl else refl
        u_bound = _type1_any(ustar, 1.0 - alpha)
        l_bound = 2.0 * mid - u_bound
        if mode == 0:  # quantile success
            if l_bound <= tgt_l and u_bound >= tgt_u:
                succ += 1
        else:  # content success against the original sample's ecdf
            hi = np.searchsorted(orig_sorted, u_bound, side="right")
            lo = np.searchsorted(orig_sorted, l_bound, side="left")
            if hi - lo >= need:
                succ += 1
    return succ


# ---------------------------------------------------------------------------
# pure-numpy fallback path
# ---------------------------------------------------------------------------

def _np_logpost_1d(y, q, tau, eta, pk, p1, p2):
    lp = _np_log_prior(pk, p1, p2, q)
    if lp == -np.inf:
        return -np.inf
    r = y - q
    return -eta * float(np.sum(r * (tau - (r < 0.0)))) + lp


def _np_log_prior(pk, p1, p2, q):
    if pk == 1:
        z = (q - p1) / p2
        return -0.5 * z * z
    if pk == 2:
        if q < p1 or q > p2:
            return -np.inf
        return 0.0
    return 0.0


def _np_logpost_2d(y, t1, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2):
    if t2 > 700.0:
        return -np.inf
    lp = _np_log_prior(pkl, pl1, pl2, t1)
    if lp == -np.inf:
        return -np.inf
    qu = t1 + math.exp(t2)
    lpu = _np_log_prior(pku, pu1, pu2, qu)
    if lpu == -np.inf:
        return -np.inf
    rl = y - t1
    ru = y - qu
    loss = np.sum(rl * (tau_l - (rl < 0.0))) + np.sum(ru * (tau_u - (ru < 0.0)))
    return -eta * float(loss) + t2 + lp + lpu


def _np_type1(x, tau):
    n = len(x)
    k = min(max(int(math.ceil(n * tau - _QEPS)), 1), n)
    return float(np.partition(np.asarray(x, dtype=float), k - 1)[k - 1])


def _np_sample_scale(ys):
    s = _np_type1(ys, 0.75) - _np_type1(ys, 0.25)
    if s <= 0.0:
        s = float(ys[-1] - ys[0])
    return s if s > 0.0 else 1.0


def _np_slice_chain_1d(ys, tau, eta, pk, p1, p2, x0, w, n_keep, burn, thin, seed):
    rs = np.random.RandomState(seed)
    out = np.empty(n_keep)
    x = x0
    lp = _np_logpost_1d(ys, x, tau, eta, pk, p1, p2)
    for it in range(burn + n_keep * thin):
        level = lp - rs.exponential()
        left = x - w * rs.random_sample()
        right = left + w
        j = 0
        while j < _STEPOUT_CAP and _np_logpost_1d(ys, left, tau, eta, pk, p1, p2) > level:
            left -= w
            j += 1
        j = 0
        while j < _STEPOUT_CAP and _np_logpost_1d(ys, right, tau, eta, pk, p1, p2) > level:
            right += w
            j += 1
        for _ in range(_SHRINK_CAP):
            x1 = left + rs.random_sample() * (right - left)
            lp1 = _np_logpost_1d(ys, x1, tau, eta, pk, p1, p2)
            if lp1 > level:
                x, lp = x1, lp1
                break
            if x1 < x:
                left = x1
            else:
                right = x1
        if it >= burn and (it - burn) % thin == 0:
            out[(it - burn) // thin] = x
    return out


def _np_mh_chain_1d(ys, tau, eta, pk, p1, p2, x0, step0, n_keep, burn, thin, seed):
    rs = np.random.RandomState(seed)
    out = np.empty(n_keep)
    x = x0
    lp = _np_logpost_1d(ys, x, tau, eta, pk, p1, p2)
    step = step0
    acc_win = acc_post = 0
    total = burn + n_keep * thin
    for it in range(total):
        x1 = x + step * rs.normal()
        lp1 = _np_logpost_1d(ys, x1, tau, eta, pk, p1, p2)
        if math.log(rs.random_sample()) < lp1 - lp:
            x, lp = x1, lp1
            acc_win += 1
            if it >= burn:
                acc_post += 1
        if it < burn and (it + 1) % _ADAPT_WINDOW == 0:
            rate = acc_win / _ADAPT_WINDOW
            if rate > 0.4:
                step *= 2.0 if rate > 0.8 else 1.4
            elif rate < 0.2:
                step /= 2.0 if rate < 0.05 else 1.4
            acc_win = 0
        if it >= burn and (it - burn) % thin == 0:
            out[(it - burn) // thin] = x
    return out, acc_post / (n_keep * thin)


def _np_mh_chain_2d(ys, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2,
                    t10, t20, s10, s20, n_keep, burn, thin, seed):
    rs = np.random.RandomState(seed)
    out1 = np.empty(n_keep)
    out2 = np.empty(n_keep)
    t1, t2 = t10, t20
    lp = _np_logpost_2d(ys, t1, t2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
    s1, s2 = s10, s20
    acc_win = acc_post = 0
    total = burn + n_keep * thin
    for it in range(total):
        c1 = t1 + s1 * rs.normal()
        c2 = t2 + s2 * rs.normal()
        lp1 = _np_logpost_2d(ys, c1, c2, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)
        if math.log(rs.random_sample()) < lp1 - lp:
            t1, t2, lp = c1, c2, lp1
            acc_win += 1
            if it >= burn:
                acc_post += 1
        if it < burn and (it + 1) % _ADAPT_WINDOW == 0:
            rate = acc_win / _ADAPT_WINDOW
            if rate > 0.4:
                f = 2.0 if rate > 0.8 else 1.4
                s1 *= f
                s2 *= f
            elif rate < 0.2:
                f = 2.0 if rate < 0.05 else 1.4
                s1 /= f
                s2 /= f
            acc_win = 0
        if it >= burn and (it - burn) % thin == 0:
            out1[(it - burn) // thin] = t1
            out2[(it - burn) // thin] = t2
    return out1, out2, acc_post / (n_keep * thin)


def _np_slice_chain_2d(ys, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2,
                       t10, t20, w1, w2, n_keep, burn, thin, seed):
    rs = np.random.RandomState(seed)
    out1 = np.empty(n_keep)
    out2 = np.empty(n_keep)
    t1, t2 = t10, t20

    def logpost(a, b):
        return _np_logpost_2d(ys, a, b, tau_l, tau_u, eta, pkl, pl1, pl2, pku, pu1, pu2)

    lp = logpost(t1, t2)
    for it in range(burn + n_keep * thin):
        for which, w in ((0, w1), (1, w2)):
            level = lp - rs.exponential()
            x = t1 if which == 0 else t2
            val = (lambda z: logpost(z, t2)) if which == 0 else (lambda z: logpost(t1, z))
            left = x - w * rs.random_sample()
            right = left + w
            j = 0
            while j < _STEPOUT_CAP and val(left) > level:
                left -= w
                j += 1
            j = 0
            while j < _STEPOUT_CAP and val(right) > level:
                right += w
                j += 1
            for _ in range(_SHRINK_CAP):
                x1 = left + rs.random_sample() * (right - left)
                lp1 = val(x1)
                if lp1 > level:
                    x, lp = x1, lp1
                    break
                if x1 < x:
                    left = x1
                else:
                    right = x1
            if which == 0:
                t1 = x
            else:
                t2 = x
        if it >= burn and (it - burn) % thin == 0:
            out1[(it - burn) // thin] = t1
            out2[(it - burn) // thin] = t2
    return out1, out2


def _np_coverage_one_sided(boot, tau, eta, pk, p1, p2, alpha, upper, target,
                           sampler, n_keep, burn, thin, init_scale, seeds):
    n = boot.shape[1]
    tmin = min(tau, 1.0 - tau)
    succ = 0
    for b in range(boot.shape[0]):
        ys = np.sort(boot[b])
        x0 = _np_type1(ys, tau)
        scale = _np_sample_scale(ys)
        if sampler == 0:
            w = max(scale, 2.0 * math.sqrt(scale / (eta * n * tmin))) * init_scale
            draws = _np_slice_chain_1d(ys, tau, eta, pk, p1, p2, x0, w,
                                       n_keep, burn, thin, seeds[b])
        else:
            step0 = math.sqrt(scale / (eta * n * tmin)) * init_scale
            draws, _ = _np_mh_chain_1d(ys, tau, eta, pk, p1, p2, x0, step0,
                                       n_keep, burn, thin, seeds[b])
        if upper == 1:
            if _np_type1(draws, 1.0 - alpha) >= target:
                succ += 1
        else:
            if _np_type1(draws, alpha) <= target:
                succ += 1
    return succ


def _np_coverage_two_sided(boot, tau_l, tau_u, eta,
                           pkl, pl1, pl2, pku, pu1, pu2, alpha,
                           mode, tgt_l, tgt_u, orig_sorted, content,
                           sampler, n_keep, burn, thin, init_scale, seeds):
    n = boot.shape[1]
    n_orig = len(orig_sorted)
    tmin = min(tau_l, 1.0 - tau_u)
    need = int(math.ceil(content * n_orig - _QEPS))
    succ = 0
    for b in range(boot.shape[0]):
        ys = np.sort(boot[b])
        scale = _np_sample_scale(ys)
        t10 = _np_type1(ys, tau_l)
        gap = _np_type1(ys, tau_u) - t10
        t20 = math.log(max(gap, 0.1 * scale, 1e-8))
        sd = math.sqrt(scale / (eta * n * tmin))
        if sampler == 1:
            s10 = sd * init_scale
            s20 = min(2.0, max(0.05, 1.414 * sd / math.exp(t20))) * init_scale
            th1, th2, _ = _np_mh_chain_2d(ys, tau_l, tau_u, eta,
                                          pkl, pl1, pl2, pku, pu1, pu2,
                                          t10, t20, s10, s20,
                                          n_keep, burn, thin, seeds[b])
        else:
            w1 = max(scale, 2.0 * sd) * init_scale
            w2 = 2.0 * init_scale
            th1, th2 = _np_slice_chain_2d(ys, tau_l, tau_u, eta,
                                          pkl, pl1, pl2, pku, pu1, pu2,
                                          t10, t20, w1, w2,
                                          n_keep, burn, thin, seeds[b])
        q_l = th1
        q_u = th1 + np.exp(th2)
        mid = float(np.mean(0.5 * (q_l + q_u)))
        ustar = np.maximum(q_u, 2.0 * mid - q_l)
        u_bound = _np_type1(ustar, 1.0 - alpha)
        l_bound = 2.0 * mid - u_bound
        if mode == 0:
            if l_bound <= tgt_l and u_bound >= tgt_u:
                succ += 1
        else:
            hi = np.searchsorted(orig_sorted, u_bound, side="right")
            lo = np.searchsorted(orig_sorted, l_bound, side="left")
            if hi - lo >= need:
                succ += 1
    return succ


# ---------------------------------------------------------------------------
# path selection
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    slice_chain_1d = _nb_slice_chain_1d
    mh_chain_1d = _nb_mh_chain_1d
    slice_chain_2d = _nb_slice_chain_2d
    mh_chain_2d = _nb_mh_chain_2d
    coverage_one_sided = _nb_coverage_one_sided
    coverage_two_sided = _nb_coverage_two_sided
else:
    slice_chain_1d = _np_slice_chain_1d
    mh_chain_1d = _np_mh_chain_1d
    slice_chain_2d = _np_slice_chain_2d
    mh_chain_2d = _np_mh_chain_2d
    coverage_one_sided = _np_coverage_one_sided
    coverage_two_sided = _np_coverage_two_sided
