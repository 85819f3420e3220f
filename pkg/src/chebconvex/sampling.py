"""Configuration generators for the sampled checks.

Each sample ``i`` draws from its own generator seeded by ``(seed, i)``, so a
configuration set is a pure function of ``(interval, budget, seed, ...)``.
Samples cycle through three families: the rational lattice with denominators
up to ``q_max``, seeded uniform draws, and tuples packed against an endpoint.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .scalars import parse_scalar

RANDOM_BITS = 24
GAP_FRACTION = Fraction(1, 10**6)
_FAMILIES = ("lattice", "lattice", "random", "random", "boundary")


def rng_for(seed: int, index: int) -> random.Random:
    return random.Random(f"chebconvex:{seed}:{index}")


def _bounds(interval, exact: bool):
    lo, hi = interval.lo, interval.hi
    if exact:
        return Fraction(lo), Fraction(hi)
    return float(lo), float(hi)


def rational_lattice(interval, q_max: int = 8) -> list[Fraction]:
    """All ``p/q`` with ``q <= q_max`` inside the interval, sorted."""
    lo, hi = Fraction(interval.lo), Fraction(interval.hi)
    pts = set()
    for q in range(1, q_max + 1):
        p = -((-lo.numerator * q) // lo.denominator)
        while Fraction(p, q) <= hi:
            x = Fraction(p, q)
            if interval.contains(x):
                pts.add(x)
            p += 1
    return sorted(pts)


def _uniform(rng: random.Random, lo, hi, exact: bool):
    if exact:
        return lo + (hi - lo) * Fraction(rng.getrandbits(RANDOM_BITS), 1 << RANDOM_BITS)
    return lo + (hi - lo) * rng.random()


def _inside(interval, x) -> bool:
    return interval.contains(x)


def _sorted_draw(rng, interval, k: int, lo, hi, exact: bool, gap):
    """k sorted points in [lo, hi] with consecutive gaps >= gap."""
    for _ in range(100):
        span = hi - lo - (k - 1) * gap
        if span < 0:
            raise ValueError("interval too narrow for the requested separation")
        base = sorted(_uniform(rng, lo, lo + span, exact) for _ in range(k))
        pts = [b + i * gap for i, b in enumerate(base)]
        if all(a < b for a, b in zip(pts, pts[1:])) and all(_inside(interval, p) for p in pts):
            return tuple(pts)
    raise RuntimeError("failed to draw a valid tuple")


def sample_simplex_tuples(interval, k: int, budget: int, seed: int, q_max: int = 8,
                          exact: bool = True, support: Optional[Sequence] = None) -> list[tuple]:
    """Strictly increasing k-tuples in the interval.

    Float tuples keep consecutive gaps of at least ``1e-6 * width``; exact
    tuples have no gap floor.  With ``support`` (tabulated systems) tuples are
    drawn from those abscissae only.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if support is not None:
        support = sorted(support)
        if len(support) < k:
            raise ValueError(f"only {len(support)} tabulated abscissae, need {k}")
        return [tuple(sorted(rng_for(seed, i).sample(support, k))) for i in range(budget)]
    lo, hi = _bounds(interval, exact)
    width = hi - lo
    gap = Fraction(0) if exact else float(GAP_FRACTION) * width
    lattice = rational_lattice(interval, q_max) if exact else []
    out = []
    for i in range(budget):
        rng = rng_for(seed, i)
        fam = _FAMILIES[i % len(_FAMILIES)]
        if fam == "lattice" and len(lattice) >= k:
            out.append(tuple(sorted(rng.sample(lattice, k))))
            continue
        if fam == "boundary":
            band = width / 64
            if rng.random() < 0.5:
                a, b = lo, lo + band
            else:
                a, b = hi - band, hi
            pts = list(_sorted_draw(rng, interval, k, a, b, exact, gap))
            # pin the extreme point onto a closed endpoint
            if a == lo and not interval.lo_open and pts[0] != lo:
                pts[0] = lo
            if b == hi and not interval.hi_open and pts[-1] != hi:
                pts[-1] = hi
            if all(x < y and (exact or y - x >= gap) for x, y in zip(pts, pts[1:])):
                out.append(tuple(pts))
                continue
        out.append(_sorted_draw(rng, interval, k, lo, hi, exact, gap))
    return out


def _slack(lo, hi, exact):
    """Float room reserved so chained sums in any order stay inside the interval."""
    return 0 if exact else 16 * 2.0 ** -52 * (abs(lo) + abs(hi) + (hi - lo))


def _step_draw(rng, lo, hi, span, exact, fam, lattice_h):
    if fam == "lattice" and lattice_h:
        h = rng.choice(lattice_h)
    else:
        h = _uniform(rng, 0, (hi - lo) / span, exact)
        if h == 0:
            h = (hi - lo) / span / 2
    room = hi - lo - span * h - _slack(lo, hi, exact)
    if fam == "boundary":
        x = lo if rng.random() < 0.5 else lo + room
    else:
        x = _uniform(rng, lo, lo + room, exact)
    return x, h


def sample_step_configs(interval, span, budget: int, seed: int, q_max: int = 8,
                        exact: bool = True) -> list[tuple]:
    """Pairs ``(x, h)`` with ``h > 0`` and ``x + span*h`` inside the interval.

    ``span`` is the total step multiple ``t_1 + ... + t_n``.
    """
    span = parse_scalar(span) if not isinstance(span, (int, float, Fraction)) else span
    if budget < 1:
        raise ValueError("budget must be >= 1")
    lo, hi = _bounds(interval, exact)
    if not exact:
        span = float(span)
    lattice_h = []
    if exact:
        lattice_h = sorted({Fraction(p, q) for q in range(1, q_max + 1) for p in range(1, q * 64 + 1)
                            if 0 < Fraction(p, q) * span <= hi - lo})
    out = []
    for i in range(budget):
        rng = rng_for(seed, i)
        fam = _FAMILIES[i % len(_FAMILIES)]
        for _ in range(100):
            x, h = _step_draw(rng, lo, hi, span, exact, fam, lattice_h)
            if h > 0 and interval.contains(x) and interval.contains(x + span * h):
                out.append((x, h))
                break
        else:
            raise RuntimeError("failed to draw a step configuration")
    return out


def equidistant_configs(interval, n: int, hs: Sequence, x_step=None) -> list[tuple]:
    """Exhaustive ``(x, h)`` grid: every ``h`` in ``hs`` and ``x`` on a lattice of ``x_step``."""
    hs = [parse_scalar(h) for h in hs]
    x_step = parse_scalar(x_step) if x_step is not None else min(hs)
    lo = interval.lo
    out = []
    for h in hs:
        if h <= 0:
            raise ValueError("steps must be positive")
        x = lo + x_step if interval.lo_open else lo
        while interval.contains(x + n * h):
            out.append((x, h))
            x = x + x_step
    return out


def sample_wright_configs(interval, n: int, budget: int, seed: int, q_max: int = 8,
                          exact: bool = True) -> list[tuple]:
    """``(x, (h_1, ..., h_n))`` with positive steps and ``x + sum(h)`` inside."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    lo, hi = _bounds(interval, exact)
    width = hi - lo
    out = []
    for i in range(budget):
        rng = rng_for(seed, i)
        fam = _FAMILIES[i % len(_FAMILIES)]
        for _ in range(100):
            if fam == "lattice" and exact:
                q = rng.randint(1, q_max)
                total = max(1, int(width * q))
                hs = tuple(Fraction(rng.randint(1, max(1, total // n)), q) for _ in range(n))
            else:
                hs = tuple(_uniform(rng, 0, width / n, exact) for _ in range(n))
            s = sum(hs)
            if any(h <= 0 for h in hs) or s > width:
                continue
            room = hi - lo - s - _slack(lo, hi, exact)
            if room < 0:
                continue
            if fam == "boundary":
                x = lo if rng.random() < 0.5 else lo + room
            else:
                x = _uniform(rng, lo, lo + room, exact)
            if interval.contains(x) and interval.contains(x + s):
                out.append((x, hs))
                break
        else:
            raise RuntimeError("failed to draw a Wright configuration")
    return out


def sample_qp_triples(interval, budget: int, seed: int, exact: bool = True,
                      include_zero_u: bool = False) -> list[tuple]:
    """``(u, y, z)`` with ``u >= 0``, ``y +- u`` and ``z +- u`` inside, ``z != y``, ``z + u >= y``."""
    lo, hi = _bounds(interval, exact)
    width = hi - lo
    out = []
    for i in range(budget):
        rng = rng_for(seed, i)
        for _ in range(100):
            u = Fraction(0) if (include_zero_u and i % 10 == 0) else _uniform(rng, 0, width / 4, exact)
            y = _uniform(rng, lo + u, hi - u, exact)
            z = _uniform(rng, lo + u, hi - u, exact)
            if z == y:
                continue
            if z + u < y:
                y, z = z, y
            if all(interval.contains(p) for p in (y - u, y + u, z - u, z + u)):
                out.append((u, y, z))
                break
        else:
            raise RuntimeError("failed to draw a triple")
    return out
