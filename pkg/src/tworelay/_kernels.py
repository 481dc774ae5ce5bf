"""Jitted numeric kernels for the dual solvers and brute-force oracles.

Everything here is scalar/array numba code kept free of Python objects; the
public modules wrap these with validation and dataclasses. Power formulas
follow the closed-form KKT cases; the ellipsoid update is the standard
dimension-2 cut (center step 1/3, shape factors 4/3 and 2/3), fed with the
subgradient of the negated dual so the iteration minimizes -D.
"""

import math

import numpy as np
from numba import njit

LN2 = math.log(2.0)


@njit(cache=True)
def _cbrt(x):
    if x >= 0.0:
        return x ** (1.0 / 3.0)
    return -((-x) ** (1.0 / 3.0))


@njit(cache=True)
def cardano_real_roots(b, c, d):
    """Real roots of x^3 + b*x^2 + c*x + d = 0.

    Returns (roots, count): depressed-cubic discriminant decides between the
    one-real-root branch (real cube roots) and the trigonometric
    three-real-root branch.
    """
    roots = np.zeros(3)
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = p ** 3 / 27.0 + q * q / 4.0
    shift = -b / 3.0
    if disc > 0.0:
        s = math.sqrt(disc)
        roots[0] = _cbrt(-q / 2.0 + s) + _cbrt(-q / 2.0 - s) + shift
        return roots, 1
    if disc == 0.0:
        if q == 0.0:
            roots[0] = shift
            return roots, 1
        u = _cbrt(-q / 2.0)
        roots[0] = 2.0 * u + shift
        roots[1] = -u + shift
        return roots, 2
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    phi = math.acos(arg)
    for k in range(3):
        roots[k] = m * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift
    return roots, 3


@njit(cache=True)
def _ma_obj(p1, p2, g1, g2, lam1, lam2, lam3, a1, a2, t, rho):
    # per-subcarrier Lagrangian piece; smaller is better
    val = a1 * p1 + a2 * p2
    if lam1 > 0.0:
        val -= lam1 * t * math.log1p(g1 * p1 / t) / LN2
    if lam2 > 0.0:
        val -= lam2 * (t / rho) * math.log1p(g2 * p2 / t) / LN2
    if lam3 > 0.0:
        val -= lam3 * (t / (rho + 1.0)) * math.log1p((g1 * p1 + g2 * p2) / t) / LN2
    return val


@njit(cache=True)
def _ma_boundary_cases(gg1, gg2, lam1, lam2, lam3, a1, a2, t, rho,
                       best, bp1, bp2):
    # Case 2: p1 > 0, p2 = 0
    num = t * ((rho + 1.0) * lam1 + lam3)
    if num > 0.0 and gg1 > 0.0:
        p = num / ((rho + 1.0) * a1 * LN2) - t / gg1
        if p > 0.0:
            v = _ma_obj(p, 0.0, gg1, gg2, lam1, lam2, lam3, a1, a2, t, rho)
            if v < best:
                best = v
                bp1 = p
                bp2 = 0.0
    # Case 3: p1 = 0, p2 > 0
    num = t * ((rho + 1.0) * lam2 + rho * lam3)
    if num > 0.0 and gg2 > 0.0:
        p = num / (rho * (rho + 1.0) * a2 * LN2) - t / gg2
        if p > 0.0:
            v = _ma_obj(0.0, p, gg1, gg2, lam1, lam2, lam3, a1, a2, t, rho)
            if v < best:
                best = v
                bp1 = 0.0
                bp2 = p
    # Case 4: both zero
    if 0.0 < best:
        best = 0.0
        bp1 = 0.0
        bp2 = 0.0
    return best, bp1, bp2


@njit(cache=True)
def ma_powers_structured(lam1, lam2, lam3, a1, a2, t, rho, g1, g2):
    """Per-subcarrier minimizer of the MA Lagrangian for structured duals.

    Requires lam1*lam2 == 0. The both-positive case uses the branch-specific
    closed forms; boundary cases are evaluated afterwards and the smallest
    Lagrangian wins, ties favoring the both-positive case.
    Returns (p1, p2, sum of per-subcarrier Lagrangian pieces).
    """
    n = g1.shape[0]
    p1 = np.zeros(n)
    p2 = np.zeros(n)
    total = 0.0
    for i in range(n):
        gg1 = g1[i]
        gg2 = g2[i]
        best = np.inf
        bp1 = 0.0
        bp2 = 0.0
        if gg1 > 0.0 and gg2 > 0.0:
            if lam2 == 0.0 and lam1 > 0.0 and lam3 > 0.0:
                den1 = a1 - (gg1 / gg2) * a2
                if den1 > 0.0:
                    c1 = t * lam1 / (den1 * LN2) - t / gg1
                    den2 = (gg2 / gg1) * a1 - a2
                    c2 = t * lam3 / ((rho + 1.0) * a2 * LN2) - t * lam1 / (den2 * LN2)
                    if c1 > 0.0 and c2 > 0.0 and np.isfinite(c1) and np.isfinite(c2):
                        v = _ma_obj(c1, c2, gg1, gg2, lam1, lam2, lam3, a1, a2, t, rho)
                        if v < best:
                            best = v
                            bp1 = c1
                            bp2 = c2
            elif lam1 == 0.0 and lam2 > 0.0 and lam3 > 0.0:
                den2 = a2 - (gg2 / gg1) * a1
                if den2 > 0.0:
                    c2 = t * lam2 / (rho * den2 * LN2) - t / gg2
                    den1 = (gg1 / gg2) * a2 - a1
                    c1 = t * lam3 / ((rho + 1.0) * a1 * LN2) - t * lam2 / (rho * den1 * LN2)
                    if c1 > 0.0 and c2 > 0.0 and np.isfinite(c1) and np.isfinite(c2):
                        v = _ma_obj(c1, c2, gg1, gg2, lam1, lam2, lam3, a1, a2, t, rho)
                        if v < best:
                            best = v
                            bp1 = c1
                            bp2 = c2
        best, bp1, bp2 = _ma_boundary_cases(gg1, gg2, lam1, lam2, lam3,
                                            a1, a2, t, rho, best, bp1, bp2)
        p1[i] = bp1
        p2[i] = bp2
        total += best
    return p1, p2, total


@njit(cache=True)
def ma_powers_cubic(lam1, lam2, lam3, a1, a2, t, rho, g1, g2):
    """Per-subcarrier MA Lagrangian minimizer for arbitrary simplex duals.

    The both-positive case goes through the aggregate load x = g1*p1 + g2*p2:
    for interior lambdas x solves a cubic (solved in closed form); when one
    lambda vanishes the cubic degenerates and x sits at the pole of the
    vanished fraction, which is handled directly.
    """
    n = g1.shape[0]
    p1 = np.zeros(n)
    p2 = np.zeros(n)
    total = 0.0
    rp1 = rho + 1.0
    for i in range(n):
        gg1 = g1[i]
        gg2 = g2[i]
        best = np.inf
        bp1 = 0.0
        bp2 = 0.0
        if gg1 > 0.0 and gg2 > 0.0 and lam3 >= 0.0:
            A1 = a1 * rp1 * LN2
            A2 = a2 * rp1 * LN2
            B1 = t * gg1 * lam3
            B2 = t * gg2 * lam3
            if lam1 > 0.0 and lam2 > 0.0:
                C1 = t * gg1 * rp1 * lam1
                C2 = t * gg2 * rp1 * lam2 / rho
                c3 = A1 * A2
                c2 = t * A1 * A2 - (A1 * B2 + A2 * B1) - (C1 * A2 + C2 * A1)
                c1 = B1 * B2 - t * (A1 * B2 + A2 * B1) + (C1 * B2 + C2 * B1)
                c0 = t * B1 * B2
                roots, cnt = cardano_real_roots(c2 / c3, c1 / c3, c0 / c3)
                for k in range(cnt):
                    u = roots[k]
                    if u > t:
                        d1 = A1 - B1 / u
                        d2 = A2 - B2 / u
                        if d1 > 0.0 and d2 > 0.0:
                            c1p = t * rp1 * lam1 / d1 - t / gg1
                            c2p = t * rp1 * lam2 / (rho * d2) - t / gg2
                            if c1p > 0.0 and c2p > 0.0:
                                v = _ma_obj(c1p, c2p, gg1, gg2, lam1, lam2,
                                            lam3, a1, a2, t, rho)
                                if v < best:
                                    best = v
                                    bp1 = c1p
                                    bp2 = c2p
            elif lam2 == 0.0 and lam1 > 0.0 and lam3 > 0.0:
                u = B2 / A2
                if u > t:
                    d1 = A1 - B1 / u
                    if d1 > 0.0:
                        c1p = t * rp1 * lam1 / d1 - t / gg1
                        c2p = (u - t - gg1 * c1p) / gg2
                        if c1p > 0.0 and c2p > 0.0:
                            v = _ma_obj(c1p, c2p, gg1, gg2, lam1, lam2,
                                        lam3, a1, a2, t, rho)
                            if v < best:
                                best = v
                                bp1 = c1p
                                bp2 = c2p
            elif lam1 == 0.0 and lam2 > 0.0 and lam3 > 0.0:
                u = B1 / A1
                if u > t:
                    d2 = A2 - B2 / u
                    if d2 > 0.0:
                        c2p = t * rp1 * lam2 / (rho * d2) - t / gg2
                        c1p = (u - t - gg2 * c2p) / gg1
                        if c1p > 0.0 and c2p > 0.0:
                            v = _ma_obj(c1p, c2p, gg1, gg2, lam1, lam2,
                                        lam3, a1, a2, t, rho)
                            if v < best:
                                best = v
                                bp1 = c1p
                                bp2 = c2p
        best, bp1, bp2 = _ma_boundary_cases(gg1, gg2, lam1, lam2, lam3,
                                            a1, a2, t, rho, best, bp1, bp2)
        p1[i] = bp1
        p2[i] = bp2
        total += best
    return p1, p2, total


@njit(cache=True)
def ma_alpha_bounds(lam1, lam2, lam3, rho, g1max, g2max):
    a1 = ((rho + 1.0) * lam1 + lam3) / ((rho + 1.0) * LN2) * g1max
    a2 = ((rho + 1.0) * lam2 + lam3) / ((rho + 1.0) * LN2) * g2max
    return a1, a2


@njit(cache=True)
def ma_inner_ellipsoid(lam1, lam2, lam3, t, rho, g1, g2, P1, P2,
                       eps_dual, max_iters, use_cubic):
    """Inner dual maximization over the power prices by the ellipsoid method.

    Initial ellipsoid circumscribes the dual box [0,a1max]x[0,a2max]; deep
    cuts use the negated power subgradient, feasibility cuts -e_i restore
    nonnegative centers. Stops once sqrt(eta' A eta) <= eps_dual.
    Returns (a1*, a2*, p1, p2, D_best, gap_bound, iters, converged).
    """
    g1max = 0.0
    g2max = 0.0
    for i in range(g1.shape[0]):
        if g1[i] > g1max:
            g1max = g1[i]
        if g2[i] > g2max:
            g2max = g2[i]
    a1max, a2max = ma_alpha_bounds(lam1, lam2, lam3, rho, g1max, g2max)
    scale = max(a1max, a2max, 1e-300)
    m1 = a1max if a1max > 0.0 else 1e-12 * scale
    m2 = a2max if a2max > 0.0 else 1e-12 * scale
    floor1 = 1e-12 * m1
    floor2 = 1e-12 * m2

    x1 = 0.5 * m1
    x2 = 0.5 * m2
    A11 = 0.5 * m1 * m1
    A12 = 0.0
    A22 = 0.5 * m2 * m2

    best_D = -np.inf
    best_a1 = max(x1, floor1)
    best_a2 = max(x2, floor2)
    gap = np.inf
    converged = False
    iters = 0
    for _ in range(max_iters):
        iters += 1
        if x1 < 0.0 or x2 < 0.0:
            # feasibility cut along the most negative coordinate
            if x1 <= x2:
                c1, c2 = -1.0, 0.0
            else:
                c1, c2 = 0.0, -1.0
        else:
            af1 = x1 if x1 > floor1 else floor1
            af2 = x2 if x2 > floor2 else floor2
            if use_cubic:
                p1, p2, total = ma_powers_cubic(lam1, lam2, lam3, af1, af2,
                                                t, rho, g1, g2)
            else:
                p1, p2, total = ma_powers_structured(lam1, lam2, lam3, af1, af2,
                                                     t, rho, g1, g2)
            dval = total - af1 * P1 - af2 * P2
            if dval > best_D:
                best_D = dval
                best_a1 = af1
                best_a2 = af2
            e1 = p1.sum() - P1
            e2 = p2.sum() - P2
            q = e1 * (A11 * e1 + A12 * e2) + e2 * (A12 * e1 + A22 * e2)
            if q < 0.0:
                q = 0.0
            gap = math.sqrt(q)
            if gap <= eps_dual or (e1 == 0.0 and e2 == 0.0):
                converged = True
                break
            # deep cut: subgradient of the negated dual
            c1, c2 = -e1, -e2
        Ag1 = A11 * c1 + A12 * c2
        Ag2 = A12 * c1 + A22 * c2
        gAg = c1 * Ag1 + c2 * Ag2
        if gAg <= 0.0:
            break
        r = math.sqrt(gAg)
        x1 -= Ag1 / (3.0 * r)
        x2 -= Ag2 / (3.0 * r)
        A11 = (4.0 / 3.0) * (A11 - (2.0 / 3.0) * Ag1 * Ag1 / gAg)
        A12 = (4.0 / 3.0) * (A12 - (2.0 / 3.0) * Ag1 * Ag2 / gAg)
        A22 = (4.0 / 3.0) * (A22 - (2.0 / 3.0) * Ag2 * Ag2 / gAg)

    if use_cubic:
        p1, p2, total = ma_powers_cubic(lam1, lam2, lam3, best_a1, best_a2,
                                        t, rho, g1, g2)
    else:
        p1, p2, total = ma_powers_structured(lam1, lam2, lam3, best_a1, best_a2,
                                             t, rho, g1, g2)
    best_D = total - best_a1 * P1 - best_a2 * P2
    return best_a1, best_a2, p1, p2, best_D, gap, iters, converged


@njit(cache=True)
def ma_rate_terms(p1, p2, t, rho, g1, g2):
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    for i in range(g1.shape[0]):
        s1 += math.log1p(g1[i] * p1[i] / t)
        s2 += math.log1p(g2[i] * p2[i] / t)
        s3 += math.log1p((g1[i] * p1[i] + g2[i] * p2[i]) / t)
    r1 = t * s1 / LN2
    r2 = (t / rho) * s2 / LN2
    r3 = (t / (rho + 1.0)) * s3 / LN2
    return r1, r2, r3


@njit(cache=True)
def bc_power_vector(lam5, a3, t, rho, gt1, gt2):
    """Relay powers minimizing the BC Lagrangian at the dual point.

    Per subcarrier the stationarity condition is a quadratic in the power;
    the larger positive root is kept (the left side is decreasing, so the
    crossing is unique up to rounding). Vanished rate terms are dropped
    before the quadratic is formed.
    """
    n = gt1.shape[0]
    lam4 = 1.0 - lam5
    s = 1.0 - t
    pr = np.zeros(n)
    rhs = a3 * LN2
    for i in range(n):
        h1 = gt1[i]
        h2 = gt2[i]
        c4 = h2 * lam4
        c5 = h1 * lam5 / rho
        x = 0.0
        if c4 > 0.0 and c5 > 0.0:
            aa = rhs * h1 * h2
            bb = s * (rhs * (h1 + h2) - h1 * h2 * (lam4 + lam5 / rho))
            cc = s * s * (rhs - (c4 + c5))
            disc = bb * bb - 4.0 * aa * cc
            if disc > 0.0:
                x = (-bb + math.sqrt(disc)) / (2.0 * aa)
        elif c4 > 0.0:
            x = (s * c4 / rhs - s) / h2
        elif c5 > 0.0:
            x = (s * c5 / rhs - s) / h1
        if x > 0.0:
            pr[i] = x
    return pr


@njit(cache=True)
def bc_alpha_bound(lam5, rho, gt1, gt2):
    best = 0.0
    for i in range(gt1.shape[0]):
        v = (rho * gt2[i] * (1.0 - lam5) + gt1[i] * lam5) / (rho * LN2)
        if v > best:
            best = v
    return best


@njit(cache=True)
def bc_rate_terms(pr, t, rho, gt1, gt2):
    s = 1.0 - t
    s4 = 0.0
    s5 = 0.0
    for i in range(gt1.shape[0]):
        s4 += math.log1p(gt2[i] * pr[i] / s)
        s5 += math.log1p(gt1[i] * pr[i] / s)
    return s * s4 / LN2, (s / rho) * s5 / LN2


@njit(cache=True)
def bc_alpha_bisect(lam5, t, rho, gt1, gt2, PR, rel_tol, max_iter):
    # keeps the invariant that the upper end is on the feasible side
    hi = bc_alpha_bound(lam5, rho, gt1, gt2)
    if hi <= 0.0:
        return 0.0, np.zeros(gt1.shape[0])
    lo = 0.0
    tol = rel_tol * hi
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        pr = bc_power_vector(lam5, mid, t, rho, gt1, gt2)
        if pr.sum() < PR:
            hi = mid
        else:
            lo = mid
    pr = bc_power_vector(lam5, hi, t, rho, gt1, gt2)
    return hi, pr


@njit(cache=True)
def bc_solve_kernel(t, rho, gt1, gt2, PR, lam_tol, alpha_rel_tol, max_iter):
    """Nested bisection for the BC subproblem.

    Outer loop on the rate-weight split driven by sign(r4 - r5), inner loop
    on the power price driven by the budget. Returns
    (lam5, alpha3, pr, r4, r5, D) with D the dual value at the final point.
    """
    lo = 0.0
    hi = 1.0
    lam5 = 0.5
    while hi - lo > lam_tol:
        lam5 = 0.5 * (lo + hi)
        a3, pr = bc_alpha_bisect(lam5, t, rho, gt1, gt2, PR, alpha_rel_tol, max_iter)
        r4, r5 = bc_rate_terms(pr, t, rho, gt1, gt2)
        if r4 < r5:
            hi = lam5
        else:
            lo = lam5
    lam5 = 0.5 * (lo + hi)
    a3, pr = bc_alpha_bisect(lam5, t, rho, gt1, gt2, PR, alpha_rel_tol, max_iter)
    r4, r5 = bc_rate_terms(pr, t, rho, gt1, gt2)
    dval = -(1.0 - lam5) * r4 - lam5 * r5 + a3 * (pr.sum() - PR)
    return lam5, a3, pr, r4, r5, dval


@njit(cache=True)
def _project_budget(p, budget):
    """Euclidean projection onto {p >= 0, sum(p) <= budget} (in place)."""
    n = p.shape[0]
    total = 0.0
    for i in range(n):
        if p[i] < 0.0:
            p[i] = 0.0
        total += p[i]
    if total <= budget:
        return p
    # project onto the simplex sum = budget
    u = np.sort(p)[::-1]
    css = 0.0
    tau = 0.0
    k = 0
    for i in range(n):
        css += u[i]
        trial = (css - budget) / (i + 1.0)
        if u[i] - trial > 0.0:
            tau = trial
            k = i + 1
    if k == 0:
        for i in range(n):
            p[i] = 0.0
        return p
    for i in range(n):
        v = p[i] - tau
        p[i] = v if v > 0.0 else 0.0
    return p


@njit(cache=True)
def psc_objective(p1, p2, pr, t, rho, g1, g2, gt1, gt2):
    s = 1.0 - t
    c12 = 0.0
    c21 = 0.0
    cs = 0.0
    for i in range(g1.shape[0]):
        u1 = t * math.log1p(g1[i] * p1[i] / t) / LN2
        u2 = t * math.log1p(g2[i] * p2[i] / t) / LN2
        d1 = s * math.log1p(gt1[i] * pr[i] / s) / LN2
        d2 = s * math.log1p(gt2[i] * pr[i] / s) / LN2
        c12 += min(u1, d2)
        c21 += min(u2, d1)
        cs += t * math.log1p((g1[i] * p1[i] + g2[i] * p2[i]) / t) / LN2
    return min(c12, min(c21 / rho, cs / (1.0 + rho))), c12, c21, cs


@njit(cache=True)
def psc_ascent(t, rho, g1, g2, gt1, gt2, P1, P2, PR, iters):
    """Projected supergradient ascent on the per-subcarrier DF boundary rate.

    The objective min{C12, C21/rho, Csum/(1+rho)} is concave; the active
    branch (and within the direction caps, the active phase per subcarrier)
    supplies the supergradient. Diminishing normalized steps; the best
    feasible iterate is returned.
    """
    n = g1.shape[0]
    s = 1.0 - t
    p1 = np.full(n, P1 / n)
    p2 = np.full(n, P2 / n)
    pr = np.full(n, PR / n)
    f, c12, c21, cs = psc_objective(p1, p2, pr, t, rho, g1, g2, gt1, gt2)
    best_f = f
    bp1 = p1.copy()
    bp2 = p2.copy()
    bpr = pr.copy()
    scale = max(P1, max(P2, PR))
    gr1 = np.zeros(n)
    gr2 = np.zeros(n)
    grr = np.zeros(n)
    for k in range(1, iters + 1):
        f, c12, c21, cs = psc_objective(p1, p2, pr, t, rho, g1, g2, gt1, gt2)
        if f > best_f:
            best_f = f
            bp1 = p1.copy()
            bp2 = p2.copy()
            bpr = pr.copy()
        for i in range(n):
            gr1[i] = 0.0
            gr2[i] = 0.0
            grr[i] = 0.0
        b21 = c21 / rho
        bsum = cs / (1.0 + rho)
        if c12 <= b21 and c12 <= bsum:
            for i in range(n):
                u1 = t * math.log1p(g1[i] * p1[i] / t) / LN2
                d2 = s * math.log1p(gt2[i] * pr[i] / s) / LN2
                if u1 <= d2:
                    gr1[i] = g1[i] / ((1.0 + g1[i] * p1[i] / t) * LN2)
                else:
                    grr[i] = gt2[i] / ((1.0 + gt2[i] * pr[i] / s) * LN2)
        elif b21 <= bsum:
            for i in range(n):
                u2 = t * math.log1p(g2[i] * p2[i] / t) / LN2
                d1 = s * math.log1p(gt1[i] * pr[i] / s) / LN2
                if u2 <= d1:
                    gr2[i] = g2[i] / ((1.0 + g2[i] * p2[i] / t) * LN2 * rho)
                else:
                    grr[i] = gt1[i] / ((1.0 + gt1[i] * pr[i] / s) * LN2 * rho)
        else:
            for i in range(n):
                den = (1.0 + (g1[i] * p1[i] + g2[i] * p2[i]) / t) * LN2 * (1.0 + rho)
                gr1[i] = g1[i] / den
                gr2[i] = g2[i] / den
        norm = 0.0
        for i in range(n):
            norm += gr1[i] * gr1[i] + gr2[i] * gr2[i] + grr[i] * grr[i]
        norm = math.sqrt(norm)
        if norm <= 0.0:
            break
        step = 0.25 * scale / (norm * math.sqrt(k))
        for i in range(n):
            p1[i] += step * gr1[i]
            p2[i] += step * gr2[i]
            pr[i] += step * grr[i]
        _project_budget(p1, P1)
        _project_budget(p2, P2)
        _project_budget(pr, PR)
    return bp1, bp2, bpr, best_f


@njit(cache=True)
def oracle_df_scan_n2(g1, g2, gt1, gt2, P1, P2, PR, rho, K):
    """Exhaustive boundary-rate lower bound for N=2 multi-subcarrier DF.

    Full budgets are spent (rates increase in power), so one free power per
    node remains; the MA and BC phases decouple for fixed t, which makes the
    scan K * (K^2 + K) instead of K^4 without changing its value.
    """
    best = -1.0
    bt = 0.0
    bp11 = 0.0
    bp21 = 0.0
    bpr1 = 0.0
    for it in range(K):
        t = (it + 1.0) / (K + 1.0)
        s = 1.0 - t
        # broadcast phase: one free relay power
        bc_best = -1.0
        bc_pr1 = 0.0
        for ir in range(K):
            pr1 = PR * ir / (K - 1.0)
            pr2 = PR - pr1
            d2 = s * (math.log1p(gt2[0] * pr1 / s) + math.log1p(gt2[1] * pr2 / s)) / LN2
            d1 = s * (math.log1p(gt1[0] * pr1 / s) + math.log1p(gt1[1] * pr2 / s)) / LN2
            v = min(d2, d1 / rho)
            if v > bc_best:
                bc_best = v
                bc_pr1 = pr1
        # multiple-access phase: one free power per terminal
        ma_best = -1.0
        ma_p11 = 0.0
        ma_p21 = 0.0
        for i1 in range(K):
            p11 = P1 * i1 / (K - 1.0)
            p12 = P1 - p11
            u1 = t * (math.log1p(g1[0] * p11 / t) + math.log1p(g1[1] * p12 / t)) / LN2
            for i2 in range(K):
                p21 = P2 * i2 / (K - 1.0)
                p22 = P2 - p21
                u2 = t * (math.log1p(g2[0] * p21 / t) + math.log1p(g2[1] * p22 / t)) / LN2
                us = t * (math.log1p((g1[0] * p11 + g2[0] * p21) / t)
                          + math.log1p((g1[1] * p12 + g2[1] * p22) / t)) / LN2
                v = min(u1, min(u2 / rho, us / (1.0 + rho)))
                if v > ma_best:
                    ma_best = v
                    ma_p11 = p11
                    ma_p21 = p21
        v = min(ma_best, bc_best)
        if v > best:
            best = v
            bt = t
            bp11 = ma_p11
            bp21 = ma_p21
            bpr1 = bc_pr1
    return best, bt, bp11, bp21, bpr1


@njit(cache=True)
def oracle_df_scan_n1(g1, g2, gt1, gt2, P1, P2, PR, rho, K):
    # single subcarrier: full budgets, scan over t only
    best = -1.0
    bt = 0.0
    for it in range(K):
        t = (it + 1.0) / (K + 1.0)
        s = 1.0 - t
        u1 = t * math.log1p(g1[0] * P1 / t) / LN2
        u2 = t * math.log1p(g2[0] * P2 / t) / LN2
        us = t * math.log1p((g1[0] * P1 + g2[0] * P2) / t) / LN2
        d2 = s * math.log1p(gt2[0] * PR / s) / LN2
        d1 = s * math.log1p(gt1[0] * PR / s) / LN2
        v = min(min(u1, min(u2 / rho, us / (1.0 + rho))), min(d2, d1 / rho))
        if v > best:
            best = v
            bt = t
    return best, bt


@njit(cache=True)
def oracle_psc_scan_n2(g1, g2, gt1, gt2, P1, P2, PR, rho, K):
    """Exhaustive N=2 per-subcarrier DF scan (coupled, so a true 4-D grid)."""
    best = -1.0
    bt = 0.0
    for it in range(K):
        t = (it + 1.0) / (K + 1.0)
        s = 1.0 - t
        for ir in range(K):
            pr1 = PR * ir / (K - 1.0)
            pr2 = PR - pr1
            d1a = s * math.log1p(gt1[0] * pr1 / s) / LN2
            d1b = s * math.log1p(gt1[1] * pr2 / s) / LN2
            d2a = s * math.log1p(gt2[0] * pr1 / s) / LN2
            d2b = s * math.log1p(gt2[1] * pr2 / s) / LN2
            for i1 in range(K):
                p11 = P1 * i1 / (K - 1.0)
                p12 = P1 - p11
                u1a = t * math.log1p(g1[0] * p11 / t) / LN2
                u1b = t * math.log1p(g1[1] * p12 / t) / LN2
                c12 = min(u1a, d2a) + min(u1b, d2b)
                for i2 in range(K):
                    p21 = P2 * i2 / (K - 1.0)
                    p22 = P2 - p21
                    u2a = t * math.log1p(g2[0] * p21 / t) / LN2
                    u2b = t * math.log1p(g2[1] * p22 / t) / LN2
                    c21 = min(u2a, d1a) + min(u2b, d1b)
                    cs = t * (math.log1p((g1[0] * p11 + g2[0] * p21) / t)
                              + math.log1p((g1[1] * p12 + g2[1] * p22) / t)) / LN2
                    v = min(c12, min(c21 / rho, cs / (1.0 + rho)))
                    if v > best:
                        best = v
                        bt = t
    return best, bt
