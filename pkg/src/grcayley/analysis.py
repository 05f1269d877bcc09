"""Checks for the structural and spectral properties of the graphs.

Each check returns a ClaimReport carrying the observed quantity, the bound
it was compared against, and a witness when the comparison fails.  Reports
also carry `asserted`: whether the property is guaranteed for the instance
at hand (for example the Ramanujan property is only guaranteed when
p^e = 4 and r >= 4), so callers can distinguish a falsified guarantee from
an informational measurement.  Exact spectra are compared in integer
arithmetic throughout; bounds of the form c*sqrt(p^r) + k are tested by
squaring rather than through floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .cayley import GraphSpec, bfs_distances, spectral_interval_bound
from .errors import IntegrityError, ParameterError
from .ring import (
    RingContext,
    RingElement,
    coeff_string,
    is_unit,
    padic_coords,
)
from .spectrum import (
    MERGE_TOL,
    GaussianInt,
    Spectrum,
    full_spectrum,
    trace_basis_matrix,
    zeta,
)

WCU_BLOCK_ELEMS = 1 << 22

DEFAULT_CHECKS = (
    "bhk",
    "connectivity",
    "energy",
    "girth",
    "interval",
    "ramanujan",
    "residue",
    "wcu",
)


@dataclass(frozen=True)
class ClaimReport:
    """Outcome of one check: observed value, bound, witness on failure."""

    claim_id: str
    holds: bool
    bound_value: Optional[Union[int, float]]
    observed_value: Optional[Union[int, float]]
    witness: Optional[object] = None
    asserted: bool = True

    def __post_init__(self) -> None:
        if not self.holds and self.witness is None:
            raise IntegrityError(
                f"failing claim {self.claim_id!r} must carry a witness"
            )

    def to_dict(self) -> dict:
        out = {
            "claim_id": self.claim_id,
            "holds": self.holds,
            "bound_value": self.bound_value,
            "observed_value": self.observed_value,
            "asserted": self.asserted,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _abs_le_sqrt_bound(value: int, c: int, k: int, pr: int) -> bool:
    """Exact test of |value| <= c*sqrt(pr) + k for integers."""
    lhs = abs(value) - k
    return lhs <= 0 or lhs * lhs <= c * c * pr


def check_interval(spec: GraphSpec, spectrum: Spectrum) -> ClaimReport:
    """All non-principal eigenvalues lie in [-(c*sqrt(p^r)+k), c*sqrt(p^r)+k]."""
    ctx = spec.ctx
    c, k, pr, bound = spectral_interval_bound(ctx.p, ctx.e, ctx.r)
    d = spec.d
    worst: Union[int, float] = 0
    witness = None
    ok_all = True
    for v, _ in spectrum.entries:
        if spectrum.exact:
            if v == d:
                continue
            ok = _abs_le_sqrt_bound(int(v), c, k, pr)
        else:
            if abs(v - d) <= MERGE_TOL:
                continue
            ok = abs(v) <= bound + MERGE_TOL
        worst = max(worst, abs(v))
        if not ok:
            ok_all = False
            if witness is None:
                witness = v
    return ClaimReport("interval", ok_all, bound, worst, witness)


def _character_sum_bound_pieces(ctx: RingContext, gamma: RingElement) -> tuple[int, float]:
    cap = ctx.p ** (ctx.e - 1 - padic_coords(gamma).valuation)
    return cap, (cap - 1) * math.sqrt(ctx.p**ctx.r) + 1


def check_wcu(
    ctx: RingContext, gammas: Optional[Sequence[Union[RingElement, int]]] = None
) -> list[ClaimReport]:
    """Character sums over the Teichmuller units obey
    |zeta(gamma)| <= (N-1)*sqrt(p^r) + 1, N = p^(e-1-valuation(gamma)).

    One report per gamma; gammas defaults to every nonzero element, which
    is meant for small rings (use check_wcu_summary for a whole-ring scan).
    """
    if gammas is None:
        gammas = range(1, ctx.size)
    pr = ctx.p**ctx.r
    reports = []
    for g in gammas:
        gamma = ctx.from_index(g) if isinstance(g, int) else g
        if gamma.is_zero:
            raise ParameterError("the character sum bound needs gamma != 0")
        cap, bound = _character_sum_bound_pieces(ctx, gamma)
        z = zeta(ctx, gamma)
        if isinstance(z, GaussianInt):
            lhs = z.norm() - (cap - 1) * (cap - 1) * pr - 1
            ok = lhs <= 0 or lhs * lhs <= 4 * (cap - 1) * (cap - 1) * pr
            observed = abs(z)
        else:
            observed = abs(z)
            ok = observed <= bound + MERGE_TOL
        reports.append(
            ClaimReport(
                "wcu", ok, bound, observed, coeff_string(gamma) if not ok else None
            )
        )
    return reports


def check_wcu_summary(ctx: RingContext) -> ClaimReport:
    """One report for the character sum bound over every nonzero gamma.

    observed_value is the largest float excess |zeta| - bound across the
    ring (at most ~1e-16 noise above zero when the claim holds); for
    p^e = 4 the verdict itself comes from exact integer comparisons.
    """
    p, e, r, q, n = ctx.p, ctx.e, ctx.r, ctx.q, ctx.size
    pr = p**r
    sqrt_pr = math.sqrt(pr)
    g1_idx = np.array([u.index for u in ctx.teichmuller_units], dtype=np.int64)
    w_t = trace_basis_matrix(ctx, ctx.digits_of(g1_idx)).T.astype(np.float64)
    m = g1_idx.size
    block = max(1, WCU_BLOCK_ELEMS // m)

    exact = q == 4
    if not exact:
        angles = 2.0 * np.pi * np.arange(q) / q
        cos_lut, sin_lut = np.cos(angles), np.sin(angles)

    ok_all = True
    worst_excess = -math.inf
    worst_idx = None
    fail_idx = None
    for lo in range(1, n, block):
        hi = min(lo + block, n)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = ctx.digits_of(idx)
        val = np.zeros(idx.size, dtype=np.int64)
        for kk in range(1, e):
            val += np.all(digits % (p**kk) == 0, axis=1)
        cap = np.power(p, e - 1 - val).astype(np.int64)
        bounds = (cap - 1) * sqrt_pr + 1.0

        tv = (
            np.rint(digits.astype(np.float64) @ w_t).astype(np.int64) % q
        ).astype(np.int32)
        if exact:
            re = (tv == 0).sum(axis=1) - (tv == 2).sum(axis=1)
            im = (tv == 1).sum(axis=1) - (tv == 3).sum(axis=1)
            normsq = re * re + im * im
            lhs = normsq - (cap - 1) ** 2 * pr - 1
            rhs = 4 * (cap - 1) ** 2 * pr
            if r <= 15:
                ok = (lhs <= 0) | (lhs * lhs <= rhs)
            else:
                ok = lhs <= 0
                for j in np.flatnonzero(~ok):
                    ok[j] = int(lhs[j]) ** 2 <= int(rhs[j])
            mags = np.hypot(re, im)
        else:
            re = cos_lut[tv].sum(axis=1)
            im = sin_lut[tv].sum(axis=1)
            mags = np.hypot(re, im)
            ok = mags <= bounds + MERGE_TOL

        excess = mags - bounds
        j = int(np.argmax(excess))
        if excess[j] > worst_excess:
            worst_excess = float(excess[j])
            worst_idx = int(idx[j])
        if not ok.all():
            ok_all = False
            if fail_idx is None:
                fail_idx = int(idx[int(np.flatnonzero(~ok)[0])])

    witness = coeff_string(ctx.from_index(fail_idx)) if fail_idx is not None else None
    return ClaimReport("wcu", ok_all, 0.0, worst_excess, witness)


def check_bhk(ctx: RingContext) -> ClaimReport:
    """For p^e = 4: |1 + zeta(gamma)|^2 = 2^r for units, zeta(gamma) = -1
    for nonzero non-units, and zeta(0) = 2^r - 1; checked exhaustively."""
    if ctx.q != 4:
        raise ParameterError("the character sum identity requires p^e = 4")
    n, q, r = ctx.size, ctx.q, ctx.r
    pr = 2**r
    g1_idx = np.array([u.index for u in ctx.teichmuller_units], dtype=np.int64)
    w_t = trace_basis_matrix(ctx, ctx.digits_of(g1_idx)).T.astype(np.float64)
    block = max(1, WCU_BLOCK_ELEMS // g1_idx.size)

    worst = 0
    witness_idx = None
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = ctx.digits_of(idx)
        unit = (digits % 2 != 0).any(axis=1)
        tv = (
            np.rint(digits.astype(np.float64) @ w_t).astype(np.int64) % q
        ).astype(np.int32)
        re = (tv == 0).sum(axis=1) - (tv == 2).sum(axis=1)
        im = (tv == 1).sum(axis=1) - (tv == 3).sum(axis=1)

        dev = np.zeros(idx.size, dtype=np.int64)
        dev[unit] = np.abs((re[unit] + 1) ** 2 + im[unit] ** 2 - pr)
        nonunit = ~unit
        dev[nonunit] = np.abs(re[nonunit] + 1) + np.abs(im[nonunit])
        if lo == 0:
            dev[0] = abs(re[0] - (pr - 1)) + abs(im[0])
        bad = np.flatnonzero(dev != 0)
        if bad.size and witness_idx is None:
            witness_idx = int(idx[bad[0]])
        if dev.max(initial=0) > worst:
            worst = int(dev.max())
    holds = worst == 0
    witness = coeff_string(ctx.from_index(witness_idx)) if witness_idx is not None else None
    return ClaimReport("bhk", holds, 0, worst, witness)


def check_residue_partition(
    ctx: RingContext, gamma: Optional[RingElement] = None
) -> ClaimReport:
    """For p^e = 4 and unit gamma, the cosets gamma*G1, -gamma*G1 and
    (1 - xi^t)*gamma*G1 (t = 1..2^r-2) partition the units, and
    2*gamma*G1 with 0 adjoined exhausts the non-units."""
    if ctx.q != 4:
        raise ParameterError("the residue decomposition requires p^e = 4")
    if gamma is None:
        gamma = ctx.one
    if gamma.ctx.key != ctx.key:
        raise ParameterError("gamma belongs to a different ring")
    if not is_unit(gamma):
        raise ParameterError("the residue decomposition requires a unit gamma")

    g1 = ctx.teichmuller_units
    order = len(g1)
    reps = [gamma, -gamma]
    for t in range(1, order):
        reps.append((ctx.one - g1[t]) * gamma)

    cosets = [frozenset((rep * u).index for u in g1) for rep in reps]
    all_indices = np.arange(ctx.size, dtype=np.int64)
    digits = ctx.digits_of(all_indices)
    unit_set = set(map(int, all_indices[(digits % 2 != 0).any(axis=1)]))

    holds = True
    witness = None
    covered: set[int] = set()
    for cs in cosets:
        if len(cs) != order:
            holds, witness = False, f"coset of size {len(cs)}"
            break
        if covered & cs:
            holds, witness = False, sorted(covered & cs)[0]
            break
        covered |= cs
    if holds and covered != unit_set:
        diff = covered.symmetric_difference(unit_set)
        holds, witness = False, sorted(diff)[0]

    if holds:
        nonunit_expected = {(gamma.scale(2) * u).index for u in g1} | {0}
        nonunit_actual = set(map(int, all_indices)) - unit_set
        if nonunit_expected != nonunit_actual:
            diff = nonunit_expected.symmetric_difference(nonunit_actual)
            holds, witness = False, sorted(diff)[0]

    return ClaimReport(
        "residue", holds, len(unit_set), len(covered), witness
    )


def is_ramanujan(spectrum: Spectrum) -> ClaimReport:
    """lambda(G)^2 <= 4(d-1), in integers when the spectrum is exact."""
    d = spectrum.d
    lam = spectrum.lambda_g()
    bound = 2.0 * math.sqrt(d - 1)
    if spectrum.exact:
        ok = lam * lam <= 4 * (d - 1)
    else:
        ok = lam <= bound + MERGE_TOL
    return ClaimReport("ramanujan", ok, bound, lam, None if ok else lam)


def girth(spec: GraphSpec) -> Union[int, float]:
    """Length of a shortest cycle, by single-root breadth-first search.

    Vertex transitivity makes the single root exact: an odd shortest cycle
    shows up as a same-level edge and an even one as a double discovery,
    both at the earliest possible level.  Returns math.inf for forests.
    """
    ctx = spec.ctx
    q = ctx.q
    dist = np.full(spec.n, -1, dtype=np.int64)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    level = 0
    best = math.inf
    while frontier.size and 2 * level + 1 < best:
        fd = ctx.digits_of(frontier)
        for k in range(spec.d):
            t = ctx.indices_from_digits((fd + spec.s_digits[k]) % q)
            prev = dist[t]
            if (prev == level).any():
                best = min(best, 2 * level + 1)
            if (prev == level + 1).any():
                best = min(best, 2 * level + 2)
            fresh = t[prev < 0]
            dist[fresh] = level + 1
        level += 1
        frontier = np.flatnonzero(dist == level)
    return int(best) if math.isfinite(best) else best


def triangle_count(spec: GraphSpec) -> int:
    """Number of triangles, via per-vertex ordered pair counting."""
    ctx = spec.ctx
    q = ctx.q
    s_sorted = np.sort(spec.s_indices)
    ordered = 0
    for k in range(spec.d):
        t = ctx.indices_from_digits((spec.s_digits - spec.s_digits[k]) % q)
        ordered += int(np.isin(t, s_sorted).sum())
    total = spec.n * ordered
    if total % 6:
        raise IntegrityError(f"triangle count {total} is not divisible by 6")
    return total // 6


def connectivity(spec: GraphSpec, spectrum: Optional[Spectrum] = None) -> dict:
    """Component count, diameter, and the spectral diameter bound
    log(n-1)/log(d/lambda); also flags the sufficient condition e < r/2 + 1."""
    ctx = spec.ctx
    dist = bfs_distances(spec, 0)
    reached = int((dist >= 0).sum())
    if spec.n % reached:
        raise IntegrityError(
            f"component of size {reached} does not divide the vertex count"
        )
    components = spec.n // reached
    connected = components == 1
    condition = 2 * ctx.e < ctx.r + 2
    record: dict = {
        "components": components,
        "connected": connected,
        "diameter": int(dist.max()) if connected else None,
        "condition_e_below_half_r_plus_one": condition,
        "consistent_with_condition": (not condition) or connected,
    }
    if spectrum is not None:
        lam = spectrum.lambda_g()
        record["lambda_G"] = lam
        mult = spectrum.multiplicity_of(spec.d, 0 if spectrum.exact else MERGE_TOL)
        record["degree_multiplicity"] = mult
        record["degree_multiplicity_matches_components"] = mult == components
        if connected and 0 < lam < spec.d:
            chung = math.log(spec.n - 1) / math.log(spec.d / lam)
            record["chung_bound"] = chung
            record["diameter_within_chung"] = record["diameter"] <= chung + 1e-9
    return record


def energy_report(spectrum: Spectrum) -> dict:
    """Graph energy, integrality, and the hyperenergetic comparison.

    For exact spectra the report also names the principal eigenvalue d and
    the value d/2 next to it: the two are easy to conflate when
    cross-checking energy lower bounds by hand, so both appear explicitly.
    """
    n, d = spectrum.n, spectrum.d
    energy = spectrum.energy()
    threshold = 2 * (n - 1)
    if spectrum.exact:
        integral = True
        hyper = energy > threshold
    else:
        integral = all(abs(v - round(v)) <= MERGE_TOL for v, _ in spectrum.entries)
        hyper = energy > threshold
    record = {
        "n": n,
        "d": d,
        "energy": energy,
        "integral": integral,
        "hyperenergetic": hyper,
        "threshold": threshold,
    }
    if spectrum.exact:
        record["principal_eigenvalue"] = spectrum.max_value
        record["principal_multiplicity"] = spectrum.multiplicity_of(d, 0)
        record["reference_principal_term"] = d // 2
    return record


def verify_graph(
    spec: GraphSpec,
    checks: Optional[Sequence[str]] = None,
    threads: Optional[int] = None,
) -> dict:
    """Run the selected checks and assemble the JSON-ready report."""
    ctx = spec.ctx
    if checks is None:
        selected = set(DEFAULT_CHECKS)
    else:
        selected = set(checks)
        unknown = selected - set(DEFAULT_CHECKS)
        if unknown:
            raise ParameterError(f"unknown checks: {sorted(unknown)}")

    char4 = ctx.q == 4
    spectrum = full_spectrum(spec, threads=threads)
    claims: list[ClaimReport] = []
    skipped: list[str] = []

    if "interval" in selected:
        claims.append(check_interval(spec, spectrum))
    if "wcu" in selected:
        claims.append(check_wcu_summary(ctx))
    if "bhk" in selected:
        if char4:
            claims.append(check_bhk(ctx))
        else:
            skipped.append("bhk")
    if "residue" in selected:
        if char4:
            claims.append(check_residue_partition(ctx, spec.gamma))
        else:
            skipped.append("residue")
    if "ramanujan" in selected:
        rep = is_ramanujan(spectrum)
        claims.append(replace(rep, asserted=char4 and ctx.r >= 4))
    if "girth" in selected:
        g = girth(spec)
        triangles = triangle_count(spec)
        if (g == 3) != (triangles > 0):
            raise IntegrityError(
                f"girth {g} contradicts triangle count {triangles}"
            )
        if ctx.p == 2 and ctx.r % 2 == 1:
            expected_exact = ctx.e == 2
            ok = g == 4 if expected_exact else g >= 4
            claims.append(
                ClaimReport(
                    "girth", ok, 4, g, None if ok else g, asserted=True
                )
            )
        else:
            claims.append(ClaimReport("girth", True, None, g, asserted=False))
    if "connectivity" in selected:
        rec = connectivity(spec, spectrum)
        ok = (
            rec["consistent_with_condition"]
            and rec.get("degree_multiplicity_matches_components", True)
            and rec.get("diameter_within_chung", True)
        )
        claims.append(
            ClaimReport(
                "connectivity",
                ok,
                rec.get("chung_bound"),
                rec["diameter"] if rec["diameter"] is not None else rec["components"],
                None if ok else rec,
            )
        )
    if "energy" in selected:
        rec = energy_report(spectrum)
        if char4:
            ok = rec["integral"] and rec["hyperenergetic"]
            claims.append(
                ClaimReport(
                    "energy",
                    ok,
                    rec["threshold"],
                    rec["energy"],
                    None if ok else rec,
                    asserted=True,
                )
            )
        else:
            claims.append(
                ClaimReport(
                    "energy", True, rec["threshold"], rec["energy"], asserted=False
                )
            )

    claims.sort(key=lambda c: c.claim_id)
    lam = spectrum.lambda_g()
    return {
        "graph": {
            "p": ctx.p,
            "e": ctx.e,
            "r": ctx.r,
            "gamma": coeff_string(spec.gamma),
            "n": spec.n,
            "d": spec.d,
        },
        "claims": [c.to_dict() for c in claims],
        "skipped": sorted(skipped),
        "spectrum_summary": {
            "distinct": spectrum.distinct,
            "min": spectrum.min_value,
            "max": spectrum.max_value,
            "lambda_G": lam,
        },
    }
