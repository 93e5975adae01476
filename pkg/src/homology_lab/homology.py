"""Cycle detection, triviality and equivalence testing, and class tracking.

The exact paths run entirely over the rationals.  Stochastic paths compare
rank estimates obtained with matched probe seeds and carry an explicit
low-confidence flag instead of pretending certainty near rounding
boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .complexes import Chain, FiltrationPair, SimplicialComplex, validate_filtration
from .errors import (
    DimensionMismatch,
    NotACycle,
    NotAFiltrationChain,
    NotASubcomplex,
    TrivialKernel,
    ZeroChain,
)
from .operators import boundary_matrix
from .spectra import (
    EstimatorParams,
    chebyshev_filter,
    exact_rank,
    power_iteration_bound,
    stochastic_rank,
)


def _check_chain(k: SimplicialComplex, c: Chain) -> None:
    size = k.size(c.r)
    if size == 0:
        raise DimensionMismatch(f"complex has no simplices of dimension {c.r}")
    for i in c.coeffs:
        if i > size:
            raise DimensionMismatch(f"chain index {i} exceeds layer size {size}")


def boundary_of(k: SimplicialComplex, c: Chain) -> list[Fraction]:
    """Exact boundary of a chain as a dense rational vector (one layer down)."""
    _check_chain(k, c)
    if c.r == 0:
        return []
    rows = k.size(c.r - 1)
    out = [Fraction(0)] * rows
    d = boundary_matrix(k, c.r).entries.tocoo()
    coeffs = c.coeffs
    for i, j, v in zip(d.row, d.col, d.data):
        cj = coeffs.get(j + 1)
        if cj is not None:
            out[i] += int(v) * cj
    return out


def is_cycle_exact(k: SimplicialComplex, c: Chain) -> bool:
    """Whether the chain's boundary vanishes identically (0-chains always do)."""
    return all(x == 0 for x in boundary_of(k, c))


def detect_cycle_stochastic(k: SimplicialComplex, c: Chain, eta: float, seed=None) -> str:
    """Repeated-measurement emulation of cycle detection.

    Runs ceil(1/eta) Bernoulli trials with per-trial success probability
    ||M c_hat||^2 where M is the normalized down-Gram operator; one success
    refutes cyclehood.  Exact cycles have success probability exactly zero,
    so a true cycle is never rejected.

    Returns "likely_cycle" or "not_cycle".
    """
    if not (0.0 < eta < 1.0):
        from .errors import BadParameter

        raise BadParameter("eta must lie strictly between 0 and 1")
    if c.is_zero():
        raise ZeroChain("cannot test the zero chain")
    _check_chain(k, c)
    if is_cycle_exact(k, c):
        return "likely_cycle"
    d = boundary_matrix(k, c.r).toarray().astype(float)
    vec = np.array([float(x) for x in c.dense(k.size(c.r))])
    vec /= np.linalg.norm(vec)
    gram = (d.T @ d) / ((c.r + 1) * k.size(c.r))
    p = float(np.linalg.norm(gram @ vec) ** 2)
    trials = math.ceil(1.0 / eta)
    rng = np.random.default_rng(seed)
    if np.any(rng.random(trials) < p):
        return "not_cycle"
    return "likely_cycle"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a triviality or equivalence test.

    ``low_confidence`` is only meaningful for stochastic tests: it is set when
    either rank estimate sits within two standard errors of a rounding
    boundary, i.e. when the comparison could flip within noise.
    """

    answer: bool
    method: str
    low_confidence: bool = False


def _require_cycle(k: SimplicialComplex, c: Chain) -> None:
    if not is_cycle_exact(k, c):
        raise NotACycle("input chain has nonzero boundary")


def _augmented(k: SimplicialComplex, c: Chain):
    """Columns of the (r+1)-boundary with the chain appended, as exact rows."""
    n = k.size(c.r)
    dense = c.dense(n)
    if k.size(c.r + 1) == 0:
        return [[v] for v in dense]
    d = exact.to_integer_rows(boundary_matrix(k, c.r + 1).toarray())
    return [row + [dense[i]] for i, row in enumerate(d)]


def _stochastic_rank_units(matrix_rows, params: EstimatorParams) -> tuple[float, float, int]:
    """Estimated absolute rank and its scale-adjusted standard error."""
    m = np.array([[float(x) for x in row] for row in matrix_rows], dtype=float)
    n = m.shape[1]
    gram = (m.T @ m) / max(np.sum(m * m), 1.0)
    rescaled, _ = _rescale_unit(gram)
    rank_exact = exact_rank(matrix_rows)
    delta = params.delta
    if delta is None:
        delta = _gap_delta(rescaled, rank_exact)
    filt = chebyshev_filter(delta, params.degree)
    est = stochastic_rank(rescaled, filt, n_v=params.probes,
                          probe_kind=params.probe_kind, seed=params.seed)
    return est.normalized * n, est.stderr * n, n


def _rescale_unit(a: np.ndarray) -> tuple[np.ndarray, float]:
    bound = power_iteration_bound(a, iters=30) * 1.01
    if bound <= 0.0:
        return a, 1.0
    return a / bound, bound


def _gap_delta(a: np.ndarray, rank_value: int) -> float:
    n = a.shape[0]
    if 0 < rank_value <= n:
        eigs = np.linalg.eigvalsh(a)
        gap = float(eigs[n - rank_value])
        if gap > 0:
            return min(0.999, 0.9 * gap)
    return 0.01


def test_trivial(k: SimplicialComplex, c: Chain, mode: str = "exact",
                 params: EstimatorParams | None = None) -> Verdict:
    """Is the cycle a boundary?  Compares rank of the (r+1)-boundary with and
    without the cycle appended as an extra column."""
    _check_chain(k, c)
    _require_cycle(k, c)
    if k.size(c.r + 1) == 0:
        return Verdict(answer=c.is_zero(), method=mode)
    if mode == "exact":
        d = boundary_matrix(k, c.r + 1).toarray()
        base = exact_rank(d)
        augmented = exact_rank(_augmented(k, c))
        return Verdict(answer=base == augmented, method="exact")
    if mode != "stochastic":
        from .errors import BadParameter

        raise BadParameter(f"unknown mode {mode!r}")
    params = params or EstimatorParams()
    base_rows = exact.to_integer_rows(boundary_matrix(k, c.r + 1).toarray())
    est_base, err_base, _ = _stochastic_rank_units(base_rows, params)
    est_aug, err_aug, _ = _stochastic_rank_units(_augmented(k, c), params)
    rank_base = round(est_base)
    rank_aug = round(est_aug)
    low = _near_rounding_boundary(est_base, err_base) or _near_rounding_boundary(est_aug, err_aug)
    return Verdict(answer=rank_base == rank_aug, method="stochastic", low_confidence=low)


def _near_rounding_boundary(value: float, stderr: float) -> bool:
    distance = abs(value - math.floor(value) - 0.5)
    return distance < 2.0 * max(stderr, 1e-12)


def test_equivalent(k: SimplicialComplex, c1: Chain, c2: Chain, mode: str = "exact",
                    params: EstimatorParams | None = None) -> Verdict:
    """Are two cycles homologous?  Reduces to triviality of their difference."""
    if c1.r != c2.r:
        raise DimensionMismatch("cycle dimensions differ")
    _check_chain(k, c1)
    _check_chain(k, c2)
    _require_cycle(k, c1)
    _require_cycle(k, c2)
    diff = c1 - c2
    if diff.is_zero():
        return Verdict(answer=True, method=mode)
    return test_trivial(k, diff, mode=mode, params=params)


@dataclass(frozen=True)
class StageVerdict:
    stage: int
    answer: bool
    method: str
    low_confidence: bool = False


@dataclass(frozen=True)
class ClassReport:
    """Per-stage triviality (one cycle) or equivalence (two cycles) flags."""

    kind: str  # "trivial" or "equivalent"
    stages: tuple[StageVerdict, ...]


def track_classes(stages, cycles, mode: str = "exact",
                  params: EstimatorParams | None = None) -> ClassReport:
    """Follow one or two cycles through a filtration chain.

    Consecutive stages must nest; the cycles live in the first stage and keep
    their indices through every stage because each validation step reorders
    the larger complex onto the shared prefix.
    """
    stages = list(stages)
    if len(stages) < 1:
        raise NotAFiltrationChain("need at least one stage")
    cycles = list(cycles)
    if len(cycles) not in (1, 2):
        from .errors import BadParameter

        raise BadParameter("track one cycle (triviality) or two (equivalence)")

    ordered = [stages[0]]
    for nxt in stages[1:]:
        try:
            pair = validate_filtration(ordered[-1], nxt)
        except NotASubcomplex as exc:
            raise NotAFiltrationChain(f"stage {len(ordered)} is not included in its successor: {exc}") from exc
        ordered.append(pair.k2)

    for c in cycles:
        _check_chain(ordered[0], c)
        _require_cycle(ordered[0], c)

    verdicts = []
    for idx, complex_ in enumerate(ordered, start=1):
        if len(cycles) == 1:
            v = test_trivial(complex_, cycles[0], mode=mode, params=params)
        else:
            v = test_equivalent(complex_, cycles[0], cycles[1], mode=mode, params=params)
        verdicts.append(StageVerdict(stage=idx, answer=v.answer, method=v.method,
                                     low_confidence=v.low_confidence))
    kind = "trivial" if len(cycles) == 1 else "equivalent"
    return ClassReport(kind=kind, stages=tuple(verdicts))


def sample_cycles(k: SimplicialComplex, r: int, s: int, seed=None) -> list[Chain]:
    """Random small-integer combinations of an exact kernel basis.

    Every returned chain is a genuine cycle by construction; a trivial kernel
    raises :class:`TrivialKernel`.
    """
    from .errors import BadParameter

    if s < 1:
        raise BadParameter("need at least one sample")
    n = k.size(r)
    if n == 0:
        raise DimensionMismatch(f"complex has no simplices of dimension {r}")
    if r == 0 or k.size(r - 1) == 0:
        basis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    else:
        basis = exact.kernel_basis(boundary_matrix(k, r).toarray())
    if not basis:
        raise TrivialKernel(f"the dimension-{r} boundary map has no kernel")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < s:
        coeffs = rng.integers(-2, 3, size=len(basis))
        if not np.any(coeffs):
            continue
        vec = [sum(int(a) * b[i] for a, b in zip(coeffs, basis)) for i in range(n)]
        chain = Chain.make(r, {i + 1: v for i, v in enumerate(vec) if v != 0})
        if chain.is_zero():
            continue
        out.append(chain)
    return out


def betti_via_tracking(k: SimplicialComplex, r: int, cycles, mode: str = "exact",
                       params: EstimatorParams | None = None) -> int:
    """Betti lower bound from sampled cycles.

    Deduplicates the cycles by homology equivalence, drops the trivial class
    (it contributes nothing to the Betti number), stacks one representative
    per class into a matrix, and returns the rank of that matrix modulo
    boundaries.  Nontrivial, pairwise non-homologous representatives can
    still differ by boundary directions, so the plain chain-space rank would
    overcount; ranking relative to the boundary image counts independent
    classes and keeps the result a true lower bound on the Betti number.
    First-seen representatives win, so the result is deterministic in the
    input order.
    """
    cycles = list(cycles)
    reps: list[Chain] = []
    for c in cycles:
        _check_chain(k, c)
        _require_cycle(k, c)
        if c.r != r:
            raise DimensionMismatch("cycle dimension differs from requested r")
        if test_trivial(k, c, mode=mode, params=params).answer:
            continue
        if any(test_equivalent(k, c, rep, mode=mode, params=params).answer for rep in reps):
            continue
        reps.append(c)
    if not reps:
        return 0
    n = k.size(r)
    cols = [rep.dense(n) for rep in reps]
    rep_matrix = exact.from_columns(cols)
    if k.size(r + 1) == 0:
        # boundary-free layer: class rank is plain chain-space rank
        if mode == "exact":
            return exact_rank(rep_matrix)
        params = params or EstimatorParams()
        est, _, _ = _stochastic_rank_units(rep_matrix, params)
        return int(round(est))
    d = exact.to_integer_rows(boundary_matrix(k, r + 1).toarray())
    augmented = exact.hstack(d, rep_matrix)
    if mode == "exact":
        return exact_rank(augmented) - exact_rank(d)
    params = params or EstimatorParams()
    est_aug, _, _ = _stochastic_rank_units(augmented, params)
    est_base, _, _ = _stochastic_rank_units(d, params)
    return max(0, int(round(est_aug)) - int(round(est_base)))
