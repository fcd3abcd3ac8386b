"""Matrix-pencil estimation of exponential-sum models from gapped sweeps.

The estimator builds a Hankel pair per interference-free segment, stacks the
pairs vertically, truncates both stacked matrices to the signal subspace via
their SVDs, and reads the signal poles off the ordinary eigenvalue problem of
``inv(S0) @ U0^H @ U1 @ S1 @ V1^H @ V0``.  Amplitudes follow from a
least-squares fit of the gapped Vandermonde system on absolute sweep indices.

For large matrices the singular triplets are computed from the L x L Gram
matrices (one GEMM plus a Hermitian eigendecomposition) instead of a full
SVD; this is several times faster at the sizes the mitigation pipeline uses
and fully deterministic.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DataError, EstimationError
from .sigmodel import ComplexSeries, ExpSumModel, GapSpec

# Below this column count a direct economy SVD is cheap and slightly more
# accurate than the Gram route.
_DIRECT_SVD_MAX_COLS = 64

_POLE_ANGLE_TOL = 1e-9


def hankel_pair(segment: ComplexSeries, L: int) -> tuple[np.ndarray, np.ndarray]:
    """Shifted Hankel pair (H0, H1) of a segment, both (M-L) x L.

    ``H0[r, c] = s[r + c]`` and ``H1[r, c] = s[r + c + 1]``.
    """
    s = segment.samples
    m = s.size
    if L < 1:
        raise DataError("pencil parameter L must be >= 1")
    if m < L + 2:
        raise DataError(f"segment of {m} samples too short for pencil L={L}")
    win = sliding_window_view(s, L)
    return np.ascontiguousarray(win[: m - L]), np.ascontiguousarray(win[1 : m - L + 1])


def stacked_pencil(
    s1: ComplexSeries, s2: ComplexSeries, L: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vertically stacked Hankel pairs of the front and back segments.

    A segment too short to admit a Hankel pair (including an empty one) is
    dropped, degrading to the single-segment pencil; if neither segment is
    usable an :class:`EstimationError` is raised.
    """
    pairs = [hankel_pair(seg, L) for seg in (s1, s2) if len(seg) >= L + 2]
    if not pairs:
        raise EstimationError(
            f"insufficient interference-free data for pencil L={L} "
            f"(segments of {len(s1)} and {len(s2)} samples)"
        )
    x0 = np.vstack([p[0] for p in pairs])
    x1 = np.vstack([p[1] for p in pairs])
    return x0, x1


def singular_values(x: np.ndarray) -> np.ndarray:
    """All singular values of ``x``, descending."""
    if min(x.shape) == 0:
        raise DataError("empty matrix")
    if x.shape[1] <= _DIRECT_SVD_MAX_COLS or x.shape[0] < x.shape[1]:
        return sla.svd(x, compute_uv=False)
    gram = x.conj().T @ x
    w = np.linalg.eigvalsh(gram)
    return np.sqrt(np.clip(w[::-1], 0.0, None))


def select_order_sv(x0: np.ndarray, threshold: float) -> int:
    """Count of singular values within ``threshold`` of the largest (>= 1)."""
    sv = singular_values(x0)
    if sv[0] == 0.0:
        raise DataError("cannot select a model order from a zero matrix")
    return max(1, int(np.sum(sv / sv[0] >= threshold)))


def _top_triplets(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-k singular triplets (U, s, V) with V holding right vectors as columns."""
    rows, cols = x.shape
    if cols <= _DIRECT_SVD_MAX_COLS or rows < cols:
        u, s, vh = sla.svd(x, full_matrices=False)
        return u[:, :k], s[:k], vh[:k].conj().T
    gram = x.conj().T @ x
    w, q = np.linalg.eigh(gram)
    idx = np.argsort(w)[::-1][:k]
    s = np.sqrt(np.clip(w[idx], 0.0, None))
    v = q[:, idx]
    safe = np.where(s > 0, s, 1.0)
    u = (x @ v) / safe
    return u, s, v


def estimate_poles(
    x0: np.ndarray,
    x1: np.ndarray,
    order: int,
    *,
    clamp_delta: float = 1e-3,
    sv_floor: float = 1e-12,
) -> np.ndarray:
    """Signal poles from the truncated-SVD matrix pencil (X1 - z*X0).

    Both matrices are truncated to their ``order`` dominant singular triplets
    and the poles are the eigenvalues of
    ``inv(S0) @ U0^H @ U1 @ S1 @ V1^H @ V0``.  Poles with modulus above
    ``1 + clamp_delta`` are radially projected back to that circle so a later
    synthesis cannot blow up inside the gap.  Near-duplicate poles are merged.
    """
    rows, cols = x0.shape
    if not 1 <= order <= min(rows, cols):
        raise EstimationError(f"model order {order} not in [1, {min(rows, cols)}]")
    u0, s0, v0 = _top_triplets(x0, order)
    u1, s1v, v1 = _top_triplets(x1, order)
    if s0[0] == 0.0 or s0[order - 1] / s0[0] < sv_floor:
        raise EstimationError(
            f"singular-value ratio {0.0 if s0[0] == 0 else s0[order-1]/s0[0]:.2e} "
            f"below floor at order {order}; use a smaller order"
        )
    reduced = ((u0.conj().T @ u1) * s1v[np.newaxis, :]) @ (v1.conj().T @ v0)
    reduced /= s0[:, np.newaxis]
    poles = np.linalg.eigvals(reduced)
    mags = np.abs(poles)
    over = mags > 1.0 + clamp_delta
    if np.any(over):
        poles = np.where(over, poles / mags * (1.0 + clamp_delta), poles)
    poles = _merge_duplicate_poles(poles)
    # deterministic preliminary order: descending modulus, then angle
    idx = np.lexsort((np.angle(poles), -np.abs(poles)))
    return poles[idx]


def _merge_duplicate_poles(poles: np.ndarray) -> np.ndarray:
    if poles.size <= 1:
        return poles
    idx = np.argsort(np.angle(poles))
    kept: list[complex] = [poles[idx[0]]]
    for i in idx[1:]:
        z = poles[i]
        last = kept[-1]
        if (
            abs(np.angle(z) - np.angle(last)) <= _POLE_ANGLE_TOL
            and abs(abs(z) - abs(last)) <= _POLE_ANGLE_TOL
        ):
            kept[-1] = 0.5 * (last + z)
        else:
            kept.append(z)
    return np.asarray(kept, dtype=np.complex128)


def _ls_amplitudes(
    samples: np.ndarray, indices: np.ndarray, poles: np.ndarray, rcond: float
) -> np.ndarray:
    if samples.size < poles.size:
        raise EstimationError(
            f"{poles.size} poles but only {samples.size} samples to fit"
        )
    z = np.power(poles[np.newaxis, :], indices[:, np.newaxis])
    amps, _, rank, sv = np.linalg.lstsq(z, samples, rcond=rcond)
    if rank < poles.size:
        cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
        raise EstimationError(
            f"gapped Vandermonde system is rank deficient ({rank}/{poles.size}, "
            f"condition ~{cond:.2e}); poles too close"
        )
    return amps


def fit_amplitudes(
    s1: ComplexSeries,
    s2: ComplexSeries,
    gap: GapSpec | None,
    poles: np.ndarray,
    rcond: float = 1e-10,
) -> np.ndarray:
    """Least-squares amplitudes over the gapped Vandermonde system.

    Rows carry the absolute sweep indices 0..N1-1 and N2+1..N-1, so the fit
    and a later full-sweep synthesis share one index convention.  With
    ``gap=None`` the fit is contiguous over ``s1`` (``s2`` must be empty).
    """
    if gap is None:
        if len(s2):
            raise DataError("contiguous fit takes a single segment")
        indices = np.arange(len(s1))
        return _ls_amplitudes(s1.samples, indices, poles, rcond)
    n = len(s1) + gap.length + len(s2)
    gap.validate_for(n)
    indices = np.concatenate([np.arange(gap.n1), np.arange(gap.n2 + 1, n)])
    samples = np.concatenate([s1.samples, s2.samples])
    return _ls_amplitudes(samples, indices, poles, rcond)


def synthesize(model: ExpSumModel, n: int, dt: float = 1.0, t0: float = 0.0) -> ComplexSeries:
    """Evaluate the model over samples 0..n-1."""
    if model.order == 0:
        return ComplexSeries(np.zeros(n, dtype=np.complex128), dt, t0)
    z = np.power(model.poles[np.newaxis, :], np.arange(n)[:, np.newaxis])
    return ComplexSeries(z @ model.amplitudes, dt, t0)


def build_model(poles: np.ndarray, amplitudes: np.ndarray, n: int) -> ExpSumModel:
    """Assemble a model with components sorted by descending energy over n samples."""
    mags2 = np.abs(poles) ** 2
    with np.errstate(over="ignore", invalid="ignore"):
        gsum = np.where(
            np.abs(mags2 - 1.0) < 1e-12,
            float(n),
            (mags2**n - 1.0) / (mags2 - 1.0),
        )
    energy = np.abs(amplitudes) ** 2 * gsum
    idx = np.argsort(-energy, kind="stable")
    return ExpSumModel(len(poles), poles[idx], amplitudes[idx])


def default_pencil_L(m_min: int, order: int, cap: int = 256) -> int:
    """Pencil parameter: a third of the shortest usable segment, capped.

    Clamped into the admissible band ``order < L < m_min - order``.
    """
    if m_min < 2 * order + 2:
        raise EstimationError(
            f"segment of {m_min} samples cannot support a pencil of order {order}"
        )
    lo, hi = order + 1, m_min - order - 1
    return int(np.clip(min(m_min // 3, cap), lo, hi))


def mp_contiguous(
    series: ComplexSeries,
    L: int | None = None,
    order: int | None = None,
    *,
    sv_threshold: float = 1e-2,
    clamp_delta: float = 1e-3,
    sv_floor: float = 1e-12,
    rcond: float = 1e-10,
    l_cap: int = 256,
) -> ExpSumModel:
    """Classic single-segment matrix pencil on contiguous samples.

    Order defaults to the singular-value threshold count; L defaults to
    :func:`default_pencil_L`.
    """
    m = len(series)
    if L is None:
        L = default_pencil_L(m, order if order is not None else 1, l_cap)
    x0, x1 = stacked_pencil(series, ComplexSeries(np.zeros(0), series.dt), L)
    if order is None:
        order = select_order_sv(x0, sv_threshold)
    poles = estimate_poles(x0, x1, order, clamp_delta=clamp_delta, sv_floor=sv_floor)
    amps = fit_amplitudes(series, ComplexSeries(np.zeros(0), series.dt), None, poles, rcond)
    return build_model(poles, amps, m)
