"""Interference mitigation pipelines: detect, zero, reconstruct.

The matrix-pencil reconstruction estimates an exponential-sum model from
the two interference-free segments, synthesizes the full sweep, splices the
measured segments back around the synthesized gap and re-estimates from the
now-contiguous samples; the residual between each synthesis and the
measurements drives the stop rule.  The Burg baseline extrapolates into the
gap from each side with a forward/backward AR fit and cross-fades the two
fills.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, EstimationError, NoInterferenceError
from .pencil import (
    build_model,
    default_pencil_L,
    estimate_poles,
    fit_amplitudes,
    mp_contiguous,
    select_order_sv,
    stacked_pencil,
    synthesize,
)
from .sigmodel import (
    ComplexSeries,
    GapSpec,
    MitigationMethod,
    MitigationReport,
    split_at_gap,
    splice,
)


@dataclass(frozen=True)
class MpConfig:
    """Tuning knobs of the matrix-pencil reconstruction.

    ``order`` and ``L`` default to automatic choices: the singular-value
    threshold count for the order, a third of the shortest segment (capped
    at ``l_cap`` to bound the SVD cost) for the pencil parameter.
    """

    order: int | None = None
    L: int | None = None
    sv_threshold: float = 1e-2
    max_iter: int = 20
    clamp_delta: float = 1e-3
    l_cap: int = 256
    ls_rcond: float = 1e-10
    sv_floor: float = 1e-12
    # stop when the residual stops improving by this relative amount
    eps_rtol: float = 1e-9


def detect_interference(series: ComplexSeries, win: int = 64, k_mad: float = 15.0) -> GapSpec:
    """Energy-spike detector: flag samples whose sliding-window power envelope
    exceeds ``median + k_mad * MAD`` and return the smallest covering interval.
    """
    n = len(series)
    if n < 4 * win:
        raise DataError(f"series of {n} samples too short for window {win}")
    power = np.abs(series.samples) ** 2
    envelope = np.convolve(power, np.ones(win) / win, mode="same")
    med = np.median(envelope)
    mad = np.median(np.abs(envelope - med))
    flagged = np.flatnonzero(envelope > med + k_mad * mad)
    if flagged.size == 0:
        raise NoInterferenceError("no interference found")
    gap = GapSpec(int(flagged[0]), int(flagged[-1]))
    if gap.n1 == 0 and gap.n2 == n - 1:
        raise DataError("sweep unusable: detection covers the whole sweep")
    return gap


def zero_gap(series: ComplexSeries, gap: GapSpec) -> ComplexSeries:
    """Rectangular-window excision: zero the samples inside the gap."""
    gap.validate_for(len(series))
    if gap.is_empty:
        return series
    out = series.samples.copy()
    out[gap.n1 : gap.n2 + 1] = 0.0
    return series.with_samples(out)


_MIN_PENCIL_SEGMENT = 8


def _initial_gapped_model(s1, s2, gap, n, cfg: MpConfig):
    # segments too short to carry a Hankel pair stay out of the pencil but
    # still contribute rows to the amplitude fit
    p1 = s1 if len(s1) >= _MIN_PENCIL_SEGMENT else s1.with_samples(np.zeros(0))
    p2 = s2 if len(s2) >= _MIN_PENCIL_SEGMENT else s2.with_samples(np.zeros(0))
    usable = [len(seg) for seg in (p1, p2) if len(seg)]
    if not usable:
        raise EstimationError("insufficient interference-free data")
    m_min = min(usable)

    order = cfg.order
    if order is None:
        # selection benefits from the full-size pencil; it runs once
        l_sel = default_pencil_L(m_min, 1, cap=max(2, m_min // 3))
        x0_sel, _ = stacked_pencil(p1, p2, l_sel)
        order = select_order_sv(x0_sel, cfg.sv_threshold)

    L = cfg.L if cfg.L is not None else default_pencil_L(m_min, order, cfg.l_cap)
    x0, x1 = stacked_pencil(p1, p2, L)
    poles = estimate_poles(
        x0, x1, order, clamp_delta=cfg.clamp_delta, sv_floor=cfg.sv_floor
    )
    amps = fit_amplitudes(s1, s2, gap, poles, cfg.ls_rcond)
    return build_model(poles, amps, n), order, L


def reconstruct_mp(
    series: ComplexSeries, gap: GapSpec, cfg: MpConfig | None = None
) -> tuple[ComplexSeries, MitigationReport]:
    """Iterative matrix-pencil reconstruction of the excised samples.

    Each iteration synthesizes the full sweep from the current model and
    scores it by ``eps = ||s1_hat - s1|| + ||s2_hat - s2||``; the measured
    segments are then spliced around the synthesized gap and the model is
    re-estimated from the contiguous result.  Iteration stops once ``eps``
    rises (or stalls, or ``max_iter`` is hit) and the splice built from the
    eps-minimal iterate is returned.  Samples outside the gap are returned
    bit-identical to the input.
    """
    cfg = cfg or MpConfig()
    n = len(series)
    gap.validate_for(n)
    if gap.is_empty:
        return series, MitigationReport(0, 0, [], 0, MitigationMethod.MP)
    s1, s2 = split_at_gap(series, gap)

    model, order, pencil_l = _initial_gapped_model(s1, s2, gap, n, cfg)

    history: list[float] = []
    best_eps = np.inf
    best_fill: np.ndarray | None = None
    best_model = model
    best_index = 0
    for i in range(cfg.max_iter):
        synth = synthesize(model, n, series.dt).samples
        eps = float(
            np.linalg.norm(synth[: gap.n1] - s1.samples)
            + np.linalg.norm(synth[gap.n2 + 1 :] - s2.samples)
        )
        history.append(eps)
        if eps < best_eps:
            best_eps = eps
            best_fill = synth[gap.n1 : gap.n2 + 1]
            best_model = model
            best_index = i
        if i >= 1:
            prev = history[i - 1]
            if eps > prev or prev - eps <= cfg.eps_rtol * prev:
                break
        if i == cfg.max_iter - 1:
            break
        contiguous = series.with_samples(
            np.concatenate([s1.samples, synth[gap.n1 : gap.n2 + 1], s2.samples])
        )
        refit_l = cfg.L if cfg.L is not None else default_pencil_L(n, order, cfg.l_cap)
        model = mp_contiguous(
            contiguous,
            refit_l,
            order,
            clamp_delta=cfg.clamp_delta,
            sv_floor=cfg.sv_floor,
            rcond=cfg.ls_rcond,
            l_cap=cfg.l_cap,
        )

    fill_t0 = series.t0 + gap.n1 * series.dt
    out = splice(s1, ComplexSeries(best_fill, series.dt, fill_t0), s2)
    report = MitigationReport(
        order_used=order,
        pencil_L=pencil_l,
        epsilon_history=history,
        iterations=len(history),
        method=MitigationMethod.MP,
        model=best_model,
        best_index=best_index,
    )
    return out, report


def burg_ar_fit(segment: ComplexSeries, order: int) -> np.ndarray:
    """Complex Burg AR fit minimizing the combined forward/backward error.

    Returns the tail coefficients ``a[1..p]`` of the monic prediction
    polynomial, so the one-step forward predictor is
    ``s[n] ~= -sum_i a[i] * s[n-i]``.  The recursion keeps every reflection
    coefficient at magnitude <= 1, so the fitted model is stable.
    """
    x = segment.samples
    if order < 1:
        raise DataError("AR order must be >= 1")
    if len(x) <= order:
        raise DataError(f"segment of {len(x)} samples too short for AR({order})")
    if not np.any(x):
        raise DataError("cannot fit an AR model to an all-zero segment")
    f = x[1:].copy()
    b = x[:-1].copy()
    a = np.ones(1, dtype=np.complex128)
    for _ in range(order):
        den = float(np.real(np.vdot(f, f) + np.vdot(b, b)))
        if den == 0.0:
            raise EstimationError("Burg recursion ran out of energy")
        k = -2.0 * np.vdot(b, f) / den
        a = np.concatenate([a, [0.0]])
        a = a + k * np.conj(a[::-1])
        f_new = f + k * b
        b_new = b + np.conj(k) * f
        f = f_new[1:]
        b = b_new[:-1]
    return a[1:]


def _ar_extrapolate_forward(coeffs: np.ndarray, preceding: np.ndarray, count: int) -> np.ndarray:
    p = coeffs.size
    state = preceding[-p:][::-1].copy()  # state[i-1] = s[n-i]
    out = np.empty(count, dtype=np.complex128)
    for j in range(count):
        val = -np.dot(coeffs, state)
        out[j] = val
        state[1:] = state[:-1]
        state[0] = val
    return out


def _ar_extrapolate_backward(coeffs: np.ndarray, following: np.ndarray, count: int) -> np.ndarray:
    # backward predictor of a complex AR process conjugates the coefficients
    a = np.conj(coeffs)
    p = a.size
    state = following[:p].copy()  # state[i-1] = s[n+i]
    out = np.empty(count, dtype=np.complex128)
    for j in range(count - 1, -1, -1):
        val = -np.dot(a, state)
        out[j] = val
        state[1:] = state[:-1]
        state[0] = val
    return out


def reconstruct_burg(series: ComplexSeries, gap: GapSpec, order: int) -> ComplexSeries:
    """Burg-extrapolation baseline: AR fits on the front and back segments
    extrapolate into the gap from both sides and a raised-cosine window
    cross-fades the two fills (one-sided for edge gaps).
    """
    n = len(series)
    gap.validate_for(n)
    if gap.is_empty:
        return series
    s1, s2 = split_at_gap(series, gap)
    g = gap.length

    fwd = bwd = None
    if len(s1) > order:
        fwd = _ar_extrapolate_forward(burg_ar_fit(s1, order), s1.samples, g)
    if len(s2) > order:
        bwd = _ar_extrapolate_backward(burg_ar_fit(s2, order), s2.samples, g)
    if fwd is None and bwd is None:
        raise EstimationError(
            f"both segments too short for AR({order}) extrapolation"
        )
    if fwd is None:
        fill = bwd
    elif bwd is None:
        fill = fwd
    else:
        w = 0.5 * (1.0 + np.cos(np.pi * np.arange(1, g + 1) / (g + 1)))
        fill = w * fwd + (1.0 - w) * bwd
    fill_t0 = series.t0 + gap.n1 * series.dt
    return splice(s1, ComplexSeries(fill, series.dt, fill_t0), s2)
