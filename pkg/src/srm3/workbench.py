"""Run orchestration: simulation ensembles, verification suites, benchmarks.

Everything here is deterministic given the configuration: realization ``r``
of a run always uses phases keyed ``(seed, r)``, so re-running a
configuration reproduces every artifact byte for byte, regardless of thread
count or realization order.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .errors import Srm3Error
from .estimators import (
    MomentReport,
    MomentRow,
    build_terms,
    standard_moment_labels,
    temporal_cross_correlation,
    temporal_mean,
    temporal_third_moment,
    ensemble_moments,
)
from .fft import assemble_coefficients, simulate_3rd_order_mv_fft, synthesize_fft
from .grids import FrequencyGrid
from .io import export_csv, write_samples
from .simulate import (
    Method,
    SampleRecord,
    SamplingPlan,
    draw_phases,
    simulate_2nd_order_mv,
    simulate_3rd_order_mv,
    simulate_3rd_order_uv,
    synthesize_direct,
)
from .pure import compute_pure_multivariate
from .spectra import CrossBispectrum, CrossSpectrum
from .terms import build_third_order_terms
from .wind import TABLE_SECOND_ORDER, TABLE_THIRD_ORDER, build_example_targets

#: Temporal-closure tolerances of the ergodic verification suite.
ERGODIC_TOLERANCES = {"mean": 1e-10, "second": 1e-8, "third": 1e-6}

#: Sample lags (in time steps) at which the closures are checked.
SECOND_ORDER_LAGS = (0, 7, 31)
THIRD_ORDER_LAG_PAIRS = ((0, 0), (7, 3), (31, 11))


def simulate_one(config: RunConfig, realization_index: int) -> SampleRecord:
    """One realization of the configured run."""
    plan = SamplingPlan.for_grid(config.grid, config.m_f, config.blocks)
    phases = draw_phases(config.seed, realization_index, config.grid)
    method = config.method
    if method is Method.SECOND_ORDER:
        return simulate_2nd_order_mv(config.spectrum, phases, plan)
    if method is Method.THIRD_ORDER_UV:
        return simulate_3rd_order_uv(config.spectrum, config.bispectrum, phases, plan)
    if method is Method.THIRD_ORDER_MV:
        return simulate_3rd_order_mv(config.spectrum, config.bispectrum, phases, plan)
    return simulate_3rd_order_mv_fft(config.spectrum, config.bispectrum, phases, plan)


def run_simulation(config: RunConfig, write_plot_data: bool = False) -> MomentReport:
    """Simulate the configured ensemble, write artifacts, return the report.

    Per realization one sample file (``sample_<idx>.srm3`` or ``.csv``) is
    written; the ensemble moment report goes to ``report.json``.  With
    ``write_plot_data`` a ``moments.csv`` with the report rows is added.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    terms = build_terms(
        config.spectrum,
        config.bispectrum,
        config.method if config.method is not Method.THIRD_ORDER_MV_FFT else Method.THIRD_ORDER_MV,
    )
    records = []
    for r in range(config.realizations):
        record = simulate_one(config, r)
        records.append(record)
        if config.out_format == "csv":
            export_csv(os.path.join(config.out_dir, f"sample_{r:04d}.csv"), record)
        else:
            write_samples(os.path.join(config.out_dir, f"sample_{r:04d}.srm3"), record)

    report = MomentReport((), {"realizations": 0})
    if records:
        report = ensemble_moments(
            records,
            standard_moment_labels(config.grid.m),
            terms,
            tolerances=config.tolerances,
            third_order_informational=config.method is Method.SECOND_ORDER,
        )
    with open(os.path.join(config.out_dir, "report.json"), "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    if write_plot_data and records:
        _write_moment_csv(os.path.join(config.out_dir, "moments.csv"), report)
    return report


def _write_moment_csv(path, report: MomentReport):
    with open(path, "w") as fh:
        fh.write("label,simulated,target,error,tolerance,passed,informational\n")
        for r in report.rows:
            fh.write(
                f"{r.label},{r.simulated:.17g},{r.target:.17g},{r.error:.6g},"
                f"{r.tolerance:.6g},{int(r.passed)},{int(r.informational)}\n"
            )


def write_error_record(out_dir: str, exc: Exception) -> None:
    """Machine-readable failure record for scripted callers."""
    os.makedirs(out_dir, exist_ok=True)
    record = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("bin_index", "deficit", "problems"):
        if getattr(exc, attr, None) is not None:
            record[attr] = getattr(exc, attr)
    with open(os.path.join(out_dir, "error.json"), "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------------
# ergodic identity verification
# ----------------------------------------------------------------------


def verify_ergodic_identities(
    config: RunConfig, seeds: list[int] | None = None
) -> MomentReport:
    """Single-record time averages over the fundamental period vs targets.

    For every seed, one realization covering exactly one fundamental period
    is synthesized and its temporal mean, second moments (three lags) and
    third moments (three lag pairs) are compared against the discrete term-set
    targets.  If the term set has resonant frequency collisions the closure
    rows are informational: their time averages then legitimately depend on
    the phase draw (only the ensemble matches the targets).

    Records are sampled at ``m_f = 4N`` unless configured otherwise: discrete
    circular averages keep any combination of up to three oscillator
    frequencies (maximum about ``3N``) from wrapping to a multiple of the
    block length, so the sampled averages equal the continuous-time ones.
    """
    grid = config.grid
    m_f = config.m_f if config.m_f is not None else 4 * grid.N
    plan = SamplingPlan.for_grid(grid, m_f)  # full fundamental period
    terms = build_terms(
        config.spectrum,
        config.bispectrum,
        config.method if config.method is not Method.THIRD_ORDER_MV_FFT else Method.THIRD_ORDER_MV,
    )
    collisions = terms.resonant_collisions()
    triples = terms.triple_resonances()
    informational = bool(collisions)
    third_informational = informational or triples is None or bool(triples)
    seeds = list(seeds if seeds is not None else [config.seed])
    m = grid.m
    rms = [max(terms.target_rms(a), 1e-300) for a in range(m)]
    dt = plan.delta_t

    rows = []
    for seed in seeds:
        phases = draw_phases(seed, 0, grid)
        cfg_method = config.method
        if cfg_method is Method.SECOND_ORDER:
            record = simulate_2nd_order_mv(config.spectrum, phases, plan)
        elif cfg_method is Method.THIRD_ORDER_UV:
            record = simulate_3rd_order_uv(config.spectrum, config.bispectrum, phases, plan)
        elif cfg_method is Method.THIRD_ORDER_MV_FFT:
            record = simulate_3rd_order_mv_fft(config.spectrum, config.bispectrum, phases, plan)
        else:
            record = simulate_3rd_order_mv(config.spectrum, config.bispectrum, phases, plan)

        for a in range(m):
            err = abs(temporal_mean(record, a)) / rms[a]
            rows.append(
                MomentRow(
                    f"seed {seed}: <f{a+1}>",
                    err * rms[a],
                    0.0,
                    err,
                    ERGODIC_TOLERANCES["mean"],
                    err <= ERGODIC_TOLERANCES["mean"],
                )
            )
        for a in range(m):
            for b in range(a, m):
                for lag in SECOND_ORDER_LAGS:
                    est = temporal_cross_correlation(record, a, b, lag, grid)
                    tgt = terms.target_second(a, b, lag * dt)
                    floor = max(abs(tgt), 1e-3 * rms[a] * rms[b])
                    err = abs(est - tgt) / floor
                    rows.append(
                        MomentRow(
                            f"seed {seed}: <f{a+1} f{b+1}> lag {lag}",
                            est,
                            tgt,
                            err,
                            ERGODIC_TOLERANCES["second"],
                            err <= ERGODIC_TOLERANCES["second"],
                            informational,
                        )
                    )
        for a in range(m):
            for b in range(a, m):
                for c in range(b, m):
                    for l1, l2 in THIRD_ORDER_LAG_PAIRS:
                        est = temporal_third_moment(record, a, b, c, l1, l2, grid)
                        tgt = terms.target_third(a, b, c, l1 * dt, l2 * dt)
                        floor = max(abs(tgt), 1e-3 * rms[a] * rms[b] * rms[c])
                        err = abs(est - tgt) / floor
                        rows.append(
                            MomentRow(
                                f"seed {seed}: <f{a+1} f{b+1} f{c+1}> lags ({l1},{l2})",
                                est,
                                tgt,
                                err,
                                ERGODIC_TOLERANCES["third"],
                                err <= ERGODIC_TOLERANCES["third"],
                                third_informational,
                            )
                        )

    meta = {
        "suite": "ergodic-identities",
        "method": config.method.value,
        "seeds": seeds,
        "samples_per_record": plan.n_samples,
        "fundamental_period": grid.fundamental_period,
        "resonant_collisions": len(collisions),
        "triple_resonances": None if triples is None else len(triples),
    }
    if informational or third_informational:
        meta["note"] = (
            "targets have resonant frequency combinations; affected"
            " single-record closures are reported informationally"
        )
    return MomentReport(tuple(rows), meta)


# ----------------------------------------------------------------------
# published-table reproduction
# ----------------------------------------------------------------------


def run_tables(
    seed: int = 0,
    realizations: int = 200,
    bispectrum_scale: float | None = None,
    blocks: int = 8,
) -> tuple[MomentReport, Exception | None]:
    """Reproduce the three-point wind model's published statistics.

    Three parts: (a) the package's discrete targets against the published
    target values, (b) a second-order ensemble against the published
    second-order columns, and (c) a third-order ensemble.  Part (c) runs at
    ``bispectrum_scale`` if given; at the published scale (``None`` / 1.0)
    the bispectral target is unrealizable -- the interaction energy it
    demands exceeds the prescribed spectrum at low frequency -- and the
    infeasibility error is returned alongside the report instead of samples.
    """
    from .wind import example_grid

    grid = example_grid()
    S, B = build_example_targets(grid)
    rows = []

    # (a) discrete targets vs published values
    terms2 = build_terms(S, method=Method.SECOND_ORDER)
    for (a, b), published in TABLE_SECOND_ORDER.items():
        mine = terms2.target_second(a, b, 0.0)
        err = abs(mine - published) / published
        rows.append(
            MomentRow(
                f"target E[f{a+1} f{b+1}]", mine, published, err, 5e-3, err <= 5e-3
            )
        )
    for (a, b, c), published in TABLE_THIRD_ORDER.items():
        mine = zero_lag_third_target(B, a, b, c)
        err = abs(mine - published) / published
        rows.append(
            MomentRow(
                f"target E[f{a+1} f{b+1} f{c+1}]", mine, published, err, 5e-3, err <= 5e-3
            )
        )

    # (b) second-order ensemble vs published second-order columns
    plan = SamplingPlan.for_grid(grid, blocks=blocks)
    records = [
        simulate_2nd_order_mv(S, draw_phases(seed, r, grid), plan)
        for r in range(realizations)
    ]
    report2 = ensemble_moments(
        records,
        standard_moment_labels(3),
        terms2,
        tolerances={"second": 0.02, "third_rel": 0.10, "third_abs": 0.15},
        third_order_informational=True,
    )
    for row in report2.rows:
        label = f"second-order ensemble {row.label}"
        if row.label.count("f") == 3:
            # third moments of the Gaussian baseline: must be near zero
            passed = abs(row.simulated) < 0.1
            rows.append(MomentRow(label, row.simulated, 0.0, abs(row.simulated), 0.1, passed))
        else:
            rows.append(
                MomentRow(
                    label, row.simulated, row.target, row.error, row.tolerance, row.passed
                )
            )

    # (c) third-order ensemble
    infeasible: Exception | None = None
    scale = 1.0 if bispectrum_scale is None else bispectrum_scale
    B_run = B if scale == 1.0 else CrossBispectrum(grid, B.values * scale)
    try:
        terms3 = build_terms(S, B_run, Method.THIRD_ORDER_MV)
        records3 = [
            simulate_3rd_order_mv_fft(S, B_run, draw_phases(seed + 1, r, grid), plan)
            for r in range(realizations)
        ]
        report3 = ensemble_moments(
            records3,
            standard_moment_labels(3),
            terms3,
            tolerances={"second": 0.02, "third_rel": 0.10, "third_abs": 0.15 * scale},
        )
        for row in report3.rows:
            rows.append(
                MomentRow(
                    f"third-order ensemble (scale {scale:g}) {row.label}",
                    row.simulated,
                    row.target,
                    row.error,
                    row.tolerance,
                    row.passed,
                )
            )
    except Srm3Error as exc:
        infeasible = exc
        rows.append(
            MomentRow(
                f"third-order ensemble (scale {scale:g})",
                float("nan"),
                float("nan"),
                float("inf"),
                0.0,
                False,
            )
        )

    meta = {
        "suite": "published-tables",
        "seed": seed,
        "realizations": realizations,
        "bispectrum_scale": scale,
    }
    if infeasible is not None:
        meta["infeasible"] = str(infeasible)
    return MomentReport(tuple(rows), meta), infeasible


def zero_lag_third_target(B: CrossBispectrum, a: int, b: int, c: int) -> float:
    """Zero-lag third-moment target straight from the bispectral table.

    ``6 * sum`` over ordered source pairs of ``Re B[i,j,a,b,c] dw^2``.  For
    one-variate targets this equals ``TermSet.target_third(a, b, c, 0, 0)``
    exactly; for vector targets the exact synthesized moment additionally
    carries the coherent equal-bin channel-pair contributions, a small
    per-diagonal-pair correction.  Unlike the term-set target this sum is
    defined for any bispectral table, realizable or not.
    """
    grid = B.grid
    pairs = grid.interaction_pairs()
    if pairs.size == 0:
        return 0.0
    i, j = pairs[:, 0], pairs[:, 1]
    vals = B.values[i, j, a, b, c].real
    weight = np.where(i == j, 1.0, 2.0)  # ordered pairs: (i, j) and (j, i)
    return float(6.0 * np.sum(weight * vals) * grid.delta_omega**2)


# ----------------------------------------------------------------------
# benchmark
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BenchResult:
    N: int
    m: int
    n_samples: int
    direct_seconds: float
    fft_seconds: float
    max_mismatch_over_rms: float

    @property
    def speedup(self) -> float:
        return self.direct_seconds / self.fft_seconds


def synthetic_bench_targets(
    N: int, m: int, delta_omega: float = 0.01
) -> tuple[CrossSpectrum, CrossBispectrum]:
    """Broad-band feasible targets exercising every interaction pair."""
    grid = FrequencyGrid(m, N, delta_omega)
    w = grid.sample_frequencies
    S = np.zeros((N, m, m), dtype=np.complex128)
    for a in range(m):
        for b in range(m):
            coh = np.exp(-0.5 * abs(a - b) * w)
            S[:, a, b] = np.sqrt(
                1.0 / (1 + w) ** 2 * 1.0 / (1 + 0.5 * (a + b) * w)
            ) * coh
    wsum = w[:, None] + w[None, :]
    base = 0.02 / (1.0 + wsum) ** 2
    B = np.zeros((N, N, m, m, m), dtype=np.complex128)
    for a in range(m):
        for l in range(m):
            for n in range(m):
                B[:, :, a, l, n] = base / (1.0 + 0.3 * (a + l + n))
    return CrossSpectrum(grid, S), CrossBispectrum(grid, B)


def run_bench(N: int = 512, m: int = 3, seed: int = 0, blocks: int = 1) -> BenchResult:
    """Time the direct and FFT paths on identical targets, phases and plan."""
    S, B = synthetic_bench_targets(N, m)
    grid = S.grid
    plan = SamplingPlan.for_grid(grid, blocks=blocks)
    phases = draw_phases(seed, 0, grid)
    terms = build_third_order_terms(compute_pure_multivariate(S, B), B)

    t0 = time.perf_counter()
    direct = synthesize_direct(terms, phases, plan)
    t_direct = time.perf_counter() - t0

    t0 = time.perf_counter()
    channels = assemble_coefficients(terms, phases, plan.m_f)
    via_fft = synthesize_fft(channels, grid, plan)
    t_fft = time.perf_counter() - t0

    rms = float(np.sqrt(np.mean(direct**2)))
    mismatch = float(np.abs(direct - via_fft).max() / max(rms, 1e-300))
    return BenchResult(N, m, plan.n_samples, t_direct, t_fft, mismatch)
