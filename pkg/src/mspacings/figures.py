"""Figure rendering for report payloads.

Every CLI report path gets a PNG sibling unless figures are disabled: process
paths as line plots, rate scans as log-log fits, limit-law scans as KS decay
curves, covariance checks as empirical-vs-theoretical scatter, GOF results as
a null histogram with the observed statistic marked.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_path", "render_report", "render_identity", "render_gof"]


def _finish(fig, out: Path) -> None:
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def render_path(path, out: Path) -> None:
    """Line plot of a grid-sampled process path."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(path.grid, path.values, lw=1.0)
    ax.axhline(0.0, color="gray", lw=0.5)
    label = path.kind
    if path.m is not None:
        label += f" (m={path.m}"
        if path.count is not None:
            label += f", N={path.count}"
        label += ")"
    ax.set_title(label)
    ax.set_xlabel("grid")
    ax.set_ylabel("value")
    _finish(fig, out)


def render_report(report, out: Path) -> None:
    kind = report.kind
    if kind in ("rate_tn", "rate_rn", "rate_kappa_un"):
        _render_rate(report, out)
    elif kind in ("limit_law_alpha", "limit_law_gamma"):
        _render_limit_law(report, out)
    elif kind == "covariance_check":
        _render_covariance(report, out)
    elif kind == "finite_n_law":
        _render_finite_n(report, out)
    else:
        _render_fallback(report, out)


def _render_rate(report, out: Path) -> None:
    rows = report.per_level
    ns = np.array([r["N"] for r in rows], dtype=float)
    means = np.array([r["mean"] for r in rows])
    ses = np.array([r["std_error"] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.errorbar(ns, means, yerr=3 * ses, fmt="o", ms=4, capsize=3, label="per-N mean (3 SE)")
    if report.slope is not None:
        fit = np.exp(report.intercept) * ns ** report.slope
        ax.plot(ns, fit, "-", lw=1.2, label=f"fit slope {report.slope:+.3f}")
        ref = means[0] * (ns / ns[0]) ** report.expected_slope
        ax.plot(ns, ref, "--", lw=1.0, color="gray", label=f"reference slope {report.expected_slope:+.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("statistic")
    ax.set_title(report.kind)
    ax.legend(fontsize=8)
    _finish(fig, out)


def _render_limit_law(report, out: Path) -> None:
    rows = report.per_level
    ns = np.array([r["N"] for r in rows], dtype=float)
    ks = np.array([r["ks_distance"] for r in rows])
    crit = np.array([r["critical_value"] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(ns, ks, "o-", label="two-sample KS distance")
    ax.plot(ns, crit, "--", color="gray", label="critical value")
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("KS distance")
    ax.set_title(report.kind)
    ax.legend(fontsize=8)
    _finish(fig, out)


def _render_covariance(report, out: Path) -> None:
    rows = report.per_level
    emp = np.array([r["empirical"] for r in rows])
    theo = np.array([r["theoretical"] for r in rows])
    ses = np.array([r["std_error"] for r in rows])
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    ax.errorbar(theo, emp, yerr=3 * ses, fmt="o", ms=4, capsize=2)
    lims = [min(theo.min(), emp.min()), max(theo.max(), emp.max())]
    ax.plot(lims, lims, "--", color="gray", lw=1.0)
    ax.set_xlabel("closed-form covariance")
    ax.set_ylabel("empirical covariance")
    ax.set_title("covariance check (3 SE bars)")
    _finish(fig, out)


def _render_finite_n(report, out: Path) -> None:
    rows = report.per_level
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ns = sorted({r["n"] for r in rows})
    for n in ns:
        sub = [r for r in rows if r["n"] == n]
        ts = np.array([r["t"] for r in sub])
        freq = np.array([r["frequency"] for r in sub])
        exact = np.array([r["exact"] for r in sub])
        order = np.argsort(ts)
        ax.plot(ts[order], freq[order], "o", ms=4, label=f"freq n={n}")
        ax.plot(ts[order], exact[order], "-", lw=1.0, color="gray")
    ax.set_xlabel("t")
    ax.set_ylabel("P(n D <= t)")
    ax.set_title("exact simple-spacings law")
    ax.legend(fontsize=8)
    _finish(fig, out)


def _render_fallback(report, out: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.axis("off")
    ax.text(0.05, 0.5, report.summary() if hasattr(report, "summary") else str(report.kind), fontsize=9)
    _finish(fig, out)


def render_identity(wrapped, out: Path) -> None:
    """Bar chart of worst per-case discrepancies on a log scale."""
    payload = wrapped.to_dict()
    cases = payload.get("sample_cases", [])
    fig, ax = plt.subplots(figsize=(6.5, 4))
    if cases:
        labels = [f"m={c['m']},N={c['N']}" for c in cases]
        for key, marker in (("alpha_max_diff", "o"), ("gamma_max_diff", "s"), ("general_n_max_diff", "^")):
            vals = np.array([max(c[key], 1e-18) for c in cases])
            ax.semilogy(np.arange(len(cases)), vals, marker, ms=5, label=key.replace("_max_diff", ""))
        ax.axhline(payload["tolerance"], color="red", ls="--", lw=1.0, label="tolerance")
        ax.set_xticks(np.arange(len(cases)))
        ax.set_xticklabels(labels, rotation=45, fontsize=7)
        ax.set_ylabel("max |assembled - direct|")
        ax.legend(fontsize=8)
    ax.set_title("representation identity check")
    _finish(fig, out)


def render_gof(result, out: Path) -> None:
    """Null-quantile summary with the observed statistic marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if result.null_quantiles:
        qs = (0.05, 0.25, 0.5, 0.75, 0.95)
        ax.plot(result.null_quantiles, qs, "o-", lw=1.0, label="null quantiles")
    ax.axvline(result.statistic, color="red", lw=1.5, label=f"statistic {result.statistic:.3f}")
    ax.set_title(f"GOF test: p = {result.p_value:.4f} ({'reject' if result.reject else 'no rejection'})")
    ax.set_xlabel("sup |limit process|")
    ax.set_ylabel("null quantile level")
    ax.legend(fontsize=8)
    _finish(fig, out)
