"""Figure rendering for experiment reports (Agg backend, files only)."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _line_figure(traces, column, ylabel, path, logy=False):
    fig, ax = plt.subplots(figsize=(6, 4))
    for solver, trace in traces.items():
        ax.plot(trace.column("epoch"), trace.column(column), label=solver, linewidth=1.4)
    ax.set_xlabel("epoch")
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _runtime_figure(relative_runtimes, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    names = list(relative_runtimes)
    ax.bar(names, [relative_runtimes[n] for n in names], color="tab:blue")
    ax.set_ylabel("runtime / slowest")
    ax.set_ylim(0, 1.05)
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(traces, relative_runtimes, out_dir):
    """Write objective, density, and relative-runtime figures; return paths."""
    return {
        "objective": _line_figure(
            traces, "F", "objective F", os.path.join(out_dir, "objective.png")
        ),
        "density": _line_figure(
            traces, "density_percent", "density (%)", os.path.join(out_dir, "density.png")
        ),
        "runtime": _runtime_figure(
            relative_runtimes, os.path.join(out_dir, "runtime.png")
        ),
    }
