"""Figures for CLI reports, written to files next to the JSON/text output."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _subset_label(subset):
    return "{" + ",".join(subset) + "}"


def plot_mispace(descriptor, path, title=None):
    """Bar chart of component dimension per vertex subset, shaded by degree."""
    comps = descriptor.components
    labels = [_subset_label(c.subset) for c in comps]
    dims = [c.dim for c in comps]
    degrees = [c.degree for c in comps]
    top = max(degrees)
    cmap = plt.get_cmap("viridis")
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(comps)), 4))
    ax.bar(range(len(comps)), dims, color=[cmap((d - 1) / max(top - 1, 1)) for d in degrees])
    ax.set_xticks(range(len(comps)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("polydisc dimension n(S)")
    ax.set_title(title or f"maximal ideal space: {len(comps)} components")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_bounds(bounds, path, title=None):
    """Horizontal interval [lower, upper] for a NormBounds result."""
    fig, ax = plt.subplots(figsize=(6, 1.8))
    ax.hlines(0, bounds.lower, bounds.upper, linewidth=6, color="tab:blue")
    ax.plot([bounds.lower], [0], "o", color="tab:green", label=f"lower {bounds.lower:.6g}")
    ax.plot([bounds.upper], [0], "s", color="tab:red", label=f"upper {bounds.upper:.6g}")
    pad = 0.05 * max(bounds.upper, 1e-3)
    ax.set_xlim(max(0.0, bounds.lower - pad), bounds.upper + pad)
    ax.set_yticks([])
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(title or "norm bounds")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
