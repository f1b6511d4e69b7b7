"""SVG figures of sweep results."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .config import SweepSpec  # noqa: E402

# glyphs as paths, no external fonts; fixed hash salt keeps ids reproducible
_RC = {"svg.fonttype": "path", "svg.hashsalt": "harvest", "font.size": 10,
       "axes.spines.top": False, "axes.spines.right": False}

_LABELS = {
    "gap": r"$\Omega T$", "sigma": r"$\sigma / T$", "mass": r"$m T$",
    "position.z": r"$L / T$", "position.x": r"$x / T$", "position.y": r"$y / T$",
    "switching.center": r"$t_0 / T$", "phase_vector.z": r"$a_z T$",
    "phase_vector.x": r"$a_x T$", "phase_vector.y": r"$a_y T$",
}


def axis_label(path: str) -> str:
    key = path.partition(".")[2]
    return _LABELS.get(key, path)


def _style(spec: SweepSpec) -> str:
    if spec.plot_style != "auto":
        return spec.plot_style
    return "heatmap" if len(spec.axes) == 2 else "lines"


def plot_sweep(spec: SweepSpec, grid: np.ndarray, path) -> None:
    if not spec.axes:
        raise ValueError("nothing to plot without a sweep axis")
    ylabel = r"$\mathcal{N} / \lambda^2$"
    if spec.model.kind.value == "DiracFermion":
        ylabel = r"$\mathcal{N} / (\lambda^2 \Delta^2 T^{-1})$"
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.2, 3.8))
        x = np.asarray(spec.axes[0].values)
        style = _style(spec)
        if len(spec.axes) == 1:
            ax.plot(x, grid, lw=1.4)
            ax.set_ylabel(ylabel)
        elif style == "lines":
            second = spec.axes[1]
            for j, v in enumerate(second.values):
                ax.plot(x, grid[:, j], lw=1.2, label=f"{axis_label(second.path)} = {v:g}")
            ax.legend(frameon=False, fontsize=8)
            ax.set_ylabel(ylabel)
        else:
            y = np.asarray(spec.axes[1].values)
            mesh = ax.pcolormesh(x, y, grid.T, shading="nearest", cmap="viridis")
            fig.colorbar(mesh, ax=ax, label=ylabel)
            ax.set_ylabel(axis_label(spec.axes[1].path))
        ax.set_xlabel(axis_label(spec.axes[0].path))
        if spec.title:
            ax.set_title(spec.title, fontsize=10)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
