"""Matplotlib figures for the CLI reports.

Figures are written next to the CSV they illustrate. The Agg backend and
fixed metadata keep repeated runs byte-identical.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.4),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "savefig.dpi": 120,
}


def _finite(y):
    y = np.asarray([v if isinstance(v, (int, float)) else np.nan for v in y], dtype=float)
    y[~np.isfinite(y)] = np.nan
    return y


def line_figure(path, x, series, xlabel, ylabel, title=None, logx=False, logy=False, hline=None,
                vlines=(), markers=False):
    """Plot one or more named series against x and save to ``path``."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, y in series.items():
            ax.plot(x, _finite(y), "o-" if markers else "-", label=label, ms=3)
        if hline is not None:
            ax.axhline(hline, color="k", lw=0.8, ls="--")
        for v in vlines:
            ax.axvline(v, color="0.4", lw=0.8, ls=":")
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata={"Software": None})
        plt.close(fig)
    return path


def psi_curve_figure(path, alphas, psis, alpha_star=None):
    return line_figure(path, alphas, {"psi": psis}, r"$\alpha$", r"$\psi(\alpha)$",
                       vlines=() if alpha_star is None else (alpha_star,))


def tomiyama_figure(path, eps, min_eigs, kind, d):
    return line_figure(path, eps, {"min Choi eigenvalue": min_eigs}, r"$\varepsilon$",
                       "min eigenvalue", title=f"{kind}, d={d}", hline=0.0)


def exponent_figure(path, ns, rates, chernoff):
    return line_figure(path, ns, {"(1/n) T_p": rates}, "n", "rate", hline=chernoff, markers=True)


def quadrature_figure(path, xs, rel_err, name):
    err = np.maximum(_finite(rel_err), 1e-17)
    return line_figure(path, xs, {"relative error": err}, "x", "relative error", title=name,
                       logx=True, logy=True)
