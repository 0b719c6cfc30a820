"""CSV and SVG emission for sweep and step-response results.

Every file opens with ``# tiltsense <version> config_hash=<hash>``; fitted
parameters follow the data rows as ``#`` comment lines.
"""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .. import __version__  # noqa: E402


def header_line(config_hash: str, **extra) -> str:
    parts = [f"# tiltsense {__version__}", f"config_hash={config_hash}"]
    parts += [f"{k}={v}" for k, v in extra.items()]
    return " ".join(parts) + "\n"


def _fmt(v):
    return f"{v:.12e}"


def sweep_csv(result, config_hash: str, fluid: str = "") -> str:
    buf = io.StringIO()
    buf.write(header_line(config_hash, fluid=fluid))
    buf.write("angle_deg,sin_theta,delta_T\n")
    angles = result.angles or (float("nan"),) * len(result.samples)
    for a, (s, dt) in zip(angles, result.samples):
        buf.write(f"{_fmt(np.degrees(a))},{_fmt(s)},{_fmt(dt)}\n")
    buf.write(f"# sensitivity_K={_fmt(result.sensitivity)}\n")
    buf.write(f"# intercept_K={_fmt(result.intercept)}\n")
    buf.write(f"# r_squared={result.r_squared:.12f}\n")
    return buf.getvalue()


def response_csv(transient, fit, config_hash: str, fluid: str = "") -> str:
    buf = io.StringIO()
    buf.write(header_line(config_hash, fluid=fluid))
    buf.write("t,delta_T,T_left,T_right\n")
    for row in zip(transient.times, transient.delta_T, transient.T_left, transient.T_right):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    if fit is not None:
        buf.write(f"# time_constant_s={_fmt(fit.time_constant)}\n")
        buf.write(f"# response_time_s={_fmt(fit.response_time)}\n")
        buf.write(f"# amplitude_K={_fmt(fit.amplitude)}\n")
        buf.write(f"# r_squared={fit.r_squared:.12f}\n")
    return buf.getvalue()


def boundary_layer_text(result, config_hash: str, fluid: str = "") -> str:
    buf = io.StringIO()
    buf.write(header_line(config_hash, fluid=fluid))
    buf.write("quantity,value\n")
    buf.write(f"thickness_m,{_fmt(result.thickness)}\n")
    buf.write(f"direction,{result.direction}\n")
    buf.write(f"start_x_m,{_fmt(result.start[0])}\n")
    buf.write(f"start_y_m,{_fmt(result.start[1])}\n")
    buf.write(f"threshold_K,{_fmt(result.threshold)}\n")
    buf.write(f"available_m,{_fmt(result.available)}\n")
    buf.write(f"flag,{result.flag}\n")
    return buf.getvalue()


def sweep_svg(curves, config_hash: str = "") -> str:
    """Line plot of detector ``delta_T`` [K] against ``sin(theta)``; one curve per fluid.

    ``curves`` maps a fluid name to its :class:`SweepResult`.  Output is a
    standalone SVG with fixed ids, so it is byte-stable for fixed input.
    """
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for name, res in curves.items():
        s, dt = np.array(res.samples).T
        ax.plot(s, dt, marker="o", label=f"{name} (S = {res.sensitivity:.4g} K)")
    ax.set_xlabel("sin(theta) [-]")
    ax.set_ylabel("detector delta T [K]")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    buf = io.StringIO()
    with plt.rc_context({"svg.hashsalt": config_hash or "tiltsense", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": f"tiltsense {__version__}"})
    plt.close(fig)
    return buf.getvalue()
