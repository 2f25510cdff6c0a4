"""CSV and JSON serialisation with shortest round-trip float formatting."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .dynamics import ModeFunction, Trajectory
from .quantum import WaveFunctionSample

__all__ = [
    "fmt",
    "write_csv",
    "trajectory_csv",
    "mode_csv",
    "wavefunction_csv",
    "envelope",
    "dumps",
    "read_csv",
]


def fmt(x) -> str:
    """``repr`` of a Python float: shortest string that round-trips exactly."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_csv(header, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def trajectory_csv(traj: Trajectory) -> str:
    return write_csv(["t", "u", "udot"], [traj.t, traj.u, traj.udot])


def mode_csv(mode: ModeFunction, wronskian=True) -> str:
    """Columns ``t, re_w, im_w, re_wdot, im_wdot, xi, theta`` (+ ``wronskian_im``)."""
    header = ["t", "re_w", "im_w", "re_wdot", "im_wdot", "xi", "theta"]
    cols = [mode.t, mode.w.real, mode.w.imag, mode.wdot.real, mode.wdot.imag, mode.xi,
            mode.theta]
    if wronskian:
        header.append("wronskian_im")
        cols.append(mode.wronskian.imag)
    return write_csv(header, cols)


def wavefunction_csv(samples) -> str:
    """Columns ``t, q, re_psi, im_psi, abs2`` for one or more samples."""
    if isinstance(samples, WaveFunctionSample):
        samples = [samples]
    cols = [[], [], [], [], []]
    for s in samples:
        t = math.nan if s.t is None else s.t
        cols[0].extend([t] * s.q.size)
        cols[1].extend(s.q)
        cols[2].extend(s.psi.real)
        cols[3].extend(s.psi.imag)
        cols[4].extend(s.abs2)
    return write_csv(["t", "q", "re_psi", "im_psi", "abs2"], cols)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def envelope(kind, metadata, data=None, stamp=None) -> dict:
    """JSON envelope ``{kind, metadata, data}``; ``stamp`` only when requested."""
    doc = {"kind": kind, "metadata": metadata}
    if data is not None:
        doc["data"] = data
    if stamp is not None:
        doc["stamp"] = stamp
    return _jsonable(doc)


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def read_csv(text):
    """Parse a CSV produced here back into ``{column: ndarray}``."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return {h: np.array([float(r[i]) for r in body]) for i, h in enumerate(header)}
