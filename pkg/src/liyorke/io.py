"""File formats: system configs, matrices, certificates, points and orbits."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

import mpmath

from .certify import ExpansionCertificate, certificate_from_dict
from .dynsys import System, system_from_config
from .errors import ConfigError
from .intervals import ClosedInterval, locate
from .matrix import TransitionMatrix, parse_matrix_text, validate
from .scramble import ScrambledPoint, _scheme_for, predicted_times
from .symbolic import ChoiceSequence

POINT_COLUMNS = ("choice_bits", "value", "enclosure_lo", "enclosure_hi", "depth")


def load_config(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}", line=exc.lineno) from None


def load_system(path) -> tuple[System, dict]:
    cfg = load_config(path)
    try:
        return system_from_config(cfg), cfg
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: bad system config ({exc})") from None


def load_matrix(path=None, cfg: dict | None = None) -> TransitionMatrix:
    """Matrix from a text file, or from the ``matrix`` key of a config."""
    if path is not None:
        return parse_matrix_text(Path(path).read_text())
    if cfg is not None and "matrix" in cfg:
        return validate(cfg["matrix"])
    raise ConfigError("no matrix given: pass a matrix file or add 'matrix' to the config")


def write_text(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def load_certificate(path, sys: System, **kw) -> ExpansionCertificate:
    return certificate_from_dict(load_config(path), sys, **kw)


def _num(x, dps: int | None = None) -> str:
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, dps or mpmath.mp.dps, strip_zeros=False)
    return repr(float(x)) if isinstance(x, float) else str(x)


def points_csv(points: Sequence[ScrambledPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(POINT_COLUMNS)
    for p in points:
        w.writerow([p.choice_bits, _num(p.value, p.dps), _num(p.enclosure.lo, p.dps), _num(p.enclosure.hi, p.dps),
                     p.depth])
    return buf.getvalue()


def points_sidecar(cert: ExpansionCertificate, points: Sequence[ScrambledPoint]) -> dict:
    """Everything needed to rebuild the points, plus predicted times per pair."""
    pairs = []
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            close, far = predicted_times(points[a], points[b])
            pairs.append({"a": a, "b": b, "close_times": close, "far_times": far})
    return {
        "certificate": cert.to_dict(),
        "points": [{"choice_bits": p.choice_bits, "dps": p.dps, "guard": p.guard, "n0": p.n0} for p in points],
        "pairs": pairs,
    }


def sidecar_path(points_path) -> Path:
    p = Path(points_path)
    return p.with_name(p.stem + ".times.json")


def load_points(path, sys: System) -> tuple[ExpansionCertificate, list[ScrambledPoint]]:
    """Read a points CSV and its sidecar; the embedded certificate is
    re-verified against ``sys``."""
    side = load_config(sidecar_path(path))
    cert = certificate_from_dict(side["certificate"], sys)
    meta = {m["choice_bits"]: m for m in side["points"]}
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            m = meta[row["choice_bits"]]
            with mpmath.workdps(m["dps"]):
                value = mpmath.mpf(row["value"])
                J = ClosedInterval(mpmath.mpf(row["enclosure_lo"]), mpmath.mpf(row["enclosure_hi"]))
            scheme = _scheme_for(cert, ChoiceSequence.parse(row["choice_bits"]), 6)
            out.append(ScrambledPoint(value, J, scheme, int(row["depth"]), row["choice_bits"], m["dps"],
                                      m["n0"], cert.route, m["guard"]))
    return cert, out


def orbit_csv(orbit: Sequence, partition: Sequence[ClosedInterval], start: int = 0) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("n", "x_n", "symbol"))
    for k, x in enumerate(orbit):
        s = locate(x, partition)
        w.writerow((start + k, _num(x), "-" if s is None else s))
    return buf.getvalue()


def reports_csv(reports) -> str:
    buf = io.StringIO()
    rows = [r.row() for r in reports]
    if not rows:
        return ""
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
