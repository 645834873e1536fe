"""JSON point sets and certificates.

Point files are a JSON array of ``[x, y]`` pairs.  Coordinates may be JSON
numbers or decimal strings such as ``"0.1"``; both are parsed through
:class:`decimal.Decimal` and rounded once to the nearest double.
"""
from __future__ import annotations

import json
import math
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .exact_cover import CoverCertificate
from .geometry import Disk, Point


class InputError(ValueError):
    """Malformed point or certificate file."""


def _coord(v) -> float:
    if isinstance(v, bool):
        raise InputError(f"bad coordinate {v!r}")
    if isinstance(v, (int, Decimal)):
        x = float(v)
    elif isinstance(v, str):
        try:
            x = float(Decimal(v.strip()))
        except InvalidOperation:
            raise InputError(f"bad coordinate {v!r}") from None
    else:
        raise InputError(f"bad coordinate {v!r}")
    if not math.isfinite(x):
        raise InputError(f"non-finite coordinate {v!r}")
    return x


def _load(src):
    text = Path(src).read_text() if not hasattr(src, "read") else src.read()
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None


def parse_points(data) -> list[Point]:
    if not isinstance(data, list):
        raise InputError("point file must be a JSON array of [x, y] pairs")
    pts = []
    for k, p in enumerate(data):
        if not isinstance(p, list) or len(p) != 2:
            raise InputError(f"entry {k} is not an [x, y] pair")
        pts.append(Point(_coord(p[0]), _coord(p[1])))
    return pts


def read_points(src) -> list[Point]:
    return parse_points(_load(src))


def write_points(path, points) -> None:
    Path(path).write_text(json.dumps([[float(x), float(y)] for x, y in points]) + "\n")


def certificate_to_json(cert: CoverCertificate) -> dict:
    return {
        "disks": [[d.center.x, d.center.y, d.radius] for d in cert.disks],
        "assignment": list(cert.assignment),
    }


def certificate_from_json(data) -> CoverCertificate:
    if not isinstance(data, dict) or "disks" not in data or "assignment" not in data:
        raise InputError("certificate must be an object with 'disks' and 'assignment'")
    disks = []
    for k, d in enumerate(data["disks"]):
        if not isinstance(d, list) or len(d) != 3:
            raise InputError(f"disk {k} is not [cx, cy, r]")
        r = _coord(d[2])
        if r <= 0:
            raise InputError(f"disk {k} has nonpositive radius")
        disks.append(Disk(Point(_coord(d[0]), _coord(d[1])), r))
    assign = data["assignment"]
    if not isinstance(assign, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in assign):
        raise InputError("assignment must be a list of integers")
    return CoverCertificate(tuple(disks), tuple(assign))


def read_certificate(src) -> CoverCertificate:
    return certificate_from_json(_load(src))


def write_certificate(path, cert: CoverCertificate) -> None:
    # repr-precision floats so a re-read certificate is bit-identical
    Path(path).write_text(json.dumps(certificate_to_json(cert), indent=1) + "\n")
