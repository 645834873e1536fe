import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from unitcover.cli import main
from unitcover.exact_cover import CoverCertificate, verify_certificate
from unitcover.geometry import Disk, Point
from unitcover.io import InputError, read_certificate, read_points, write_certificate
from unitcover.svg import render_svg

NS = {"s": "http://www.w3.org/2000/svg"}
FOUR_POINTS = [[0, 0], [0, 0.8], [1.9, 0], [1.9, 0.8]]


@pytest.fixture
def pts(tmp_path):
    def make(data, name="p.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return make


def test_read_points_decimal_strings(pts):
    p = read_points(pts([["0.1", "-2"], [1, 2.5]]))
    assert p == [Point(0.1, -2.0), Point(1.0, 2.5)]


@pytest.mark.parametrize("bad", ['{"a": 1}', "[[1, 2, 3]]", '[["x", 1]]', "[[true, 1]]", "[[1e999, 0]]", "nope"])
def test_read_points_malformed(tmp_path, bad):
    p = tmp_path / "bad.json"
    p.write_text(bad)
    with pytest.raises(InputError):
        read_points(p)


def test_certificate_roundtrip(tmp_path):
    cert = CoverCertificate((Disk(Point(0.1, 1 / 3)), Disk(Point(2.0, 0.0))), (0, 1))
    write_certificate(tmp_path / "c.json", cert)
    assert read_certificate(tmp_path / "c.json") == cert


def test_certificate_malformed(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"disks": [[0, 0, -1]], "assignment": [0]}')
    with pytest.raises(InputError):
        read_certificate(p)
    p.write_text('{"disks": [[0, 0, 1]], "assignment": [0.5]}')
    with pytest.raises(InputError):
        read_certificate(p)


def test_cover_17_and_verify(pts, tmp_path, capsys):
    rng = np.random.default_rng(7)
    f = pts((rng.random((17, 2)) * 5).tolist())
    out = str(tmp_path / "c.json")
    assert main(["cover", f, "-o", out]) == 0
    cert = read_certificate(out)
    assert verify_certificate(read_points(f), cert).ok
    assert main(["verify", f, out]) == 0
    # re-written certificate is byte-identical
    write_certificate(tmp_path / "c2.json", cert)
    assert (tmp_path / "c2.json").read_text() == (tmp_path / "c.json").read_text()


def test_cover_one_point_to_stdout(pts, capsys):
    assert main(["cover", pts([[1, 1]])]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"disks": [[1.0, 1.0, 1.0]], "assignment": [0]}


def test_cover_input_errors(pts, tmp_path):
    assert main(["cover", pts([[0, 0], [0, 0]])]) == 1
    assert main(["cover", pts([])]) == 1
    assert main(["cover", str(tmp_path / "missing.json")]) == 1
    assert main(["cover"]) == 1
    assert main(["nope"]) == 1


def test_cover_large_and_budget(pts):
    rng = np.random.default_rng(1)
    f = pts((rng.random((30, 2)) * 4).tolist())
    assert main(["cover", f]) == 0
    assert main(["cover", f, "--backend", "bitset"]) == 0
    assert main(["cover", f, "--node-budget", "1"]) == 3
    g = pts((rng.random((17, 2)) * 5).tolist(), "g.json")
    assert main(["cover", g, "--translation-budget", "1"]) == 3


def test_verify_rejects_bad_certificate(pts, tmp_path, capsys):
    f = pts(FOUR_POINTS)
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"disks": [[0, 0.4, 1]], "assignment": [0, 0, 0, 0]}))
    assert main(["verify", f, str(c)]) == 1
    assert "outside assigned" in capsys.readouterr().out


def test_fmax_and_fr(capsys):
    assert main(["fmax", "0"]) == 0
    out = capsys.readouterr().out.split("\n")
    assert out[0] == "fmax 13.928203" and out[1].startswith("rho 1.035") and out[2] == "bound 13 = 13 + k"
    assert main(["fmax", "4"]) == 0
    assert "bound 16 = 12 + k" in capsys.readouterr().out
    assert main(["fmax", "12"]) == 0
    assert "bound 23 = 11 + k" in capsys.readouterr().out
    assert main(["fmax", "-1"]) == 1
    assert main(["fr"]) == 0
    assert capsys.readouterr().out.startswith("fr_max 17.082")


def test_blocker_net(tmp_path, capsys):
    out = tmp_path / "net.json"
    assert main(["blocker-net", "-o", str(out)]) == 0
    assert "count 657" in capsys.readouterr().out
    assert len(read_points(out)) == 657
    assert main(["blocker-net", "--epsilon", "0.05", "--R", "0.025", "--offset", "0", "0"]) == 0
    assert "count 1\n" in capsys.readouterr().out
    assert main(["blocker-net", "--epsilon", "0.2"]) == 1
    assert main(["blocker-net", "--epsilon", "-0.01"]) == 1


def test_blocker_stress_small(capsys):
    code = main(["blocker-stress", "--epsilon", "0.07", "--R", "0.3", "--node-budget", "100"])
    assert code in (0, 2, 3)


def _circles(svg, cls):
    root = ET.fromstring(svg)
    g = root.find(f".//s:g[@class='{cls}']", NS)
    return [] if g is None else g.findall("s:circle", NS)


def test_plot_certificate(pts, tmp_path):
    f = pts(FOUR_POINTS)
    cert = tmp_path / "c.json"
    assert main(["cover", f, "--backend", "dlx", "-o", str(cert)]) == 0
    svg = tmp_path / "a.svg"
    assert main(["plot", f, "--certificate", str(cert), "-o", str(svg)]) == 0
    text = svg.read_text()
    assert len(_circles(text, "disks")) == 2 and len(_circles(text, "points")) == 4


def test_plot_lattice_and_empty(pts, tmp_path):
    svg = tmp_path / "l.svg"
    assert main(["plot", pts(FOUR_POINTS), "--lattice", "1.07", "-o", str(svg)]) == 0
    text = svg.read_text()
    assert len(_circles(text, "R2")) > 0 and 'class="R0"' in text
    assert main(["plot", pts([], "e.json"), "-o", str(tmp_path / "e.svg")]) == 1


def test_render_svg_no_lens_at_rho_one():
    svg = render_svg([(0, 0)], [], lattice=(1.0, (0.0, 0.0)))
    assert _circles(svg, "R2") == []
