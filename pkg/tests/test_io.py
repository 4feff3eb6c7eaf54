import io
import json
import math

import numpy as np
import pytest

from twoframe.errors import ParseError, SizeError
from twoframe.frames import validate_frame
from twoframe.generators import random_frame, tightness_frame
from twoframe.io import (
    certificate_from_document,
    certificate_to_list,
    parse_frame,
    read_frame,
    write_frame,
    write_report,
)
from twoframe.selection import replay_certificate, select_pair


def test_read_simple():
    np.testing.assert_array_equal(parse_frame("1 0\n0 1\n"), [[1.0, 0.0], [0.0, 1.0]])


def test_read_with_comment(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("# tightness n=4\n" + write_frame(tightness_frame(4)))
    arr = read_frame(p)
    assert arr.shape == (4, 2)
    assert read_frame(str(p)).shape == (4, 2)
    assert read_frame(io.StringIO(p.read_text())).shape == (4, 2)


@pytest.mark.parametrize("text,line", [("1 0 0\n", 1), ("1 0\n0 x\n", 2), ("1 0\n\n# c\n7\n", 4)])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_frame(text)
    assert info.value.lineno == line


def test_too_few_rows():
    with pytest.raises(SizeError):
        parse_frame("# only\n1 0\n")


def test_write_identity(identity2):
    assert write_frame(identity2) == "1 0\n0 1\n"


def test_write_header():
    text = write_frame(tightness_frame(4), header="a\nb")
    assert text.startswith("# a\n# b\n")
    assert len(text.splitlines()) == 6


def test_round_trip_tightness():
    f = tightness_frame(4)
    assert parse_frame(write_frame(f)).tobytes() == f.array.tobytes()


def test_round_trip_random():
    f = random_frame(10, 7)
    assert parse_frame(write_frame(f)).tobytes() == f.array.tobytes()


def test_round_trip_signed_zero():
    arr = np.array([[-0.0, 1.0], [1.0, 0.0]])
    back = parse_frame(write_frame(validate_frame(arr)))
    assert math.copysign(1.0, back[0, 0]) == -1.0


def test_seventeen_digits():
    line = write_frame(random_frame(3, 1)).splitlines()[0]
    for field in line.split(" "):
        digits = field.lstrip("-").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) <= 17


def test_report_is_stable_json():
    doc = {"schema_version": "1", "mode": "select", "bound": 1 / math.sqrt(2), "pair": [0, 1]}
    text = write_report(doc)
    assert json.loads(text)["bound"] == pytest.approx(0.7071067811865476, abs=2e-16)
    assert repr(1 / math.sqrt(2)) in text
    assert list(json.loads(text)) == ["schema_version", "mode", "bound", "pair"]
    assert write_report(doc) == text


def test_certificate_document_round_trip():
    f = random_frame(80, 4)
    sel = select_pair(f)
    c = sel.certificate
    doc = json.loads(write_report({
        "pair": sel.pair.as_list(), "sigma2": sel.sigma2, "bound": c.bound,
        "margin": c.margin, "terminal": c.terminal, "certificate": certificate_to_list(c)}))
    back = certificate_from_document(doc)
    assert back == c
    assert replay_certificate(f, back)
