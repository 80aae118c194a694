import json

import numpy as np
import pytest

from src.dichotomous import DichotomousMass
from src.errors import EvidenceFormatError, FrameMismatchError, InvalidMassError
from src.fusion import synth_workload
from src.triplet import TripletMass
from src.utils.data import (
    DICHOTOMOUS,
    GENERAL,
    TRIPLET,
    dump_json,
    evidence_kind,
    evidence_to_dict,
    load_evidence,
    load_labels,
    load_score_matrix,
    parse_evidence,
    round_floats,
    write_labels,
    write_score_matrix,
)

TRIPLET_ITEM = {"frame": ["a", "b", "c"], "a1": "a", "a2": "b", "m1": 0.5, "m2": 0.3}
DICHOTOMOUS_ITEM = {"frame": ["a", "b", "c"], "focus": "c", "p": 0.4, "c": 0.4}
GENERAL_ITEM = {
    "frame": ["a", "b", "c"],
    "focal": [{"set": ["a"], "mass": 0.6}, {"set": ["a", "b", "c"], "mass": 0.4}],
}


def _write(path, text):
    path.write_text(text)
    return str(path)


### --- Evidence files --- ###


def test_parse_triplets():
    kind, frame, evidence = parse_evidence([TRIPLET_ITEM, TRIPLET_ITEM])
    assert kind == TRIPLET
    assert frame.labels == ["a", "b", "c"]
    assert len(evidence) == 2
    assert all(e.frame is frame for e in evidence)
    assert (evidence[0].a1, evidence[0].a2) == (0, 1)
    assert evidence[0].mt == pytest.approx(0.2)


def test_parse_single_object():
    kind, _, evidence = parse_evidence(DICHOTOMOUS_ITEM)
    assert kind == DICHOTOMOUS
    assert evidence[0].focus == 2
    assert evidence[0].r == pytest.approx(0.2)


def test_parse_general():
    kind, frame, evidence = parse_evidence(GENERAL_ITEM)
    assert kind == GENERAL
    assert evidence[0].masses == {0b001: 0.6, 0b111: 0.4}


def test_repeated_focal_sets_are_summed():
    item = {
        "frame": ["a", "b"],
        "focal": [
            {"set": ["a"], "mass": 0.25},
            {"set": ["a"], "mass": 0.25},
            {"set": ["b", "a"], "mass": 0.5},
        ],
    }
    _, _, evidence = parse_evidence(item)
    assert evidence[0].masses == {0b01: 0.5, 0b11: 0.5}


@pytest.mark.parametrize("item", [TRIPLET_ITEM, DICHOTOMOUS_ITEM, GENERAL_ITEM])
def test_evidence_to_dict(item):
    kind, _, evidence = parse_evidence(item)
    assert evidence_kind(evidence[0]) == kind
    assert evidence_to_dict(evidence[0]) == item


@pytest.mark.parametrize(
    "document, message",
    [
        ([], "no evidence"),
        (["oops"], "expected an object"),
        ({"a1": "a"}, "'frame'"),
        ({"frame": ["a", "b"]}, "evidence kind"),
        (dict(TRIPLET_ITEM, a2="d"), "not part of the frame"),
        (dict(TRIPLET_ITEM, m1="0.5"), "must be a number"),
        (dict(TRIPLET_ITEM, m1=True), "must be a number"),
        ({k: v for k, v in TRIPLET_ITEM.items() if k != "m2"}, "missing key 'm2'"),
        ([TRIPLET_ITEM, DICHOTOMOUS_ITEM], "mixed"),
        (dict(GENERAL_ITEM, focal={"a": 1.0}), "must be a list"),
        (dict(GENERAL_ITEM, focal=[{"mass": 1.0}]), "focal element 0"),
    ],
)
def test_format_errors(document, message):
    with pytest.raises(EvidenceFormatError, match=message):
        parse_evidence(document, "evidence.json")


def test_invalid_masses_name_the_item():
    with pytest.raises(InvalidMassError, match="evidence.json: item 1"):
        parse_evidence([TRIPLET_ITEM, dict(TRIPLET_ITEM, m1=0.2)], "evidence.json")


def test_frames_must_match():
    other = dict(TRIPLET_ITEM, frame=["a", "b", "d"])
    with pytest.raises(FrameMismatchError):
        parse_evidence([TRIPLET_ITEM, other])


def test_load_evidence(tmp_json):
    tmp_json.write_text(json.dumps([TRIPLET_ITEM, TRIPLET_ITEM]))
    kind, _, evidence = load_evidence(str(tmp_json))
    assert kind == TRIPLET and len(evidence) == 2


def test_load_evidence_reports_json_line(tmp_json):
    path = _write(tmp_json, '{\n  "frame": ["a", "b"],\n  oops\n}\n')
    with pytest.raises(EvidenceFormatError) as info:
        load_evidence(path)
    assert info.value.line == 3
    assert str(info.value).startswith(f"{path}:3: ")


def test_load_missing_file(tmp_path):
    with pytest.raises(EvidenceFormatError, match="cannot read file"):
        load_evidence(str(tmp_path / "missing.json"))


def test_dump_json_rounds(tmp_json):
    dump_json({"x": 1 / 3, "flags": [True, 2], "nested": {"y": np.float64(2 / 3)}}, str(tmp_json))
    assert json.loads(tmp_json.read_text()) == {
        "x": 0.333333333333,
        "flags": [True, 2],
        "nested": {"y": 0.666666666667},
    }
    assert round_floats((0.1 + 0.2,)) == [0.3]


### --- Score matrices --- ###


def test_load_score_matrix(tmp_path):
    path = _write(
        tmp_path / "scores.csv",
        "item,classifier,a,b,c\n"
        "i0,c0,0.5,0.3,0.2\n"
        "i0,c1,0.1,0.1,0.8\n"
        "\n"
        "i1,c1,1,2,3\n"
        "i1,c0,3,2,1\n",
    )
    matrix = load_score_matrix(path)
    assert matrix.item_ids == ["i0", "i1"]
    assert matrix.classifier_ids == ["c0", "c1"]
    assert matrix.categories.labels == ["a", "b", "c"]
    assert matrix.scores[1, 0].tolist() == [3.0, 2.0, 1.0]
    assert matrix.scores[1, 1].tolist() == [1.0, 2.0, 3.0]


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("item,label,a,b\ni0,c0,1,2\n", 1),
        ("item,classifier,a,a\ni0,c0,1,2\n", 1),
        ("item,classifier,a,b\n", 2),
        ("item,classifier,a,b\ni0,c0,1,2\ni0,c1,x,2\n", 3),
        ("item,classifier,a,b\ni0,c0,1,2\n\ni0,c1,-1,2\n", 4),
        ("item,classifier,a,b\ni0,c0,0,0\n", 2),
        ("item,classifier,a,b\ni0,c0,1,2\ni0,c0,1,2\n", 3),
        ("item,classifier,a,b\ni0,c0,1,2\ni0,c1,1,2\ni1,c0,1,2\n", 4),
        ("item,classifier,a,b\n,c0,1,2\n", 2),
    ],
)
def test_score_matrix_errors(tmp_path, text, line):
    path = _write(tmp_path / "scores.csv", text)
    with pytest.raises(EvidenceFormatError) as info:
        load_score_matrix(path)
    assert info.value.line == line


def test_score_matrix_file_round_trip(tmp_path):
    matrix, labels = synth_workload(4, 20, 3, 0.6, seed=5)
    write_score_matrix(matrix, str(tmp_path / "scores.csv"))
    write_labels(labels, str(tmp_path / "labels.csv"))

    loaded = load_score_matrix(str(tmp_path / "scores.csv"))
    assert loaded.item_ids == matrix.item_ids
    assert loaded.classifier_ids == matrix.classifier_ids
    assert np.allclose(loaded.scores, matrix.scores, atol=1e-11)
    assert load_labels(str(tmp_path / "labels.csv")) == labels


def test_label_errors(tmp_path):
    with pytest.raises(EvidenceFormatError) as info:
        load_labels(_write(tmp_path / "labels.csv", "id,label\ni0,a\n"))
    assert info.value.line == 1

    with pytest.raises(EvidenceFormatError) as info:
        load_labels(_write(tmp_path / "labels.csv", "item,label\ni0,a\ni0,b\n"))
    assert info.value.line == 3


def test_triplet_and_dichotomous_kinds(frame_abc):
    assert evidence_kind(TripletMass.vacuous(frame_abc)) == TRIPLET
    assert evidence_kind(DichotomousMass.vacuous(frame_abc, 0)) == DICHOTOMOUS
