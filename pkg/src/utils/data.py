"""Reading and writing evidence files, score matrices and labels."""

import json
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.core import Frame, MassFunction, make_frame
from src.dichotomous import DichotomousMass
from src.errors import (
    EvidenceError,
    EvidenceFormatError,
    FrameError,
    FrameMismatchError,
)
from src.fusion import ScoreMatrix
from src.triplet import TripletMass

Evidence = Union[MassFunction, TripletMass, DichotomousMass]

GENERAL = "general"
TRIPLET = "triplet"
DICHOTOMOUS = "dichotomous"

# NOTE: every float written by this module keeps 12 significant digits
SIGNIFICANT_DIGITS = 12


def round_float(value: float) -> float:
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def round_floats(obj: Any) -> Any:
    """Recursively rounds every float of a JSON-like structure."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (float, np.floating)):
        return round_float(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {key: round_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(value) for value in obj]
    return obj


def dump_json(obj: Any, path: str) -> None:
    with open(path, "w") as f:
        json.dump(round_floats(obj), f, indent=2)
        f.write("\n")


### --- Evidence files --- ###


def evidence_kind(evidence: Evidence) -> str:
    if isinstance(evidence, TripletMass):
        return TRIPLET
    if isinstance(evidence, DichotomousMass):
        return DICHOTOMOUS
    return GENERAL


def evidence_to_dict(evidence: Evidence) -> Dict[str, Any]:
    """Serializes evidence into its file format; floats keep 12 significant digits."""
    frame = evidence.frame
    labels = list(frame.labels)
    if isinstance(evidence, TripletMass):
        body: Dict[str, Any] = {
            "frame": labels,
            "a1": frame.label(evidence.a1),
            "a2": frame.label(evidence.a2),
            "m1": evidence.m1,
            "m2": evidence.m2,
        }
    elif isinstance(evidence, DichotomousMass):
        body = {
            "frame": labels,
            "focus": frame.label(evidence.focus),
            "p": evidence.p,
            "c": evidence.c,
        }
    else:
        body = {
            "frame": labels,
            "focal": [
                {"set": subset.labels, "mass": mass} for subset, mass in evidence.items()
            ],
        }
    return round_floats(body)


def _number(item: Dict[str, Any], key: str, where: str, path: Optional[str]) -> float:
    if key not in item:
        raise EvidenceFormatError(f"{where}: missing key '{key}'", path)
    value = item[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvidenceFormatError(f"{where}: '{key}' must be a number, got {value!r}", path)
    if not math.isfinite(value):
        raise EvidenceFormatError(f"{where}: '{key}' must be finite", path)
    return float(value)


def _label_index(frame: Frame, label: Any, where: str, path: Optional[str]) -> int:
    if not isinstance(label, str):
        raise EvidenceFormatError(f"{where}: labels must be strings, got {label!r}", path)
    try:
        return frame.index(label)
    except KeyError:
        raise EvidenceFormatError(
            f"{where}: label {label!r} is not part of the frame", path
        ) from None


def _detect_kind(item: Dict[str, Any], where: str, path: Optional[str]) -> str:
    if "focal" in item:
        return GENERAL
    if "a1" in item:
        return TRIPLET
    if "focus" in item:
        return DICHOTOMOUS
    raise EvidenceFormatError(
        f"{where}: cannot tell the evidence kind, expected one of the keys "
        "'focal', 'a1' or 'focus'",
        path,
    )


def _parse_item(
    item: Dict[str, Any], kind: str, frame: Frame, where: str, path: Optional[str]
) -> Evidence:
    if kind == TRIPLET:
        a1 = _label_index(frame, item["a1"], where, path)
        if "a2" not in item:
            raise EvidenceFormatError(f"{where}: missing key 'a2'", path)
        a2 = _label_index(frame, item["a2"], where, path)
        return TripletMass.from_masses(
            frame,
            a1,
            a2,
            _number(item, "m1", where, path),
            _number(item, "m2", where, path),
        )

    if kind == DICHOTOMOUS:
        focus = _label_index(frame, item["focus"], where, path)
        return DichotomousMass.from_pc(
            frame, focus, _number(item, "p", where, path), _number(item, "c", where, path)
        )

    focal_list = item["focal"]
    if not isinstance(focal_list, list):
        raise EvidenceFormatError(f"{where}: 'focal' must be a list", path)
    focal: Dict[int, float] = {}
    for j, entry in enumerate(focal_list):
        entry_where = f"{where}, focal element {j}"
        if not isinstance(entry, dict) or not isinstance(entry.get("set"), list):
            raise EvidenceFormatError(
                f"{entry_where}: expected an object with a 'set' list", path
            )
        mask = 0
        for label in entry["set"]:
            mask |= 1 << _label_index(frame, label, entry_where, path)
        focal[mask] = focal.get(mask, 0.0) + _number(entry, "mass", entry_where, path)
    return MassFunction(frame, focal)


def parse_evidence(
    document: Any, path: Optional[str] = None
) -> Tuple[str, Frame, List[Evidence]]:
    """
    Builds evidence from a decoded evidence file.

    Args:
        * document (Any): a single evidence object or a list of them
        * path (Optional[str]): file name used in error messages
    Returns:
        * str: the kind shared by every item ('general', 'triplet' or 'dichotomous')
        * Frame: the frame shared by every item
        * List[Evidence]: the evidence, in file order
    """
    items = document if isinstance(document, list) else [document]
    if len(items) == 0:
        raise EvidenceFormatError("the file holds no evidence", path)

    kind: Optional[str] = None
    frame: Optional[Frame] = None
    evidence: List[Evidence] = []
    for i, item in enumerate(items):
        where = f"item {i}"
        if not isinstance(item, dict):
            raise EvidenceFormatError(f"{where}: expected an object", path)
        labels = item.get("frame")
        if not isinstance(labels, list):
            raise EvidenceFormatError(f"{where}: missing 'frame' label list", path)

        if frame is None:
            try:
                frame = make_frame(labels)
            except FrameError as err:
                raise type(err)(f"{path or '<input>'}: {where}: {err}") from err
        elif list(frame.labels) != labels:
            raise FrameMismatchError(
                f"{path or '<input>'}: {where}: frame {labels} differs from "
                f"{list(frame.labels)} of item 0"
            )

        item_kind = _detect_kind(item, where, path)
        if kind is None:
            kind = item_kind
        elif item_kind != kind:
            raise EvidenceFormatError(
                f"{where}: {item_kind} evidence mixed with {kind} evidence", path
            )

        try:
            evidence.append(_parse_item(item, item_kind, frame, where, path))
        except EvidenceFormatError:
            raise
        except EvidenceError as err:
            raise type(err)(f"{path or '<input>'}: {where}: {err}") from err

    assert kind is not None and frame is not None
    return kind, frame, evidence


def load_evidence(path: str) -> Tuple[str, Frame, List[Evidence]]:
    """Reads an evidence file (see parse_evidence)."""
    try:
        with open(path) as f:
            document = json.load(f)
    except json.JSONDecodeError as err:
        raise EvidenceFormatError(err.msg, path, err.lineno) from err
    except OSError as err:
        raise EvidenceFormatError(f"cannot read file ({err.strerror})", path) from err
    return parse_evidence(document, path)


### --- Score matrices and labels --- ###


def _read_raw_csv(path: str) -> pd.DataFrame:
    try:
        raw = pd.read_csv(
            path, header=None, dtype=str, keep_default_na=False, skip_blank_lines=False
        )
    except pd.errors.EmptyDataError as err:
        raise EvidenceFormatError("the file is empty", path, 1) from err
    except pd.errors.ParserError as err:
        raise EvidenceFormatError(str(err).strip(), path) from err
    except OSError as err:
        raise EvidenceFormatError(f"cannot read file ({err.strerror})", path) from err

    # the index keeps the file line of every row, blank lines included
    raw = raw.fillna("")
    return raw[(raw != "").any(axis=1)]


def load_score_matrix(path: str) -> ScoreMatrix:
    """
    Reads a long-form score CSV with header item,classifier,<cat1>,...,<catk>.

    Every (item, classifier) pair appears on exactly one row and every item carries the same
    classifiers. Errors name the offending line.
    """
    raw = _read_raw_csv(path)
    header = [str(name).strip() for name in raw.iloc[0].tolist()]
    if header[:2] != ["item", "classifier"] or len(header) < 4:
        raise EvidenceFormatError(
            "header must be item,classifier followed by at least two categories", path, 1
        )
    try:
        categories = make_frame(header[2:])
    except FrameError as err:
        raise EvidenceFormatError(f"bad category list: {err}", path, 1) from err

    body = raw.iloc[1:]
    if body.empty:
        raise EvidenceFormatError("no score rows", path, 2)

    score_text = body.iloc[:, 2:]
    scores = score_text.apply(lambda column: pd.to_numeric(column, errors="coerce"))

    rows: Dict[Tuple[str, str], Tuple[int, np.ndarray]] = {}
    item_order: Dict[str, int] = {}
    classifier_order: Dict[str, int] = {}
    item_classifiers: Dict[str, List[str]] = {}
    for position, (row_index, row) in enumerate(body.iterrows()):
        line = int(row_index) + 1
        item, classifier = row.iloc[0].strip(), row.iloc[1].strip()
        if not item or not classifier:
            raise EvidenceFormatError("empty item or classifier id", path, line)
        values = scores.iloc[position].to_numpy(dtype=np.float64)
        if np.isnan(values).any():
            raise EvidenceFormatError(
                f"expected {categories.size} numeric scores", path, line
            )
        if not np.isfinite(values).all() or (values < 0).any():
            raise EvidenceFormatError("scores must be finite and non-negative", path, line)
        if values.sum() <= 0.0:
            raise EvidenceFormatError("all-zero score vector", path, line)
        if (item, classifier) in rows:
            raise EvidenceFormatError(
                f"duplicate row for item {item!r} and classifier {classifier!r}", path, line
            )
        rows[(item, classifier)] = (line, values)
        item_order.setdefault(item, len(item_order))
        classifier_order.setdefault(classifier, len(classifier_order))
        item_classifiers.setdefault(item, []).append(classifier)

    classifier_ids = list(classifier_order)
    expected = set(classifier_ids)
    for item, classifiers in item_classifiers.items():
        if set(classifiers) != expected:
            first_line = rows[(item, classifiers[0])][0]
            missing = sorted(expected - set(classifiers))
            raise EvidenceFormatError(
                f"item {item!r} lacks scores from classifiers {missing}", path, first_line
            )

    item_ids = list(item_order)
    array = np.empty((len(item_ids), len(classifier_ids), categories.size))
    for (item, classifier), (_, values) in rows.items():
        array[item_order[item], classifier_order[classifier]] = values
    return ScoreMatrix(categories, item_ids, classifier_ids, array)


def load_labels(path: str) -> Dict[str, str]:
    """Reads a CSV with header item,label into a mapping from item id to category label."""
    raw = _read_raw_csv(path)
    header = [str(name).strip() for name in raw.iloc[0].tolist()]
    if header[:2] != ["item", "label"]:
        raise EvidenceFormatError("header must be item,label", path, 1)

    labels: Dict[str, str] = {}
    for row_index, row in raw.iloc[1:].iterrows():
        line = int(row_index) + 1
        item, label = row.iloc[0].strip(), row.iloc[1].strip()
        if not item or not label:
            raise EvidenceFormatError("empty item or label", path, line)
        if item in labels:
            raise EvidenceFormatError(f"duplicate label for item {item!r}", path, line)
        labels[item] = label
    return labels


def score_matrix_to_frame(matrix: ScoreMatrix) -> pd.DataFrame:
    """Long-form table of a score matrix, the layout load_score_matrix reads."""
    n, c, k = matrix.scores.shape
    table = pd.DataFrame(
        matrix.scores.reshape(n * c, k), columns=list(matrix.categories.labels)
    )
    table.insert(0, "classifier", [cid for _ in range(n) for cid in matrix.classifier_ids])
    table.insert(0, "item", [item for item in matrix.item_ids for _ in range(c)])
    return table


def write_score_matrix(matrix: ScoreMatrix, path: str) -> None:
    score_matrix_to_frame(matrix).to_csv(path, index=False, float_format="%.12g")


def write_labels(labels: Dict[str, str], path: str) -> None:
    pd.DataFrame({"item": list(labels), "label": list(labels.values())}).to_csv(
        path, index=False
    )


def write_csv(table: pd.DataFrame, path: str, columns: Optional[Sequence[str]] = None) -> None:
    table.to_csv(path, index=False, columns=columns, float_format="%.12g")
