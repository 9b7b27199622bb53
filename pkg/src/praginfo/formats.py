"""JSON documents for distributions, ensembles and joint ensembles.

Distribution::

    [0.5, 0.25, 0.25]

Ensemble::

    {"prior": [...],
     "messages": [{"label": "...", "prob": x, "posterior": [...]}, ...]}

Each message may also carry ``"usefulness"`` (irrelevant / disinformative
/ useful).

Joint ensemble (row-major matrices, keys ``"<m>,<m'>"``)::

    {"joint_prior": [[...]], "message_probs": [[...]],
     "posteriors": {"0,0": [[...]], ...}}
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .dist import Dist, Prior
from .errors import DistributionError, ParseError, SchemaError
from .pragmatic import JointEnsemble, MessageEnsemble, Usefulness

PathLike = Union[str, Path]


def read_json(path: PathLike) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    return parse_json(text, str(path))


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(source, exc.lineno, exc.colno, exc.msg) from None


def digest(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _number_list(obj, what: str) -> list[float]:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{what} must be a non-empty JSON array of numbers")
    for x in obj:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise SchemaError(f"{what} contains a non-number: {x!r}")
    return [float(x) for x in obj]


def _matrix(obj, what: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{what} must be a non-empty array of rows")
    rows = [_number_list(r, f"{what} row {k}") for k, r in enumerate(obj)]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError(f"{what} rows have different lengths")
    return np.array(rows)


def dist_from_json(obj, what: str = "distribution") -> Dist:
    return Dist(_number_list(obj, what))


def load_dist(path: PathLike) -> Dist:
    return dist_from_json(read_json(path), str(path))


def load_prior(path: PathLike) -> Prior:
    return Prior(_number_list(read_json(path), str(path)))


def ensemble_from_dict(doc) -> tuple[MessageEnsemble, Optional[list[Usefulness]]]:
    """Build an ensemble; also return usefulness labels if every message has one."""
    if not isinstance(doc, dict):
        raise SchemaError("ensemble document must be a JSON object")
    for key in ("prior", "messages"):
        if key not in doc:
            raise SchemaError(f"ensemble document is missing {key!r}")
    msgs = doc["messages"]
    if not isinstance(msgs, list) or not msgs:
        raise SchemaError("'messages' must be a non-empty array")
    probs, posts, labels, useful = [], [], [], []
    for k, m in enumerate(msgs):
        if not isinstance(m, dict) or "prob" not in m or "posterior" not in m:
            raise SchemaError(f"message {k} needs 'prob' and 'posterior'")
        p = m["prob"]
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise SchemaError(f"message {k} has non-numeric 'prob'")
        probs.append(float(p))
        posts.append(_number_list(m["posterior"], f"message {k} posterior"))
        labels.append(str(m.get("label", f"m{k}")))
        if "usefulness" in m:
            useful.append(Usefulness.parse(m["usefulness"]))
    if useful and len(useful) != len(msgs):
        raise SchemaError("either every message carries 'usefulness' or none does")
    e = MessageEnsemble.from_arrays(_number_list(doc["prior"], "prior"), probs, posts, labels)
    return e, (useful or None)


def ensemble_to_dict(e: MessageEnsemble, usefulness=None) -> dict:
    labels = e.labels or tuple(f"m{k}" for k in range(e.n_messages))
    msgs = []
    for k in range(e.n_messages):
        entry = {"label": labels[k], "prob": e.message_probs[k], "posterior": e.posteriors[k].tolist()}
        if usefulness is not None:
            entry["usefulness"] = Usefulness.parse(usefulness[k]).value
        msgs.append(entry)
    return {"prior": e.prior.tolist(), "messages": msgs}


def load_ensemble(path: PathLike) -> tuple[MessageEnsemble, Optional[list[Usefulness]]]:
    return ensemble_from_dict(read_json(path))


def joint_from_dict(doc) -> JointEnsemble:
    if not isinstance(doc, dict):
        raise SchemaError("joint ensemble document must be a JSON object")
    for key in ("joint_prior", "message_probs", "posteriors"):
        if key not in doc:
            raise SchemaError(f"joint ensemble document is missing {key!r}")
    q = _matrix(doc["joint_prior"], "joint_prior")
    phi = _matrix(doc["message_probs"], "message_probs")
    raw = doc["posteriors"]
    if not isinstance(raw, dict):
        raise SchemaError("'posteriors' must be an object keyed by \"m,m'\"")
    post = np.full(phi.shape + q.shape, np.nan)
    for key, mat in raw.items():
        try:
            m, mp = (int(x) for x in key.split(","))
        except ValueError:
            raise SchemaError(f"bad posterior key {key!r}; expected \"<m>,<m'>\"") from None
        if not (0 <= m < phi.shape[0] and 0 <= mp < phi.shape[1]):
            raise SchemaError(f"posterior key {key!r} out of range for message_probs shape {phi.shape}")
        arr = _matrix(mat, f"posterior {key}")
        if arr.shape != q.shape:
            raise SchemaError(f"posterior {key} has shape {arr.shape}, joint prior has {q.shape}")
        post[m, mp] = arr
    missing = [f"{m},{mp}" for m, mp in np.ndindex(*phi.shape) if np.isnan(post[m, mp]).any()]
    if missing:
        raise SchemaError(f"missing posteriors for message pairs {missing}")
    try:
        return JointEnsemble(q, phi, post)
    except DistributionError as exc:
        raise SchemaError(str(exc)) from None


def joint_to_dict(j: JointEnsemble) -> dict:
    return {
        "joint_prior": j.joint_prior.tolist(),
        "message_probs": j.message_probs.tolist(),
        "posteriors": {
            f"{m},{mp}": j.posteriors[m, mp].tolist() for m, mp in np.ndindex(*j.message_probs.shape)
        },
    }


def load_joint(path: PathLike) -> JointEnsemble:
    return joint_from_dict(read_json(path))


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture, e.g. ``"boolean_joint.json"``."""
    return Path(str(resources.files("praginfo") / "fixtures" / name))


def boolean_joint() -> JointEnsemble:
    """Two Boolean decision makers with ``omega = M`` and ``omega' = M and M'``."""
    return load_joint(fixture_path("boolean_joint.json"))


def boolean_delta_prime() -> MessageEnsemble:
    return load_ensemble(fixture_path("boolean_delta_prime.json"))[0]
