"""Versioned JSON serialization for the two fitted models.

The funniness file embeds the category-defining vectors and the feature
options used at fit time, so scoring later only needs the raw lexical
resources plus this file.  Writes are deterministic (sorted keys, plain
floats) so identical fits produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classify import LogisticModel, Normalizer
from .errors import InputDataError
from .funny import CDV, FEATURE_NAMES, FunninessModel
from .gamefeatures import GAME_FEATURE_NAMES

FUNNINESS_FORMAT = "wordle-amuse/funniness-model/1"
AMUSEMENT_FORMAT = "wordle-amuse/amusement-model/1"


def _dump(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n",
                          encoding="utf-8")


def _load(path, expected_format: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{p}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict) or obj.get("format") != expected_format:
        raise InputDataError(
            f"{p}: expected a {expected_format!r} file, got format "
            f"{obj.get('format') if isinstance(obj, dict) else type(obj).__name__!r}")
    return obj


def _named(names, values) -> dict[str, float]:
    return {name: float(v) for name, v in zip(names, values)}


def _ordered(names, mapping: dict, where: str) -> np.ndarray:
    missing = [n for n in names if n not in mapping]
    if missing:
        raise InputDataError(f"{where}: missing entries for {missing}")
    return np.array([float(mapping[n]) for n in names])


def save_funniness_model(path, model: FunninessModel, *, cdvs: dict[str, CDV],
                         prob_mode: str, u_phoneme: str) -> None:
    obj = {
        "format": FUNNINESS_FORMAT,
        "feature_names": list(model.feature_names),
        "weights": _named(model.feature_names, model.weights),
        "intercept": float(model.intercept),
        "lambda": float(model.ridge_lambda),
        "normalizer": {
            "mean": _named(model.feature_names, model.normalizer.mean),
            "sd": _named(model.feature_names, model.normalizer.sd),
        },
        "cv_report": model.cv_report,
        "options": {"prob_mode": prob_mode, "u_phoneme": u_phoneme},
        "cdvs": {name: [float(x) for x in cdv.vector] for name, cdv in cdvs.items()},
        "retained_words": list(model.retained_words),
    }
    _dump(path, obj)


def load_funniness_model(path) -> tuple[FunninessModel, dict[str, CDV], dict]:
    """Returns the model, the stored CDVs, and the feature options."""
    obj = _load(path, FUNNINESS_FORMAT)
    names = tuple(obj["feature_names"])
    if names != FEATURE_NAMES:
        raise InputDataError(f"{path}: unexpected feature names {names}")
    normalizer = Normalizer(
        mean=_ordered(names, obj["normalizer"]["mean"], "normalizer mean"),
        sd=_ordered(names, obj["normalizer"]["sd"], "normalizer sd"),
        feature_names=names,
    )
    model = FunninessModel(
        feature_names=names,
        weights=_ordered(names, obj["weights"], "weights"),
        intercept=float(obj["intercept"]),
        ridge_lambda=float(obj["lambda"]),
        normalizer=normalizer,
        cv_report=dict(obj.get("cv_report", {})),
        retained_words=tuple(obj.get("retained_words", ())),
    )
    cdvs = {name: CDV(category=name, vector=np.array(vec, dtype=np.float64))
            for name, vec in obj["cdvs"].items()}
    return model, cdvs, dict(obj.get("options", {}))


def save_amusement_model(path, model: LogisticModel, normalizer: Normalizer,
                         metadata: dict | None = None) -> None:
    if tuple(model.feature_names) != tuple(normalizer.feature_names or ()):
        raise InputDataError("model and normalizer feature names disagree")
    obj = {
        "format": AMUSEMENT_FORMAT,
        "feature_names": list(model.feature_names),
        "coefficients": _named(model.feature_names, model.coef),
        "intercept": float(model.intercept),
        "l2": float(model.l2),
        "converged": bool(model.converged),
        "n_iter": int(model.n_iter),
        "log_likelihood": float(model.log_likelihood),
        "diagnostics": model.diagnostics,
        "normalizer": {
            "mean": _named(model.feature_names, normalizer.mean),
            "sd": _named(model.feature_names, normalizer.sd),
        },
        "metadata": metadata or {},
    }
    _dump(path, obj)


def load_amusement_model(path) -> tuple[LogisticModel, Normalizer, dict]:
    obj = _load(path, AMUSEMENT_FORMAT)
    names = tuple(obj["feature_names"])
    unknown = [n for n in names if n not in GAME_FEATURE_NAMES]
    if unknown:
        raise InputDataError(f"{path}: unknown feature names {unknown}")
    model = LogisticModel(
        feature_names=names,
        intercept=float(obj["intercept"]),
        coef=_ordered(names, obj["coefficients"], "coefficients"),
        l2=float(obj["l2"]),
        converged=bool(obj["converged"]),
        n_iter=int(obj["n_iter"]),
        log_likelihood=float(obj["log_likelihood"]),
        diagnostics=str(obj.get("diagnostics", "")),
    )
    normalizer = Normalizer(
        mean=_ordered(names, obj["normalizer"]["mean"], "normalizer mean"),
        sd=_ordered(names, obj["normalizer"]["sd"], "normalizer sd"),
        feature_names=names,
    )
    return model, normalizer, dict(obj.get("metadata", {}))
