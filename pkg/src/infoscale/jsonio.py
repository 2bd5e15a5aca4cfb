"""JSON file formats for distributions, observables, chains, interactions,
and model specifications."""

from __future__ import annotations

import json
from pathlib import Path

from .divergences import DiscreteDistribution, Observable
from .errors import ParameterError
from .exact_models import Ising1DParams, Ising2DParams, MeanFieldParams, ModelSpec
from .gibbs import Interaction, SpinCluster, spin_product_cluster
from .markov import TransitionMatrix


def _load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: expected a JSON object at the top level")
    return data


def _require(data: dict, field: str, path) -> object:
    if field not in data:
        raise ParameterError(f"{path}: missing required field {field!r}")
    return data[field]


def load_distribution(path, *, renormalize: bool = False) -> DiscreteDistribution:
    """Read ``{"weights": [...]}``."""
    data = _load_json(path)
    return DiscreteDistribution(_require(data, "weights", path), renormalize=renormalize)


def load_observable(path) -> Observable:
    """Read ``{"values": [...]}``."""
    return Observable(_require(_load_json(path), "values", path))


def load_chain(path) -> TransitionMatrix:
    """Read ``{"rows": [[...], ...], "labels": [...]}`` (labels optional)."""
    data = _load_json(path)
    return TransitionMatrix(_require(data, "rows", path), labels=data.get("labels"))


def load_interaction(path) -> Interaction:
    """Read an interaction specification.

    Format: ``{"d": 1, "clusters": [{"offsets": [[0], [1]],
    "type": "pair_product", "coeff": -0.5}, ...]}``.  Cluster types
    ``pair_product``, ``field``, and ``product`` all denote
    coefficient-times-product-of-spins couplings; coefficients include the
    inverse temperature.  Optional ``"spins"`` overrides the default
    states (-1, +1).
    """
    data = _load_json(path)
    dimension = int(_require(data, "d", path))
    spins = tuple(float(s) for s in data.get("spins", (-1.0, 1.0)))
    clusters: list[SpinCluster] = []
    for i, spec in enumerate(_require(data, "clusters", path)):
        kind = spec.get("type", "product")
        if kind not in ("product", "pair_product", "field"):
            raise ParameterError(f"{path}: cluster {i} has unknown type {kind!r}")
        if "offsets" not in spec or "coeff" not in spec:
            raise ParameterError(f"{path}: cluster {i} needs 'offsets' and 'coeff'")
        clusters.append(spin_product_cluster(spec["offsets"], float(spec["coeff"])))
    return Interaction(dimension=dimension, clusters=tuple(clusters), spin_states=spins)


def model_from_dict(data: dict, source: str = "<model>") -> ModelSpec:
    kind = data.get("kind")
    try:
        if kind == "ising1d":
            return Ising1DParams(
                beta=float(data["beta"]), J=float(data.get("J", 1.0)),
                h=float(data.get("h", 0.0)),
            )
        if kind == "ising2d":
            return Ising2DParams(
                beta=float(data["beta"]), J=float(data.get("J", 1.0)),
                branch=data.get("branch", "plus"),
            )
        if kind == "meanfield":
            return MeanFieldParams(
                beta=float(data["beta"]), J=float(data.get("J", 1.0)),
                h=float(data.get("h", 0.0)), d=int(data.get("d", 1)),
                branch=data.get("branch", "upper"),
            )
    except KeyError as exc:
        raise ParameterError(f"{source}: missing model field {exc}") from exc
    raise ParameterError(
        f"{source}: model kind must be 'ising1d', 'ising2d' or 'meanfield', got {kind!r}"
    )


def load_model(path) -> ModelSpec:
    """Read a model spec like ``{"kind": "ising1d", "beta": 1.0, "J": 1.0, "h": 0.0}``."""
    return model_from_dict(_load_json(path), source=str(path))
