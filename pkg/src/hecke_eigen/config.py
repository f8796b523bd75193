"""Run configuration: JSON in, validated dataclass out."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .exact import ExactMatrix, ExactScalar

SCENARIOS = ("gl1", "gagm", "classify", "selftest")
EXPECTATIONS = ("isomorphic", "not_isomorphic", "report_only")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"
        self.message = message


@dataclass(frozen=True)
class RunConfig:
    genus: int
    scenario: str
    mult: tuple[ExactScalar, ...] | None = None
    add: tuple[ExactScalar, ...] | None = None
    images: tuple[ExactMatrix, ...] | None = None
    window: tuple[int, int] | None = None
    seed: int = 0
    out: str | None = None
    expect: str = "report_only"

    @property
    def effective_window(self) -> tuple[int, int]:
        return self.window if self.window is not None else (-2, 2 * self.genus + 2)

    def echo(self) -> dict:
        """The config as recorded in reports; the output path does not affect results."""
        d = self.to_json()
        d.pop("out", None)
        return d

    def to_json(self) -> dict:
        d: dict[str, Any] = {"genus": self.genus, "scenario": self.scenario}
        if self.mult is not None:
            d["mult"] = [v.to_json() for v in self.mult]
        if self.add is not None:
            d["add"] = [v.to_json() for v in self.add]
        if self.images is not None:
            d["images"] = [m.to_json() for m in self.images]
        if self.window is not None:
            d["window"] = list(self.window)
        d["seed"] = self.seed
        if self.out is not None:
            d["out"] = self.out
        d["expect"] = self.expect
        return d


def _int(x, path: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ConfigError(path, f"expected an integer, got {x!r}")
    return x


def _scalar(x, path: str) -> ExactScalar:
    try:
        return ExactScalar.from_json(x) if isinstance(x, list) else ExactScalar.coerce(_int(x, path))
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None


def _scalar_list(xs, path: str, length: int) -> tuple[ExactScalar, ...]:
    if not isinstance(xs, list):
        raise ConfigError(path, "expected a list of scalars")
    if len(xs) != length:
        raise ConfigError(path, f"expected {length} values (2 * genus), got {len(xs)}")
    return tuple(_scalar(x, f"{path}/{i}") for i, x in enumerate(xs))


def _matrix(x, path: str) -> ExactMatrix:
    if not isinstance(x, list) or len(x) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in x):
        raise ConfigError(path, "expected a 2x2 matrix of scalars")
    return ExactMatrix(tuple(tuple(_scalar(v, f"{path}/{i}/{j}") for j, v in enumerate(r)) for i, r in enumerate(x)))


def config_from_dict(data: Any, scenario: str | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("/", "config must be a JSON object")
    known = {"genus", "scenario", "mult", "add", "images", "window", "seed", "out", "expect"}
    for k in data:
        if k not in known:
            raise ConfigError(f"/{k}", "unknown field")

    sc = data.get("scenario", scenario)
    if sc is None:
        raise ConfigError("/scenario", "missing")
    if sc not in SCENARIOS:
        raise ConfigError("/scenario", f"must be one of {', '.join(SCENARIOS)}")
    if scenario is not None and sc != scenario:
        raise ConfigError("/scenario", f"config is for {sc!r} but the command runs {scenario!r}")

    if "genus" in data:
        genus = _int(data["genus"], "/genus")
    elif sc == "selftest":
        genus = 1
    else:
        raise ConfigError("/genus", "missing")
    if genus < 1:
        raise ConfigError("/genus", "must be >= 1")

    mult = add = images = None
    if "mult" in data:
        mult = _scalar_list(data["mult"], "/mult", 2 * genus)
        for i, v in enumerate(mult):
            if v.is_zero():
                raise ConfigError(f"/mult/{i}", "multiplicative values must be nonzero")
    if "add" in data:
        add = _scalar_list(data["add"], "/add", 2 * genus)
    if "images" in data:
        imgs = data["images"]
        if not isinstance(imgs, list) or len(imgs) != 2 * genus:
            raise ConfigError("/images", f"expected {2 * genus} generator images")
        images = tuple(_matrix(m, f"/images/{i}") for i, m in enumerate(imgs))
        for i, m in enumerate(images):
            if not m.is_invertible():
                raise ConfigError(f"/images/{i}", "generator image is singular")

    if sc == "gl1" and mult is None:
        raise ConfigError("/mult", "gl1 needs the character values")
    if sc == "classify" and images is None:
        raise ConfigError("/images", "classify needs generator images")

    window = None
    if "window" in data:
        w = data["window"]
        if not isinstance(w, list) or len(w) != 2:
            raise ConfigError("/window", "expected [lo, hi]")
        lo, hi = _int(w[0], "/window/0"), _int(w[1], "/window/1")
        if lo > hi:
            raise ConfigError("/window", f"empty window [{lo}, {hi}]")
        window = (lo, hi)

    seed = _int(data.get("seed", 0), "/seed")
    if seed < 0 or seed >= 2**64:
        raise ConfigError("/seed", "must be an unsigned 64-bit integer")
    out = data.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("/out", "expected a path string")
    expect = data.get("expect", "report_only")
    if expect not in EXPECTATIONS:
        raise ConfigError("/expect", f"must be one of {', '.join(EXPECTATIONS)}")

    return RunConfig(genus, sc, mult, add, images, window, seed, out, expect)


def parse_config(text: str, scenario: str | None = None) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("/", f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    return config_from_dict(data, scenario)


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_json(), sort_keys=True)
