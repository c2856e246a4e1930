"""Plain-text run configuration: one ``key = value`` per line, ``#`` comments.

Recognised keys::

    cyclotomic_order, prime, precision
    group.family, group.rank, group.m
    params.t, params.c            (one value for every class)
    params.c.<k>                  (value on the k-th conjugacy class, 1-based)
    params.omega.<i>.<j>          (polynomial omega(d_i, d_j), i < j)
    verify.degree, verify.filtration, verify.coeff_degree, verify.samples,
    verify.param_sets, verify.max_level, verify.level_n, verify.level_m,
    verify.tower_precision
    seed, output
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .cherednik import CherednikAlgebra, DunklParams
from .refgroup import FiniteGroup, ReflectionFunction, conjugacy_classes, enumerate_reflections, make_group
from .scalars import FieldSpec, Scalar
from .tdo import NotClosed, PolyForm


class ConfigError(ValueError):
    pass


_INT_KEYS = {
    "cyclotomic_order": 1,
    "prime": 5,
    "precision": 20,
    "group.rank": 1,
    "group.m": 2,
    "verify.degree": 4,
    "verify.filtration": 2,
    "verify.coeff_degree": 2,
    "verify.samples": 20,
    "verify.param_sets": 0,
    "verify.max_level": 3,
    "verify.level_n": 1,
    "verify.level_m": 0,
    "verify.tower_precision": 4,
    "seed": 0,
}
_STR_KEYS = {"group.family": "cyclic", "params.t": "1", "params.c": None, "output": None}
_PATTERN_KEYS = (re.compile(r"params\.c\.(\d+)$"), re.compile(r"params\.omega\.(\d+)\.(\d+)$"))


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)
    source: str = "<config>"
    lines: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        if key in _INT_KEYS:
            return _INT_KEYS[key]
        return _STR_KEYS.get(key)

    def _where(self, key) -> str:
        line = self.lines.get(key)
        return f"{self.source}:{line}: " if line else f"{self.source}: "

    def error(self, key, message) -> ConfigError:
        return ConfigError(f"{self._where(key)}key {key}: {message}")

    # -- derived objects -------------------------------------------------

    def field_spec(self) -> FieldSpec:
        try:
            return FieldSpec(self["cyclotomic_order"], self["prime"], self["precision"])
        except ValueError as exc:
            raise self.error("prime", str(exc)) from None

    def group(self) -> FiniteGroup:
        try:
            return make_group(self["group.family"], self["group.rank"], self["group.m"], self["cyclotomic_order"])
        except ValueError as exc:
            key = "group.family" if "unknown family" in str(exc) else "group.rank"
            raise self.error(key, str(exc)) from None

    def scalar(self, key, text) -> Scalar:
        try:
            return Scalar.parse(text, self["cyclotomic_order"])
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(key, f"cannot parse scalar {text!r} ({exc})") from None

    def omega(self, r: int) -> PolyForm | None:
        from .serialize import parse_poly

        comps = {}
        for key, text in self.values.items():
            match = _PATTERN_KEYS[1].match(key)
            if not match:
                continue
            i, j = int(match.group(1)) - 1, int(match.group(2)) - 1
            if not (0 <= i < r and 0 <= j < r) or i == j:
                raise self.error(key, f"indices must be distinct and between 1 and {r}")
            try:
                f = parse_poly(text, r, self["cyclotomic_order"])
            except ValueError as exc:
                raise self.error(key, str(exc)) from None
            comps[(i, j)] = comps[(i, j)] + f if (i, j) in comps else f
        return PolyForm(r, 2, comps) if comps else None

    def params(self, group: FiniteGroup, check_closed: bool = True) -> DunklParams:
        classes = conjugacy_classes(group, enumerate_reflections(group))
        default = self["params.c"]
        values = [self.scalar("params.c", default) if default is not None else Scalar(0)] * len(classes)
        for key, text in self.values.items():
            match = _PATTERN_KEYS[0].match(key)
            if match:
                k = int(match.group(1))
                if not 1 <= k <= len(classes):
                    raise self.error(key, f"group has {len(classes)} conjugacy classes of reflections")
                values[k - 1] = self.scalar(key, text)
        t = self.scalar("params.t", self["params.t"])
        if not t:
            raise self.error("params.t", "t must be nonzero")
        return DunklParams(t, ReflectionFunction(classes, values), self.omega(group.r))

    def algebra(self) -> CherednikAlgebra:
        group = self.group()
        params = self.params(group)
        try:
            return CherednikAlgebra(group, params)
        except NotClosed:
            raise
        except ValueError as exc:
            raise self.error("params.omega", str(exc)) from None

    def summary(self) -> dict:
        return {k: self.values[k] for k in sorted(self.values)}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cfg = RunConfig(source=source)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        if key not in _INT_KEYS and key not in _STR_KEYS and not any(p.match(key) for p in _PATTERN_KEYS):
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in cfg.values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if key in _INT_KEYS:
            try:
                value = int(value)
            except ValueError:
                raise ConfigError(f"{source}:{lineno}: key {key}: expected an integer, got {value!r}") from None
            if value < 0:
                raise ConfigError(f"{source}:{lineno}: key {key}: must be non-negative")
        cfg.values[key] = value
        cfg.lines[key] = lineno
    return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))
