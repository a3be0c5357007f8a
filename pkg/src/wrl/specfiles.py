"""TOML channel and source description files.

Channel file::

    name = "degraded BSC pair"
    nx = 2
    ny = 2
    nz = 2
    # row x lists W(y, z | x) with y major, z minor
    kernel = [
      [0.63, 0.27, 0.07, 0.03],
      [0.07, 0.03, 0.63, 0.27],
    ]

Source file, explicit or as the biased-weights shorthand::

    alphabet = 2
    probs = [0.11, 0.89]

    [biased_example]
    n = 10        # optional where a block length is implied by the command
    alpha = 0.3
    R = 1.0       # optional where a rate is implied by the command
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .info import DiscreteDistribution, WiretapChannel
from .randomness import biased_example_source


class SpecError(ValueError):
    """A description file is malformed; the message names the offending location."""


def _load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"{path}: {exc}") from None


def _int_field(doc: dict, key: str, where: str) -> int:
    if key not in doc:
        raise SpecError(f"{where}: missing '{key}'")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise SpecError(f"{where}: '{key}' must be a positive integer, got {v!r}")
    return v


def _real_list(values, where: str) -> list[float]:
    if not isinstance(values, list):
        raise SpecError(f"{where}: expected a list of numbers")
    out = []
    for pos, v in enumerate(values, start=1):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SpecError(f"{where}, entry {pos}: not a number ({v!r})")
        if v < 0:
            raise SpecError(f"{where}, entry {pos}: negative probability {v}")
        out.append(float(v))
    return out


def parse_channel(doc: dict, where: str = "channel") -> WiretapChannel:
    nx = _int_field(doc, "nx", where)
    ny = _int_field(doc, "ny", where)
    nz = _int_field(doc, "nz", where)
    if "kernel" not in doc:
        raise SpecError(f"{where}: missing 'kernel'")
    kernel = doc["kernel"]
    if not isinstance(kernel, list) or len(kernel) != nx:
        got = len(kernel) if isinstance(kernel, list) else type(kernel).__name__
        raise SpecError(f"{where}: 'kernel' must have nx = {nx} rows, got {got}")
    rows = []
    for r, row in enumerate(kernel, start=1):
        vals = _real_list(row, f"{where}: kernel row {r}")
        if len(vals) != ny * nz:
            raise SpecError(f"{where}: kernel row {r} has {len(vals)} entries, expected ny*nz = {ny * nz}")
        total = sum(vals)
        if abs(total - 1.0) > 1e-9:
            raise SpecError(f"{where}: kernel row {r} sums to {total:.12g}, not 1")
        rows.append(vals)
    name = doc.get("name", "")
    return WiretapChannel(nx, ny, nz, rows, name=str(name))


def load_channel(path) -> WiretapChannel:
    return parse_channel(_load(path), str(path))


@dataclass(frozen=True)
class SourceSpec:
    """Either explicit probabilities or the biased-weights recipe with optional n, R."""

    probs: tuple[float, ...] | None = None
    alpha: float | None = None
    n: int | None = None
    rate: float | None = None

    @property
    def is_biased(self) -> bool:
        return self.alpha is not None

    def distribution(self, n: int | None = None, rate: float | None = None) -> DiscreteDistribution:
        if self.probs is not None:
            return DiscreteDistribution(self.probs)
        n = self.n if self.n is not None else n
        rate = self.rate if self.rate is not None else rate
        if n is None or rate is None:
            raise SpecError("biased_example needs n and R, from the file or the command line")
        try:
            return biased_example_source(n, self.alpha, rate)
        except ValueError as exc:
            raise SpecError(f"biased_example: {exc}") from None


def parse_source(doc: dict, where: str = "source") -> SourceSpec:
    if "biased_example" in doc:
        b = doc["biased_example"]
        if not isinstance(b, dict):
            raise SpecError(f"{where}: 'biased_example' must be a table")
        if "alpha" not in b:
            raise SpecError(f"{where}: biased_example is missing 'alpha'")
        alpha = b["alpha"]
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not 0 < alpha < 0.5:
            raise SpecError(f"{where}: biased_example alpha must lie in (0, 1/2), got {alpha!r}")
        n = _int_field(b, "n", f"{where}: biased_example") if "n" in b else None
        rate = b.get("R")
        if rate is not None and (isinstance(rate, bool) or not isinstance(rate, (int, float)) or rate <= 0):
            raise SpecError(f"{where}: biased_example R must be a positive number, got {rate!r}")
        return SourceSpec(alpha=float(alpha), n=n, rate=None if rate is None else float(rate))
    if "probs" not in doc:
        raise SpecError(f"{where}: expected 'probs' or a [biased_example] table")
    probs = _real_list(doc["probs"], f"{where}: probs")
    if "alphabet" in doc:
        a = _int_field(doc, "alphabet", where)
        if a != len(probs):
            raise SpecError(f"{where}: alphabet = {a} but probs has {len(probs)} entries")
    if not probs or sum(probs) <= 0:
        raise SpecError(f"{where}: probs must have positive total mass")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise SpecError(f"{where}: probs sum to {sum(probs):.12g}, not 1")
    return SourceSpec(probs=tuple(probs))


def load_source(path) -> SourceSpec:
    return parse_source(_load(path), str(path))
