"""Measurement file format: a JSON document describing POVM elements either by
raw amplitudes or by a pair of polarization directions.

Format (version 1, frozen):

    {
      "version": 1,
      "elements": [
        {"weight": 1.0, "amplitudes": [re0, im0, re1, im1, re2, im2, re3, im3]},
        {"weight": 1.0,
         "first": {"theta": 0.0, "phi": 0.0},
         "second": {"theta": 1.5707963267948966, "phi": 0.0}}
      ]
    }

Amplitudes are real/imaginary interleaved in the fixed basis order
|z z>, |z -z>, |-z z>, |-z -z>; all angles are radians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .geometry import SphericalDirection, TwoQubitState
from .povm import Povm, PovmElement, ProductElement

__all__ = [
    "FORMAT_VERSION",
    "MeasurementFileError",
    "LoadedMeasurement",
    "load_measurement",
    "save_measurement",
    "measurement_to_dict",
]

FORMAT_VERSION = 1

# Amplitude records farther from unit norm than this are rejected outright.
_NORM_REJECT = 1e-6
# Closer than this to unit norm, amplitudes are taken verbatim (bit-exact round trips).
_NORM_KEEP = 1e-12
# Renormalizations beyond this deviation are reported as warnings.
_NORM_WARN = 1e-9


class MeasurementFileError(ValueError):
    """The file does not describe a loadable measurement."""


@dataclass(frozen=True)
class LoadedMeasurement:
    """POVM parsed from a file, plus what is known about each element's product form.

    ``product_form`` has one entry per element: the direction pair for elements
    given as directions, None for elements given as amplitudes.
    """

    povm: Povm
    product_form: tuple[Optional[ProductElement], ...]
    warnings: tuple[str, ...] = field(default=())


def _parse_direction(obj, where: str) -> SphericalDirection:
    if not isinstance(obj, dict) or set(obj) != {"theta", "phi"}:
        raise MeasurementFileError(f"{where} must be an object with 'theta' and 'phi'")
    try:
        return SphericalDirection(float(obj["theta"]), float(obj["phi"]))
    except (TypeError, ValueError) as exc:
        raise MeasurementFileError(f"{where}: {exc}") from exc


def _parse_element(record, index: int, warnings: list[str]):
    where = f"elements[{index}]"
    if not isinstance(record, dict):
        raise MeasurementFileError(f"{where} must be an object")
    try:
        weight = float(record["weight"])
    except (KeyError, TypeError, ValueError):
        raise MeasurementFileError(f"{where} needs a numeric 'weight'") from None
    if not (weight > 0.0) or not math.isfinite(weight):
        raise MeasurementFileError(f"{where}: weight must be positive, got {weight!r}")

    if "amplitudes" in record:
        raw = record["amplitudes"]
        if not isinstance(raw, list) or len(raw) != 8:
            raise MeasurementFileError(
                f"{where}: 'amplitudes' must list 8 numbers (re/im interleaved)"
            )
        try:
            flat = np.array([float(v) for v in raw], dtype=float)
        except (TypeError, ValueError):
            raise MeasurementFileError(f"{where}: amplitudes must be numbers") from None
        amps = flat[0::2] + 1j * flat[1::2]
        norm = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
        deviation = abs(norm - 1.0)
        if deviation > _NORM_REJECT:
            raise MeasurementFileError(
                f"{where}: amplitude norm {norm!r} deviates from 1 by more than {_NORM_REJECT}"
            )
        if deviation > _NORM_KEEP:
            amps = amps / norm
            if deviation > _NORM_WARN:
                warnings.append(
                    f"{where}: renormalized amplitudes (norm deviation {deviation:.3e})"
                )
        return PovmElement(weight, TwoQubitState(amps)), None

    if "first" in record and "second" in record:
        first = _parse_direction(record["first"], f"{where}.first")
        second = _parse_direction(record["second"], f"{where}.second")
        product = ProductElement(weight, first, second)
        return product.to_povm_element(), product

    raise MeasurementFileError(
        f"{where} must carry either 'amplitudes' or both 'first' and 'second'"
    )


def load_measurement(path: Union[str, Path]) -> LoadedMeasurement:
    """Parse a measurement file.  Raises MeasurementFileError on any defect."""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise MeasurementFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MeasurementFileError(f"{path} is not valid JSON: {exc}") from exc

    if not isinstance(document, dict):
        raise MeasurementFileError("top level must be an object")
    version = document.get("version")
    if version != FORMAT_VERSION:
        raise MeasurementFileError(
            f"unsupported file version {version!r}; this reader handles version {FORMAT_VERSION}"
        )
    records = document.get("elements")
    if not isinstance(records, list) or not records:
        raise MeasurementFileError("'elements' must be a non-empty list")

    warnings: list[str] = []
    elements = []
    product_form = []
    for index, record in enumerate(records):
        element, product = _parse_element(record, index, warnings)
        elements.append(element)
        product_form.append(product)
    return LoadedMeasurement(
        povm=Povm(tuple(elements)),
        product_form=tuple(product_form),
        warnings=tuple(warnings),
    )


def measurement_to_dict(povm: Povm) -> dict:
    """Serializable document for ``povm``, with amplitudes written exactly."""
    elements = []
    for element in povm.elements:
        amps = element.state.as_array()
        interleaved: list[float] = []
        for value in amps:
            interleaved.extend((float(value.real), float(value.imag)))
        elements.append({"weight": element.weight, "amplitudes": interleaved})
    return {"version": FORMAT_VERSION, "elements": elements}


def save_measurement(path: Union[str, Path], povm: Povm) -> None:
    """Write ``povm`` as a version-1 measurement file (UTF-8, LF line endings)."""
    document = measurement_to_dict(povm)
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
