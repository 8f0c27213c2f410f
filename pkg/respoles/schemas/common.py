import cmath
from typing import Annotated, Any

import numpy as np
from pydantic import PlainSerializer, PlainValidator, WithJsonSchema


def _to_complex(value: Any) -> complex:
    if isinstance(value, dict):
        value = complex(float(value["re"]), float(value["im"]))
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    elif isinstance(value, (int, float, complex, np.number)):
        value = complex(value)
    else:
        raise ValueError(f"cannot interpret {value!r} as a complex number")
    if not cmath.isfinite(value):
        raise ValueError("complex value must be finite")
    return value


def _to_float_array(value: Any) -> np.ndarray:
    array = np.asarray(value, dtype=float)
    if array.ndim != 1:
        raise ValueError("expected a one-dimensional array")
    if not np.all(np.isfinite(array)):
        raise ValueError("array entries must be finite")
    return array


def _to_complex_array(value: Any) -> np.ndarray:
    if isinstance(value, dict):
        value = np.asarray(value["re"], dtype=float) + 1j * np.asarray(value["im"], dtype=float)
    array = np.asarray(value, dtype=complex)
    if array.ndim != 1:
        raise ValueError("expected a one-dimensional array")
    if not np.all(np.isfinite(array)):
        raise ValueError("array entries must be finite")
    return array


# Complex scalars travel as {"re": ..., "im": ...} in JSON.
ComplexValue = Annotated[
    complex,
    PlainValidator(_to_complex),
    PlainSerializer(lambda z: {"re": z.real, "im": z.imag}, when_used="json"),
    WithJsonSchema(
        {
            "type": "object",
            "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
            "required": ["re", "im"],
        }
    ),
]

FloatArray = Annotated[
    np.ndarray,
    PlainValidator(_to_float_array),
    PlainSerializer(lambda a: a.tolist(), when_used="json"),
    WithJsonSchema({"type": "array", "items": {"type": "number"}}),
]

ComplexArray = Annotated[
    np.ndarray,
    PlainValidator(_to_complex_array),
    PlainSerializer(
        lambda a: {"re": a.real.tolist(), "im": a.imag.tolist()}, when_used="json"
    ),
    WithJsonSchema(
        {
            "type": "object",
            "properties": {
                "re": {"type": "array", "items": {"type": "number"}},
                "im": {"type": "array", "items": {"type": "number"}},
            },
        }
    ),
]
