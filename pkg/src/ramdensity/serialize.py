"""JSON/CSV helpers shared by reports and the CLI."""

import csv
import io
import json
from fractions import Fraction

JSON_SAFE_INT = 2**53


def json_int(x: int):
    """Integers beyond double precision are emitted as strings."""
    x = int(x)
    return x if -JSON_SAFE_INT < x < JSON_SAFE_INT else str(x)


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return json_int(obj)
    if isinstance(obj, Fraction):
        return {"num": json_int(obj.numerator), "den": json_int(obj.denominator)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


def csv_text(columns, rows, header: dict = None) -> str:
    """CSV with an optional leading ``# config: {...}`` comment line."""
    buf = io.StringIO()
    if header is not None:
        buf.write("# config: " + json.dumps(jsonable(header), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if v is None else v for v in r])
    return buf.getvalue()
